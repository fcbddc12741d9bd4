"""Language-driven segmentation as label-space diffusion.

Masks are generated from noise by a phrase- and image-conditioned
diffusion model running over 8x downsampled label latents, then decoded
to full resolution. The package also ships the synthetic shapes benchmark
and Average Recall metrics used to train and evaluate such models.
"""
import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .denoiser.model import LabelDiffusionModel
from .errors import LabelDiffusionError, ModelError
from .evaluation.metrics import subcategory_report
from .evaluation.runner import EvalSettings, evaluate_scenes
from .models.codec import DecodeKind, DecodeStrategy
from .models.config import DenoiserConfig, ModelConfig, TrainConfig
from .models.diffusion import GuidanceConfig, SamplerKind, ScheduleKind
from .models.evaluation import ARReport, EvalRecord, ThresholdGrid
from .models.scene import Scene, SceneSpec
from .sampling.sampler import SampleRequest, sample_batch
from .training.checkpoint import load_model

# Configure a NullHandler for the library's root logger so nothing reaches the console by default.
# Applications using this library should configure their own logging if they wish to see library logs.
logging.getLogger('label_diffusion').addHandler(logging.NullHandler())

logger = logging.getLogger(__name__)


__all__ = [
    "ARReport",
    "DecodeKind",
    "DecodeStrategy",
    "DenoiserConfig",
    "EvalRecord",
    "GuidanceConfig",
    "LabelDiffusion",
    "LabelDiffusionError",
    "LabelDiffusionModel",
    "ModelConfig",
    "SamplerKind",
    "Scene",
    "SceneSpec",
    "ScheduleKind",
    "ThresholdGrid",
    "TrainConfig",
]


class LabelDiffusion:
    """Main interface for segmenting images with a trained model"""

    def __init__(
        self,
        model: Optional[LabelDiffusionModel] = None,
        checkpoint: Optional[Union[str, Path]] = None,
        guidance: Optional[GuidanceConfig] = None,
        decode: Optional[DecodeStrategy] = None,
        grid: Optional[ThresholdGrid] = None,
    ):
        """Wrap an in-memory ``model`` or a ``checkpoint`` path loaded on entering the context."""
        if model is None and checkpoint is None:
            raise ModelError("LabelDiffusion needs a model or a checkpoint path")
        self.model = model
        self.checkpoint = Path(checkpoint) if checkpoint is not None else None
        self.guidance = guidance or GuidanceConfig()
        self.decode = decode or DecodeStrategy()
        self.grid = grid or ThresholdGrid.uniform()
        self._owns_model = model is None

    def __enter__(self):
        if self.model is None:
            logger.info(f"Entering LabelDiffusion context, loading {self.checkpoint}")
            self.model = load_model(self.checkpoint)
        self.model.check_ready()
        self.model.eval()
        return self

    def __exit__(self, exc_type, exc_val, _exc_tb):
        if self._owns_model:
            self.model = None
        if exc_type:
            logger.error(f"LabelDiffusion context exited with exception: {exc_type.__name__}: {exc_val}")

    def _require_model(self) -> LabelDiffusionModel:
        if self.model is None:
            raise ModelError("No model loaded; use LabelDiffusion as a context manager")
        return self.model

    def segment(self, image: np.ndarray, phrase: str, seed: int = 0) -> np.ndarray:
        """Binary mask of ``phrase`` in ``image``."""
        return self.segment_phrases(image, [phrase], seed)[0]

    def segment_phrases(self, image: np.ndarray, phrases: Sequence[str], seed: int = 0) -> List[np.ndarray]:
        """One independent generation per phrase; phrase ``i`` uses ``seed + i``."""
        requests = [
            SampleRequest(image=image, phrase=p, guidance=self.guidance, decode=self.decode, seed=seed + i)
            for i, p in enumerate(phrases)
        ]
        return sample_batch(requests, self._require_model())

    def evaluate(
        self,
        scenes: Iterable[Scene],
        batch_size: int = 16,
        workers: int = 0,
        seed: int = 0,
    ) -> Tuple[List[EvalRecord], ARReport]:
        settings = EvalSettings(self.guidance, self.decode, batch_size, workers, seed)
        records = evaluate_scenes(scenes, self._require_model(), settings)
        return records, subcategory_report(records, self.grid)
