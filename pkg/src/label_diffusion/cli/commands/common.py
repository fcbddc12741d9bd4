"""Dataset and checkpoint plumbing shared by several commands."""
import logging
from typing import Union

from ...data.manifest import SceneManifest, load_manifest
from ...data.splits import split_dataset
from ...denoiser.model import LabelDiffusionModel
from ...errors import DataError
from ...training.checkpoint import load_model
from ..config import RunConfig
from ..utils import require_path

logger = logging.getLogger(__name__)


def load_split(config: RunConfig, part: str, dataset: Union[str, None] = None) -> SceneManifest:
    """The ``part`` ('train', 'test' or 'all') of the configured dataset."""
    manifest = load_manifest(require_path(dataset or config.dataset, "dataset directory"))
    if len(manifest) == 0:
        raise DataError(f"Dataset {manifest.directory} contains no scenes")
    if part == "all":
        return manifest
    train, test = split_dataset(manifest, config.train_frac, config.split_seed)
    chosen = train if part == "train" else test
    logger.info(f"Using the {part} split: {len(chosen)} of {len(manifest)} scenes")
    return chosen


def load_trained_model(config: RunConfig, checkpoint: Union[str, None] = None) -> LabelDiffusionModel:
    model = load_model(require_path(checkpoint or config.checkpoint, "checkpoint"))
    model.check_ready()
    return model
