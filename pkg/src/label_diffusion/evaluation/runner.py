import logging
from collections import deque
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass
from typing import Deque, Iterable, Iterator, List, Optional, Tuple

from ..denoiser.model import LabelDiffusionModel
from ..models.codec import DecodeStrategy
from ..models.diffusion import GuidanceConfig
from ..models.evaluation import EvalRecord
from ..models.scene import PhraseAnnotation, Scene
from ..sampling.sampler import SampleRequest, sample_batch
from .metrics import iou

logger = logging.getLogger(__name__)

IN_FLIGHT_PER_WORKER = 2


@dataclass(frozen=True)
class EvalSettings:
    guidance: GuidanceConfig = GuidanceConfig()
    decode: DecodeStrategy = DecodeStrategy()
    batch_size: int = 16
    workers: int = 0
    seed: int = 0


_Item = Tuple[str, PhraseAnnotation, SampleRequest]


def _phrase_items(scenes: Iterable[Scene], settings: EvalSettings) -> Iterator[_Item]:
    counter = 0
    for scene_index, scene in enumerate(scenes):
        for k, phrase in enumerate(scene.phrases):
            request = SampleRequest(
                image=scene.image,
                phrase=phrase.text,
                guidance=settings.guidance,
                decode=settings.decode,
                seed=settings.seed + counter,
            )
            counter += 1
            yield f"{scene_index:04d}_{k}", phrase, request


def _batches(items: Iterable[_Item], batch_size: int) -> Iterator[List[_Item]]:
    batch: List[_Item] = []
    for item in items:
        if batch and (len(batch) == batch_size or item[2].size != batch[0][2].size):
            yield batch
            batch = []
        batch.append(item)
    if batch:
        yield batch


def _windowed(pool: ThreadPoolExecutor, run, batches: Iterable[List[_Item]], window: int) -> Iterator[List[EvalRecord]]:
    """Results in submission order with at most ``window`` batches in flight."""
    pending: Deque[Future] = deque()
    for batch in batches:
        pending.append(pool.submit(run, batch))
        if len(pending) >= window:
            yield pending.popleft().result()
    while pending:
        yield pending.popleft().result()


def evaluate_scenes(
    scenes: Iterable[Scene],
    model: LabelDiffusionModel,
    settings: Optional[EvalSettings] = None,
    allow_untrained: bool = False,
) -> List[EvalRecord]:
    """Sample a mask for every phrase and score it against the ground truth.

    Records come back in scene/phrase order whatever the worker count.
    """
    settings = settings or EvalSettings()
    model.check_ready(allow_untrained=allow_untrained)
    model.eval()

    def run(batch: List[_Item]) -> List[EvalRecord]:
        masks = sample_batch([item[2] for item in batch], model, allow_untrained=allow_untrained)
        return [
            EvalRecord(phrase_id, iou(mask, phrase.mask), phrase.thing_stuff, phrase.number)
            for (phrase_id, phrase, _), mask in zip(batch, masks)
        ]

    batches = _batches(_phrase_items(scenes, settings), settings.batch_size)
    records: List[EvalRecord] = []
    if settings.workers > 0:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            for chunk in _windowed(pool, run, batches, IN_FLIGHT_PER_WORKER * settings.workers):
                records.extend(chunk)
    else:
        for batch in batches:
            records.extend(run(batch))
    logger.info(f"Evaluated {len(records)} phrases")
    return records


__all__ = ["EvalSettings", "evaluate_scenes"]
