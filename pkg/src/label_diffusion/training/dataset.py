"""Flattens scenes into per-phrase training samples."""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import torch
from torch.utils.data import Dataset

from ..codec.image_encoder import image_to_tensor
from ..codec.label_codec import encode_label
from ..errors import DataError
from ..models.scene import Scene
from ..text.vocabulary import PhraseVocabulary

logger = logging.getLogger(__name__)


@dataclass
class TrainingBatch:
    x0: torch.Tensor
    images: torch.Tensor
    token_ids: torch.Tensor

    def __len__(self) -> int:
        return int(self.x0.shape[0])


class PhraseSampleDataset(Dataset):
    """One item per (scene, phrase): image, label latent x0 and token ids."""

    def __init__(self, images: List[torch.Tensor], samples: List[Tuple[int, torch.Tensor, List[int]]]):
        if not samples:
            raise DataError("Training dataset contains no phrases")
        self.images = images
        self.samples = samples

    @classmethod
    def from_scenes(cls, scenes: Iterable[Scene], vocab: PhraseVocabulary) -> "PhraseSampleDataset":
        images: List[torch.Tensor] = []
        samples: List[Tuple[int, torch.Tensor, List[int]]] = []
        for scene in scenes:
            scene_index = len(images)
            images.append(image_to_tensor(scene.image))
            for phrase in scene.phrases:
                samples.append((scene_index, encode_label(phrase.mask), vocab.encode(phrase.text)))
        logger.info(f"Built training set: {len(images)} scenes, {len(samples)} phrases")
        return cls(images, samples)

    def __len__(self) -> int:
        return len(self.samples)

    def __getitem__(self, index: int):
        scene_index, x0, token_ids = self.samples[index]
        return x0, self.images[scene_index], token_ids


def collate_samples(items) -> TrainingBatch:
    x0 = torch.stack([item[0] for item in items])
    images = torch.stack([item[1] for item in items])
    encoded = [sorted(item[2]) for item in items]
    length = max(len(ids) for ids in encoded)
    token_ids = torch.full((len(items), length), -1, dtype=torch.long)
    for row, ids in enumerate(encoded):
        token_ids[row, : len(ids)] = torch.tensor(ids, dtype=torch.long)
    return TrainingBatch(x0=x0, images=images, token_ids=token_ids)
