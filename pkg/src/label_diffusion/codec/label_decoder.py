"""Learned label decoder used by the LEARNED_DECODER strategy and its trainer."""
import logging
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
import torch
import torch.nn.functional as F
from torch import nn

from ..errors import DataError
from ..models.scene import Scene
from .label_codec import encode_label

logger = logging.getLogger(__name__)


class LabelDecoder(nn.Module):
    """Upsamples a label latent and refines it into per-pixel logits."""

    def __init__(self, hidden: int = 16):
        super().__init__()
        self.gain = nn.Parameter(torch.tensor(4.0))
        self.refine = nn.Sequential(
            nn.Conv2d(1, hidden, 3, padding=1),
            nn.SiLU(),
            nn.Conv2d(hidden, hidden, 3, padding=1),
            nn.SiLU(),
            nn.Conv2d(hidden, 1, 3, padding=1),
        )
        nn.init.zeros_(self.refine[-1].weight)
        nn.init.zeros_(self.refine[-1].bias)

    def forward(self, latent: torch.Tensor, target_h: int, target_w: int) -> torch.Tensor:
        upsampled = F.interpolate(latent, size=(target_h, target_w), mode="bilinear", align_corners=False)
        return self.gain * upsampled + self.refine(upsampled)

    def decode_values(self, latent: torch.Tensor, target_h: int, target_w: int) -> torch.Tensor:
        """Logits mapped onto the [-1, 1] convention (2 * sigmoid - 1)."""
        return torch.tanh(self.forward(latent, target_h, target_w) / 2.0)


@dataclass
class LabelAutoencoderReport:
    decoder: LabelDecoder
    initial_loss: float
    final_loss: float
    reconstruction_iou: float


def _collect_masks(scenes: Iterable[Scene]) -> np.ndarray:
    masks = [phrase.mask for scene in scenes for phrase in scene.phrases]
    if not masks:
        raise DataError("Label autoencoder training needs a nonempty scene stream")
    return np.stack(masks)


def train_label_autoencoder(
    scenes: Iterable[Scene],
    epochs: int,
    batch_size: int = 32,
    learning_rate: float = 1e-3,
    seed: int = 0,
    decoder: Optional[LabelDecoder] = None,
) -> LabelAutoencoderReport:
    """Fit a decoder that reconstructs masks from their encode_label latents."""
    # Local import: evaluation reaches codec through the sampler.
    from ..evaluation.metrics import iou

    masks = _collect_masks(scenes)
    height, width = masks.shape[1:]
    latents = torch.stack([encode_label(m) for m in masks])
    targets = torch.from_numpy(masks.astype(np.float32)).unsqueeze(1)

    generator = torch.Generator().manual_seed(seed)
    torch.manual_seed(seed)
    decoder = decoder or LabelDecoder()
    optimizer = torch.optim.Adam(decoder.parameters(), lr=learning_rate)

    def full_loss() -> float:
        with torch.no_grad():
            return float(F.binary_cross_entropy_with_logits(decoder(latents, height, width), targets))

    initial_loss = full_loss()
    logger.info(f"Training label decoder on {len(masks)} masks for {epochs} epochs (initial loss {initial_loss:.4f})")
    for epoch in range(epochs):
        order = torch.randperm(len(masks), generator=generator)
        for start in range(0, len(masks), batch_size):
            idx = order[start:start + batch_size]
            logits = decoder(latents[idx], height, width)
            loss = F.binary_cross_entropy_with_logits(logits, targets[idx])
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
        logger.debug(f"Label decoder epoch {epoch + 1}/{epochs} loss {float(loss):.4f}")

    final_loss = full_loss()
    with torch.no_grad():
        predicted = (decoder.decode_values(latents, height, width) > 0.0).squeeze(1).numpy()
    mean_iou = float(np.mean([iou(p, m) for p, m in zip(predicted, masks)]))
    logger.info(f"Label decoder trained: loss {initial_loss:.4f} -> {final_loss:.4f}, IoU {mean_iou:.4f}")
    return LabelAutoencoderReport(decoder, initial_loss, final_loss, mean_iou)


__all__ = ["LabelAutoencoderReport", "LabelDecoder", "train_label_autoencoder"]
