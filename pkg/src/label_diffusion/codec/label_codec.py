"""Mask <-> 1-channel label latent mapping and the mask decoding strategies.

Label latents use the [-1, 1] value convention: an 8x8 pixel block that is
fully foreground maps to +1, fully background to -1.
"""
from typing import Optional, Sequence

import numpy as np
import torch
import torch.nn.functional as F

from ..errors import ParameterError, ShapeError
from ..models.codec import DecodeKind, DecodeStrategy

LATENT_FACTOR = 8


def _check_divisible(height: int, width: int, what: str) -> None:
    if height <= 0 or width <= 0 or height % LATENT_FACTOR or width % LATENT_FACTOR:
        raise ShapeError(f"{what}: dimensions {height}x{width} are not positive multiples of {LATENT_FACTOR}")


def encode_label(mask: np.ndarray, dtype: torch.dtype = torch.float32) -> torch.Tensor:
    """Area-average a binary (H, W) mask by 8 and map [0, 1] -> [-1, 1].

    Returns a (1, H/8, W/8) latent.
    """
    mask = np.asarray(mask)
    if mask.ndim != 2:
        raise ShapeError(f"encode_label expects an (H, W) mask, got shape {mask.shape}")
    height, width = mask.shape
    _check_divisible(height, width, "encode_label")
    blocks = mask.astype(np.float64).reshape(
        height // LATENT_FACTOR, LATENT_FACTOR, width // LATENT_FACTOR, LATENT_FACTOR
    )
    coverage = blocks.mean(axis=(1, 3))
    return torch.from_numpy(2.0 * coverage - 1.0).to(dtype).unsqueeze(0)


def encode_labels(masks: Sequence[np.ndarray], dtype: torch.dtype = torch.float32) -> torch.Tensor:
    return torch.stack([encode_label(m, dtype) for m in masks])


def decode_label(
    latent: torch.Tensor,
    target_h: int,
    target_w: int,
    strategy: Optional[DecodeStrategy] = None,
    decoder: Optional[torch.nn.Module] = None,
) -> np.ndarray:
    """Turn a (1, h, w) or (B, 1, h, w) latent into boolean mask(s)."""
    strategy = strategy or DecodeStrategy()
    if not isinstance(strategy.kind, DecodeKind):
        raise ParameterError(f"Unknown decode strategy '{strategy.kind}'")
    batched = latent.ndim == 4
    grid = latent if batched else latent.unsqueeze(0)
    if grid.ndim != 4 or grid.shape[1] != 1:
        raise ShapeError(f"decode_label expects a 1-channel latent, got shape {tuple(latent.shape)}")

    with torch.no_grad():
        if strategy.kind is DecodeKind.BILINEAR_CFG:
            values = F.interpolate(grid, size=(target_h, target_w), mode="bilinear", align_corners=False)
        elif strategy.kind is DecodeKind.NEAREST:
            values = F.interpolate(grid, size=(target_h, target_w), mode="nearest")
        elif strategy.kind is DecodeKind.LEARNED_DECODER:
            if decoder is None:
                raise ParameterError("LEARNED_DECODER strategy requires a trained label decoder")
            values = decoder.decode_values(grid.to(next(decoder.parameters()).dtype), target_h, target_w)
        else:
            raise ParameterError(f"Unknown decode strategy '{strategy.kind}'")

    masks = (values > strategy.threshold).squeeze(1).cpu().numpy()
    return masks if batched else masks[0]
