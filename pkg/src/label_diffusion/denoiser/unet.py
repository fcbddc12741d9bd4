"""Conditional U-Net predicting the label noise from (x_t, image latent, t, phrase)."""
import math
from math import gcd
from typing import Dict, List, Union

import torch
import torch.nn.functional as F
from torch import nn

from ..errors import ShapeError
from ..models.config import DENOISER_IN_CHANNELS, LABEL_CHANNELS, DenoiserConfig
from ..text.conditioning import PhraseConditioning
from .attention import CrossAttention, InjectedSelfAttention, cross_attention, injected_self_attention


def timestep_embedding(t: Union[int, torch.Tensor], dim: int) -> torch.Tensor:
    """Sinusoidal encoding: first half sin, second half cos; (dim,) or (B, dim)."""
    scalar = not isinstance(t, torch.Tensor) or t.ndim == 0
    steps = torch.as_tensor(t).detach().to("cpu", torch.float64).reshape(-1)
    half = dim // 2
    freqs = torch.exp(-math.log(10000.0) * torch.arange(half, dtype=torch.float64) / half)
    args = steps[:, None] * freqs[None, :]
    embedding = torch.cat([torch.sin(args), torch.cos(args)], dim=-1)
    if dim % 2:
        embedding = F.pad(embedding, (0, 1))
    return embedding[0] if scalar else embedding


def _norm(channels: int) -> nn.GroupNorm:
    return nn.GroupNorm(gcd(channels, 8), channels)


class ResBlock(nn.Module):
    def __init__(self, in_channels: int, out_channels: int, time_dim: int):
        super().__init__()
        self.norm1 = _norm(in_channels)
        self.conv1 = nn.Conv2d(in_channels, out_channels, 3, padding=1)
        self.time_proj = nn.Linear(time_dim, out_channels)
        self.norm2 = _norm(out_channels)
        self.conv2 = nn.Conv2d(out_channels, out_channels, 3, padding=1)
        self.skip = nn.Conv2d(in_channels, out_channels, 1) if in_channels != out_channels else nn.Identity()

    def forward(self, x: torch.Tensor, time: torch.Tensor) -> torch.Tensor:
        h = self.conv1(F.silu(self.norm1(x)))
        h = h + self.time_proj(time)[:, :, None, None]
        h = self.conv2(F.silu(self.norm2(h)))
        return h + self.skip(x)


class AttentionBlock(nn.Module):
    """Pre-norm injected self-attention and/or text cross-attention at one resolution."""

    def __init__(self, width: int, text_dim: int, heads: int, inject: bool, cross: bool):
        super().__init__()
        self.inject = inject
        self.self_norm = nn.LayerNorm(width)
        self.self_attn = InjectedSelfAttention(width, heads)
        self.cross_norm = nn.LayerNorm(width) if cross else None
        self.cross_attn = CrossAttention(width, text_dim, heads) if cross else None

    def forward(self, x: torch.Tensor, global_embedding: torch.Tensor, adapter_tokens) -> torch.Tensor:
        batch, channels, height, width = x.shape
        tokens = x.flatten(2).transpose(1, 2)
        tokens = tokens + injected_self_attention(
            self.self_norm(tokens), adapter_tokens if self.inject else None, self.self_attn
        )
        if self.cross_attn is not None:
            tokens = cross_attention(tokens, global_embedding, self.cross_attn, self.cross_norm(tokens))
        return tokens.transpose(1, 2).reshape(batch, channels, height, width)


class LabelUNet(nn.Module):
    def __init__(self, config: DenoiserConfig, text_dim: int):
        super().__init__()
        self.config = config
        widths = config.widths
        levels = len(widths)
        self._adapter_slot: Dict[int, int] = {level: i for i, level in enumerate(config.injection_levels)}

        def attention(level: int) -> nn.Module:
            if level not in config.attention_levels:
                return nn.Identity()
            return AttentionBlock(
                widths[level],
                text_dim,
                config.heads,
                inject=level in config.injection_levels,
                cross=level in config.cross_attention_levels,
            )

        self.time_mlp = nn.Sequential(
            nn.Linear(config.time_dim, config.time_dim),
            nn.SiLU(),
            nn.Linear(config.time_dim, config.time_dim),
        )
        self.conv_in = nn.Conv2d(DENOISER_IN_CHANNELS, widths[0], 3, padding=1)

        self.down_res = nn.ModuleList()
        self.down_attn = nn.ModuleList()
        self.downsample = nn.ModuleList()
        channels = widths[0]
        for level in range(levels):
            self.down_res.append(ResBlock(channels, widths[level], config.time_dim))
            self.down_attn.append(attention(level))
            channels = widths[level]
            if level < levels - 1:
                self.downsample.append(nn.Conv2d(channels, channels, 3, stride=2, padding=1))

        self.mid_res1 = ResBlock(channels, channels, config.time_dim)
        self.mid_attn = attention(levels - 1)
        self.mid_res2 = ResBlock(channels, channels, config.time_dim)

        self.up_res = nn.ModuleList()
        self.up_attn = nn.ModuleList()
        self.upsample = nn.ModuleList()
        for level in reversed(range(levels)):
            self.up_res.append(ResBlock(channels + widths[level], widths[level], config.time_dim))
            self.up_attn.append(attention(level))
            channels = widths[level]
            if level > 0:
                self.upsample.append(nn.Conv2d(channels, channels, 3, padding=1))

        self.out_norm = _norm(widths[0])
        self.conv_out = nn.Conv2d(widths[0], LABEL_CHANNELS, 3, padding=1)

    def _attend(self, block: nn.Module, h: torch.Tensor, level: int, cond: PhraseConditioning) -> torch.Tensor:
        if isinstance(block, nn.Identity):
            return h
        slot = self._adapter_slot.get(level)
        adapter_tokens = cond.per_layer[slot] if slot is not None else None
        return block(h, cond.global_embedding, adapter_tokens)

    def forward(self, x: torch.Tensor, t: torch.Tensor, cond: PhraseConditioning) -> torch.Tensor:
        levels = len(self.config.widths)
        time = self.time_mlp(timestep_embedding(t, self.config.time_dim).to(x.dtype).to(x.device))

        h = self.conv_in(x)
        skips: List[torch.Tensor] = []
        for level in range(levels):
            h = self.down_res[level](h, time)
            h = self._attend(self.down_attn[level], h, level, cond)
            skips.append(h)
            if level < levels - 1:
                h = self.downsample[level](h)

        h = self.mid_res1(h, time)
        h = self._attend(self.mid_attn, h, levels - 1, cond)
        h = self.mid_res2(h, time)

        for i, level in enumerate(reversed(range(levels))):
            h = self.up_res[i](torch.cat([h, skips[level]], dim=1), time)
            h = self._attend(self.up_attn[i], h, level, cond)
            if level > 0:
                h = self.upsample[levels - 1 - level](F.interpolate(h, scale_factor=2.0, mode="nearest"))

        return self.conv_out(F.silu(self.out_norm(h)))


def denoiser_forward(
    xt: torch.Tensor,
    image_latent: torch.Tensor,
    t: Union[int, torch.Tensor],
    cond: PhraseConditioning,
    unet: LabelUNet,
) -> torch.Tensor:
    """Predict the noise for a (B, 1, h, w) noisy label given a (B, 4, h, w) image latent."""
    if xt.ndim != 4 or xt.shape[1] != LABEL_CHANNELS:
        raise ShapeError(f"Noisy label must be (B, 1, h, w), got {tuple(xt.shape)}")
    if image_latent.shape[0] != xt.shape[0] or image_latent.shape[2:] != xt.shape[2:]:
        raise ShapeError(
            f"Image latent {tuple(image_latent.shape)} is not spatially aligned with label {tuple(xt.shape)}"
        )
    divisor = unet.config.spatial_divisor
    if xt.shape[2] % divisor or xt.shape[3] % divisor:
        raise ShapeError(f"Latent size {tuple(xt.shape[2:])} is not divisible by {divisor}")
    batch = xt.shape[0]
    if not isinstance(t, torch.Tensor) or t.ndim == 0:
        t = torch.full((batch,), int(t), dtype=torch.long)
    return unet(torch.cat([xt, image_latent.to(xt.dtype)], dim=1), t, cond.expand(batch))
