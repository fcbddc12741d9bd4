"""Noise schedules: per-timestep beta, alpha and cumulative alpha-bar tables."""
import logging
import math
from dataclasses import dataclass

import torch

from ..errors import ParameterError
from ..models.diffusion import ScheduleKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NoiseSchedule:
    """Immutable float64 tables indexed by timestep 0..T-1."""

    betas: torch.Tensor
    alphas: torch.Tensor
    alpha_bars: torch.Tensor

    @property
    def total_steps(self) -> int:
        return int(self.betas.shape[0])

    @classmethod
    def from_betas(cls, betas: torch.Tensor) -> "NoiseSchedule":
        betas = torch.as_tensor(betas, dtype=torch.float64).clone()
        if betas.ndim != 1 or betas.numel() < 1:
            raise ParameterError("A noise schedule needs a nonempty 1-D beta table")
        if torch.any(betas <= 0.0) or torch.any(betas >= 1.0):
            raise ParameterError("All betas must lie strictly inside (0, 1)")
        alphas = 1.0 - betas
        alpha_bars = torch.cumprod(alphas, dim=0)
        return cls(betas=betas, alphas=alphas, alpha_bars=alpha_bars)

    def alpha_bar(self, t: int) -> float:
        """Alpha-bar at ``t``; the index -1 means "before step 0" and yields 1."""
        if t == -1:
            return 1.0
        self.check_timestep(t)
        return float(self.alpha_bars[t])

    def check_timestep(self, t: int) -> None:
        if not 0 <= t < self.total_steps:
            raise ParameterError(f"Timestep {t} outside [0, {self.total_steps})")


def make_linear_schedule(total_steps: int, beta_start: float = 1e-4, beta_end: float = 0.02) -> NoiseSchedule:
    if total_steps < 1:
        raise ParameterError(f"T must be at least 1, got {total_steps}")
    if not 0.0 < beta_start <= beta_end < 1.0:
        raise ParameterError(
            f"Linear schedule bounds must satisfy 0 < beta_start <= beta_end < 1, got ({beta_start}, {beta_end})"
        )
    betas = torch.linspace(beta_start, beta_end, total_steps, dtype=torch.float64)
    logger.debug(f"Built linear schedule T={total_steps} beta=[{beta_start}, {beta_end}]")
    return NoiseSchedule.from_betas(betas)


def make_cosine_schedule(total_steps: int, offset: float = 0.008, max_beta: float = 0.999) -> NoiseSchedule:
    if total_steps < 1:
        raise ParameterError(f"T must be at least 1, got {total_steps}")
    if offset <= 0.0 or not 0.0 < max_beta < 1.0:
        raise ParameterError(f"Invalid cosine schedule parameters offset={offset}, max_beta={max_beta}")

    def f(step: float) -> float:
        return math.cos(((step / total_steps) + offset) / (1.0 + offset) * math.pi / 2.0) ** 2

    betas = [min(1.0 - f(t + 1) / f(t), max_beta) for t in range(total_steps)]
    betas = torch.tensor(betas, dtype=torch.float64).clamp(min=1e-8)
    logger.debug(f"Built cosine schedule T={total_steps} offset={offset}")
    return NoiseSchedule.from_betas(betas)


def make_schedule(kind, total_steps: int, beta_start: float = 1e-4, beta_end: float = 0.02) -> NoiseSchedule:
    kind = ScheduleKind(kind) if isinstance(kind, str) else kind
    if kind is ScheduleKind.LINEAR:
        return make_linear_schedule(total_steps, beta_start, beta_end)
    if kind is ScheduleKind.COSINE:
        return make_cosine_schedule(total_steps)
    raise ParameterError(f"Unknown schedule kind '{kind}'")


def ddim_timesteps(total_steps: int, steps: int) -> list:
    """Strictly decreasing integer timesteps from T-1 down to 0."""
    if not 1 <= steps <= total_steps:
        raise ParameterError(f"DDIM steps must be in [1, {total_steps}], got {steps}")
    if steps == 1:
        return [total_steps - 1]
    span = total_steps - 1
    return [(span * (steps - 1 - k)) // (steps - 1) for k in range(steps)]
