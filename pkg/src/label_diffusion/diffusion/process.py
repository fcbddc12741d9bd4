"""Forward noising, reverse DDPM/DDIM updates and classifier-free guidance.

All functions are pure: they never mutate their inputs and depend only on
their arguments. Latents are tensors in channel-first layout, optionally with
a leading batch dimension.
"""
from typing import Optional, Union

import torch

from ..errors import ParameterError, ShapeError
from .schedule import NoiseSchedule

Timestep = Union[int, torch.Tensor]


def _require_same_shape(a: torch.Tensor, b: torch.Tensor, what: str) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"{what}: shape mismatch {tuple(a.shape)} vs {tuple(b.shape)}")


def _coefficient(table: torch.Tensor, t: Timestep, like: torch.Tensor) -> torch.Tensor:
    """Look up ``table[t]`` and shape it to broadcast against ``like``."""
    if isinstance(t, torch.Tensor) and t.ndim > 0:
        if t.shape[0] != like.shape[0]:
            raise ShapeError(f"Got {t.shape[0]} timesteps for a batch of {like.shape[0]}")
        if torch.any(t < 0) or torch.any(t >= table.shape[0]):
            raise ParameterError(f"Timesteps outside [0, {table.shape[0]})")
        values = table[t.long().cpu()]
        return values.to(device=like.device, dtype=like.dtype).view(-1, *([1] * (like.ndim - 1)))
    index = int(t)
    if not 0 <= index < table.shape[0]:
        raise ParameterError(f"Timestep {index} outside [0, {table.shape[0]})")
    return table[index].to(device=like.device, dtype=like.dtype)


def forward_noise(x0: torch.Tensor, t: Timestep, eps: torch.Tensor, sched: NoiseSchedule) -> torch.Tensor:
    _require_same_shape(x0, eps, "forward_noise")
    alpha_bar = _coefficient(sched.alpha_bars, t, x0)
    return alpha_bar.sqrt() * x0 + (1.0 - alpha_bar).sqrt() * eps


def recover_x0(xt: torch.Tensor, t: Timestep, eps: torch.Tensor, sched: NoiseSchedule) -> torch.Tensor:
    _require_same_shape(xt, eps, "recover_x0")
    alpha_bar = _coefficient(sched.alpha_bars, t, xt)
    return (xt - (1.0 - alpha_bar).sqrt() * eps) / alpha_bar.sqrt()


def cfg_combine(eps_uncond: torch.Tensor, eps_cond: torch.Tensor, w: float) -> torch.Tensor:
    _require_same_shape(eps_uncond, eps_cond, "cfg_combine")
    return eps_uncond + w * (eps_cond - eps_uncond)


def posterior_variance(t: int, sched: NoiseSchedule) -> float:
    """Ancestral-step variance sigma_t^2; zero at t = 0."""
    sched.check_timestep(t)
    if t == 0:
        return 0.0
    beta = float(sched.betas[t])
    alpha_bar = float(sched.alpha_bars[t])
    alpha_bar_prev = float(sched.alpha_bars[t - 1])
    return beta * (1.0 - alpha_bar_prev) / (1.0 - alpha_bar)


def ddpm_step(
    xt: torch.Tensor,
    t: int,
    eps_guided: torch.Tensor,
    sched: NoiseSchedule,
    noise: Optional[torch.Tensor] = None,
) -> torch.Tensor:
    _require_same_shape(xt, eps_guided, "ddpm_step")
    sched.check_timestep(t)
    alpha = sched.alphas[t].to(xt.dtype)
    beta = sched.betas[t].to(xt.dtype)
    alpha_bar = sched.alpha_bars[t].to(xt.dtype)
    mean = (xt - (beta / (1.0 - alpha_bar).sqrt()) * eps_guided) / alpha.sqrt()
    if t == 0:
        return mean
    if noise is None:
        raise ParameterError(f"ddpm_step at t={t} requires a noise tensor")
    _require_same_shape(xt, noise, "ddpm_step noise")
    sigma = posterior_variance(t, sched) ** 0.5
    return mean + sigma * noise


def ddim_step(
    xt: torch.Tensor,
    t: int,
    t_prev: int,
    eps_guided: torch.Tensor,
    sched: NoiseSchedule,
) -> torch.Tensor:
    """Deterministic (eta = 0) DDIM update from ``t`` to ``t_prev``.

    ``t_prev = -1`` designates the state before step 0 and returns the x0
    estimate itself.
    """
    _require_same_shape(xt, eps_guided, "ddim_step")
    if t_prev >= t:
        raise ParameterError(f"ddim_step needs t_prev < t, got t={t}, t_prev={t_prev}")
    if t_prev < -1:
        raise ParameterError(f"t_prev must be >= -1, got {t_prev}")
    x0_hat = recover_x0(xt, t, eps_guided, sched)
    if t_prev == -1:
        return x0_hat
    alpha_bar_prev = sched.alpha_bars[t_prev].to(xt.dtype)
    return alpha_bar_prev.sqrt() * x0_hat + (1.0 - alpha_bar_prev).sqrt() * eps_guided
