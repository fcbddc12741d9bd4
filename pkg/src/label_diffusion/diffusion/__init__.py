from .process import cfg_combine, ddim_step, ddpm_step, forward_noise, posterior_variance, recover_x0
from .schedule import (
    NoiseSchedule,
    ddim_timesteps,
    make_cosine_schedule,
    make_linear_schedule,
    make_schedule,
)

__all__ = [
    "NoiseSchedule",
    "cfg_combine",
    "ddim_step",
    "ddim_timesteps",
    "ddpm_step",
    "forward_noise",
    "make_cosine_schedule",
    "make_linear_schedule",
    "make_schedule",
    "posterior_variance",
    "recover_x0",
]
