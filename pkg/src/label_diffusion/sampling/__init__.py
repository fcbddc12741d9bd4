from .sampler import (
    TRAJECTORY_TIMESTEPS,
    SampleRequest,
    SamplingTrace,
    StepRecord,
    count_denoiser_calls,
    sample_batch,
    sample_latents,
    sample_mask,
)

__all__ = [
    "SampleRequest",
    "SamplingTrace",
    "StepRecord",
    "TRAJECTORY_TIMESTEPS",
    "count_denoiser_calls",
    "sample_batch",
    "sample_latents",
    "sample_mask",
]
