"""The epsilon-prediction denoising objective."""
from dataclasses import dataclass
from typing import Optional

import torch

from ..denoiser.model import LabelDiffusionModel
from ..diffusion.process import forward_noise
from ..errors import NumericError, ShapeError
from ..text.conditioning import PhraseConditioning, apply_drop_mask
from .dataset import TrainingBatch


@dataclass
class LossResult:
    loss: torch.Tensor
    per_sample: torch.Tensor


def epsilon_mse(eps: torch.Tensor, eps_pred: torch.Tensor) -> LossResult:
    """Mean over batch and cells of (eps - eps_pred)^2."""
    if eps.shape != eps_pred.shape:
        raise ShapeError(f"Noise {tuple(eps.shape)} and prediction {tuple(eps_pred.shape)} differ in shape")
    per_sample = (eps - eps_pred).pow(2).flatten(1).mean(dim=1)
    finite = torch.isfinite(per_sample)
    if not bool(finite.all()):
        index = int((~finite).nonzero()[0])
        raise NumericError(f"Non-finite denoising loss at sample index {index}")
    return LossResult(loss=per_sample.mean(), per_sample=per_sample)


def denoising_loss(
    model: LabelDiffusionModel,
    batch: TrainingBatch,
    t: torch.Tensor,
    eps: torch.Tensor,
    cond: Optional[PhraseConditioning] = None,
    drop: Optional[torch.Tensor] = None,
) -> LossResult:
    """Noise x0 at per-sample timesteps and score the model's noise prediction.

    Either pass a prepared ``cond`` (e.g. after conditional dropout) or an
    explicit boolean ``drop`` mask selecting samples that use the null embeddings.
    """
    x0 = batch.x0.to(model.dtype)
    eps = eps.to(model.dtype)
    if cond is None:
        cond = model.phrase_encoder.condition(batch.token_ids)
        if drop is not None and bool(drop.any()):
            cond = apply_drop_mask(cond, model.phrase_encoder.null(len(batch)), drop)
    image_latent = model.encode_images(batch.images)
    xt = forward_noise(x0, t, eps, model.schedule)
    return epsilon_mse(eps, model.predict_noise(xt, image_latent, t, cond))
