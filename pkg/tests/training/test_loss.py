import pytest
import torch

from label_diffusion.errors import NumericError, ShapeError
from label_diffusion.training import denoising_loss, epsilon_mse


def test_exact_prediction_has_zero_loss():
    eps = torch.randn(4, 1, 8, 8)
    assert epsilon_mse(eps, eps.clone()).loss.item() == 0.0


def test_constant_offset_gives_squared_offset():
    eps = torch.randn(4, 1, 8, 8, dtype=torch.float64)
    result = epsilon_mse(eps, eps + 0.3)
    assert result.loss.item() == pytest.approx(0.09, abs=1e-12)
    assert torch.allclose(result.per_sample, torch.full((4,), 0.09, dtype=torch.float64))


def test_zero_prediction_loss_near_one():
    eps = torch.randn(10_000, 1, 1, 1, generator=torch.Generator().manual_seed(0))
    assert epsilon_mse(eps, torch.zeros_like(eps)).loss.item() == pytest.approx(1.0, abs=0.05)


def test_non_finite_loss_names_sample():
    eps = torch.zeros(3, 1, 2, 2)
    pred = torch.zeros(3, 1, 2, 2)
    pred[2, 0, 1, 1] = float("nan")
    with pytest.raises(NumericError, match="sample index 2"):
        epsilon_mse(eps, pred)


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        epsilon_mse(torch.zeros(2, 1, 4, 4), torch.zeros(2, 1, 4, 2))


def test_denoising_loss_on_model(tiny_model, tiny_batch):
    size = len(tiny_batch)
    t = torch.randint(0, tiny_model.config.total_steps, (size,), generator=torch.Generator().manual_seed(0))
    eps = torch.randn(tiny_batch.x0.shape)
    result = denoising_loss(tiny_model, tiny_batch, t, eps)
    assert result.loss.ndim == 0
    assert result.per_sample.shape == (size,)
    assert torch.isfinite(result.loss)
