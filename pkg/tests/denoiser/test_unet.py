import pytest
import torch

from label_diffusion.denoiser import denoiser_forward, timestep_embedding
from label_diffusion.errors import ShapeError


def test_timestep_embedding_at_zero():
    emb = timestep_embedding(0, 16)
    assert torch.all(emb[:8] == 0.0)
    assert torch.all(emb[8:] == 1.0)


def test_timestep_embedding_injective():
    table = timestep_embedding(torch.arange(1000), 32)
    assert table.shape == (1000, 32)
    assert torch.unique(table, dim=0).shape[0] == 1000


def test_forward_shape_and_determinism(tiny_model):
    torch.manual_seed(1)
    xt = torch.randn(2, 1, 4, 4)
    image_latent = torch.randn(2, 4, 4, 4)
    cond = tiny_model.phrase_encoder.encode(["red circle", "blue square"])
    with torch.no_grad():
        a = denoiser_forward(xt, image_latent, 10, cond, tiny_model.unet)
        b = denoiser_forward(xt, image_latent, 10, cond, tiny_model.unet)
    assert a.shape == (2, 1, 4, 4)
    assert torch.equal(a, b)


def test_per_sample_timesteps(tiny_model):
    xt = torch.randn(2, 1, 4, 4)
    image_latent = torch.randn(2, 4, 4, 4)
    cond = tiny_model.phrase_encoder.encode(["red circle", "red circle"])
    with torch.no_grad():
        batched = tiny_model.predict_noise(xt, image_latent, torch.tensor([3, 40]), cond)
        first = tiny_model.predict_noise(xt[:1], image_latent[:1], 3, tiny_model.phrase_encoder.encode(["red circle"]))
    assert torch.allclose(batched[:1], first, atol=1e-5)


def test_single_conditioning_broadcasts(tiny_model):
    cond = tiny_model.phrase_encoder.null(1)
    with torch.no_grad():
        out = denoiser_forward(torch.randn(3, 1, 4, 4), torch.randn(3, 4, 4, 4), 0, cond, tiny_model.unet)
    assert out.shape == (3, 1, 4, 4)


def test_misaligned_shapes(tiny_model):
    cond = tiny_model.phrase_encoder.null(1)
    with pytest.raises(ShapeError):
        denoiser_forward(torch.randn(1, 1, 4, 4), torch.randn(1, 4, 2, 2), 0, cond, tiny_model.unet)
    with pytest.raises(ShapeError):
        denoiser_forward(torch.randn(1, 2, 4, 4), torch.randn(1, 4, 4, 4), 0, cond, tiny_model.unet)
    with pytest.raises(ShapeError):
        denoiser_forward(torch.randn(1, 1, 3, 3), torch.randn(1, 4, 3, 3), 0, cond, tiny_model.unet)
