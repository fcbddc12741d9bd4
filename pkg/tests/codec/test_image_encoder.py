import numpy as np
import pytest
import torch

from label_diffusion.codec import ImageLatentEncoder, encode_image, image_to_tensor
from label_diffusion.errors import ShapeError


@pytest.fixture
def encoder():
    torch.manual_seed(0)
    return ImageLatentEncoder(hidden=8)


def test_output_shape(encoder):
    image = np.random.default_rng(0).random((64, 64, 3))
    assert encode_image(image, encoder).shape == (4, 8, 8)


def test_identical_images_identical_latents(encoder):
    image = np.random.default_rng(1).random((32, 48, 3))
    a = encode_image(image, encoder)
    b = encode_image(image.copy(), encoder)
    assert torch.max(torch.abs(a - b)).item() == 0.0


def test_rejects_bad_shapes(encoder):
    with pytest.raises(ShapeError):
        encode_image(np.zeros((32, 32)), encoder)
    with pytest.raises(ShapeError):
        encode_image(np.zeros((30, 32, 3)), encoder)


def test_image_to_tensor_layout():
    image = np.zeros((8, 16, 3), dtype=np.float32)
    image[..., 2] = 1.0
    tensor = image_to_tensor(image)
    assert tensor.shape == (3, 8, 16)
    assert torch.all(tensor[2] == 1.0) and torch.all(tensor[:2] == 0.0)
