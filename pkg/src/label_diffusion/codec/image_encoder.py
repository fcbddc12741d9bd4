import numpy as np
import torch
from torch import nn

from ..errors import ShapeError
from .label_codec import _check_divisible

IMAGE_LATENT_CHANNELS = 4


class ImageLatentEncoder(nn.Module):
    """Strided convolutional stand-in for a VAE encoder: RGB -> 4 channels at 1/8 scale."""

    def __init__(self, hidden: int = 32):
        super().__init__()
        self.net = nn.Sequential(
            nn.Conv2d(3, hidden // 2, 3, stride=2, padding=1),
            nn.SiLU(),
            nn.Conv2d(hidden // 2, hidden, 3, stride=2, padding=1),
            nn.SiLU(),
            nn.Conv2d(hidden, IMAGE_LATENT_CHANNELS, 3, stride=2, padding=1),
        )

    def forward(self, images: torch.Tensor) -> torch.Tensor:
        if images.ndim != 4 or images.shape[1] != 3:
            raise ShapeError(f"Image encoder expects (B, 3, H, W), got {tuple(images.shape)}")
        _check_divisible(images.shape[2], images.shape[3], "encode_image")
        return self.net(images)


def image_to_tensor(image: np.ndarray) -> torch.Tensor:
    """(H, W, 3) array in [0, 1] -> (3, H, W) float32 tensor."""
    image = np.asarray(image, dtype=np.float32)
    if image.ndim != 3 or image.shape[2] != 3:
        raise ShapeError(f"Expected an (H, W, 3) RGB image, got shape {image.shape}")
    return torch.from_numpy(np.ascontiguousarray(image.transpose(2, 0, 1)))


def encode_image(image: np.ndarray, encoder: ImageLatentEncoder) -> torch.Tensor:
    """Encode a single (H, W, 3) image into its (4, H/8, W/8) latent."""
    tensor = image_to_tensor(image)
    _check_divisible(tensor.shape[1], tensor.shape[2], "encode_image")
    dtype = next(encoder.parameters()).dtype
    with torch.no_grad():
        return encoder(tensor.unsqueeze(0).to(dtype))[0]
