import pytest
import torch

from label_diffusion.codec import LabelDecoder
from label_diffusion.denoiser import LabelDiffusionModel
from label_diffusion.errors import ModelError


def test_parameter_groups_cover_denoising_parameters(tiny_model):
    grouped = {id(p) for params in tiny_model.parameter_groups().values() for _, p in params}
    assert grouped == {id(p) for p in tiny_model.denoising_parameters()}


def test_label_decoder_excluded_from_denoising_parameters(tiny_model):
    before = len(list(tiny_model.denoising_parameters()))
    tiny_model.attach_label_decoder(LabelDecoder())
    assert len(list(tiny_model.denoising_parameters())) == before
    assert len(list(tiny_model.parameters())) > before


def test_untrained_model_is_not_ready(tiny_model):
    with pytest.raises(ModelError):
        tiny_model.check_ready()
    tiny_model.check_ready(allow_untrained=True)


def test_non_finite_parameters_rejected(tiny_model):
    with torch.no_grad():
        tiny_model.unet.conv_out.bias.fill_(float("nan"))
    with pytest.raises(ModelError, match="conv_out"):
        tiny_model.check_ready(allow_untrained=True)


def test_schedule_follows_config(tiny_model_config):
    model = LabelDiffusionModel(tiny_model_config)
    assert model.schedule.total_steps == tiny_model_config.total_steps


def test_encode_images_shape(tiny_model):
    assert tiny_model.encode_images(torch.rand(2, 3, 32, 32)).shape == (2, 4, 4, 4)
