import logging
from typing import Optional

import torch
from torch import nn

from ..codec.image_encoder import ImageLatentEncoder
from ..codec.label_decoder import LabelDecoder
from ..diffusion.schedule import NoiseSchedule, make_schedule
from ..errors import ModelError
from ..models.config import ModelConfig
from ..text.conditioning import PhraseConditioning, PhraseEncoder
from ..text.vocabulary import PhraseVocabulary
from .unet import LabelUNet, denoiser_forward

logger = logging.getLogger(__name__)


class LabelDiffusionModel(nn.Module):
    """All trainable parts: image encoder, phrase encoder with adapters, U-Net, optional label decoder."""

    def __init__(self, config: ModelConfig, vocab: Optional[PhraseVocabulary] = None):
        super().__init__()
        self.config = config
        self.vocab = vocab or PhraseVocabulary.from_grammar()
        self.image_encoder = ImageLatentEncoder(config.image_hidden)
        self.phrase_encoder = PhraseEncoder(
            self.vocab, config.text_dim, config.denoiser.adapter_widths, config.adapter_tokens
        )
        self.unet = LabelUNet(config.denoiser, config.text_dim)
        self.label_decoder: Optional[LabelDecoder] = None
        self.register_buffer("trained_steps", torch.zeros((), dtype=torch.long))
        self._schedule: Optional[NoiseSchedule] = None

    @property
    def schedule(self) -> NoiseSchedule:
        if self._schedule is None:
            cfg = self.config
            self._schedule = make_schedule(cfg.schedule_kind, cfg.total_steps, cfg.beta_start, cfg.beta_end)
        return self._schedule

    @property
    def dtype(self) -> torch.dtype:
        return self.phrase_encoder.null_global.dtype

    def attach_label_decoder(self, decoder: LabelDecoder) -> None:
        self.label_decoder = decoder.to(self.dtype)

    def encode_images(self, images: torch.Tensor) -> torch.Tensor:
        return self.image_encoder(images.to(self.dtype))

    def predict_noise(
        self,
        xt: torch.Tensor,
        image_latent: torch.Tensor,
        t,
        cond: PhraseConditioning,
    ) -> torch.Tensor:
        return denoiser_forward(xt, image_latent, t, cond, self.unet)

    def denoising_parameters(self):
        """Parameters optimized by the denoising loss (everything but the label decoder)."""
        for name, parameter in self.named_parameters():
            if not name.startswith("label_decoder."):
                yield parameter

    def parameter_groups(self):
        """Named parameter tensors grouped by component, in a stable order."""
        groups = {
            "image_encoder": list(self.image_encoder.named_parameters()),
            "text_embeddings": list(self.phrase_encoder.word_embeddings.named_parameters()),
            "adapters": list(self.phrase_encoder.adapters.named_parameters()),
            "null_embeddings": [("null_global", self.phrase_encoder.null_global)]
            + [(f"null_tokens.{i}", p) for i, p in enumerate(self.phrase_encoder.null_tokens)],
            "denoiser": list(self.unet.named_parameters()),
        }
        return groups

    def check_ready(self, allow_untrained: bool = False) -> None:
        if not allow_untrained and int(self.trained_steps) == 0:
            raise ModelError("Model has not been trained (0 optimizer steps recorded)")
        for name, parameter in self.named_parameters():
            if not torch.isfinite(parameter).all():
                raise ModelError(f"Parameter '{name}' contains non-finite values")
