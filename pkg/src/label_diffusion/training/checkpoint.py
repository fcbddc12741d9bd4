"""
Checkpoint persistence.

A checkpoint is a ``torch.save`` dictionary holding a format-version header,
the model config, the vocabulary, every parameter and buffer, the Adam
moments, the step counter and the training RNG state. Loading rebuilds the
model from the stored config and checks every tensor shape against it
before copying values in.
"""
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, Optional, Union

import torch

from ..codec.label_decoder import LabelDecoder
from ..denoiser.model import LabelDiffusionModel
from ..errors import CheckpointError, CheckpointVersionError, ParameterError
from ..models.config import ModelConfig, TrainConfig
from ..text.vocabulary import PhraseVocabulary
from ..versioning import CHECKPOINT_FORMAT_VERSION, check_format_version
from .trainer import TrainState, make_optimizer

logger = logging.getLogger(__name__)

REQUIRED_FIELDS = ("model_config", "vocabulary", "parameters", "shapes", "step", "rng_state")


def save_checkpoint(
    state: TrainState,
    path: Union[str, Path],
    train_config: Optional[TrainConfig] = None,
) -> Path:
    path = Path(path)
    model = state.model
    parameters = {name: tensor.detach().clone() for name, tensor in model.state_dict().items()}
    decoder = model.label_decoder
    payload: Dict[str, Any] = {
        "format_version": CHECKPOINT_FORMAT_VERSION,
        "model_config": model.config.to_dict(),
        "vocabulary": list(model.vocab.tokens),
        "parameters": parameters,
        "shapes": {name: list(tensor.shape) for name, tensor in parameters.items()},
        "label_decoder_hidden": None if decoder is None else int(decoder.refine[0].out_channels),
        "optimizer": state.optimizer.state_dict() if state.optimizer is not None else None,
        "train_config": asdict(train_config) if train_config is not None else None,
        "step": int(state.step),
        "rng_state": state.generator.get_state(),
    }
    tmp = path.with_name(path.name + ".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        torch.save(payload, tmp)
        tmp.replace(path)
    except OSError as e:
        raise CheckpointError(f"Cannot write checkpoint {path}: {e}") from e
    logger.info(f"Saved checkpoint at step {state.step} to {path}")
    return path


def read_checkpoint(path: Union[str, Path]) -> Dict[str, Any]:
    """Load and header-check the raw checkpoint dictionary."""
    path = Path(path)
    if not path.is_file():
        raise CheckpointError(f"Checkpoint not found: {path}")
    try:
        payload = torch.load(path, map_location="cpu", weights_only=True)
    except Exception as e:
        raise CheckpointError(f"{path}: truncated or unreadable checkpoint ({e})") from e
    if not isinstance(payload, dict):
        raise CheckpointVersionError(f"{path}: missing format_version header")
    check_format_version(payload.get("format_version"), CHECKPOINT_FORMAT_VERSION, str(path), CheckpointVersionError)
    for key in REQUIRED_FIELDS:
        if key not in payload:
            raise CheckpointError(f"{path}: missing field '{key}'")
    return payload


def _restore_model(payload: Dict[str, Any], path: Path) -> LabelDiffusionModel:
    try:
        config = ModelConfig.from_dict(payload["model_config"])
        vocab = PhraseVocabulary(payload["vocabulary"])
    except (ParameterError, TypeError) as e:
        raise CheckpointError(f"{path}: invalid field 'model_config' or 'vocabulary': {e}") from e

    parameters: Dict[str, torch.Tensor] = payload["parameters"]
    model = LabelDiffusionModel(config, vocab)
    if payload.get("label_decoder_hidden"):
        model.attach_label_decoder(LabelDecoder(int(payload["label_decoder_hidden"])))
    dtype_probe = parameters.get("phrase_encoder.null_global")
    if dtype_probe is not None and dtype_probe.is_floating_point():
        model.to(dtype_probe.dtype)

    expected = model.state_dict()
    for name, tensor in expected.items():
        if name not in parameters:
            raise CheckpointError(f"{path}: missing field 'parameters.{name}'")
        stored = parameters[name]
        recorded = list(payload["shapes"].get(name, stored.shape))
        if list(stored.shape) != list(tensor.shape) or recorded != list(tensor.shape):
            raise CheckpointError(
                f"{path}: shape mismatch in field 'parameters.{name}': "
                f"expected {list(tensor.shape)}, found {list(stored.shape)}"
            )
    unexpected = sorted(set(parameters) - set(expected))
    if unexpected:
        raise CheckpointError(f"{path}: unexpected field 'parameters.{unexpected[0]}'")
    model.load_state_dict(parameters)
    return model


def load_model(path: Union[str, Path]) -> LabelDiffusionModel:
    """Rebuild the model only; optimizer state is ignored."""
    path = Path(path)
    model = _restore_model(read_checkpoint(path), path)
    model.eval()
    logger.info(f"Loaded model ({int(model.trained_steps)} trained steps) from {path}")
    return model


def load_checkpoint(path: Union[str, Path], train_config: Optional[TrainConfig] = None) -> TrainState:
    """Restore a full TrainState; ``train_config`` defaults to the one stored in the file."""
    path = Path(path)
    payload = read_checkpoint(path)
    model = _restore_model(payload, path)
    if train_config is None:
        stored = payload.get("train_config")
        train_config = TrainConfig(**stored) if stored else TrainConfig(total_steps=model.config.total_steps)
    optimizer = make_optimizer(model, train_config)
    if payload.get("optimizer") is not None:
        try:
            optimizer.load_state_dict(payload["optimizer"])
        except (ValueError, KeyError) as e:
            raise CheckpointError(f"{path}: invalid field 'optimizer': {e}") from e
    generator = torch.Generator()
    try:
        generator.set_state(payload["rng_state"])
    except (RuntimeError, TypeError) as e:
        raise CheckpointError(f"{path}: invalid field 'rng_state': {e}") from e
    logger.info(f"Loaded training state at step {payload['step']} from {path}")
    return TrainState(model=model, optimizer=optimizer, generator=generator, step=int(payload["step"]))


__all__ = ["load_checkpoint", "load_model", "read_checkpoint", "save_checkpoint"]
