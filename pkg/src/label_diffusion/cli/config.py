"""
Run configuration for the CLI.

Every setting is a field of RunConfig. Values are resolved in this order,
later sources winning: field defaults, ``LABEL_DIFFUSION_<KEY>`` environment
variables, the key=value config file, explicit command-line flags.
"""
import logging
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from dotenv import dotenv_values

from ..errors import ParameterError
from ..models.codec import DecodeStrategy
from ..models.config import DenoiserConfig, ModelConfig, TrainConfig
from ..models.diffusion import GuidanceConfig
from ..models.evaluation import ThresholdGrid
from ..models.scene import SceneSpec

logger = logging.getLogger(__name__)

ENV_PREFIX = "LABEL_DIFFUSION_"
RESOLVED_CONFIG_NAME = "resolved_config.txt"
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class RunConfig:
    command: str = ""
    dataset: str = ""
    checkpoint: str = ""
    output: str = ""
    seed: int = 0
    # dataset generation and splitting
    n_scenes: int = 2000
    image_size: int = 64
    min_groups: int = 1
    max_groups: int = 3
    max_instances: int = 3
    spatial_words: bool = False
    train_frac: float = 0.9
    split_seed: int = 0
    eval_split: str = "test"
    # model
    base_width: int = 32
    channel_mults: str = "1,2,4"
    heads: int = 1
    text_dim: int = 64
    adapter_tokens: int = 4
    schedule: str = "linear"
    total_steps: int = 1000
    # training
    learning_rate: float = 1e-4
    batch_size: int = 16
    epochs: int = 20
    p_drop: float = 0.1
    max_steps: int = 0
    log_interval: int = 10
    checkpoint_interval: int = 0
    num_workers: int = 0
    label_decoder_epochs: int = 0
    resume: bool = False
    # sampling
    guidance_scale: float = 7.5
    sampler: str = "ddim"
    ddim_steps: int = 50
    decode: str = "bilinear_cfg"
    threshold: float = 0.0
    # evaluation
    grid_denominator: int = 10000
    eval_batch_size: int = 16
    eval_workers: int = 0
    # sample / ablate
    image: str = ""
    phrase: str = ""
    trajectory: bool = False
    axis: str = ""
    values: str = ""

    def __post_init__(self):
        if self.eval_split not in ("train", "test", "all"):
            raise ParameterError(f"eval_split must be train, test or all, got '{self.eval_split}'")
        if self.eval_batch_size < 1 or self.eval_workers < 0:
            raise ParameterError("eval_batch_size must be >= 1 and eval_workers >= 0")

    @property
    def channel_multipliers(self) -> Tuple[int, ...]:
        try:
            return tuple(int(v) for v in self.channel_mults.split(",") if v.strip())
        except ValueError:
            raise ParameterError(f"channel_mults must be comma-separated integers, got '{self.channel_mults}'") from None

    def model_config(self) -> ModelConfig:
        mults = self.channel_multipliers
        if len(mults) < 2:
            raise ParameterError("channel_mults needs at least two U-Net levels")
        deep = (len(mults) - 2, len(mults) - 1)
        denoiser = DenoiserConfig(
            base_width=self.base_width,
            channel_mults=mults,
            heads=self.heads,
            injection_levels=deep,
            cross_attention_levels=deep,
        )
        return ModelConfig(
            denoiser=denoiser,
            text_dim=self.text_dim,
            adapter_tokens=self.adapter_tokens,
            schedule_kind=self.schedule,
            total_steps=self.total_steps,
        )

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            batch_size=self.batch_size,
            epochs=self.epochs,
            p_drop=self.p_drop,
            total_steps=self.total_steps,
            seed=self.seed,
            log_interval=self.log_interval,
            checkpoint_interval=self.checkpoint_interval,
            max_steps=self.max_steps,
            num_workers=self.num_workers,
            label_decoder_epochs=self.label_decoder_epochs,
        )

    def guidance(self) -> GuidanceConfig:
        try:
            return GuidanceConfig(scale=self.guidance_scale, sampler_kind=self.sampler, ddim_steps=self.ddim_steps)
        except ValueError as e:
            raise ParameterError(f"Invalid sampling settings: {e}") from None

    def decode_strategy(self) -> DecodeStrategy:
        return DecodeStrategy(kind=self.decode, threshold=self.threshold)

    def grid(self) -> ThresholdGrid:
        return ThresholdGrid.uniform(self.grid_denominator)

    def scene_spec(self) -> SceneSpec:
        return SceneSpec(
            image_size=self.image_size,
            min_groups=self.min_groups,
            max_groups=self.max_groups,
            max_instances=self.max_instances,
            spatial_words=self.spatial_words,
        )

    def as_text(self) -> str:
        items = sorted((f.name, getattr(self, f.name)) for f in fields(self))
        return "".join(f"{key}={_render(value)}\n" for key, value in items)


def _render(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _coerce(name: str, kind: type, raw: Any) -> Any:
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    try:
        if kind is bool:
            lowered = text.lower()
            if lowered in _TRUE:
                return True
            if lowered in _FALSE:
                return False
            raise ValueError(text)
        if kind is int:
            return int(text)
        if kind is float:
            return float(text)
    except ValueError:
        raise ParameterError(f"Invalid value for '{name}': {raw!r}") from None
    return text


def read_config_file(path: Union[str, Path]) -> Dict[str, Optional[str]]:
    path = Path(path)
    if not path.is_file():
        raise ParameterError(f"Config file not found: {path}")
    values = dotenv_values(path)
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(key for key in values if key.lower() not in known)
    if unknown:
        raise ParameterError(f"Unknown config keys in {path}: {', '.join(unknown)}")
    return {key.lower(): value for key, value in values.items()}


def resolve_config(
    command: str,
    flags: Optional[Dict[str, Any]] = None,
    config_file: Optional[Union[str, Path]] = None,
    environ: Optional[Dict[str, str]] = None,
) -> RunConfig:
    """Merge defaults, environment, config file and flags (in increasing precedence)."""
    environ = os.environ if environ is None else environ
    types = {f.name: f.type for f in fields(RunConfig)}
    merged: Dict[str, Any] = {}
    for name in types:
        if f"{ENV_PREFIX}{name.upper()}" in environ:
            merged[name] = environ[f"{ENV_PREFIX}{name.upper()}"]
    if config_file:
        for key, value in read_config_file(config_file).items():
            if value is not None:
                merged[key] = value
    for key, value in (flags or {}).items():
        if key not in types:
            raise ParameterError(f"Unknown setting '{key}'")
        if value is not None:
            merged[key] = value
    merged["command"] = command
    values = {name: _coerce(name, types[name], raw) for name, raw in merged.items()}
    config = RunConfig(**values)
    logger.debug(f"Resolved {command} config from {len(merged)} explicit settings")
    return config


def write_resolved_config(config: RunConfig, directory: Union[str, Path]) -> Path:
    path = Path(directory) / RESOLVED_CONFIG_NAME
    path.write_text(config.as_text(), encoding="utf-8")
    return path


__all__ = [
    "ENV_PREFIX",
    "RESOLVED_CONFIG_NAME",
    "RunConfig",
    "read_config_file",
    "resolve_config",
    "write_resolved_config",
]
