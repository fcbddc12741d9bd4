"""
Ablation harness: evaluate one axis over a list of values.

``dataset`` and ``checkpoint`` may contain a ``{value}`` placeholder, so an
IMAGE_SIZE sweep can point each size at its own dataset and trained model.
"""
import logging
from dataclasses import replace
from enum import Enum
from pathlib import Path
from typing import Dict, List, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from ...data.manifest import SceneManifest
from ...denoiser.model import LabelDiffusionModel
from ...errors import CheckpointError, ParameterError
from ...evaluation.metrics import subcategory_report
from ...evaluation.reports import write_ablation_csv
from ...evaluation.runner import evaluate_scenes
from ...models.evaluation import ARReport
from ..config import RunConfig, write_resolved_config
from ..utils import ar_table, console, ensure_output_dir, require_existing_file
from .common import load_split, load_trained_model
from .evaluate import eval_settings

logger = logging.getLogger(__name__)


class AblationAxis(Enum):
    IMAGE_SIZE = "image_size"
    DDIM_STEPS = "ddim_steps"
    GUIDANCE_SCALE = "guidance_scale"
    DECODE_STRATEGY = "decode_strategy"

    @classmethod
    def parse(cls, text: str) -> "AblationAxis":
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join(axis.name for axis in cls)
            raise ParameterError(f"Unknown ablation axis '{text}' (expected one of {names})") from None


def parse_values(text: str) -> List[str]:
    values = [v.strip() for v in text.split(",") if v.strip()]
    if not values:
        raise ParameterError("ablate needs at least one value (--values)")
    return values


def _config_for(config: RunConfig, axis: AblationAxis, value: str) -> RunConfig:
    try:
        if axis is AblationAxis.IMAGE_SIZE:
            return replace(config, image_size=int(value))
        if axis is AblationAxis.DDIM_STEPS:
            return replace(config, ddim_steps=int(value))
        if axis is AblationAxis.GUIDANCE_SCALE:
            return replace(config, guidance_scale=float(value))
    except ValueError:
        raise ParameterError(f"Invalid {axis.name} value '{value}'") from None
    return replace(config, decode=value)


def plot_ablation(axis: AblationAxis, rows: List[Tuple[str, ARReport]], path: Path) -> Path:
    """Line plot of overall AR against the axis value."""
    labels = [value for value, _ in rows]
    overall = [report.overall for _, report in rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    if axis is AblationAxis.DECODE_STRATEGY:
        ax.plot(range(len(labels)), overall, marker="o")
        ax.set_xticks(range(len(labels)))
        ax.set_xticklabels(labels, rotation=15)
    else:
        ax.plot([float(v) for v in labels], overall, marker="o")
    ax.set_xlabel(axis.name.lower())
    ax.set_ylabel("overall AR")
    ax.set_ylim(0.0, 1.0)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path


def _plan(config: RunConfig, axis: AblationAxis, values: List[str]) -> List[Tuple[str, RunConfig, SceneManifest, str]]:
    """Resolve and check every value's dataset and checkpoint before any evaluation runs."""
    plan = []
    for value in values:
        run = _config_for(config, axis, value)
        dataset = config.dataset.replace("{value}", value)
        checkpoint = config.checkpoint.replace("{value}", value)
        scenes = load_split(run, run.eval_split, dataset)
        require_existing_file(checkpoint, "checkpoint", CheckpointError)
        if axis is AblationAxis.IMAGE_SIZE:
            size = scenes.load_scene(scenes.entries[0]).height if len(scenes) else None
            if size != run.image_size:
                raise ParameterError(f"Dataset {dataset} has {size}px scenes, not {run.image_size}px")
        plan.append((value, run, scenes, checkpoint))
    return plan


def run_ablate(args, config: RunConfig) -> None:
    """One row per axis value with the five ARs; writes ablation.csv and ablation.png."""
    axis = AblationAxis.parse(config.axis)
    values = parse_values(config.values)
    grid = config.grid()
    output = ensure_output_dir(config.output)
    plan = _plan(config, axis, values)

    models: Dict[str, LabelDiffusionModel] = {}
    rows: List[Tuple[str, ARReport]] = []
    for value, run, scenes, checkpoint in plan:
        if checkpoint not in models:
            models[checkpoint] = load_trained_model(run, checkpoint)
        records = evaluate_scenes(scenes, models[checkpoint], eval_settings(run))
        report = subcategory_report(records, grid)
        logger.info(f"{axis.name}={value}: overall AR {report.overall:.4f}")
        rows.append((value, report))

    write_ablation_csv(axis.name, rows, output / "ablation.csv")
    plot_ablation(axis, rows, output / "ablation.png")
    write_resolved_config(config, output)
    console.print(ar_table(rows, title=f"Ablation over {axis.name}", label=axis.name.lower()))
