import csv
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Tuple

import torch
from torch.utils.data import DataLoader

from ..denoiser.model import LabelDiffusionModel
from ..errors import NumericError, ParameterError
from ..models.config import TrainConfig
from ..text.conditioning import conditional_dropout
from .dataset import PhraseSampleDataset, TrainingBatch, collate_samples
from .loss import denoising_loss

logger = logging.getLogger(__name__)

LOSS_CSV_HEADER = ("step", "loss", "wall_ms")


@dataclass
class TrainState:
    """Parameters (via the model), Adam moments, step counter and RNG state."""

    model: LabelDiffusionModel
    optimizer: torch.optim.Optimizer
    generator: torch.Generator
    step: int = 0
    last_loss: Optional[float] = None


def make_optimizer(model: LabelDiffusionModel, config: TrainConfig) -> torch.optim.Adam:
    return torch.optim.Adam(
        list(model.denoising_parameters()),
        lr=config.learning_rate,
        betas=(config.beta1, config.beta2),
        eps=config.adam_eps,
    )


def new_train_state(model: LabelDiffusionModel, config: TrainConfig) -> TrainState:
    if config.total_steps != model.config.total_steps:
        raise ParameterError(
            f"Training T={config.total_steps} does not match the model schedule T={model.config.total_steps}"
        )
    generator = torch.Generator().manual_seed(config.seed)
    return TrainState(model=model, optimizer=make_optimizer(model, config), generator=generator)


def _first_nonfinite_gradient(model: LabelDiffusionModel) -> Optional[str]:
    for name, parameter in model.named_parameters():
        if parameter.grad is not None and not bool(torch.isfinite(parameter.grad).all()):
            return name
    return None


def train_step(state: TrainState, batch: TrainingBatch, config: TrainConfig) -> TrainState:
    """One Adam update on the denoising loss with per-sample t, noise and dropout.

    On a non-finite gradient the parameters, moments, step counter and RNG
    state are left exactly as they were and NumericError is raised.
    """
    model = state.model
    generator = state.generator
    rng_state = generator.get_state()
    model.train()

    size = len(batch)
    t = torch.randint(0, model.config.total_steps, (size,), generator=generator)
    eps = torch.randn(batch.x0.shape, generator=generator, dtype=model.dtype)
    encoder = model.phrase_encoder
    cond = conditional_dropout(encoder.condition(batch.token_ids), encoder.null(size), config.p_drop, generator)

    state.optimizer.zero_grad(set_to_none=True)
    try:
        result = denoising_loss(model, batch, t, eps, cond=cond)
    except NumericError:
        generator.set_state(rng_state)
        raise
    result.loss.backward()

    bad = _first_nonfinite_gradient(model)
    if bad is not None:
        state.optimizer.zero_grad(set_to_none=True)
        generator.set_state(rng_state)
        raise NumericError(f"Non-finite gradient in parameter '{bad}' at step {state.step}")

    state.optimizer.step()
    state.step += 1
    model.trained_steps += 1
    state.last_loss = float(result.loss.detach())
    return state


@dataclass
class Trainer:
    """Epoch loop over a phrase dataset with seeded batch order and resumption.

    Batch order of epoch ``e`` is a permutation seeded by ``seed + e``, so a
    run resumed at any step replays the same batches an uninterrupted run
    would have seen.
    """

    state: TrainState
    config: TrainConfig
    dataset: PhraseSampleDataset
    output_dir: Optional[Path] = None
    checkpoint_file: Optional[Path] = None
    on_step: Optional[Callable[[TrainState], None]] = None
    history: List[Tuple[int, float]] = field(default_factory=list)

    @property
    def steps_per_epoch(self) -> int:
        return math.ceil(len(self.dataset) / self.config.batch_size)

    @property
    def planned_steps(self) -> int:
        total = self.config.epochs * self.steps_per_epoch
        if self.config.max_steps:
            total = min(total, self.config.max_steps)
        return total

    @property
    def loss_csv_path(self) -> Optional[Path]:
        return self.output_dir / "loss.csv" if self.output_dir else None

    @property
    def checkpoint_path(self) -> Optional[Path]:
        if self.checkpoint_file is not None:
            return self.checkpoint_file
        return self.output_dir / "checkpoint.pt" if self.output_dir else None

    def _loader(self, epoch: int) -> DataLoader:
        order = torch.Generator().manual_seed(self.config.seed + epoch)
        return DataLoader(
            self.dataset,
            batch_size=self.config.batch_size,
            shuffle=True,
            generator=order,
            num_workers=self.config.num_workers,
            collate_fn=collate_samples,
        )

    def _append_loss_row(self, step: int, loss: float, wall_ms: int) -> None:
        path = self.loss_csv_path
        if path is None:
            return
        is_new = not path.exists()
        with path.open("a", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            if is_new:
                writer.writerow(LOSS_CSV_HEADER)
            writer.writerow((step, f"{loss:.8f}", wall_ms))

    def _save(self) -> None:
        from .checkpoint import save_checkpoint

        if self.checkpoint_path is not None:
            save_checkpoint(self.state, self.checkpoint_path, self.config)

    def run(self) -> TrainState:
        if self.output_dir is not None:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        planned = self.planned_steps
        state = self.state
        if state.step >= planned:
            logger.info(f"Nothing to do: step {state.step} already reaches the planned {planned} steps")
            return state
        logger.info(
            f"Training from step {state.step} to {planned} "
            f"({len(self.dataset)} phrases, {self.steps_per_epoch} steps/epoch)"
        )
        started = time.monotonic()
        epoch, skip = divmod(state.step, self.steps_per_epoch)
        while state.step < planned:
            for index, batch in enumerate(self._loader(epoch)):
                if index < skip:
                    continue
                if state.step >= planned:
                    break
                train_step(state, batch, self.config)
                self.history.append((state.step, state.last_loss))
                if state.step % self.config.log_interval == 0 or state.step == planned:
                    wall_ms = int((time.monotonic() - started) * 1000)
                    logger.info(f"step {state.step}: loss {state.last_loss:.6f}")
                    self._append_loss_row(state.step, state.last_loss, wall_ms)
                interval = self.config.checkpoint_interval
                if interval and state.step % interval == 0:
                    logger.debug(f"Periodic checkpoint at step {state.step}")
                    self._save()
                if self.on_step is not None:
                    self.on_step(state)
            epoch += 1
            skip = 0
        self._save()
        return state


__all__ = [
    "LOSS_CSV_HEADER",
    "TrainState",
    "Trainer",
    "make_optimizer",
    "new_train_state",
    "train_step",
]
