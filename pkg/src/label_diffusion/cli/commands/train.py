import logging
from pathlib import Path

import torch

from ...codec.label_decoder import train_label_autoencoder
from ...denoiser.model import LabelDiffusionModel
from ...errors import CheckpointError
from ...training.checkpoint import load_checkpoint, save_checkpoint
from ...training.dataset import PhraseSampleDataset
from ...training.trainer import Trainer, new_train_state
from ..config import RunConfig, write_resolved_config
from ..utils import console, ensure_output_dir, ensure_writable_file
from .common import load_split

logger = logging.getLogger(__name__)

CHECKPOINT_NAME = "checkpoint.pt"


def run_train(args, config: RunConfig) -> None:
    """Train a model on the train split; writes checkpoint.pt and loss.csv."""
    train_split = load_split(config, "train")
    output = ensure_output_dir(config.output)
    train_config = config.train_config()
    checkpoint = Path(config.checkpoint) if config.checkpoint else output / CHECKPOINT_NAME
    ensure_writable_file(checkpoint, CheckpointError)

    if config.resume and checkpoint.is_file():
        state = load_checkpoint(checkpoint, train_config)
        console.print(f"Resuming from step {state.step} ({checkpoint})")
    else:
        if config.resume:
            logger.warning(f"No checkpoint at {checkpoint}; starting a new run")
        torch.manual_seed(config.seed)
        model = LabelDiffusionModel(config.model_config())
        state = new_train_state(model, train_config)

    dataset = PhraseSampleDataset.from_scenes(train_split, state.model.vocab)
    trainer = Trainer(state, train_config, dataset, output_dir=output, checkpoint_file=checkpoint)
    with console.status(f"Training for {trainer.planned_steps} steps..."):
        state = trainer.run()

    if config.label_decoder_epochs > 0 and state.model.label_decoder is None:
        report = train_label_autoencoder(train_split, config.label_decoder_epochs, seed=config.seed)
        state.model.attach_label_decoder(report.decoder)
        console.print(f"Label decoder reconstruction IoU: {report.reconstruction_iou:.4f}")

    save_checkpoint(state, checkpoint, train_config)
    write_resolved_config(config, output)
    loss = "n/a" if state.last_loss is None else f"{state.last_loss:.6f}"
    console.print(f"Trained to step {state.step}, last loss {loss}; checkpoint {checkpoint}")
