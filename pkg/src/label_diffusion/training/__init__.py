from .checkpoint import load_checkpoint, load_model, read_checkpoint, save_checkpoint
from .dataset import PhraseSampleDataset, TrainingBatch, collate_samples
from .gradcheck import GradCheckResult, finite_difference_check
from .loss import LossResult, denoising_loss, epsilon_mse
from .trainer import LOSS_CSV_HEADER, Trainer, TrainState, make_optimizer, new_train_state, train_step

__all__ = [
    "GradCheckResult",
    "LOSS_CSV_HEADER",
    "LossResult",
    "PhraseSampleDataset",
    "TrainState",
    "Trainer",
    "TrainingBatch",
    "collate_samples",
    "denoising_loss",
    "epsilon_mse",
    "finite_difference_check",
    "load_checkpoint",
    "load_model",
    "make_optimizer",
    "new_train_state",
    "read_checkpoint",
    "save_checkpoint",
    "train_step",
]
