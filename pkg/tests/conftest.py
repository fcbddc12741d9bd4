import logging
import sys
from pathlib import Path

import numpy as np
import pytest
import torch

# Ensure the package under test can be imported when running tests without
# installing it into the environment.
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from label_diffusion.data.generator import generate_scene  # noqa: E402
from label_diffusion.data.manifest import write_manifest  # noqa: E402
from label_diffusion.denoiser.model import LabelDiffusionModel  # noqa: E402
from label_diffusion.training.dataset import PhraseSampleDataset, collate_samples  # noqa: E402
from tests.factories import TINY_SPEC, tiny_config  # noqa: E402

logger = logging.getLogger(__name__)


@pytest.fixture
def tiny_model_config():
    return tiny_config()


@pytest.fixture
def tiny_model(tiny_model_config):
    torch.manual_seed(0)
    return LabelDiffusionModel(tiny_model_config)


@pytest.fixture(scope="session")
def tiny_scenes():
    return [generate_scene(seed, TINY_SPEC) for seed in range(4)]


@pytest.fixture
def dataset_dir(tmp_path, tiny_scenes):
    directory = tmp_path / "dataset"
    write_manifest(tiny_scenes, directory)
    logger.info(f"Wrote tiny dataset to {directory}")
    return directory


@pytest.fixture
def tiny_batch(tiny_model, tiny_scenes):
    dataset = PhraseSampleDataset.from_scenes(tiny_scenes[:2], tiny_model.vocab)
    return collate_samples([dataset[i] for i in range(min(4, len(dataset)))])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
