import pytest

from tests.cli.helpers import SMALL_MODEL, run_cli


@pytest.fixture(scope="module")
def generated_dataset(tmp_path_factory):
    directory = tmp_path_factory.mktemp("cli") / "data"
    assert run_cli("gen", "-n", 6, "--image-size", 32, "--max-groups", 2, "--max-instances", 2, "--seed", 0, "--output", directory) == 0
    return directory


@pytest.fixture(scope="module")
def trained_run(tmp_path_factory, generated_dataset):
    output = tmp_path_factory.mktemp("cli") / "run"
    code = run_cli("train", "--dataset", generated_dataset, "--output", output, "--max-steps", 2, "--log-interval", 1, *SMALL_MODEL)
    assert code == 0
    return output
