import csv

from label_diffusion.training import load_checkpoint, load_model
from tests.cli.helpers import SMALL_MODEL, run_cli


def test_train_writes_checkpoint_and_loss(trained_run):
    model = load_model(trained_run / "checkpoint.pt")
    assert int(model.trained_steps) == 2
    with (trained_run / "loss.csv").open(newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["step", "loss", "wall_ms"]
    assert [row[0] for row in rows[1:]] == ["1", "2"]
    assert "max_steps=2" in (trained_run / "resolved_config.txt").read_text(encoding="utf-8")


def test_train_resume_continues_step_counter(tmp_path, generated_dataset):
    output = tmp_path / "resume"
    assert run_cli("train", "--dataset", generated_dataset, "--output", output, "--max-steps", 1, *SMALL_MODEL) == 0
    assert run_cli("train", "--dataset", generated_dataset, "--output", output, "--max-steps", 3, "--resume", *SMALL_MODEL) == 0
    assert load_checkpoint(output / "checkpoint.pt").step == 3


def test_train_missing_dataset(tmp_path, capsys):
    code = run_cli("train", "--dataset", tmp_path / "nowhere", "--output", tmp_path / "out", *SMALL_MODEL)
    assert code == 2
    err = capsys.readouterr().err
    assert "error: manifest:" in err
    assert "nowhere" in err


def test_train_with_label_decoder(tmp_path, generated_dataset):
    output = tmp_path / "decoder"
    code = run_cli(
        "train", "--dataset", generated_dataset, "--output", output, "--max-steps", 1,
        "--label-decoder-epochs", 1, *SMALL_MODEL,
    )
    assert code == 0
    assert load_model(output / "checkpoint.pt").label_decoder is not None


def test_train_rejects_unwritable_checkpoint_before_training(tmp_path, generated_dataset, capsys):
    blocked = tmp_path / "blocked.pt"
    blocked.mkdir()
    output = tmp_path / "never"
    code = run_cli("train", "--dataset", generated_dataset, "--output", output, "--checkpoint", blocked, *SMALL_MODEL)
    assert code == 2
    assert "error: checkpoint:" in capsys.readouterr().err
    assert not (output / "loss.csv").exists()
