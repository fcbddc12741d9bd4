import json

from label_diffusion.data import load_manifest
from tests.cli.helpers import run_cli


def test_gen_writes_manifest(generated_dataset):
    manifest = load_manifest(generated_dataset)
    assert len(manifest) == 6
    assert (generated_dataset / "resolved_config.txt").is_file()
    header = json.loads((generated_dataset / "manifest.jsonl").read_text(encoding="utf-8").splitlines()[0])
    assert header == {"format_version": "1.0"}


def test_gen_is_deterministic(tmp_path, generated_dataset):
    again = tmp_path / "again"
    assert run_cli("gen", "-n", 6, "--image-size", 32, "--max-groups", 2, "--max-instances", 2, "--seed", 0, "--output", again) == 0
    assert (again / "manifest.jsonl").read_bytes() == (generated_dataset / "manifest.jsonl").read_bytes()
    assert (again / "images" / "0003.png").read_bytes() == (generated_dataset / "images" / "0003.png").read_bytes()


def test_gen_rejects_bad_image_size(tmp_path, capsys):
    assert run_cli("gen", "-n", 2, "--image-size", 30, "--output", tmp_path / "bad") == 1
    assert "error: parameter:" in capsys.readouterr().err
