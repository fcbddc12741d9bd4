import json
import tracemalloc

import numpy as np
import pytest

from label_diffusion.data import MANIFEST_NAME, load_manifest, write_manifest
from label_diffusion.data.generator import generate_scenes
from label_diffusion.errors import ManifestError
from label_diffusion.models.scene import SceneSpec


def test_round_trip(dataset_dir, tiny_scenes):
    manifest = load_manifest(dataset_dir)
    assert len(manifest) == len(tiny_scenes)
    assert manifest.phrase_count == sum(len(s.phrases) for s in tiny_scenes)
    for original, loaded in zip(tiny_scenes, manifest):
        assert loaded.seed == original.seed
        assert np.allclose(loaded.image, original.image, atol=1e-6)
        assert np.array_equal(loaded.background_mask, original.background_mask)
        assert [p.text for p in loaded.phrases] == [p.text for p in original.phrases]
        for lp, op in zip(loaded.phrases, original.phrases):
            assert np.array_equal(lp.mask, op.mask)
            assert (lp.thing_stuff, lp.number) == (op.thing_stuff, op.number)


def test_layout(dataset_dir):
    lines = (dataset_dir / MANIFEST_NAME).read_text(encoding="utf-8").splitlines()
    assert json.loads(lines[0]) == {"format_version": "1.0"}
    first = json.loads(lines[1])
    assert first["image"] == "images/0000.png"
    assert first["phrases"][0]["mask"] == "masks/0000_0.png"
    assert (dataset_dir / "masks" / "0000_bg.png").is_file()


def test_missing_manifest(tmp_path):
    with pytest.raises(ManifestError):
        load_manifest(tmp_path)


def test_missing_mask_names_file_and_entry(dataset_dir):
    (dataset_dir / "masks" / "0001_0.png").unlink()
    manifest = load_manifest(dataset_dir)
    with pytest.raises(ManifestError, match=r"0001_0\.png") as excinfo:
        list(manifest)
    assert "scene 1" in str(excinfo.value)


def test_bad_tag(dataset_dir):
    path = dataset_dir / MANIFEST_NAME
    lines = path.read_text(encoding="utf-8").splitlines()
    record = json.loads(lines[1])
    record["phrases"][0]["thing_stuff"] = "gadget"
    lines[1] = json.dumps(record)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(ManifestError, match="bad tag"):
        load_manifest(dataset_dir)


def test_unsupported_version(dataset_dir):
    path = dataset_dir / MANIFEST_NAME
    lines = path.read_text(encoding="utf-8").splitlines()
    lines[0] = json.dumps({"format_version": "2.0"})
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(ManifestError, match="format_version"):
        load_manifest(dataset_dir)


def test_invalid_json(dataset_dir):
    path = dataset_dir / MANIFEST_NAME
    path.write_text(path.read_text(encoding="utf-8") + "{not json\n", encoding="utf-8")
    with pytest.raises(ManifestError, match="invalid JSON"):
        load_manifest(dataset_dir)


def test_subset_is_lazy(dataset_dir):
    manifest = load_manifest(dataset_dir)
    (dataset_dir / "images" / "0000.png").unlink()
    subset = manifest.subset([2, 3])
    assert len(subset) == 2
    assert [scene.seed for scene in subset] == [2, 3]


def test_write_returns_manifest(tmp_path, tiny_scenes):
    manifest = write_manifest(tiny_scenes[:1], tmp_path / "one")
    assert len(manifest) == 1
    assert manifest.entries[0].line == 2


STREAM_SPEC = SceneSpec(image_size=16, max_groups=1, max_instances=1)


@pytest.fixture(scope="module")
def streaming_datasets(tmp_path_factory):
    root = tmp_path_factory.mktemp("streaming")
    write_manifest(generate_scenes(100, seed=0, spec=STREAM_SPEC), root / "small")
    write_manifest(generate_scenes(1000, seed=0, spec=STREAM_SPEC), root / "large")
    return root / "small", root / "large"


def streaming_peak(directory):
    """Peak bytes allocated while iterating a loaded manifest, one scene at a time."""
    manifest = load_manifest(directory)
    tracemalloc.start()
    try:
        baseline, _ = tracemalloc.get_traced_memory()
        tracemalloc.reset_peak()
        seen = 0
        for scene in manifest:
            seen += len(scene.phrases)
        _, peak = tracemalloc.get_traced_memory()
    finally:
        tracemalloc.stop()
    assert seen == manifest.phrase_count
    return peak - baseline


def test_streaming_memory_does_not_grow_with_dataset_size(streaming_datasets):
    small, large = streaming_datasets
    streaming_peak(small)
    small_peak = streaming_peak(small)
    large_peak = streaming_peak(large)
    assert len(load_manifest(large)) == 10 * len(load_manifest(small))
    assert large_peak <= 2 * small_peak + 64 * 1024, (small_peak, large_peak)
