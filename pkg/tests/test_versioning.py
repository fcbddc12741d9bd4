import pytest

from label_diffusion.errors import CheckpointVersionError, ManifestError
from label_diffusion.versioning import check_format_version


@pytest.mark.parametrize("found", ["1.0", "1", "1.0.3"])
def test_compatible_versions(found):
    assert check_format_version(found, "1.0", "file", ManifestError).major == 1


@pytest.mark.parametrize("found", ["2.0", "0.9", "1.1", "abc", None, 1.0])
def test_incompatible_versions(found):
    with pytest.raises(CheckpointVersionError):
        check_format_version(found, "1.0", "file", CheckpointVersionError)
