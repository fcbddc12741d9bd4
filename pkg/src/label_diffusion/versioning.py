"""
Package and file-format version handling.

Checkpoints and dataset manifests carry a ``format_version`` header. A file
is readable when its major version equals the supported one and its minor
version is not newer.
"""
import logging
from typing import Optional, Type

from packaging.version import InvalidVersion, Version

from .errors import LabelDiffusionError

try:
    from importlib.metadata import version
except ImportError:
    from importlib_metadata import version

logger = logging.getLogger(__name__)

PACKAGE_NAME = "label-diffusion"
CHECKPOINT_FORMAT_VERSION = "1.0"
MANIFEST_FORMAT_VERSION = "1.0"


def get_package_version() -> Optional[str]:
    """Get the installed package version."""
    try:
        return version(PACKAGE_NAME)
    except Exception as e:
        logger.warning(f"Could not determine package version: {e}")
        return None


def check_format_version(found, supported: str, what: str, error: Type[LabelDiffusionError]) -> Version:
    """Parse ``found`` and raise ``error`` unless it is compatible with ``supported``."""
    if not isinstance(found, str):
        raise error(f"{what}: missing or malformed format_version header ({found!r})")
    try:
        parsed = Version(found)
    except InvalidVersion:
        raise error(f"{what}: unparsable format_version {found!r}") from None
    expected = Version(supported)
    if parsed.major != expected.major or parsed.minor > expected.minor:
        raise error(f"{what}: format_version {found} is not supported (expected {supported})")
    logger.debug(f"{what}: format_version {found} accepted")
    return parsed
