"""Exception hierarchy shared by the library and the CLI.

Every error carries an ``exit_code`` so the CLI can map failures onto its
documented exit codes without inspecting messages.
"""


class LabelDiffusionError(Exception):
    """Base class for all label_diffusion errors."""

    exit_code = 1
    kind = "error"


class ParameterError(LabelDiffusionError, ValueError):
    """Invalid argument or configuration value."""

    kind = "parameter"


class ShapeError(LabelDiffusionError, ValueError):
    """Array or tensor shapes do not agree."""

    kind = "shape"


class BatchError(LabelDiffusionError, ValueError):
    """A batch cannot be assembled from the given requests."""

    kind = "batch"


class DataError(LabelDiffusionError, ValueError):
    """Input data is missing, empty or malformed."""

    exit_code = 2
    kind = "data"


class GenerationError(DataError):
    """Synthetic scene generation failed after bounded retries."""

    kind = "generation"


class ManifestError(DataError):
    """A dataset manifest entry could not be read."""

    kind = "manifest"


class NumericError(LabelDiffusionError, ArithmeticError):
    """A loss or gradient became non-finite."""

    exit_code = 3
    kind = "numeric"


class ModelError(LabelDiffusionError, RuntimeError):
    """The model is unusable (untrained or non-finite parameters)."""

    exit_code = 3
    kind = "model"


class CheckpointError(ModelError):
    """A checkpoint file could not be loaded."""

    exit_code = 2
    kind = "checkpoint"


class CheckpointVersionError(CheckpointError):
    """The checkpoint header carries an unsupported format version."""

    kind = "checkpoint-version"
