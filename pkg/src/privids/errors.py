"""Exception hierarchy shared across the pipeline.

Exit-code mapping used by the CLI: configuration and usage problems exit 1,
data problems exit 2, numeric failures exit 3.
"""


class DataFormatError(ValueError):
    """Structurally broken input: ragged CSV rows, missing header, empty file."""

    exit_code = 2


class DataValidationError(ValueError):
    """Well-formed input whose content violates a contract (bad label values,
    unparseable numeric cells, shape mismatches, degenerate class counts)."""

    exit_code = 2


class UndefinedCorrelationError(ValueError):
    """Pearson correlation requested for a constant (zero variance) vector."""

    exit_code = 3


class SingularMatrixError(ValueError):
    """Rank-deficient least-squares design matrix; no minimum-norm fallback."""

    exit_code = 3


class ConfigError(ValueError):
    """Invalid or unknown pipeline configuration keys/values."""

    exit_code = 1
