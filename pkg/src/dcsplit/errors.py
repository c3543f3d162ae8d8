"""Exception types shared across the package."""

import numpy as np


class SingularMatrix(np.linalg.LinAlgError):
    """A pivot fell below the singularity threshold during factorization."""


class NotConverged(RuntimeError):
    """An iterative procedure was asked for a result it did not reach."""


class NonFinite(FloatingPointError):
    """An oracle produced NaN or Inf."""


class ConfigError(ValueError):
    """Invalid solver or experiment configuration."""


class DataError(ValueError):
    """Base class for dataset ingestion failures."""


class ParseError(DataError):
    def __init__(self, path, row, column, value):
        self.path, self.row, self.column, self.value = path, row, column, value
        super().__init__(
            f"{path}: row {row}, column {column!r}: cannot parse {value!r} as a number")


class MissingColumn(DataError):
    pass


class SingleClass(DataError):
    pass


class EmptyInput(ValueError):
    pass
