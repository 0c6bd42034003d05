"""Input validation helpers in the spirit of ``sklearn.utils.validation``."""
import numbers

import numpy as np
from sklearn.utils import check_array

from .exceptions import DimensionError, InvalidParameter


def check_positive_real(value, name):
    if not isinstance(value, numbers.Real) or isinstance(value, bool):
        raise InvalidParameter(f"{name} must be a real number, got {value!r}")
    if not np.isfinite(value) or value <= 0:
        raise InvalidParameter(f"{name} must be > 0, got {value!r}")
    return float(value)


def check_positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise InvalidParameter(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise InvalidParameter(f"{name} must be >= 1, got {value!r}")
    return int(value)


def check_nonneg_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise InvalidParameter(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise InvalidParameter(f"{name} must be >= 0, got {value!r}")
    return int(value)


def check_values(a):
    """Return ``a`` as a finite, non-empty 1-D float array."""
    values = getattr(a, "values", a)
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise InvalidParameter(f"sequence must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        raise InvalidParameter("sequence must have length >= 1")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameter("sequence entries must be finite")
    return arr


def check_sequences(X):
    """2-D batch of equal-length sequences, one per row."""
    return check_array(X, dtype=np.float64, ensure_2d=True)


def check_points(X, dim=None):
    """Points on the torus as an ``(n, d)`` array with coordinates in [0, 1)."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    arr = check_array(arr, dtype=np.float64)
    if dim is not None and arr.shape[1] != dim:
        raise DimensionError(f"expected points of dimension {dim}, got {arr.shape[1]}")
    if np.any(arr < 0) or np.any(arr >= 1):
        raise InvalidParameter("torus coordinates must lie in [0, 1)")
    return arr
