"""Dense real vectors: validation helpers.

Points and gradients are plain 1-D float64 numpy arrays throughout the
package; these helpers enforce the construction invariants (finiteness,
matching dimension) at API boundaries.
"""

import numpy as np

from .errors import DimensionMismatchError, InvalidArgumentError


def as_vector(x, dim=None):
    """Coerce ``x`` to a 1-D float64 array, checking finiteness.

    If ``dim`` is given, the length must match.
    """
    v = np.asarray(x, dtype=float)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1:
        raise InvalidArgumentError(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidArgumentError("vector contains NaN or Inf entries")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {v.shape[0]}")
    return v


def check_same_dim(*vectors):
    """Raise unless all vectors share one dimension; returns it."""
    dims = {np.asarray(v).shape[0] for v in vectors}
    if len(dims) != 1:
        raise DimensionMismatchError(f"mixed dimensions {sorted(dims)}")
    return dims.pop()
