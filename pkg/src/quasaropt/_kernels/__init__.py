"""Hot kernels for the dynamical-system objective.

Prefers the compiled extension when it built; falls back to the numpy
implementation otherwise.  ``USING_COMPILED`` records which one is active.
Both expose ``simulate`` and ``loss_grad`` with identical contracts.
"""

import numpy as np

from . import _lds_py

try:
    from . import _lds_cy as _impl
    USING_COMPILED = True
except ImportError:
    _impl = _lds_py
    USING_COMPILED = False


def _prep(A, B, C, x, y=None):
    A = np.ascontiguousarray(A, dtype=float)
    B = np.ascontiguousarray(np.asarray(B, dtype=float).ravel())
    C = np.ascontiguousarray(np.asarray(C, dtype=float).ravel())
    x = np.ascontiguousarray(np.atleast_2d(x), dtype=float)
    if y is None:
        return A, B, C, x
    return A, B, C, x, np.ascontiguousarray(np.atleast_2d(y), dtype=float)


def simulate(A, B, C, D, x):
    A, B, C, x = _prep(A, B, C, x)
    return np.asarray(_impl.simulate(A, B, C, float(D), x))


def loss_grad(A, B, C, D, x, y, t1):
    A, B, C, x, y = _prep(A, B, C, x, y)
    loss, dA, dC, dD = _impl.loss_grad(A, B, C, float(D), x, y, int(t1))
    return float(loss), np.asarray(dA), np.asarray(dC), float(dD)
