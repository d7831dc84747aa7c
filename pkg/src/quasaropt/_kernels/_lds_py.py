"""Pure-numpy kernels for the linear dynamical system objective.

Both kernels are vectorized across sequences: the hidden state is carried as
an (N, d) block through the length-T recursion, so the Python-level loop runs
over time only.  The compiled twin in ``_lds_cy`` implements the same
signatures with typed per-sequence loops.
"""

import numpy as np


def simulate(A, B, C, D, x):
    """Unroll h_{t+1} = A h_t + B x_t, y_t = C h_t + D x_t from h_0 = 0.

    ``x`` is (N, T); returns the (N, T) output array.
    """
    A = np.ascontiguousarray(A, dtype=float)
    B = np.ascontiguousarray(B, dtype=float).ravel()
    C = np.ascontiguousarray(C, dtype=float).ravel()
    x = np.ascontiguousarray(x, dtype=float)
    N, T = x.shape
    d = A.shape[0]
    y = np.empty((N, T))
    h = np.zeros((N, d))
    for t in range(T):
        y[:, t] = h @ C + D * x[:, t]
        h = h @ A.T + np.outer(x[:, t], B)
    return y


def loss_grad(A, B, C, D, x, y, t1):
    """Tail squared loss and its exact gradient by reverse accumulation.

    Loss: mean over sequences of (1/(T-t1)) * sum_{t>=t1} (yhat_t - y_t)^2.
    Returns (loss, dA, dC, dD) with gradients averaged over sequences.
    """
    A = np.ascontiguousarray(A, dtype=float)
    B = np.ascontiguousarray(B, dtype=float).ravel()
    C = np.ascontiguousarray(C, dtype=float).ravel()
    x = np.ascontiguousarray(x, dtype=float)
    y = np.ascontiguousarray(y, dtype=float)
    N, T = x.shape
    d = A.shape[0]
    tail = T - t1

    H = np.empty((T, N, d))
    h = np.zeros((N, d))
    err = np.empty((N, T))
    for t in range(T):
        H[t] = h
        err[:, t] = h @ C + D * x[:, t] - y[:, t]
        h = h @ A.T + np.outer(x[:, t], B)
    loss = float(np.mean(np.sum(err[:, t1:] ** 2, axis=1)) / tail)

    # e_t = dLoss/dyhat_t, zero before the tail window
    e = np.zeros((N, T))
    e[:, t1:] = 2.0 * err[:, t1:] / tail
    dA = np.zeros((d, d))
    dC = np.zeros(d)
    dD = 0.0
    lam = np.zeros((N, d))
    for t in range(T - 1, -1, -1):
        dA += lam.T @ H[t]
        dC += e[:, t] @ H[t]
        dD += float(e[:, t] @ x[:, t])
        lam = np.outer(e[:, t], C) + lam @ A
    return loss, dA / N, dC / N, dD / N
