# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the linear dynamical system objective.

Same contracts as the numpy fallback: typed per-sequence loops over the
length-T recursion instead of blocked matrix products.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def simulate(double[:, ::1] A, double[::1] B, double[::1] C, double D,
             double[:, ::1] x):
    """Unroll h_{t+1} = A h_t + B x_t, y_t = C h_t + D x_t from h_0 = 0."""
    cdef Py_ssize_t N = x.shape[0], T = x.shape[1], d = A.shape[0]
    cdef Py_ssize_t n, t, i, j
    cdef double acc, xt
    out = np.empty((N, T))
    cdef double[:, ::1] y = out
    h_buf = np.zeros(d)
    hn_buf = np.zeros(d)
    cdef double[::1] h = h_buf
    cdef double[::1] hn = hn_buf
    for n in range(N):
        for i in range(d):
            h[i] = 0.0
        for t in range(T):
            xt = x[n, t]
            acc = D * xt
            for i in range(d):
                acc += C[i] * h[i]
            y[n, t] = acc
            for i in range(d):
                acc = B[i] * xt
                for j in range(d):
                    acc += A[i, j] * h[j]
                hn[i] = acc
            h, hn = hn, h
    return out


def loss_grad(double[:, ::1] A, double[::1] B, double[::1] C, double D,
              double[:, ::1] x, double[:, ::1] y, Py_ssize_t t1):
    """Tail squared loss and gradients (dA, dC, dD) by reverse accumulation."""
    cdef Py_ssize_t N = x.shape[0], T = x.shape[1], d = A.shape[0]
    cdef Py_ssize_t n, t, i, j
    cdef double tail = T - t1
    cdef double loss = 0.0, acc, xt, et

    H_buf = np.empty((T, d))
    lam_buf = np.empty(d)
    lamn_buf = np.empty(d)
    err_buf = np.empty(T)
    dA_out = np.zeros((d, d))
    dC_out = np.zeros(d)
    cdef double[:, ::1] H = H_buf
    cdef double[::1] lam = lam_buf
    cdef double[::1] lamn = lamn_buf
    cdef double[::1] err = err_buf
    cdef double[:, ::1] dA = dA_out
    cdef double[::1] dC = dC_out
    cdef double dD = 0.0

    for n in range(N):
        for i in range(d):
            H[0, i] = 0.0
        for t in range(T):
            xt = x[n, t]
            acc = D * xt
            for i in range(d):
                acc += C[i] * H[t, i]
            err[t] = acc - y[n, t]
            if t >= t1:
                loss += err[t] * err[t]
            if t + 1 < T:
                for i in range(d):
                    acc = B[i] * xt
                    for j in range(d):
                        acc += A[i, j] * H[t, j]
                    H[t + 1, i] = acc
        for i in range(d):
            lam[i] = 0.0
        for t in range(T - 1, -1, -1):
            et = 2.0 * err[t] / tail if t >= t1 else 0.0
            for i in range(d):
                for j in range(d):
                    dA[i, j] += lam[i] * H[t, j]
                dC[i] += et * H[t, i]
            dD += et * x[n, t]
            for i in range(d):
                acc = C[i] * et
                for j in range(d):
                    acc += A[j, i] * lam[j]
                lamn[i] = acc
            lam, lamn = lamn, lam

    loss /= tail * N
    dA_out /= N
    dC_out /= N
    return loss, dA_out, dC_out, dD / N
