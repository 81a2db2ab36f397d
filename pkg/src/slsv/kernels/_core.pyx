# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled remap kernels; mirrors the numpy backend in _ref.py."""
import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def shift_remap(U, m, BL, BR, bint periodic):
    U = np.ascontiguousarray(U, dtype=np.float64)
    m = np.ascontiguousarray(m, dtype=np.int64)
    BL = np.ascontiguousarray(BL, dtype=np.float64)
    BR = np.ascontiguousarray(BR, dtype=np.float64)
    out = np.empty_like(U)
    _shift_remap(U, m, BL, BR, periodic, out)
    return out


cdef void _shift_remap(double[:, :, ::1] U, long[::1] m,
                       double[:, :, ::1] BL, double[:, :, ::1] BR,
                       bint periodic, double[:, :, ::1] out) noexcept nogil:
    cdef Py_ssize_t L = U.shape[0], N = U.shape[1], K = U.shape[2]
    cdef Py_ssize_t l, i, p, n
    cdef long jr, jl
    cdef double acc
    for l in range(L):
        for i in range(N):
            jr = i - m[l]
            jl = jr - 1
            if periodic:
                jr = jr % N
                if jr < 0:
                    jr += N
                jl = jl % N
                if jl < 0:
                    jl += N
                for p in range(K):
                    acc = 0.0
                    for n in range(K):
                        acc += BL[l, p, n] * U[l, jl, n] + BR[l, p, n] * U[l, jr, n]
                    out[l, i, p] = acc
            else:
                for p in range(K):
                    acc = 0.0
                    if 0 <= jl < N:
                        for n in range(K):
                            acc += BL[l, p, n] * U[l, jl, n]
                    if 0 <= jr < N:
                        for n in range(K):
                            acc += BR[l, p, n] * U[l, jr, n]
                    out[l, i, p] = acc


def cumulative_eval(modal, x, double x_lo, double h, bint periodic):
    modal = np.ascontiguousarray(modal, dtype=np.float64)
    x = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t N = modal.shape[0]
    prefix = np.empty(N + 1, dtype=np.float64)
    prefix[0] = 0.0
    np.cumsum(h * modal[:, 0], out=prefix[1:])
    out = np.empty_like(x)
    _cumulative_eval(modal, prefix, x.ravel(), x_lo, h, periodic, out.ravel())
    return out


cdef void _cumulative_eval(double[:, ::1] modal, double[::1] prefix,
                           double[::1] x, double x_lo, double h,
                           bint periodic, double[::1] out) noexcept nogil:
    cdef Py_ssize_t N = modal.shape[0], K = modal.shape[1]
    cdef Py_ssize_t q, n
    cdef long cell
    cdef double t, wraps, base, s, acc
    cdef double p_prev, p_cur, p_next, q_n
    cdef double total = prefix[N]
    for q in range(x.shape[0]):
        t = (x[q] - x_lo) / h
        base = 0.0
        if periodic:
            wraps = t // N
            t = t - wraps * N
            base = wraps * total
        else:
            if t < 0.0:
                t = 0.0
            elif t > N:
                t = <double> N
        cell = <long> t
        if cell > N - 1:
            cell = N - 1
        s = 2.0 * (t - cell) - 1.0
        if s < -1.0:
            s = -1.0
        elif s > 1.0:
            s = 1.0
        # accumulate modal[cell, n] * Q_n(s) via the Legendre recurrence
        p_prev = 1.0          # P_0
        p_cur = s             # P_1
        acc = modal[cell, 0] * (s + 1.0)
        for n in range(1, K):
            p_next = ((2 * n + 1) * s * p_cur - n * p_prev) / (n + 1)
            q_n = (p_next - p_prev) / (2 * n + 1)
            acc += modal[cell, n] * q_n
            p_prev = p_cur
            p_cur = p_next
        out[q] = base + prefix[cell] + 0.5 * h * acc
