# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled gate-application kernels for complex128 statevectors.

Qubit 0 is the most significant bit of the basis index; the first target
is the most significant bit of the gate's local index.
"""
import numpy as np

cimport cython


cdef inline Py_ssize_t _insert_zeros(Py_ssize_t c, Py_ssize_t[::1] pos, Py_ssize_t w) noexcept nogil:
    cdef Py_ssize_t i, p
    for i in range(w):
        p = pos[i]
        c = ((c >> p) << (p + 1)) | (c & ((<Py_ssize_t>1 << p) - 1))
    return c


def _offsets(int n, targets):
    cdef Py_ssize_t w = len(targets)
    cdef Py_ssize_t dim = <Py_ssize_t>1 << w
    offs = np.zeros(dim, dtype=np.intp)
    cdef Py_ssize_t[::1] o = offs
    cdef Py_ssize_t l, r
    for l in range(dim):
        for r in range(w):
            if (l >> (w - 1 - r)) & 1:
                o[l] |= <Py_ssize_t>1 << (n - 1 - targets[r])
    pos = np.array(sorted(n - 1 - t for t in targets), dtype=np.intp)
    return offs, pos


def apply_dense(const double complex[::1] state, int n, targets, const double complex[:, ::1] mat):
    cdef Py_ssize_t w = len(targets)
    cdef Py_ssize_t dim = <Py_ssize_t>1 << w
    cdef Py_ssize_t rest = <Py_ssize_t>1 << (n - w)
    offs_arr, pos_arr = _offsets(n, targets)
    cdef Py_ssize_t[::1] offs = offs_arr
    cdef Py_ssize_t[::1] pos = pos_arr
    out_arr = np.empty(state.shape[0], dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    tmp_arr = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] tmp = tmp_arr
    cdef Py_ssize_t c, base, l, r
    cdef double complex acc
    with nogil:
        for c in range(rest):
            base = _insert_zeros(c, pos, w)
            for l in range(dim):
                tmp[l] = state[base + offs[l]]
            for r in range(dim):
                acc = 0
                for l in range(dim):
                    acc = acc + mat[r, l] * tmp[l]
                out[base + offs[r]] = acc
    return out_arr


def apply_perm(const double complex[::1] state, int n, targets,
               const Py_ssize_t[::1] perm, const double complex[::1] phases):
    cdef Py_ssize_t w = len(targets)
    cdef Py_ssize_t dim = <Py_ssize_t>1 << w
    cdef Py_ssize_t rest = <Py_ssize_t>1 << (n - w)
    offs_arr, pos_arr = _offsets(n, targets)
    cdef Py_ssize_t[::1] offs = offs_arr
    cdef Py_ssize_t[::1] pos = pos_arr
    out_arr = np.empty(state.shape[0], dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t c, base, l
    with nogil:
        for c in range(rest):
            base = _insert_zeros(c, pos, w)
            for l in range(dim):
                out[base + offs[perm[l]]] = phases[l] * state[base + offs[l]]
    return out_arr
