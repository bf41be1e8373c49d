"""Kernel selection: the compiled extension when importable, numpy otherwise.

Set ``SHALLOWQ_PURE_PYTHON=1`` to force the numpy kernels.
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_c = None
if not os.environ.get("SHALLOWQ_PURE_PYTHON"):
    try:
        from . import _ckernels as _c

        BACKEND = "cython"
    except ImportError:  # extension not built
        _c = None


def apply_dense(state: np.ndarray, n: int, targets, mat: np.ndarray) -> np.ndarray:
    if _c is not None and state.dtype == np.complex128:
        return _c.apply_dense(state, n, list(targets), np.ascontiguousarray(mat, np.complex128))
    return _kernels_py.apply_dense(state, n, targets, mat)


def apply_perm(state: np.ndarray, n: int, targets, perm: np.ndarray, phases: np.ndarray) -> np.ndarray:
    if _c is not None and state.dtype == np.complex128:
        return _c.apply_perm(
            state, n, list(targets), np.asarray(perm, np.intp), np.asarray(phases, np.complex128)
        )
    return _kernels_py.apply_perm(state, n, targets, perm, phases)


apply_perm_exact = _kernels_py.apply_perm_exact
