"""Pure numpy gate-application kernels.

Always used for the exact backend (object arrays of Cyclotomic); used for
complex128 states only when the compiled module is unavailable.
"""
from __future__ import annotations

import numpy as np


def _front(state: np.ndarray, n: int, targets) -> tuple[np.ndarray, tuple[int, ...]]:
    w = len(targets)
    psi = np.moveaxis(state.reshape((2,) * n), list(targets), list(range(w)))
    return psi.reshape((1 << w, -1)), psi.shape


def _back(psi: np.ndarray, shape, n: int, targets) -> np.ndarray:
    w = len(targets)
    out = np.moveaxis(psi.reshape(shape), list(range(w)), list(targets))
    return np.ascontiguousarray(out).reshape(-1)


def apply_dense(state: np.ndarray, n: int, targets, mat: np.ndarray) -> np.ndarray:
    psi, shape = _front(state, n, targets)
    if psi.dtype == object:
        out = np.empty_like(psi)
        for r in range(mat.shape[0]):
            acc = None
            for col in range(mat.shape[1]):
                m = mat[r, col]
                if m:
                    term = psi[col] * m
                    acc = term if acc is None else acc + term
            out[r] = acc if acc is not None else psi[0] * 0
    else:
        out = mat @ psi
    return _back(out, shape, n, targets)


def apply_perm(
    state: np.ndarray, n: int, targets, perm: np.ndarray, phases: np.ndarray
) -> np.ndarray:
    """Map basis |l> on the targets to phases[l] |perm[l]>."""
    psi, shape = _front(state, n, targets)
    out = np.empty_like(psi)
    if psi.dtype == object:
        for l, (dst, ph) in enumerate(zip(perm, phases)):
            out[dst] = psi[l] if ph == 1 else psi[l] * ph
    else:
        out[perm] = psi * phases[:, None]
    return _back(out, shape, n, targets)


def apply_perm_exact(
    state: np.ndarray, n: int, targets, perm: np.ndarray, powers: np.ndarray
) -> np.ndarray:
    """``apply_perm`` for Cyclotomic arrays with phases given as powers of w."""
    psi, shape = _front(state, n, targets)
    out = np.empty_like(psi)
    for l, (dst, p) in enumerate(zip(perm, powers)):
        out[dst] = psi[l] if not p else [v.mul_omega(int(p)) for v in psi[l]]
    return _back(out, shape, n, targets)
