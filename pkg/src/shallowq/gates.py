"""Unitary semantics of gate kinds in float and exact backends.

Basis convention: the first operand is the most significant bit of the
gate's local index, and qubit 0 is the most significant bit of a state index.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from . import kernels
from .circuit import CircuitError, Gate, GateKind
from .ring import INV_SQRT2, Cyclotomic

BACKENDS = ("float", "exact")
DEFAULT_MAX_WIDTH = 20


def _check_backend(backend: str) -> None:
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")


def dtype_for(backend: str):
    _check_backend(backend)
    return object if backend == "exact" else np.complex128


def _bits(l: int, w: int) -> list[int]:
    return [(l >> (w - 1 - i)) & 1 for i in range(w)]


def _index(bits: Sequence[int]) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | b
    return out


def _classical(kind: GateKind, bits: list[int]) -> tuple[list[int], int]:
    """Image of a basis state and its phase as a power of w = exp(i pi/4)."""
    name = kind.name
    if name == "X":
        return [1 - bits[0]], 0
    if name == "Y":
        return [1 - bits[0]], 2 + 4 * bits[0]
    if name == "Z":
        return bits, 4 * bits[0]
    if name == "T":
        return bits, bits[0]
    if name in ("CNOT", "TOFFOLI"):
        *ctl, b = bits
        return [*ctl, b ^ int(all(ctl))], 0
    if name == "CZ":
        return bits, 4 * int(all(bits))
    if name == "FANOUT":
        *tgt, b = bits
        return [x ^ b for x in tgt] + [b], 0
    if name == "MOD":
        *ctl, b = bits
        return [*ctl, b ^ int(sum(ctl) % kind.q != 0)], 0
    raise ValueError(f"{kind} is not a classical gate")


@lru_cache(maxsize=None)
def classical_action(kind: GateKind) -> tuple[np.ndarray, np.ndarray]:
    """(perm, omega_power) arrays: |l> -> w^omega_power[l] |perm[l]>."""
    w = kind.arity
    perm = np.empty(1 << w, dtype=np.intp)
    power = np.empty(1 << w, dtype=np.intp)
    for l in range(1 << w):
        out, p = _classical(kind, _bits(l, w))
        perm[l], power[l] = _index(out), p % 8
    perm.setflags(write=False)
    power.setflags(write=False)
    return perm, power


_OMEGA_FLOAT = np.exp(1j * np.pi / 4 * np.arange(8))
_OMEGA_EXACT = [Cyclotomic.omega(p) for p in range(8)]


@lru_cache(maxsize=None)
def _phases(kind: GateKind, backend: str) -> np.ndarray:
    _, power = classical_action(kind)
    if backend == "exact":
        out = np.empty(len(power), dtype=object)
        out[:] = [_OMEGA_EXACT[p] for p in power]
    else:
        out = _OMEGA_FLOAT[power]
    out.setflags(write=False)
    return out


def _exact_dense(rows: list[list[object]]) -> np.ndarray:
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = Cyclotomic.coerce(v)
    return out


def _matmul_exact(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.empty((a.shape[0], b.shape[1]), dtype=object)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            acc = Cyclotomic(0)
            for k in range(a.shape[1]):
                if a[i, k] and b[k, j]:
                    acc = acc + a[i, k] * b[k, j]
            out[i, j] = acc
    return out


def _dagger(m: np.ndarray) -> np.ndarray:
    if m.dtype == object:
        return np.vectorize(lambda v: v.conjugate(), otypes=[object])(m.T)
    return m.conj().T


@lru_cache(maxsize=None)
def _gate_matrix(kind: GateKind, backend: str) -> np.ndarray:
    if kind.is_classical:
        perm, _ = classical_action(kind)
        phases = _phases(kind, backend)
        dim = len(perm)
        if backend == "exact":
            m = np.empty((dim, dim), dtype=object)
            m[:] = [[Cyclotomic(0)] * dim for _ in range(dim)]
        else:
            m = np.zeros((dim, dim), dtype=np.complex128)
        for l in range(dim):
            m[perm[l], l] = phases[l]
    else:
        h = _exact_dense([[INV_SQRT2, INV_SQRT2], [INV_SQRT2, -INV_SQRT2]])
        if kind.name == "H":
            m = h
        else:
            one, zero = Cyclotomic(1), Cyclotomic(0)
            eye = _exact_dense([[one, zero], [zero, one]])
            h_first = np.empty((4, 4), dtype=object)
            for i in range(4):
                for j in range(4):
                    h_first[i, j] = h[i >> 1, j >> 1] * eye[i & 1, j & 1]
            bell = _matmul_exact(_gate_matrix(GateKind("CNOT"), "exact"), h_first)
            m = bell if kind.name == "B" else _dagger(bell)
        if backend == "float":
            m = np.array([[complex(v) for v in row] for row in m], dtype=np.complex128)
    m.setflags(write=False)
    return m


def gate_matrix(kind: GateKind, backend: str = "float", max_width: int = DEFAULT_MAX_WIDTH) -> np.ndarray:
    """Dense 2^w x 2^w unitary of ``kind``.

    Float matrices are complex128; exact matrices are object arrays of
    :class:`~shallowq.ring.Cyclotomic`. The result is read-only and cached.
    """
    _check_backend(backend)
    if kind.arity > max_width:
        raise CircuitError(f"{kind} has width {kind.arity} > cap {max_width}")
    return _gate_matrix(kind, backend)


def _conj(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        out = np.vectorize(lambda v: v.conjugate(), otypes=[object])(arr)
    else:
        out = arr.conj()
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _operator(kind: GateKind, backend: str, conj: bool) -> tuple[np.ndarray | None, np.ndarray]:
    """(perm, phases) for classical kinds, (None, matrix) otherwise."""
    if kind.is_classical:
        perm, _ = classical_action(kind)
        phases = _phases(kind, backend)
        return perm, _conj(phases) if conj else phases
    m = _gate_matrix(kind, backend)
    return None, _conj(m) if conj else m


def _apply(state: np.ndarray, n: int, targets: Sequence[int], kind: GateKind, conj: bool = False) -> np.ndarray:
    backend = "exact" if state.dtype == object else "float"
    if backend == "exact" and kind.is_classical:
        perm, power = classical_action(kind)
        return kernels.apply_perm_exact(state, n, targets, perm, -power % 8 if conj else power)
    perm, op = _operator(kind, backend, conj)
    if perm is not None:
        return kernels.apply_perm(state, n, targets, perm, op)
    return kernels.apply_dense(state, n, targets, op)


def apply_gate(state: np.ndarray, g: Gate) -> np.ndarray:
    """Apply ``g`` to a statevector over all circuit qubits; returns a new array."""
    dim = len(state)
    n = dim.bit_length() - 1
    if dim != 1 << n:
        raise ValueError(f"state length {dim} is not a power of two")
    if any(not 0 <= q < n for q in g.operands):
        raise ValueError(f"{g} does not fit a {n}-qubit state")
    return _apply(state, n, g.operands, g.kind)


def apply_gate_density(rho: np.ndarray, g: Gate, qubits: Sequence[int]) -> np.ndarray:
    """U rho U^dagger for ``rho`` over the ordered circuit qubits ``qubits``."""
    pos = {q: i for i, q in enumerate(qubits)}
    try:
        local = [pos[q] for q in g.operands]
    except KeyError as exc:
        raise ValueError(f"operand {exc.args[0]} of {g} is outside the density subset") from None
    m = len(qubits)
    dim = 1 << m
    if rho.shape != (dim, dim):
        raise ValueError(f"density shape {rho.shape} does not match {m} qubits")
    flat = rho.reshape(-1)
    flat = _apply(flat, 2 * m, local, g.kind)
    flat = _apply(flat, 2 * m, [m + i for i in local], g.kind, conj=True)
    return flat.reshape(dim, dim)
