"""Statevector oracle and the lightcone-restricted density simulation.

Probabilities are floats in the float backend and real
:class:`~shallowq.ring.Cyclotomic` values in the exact backend.
"""
from __future__ import annotations

import os
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .circuit import Circuit, CircuitError, Gate
from .gates import apply_gate, apply_gate_density, dtype_for
from .lightcone import layer_suffix_cones, restrict_to_cone, suffix_cones
from .ring import Cyclotomic

Probability = Union[float, Cyclotomic]

DEFAULT_MAX_QUBITS = 22
DEFAULT_CONE_CAP = 16


class CapExceeded(CircuitError):
    """A simulation would exceed a configured qubit cap."""


def max_qubits() -> int:
    return int(os.environ.get("QNC_MAX_QUBITS", DEFAULT_MAX_QUBITS))


def basis_state(bits: Sequence[int], backend: str = "float") -> np.ndarray:
    n = len(bits)
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    if backend == "exact":
        state = np.empty(1 << n, dtype=object)
        state[:] = [Cyclotomic(0)] * (1 << n)
        state[idx] = Cyclotomic(1)
    else:
        state = np.zeros(1 << n, dtype=dtype_for(backend))
        state[idx] = 1.0
    return state


def run_statevector(
    c: Circuit, x: Sequence[int] | str, backend: str = "float", cap: int | None = None
) -> np.ndarray:
    """Final state of |x, 0...0> after every layer of ``c``."""
    cap = max_qubits() if cap is None else cap
    if c.num_qubits > cap:
        raise CapExceeded(f"{c.num_qubits} qubits exceeds the statevector cap {cap}")
    state = basis_state(c.initial_bits(x), backend)
    for layer in c.layers:
        for g in layer:
            state = apply_gate(state, g)
    return state


def _abs2(v: np.ndarray) -> np.ndarray | list:
    if v.dtype == object:
        return [a.abs2() for a in v.reshape(-1)]
    return np.abs(v) ** 2


def _sum(values) -> Probability:
    if isinstance(values, np.ndarray):
        return float(np.sum(values))
    acc = Cyclotomic(0)
    for v in values:
        acc = acc + v
    return acc


def outcome_probability(state: np.ndarray, n: int, fixed: dict[int, int]) -> Probability:
    """Probability that each qubit in ``fixed`` is measured as its bit."""
    idx: list[object] = [slice(None)] * n
    for q, b in fixed.items():
        idx[q] = b
    sub = state.reshape((2,) * n)[tuple(idx)]
    return _sum(_abs2(np.atleast_1d(np.asarray(sub))))


def acceptance_probability(
    c: Circuit, x: Sequence[int] | str, backend: str = "float", cap: int | None = None
) -> Probability:
    """Pr[C(x)]: probability that every output qubit reads 0."""
    state = run_statevector(c, x, backend, cap)
    return outcome_probability(state, c.num_qubits, {q: 0 for q in c.outputs})


def marginal_probability(
    c: Circuit,
    x: Sequence[int] | str,
    subset: Sequence[int],
    outcome: Sequence[int] | str,
    backend: str = "float",
    cap: int | None = None,
    state: np.ndarray | None = None,
) -> Probability:
    """Probability of reading ``outcome`` on ``subset``; other qubits traced out."""
    bits = [int(b) for b in outcome]
    if len(bits) != len(subset):
        raise ValueError(f"outcome has {len(bits)} bits for {len(subset)} qubits")
    if len(set(subset)) != len(subset):
        raise ValueError("duplicate qubit in subset")
    if state is None:
        state = run_statevector(c, x, backend, cap)
    return outcome_probability(state, c.num_qubits, dict(zip(subset, bits)))


def partial_trace(rho: np.ndarray, qubits: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every qubit of ``qubits`` not in ``keep``; order is preserved."""
    keep = set(keep)
    m = len(qubits)
    kept = [i for i, q in enumerate(qubits) if q in keep]
    dropped = [i for i, q in enumerate(qubits) if q not in keep]
    if not dropped:
        return rho
    t = rho.reshape((2,) * (2 * m))
    t = t.transpose(kept + dropped + [m + i for i in kept] + [m + i for i in dropped])
    dk, dr = 1 << len(kept), 1 << len(dropped)
    t = t.reshape(dk, dr, dk, dr)
    out = t[:, 0, :, 0].copy()
    for j in range(1, dr):
        out = out + t[:, j, :, j]
    return out


StepHook = Callable[[int, np.ndarray, tuple[int, ...]], None]


def _check_cone(cone, cap: int) -> None:
    if len(cone) > cap:
        raise CapExceeded(f"lightcone of {len(cone)} qubits exceeds the cone cap {cap}")


def cone_marginal(
    layers: tuple[tuple[Gate, ...], ...],
    init: Sequence[int],
    q: int,
    backend: str = "float",
    cone_cap: int = DEFAULT_CONE_CAP,
) -> Probability:
    """P_q from full initial bits ``init``; memoized on the cone-restricted gates."""
    kept, cone = restrict_to_cone(layers, q)
    _check_cone(cone, cone_cap)
    return _cached_marginal(kept, tuple(init[p] for p in cone), q, backend)


def _cone_density(
    layers: Sequence[Sequence[Gate]],
    cones: list[frozenset[int]],
    init: Sequence[int] | dict[int, int],
    backend: str,
    on_step: StepHook | None,
) -> Probability:
    qubits = tuple(sorted(cones[0]))
    vec = basis_state([init[p] for p in qubits], backend)
    if backend == "exact":
        rho = np.empty((len(vec), len(vec)), dtype=object)
        for i, a in enumerate(vec):
            for j, b in enumerate(vec):
                rho[i, j] = a * b
    else:
        rho = np.outer(vec, vec.conj())
    if on_step is not None:
        on_step(-1, rho, qubits)
    for level, layer in enumerate(layers):
        live = cones[level]
        for g in layer:
            if live.intersection(g.operands):
                rho = apply_gate_density(rho, g, qubits)
        rho = partial_trace(rho, qubits, cones[level + 1])
        qubits = tuple(sorted(cones[level + 1]))
        if on_step is not None:
            on_step(level, rho, qubits)
    p0 = rho[0, 0]
    return p0 if backend == "exact" else float(p0.real)


def _cone_statevector(
    layers: Sequence[Sequence[Gate]],
    cones: list[frozenset[int]],
    init: Sequence[int] | dict[int, int],
    q: int,
    backend: str,
) -> Probability:
    qubits = sorted(cones[0])
    local = {p: i for i, p in enumerate(qubits)}
    state = basis_state([init[p] for p in qubits], backend)
    for level, layer in enumerate(layers):
        for g in layer:
            if cones[level].intersection(g.operands):
                state = apply_gate(state, g.remap(local))
    return outcome_probability(state, len(qubits), {local[q]: 0})


@lru_cache(maxsize=1 << 17)
def _cached_marginal(
    layers: tuple[tuple[Gate, ...], ...], bits: tuple[int, ...], q: int, backend: str
) -> Probability:
    # ``layers`` is already restricted to the cone of q; ``bits`` follow the
    # sorted cone qubits
    cones = layer_suffix_cones(layers, q)
    init = dict(zip(sorted(cones[0]), bits))
    if any(g.width > 2 for layer in layers for g in layer):
        return _cone_statevector(layers, cones, init, q, backend)
    return _cone_density(layers, cones, init, backend, None)


def reduced_density_marginal(
    c: Circuit,
    x: Sequence[int] | str,
    q: int,
    backend: str = "float",
    cone_cap: int = DEFAULT_CONE_CAP,
    on_step: StepHook | None = None,
) -> Probability:
    """P_q, the probability of reading 0 on ``q``, simulated on its lightcone only.

    The density operator starts on D_q and, after each layer, qubits that can
    no longer reach ``q`` are traced out. Circuits with gates wider than two
    qubits use a statevector on D_q instead. ``on_step(layer, rho, qubits)``
    sees every intermediate density operator (layer -1 is the initial one).
    """
    dtype_for(backend)
    if not 0 <= q < c.num_qubits:
        raise CircuitError(f"qubit {q} out of range")
    init = tuple(c.initial_bits(x))
    if on_step is None:
        return cone_marginal(c.layers, init, q, backend, cone_cap)
    cones = suffix_cones(c, q)
    _check_cone(cones[0], cone_cap)
    if c.max_width > 2:
        return _cone_statevector(c.layers, cones, init, q, backend)
    return _cone_density(c.layers, cones, init, backend, on_step)


def to_float(p: Probability) -> float:
    return float(p)
