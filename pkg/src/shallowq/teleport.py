"""Depth-three compression by nonadaptive qubit teleportation.

Between every two consecutive gates on a qubit, the state hops to a fresh
wire: an EPR pair (e1, e2) is made by B in layer 1, the old wire and e1 are
rotated back by B^dagger in layer 3, and e2 carries the state onward. All
original gates sit in layer 2. Post-selecting every Bell pair on 00 (each
with probability 1/4) recovers the original circuit exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import B, BDG, Circuit, Gate
from .ring import Cyclotomic
from .simulator import (
    CapExceeded,
    Probability,
    max_qubits,
    outcome_probability,
    run_statevector,
)


@dataclass(frozen=True)
class CompressionResult:
    cprime: Circuit
    k: int
    original_output_map: dict[int, int]
    bell_pairs: tuple[tuple[int, int], ...]
    segment_map: dict[int, tuple[int, ...]]

    @property
    def m(self) -> int:
        return 2 * self.k

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "num_qubits": self.cprime.num_qubits,
            "original_outputs": {str(q): s for q, s in sorted(self.original_output_map.items())},
            "bell_pairs": [list(p) for p in self.bell_pairs],
            "segments": {str(q): list(s) for q, s in sorted(self.segment_map.items())},
        }


def compress_to_depth3(c: Circuit) -> CompressionResult:
    n = c.num_qubits
    gates = c.gates
    seen = [False] * n
    segment = list(range(n))
    segments: dict[int, list[int]] = {q: [q] for q in range(n)}
    prep: list[Gate] = []
    middle: list[Gate] = []
    measure: list[Gate] = []
    pairs: list[tuple[int, int]] = []
    fresh = n
    for g in gates:
        for q in g.operands:
            if seen[q]:
                e1, e2 = fresh, fresh + 1
                fresh += 2
                prep.append(Gate(B, (e1, e2)))
                measure.append(Gate(BDG, (segment[q], e1)))
                pairs.append((segment[q], e1))
                segment[q] = e2
                segments[q].append(e2)
            seen[q] = True
        middle.append(g.remap(segment))
    k = len(pairs)
    out_map = {q: segment[q] for q in c.outputs}
    outputs = set(out_map.values()) | {r for p in pairs for r in p}
    layers = [layer for layer in (prep, middle, measure) if layer]
    cprime = Circuit(fresh, c.inputs, tuple(outputs), tuple(map(tuple, layers)))
    return CompressionResult(
        cprime,
        k,
        out_map,
        tuple(pairs),
        {q: tuple(s) for q, s in segments.items()},
    )


def _bell_fixed(result: CompressionResult, pairs: Sequence[tuple[int, int]] | None = None) -> dict[int, int]:
    pairs = result.bell_pairs if pairs is None else pairs
    return {r: 0 for p in pairs for r in p}


def postselected_state(result: CompressionResult, x: Sequence[int] | str, backend: str = "float") -> np.ndarray:
    """Final state of C' on every Bell pair reading 00, renormalized, expressed
    over the final wire segment of each original qubit in original order."""
    cp = result.cprime
    state = run_statevector(cp, x, backend).reshape((2,) * cp.num_qubits)
    fixed = _bell_fixed(result)
    idx = tuple(0 if q in fixed else slice(None) for q in range(cp.num_qubits))
    sub = np.asarray(state[idx])
    remaining = [q for q in range(cp.num_qubits) if q not in fixed]
    finals = [result.segment_map[q][-1] for q in sorted(result.segment_map)]
    sub = np.transpose(sub, [remaining.index(s) for s in finals]) if finals else sub
    sub = np.ascontiguousarray(sub).reshape(-1)
    if backend == "exact":
        return sub
    return sub / np.linalg.norm(sub)


def verify_compression(
    c: Circuit, x: Sequence[int] | str, backend: str = "float", result: CompressionResult | None = None
) -> dict:
    """Run C and C' through the statevector oracle and compare acceptance."""
    result = result or compress_to_depth3(c)
    cp = result.cprime
    if cp.num_qubits > max_qubits():
        raise CapExceeded(f"C' has {cp.num_qubits} qubits; cap is {max_qubits()}")
    sc = run_statevector(c, x, backend)
    scp = run_statevector(cp, x, backend)
    pr_c = outcome_probability(sc, c.num_qubits, {q: 0 for q in c.outputs})
    pr_cp = outcome_probability(scp, cp.num_qubits, {q: 0 for q in cp.outputs})
    pair_marginals = [
        outcome_probability(scp, cp.num_qubits, _bell_fixed(result, [p])) for p in result.bell_pairs
    ]
    joint = outcome_probability(scp, cp.num_qubits, _bell_fixed(result))
    if backend == "exact":
        expected = pr_c * Cyclotomic(1, k=4 * result.k)
        error = abs(complex(pr_cp - expected))
        # joint is 4^-k whenever the construction is right; dividing is then exact
        if joint == Cyclotomic(1, k=4 * result.k):
            conditional = pr_cp.mul_sqrt2_power(4 * result.k)
            cond_error = abs(complex(conditional - pr_c))
        else:
            conditional, cond_error = None, None
    else:
        expected = pr_c * 4.0 ** -result.k
        conditional = pr_cp / joint if joint > 0 else float("nan")
        error = abs(pr_cp - expected)
        cond_error = abs(conditional - pr_c)
    return {
        "k": result.k,
        "m": result.m,
        "pr_c": pr_c,
        "pr_cprime": pr_cp,
        "expected_pr_cprime": expected,
        "abs_error": error,
        "conditional_pr": conditional,
        "conditional_error": cond_error,
        "bell_pair_marginals": pair_marginals,
        "bell_joint": joint,
    }
