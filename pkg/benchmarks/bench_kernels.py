"""Compare the compiled and numpy gate kernels on random statevectors.

    python3 benchmarks/bench_kernels.py [--qubits 8 12 16 20] [--repeat 20]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from shallowq import _kernels_py
from shallowq.circuit import GateKind
from shallowq.gates import gate_matrix

try:
    from shallowq import _ckernels
except ImportError:
    _ckernels = None


def _cases(n: int, rng: np.random.Generator):
    state = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    state /= np.linalg.norm(state)
    h = np.ascontiguousarray(gate_matrix(GateKind("H"), "float"), np.complex128)
    b = np.ascontiguousarray(gate_matrix(GateKind("B"), "float"), np.complex128)
    cnot_perm = np.array([0, 1, 3, 2], np.intp)
    ones = np.ones(4, np.complex128)
    mid = n // 2
    return state, [
        ("dense H", [mid], h, None),
        ("dense B", [0, n - 1], b, None),
        ("perm CNOT", [n - 1, 0], cnot_perm, ones),
    ]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, nargs="+", default=[8, 12, 16, 20])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not built; only the numpy kernels are timed")
    rng = np.random.default_rng(0)
    print(f"{'qubits':>6} {'kernel':<10} {'numpy (us)':>12} {'cython (us)':>12} {'speedup':>8}")
    for n in args.qubits:
        state, cases = _cases(n, rng)
        for label, targets, op, phases in cases:
            if phases is None:
                py = lambda: _kernels_py.apply_dense(state, n, targets, op)
                cy = _ckernels and (lambda: _ckernels.apply_dense(state, n, targets, op))
            else:
                py = lambda: _kernels_py.apply_perm(state, n, targets, op, phases)
                cy = _ckernels and (lambda: _ckernels.apply_perm(state, n, targets, op, phases))
            if cy is not None:
                assert np.allclose(py(), cy(), atol=1e-12)
            t_py = min(timeit.repeat(py, number=1, repeat=args.repeat)) * 1e6
            if cy is None:
                print(f"{n:>6} {label:<10} {t_py:>12.1f} {'-':>12} {'-':>8}")
                continue
            t_cy = min(timeit.repeat(cy, number=1, repeat=args.repeat)) * 1e6
            print(f"{n:>6} {label:<10} {t_py:>12.1f} {t_cy:>12.1f} {t_py / t_cy:>7.2f}x")


if __name__ == "__main__":
    main()
