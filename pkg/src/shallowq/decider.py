"""Gap decision procedure for shallow circuits built from 1- and 2-qubit gates.

``decide`` accepts whenever Pr[C(x)] >= 1 - t and rejects whenever
Pr[C(x)] < 1 - D t, where D is one plus the dependency-graph degree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .circuit import Circuit, CircuitError, depth
from .lightcone import color_classes, dependency_graph, greedy_coloring
from .ring import Cyclotomic
from .gates import dtype_for
from .simulator import DEFAULT_CONE_CAP, Probability, cone_marginal

GUARD_BAND = 1e-9
DIRECT_TOL = 1e-12


@dataclass(frozen=True)
class Threshold:
    t: Fraction
    label: str = "explicit"

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", Fraction(self.t))
        if not 0 <= self.t <= 1:
            raise ValueError(f"threshold {self.t} outside [0, 1]")
        object.__setattr__(self, "_bound", 1 - self.t)

    @property
    def bound(self) -> Fraction:
        """1 - t, the acceptance bar for every color-class product."""
        return self._bound  # type: ignore[attr-defined]

    @classmethod
    def parse(cls, text: str) -> Threshold:
        """'1/8', '0.125' or '0' to an exact rational threshold."""
        try:
            return cls(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad threshold {text!r}: {exc}") from None

    @classmethod
    def eqnc(cls) -> Threshold:
        return cls(Fraction(0), "eqnc")

    @classmethod
    def bqnc_half(cls, d: int) -> Threshold:
        return cls(Fraction(1, 2 ** (2 * d + 1)), "bqnc-half")

    @classmethod
    def master(cls, d: int, eps: Fraction | str | int) -> Threshold:
        eps = Fraction(eps)
        if not 0 < eps <= 1:
            raise ValueError(f"epsilon {eps} outside (0, 1]")
        return cls(Fraction(1, 2 ** (2 * d)) * (1 - eps), "master")


ThresholdLike = Union[Threshold, Fraction, int, str]


def as_threshold(t: ThresholdLike) -> Threshold:
    if isinstance(t, Threshold):
        return t
    if isinstance(t, str):
        return Threshold.parse(t)
    if isinstance(t, float):
        raise TypeError("pass thresholds as Fraction or string, not float")
    return Threshold(Fraction(t))


@dataclass
class Decision:
    verdict: str
    num_colors: int
    coloring: dict[int, int]
    marginals: dict[int, Probability]
    color_products: list[Probability]
    threshold: Threshold | None
    backend: str
    method: str = "A"
    fragile: list[int] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "method": self.method,
            "backend": self.backend,
            "t": None if self.threshold is None else str(self.threshold.t),
            "threshold_preset": None if self.threshold is None else self.threshold.label,
            "D": self.num_colors,
            "coloring": {str(q): c for q, c in sorted(self.coloring.items())},
            "marginals": {str(q): float(p) for q, p in sorted(self.marginals.items())},
            "color_products": [float(p) for p in self.color_products],
            "exact_color_products": (
                [str(p) for p in self.color_products] if self.backend == "exact" else None
            ),
            "fragile": self.fragile,
        }


def _require_narrow(c: Circuit) -> None:
    if c.max_width > 2:
        raise CircuitError(f"decide needs gates of width <= 2; found width {c.max_width}")


def _product(values: Sequence[Probability], backend: str) -> Probability:
    if not values:
        return Cyclotomic(1) if backend == "exact" else 1.0
    acc = values[0]
    for v in values[1:]:
        acc = acc * v
    return acc


@lru_cache(maxsize=1 << 16)
def _structure(
    layers: tuple, outputs: tuple[int, ...], num_qubits: int
) -> tuple[int, dict[int, int], list[list[int]]]:
    graph = dependency_graph(Circuit(num_qubits, (), outputs, layers))
    coloring = greedy_coloring(graph)
    return graph.num_colors, coloring, color_classes(coloring, graph.num_colors)


def decide(
    c: Circuit,
    x: Sequence[int] | str,
    t: ThresholdLike,
    backend: str = "float",
    cone_cap: int = DEFAULT_CONE_CAP,
) -> Decision:
    thr = as_threshold(t)
    _require_narrow(c)
    num_colors, coloring, classes = _structure(c.layers, c.outputs, c.num_qubits)
    coloring = dict(coloring)
    dtype_for(backend)
    init = c.initial_bits(x)
    marginals = {q: cone_marginal(c.layers, init, q, backend, cone_cap) for q in c.outputs}
    products = [_product([marginals[q] for q in cls], backend) for cls in classes]
    bound = thr.bound
    fbound = float(bound)
    fragile = []
    ok = True
    for i, p in enumerate(products):
        if backend == "exact":
            passed = Cyclotomic.coerce(p).compare(bound) >= 0
        else:
            passed = p >= fbound
            if abs(p - fbound) <= GUARD_BAND:
                fragile.append(i + 1)
        ok = ok and passed
    return Decision(
        "accept" if ok else "reject",
        num_colors,
        coloring,
        marginals,
        products,
        thr,
        backend,
        "A",
        fragile,
    )


def decide_direct(
    c: Circuit, x: Sequence[int] | str, backend: str = "float", cone_cap: int = DEFAULT_CONE_CAP
) -> Decision:
    """Accept iff every output reads 0 with probability exactly one."""
    _require_narrow(c)
    dtype_for(backend)
    init = c.initial_bits(x)
    marginals = {q: cone_marginal(c.layers, init, q, backend, cone_cap) for q in c.outputs}
    if backend == "exact":
        ok = all(p == 1 for p in marginals.values())
        fragile = []
    else:
        ok = all(abs(p - 1.0) <= DIRECT_TOL for p in marginals.values())
        fragile = [
            q for q, p in marginals.items() if DIRECT_TOL < abs(p - 1.0) <= GUARD_BAND
        ]
    return Decision(
        "accept" if ok else "reject",
        1,
        {},
        marginals,
        [],
        Threshold.eqnc(),
        backend,
        "direct",
        fragile,
    )


def preset_threshold(mode: str, c: Circuit, eps: str | None = None) -> Threshold:
    """Named thresholds: eqnc (t=0), bqnc-half (t=2^-(2d+1)), master (needs eps)."""
    d = depth(c)
    if mode == "eqnc":
        return Threshold.eqnc()
    if mode == "bqnc-half":
        return Threshold.bqnc_half(d)
    if mode == "master":
        if eps is None:
            raise ValueError("master threshold needs epsilon")
        return Threshold.master(d, eps)
    raise ValueError(f"unknown threshold mode {mode!r}")
