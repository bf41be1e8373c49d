"""Circuit intermediate representation: gate kinds, gates, layered circuits.

Qubits are 0-based. A :class:`Circuit` keeps the layering it was built
with; :func:`depth` always reports the canonical (ASAP) layer count.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

SINGLE_QUBIT = ("X", "Y", "Z", "H", "T")
PARAMETRIC = ("TOFFOLI", "CZ", "FANOUT", "MOD")
GATE_NAMES = SINGLE_QUBIT + ("CNOT",) + PARAMETRIC + ("B", "BDG")


class CircuitError(ValueError):
    """Raised when a gate list or circuit cannot be built."""


@dataclass(frozen=True)
class GateKind:
    """A gate kind plus its width parameters.

    ``n`` is the number of controls (TOFFOLI, MOD), targets (FANOUT) or
    qubits (CZ); ``q`` is the modulus of a MOD gate.
    """

    name: str
    n: int = 0
    q: int = 0

    def __post_init__(self) -> None:
        if self.name not in GATE_NAMES:
            raise CircuitError(f"unknown gate kind {self.name!r}")
        if self.name in PARAMETRIC:
            if self.n < 1:
                raise CircuitError(f"{self.name} needs n >= 1, got {self.n}")
        elif self.n:
            raise CircuitError(f"{self.name} takes no width parameter")
        if self.name == "MOD":
            if self.q < 2:
                raise CircuitError(f"MOD needs q >= 2, got {self.q}")
        elif self.q:
            raise CircuitError(f"{self.name} takes no modulus")

    @property
    def arity(self) -> int:
        if self.name in SINGLE_QUBIT:
            return 1
        if self.name in ("CNOT", "B", "BDG"):
            return 2
        if self.name == "CZ":
            return self.n
        return self.n + 1

    @property
    def is_classical(self) -> bool:
        """True when the gate maps basis states to phased basis states."""
        return self.name not in ("H", "B", "BDG")

    def __str__(self) -> str:
        if self.name == "MOD":
            return f"MOD{self.q}[{self.n}]"
        if self.name in PARAMETRIC:
            return f"{self.name}[{self.n}]"
        return self.name


X = GateKind("X")
Y = GateKind("Y")
Z = GateKind("Z")
H = GateKind("H")
T = GateKind("T")
CNOT = GateKind("CNOT")
B = GateKind("B")
BDG = GateKind("BDG")


def toffoli(n: int) -> GateKind:
    return GateKind("TOFFOLI", n)


def cz(n: int) -> GateKind:
    return GateKind("CZ", n)


def fanout(n: int) -> GateKind:
    return GateKind("FANOUT", n)


def mod(q: int, n: int) -> GateKind:
    return GateKind("MOD", n, q)


@dataclass(frozen=True)
class Gate:
    """A gate kind applied to ordered operands.

    Role convention: TOFFOLI and MOD put the target last, FANOUT puts the
    source last, B/BDG put the Hadamard-side qubit first.
    """

    kind: GateKind
    operands: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "operands", tuple(int(q) for q in self.operands))
        object.__setattr__(self, "_hash", hash((self.kind, self.operands)))

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    @property
    def width(self) -> int:
        return len(self.operands)

    def problems(self, num_qubits: int | None = None) -> list[str]:
        out = []
        if len(self.operands) != self.kind.arity:
            out.append(
                f"bad arity for {self.kind}: expected {self.kind.arity} operands, "
                f"got {len(self.operands)}"
            )
        if len(set(self.operands)) != len(self.operands):
            out.append(f"duplicate operand in {self}")
        if num_qubits is not None:
            for q in self.operands:
                if not 0 <= q < num_qubits:
                    out.append(f"qubit {q} out of range in {self}")
        return out

    def remap(self, mapping: dict[int, int] | Sequence[int]) -> Gate:
        return Gate(self.kind, tuple(mapping[q] for q in self.operands))

    def __str__(self) -> str:
        return f"{self.kind}({', '.join(map(str, self.operands))})"


def gate(name: str, *operands: int, q: int = 0) -> Gate:
    """Build a gate from a name and operands, inferring width parameters.

    >>> gate("TOFFOLI", 0, 1, 2).kind.n
    2
    """
    name = name.upper()
    if name in ("TOFFOLI", "FANOUT"):
        kind = GateKind(name, len(operands) - 1)
    elif name == "CZ":
        kind = GateKind(name, len(operands))
    elif name == "MOD":
        kind = GateKind(name, len(operands) - 1, q)
    else:
        kind = GateKind(name)
    return Gate(kind, operands)


@dataclass(frozen=True)
class Circuit:
    """Layered circuit over ``num_qubits`` qubits.

    Non-input qubits start in |0>. The circuit accepts when every output
    qubit is measured as 0.
    """

    num_qubits: int
    inputs: tuple[int, ...] = ()
    outputs: tuple[int, ...] = ()
    layers: tuple[tuple[Gate, ...], ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "inputs", tuple(sorted(set(self.inputs))))
        object.__setattr__(self, "outputs", tuple(sorted(set(self.outputs))))
        # gates within a layer commute; a fixed order makes equality structural
        object.__setattr__(
            self,
            "layers",
            tuple(
                tuple(sorted(layer, key=lambda g: min(g.operands, default=-1)))
                for layer in self.layers
            ),
        )

    @cached_property
    def gates(self) -> tuple[Gate, ...]:
        return tuple(g for layer in self.layers for g in layer)

    @cached_property
    def max_width(self) -> int:
        return max((g.width for g in self.gates), default=0)

    def with_layers(self, layers: Iterable[Iterable[Gate]]) -> Circuit:
        return Circuit(self.num_qubits, self.inputs, self.outputs, tuple(map(tuple, layers)))

    def canonical(self) -> Circuit:
        """Re-layerize ASAP, keeping program order."""
        return layerize(self.gates, self.num_qubits, self.inputs, self.outputs)

    def initial_bits(self, x: Sequence[int] | str) -> list[int]:
        """Full initial basis assignment for input string ``x``."""
        bits = [int(b) for b in x]
        if len(bits) != len(self.inputs):
            raise CircuitError(
                f"input has {len(bits)} bits, circuit has {len(self.inputs)} inputs"
            )
        if any(b not in (0, 1) for b in bits):
            raise CircuitError(f"input {x!r} is not a bit string")
        full = [0] * self.num_qubits
        for q, b in zip(self.inputs, bits):
            full[q] = b
        return full


def _asap_layers(gates: Sequence[Gate], num_qubits: int) -> list[list[Gate]]:
    ready = [0] * num_qubits
    layers: list[list[Gate]] = []
    for g in gates:
        lvl = max(ready[q] for q in g.operands)
        if lvl == len(layers):
            layers.append([])
        layers[lvl].append(g)
        for q in g.operands:
            ready[q] = lvl + 1
    return layers


def layerize(
    gates: Iterable[Gate],
    num_qubits: int,
    inputs: Iterable[int] = (),
    outputs: Iterable[int] = (),
) -> Circuit:
    """Schedule gates ASAP: each goes one layer after its latest predecessor
    on a shared qubit. This attains the minimum depth over all order
    preserving layerings."""
    gates = list(gates)
    if num_qubits < 1:
        raise CircuitError("a circuit needs at least one qubit")
    for g in gates:
        problems = g.problems(num_qubits)
        if problems:
            raise CircuitError(problems[0])
    for q in (*inputs, *outputs):
        if not 0 <= q < num_qubits:
            raise CircuitError(f"qubit {q} out of range")
    layers = _asap_layers(gates, num_qubits) if gates else []
    return Circuit(num_qubits, tuple(inputs), tuple(outputs), tuple(map(tuple, layers)))


def depth(c: Circuit) -> int:
    if not c.layers:
        return 0
    return len(_asap_layers(c.gates, c.num_qubits))


def size(c: Circuit) -> int:
    """Output count plus the number of gate/qubit contact points."""
    return len(c.outputs) + sum(g.width for g in c.gates)


def validate(c: Circuit) -> list[str]:
    """All invariant violations of ``c``; an empty list means well formed."""
    out = []
    if c.num_qubits < 1:
        out.append("a circuit needs at least one qubit")
    for label, qs in (("input", c.inputs), ("output", c.outputs)):
        for q in qs:
            if not 0 <= q < c.num_qubits:
                out.append(f"{label} qubit {q} out of range")
    for i, layer in enumerate(c.layers):
        seen: set[int] = set()
        for g in layer:
            out.extend(f"layer {i}: {p}" for p in g.problems(c.num_qubits))
            for q in sorted(set(g.operands) & seen):
                out.append(f"layer overlap on qubit {q} (layer {i})")
            seen.update(g.operands)
    return out
