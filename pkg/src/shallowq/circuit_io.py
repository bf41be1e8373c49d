"""The ``.qnc`` text format and a seeded random circuit generator.

Grammar (one statement per line, ``#`` starts a comment)::

    qubits N
    inputs i1 i2 ...
    outputs o1 o2 ...
    H 0
    CNOT 0 1
    TOFFOLI c1 .. cn t
    FANOUT t1 .. tn b
    MOD q c1 .. cn t
    CZ q1 .. qn
    ---            # ends a layer

Without ``---`` separators the gates are layered ASAP; with them the
declared layers are kept and checked.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable

from .circuit import (
    GATE_NAMES,
    Circuit,
    CircuitError,
    Gate,
    GateKind,
    layerize,
    validate,
)

MAX_FILE_QUBITS = 1 << 20
_TOKEN = re.compile(r"\S+")
_UINT = re.compile(r"[0-9]+")

GATESETS = {
    "clifford+t": ("H", "T", "X", "Z", "CNOT"),
    "full": ("H", "T", "X", "Z", "CNOT", "Y", "TOFFOLI2", "B"),
}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _decode(data: str | bytes) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        head = data[: exc.start]
        line = head.count(b"\n") + 1
        col = exc.start - (head.rfind(b"\n") + 1) + 1
        raise ParseError(f"invalid UTF-8 byte 0x{data[exc.start]:02x}", line, col) from None


def _uint(tok: _Tok, what: str) -> int:
    if not _UINT.fullmatch(tok.text):
        raise ParseError(f"expected {what}, got {tok.text!r}", tok.line, tok.col)
    return int(tok.text)


def _gate(name_tok: _Tok, args: list[_Tok]) -> Gate:
    name = name_tok.text.upper()
    line, col = name_tok.line, name_tok.col
    if name not in GATE_NAMES:
        raise ParseError(f"unknown gate {name_tok.text!r}", line, col)
    q = 0
    if name == "MOD":
        if not args:
            raise ParseError("MOD needs a modulus", line, col)
        q = _uint(args[0], "modulus")
        if q < 2:
            raise ParseError(f"MOD modulus must be >= 2, got {q}", args[0].line, args[0].col)
        args = args[1:]
    operands = [_uint(t, "qubit index") for t in args]
    count = len(operands)
    if name in ("TOFFOLI", "FANOUT", "MOD"):
        if count < 2:
            raise ParseError(f"arity mismatch: {name} needs at least 2 qubits, got {count}", line, col)
        kind = GateKind(name, count - 1, q)
    elif name == "CZ":
        if count < 1:
            raise ParseError("arity mismatch: CZ needs at least 1 qubit", line, col)
        kind = GateKind(name, count)
    else:
        kind = GateKind(name)
        if count != kind.arity:
            raise ParseError(
                f"arity mismatch: {name} takes {kind.arity} qubit(s), got {count}", line, col
            )
    seen: set[int] = set()
    for t, v in zip(args, operands):
        if v in seen:
            raise ParseError("duplicate operand", t.line, t.col)
        seen.add(v)
    return Gate(kind, tuple(operands))


def parse_circuit(text: str | bytes) -> Circuit:
    """Parse ``.qnc`` text. Every failure raises :class:`ParseError`."""
    text = _decode(text)
    header: dict[str, tuple[_Tok, list[int]]] = {}
    layers: list[list[tuple[Gate, list[_Tok]]]] = [[]]
    explicit = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [_Tok(m.group(), lineno, m.start() + 1) for m in _TOKEN.finditer(body)]
        if not toks:
            continue
        head, args = toks[0], toks[1:]
        word = head.text.lower()
        if head.text == "---":
            if args:
                raise ParseError("unexpected text after ---", args[0].line, args[0].col)
            explicit = True
            layers.append([])
        elif word in ("qubits", "inputs", "outputs"):
            if word in header:
                raise ParseError(f"duplicate {word} header", head.line, head.col)
            values = [_uint(t, "qubit index" if word != "qubits" else "qubit count") for t in args]
            if word == "qubits":
                if len(values) != 1:
                    raise ParseError("qubits header takes exactly one count", head.line, head.col)
                if not 1 <= values[0] <= MAX_FILE_QUBITS:
                    raise ParseError(
                        f"qubit count must be in 1..{MAX_FILE_QUBITS}", args[0].line, args[0].col
                    )
            for i, v in enumerate(values):
                if v in values[:i]:
                    raise ParseError(f"duplicate qubit {v} in {word}", args[i].line, args[i].col)
            header[word] = (head, values)
        else:
            layers[-1].append((_gate(head, args), args))
    if "qubits" not in header:
        raise ParseError("missing qubits header", 1, 1)
    n = header["qubits"][1][0]
    for word in ("inputs", "outputs"):
        if word in header:
            tok, values = header[word]
            for v in values:
                if v >= n:
                    raise ParseError(f"{word} qubit {v} out of range (qubits {n})", tok.line, tok.col)
    for layer in layers:
        for g, args in layer:
            for t, v in zip(args[len(args) - len(g.operands):], g.operands):
                if v >= n:
                    raise ParseError(f"qubit {v} out of range (qubits {n})", t.line, t.col)
    inputs = header.get("inputs", (None, []))[1]
    outputs = header.get("outputs", (None, []))[1]
    if not explicit:
        return layerize((g for g, _ in layers[0]), n, inputs, outputs)
    for layer in layers:
        used: set[int] = set()
        for g, args in layer:
            clash = used.intersection(g.operands)
            if clash:
                q = min(clash)
                op_toks = args[len(args) - len(g.operands):]
                t = next(a for a, v in zip(op_toks, g.operands) if v == q)
                raise ParseError(f"layer overlap on qubit {q}", t.line, t.col)
            used.update(g.operands)
    kept = [[g for g, _ in layer] for layer in layers if layer]
    return Circuit(n, tuple(inputs), tuple(outputs), tuple(map(tuple, kept)))


def _gate_line(g: Gate) -> str:
    args = [str(q) for q in g.operands]
    if g.kind.name == "MOD":
        args.insert(0, str(g.kind.q))
    return " ".join([g.kind.name, *args])


def emit_circuit(c: Circuit) -> str:
    problems = validate(c)
    if problems:
        raise CircuitError(problems[0])
    lines = [
        f"qubits {c.num_qubits}",
        " ".join(["inputs", *map(str, c.inputs)]),
        " ".join(["outputs", *map(str, c.outputs)]),
    ]
    for i, layer in enumerate(c.layers):
        if i:
            lines.append("---")
        lines.extend(_gate_line(g) for g in sorted(layer, key=lambda g: min(g.operands)))
    return "\n".join(lines) + "\n"


def _kind_for(token: str) -> GateKind:
    if token == "TOFFOLI2":
        return GateKind("TOFFOLI", 2)
    return GateKind(token)


def gen_random(
    n: int,
    target_depth: int,
    gateset: str = "clifford+t",
    seed: int = 0,
    inputs: Iterable[int] | None = None,
    outputs: Iterable[int] | None = None,
    max_gates: int | None = None,
) -> Circuit:
    """Seeded random circuit: every layer is filled with disjoint gates drawn
    uniformly from ``gateset`` (among kinds that still fit)."""
    if n < 1:
        raise ValueError("need at least one qubit")
    if gateset not in GATESETS:
        raise ValueError(f"unknown gateset {gateset!r}; choose from {sorted(GATESETS)}")
    rng = random.Random(seed)
    kinds = [_kind_for(t) for t in GATESETS[gateset]]
    gates: list[Gate] = []
    layers: list[list[Gate]] = []
    budget = max_gates if max_gates is not None else float("inf")
    for _ in range(target_depth):
        free = list(range(n))
        rng.shuffle(free)
        layer = []
        while free and len(gates) < budget:
            kind = rng.choice([k for k in kinds if k.arity <= len(free)])
            ops, free = free[: kind.arity], free[kind.arity:]
            g = Gate(kind, tuple(ops))
            layer.append(g)
            gates.append(g)
        if layer:
            layers.append(layer)
    half = (n + 1) // 2
    ins = tuple(range(half)) if inputs is None else tuple(inputs)
    outs = tuple(range(n - half, n)) if outputs is None else tuple(outputs)
    return Circuit(n, ins, outs, tuple(map(tuple, layers)))


def read_circuit(path: str) -> Circuit:
    with open(path, "rb") as fh:
        return parse_circuit(fh.read())


def write_circuit(c: Circuit, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_circuit(c))
