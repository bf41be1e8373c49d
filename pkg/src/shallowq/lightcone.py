"""Backward lightcones, the output dependency graph and its greedy coloring."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .circuit import Circuit, Gate, depth


@dataclass(frozen=True)
class Lightcone:
    qubit: int
    cone: frozenset[int]

    def __len__(self) -> int:
        return len(self.cone)


def cone_of(layers: Sequence[Sequence[Gate]], qubits: Iterable[int]) -> set[int]:
    """Qubits with a forward path through ``layers`` into ``qubits``."""
    frontier = set(qubits)
    for layer in reversed(layers):
        for g in layer:
            if frontier.intersection(g.operands):
                frontier.update(g.operands)
    return frontier


def backward_cone(c: Circuit, q: int) -> Lightcone:
    """D_q: every qubit that q depends on, found by sweeping layers last to first."""
    return Lightcone(q, frozenset(cone_of(c.layers, (q,))))


def suffix_cones(c: Circuit, q: int) -> list[frozenset[int]]:
    """``out[l]`` = cone of q through layers l..end; ``out[depth]`` = {q}."""
    return layer_suffix_cones(c.layers, q)


def layer_suffix_cones(layers: Sequence[Sequence[Gate]], q: int) -> list[frozenset[int]]:
    out = [frozenset((q,))]
    frontier = {q}
    for layer in reversed(layers):
        for g in layer:
            if frontier.intersection(g.operands):
                frontier.update(g.operands)
        out.append(frozenset(frontier))
    out.reverse()
    return out


@dataclass(frozen=True)
class DependencyGraph:
    """Output qubits, joined when their lightcones intersect."""

    vertices: tuple[int, ...]
    edges: frozenset[frozenset[int]]
    cones: dict[int, frozenset[int]] = field(compare=False)

    def neighbors(self, v: int) -> list[int]:
        return sorted(u for e in self.edges if v in e for u in e if u != v)

    @property
    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        return adj

    @property
    def degree(self) -> int:
        return max((len(n) for n in self.adjacency.values()), default=0)

    @property
    def num_colors(self) -> int:
        """D = degree + 1."""
        return self.degree + 1

    def cone_union(self, qubits: Iterable[int]) -> frozenset[int]:
        """D_S for a set S of output qubits."""
        out: set[int] = set()
        for q in qubits:
            out |= self.cones[q]
        return frozenset(out)


def dependency_graph(c: Circuit) -> DependencyGraph:
    cones = {q: backward_cone(c, q).cone for q in c.outputs}
    outs = c.outputs
    edges = {
        frozenset((a, b))
        for i, a in enumerate(outs)
        for b in outs[i + 1:]
        if cones[a] & cones[b]
    }
    return DependencyGraph(outs, frozenset(edges), cones)


def greedy_coloring(g: DependencyGraph) -> dict[int, int]:
    """Ascending vertex order, least color (from 1) unused by colored neighbors."""
    adj = g.adjacency
    colors: dict[int, int] = {}
    for v in sorted(g.vertices):
        taken = {colors[u] for u in adj[v] if u in colors}
        c = 1
        while c in taken:
            c += 1
        colors[v] = c
    return colors


def is_proper(g: DependencyGraph, colors: dict[int, int]) -> bool:
    return all(len({colors[v] for v in e}) == 2 for e in g.edges)


def color_classes(colors: dict[int, int], num_colors: int) -> list[list[int]]:
    """B_1..B_D (possibly empty), each sorted."""
    classes: list[list[int]] = [[] for _ in range(num_colors)]
    for v, c in sorted(colors.items()):
        classes[c - 1].append(v)
    return classes


@lru_cache(maxsize=1 << 16)
def restrict_to_cone(
    layers: tuple[tuple[Gate, ...], ...], q: int
) -> tuple[tuple[tuple[Gate, ...], ...], tuple[int, ...]]:
    """Keep only gates that touch the live cone of ``q``; drop emptied layers.

    The kept layers have the same suffix cones (minus repeats), so they
    determine P_q together with the initial bits on the cone. Returns the
    kept layers and the sorted cone D_q.
    """
    cones = layer_suffix_cones(layers, q)
    kept = []
    for level, layer in enumerate(layers):
        live = cones[level]
        sub = tuple(g for g in layer if live.intersection(g.operands))
        if sub:
            kept.append(sub)
    return tuple(kept), tuple(sorted(cones[0]))


def bounds_hold(c: Circuit, g: DependencyGraph | None = None) -> dict[str, bool | None]:
    """Check |D_q| <= 2^d and degree < 2^(2d); None when a gate is wider than 2."""
    if c.max_width > 2:
        return {"cone_bound": None, "degree_bound": None, "colors_bound": None}
    g = g or dependency_graph(c)
    d = depth(c)
    return {
        "cone_bound": all(len(cone) <= 2**d for cone in g.cones.values()),
        "degree_bound": g.degree < 2 ** (2 * d) if g.vertices else True,
        "colors_bound": g.num_colors <= 2 ** (2 * d) if g.vertices else True,
    }
