"""Step-size transition graph, its communicating classes and per-site
step-size trajectories."""
from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .core import Configuration, Params, step, step_size


class InvalidTrajectoryError(ValueError):
    pass


@dataclass(frozen=True)
class StepGraph:
    nodes: tuple
    edges: frozenset

    def has_edge(self, s1: int, s2: int) -> bool:
        return (s1, s2) in self.edges

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from(self.edges)
        return g

    def to_dot(self) -> str:
        lines = ["digraph stepsizes {"]
        lines += [f"  {s};" for s in self.nodes]
        lines += [f"  {u} -> {v};" for u, v in sorted(self.edges)]
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ClassPartition:
    c0: frozenset
    cpi: frozenset
    singletons: tuple

    def classes(self) -> list:
        out = [self.c0]
        if self.cpi:
            out.append(self.cpi)
        out += [frozenset({s}) for s in self.singletons]
        return out

    def class_of(self, s: int) -> frozenset:
        for c in self.classes():
            if s in c:
                return c
        raise KeyError(s)


def step_transition_graph(p: Params) -> StepGraph:
    a = p.a
    edges = set()
    for s in range(a):
        edges.add((s, s))
        if s == 0 or p.is_refractory(s):
            edges.add((s, (s + 1) % a))
        if s <= p.r:
            edges.add((s, (s - 1) % a))
    return StepGraph(tuple(range(a)), frozenset(edges))


def communicating_classes(p: Params) -> ClassPartition:
    """Closed form, cross-checked against the SCCs of the graph."""
    c0 = frozenset({p.top, 0, 1})
    cpi = frozenset(range(p.e + 1, p.r + 1)) if p.r > p.e else frozenset()
    rest = tuple(s for s in range(p.a) if s not in c0 and s not in cpi)
    part = ClassPartition(c0, cpi, rest)
    sccs = {frozenset(c) for c in
            nx.strongly_connected_components(step_transition_graph(p).to_networkx())}
    if sccs != set(part.classes()):
        raise AssertionError(f"closed-form classes disagree with SCCs for {p}")
    return part


def step_size_trajectory(x: Configuration, pos: int, n: int, p: Params) -> tuple:
    """Step sizes s((T^m x)_pos, (T^m x)_{pos+1}) for m = 0..n and a flag
    telling whether every change is an edge of the transition graph."""
    graph = step_transition_graph(p)
    seq = []
    for _ in range(n + 1):
        seq.append(step_size(x[pos], x[pos + 1], p))
        x = step(x, p)
    valid = all(graph.has_edge(u, v) for u, v in zip(seq, seq[1:]))
    return tuple(seq), valid


@dataclass(frozen=True)
class TransitionRecord:
    times: tuple
    kinds: tuple
    adjacency: tuple
    returns: tuple = field(default=())

    def balance_at_returns(self) -> bool:
        """Increments equal decrements up to every step return."""
        for ret in self.returns:
            inc = sum(1 for t, k in zip(self.times, self.kinds)
                      if t <= ret and k == "inc")
            dec = sum(1 for t, k in zip(self.times, self.kinds)
                      if t <= ret and k == "dec")
            if inc != dec:
                return False
        return True


def transition_times(seq, p: Params) -> TransitionRecord:
    """Transition times m (seq[m] != seq[m-1]) with their kinds.

    A time is consecutive if a neighbouring transition time is adjacent,
    separated otherwise. Returns are the indices m > 0 with seq[m] == seq[0].
    """
    seq = tuple(seq)
    if not seq:
        raise ValueError("empty step-size sequence")
    a = p.a
    times, kinds = [], []
    for m in range(1, len(seq)):
        if seq[m] == seq[m - 1]:
            continue
        d = (seq[m] - seq[m - 1]) % a
        if d == 1:
            kinds.append("inc")
        elif d == a - 1:
            kinds.append("dec")
        else:
            raise InvalidTrajectoryError(
                f"jump {seq[m - 1]} -> {seq[m]} at time {m} is not +-1")
        times.append(m)
    tset = set(times)
    adjacency = tuple("consecutive" if (m - 1 in tset or m + 1 in tset) else "separated"
                      for m in times)
    returns = tuple(m for m in range(1, len(seq)) if seq[m] == seq[0])
    return TransitionRecord(tuple(times), tuple(kinds), adjacency, returns)
