import networkx as nx
import pytest
from hypothesis import given, strategies as st

from ghca.core import Params, step_size
from ghca.symbolic import (InvalidTrajectoryError, communicating_classes,
                           step_size_trajectory, step_transition_graph, transition_times)

from conftest import periodic_configs

pairs = [(e, r) for e in range(1, 13) for r in range(1, 13)]


@pytest.mark.parametrize("e,r", pairs)
def test_graph_edges(e, r):
    p = Params(e, r)
    g = step_transition_graph(p)
    for s in range(p.a):
        assert g.has_edge(s, s)
        assert g.has_edge(s, (s + 1) % p.a) == (s == 0 or p.is_refractory(s))
        assert g.has_edge(s, (s - 1) % p.a) == (s <= r)
    assert all((v - u) % p.a in (0, 1, p.a - 1) for u, v in g.edges)


@pytest.mark.parametrize("e,r", pairs)
def test_classes_are_sccs(e, r):
    p = Params(e, r)
    part = communicating_classes(p)
    sccs = {frozenset(c) for c in nx.strongly_connected_components(step_transition_graph(p).to_networkx())}
    assert sccs == set(part.classes())
    assert part.c0 == {0, 1, e + r}
    assert part.cpi == (set(range(e + 1, r + 1)) if r > e else set())


def test_class_examples():
    a = communicating_classes(Params(3, 7))
    assert a.c0 == {0, 1, 10} and a.cpi == {4, 5, 6, 7}
    assert set(a.singletons) == {2, 3, 8, 9}
    b = communicating_classes(Params(7, 4))
    assert b.c0 == {0, 1, 11} and not b.cpi
    assert a.class_of(5) == a.cpi


@given(periodic_configs(), st.integers(-3, 3))
def test_observed_transitions_are_graph_edges(px, pos):
    """Independent check of the graph: every step-size change seen in a
    simulation is an edge."""
    p, x = px
    seq, ok = step_size_trajectory(x, pos, 3 * p.a, p)
    g = step_transition_graph(p)
    assert ok
    assert all(g.has_edge(u, v) for u, v in zip(seq, seq[1:]))


def test_step_size_trajectory_of_pulse():
    p = Params(1, 1)
    from ghca.core import Configuration
    x = Configuration.finite(p.pulse_left, 0)
    seq, ok = step_size_trajectory(x, 0, 3, p)
    assert ok and seq[0] == step_size(1, 2, p)


def test_transition_times_kinds():
    p = Params(1, 2)
    rec = transition_times((0, 1, 1, 0, 3, 0), p)
    assert rec.times == (1, 3, 4, 5)
    assert rec.kinds == ("inc", "dec", "dec", "inc")
    assert rec.adjacency == ("separated", "consecutive", "consecutive", "consecutive")
    assert rec.returns == (3, 5)
    assert rec.balance_at_returns()


def test_transition_times_rejects_jumps():
    with pytest.raises(InvalidTrajectoryError):
        transition_times((0, 2), Params(2, 2))
    with pytest.raises(ValueError):
        transition_times((), Params(1, 1))
