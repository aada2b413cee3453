import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ghca.core import (Configuration, EnumerationCapError, MalformedConfigurationError,
                       Params, cylinder_distance, evolve, glue, iterate, one_step_preimages,
                       preimage_blocks, step, step_block, step_size, validate)

from conftest import finite_configs, params_small, periodic_configs


def rule_oracle(left, centre, right, p):
    if centre:
        return (centre + 1) % p.a
    return 1 if (1 <= left <= p.e or 1 <= right <= p.e) else 0


def image_oracle(cells, p):
    return tuple(rule_oracle(cells[i - 1], cells[i], cells[i + 1], p)
                 for i in range(1, len(cells) - 1))


def test_alphabet():
    p = Params(2, 4)
    assert p.a == 7 and p.top == 6
    assert list(p.excited) == [1, 2] and list(p.refractory) == [3, 4, 5, 6]
    assert p.pulse_left == (1, 2, 3, 4, 5, 6)
    assert p.pulse_right == (6, 5, 4, 3, 2, 1)


def test_bad_params():
    with pytest.raises(ValueError):
        Params(0, 1)


def test_single_excitation_spreads():
    p = Params(1, 1)
    x = step(Configuration.finite((1,)), p)
    assert x == Configuration.finite((1, 2, 1), -1)


def test_pulses_travel(p24):
    left = Configuration.finite(p24.pulse_left, 0)
    assert step(left, p24) == left.translate(-1)
    right = Configuration.finite(p24.pulse_right, 0)
    assert step(right, p24) == right.translate(1)


def test_zero_is_fixed():
    assert step(Configuration.zero(), Params(3, 2)).is_zero()


@given(periodic_configs())
def test_step_matches_local_rule(px):
    p, x = px
    lo, hi = x.span(3)
    y = step(x, p)
    assert y.window(lo + 1, hi - 1) == image_oracle(x.window(lo, hi), p)


@given(periodic_configs(), st.integers(-6, 6))
def test_step_commutes_with_shift(px, k):
    p, x = px
    assert step(x.translate(k), p) == step(x, p).translate(k)


@given(periodic_configs())
def test_step_commutes_with_reflection(px):
    p, x = px
    assert step(x.reflect(), p) == step(x, p).reflect()
    assert x.reflect().reflect() == x


@given(periodic_configs(), st.integers(1, 3), st.integers(1, 3))
def test_normal_form_is_canonical(px, kl, kr):
    """Unrolling tails into the core and repeating periods changes nothing."""
    p, x = px
    lo, hi = x.offset - kl * len(x.left), x.end + kr * len(x.right)
    y = Configuration.make(x.left * 2, x.window(lo, hi), lo, x.right * 3)
    assert y == x


def test_normal_form_absorbs_core():
    x = Configuration.make((0,), (0, 0, 1, 0), 5, (0,))
    assert x.core == (1,) and x.offset == 7


def test_tail_period_must_be_nonempty():
    with pytest.raises(MalformedConfigurationError):
        Configuration.make((), (1,), 0, (0,))


def test_validate_rejects_large_state():
    with pytest.raises(MalformedConfigurationError):
        validate(Configuration.finite((5,)), Params(1, 1))


def test_step_size():
    p = Params(2, 4)
    assert step_size(3, 1, p) == 5
    assert step_size(0, 0, p) == 0
    assert all(0 <= step_size(a, b, p) < p.a for a in range(7) for b in range(7))


def test_evolve_and_rows(p24):
    x = Configuration.finite(p24.pulse_left)
    traj = evolve(x, 3, p24)
    assert len(traj) == 4 and traj[3] == iterate(x, 3, p24)
    rows = traj.rows(-3, 6)
    assert rows[0] == (0, 0, 0, 1, 2, 3, 4, 5, 6)
    assert rows[3] == (1, 2, 3, 4, 5, 6, 0, 0, 0)
    with pytest.raises(ValueError):
        evolve(x, -1, p24)


def test_cylinder_distance():
    x = Configuration.finite((1, 0, 0, 0, 1), -2)
    assert cylinder_distance(x, x) == 0
    y = Configuration.finite((1, 0, 0, 0, 2), -2)
    assert cylinder_distance(x, y) == Fraction(1, 2)
    z = Configuration.finite((2,), 0)
    assert cylinder_distance(Configuration.zero(), z) == 2
    far = Configuration.finite((1,), 4)
    assert cylinder_distance(Configuration.zero(), far) == Fraction(1, 8)


def test_glue():
    a = Configuration.make((1,), (), 0, (1,))
    b = Configuration.make((2,), (), 0, (2,))
    g = glue(a, b, (0, 0), 3)
    assert g.window(0, 7) == (1, 1, 1, 0, 0, 2, 2)


def brute_preimages(w, depth, p):
    n = len(w) + 2 * depth
    out = []
    for v in itertools.product(range(p.a), repeat=n):
        u = v
        for _ in range(depth):
            u = image_oracle(u, p)
        if u == tuple(w):
            out.append(v)
    return sorted(out)


@pytest.mark.parametrize("e,r,w,depth", [
    (1, 1, (0, 1, 0), 1), (1, 1, (1, 1), 2), (1, 1, (2, 0, 2, 0), 3),
    (1, 1, (1, 2, 0, 1), 3), (1, 2, (0, 3), 2), (2, 1, (1, 0, 1), 1),
    (2, 2, (4, 0), 2), (2, 2, (1, 2, 3), 1), (1, 2, (2, 0, 1, 1), 2),
])
def test_preimages_complete_against_brute_force(e, r, w, depth):
    p = Params(e, r)
    got, flag = preimage_blocks(w, depth, p)
    assert sorted(got) == brute_preimages(w, depth, p)


@given(params_small, st.data())
def test_preimages_are_sound(p, data):
    w = tuple(data.draw(st.lists(st.integers(0, p.top), min_size=1, max_size=4)))
    depth = data.draw(st.integers(1, 2))
    got, _ = preimage_blocks(w, depth, p)
    for v in got:
        u = v
        for _ in range(depth):
            u = step_block(u, p)
        assert tuple(u) == w


def test_one_step_preimages_of_isolated_one():
    p = Params(1, 1)
    pre = one_step_preimages((0, 1, 0), p)
    assert all(image_oracle(v, p) == (0, 1, 0) for v in pre)


def test_enumeration_cap():
    with pytest.raises(EnumerationCapError):
        preimage_blocks((0, 0, 0, 0), 3, Params(2, 2), cap=10)
