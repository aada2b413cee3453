import pytest
from hypothesis import given, strategies as st

from ghca.core import Configuration, Params, glue, step
from ghca.pulses import NotInZError, separating_positions
from ghca.skewprod import (SkewState, adaptation, from_skew, p_mid, shift_left_half,
                           shift_right_half, skew_step, to_skew, verify_conjugacy)

from conftest import z_configs


def trains(p, gl, gr, core=()):
    left = (0,) * gl + p.pulse_right
    right = p.pulse_left + (0,) * gr
    return Configuration.make(left, core, 0, right)


def test_p_mid_examples(p24):
    x = Configuration.finite(p24.pulse_right + (0,) * 4 + p24.pulse_left, -6)
    assert p_mid(x, p24) == 1
    y = trains(p24, 1, 1, (0,))
    isp = separating_positions(y, p24)
    assert p_mid(y, p24) == (isp.p_minus + isp.p_plus) // 2


def test_p_mid_needs_interval(p24):
    with pytest.raises(NotInZError):
        p_mid(Configuration.finite((1,)), p24)


@given(z_configs(zinf=True))
def test_round_trip(px):
    p, x = px
    z = to_skew(x, p)
    assert from_skew(z, p) == x
    assert z.xR.window(1, 40) == (0,) * 39 and z.xL.window(-39, 1) == (0,) * 40


@given(z_configs(zinf=True), st.integers(-5, 5))
def test_adaptation_is_translation_invariant(px, k):
    p, x = px
    q = p_mid(x, p)
    assert adaptation(x.translate(k), q + k, p) == adaptation(x, q, p)


def test_adaptation_zero_while_approaching(p24):
    x = trains(p24, 2, 2, (0,) * 6)
    assert adaptation(x, p_mid(x, p24), p24) == 0


def test_symmetric_gaps_conjugate(p24):
    assert verify_conjugacy(trains(p24, 2, 2, (0,) * 4), 10, p24) == (True, None)


def test_odd_gap_single_step():
    p = Params(1, 1)
    x = trains(p, 1, 1, (0,))
    assert separating_positions(x, p).count == 2
    assert verify_conjugacy(x, 1, p) == (True, None)


def test_asymmetric_gaps_shift_the_cut():
    p = Params(1, 1)
    x = trains(p, 1, 3, (0, 0))
    alphas = []
    for _ in range(20):
        alphas.append(adaptation(x, p_mid(x, p), p))
        x = step(x, p)
    assert any(a != 0 for a in alphas)


@given(z_configs(zinf=True))
def test_conjugacy(px):
    p, x = px
    assert verify_conjugacy(x, 40, p) == (True, None)


def test_zero_padding_shifts():
    xR = Configuration.make((0, 2, 1), (), 1, (0,))
    assert xR.window(-2, 1) == (0, 2, 1)
    out = shift_right_half(shift_right_half(xR, 1), -2)
    assert out.window(-3, 1) == (0, 2, 0, 0)
    xL = Configuration.make((0,), (), 1, (1, 2, 0))
    out = shift_left_half(shift_left_half(xL, 1), -1)
    assert out.window(1, 5) == (0, 2, 0, 1)


def test_pure_product_when_alpha_zero(p24):
    x = trains(p24, 2, 2, (0,) * 6)
    z = to_skew(x, p24)
    z1 = skew_step(z, p24)
    assert z1.p == z.p
    assert z1.xR == shift_right_half(z.xR, 1) and z1.xL == shift_left_half(z.xL, 1)


def test_from_skew_rejects_junction_dislocation(p24):
    xR = glue(Configuration.make((0, 6, 5, 4, 3, 2, 1)), Configuration.zero(), (), 1)
    xL = glue(Configuration.zero(), Configuration.make((1,), (), 0, (3, 4, 5, 6, 0, 1, 2)), (), 1)
    with pytest.raises(NotInZError):
        from_skew(SkewState(xR, xL, 0), p24)


def test_to_skew_rejects_finite(p24):
    with pytest.raises(NotInZError):
        to_skew(Configuration.finite(p24.pulse_left), p24)
