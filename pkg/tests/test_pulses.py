import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ghca.core import Configuration, Params, iterate, step
from ghca.nonwandering import find_period
from ghca.pulses import (INF, CutError, NoCompletionError, NotInZError, R_PARTICLE, L_PARTICLE,
                         ZPrimeConfig, annihilating_completion, collision_origin,
                         collision_schedule, expected_Z_preimage_count, in_Z, membership,
                         oscillating_pairs, periodic_approximant, preimages_in_Z,
                         pulse_matrix, random_Z_config, separating_positions,
                         simulate_collisions, step_Tprime, substitute_U, waiting_times,
                         waiting_times_general)

from conftest import params_small, z_configs


def pair(p, gap):
    return Configuration.finite(p.pulse_right + (0,) * gap + p.pulse_left, -p.top)


def test_pulse_matrix_shape():
    m = pulse_matrix(Params(1, 1))
    assert m.tolist() == [[1, 1, 0], [0, 0, 1], [1, 0, 0]]


@pytest.mark.parametrize("c", range(2, 12))
def test_pulse_matrix_words_match_brute_force(c):
    """Words of the pulse shift: state 0 goes to 0 or 1, any other state s
    to s+1 mod a."""
    p = Params(1, c - 1)
    m = pulse_matrix(p)
    n = 5
    brute = sum(1 for w in itertools.product(range(p.a), repeat=n)
                if all((u == 0 and v in (0, 1)) or (u and v == (u + 1) % p.a)
                       for u, v in zip(w, w[1:])))
    assert int(np.linalg.matrix_power(m, n - 1).sum()) == brute


def test_membership_examples(p24):
    assert membership(pair(p24, 4), p24) == {"Z", "S_LR"}
    z = Configuration.make((0, 6, 5, 4, 3, 2, 1), (), 0, (1, 2, 3, 4, 5, 6, 0))
    assert membership(z, p24) == {"Z", "S_LR", "Z_inf"}
    assert membership(Configuration.finite(p24.pulse_left), p24) == {"Z", "S_L"}
    assert membership(Configuration.zero(), p24) == {"Z", "S_L", "S_R"}
    assert membership(Configuration.finite((1,)), p24) == frozenset()


def test_separating_interval(p24):
    isp = separating_positions(pair(p24, 4), p24)
    assert (isp.p_minus, isp.p_plus) == (-1, 3)
    assert isp.mid == 1 and isp.count == 5


def test_waiting_times_pair(p24):
    k = waiting_times(pair(p24, 4), p24)
    assert k[0] == 4 and k[1] == INF and k[-3] == INF


def test_waiting_times_periodic(p24):
    left = (0, 0) + p24.pulse_right
    right = p24.pulse_left + (0, 0, 0)
    x = Configuration.make(left, (0,) * 5, 0, right)
    k = waiting_times(x, p24)
    assert k[0] == 5
    assert [k[j] for j in range(1, 5)] == [3, 3, 3, 3]
    assert [k[-j] for j in range(1, 5)] == [2, 2, 2, 2]


@pytest.mark.parametrize("ell", [1, 2, 3, 4])
def test_annihilation_clock(p24, ell):
    x = pair(p24, 2 * ell)
    assert iterate(x, ell, p24) == Configuration.finite(p24.pulse_right + p24.pulse_left, ell - p24.top)
    times = [t for t in range(30) if iterate(x, t, p24).is_zero()]
    assert times[0] == ell + p24.top


@given(z_configs(periodic=0.8, pre_steps=12))
def test_collision_schedule_matches_simulation(px):
    p, x = px
    try:
        c0, t0, s0 = collision_origin(x, p)
        k = waiting_times_general(x, p)
        sch = collision_schedule(k, p, 5, c0, t0, s0)
    except ValueError:
        return
    sim = simulate_collisions(x, p, 5)
    ahead = [(c, t) for c, t in zip(sch.sites, sch.times) if t >= 0]
    assert ahead == list(zip(sim.sites, sim.times))[:len(ahead)]


def test_plain_recursion_drifts():
    """With an odd central gap the contact width matters."""
    p = Params(1, 1)
    left = (0,) + p.pulse_right
    right = p.pulse_left + (0, 0)
    x = Configuration.make(left, (0, 0, 0), 0, right)
    k = waiting_times(x, p)
    c0, t0, s0 = collision_origin(x, p)
    sim = simulate_collisions(x, p, 6)
    good = collision_schedule(k, p, 6, c0, t0, s0)
    plain = collision_schedule(k, p, 6, c0, t0, s0, parity_corrected=False)
    assert good.sites == sim.sites and good.times == sim.times
    assert (plain.sites, plain.times) != (sim.sites, sim.times)


def brute_preimages_in_Z(x, p, pad):
    """All y in Z with Ty = x, searched over cells near the interaction
    with the rest forced to be the translated trains."""
    isp = separating_positions(x, p)
    pm, pp = int(isp.p_minus), int(isp.p_plus)
    lo, hi = pm - pad, pp + pad + 1
    out = set()
    left_part = x.translate(-1)
    right_part = x.translate(1)
    for mid in itertools.product(range(p.a), repeat=hi - lo):
        cand = Configuration.make(left_part.left, left_part.window(left_part.offset - 1, lo) + mid
                                  + right_part.window(hi, right_part.end + 1),
                                  left_part.offset - 1, right_part.right)
        if step(cand, p) == x and in_Z(cand, p):
            out.add(cand)
    return out


@pytest.mark.parametrize("gap", [0, 1, 2, 3, 4])
def test_preimages_in_Z_against_brute_force(gap):
    p = Params(1, 1)
    x = pair(p, gap)
    got = preimages_in_Z(x, p)
    assert all(step(y, p) == x and in_Z(y, p) for y in got)
    assert got == brute_preimages_in_Z(x, p, 1)
    assert len(got) == expected_Z_preimage_count(x, p)


@given(z_configs(periodic=0.0, pre_steps=6))
def test_preimages_in_Z_are_preimages(px):
    p, x = px
    got = preimages_in_Z(x, p)
    assert got
    for y in got:
        assert step(y, p) == x and in_Z(y, p)
    if "S_LR" in membership(x, p) and not ({"S_L", "S_R"} <= membership(x, p)):
        assert len(got) == expected_Z_preimage_count(x, p)


def test_preimages_need_Z():
    with pytest.raises(NotInZError):
        preimages_in_Z(Configuration.finite((1,)), Params(1, 1))


def test_substitute_U_places_particles(p24):
    u = substitute_U(pair(p24, 4), p24)
    assert u.particles(-20, 20) == [(-6, R_PARTICLE), (9, L_PARTICLE)]
    assert u.is_valid(p24)


@given(z_configs(periodic=0.5, pre_steps=10))
def test_particle_picture_commutes(px):
    p, x = px
    u = substitute_U(x, p)
    for _ in range(15):
        x = step(x, p)
        u = step_Tprime(u, p)
        assert substitute_U(x, p) == u


def test_tprime_annihilates_close_pairs():
    p = Params(1, 1)
    cells = Configuration.finite((R_PARTICLE, 0, L_PARTICLE), 0)
    out = step_Tprime(ZPrimeConfig(cells), p)
    assert out.cells.is_zero()


@given(params_small, st.lists(st.integers(0, 6), min_size=2, max_size=6))
def test_oscillating_pair_never_dies(p, w):
    """A pair with step size in [r+1, e] runs through all states forever."""
    w = tuple(v % p.a for v in w)
    osc = oscillating_pairs(w, p)
    x = Configuration.finite(w)
    for i in osc:
        s = (w[i + 1] - w[i]) % p.a
        y = x
        for _ in range(3 * p.a):
            y = step(y, p)
            assert (y[i + 1] - y[i]) % p.a == s
            assert y[i] or y[i + 1]


@given(st.integers(1, 3), st.integers(0, 2), st.lists(st.integers(0, 100), min_size=1, max_size=8))
def test_completion_dies_out_when_e_le_r(e, extra, raw):
    p = Params(e, e + extra)
    w = tuple(v % p.a for v in raw)
    x, t = annihilating_completion(w, p)
    assert x.window(0, len(w)) == w
    assert iterate(x, t, p).is_zero()
    assert t == 0 or not iterate(x, t - 1, p).is_zero()


def test_completion_refuses_oscillating_block():
    p = Params(2, 1)
    with pytest.raises(NoCompletionError):
        annihilating_completion((0, 2), p)


def test_completion_with_padding_for_e_gt_r():
    p = Params(2, 1)
    x, t = annihilating_completion((2, 1, 2), p)
    assert x.window(0, 3) == (2, 1, 2) and iterate(x, t, p).is_zero()


@given(z_configs(periodic=0.7, pre_steps=8), st.integers(0, 8))
def test_periodic_approximant(px, half):
    p, x = px
    try:
        y = periodic_approximant(x, half, p)
    except (CutError, NotInZError):
        return
    assert y.window(-half, half + 1) == x.window(-half, half + 1)
    assert in_Z(y, p)
    assert find_period(y, 4000, p) is not None


def test_random_Z_config_is_in_Z():
    rng = random.Random(1)
    for _ in range(50):
        p = Params(rng.randint(1, 3), rng.randint(1, 3))
        assert in_Z(random_Z_config(p, rng), p)
