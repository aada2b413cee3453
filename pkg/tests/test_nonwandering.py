import pytest
from hypothesis import given, strategies as st

from ghca.core import Configuration, Params, iterate, preimage_blocks, step
from ghca.nonwandering import (ExampleConstraintError, alternating_var_example,
                               classify_nonwandering, const_interval_example, count_ancestors,
                               death_depth, enumerate_family, eventual_image_depth,
                               find_period, find_spiral_seed, forbidden_block_scan, in_F31,
                               make_dislocation_example, prep_values)

from conftest import params_small, periodic_configs

small = [Params(e, r) for e in (1, 2) for r in (1, 2)]


@given(params_small, st.data())
def test_ancestor_count_matches_enumeration(p, data):
    w = tuple(data.draw(st.lists(st.integers(0, p.top), min_size=1, max_size=3)))
    d = data.draw(st.integers(1, 2))
    blocks, _ = preimage_blocks(w, d, p)
    assert count_ancestors(w, d, p) == len(blocks)


@pytest.mark.parametrize("p", small)
def test_F30_dies_in_one_step(p):
    for blk in enumerate_family("F30", p):
        assert not eventual_image_depth(blk, 1, p)


@pytest.mark.parametrize("p", small)
@pytest.mark.parametrize("fam", ["F31", "F32"])
def test_F31_F32_die_by_alphabet_size(p, fam):
    for blk in enumerate_family(fam, p):
        assert not eventual_image_depth(blk, p.a, p)


def refractory_gap(blk, p):
    return blk[1] == 0 and p.is_refractory(blk[0]) and p.is_refractory(blk[2])


@pytest.mark.parametrize("p", small + [Params(1, 3), Params(3, 1)])
def test_F33_death_depths(p):
    """Outside the (R, 0, R) blocks F33 dies by depth a; those need up to a+2."""
    for blk in enumerate_family("F33", p):
        d = death_depth(blk, p, p.a + 3)
        assert d is not None
        if refractory_gap(blk, p):
            assert d <= p.a + 2
        else:
            assert d <= p.a


def test_refractory_gap_block_outlives_alphabet_size():
    p = Params(2, 2)
    assert eventual_image_depth((4, 0, 4), p.a, p)
    assert death_depth((4, 0, 4), p, 10) == 6


@given(periodic_configs())
def test_forbidden_blocks_absent_from_images(px):
    """Brute-force check: simulated images never contain the blocks."""
    p, x = px
    y1 = step(x, p)
    assert not [h for h in forbidden_block_scan(y1, p) if h.family == "F30"]
    ya = iterate(x, p.a, p)
    assert not [h for h in forbidden_block_scan(ya, p) if h.family in ("F31", "F32")]


def test_family_membership():
    p = Params(2, 2)
    assert in_F31((3, 3, 3), p) and not in_F31((0, 0, 0), p)
    assert (0, 1, 0) in enumerate_family("F30", p)
    assert all(len(b) == 5 for b in enumerate_family("Fn", p, n=5))


@pytest.mark.parametrize("e,r", [(e, r) for e in range(1, 4) for r in range(1, 4)])
def test_prep_values(e, r):
    p = Params(e, r)
    for av in range(2, e + 2):
        assert prep_values(av, p, "right") == {e + r - av + 2}
        assert prep_values(av, p, "left") == {e + r - av + 2}


@pytest.mark.parametrize("width", [1, 2, 3, 4, 5])
def test_const_interval_example(p24, width):
    x = const_interval_example(p24, width)
    assert find_period(x, 50, p24) == 7
    assert classify_nonwandering(x, 30, p24).label == "OmegaConst"


def test_alternating_var_example(p24):
    x = alternating_var_example(p24)
    assert find_period(x, 50, p24) == 15
    lab = classify_nonwandering(x, 40, p24)
    assert lab.label == "OmegaVar" and lab.period == 15


def test_example_constraints():
    with pytest.raises(ExampleConstraintError):
        alternating_var_example(Params(1, 1))
    with pytest.raises(ValueError):
        make_dislocation_example(Params(2, 4), "nope")


@pytest.mark.parametrize("e,r", [(2, 1), (3, 1), (3, 2)])
def test_spiral_examples(e, r):
    p = Params(e, r)
    assert find_spiral_seed(e, r) is not None
    x = make_dislocation_example(p, "spiral")
    lab = classify_nonwandering(x, 20, p)
    assert lab.label == "OmegaConst" and lab.period == p.a


def test_classify_basic(p24):
    assert classify_nonwandering(Configuration.zero(), 10, p24).label == "Z"
    assert classify_nonwandering(Configuration.finite(p24.pulse_left), 10, p24).label == "Z"
    lab = classify_nonwandering(Configuration.finite((1,)), 10, p24)
    assert lab.label == "NotNonwandering" and lab.forbidden_hits
    assert classify_nonwandering(Configuration.finite((3, 3, 3)), 10, p24).label == "NotNonwandering"
    with pytest.raises(ValueError):
        classify_nonwandering(Configuration.zero(), 2, p24)
    assert '"label": "Z"' in classify_nonwandering(Configuration.zero(), 10, p24).to_json()


@given(periodic_configs())
def test_nonwandering_labels_are_sound(px):
    """A definite NotNonwandering verdict must not be a periodic point."""
    p, x = px
    lab = classify_nonwandering(x, 2 * p.a, p)
    if lab.label == "NotNonwandering":
        assert find_period(x, 60, p) is None
