import random

import pytest
from hypothesis import settings, strategies as st

from ghca.core import Configuration, Params, iterate
from ghca.pulses import membership, random_Z_config

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

params_small = st.builds(Params, st.integers(1, 3), st.integers(1, 3))


@st.composite
def finite_configs(draw, p=None, max_len=8):
    p = p or draw(params_small)
    core = draw(st.lists(st.integers(0, p.top), max_size=max_len))
    off = draw(st.integers(-5, 5))
    return p, Configuration.finite(core, off)


@st.composite
def periodic_configs(draw, max_len=5):
    """Eventually periodic configuration with arbitrary tails."""
    p = draw(params_small)
    word = st.lists(st.integers(0, p.top), min_size=1, max_size=3)
    left, right = draw(word), draw(word)
    core = draw(st.lists(st.integers(0, p.top), max_size=max_len))
    return p, Configuration.make(left, core, draw(st.integers(-4, 4)), right)


@st.composite
def z_configs(draw, periodic=0.5, zinf=False, pre_steps=10):
    """Members of Z built from random pulse trains, optionally evolved."""
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = random.Random(seed)
    while True:
        p = Params(rng.randint(1, 3), rng.randint(1, 3))
        x = random_Z_config(p, rng, periodic=1.0 if zinf else periodic)
        x = iterate(x, rng.randint(0, pre_steps), p)
        flags = membership(x, p)
        if ("Z_inf" if zinf else "Z") in flags:
            return p, x


@pytest.fixture
def p24():
    return Params(2, 4)
