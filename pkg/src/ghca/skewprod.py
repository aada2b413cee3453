"""Skew-product form of the dynamics on Z_inf.

A configuration with infinitely many pulses on both sides is cut at its
middle separating position p into a right-moving half xR (sites <= 0) and
a left-moving half xL (sites >= 1). One step shifts xR right and xL left
and moves the cut by the adaptation alpha = p_mid(Tx) - p.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import Configuration, Params, glue, step
from .pulses import NotInZError, membership, separating_positions

_ZERO = Configuration.zero()


def _keep_left(c: Configuration, k: int) -> Configuration:
    """Equal to c on sites <= k and zero beyond."""
    return glue(c, _ZERO, (), k + 1)


def _keep_right(c: Configuration, k: int) -> Configuration:
    """Equal to c on sites >= k and zero below."""
    return glue(_ZERO, c, (), k)


@dataclass(frozen=True)
class SkewState:
    """Half configurations stored as full Configurations that vanish
    outside their half line (xR on sites <= 0, xL on sites >= 1)."""

    xR: Configuration
    xL: Configuration
    p: int

    def glued(self) -> Configuration:
        return glue(self.xR, self.xL, (), 1)


def p_mid(x: Configuration, p: Params) -> int:
    isp = separating_positions(x, p)
    if isp is None or not isp.finite:
        raise NotInZError("no finite separating interval")
    return isp.mid


def adaptation(x: Configuration, p_anchor: int, p: Params) -> int:
    return p_mid(step(x, p), p) - p_anchor


def _check_zinf(x: Configuration, p: Params) -> None:
    if "Z_inf" not in membership(x, p):
        raise NotInZError("configuration is not in Z_inf")


def to_skew(x: Configuration, p: Params) -> SkewState:
    _check_zinf(x, p)
    q = p_mid(x, p)
    y = x.translate(-q)
    return SkewState(_keep_left(y, 0), _keep_right(y, 1), q)


def from_skew(z: SkewState, p: Params) -> Configuration:
    x = z.glued()
    _check_zinf(x, p)
    return x.translate(z.p)


def shift_right_half(xR: Configuration, m: int) -> Configuration:
    """m-fold right shift of a left half; for m < 0 zeros enter at site 0."""
    return _keep_left(xR.translate(m), 0)


def shift_left_half(xL: Configuration, m: int) -> Configuration:
    """m-fold left shift of a right half; for m < 0 zeros enter at site 1."""
    return _keep_right(xL.translate(-m), 1)


def skew_step(z: SkewState, p: Params) -> SkewState:
    """F(xR, xL, q) = (shift^-alpha(shift xR), shift^alpha(shift xL), q + alpha)
    with alpha the adaptation of the glued state at 0."""
    base = z.glued()
    _check_zinf(base, p)
    alpha = adaptation(base, 0, p)
    # one genuine shift first, then the adaptation; a negative power is
    # the zero-padding pseudo-inverse, so the two do not merge into one
    xR = shift_right_half(shift_right_half(z.xR, 1), -alpha)
    xL = shift_left_half(shift_left_half(z.xL, 1), alpha)
    return SkewState(xR, xL, z.p + alpha)


def verify_conjugacy(x: Configuration, n: int, p: Params) -> tuple:
    """(True, None) if to_skew(T^k x) == F^k(to_skew x) for all k <= n,
    otherwise (False, first failing k)."""
    z = to_skew(x, p)
    y = x
    for k in range(n + 1):
        if to_skew(y, p) != z:
            return False, k
        if k < n:
            y = step(y, p)
            z = skew_step(z, p)
    return True, None
