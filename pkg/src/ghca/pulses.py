"""Pulse trains, their collisions and the particle picture.

A configuration whose left part reads right-to-left along the pulse graph
moves right as a whole (S_R); one whose right part reads left-to-right
along it moves left (S_L). Glued at a separating position they collide
and annihilate pairwise; the collision subsystem Z collects these.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import (Configuration, Params, ZERO_TAIL, glue, iterate,
                   site_preimage_candidates, step, validate)

INF = math.inf

R_PARTICLE = 1
L_PARTICLE = 2


class NotInZError(ValueError):
    pass


class MidAnnihilationError(ValueError):
    pass


class CutError(ValueError):
    """No admissible cut for the periodic approximant; widen the window."""


class NoCompletionError(RuntimeError):
    pass


def pulse_matrix(p: Params) -> np.ndarray:
    """0/1 transition matrix of the one-sided pulse shift."""
    a = p.a
    m = np.zeros((a, a), dtype=np.int64)
    m[0, 0] = m[0, 1] = 1
    for k in range(1, p.top):
        m[k, k + 1] = 1
    m[p.top, 0] = 1
    return m


def _allowed(u: int, v: int, p: Params) -> bool:
    """Pulse-graph edge u -> v."""
    if u == 0:
        return v in (0, 1)
    return v == (u + 1) % p.a


def l_valid(u: int, v: int, p: Params) -> bool:
    """Adjacent pair (x_i, x_{i+1}) allowed in a left-moving train."""
    return _allowed(u, v, p)


def r_valid(u: int, v: int, p: Params) -> bool:
    """Adjacent pair (x_i, x_{i+1}) allowed in a right-moving train."""
    return _allowed(v, u, p)


@dataclass(frozen=True)
class SepInterval:
    p_minus: float
    p_plus: float

    @property
    def finite(self) -> bool:
        return math.isfinite(self.p_minus) and math.isfinite(self.p_plus)

    @property
    def count(self) -> float:
        if not self.finite:
            return INF
        return int(self.p_plus - self.p_minus + 1)

    @property
    def mid(self) -> int:
        if not self.finite:
            raise ValueError("separating interval is not finite")
        return (int(self.p_minus) + int(self.p_plus)) // 2


def _bad_extremes(x: Configuration, p: Params) -> tuple:
    """(max index of a pair that breaks left-motion, min index of a pair
    that breaks right-motion), pair i being (x_i, x_{i+1})."""
    kl, kr = len(x.left), len(x.right)
    lo, hi = x.offset - kl - 1, x.end + kr + 1
    cells = x.window(lo, hi)

    def lbad(i):
        return not l_valid(cells[i - lo], cells[i - lo + 1], p)

    def rbad(i):
        return not r_valid(cells[i - lo], cells[i - lo + 1], p)

    pairs = range(lo, hi - 1)
    if any(lbad(i) for i in range(x.end, x.end + kr)):
        max_l = INF
    else:
        bad = [i for i in pairs if lbad(i)]
        max_l = max(bad) if bad else -INF
    if any(rbad(i) for i in range(x.offset - 1 - kl, x.offset - 1)):
        min_r = -INF
    else:
        bad = [i for i in pairs if rbad(i)]
        min_r = min(bad) if bad else INF
    return max_l, min_r


def separating_positions(x: Configuration, p: Params):
    """Interval of positions q with x_{<=q} right-moving and x_{>q} left-moving.

    For x moving right as a whole the interval reaches +inf, for x moving
    left it starts at -inf. Returns None when there is no such position.
    """
    max_l, min_r = _bad_extremes(x, p)
    if max_l > min_r:
        return None
    return SepInterval(max_l, min_r)


def membership(x: Configuration, p: Params) -> frozenset:
    """Flags among S_R, S_L, S_LR, Z, Z_inf."""
    validate(x, p)
    max_l, min_r = _bad_extremes(x, p)
    flags = set()
    if min_r == INF:
        flags.add("S_R")
    if max_l == -INF:
        flags.add("S_L")
    if flags:
        flags.add("Z")
        return frozenset(flags)
    if max_l > min_r:
        return frozenset()
    flags.add("S_LR")
    q = int(min_r)
    if x[q + 1] == x[q] or max_l < q:
        flags.add("Z")
        if x.left != ZERO_TAIL and x.right != ZERO_TAIL:
            flags.add("Z_inf")
    return frozenset(flags)


def in_Z(x: Configuration, p: Params) -> bool:
    return "Z" in membership(x, p)


# ---------------------------------------------------------------------------
# waiting times and collisions


@dataclass(frozen=True)
class WaitingTimes:
    """Zero-run lengths between consecutive pulses.

    ``right`` lists k_1, k_2, ... and then repeats ``right_cycle``; an empty
    cycle means the train ends and all later entries are infinite. ``left``
    lists k_-1, k_-2, ... the same way.
    """

    k0: float
    right: tuple = ()
    right_cycle: tuple = ()
    left: tuple = ()
    left_cycle: tuple = ()

    def __getitem__(self, j: int) -> float:
        if j == 0:
            return self.k0
        head, cycle = (self.right, self.right_cycle) if j > 0 else (self.left, self.left_cycle)
        i = abs(j) - 1
        if i < len(head):
            return head[i]
        if not cycle:
            return INF
        return cycle[(i - len(head)) % len(cycle)]

    def finite_range(self, side: int) -> float:
        """Number of finite entries on one side (inf for periodic trains)."""
        head, cycle = (self.right, self.right_cycle) if side > 0 else (self.left, self.left_cycle)
        return INF if cycle else len(head)


def _train_gaps(first, seq_fn, prefix_len, period, p: Params) -> tuple:
    """Gap pattern of a one-sided train read away from the split.

    ``seq_fn(i)`` gives the i-th cell counted from the split and follows the
    pulse graph; it is periodic with ``period`` from ``prefix_len`` on. The
    first cell belongs to the innermost (possibly partial) pulse, or is 0
    right after an annihilation. Returns (head, cycle) of the gaps after
    that pulse; an empty cycle means the train ends.
    """
    top = p.top
    starts, gaps = [], []
    # the innermost pulse holds the values first..top
    i = top - first + 1 if first else 0
    limit = prefix_len + 3 * period + 2 * (top + 1)
    zeros = 0
    while i < limit:
        v = seq_fn(i)
        if v == 0:
            zeros += 1
            i += 1
            continue
        if v != 1:
            raise ValueError("train does not follow the pulse graph")
        gaps.append(zeros)
        starts.append(i)
        zeros = 0
        i += top
    if all(seq_fn(prefix_len + t) == 0 for t in range(period)):
        keep = [g for g, s in zip(gaps, starts) if s < prefix_len + period]
        return tuple(keep), ()
    # gaps in front of the second pulse inside the periodic part on repeat
    first_tail = next(n for n, s in enumerate(starts) if s >= prefix_len)
    s0 = starts[first_tail]
    per_period = sum(1 for s in starts if s0 <= s < s0 + period)
    head = tuple(gaps[:first_tail + 1])
    cycle = tuple(gaps[first_tail + 1:first_tail + 1 + per_period])
    return head, cycle


def _gaps_both_sides(x: Configuration, p: Params, pm: int, pp: int) -> tuple:
    kl, kr = len(x.left), len(x.right)
    pre_l = max(0, pm - x.offset + 1)
    pre_r = max(0, x.end - (pp + 1))
    left = _train_gaps(x[pm], lambda i: x[pm - i], pre_l, kl, p)
    right = _train_gaps(x[pp + 1], lambda i: x[pp + 1 + i], pre_r, kr, p)
    return left, right


def waiting_times(x: Configuration, p: Params) -> WaitingTimes:
    """Waiting times of x in Z outside a collision/annihilation phase."""
    flags = membership(x, p)
    if "Z" not in flags:
        raise NotInZError("configuration is not in Z")
    if "S_LR" not in flags:
        # one-directional train: the central gap is infinite
        if "S_R" in flags and "S_L" in flags:
            return WaitingTimes(INF)
        if "S_R" in flags:
            ref = waiting_times(x.reflect(), p)
            return WaitingTimes(INF, left=ref.right, left_cycle=ref.right_cycle)
        if x.left != ZERO_TAIL:
            raise ValueError("left-moving train without a first pulse has no central gap")
        j = x.offset
        head, cycle = _train_gaps(1, lambda i: x[j + i], max(0, x.end - j), len(x.right), p)
        return WaitingTimes(INF, head, cycle)
    isp = separating_positions(x, p)
    pm, pp = int(isp.p_minus), int(isp.p_plus)
    if x[pm] != 1 or x[pp + 1] != 1 or any(x[j] for j in range(pm + 1, pp + 1)):
        raise MidAnnihilationError(
            "configuration is inside an annihilation; rewind with preimages_in_Z")
    return _waiting_times_any(x, p, pm, pp)


def _waiting_times_any(x: Configuration, p: Params, pm: int, pp: int) -> WaitingTimes:
    """Waiting times read off around the current contact, also inside an
    annihilation (partial pulses count as the innermost ones)."""
    (lh, lc), (rh, rc) = _gaps_both_sides(x, p, pm, pp)
    k0 = pp - pm if x[pm] == 1 and x[pp + 1] == 1 else INF
    return WaitingTimes(k0, rh, rc, lh, lc)


def waiting_times_general(x: Configuration, p: Params) -> WaitingTimes:
    """Like waiting_times, but also inside an annihilation; there k_0 is
    reported as infinite since the central gap has been consumed."""
    isp = separating_positions(x, p)
    if isp is None or not isp.finite:
        raise NotInZError("no finite separating interval")
    pm, pp = int(isp.p_minus), int(isp.p_plus)
    return _waiting_times_any(x, p, pm, pp)


@dataclass(frozen=True)
class CollisionSchedule:
    sites: tuple
    times: tuple
    spans: tuple = ()

    def sink_defect(self, p: Params):
        """(tau, speed) if collisions are equidistant in time and space.

        tau is the time between collisions minus e+r and speed the site
        displacement per unit time. None otherwise.
        """
        if len(self.times) < 3:
            return None
        dt = {b - a for a, b in zip(self.times, self.times[1:])}
        dc = {b - a for a, b in zip(self.sites, self.sites[1:])}
        if len(dt) != 1 or len(dc) != 1:
            return None
        step_t, step_c = dt.pop(), dc.pop()
        return step_t - p.top, Fraction(step_c, step_t)

    def to_csv(self) -> str:
        rows = ["n,c_n,t_n"]
        rows += [f"{n},{c},{t}" for n, (c, t) in enumerate(zip(self.sites, self.times))]
        return "\n".join(rows) + "\n"


def collision_origin(x: Configuration, p: Params) -> tuple:
    """(c0, t0, span0) of the current or upcoming central collision.

    Inside an annihilation t0 = 1 - x_{p-} is negative; in the last odd
    stage (0, e+r, 0) the left cell has wrapped to 0 and t0 = 1 - a.
    """
    isp = separating_positions(x, p)
    if isp is None or not isp.finite:
        raise NotInZError("no finite separating interval")
    pm, pp = int(isp.p_minus), int(isp.p_plus)
    c0 = (pm + pp) // 2
    if x[pm] == 1 and x[pp + 1] == 1 and not any(x[j] for j in range(pm + 1, pp + 1)):
        k0 = pp - pm
        return c0, k0 // 2, k0 % 2
    span = pp - pm
    if span > 1:
        raise MidAnnihilationError("unexpected separating interval inside annihilation")
    head = x[pm] if x[pm] else p.a
    return c0, 1 - head, span


def collision_schedule(k: WaitingTimes, p: Params, n_max: int, c0: int = 0,
                       t0=None, span0=None, parity_corrected: bool = True) -> CollisionSchedule:
    """Sites and times of the collisions n = 0..n_max.

    With ``parity_corrected`` the recursion carries the contact width
    (0 for a (1,1) contact, 1 for a (1,0,1) contact) of the previous
    collision; without it the plain recursion
    c_n = c_{n-1} + floor((k_n - k_-n)/2),
    t_n = t_{n-1} + e + r + floor((k_n + k_-n)/2) is used.
    """
    k0 = k[0]
    if t0 is None:
        if not math.isfinite(k0):
            raise ValueError("missing central waiting time k_0")
        t0 = int(k0) // 2
    if span0 is None:
        span0 = int(k0) % 2 if math.isfinite(k0) else 0
    sites, times, spans = [c0], [t0], [span0]
    for n in range(1, n_max + 1):
        kp, km = k[n], k[-n]
        if not (math.isfinite(kp) and math.isfinite(km)):
            raise ValueError(f"missing waiting time for collision {n}")
        d = spans[-1] if parity_corrected else 0
        sites.append(sites[-1] + (kp - km + d) // 2)
        times.append(times[-1] + p.top + (kp + km + d) // 2)
        spans.append((kp + km + d) % 2)
    return CollisionSchedule(tuple(sites), tuple(times), tuple(spans))


def simulate_collisions(x: Configuration, p: Params, n_max: int,
                        t_max: int | None = None) -> CollisionSchedule:
    """Collision events observed by direct simulation.

    An event is recorded at the first time the separating interval has
    width at most one with a 1 on both sides of the contact, i.e. a (1,1)
    or (1,0,1) block; its site is the floor midpoint of the interval.
    """
    if t_max is None:
        t_max = 10 * (n_max + 1) * (p.a + 50)
    sites, times, spans = [], [], []
    for t in range(t_max + 1):
        isp = separating_positions(x, p)
        if isp is not None and isp.finite:
            pm, pp = int(isp.p_minus), int(isp.p_plus)
            if pp - pm <= 1 and x[pm] == 1 and x[pp + 1] == 1:
                sites.append((pm + pp) // 2)
                times.append(t)
                spans.append(pp - pm)
                if len(sites) > n_max:
                    break
        x = step(x, p)
    return CollisionSchedule(tuple(sites), tuple(times), tuple(spans))


# ---------------------------------------------------------------------------
# preimages inside Z


def expected_Z_preimage_count(x: Configuration, p: Params) -> int:
    """Number of preimages in Z read off the separating interval.

    A gap of l >= 2 zeros between the fronts has the preimage with the
    pulses one cell further apart, l preimages with a single e+r remnant
    in the gap and l-1 with an adjacent (e+r, e+r) remnant.
    """
    flags = membership(x, p)
    if "Z" not in flags:
        raise NotInZError("configuration is not in Z")
    if "S_LR" not in flags:
        return 1
    isp = separating_positions(x, p)
    n = isp.count
    pm = int(isp.p_minus)
    if n == 1 or (n == 2 and x[pm + 1] != 0):
        return 1
    return 2 * (n - 1)


def preimages_in_Z(x: Configuration, p: Params) -> set:
    """All preimages of x lying in Z.

    For a one-directional train this is the shifted train. Otherwise the
    outer parts are shifted back and the cells of the separating interval
    plus one are chosen among their site-wise preimages.
    """
    flags = membership(x, p)
    if "Z" not in flags:
        raise NotInZError("configuration is not in Z")
    if "S_R" in flags and "S_L" in flags:
        return {x}
    if "S_R" in flags:
        return {x.translate(-1)}
    if "S_L" in flags:
        return {x.translate(1)}
    isp = separating_positions(x, p)
    lo, hi = int(isp.p_minus), int(isp.p_plus) + 1
    cands = site_preimage_candidates(x.window(lo, hi + 1), p)
    back_l, back_r = x.translate(-1), x.translate(1)
    out = set()

    def rec(i, acc):
        if i == len(cands):
            y = glue(back_l, back_r, acc, lo)
            if step(y, p) == x and in_Z(y, p):
                out.add(y)
            return
        for v in cands[i]:
            rec(i + 1, acc + (v,))

    rec(0, ())
    return out


# ---------------------------------------------------------------------------
# particle picture


@dataclass(frozen=True)
class ZPrimeConfig:
    """Particle configuration over {0, R, L} stored as an eventually
    periodic sequence (0 empty, 1 R-particle, 2 L-particle)."""

    cells: Configuration

    def particles(self, lo: int, hi: int) -> list:
        return [(j, self.cells[j]) for j in range(lo, hi) if self.cells[j]]

    def split(self) -> float:
        """Position of the rightmost R-particle (-inf if there is none)."""
        c = self.cells
        if R_PARTICLE in c.right:
            raise ValueError("R-particles in the right tail")
        lo, hi = c.span(2)
        rs = [j for j in range(lo, hi) if c[j] == R_PARTICLE]
        if rs:
            return rs[-1]
        return -INF

    def is_valid(self, p: Params) -> bool:
        c = self.cells
        if L_PARTICLE in c.left or R_PARTICLE in c.right:
            return False
        lo, hi = c.span(p.a + 2)
        parts = self.particles(lo - len(c.left) * (p.a + 1), hi + len(c.right) * (p.a + 1))
        rs = [j for j, k in parts if k == R_PARTICLE]
        ls = [j for j, k in parts if k == L_PARTICLE]
        if rs and ls and max(rs) >= min(ls):
            return False
        for group in (rs, ls):
            if any(b - a <= p.top for a, b in zip(group, group[1:])):
                return False
        return True


def substitute_U(x: Configuration, p: Params) -> ZPrimeConfig:
    """Replace each pulse by a particle sitting on its e+r cell."""
    if not in_Z(x, p):
        raise NotInZError("configuration is not in Z")
    top = p.top
    kl, kr = len(x.left), len(x.right)
    n = len(x.core)
    lo, hi = x.offset - 1 - kl, x.end + 1 + kr
    src = x.window(lo - 1, hi + 1)
    img = []
    for i in range(1, len(src) - 1):
        v = 0
        if src[i] == top:
            right_ok = src[i + 1] in (top - 1, top)
            left_ok = src[i - 1] in (top - 1, top)
            if right_ok and left_ok:
                raise ValueError(f"ambiguous particle at {lo + i - 1}")
            v = R_PARTICLE if right_ok else L_PARTICLE if left_ok else 0
        img.append(v)
    cells = Configuration.make(img[:kl], img[kl:kl + n + 2], x.offset - 1, img[kl + n + 2:])
    return ZPrimeConfig(cells)


def step_Tprime(z: ZPrimeConfig, p: Params) -> ZPrimeConfig:
    """Move R-particles right and L-particles left; an R and an L one or
    two cells apart annihilate."""
    c = z.cells
    lo = c.offset - len(c.left) - 3
    hi = c.end + len(c.right) + 3
    parts = z.particles(lo, hi)
    rs = sorted(j for j, k in parts if k == R_PARTICLE)
    ls = sorted(j for j, k in parts if k == L_PARTICLE)
    while rs and ls and ls[0] - rs[-1] in (1, 2):
        rs.pop()
        ls.pop(0)
    middle = [0] * (hi - 1 - (lo + 1))
    for j in rs:
        middle[j + 1 - (lo + 1)] = R_PARTICLE
    for j in ls:
        middle[j - 1 - (lo + 1)] = L_PARTICLE
    return ZPrimeConfig(glue(c.translate(1), c.translate(-1), middle, lo + 1))


# ---------------------------------------------------------------------------
# dense basin and periodic approximants


def oscillating_pairs(w, p: Params) -> list:
    """Positions i where (w_i, w_{i+1}) has step size in [r+1, e].

    Such a pair runs through all a states with period a whatever its
    neighbours do: whenever one cell rests, the other is excited.
    """
    a = p.a
    return [i for i in range(len(w) - 1)
            if p.r + 1 <= (w[i + 1] - w[i]) % a <= p.e]


def _outgoing_extremes(x: Configuration, p: Params) -> tuple:
    """(max index of a pair breaking right-motion, min index of a pair
    breaking left-motion); x is diverging iff the first is <= the second."""
    kl, kr = len(x.left), len(x.right)
    lo, hi = x.offset - kl - 1, x.end + kr + 1
    cells = x.window(lo, hi)
    pairs = range(lo, hi - 1)

    def lbad(i):
        return not l_valid(cells[i - lo], cells[i - lo + 1], p)

    def rbad(i):
        return not r_valid(cells[i - lo], cells[i - lo + 1], p)

    if any(rbad(i) for i in range(x.end, x.end + kr)):
        max_r = INF
    else:
        bad = [i for i in pairs if rbad(i)]
        max_r = max(bad) if bad else -INF
    if any(lbad(i) for i in range(x.offset - 1 - kl, x.offset - 1)):
        min_l = -INF
    else:
        bad = [i for i in pairs if lbad(i)]
        min_l = min(bad) if bad else INF
    return max_r, min_l


def _diverging_split(x: Configuration, p: Params):
    """A position q with x_{<=q} moving left and x_{>q} moving right, so
    that nothing interacts any more; None if there is none."""
    max_r, min_l = _outgoing_extremes(x, p)
    if max_r > min_l:
        return None
    if math.isfinite(max_r):
        return int(max_r)
    if math.isfinite(min_l):
        return int(min_l)
    return x.offset


def _count_fronts(x: Configuration, lo: int, hi: int) -> int:
    return sum(1 for j in range(lo, hi) if x[j] == 1)


def annihilating_completion(w, p: Params, horizon: int | None = None,
                            pad_max: int = 2) -> tuple:
    """Finite configuration agreeing with w on [0, |w|) that dies out.

    w is first evolved in a zero background until it has split into
    outgoing pulses. Each outgoing pulse is then matched by an incoming
    pulse placed far enough away to reach it only after that time.
    If that fails (it can for e > r, where the debris of w need not
    separate into clean pulses), the construction is retried on w padded
    by up to pad_max arbitrary cells on each side.
    Returns (x, t) with T^t(x) = 0 and T^(t-1)(x) != 0.
    """
    w = tuple(int(v) for v in w)
    if not w:
        return Configuration.zero(), 0
    validate(Configuration.finite(w), p)
    osc = oscillating_pairs(w, p)
    if osc:
        raise NoCompletionError(
            f"block has a self-sustaining pair at {osc[0]} (step size in [r+1, e]); "
            "no completion can die out")
    try:
        return _construct_completion(w, p, horizon)
    except NoCompletionError as first:
        err = first
    for k in range(1, pad_max + 1):
        for left in itertools.product(range(p.a), repeat=k):
            for right in itertools.product(range(p.a), repeat=k):
                v = left + w + right
                if oscillating_pairs(v, p):
                    continue
                try:
                    x, t = _construct_completion(v, p, horizon)
                except NoCompletionError:
                    continue
                return x.translate(-k), t
    raise err


def _construct_completion(w: tuple, p: Params, horizon: int | None) -> tuple:
    n = len(w)
    if horizon is None:
        horizon = 8 * p.a * (n + p.a)
    y = Configuration.finite(w)
    tau = None
    for t in range(horizon + 1):
        if _diverging_split(y, p) is not None:
            # let partial pulses at the split finish forming
            z = iterate(y, p.a, p)
            q = _diverging_split(z, p)
            if q is not None:
                tau, y = t + p.a, z
                break
        y = step(y, p)
    if tau is None:
        raise NoCompletionError(f"block did not split into outgoing pulses within {horizon} steps")
    if y.is_zero():
        return _extinct_check(Configuration.finite(w), p)
    m_right = _count_fronts(y, q + 1, y.end)
    m_left = _count_fronts(y, y.offset, q + 1)
    gap = n + 2 * tau + 2
    right_block = (0,) * gap + (p.pulse_left + (0,)) * m_right
    left_block = ((0,) + p.pulse_right) * m_left + (0,) * gap
    x = Configuration.finite(left_block + w + right_block, -len(left_block))
    return _extinct_check(x, p)


def _extinct_check(x: Configuration, p: Params, limit: int | None = None) -> tuple:
    if limit is None:
        limit = 4 * (len(x.core) + p.a) * p.a + 100
    y = x
    for t in range(limit + 1):
        if y.is_zero():
            return x, t
        y = step(y, p)
    raise NoCompletionError("constructed completion did not die out")


def periodic_approximant(x: Configuration, halfwidth: int, p: Params) -> Configuration:
    """Time-periodic configuration agreeing with x on [-halfwidth, halfwidth].

    The window is cut at a zero cell left of it, at the floor midpoint of
    the separating interval and at a zero cell right of it. The left piece
    is repeated leftwards and the right piece rightwards; both pieces are
    padded to a common length and pulse count so that every collision
    recurs at the same site.
    """
    flags = membership(x, p)
    if "Z" not in flags or "S_LR" not in flags:
        raise NotInZError("need a configuration in Z that is not a one-directional train")
    isp = separating_positions(x, p)
    pm, pp = int(isp.p_minus), int(isp.p_plus)
    c = isp.mid
    if x[c] not in (0, 1) or x[c + 1] not in (0, 1):
        raise CutError("configuration is inside an annihilation; no valid cut")
    need_l = c - min(-halfwidth, pm - 1) + 1
    need_r = max(halfwidth, pp + 1) - c
    top = p.top

    period = _aligned_period(x, c, need_l, need_r)
    if period is not None:
        block_l = x.window(c + 1 - period, c + 1)
        block_r = x.window(c + 1, c + 1 + period)
    else:
        kmin = _zero_left(x, c - need_l + 1, p)
        kmax = _zero_right(x, c + need_r, p)
        block_l = x.window(kmin, c + 1)
        block_r = x.window(c + 1, kmax + 1)
    m_l, m_r = block_l.count(1), block_r.count(1)
    if m_l != m_r or len(block_l) != len(block_r):
        m = max(m_l, m_r, 1)
        size = max(len(block_l) + (m - m_l) * p.a, len(block_r) + (m - m_r) * p.a)
        pad_l = size - len(block_l) - (m - m_l) * p.a
        if pad_l == 0 and m > m_l and x[c] == 1:
            size += 1
            pad_l += 1
        pad_r = size - len(block_r) - (m - m_r) * p.a
        block_l = (0,) * pad_l + (p.pulse_right + (0,)) * (m - m_l) + block_l
        block_r = block_r + (p.pulse_left + (0,)) * (m - m_r) + (0,) * pad_r
    y = Configuration.make(block_l, (), c + 1, block_r)
    period = len(block_l)
    if iterate(y, period, p) != y:
        raise AssertionError("approximant is not periodic")
    if y.window(-halfwidth, halfwidth + 1) != x.window(-halfwidth, halfwidth + 1):
        raise AssertionError("approximant does not agree on the window")
    return y


def _aligned_period(x: Configuration, c: int, need_l: int, need_r: int):
    """Common multiple of the tail periods usable as cut length when x is
    purely periodic on both sides of c."""
    if not (c < x.offset and c + 1 >= x.end):
        return None
    kl, kr = len(x.left), len(x.right)
    base = kl * kr // math.gcd(kl, kr)
    period = base
    while period < max(need_l, need_r):
        period += base
    if x[c + 1 - period] != 0 or x[c + period] != 0:
        return None
    if x.window(c + 1 - period, c + 1).count(1) != x.window(c + 1, c + 1 + period).count(1):
        return None
    return period


def _zero_left(x: Configuration, start: int, p: Params) -> int:
    for j in range(start, min(start, x.offset) - len(x.left) - 1, -1):
        if x[j] == 0:
            return j
    raise CutError("no zero cell left of the window; widen the window")


def _zero_right(x: Configuration, start: int, p: Params) -> int:
    for j in range(start, max(start, x.end) + len(x.right) + 1):
        if x[j] == 0:
            return j
    raise CutError("no zero cell right of the window; widen the window")


def random_Z_config(p: Params, rng, periodic: float = 0.5, max_pulses: int = 3,
                    max_gap: int = 4) -> Configuration:
    """Random counter-propagating pulse trains with optional periodic tails.

    Right-moving pulses fill the sites left of 0, left-moving ones the
    sites from 0 on; each side gets a periodic pulse tail with
    probability `periodic`. Use periodic=1.0 for members of Z_inf.
    """
    def r_train(n):
        out = ()
        for _ in range(n):
            out += (0,) * rng.randint(1, max_gap) + p.pulse_right
        return out

    def l_train(n):
        out = ()
        for _ in range(n):
            out += p.pulse_left + (0,) * rng.randint(1, max_gap)
        return out

    left = ZERO_TAIL
    if rng.random() < periodic:
        left = (0,) * rng.randint(1, max_gap - 1) + p.pulse_right
    right = ZERO_TAIL
    if rng.random() < periodic:
        right = p.pulse_left + (0,) * rng.randint(1, max_gap - 1)
    lc = r_train(rng.randint(0, max_pulses)) + (0,) * rng.randint(0, max_gap - 1)
    rc = (0,) * rng.randint(0, max_gap - 1) + l_train(rng.randint(0, max_pulses))
    return Configuration.make(left, lc + rc, -len(lc), right)
