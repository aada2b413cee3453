"""Forbidden blocks, bounded-depth ancestor checks, classification of
recurrent configurations and constructors for stationary dislocations.

A configuration is recurrent only if it lies in the eventual image, so
blocks without d-step ancestors rule it out. Among recurrent points the
pulse collision system Z is told apart from dislocations whose step sizes
stay constant (period a) or vary inside the class C_pi.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .core import Configuration, Params, evolve, iterate, step, step_size, validate
from .pulses import in_Z, l_valid, r_valid
from .symbolic import communicating_classes


@dataclass(frozen=True)
class ForbiddenHit:
    family: str
    position: int
    block: tuple


@dataclass
class ClassLabel:
    label: str
    evidence: str
    horizon: int
    period: int | None = None
    forbidden_hits: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"label": self.label, "evidence": self.evidence, "horizon": self.horizon,
                "period_if_verified": self.period,
                "forbidden_hits": [{"family": h.family, "position": h.position,
                                    "block": list(h.block)} for h in self.forbidden_hits]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# ---------------------------------------------------------------------------
# forbidden families


def in_F30(block, p: Params) -> bool:
    u, c, v = block
    return c == 1 and not (2 <= u <= p.e + 1) and not (2 <= v <= p.e + 1)


def in_F31(block, p: Params) -> bool:
    u, c, v = block
    return u == c == v != 0


def in_F32(block, p: Params, strict_top: bool = False) -> bool:
    """(a, a, b) with a nonzero and s(a, b) large, or its mirror (a, b, b).

    Large means > e; with ``strict_top`` only s = e+r counts.
    """
    u, c, v = block

    def big(s):
        return s == p.top if strict_top else s > p.e

    if u == c != 0 and big(step_size(c, v, p)):
        return True
    return c == v != 0 and big(step_size(c, u, p))


def in_F33(block, p: Params, strict_top: bool = False) -> bool:
    u, c, v = block

    def big(s):
        return s == p.top if strict_top else s > p.e

    return big(step_size(c, u, p)) and big(step_size(c, v, p))


def in_Fn(block, p: Params) -> bool:
    n = len(block)
    return (n >= 4 and p.is_refractory(block[0]) and p.is_refractory(block[-1])
            and all(v == 0 for v in block[1:-1]))


def enumerate_family(family: str, p: Params, n: int = 4, strict_top: bool = False) -> list:
    """All blocks of a family (3-blocks, or length n for Fn)."""
    rng = range(p.a)
    if family == "Fn":
        return [(u,) + (0,) * (n - 2) + (v,) for u in p.refractory for v in p.refractory]
    test = {"F30": lambda b: in_F30(b, p), "F31": lambda b: in_F31(b, p),
            "F32": lambda b: in_F32(b, p, strict_top),
            "F33": lambda b: in_F33(b, p, strict_top)}[family]
    return [(u, c, v) for u in rng for c in rng for v in rng if test((u, c, v))]


def forbidden_block_scan(x, p: Params, max_n: int | None = None) -> list:
    """Occurrences of forbidden 3-blocks and of (R, 0, ..., 0, R) blocks.

    x is a block (scanned as given) or a Configuration (scanned over its
    core plus two tail periods on each side).
    """
    if isinstance(x, Configuration):
        validate(x, p)
        lo = x.offset - 2 * len(x.left) - 1
        cells = x.window(lo, x.end + 2 * len(x.right) + 1)
    else:
        lo, cells = 0, tuple(x)
    hits = []
    for i in range(len(cells) - 2):
        b = cells[i:i + 3]
        for fam, test in (("F30", in_F30), ("F31", in_F31), ("F32", in_F32), ("F33", in_F33)):
            if test(b, p):
                hits.append(ForbiddenHit(fam, lo + i, b))
    limit = len(cells) if max_n is None else max_n
    for i, v in enumerate(cells):
        if not p.is_refractory(v):
            continue
        j = i + 1
        while j < len(cells) and cells[j] == 0:
            j += 1
        n = j - i + 1
        if j < len(cells) and n >= 4 and n <= limit and p.is_refractory(cells[j]):
            hits.append(ForbiddenHit("Fn", lo + i, cells[i:j + 1]))
    return hits


# ---------------------------------------------------------------------------
# d-step ancestors by a column sweep


def _column_histories(height: int, p: Params, bottom=None, first=None) -> list:
    """Value sequences of one cell over ``height`` consecutive times that
    follow the cell's own succession rule (0 stays or becomes 1, any
    other state advances). Optionally the first or last value is fixed."""
    a = p.a
    out = []

    def rec(seq):
        if len(seq) == height:
            if bottom is None or seq[-1] == bottom:
                out.append(tuple(seq))
            return
        v = seq[-1]
        nxt = (0, 1) if v == 0 else ((v + 1) % a,)
        for u in nxt:
            rec(seq + [u])

    for v in (range(a) if first is None else (first,)):
        rec([v])
    return out


def count_ancestors(w, d: int, p: Params, fixed: dict | None = None) -> int:
    """Number of blocks v of length |w| + 2d with step^d(v) = w.

    ``fixed`` maps sites of w (0-based) to required ancestor values there.

    Sweeps the space-time trapezoid column by column. A column holds the
    values of one site from time -d up to the last time it is needed;
    the DP state is the current column together with the excitation
    requirements it puts on the next column.
    """
    w = tuple(w)
    n = len(w)
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and a nonempty block")
    exc = [1 <= v <= p.e for v in range(p.a)]

    def top_level(j):
        # number of times (counted from time -d) at which column j exists
        return d - max(0, -j, j - n + 1) + 1

    cache = {}

    fixed = fixed or {}

    def histories(j):
        h = top_level(j)
        bottom = w[j] if 0 <= j < n else None
        key = (h, bottom, fixed.get(j))
        if key not in cache:
            cache[key] = _column_histories(h, p, bottom, fixed.get(j))
        return cache[key]

    # state: (column, need_on, need_off); requirements indexed by time
    states = {}
    for col in histories(-d):
        states[(col, 0, 0)] = states.get((col, 0, 0), 0) + 1
    for j in range(-d + 1, n + d):
        h = top_level(j)
        nxt = {}
        for (prev, need_on, need_off), cnt in states.items():
            for col in histories(j):
                ok = True
                for t in range(h):
                    e_here = exc[col[t]]
                    if (need_on >> t) & 1 and not e_here:
                        ok = False
                        break
                    if (need_off >> t) & 1 and e_here:
                        ok = False
                        break
                if not ok:
                    continue
                on = off = 0
                for t in range(h - 1):
                    if col[t] != 0:
                        continue
                    left_exc = t < len(prev) and exc[prev[t]]
                    if col[t + 1] == 1:
                        if not left_exc:
                            on |= 1 << t
                    else:
                        if left_exc:
                            ok = False
                            break
                        off |= 1 << t
                if not ok:
                    continue
                key = (col, on, off)
                nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
        if not states:
            return 0
    return sum(cnt for (col, on, off), cnt in states.items() if not on)


def eventual_image_depth(w, d: int, p: Params) -> bool:
    """True iff w has a d-step ancestor block."""
    return count_ancestors(w, d, p) > 0


def death_depth(w, p: Params, d_max: int) -> int | None:
    """Smallest d <= d_max without d-step ancestors, None if there is none."""
    for d in range(1, d_max + 1):
        if not eventual_image_depth(w, d, p):
            return d
    return None


def prep_values(a_val: int, p: Params, side: str = "right") -> set:
    """Values the zero's site can take a_val - 1 steps back over all
    ancestors of the 2-block (0, a_val) (side "right") or (a_val, 0)."""
    w = (0, a_val) if side == "right" else (a_val, 0)
    k = 0 if side == "right" else 1
    depth = a_val - 1
    if depth == 0:
        return {0}
    return {c for c in range(p.a) if count_ancestors(w, depth, p, {k: c})}


# ---------------------------------------------------------------------------
# classification


def _class_escape(x: Configuration, horizon: int, p: Params):
    """First (site, time) where a step size leaves the communicating class
    of its initial value within the horizon, or None."""
    part = communicating_classes(p)
    lo, hi = x.span(horizon + 2)
    traj = evolve(x, horizon, p)
    rows = traj.rows(lo, hi + 1)
    for i in range(hi - lo):
        cls = part.class_of(step_size(rows[0][i], rows[0][i + 1], p))
        for m in range(1, horizon + 1):
            if step_size(rows[m][i], rows[m][i + 1], p) not in cls:
                return lo + i, m
    return None


def _constant_step_sizes(x: Configuration, steps: int, p: Params) -> bool:
    lo, hi = x.span(steps + 2)
    traj = evolve(x, steps, p)
    rows = traj.rows(lo, hi + 1)
    for i in range(hi - lo):
        s0 = step_size(rows[0][i], rows[0][i + 1], p)
        if any(step_size(rows[m][i], rows[m][i + 1], p) != s0 for m in range(steps + 1)):
            return False
    return True


def find_period(x: Configuration, horizon: int, p: Params) -> int | None:
    y = x
    for t in range(1, horizon + 1):
        y = step(y, p)
        if y == x:
            return t
    return None


def _max_zero_run(cells) -> int:
    best = run = 0
    for v in cells:
        run = run + 1 if v == 0 else 0
        best = max(best, run)
    return best


def _varying_dislocation(x: Configuration, p: Params):
    """Position q of the unique C_pi step size if x splits there into a
    right-moving left part and a left-moving right part whose zero runs
    are at most |C_pi| long; None otherwise."""
    part = communicating_classes(p)
    if not part.cpi:
        return None
    kl, kr = len(x.left), len(x.right)
    lo, hi = x.offset - 2 * kl - 1, x.end + 2 * kr + 1
    qs = [q for q in range(lo, hi) if step_size(x[q], x[q + 1], p) in part.cpi]
    if len(qs) != 1:
        return None
    q = qs[0]
    if q <= x.offset - kl or q >= x.end + kr - 1:
        return None
    if not all(r_valid(x[i], x[i + 1], p) for i in range(lo, q)):
        return None
    if not all(l_valid(x[i], x[i + 1], p) for i in range(q + 1, hi)):
        return None
    k = len(part.cpi)
    if _max_zero_run(x.window(lo, q + 1)) > k or _max_zero_run(x.window(q + 1, hi + 1)) > k:
        return None
    return q


def classify_nonwandering(x: Configuration, horizon: int, p: Params) -> ClassLabel:
    """Horizon-bounded classification; definite labels are never wrong,
    anything undecided within the horizon is UnknownAtHorizon."""
    if horizon < p.a:
        raise ValueError("horizon must be at least the alphabet size")
    validate(x, p)
    hits = forbidden_block_scan(x, p)
    if hits:
        h = hits[0]
        return ClassLabel("NotNonwandering",
                          f"forbidden block {h.family} {h.block} at {h.position}",
                          horizon, None, hits)
    esc = _class_escape(x, horizon, p)
    if esc is not None:
        return ClassLabel("NotNonwandering",
                          f"step size at site {esc[0]} leaves its class at time {esc[1]}",
                          horizon)
    if in_Z(x, p):
        period = find_period(x, horizon, p)
        return ClassLabel("Z", "member of the pulse collision system", horizon, period)
    if iterate(x, p.a, p) == x and _constant_step_sizes(x, p.a, p):
        period = find_period(x, p.a, p)
        return ClassLabel("OmegaConst", f"step sizes constant and period {period} divides {p.a}",
                          horizon, period)
    if p.r > p.e + 1:
        q = _varying_dislocation(x, p)
        if q is not None:
            period = find_period(x, horizon, p)
            return ClassLabel("OmegaVar", f"single C_pi dislocation at {q}", horizon, period)
    return ClassLabel("UnknownAtHorizon", "no decision within the horizon", horizon)


# ---------------------------------------------------------------------------
# example constructions


class ExampleConstraintError(ValueError):
    pass


def const_interval_example(p: Params, width: int = 1) -> Configuration:
    """Interval of ``width`` dislocations of step size a-2 between the
    densest right-moving and left-moving trains; period a.

    The left part ends (..., 1, 0, e+r, ..., 3, 2) at site 0, the sites
    1..width-1 keep decreasing by 2 and the right part continues upward.
    """
    if width < 1:
        raise ExampleConstraintError("requires width >= 1")
    if width > 1 and p.e < 2:
        raise ExampleConstraintError("requires e >= 2 for width > 1")
    a, top = p.a, p.top
    left = (1, 0) + tuple(range(top, 1, -1))
    middle = tuple((2 - 2 * k) % a for k in range(1, width))
    start = (2 - 2 * width) % a
    right = tuple((start + i) % a for i in range(a))
    x = Configuration.make(left, middle, 1, right)
    if iterate(x, a, p) != x:
        raise ExampleConstraintError(f"width {width} does not give a period-{a} orbit")
    return x


def alternating_var_example(p: Params) -> Configuration:
    """Right-moving train with gaps alternating 1 and 2 ending at e+1 at
    site 0, glued to the mirror left-moving train; period 2a+1."""
    if not p.r > p.e + 1:
        raise ExampleConstraintError("requires r > e+1")
    if p.top < 4:
        raise ExampleConstraintError("requires e+r >= 4")
    top = p.top
    left = (tuple(range(p.e, 0, -1)) + (0, 0) + tuple(range(top, 0, -1)) + (0,)
            + tuple(range(top, p.e, -1)))
    right = (0, 0) + tuple(range(1, top + 1)) + (0,) + tuple(range(1, top + 1))
    return Configuration.make(left, (), 1, right)


def _emitted_limit(seed: tuple, p: Params, settle: int):
    """Limit configuration of a seed that keeps emitting pulses both ways,
    or None. The region around the seed must be a-periodic after
    ``settle`` steps; the emitted trains become the tails."""
    a = p.a
    y = iterate(Configuration.finite(seed), settle, p)
    z = iterate(y, a, p)
    n = len(seed)
    lo, hi = -a, n + a
    if y.window(lo, hi) != z.window(lo, hi):
        return None
    left = y.window(lo - a, lo)
    right = y.window(hi, hi + a)
    if not any(left) or not any(right):
        return None
    x = Configuration.make(left, y.window(lo, hi), lo, right)
    if iterate(x, a, p) != x:
        return None
    return x


@lru_cache(maxsize=None)
def find_spiral_seed(e: int, r: int, max_len: int = 4) -> tuple | None:
    """Shortest, lexicographically first block whose orbit in a zero
    background settles into an a-periodic source emitting pulses to both
    sides."""
    import itertools
    p = Params(e, r)
    if not e > r:
        return None
    settle = 6 * p.a
    for n in range(1, max_len + 1):
        for seed in itertools.product(range(p.a), repeat=n):
            if seed[0] == 0 or seed[-1] == 0:
                continue
            if _emitted_limit(seed, p, settle) is not None:
                return seed
    return None


def spiral_example(p: Params, seed=None) -> Configuration:
    if not p.e > p.r:
        raise ExampleConstraintError("requires e > r")
    if seed is None:
        seed = find_spiral_seed(p.e, p.r)
        if seed is None:
            raise ExampleConstraintError("no source seed found within the search bound")
    x = _emitted_limit(tuple(seed), p, 6 * p.a)
    if x is None:
        raise ExampleConstraintError(f"seed {seed} does not settle into a source")
    return x


def make_dislocation_example(p: Params, kind: str, width: int = 1, seed=None) -> Configuration:
    if kind == "const_interval":
        return const_interval_example(p, width)
    if kind == "alternating_var":
        return alternating_var_example(p)
    if kind == "spiral":
        return spiral_example(p, seed)
    raise ValueError(f"unknown example kind {kind!r}")
