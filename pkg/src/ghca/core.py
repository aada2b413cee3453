"""Exact configurations and the Greenberg-Hastings map.

States are integers 0..e+r. 0 is the rest state, 1..e are excited and
e+1..e+r are refractory. A nonzero state k moves to k+1 (e+r wraps to 0);
a rest cell becomes 1 iff one of its two neighbours is excited.

Bi-infinite configurations are stored as eventually periodic sequences:
a left tail period, a finite core starting at ``offset`` and a right tail
period. This class is closed under the map, so every evolution is exact.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

DEFAULT_MAX_ENUM = 10**7

ZERO_TAIL = (0,)


class MalformedConfigurationError(ValueError):
    pass


class EnumerationCapError(RuntimeError):
    """Raised when a brute-force enumeration exceeds its cap.

    ``partial`` holds whatever was collected before the cap was hit;
    it is incomplete by construction.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
        self.incomplete = True


def max_enum(default: int = DEFAULT_MAX_ENUM) -> int:
    """Enumeration cap, overridable through GHCA_MAX_ENUM."""
    value = os.environ.get("GHCA_MAX_ENUM")
    return int(value) if value else default


@dataclass(frozen=True)
class Params:
    e: int
    r: int

    def __post_init__(self):
        if not (isinstance(self.e, int) and isinstance(self.r, int)):
            raise TypeError("e and r must be integers")
        if self.e < 1 or self.r < 1:
            raise ValueError(f"need e >= 1 and r >= 1, got e={self.e}, r={self.r}")

    @property
    def a(self) -> int:
        """Alphabet size e+r+1."""
        return self.e + self.r + 1

    @property
    def top(self) -> int:
        """The last refractory state e+r."""
        return self.e + self.r

    @property
    def excited(self) -> range:
        return range(1, self.e + 1)

    @property
    def refractory(self) -> range:
        return range(self.e + 1, self.e + self.r + 1)

    def is_excited(self, s: int) -> bool:
        return 1 <= s <= self.e

    def is_refractory(self, s: int) -> bool:
        return self.e < s <= self.e + self.r

    @property
    def pulse_left(self) -> tuple:
        """Left-moving pulse (1, 2, ..., e+r)."""
        return tuple(range(1, self.top + 1))

    @property
    def pulse_right(self) -> tuple:
        """Right-moving pulse (e+r, ..., 1)."""
        return tuple(range(self.top, 0, -1))


@lru_cache(maxsize=None)
def rule_table(e: int, r: int) -> tuple:
    """Local rule as a flat table indexed by left*a*a + centre*a + right."""
    a = e + r + 1
    out = []
    for left in range(a):
        for centre in range(a):
            for right in range(a):
                if centre:
                    out.append((centre + 1) % a)
                else:
                    out.append(1 if (1 <= left <= e or 1 <= right <= e) else 0)
    return tuple(out)


def local_rule(left: int, centre: int, right: int, p: Params) -> int:
    a = p.a
    return rule_table(p.e, p.r)[(left * a + centre) * a + right]


def step_block(block: Sequence[int], p: Params) -> tuple:
    """Apply the rule to a finite block; the result is two cells shorter.

    This is the finite-window mode with a light cone shrinking by one cell
    per side and step.
    """
    n = len(block)
    if n < 2:
        return ()
    a = p.a
    table = rule_table(p.e, p.r)
    return tuple(table[(block[j - 1] * a + block[j]) * a + block[j + 1]]
                 for j in range(1, n - 1))


def step_window(block: Sequence[int], p: Params) -> tuple:
    """One step of a finite window with frozen zero boundary cells."""
    return step_block((0,) + tuple(block) + (0,), p)


def step_size(a: int, b: int, p: Params) -> int:
    """Step size (b - a) mod alphabet size."""
    return (b - a) % p.a


def _primitive(word: tuple) -> tuple:
    k = len(word)
    for d in range(1, k + 1):
        if k % d == 0 and all(word[i] == word[i % d] for i in range(k)):
            return word[:d]
    return word


@dataclass(frozen=True)
class Configuration:
    """Eventually periodic bi-infinite sequence.

    For j < offset, x_j = left[(j - offset) mod |left|], i.e. the left
    period is right-aligned at offset-1. For j >= offset+|core|,
    x_j = right[(j - offset - |core|) mod |right|].

    Instances built through :meth:`make` are in normal form, so structural
    equality coincides with equality of the represented sequences.
    """

    left: tuple
    core: tuple
    offset: int
    right: tuple

    @classmethod
    def make(cls, left: Iterable[int] = ZERO_TAIL, core: Iterable[int] = (),
             offset: int = 0, right: Iterable[int] = ZERO_TAIL) -> "Configuration":
        left = tuple(int(v) for v in left)
        right = tuple(int(v) for v in right)
        core = tuple(int(v) for v in core)
        if not left or not right:
            raise MalformedConfigurationError("tail periods must be nonempty")
        return _normalize(left, core, int(offset), right)

    @classmethod
    def finite(cls, core: Iterable[int], offset: int = 0) -> "Configuration":
        """Block surrounded by zeros."""
        return cls.make(ZERO_TAIL, core, offset, ZERO_TAIL)

    @classmethod
    def zero(cls) -> "Configuration":
        return cls.make()

    def __getitem__(self, j: int) -> int:
        n = len(self.core)
        if j < self.offset:
            return self.left[(j - self.offset) % len(self.left)]
        if j >= self.offset + n:
            return self.right[(j - self.offset - n) % len(self.right)]
        return self.core[j - self.offset]

    def window(self, lo: int, hi: int) -> tuple:
        """Cells x_lo, ..., x_{hi-1}."""
        return tuple(self[j] for j in range(lo, hi))

    @property
    def end(self) -> int:
        """One past the last core index."""
        return self.offset + len(self.core)

    def span(self, margin: int = 0) -> tuple:
        """Index range covering the core and one period of each tail."""
        return (self.offset - len(self.left) - margin,
                self.end + len(self.right) + margin)

    def translate(self, k: int) -> "Configuration":
        """Move the contents k cells to the right: y_j = x_{j-k}."""
        return Configuration.make(self.left, self.core, self.offset + k, self.right)

    def reflect(self) -> "Configuration":
        """y_j = x_{-j}."""
        return Configuration.make(tuple(reversed(self.right)),
                                  tuple(reversed(self.core)),
                                  -(self.end - 1),
                                  tuple(reversed(self.left)))

    def is_zero(self) -> bool:
        return self.left == ZERO_TAIL and self.right == ZERO_TAIL and not self.core

    def max_state(self) -> int:
        return max(self.left + self.core + self.right)

    def min_state(self) -> int:
        return min(self.left + self.core + self.right)


def _normalize(left, core, offset, right) -> Configuration:
    left = _primitive(left)
    right = _primitive(right)
    kl, kr = len(left), len(right)
    n = len(core)
    end = offset + n

    def cell(j):
        if j < offset:
            return left[(j - offset) % kl]
        if j >= end:
            return right[(j - end) % kr]
        return core[j - offset]

    def left_pattern(j):
        return left[(j - offset) % kl]

    def right_pattern(j):
        return right[(j - end) % kr]

    # extend the left tail as far right as possible; agreement on kl+kr
    # consecutive cells past the core forces agreement forever
    b = None
    for j in range(offset, end + kl + kr):
        if cell(j) != left_pattern(j):
            b = j
            break
    if b is None:
        word = tuple(left_pattern(j) for j in range(-kl, 0))
        return Configuration(word, (), 0, tuple(left_pattern(j) for j in range(kl)))

    c = b
    for j in range(max(b, end) - 1, b - 1, -1):
        if cell(j) != right_pattern(j):
            c = j + 1
            break
    new_left = tuple(left_pattern(b + i) for i in range(kl))
    new_right = tuple(right_pattern(c + i) for i in range(kr))
    new_core = tuple(cell(j) for j in range(b, c))
    return Configuration(new_left, new_core, b, new_right)


def validate(x: Configuration, p: Params) -> None:
    if x.min_state() < 0 or x.max_state() > p.top:
        raise MalformedConfigurationError(
            f"state out of range [0, {p.top}] for e={p.e}, r={p.r}")


def step(x: Configuration, p: Params) -> Configuration:
    """The Greenberg-Hastings map T on an exact configuration."""
    validate(x, p)
    kl, kr = len(x.left), len(x.right)
    n = len(x.core)
    lo = x.offset - 1 - kl
    hi = x.end + 1 + kr
    img = step_block(x.window(lo - 1, hi + 1), p)
    new_left = img[:kl]
    new_core = img[kl:kl + n + 2]
    new_right = img[kl + n + 2:]
    return _normalize(new_left, new_core, x.offset - 1, new_right)


def iterate(x: Configuration, n: int, p: Params) -> Configuration:
    for _ in range(n):
        x = step(x, p)
    return x


@dataclass(frozen=True)
class Trajectory:
    initial: Configuration
    steps: tuple

    def __len__(self):
        return len(self.steps)

    def __getitem__(self, k):
        return self.steps[k]

    def rows(self, lo: int, hi: int) -> list:
        """Space-time array rows x^t_{[lo, hi)}."""
        return [c.window(lo, hi) for c in self.steps]


def evolve(x: Configuration, n: int, p: Params) -> Trajectory:
    if n < 0:
        raise ValueError("n must be nonnegative")
    validate(x, p)
    out = [x]
    for _ in range(n):
        out.append(step(out[-1], p))
    return Trajectory(x, tuple(out))


def cylinder_distance(x: Configuration, y: Configuration) -> Fraction:
    """2^-k for the maximal k with x and y equal on [-k, k]; 0 if x == y."""
    if x == y:
        return Fraction(0)
    # beyond this radius both are periodic on each side; as x != y some
    # difference must show up within one common period of the tails
    bound = max(abs(x.offset), abs(x.end), abs(y.offset), abs(y.end))
    bound += len(x.left) * len(y.left) + len(x.right) * len(y.right) + 1
    k = -1
    while k + 1 <= bound:
        j = k + 1
        if x[j] != y[j] or x[-j] != y[-j]:
            break
        k += 1
    return Fraction(1, 2**k) if k >= 0 else Fraction(2)


# ---------------------------------------------------------------------------
# preimages


def site_preimage_candidates(w: Sequence[int], p: Params) -> list:
    """Candidate preimage values per site, before the neighbour check."""
    out = []
    for v in w:
        if v > 1:
            out.append((v - 1,))
        elif v == 1:
            out.append((0,))
        else:
            out.append((0, p.top))
    return out


def one_step_preimages(w: Sequence[int], p: Params, cap: int | None = None,
                       counter: list | None = None) -> list:
    """All blocks v with |v| = |w|+2 and step_block(v) == w."""
    w = tuple(w)
    n = len(w)
    full = tuple(range(p.a))
    cands = [full] + site_preimage_candidates(w, p) + [full]
    table = rule_table(p.e, p.r)
    a = p.a
    cap = max_enum() if cap is None else cap
    counter = [0] if counter is None else counter
    out = []
    v = [0] * (n + 2)

    def rec(i):
        # v[0..i-1] fixed; check image at i-2 once v[i-1] is known
        if i == n + 2:
            counter[0] += 1
            if counter[0] > cap:
                raise EnumerationCapError(f"more than {cap} candidates", out)
            out.append(tuple(v))
            return
        for s in cands[i]:
            v[i] = s
            if i >= 2 and table[(v[i - 2] * a + v[i - 1]) * a + s] != w[i - 2]:
                continue
            rec(i + 1)

    rec(0)
    return out


def preimage_blocks(w: Sequence[int], depth: int, p: Params,
                    cap: int | None = None) -> tuple:
    """All depth-step ancestors of w and a flag telling if there is one.

    Ancestors are built one level at a time from the site-wise preimage
    rule. Raises EnumerationCapError once more than ``cap`` candidate
    blocks have been produced.
    """
    if depth < 1 or len(w) < 1:
        raise ValueError("need depth >= 1 and a nonempty block")
    cap = max_enum() if cap is None else cap
    counter = [0]
    level = {tuple(w)}
    for _ in range(depth):
        nxt = set()
        try:
            for v in level:
                nxt.update(one_step_preimages(v, p, cap, counter))
        except EnumerationCapError as err:
            nxt.update(err.partial or ())
            raise EnumerationCapError(str(err), sorted(nxt)) from None
        level = nxt
        if not level:
            break
    blocks = sorted(level)
    return blocks, bool(blocks)


def glue(left_src: Configuration, right_src: Configuration,
         middle: Sequence[int], start: int) -> Configuration:
    """Sequence equal to left_src below ``start``, then ``middle``, then
    right_src from start+len(middle) on."""
    middle = tuple(middle)
    stop = start + len(middle)
    lo = min(start, left_src.offset)
    hi = max(stop, right_src.end)
    kl, kr = len(left_src.left), len(right_src.right)
    word_l = tuple(left_src[lo - kl + i] for i in range(kl))
    core = (tuple(left_src[j] for j in range(lo, start)) + middle
            + tuple(right_src[j] for j in range(stop, hi)))
    word_r = tuple(right_src[hi + i] for i in range(kr))
    return Configuration.make(word_l, core, lo, word_r)
