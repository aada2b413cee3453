"""Perron roots, entropy values, word and window counts, and asymptotic probes.

rho_c is the positive root of f_c(x) = x^(c+1) - x^c - 1; its logarithm is the
growth rate of one-directional pulse trains with c = e+r. eta_{e,r} is the
positive root of g_{e,r}(x) = x^(2r) - sum_{i<r-e} x^i and bounds the growth
of the varying-period part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .core import Params
from .pulses import L_PARTICLE, R_PARTICLE, pulse_matrix

ROOT_TOL = mpmath.mpf("1e-12")
WORK_DPS = 40
CENSUS_CAP = 2_000_000


class PrecisionError(ArithmeticError):
    def __init__(self, msg, best=None):
        super().__init__(msg)
        self.best = best


class CensusCapError(RuntimeError):
    pass


@dataclass(frozen=True)
class RootResult:
    value: mpmath.mpf
    residual: mpmath.mpf
    iterations: int

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class EntropyReport:
    e: int
    r: int
    rho: float
    h_Z: float
    h_const: float
    h_var_upper: float | None
    h_total: float
    eta: float | None = None

    def to_dict(self) -> dict:
        return {"e": self.e, "r": self.r, "rho": self.rho, "eta": self.eta,
                "h_Z": self.h_Z, "h_const": self.h_const,
                "h_var_upper": self.h_var_upper, "h_total": self.h_total}


# ---------------------------------------------------------------------------
# roots


def f_poly(c: int, lam):
    return lam ** (c + 1) - lam ** c - 1


def g_poly(e: int, r: int, lam):
    return lam ** (2 * r) - sum(lam ** i for i in range(r - e))


def _bisect(fn, lo, hi, tol, max_iter=4000):
    """Bisection for an increasing sign change of fn on [lo, hi]; stops when
    the bracket is below tol relative to its midpoint scale."""
    flo = fn(lo)
    if flo > 0 or fn(hi) < 0:
        raise ValueError("root is not bracketed")
    it = 0
    while hi - lo > tol * max(abs(hi), mpmath.mpf(1)) and it < max_iter:
        mid = (lo + hi) / 2
        if fn(mid) < 0:
            lo = mid
        else:
            hi = mid
        it += 1
    return (lo + hi) / 2, it


def perron_root_f(c: int, precision: float = 1e-12) -> RootResult:
    """Positive root of x^(c+1) - x^c - 1.

    Bisection runs on xi = x - 1 in (0, 1] with the log form
    c*log(1+xi) + log(xi), which stays well scaled for large c. The
    bracket is shrunk relative to xi so that xi itself is accurate.
    """
    if c < 1:
        raise ValueError("c must be at least 1")
    with mpmath.workdps(WORK_DPS):
        tol = mpmath.mpf(precision)

        def h(xi):
            return c * mpmath.log1p(xi) + mpmath.log(xi)

        lo, hi = mpmath.mpf(0), mpmath.mpf(1)
        it = 0
        # log scale bracket first so that the relative stop works near 0
        while h(hi / 2) > 0 and it < 200:
            hi /= 2
            it += 1
        lo = hi / 2
        while hi - lo > tol * tol * hi and it < 4000:
            mid = (lo + hi) / 2
            if h(mid) < 0:
                lo = mid
            else:
                hi = mid
            it += 1
        xi = (lo + hi) / 2
        val = 1 + xi
        if hi - lo > tol * tol * hi:
            raise PrecisionError("bisection did not converge", best=val)
        return RootResult(+val, +abs(f_poly(c, val)), it)


def perron_root_g(p: Params, precision: float = 1e-12) -> RootResult:
    """Positive root of x^(2r) - sum_{i<r-e} x^i, bracketed in [1, rho_{e+r}]."""
    e, r = p.e, p.r
    if r <= e:
        raise ValueError("needs r > e")
    with mpmath.workdps(WORK_DPS):
        if r == e + 1:
            one = mpmath.mpf(1)
            return RootResult(one, abs(g_poly(e, r, one)), 0)
        upper = perron_root_f(e + r, precision).value
        tol = mpmath.mpf(precision) ** 2
        val, it = _bisect(lambda x: g_poly(e, r, x), mpmath.mpf(1), upper, tol)
        res = abs(g_poly(e, r, val))
        return RootResult(+val, +res, it)


def entropy_report(p: Params, precision: float = 1e-12) -> EntropyReport:
    rho = perron_root_f(p.top, precision).value
    h_z = 2 * float(mpmath.log(rho))
    eta = h_var = None
    if p.r > p.e + 1:
        eta_v = perron_root_g(p, precision).value
        eta = float(eta_v)
        h_var = 2 * float(mpmath.log(eta_v))
    elif p.r == p.e + 1:
        eta = 1.0
    return EntropyReport(p.e, p.r, float(rho), h_z, 0.0, h_var, h_z, eta)


# ---------------------------------------------------------------------------
# spectral radius by power iteration


def spectral_radius(m: np.ndarray, squarings: int = 60) -> float:
    """Perron eigenvalue of a nonnegative irreducible matrix.

    Power iteration on m + I by repeated squaring; the shift makes the
    Perron eigenvalue strictly dominant even for periodic graphs.
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    b = m + np.eye(n)
    v = np.ones(n)
    for _ in range(squarings):
        b = b @ b
        b /= np.abs(b).max()
        v = b @ np.ones(n)
        v /= np.linalg.norm(v)
    w = (m + np.eye(n)) @ v
    return float(v @ w / (v @ v)) - 1.0


# ---------------------------------------------------------------------------
# word counts


def gamma_count(p: Params, n: int, mode: str = "total"):
    """Ways of placing symbols on n cells with at least e+r empty cells
    between any two of them.

    mode "per_g" returns {g: count with exactly g symbols}; "total" the
    sum over g.
    """
    gap = p.top
    # state: (empty cells since the last symbol, capped at gap; symbols so far)
    state = {(gap, 0): 1}
    for _ in range(n):
        nxt = {}
        for (since, g), cnt in state.items():
            key = (min(since + 1, gap), g)
            nxt[key] = nxt.get(key, 0) + cnt
            if since >= gap:
                nxt[(0, g + 1)] = nxt.get((0, g + 1), 0) + cnt
        state = nxt
    per_g = {}
    for (_, g), cnt in state.items():
        per_g[g] = per_g.get(g, 0) + cnt
    per_g = dict(sorted(per_g.items()))
    if mode == "per_g":
        return per_g
    if mode == "total":
        return sum(per_g.values())
    raise ValueError(f"unknown mode {mode!r}")


def pulse_word_count(p: Params, n: int) -> int:
    """Number of length-n words of the one-sided pulse shift."""
    if n == 0:
        return 1
    m = pulse_matrix(p).astype(object)
    v = np.ones(p.a, dtype=object)
    for _ in range(n - 1):
        v = m @ v
    return int(sum(v))


# ---------------------------------------------------------------------------
# space-time window census for the particle system


@dataclass(frozen=True)
class CensusResult:
    e: int
    r: int
    m: int
    n: int
    gamma_gn: dict
    gamma_n: dict
    Gamma_mn: int
    lower: int
    upper: int
    segments: int = 0

    @property
    def rate(self) -> float:
        return math.log(self.Gamma_mn) / self.n

    def sandwich_holds(self) -> bool:
        return self.lower <= self.Gamma_mn <= self.upper


def _one_sided_words(length: int, gap: int, symbol: int) -> list:
    """All words over {0, symbol} with more than gap cells between symbols."""
    out = []

    def rec(i, last, acc):
        if i == length:
            out.append(tuple(acc))
            return
        acc.append(0)
        rec(i + 1, last, acc)
        acc.pop()
        if last is None or i - last > gap:
            acc.append(symbol)
            rec(i + 1, i, acc)
            acc.pop()

    rec(0, None, [])
    return out


def _particle_rows(segment: tuple, lo: int, n: int, gap: int, wlo: int, whi: int) -> tuple:
    """Rows [wlo, whi) of the first n particle-system states started from
    ``segment`` placed at lo with empty cells outside."""
    rs = [lo + i for i, v in enumerate(segment) if v == R_PARTICLE]
    ls = [lo + i for i, v in enumerate(segment) if v == L_PARTICLE]
    rows = []
    for t in range(n):
        row = [0] * (whi - wlo)
        for j in rs:
            if wlo <= j < whi:
                row[j - wlo] = R_PARTICLE
        for j in ls:
            if wlo <= j < whi:
                row[j - wlo] = L_PARTICLE
        rows.append(tuple(row))
        while rs and ls and ls[0] - rs[-1] in (1, 2):
            rs.pop()
            ls.pop(0)
        rs = [j + 1 for j in rs]
        ls = [j - 1 for j in ls]
    return tuple(rows)


def count_windows(p: Params, m: int, n: int, margin: int | None = None) -> tuple:
    """(number of distinct windows, number of initial segments) for the
    window [-m, m] x [0, n-1], enumerating segments [-m-margin, m+margin]."""
    if margin is None:
        margin = n
    gap = p.top
    lo, hi = -m - margin, m + margin
    length = hi - lo + 1
    rights = {k: _one_sided_words(k, gap, R_PARTICLE) for k in range(length + 1)}
    lefts = {k: _one_sided_words(k, gap, L_PARTICLE) for k in range(length + 1)}
    total = sum(len(rights[k]) * len(lefts[length - k]) for k in range(length + 1))
    if total > CENSUS_CAP:
        raise CensusCapError(f"{total} initial segments exceed the cap {CENSUS_CAP}")
    windows = set()
    seen = set()
    for k in range(length + 1):
        for wr in rights[k]:
            for wl in lefts[length - k]:
                seg = wr + wl
                if seg in seen:
                    continue
                seen.add(seg)
                windows.add(_particle_rows(seg, lo, n, gap, -m, m + 1))
    return len(windows), len(seen)


def lower_construction_count(p: Params, m: int, n: int) -> int:
    """Initial data count of the lower-bound construction, using the
    largest t with t*(m + e + r) <= n (1 when t = 0)."""
    t = n // (m + p.top)
    per_g = gamma_count(p, m, "per_g")
    return sum(v * v for v in per_g.values()) ** t


def window_census(p: Params, m: int, n: int) -> CensusResult:
    gamma_gn = {k: gamma_count(p, k, "per_g") for k in range(2 * m + n + 1)}
    gamma_n = {k: sum(v.values()) for k, v in gamma_gn.items()}
    big, segs = count_windows(p, m, n)
    lower = lower_construction_count(p, m, n)
    upper = gamma_n[2 * m + n] ** 2
    return CensusResult(p.e, p.r, m, n, gamma_gn, gamma_n, big, lower, upper, segs)


def census_csv(results) -> str:
    rows = ["m,n,lower,Gamma,upper,rate"]
    for c in results:
        rows.append(f"{c.m},{c.n},{c.lower},{c.Gamma_mn},{c.upper},{c.rate:.6f}")
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# constrained matrix for the varying-period part


def constrained_matrix(p: Params) -> np.ndarray:
    """2r x 2r transition matrix: a chain of r-e resting states feeding a
    cycle through the states 1..e+r.

    Index i < r-e is the i-th resting state, index r-e+k-1 the state k.
    """
    e, r = p.e, p.r
    if r <= e:
        raise ValueError("needs r > e")
    nz = r - e
    size = 2 * r
    m = np.zeros((size, size), dtype=np.int64)
    one = nz
    for i in range(nz):
        m[i, one] = 1
        if i + 1 < nz:
            m[i, i + 1] = 1
    for k in range(1, p.top):
        m[nz + k - 1, nz + k] = 1
    m[nz + p.top - 1, 0] = 1
    return m


def int_det(rows) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    a = [[int(v) for v in row] for row in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


@dataclass
class MatrixCheck:
    matrix: np.ndarray
    radius: float
    eta: float
    radius_ok: bool
    det_values: dict = field(default_factory=dict)
    det_equals_g: bool = False
    det_equals_signed_g: bool = False

    def to_dict(self) -> dict:
        return {"size": int(self.matrix.shape[0]), "radius": self.radius, "eta": self.eta,
                "radius_ok": self.radius_ok,
                "det_values": {str(k): v for k, v in self.det_values.items()},
                "det_equals_g": self.det_equals_g,
                "det_equals_signed_g": self.det_equals_signed_g}


def constrained_matrix_M(p: Params, points=(-3, -2, 2, 3)) -> MatrixCheck:
    """Matrix plus checks: its spectral radius against eta, and
    det(M - x I) at integer points against g(x) and (-1)^(e+r) g(x)."""
    m = constrained_matrix(p)
    radius = spectral_radius(m)
    eta = float(perron_root_g(p).value)
    vals = {}
    plain = signed = True
    for x in points:
        d = int_det(m - x * np.eye(m.shape[0], dtype=np.int64))
        g = int(g_poly(p.e, p.r, x))
        vals[x] = (d, g)
        plain &= d == g
        signed &= d == (-1) ** p.top * g
    return MatrixCheck(m, radius, eta, abs(radius - eta) < 1e-8, vals, plain, signed)


# ---------------------------------------------------------------------------
# asymptotics


def lambert_w(c: float, tol: float = 1e-15, max_iter: int = 100) -> float:
    """Principal branch of w e^w = c for c > 0, by Newton iteration."""
    if c <= 0:
        raise ValueError("c must be positive")
    with mpmath.workdps(WORK_DPS):
        c = mpmath.mpf(c)
        w = mpmath.log(c) - mpmath.log(mpmath.log(c)) if c > mpmath.e else c / (1 + c)
        for _ in range(max_iter):
            ew = mpmath.exp(w)
            step_ = (w * ew - c) / (ew * (w + 1))
            w -= step_
            if abs(step_) < tol * max(1, abs(w)):
                break
        return float(w)


def rho_asymptotics(cs) -> list:
    """Rows (c, rho_c - 1, xi*c/ln c, xi*c/W(c), 2c ln rho_c, ratio to 2 ln c)."""
    rows = []
    for c in cs:
        with mpmath.workdps(WORK_DPS):
            xi = perron_root_f(c).value - 1
            lc = mpmath.log(c)
            h = 2 * c * mpmath.log1p(xi)
            rows.append({"c": c, "xi": float(xi), "ratio_ln": float(xi * c / lc),
                         "ratio_w": float(xi * c / lambert_w(c)),
                         "scaled_entropy": float(h), "scaled_vs_2lnc": float(h / (2 * lc))})
    return rows


def zeta_asymptotics(rs, diff: int | None = None, e: int | None = None) -> list:
    """Rows (r, e, zeta = eta - 1, zeta*r, zeta*r/ln r) with either r - e or
    e held fixed."""
    if (diff is None) == (e is None):
        raise ValueError("fix exactly one of diff and e")
    rows = []
    for r in rs:
        ee = r - diff if diff is not None else e
        zeta = float(perron_root_g(Params(ee, r)).value - 1)
        rows.append({"r": r, "e": ee, "zeta": zeta, "zeta_r": zeta * r,
                     "zeta_r_over_ln_r": zeta * r / math.log(r)})
    return rows


def asymptotics_probe(family: str, values, param: int | None = None) -> list:
    """family "rho" over c values, "zeta_diff" with r - e = param, or
    "zeta_e" with e = param."""
    if family == "rho":
        return rho_asymptotics(values)
    if family == "zeta_diff":
        return zeta_asymptotics(values, diff=param)
    if family == "zeta_e":
        return zeta_asymptotics(values, e=param)
    raise ValueError(f"unknown family {family!r}")


def zeta_limit_constant(diff: int) -> float:
    """Limit of zeta*r for fixed r - e = diff: with zeta ~ k/r both sides of
    (1+zeta)^diff = 1 + zeta (1+zeta)^(2r) give diff = exp(2k)."""
    return math.log(diff) / 2
