"""Command-line front end: configuration specs, rendering, reports and the
verification suites.

Configuration text format::

    <tail> | [@offset] <core> | <tail>

where a tail is ``0*`` or ``( s1 s2 ... sk )*`` and the core is a list of
integers, e.g. ``0* | 1 2 3 0 0 3 2 1 | 0*``.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import networkx as nx
import numpy as np

from . import entropy as ent
from . import nonwandering as nw
from . import pulses as pl
from . import skewprod as sk
from .core import (Configuration, EnumerationCapError, MalformedConfigurationError,
                   Params, Trajectory, evolve, iterate, step)
from .symbolic import communicating_classes, step_transition_graph

# ---------------------------------------------------------------------------
# configuration specs


class ConfigSpecError(ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _tokens(text: str):
    """Yield (kind, value, line, column); kinds: int, sym."""
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch in "()|*@":
            yield "sym", ch, line, col
            i += 1
            col += 1
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < len(text) and text[i + 1].isdigit()):
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            yield "int", int(text[i:j]), line, col
            col += j - i
            i = j
            continue
        raise ConfigSpecError(f"unexpected character {ch!r}", line, col)
    yield "end", None, line, col


class _Parser:
    def __init__(self, text):
        self.toks = list(_tokens(text))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind, value=None):
        tok = self.toks[self.i]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] if tok[0] != "end" else "end of input"
            raise ConfigSpecError(f"expected {want!r}, got {got!r}", tok[2], tok[3])
        self.i += 1
        return tok

    def ints(self):
        out = []
        while self.peek()[0] == "int":
            out.append(self.take("int"))
        return out

    def tail(self):
        tok = self.peek()
        if tok[0] == "int":
            self.take("int")
            self.take("sym", "*")
            return [tok]
        self.take("sym", "(")
        word = self.ints()
        if not word:
            raise ConfigSpecError("empty tail period", tok[2], tok[3])
        self.take("sym", ")")
        self.take("sym", "*")
        return word


def parse_config_spec(text: str, p: Params | None = None) -> Configuration:
    """Parse the text format; with p given, states are range-checked."""
    ps = _Parser(text)
    left = ps.tail()
    ps.take("sym", "|")
    offset = 0
    if ps.peek()[1] == "@":
        ps.take("sym", "@")
        offset = ps.take("int")[1]
    core = ps.ints()
    ps.take("sym", "|")
    right = ps.tail()
    ps.take("end")
    if p is not None:
        for tok in left + core + right:
            if not 0 <= tok[1] <= p.top:
                raise ConfigSpecError(
                    f"state {tok[1]} out of range [0, {p.top}] for e={p.e}, r={p.r}",
                    tok[2], tok[3])
    return Configuration.make([t[1] for t in left], [t[1] for t in core],
                              offset, [t[1] for t in right])


def format_config_spec(x: Configuration) -> str:
    def tail(word):
        if word == (0,):
            return "0*"
        return "( " + " ".join(map(str, word)) + " )*"

    middle = [f"@{x.offset}"] if x.offset != 0 else []
    middle += [str(v) for v in x.core]
    return " | ".join([tail(x.left), " ".join(middle), tail(x.right)]).replace("|  |", "| |")


def load_config(arg: str, p: Params) -> Configuration:
    """--init value: a path to a file holding a spec, or an inline spec."""
    text = arg
    if os.path.isfile(arg):
        with open(arg) as fh:
            text = fh.read()
    return parse_config_spec(text, p)


# ---------------------------------------------------------------------------
# rendering


def palette(p: Params) -> dict:
    """Rest state white; e+r, ..., e+1, 1, ..., e get darker in that order."""
    order = list(range(p.top, p.e, -1)) + list(range(1, p.e + 1))
    n = p.a - 1
    pal = {0: 255}
    for i, s in enumerate(order):
        g = 230 * (1 - Fraction(i + 1, n))
        pal[s] = int(math.floor(g + Fraction(1, 2)))
    return pal


@dataclass(frozen=True)
class RenderSpec:
    lo: int
    width: int
    steps: int
    palette: dict

    @classmethod
    def make(cls, p: Params, lo: int, width: int, steps: int) -> "RenderSpec":
        return cls(lo, width, steps, palette(p))


def render_space_time(traj: Trajectory, spec: RenderSpec) -> bytes:
    """Binary PGM, one row per time step (time downward), one column per cell."""
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    if spec.width <= 0:
        raise ValueError("window must contain at least one cell")
    if spec.steps + 1 > len(traj):
        raise ValueError(f"window asks for {spec.steps + 1} rows, trajectory has {len(traj)}")
    rows = np.array(traj.rows(spec.lo, spec.lo + spec.width)[:spec.steps + 1], dtype=np.int64)
    lut = np.zeros(max(spec.palette) + 1, dtype=np.uint8)
    for s, g in spec.palette.items():
        lut[s] = g
    if rows.max() >= len(lut):
        raise ValueError("state without a palette entry")
    img = lut[rows]
    header = f"P5\n{spec.width} {spec.steps + 1}\n255\n".encode("ascii")
    return header + img.tobytes()


def read_pgm(data: bytes) -> np.ndarray:
    """Pixel array of a P5 image written by render_space_time."""
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w)


def default_window(x: Configuration, steps: int) -> tuple:
    lo, hi = x.span(steps + 2)
    return lo, hi


# ---------------------------------------------------------------------------
# reports


@dataclass
class RunReport:
    command: list
    params: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    text: str = ""
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {"command": self.command, "params": self.params, "outputs": self.outputs,
                "checks": self.checks, "ok": self.ok, "data": self.data}


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable)


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, mpmath.mpf)):
        return float(v)
    if isinstance(v, (set, frozenset, tuple)):
        return sorted(v) if isinstance(v, (set, frozenset)) else list(v)
    if isinstance(v, Fraction):
        return str(v)
    return str(v)


# ---------------------------------------------------------------------------
# verification suites


@dataclass
class SuiteResult:
    number: int
    name: str
    passed: bool
    details: dict
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.name} ({self.seconds:.2f}s) {self.summary()}"

    def summary(self) -> str:
        return self.details.get("summary", "")


def _oracle_root_f(c: int) -> float:
    """Plain float bisection on x^(c+1) - x^c - 1 over [1, 2]."""
    lo, hi = 1.0, 2.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid ** (c + 1) - mid ** c - 1 < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def suite_perron(seed: int = 0) -> SuiteResult:
    r = ent.perron_root_f(2)
    lam = r.value
    res = float(abs(lam ** 3 - lam ** 2 - 1))
    oracle = _oracle_root_f(2)
    worst = 0.0
    for c in range(2, 33):
        rho = float(ent.perron_root_f(c).value)
        for e in range(1, c):
            m = pl.pulse_matrix(Params(e, c - e))
            rad = float(max(abs(np.linalg.eigvals(m.astype(float)))))
            worst = max(worst, abs(rad - rho))
    ok = res <= 1e-10 and abs(float(lam) - oracle) < 1e-10 and worst < 1e-8
    return SuiteResult(1, "perron_roots", ok, {
        "rho_2": float(lam), "residual": res, "oracle": oracle,
        "max_radius_gap": worst,
        "summary": f"rho_2={float(lam):.10f} residual={res:.1e} radius gap={worst:.1e}"})


def suite_entropy_order(seed: int = 0) -> SuiteResult:
    bad_order, worst_g, worst_product, eta_one = [], 0.0, 0.0, 0.0
    with mpmath.workdps(ent.WORK_DPS):
        for r in range(2, 13):
            for e in range(1, r):
                p = Params(e, r)
                rho = ent.perron_root_f(e + r).value
                eta = ent.perron_root_g(p).value
                if r == e + 1:
                    eta_one = max(eta_one, float(abs(eta - 1)))
                    continue
                if not 1 < eta < rho:
                    bad_order.append((e, r))
                g = ent.g_poly(e, r, rho)
                worst_g = max(worst_g, float(abs(g - 1)))
                worst_product = max(worst_product, float(abs((rho - 1) * g - 1)))
    ok = not bad_order and worst_g < 1e-8 and eta_one < 1e-10
    return SuiteResult(2, "entropy_ordering", ok, {
        "order_violations": bad_order, "max_abs_g_rho_minus_1": worst_g,
        "max_abs_rho_minus_1_times_g_minus_1": worst_product, "eta_one_gap": eta_one,
        "summary": (f"1<eta<rho violations={len(bad_order)}; max|g(rho)-1|={worst_g:.3g}; "
                    f"max|(rho-1)g(rho)-1|={worst_product:.1e}; r=e+1 gap={eta_one:.0e}")})


def suite_classes(seed: int = 0) -> SuiteResult:
    a = communicating_classes(Params(3, 7))
    b = communicating_classes(Params(7, 4))
    ex1 = (a.c0 == {0, 1, 10} and a.cpi == {4, 5, 6, 7}
           and set(a.singletons) == {2, 3, 8, 9})
    ex2 = b.c0 == {0, 1, 11} and not b.cpi and set(b.singletons) == set(range(2, 11))
    mism = []
    for e in range(1, 13):
        for r in range(1, 13):
            p = Params(e, r)
            g = step_transition_graph(p).to_networkx()
            sccs = {frozenset(c) for c in nx.strongly_connected_components(g)}
            if sccs != set(communicating_classes(p).classes()):
                mism.append((e, r))
    ok = ex1 and ex2 and not mism
    return SuiteResult(3, "communicating_classes", ok, {
        "example_3_7": ex1, "example_7_4": ex2, "scc_mismatches": mism,
        "summary": f"(3,7) {ex1}, (7,4) {ex2}, SCC mismatches {len(mism)}"})


def extinction_time(x: Configuration, p: Params, limit: int) -> int | None:
    for t in range(limit + 1):
        if x.is_zero():
            return t
        x = step(x, p)
    return None


def suite_clock(seed: int = 0) -> SuiteResult:
    p = Params(2, 4)
    got = {}
    for ell in (1, 2, 3):
        x = Configuration.finite(p.pulse_right + (0,) * (2 * ell) + p.pulse_left)
        got[ell] = extinction_time(x, p, 100)
    ok = all(got[ell] == ell + 6 for ell in got)
    return SuiteResult(4, "annihilation_clock", ok, {
        "extinction_steps": got,
        "summary": " ".join(f"l={k}:{v}" for k, v in got.items())})


def suite_periods(seed: int = 0) -> SuiteResult:
    p = Params(2, 4)
    xc = nw.make_dislocation_example(p, "const_interval")
    xv = nw.make_dislocation_example(p, "alternating_var")
    pc = nw.find_period(xc, 100, p)
    pv = nw.find_period(xv, 100, p)
    ok = pc == 7 and pv == 15
    return SuiteResult(5, "dislocation_periods", ok, {
        "const_interval": pc, "alternating_var": pv,
        "const_spec": format_config_spec(xc), "var_spec": format_config_spec(xv),
        "summary": f"const_interval period {pc}, alternating_var period {pv}"})


def suite_forbidden(seed: int = 0) -> SuiteResult:
    survivors = []
    counts = {}
    prep_bad = []
    for e in range(1, 4):
        for r in range(1, 4):
            p = Params(e, r)
            for fam in ("F30", "F31", "F32", "F33"):
                d = 1 if fam == "F30" else p.a
                blocks = nw.enumerate_family(fam, p)
                counts[fam] = counts.get(fam, 0) + len(blocks)
                for blk in blocks:
                    if nw.eventual_image_depth(blk, d, p):
                        dd = nw.death_depth(blk, p, p.a + 4)
                        survivors.append({"e": e, "r": r, "family": fam,
                                          "block": blk, "death_depth": dd})
            for av in range(2, e + 2):
                want = {e + r - av + 2}
                for side in ("right", "left"):
                    got = nw.prep_values(av, p, side)
                    if got != want:
                        prep_bad.append((e, r, av, side, sorted(got)))
    by_fam = {}
    for s in survivors:
        by_fam[s["family"]] = by_fam.get(s["family"], 0) + 1
    ok = not survivors and not prep_bad
    return SuiteResult(6, "forbidden_blocks", ok, {
        "blocks": counts, "survivors": survivors, "prep_mismatches": prep_bad,
        "summary": (f"blocks {counts}; alive at the required depth {by_fam or 0}; "
                    f"prep mismatches {len(prep_bad)}")})


def random_zinf_corpus(n: int, seed: int, max_pre: int = 10) -> list:
    """n seeded (Params, configuration) pairs in Z_inf."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        p = Params(rng.randint(1, 3), rng.randint(1, 3))
        x = pl.random_Z_config(p, rng, periodic=1.0)
        x = iterate(x, rng.randint(0, max_pre), p)
        if "Z_inf" in pl.membership(x, p):
            out.append((p, x))
    return out


def _central_gap(x: Configuration, p: Params):
    k0 = pl.waiting_times_general(x, p)[0]
    return k0 if math.isfinite(k0) else None


def suite_conjugacy(seed: int = 0, count: int = 100, steps: int = 50) -> SuiteResult:
    fails = []
    parities = set()
    for p, x in random_zinf_corpus(count, seed):
        k0 = _central_gap(x, p)
        if k0 is not None:
            parities.add(int(k0) % 2)
        ok, k = sk.verify_conjugacy(x, steps, p)
        if not ok:
            fails.append({"e": p.e, "r": p.r, "x": format_config_spec(x), "k": k})
    ok = not fails and parities == {0, 1}
    return SuiteResult(7, "skew_conjugacy", ok, {
        "failures": fails, "gap_parities": sorted(parities),
        "summary": f"{count - len(fails)}/{count} orbits conjugate up to k={steps}; "
                   f"gap parities {sorted(parities)}"})


def suite_semiconjugacy(seed: int = 0, count: int = 1000, steps: int = 20) -> SuiteResult:
    rng = random.Random(seed + 1)
    fails = []
    done = 0
    while done < count:
        p = Params(rng.randint(1, 3), rng.randint(1, 3))
        x = pl.random_Z_config(p, rng, periodic=0.5)
        if not pl.in_Z(x, p):
            continue
        done += 1
        try:
            u = pl.substitute_U(x, p)
            for k in range(steps):
                x = step(x, p)
                u = pl.step_Tprime(u, p)
                if pl.substitute_U(x, p) != u:
                    fails.append((p.e, p.r, format_config_spec(x), k + 1))
                    break
        except ValueError as exc:
            fails.append((p.e, p.r, format_config_spec(x), str(exc)))
    ok = not fails
    return SuiteResult(8, "particle_semiconjugacy", ok, {
        "failures": fails[:20],
        "summary": f"{count - len(fails)}/{count} orbits commute for {steps} steps"})


def suite_census(seed: int = 0, m_max: int = 2, n_max: int = 6) -> SuiteResult:
    p = Params(1, 1)
    ceiling = 2 * math.log(float(ent.perron_root_f(2).value)) + 0.2
    rows, bad_sandwich, bad_monotone, bad_range = [], [], [], []
    for m in range(m_max + 1):
        prev = None
        for n in range(1, n_max + 1):
            c = ent.window_census(p, m, n)
            rows.append({"m": m, "n": n, "lower": c.lower, "Gamma": c.Gamma_mn,
                         "upper": c.upper, "rate": c.rate})
            if not c.sandwich_holds():
                bad_sandwich.append((m, n))
            if not 0 < c.rate <= ceiling:
                bad_range.append((m, n, round(c.rate, 4)))
            if prev is not None and c.rate < prev:
                bad_monotone.append((m, n))
            prev = c.rate
    ok = not (bad_sandwich or bad_monotone or bad_range)
    return SuiteResult(9, "census_sandwich", ok, {
        "rows": rows, "sandwich_violations": bad_sandwich,
        "monotonicity_violations": bad_monotone, "rate_range_violations": bad_range,
        "rate_ceiling": ceiling,
        "summary": (f"sandwich violations {len(bad_sandwich)}; rate decreases at "
                    f"{len(bad_monotone)} of {(m_max + 1) * (n_max - 1)} steps; "
                    f"rates above {ceiling:.4f}: {len(bad_range)}")})


def suite_asymptotics(seed: int = 0) -> SuiteResult:
    rows = ent.rho_asymptotics([10 ** k for k in range(2, 7)])
    w4 = next(r for r in rows if r["c"] == 10 ** 4)["ratio_w"]
    ln = [r["ratio_ln"] for r in rows]
    increasing = all(a < b for a, b in zip(ln, ln[1:])) and ln[-1] < 1
    ok = abs(w4 - 1) < 0.02 and increasing
    return SuiteResult(10, "rho_asymptotics", ok, {
        "rows": rows, "ratio_w_1e4": w4,
        "summary": f"ratio_W(1e4)={w4:.5f}; ratio_ln " + " ".join(f"{v:.4f}" for v in ln)})


def suite_zeta(seed: int = 0) -> SuiteResult:
    rows = ent.zeta_asymptotics([50, 100, 200], diff=2)
    v = [r["zeta_r"] for r in rows]
    d1, d2 = v[1] - v[0], v[2] - v[1]
    extrap = 2 * v[2] - v[1]
    ok = all(0.1 <= t <= 2 for t in v) and abs(d2) < abs(d1)
    return SuiteResult(11, "zeta_scaling", ok, {
        "rows": rows, "extrapolated_limit": extrap,
        "closed_form_limit": ent.zeta_limit_constant(2),
        "summary": ("zeta*r " + " ".join(f"{t:.5f}" for t in v)
                    + f"; limit ~ {extrap:.5f} (ln2/2 = {ent.zeta_limit_constant(2):.5f})")})


def suite_dense_basin(seed: int = 0, count: int = 200) -> SuiteResult:
    rng = random.Random(seed + 2)
    stats = {}
    fails = []
    for _ in range(count):
        p = Params(rng.randint(1, 3), rng.randint(1, 3))
        w = tuple(rng.randrange(p.a) for _ in range(rng.randint(1, 8)))
        key = "e<=r" if p.e <= p.r else "e>r"
        try:
            x, t = pl.annihilating_completion(w, p)
            good = (x.window(0, len(w)) == w and iterate(x, t, p).is_zero()
                    and (t == 0 or not iterate(x, t - 1, p).is_zero()))
            res = "ok" if good else "wrong"
        except pl.NoCompletionError as exc:
            res = "self_sustaining" if "self-sustaining" in str(exc) else "not_found"
        stats[f"{key}:{res}"] = stats.get(f"{key}:{res}", 0) + 1
        if res != "ok":
            fails.append((p.e, p.r, w, res))
    ok = not fails
    return SuiteResult(12, "dense_basin", ok, {
        "counts": stats, "failures": fails[:20],
        "summary": " ".join(f"{k}={v}" for k, v in sorted(stats.items()))})


def suite_render(seed: int = 0) -> SuiteResult:
    p = Params(2, 4)
    xc = nw.make_dislocation_example(p, "const_interval")
    steps = 4 * p.a
    lo, hi = default_window(xc, 0)
    spec = RenderSpec.make(p, lo - 10, hi - lo + 20, steps)
    img1 = render_space_time(evolve(xc, steps, p), spec)
    img2 = render_space_time(evolve(xc, steps, p), spec)
    pix = read_pgm(img1)
    periodic_rows = all(np.array_equal(pix[t], pix[t + p.a]) for t in range(steps + 1 - p.a))
    ell = 3
    xp = Configuration.finite(p.pulse_right + (0,) * (2 * ell) + p.pulse_left)
    t_ext = extinction_time(xp, p, 100)
    steps2 = t_ext + 8
    spec2 = RenderSpec.make(p, -8, len(xp.core) + 16, steps2)
    pix2 = read_pgm(render_space_time(evolve(xp, steps2, p), spec2))
    white_suffix = bool((pix2[t_ext:] == 255).all()) and not (pix2[t_ext - 1] == 255).all()
    again = render_space_time(evolve(xp, steps2, p), spec2)
    deterministic = img1 == img2 and again == render_space_time(evolve(xp, steps2, p), spec2)
    ok = periodic_rows and white_suffix and deterministic
    return SuiteResult(13, "rendering", ok, {
        "period_rows": periodic_rows, "extinction_row": t_ext,
        "white_suffix": white_suffix, "deterministic": deterministic,
        "summary": (f"rows repeat every {p.a}: {periodic_rows}; white from row {t_ext}: "
                    f"{white_suffix}; byte-identical reruns: {deterministic}")})


SUITES = {
    "perron": suite_perron,
    "entropy_order": suite_entropy_order,
    "classes": suite_classes,
    "clock": suite_clock,
    "periods": suite_periods,
    "forbidden": suite_forbidden,
    "conjugacy": suite_conjugacy,
    "semiconjugacy": suite_semiconjugacy,
    "census": suite_census,
    "asymptotics": suite_asymptotics,
    "zeta": suite_zeta,
    "dense_basin": suite_dense_basin,
    "render": suite_render,
}


def run_suite(name: str, seed: int = 0) -> SuiteResult:
    t0 = time.perf_counter()
    res = SUITES[name](seed=seed)
    res.seconds = time.perf_counter() - t0
    return res


# ---------------------------------------------------------------------------
# subcommands


def _params(ns) -> Params:
    if ns.e is None or ns.r is None:
        raise UsageError("--e and --r are required")
    if ns.e < 1 or ns.r < 1:
        raise UsageError("--e and --r must be at least 1")
    return Params(ns.e, ns.r)


class UsageError(Exception):
    pass


def _emit(data, path, binary=False):
    if path is None:
        return []
    mode = "wb" if binary else "w"
    with open(path, mode) as fh:
        fh.write(data)
    return [path]


def _colliding_pair(p: Params, ell: int = 2) -> Configuration:
    return Configuration.finite(p.pulse_right + (0,) * (2 * ell) + p.pulse_left)


def cmd_simulate(ns, rep: RunReport):
    p = _params(ns)
    x = load_config(ns.init, p) if ns.init else _colliding_pair(p)
    steps = ns.steps
    traj = evolve(x, steps, p)
    if ns.window:
        lo, hi = (int(v) for v in ns.window.split(":"))
    else:
        lo, hi = default_window(x, steps)
    fmt = ns.format or ("pgm" if ns.out and ns.out.endswith(".pgm") else "txt")
    rows = traj.rows(lo, hi)
    rep.params.update(e=p.e, r=p.r, steps=steps, window=[lo, hi],
                      init=format_config_spec(x))
    rep.data["final"] = format_config_spec(traj[-1])
    if fmt == "pgm":
        spec = RenderSpec.make(p, lo, hi - lo, steps)
        img = render_space_time(traj, spec)
        rep.checks["render_deterministic"] = img == render_space_time(traj, spec)
        if ns.out is None:
            raise UsageError("pgm output needs --out")
        rep.outputs += _emit(img, ns.out, binary=True)
        rep.text = f"wrote {ns.out} ({hi - lo}x{steps + 1})"
        return
    if fmt == "csv":
        buf = io.StringIO()
        buf.write("t," + ",".join(str(j) for j in range(lo, hi)) + "\n")
        for t, row in enumerate(rows):
            buf.write(f"{t}," + ",".join(map(str, row)) + "\n")
        text = buf.getvalue()
    elif fmt == "json":
        text = _json({"window": [lo, hi], "rows": rows,
                      "configs": [format_config_spec(c) for c in traj.steps]})
    else:
        w = len(str(p.top))
        text = "\n".join(" ".join(str(v).rjust(w) if v else ".".rjust(w) for v in row)
                         for row in rows) + "\n"
    rep.checks["states_in_range"] = all(0 <= v <= p.top for row in rows for v in row)
    rep.outputs += _emit(text, ns.out)
    rep.text = "" if ns.out else text.rstrip("\n")


def cmd_classify(ns, rep: RunReport):
    p = _params(ns)
    if not ns.init:
        raise UsageError("classify needs --init")
    x = load_config(ns.init, p)
    horizon = ns.horizon or 6 * p.a
    label = nw.classify_nonwandering(x, horizon, p)
    rep.params.update(e=p.e, r=p.r, horizon=horizon, init=format_config_spec(x))
    rep.data["label"] = label.to_dict()
    rep.text = label.to_json()
    rep.outputs += _emit(rep.text + "\n", ns.out)


def cmd_entropy(ns, rep: RunReport):
    p = _params(ns)
    prec = ns.precision or 1e-12
    er = ent.entropy_report(p, prec)
    out = er.to_dict()
    root = ent.perron_root_f(p.top, prec)
    rep.checks["rho_residual"] = float(root.residual) <= max(prec, 1e-10) * 10
    if p.r > p.e + 1:
        mc = ent.constrained_matrix_M(p)
        out["matrix"] = mc.to_dict()
        rep.checks["eta_below_rho"] = 1 < er.eta < er.rho
        rep.checks["matrix_radius_is_eta"] = mc.radius_ok
    rep.params.update(e=p.e, r=p.r, precision=prec)
    rep.data.update(out)
    rep.text = _json(out)
    rep.outputs += _emit(rep.text + "\n", ns.out)


def cmd_census(ns, rep: RunReport):
    p = _params(ns)
    c = ent.window_census(p, ns.m, ns.n)
    rep.checks["sandwich"] = c.sandwich_holds()
    rep.params.update(e=p.e, r=p.r, m=ns.m, n=ns.n)
    rep.data.update(lower=c.lower, Gamma=c.Gamma_mn, upper=c.upper, rate=c.rate)
    rep.text = ent.census_csv([c]).rstrip("\n")
    rep.outputs += _emit(rep.text + "\n", ns.out)


def cmd_asymptotics(ns, rep: RunReport):
    family = ns.family
    if ns.values:
        values = [int(float(v)) for v in ns.values.split(",")]
    else:
        values = [10 ** k for k in range(2, 7)] if family == "rho" else [50, 100, 200]
    param = ns.param if ns.param is not None else (None if family == "rho" else 2)
    rows = ent.asymptotics_probe(family, values, param)
    keys = list(rows[0])
    lines = [",".join(keys)] + [",".join(f"{r[k]:.10g}" if isinstance(r[k], float) else str(r[k])
                                         for k in keys) for r in rows]
    rep.checks["finite"] = all(math.isfinite(float(r[k])) for r in rows for k in keys)
    rep.params.update(family=family, values=values, param=param)
    rep.data["rows"] = rows
    rep.text = "\n".join(lines)
    rep.outputs += _emit(rep.text + "\n", ns.out)


def cmd_conjugacy(ns, rep: RunReport):
    steps = ns.steps
    if ns.init:
        p = _params(ns)
        corpus = [(p, load_config(ns.init, p))]
    else:
        corpus = random_zinf_corpus(ns.count, ns.seed or 0)
    results = []
    for p, x in corpus:
        ok, k = sk.verify_conjugacy(x, steps, p)
        results.append({"e": p.e, "r": p.r, "x": format_config_spec(x), "ok": ok,
                        "first_failure": k})
    rep.checks["conjugacy"] = all(r["ok"] for r in results)
    rep.params.update(steps=steps, count=len(corpus), seed=ns.seed)
    rep.data["results"] = results
    n_ok = sum(r["ok"] for r in results)
    rep.text = _json({"passed": n_ok, "total": len(results),
                      "failures": [r for r in results if not r["ok"]]})
    rep.outputs += _emit(rep.text + "\n", ns.out)


_EXPECTED_LABEL = {"const_interval": "OmegaConst", "alternating_var": "OmegaVar",
                   "spiral": "OmegaConst"}


def cmd_examples(ns, rep: RunReport):
    p = _params(ns)
    kind = ns.kind
    x = nw.make_dislocation_example(p, kind, width=ns.width)
    horizon = ns.horizon or 4 * p.a
    period = nw.find_period(x, horizon, p)
    label = nw.classify_nonwandering(x, horizon, p)
    rep.checks["periodic"] = period is not None
    rep.checks["label"] = label.label == _EXPECTED_LABEL[kind]
    rep.params.update(e=p.e, r=p.r, kind=kind, width=ns.width, horizon=horizon)
    rep.data.update(spec=format_config_spec(x), period=period, label=label.label)
    rep.text = (f"{format_config_spec(x)}\nperiod {period}\nclass {label.label}")
    rep.outputs += _emit(rep.text + "\n", ns.out)


def cmd_verify(ns, rep: RunReport):
    names = list(SUITES) if ns.suite == "all" else [ns.suite]
    for name in names:
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
    results = [run_suite(name, ns.seed or 0) for name in names]
    for res in results:
        rep.checks[res.name] = res.passed
    rep.data["suites"] = {r.name: {"number": r.number, "passed": r.passed,
                                   "seconds": r.seconds, "details": r.details}
                          for r in results}
    if ns.format == "json":
        rep.text = _json(rep.data["suites"])
    else:
        rep.text = "\n".join(r.line() for r in results)
    rep.outputs += _emit(rep.text + "\n", ns.out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ghca", description="Greenberg-Hastings cellular automaton toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, init=True):
        sp.add_argument("--e", type=int)
        sp.add_argument("--r", type=int)
        sp.add_argument("--out")
        sp.add_argument("--format", choices=["pgm", "csv", "json", "txt"])
        sp.add_argument("--seed", type=int, default=0)
        if init:
            sp.add_argument("--init", help="configuration spec, inline or a file path")

    sp = sub.add_parser("simulate", help="evolve a configuration")
    common(sp)
    sp.add_argument("--steps", type=int, default=20)
    sp.add_argument("--window", help="cell range lo:hi")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("classify", help="label a configuration by its recurrence class")
    common(sp)
    sp.add_argument("--horizon", type=int)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("entropy", help="Perron roots and entropy values")
    common(sp, init=False)
    sp.add_argument("--precision", type=float)
    sp.set_defaults(func=cmd_entropy)

    sp = sub.add_parser("census", help="space-time window census")
    common(sp, init=False)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("asymptotics", help="large-parameter behaviour of the roots")
    common(sp, init=False)
    sp.add_argument("--family", choices=["rho", "zeta_diff", "zeta_e"], default="rho")
    sp.add_argument("--values", help="comma separated c or r values")
    sp.add_argument("--param", type=int, help="r - e (zeta_diff) or e (zeta_e)")
    sp.set_defaults(func=cmd_asymptotics)

    sp = sub.add_parser("conjugacy", help="check the skew-product conjugacy")
    common(sp)
    sp.add_argument("--steps", type=int, default=50)
    sp.add_argument("--count", type=int, default=100)
    sp.set_defaults(func=cmd_conjugacy)

    sp = sub.add_parser("examples", help="stationary dislocation examples")
    common(sp, init=False)
    sp.add_argument("--kind", choices=sorted(_EXPECTED_LABEL), default="const_interval")
    sp.add_argument("--width", type=int, default=1)
    sp.add_argument("--horizon", type=int)
    sp.set_defaults(func=cmd_examples)

    sp = sub.add_parser("verify", help="run verification suites")
    sp.add_argument("suite", help="suite name or 'all'")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=["txt", "json"], default="txt")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)
    return ap


def dispatch(argv=None) -> RunReport:
    argv = list(sys.argv[1:] if argv is None else argv)
    ns = build_parser().parse_args(argv)
    rep = RunReport(command=["ghca"] + argv)
    ns.func(ns, rep)
    return rep


def main(argv=None) -> int:
    try:
        rep = dispatch(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, ConfigSpecError, MalformedConfigurationError) as exc:
        print(f"ghca: error: {exc}", file=sys.stderr)
        return 2
    except (EnumerationCapError, ent.CensusCapError, ent.PrecisionError,
            pl.NotInZError, nw.ExampleConstraintError, ValueError) as exc:
        print(f"ghca: failed: {exc}", file=sys.stderr)
        return 1
    if rep.text:
        print(rep.text)
    if not rep.ok:
        failed = [k for k, v in rep.checks.items() if not v]
        print(f"ghca: verification failed: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
