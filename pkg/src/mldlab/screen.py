"""Residue-level screens for hyperquotient candidates 1/r(a,b,c,d;e) with f = 0.

Everything here works on monomial supports only; coefficients and analytic
coordinate changes are out of reach by design.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd

import numpy as np

from .arith import HyperquotientType, MonomialSupport, Weighting, render_rational

FCASES = ("cA", "odd", "cD4", "cDn", "cE", "unclassified")


@dataclass(frozen=True)
class Rule2Verdict:
    passed: bool
    failures: tuple[str, ...] = ()


def rule2_check(h: HyperquotientType) -> Rule2Verdict:
    r, a, e = h.r, h.a, h.e
    failures = []
    for i, ai in enumerate(a):
        g = gcd(ai, r)
        if g > 1 and gcd(e, r) % g:
            failures.append(f"(i) gcd(a{i + 1},r)={g} does not divide gcd(e,r)={gcd(e, r)}")
    for i in range(4):
        for j in range(i + 1, 4):
            if gcd(gcd(a[i], a[j]), r) != 1:
                failures.append(f"(ii) gcd(a{i + 1},a{j + 1},r) > 1")
    if (sum(a) - e - 1) % r:
        failures.append(f"(iii) a+b+c+d-e = {sum(a) - e} is not 1 mod {r}")
    return Rule2Verdict(not failures, tuple(failures))


def equivariance_check(h: HyperquotientType, f: MonomialSupport) -> bool:
    return all((sum(p * w for p, w in zip(m, h.a)) - h.e) % h.r == 0 for m in f.monomials)


# ------------------------------------------------------------ normal forms


def _zt_only(m) -> bool:
    return m[0] == 0 and m[1] == 0


def _deg(m) -> int:
    return sum(m)


def classify_f_case(f: MonomialSupport) -> str:
    """Match the support against the five normal forms exactly as written."""
    if f.nvars != 4:
        raise ValueError("supports must be in the four variables x, y, z, t")
    mons = set(f.monomials)
    XY, X2, Y2, Y2Z, Y3 = (1, 1, 0, 0), (2, 0, 0, 0), (0, 2, 0, 0), (0, 2, 1, 0), (0, 3, 0, 0)

    if XY in mons and all(_zt_only(m) and _deg(m) >= 2 for m in mons - {XY}):
        return "cA"
    if X2 not in mons:
        return "unclassified"
    rest = mons - {X2}
    if Y2 in rest and all(_zt_only(m) and _deg(m) >= 3 for m in rest - {Y2}):
        return "odd"
    if Y2Z in rest and all(_zt_only(m) and _deg(m) >= 4 for m in rest - {Y2Z}):
        return "cDn"
    if Y3 in rest and all(
        (_zt_only(m) and _deg(m) >= 4) or (m[0] == 0 and m[1] == 1 and _deg(m) >= 4)
        for m in rest - {Y3}
    ):
        return "cE"
    if rest and all(m[0] == 0 and _deg(m) >= 3 for m in rest):
        cubic = [m for m in rest if _deg(m) == 3]
        # a single cubic monomial with a repeated variable is never reduced
        if cubic and not (len(cubic) == 1 and max(cubic[0]) > 1):
            return "cD4"
    return "unclassified"


# ------------------------------------------------------------ box vectors


def alpha_k(h: HyperquotientType, k: int) -> Weighting:
    return Weighting(h.r, (a * k % h.r for a in h.a))


def enumerate_box_vectors(h: HyperquotientType) -> list[Weighting]:
    """N in [0,1]^4 minus its 16 vertices: each alpha_k with zero residues optionally lifted to 1.

    The result is closed under alpha -> (1,1,1,1) - alpha.
    """
    r = h.r
    out = set()
    for k in range(1, r):
        base = [a * k % r for a in h.a]
        zeros = [i for i, b in enumerate(base) if b == 0]
        for lifts in product((0, r), repeat=len(zeros)):
            coords = list(base)
            for i, v in zip(zeros, lifts):
                coords[i] = v
            w = Weighting(r, coords)
            if w.in_box():
                out.add(w)
    return sorted(out, key=lambda w: w.coords)


# ------------------------------------------------------------------ Rule I


@dataclass(frozen=True)
class ScreenReport:
    beta_candidates: tuple[tuple[Weighting, Fraction], ...]
    violations: tuple[tuple[Weighting, Fraction], ...]
    bound_used: int

    @property
    def clear(self) -> bool:
        return not self.violations and len(self.beta_candidates) <= 1

    def as_record(self) -> dict:
        fmt = lambda xs: [{"alpha": str(w), "value": render_rational(v)} for w, v in xs]
        return {
            "clear": self.clear,
            "bound": self.bound_used,
            "beta_candidates": fmt(self.beta_candidates),
            "violations": fmt(self.violations),
        }


def lattice_points(h: HyperquotientType, bound: int) -> np.ndarray:
    """Scaled coords (r * alpha) of all lattice vectors with entries in [0, bound]."""
    r = h.r
    top = bound * r
    blocks = []
    for j in range(r):
        axes = [np.arange(j * a % r, top + 1, r, dtype=np.int64) for a in h.a]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 4)
        blocks.append(grid)
    pts = np.unique(np.concatenate(blocks), axis=0)
    return pts


def _in_lattice(h: HyperquotientType, pts: np.ndarray) -> np.ndarray:
    r = h.r
    keys = {tuple(j * a % r for a in h.a) for j in range(r)}
    res = pts % r
    return np.array([tuple(row) in keys for row in res.tolist()], dtype=bool)


def primitive_mask(h: HyperquotientType, pts: np.ndarray) -> np.ndarray:
    g = np.gcd.reduce(pts, axis=1)
    prim = np.ones(len(pts), dtype=bool)
    for m in range(2, int(g.max(initial=1)) + 1):
        cand = (g % m == 0) & prim
        if cand.any():
            idx = np.nonzero(cand)[0]
            inside = _in_lattice(h, pts[idx] // m)
            prim[idx[inside]] = False
    return prim


def rule1_values(h: HyperquotientType, f: MonomialSupport, pts: np.ndarray) -> np.ndarray:
    """r * (alpha(xyzt) - alpha(f)) for each row."""
    mons = np.array(sorted(f.monomials), dtype=np.int64)
    return pts.sum(axis=1) - (pts @ mons.T).min(axis=1)


def screen_rule1(h: HyperquotientType, f: MonomialSupport, delta: Fraction, bound: int = 2) -> ScreenReport:
    """Necessary-condition screen: v(alpha) = alpha(xyzt) - alpha(f) over primitive vectors.

    Vectors with a single nonzero coordinate are coordinate hyperplanes, not
    exceptional divisors, and are skipped.  Non-primitive multiples scale v
    linearly, so they add nothing once every primitive v is known.
    """
    delta = Fraction(delta)
    if not 0 < delta <= Fraction(1, 2):
        raise ValueError("delta must lie in (0, 1/2]")
    if bound < 1:
        raise ValueError("bound must be at least 1")
    if len(f) == 0:
        raise ValueError("empty support")
    if not equivariance_check(h, f):
        raise ValueError(f"support {f} is not equivariant for {h}")
    r = h.r
    pts = lattice_points(h, bound)
    pts = pts[(pts != 0).sum(axis=1) >= 2]
    pts = pts[primitive_mask(h, pts)]
    v = rule1_values(h, f, pts)
    lo = (1 - delta) * r  # compare r*v against r*(1-delta) exactly
    betas, bad = [], []
    for row, val in zip(pts.tolist(), v.tolist()):
        if val > r:
            continue
        item = (Weighting(r, row), Fraction(val, r))
        if val == r or val <= lo:
            bad.append(item)
        else:
            betas.append(item)
    key = lambda wv: (wv[1], wv[0].coords)
    return ScreenReport(tuple(sorted(betas, key=key)), tuple(sorted(bad, key=key)), bound)


# ---------------------------------------------------------- alternatives


@dataclass(frozen=True)
class AlternativeStep:
    k: int
    alternative: str  # case_i, case_ii or beta_exception
    sums: tuple[int, int]


@dataclass(frozen=True)
class AlternativeTrace:
    kind: str
    steps: tuple[AlternativeStep, ...]
    global_failures: tuple[int, ...] = field(default=())

    def by_k(self, k: int) -> AlternativeStep:
        return self.steps[k - 1]


def alternative_trace(h: HyperquotientType, kind: str) -> AlternativeTrace:
    r, (a, b, c, d), e = h.r, h.a, h.e
    if kind == "xy":
        if (a + b - e) % r or (c + d - 1) % r:
            raise ValueError(f"{h}: xy normal form needs a+b = e and c+d = 1 mod r")
    elif kind == "x2":
        if (2 * a - e) % r or (b + c + d - 1 - a) % r:
            raise ValueError(f"{h}: x^2 normal form needs 2a = e and b+c+d = 1+a mod r")
    else:
        raise ValueError(f"kind must be 'xy' or 'x2', got {kind!r}")

    steps, failures = [], []
    for k in range(1, r):
        ak, bk, ck, dk, ek = (x * k % r for x in (a, b, c, d, e))
        if kind == "xy":
            s1, s2 = ak + bk, ck + dk
            i = s1 == ek and s2 == k + r
            ii = s1 == ek + r and s2 == k
        else:
            s1, s2 = 2 * ak, bk + ck + dk
            i = s1 == ek and s2 == ak + k + r
            ii = s1 == ek + r and s2 == ak + k
        alt = "case_i" if i else "case_ii" if ii else "beta_exception"
        steps.append(AlternativeStep(k, alt, (s1, s2)))
        if ak + bk + ck + dk != ek + k + r:
            failures.append(k)
    return AlternativeTrace(kind, tuple(steps), tuple(failures))


def alternation_failures(trace: AlternativeTrace, h: HyperquotientType) -> list[int]:
    """k where alpha_k and its mirror alpha_{r-k} are both regular but not split (i)/(ii)."""
    r = h.r
    bad = []
    for k in range(1, r // 2 + 1):
        if any(a * k % r == 0 for a in h.a):
            continue  # mirror of alpha_k is not alpha_{r-k}
        s, t = trace.by_k(k).alternative, trace.by_k(r - k).alternative
        if "beta_exception" in (s, t):
            continue
        if k == r - k or {s, t} != {"case_i", "case_ii"}:
            bad.append(k)
    return bad
