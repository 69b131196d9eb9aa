"""Bounded replay of the case-by-case exclusion of candidate hyperquotient types.

For a candidate h with normal form f and a gap delta, the unique weighting
beta with value in (1-delta, 1) is either absent or equal to alpha_{k0} with
1-delta < k0/r < 1.  For each such branch and each other k the residue
alternatives decide alpha_k(f).  When alpha_k is forced into the second
alternative, the residual part of f must contain an equivariant monomial of
exactly the forced weight; if none exists the branch is contradicted.  A
candidate is excluded when every branch is contradicted.

All k are searched, not just hand-picked ones, and each contradiction is
recorded as a witness.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd

import numpy as np

from .arith import HyperquotientType, render_monomial, render_rational
from .screen import rule2_check

FAMILIES = (
    "cA_qgt1_A", "cA_qgt1_B", "cA_q1_C", "cA_q1_D", "odd",
    "cDE_a", "cDE_b", "cDE_c", "cDE_d", "cDE_e", "cDE_f",
)

FAMILY_CASE = {
    "cA_qgt1_A": "cA", "cA_qgt1_B": "cA", "cA_q1_C": "cA", "cA_q1_D": "cA",
    "odd": "odd",
    **{f"cDE_{s}": "cD4" for s in "abcdef"},
}


class FamilyNotApplicable(ValueError):
    pass


def _coprime(x: int, r: int) -> bool:
    return gcd(x, r) == 1


def candidate_types(family: str, r: int) -> list[HyperquotientType]:
    """Every member of the named list for index r, parameters in [1, r)."""
    if r < 2:
        raise ValueError("r must be at least 2")
    H = HyperquotientType
    rng = range(1, r)
    if family == "cA_qgt1_A":
        return [H(r, (a, -a, 1, 0), 0) for a in rng if _coprime(a, r)]
    if family == "cA_qgt1_B":
        # b + 1 = 0 mod r collapses into list (A)
        return [H(r, (1, b, -b, b + 1), b + 1) for b in range(1, r - 1)
                if _coprime(b, r) and gcd(b + 1, r) > 1]
    if family == "cA_q1_C":
        return [H(r, (a, 1, -a, a + 1), a + 1) for a in rng if _coprime(a, r) and _coprime(a + 1, r)]
    if family == "cA_q1_D":
        return [H(r, (a, -a - 1, -a, a + 1), -1) for a in rng if _coprime(a, r) and _coprime(a + 1, r)]
    if family == "odd":
        if r % 4:
            raise FamilyNotApplicable("the odd list needs 4 | r")
        return [H(r, (1, (r + 2) // 2, (r - 2) // 2, 2), 2)]
    if family == "cDE_a":
        return [H(r, (0, b, -b, 1), 0) for b in rng if _coprime(b, r)]
    if family in ("cDE_b", "cDE_c"):
        if r % 2:
            raise FamilyNotApplicable(f"{family} needs r even")
        if family == "cDE_b":
            return [H(r, (a, -a, 1, 2 * a), 2 * a) for a in rng if _coprime(a, r)]
        return [H(r, (1, b, -b, 2), 2) for b in rng if _coprime(b, r)]
    if family in ("cDE_d", "cDE_e", "cDE_f"):
        if r % 2 == 0:
            raise FamilyNotApplicable(f"{family} needs r odd")
        if family == "cDE_d":
            return [H(r, ((r - 1) // 2, (r + 1) // 2, c, -c), -1) for c in rng if _coprime(c, r)]
        if family == "cDE_e":
            return [H(r, (a, -a, 2 * a, 1), 2 * a) for a in rng if _coprime(a, r)]
        return [H(r, (1, b, -b, 2), 2) for b in rng if _coprime(b, r)]
    raise ValueError(f"unknown family {family!r}")


def families_for(r: int) -> list[str]:
    out = []
    for fam in FAMILIES:
        try:
            candidate_types(fam, r)
        except FamilyNotApplicable:
            continue
        out.append(fam)
    return out


# ------------------------------------------------------- monomial families


def residual_family(case: str, degree_bound: int, claim_mode: bool = False) -> tuple[str, np.ndarray]:
    """Exponent vectors of the residual monomials allowed by the normal form."""
    if case == "cA":
        name, mons = "(z,t)^2", [(0, 0, i, j) for i in range(degree_bound + 1)
                                 for j in range(degree_bound + 1 - i) if i + j >= 2]
    elif case == "odd":
        name = "y^2 + (z,t)^3"
        mons = [(0, 2, 0, 0)] + [(0, 0, i, j) for i in range(degree_bound + 1)
                                 for j in range(degree_bound + 1 - i) if i + j >= 3]
    elif case in ("cD4", "cDn", "cE"):
        name = "(y,z,t)^3"
        mons = [(0, i, j, l) for i, j, l in product(range(degree_bound + 1), repeat=3)
                if 3 <= i + j + l <= degree_bound]
    else:
        raise ValueError(f"no residual family for case {case!r}")
    return name, np.array(sorted(mons), dtype=np.int64).reshape(-1, 4)


@dataclass(frozen=True)
class MonomialSearch:
    k: int
    forced_weight: Fraction
    outcome: str  # found, absent, inconclusive
    monomial: str | None = None


def search_forced(h: HyperquotientType, k: int, target: int, mons: np.ndarray,
                  degree_bound: int) -> MonomialSearch:
    """Look for an equivariant residual monomial with alpha_k-weight target/r."""
    r = h.r
    a = np.array(h.a, dtype=np.int64)
    alpha = a * k % r
    equi = (mons @ a - h.e) % r == 0
    hit = equi & (mons @ alpha == target)
    w = Fraction(target, r)
    if hit.any():
        return MonomialSearch(k, w, "found", render_monomial(mons[np.argmax(hit)]))
    used = mons.any(axis=0)
    wmin = alpha[used].min() if used.any() else 0
    if target < 0 or (wmin > 0 and target // wmin <= degree_bound):
        return MonomialSearch(k, w, "absent")
    return MonomialSearch(k, w, "inconclusive")


# -------------------------------------------------------------- replay


@dataclass(frozen=True)
class BranchResult:
    beta_k: int | None
    status: str  # excluded, inconclusive, survives
    witnesses: tuple[MonomialSearch, ...] = ()
    inconclusive: tuple[int, ...] = ()
    contradictions: tuple[int, ...] = ()  # k where no residue alternative holds

    @property
    def label(self) -> str:
        return "none" if self.beta_k is None else f"alpha_{self.beta_k}"


@dataclass(frozen=True)
class ExclusionReport:
    type: HyperquotientType
    case: str
    excluded: bool
    branches: tuple[BranchResult, ...] = ()
    terminal_by_KSB: bool = False
    assumptions: tuple[str, ...] = ("assumed_unique_beta",)
    family_name: str = field(default="")

    @property
    def surviving_branches(self) -> list[str]:
        return [b.label for b in self.branches if b.status == "survives"]

    @property
    def inconclusive_branches(self) -> list[str]:
        return [b.label for b in self.branches if b.status == "inconclusive"]

    @property
    def witnesses(self) -> list[tuple[str, MonomialSearch]]:
        return [(b.label, w) for b in self.branches for w in b.witnesses]

    @property
    def status(self) -> str:
        if self.terminal_by_KSB:
            return "terminal_by_KSB"
        if self.excluded:
            return "excluded"
        return "inconclusive" if not self.surviving_branches else "survivor"

    def as_record(self) -> dict:
        return {
            "type": str(self.type),
            "case": self.case,
            "status": self.status,
            "branches": [
                {
                    "beta": b.label,
                    "status": b.status,
                    "witnesses": [
                        {"k": w.k, "forced_weight": render_rational(w.forced_weight),
                         "family": self.family_name, "outcome": w.outcome}
                        for w in b.witnesses
                    ],
                    "contradictions": list(b.contradictions),
                    "inconclusive_k": list(b.inconclusive),
                }
                for b in self.branches
            ],
            "assumptions": list(self.assumptions),
        }


def _kind(h: HyperquotientType, case: str) -> str:
    r, (a, b, c, d), e = h.r, h.a, h.e
    if case == "cA":
        if (a + b - e) % r or (c + d - 1) % r:
            raise ValueError(f"{h} does not fit f = xy + g(z,t)")
        return "xy"
    if case in ("odd", "cD4", "cDn", "cE"):
        if (2 * a - e) % r or (b + c + d - 1 - a) % r:
            raise ValueError(f"{h} does not fit f = x^2 + ...")
        if case == "odd" and (2 * b - e) % r:
            raise ValueError(f"{h}: y^2 is not equivariant")
        return "claim" if case != "odd" and a == 0 and e == 0 else "x2"
    raise ValueError(f"cannot replay case {case!r}")


def _per_k(h: HyperquotientType, kind: str, mons: np.ndarray, degree_bound: int):
    """For each k: None (no constraint), 'contradiction', or a MonomialSearch."""
    r, (a, b, c, d), e = h.r, h.a, h.e
    out = {}
    for k in range(1, r):
        ak, bk, ck, dk, ek = (x * k % r for x in (a, b, c, d, e))
        if kind == "claim":
            out[k] = search_forced(h, k, r, mons, degree_bound)
            continue
        if kind == "xy":
            i = ak + bk == ek and ck + dk == k + r
            ii = ak + bk == ek + r and ck + dk == k
        else:
            i = 2 * ak == ek and bk + ck + dk == ak + k + r
            ii = 2 * ak == ek + r and bk + ck + dk == ak + k
        if ii:
            out[k] = search_forced(h, k, ek, mons, degree_bound)
        elif i:
            out[k] = None
        else:
            out[k] = "contradiction"
    return out


def exclude_candidate(h: HyperquotientType, case: str, delta: Fraction,
                      degree_bound: int = 12, family: str | None = None) -> ExclusionReport:
    delta = Fraction(delta)
    if not 0 < delta <= Fraction(1, 2):
        raise ValueError("delta must lie in (0, 1/2]")
    if degree_bound < 1:
        raise ValueError("degree_bound must be positive")
    v = rule2_check(h)
    if not v.passed:
        raise ValueError(f"{h} fails Rule II: {'; '.join(v.failures)}")
    kind = _kind(h, case)
    r, (a, b, c, d), e = h.r, h.a, h.e

    if family == "cA_qgt1_A" or (case == "cA" and d == 0 and e == 0 and c == 1 and (a + b) % r == 0):
        return ExclusionReport(h, case, False, (), terminal_by_KSB=True, family_name="(z,t)^2")

    name, mons = residual_family(case, degree_bound)
    per_k = _per_k(h, kind, mons, degree_bound)

    k0s = [None] + [k for k in range(1, r) if 1 - delta < Fraction(k, r)]
    branches = []
    for k0 in k0s:
        skip = set()
        if k0 is not None:
            skip.add(k0)
            # beta' = alpha_{r-k0} only when alpha_{k0} has no zero coordinate
            if kind != "claim" and all(x * k0 % r for x in h.a):
                skip.add(r - k0)
        wit, inc, contra = [], [], []
        for k in range(1, r):
            if k in skip:
                continue
            res = per_k[k]
            if res == "contradiction":
                contra.append(k)
            elif isinstance(res, MonomialSearch):
                if res.outcome == "absent":
                    wit.append(res)
                elif res.outcome == "inconclusive":
                    inc.append(k)
        status = "excluded" if wit or contra else "inconclusive" if inc else "survives"
        branches.append(BranchResult(k0, status, tuple(wit), tuple(inc), tuple(contra)))
    excluded = all(br.status == "excluded" for br in branches)
    return ExclusionReport(h, case, excluded, tuple(branches), family_name=name)


@dataclass
class ReplaySummary:
    counts: dict = field(default_factory=lambda: {"excluded": 0, "terminal_by_KSB": 0,
                                                   "inconclusive": 0, "survivors": 0})
    reports: list = field(default_factory=list)


def replay_r(r: int, delta: Fraction, degree_bound: int) -> list[tuple[str, ExclusionReport]]:
    out = []
    for fam in families_for(r):
        for h in candidate_types(fam, r):
            out.append((fam, exclude_candidate(h, FAMILY_CASE[fam], delta, degree_bound, family=fam)))
    return out


def replay_exclusions(r_min: int, r_max: int, delta: Fraction, degree_bound: int = 12,
                      jobs: int = 1) -> ReplaySummary:
    from .parallel import ordered_map

    delta = Fraction(delta)
    if r_min < 14 or r_max < r_min:
        raise ValueError("need 14 <= r_min <= r_max")
    if not 0 < delta <= Fraction(1, 2):
        raise ValueError("delta must lie in (0, 1/2]")
    summary = ReplaySummary()
    key = {"excluded": "excluded", "terminal_by_KSB": "terminal_by_KSB",
           "inconclusive": "inconclusive", "survivor": "survivors"}
    for chunk in ordered_map(replay_r, [(r, delta, degree_bound) for r in range(r_min, r_max + 1)], jobs):
        for fam, rep in chunk:
            summary.counts[key[rep.status]] += 1
            summary.reports.append((fam, rep))
    return summary
