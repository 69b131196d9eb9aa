"""Checkers for the terminal lemma and the non-canonical lemma.

Both lemmas are statements about 5-tuples 1/r(a_1, a_2, a_3, a_4; e) and the
residue sums

    S(k) = sum_{i<=4} res(a_i k) - res(e k),    1 <= k <= r-1.

The terminal lemma assumes S(k) = k + r for every k and concludes a pairing of
{a_1, a_2, a_3, a_4, -e, -1}; the non-canonical lemma allows a single defect
S(k0) = k0 and bounds k0/r away from 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import gcd

import numpy as np

from .arith import HyperquotientType, QuotientType, render_rational
from .toric import mld_at_origin

LABELS = ("a1", "a2", "a3", "a4", "-e", "-1")


class NoPairing(Exception):
    """A tuple satisfies the terminal lemma hypothesis but admits no pairing."""


def residue_sum(h: HyperquotientType, k: int) -> int:
    r = h.r
    return sum(a * k % r for a in h.a) - h.e * k % r


def lemma_shape_ok(h: HyperquotientType) -> bool:
    """q = gcd(e, r) = gcd(a_4, r) and a_1, a_2, a_3 coprime to r."""
    return gcd(h.e, h.r) == gcd(h.a[3], h.r) and all(gcd(a, h.r) == 1 for a in h.a[:3])


# ----------------------------------------------------------- terminal lemma


def terminal_lemma_hypothesis(h: HyperquotientType) -> bool:
    return all(residue_sum(h, k) == k + h.r for k in range(1, h.r))


@dataclass(frozen=True)
class PairingCertificate:
    kind: str  # "q_gt_1" or "q_eq_1"
    pairs: tuple[tuple[str, str], ...]

    def values(self, h: HyperquotientType) -> dict[str, int]:
        r = h.r
        return dict(zip(LABELS, (*h.a, -h.e % r, -1 % r)))

    def validate(self, h: HyperquotientType) -> bool:
        vals = self.values(h)
        used = [lab for pair in self.pairs for lab in pair]
        if sorted(used) != sorted(LABELS):
            return False
        if any((vals[x] + vals[y]) % h.r for x, y in self.pairs):
            return False
        if self.kind == "q_gt_1":
            # a4 = e, a_j = 1, a_k + a_l = 0
            return ("a4", "-e") in self.pairs and any("-1" in p and "a4" not in p for p in self.pairs)
        return self.kind == "q_eq_1"

    def as_record(self) -> dict:
        return {"kind": self.kind, "pairs": [list(p) for p in self.pairs]}


def _matchings(items):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for i, other in enumerate(rest):
        for tail in _matchings(rest[:i] + rest[i + 1:]):
            yield ((first, other),) + tail


def terminal_lemma_pairing(h: HyperquotientType) -> PairingCertificate:
    """Find the pairing the terminal lemma promises (raises NoPairing otherwise)."""
    if not lemma_shape_ok(h):
        raise ValueError(f"{h}: need gcd(e,r) = gcd(a4,r) and a1, a2, a3 coprime to r")
    if not terminal_lemma_hypothesis(h):
        raise ValueError(f"{h}: terminal lemma hypothesis fails")
    kind = "q_gt_1" if h.q > 1 else "q_eq_1"
    for pairs in _matchings(list(LABELS)):
        cert = PairingCertificate(kind, tuple(pairs))
        if cert.validate(h):
            return cert
    raise NoPairing(str(h))


def terminal_tuples(r: int) -> np.ndarray:
    """All (a1, a2, a3, a4, e) mod r with the lemma's gcd shape satisfying the hypothesis."""
    units = np.array([a for a in range(1, r) if gcd(a, r) == 1], dtype=np.int64)
    g = np.array([gcd(a, r) for a in range(r)], dtype=np.int64)
    a1, a2, a3, a4 = (x.ravel() for x in np.meshgrid(units, units, units, np.arange(r), indexing="ij"))
    # k = 1 pins e down: a1 + a2 + a3 + a4 - e = 1 + r
    e = a1 + a2 + a3 + a4 - 1 - r
    keep = (e >= 0) & (e < r)
    tup = np.stack([a1, a2, a3, a4, e], axis=1)[keep]
    tup = tup[g[tup[:, 4]] == g[tup[:, 3]]]
    for k in range(2, r):
        res = tup * k % r
        s = res[:, :4].sum(axis=1) - res[:, 4]
        tup = tup[s == k + r]
    return tup


def verify_terminal_lemma(r: int) -> list[HyperquotientType]:
    """Hypothesis-satisfying tuples for which no pairing exists (expected: none)."""
    if r < 2:
        raise ValueError("r must be at least 2")
    bad = []
    for row in terminal_tuples(r):
        h = HyperquotientType(r, row[:4].tolist(), int(row[4]))
        try:
            terminal_lemma_pairing(h)
        except NoPairing:
            bad.append(h)
    return bad


# ------------------------------------------------------ non-canonical lemma


@dataclass(frozen=True)
class NcLemmaVerdict:
    accepted: bool
    k0: int | None = None
    bound: Fraction | None = None
    branch: str | None = None
    star_conditions: frozenset[str] = field(default_factory=frozenset)
    failure_reason: str | None = None

    @property
    def inconsistent(self) -> bool:
        return bool(self.failure_reason) and self.failure_reason.startswith("inconsistency")

    def as_record(self, h: HyperquotientType) -> dict:
        return {
            "type": str(h),
            "k0": self.k0,
            "accepted": self.accepted,
            "bound": render_rational(self.bound) if self.bound is not None else None,
            "branch": self.branch,
            "star": sorted(self.star_conditions),
            "failure_reason": self.failure_reason,
        }


def star_conditions(h: HyperquotientType) -> frozenset[str]:
    r, (a1, a2, a3, a4), e = h.r, h.a, h.e
    held = set()
    if (a1 + a2 - e) % r == 0:
        held.add("star1")
    if (2 * a4 - e) % r == 0:
        held.add("star2")
    if (2 * a1 - e) % r == 0 and h.q <= 2:
        held.add("star3")
    return frozenset(held)


def nc_lemma_check(h: HyperquotientType, k0: int, star: bool = True) -> NcLemmaVerdict:
    """Check the lemma's hypotheses at k0 and replay the matching proof branch.

    With ``star=False`` the star conditions are reported but not required.
    """
    r = h.r
    if not 1 <= k0 <= r - 1:
        raise ValueError(f"k0 must lie in [1, {r - 1}], got {k0}")
    stars = star_conditions(h)

    def reject(reason: str) -> NcLemmaVerdict:
        return NcLemmaVerdict(False, k0, None, None, stars, reason)

    if gcd(h.e, r) != gcd(h.a[3], r):
        return reject("gcd(e,r) != gcd(a4,r)")
    if any(gcd(a, r) != 1 for a in h.a[:3]):
        return reject("a1, a2, a3 not all coprime to r")
    if star and not stars:
        return reject("none of star1, star2, star3 holds")
    if residue_sum(h, k0) != k0:
        return reject(f"condition (1) fails at k0={k0}: S={residue_sum(h, k0)}")
    for k in range(1, r):
        if k != k0 and residue_sum(h, k) < r:
            return reject(f"condition (2) fails at k={k}: S={residue_sum(h, k)} < {r}")

    bound = Fraction(k0, r)
    a1, a2, a3, a4 = h.a
    if a4 * k0 % r:
        z = QuotientType(r, (a1, a2, a3, a4, -h.e))
        got = mld_at_origin(z)
        if got.value != 1 + bound:
            return NcLemmaVerdict(False, k0, bound, "five_dim", stars,
                                  f"inconsistency: mld_0({z}) = {got.value}, expected {1 + bound}")
        return NcLemmaVerdict(True, k0, bound, "five_dim", stars)

    q = h.q
    p = r // q
    if k0 % p:
        return NcLemmaVerdict(False, k0, bound, "q_reduction", stars,
                              f"inconsistency: p={p} does not divide k0={k0}")
    z = QuotientType(q, (a1, a2, a3))
    got = mld_at_origin(z)
    if got.value != Fraction(k0 // p, q):
        return NcLemmaVerdict(False, k0, bound, "q_reduction", stars,
                              f"inconsistency: mld_0({z}) = {got.value}, expected {k0 // p}/{q}")
    return NcLemmaVerdict(True, k0, bound, "q_reduction", stars)


def nc_scan_r(r: int, star: bool = True) -> list[tuple[HyperquotientType, NcLemmaVerdict]]:
    """Every (h, k0) of index r accepted by :func:`nc_lemma_check`, plus inconsistencies."""
    from ._kernels import nc_candidates

    out = []
    for a1, a2, a3, a4, e, k0 in nc_candidates(r):
        for perm in sorted(set(permutations((a1, a2, a3)))):
            h = HyperquotientType(r, (*perm, a4), e)
            v = nc_lemma_check(h, k0, star=star)
            if v.accepted or v.inconsistent:
                out.append((h, v))
    out.sort(key=lambda hv: (hv[0].r, hv[0].a, hv[0].e, hv[1].k0))
    return out


def nc_lemma_scan(r_max: int, star: bool = True, jobs: int = 1):
    """Return (max k0/r, attaining instances, all accepted instances)."""
    from .parallel import ordered_map

    if r_max < 2:
        raise ValueError("r_max must be at least 2")
    chunks = ordered_map(nc_scan_r, [(r, star) for r in range(2, r_max + 1)], jobs)
    accepted = [hv for chunk in chunks for hv in chunk if hv[1].accepted]
    if not accepted:
        return None, [], []
    top = max(v.bound for _, v in accepted)
    return top, [hv for hv in accepted if hv[1].bound == top], accepted
