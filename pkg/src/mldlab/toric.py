"""Minimal log discrepancies of cyclic quotient singularities at the origin.

The closed form: every lattice point of N in the open orthant dominates one of
the lifted vectors alpha_k = (1/r)(lift(a_i k)), so

    mld_0 = min_k (1/r) * sum_i lift(residue(a_i k, r)),   lift(0) = r.

:func:`mld_oracle` enumerates lattice points in a box instead and shares no
code with the closed form.  The scan drivers work on integer arrays (all values
scaled by r) and only build Fractions for the handful of hits.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np

from .arith import QuotientType, Weighting, lift, render_rational, units_mod


@dataclass(frozen=True)
class MldResult:
    value: Fraction
    witness_k: int
    witness_vector: Weighting

    def as_record(self, q: QuotientType) -> dict:
        return {
            "r": q.r,
            "weights": list(q.weights),
            "mld": render_rational(self.value),
            "witness_k": self.witness_k,
        }


@dataclass(frozen=True)
class TypeClass:
    canonical: QuotientType

    def __str__(self) -> str:
        return str(self.canonical)


def lifted_sum(q: QuotientType, k: int) -> int:
    return sum(lift(a * k % q.r, q.r) for a in q.weights)


def mld_at_origin(q: QuotientType) -> MldResult:
    best_k, best = 0, lifted_sum(q, 0)
    for k in range(1, q.r):
        s = lifted_sum(q, k)
        if s < best:
            best_k, best = k, s
    vec = Weighting(q.r, (lift(a * best_k % q.r, q.r) for a in q.weights))
    return MldResult(Fraction(best, q.r), best_k, vec)


def mld_oracle(q: QuotientType, depth: int) -> Fraction:
    """Brute-force minimum of alpha(x_0...x_n) over lattice points in (0, depth]^(n+1).

    Every j in [0, r) and every integer shift of (1/r)(j a_i) that keeps all
    coordinates inside the box is visited.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    r, n1 = q.r, q.dim
    # shifts m_i >= 0 with 0 < (j a_i mod r) + m_i r <= depth r
    shifts = np.arange(depth + 1, dtype=np.int64) * r
    best = None
    for j in range(r):
        base = np.array([j * a % r for a in q.weights], dtype=np.int64)
        axes = []
        for b in base:
            vals = b + shifts
            axes.append(vals[(vals > 0) & (vals <= depth * r)])
        grid = axes[0]
        for ax in axes[1:]:
            grid = np.add.outer(grid, ax)
        low = int(grid.min())
        if best is None or low < best:
            best = low
    return Fraction(best, r)


def normalize_type(q: QuotientType) -> TypeClass:
    best = min(tuple(sorted(u * a % q.r for a in q.weights)) for u in units_mod(q.r))
    return TypeClass(QuotientType(q.r, best))


# ------------------------------------------------------- vectorised helpers


def mld_numerators(r: int, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For an (M, n) integer array of weights mod r return (r * mld, witness k)."""
    weights = np.asarray(weights, dtype=np.int64)
    m, n = weights.shape
    best = np.full(m, n * r, dtype=np.int64)
    best_k = np.zeros(m, dtype=np.int64)
    for k in range(1, r):
        res = weights * k % r
        s = np.where(res == 0, r, res).sum(axis=1)
        better = s < best
        best[better] = s[better]
        best_k[better] = k
    return best, best_k


def small_action_mask(r: int, weights: np.ndarray) -> np.ndarray:
    weights = np.asarray(weights, dtype=np.int64)
    ok = np.ones(weights.shape[0], dtype=bool)
    for k in range(1, r):
        moved = (weights * k % r != 0).sum(axis=1)
        ok &= moved != 1
    return ok


def canonical_keys(r: int, weights: np.ndarray) -> np.ndarray:
    """Integer key of the lexicographically least sorted unit multiple of each row."""
    weights = np.asarray(weights, dtype=np.int64)
    n = weights.shape[1]
    place = r ** np.arange(n - 1, -1, -1, dtype=np.int64)
    best = None
    for u in units_mod(r):
        key = (np.sort(weights * u % r, axis=1) * place).sum(axis=1)
        best = key if best is None else np.minimum(best, key)
    return best


def decode_key(r: int, key: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        key, d = divmod(int(key), r)
        out.append(d)
    return tuple(reversed(out))


def class_representatives(r: int, dim: int, isolated: bool = False) -> np.ndarray:
    """Canonical weight vectors of every type class of the given index and dimension."""
    pool = units_mod(r) if isolated else range(r)
    combos = np.array(list(combinations_with_replacement(pool, dim)), dtype=np.int64)
    if combos.size == 0:
        return np.zeros((0, dim), dtype=np.int64)
    keys = canonical_keys(r, combos)
    uniq = np.unique(keys)
    return np.array([decode_key(r, k, dim) for k in uniq], dtype=np.int64).reshape(-1, dim)


def _hits(r: int, weights: np.ndarray, num: np.ndarray, ks: np.ndarray, mask: np.ndarray):
    found = {}
    for w, s, k in zip(weights[mask], num[mask], ks[mask]):
        cls = normalize_type(QuotientType(r, w.tolist()))
        if cls in found:
            continue
        # report the witness for the canonical representative itself
        found[cls] = mld_at_origin(cls.canonical)
        assert found[cls].value == Fraction(int(s), r)
    return sorted(found.items(), key=lambda kv: (kv[0].canonical.r, kv[0].canonical.weights))


# ----------------------------------------------------------------- scans


def scan3_r(r: int, threshold: Fraction) -> list[tuple[TypeClass, MldResult]]:
    """Isolated 3-dimensional classes of index r with threshold < mld < 1."""
    if r < 2:
        return []
    units = units_mod(r)
    # every isolated class has a representative 1/r(1, b, c) with b <= c
    pairs = np.array([(1, b, c) for b in units for c in units if b <= c], dtype=np.int64)
    num, ks = mld_numerators(r, pairs)
    mask = (num * threshold.denominator > threshold.numerator * r) & (num < r)
    return _hits(r, pairs, num, ks, mask)


def scan5_r(r: int, threshold: Fraction) -> list[tuple[TypeClass, MldResult]]:
    """Small 5-dimensional classes of index r (isolated or not) with threshold < mld < 2."""
    if r < 2:
        return []
    combos = np.array(list(combinations_with_replacement(range(r), 5)), dtype=np.int64)
    combos = combos[small_action_mask(r, combos)]
    num, ks = mld_numerators(r, combos)
    mask = (num * threshold.denominator > threshold.numerator * r) & (num < 2 * r)
    return _hits(r, combos, num, ks, mask)


def max_mld_below(r: int, dim: int, bound: int, isolated: bool) -> Fraction | None:
    """Largest mld_0 strictly below ``bound`` among small classes of index r."""
    if r < 2:
        return None
    pool = units_mod(r) if isolated else range(r)
    combos = np.array(list(combinations_with_replacement(pool, dim)), dtype=np.int64)
    combos = combos[small_action_mask(r, combos)]
    num, _ = mld_numerators(r, combos)
    below = num[num < bound * r]
    return Fraction(int(below.max()), r) if below.size else None


def gap_scan_dim3(r_max: int, threshold: Fraction, jobs: int = 1):
    from .parallel import ordered_map

    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    chunks = ordered_map(scan3_r, [(r, threshold) for r in range(2, r_max + 1)], jobs)
    return [hit for chunk in chunks for hit in chunk]


def gap_scan_dim5(r_max: int, threshold: Fraction, jobs: int = 1):
    from .parallel import ordered_map

    if not 1 < threshold < 2:
        raise ValueError("threshold must lie in (1, 2)")
    chunks = ordered_map(scan5_r, [(r, threshold) for r in range(2, r_max + 1)], jobs)
    return [hit for chunk in chunks for hit in chunk]


def oracle_diff_r(r: int, dim: int, depth: int) -> list[dict]:
    """Classes of index r where the closed form and the lattice oracle disagree."""
    out = []
    for w in class_representatives(r, dim):
        q = QuotientType(r, w.tolist())
        closed = mld_at_origin(q).value
        brute = mld_oracle(q, depth)
        if closed != brute:
            out.append({"type": str(q), "closed_form": render_rational(closed),
                        "oracle": render_rational(brute)})
    return out
