import random
from fractions import Fraction
from itertools import combinations_with_replacement
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from mldlab.arith import QuotientType, is_isolated, units_mod
from mldlab.toric import (
    gap_scan_dim3,
    gap_scan_dim5,
    mld_at_origin,
    mld_oracle,
    normalize_type,
)


def naive_mld(r, weights):
    """Plain loop over k, no shared code with the library."""
    best = None
    for k in range(r):
        s = sum((a * k % r) or r for a in weights)
        best = s if best is None or s < best else best
    return Fraction(best, r)


@pytest.mark.parametrize("text,value,k", [
    ("1/13(3,4,5)", Fraction(12, 13), 1),
    ("1/3(1,1)", Fraction(2, 3), 1),
    ("1/1(0,0,0)", Fraction(3), 0),
    ("1/5(2,3,1)", Fraction(6, 5), 1),
])
def test_mld_examples(text, value, k):
    res = mld_at_origin(QuotientType.parse(text))
    assert res.value == value and res.witness_k == k
    assert res.witness_vector.total() == value
    assert all(b >= 1 for b in res.witness_vector.coords)


def test_witness_vector_example():
    assert str(mld_at_origin(QuotientType(13, (3, 4, 5))).witness_vector) == "(3,4,5)/13"


@pytest.mark.parametrize("text,depth,value", [
    ("1/13(3,4,5)", 4, Fraction(12, 13)),
    ("1/3(1,1)", 3, Fraction(2, 3)),
    ("1/5(2,3,1)", 4, Fraction(6, 5)),
])
def test_oracle_examples(text, depth, value):
    assert mld_oracle(QuotientType.parse(text), depth) == value


def isolated_types(max_r=50, max_dim=5):
    return st.integers(2, max_r).flatmap(lambda r: st.lists(
        st.sampled_from(units_mod(r)), min_size=2, max_size=max_dim).map(lambda w: QuotientType(r, w)))


@settings(max_examples=150, deadline=None)
@given(isolated_types())
def test_oracle_equivalence(q):
    assert mld_at_origin(q).value == mld_oracle(q, q.dim + 1) == naive_mld(q.r, q.weights)


def test_oracle_equivalence_exhaustive_small():
    for r in range(1, 8):
        for w in combinations_with_replacement(range(r), 3):
            q = QuotientType(r, w)
            assert mld_at_origin(q).value == mld_oracle(q, 4)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 60).flatmap(lambda r: st.lists(st.integers(0, r - 1), min_size=2, max_size=5)
                                   .map(lambda w: QuotientType(r, w))))
def test_unit_and_permutation_invariance(q):
    base = mld_at_origin(q).value
    for u in units_mod(q.r):
        w = [u * a for a in q.weights]
        random.Random(u).shuffle(w)
        assert mld_at_origin(QuotientType(q.r, w)).value == base


def test_normalize_examples():
    c = normalize_type(QuotientType(13, (3, 4, 5)))
    assert normalize_type(QuotientType(13, (6, 8, 10))) == c
    # least sorted unit multiple of (3,4,5) mod 13
    assert c.canonical.weights == (1, 4, 11)
    assert normalize_type(QuotientType(5, (4, 3, 2))).canonical.weights == (1, 2, 3)


def test_appending_a_unit_weight_never_lowers_mld():
    rng = random.Random(7)
    for _ in range(200):
        r = rng.randint(2, 30)
        w = [rng.randrange(r) for _ in range(rng.randint(2, 4))]
        u = rng.choice(units_mod(r))
        assert mld_at_origin(QuotientType(r, w + [u])).value >= mld_at_origin(QuotientType(r, w)).value


def test_terminal_quotient_family():
    for r in range(2, 61):
        for b in units_mod(r):
            got = mld_at_origin(QuotientType(r, (1, r - 1, b))).value
            want = 1 + Fraction(min(min(b * k % r, -b * k % r) for k in range(1, r)), r)
            assert got == want > 1


def test_scan3_examples():
    assert gap_scan_dim3(13, Fraction(12, 13)) == []
    hits = gap_scan_dim3(3, Fraction(1, 2))
    assert all(res.value < 1 for _, res in hits)
    assert not any(cls.canonical.weights in ((1, 1, 1), (1, 1, 2)) for cls, _ in hits)


def test_scan3_matches_naive_enumeration():
    want = set()
    for r in range(2, 21):
        for w in combinations_with_replacement(units_mod(r), 3):
            v = naive_mld(r, w)
            if Fraction(4, 5) < v < 1:
                want.add((r, min(tuple(sorted(u * a % r for a in w)) for u in units_mod(r)), v))
    got = {(c.canonical.r, c.canonical.weights, res.value) for c, res in gap_scan_dim3(20, Fraction(4, 5))}
    assert got == want


def test_scan3_class_of_example_below_threshold():
    hits = gap_scan_dim3(13, Fraction(9, 10))
    classes = {cls for cls, _ in hits}
    assert normalize_type(QuotientType(13, (3, 4, 5))) in classes
    # isolated 1/11(1,5,7) has mld 10/11 in (9/10, 1)
    assert naive_mld(11, (1, 5, 7)) == Fraction(10, 11)
    assert normalize_type(QuotientType(11, (1, 5, 7))) in classes


def test_scan5_examples():
    assert gap_scan_dim5(2, Fraction(3, 2)) == []
    assert gap_scan_dim5(1, Fraction(3, 2)) == []


def test_scan_threshold_ranges():
    with pytest.raises(ValueError):
        gap_scan_dim3(5, Fraction(1))
    with pytest.raises(ValueError):
        gap_scan_dim5(5, Fraction(1))


def test_scan_results_sorted_and_unique():
    hits = gap_scan_dim3(40, Fraction(3, 4))
    keys = [(c.canonical.r, c.canonical.weights) for c, _ in hits]
    assert keys == sorted(set(keys))
    for c, res in hits:
        assert is_isolated(c.canonical) and all(gcd(a, c.canonical.r) == 1 for a in c.canonical.weights)
        assert res.value == naive_mld(c.canonical.r, c.canonical.weights)


def naive_small(r, w):
    return all(sum(1 for a in w if a * k % r) != 1 for k in range(1, r))


def test_scan5_matches_naive_enumeration():
    lo = Fraction(25, 13)
    want = set()
    for r in range(2, 14):
        for w in combinations_with_replacement(range(r), 5):
            if naive_small(r, w) and lo < naive_mld(r, w) < 2:
                canon = min(tuple(sorted(u * a % r for a in w)) for u in units_mod(r))
                want.add((r, canon))
    got = {(c.canonical.r, c.canonical.weights) for c, _ in gap_scan_dim5(13, lo)}
    assert got == want
