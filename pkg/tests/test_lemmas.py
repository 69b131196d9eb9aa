from fractions import Fraction
from itertools import product
from math import gcd

import pytest

from mldlab.arith import HyperquotientType as H, QuotientType
from mldlab.lemmas import (
    NoPairing,
    PairingCertificate,
    nc_lemma_check,
    nc_lemma_scan,
    nc_scan_r,
    residue_sum,
    terminal_lemma_hypothesis,
    terminal_lemma_pairing,
    terminal_tuples,
    verify_terminal_lemma,
)
from mldlab.toric import mld_at_origin


def test_hypothesis_examples():
    assert terminal_lemma_hypothesis(H(5, (1, 2, 3, 4), 4))
    assert terminal_lemma_hypothesis(H(7, (2, 1, 5, 3), 3))
    assert not terminal_lemma_hypothesis(H(5, (1, 1, 1, 1), 0))
    sums = [sum(a * k % 7 for a in (2, 1, 5, 3)) for k in range(1, 7)]
    assert sums == [11, 15, 12, 16, 13, 17]
    assert [sum(a * k % 5 for a in (1, 2, 3, 4)) for k in range(1, 5)] == [10, 10, 10, 10]


def _pairs(cert):
    return {frozenset(p) for p in cert.pairs}


def test_pairing_examples():
    c = terminal_lemma_pairing(H(5, (1, 2, 3, 4), 4))
    assert c.kind == "q_eq_1"
    assert _pairs(c) == {frozenset({"a1", "a4"}), frozenset({"a2", "a3"}), frozenset({"-e", "-1"})}
    c = terminal_lemma_pairing(H(7, (2, 1, 5, 3), 3))
    assert _pairs(c) == {frozenset({"a1", "a3"}), frozenset({"a4", "-e"}), frozenset({"a2", "-1"})}
    h = H(4, (1, 1, 3, 2), 2)
    assert all(residue_sum(h, k) == k + 4 for k in (1, 2, 3))
    c = terminal_lemma_pairing(h)
    assert c.kind == "q_gt_1" and frozenset({"a4", "-e"}) in _pairs(c)
    assert c.validate(h)


def test_pairing_requires_hypothesis():
    with pytest.raises(ValueError):
        terminal_lemma_pairing(H(5, (1, 1, 1, 1), 0))


def test_certificate_rejects_wrong_pairs():
    h = H(5, (1, 2, 3, 4), 4)
    assert not PairingCertificate("q_eq_1", (("a1", "a2"), ("a3", "a4"), ("-e", "-1"))).validate(h)


def naive_terminal(r):
    out = []
    for a in product(range(r), repeat=4):
        if any(gcd(x, r) != 1 for x in a[:3]):
            continue
        for e in range(r):
            if gcd(e, r) != gcd(a[3], r):
                continue
            if all(sum(x * k % r for x in a) == e * k % r + k + r for k in range(1, r)):
                out.append((*a, e))
    return sorted(out)


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6, 7, 8])
def test_terminal_tuples_match_naive(r):
    assert sorted(map(tuple, terminal_tuples(r).tolist())) == naive_terminal(r)


@pytest.mark.parametrize("r", [5, 13, 24])
def test_verify_terminal_lemma(r):
    assert verify_terminal_lemma(r) == []


def test_every_certificate_revalidates():
    for r in (9, 12):
        for row in terminal_tuples(r):
            h = H(r, row[:4].tolist(), int(row[4]))
            assert terminal_lemma_pairing(h).validate(h)


def test_nc_accepted_example():
    h = H(13, (3, 4, 7, 0), 0)
    v = nc_lemma_check(h, 10)
    assert v.accepted and v.bound == Fraction(10, 13) and v.branch == "q_reduction"
    assert "star2" in v.star_conditions
    assert mld_at_origin(QuotientType(13, (3, 4, 7))).value == Fraction(10, 13)
    assert residue_sum(h, 10) == 10
    sums = {k: residue_sum(h, k) for k in range(1, 13)}
    assert sums[3] == 29  # k + 2r, still >= r
    assert all(s == k + 13 for k, s in sums.items() if k not in (3, 10))


def test_nc_rejections():
    v = nc_lemma_check(H(13, (3, 4, 5, 0), 0), 1)
    assert not v.accepted and "condition (1)" in v.failure_reason
    assert residue_sum(H(13, (3, 4, 5, 0), 0), 1) == 12
    v = nc_lemma_check(H(5, (1, 1, 1, 1), 0), 1)
    assert not v.accepted and v.failure_reason
    with pytest.raises(ValueError):
        nc_lemma_check(H(5, (1, 1, 1, 1), 0), 5)


def naive_nc(r, star):
    out = set()
    for a in product(range(r), repeat=4):
        for e in range(r):
            h = H(r, a, e)
            for k0 in range(1, r):
                if nc_lemma_check(h, k0, star=star).accepted:
                    out.add((h, k0))
    return out


@pytest.mark.parametrize("r", [3, 4, 5, 6, 7, 8])
@pytest.mark.parametrize("star", [True, False])
def test_nc_scan_matches_naive(r, star):
    fast = {(h, v.k0) for h, v in nc_scan_r(r, star=star) if v.accepted}
    assert fast == naive_nc(r, star)


def test_nc_scan_small():
    top, inst, _ = nc_lemma_scan(13)
    assert top >= Fraction(10, 13)
    assert (H(13, (3, 4, 7, 0), 0), 10) in {(h, v.k0) for h, v in nc_lemma_scan(13)[2]}
    top2, _, _ = nc_lemma_scan(2)
    assert top2 is None or top2 <= Fraction(1, 2)


def test_nc_branch_identities_and_coupling():
    _, _, acc = nc_lemma_scan(19)
    assert acc
    for h, v in acc:
        assert not v.inconsistent
        assert v.bound <= Fraction(18, 19)
        r = h.r
        # no k other than k0 reaches a residue sum below r
        assert min(residue_sum(h, k) for k in range(1, r) if k != v.k0) >= r
        if h.r <= 13:
            assert not (Fraction(12, 13) < v.bound < 1)
