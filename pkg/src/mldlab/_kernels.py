"""Compiled inner loops for the exhaustive residue searches."""
from __future__ import annotations

from math import gcd

import numpy as np
from numba import njit


@njit(cache=True)
def _nc_orbits(r, units, gcds):
    # S(k) = sum_i res(a_i k) - res(e k).  With a_1..a_3 units and
    # gcd(a_4, r) = gcd(e, r) one has S(k) + S(r - k) = 3r, so it suffices to
    # look at k <= (r-1)/2 and ask for S(k) in [r, 2r] at all but one k.  That
    # shape is preserved by scaling every weight by a unit, so a_1 = 1.
    h = (r - 1) // 2
    res = np.empty((r, r), np.int64)
    for a in range(r):
        for k in range(r):
            res[a, k] = (a * k) % r
    out = []
    diff = np.empty(h + 1, np.int64)
    nu = units.shape[0]
    for a4 in range(r):
        for e in range(r):
            if gcds[e] != gcds[a4]:
                continue
            for k in range(1, h + 1):
                diff[k] = k + res[a4, k] - res[e, k]
            for i2 in range(nu):
                a2 = units[i2]
                for i3 in range(i2, nu):
                    a3 = units[i3]
                    ks = 0
                    ss = 0
                    ok = True
                    for k in range(1, h + 1):
                        s = res[a2, k] + res[a3, k] + diff[k]
                        if s >= r and s <= 2 * r:
                            continue
                        if ks == 0:
                            ks = k
                            ss = s
                        else:
                            ok = False
                            break
                    if ok and ks != 0:
                        out.append((a2, a3, a4, e, ks, ss))
    return out


def nc_candidates(r: int) -> list[tuple[int, int, int, int, int, int]]:
    """Sorted (a1 <= a2 <= a3, a4, e, k0) meeting the residue conditions of the
    non-canonical lemma, gcd conditions included and star conditions ignored."""
    if r < 3:
        return []
    units = [a for a in range(1, r) if gcd(a, r) == 1]
    gcds = np.array([gcd(a, r) for a in range(r)], dtype=np.int64)
    found = set()
    for a2, a3, a4, e, ks, ss in _nc_orbits(r, np.array(units, dtype=np.int64), gcds):
        # the defect sits at k* (S = ss) and r - k* (S = 3r - ss); after scaling
        # by u it moves to u^-1 k*, and condition (1) asks S(k0) = k0 there
        for u in units:
            kp = pow(u, -1, r) * ks % r
            if ss == kp:
                k0 = kp
            elif 3 * r - ss == r - kp:
                k0 = r - kp
            else:
                continue
            a = sorted(u * x % r for x in (1, a2, a3))
            found.add((a[0], a[1], a[2], u * a4 % r, u * e % r, k0))
    return sorted(found)
