from collections import Counter
from itertools import product
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from prymlat.bundle_calc import (SplitBundle, dual, euler_characteristic, h0, h1,
                                 projective_bundle_h0, pushforward, sym, tensor, twist)

degrees = st.lists(st.integers(-6, 6), min_size=1, max_size=5)


def monomial_degrees(degs, m):
    """Degree of every exponent vector of total degree m (the monomial basis of Sym^m)."""
    out = []
    for exps in product(range(m + 1), repeat=len(degs)):
        if sum(exps) == m:
            out.append(sum(e * d for e, d in zip(exps, degs)))
    return Counter(out)


def sections_by_enumeration(degs):
    """h0 on the line: count monomials s^i t^(d-i) with 0 <= i <= d per summand."""
    return sum(1 for d in degs for i in range(d + 1))


def test_cotangent_chain():
    cot = SplitBundle([-2, -1, 0, 0])
    E = twist(sym(cot, 2), 3)
    assert E.ascending() == (-1, 0, 1, 1, 1, 2, 2, 3, 3, 3)
    assert h0(E) == 25
    assert str(E) == "O(-1) ⊕ O ⊕ O(1) ⊕ O(1) ⊕ O(1) ⊕ O(2) ⊕ O(2) ⊕ O(3) ⊕ O(3) ⊕ O(3)"


def test_projective_bundle_examples():
    assert projective_bundle_h0(SplitBundle([2, 1, 0, 0]), 2, 3) == 25
    assert pushforward(SplitBundle([2, 1, 0, 0]), 2, 3).ascending() == \
        (-1, 0, 1, 1, 1, 2, 2, 3, 3, 3)
    assert projective_bundle_h0(SplitBundle([2, 1, 0, 0]), 0, 0) == 1
    assert projective_bundle_h0(SplitBundle([-1, -2, -2]), 1, 0) == 8 == \
        sections_by_enumeration([1, 2, 2])


def test_small_examples():
    assert sym(SplitBundle([3, -1]), 0) == SplitBundle([0])
    assert h0(SplitBundle([-1])) == 0 and h1(SplitBundle([-1])) == 0
    assert h1(SplitBundle([-3])) == 2
    assert tensor(SplitBundle([1, 0]), SplitBundle([2])) == SplitBundle([3, 2])
    with pytest.raises(ValueError):
        SplitBundle([])
    with pytest.raises(ValueError):
        sym(SplitBundle([1]), -1)


@settings(max_examples=200, deadline=None)
@given(degrees, st.integers(0, 4))
def test_sym_matches_monomial_enumeration(degs, m):
    E = SplitBundle(degs)
    S = sym(E, m)
    assert Counter(S.degrees) == monomial_degrees(degs, m)
    assert S.rank == comb(E.rank + m - 1, m)
    # each summand appears in m/rank of the monomials on average
    assert S.degree == comb(E.rank + m - 1, m) * m * E.degree // E.rank


@settings(max_examples=200, deadline=None)
@given(degrees, st.integers(-5, 5))
def test_riemann_roch_and_monotonicity(degs, k):
    E = SplitBundle(degs)
    assert dual(dual(E)) == E
    assert h0(E) - h1(E) == euler_characteristic(E) == sum(d + 1 for d in degs)
    assert h0(E) == sections_by_enumeration(degs)
    assert h0(twist(E, k + 1)) >= h0(twist(E, k))
    chi = euler_characteristic(twist(E, k))
    assert euler_characteristic(twist(E, k + 1)) - chi == E.rank
    # Serre duality on the line: h1(E) = h0(E^* (x) O(-2))
    assert h1(E) == h0(twist(dual(E), -2))


@settings(max_examples=100, deadline=None)
@given(degrees, degrees)
def test_tensor_properties(a, b):
    E, F = SplitBundle(a), SplitBundle(b)
    T = tensor(E, F)
    assert T == tensor(F, E)
    assert T.rank == E.rank * F.rank
    assert T.degree == E.degree * F.rank + F.degree * E.rank
    assert dual(T) == tensor(dual(E), dual(F))
