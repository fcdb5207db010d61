import random

import pytest
from hypothesis import given, settings, strategies as st

from prymlat.exact_linalg import FinAbGroup, IntegerMatrix, determinant, is_unimodular
from prymlat.gmodule import FreeGModule, decompose, group_cohomology
from prymlat.lattice import PreconditionError, discriminant_group, lattice_determinant, scale
from prymlat.presets import (beauville_donagi, beauville_donagi_report, conic_bundle_prym_parity,
                             cubic_ambient, cubic_fourfold_M, cubic_fourfold_M_report,
                             cubic_picard3, cubic_picard3_report, k3_lattice, picard3_ambient,
                             picard3_expected, picard3_K_report, surface_structure_fixed_points,
                             surface_structure_free)
from prymlat.random_instances import surface_type_lattice

from oracles import discriminant_oracle, element_orders, orders_of_type


# ---------------------------------------------------------------- quotient surfaces

def test_fixed_points_small_case():
    rep = surface_structure_fixed_points(6, 2)
    assert rep.r0 == 3
    assert rep.decomposition == "Z[G]^3"
    assert rep.M_group == FinAbGroup.elementary_2(1)
    assert rep.coker_pullback.is_trivial()
    assert rep.to_dict()["verdict"] is True


@pytest.mark.parametrize("h2", [14, 16, 22, 40])
def test_sixteen_fixed_points(h2):
    rep = surface_structure_fixed_points(h2, 16)
    assert rep.h2_cohomology == FinAbGroup.elementary_2(14)
    assert rep.M_group == FinAbGroup.elementary_2(15)
    assert rep.h1.is_trivial()


@pytest.mark.parametrize("h2,r", [(5, 2), (6, 1), (0, 4), (7, 4)])
def test_fixed_points_rejects(h2, r):
    with pytest.raises(PreconditionError):
        surface_structure_fixed_points(h2, r)


def test_fixed_points_error_messages():
    with pytest.raises(PreconditionError, match="r >= 2"):
        surface_structure_fixed_points(6, 1)
    with pytest.raises(PreconditionError, match="not an integer"):
        surface_structure_fixed_points(5, 2)


def test_free_examples():
    assert surface_structure_free(22).decomposition == "Z[G]^10 ⊕ Z₋^2"
    rep = surface_structure_free(2)
    assert rep.decomposition == "Z₋^2" and rep.r0 == 0
    assert rep.h1 == FinAbGroup.elementary_2(2) and rep.h2_cohomology.is_trivial()
    assert str(rep.homology[1]) == "Z/2"
    with pytest.raises(PreconditionError, match="even"):
        surface_structure_free(7)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 20), st.integers(0, 10))
def test_fixed_point_reports_are_consistent(r, extra):
    h2 = r - 2 + 2 * extra
    rep = surface_structure_fixed_points(h2, r)
    assert all(rep.checks.values())
    assert 2 * rep.r0 + r - 2 == h2
    assert rep.M_group.order * rep.N_group.order == 2 ** r
    # compare with an explicit lattice of the same shape, when small
    if h2 <= 12:
        L = surface_type_lattice(rep.r0, r - 2, "fixed")
        dec = decompose(L.module())
        assert (dec.r0, dec.r_plus, dec.r_minus) == (rep.r0, r - 2, 0)
        assert group_cohomology(L.module(), 2) == rep.h2_cohomology


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 20))
def test_free_reports_are_consistent(k):
    rep = surface_structure_free(2 * k)
    assert all(rep.checks.values())
    assert rep.r0 == k - 1


# ---------------------------------------------------------------- cubic fourfold

def test_cubic_M():
    L = cubic_fourfold_M()
    assert lattice_determinant(L) == -15
    assert str(decompose(L.module())) == "Z[G]"
    assert str(discriminant_group(L)) == "(Z/5)₊ ⊕ (Z/3)₋"
    rep = cubic_fourfold_M_report()
    # g = 2C + sigma(C): 4*1 + 2*2*1*4 + 1*1 = 21
    assert rep["g"] == [2, 1] and rep["g_squared"] == 21


def test_cubic_ambient_is_unimodular_and_contains_M():
    L, M = cubic_ambient()
    assert is_unimodular(L.gram)
    assert group_cohomology(L.module(), 1).is_trivial()
    B = IntegerMatrix.from_columns(M, 4)
    assert (B.T @ L.gram @ B) == IntegerMatrix([[1, 4], [4, 1]])


def test_picard3_examples():
    d = discriminant_group(cubic_picard3(1, 1))
    assert lattice_determinant(cubic_picard3(1, 1)) == -25
    assert str(d) == "(Z/5)₊ ⊕ (Z/5)₋"
    rep = cubic_picard3_report(3, 1)
    assert rep["verdict"] is True and rep["case"] == "3 divides m"
    assert picard3_expected(3, 1)["minus"] == [7, 3]
    assert str(decompose(cubic_picard3(2, 5).module())) == "Z[G] ⊕ Z₋"
    with pytest.raises(PreconditionError):
        cubic_picard3(3, -6)


def test_picard3_closed_form_exhaustive():
    for m in range(-10, 11):
        for d in range(-10, 11):
            if 3 * d + 2 * m * m == 0:
                continue
            assert lattice_determinant(cubic_picard3(m, d)) == -5 * (3 * d + 2 * m * m)
            if (3 * d + 2 * m * m) % 2:
                assert cubic_picard3_report(m, d)["verdict"] is True, (m, d)


@pytest.mark.parametrize("m,d", [(1, 1), (2, 1), (3, 1), (1, -1), (6, 1)])
def test_picard3_discriminant_by_enumeration(m, d):
    L = cubic_picard3(m, d)
    disc = discriminant_group(L)
    order, els, fixed, neg = discriminant_oracle(L.gram.tolist(), L.sigma.tolist())
    moduli = (order,) * 3
    exp = picard3_expected(m, d)
    assert len(els) == abs(exp["det"])
    assert element_orders(moduli, fixed) == orders_of_type(
        FinAbGroup.from_moduli(exp["plus"]).invariant_factors)
    assert element_orders(moduli, neg) == orders_of_type(
        FinAbGroup.from_moduli(exp["minus"]).invariant_factors)
    assert disc.minus_part == FinAbGroup.from_moduli(exp["minus"])


@pytest.mark.parametrize("m,d", [(1, 2), (2, 4), (3, 2), (1, 0), (5, -2)])
def test_picard3_ambient_has_trivial_K(m, d):
    L, hdg = picard3_ambient(m, d)
    B = IntegerMatrix.from_columns(hdg, L.rank)
    assert B.T @ L.gram @ B == cubic_picard3(m, d).gram
    rep = picard3_K_report(m, d)
    assert rep["K"] == "0" and rep["verdict"] is True
    assert rep["pic_decomposition"] == "Z[G] ⊕ Z₋"


def test_picard3_ambient_needs_even_d():
    assert picard3_ambient(1, 1) is None


# ---------------------------------------------------------------- hyperkaehler data

def test_k3_lattice():
    K = k3_lattice()
    assert K.rows == 22 and determinant(K) == -1
    assert all(K[i, i] % 2 == 0 for i in range(22))


def test_beauville_donagi():
    bd = beauville_donagi()
    assert bd.rank == 23
    assert bd.form.pair(bd.lambda0, bd.lambda0) == 4 * 14 - 25 * 2 == 6
    assert scale(bd.form, bd.lambda0) == 2
    rep = beauville_donagi_report(bd)
    assert rep["verdict"] is True
    assert len(rep["checks"]) == 9
    assert abs(rep["det_b"]) == 2 and abs(rep["det_b0"]) == 1
    assert rep["b0(lambda0,lambda0)"] == 3


# ---------------------------------------------------------------- conic bundles

def test_conic_bundle_parity_examples():
    assert conic_bundle_prym_parity(1, 4)["q_prime"] == -6
    assert conic_bundle_prym_parity(0, 1)["q_prime"] == -2
    rep = conic_bundle_prym_parity(1, 4, q=3)
    assert rep["det_P"] == "3" and rep["det_P_odd"] and rep["verdict"]


@settings(max_examples=200, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50))
def test_q_prime_always_even(a, b):
    assert conic_bundle_prym_parity(a, b)["q_prime_even"]


def test_conic_bundle_parity_matches_cubic_lattice():
    # q' is the determinant of the anti-invariant part of M: (sigma C - C)^2
    L = cubic_fourfold_M()
    v = [-1, 1]
    assert L.base.pair(v, v) == conic_bundle_prym_parity(1, 4)["q_prime"]
    assert discriminant_group(L).q == 3


def test_random_surface_lattices_match_reports():
    rng = random.Random(5)
    for _ in range(10):
        r0, k = rng.randint(0, 3), rng.randint(0, 3)
        L = surface_type_lattice(r0, k, "fixed", rng)
        if L.rank == 0:
            continue
        assert group_cohomology(FreeGModule(L.sigma), 2) == FinAbGroup.elementary_2(k)
