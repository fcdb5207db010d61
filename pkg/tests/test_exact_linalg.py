import pytest
from hypothesis import given, settings, strategies as st

from prymlat.exact_linalg import (FinAbGroup, IntegerMatrix, canonical_basis, cokernel_structure,
                                  contains, determinant, extend_to_basis, index,
                                  inverse_unimodular, is_unimodular, kernel_basis,
                                  lattice_intersection, lattice_sum, quotient_structure, rank,
                                  same_lattice, saturate, smith_normal_form, solve_integer)

from oracles import invariant_factors_oracle, minor_det, rank_q


def matrices(max_rows=4, max_cols=4, bound=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c),
                               min_size=r, max_size=r))).map(IntegerMatrix)


def square_matrices(max_n=4, bound=6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n),
                           min_size=n, max_size=n)).map(IntegerMatrix)


# ---------------------------------------------------------------- examples

def test_snf_diag_2_3():
    snf = smith_normal_form(IntegerMatrix([[2, 0], [0, 3]]))
    assert snf.D == IntegerMatrix.diagonal([1, 6])
    assert invariant_factors_oracle([[2, 0], [0, 3]]) == [1, 6]


def test_snf_zero_matrix():
    snf = smith_normal_form(IntegerMatrix.zeros(2, 2))
    assert snf.D == IntegerMatrix.zeros(2, 2)
    assert snf.U == IntegerMatrix.identity(2)
    assert snf.V == IntegerMatrix.identity(2)


def test_snf_cubic_gram():
    snf = smith_normal_form(IntegerMatrix([[1, 4], [4, 1]]))
    assert snf.D == IntegerMatrix.diagonal([1, 15])
    assert invariant_factors_oracle([[1, 4], [4, 1]]) == [1, 15]


def test_kernel_examples():
    assert kernel_basis(IntegerMatrix([[1, 1], [1, 1]])).columns() in ([(1, -1)], [(-1, 1)])
    assert kernel_basis(IntegerMatrix.identity(3)).cols == 0
    sigma_minus_1 = IntegerMatrix([[-1, 1], [1, -1]])
    assert kernel_basis(sigma_minus_1).columns() == [(1, 1)]


def test_cokernel_examples():
    assert cokernel_structure(IntegerMatrix.diagonal([2, 3])) == FinAbGroup(0, (6,))
    assert cokernel_structure(IntegerMatrix.identity(3)).is_trivial()
    assert str(cokernel_structure(IntegerMatrix([[1, 4], [4, 1]]))) == "Z/15"


def test_saturate_examples():
    assert saturate(IntegerMatrix([[2], [0]])).columns() == [(1, 0)]
    assert same_lattice(saturate(IntegerMatrix([[1, 1], [1, -1]])), IntegerMatrix.identity(2))
    B = IntegerMatrix([[1], [2]])
    assert saturate(B) == saturate(saturate(B))


def test_saturate_rejects_dependent_columns():
    with pytest.raises(ValueError, match="rank deficiency"):
        saturate(IntegerMatrix([[1, 2], [1, 2]]))


def test_solve_examples():
    assert solve_integer(IntegerMatrix.identity(3), [4, -1, 7]) == (4, -1, 7)
    assert solve_integer(IntegerMatrix([[2]]), [1]) is None
    assert solve_integer(IntegerMatrix([[1, 4], [4, 1]]), [5, 5]) == (1, 1)


def test_fin_ab_group_validation_and_str():
    with pytest.raises(ValueError):
        FinAbGroup(0, (4, 2))
    assert FinAbGroup.from_moduli([2, 3, 0]) == FinAbGroup(1, (6,))
    assert str(FinAbGroup(2, (2, 6))) == "Z/2 ⊕ Z/6 ⊕ Z^2"
    assert str(FinAbGroup()) == "0"
    assert FinAbGroup.elementary_2(3).order == 8
    assert FinAbGroup(1).order is None


def test_matrix_serialization_round_trip():
    A = IntegerMatrix([[1, -2, 3], [10 ** 30, 0, -1]])
    d = A.to_dict()
    assert d == {"rows": 2, "cols": 3, "entries": [[1, -2, 3], [10 ** 30, 0, -1]]}
    assert IntegerMatrix.from_dict(d) == A


def test_big_integers_do_not_overflow():
    A = IntegerMatrix([[10 ** 40, 1], [1, 10 ** 40 + 1]])
    snf = smith_normal_form(A)
    assert snf.U @ A @ snf.V == snf.D
    assert snf.diagonal[-1] == abs(determinant(A))


def test_extend_to_basis_keeps_columns():
    B = IntegerMatrix([[1], [2], [3]])
    C = extend_to_basis(B)
    assert C.column(0) == (1, 2, 3)
    assert is_unimodular(C)


# ---------------------------------------------------------------- properties

@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_reconstructs_and_is_normalized(A):
    snf = smith_normal_form(A)
    assert snf.U @ A @ snf.V == snf.D
    assert abs(determinant(snf.U)) == 1 and abs(determinant(snf.V)) == 1
    diag = snf.diagonal
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert nz == invariant_factors_oracle(A.tolist())
    assert smith_normal_form(A) == snf


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_kernel_properties(A):
    K = kernel_basis(A)
    assert (A @ K).is_zero() if K.cols else True
    assert K.cols + rank(A) == A.cols
    assert K.cols == A.cols - rank_q(A.tolist())
    if K.cols:
        # saturated: the quotient Z^n / K is torsion free
        assert cokernel_structure(K).invariant_factors == ()


@settings(max_examples=150, deadline=None)
@given(square_matrices())
def test_cokernel_order_is_abs_det(A):
    d = determinant(A)
    assert d == minor_det(A.tolist())
    G = cokernel_structure(A)
    if d:
        assert G.order == abs(d)
    else:
        assert G.free_rank > 0


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=4, max_cols=3))
def test_saturation_properties(B):
    B = canonical_basis(B)
    if B.cols == 0:
        return
    S = saturate(B)
    assert S.cols == B.cols
    assert same_lattice(saturate(S), S)
    assert cokernel_structure(S).invariant_factors == ()
    assert same_lattice(lattice_sum(S, B), S)      # B lies inside its saturation


@settings(max_examples=150, deadline=None)
@given(matrices(), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_integer_consistent(A, x):
    x = x[:A.cols]
    b = A @ x
    sol = solve_integer(A, b)
    assert sol is not None and A @ sol == b


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=3, max_cols=3), matrices(max_rows=3, max_cols=3))
def test_sum_and_intersection(A, B):
    if A.rows != B.rows:
        return
    S = lattice_sum(A, B)
    I = lattice_intersection(A, B)
    if I.cols:
        assert contains(A, I) and contains(B, I)
    assert contains(S, A) and contains(S, B)
    assert rank(S) + rank(I) == rank(A) + rank(B)


@settings(max_examples=100, deadline=None)
@given(square_matrices(max_n=3, bound=4))
def test_index_matches_determinant(A):
    d = determinant(A)
    if d == 0:
        return
    assert index(IntegerMatrix.identity(A.rows), A) == abs(d)
    assert quotient_structure(IntegerMatrix.identity(A.rows), A) == cokernel_structure(A)


def test_inverse_unimodular():
    U = IntegerMatrix([[2, 1], [1, 1]])
    assert U @ inverse_unimodular(U) == IntegerMatrix.identity(2)
    with pytest.raises(ValueError):
        inverse_unimodular(IntegerMatrix([[2, 0], [0, 1]]))
