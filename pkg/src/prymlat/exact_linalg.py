"""Exact integer linear algebra.

Everything here works with Python ints, so intermediate blow-up in the
normal-form algorithms is never a concern.  Sublattices of ``Z^n`` are
passed around as :class:`IntegerMatrix` objects whose *columns* are the
generators; results are always returned in the canonical echelon basis
produced by :func:`canonical_basis`, so equal lattices give equal matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, Optional, Sequence


class IntegerMatrix:
    """Immutable dense matrix with arbitrary-precision integer entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[int]], rows: Optional[int] = None,
                 cols: Optional[int] = None):
        data = tuple(tuple(map(int, row)) for row in entries)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError(f"entry count does not match shape {rows}x{cols}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", data)

    def __setattr__(self, name, value):
        raise AttributeError("IntegerMatrix is immutable")

    @classmethod
    def _trusted(cls, data, rows: int, cols: int) -> "IntegerMatrix":
        """Wrap rows already known to be int lists of the right shape."""
        self = object.__new__(cls)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", tuple(tuple(r) for r in data))
        return self

    # construction -----------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diagonal(cls, diag: Sequence[int]) -> "IntegerMatrix":
        n = len(diag)
        return cls([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: Optional[int] = None
                     ) -> "IntegerMatrix":
        columns = [list(c) for c in columns]
        if rows is None:
            if not columns:
                raise ValueError("row count needed for a matrix with no columns")
            rows = len(columns[0])
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    @classmethod
    def block_diagonal(cls, blocks: Sequence["IntegerMatrix"]) -> "IntegerMatrix":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [[0] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r0 + i][c0 + j] = b.entries[i][j]
            r0 += b.rows
            c0 += b.cols
        return cls(out, n, m)

    # serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [list(r) for r in self.entries]}

    @classmethod
    def from_dict(cls, data: dict) -> "IntegerMatrix":
        rows, cols = int(data["rows"]), int(data["cols"])
        entries = data["entries"]
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError(f"entry count does not match shape {rows}x{cols}")
        return cls(entries, rows, cols)

    def tolist(self) -> list:
        return [list(r) for r in self.entries]

    # access -----------------------------------------------------------
    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list:
        return list(zip(*self.entries)) if self.rows else [()] * self.cols

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def select_columns(self, idx: Iterable[int]) -> "IntegerMatrix":
        idx = list(idx)
        return IntegerMatrix._trusted([[row[j] for j in idx] for row in self.entries], self.rows,
                                      len(idx))

    def select_rows(self, idx: Iterable[int]) -> "IntegerMatrix":
        idx = list(idx)
        return IntegerMatrix._trusted([self.entries[i] for i in idx], len(idx), self.cols)

    def hstack(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        return IntegerMatrix([a + b for a, b in zip(self.entries, other.entries)],
                             self.rows, self.cols + other.cols)

    # arithmetic -------------------------------------------------------
    @property
    def T(self) -> "IntegerMatrix":
        data = list(zip(*self.entries)) if self.rows else [()] * self.cols
        return IntegerMatrix._trusted(data, self.cols, self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntegerMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.columns()
            out = []
            for row in self.entries:
                nz = [(k, a) for k, a in enumerate(row) if a]
                out.append([sum(a * c[k] for k, a in nz) for c in ocols])
            return IntegerMatrix._trusted(out, self.rows, other.cols)
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.entries)

    def _zip(self, other, op) -> "IntegerMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntegerMatrix([[op(a, b) for a, b in zip(r, s)]
                              for r, s in zip(self.entries, other.entries)], self.rows, self.cols)

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, k: int) -> "IntegerMatrix":
        return IntegerMatrix([[k * a for a in r] for r in self.entries], self.rows, self.cols)

    def __rmul__(self, k: int):
        return self.scale(k)

    def __eq__(self, other):
        return isinstance(other, IntegerMatrix) and self.shape == other.shape \
            and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"IntegerMatrix({self.tolist()!r})" if self.rows else \
            f"IntegerMatrix.zeros(0, {self.cols})"

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.entries for a in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(self.entries[i][j] == self.entries[j][i]
                                        for i in range(self.rows) for j in range(i))

    def det(self) -> int:
        return determinant(self)


def as_matrix(a) -> IntegerMatrix:
    return a if isinstance(a, IntegerMatrix) else IntegerMatrix(a)


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U, V`` unimodular and ``D`` in Smith form."""
    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix

    @property
    def diagonal(self) -> tuple:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


@dataclass(frozen=True)
class FinAbGroup:
    """Finitely generated abelian group ``Z^free_rank + Z/d_1 + ... + Z/d_k``.

    ``invariant_factors`` are all >= 2 with ``d_1 | d_2 | ... | d_k``.
    """
    free_rank: int = 0
    invariant_factors: tuple = ()

    def __post_init__(self):
        facs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", facs)
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        if any(d < 2 for d in facs):
            raise ValueError(f"invariant factors must be >= 2: {facs}")
        if any(b % a for a, b in zip(facs, facs[1:])):
            raise ValueError(f"invariant factors must form a divisibility chain: {facs}")

    @classmethod
    def from_moduli(cls, moduli: Iterable[int]) -> "FinAbGroup":
        """Normalize ``Z/m_1 + Z/m_2 + ...`` (modulus 0 meaning ``Z``)."""
        moduli = [abs(int(m)) for m in moduli]
        if not moduli:
            return cls()
        return cokernel_structure(IntegerMatrix.diagonal(moduli))

    @classmethod
    def elementary_2(cls, k: int) -> "FinAbGroup":
        return cls(0, (2,) * k)

    @property
    def order(self) -> Optional[int]:
        """Group order, or ``None`` when the group is infinite."""
        return prod(self.invariant_factors) if self.free_rank == 0 else None

    @property
    def exponent(self) -> Optional[int]:
        if self.free_rank:
            return None
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def p_rank(self, p: int) -> int:
        """Number of cyclic factors of order divisible by the prime ``p``."""
        return sum(1 for d in self.invariant_factors if d % p == 0)

    def direct_sum(self, other: "FinAbGroup") -> "FinAbGroup":
        return FinAbGroup.from_moduli(list(self.invariant_factors) + list(other.invariant_factors)
                                      + [0] * (self.free_rank + other.free_rank))

    def __add__(self, other):
        return self.direct_sum(other)

    def moduli(self) -> tuple:
        return self.invariant_factors + (0,) * self.free_rank

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "invariant_factors": list(self.invariant_factors)}

    def __str__(self):
        if self.is_trivial():
            return "0"
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " ⊕ ".join(parts)


# ---------------------------------------------------------------------------
# normal forms

def _mat(a) -> list:
    return [list(r) for r in as_matrix(a).entries]


def smith_normal_form(A) -> SmithDecomposition:
    """Smith normal form with transforms, ``U @ A @ V == D``.

    Pivot choice is the entry of smallest nonzero magnitude in the active
    block, ties broken by lowest row then lowest column, so the output is a
    deterministic function of ``A``.
    """
    A = as_matrix(A)
    m, n = A.shape
    D = _mat(A)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q:
            D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        if q:
            for row in D:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]

    def pivot_in(t):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = D[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        return best
        return best

    for t in range(min(m, n)):
        best = pivot_in(t)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remaining entry of row/column t to the pivot
                cands = [(abs(D[i][t]), 0, i) for i in range(t + 1, m) if D[i][t]]
                cands += [(abs(D[t][j]), 1, j) for j in range(t + 1, n) if D[t][j]]
                size, kind, k = min(cands)
                if size < abs(D[t][t]):
                    if kind == 0:
                        swap_rows(t, k)
                    else:
                        swap_cols(t, k)
                continue
            p = D[t][t]
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    return SmithDecomposition(IntegerMatrix._trusted(U, m, m), IntegerMatrix._trusted(D, m, n),
                              IntegerMatrix._trusted(V, n, n))


def _xgcd(a: int, b: int) -> tuple:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hermite_rows(rows: Sequence[Sequence[int]], ncols: Optional[int] = None,
                 transform: bool = False):
    """Row-style Hermite normal form of the row span.

    Returns the nonzero HNF rows (pivots positive, entries above a pivot
    reduced into ``[0, pivot)``).  With ``transform=True`` also returns the
    unimodular ``T`` with ``T @ rows == H`` (zero rows included at the bottom).
    """
    H = [list(r) for r in rows]
    k = len(H)
    if ncols is None:
        ncols = len(H[0]) if H else 0
    T = [[int(i == j) for j in range(k)] for i in range(k)]
    r = 0
    for c in range(ncols):
        if r == k:
            break
        for i in range(r + 1, k):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, x, y = _xgcd(a, b)
            u, v = a // g, b // g
            H[r], H[i] = ([x * p + y * q for p, q in zip(H[r], H[i])],
                          [u * q - v * p for p, q in zip(H[r], H[i])])
            T[r], T[i] = ([x * p + y * q for p, q in zip(T[r], T[i])],
                          [u * q - v * p for p, q in zip(T[r], T[i])])
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
            T[r] = [-a for a in T[r]]
        p = H[r][c]
        for i in range(r):
            q = H[i][c] // p
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                T[i] = [a - q * b for a, b in zip(T[i], T[r])]
        r += 1
    nonzero = H[:r]
    if transform:
        return nonzero, T
    return nonzero


def canonical_basis(A, rows: Optional[int] = None) -> IntegerMatrix:
    """Canonical basis (as columns) of the lattice spanned by the columns of ``A``."""
    A = as_matrix(A)
    n = A.rows if rows is None else rows
    H = hermite_rows(A.T.tolist(), n)
    return IntegerMatrix.from_columns(H, n) if H else IntegerMatrix.zeros(n, 0)


# ---------------------------------------------------------------------------
# derived operations

def determinant(A) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    A = as_matrix(A)
    if not A.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = A.rows
    if n == 0:
        return 1
    M = _mat(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank(A) -> int:
    return len(hermite_rows(as_matrix(A).tolist()))


def kernel_basis(A) -> IntegerMatrix:
    """Canonical basis (columns) of ``{x in Z^cols : A x = 0}``; always saturated."""
    A = as_matrix(A)
    m, n = A.shape
    aug = [list(A.column(j)) + [int(i == j) for i in range(n)] for j in range(n)]
    # the identity block keeps all n rows; those whose A-part vanishes span the kernel
    H = hermite_rows(aug, m + n)
    kern = [row[m:] for row in H if all(x == 0 for x in row[:m])]
    if not kern:
        return IntegerMatrix.zeros(n, 0)
    return canonical_basis(IntegerMatrix.from_columns(kern, n))


def cokernel_structure(A) -> FinAbGroup:
    """Isomorphism type of ``Z^rows / (column span of A)``."""
    A = as_matrix(A)
    snf = smith_normal_form(A)
    diag = [d for d in snf.diagonal if d != 0]
    return FinAbGroup(A.rows - len(diag), tuple(d for d in diag if d != 1))


def saturate(B) -> IntegerMatrix:
    """Canonical basis of the primitive closure ``(span B ⊗ Q) ∩ Z^n``.

    Raises ``ValueError`` when the columns of ``B`` are dependent.
    """
    B = as_matrix(B)
    if rank(B.T) != B.cols:
        raise ValueError(f"rank deficiency: {B.cols} columns span rank {rank(B.T)}")
    if B.cols == 0:
        return IntegerMatrix.zeros(B.rows, 0)
    Y = kernel_basis(B.T)
    if Y.cols == 0:
        return IntegerMatrix.identity(B.rows)
    return kernel_basis(Y.T)


def solve_integer(A, b: Sequence[int]) -> Optional[tuple]:
    """Some integer ``x`` with ``A x == b``, or ``None`` if there is none."""
    A = as_matrix(A)
    b = list(b)
    if len(b) != A.rows:
        raise ValueError("right-hand side length mismatch")
    snf = smith_normal_form(A)
    c = snf.U @ b
    diag = snf.diagonal
    y = [0] * A.cols
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ci != 0:
                return None
        else:
            if ci % d:
                return None
            y[i] = ci // d
    return tuple(snf.V @ y)


def inverse(A) -> list:
    """Exact inverse as a list of lists of ``Fraction``."""
    A = as_matrix(A)
    if not A.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = A.rows
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A.entries)]
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            raise ValueError("singular matrix")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return [row[n:] for row in M]


def inverse_unimodular(U) -> IntegerMatrix:
    """Integer inverse; the row HNF of a unimodular matrix is the identity."""
    U = as_matrix(U)
    n = U.rows
    if not U.is_square():
        raise ValueError("matrix is not unimodular")
    if n == 0:
        return U
    H, T = hermite_rows(U.entries, n, transform=True)
    if len(H) != n or any(H[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    return IntegerMatrix(T, n, n)


def is_unimodular(U) -> bool:
    U = as_matrix(U)
    return U.is_square() and abs(determinant(U)) == 1


# ---------------------------------------------------------------------------
# sublattices of Z^n, given by generating columns

def lattice_sum(*mats: IntegerMatrix) -> IntegerMatrix:
    n = mats[0].rows
    cols = [c for m in mats for c in m.columns()]
    if not cols:
        return IntegerMatrix.zeros(n, 0)
    return canonical_basis(IntegerMatrix.from_columns(cols, n))


def lattice_intersection(A: IntegerMatrix, B: IntegerMatrix) -> IntegerMatrix:
    A, B = canonical_basis(A), canonical_basis(B)
    n = A.rows
    if A.cols == 0 or B.cols == 0:
        return IntegerMatrix.zeros(n, 0)
    K = kernel_basis(A.hstack(-B))
    if K.cols == 0:
        return IntegerMatrix.zeros(n, 0)
    return canonical_basis(A @ K.select_rows(range(A.cols)))


def coordinates(basis: IntegerMatrix, vectors: IntegerMatrix) -> IntegerMatrix:
    """Integer coordinates of the columns of ``vectors`` in ``basis``.

    ``basis`` must have independent columns; raises ``ValueError`` when some
    vector is not in the lattice they span.
    """
    out = []
    for v in vectors.columns():
        x = solve_integer(basis, v)
        if x is None:
            raise ValueError(f"vector {v} is not in the lattice")
        out.append(x)
    if not out:
        return IntegerMatrix.zeros(basis.cols, 0)
    return IntegerMatrix.from_columns(out, basis.cols)


def contains(basis: IntegerMatrix, vectors: IntegerMatrix) -> bool:
    return all(solve_integer(basis, v) is not None for v in vectors.columns())


def same_lattice(A: IntegerMatrix, B: IntegerMatrix) -> bool:
    return canonical_basis(A) == canonical_basis(B)


def quotient_structure(big: IntegerMatrix, small: IntegerMatrix) -> FinAbGroup:
    """Isomorphism type of ``span(big) / span(small)`` (``small`` inside ``big``)."""
    big = canonical_basis(big)
    if small.cols == 0:
        return FinAbGroup(big.cols)
    return cokernel_structure(coordinates(big, small))


def index(big: IntegerMatrix, small: IntegerMatrix) -> int:
    """Finite index ``[big : small]``; raises if the quotient is infinite."""
    q = quotient_structure(big, small)
    if not q.is_finite():
        raise ValueError("sublattice has smaller rank")
    return q.order


def extend_to_basis(B: IntegerMatrix) -> IntegerMatrix:
    """Unimodular matrix whose first columns span the same lattice as ``B``.

    ``B`` must have independent columns spanning a saturated sublattice; the
    first ``B.cols`` columns of the result are exactly the columns of ``B``.
    """
    n, k = B.shape
    if k == 0:
        return IntegerMatrix.identity(n)
    snf = smith_normal_form(B)
    if snf.diagonal != (1,) * k:
        raise ValueError("columns do not span a saturated sublattice of full column rank")
    C = inverse_unimodular(snf.U)
    rest = C.select_columns(range(k, n))
    return B.hstack(rest) if rest.cols else B
