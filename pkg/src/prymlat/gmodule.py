"""Modules over Z[G] for the group G = {1, sigma} of order two.

Free modules carry an integer involution matrix.  Finite (or mixed) modules
are presented as ``Z^m / diag(d_1, ..., d_m)`` on SNF generators with the
involution acting on those generators.  Both are handled by the same
lattice-level routines: a subgroup of ``Z^m / R`` is the lattice between
``R`` and ``Z^m`` that projects onto it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .exact_linalg import (FinAbGroup, IntegerMatrix, as_matrix, canonical_basis,
                           coordinates, extend_to_basis, inverse_unimodular, kernel_basis,
                           lattice_intersection, lattice_sum, quotient_structure,
                           same_lattice, smith_normal_form)

SWAP = IntegerMatrix([[0, 1], [1, 0]])


class InvolutionError(ValueError):
    """Raised when a matrix that should be an involution is not one."""


@dataclass(frozen=True)
class FreeGModule:
    """``Z^rank`` with the action of ``sigma`` (an integer involution)."""
    sigma: IntegerMatrix

    def __post_init__(self):
        s = as_matrix(self.sigma)
        object.__setattr__(self, "sigma", s)
        if not s.is_square():
            raise InvolutionError("sigma must be square")
        if s @ s != IntegerMatrix.identity(s.rows):
            raise InvolutionError("sigma is not an involution (sigma^2 != 1)")

    @property
    def rank(self) -> int:
        return self.sigma.rows

    def to_dict(self) -> dict:
        return {"rank": self.rank, "sigma": self.sigma.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "FreeGModule":
        sigma = IntegerMatrix(data["sigma"]) if data["sigma"] else IntegerMatrix.zeros(0, 0)
        if "rank" in data and int(data["rank"]) != sigma.rows:
            raise ValueError("rank does not match sigma")
        return cls(sigma)

    def restrict(self, basis: IntegerMatrix) -> "FreeGModule":
        """The submodule spanned by the (sigma-stable) columns of ``basis``."""
        return FreeGModule(restricted_action(self.sigma, basis))


@dataclass(frozen=True)
class FiniteGModule:
    """A finitely generated abelian group (on its SNF generators) with an involution.

    ``sigma_action`` is the integer matrix of the action on the standard
    generators; column ``j`` is the image of generator ``j``.  Entries are
    only meaningful modulo the order of the generator of their row.
    """
    group: FinAbGroup
    sigma_action: IntegerMatrix

    def __post_init__(self):
        s = as_matrix(self.sigma_action)
        object.__setattr__(self, "sigma_action", s)
        mods = self.moduli
        m = len(mods)
        if s.shape != (m, m):
            raise ValueError(f"action must be {m}x{m} on the group generators")
        # well defined: d_j * (image of generator j) must vanish
        for j, dj in enumerate(mods):
            for i, di in enumerate(mods):
                if not _vanishes(dj * s[i, j], di):
                    raise ValueError("action is not well defined modulo the relations")
        sq = s @ s
        for j in range(m):
            for i, di in enumerate(mods):
                if not _vanishes(sq[i, j] - int(i == j), di):
                    raise InvolutionError("action squared is not the identity")

    @property
    def moduli(self) -> tuple:
        return self.group.moduli()

    def relations(self) -> IntegerMatrix:
        return _relations(self.moduli)

    def reduce(self, vec) -> tuple:
        return tuple(x % d if d else x for x, d in zip(vec, self.moduli))

    def to_dict(self) -> dict:
        return {"group": self.group.to_dict(), "sigma": self.sigma_action.tolist()}


def _vanishes(x: int, d: int) -> bool:
    return x == 0 if d == 0 else x % d == 0


def _relations(moduli) -> IntegerMatrix:
    m = len(moduli)
    cols = [[d if i == j else 0 for i in range(m)] for j, d in enumerate(moduli) if d]
    return IntegerMatrix.from_columns(cols, m) if cols else IntegerMatrix.zeros(m, 0)


def restricted_action(sigma: IntegerMatrix, basis: IntegerMatrix) -> IntegerMatrix:
    """Matrix of ``sigma`` on the sigma-stable lattice spanned by ``basis``."""
    if basis.cols == 0:
        return IntegerMatrix.zeros(0, 0)
    try:
        return coordinates(basis, sigma @ basis)
    except ValueError:
        raise ValueError("sublattice is not sigma-stable") from None


def is_stable(sigma: IntegerMatrix, basis: IntegerMatrix) -> bool:
    try:
        restricted_action(sigma, basis)
    except ValueError:
        return False
    return True


# ---------------------------------------------------------------------------
# subgroup calculus on Z^m / R

def _module_data(M) -> tuple:
    if isinstance(M, FreeGModule):
        return M.sigma, (0,) * M.rank
    if isinstance(M, FiniteGModule):
        return M.sigma_action, M.moduli
    raise TypeError(f"expected a G-module, got {type(M).__name__}")


def _kernel_lattice(F: IntegerMatrix, moduli) -> IntegerMatrix:
    """Lattice of ``x`` with ``F x`` in the relation lattice."""
    m = F.cols
    R = _relations(moduli)
    K = kernel_basis(F.hstack(-R) if R.cols else F)
    if K.cols == 0:
        return IntegerMatrix.zeros(m, 0)
    return canonical_basis(K.select_rows(range(m)))


def _image_lattice(F: IntegerMatrix, moduli) -> IntegerMatrix:
    return lattice_sum(F, _relations(moduli))


def _subquotient(top: IntegerMatrix, bottom: IntegerMatrix) -> FinAbGroup:
    return quotient_structure(top, bottom)


def _plus(s: IntegerMatrix) -> IntegerMatrix:
    return s + IntegerMatrix.identity(s.rows)


def _minus(s: IntegerMatrix) -> IntegerMatrix:
    return s - IntegerMatrix.identity(s.rows)


def group_cohomology(M: Union[FreeGModule, FiniteGModule], degree: int) -> FinAbGroup:
    """``H^i(G, M)`` from the two-periodic resolution of the cyclic group of order 2."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    s, mods = _module_data(M)
    if degree == 0:
        top, bottom = _kernel_lattice(_minus(s), mods), _relations(mods)
    elif degree % 2:
        top = _kernel_lattice(_plus(s), mods)
        bottom = _image_lattice(_minus(s), mods)
    else:
        top = _kernel_lattice(_minus(s), mods)
        bottom = _image_lattice(_plus(s), mods)
    return _subquotient(top, bottom)


def invariants(M: FreeGModule) -> IntegerMatrix:
    """Canonical saturated basis of ``ker(sigma - 1)``."""
    return kernel_basis(_minus(M.sigma))


def anti_invariants(M: FreeGModule) -> IntegerMatrix:
    """Canonical saturated basis of ``ker(sigma + 1)``."""
    return kernel_basis(_plus(M.sigma))


def prym_part(M: FreeGModule) -> IntegerMatrix:
    """Canonical basis of the image ``(sigma - 1) M``."""
    return canonical_basis(_minus(M.sigma))


def subgroup_structure(M: FiniteGModule, generators: IntegerMatrix) -> FinAbGroup:
    """Isomorphism type of the subgroup generated by the given columns."""
    R = M.relations()
    return _subquotient(lattice_sum(generators, R), R)


def plus_minus_parts(M: FiniteGModule) -> tuple:
    """``(M^{sigma=1}, M^{sigma=-1})`` as abstract groups."""
    s, mods = M.sigma_action, M.moduli
    R = _relations(mods)
    return (_subquotient(_kernel_lattice(_minus(s), mods), R),
            _subquotient(_kernel_lattice(_plus(s), mods), R))


def quotient_module(big: IntegerMatrix, small: IntegerMatrix, sigma: IntegerMatrix
                    ) -> tuple:
    """G-module structure on ``span(big) / span(small)``.

    Both lattices must be sigma-stable and ``small`` inside ``big``.  Returns
    ``(module, to_generators)`` where ``to_generators`` maps an ambient vector
    of ``span(big)`` to its coordinates on the module's generators.
    """
    big = canonical_basis(big)
    k = big.cols
    S = restricted_action(sigma, big)
    Rc = coordinates(big, small) if small.cols else IntegerMatrix.zeros(k, 0)
    if Rc.cols == 0:
        Rc = IntegerMatrix.zeros(k, 1)
    snf = smith_normal_form(Rc)
    diag = list(snf.diagonal) + [0] * (k - len(snf.diagonal))
    keep = [i for i, d in enumerate(diag) if d != 1]
    U, Uinv = snf.U, inverse_unimodular(snf.U)
    action = (U @ S @ Uinv).select_rows(keep).select_columns(keep)
    # generators ordered as the FinAbGroup stores them: torsion first, then free
    order = sorted(keep, key=lambda i: (diag[i] == 0, i))
    pos = [keep.index(i) for i in order]
    action = action.select_rows(pos).select_columns(pos)
    mods = [diag[i] for i in order]
    group = FinAbGroup(sum(1 for d in mods if d == 0), tuple(d for d in mods if d))
    red = [[(a % d if d else a) for a, d in zip(col, mods)] for col in action.columns()]
    action = IntegerMatrix.from_columns(red, len(mods)) if red else IntegerMatrix.zeros(0, 0)
    module = FiniteGModule(group, action)

    def to_generators(v) -> tuple:
        c = coordinates(big, IntegerMatrix.from_columns([list(v)], big.rows)).column(0)
        y = U @ c
        return module.reduce([y[i] for i in order])

    return module, to_generators


# ---------------------------------------------------------------------------
# canonical decomposition

@dataclass(frozen=True)
class GModuleDecomposition:
    """``Z[G]^r0 + Z_+^r_plus + Z_-^r_minus`` with an adapted unimodular basis.

    In the basis given by the columns of ``adapted_basis`` the involution is
    block diagonal: ``r0`` swap blocks, then ``r_plus`` entries +1, then
    ``r_minus`` entries -1.
    """
    r0: int
    r_plus: int
    r_minus: int
    adapted_basis: IntegerMatrix

    @property
    def rank(self) -> int:
        return 2 * self.r0 + self.r_plus + self.r_minus

    def block_form(self) -> IntegerMatrix:
        return canonical_block(self.r0, self.r_plus, self.r_minus)

    def __str__(self):
        return decomposition_string(self.r0, self.r_plus, self.r_minus)

    def to_dict(self) -> dict:
        return {"r0": self.r0, "r_plus": self.r_plus, "r_minus": self.r_minus,
                "decomposition": str(self), "adapted_basis": self.adapted_basis.tolist()}


def canonical_block(r0: int, r_plus: int, r_minus: int) -> IntegerMatrix:
    blocks = [SWAP] * r0 + [IntegerMatrix([[1]])] * r_plus + [IntegerMatrix([[-1]])] * r_minus
    return IntegerMatrix.block_diagonal(blocks) if blocks else IntegerMatrix.zeros(0, 0)


def decomposition_string(r0: int, r_plus: int, r_minus: int) -> str:
    def term(name, k):
        return name if k == 1 else f"{name}^{k}"
    parts = [term(n, k) for n, k in (("Z[G]", r0), ("Z₊", r_plus), ("Z₋", r_minus)) if k]
    return " ⊕ ".join(parts) if parts else "0"


def decompose(M: FreeGModule) -> GModuleDecomposition:
    """Split a free G-module into regular, trivial and sign summands.

    Each round picks a lift ``q`` of a nonzero class of ``M / (B + P)``
    (``B``, ``P`` the invariant and anti-invariant sublattices) with both
    ``(1 + sigma) q`` and ``(1 - sigma) q`` primitive.  Then ``span(q, sigma q)``
    is a saturated copy of ``Z[G]``; the rest is decomposed recursively and
    lifted back so that the lifts stay sigma-stable.
    """
    basis, r0, rp, rm = _decompose(M.sigma)
    return GModuleDecomposition(r0, rp, rm, basis)


def _decompose(s: IntegerMatrix) -> tuple:
    n = s.rows
    if n == 0:
        return IntegerMatrix.zeros(0, 0), 0, 0, 0
    B = kernel_basis(_minus(s))
    P = kernel_basis(_plus(s))
    if B.cols + P.cols == n and same_lattice(lattice_sum(B, P), IntegerMatrix.identity(n)):
        basis = B.hstack(P) if B.cols and P.cols else (B if B.cols else P)
        return basis, 0, B.cols, P.cols
    q = _regular_generator(s, B, P)
    R = IntegerMatrix.from_columns([q, s @ q], n)
    C = extend_to_basis(R)
    Cinv = inverse_unimodular(C)
    t = Cinv @ s @ C  # [[SWAP, X], [0, rest]]
    rest = t.select_rows(range(2, n)).select_columns(range(2, n))
    X = t.select_rows(range(2)).select_columns(range(2, n))
    sub, r0, rp, rm = _decompose(rest)
    lifted = []  # in C-coordinates
    j = 0
    while j < sub.cols:
        ybar = sub.column(j)
        y = [0, 0] + list(ybar)
        if j < 2 * r0:
            lifted.append(y)
            lifted.append(list(t @ y))
            j += 2
            continue
        a, b = X @ ybar
        if j < 2 * r0 + rp:
            # sigma y - y = (a, b) in the swap block, anti-invariant, so b == -a
            y[0] += a
        else:
            # sigma y + y = (a, b), invariant, so b == a
            y[0] -= a
        lifted.append(y)
        j += 1
    cols = [[1, 0] + [0] * (n - 2), [0, 1] + [0] * (n - 2)] + lifted
    adapted = C @ IntegerMatrix.from_columns(cols, n)
    return adapted, r0 + 1, rp, rm


def _regular_generator(s: IntegerMatrix, B: IntegerMatrix, P: IntegerMatrix) -> tuple:
    n = s.rows
    # M / P is free with trivial action and contains B with 2-elementary quotient;
    # an SNF basis of that inclusion gives a class not coming from B.
    Cp = extend_to_basis(P)
    Cpinv = inverse_unimodular(Cp)
    k = P.cols
    proj = Cpinv.select_rows(range(k, n))           # M -> M / P coordinates
    Bimg = proj @ B
    snf = smith_normal_form(Bimg)
    Uinv = inverse_unimodular(snf.U)
    t = next(i for i, d in enumerate(snf.diagonal) if d == 2)
    abar = Uinv.column(t)                            # basis vector of M / P
    q = list(Cp @ ([0] * k + list(abar)))
    # adjust by P so that (1 - sigma) q has entries 0/1 in P-coordinates
    p0 = _minus(s) @ q
    p0 = [-x for x in p0]                           # (1 - sigma) q
    c = coordinates(P, IntegerMatrix.from_columns([p0], n)).column(0)
    shift = [-(ci - ci % 2) // 2 for ci in c]
    q = [a + b for a, b in zip(q, P @ shift)]
    return tuple(q)


# ---------------------------------------------------------------------------
# finite-level tensor with Q/Z

@dataclass(frozen=True)
class TorsionPrymReport:
    level: int
    lift_level: int
    anti_invariant_part: FinAbGroup
    prym_part: FinAbGroup
    naive_image: FinAbGroup
    equal: bool

    def to_dict(self) -> dict:
        return {"level": self.level, "lift_level": self.lift_level,
                "anti_invariants_tensor": str(self.anti_invariant_part),
                "prym_of_tensor": str(self.prym_part),
                "image_at_level_only": str(self.naive_image),
                "verdict": self.equal}


def torsion_prym_check(M: FreeGModule, n: int) -> TorsionPrymReport:
    """Compare ``M^{sigma=-1} ⊗ Q/Z`` with ``(sigma - 1)(M ⊗ Q/Z)`` on ``n``-torsion.

    ``M ⊗ (1/n)Z/Z`` is modeled as ``Z^r / nZ^r``.  The ``n``-torsion of the
    image of ``sigma - 1`` is computed from preimages at level ``2n``; an
    element of order dividing ``n`` in the image always has a preimage of
    order dividing ``2n`` because ``(sigma - 1)`` kills ``ker(sigma - 1)`` only.
    """
    if n < 2:
        raise ValueError("level must be >= 2")
    r = M.rank
    I = IntegerMatrix.identity(r)
    level_n = I.scale(n)
    anti = lattice_sum(anti_invariants(M), level_n)
    # at level 2n, Z^r / 2nZ^r; image of (sigma-1), intersected with its n-torsion,
    # then rescaled by 1/2 into Z^r / nZ^r
    D = _minus(M.sigma)
    img2 = lattice_sum(D, I.scale(2 * n))
    torsion_n = I.scale(2)
    inter = lattice_intersection(img2, torsion_n) if r else IntegerMatrix.zeros(0, 0)
    halved = IntegerMatrix([[x // 2 for x in row] for row in inter.entries], r, inter.cols) \
        if r else inter
    prym = lattice_sum(halved, level_n)
    naive = lattice_sum(D, level_n)
    return TorsionPrymReport(
        level=n, lift_level=2 * n,
        anti_invariant_part=quotient_structure(anti, level_n),
        prym_part=quotient_structure(prym, level_n),
        naive_image=quotient_structure(naive, level_n),
        equal=same_lattice(anti, prym))
