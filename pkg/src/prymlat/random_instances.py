"""Random test instances: involutions, lattices with involution, stable sublattices.

Every generator takes a ``random.Random`` so sweeps are reproducible.
"""

from __future__ import annotations

import random
from typing import Callable, Optional

from .exact_linalg import IntegerMatrix, canonical_basis, inverse_unimodular, rank, saturate
from .gmodule import canonical_block
from .lattice import InvolutionLattice, cohomology_dims

HYPERBOLIC = IntegerMatrix([[0, 1], [1, 0]])


def random_unimodular(n: int, rng: random.Random, steps: Optional[int] = None) -> IntegerMatrix:
    """Product of random elementary operations (small entries, determinant ±1)."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 0:
        return IntegerMatrix.zeros(0, 0)
    for _ in range(steps if steps is not None else 3 * n):
        kind = rng.random()
        i, j = rng.randrange(n), rng.randrange(n)
        if kind < 0.15:
            rows[i], rows[j] = rows[j], rows[i]
        elif kind < 0.25:
            rows[i] = [-x for x in rows[i]]
        elif i != j:
            c = rng.choice((-2, -1, 1, 2))
            rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    return IntegerMatrix(rows, n, n)


def conjugate_sigma(sigma: IntegerMatrix, C: IntegerMatrix) -> IntegerMatrix:
    """``C^-1 sigma C``: the same involution in the basis given by the columns of ``C``."""
    return inverse_unimodular(C) @ sigma @ C


def random_block_involution(r0: int, rp: int, rm: int, rng: random.Random) -> IntegerMatrix:
    block = canonical_block(r0, rp, rm)
    return conjugate_sigma(block, random_unimodular(block.rows, rng))


def change_basis(L: InvolutionLattice, C: IntegerMatrix) -> InvolutionLattice:
    return InvolutionLattice.build(C.T @ L.gram @ C, conjugate_sigma(L.sigma, C))


def surface_type_lattice(r0: int, k: int, mode: str, rng: Optional[random.Random] = None,
                         signs=None) -> InvolutionLattice:
    """Unimodular model of ``H^2`` of a surface with involution.

    ``r0`` hyperbolic planes with sigma swapping the two isotropic vectors,
    followed by ``k`` rank-one summands ``<±1>`` on which sigma acts by
    +1 (``mode == "fixed"``, ``k = r - 2``) or by -1 (``mode == "free"``,
    ``k = 2``).  With ``rng`` the result is written in a random basis.
    """
    eps = 1 if mode == "fixed" else -1
    if signs is None:
        signs = [rng.choice((1, -1)) if rng else 1 for _ in range(k)]
    grams = [HYPERBOLIC] * r0 + [IntegerMatrix([[s]]) for s in signs]
    sigmas = [HYPERBOLIC] * r0 + [IntegerMatrix([[eps]])] * k
    if not grams:
        return InvolutionLattice.build(IntegerMatrix.zeros(0, 0), IntegerMatrix.zeros(0, 0))
    L = InvolutionLattice.build(IntegerMatrix.block_diagonal(grams),
                                IntegerMatrix.block_diagonal(sigmas))
    if rng is not None:
        L = change_basis(L, random_unimodular(L.rank, rng))
    return L


def random_unimodular_involution_lattice(rng: random.Random, max_blocks: int = 4
                                         ) -> InvolutionLattice:
    """Orthogonal sum of unimodular blocks with involution, in a random basis.

    Blocks: hyperbolic plane with swap, ``<±1>`` with sigma = ±1, and
    ``<e> + <e>`` with swap.
    """
    grams, sigmas = [], []
    for _ in range(rng.randint(1, max_blocks)):
        kind = rng.randrange(4)
        if kind == 0:
            grams.append(HYPERBOLIC)
            sigmas.append(HYPERBOLIC)
        elif kind == 1:
            grams.append(IntegerMatrix([[rng.choice((1, -1))]]))
            sigmas.append(IntegerMatrix([[rng.choice((1, -1))]]))
        else:
            e = rng.choice((1, -1))
            grams.append(IntegerMatrix([[e, 0], [0, e]]))
            sigmas.append(HYPERBOLIC)
    L = InvolutionLattice.build(IntegerMatrix.block_diagonal(grams),
                                IntegerMatrix.block_diagonal(sigmas))
    return change_basis(L, random_unimodular(L.rank, rng))


def random_invariant_form(sigma: IntegerMatrix, rng: random.Random, bound: int = 3
                          ) -> IntegerMatrix:
    """``S + sigma^T S sigma`` for a random symmetric ``S``: a sigma-invariant form."""
    n = sigma.rows
    S = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            S[i][j] = S[j][i] = rng.randint(-bound, bound)
    S = IntegerMatrix(S, n, n)
    return S + sigma.T @ S @ sigma


def random_symmetric(n: int, rng: random.Random, bound: int = 5) -> IntegerMatrix:
    S = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            S[i][j] = S[j][i] = rng.randint(-bound, bound)
    return IntegerMatrix(S, n, n)


def random_vector(n: int, rng: random.Random, bound: int = 3) -> list:
    return [rng.randint(-bound, bound) for _ in range(n)]


def random_stable_sublattice(L: InvolutionLattice, rng: random.Random,
                             accept: Callable[[IntegerMatrix], bool] = lambda M: True,
                             max_gens: int = 2, tries: int = 200, bound: int = 2
                             ) -> Optional[IntegerMatrix]:
    """Saturation of ``span(v, sigma v, ...)`` for random ``v``; ``None`` if nothing passes.

    Generators are random vectors together with their images, plus
    occasionally a vector fixed or negated by sigma, so ``H^1`` and ``H^2``
    of the result vary.
    """
    n = L.rank
    for _ in range(tries):
        gens = []
        for _ in range(rng.randint(1, max_gens)):
            v = random_vector(n, rng, bound)
            kind = rng.random()
            if kind < 0.6:
                gens += [v, list(L.sigma @ v)]
            elif kind < 0.8:
                gens.append([a - b for a, b in zip(v, L.sigma @ v)])
            else:
                gens.append([a + b for a, b in zip(v, L.sigma @ v)])
        gens = [g for g in gens if any(g)]
        if not gens:
            continue
        B = IntegerMatrix.from_columns(gens, n)
        r = rank(B)
        if r == 0 or r == n:
            continue
        M = saturate(canonical_basis(B))
        if accept(M):
            return M
    return None


def odd_det_filter(L: InvolutionLattice, mode: Optional[str] = None):
    """Acceptance test: nondegenerate, odd determinant, and the mode's cohomology condition."""
    def accept(M: IntegerMatrix) -> bool:
        d = (M.T @ L.gram @ M).det()
        if d == 0 or d % 2 == 0:
            return False
        if mode is None:
            return True
        a1, a2 = cohomology_dims(L, M)
        return a2 == 0 if mode == "fixed" else a1 == 0
    return accept
