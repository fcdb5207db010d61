"""Split vector bundles on P^1, given by their splitting type."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable


@dataclass(frozen=True)
class SplitBundle:
    """``O(d_1) + ... + O(d_r)``; degrees are kept sorted in decreasing order."""
    degrees: tuple

    def __init__(self, degrees: Iterable[int]):
        degs = tuple(sorted((int(d) for d in degrees), reverse=True))
        if not degs:
            raise ValueError("a split bundle needs at least one summand")
        object.__setattr__(self, "degrees", degs)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def degree(self) -> int:
        return sum(self.degrees)

    def ascending(self) -> tuple:
        return tuple(sorted(self.degrees))

    def __str__(self):
        return " ⊕ ".join(f"O({d})" if d else "O" for d in self.ascending())


def dual(E: SplitBundle) -> SplitBundle:
    return SplitBundle(-d for d in E.degrees)


def tensor(E: SplitBundle, F: SplitBundle) -> SplitBundle:
    return SplitBundle(a + b for a in E.degrees for b in F.degrees)


def twist(E: SplitBundle, k: int) -> SplitBundle:
    return SplitBundle(d + k for d in E.degrees)


def sym(E: SplitBundle, m: int) -> SplitBundle:
    """Symmetric power: one summand per degree-``m`` monomial in the summands."""
    if m < 0:
        raise ValueError("symmetric power needs m >= 0")
    return SplitBundle(sum(c) for c in combinations_with_replacement(E.degrees, m))


def h0(E: SplitBundle) -> int:
    return sum(max(0, d + 1) for d in E.degrees)


def h1(E: SplitBundle) -> int:
    return sum(max(0, -d - 1) for d in E.degrees)


def euler_characteristic(E: SplitBundle) -> int:
    return sum(d + 1 for d in E.degrees)


def pushforward(E: SplitBundle, m: int, k: int) -> SplitBundle:
    """Direct image of ``O(m xi + k f)`` from ``P(E)`` to the line.

    ``P(E)`` parameterizes lines in the fibres of ``E``, so the relative
    hyperplane bundle pushes forward to the dual: ``pi_* O(m xi) = Sym^m E*``.
    """
    return twist(sym(dual(E), m), k)


def projective_bundle_h0(E: SplitBundle, m: int, k: int) -> int:
    return h0(pushforward(E, m, k))
