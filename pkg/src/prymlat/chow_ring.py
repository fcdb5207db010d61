"""Chow ring of the Grassmannian bundle G(2, E) over P^3 for a rank-3 bundle E.

The ring is generated by the hyperplane class ``h`` of the base and the
class ``eta`` of the tautological quotient line bundle in
``0 -> V2 -> E -> O(eta) -> 0``.  From ``c(V2)(1 + eta) = c(E)`` and
``rank V2 = 2`` one gets ``eta^3 = g1 h eta^2 - g2 h^2 eta + g3 h^3``; with
``h^4 = 0`` every element has a unique normal form in the monomials
``h^a eta^b`` with ``a <= 3`` and ``b <= 2``.  The degree map sends
``h^3 eta^2`` to 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

Monomial = Tuple[int, int]


@dataclass(frozen=True)
class AmbientData:
    gamma1: int = 0
    gamma2: int = 0
    gamma3: int = 0
    lam: int = 0          # c1(L) = lam * h

    @property
    def gammas(self) -> tuple:
        return (self.gamma1, self.gamma2, self.gamma3)


class Poly:
    """Polynomial in ``h`` and ``eta`` with integer coefficients (not reduced)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Monomial, int] = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls({(0, 0): c})

    @classmethod
    def mono(cls, a: int, b: int, c: int = 1) -> "Poly":
        return cls({(a, b): c})

    def __add__(self, other):
        other = _lift(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        out: Dict[Monomial, int] = {}
        for (a1, b1), v1 in self.terms.items():
            for (a2, b2), v2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, 0) + v1 * v2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def homogeneous(self, degree: int) -> "Poly":
        return Poly({k: v for k, v in self.terms.items() if sum(k) == degree})

    def __repr__(self):
        return f"Poly({format_poly(self)})"


def _lift(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, int):
        return Poly.const(x)
    raise TypeError(f"cannot combine Poly with {type(x).__name__}")


H = Poly.mono(1, 0)
ETA = Poly.mono(0, 1)


@dataclass(frozen=True)
class RingElement:
    """Reduced element: coefficients on ``h^a eta^b`` with ``a <= 3``, ``b <= 2``."""
    coeffs: tuple        # sorted ((a, b), c) pairs with c != 0

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def coefficient(self, a: int, b: int) -> int:
        return self.as_dict().get((a, b), 0)

    def to_poly(self) -> Poly:
        return Poly(self.as_dict())

    def is_zero(self) -> bool:
        return not self.coeffs

    def __str__(self):
        return format_poly(self.to_poly())


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    out = []
    for (a, b), c in sorted(p.terms.items(), key=lambda t: (sum(t[0]), -t[0][0])):
        mono = "*".join(s for s in (_pw("h", a), _pw("eta", b)) if s)
        if mono:
            body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        else:
            body = str(abs(c))
        sign = "-" if c < 0 else "+"
        out.append((sign, body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def _pw(name: str, k: int) -> str:
    return "" if k == 0 else name if k == 1 else f"{name}^{k}"


class ChowRing:
    """Normal forms and the degree map for fixed Chern data of ``E`` and ``L``."""

    def __init__(self, data: AmbientData = AmbientData()):
        self.data = data

    @property
    def h(self) -> Poly:
        return H

    @property
    def eta(self) -> Poly:
        return ETA

    def reduce(self, p) -> RingElement:
        """Rewrite ``h^4 -> 0`` and ``eta^3 -> g1 h eta^2 - g2 h^2 eta + g3 h^3``."""
        g1, g2, g3 = self.data.gammas
        work = dict(_lift(p).terms)
        out: Dict[Monomial, int] = {}
        while work:
            # process the largest eta power first so each rewrite lowers it
            (a, b) = max(work, key=lambda k: (k[1], k[0]))
            c = work.pop((a, b))
            if c == 0 or a > 3:
                continue
            if b <= 2:
                out[(a, b)] = out.get((a, b), 0) + c
                continue
            for (da, db), coef in (((1, 2), g1), ((2, 1), -g2), ((3, 0), g3)):
                if coef:
                    k = (a + da, b - 3 + db)
                    work[k] = work.get(k, 0) + c * coef
        return RingElement(tuple(sorted((k, v) for k, v in out.items() if v)))

    def integrate(self, p) -> int:
        if isinstance(p, RingElement):
            p = p.to_poly()
        return self.reduce(p).coefficient(3, 2)

    def chern_E(self) -> Poly:
        g1, g2, g3 = self.data.gammas
        return 1 + g1 * H + g2 * H ** 2 + g3 * H ** 3

    def chern_V2(self) -> tuple:
        """``c1 = g1 h - eta`` and ``c2 = g2 h^2 - g1 h eta + eta^2``."""
        g1, g2, _ = self.data.gammas
        c1 = g1 * H - ETA
        c2 = g2 * H ** 2 - g1 * H * ETA + ETA ** 2
        return c1, c2

    def class_of_S(self) -> RingElement:
        """``c3(L (x) Sym^2 V2*)`` with ``c1(L) = lam h``."""
        c1, c2 = self.chern_V2()
        s1, s2, s3 = sym2_dual_chern(c1, c2)
        ell = self.data.lam * H
        return self.reduce(twisted_c3(s1, s2, s3, ell))

    def degeneration_degree(self) -> int:
        """Degree of the discriminant surface: ``-2 g1 + 3 lam``."""
        return -2 * self.data.gamma1 + 3 * self.data.lam

    def degeneration_class(self) -> RingElement:
        """``c1(Sym^2 V2* (x) L^2)`` pushed down: ``(-2 g1 + 3 lam) h``."""
        return self.reduce(self.degeneration_degree() * H)

    def parity_number(self) -> int:
        """``N = deg [S] (g1 h - eta) (2 g1 - lam) h``."""
        g1, lam = self.data.gamma1, self.data.lam
        S = self.class_of_S().to_poly()
        return self.integrate(S * (g1 * H - ETA) * ((2 * g1 - lam) * H))

    def parity_check(self) -> dict:
        N = self.parity_number()
        lam = self.data.lam
        deg = self.degeneration_degree()
        return {"gamma": list(self.data.gammas), "lambda": lam, "N": N,
                "N_mod_2": N % 2, "lambda_cubed_mod_2": lam ** 3 % 2,
                "degeneration_degree": deg, "degeneration_odd": deg % 2 == 1,
                "N_odd": N % 2 == 1,
                "verdict": (N - lam ** 3) % 2 == 0}


def sym2_dual_chern(c1, c2) -> tuple:
    """Chern classes of ``Sym^2`` of the dual of a rank-2 bundle with classes ``c1, c2``.

    With roots ``-a, -b`` of the dual, ``Sym^2`` has roots ``-2a, -a-b, -2b``.
    """
    d1, d2 = -_lift(c1), _lift(c2)
    s1 = 3 * d1
    s2 = 2 * d1 * d1 + 4 * d2
    s3 = 4 * d1 * d2
    return s1, s2, s3


def twisted_c3(s1, s2, s3, ell) -> Poly:
    """``c3(F (x) L)`` for rank-3 ``F`` with classes ``s_i`` and a line bundle ``ell``."""
    return _lift(s3) + _lift(s2) * ell + _lift(s1) * ell * ell + ell * ell * ell
