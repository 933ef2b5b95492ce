"""Jacobi structures on coordinate charts and their two canonical algebroids.

A Jacobi structure is a bivector ``L`` and a vector field ``E`` in the
coordinate frame with ``[L, L] = 2 E ^ L`` and ``[E, L] = 0``.  Pairs
``(P, Q)`` stand for ``P + eps ^ Q`` on (tangent frame) x R, where ``eps`` is
the unit section placed after the coordinate directions.
"""
from __future__ import annotations

from .algebroid import Algebroid, tangent_algebroid
from .exterior import (MultiForm, Multivector, ProductElement, as_form, as_multivector,
                       evaluate, sharp)
from .report import Report
from .scalar import Ring, Scalar


class JacobiError(ValueError):
    pass


def _sign(n: int) -> int:
    return -1 if n & 1 else 1


class JacobiStructure:
    """Bivector ``L`` and vector field ``E`` over the coordinate frame of ``ring``."""

    def __init__(self, ring: Ring, Lambda: Multivector, E: Multivector):
        m = len(ring.directions)
        for name, el, deg in (("bivector", Lambda, 2), ("vector field", E, 1)):
            if not isinstance(el, Multivector):
                raise JacobiError(f"the {name} must be a Multivector")
            if el.rank != m:
                raise JacobiError(f"the {name} must have rank {m}, got {el.rank}")
            if el.terms and el.degree != deg:
                raise JacobiError(f"the {name} must have degree {deg}, got {el.degree}")
        self.ring = ring
        self.Lambda = Lambda if Lambda.degree == 2 else Multivector.zero(ring, m, 2)
        self.E = E if E.degree == 1 else Multivector.zero(ring, m, 1)
        self.tm = tangent_algebroid(ring)

    @property
    def dim(self) -> int:
        return len(self.ring.directions)

    def __eq__(self, other):
        if not isinstance(other, JacobiStructure):
            return NotImplemented
        return self.ring == other.ring and self.Lambda == other.Lambda and self.E == other.E

    def __repr__(self):
        return f"JacobiStructure(Lambda={self.Lambda!r}, E={self.E!r})"

    def coordinate_field(self, i: int, coeff=1) -> Multivector:
        return Multivector.basis(self.ring, self.dim, [i], coeff)

    def d(self, f) -> MultiForm:
        return self.tm.df(f)

    def hamiltonian(self, alpha: MultiForm) -> Multivector:
        return sharp(self.Lambda, alpha)


def jacobi_defects(J: JacobiStructure) -> tuple[Multivector, Multivector]:
    """([L,L] - 2 E^L, [E,L]) computed with the tangent Schouten bracket."""
    tm = J.tm
    return (tm.schouten(J.Lambda, J.Lambda) - J.E.wedge(J.Lambda).scale(2),
            tm.schouten(J.E, J.Lambda))


def verify_jacobi(J: JacobiStructure) -> Report:
    rep = Report("jacobi structure")
    d1, d2 = jacobi_defects(J)
    rep.add("lambda_lambda", not d1.terms, d1.first_term())
    rep.add("e_lambda", not d2.terms, d2.first_term())
    A, phi0 = build_tm_r(J.ring)
    pe = ProductElement(J.Lambda, J.E)
    prod = product_bracket(A, phi0, pe, pe)
    rep.add("product_bracket", prod.is_zero(),
            (prod.first.first_term() or prod.second.first_term()))
    # the product route equals (d1, -2 d2)
    agree = prod == ProductElement(d1, d2.scale(-2))
    rep.add("routes_agree", agree, None if agree else "product route disagrees with the direct route")
    return rep


def is_jacobi(J: JacobiStructure) -> bool:
    d1, d2 = jacobi_defects(J)
    return not d1.terms and not d2.terms


def jacobi_bracket(J: JacobiStructure, f, g) -> Scalar:
    """{f, g} = L(df, dg) + f E(g) - g E(f)."""
    f = J.ring.coerce(f)
    g = J.ring.coerce(g)
    tm = J.tm
    return (evaluate(J.Lambda, tm.df(f), tm.df(g))
            + f * tm.anchor_apply(J.E, g) - g * tm.anchor_apply(J.E, f))


def poissonize(J: JacobiStructure) -> Multivector:
    """u (L + d/dt ^ E) on the time-extended chart, with u standing for exp(-t)."""
    if J.ring.time_extended:
        raise JacobiError("the base chart is already time extended")
    R = J.ring.extend_time()
    m = J.dim
    lam = J.Lambda.lift(R).with_rank(m + 1)
    E = J.E.lift(R).with_rank(m + 1)
    dt = Multivector.basis(R, m + 1, [m])
    return (lam + dt.wedge(E)).scale(R.var("u"))


def poisson_structure(ring: Ring, P: Multivector) -> JacobiStructure:
    return JacobiStructure(ring, P, Multivector.zero(ring, P.rank, 1))


# (tangent frame) x R --------------------------------------------------------
def build_tm_r(ring: Ring) -> tuple[Algebroid, MultiForm]:
    """(tangent frame) x R with bracket ([X,Y], X(g) - Y(f)) and the cocycle (0, 1)."""
    m = len(ring.directions)
    anchor = [[1 if a == i else 0 for a in range(m)] for i in range(m)]
    anchor.append([0] * m)
    A = Algebroid(ring, m + 1, anchor, {}, name="tangent x R")
    phi0 = MultiForm.basis(ring, m + 1, [m])
    return A, phi0


def _embed(pe: ProductElement):
    return pe.embed()


def product_bracket(A: Algebroid, phi0: MultiForm, a: ProductElement, b: ProductElement) -> ProductElement:
    """Twisted Schouten bracket of pairs, computed in the algebroid ``A``."""
    return ProductElement.split(A.twisted_schouten(phi0, _embed(a), _embed(b)))


def tm_r_differential(A: Algebroid, pe: ProductElement, phi0: MultiForm | None = None) -> ProductElement:
    """Generic (optionally twisted) differential of a form pair on (tangent frame) x R."""
    w = _embed(pe)
    out = A.differential(w) if phi0 is None else A.twisted_differential(phi0, w)
    return ProductElement.split(out)


def closed_tm_r_differential(J_or_ring, pe: ProductElement) -> ProductElement:
    """(d alpha, -d beta)."""
    tm = _tangent(J_or_ring)
    return ProductElement(tm.differential(pe.first), -tm.differential(pe.second))


def closed_tm_r_twisted_differential(J_or_ring, pe: ProductElement) -> ProductElement:
    """(d alpha, alpha - d beta)."""
    tm = _tangent(J_or_ring)
    return ProductElement(tm.differential(pe.first), pe.first - tm.differential(pe.second))


def closed_tm_r_schouten(ring: Ring, a: ProductElement, b: ProductElement) -> ProductElement:
    """([P,P'], (-1)^(k+1) [P,Q'] - [Q,P'])."""
    tm = tangent_algebroid(ring)
    P, Q, P2, Q2 = a.first, a.second, b.first, b.second
    k = a.degree
    return ProductElement(tm.schouten(P, P2),
                          tm.schouten(P, Q2).scale(_sign(k + 1)) - tm.schouten(Q, P2))


def extended_schouten_tm_r(ring: Ring, a: ProductElement, b: ProductElement) -> ProductElement:
    """Closed form of the (0,1)-twisted Schouten bracket on (tangent frame) x R."""
    tm = tangent_algebroid(ring)
    P, Q, P2, Q2 = a.first, a.second, b.first, b.second
    k, k2 = a.degree, b.degree
    first = (tm.schouten(P, P2) + P.wedge(Q2).scale(_sign(k + 1) * (k - 1))
             - Q.wedge(P2).scale(k2 - 1))
    second = (tm.schouten(P, Q2).scale(_sign(k + 1)) - tm.schouten(Q, P2)
              + Q.wedge(Q2).scale(_sign(k + 1) * (k - k2)))
    return ProductElement(first, second)


def _tangent(J_or_ring) -> Algebroid:
    if isinstance(J_or_ring, JacobiStructure):
        return J_or_ring.tm
    return tangent_algebroid(J_or_ring)


# (cotangent frame) x R ------------------------------------------------------
def cotangent_r_bracket(J: JacobiStructure, a: ProductElement, b: ProductElement) -> ProductElement:
    """Bracket of 1-form pairs (alpha, f), (beta, g) induced by a Jacobi structure."""
    tm = J.tm
    alpha, f = a.first, a.second.as_scalar()
    beta, g = b.first, b.second.as_scalar()
    L, E = J.Lambda, J.E
    sa, sb = sharp(L, alpha), sharp(L, beta)
    lab = evaluate(L, alpha, beta)
    first = (tm.lie_derivative(sa, beta) - tm.lie_derivative(sb, alpha) - tm.df(lab)
             + tm.lie_derivative(E, beta).scale(f) - tm.lie_derivative(E, alpha).scale(g)
             - E.contract(alpha.wedge(beta)))
    second = (evaluate(L, beta, alpha) + tm.anchor_apply(sa, g) - tm.anchor_apply(sb, f)
              + f * tm.anchor_apply(E, g) - g * tm.anchor_apply(E, f))
    return ProductElement(first, MultiForm.scalar(J.ring, J.dim, second))


def cotangent_r_anchor(J: JacobiStructure, a: ProductElement) -> Multivector:
    """#_L(alpha) + f E."""
    return sharp(J.Lambda, a.first) + J.E.scale(a.second.as_scalar())


def _cotangent_generator(J: JacobiStructure, i: int) -> ProductElement:
    m = J.dim
    if i < m:
        return ProductElement(MultiForm.basis(J.ring, m, [i]), MultiForm.zero(J.ring, m, 0))
    return ProductElement(MultiForm.zero(J.ring, m, 1), MultiForm.scalar(J.ring, m, 1))


def _pe_coeffs(pe: ProductElement) -> list[Scalar]:
    return pe.first.components() + [pe.second.as_scalar()]


def build_tstar_m_r(J: JacobiStructure, check: bool = True) -> tuple[Algebroid, Multivector]:
    """(cotangent frame) x R of a Jacobi structure together with the cocycle (-E, 0).

    Structure functions are obtained by evaluating the bracket on frame pairs.
    """
    if check and not is_jacobi(J):
        raise JacobiError("input is not a Jacobi structure")
    m = J.dim
    gens = [_cotangent_generator(J, i) for i in range(m + 1)]
    anchor = [cotangent_r_anchor(J, g).components() for g in gens]
    brackets = {}
    for i in range(m + 1):
        for j in range(i + 1, m + 1):
            brackets[(i, j)] = _pe_coeffs(cotangent_r_bracket(J, gens[i], gens[j]))
    A = Algebroid(J.ring, m + 1, anchor, brackets, name="cotangent x R")
    X0 = Multivector.linear(J.ring, [-c for c in J.E.components()] + [0])
    return A, X0


def tstar_differential(Astar: Algebroid, pe: ProductElement, X0: Multivector | None = None) -> ProductElement:
    """Generic differential of a multivector pair (P, Q), seen as a form of the dual algebroid."""
    w = as_form(pe.embed())
    out = Astar.differential(w) if X0 is None else Astar.twisted_differential(as_form(X0), w)
    return ProductElement.split(as_multivector(out))


def closed_tstar_differential(J: JacobiStructure, pe: ProductElement) -> ProductElement:
    """(-[L,P] + k E^P + L^Q, [L,Q] - (k-1) E^Q + [E,P])."""
    tm = J.tm
    L, E = J.Lambda, J.E
    P, Q = pe.first, pe.second
    k = pe.degree
    return ProductElement(-tm.schouten(L, P) + E.wedge(P).scale(k) + L.wedge(Q),
                          tm.schouten(L, Q) - E.wedge(Q).scale(k - 1) + tm.schouten(E, P))


def closed_tstar_twisted_differential(J: JacobiStructure, pe: ProductElement) -> ProductElement:
    """(-[L,P] + (k-1) E^P + L^Q, [L,Q] - (k-2) E^Q + [E,P])."""
    tm = J.tm
    L, E = J.Lambda, J.E
    P, Q = pe.first, pe.second
    k = pe.degree
    return ProductElement(-tm.schouten(L, P) + E.wedge(P).scale(k - 1) + L.wedge(Q),
                          tm.schouten(L, Q) - E.wedge(Q).scale(k - 2) + tm.schouten(E, P))


def cotangent_poisson_algebroid(J: JacobiStructure) -> Algebroid:
    """Cotangent algebroid of a bivector: anchor #_L, bracket L_{#a}b - L_{#b}a - d L(a,b)."""
    tm = J.tm
    m = J.dim
    L = J.Lambda
    forms = [MultiForm.basis(J.ring, m, [i]) for i in range(m)]
    anchor = [sharp(L, a).components() for a in forms]
    brackets = {}
    for i in range(m):
        for j in range(i + 1, m):
            a, b = forms[i], forms[j]
            br = (tm.lie_derivative(sharp(L, a), b) - tm.lie_derivative(sharp(L, b), a)
                  - tm.df(evaluate(L, a, b)))
            brackets[(i, j)] = br.components() if br.terms else [0] * m
    return Algebroid(J.ring, m, anchor, brackets, name="cotangent")


def contact_r3() -> JacobiStructure:
    """Contact structure on R^3: L = (d/dx + y d/dz) ^ d/dy, E = d/dz."""
    R = Ring(("x", "y", "z"))
    X = Multivector.linear(R, [1, 0, "y"])
    Y = Multivector.linear(R, [0, 1, 0])
    return JacobiStructure(R, X.wedge(Y), Multivector.linear(R, [0, 0, 1]))


__all__ = [
    "JacobiError", "JacobiStructure", "verify_jacobi", "is_jacobi", "jacobi_defects", "jacobi_bracket",
    "poissonize", "poisson_structure", "build_tm_r", "build_tstar_m_r", "product_bracket",
    "tm_r_differential", "tstar_differential", "closed_tm_r_differential",
    "closed_tm_r_twisted_differential", "closed_tm_r_schouten", "extended_schouten_tm_r",
    "closed_tstar_differential", "closed_tstar_twisted_differential", "cotangent_r_bracket",
    "cotangent_r_anchor", "cotangent_poisson_algebroid", "contact_r3",
]
