"""Algebroids pulled back to (base) x R and the Lie bialgebroid they carry.

Sections over (base) x R are sections with coefficients polynomial in ``t``
and Laurent in ``u`` (standing for exp(-t)).  ``bar`` and ``hat`` are the two
time extensions of an algebroid with a 1-cocycle; ``psi`` (multiplication by
exp(t) = u^-1) intertwines them.
"""
from __future__ import annotations

from itertools import combinations

from .algebroid import Algebroid, tangent_algebroid
from .exterior import MultiForm, Multivector, _Exterior, as_form
from .glb import GLBError, GLBPair, bracket_compatibility, check_glb, induced_jacobi
from .jacobi import is_jacobi, poissonize
from .report import Report
from .scalar import TIME, Ring


class TimeExtensionError(ValueError):
    pass


def _extended_ring(A: Algebroid) -> Ring:
    if A.ring.time_extended:
        raise TimeExtensionError("the algebroid is already time extended")
    return A.ring.extend_time()


def time_partial(elem: _Exterior) -> _Exterior:
    """Coefficient-wise d/dt, with d/dt u = -u."""
    if not elem.ring.time_extended:
        raise TimeExtensionError("d/dt needs a time-extended ring")
    return elem.map_coeffs(lambda c: c.partial(TIME))


def lift_section(elem: _Exterior, ring: Ring) -> _Exterior:
    return elem.lift(ring)


def _check_cocycle(A: Algebroid, phi0: MultiForm) -> None:
    if not A.is_cocycle(phi0):
        raise TimeExtensionError("phi0 is not a 1-cocycle")


def trivial_extension(A: Algebroid) -> Algebroid:
    """Same bracket and anchor, with t as an extra inert parameter."""
    R = _extended_ring(A)
    anchor = [[R.lift(c) for c in row] + [R.zero()] for row in A.anchor]
    return Algebroid(R, A.rank, anchor, {k: v.lift(R) for k, v in A.brackets().items()},
                     name=f"{A.name} (time)")


def bar_extension(A: Algebroid, phi0: MultiForm) -> Algebroid:
    """Bracket [X,Y] + phi0(X) dY/dt - phi0(Y) dX/dt, anchor rho(X) + phi0(X) d/dt."""
    _check_cocycle(A, phi0)
    R = _extended_ring(A)
    anchor = [[R.lift(c) for c in row] + [R.lift(phi0.component(i))] for i, row in enumerate(A.anchor)]
    return Algebroid(R, A.rank, anchor, {k: v.lift(R) for k, v in A.brackets().items()},
                     name=f"{A.name} (bar)")


def hat_extension(A: Algebroid, phi0: MultiForm) -> Algebroid:
    """exp(-t) times the bar data, corrected by phi0 on undifferentiated sections."""
    _check_cocycle(A, phi0)
    R = _extended_ring(A)
    u = R.var("u")
    n = A.rank
    phi = [R.lift(phi0.component(i)) for i in range(n)]
    anchor = [[R.lift(c) * u for c in row] + [phi[i] * u] for i, row in enumerate(A.anchor)]
    brackets = {}
    for i, j in combinations(range(n), 2):
        coeffs = [R.lift(c) for c in A.structure(i, j).components()]
        coeffs[j] = coeffs[j] - phi[i]
        coeffs[i] = coeffs[i] + phi[j]
        brackets[(i, j)] = [c * u for c in coeffs]
    return Algebroid(R, n, anchor, brackets, name=f"{A.name} (hat)")


def psi(elem: Multivector, power: int = 1) -> Multivector:
    """Psi on k-vectors: multiply by exp(k t) = u^(-k) (``power=-1`` inverts)."""
    if not elem.ring.time_extended:
        raise TimeExtensionError("psi needs a time-extended ring")
    k = max(elem.degree, 0)
    return elem.map_coeffs(lambda c: c.scale_u(-k * power))


psi_transport = psi


# closed forms of the extended differentials ---------------------------------
def bar_differential_closed(A: Algebroid, phi0: MultiForm, omega: MultiForm) -> MultiForm:
    """d omega + phi0 ^ d omega/dt, with d the t-inert differential."""
    T = trivial_extension(A)
    phi = phi0.lift(T.ring)
    return T.differential(omega) + phi.wedge(time_partial(omega))


def hat_differential_closed(A: Algebroid, phi0: MultiForm, omega: MultiForm) -> MultiForm:
    """u (d omega + k phi0 ^ omega + phi0 ^ d omega/dt) on k-forms.

    For k = 0 and k = 1 this is u (d f + df/dt phi0) and u (d_phi0 omega + phi0 ^ d omega/dt).
    """
    T = trivial_extension(A)
    phi = phi0.lift(T.ring)
    k = max(omega.degree, 0)
    u = T.ring.var("u")
    out = T.differential(omega) + phi.wedge(omega).scale(k) + phi.wedge(time_partial(omega))
    return out.scale(u)


def bar_bracket_closed(A: Algebroid, phi0: MultiForm, X: Multivector, Y: Multivector) -> Multivector:
    T = trivial_extension(A)
    phi = phi0.lift(T.ring)
    pX, pY = phi.contract(X).as_scalar(), phi.contract(Y).as_scalar()
    return T.bracket(X, Y) + time_partial(Y).scale(pX) - time_partial(X).scale(pY)


def hat_bracket_closed(A: Algebroid, phi0: MultiForm, X: Multivector, Y: Multivector) -> Multivector:
    T = trivial_extension(A)
    phi = phi0.lift(T.ring)
    pX, pY = phi.contract(X).as_scalar(), phi.contract(Y).as_scalar()
    u = T.ring.var("u")
    return (T.bracket(X, Y) + (time_partial(Y) - Y).scale(pX)
            - (time_partial(X) - X).scale(pY)).scale(u)


def bar_bivector_closed(A: Algebroid, phi0: MultiForm, X: Multivector, P: Multivector) -> Multivector:
    """[[X,P]]_phi0 + phi0(X)(P + dP/dt) - dX/dt ^ i_phi0 P, in the t-inert algebroid."""
    T = trivial_extension(A)
    phi = phi0.lift(T.ring)
    pX = phi.contract(X).as_scalar()
    return (T.twisted_schouten(phi, X, P) + (P + time_partial(P)).scale(pX)
            - time_partial(X).wedge(phi.contract(P)))


# the Lie bialgebroid over (base) x R -------------------------------------------
def extended_pair(p: GLBPair) -> GLBPair:
    """(bar extension of A by phi0, hat extension of Astar by X0), zero cocycles."""
    Abar = bar_extension(p.A, p.phi0)
    Ahat = hat_extension(p.Astar, as_form(p.X0))
    R = Abar.ring
    return GLBPair(Abar, Ahat, MultiForm.zero(R, p.rank, 1), Multivector.zero(R, p.rank, 1))


def transported_pair(p: GLBPair) -> GLBPair:
    """(hat extension of A by phi0, bar extension of Astar by X0), zero cocycles."""
    Ahat = hat_extension(p.A, p.phi0)
    Abar = bar_extension(p.Astar, as_form(p.X0))
    R = Ahat.ring
    return GLBPair(Ahat, Abar, MultiForm.zero(R, p.rank, 1), Multivector.zero(R, p.rank, 1))


def induced_poisson(q: GLBPair, sign: int = 1) -> Multivector:
    """Bivector on the base of a Lie bialgebroid: L(df, dg) = sign * <df, d_* g>."""
    return induced_jacobi(q, sign=sign, check=False).Lambda


def _axiom_witness(A: Algebroid):
    fails = A.check_axioms().failures()
    return fails[0].witness if fails else None


def bialgebroidize(p: GLBPair, sign: int = 1, require_glb: bool = True) -> Report:
    rep = Report("Lie bialgebroid over base x R")
    if require_glb:
        pre = check_glb(p)
        if not pre.passed:
            raise GLBError("the pair does not satisfy the compatibility conditions")
    q = extended_pair(p)
    rep.run("bar_axioms", lambda: _axiom_witness(q.A))
    rep.run("hat_axioms", lambda: _axiom_witness(q.Astar))
    rep.run("bialgebroid_compatibility", lambda: bracket_compatibility(q))
    if require_glb:
        Pt = induced_poisson(q, sign)
        J = induced_jacobi(p, sign=sign, check=False)
        expected = poissonize(J)
        rep.add("induced_is_poissonization", Pt == expected,
                {"induced": Pt.to_records(), "poissonization": expected.to_records()})
        sq = tangent_algebroid(Pt.ring).schouten(Pt, Pt)
        rep.add("induced_is_poisson", not sq.terms, sq.first_term())
        rep.add("base_is_jacobi", is_jacobi(J), None)
    return rep


def bialgebroid_compatibility(p: GLBPair):
    """Witness of a failing compatibility on (base) x R, or None."""
    return bracket_compatibility(extended_pair(p))


def glb_from_bialgebroid(p: GLBPair) -> Report:
    """Compare the verdict on (base) x R with the direct verdict on the pair."""
    rep = Report("bialgebroid and generalized bialgebroid verdicts")
    w = bialgebroid_compatibility(p)
    rep.add("bialgebroid_compatibility", w is None, w)
    direct = check_glb(p)
    rep.add("generalized_conditions", direct.passed,
            [c.check_id for c in direct.failures()] or None)
    rep.add("verdicts_agree", (w is None) == direct.passed, None)
    return rep
