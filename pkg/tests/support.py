"""Random data and a catalog of verified algebroids shared by the property suites."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from hypothesis import strategies as st

from bialgebroid import Algebroid, MultiForm, Multivector, Ring, tangent_algebroid
from bialgebroid.glb import gl2, heisenberg, product_lie_algebra, su2_u2
from bialgebroid.jacobi import JacobiStructure, build_tm_r, build_tstar_m_r, contact_r3, cotangent_poisson_algebroid
from bialgebroid.time_ext import bar_extension, hat_extension

COEFF = st.integers(-10, 10)
RATIONAL = st.one_of(COEFF, st.builds(Fraction, COEFF, st.integers(1, 10)))


@dataclass(frozen=True)
class Case:
    name: str
    A: Algebroid
    cocycles: tuple  # closed degree-1 forms spanning (with df) the cocycles used in tests


def _action_sl2() -> Algebroid:
    """d/dx, x d/dx, x^2 d/dx acting on the line."""
    R = Ring(("x",))
    return Algebroid(R, 3, [[1], ["x"], ["x^2"]], {(0, 1): [1, 0, 0], (0, 2): [0, 2, 0], (1, 2): [0, 0, 1]},
                     name="sl2 action")


def _poisson_plane() -> Algebroid:
    R = Ring(("x", "y"))
    L = Multivector.basis(R, 2, [0, 1], "x")
    return cotangent_poisson_algebroid(JacobiStructure(R, L, Multivector.zero(R, 2, 1)))


@lru_cache(maxsize=None)
def catalog() -> tuple[Case, ...]:
    h = heisenberg().h
    s = su2_u2().h
    g = gl2().h
    u2 = product_lie_algebra(s)
    R2 = Ring(("x", "y"))
    tm2 = tangent_algebroid(R2)
    tmr, unit = build_tm_r(Ring(("x",)))
    tmr2, unit2 = build_tm_r(R2)
    tstar, _ = build_tstar_m_r(contact_r3())
    act = _action_sl2()
    pois = _poisson_plane()
    hat_h = hat_extension(h, h.cogen(0))
    bar_h = bar_extension(h, h.cogen(1))
    return (
        Case("heisenberg", h, (h.cogen(0), h.cogen(1))),
        Case("su2", s, ()),
        Case("gl2", g, (g.cogen(3),)),
        Case("u2", u2, (u2.cogen(3),)),
        Case("tangent_plane", tm2, (tm2.cogen(0), tm2.cogen(1))),
        Case("tangent_x_r_line", tmr, (unit, tmr.cogen(0))),
        Case("tangent_x_r_plane", tmr2, (unit2,)),
        Case("cotangent_x_r_contact", tstar, ()),
        Case("sl2_action", act, ()),
        Case("poisson_plane", pois, ()),
        Case("hat_heisenberg", hat_h, ()),
        Case("bar_heisenberg", bar_h, ()),
    )


def by_name(name: str) -> Case:
    return next(c for c in catalog() if c.name == name)


# random elements ---------------------------------------------------------------
def scalars(ring: Ring, max_terms: int = 3, max_deg: int = 2, coeffs=COEFF, u_range=(-1, 2), min_terms=0):
    """Random polynomial of bounded degree in the ring's directions (and u when time extended)."""
    names = list(ring.directions)
    monos = st.dictionaries(st.sampled_from(names), st.integers(0, max_deg), max_size=2) if names \
        else st.just({})
    if ring.time_extended:
        monos = st.tuples(monos, st.integers(*u_range)).map(lambda m: {**m[0], "u": m[1]})
    term = st.tuples(coeffs, monos)

    def build(terms):
        out = ring.zero()
        for c, m in terms:
            out = out + ring.monomial(m, c)
        return out

    return st.lists(term, min_size=min_terms, max_size=max_terms).map(build)


def elements(kind, ring: Ring, rank: int, degree: int, max_terms: int = 3, **kw):
    """Random Multivector or MultiForm of a fixed degree."""
    if degree < 0 or degree > rank:
        return st.just(kind.zero(ring, rank, max(degree, 0)))
    keys = list(combinations(range(rank), degree))
    term = st.tuples(st.sampled_from(keys), scalars(ring, min_terms=1, **kw))

    def build(terms):
        out = kind.zero(ring, rank, degree)
        for key, c in terms:
            out = out + kind.basis(ring, rank, key, c)
        return out

    return st.lists(term, min_size=1, max_size=max_terms).map(build)


def multivectors(ring, rank, degree, **kw):
    return elements(Multivector, ring, rank, degree, **kw)


def forms(ring, rank, degree, **kw):
    return elements(MultiForm, ring, rank, degree, **kw)


@st.composite
def cocycles(draw, case: Case):
    """Constant combination of the listed closed forms plus an exact form df."""
    A = case.A
    phi = MultiForm.zero(A.ring, A.rank, 1)
    for c in case.cocycles:
        phi = phi + c.scale(draw(COEFF))
    if A.ring.directions:
        phi = phi + A.df(draw(scalars(A.ring, max_terms=2)))
    return phi


cases = st.sampled_from(catalog())
