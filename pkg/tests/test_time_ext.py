from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bialgebroid import Algebroid, MultiForm, Multivector, Ring, tangent_algebroid
from bialgebroid.algebroid import lie_algebra
from bialgebroid.exterior import as_form
from bialgebroid.glb import (GLBError, GLBPair, bracket_compatibility, canonical_pair, check_glb, heisenberg,
                             lie_bialgebra_2d, yb_construct)
from bialgebroid.jacobi import contact_r3
from bialgebroid.time_ext import (TimeExtensionError, bar_bivector_closed, bar_bracket_closed,
                                  bar_differential_closed, bar_extension, bialgebroid_compatibility,
                                  bialgebroidize, extended_pair, glb_from_bialgebroid, hat_bracket_closed,
                                  hat_differential_closed, hat_extension, induced_poisson, psi, time_partial,
                                  transported_pair, trivial_extension)
from oracles import structure_jacobiator
from support import catalog, cocycles, forms, multivectors, scalars

BASES = [c for c in catalog() if not c.A.ring.time_extended and c.A.rank <= 4]


def _perturbed_su2() -> Algebroid:
    # su2 with an extra e1 term in [e1, e2]: no longer a Lie algebra
    return lie_algebra(3, {(0, 1): [1, 0, -1], (0, 2): [0, 1, 0], (1, 2): [-1, 0, 0]}, name="perturbed")


def _raw_extension(A: Algebroid, phi0: MultiForm, kind: str) -> Algebroid:
    """Extension built straight from its structure functions, with no cocycle check."""
    R = A.ring.extend_time()
    u = R.var("u") if kind == "hat" else R.one()
    n = A.rank
    phi = [R.lift(phi0.component(i)) for i in range(n)]
    anchor = [[R.lift(c) * u for c in row] + [phi[i] * u] for i, row in enumerate(A.anchor)]
    brackets = {}
    for i, j in combinations(range(n), 2):
        c = [R.lift(x) for x in A.structure(i, j).components()]
        if kind == "hat":
            c[j] = c[j] - phi[i]
            c[i] = c[i] + phi[j]
        brackets[(i, j)] = [x * u for x in c]
    return Algebroid(R, n, anchor, brackets)


@st.composite
def extended(draw, kind="bar"):
    case = draw(st.sampled_from(BASES))
    phi0 = draw(cocycles(case))
    make = bar_extension if kind == "bar" else hat_extension
    return case.A, phi0, make(case.A, phi0)


def section(ext: Algebroid, degree: int, kind=Multivector):
    gen = multivectors if kind is Multivector else forms
    return gen(ext.ring, ext.rank, degree, max_terms=2)


# d/dt ---------------------------------------------------------------------------------
def test_time_partial_examples():
    R = Ring(("x",), time_extended=True)
    e1 = Multivector.basis(R, 2, [0], "t*u")
    assert time_partial(e1) == Multivector.basis(R, 2, [0], "u - t*u")
    assert time_partial(Multivector.basis(R, 2, [1], "x^2")).is_zero()
    with pytest.raises(TimeExtensionError):
        time_partial(Multivector.basis(Ring(("x",)), 2, [0]))


@given(st.data())
def test_time_partial_product_rule(data):
    R = Ring(("x",), time_extended=True)
    P = data.draw(multivectors(R, 3, data.draw(st.integers(0, 2))))
    Q = data.draw(multivectors(R, 3, data.draw(st.integers(0, 1))))
    assert time_partial(P.wedge(Q)) == time_partial(P).wedge(Q) + P.wedge(time_partial(Q))


@given(st.data())
def test_time_partial_bracket_rule(data):
    A, phi0, ext = data.draw(extended("bar"))
    k1, k2 = data.draw(st.integers(1, 2)), data.draw(st.integers(1, 2))
    P, Q = data.draw(section(ext, k1)), data.draw(section(ext, k2))
    lhs = time_partial(ext.schouten(P, Q))
    assert lhs == ext.schouten(time_partial(P), Q) + ext.schouten(P, time_partial(Q))


@given(st.data())
def test_time_partial_commutes_with_differential(data):
    A, phi0, ext = data.draw(extended("bar"))
    w = data.draw(section(ext, data.draw(st.integers(0, 2)), MultiForm))
    assert ext.differential(time_partial(w)) == time_partial(ext.differential(w))


# bar and hat brackets, anchors and differentials --------------------------------------
def test_bar_zero_cocycle_is_trivial_extension():
    h = heisenberg().h
    bar = bar_extension(h, MultiForm.zero(h.ring, 3, 1))
    triv = trivial_extension(h)
    assert bar.anchor == triv.anchor
    assert bar.brackets() == triv.brackets()


def test_hat_zero_cocycle_scales_structure_constants():
    h = heisenberg().h
    hat = hat_extension(h, MultiForm.zero(h.ring, 3, 1))
    u = hat.ring.var("u")
    assert hat.structure(0, 1) == Multivector.basis(hat.ring, 3, [2], u)


def test_extensions_reject_non_cocycle():
    h = heisenberg().h
    with pytest.raises(TimeExtensionError):
        bar_extension(h, h.cogen(2))
    with pytest.raises(TimeExtensionError):
        hat_extension(h, h.cogen(2))


def test_hat_differential_of_constants_and_time():
    h = heisenberg().h
    phi0 = h.cogen(0)
    hat = hat_extension(h, phi0)
    R = hat.ring
    assert hat.df(R.one()).is_zero()
    assert hat.df(R.var("t")) == phi0.lift(R).scale(R.var("u"))


def test_bar_differential_on_the_line():
    # A = T(R), phi0 = dx: d(t x) = t dx + x dx = (t + x) dx
    T = tangent_algebroid(Ring(("x",)))
    bar = bar_extension(T, T.cogen(0))
    R = bar.ring
    assert bar.df(R.parse("t*x")) == MultiForm.basis(R, 1, [0], "t + x")


@given(st.data())
def test_hat_axioms_heisenberg(data):
    h = heisenberg().h
    a, b = data.draw(st.integers(-10, 10)), data.draw(st.integers(-10, 10))
    hat = hat_extension(h, h.cogen(0).scale(a) + h.cogen(1).scale(b))
    assert hat.check_axioms().passed


@given(st.data())
def test_bar_bracket_closed_form(data):
    A, phi0, ext = data.draw(extended("bar"))
    X, Y = data.draw(section(ext, 1)), data.draw(section(ext, 1))
    assert ext.bracket(X, Y) == bar_bracket_closed(A, phi0, X, Y)


@given(st.data())
def test_hat_bracket_closed_form(data):
    A, phi0, ext = data.draw(extended("hat"))
    X, Y = data.draw(section(ext, 1)), data.draw(section(ext, 1))
    assert ext.bracket(X, Y) == hat_bracket_closed(A, phi0, X, Y)


@given(st.data())
def test_bar_differential_closed_form(data):
    A, phi0, ext = data.draw(extended("bar"))
    w = data.draw(section(ext, data.draw(st.integers(0, 3)), MultiForm))
    assert ext.differential(w) == bar_differential_closed(A, phi0, w)


@given(st.data())
def test_hat_differential_closed_form(data):
    A, phi0, ext = data.draw(extended("hat"))
    w = data.draw(section(ext, data.draw(st.integers(0, 3)), MultiForm))
    assert ext.differential(w) == hat_differential_closed(A, phi0, w)


@given(st.data())
def test_hat_differential_low_degrees(data):
    # degree 0: u (df + df/dt phi0); degree 1: u (d_phi0 w + phi0 ^ dw/dt)
    A, phi0, ext = data.draw(extended("hat"))
    T = trivial_extension(A)
    R = ext.ring
    u = R.var("u")
    phi = phi0.lift(R)
    f = data.draw(scalars(R))
    assert ext.df(f) == (T.df(f) + phi.scale(f.partial("t"))).scale(u)
    w = data.draw(section(ext, 1, MultiForm))
    assert ext.differential(w) == (T.twisted_differential(phi, w) + phi.wedge(time_partial(w))).scale(u)


@given(st.data())
def test_bar_bivector_identity(data):
    A, phi0, ext = data.draw(extended("bar"))
    X = data.draw(section(ext, 1))
    P = data.draw(section(ext, 2))
    assert ext.schouten(X, P) == bar_bivector_closed(A, phi0, X, P)


@given(st.data())
def test_extension_d_squared(data):
    kind = data.draw(st.sampled_from(["bar", "hat"]))
    A, phi0, ext = data.draw(extended(kind))
    w = data.draw(section(ext, data.draw(st.integers(0, 2)), MultiForm))
    assert ext.differential(ext.differential(w)).is_zero()


# psi ----------------------------------------------------------------------------------
def test_psi_examples():
    R = Ring((), time_extended=True)
    e1 = Multivector.basis(R, 2, [0])
    assert psi(e1) == Multivector.basis(R, 2, [0], "u^-1")
    assert psi(Multivector.zero(R, 2, 1)).is_zero()
    assert psi(psi(e1), power=-1) == e1


@given(st.data())
def test_psi_intertwines_anchor_and_bracket(data):
    case = data.draw(st.sampled_from(BASES))
    phi0 = data.draw(cocycles(case))
    bar, hat = bar_extension(case.A, phi0), hat_extension(case.A, phi0)
    X, Y = data.draw(section(bar, 1)), data.draw(section(bar, 1))
    assert hat.anchor_vector(psi(X)) == bar.anchor_vector(X)
    assert psi(bar.bracket(X, Y)) == hat.bracket(psi(X), psi(Y))


@given(st.data())
def test_psi_intertwines_schouten(data):
    case = data.draw(st.sampled_from(BASES))
    phi0 = data.draw(cocycles(case))
    bar, hat = bar_extension(case.A, phi0), hat_extension(case.A, phi0)
    P = data.draw(section(bar, data.draw(st.integers(1, 2))))
    Q = data.draw(section(bar, data.draw(st.integers(1, 2))))
    assert psi(bar.schouten(P, Q)) == hat.schouten(psi(P), psi(Q))


# equivalence of the axioms on A and on its extensions ---------------------------------
@pytest.mark.parametrize("A, phi0, ok", [
    (heisenberg().h, heisenberg().h.cogen(0), True),
    (heisenberg().h, heisenberg().h.cogen(2), False),
    (_perturbed_su2(), MultiForm.zero(Ring(()), 3, 1), False),
], ids=["heisenberg", "non_cocycle", "perturbed"])
def test_extension_axioms_equivalence(A, phi0, ok):
    base_ok = structure_jacobiator(
        {k: [c.constant_value() for c in v.components()] for k, v in A.brackets().items()}, A.rank) is None
    assert (base_ok and A.is_cocycle(phi0)) is ok
    assert A.check_axioms().passed is base_ok
    assert _raw_extension(A, phi0, "bar").check_axioms().passed is ok
    assert _raw_extension(A, phi0, "hat").check_axioms().passed is ok


def test_raw_extension_matches_constructors():
    h = heisenberg().h
    phi0 = h.cogen(1).scale(3)
    for kind, make in (("bar", bar_extension), ("hat", hat_extension)):
        raw, built = _raw_extension(h, phi0, kind), make(h, phi0)
        assert raw.anchor == built.anchor
        assert raw.brackets() == built.brackets()


# the Lie bialgebroid over (base) x R ---------------------------------------------------
def test_bialgebroidize_contact():
    J = contact_r3()
    p = canonical_pair(J)
    rep = bialgebroidize(p)
    assert rep.passed
    assert [c.check_id for c in rep.checks] == ["bar_axioms", "hat_axioms", "bialgebroid_compatibility",
                                               "induced_is_poissonization", "induced_is_poisson",
                                               "base_is_jacobi"]
    # u (L + d/dt ^ E) with d/dt the fourth direction
    R = J.ring.extend_time()
    u = R.var("u")
    expected = (J.Lambda.lift(R).with_rank(4)
                + Multivector.basis(R, 4, [3]).wedge(J.E.lift(R).with_rank(4))).scale(u)
    assert induced_poisson(extended_pair(p)) == expected


def test_bialgebroidize_opposite_sign():
    assert bialgebroidize(canonical_pair(contact_r3()), sign=-1).passed


def test_bialgebroidize_point_heisenberg():
    p = yb_construct(heisenberg().h, heisenberg().r, heisenberg().xbar0)
    assert bialgebroidize(p).passed
    # over a point the extended base is the time line and carries no bivector
    assert induced_poisson(extended_pair(p)).is_zero()


def test_bialgebroidize_zero_cocycles():
    assert bialgebroidize(lie_bialgebra_2d()).passed


def test_bialgebroidize_rejects_unverified():
    p = canonical_pair(contact_r3())
    with pytest.raises(GLBError):
        bialgebroidize(GLBPair(p.A, p.Astar, p.phi0, -p.X0))


def test_transported_pair_contact():
    # the hat/bar roles exchanged through psi keep the bialgebroid verdict
    p = canonical_pair(contact_r3())
    assert bracket_compatibility(extended_pair(p)) is None
    assert bracket_compatibility(transported_pair(p)) is None
    assert check_glb(extended_pair(p)).passed


def _scaled_dual(p: GLBPair) -> GLBPair:
    """Dual algebroid with anchor and brackets doubled; X0 is kept."""
    A = p.Astar
    anchor = [[c * 2 for c in row] for row in A.anchor]
    br = {k: v.scale(2) for k, v in A.brackets().items()}
    return GLBPair(p.A, Algebroid(p.ring, p.rank, anchor, br), p.phi0, p.X0)


def _perturbed_dual(p: GLBPair) -> GLBPair:
    br = dict(p.Astar.brackets())
    key = sorted(br)[0]
    br[key] = br[key].scale(2)
    return GLBPair(p.A, Algebroid(p.ring, p.rank, p.Astar.anchor, br), p.phi0, p.X0)


@pytest.mark.parametrize("make, ok", [
    (lambda: yb_construct(heisenberg().h, heisenberg().r, heisenberg().xbar0), True),
    (lambda: _perturbed_dual(yb_construct(heisenberg().h, heisenberg().r, heisenberg().xbar0)), False),
    (lambda: canonical_pair(contact_r3()), True),
    (lambda: _scaled_dual(canonical_pair(contact_r3())), False),
    (lambda: GLBPair(lie_algebra(2, {}), lie_algebra(2, {}), MultiForm.zero(Ring(()), 2, 1),
                     Multivector.zero(Ring(()), 2, 1)), True),
], ids=["heisenberg", "heisenberg_perturbed", "contact", "contact_perturbed", "trivial"])
def test_verdicts_agree(make, ok):
    p = make()
    assert p.Astar.check_axioms().passed
    assert p.Astar.is_cocycle(as_form(p.X0))
    rep = glb_from_bialgebroid(p)
    assert rep["bialgebroid_compatibility"].passed is ok
    assert rep["generalized_conditions"].passed is ok
    assert rep["verdicts_agree"].passed
    assert (bialgebroid_compatibility(p) is None) is ok
