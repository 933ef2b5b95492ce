"""Dual pairs of algebroids with 1-cocycles and their compatibility conditions.

``A`` acts on multivectors P (sections of the exterior powers of A) and
``Astar`` on forms of A.  The dual algebroid's own "forms" are multivectors
of A, so its differential ``d_*`` maps k-vectors to (k+1)-vectors.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .algebroid import Algebroid, lie_algebra
from .exterior import MultiForm, Multivector, as_form, as_multivector, evaluate, sharp
from .jacobi import JacobiStructure, build_tm_r, build_tstar_m_r
from .report import Report
from .scalar import Ring, Scalar


class GLBError(ValueError):
    pass


class YBError(ValueError):
    pass


class GLBPair:
    """((A, phi0), (Astar, X0)) with Astar written on the dual frame of A."""

    def __init__(self, A: Algebroid, Astar: Algebroid, phi0: MultiForm, X0: Multivector):
        if A.rank != Astar.rank:
            raise GLBError(f"rank mismatch: {A.rank} vs {Astar.rank}")
        if A.ring != Astar.ring:
            raise GLBError("the two algebroids must share a base ring")
        if not isinstance(phi0, MultiForm) or phi0.rank != A.rank or (phi0.terms and phi0.degree != 1):
            raise GLBError("phi0 must be a degree-1 form of A")
        if not isinstance(X0, Multivector) or X0.rank != A.rank or (X0.terms and X0.degree != 1):
            raise GLBError("X0 must be a degree-1 section of A")
        self.A = A
        self.Astar = Astar
        self.phi0 = phi0 if phi0.degree == 1 else MultiForm.zero(A.ring, A.rank, 1)
        self.X0 = X0 if X0.degree == 1 else Multivector.zero(A.ring, A.rank, 1)

    @property
    def ring(self) -> Ring:
        return self.A.ring

    @property
    def rank(self) -> int:
        return self.A.rank

    def swapped(self) -> "GLBPair":
        return GLBPair(self.Astar, self.A, as_form(self.X0), as_multivector(self.phi0))

    def __repr__(self):
        return f"GLBPair({self.A!r}, {self.Astar!r}, phi0={self.phi0!r}, X0={self.X0!r})"

    # calculus of the dual algebroid, written on multivectors of A -------------
    def d_star(self, P) -> Multivector:
        if isinstance(P, Scalar) or not isinstance(P, Multivector):
            P = Multivector.scalar(self.ring, self.rank, P)
        return as_multivector(self.Astar.differential(as_form(P)))

    def d_star_X0(self, P) -> Multivector:
        if isinstance(P, Scalar) or not isinstance(P, Multivector):
            P = Multivector.scalar(self.ring, self.rank, P)
        return as_multivector(self.Astar.twisted_differential(as_form(self.X0), as_form(P)))

    def d_phi0(self, omega) -> MultiForm:
        if isinstance(omega, Scalar) or not isinstance(omega, MultiForm):
            omega = MultiForm.scalar(self.ring, self.rank, omega)
        return self.A.twisted_differential(self.phi0, omega)

    def lie_star_X0(self, alpha: MultiForm, P: Multivector) -> Multivector:
        """X0-twisted Lie derivative of the dual algebroid along alpha, acting on P."""
        return as_multivector(self.Astar.twisted_lie_derivative_form(
            as_form(self.X0), as_multivector(alpha), as_form(P)))

    def lie_star(self, alpha: MultiForm, P: Multivector) -> Multivector:
        return as_multivector(self.Astar.lie_derivative(as_multivector(alpha), as_form(P)))

    def schouten_phi0(self, P: Multivector, Q: Multivector) -> Multivector:
        return self.A.twisted_schouten(self.phi0, P, Q)

    def rho_star(self, alpha: MultiForm) -> list[Scalar]:
        return self.Astar.anchor_vector(as_multivector(alpha))

    def pairing(self, alpha: MultiForm, X: Multivector) -> Scalar:
        return alpha.contract(X).as_scalar()


# conditions -----------------------------------------------------------------
def _bracket_defect(p: GLBPair, X: Multivector, Y: Multivector) -> Multivector:
    lhs = p.d_star_X0(p.A.bracket(X, Y))
    rhs = p.schouten_phi0(X, p.d_star_X0(Y)) - p.schouten_phi0(Y, p.d_star_X0(X))
    return lhs - rhs


def _test_pairs(p: GLBPair):
    n = p.rank
    A = p.A
    for i, j in combinations(range(n), 2):
        yield (i, None, j), A.gen(i), A.gen(j)
    for x in A.ring.directions:
        xv = A.ring.var(x)
        for i in range(n):
            for j in range(n):
                yield (i, x, j), A.gen(i), A.gen(j, xv)


def bracket_compatibility(p: GLBPair):
    """First failing witness of the bracket compatibility on test pairs, or None."""
    for (i, x, j), X, Y in _test_pairs(p):
        D = _bracket_defect(p, X, Y)
        if D.terms:
            return {"X": f"e{i + 1}", "Y": f"{x + '*' if x else ''}e{j + 1}", "defect": D.first_term()}
    return None


def check_glb(p: GLBPair, seed: int = 0, spot_samples: int = 4) -> Report:
    rep = Report("generalized Lie bialgebroid")
    A, n = p.A, p.rank
    rep.run("cocycle_phi0", lambda: None if A.is_cocycle(p.phi0) else p.phi0.to_records())
    rep.run("cocycle_X0", lambda: None if p.Astar.is_cocycle(as_form(p.X0)) else p.X0.to_records())
    if not rep.passed:
        for cid in ("cond_4_1", "cond_4_3", "cond_4_4", "lie_derivative_spot"):
            rep.skip(cid, "cocycle precondition failed")
        return rep

    rep.run("cond_4_1", lambda: bracket_compatibility(p))

    def cond_4_3():
        v = p.pairing(p.phi0, p.X0)
        if v.terms:
            return {"phi0(X0)": str(v)}
        lhs = A.anchor_vector(p.X0)
        rhs = p.rho_star(p.phi0)
        for name, a, b in zip(A.ring.directions, lhs, rhs):
            if a != -b:
                return {"direction": name, "rho(X0)": str(a), "rho_star(phi0)": str(b)}
        return None

    rep.run("cond_4_3", cond_4_3)

    def cond_4_4():
        for i in range(n):
            X = A.gen(i)
            D = p.lie_star(p.phi0, X) + A.bracket(p.X0, X)
            if D.terms:
                return {"X": f"e{i + 1}", "defect": D.first_term()}
        return None

    rep.run("cond_4_4", cond_4_4)

    def lie_derivative_spot():
        rng = random.Random(seed)
        cands = [Multivector.scalar(A.ring, n, 1)] + [A.gen(i) for i in range(n)]
        cands += [Multivector.basis(A.ring, n, c) for c in combinations(range(n), 2)]
        picks = cands if len(cands) <= spot_samples + n + 1 else cands[:n + 1] + rng.sample(cands[n + 1:], spot_samples)
        for P in picks:
            D = p.lie_star_X0(p.phi0, P) + A.twisted_schouten(p.phi0, p.X0, P)
            if D.terms:
                return {"P": P.to_records(), "defect": D.first_term()}
        return None

    rep.run("lie_derivative_spot", lie_derivative_spot)
    return rep


def check_duality(p: GLBPair, seed: int = 0) -> Report:
    rep = Report("duality")
    inner = check_glb(p.swapped(), seed=seed)
    rep.extend(inner, prefix="swapped.")
    return rep


def induced_jacobi(p: GLBPair, sign: int = 1, check: bool = True) -> JacobiStructure:
    """Jacobi structure on the base: L(df, dg) = sign * <df, d_* g>, E = -sign * rho(X0).

    With ``sign=1`` the canonical pair of a Jacobi structure returns that same
    structure; ``sign=-1`` gives the opposite structure (-L, -E).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if check and not check_glb(p).passed:
        raise GLBError("the pair does not satisfy the compatibility conditions")
    R = p.ring
    dirs = R.directions
    m = len(dirs)
    coords = [R.var(v) for v in dirs]
    dfs = [p.A.df(x) for x in coords]
    dstars = [p.d_star(x) for x in coords]
    terms = {}
    for a, b in combinations(range(m), 2):
        c = p.pairing(dfs[a], dstars[b])
        if sign < 0:
            c = -c
        if c.terms:
            terms[(a, b)] = c
    Lam = Multivector._raw(R, m, 2, terms)
    E = Multivector.linear(R, [-c for c in p.A.anchor_vector(p.X0)]) if m else Multivector.zero(R, 0, 1)
    if sign < 0:
        E = -E
    return JacobiStructure(R, Lam, E)


def induced_bracket(p: GLBPair, f, g, sign: int = 1) -> Scalar:
    """sign * d_phi0 f . d_*X0 g."""
    f, g = p.ring.coerce(f), p.ring.coerce(g)
    v = p.pairing(p.d_phi0(f), p.d_star_X0(g))
    return v if sign > 0 else -v


def canonical_pair(J: JacobiStructure) -> GLBPair:
    """((tangent x R, (0,1)), (cotangent x R, (-E,0)))."""
    A, phi0 = build_tm_r(J.ring)
    Astar, X0 = build_tstar_m_r(J)
    return GLBPair(A, Astar, phi0, X0)


# triangular pairs -------------------------------------------------------------
def triangular_bracket(A: Algebroid, phi0: MultiForm, P: Multivector, a: MultiForm, b: MultiForm,
                       form: str = "lie") -> MultiForm:
    """Bracket of 1-forms induced by a bivector, in Lie-derivative or interior-product form."""
    sa, sb = sharp(P, a), sharp(P, b)
    pab = evaluate(P, a, b)
    if form == "lie":
        return (A.twisted_lie_derivative_form(phi0, sa, b) - A.twisted_lie_derivative_form(phi0, sb, a)
                - A.twisted_differential(phi0, MultiForm.scalar(A.ring, A.rank, pab)))
    return (sa.contract(A.twisted_differential(phi0, b)) - sb.contract(A.twisted_differential(phi0, a))
            + A.twisted_differential(phi0, MultiForm.scalar(A.ring, A.rank, pab)))


def triangular(A: Algebroid, phi0: MultiForm, P: Multivector) -> GLBPair:
    A.require_cocycle(phi0)
    D = A.twisted_schouten(phi0, P, P)
    if D.terms:
        raise GLBError(f"twisted Schouten square of P does not vanish: {D.first_term()}")
    n = A.rank
    forms = [A.cogen(i) for i in range(n)]
    anchor = [A.anchor_vector(sharp(P, a)) for a in forms]
    brackets = {}
    for i, j in combinations(range(n), 2):
        lie = triangular_bracket(A, phi0, P, forms[i], forms[j], "lie")
        inner = triangular_bracket(A, phi0, P, forms[i], forms[j], "interior")
        if lie != inner:
            raise GLBError(f"the two forms of the induced bracket disagree on ({i + 1}, {j + 1})")
        brackets[(i, j)] = as_multivector(lie)
    Astar = Algebroid(A.ring, n, anchor, brackets, name="triangular dual")
    X0 = -sharp(P, phi0)
    return GLBPair(A, Astar, phi0, X0)


# point base ---------------------------------------------------------------------
def check_glb_point(p: GLBPair) -> Report:
    if p.ring.variables or p.ring.time_extended:
        raise GLBError("the pair must live over a point")
    rep = Report("generalized Lie bialgebra")
    A, n = p.A, p.rank
    rep.run("cocycle_phi0", lambda: None if A.is_cocycle(p.phi0) else p.phi0.to_records())
    rep.run("cocycle_X0", lambda: None if p.Astar.is_cocycle(as_form(p.X0)) else p.X0.to_records())

    def c1():
        for i, j in combinations(range(n), 2):
            D = _bracket_defect(p, A.gen(i), A.gen(j))
            if D.terms:
                return {"X": f"e{i + 1}", "Y": f"e{j + 1}", "defect": D.first_term()}
        return None

    def c2():
        v = p.pairing(p.phi0, p.X0)
        return None if not v.terms else {"phi0(X0)": str(v)}

    def c3():
        for i in range(n):
            X = A.gen(i)
            D = p.phi0.contract(p.d_star(X)) + A.bracket(p.X0, X)
            if D.terms:
                return {"X": f"e{i + 1}", "defect": D.first_term()}
        return None

    rep.run("point_bracket_compatibility", c1)
    rep.run("phi0_of_X0", c2)
    rep.run("dual_differential_condition", c3)
    return rep


@dataclass(frozen=True)
class YBData:
    """A Lie algebra with a bivector r and a vector Xbar0."""

    h: Algebroid
    r: Multivector
    xbar0: Multivector


def yb_defects(h: Algebroid, r: Multivector, xbar0: Multivector) -> tuple[Multivector, Multivector]:
    return h.schouten(r, r) - xbar0.wedge(r).scale(2), h.schouten(xbar0, r)


def yb_check(h: Algebroid, r: Multivector, xbar0: Multivector) -> Report:
    rep = Report("Yang-Baxter type equations")
    d1, d2 = yb_defects(h, r, xbar0)
    rep.add("r_r_minus_2_x_r", not d1.terms, d1.first_term())
    rep.add("x_r", not d2.terms, d2.first_term())
    return rep


def coad(h: Algebroid, X: Multivector, alpha: MultiForm) -> MultiForm:
    """(coad_X alpha)(Y) = -alpha([X, Y])."""
    return MultiForm.linear(h.ring, [-alpha.contract(h.bracket(X, h.gen(j))).as_scalar()
                                     for j in range(h.rank)])


def product_lie_algebra(h: Algebroid) -> Algebroid:
    """h x R with the unit generator central."""
    n = h.rank
    br = {k: v.with_rank(n + 1) for k, v in h.brackets().items()}
    return lie_algebra(n + 1, br, ring=h.ring, name="h x R")


def yb_dual_bracket(h: Algebroid, r: Multivector, xbar0: Multivector, a, b) -> tuple[MultiForm, Scalar]:
    """Closed form of the dual bracket on h* x R for pairs (alpha, lam), (beta, mu)."""
    alpha, lam = a
    beta, mu = b
    sa, sb = sharp(r, alpha), sharp(r, beta)
    first = (coad(h, sa, beta) - coad(h, sb, alpha) - xbar0.contract(alpha.wedge(beta))
             - coad(h, xbar0, alpha).scale(mu) + coad(h, xbar0, beta).scale(lam))
    return first, -evaluate(r, alpha, beta)


def yb_construct(h: Algebroid, r: Multivector, xbar0: Multivector) -> GLBPair:
    """Pair on h x R from a solution of the Yang-Baxter type equations."""
    if not yb_check(h, r, xbar0).passed:
        raise YBError("r and Xbar0 do not satisfy the Yang-Baxter type equations")
    n = h.rank
    g = product_lie_algebra(h)
    phi0 = MultiForm.basis(h.ring, n + 1, [n])
    eps = Multivector.basis(h.ring, n + 1, [n])
    P = r.with_rank(n + 1) + eps.wedge(xbar0.with_rank(n + 1))
    p = triangular(g, phi0, P)
    # compare with the closed form of the dual bracket
    R = h.ring
    gens = [(MultiForm.basis(R, n, [i]), R.zero()) for i in range(n)] + [(MultiForm.zero(R, n, 1), R.one())]
    for i, j in combinations(range(n + 1), 2):
        f, s = yb_dual_bracket(h, r, xbar0, gens[i], gens[j])
        expect = Multivector.linear(R, f.components() + [s]) if n else Multivector.linear(R, [s])
        got = p.Astar.structure(i, j)
        if got != expect:
            raise YBError(f"dual bracket mismatch on generators ({i + 1}, {j + 1})")
    expected_X0 = -xbar0.with_rank(n + 1)
    if p.X0 != expected_X0:
        raise YBError("unexpected cocycle of the dual algebra")
    return p


def central_defect(h: Algebroid, X: Multivector):
    """First generator not commuting with X, or None."""
    for i in range(h.rank):
        if h.bracket(X, h.gen(i)).terms:
            return i
    return None


def yb_center_reduce(h: Algebroid, r: Multivector, xbar0: Multivector) -> GLBPair:
    """Pair ((h, 0), (h*, -Xbar0)) for a central Xbar0."""
    i = central_defect(h, xbar0)
    if i is not None:
        raise YBError(f"Xbar0 is not central: [Xbar0, e{i + 1}] != 0")
    d1, _ = yb_defects(h, r, xbar0)
    if d1.terms:
        raise YBError(f"[r,r] - 2 Xbar0^r does not vanish: {d1.first_term()}")
    n = h.rank
    R = h.ring
    forms = [MultiForm.basis(R, n, [k]) for k in range(n)]
    brackets = {}
    for a, b in combinations(range(n), 2):
        al, be = forms[a], forms[b]
        br = (coad(h, sharp(r, al), be) - coad(h, sharp(r, be), al) - xbar0.contract(al.wedge(be)))
        brackets[(a, b)] = as_multivector(br) if br.terms else [0] * n
    anchor = [[] for _ in range(n)]
    hstar = Algebroid(R, n, anchor, brackets, name="h*")
    return GLBPair(h, hstar, MultiForm.zero(R, n, 1), -xbar0)


# built-in examples --------------------------------------------------------------
def _point_algebra(n: int, table: dict, name: str) -> Algebroid:
    """Structure constants from {(i, j): {k: c}} with 1-based indices."""
    br = {}
    for (i, j), vals in table.items():
        br[(i - 1, j - 1)] = [vals.get(k + 1, 0) for k in range(n)]
    return lie_algebra(n, br, name=name)


def heisenberg() -> YBData:
    h = _point_algebra(3, {(1, 2): {3: 1}}, "heisenberg")
    R = h.ring
    return YBData(h, Multivector.basis(R, 3, [0, 1]), Multivector.basis(R, 3, [2], -1))


def su2_u2() -> YBData:
    h = _point_algebra(3, {(1, 2): {3: -1}, (1, 3): {2: 1}, (2, 3): {1: -1}}, "su2")
    R = h.ring
    return YBData(h, Multivector.basis(R, 3, [0, 1]), Multivector.basis(R, 3, [2]))


def gl2() -> YBData:
    h = _point_algebra(4, {(1, 2): {3: 1}, (1, 3): {1: -2}, (2, 3): {2: 2}}, "gl2")
    R = h.ring
    e = [Multivector.basis(R, 4, [k]) for k in range(4)]
    r = e[0].wedge(e[2]) + (e[0] - e[2].scale(Fraction(1, 2))).wedge(e[3])
    return YBData(h, r, -e[3])


def lie_bialgebra_2d() -> GLBPair:
    """Two-dimensional solvable algebra [e1,e2] = e2 with the dual of r = e1^e2."""
    h = _point_algebra(2, {(1, 2): {2: 1}}, "solvable")
    R = h.ring
    n = 2
    r = Multivector.basis(R, n, [0, 1])
    zero = MultiForm.zero(R, n, 1)
    return triangular(h, zero, r)

