"""Lie algebroids with polynomial structure functions on a free frame.

An algebroid of rank n over a ring with directions ``x_1..x_m`` is given by
its anchor matrix ``rho[i][a]`` (the ``x_a`` component of the vector field of
the i-th generator) and structure functions ``[e_i, e_j] = sum_k c_ij^k e_k``.
Everything else follows from bilinearity, antisymmetry and the Leibniz rule.

The Schouten bracket uses the convention fixed by

    [[P, P']] = (-1)^(k k') [[P', P]]
    [[P, P' ^ P'']] = [[P, P']] ^ P'' + (-1)^(k'(k+1)) P' ^ [[P, P'']]
    [[X, f]] = [[f, X]] = rho(X) f,   [[P, f]] = i_{df} P
"""
from __future__ import annotations

import random
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .exterior import ExteriorError, MultiForm, Multivector, ProductElement, _merge
from .report import Report
from .scalar import Ring, Scalar


class AlgebroidError(ValueError):
    pass


class CocycleError(AlgebroidError):
    pass


class ConsistencyError(AssertionError):
    """Two independent computations of the same quantity disagree."""


def _sign(n: int) -> int:
    return -1 if n & 1 else 1


class Algebroid:
    """(A, [[ , ]], rho) on a free frame e_1..e_n."""

    def __init__(self, ring: Ring, rank: int, anchor: Sequence[Sequence], brackets: Mapping | None = None,
                 name: str = ""):
        self.ring = ring
        self.rank = rank
        self.name = name
        dirs = ring.directions
        if len(anchor) != rank:
            raise AlgebroidError(f"anchor needs {rank} rows, got {len(anchor)}")
        rows = []
        for i, row in enumerate(anchor):
            if len(row) != len(dirs):
                raise AlgebroidError(f"anchor row {i + 1} needs {len(dirs)} entries, got {len(row)}")
            rows.append(tuple(ring.coerce(c) for c in row))
        self.anchor = tuple(rows)
        self._brackets: dict = {}
        for (i, j), val in (brackets or {}).items():
            if not (0 <= i < rank and 0 <= j < rank):
                raise AlgebroidError(f"bracket index out of range: ({i + 1}, {j + 1})")
            if i == j:
                raise AlgebroidError("bracket of a generator with itself is zero by antisymmetry")
            if isinstance(val, Multivector):
                if val.rank != rank or (val.degree != 1 and val.terms):
                    raise AlgebroidError("bracket values must be degree-1 elements of the same rank")
                vec = val if val.ring == ring else val.lift(ring)
            else:
                vals = list(val)
                if len(vals) != rank:
                    raise AlgebroidError(f"bracket ({i + 1},{j + 1}) needs {rank} coefficients")
                vec = Multivector.linear(ring, vals)
            if i > j:
                i, j, vec = j, i, -vec
            if vec.terms:
                self._brackets[(i, j)] = vec
        self._zero1 = Multivector.zero(ring, rank, 1)
        self._deriv_cache: dict = {}
        self._schouten_cache: dict = {}
        self._cocycle_cache: dict = {}

    def __repr__(self):
        return f"Algebroid(rank={self.rank}, ring={self.ring!r}{', ' + self.name if self.name else ''})"

    # structure ------------------------------------------------------------
    def structure(self, i: int, j: int) -> Multivector:
        """[e_i, e_j] for 0-based generator indices."""
        if i == j:
            return self._zero1
        if i < j:
            return self._brackets.get((i, j), self._zero1)
        return -self._brackets.get((j, i), self._zero1)

    def structure_coeff(self, i: int, j: int, k: int) -> Scalar:
        return self.structure(i, j).component(k)

    def brackets(self) -> dict:
        return dict(self._brackets)

    def gen(self, i: int, coeff=1) -> Multivector:
        return Multivector.basis(self.ring, self.rank, [i], coeff)

    def cogen(self, i: int, coeff=1) -> MultiForm:
        return MultiForm.basis(self.ring, self.rank, [i], coeff)

    def vector(self, coeffs: Iterable) -> Multivector:
        return Multivector.linear(self.ring, coeffs)

    def form(self, coeffs: Iterable) -> MultiForm:
        return MultiForm.linear(self.ring, coeffs)

    def scalar(self, s) -> Scalar:
        return self.ring.coerce(s)

    # anchor -----------------------------------------------------------------
    def gen_derivative(self, i: int, f: Scalar) -> Scalar:
        """rho(e_i)(f)."""
        key = (i, f)
        hit = self._deriv_cache.get(key)
        if hit is not None:
            return hit
        out = self.ring.zero()
        for a, c in enumerate(self.anchor[i]):
            if c.terms:
                out = out + c * f.partial(self.ring.directions[a])
        if len(self._deriv_cache) < 200000:
            self._deriv_cache[key] = out
        return out

    def anchor_apply(self, X: Multivector, f: Scalar) -> Scalar:
        """rho(X)(f) for a degree-1 section X."""
        f = self.ring.coerce(f)
        out = self.ring.zero()
        for (i,), c in X.terms.items():
            out = out + c * self.gen_derivative(i, f)
        return out

    def anchor_vector(self, X: Multivector) -> list[Scalar]:
        """Components of rho(X) along the ring directions."""
        out = [self.ring.zero()] * len(self.ring.directions)
        for (i,), c in X.terms.items():
            out = [o + c * r for o, r in zip(out, self.anchor[i])]
        return out

    def df(self, f) -> MultiForm:
        """df as a section of the dual: (df)(e_i) = rho(e_i)(f)."""
        f = self.ring.coerce(f)
        return MultiForm._raw(self.ring, self.rank, 1,
                              {(i,): d for i in range(self.rank) if (d := self.gen_derivative(i, f)).terms})

    # bracket ----------------------------------------------------------------
    def bracket(self, X: Multivector, Y: Multivector) -> Multivector:
        if (X.degree != 1 and X.terms) or (Y.degree != 1 and Y.terms):
            raise AlgebroidError("bracket takes degree-1 sections")
        out = self._zero1
        for (i,), a in X.terms.items():
            for (j,), b in Y.terms.items():
                out = out + self.structure(i, j).scale(a * b)
            # Leibniz in each slot
            for (j,), b in Y.terms.items():
                db = self.gen_derivative(i, b)
                if db.terms:
                    out = out + self.gen(j, a * db)
        for (j,), b in Y.terms.items():
            for (i,), a in X.terms.items():
                da = self.gen_derivative(j, a)
                if da.terms:
                    out = out - self.gen(i, b * da)
        return out

    # differential -------------------------------------------------------------
    def _form_value(self, omega: MultiForm, first: int, rest: tuple) -> Scalar:
        """omega(e_first, e_rest...) for sorted rest."""
        m = _merge((first,), rest)
        if m is None:
            return self.ring.zero()
        sign, key = m
        c = omega.terms.get(key)
        if c is None:
            return self.ring.zero()
        return c if sign > 0 else -c

    def differential(self, omega: MultiForm) -> MultiForm:
        """Chevalley-Eilenberg differential with trivial coefficients."""
        self._own(omega)
        k = omega.degree
        if k < 0 or not omega.terms:
            return MultiForm.zero(self.ring, self.rank, k + 1)
        acc: dict = {}
        for idx in combinations(range(self.rank), k + 1):
            total = self.ring.zero()
            for a, ia in enumerate(idx):
                rest = idx[:a] + idx[a + 1:]
                c = omega.terms.get(rest)
                if c is not None:
                    d = self.gen_derivative(ia, c)
                    if d.terms:
                        total = total + (d if a % 2 == 0 else -d)
            for a in range(k + 1):
                for b in range(a + 1, k + 1):
                    br = self.structure(idx[a], idx[b])
                    if not br.terms:
                        continue
                    rest = idx[:a] + idx[a + 1:b] + idx[b + 1:]
                    val = self.ring.zero()
                    for (m,), cm in br.terms.items():
                        v = self._form_value(omega, m, rest)
                        if v.terms:
                            val = val + cm * v
                    if val.terms:
                        total = total + (val if (a + b) % 2 == 0 else -val)
            if total.terms:
                acc[idx] = total
        return MultiForm._raw(self.ring, self.rank, k + 1, acc)

    def _own(self, elem):
        if elem.rank != self.rank:
            raise ExteriorError(f"element of rank {elem.rank} used with an algebroid of rank {self.rank}")
        if elem.ring != self.ring:
            raise ExteriorError("element ring differs from the algebroid ring")

    # Schouten bracket ---------------------------------------------------------
    def _gen_action(self, I: tuple, j: int) -> Multivector:
        """sum_m e_i1 ^ .. [e_j, e_im] .. ^ e_ik."""
        key = (I, j)
        hit = self._schouten_cache.get(key)
        if hit is not None:
            return hit
        k = len(I)
        out = Multivector.zero(self.ring, self.rank, k)
        for m, im in enumerate(I):
            br = self.structure(j, im)
            if not br.terms:
                continue
            left = Multivector.basis(self.ring, self.rank, I[:m])
            right = Multivector.basis(self.ring, self.rank, I[m + 1:])
            out = out + left.wedge(br).wedge(right)
        self._schouten_cache[key] = out
        return out

    def _bracket_with_gen(self, f: Scalar, I: tuple, j: int) -> Multivector:
        """[[f e_I, e_j]]."""
        k = len(I)
        out = self._gen_action(I, j).scale(f)
        d = self.gen_derivative(j, f)
        if d.terms:
            out = out + Multivector._raw(self.ring, self.rank, k, {I: d})
        return out.scale(_sign(k))

    def schouten(self, P: Multivector, Q: Multivector) -> Multivector:
        self._own(P)
        self._own(Q)
        k, kq = P.degree, Q.degree
        deg = k + kq - 1
        if k < 0 or kq < 0 or not P.terms or not Q.terms:
            return Multivector.zero(self.ring, self.rank, deg)
        if deg > self.rank:
            return Multivector.zero(self.ring, self.rank, deg)
        out = Multivector.zero(self.ring, self.rank, deg)
        for J, g in Q.terms.items():
            eJ = Multivector.basis(self.ring, self.rank, J)
            # i_{dg} P ^ e_J
            if k > 0:
                dg = self.df(g)
                if dg.terms:
                    out = out + dg.contract(P).wedge(eJ)
            for m, jm in enumerate(J):
                sign = _sign(m * (k + 1))
                left = Multivector.basis(self.ring, self.rank, J[:m])
                right = Multivector.basis(self.ring, self.rank, J[m + 1:])
                inner = Multivector.zero(self.ring, self.rank, k)
                for I, f in P.terms.items():
                    inner = inner + self._bracket_with_gen(f, I, jm)
                if inner.terms:
                    term = left.wedge(inner).wedge(right).scale(g)
                    out = out + (term if sign > 0 else -term)
        return out

    def lie_derivative(self, X: Multivector, omega: MultiForm) -> MultiForm:
        """Cartan formula L_X = d i_X + i_X d."""
        return self.differential(X.contract(omega)) + X.contract(self.differential(omega))

    # cocycles and the twisted calculus ------------------------------------
    def cocycle_defect_pairs(self, phi: MultiForm) -> dict:
        """phi[e_i,e_j] - rho(e_i)phi(e_j) + rho(e_j)phi(e_i) on generator pairs (nonzero entries)."""
        out = {}
        for i, j in combinations(range(self.rank), 2):
            lhs = self._pair1(phi, self.structure(i, j))
            rhs = self.gen_derivative(i, phi.component(j)) - self.gen_derivative(j, phi.component(i))
            if lhs != rhs:
                out[(i, j)] = lhs - rhs
        return out

    def _pair1(self, phi: MultiForm, X: Multivector) -> Scalar:
        out = self.ring.zero()
        for (i,), c in X.terms.items():
            p = phi.terms.get((i,))
            if p is not None:
                out = out + c * p
        return out

    def is_cocycle(self, phi: MultiForm) -> bool:
        """Checks the cocycle identity on generator pairs and dphi = 0; both must agree."""
        self._own(phi)
        if phi.degree != 1 and phi.terms:
            raise AlgebroidError("cocycles are degree-1 forms")
        hit = self._cocycle_cache.get(phi)
        if hit is not None:
            return hit
        by_pairs = not self.cocycle_defect_pairs(phi)
        by_d = not self.differential(phi).terms
        if by_pairs != by_d:
            raise ConsistencyError(f"cocycle routes disagree for {phi!r}")
        self._cocycle_cache[phi] = by_pairs
        return by_pairs

    def require_cocycle(self, phi0: MultiForm) -> None:
        if not self.is_cocycle(phi0):
            raise CocycleError(f"{phi0!r} is not a 1-cocycle")

    def twisted_differential(self, phi0: MultiForm, omega: MultiForm) -> MultiForm:
        """d omega + phi0 ^ omega."""
        self.require_cocycle(phi0)
        return self.differential(omega) + phi0.wedge(omega)

    def twisted_lie_derivative_form(self, phi0: MultiForm, X: Multivector, omega: MultiForm) -> MultiForm:
        """Computed by the twisted Cartan formula and by L_X omega + phi0(X) omega."""
        self.require_cocycle(phi0)
        cartan = (self.twisted_differential(phi0, X.contract(omega))
                  + X.contract(self.twisted_differential(phi0, omega)))
        direct = self.lie_derivative(X, omega) + omega.scale(self._pair1(phi0, X))
        if cartan != direct:
            raise ConsistencyError("twisted Lie derivative routes disagree")
        return cartan

    def twisted_schouten(self, phi0: MultiForm, P: Multivector, Q: Multivector) -> Multivector:
        """[[P,Q]] + (-1)^(k+1)(k-1) P ^ i_phi0 Q - (k'-1) (i_phi0 P) ^ Q."""
        self.require_cocycle(phi0)
        k, kq = P.degree, Q.degree
        out = self.schouten(P, Q)
        if k < 0 or kq < 0:
            return out
        if k != 1 and P.terms and Q.terms:
            out = out + P.wedge(phi0.contract(Q)).scale(_sign(k + 1) * (k - 1))
        if kq != 1 and P.terms and Q.terms:
            out = out - phi0.contract(P).wedge(Q).scale(kq - 1)
        return out

    def twisted_lie_derivative_mv(self, phi0: MultiForm, X: Multivector, P: Multivector) -> Multivector:
        return self.twisted_schouten(phi0, X, P)

    def morphism_pair(self, phi0: MultiForm, X: Multivector) -> ProductElement:
        """(rho(X), phi0(X)) as a section of (tangent frame) x R."""
        self.require_cocycle(phi0)
        m = len(self.ring.directions)
        vec = Multivector.linear(self.ring, self.anchor_vector(X)) if m else Multivector.zero(self.ring, 0, 1)
        return ProductElement(vec, Multivector.scalar(self.ring, m, self._pair1(phi0, X)))

    def pullback_form(self, phi0: MultiForm, pe: ProductElement) -> MultiForm:
        """Pullback of a 1-form (alpha, g) on (tangent frame) x R along X -> (rho(X), phi0(X))."""
        alpha, g = pe.first, pe.second.as_scalar()
        coeffs = []
        for i in range(self.rank):
            c = g * phi0.component(i)
            for a, r in enumerate(self.anchor[i]):
                c = c + r * alpha.component(a)
            coeffs.append(c)
        return self.form(coeffs)

    # axioms -------------------------------------------------------------------
    def jacobiator(self, X: Multivector, Y: Multivector, Z: Multivector) -> Multivector:
        return (self.bracket(self.bracket(X, Y), Z) + self.bracket(self.bracket(Y, Z), X)
                + self.bracket(self.bracket(Z, X), Y))

    def check_axioms(self, seed: int = 0, samples: int = 8) -> Report:
        rep = Report(f"algebroid axioms{': ' + self.name if self.name else ''}")
        n = self.rank

        def jacobi():
            for i, j, k in combinations(range(n), 3):
                J = self.jacobiator(self.gen(i), self.gen(j), self.gen(k))
                if J.terms:
                    return {"generators": [i + 1, j + 1, k + 1], "defect": J.to_records()}
            return None

        def anchor_hom():
            coords = [self.ring.var(v) for v in self.ring.directions]
            for i, j in combinations(range(n), 2):
                br = self.structure(i, j)
                for a, x in enumerate(coords):
                    lhs = self.anchor_apply(br, x)
                    rhs = (self.gen_derivative(i, self.gen_derivative(j, x))
                           - self.gen_derivative(j, self.gen_derivative(i, x)))
                    if lhs != rhs:
                        return {"generators": [i + 1, j + 1], "direction": self.ring.directions[a],
                                "defect": str(lhs - rhs)}
            return None

        def jacobi_random():
            rng = random.Random(seed)
            vars_ = [self.ring.var(v) for v in self.ring.directions]
            if not vars_ or n < 2:
                return None
            for _ in range(samples):
                i, j, k = (rng.randrange(n) for _ in range(3))
                x = rng.choice(vars_)
                J = self.jacobiator(self.gen(i), self.gen(j, x), self.gen(k))
                if J.terms:
                    return {"generators": [i + 1, j + 1, k + 1], "multiplier": str(x),
                            "defect": J.to_records()}
            return None

        rep.run("jacobi_identity", jacobi)
        rep.run("anchor_homomorphism", anchor_hom)
        rep.run("jacobi_function_multiples", jacobi_random)
        return rep


def tangent_algebroid(ring: Ring) -> Algebroid:
    """Tangent bundle in the coordinate frame: identity anchor, zero brackets."""
    m = len(ring.directions)
    anchor = [[1 if a == i else 0 for a in range(m)] for i in range(m)]
    return Algebroid(ring, m, anchor, {}, name="tangent")


def lie_algebra(rank: int, brackets: Mapping, ring: Ring | None = None, name: str = "") -> Algebroid:
    """Algebroid over a point (or with zero anchor over ``ring``)."""
    ring = ring or Ring(())
    anchor = [[0] * len(ring.directions) for _ in range(rank)]
    return Algebroid(ring, rank, anchor, brackets, name=name)
