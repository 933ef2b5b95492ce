"""Sparse exterior algebra over a free module of finite rank.

Index tuples are 0-based internally and strictly increasing; the record
serialization used by the CLI is 1-based.  A k-vector ``P`` is evaluated on
1-forms by the determinant pairing, ``P(a1, ..., ak) = <a1 ^ ... ^ ak, P>``,
and higher interior products compose as ``i_{a ^ b} = i_b o i_a``.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

from .scalar import Ring, Scalar, ScalarError


class ExteriorError(ValueError):
    pass


@lru_cache(maxsize=None)
def _merge(a: tuple, b: tuple):
    """Sign and sorted union of two index tuples, or None if they overlap."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    if set(a) & set(b):
        return None
    # sign of the shuffle = parity of inversions between a and b
    inv = 0
    j = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        inv += j
    return (-1 if inv & 1 else 1), tuple(sorted(a + b))


@lru_cache(maxsize=None)
def _contract_basis(form: tuple, vec: tuple):
    """i_{e*_form} e_vec (also i_{e_form} e*_vec): sign and remaining tuple, or None."""
    sign = 1
    rest = vec
    for a in form:
        try:
            p = rest.index(a)
        except ValueError:
            return None
        if p & 1:
            sign = -sign
        rest = rest[:p] + rest[p + 1:]
    return sign, rest


def _add_into(acc: dict, key, value: Scalar):
    cur = acc.get(key)
    if cur is None:
        acc[key] = value
    else:
        acc[key] = cur + value


def _clean(acc: dict) -> dict:
    return {k: v for k, v in acc.items() if v.terms}


class _Exterior:
    __slots__ = ("ring", "rank", "degree", "terms", "_hash")
    kind = "element"

    def __init__(self, ring: Ring, rank: int, degree: int, terms: Mapping | None = None):
        if rank < 0:
            raise ExteriorError("rank must be non-negative")
        out = {}
        for key, c in (terms or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise ExteriorError(f"index tuple {key} does not have degree {degree}")
            if any(i < 0 or i >= rank for i in key):
                raise ExteriorError(f"index out of range in {key} for rank {rank}")
            if any(key[i] >= key[i + 1] for i in range(len(key) - 1)):
                raise ExteriorError(f"indices must be strictly increasing: {key}")
            c = ring.coerce(c)
            if c.terms:
                out[key] = c
        if degree < 0 and out:
            raise ExteriorError("negative degree is only allowed for zero")
        self._init(ring, rank, degree, out)

    def _init(self, ring, rank, degree, terms):
        self.ring = ring
        self.rank = rank
        self.degree = degree
        self.terms = terms
        self._hash = None

    @classmethod
    def _raw(cls, ring, rank, degree, terms):
        obj = cls.__new__(cls)
        obj._init(ring, rank, degree, terms)
        return obj

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, ring: Ring, rank: int, degree: int = 0):
        return cls._raw(ring, rank, degree, {})

    @classmethod
    def scalar(cls, ring: Ring, rank: int, value):
        value = ring.coerce(value)
        return cls._raw(ring, rank, 0, {(): value} if value.terms else {})

    @classmethod
    def basis(cls, ring: Ring, rank: int, indices: Iterable[int], coeff=1):
        """Signed basis element for an arbitrary (not necessarily sorted) index list."""
        idx = tuple(indices)
        if len(set(idx)) != len(idx):
            return cls.zero(ring, rank, len(idx))
        out = cls.scalar(ring, rank, coeff)
        for i in idx:
            out = out.wedge(cls._raw(ring, rank, 1, {(i,): ring.one()}))
        return out

    @classmethod
    def linear(cls, ring: Ring, coeffs: Iterable):
        """Degree-1 element from a full coefficient list."""
        cs = [ring.coerce(c) for c in coeffs]
        return cls._raw(ring, len(cs), 1, {(i,): c for i, c in enumerate(cs) if c.terms})

    @classmethod
    def from_records(cls, ring: Ring, rank: int, records: Iterable[Mapping], degree: int | None = None):
        """Build from ``[{"indices": [1-based...], "coeff": "poly"}]`` records."""
        acc: dict = {}
        deg = degree
        for rec in records:
            idx = [int(i) - 1 for i in rec["indices"]]
            if deg is None:
                deg = len(idx)
            elif len(idx) != deg:
                raise ExteriorError("records of mixed degree")
            if any(i < 0 or i >= rank for i in idx):
                raise ExteriorError(f"index out of range in {rec['indices']} for rank {rank}")
            coeff = ring.parse(rec["coeff"]) if isinstance(rec["coeff"], str) else ring.coerce(rec["coeff"])
            term = cls.basis(ring, rank, idx, coeff)
            for k, v in term.terms.items():
                _add_into(acc, k, v)
        return cls._raw(ring, rank, 0 if deg is None else deg, _clean(acc))

    # access -----------------------------------------------------------------
    def coeff(self, indices: Iterable[int]) -> Scalar:
        return self.terms.get(tuple(indices), self.ring.zero())

    def component(self, i: int) -> Scalar:
        """Coefficient of the i-th generator of a degree-1 element."""
        return self.terms.get((i,), self.ring.zero())

    def components(self) -> list[Scalar]:
        if self.degree != 1:
            raise ExteriorError("components() needs a degree-1 element")
        return [self.component(i) for i in range(self.rank)]

    def as_scalar(self) -> Scalar:
        if self.degree > 0 and self.terms:
            raise ExteriorError("not a degree-0 element")
        return self.terms.get((), self.ring.zero())

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def to_records(self) -> list[dict]:
        return [{"indices": [i + 1 for i in k], "coeff": str(v)} for k, v in self.sorted_terms()]

    def first_term(self):
        """First nonzero coefficient in canonical order, as a record (or None)."""
        items = self.sorted_terms()
        if not items:
            return None
        k, v = items[0]
        return {"indices": [i + 1 for i in k], "coeff": str(v)}

    # linear structure -------------------------------------------------------
    def _check(self, other):
        if type(other) is not type(self):
            raise ExteriorError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.rank != self.rank:
            raise ExteriorError(f"rank mismatch: {self.rank} vs {other.rank}")
        if other.ring != self.ring:
            raise ExteriorError("ring mismatch")

    def _unify_degree(self, other):
        if self.degree == other.degree:
            return self.degree
        if not self.terms:
            return other.degree
        if not other.terms:
            return self.degree
        raise ExteriorError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        if not isinstance(other, _Exterior):
            return NotImplemented
        self._check(other)
        deg = self._unify_degree(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            _add_into(acc, k, v)
        return self._raw(self.ring, self.rank, deg, _clean(acc))

    def __neg__(self):
        return self._raw(self.ring, self.rank, self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, _Exterior):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        c = self.ring.coerce(c)
        if not c.terms:
            return self._raw(self.ring, self.rank, self.degree, {})
        return self._raw(self.ring, self.rank, self.degree,
                         _clean({k: v * c for k, v in self.terms.items()}))

    def __mul__(self, c):
        if isinstance(c, _Exterior):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def map_coeffs(self, fn):
        return self._raw(self.ring, self.rank, self.degree,
                         _clean({k: fn(v) for k, v in self.terms.items()}))

    def lift(self, ring: Ring):
        """Same element with coefficients moved into a larger ring."""
        return self._raw(ring, self.rank, self.degree, {k: ring.lift(v) for k, v in self.terms.items()})

    def with_rank(self, rank: int):
        if rank < self.rank:
            if any(i >= rank for k in self.terms for i in k):
                raise ExteriorError("element uses generators beyond the requested rank")
        return self._raw(self.ring, rank, self.degree, dict(self.terms))

    def __eq__(self, other):
        if not isinstance(other, _Exterior):
            if self.degree == 0 or not self.terms:
                try:
                    return self.as_scalar() == other
                except ScalarError:
                    return NotImplemented
            return NotImplemented
        if type(other) is not type(self) or self.rank != other.rank or self.ring != other.ring:
            return False
        if self.terms != other.terms:
            return False
        return self.degree == other.degree or not self.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.ring, self.rank,
                               self.degree if self.terms else None, frozenset(self.terms.items())))
        return self._hash

    # products ---------------------------------------------------------------
    def wedge(self, other):
        self._check(other)
        if self.degree < 0 or other.degree < 0:
            return self._raw(self.ring, self.rank, -1, {})
        deg = self.degree + other.degree
        acc: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                m = _merge(k1, k2)
                if m is None:
                    continue
                sign, key = m
                prod = v1 * v2
                _add_into(acc, key, prod if sign > 0 else -prod)
        return self._raw(self.ring, self.rank, deg, _clean(acc))

    def _interior(self, op, target_cls):
        """i_self(op) where self and op are of opposite kinds."""
        if op.rank != self.rank or op.ring != self.ring:
            raise ExteriorError("rank or ring mismatch in contraction")
        deg = op.degree - self.degree
        if self.degree < 0 or op.degree < 0:
            return target_cls._raw(self.ring, self.rank, -1, {})
        acc: dict = {}
        if deg >= 0:
            for k1, v1 in self.terms.items():
                for k2, v2 in op.terms.items():
                    m = _contract_basis(k1, k2)
                    if m is None:
                        continue
                    sign, key = m
                    prod = v1 * v2
                    _add_into(acc, key, prod if sign > 0 else -prod)
        return target_cls._raw(self.ring, self.rank, deg, _clean(acc))

    def __repr__(self):
        if not self.terms:
            return f"{type(self).__name__}(0, degree={self.degree})"
        sym = "e" if isinstance(self, Multivector) else "e*"
        parts = []
        for k, v in self.sorted_terms():
            basis = "^".join(f"{sym}{i + 1}" for i in k) or "1"
            parts.append(f"({v})*{basis}")
        return " + ".join(parts)


class Multivector(_Exterior):
    """Section of the exterior powers of the module."""

    __slots__ = ()
    kind = "multivector"

    def contract(self, form: "MultiForm") -> "MultiForm":
        """i_self(form): the form with this multivector inserted into its first slots."""
        if not isinstance(form, MultiForm):
            raise ExteriorError("contract expects a MultiForm")
        return self._interior(form, MultiForm)


class MultiForm(_Exterior):
    """Section of the exterior powers of the dual module."""

    __slots__ = ()
    kind = "multiform"

    def contract(self, mv: Multivector) -> Multivector:
        """i_self(mv), with i_{a ^ b} = i_b o i_a."""
        if not isinstance(mv, Multivector):
            raise ExteriorError("contract expects a Multivector")
        return self._interior(mv, Multivector)


def contract_form(phi: MultiForm, P: Multivector) -> Multivector:
    return phi.contract(P)


def contract_vector(P: Multivector, omega: MultiForm) -> MultiForm:
    return P.contract(omega)


def pair(omega: MultiForm, P: Multivector) -> Scalar:
    """Full contraction <omega, P> by the determinant pairing."""
    if omega.degree != P.degree and omega.terms and P.terms:
        raise ExteriorError(f"degree mismatch in pairing: {omega.degree} vs {P.degree}")
    return omega.contract(P).as_scalar()


def evaluate(P: Multivector, *forms: MultiForm) -> Scalar:
    """P(a1, ..., ak)."""
    out = MultiForm.scalar(P.ring, P.rank, 1)
    for a in forms:
        out = out.wedge(a)
    return pair(out, P)


def sharp(P: Multivector, alpha: MultiForm) -> Multivector:
    """#_P(alpha), characterised by <beta, #_P(alpha)> = P(alpha, beta)."""
    if P.degree != 2 and P.terms:
        raise ExteriorError("sharp needs a bivector")
    return alpha.contract(P)


class ProductElement:
    """Pair (P, Q) of degrees (r, r-1) standing for a section of the exterior
    algebra of (module x R), or of its dual.

    The pair is identified with ``P + eps ^ Q`` where ``eps`` is an extra last
    generator (the unit section), or with ``a + eps* ^ b`` for forms.
    """

    __slots__ = ("first", "second")

    def __init__(self, first: _Exterior, second: _Exterior):
        if type(first) is not type(second):
            raise ExteriorError("both components must be of the same kind")
        if first.rank != second.rank or first.ring != second.ring:
            raise ExteriorError("components must share rank and ring")
        if first.terms and second.terms and second.degree != first.degree - 1:
            raise ExteriorError("second component must have degree one less than the first")
        self.first = first
        self.second = second

    @property
    def cls(self):
        return type(self.first)

    @property
    def degree(self) -> int:
        if self.first.terms or not self.second.terms:
            return self.first.degree
        return self.second.degree + 1

    @property
    def rank(self) -> int:
        return self.first.rank

    @property
    def ring(self) -> Ring:
        return self.first.ring

    @classmethod
    def zero(cls, kind: type, ring: Ring, rank: int, degree: int):
        return cls(kind.zero(ring, rank, degree), kind.zero(ring, rank, degree - 1))

    def embed(self) -> _Exterior:
        n = self.rank
        cls = self.cls
        p = self.first.with_rank(n + 1)
        q = self.second.with_rank(n + 1)
        eps = cls._raw(self.ring, n + 1, 1, {(n,): self.ring.one()})
        out = eps.wedge(q)
        if not p.terms:
            return out if out.terms else cls.zero(self.ring, n + 1, self.degree)
        return p + out

    @classmethod
    def split(cls, elem: _Exterior) -> "ProductElement":
        """Inverse of embed: the last generator plays the role of the unit section."""
        n = elem.rank - 1
        if n < 0:
            raise ExteriorError("cannot split a rank-0 element")
        first: dict = {}
        second: dict = {}
        for k, v in elem.terms.items():
            if k and k[-1] == n:
                # eps ^ e_J = (-1)^{|J|} e_J ^ eps
                rest = k[:-1]
                second[rest] = -v if len(rest) & 1 else v
            else:
                first[k] = v
        kind = type(elem)
        return cls(kind._raw(elem.ring, n, elem.degree, first),
                   kind._raw(elem.ring, n, elem.degree - 1, second))

    def __eq__(self, other):
        if not isinstance(other, ProductElement):
            return NotImplemented
        return self.first == other.first and self.second == other.second

    def __hash__(self):
        return hash((self.first, self.second))

    def __add__(self, other):
        return ProductElement(self.first + other.first, self.second + other.second)

    def __sub__(self, other):
        return ProductElement(self.first - other.first, self.second - other.second)

    def __neg__(self):
        return ProductElement(-self.first, -self.second)

    def scale(self, c):
        return ProductElement(self.first.scale(c), self.second.scale(c))

    def is_zero(self) -> bool:
        return not self.first.terms and not self.second.terms

    def __repr__(self):
        return f"ProductElement({self.first!r}, {self.second!r})"


def product_wedge(a: ProductElement, b: ProductElement) -> ProductElement:
    """(P, Q) ^ (P', Q') = (P ^ P', Q ^ P' + (-1)^r P ^ Q')."""
    r = a.degree
    sign = -1 if r & 1 else 1
    return ProductElement(a.first.wedge(b.first),
                          a.second.wedge(b.first) + a.first.wedge(b.second).scale(sign))


def product_contract(phi: ProductElement, P: ProductElement) -> ProductElement:
    """Contraction between pairs of opposite kind.

    Forms into multivectors: i_(a,b)(P,Q) = (i_a P + i_b Q, (-1)^k i_a Q).
    Multivectors into forms: i_(P,Q)(a,b) = (i_P a + i_Q b, (-1)^r i_P b).
    """
    k = phi.degree
    sign = -1 if k & 1 else 1
    first = phi.first.contract(P.first) + phi.second.contract(P.second)
    return ProductElement(first, phi.first.contract(P.second).scale(sign))


def as_form(P: Multivector) -> MultiForm:
    """Reinterpret multivector coefficients on the dual frame (for a dual algebroid)."""
    return MultiForm._raw(P.ring, P.rank, P.degree, dict(P.terms))


def as_multivector(omega: MultiForm) -> Multivector:
    return Multivector._raw(omega.ring, omega.rank, omega.degree, dict(omega.terms))
