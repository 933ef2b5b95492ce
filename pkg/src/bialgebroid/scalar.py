"""Exact coefficient arithmetic.

Scalars are polynomials with rational coefficients in a declared list of
base variables.  A ring may additionally be *time extended*: it then carries
a time variable ``t`` and a Laurent generator ``u`` standing for ``exp(-t)``,
so ``d/dt u = -u`` and negative powers of ``u`` encode ``exp(k t)``.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

TIME = "t"
EXPGEN = "u"
_RESERVED = (TIME, EXPGEN)


class ScalarError(ValueError):
    pass


class ParseError(ScalarError):
    """Syntax error in a polynomial string; ``pos`` is the 0-based offset."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _as_rational(c):
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Rational):
        return _norm(Fraction(c))
    raise TypeError(f"not an exact rational: {c!r}")


class Ring:
    """Ring context: ordered base variables, optionally time extended."""

    __slots__ = ("variables", "time_extended", "_key", "_index")

    def __init__(self, variables: Iterable[str] = (), time_extended: bool = False):
        variables = tuple(variables)
        for v in variables:
            if not isinstance(v, str) or not v.isidentifier():
                raise ScalarError(f"invalid variable name {v!r}")
            if v in _RESERVED:
                raise ScalarError(f"{v!r} is reserved and cannot be a base variable")
        if len(set(variables)) != len(variables):
            raise ScalarError(f"duplicate variable names in {variables}")
        self.variables = variables
        self.time_extended = bool(time_extended)
        self._key = (variables, self.time_extended)
        names = variables + (_RESERVED if self.time_extended else ())
        self._index = {name: i for i, name in enumerate(names)}

    @property
    def names(self) -> tuple[str, ...]:
        """All generator names, in monomial-order position."""
        return self.variables + (_RESERVED if self.time_extended else ())

    @property
    def directions(self) -> tuple[str, ...]:
        """Names of the independent derivation directions (base variables, then t)."""
        return self.variables + ((TIME,) if self.time_extended else ())

    @property
    def nexp(self) -> int:
        return len(self._index)

    def __eq__(self, other):
        return isinstance(other, Ring) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Ring({list(self.variables)!r}, time_extended={self.time_extended})"

    # constructors ---------------------------------------------------------
    def zero(self) -> "Scalar":
        return Scalar(self, {})

    def one(self) -> "Scalar":
        return self.const(1)

    def const(self, c) -> "Scalar":
        c = _as_rational(c)
        if c == 0:
            return self.zero()
        return Scalar(self, {(0,) * self.nexp: c})

    def var(self, name: str) -> "Scalar":
        if name not in self._index:
            raise ScalarError(f"unknown variable {name!r} in {self!r}")
        exp = [0] * self.nexp
        exp[self._index[name]] = 1
        return Scalar(self, {tuple(exp): 1})

    def gens(self) -> tuple["Scalar", ...]:
        return tuple(self.var(v) for v in self.variables)

    def monomial(self, powers: Mapping[str, int], coeff=1) -> "Scalar":
        exp = [0] * self.nexp
        for name, p in powers.items():
            if name not in self._index:
                raise ScalarError(f"unknown variable {name!r} in {self!r}")
            if p < 0 and name != EXPGEN:
                raise ScalarError(f"negative power of {name!r}")
            exp[self._index[name]] = p
        c = _as_rational(coeff)
        return Scalar(self, {tuple(exp): c} if c else {})

    def coerce(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.ring == self:
                return value
            return self.lift(value)
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)

    def parse(self, text: str) -> "Scalar":
        return _Parser(text, self).parse()

    def extend_time(self) -> "Ring":
        return Ring(self.variables, time_extended=True)

    def contains(self, other: "Ring") -> bool:
        """True when every scalar of ``other`` is a scalar of this ring."""
        if other.time_extended and not self.time_extended:
            return False
        return set(other.variables) <= set(self.variables)

    def lift(self, s: "Scalar") -> "Scalar":
        """Map a scalar of a sub-ring into this ring."""
        if s.ring == self:
            return s
        if not self.contains(s.ring):
            raise ScalarError(f"cannot lift from {s.ring!r} into {self!r}")
        positions = [self._index[n] for n in s.ring.names]
        out = {}
        for exp, c in s.terms.items():
            new = [0] * self.nexp
            for p, e in zip(positions, exp):
                new[p] = e
            out[tuple(new)] = c
        return Scalar(self, out)

    def direction_index(self, name: str) -> int:
        if name == EXPGEN:
            raise ScalarError("u is not an independent direction; differentiate by t")
        if name not in self._index:
            raise ScalarError(f"unknown variable {name!r} in {self!r}")
        return self._index[name]


class Scalar:
    """Immutable polynomial (Laurent in ``u``) with exact rational coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # helpers ---------------------------------------------------------------
    def _other(self, other) -> "Scalar | None":
        if isinstance(other, Scalar):
            if other.ring is self.ring or other.ring == self.ring:
                return other
            raise ScalarError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
        try:
            return self.ring.const(other)
        except TypeError:
            return None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        """Rational value of a constant scalar."""
        if not self.is_constant():
            raise ScalarError(f"{self} is not constant")
        return next(iter(self.terms.values()), 0)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        if not self.terms:
            return o
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return Scalar(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not self.terms or not o.terms:
            return self.ring.zero()
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Scalar(self.ring, {e: _norm(c) for e, c in out.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = _as_rational(other)
        if c == 0:
            raise ZeroDivisionError("division of a scalar by zero")
        return Scalar(self.ring, {e: _norm(Fraction(v) / c) for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "Scalar":
        """Inverse of a unit: a nonzero rational times a power of ``u``."""
        if len(self.terms) == 1:
            (exp, c), = self.terms.items()
            only_u = self.ring.time_extended and not any(exp[:-1])
            if only_u or not any(exp):
                return Scalar(self.ring, {tuple(-e for e in exp): _norm(Fraction(1) / c)})
        raise ScalarError(f"{self} is not invertible in {self.ring!r}")

    def partial(self, var: str) -> "Scalar":
        """Partial derivative along a base variable or ``t`` (using d/dt u = -u)."""
        i = self.ring.direction_index(var)
        out: dict = {}
        if var == TIME:
            ui = i + 1
            for e, c in self.terms.items():
                if e[i]:
                    ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                    out[ne] = out.get(ne, 0) + c * e[i]
                if e[ui]:
                    out[e] = out.get(e, 0) - c * e[ui]
        else:
            for e, c in self.terms.items():
                if e[i]:
                    ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                    out[ne] = out.get(ne, 0) + c * e[i]
        return Scalar(self.ring, {e: _norm(c) for e, c in out.items() if c})

    def scale_u(self, k: int) -> "Scalar":
        """Multiply by ``u**k`` (requires a time-extended ring)."""
        if not self.ring.time_extended:
            raise ScalarError("u is only available in time-extended rings")
        return Scalar(self.ring, {e[:-1] + (e[-1] + k,): c for e, c in self.terms.items()})

    # comparison / hashing -------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.ring == other.ring and self.terms == other.terms
        try:
            o = self.ring.const(other)
        except TypeError:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self):
        """Terms in canonical order: lexicographically decreasing exponent tuples."""
        return sorted(self.terms.items(), key=lambda it: it[0], reverse=True)

    # printing --------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        pieces = []
        for exp, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, exp):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if mag != 1 or not factors:
                factors.insert(0, str(mag))
            pieces.append(("-" if c < 0 else "+", "*".join(factors)))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Scalar({str(self)!r})"


class _Parser:
    """Recursive-descent parser for the polynomial grammar.

    expression := ['-'|'+'] term (('+'|'-') term)*
    term       := factor ('*' factor)*
    factor     := atom ('^' ['-'] integer)?   negative only on units
    atom       := integer ('/' positive-integer)? | variable | '(' expression ')'
    """

    def __init__(self, text: str, ring: Ring):
        if not isinstance(text, str):
            raise ParseError("expected a string", repr(text), 0)
        self.text = text
        self.ring = ring
        self.pos = 0

    def error(self, message: str, pos: int | None = None):
        raise ParseError(message, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Scalar:
        value = self.expression()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return value

    def expression(self) -> Scalar:
        sign = 1
        if self.peek() and self.peek() in "+-":
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        value = self.term()
        if sign < 0:
            value = -value
        while self.peek() and self.peek() in "+-":
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Scalar:
        value = self.factor()
        while self.peek() == "*":
            self.pos += 1
            value = value * self.factor()
        return value

    def factor(self) -> Scalar:
        base = self.atom()
        if self.peek() != "^":
            return base
        self.pos += 1
        negative = self.peek() == "-"
        if negative:
            self.pos += 1
        exp_pos = self.pos
        n = self.integer()
        if not negative:
            return base ** n
        try:
            return base ** (-n)
        except ScalarError:
            self.error("negative exponent needs an invertible base such as u", exp_pos)

    def atom(self) -> Scalar:
        ch = self.peek()
        if not ch:
            self.error("unexpected end of input")
        if ch == "(":
            self.pos += 1
            value = self.expression()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return value
        if ch.isdigit():
            num = self.integer()
            if self.peek() == "/":
                self.pos += 1
                den_pos = self.pos
                self.skip()
                den = self.integer()
                if den == 0:
                    self.error("zero denominator", den_pos)
                return self.ring.const(Fraction(num, den))
            return self.ring.const(num)
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            name = self.text[start:self.pos]
            if name not in self.ring._index:
                if name in _RESERVED:
                    self.error(f"{name!r} requires a time-extended ring", start)
                self.error(f"unknown variable {name!r}", start)
            return self.ring.var(name)
        self.error(f"unexpected {ch!r}")

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])


def parse_scalar(text: str, ring: Ring) -> Scalar:
    return ring.parse(text)


def partial(s: Scalar, var: str) -> Scalar:
    return s.partial(var)
