"""Exact scalars: rationals, Gaussian rationals and multivariate polynomials.

Rationals are :class:`fractions.Fraction`.  Polynomials live in a
:class:`PolyRing` whose symbols are the seven coordinates ``x1..x7``
followed by any declared parameters.  Exponent vectors are dense tuples
over that fixed order, so equal polynomials have equal term maps.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .errors import MissingAssignment, NotACoordinate, ParseError, RingMismatch, UnknownSymbol

Rational = Fraction
COORDS = tuple(f"x{i}" for i in range(1, 8))

Scalar = Union[int, Fraction]


def as_rational(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"not a rational: {v!r}")


class GaussianRational:
    """An element re + i*im of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re: Scalar = 0, im: Scalar = 0):
        object.__setattr__(self, "re", as_rational(re))
        object.__setattr__(self, "im", as_rational(im))

    def __setattr__(self, *_):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def coerce(v) -> "GaussianRational":
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, complex):
            raise TypeError("floats are not exact")
        return GaussianRational(v, 0)

    def __add__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussianRational.coerce(o))

    def __rsub__(self, o):
        return GaussianRational.coerce(o) - self

    def __mul__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm_sq()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, o):
        return self * GaussianRational.coerce(o).inverse()

    def __rtruediv__(self, o):
        return GaussianRational.coerce(o) * self.inverse()

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.im == 0 and self.re == o
        if isinstance(o, GaussianRational):
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I = GaussianRational(0, 1)


class PolyRing:
    """Ordered symbols; the first seven are always the coordinates."""

    __slots__ = ("names", "params", "_index")

    def __init__(self, params: Iterable[str] = ()):
        params = tuple(params)
        for p in params:
            if p in COORDS or not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", p):
                raise ValueError(f"bad parameter name {p!r}")
        if len(set(params)) != len(params):
            raise ValueError("duplicate parameter")
        self.params = params
        self.names = COORDS + params
        self._index = {n: k for k, n in enumerate(self.names)}

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownSymbol(f"unknown symbol {name!r}") from None

    def is_coordinate(self, name: str) -> bool:
        return self.index(name) < 7

    def join(self, other: "PolyRing") -> "PolyRing":
        if other is self or other.params == self.params:
            return self
        extra = tuple(p for p in other.params if p not in self._index)
        return ring(self.params + extra)

    def __eq__(self, o):
        return isinstance(o, PolyRing) and o.params == self.params

    def __hash__(self):
        return hash(self.params)

    def __repr__(self):
        return f"PolyRing(params={self.params!r})"

    # constructors
    def const(self, c: Scalar) -> "Poly":
        c = as_rational(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str) -> "Poly":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Poly(self, {tuple(e): Fraction(1)})

    def zero(self) -> "Poly":
        return Poly(self, {})


@lru_cache(maxsize=None)
def ring(params: tuple[str, ...] = ()) -> PolyRing:
    return PolyRing(params)


R0 = ring(())


class Poly:
    """Multivariate polynomial with rational coefficients over a PolyRing."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring_: PolyRing, terms: Mapping[tuple, Fraction]):
        object.__setattr__(self, "ring", ring_)
        object.__setattr__(self, "terms", {e: c for e, c in terms.items() if c})
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("Poly is immutable")

    # coercion
    def _lift(self, o) -> tuple["Poly", "Poly"]:
        if isinstance(o, Poly):
            if o.ring == self.ring:
                return self, o
            r = self.ring.join(o.ring)
            return self.embed(r), o.embed(r)
        if isinstance(o, (int, Fraction)):
            return self, self.ring.const(o)
        raise TypeError(f"cannot combine Poly with {type(o).__name__}")

    def embed(self, r: PolyRing) -> "Poly":
        if r == self.ring:
            return self
        pos = [r.index(n) for n in self.ring.names]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * r.nvars
            for k, p in enumerate(pos):
                ne[p] = e[k]
            out[tuple(ne)] = c
        return Poly(r, out)

    # arithmetic
    def __add__(self, o):
        try:
            a, b = self._lift(o)
        except TypeError:
            return NotImplemented
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(a.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        try:
            a, b = self._lift(o)
        except TypeError:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            o = as_rational(o)
            if not o:
                return self.ring.zero()
            return Poly(self.ring, {e: c * o for e, c in self.terms.items()})
        try:
            a, b = self._lift(o)
        except TypeError:
            return NotImplemented
        out: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(a.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction)):
            return self * (1 / as_rational(o))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative int")
        out = self.ring.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = self.ring.const(o)
        if not isinstance(o, Poly):
            return NotImplemented
        a, b = self._lift(o)
        return a.terms == b.terms

    def __hash__(self):
        # hash must agree across embeddings, so key on named exponents
        if self._hash is None:
            items = frozenset(
                (tuple((n, k) for n, k in zip(self.ring.names, e) if k), c)
                for e, c in self.terms.items()
            )
            object.__setattr__(self, "_hash", hash(items))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()), Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(n for n, k in zip(self.ring.names, e) if k)
        return used

    def coordinate_free(self) -> bool:
        return all(not any(e[:7]) for e in self.terms)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return poly_to_str(self)


def poly_eval(p: Poly, assignment: Mapping[str, Scalar]) -> Fraction:
    """Evaluate p exactly; every variable occurring in p must be assigned."""
    missing = sorted(p.variables() - set(assignment))
    if missing:
        raise MissingAssignment(f"unassigned: {', '.join(missing)}")
    vals = [as_rational(assignment[n]) if n in assignment else None for n in p.ring.names]
    total = Fraction(0)
    for e, c in p.terms.items():
        t = c
        for v, k in zip(vals, e):
            if k:
                t *= v**k
        total += t
    return total


def poly_subs(p: Poly, assignment: Mapping[str, Scalar]) -> Poly:
    """Partially substitute rational values; unassigned symbols stay symbolic."""
    idx = {p.ring.index(n): as_rational(v) for n, v in assignment.items() if n in p.ring._index}
    out: dict = {}
    for e, c in p.terms.items():
        ne = list(e)
        for k, v in idx.items():
            if ne[k]:
                c = c * v ** ne[k]
                ne[k] = 0
        key = tuple(ne)
        out[key] = out.get(key, 0) + c
    return Poly(p.ring, out)


def poly_partial(p: Poly, v: str) -> Poly:
    """Formal derivative with respect to a coordinate symbol."""
    k = p.ring.index(v)
    if k >= 7:
        raise NotACoordinate(f"{v} is a parameter")
    out = {}
    for e, c in p.terms.items():
        if e[k]:
            ne = list(e)
            ne[k] -= 1
            out[tuple(ne)] = c * e[k]
    return Poly(p.ring, out)


def monomial_key(e: tuple) -> tuple:
    """Graded order; ties broken on the reversed exponent vector."""
    return (sum(e), tuple(reversed(e)))


def poly_to_str(p: Poly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for e in sorted(p.terms, key=monomial_key, reverse=True):
        c = p.terms[e]
        mono = "*".join(
            (n if k == 1 else f"{n}^{k}") for n, k in zip(p.ring.names, e) if k
        )
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        parts.append(("-" if c < 0 else "+", body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            if m.group(1) is not None:
                self.toks.append(("int", m.group(1), m.start(1)))
            elif m.group(2) is not None:
                self.toks.append(("name", m.group(2), m.start(2)))
            elif m.group(3) is not None:
                self.toks.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def peek(self, k: int = 0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else ("eof", "", len(self.text))

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, value: str):
        t = self.next()
        if t[1] != value or t[0] == "eof":
            raise ParseError(f"expected {value!r}, found {t[1] or 'end of input'!r}", self.text, t[2])
        return t

    def error(self, msg: str):
        t = self.peek()
        raise ParseError(msg, self.text, t[2])


class PolyParser:
    """Recursive-descent parser for the polynomial grammar.

    A leading unary sign is accepted on a whole polynomial so printed
    output with a negative first term reparses.
    """

    def __init__(self, r: PolyRing):
        self.ring = r

    def parse(self, text: str) -> Poly:
        ts = _Tokens(text)
        p = self.poly(ts)
        if ts.peek()[0] != "eof":
            ts.error(f"unexpected {ts.peek()[1]!r}")
        return p

    def poly(self, ts: _Tokens) -> Poly:
        sign = 1
        if ts.peek()[1] in "+-" and ts.peek()[0] == "op":
            sign = -1 if ts.next()[1] == "-" else 1
        acc = self.term(ts) * sign
        while ts.peek()[0] == "op" and ts.peek()[1] in ("+", "-"):
            op = ts.next()[1]
            t = self.term(ts)
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self, ts: _Tokens) -> Poly:
        acc = self.factor(ts)
        while ts.peek()[0] == "op" and ts.peek()[1] == "*":
            ts.next()
            acc = acc * self.factor(ts)
        return acc

    def factor(self, ts: _Tokens) -> Poly:
        kind, val, pos = ts.peek()
        if kind == "int":
            ts.next()
            num = int(val)
            if ts.peek()[1] == "/" and ts.peek(1)[0] == "int":
                ts.next()
                den = int(ts.next()[1])
                if den == 0:
                    raise ParseError("zero denominator", ts.text, pos)
                base = self.ring.const(Fraction(num, den))
            else:
                base = self.ring.const(num)
        elif kind == "name":
            ts.next()
            if val not in self.ring._index:
                raise UnknownSymbol(f"undeclared symbol {val!r}", ts.text, pos)
            base = self.ring.var(val)
        elif kind == "op" and val == "(":
            ts.next()
            base = self.poly(ts)
            ts.expect(")")
        else:
            ts.error(f"unexpected {val or 'end of input'!r}")
        while ts.peek()[1] == "^" and ts.peek()[0] == "op":
            ts.next()
            k, v, p = ts.next()
            if k != "int":
                raise ParseError("exponent must be a non-negative integer", ts.text, p)
            base = base ** int(v)
        return base


def parse_poly(text: str, params: Iterable[str] = ()) -> Poly:
    return PolyParser(ring(tuple(params))).parse(text)
