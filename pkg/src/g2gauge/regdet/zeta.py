"""Zeta-regularized products of the form prod_{n>0} (c n^k)^m."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..coeffring import as_rational
from ..errors import UnsupportedPattern

ZETA0 = Fraction(-1, 2)
# zeta'(0) = -log(2 pi)/2 is kept symbolic; exp(-zeta'(0)) = (2 pi)^(1/2)


def _factor_int(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class PowerProduct:
    """prod base^exp over primes and the symbol 'pi', exponents rational."""

    exps: tuple = ()

    @staticmethod
    def of(c, exp=1, pi: int = 0) -> "PowerProduct":
        c = as_rational(c)
        if c <= 0:
            raise UnsupportedPattern(f"non-positive base {c}")
        exp = as_rational(exp)
        d: dict = {}
        for p, e in _factor_int(c.numerator).items():
            d[p] = d.get(p, 0) + e * exp
        for p, e in _factor_int(c.denominator).items():
            d[p] = d.get(p, 0) - e * exp
        if pi:
            d["pi"] = Fraction(pi) * exp
        return PowerProduct.from_dict(d)

    @staticmethod
    def from_dict(d: dict) -> "PowerProduct":
        return PowerProduct(tuple(sorted(((k, Fraction(v)) for k, v in d.items() if v), key=lambda kv: str(kv[0]))))

    def as_dict(self) -> dict:
        return dict(self.exps)

    def __mul__(self, o: "PowerProduct") -> "PowerProduct":
        d = self.as_dict()
        for k, v in o.exps:
            d[k] = d.get(k, 0) + v
        return PowerProduct.from_dict(d)

    def __pow__(self, e) -> "PowerProduct":
        e = as_rational(e)
        return PowerProduct.from_dict({k: v * e for k, v in self.exps})

    def inverse(self) -> "PowerProduct":
        return self ** -1

    def is_one(self) -> bool:
        return not self.exps

    def rational(self) -> Fraction | None:
        """Exact value when it is rational, else None."""
        val = Fraction(1)
        for k, v in self.exps:
            if k == "pi" or v.denominator != 1:
                return None
            val *= Fraction(k) ** int(v)
        return val

    def __str__(self):
        if not self.exps:
            return "1"
        parts = []
        for k, v in self.exps:
            parts.append(str(k) if v == 1 else f"{k}^({v})")
        return "*".join(parts)


@dataclass(frozen=True)
class ZetaProduct:
    """prod_{n>0} (c pi^j n^k)^m with rational c > 0."""

    c: Fraction = Fraction(1)
    pi: int = 0
    k: Fraction = Fraction(0)
    m: Fraction = Fraction(1)

    def __str__(self):
        base = []
        if self.c != 1 or (not self.pi and not self.k):
            base.append(str(self.c))
        if self.pi:
            base.append("pi" if self.pi == 1 else f"pi^{self.pi}")
        if self.k:
            base.append("n" if self.k == 1 else f"n^{self.k}")
        s = f"prod_(n>0) ({'*'.join(base)})"
        return s if self.m == 1 else f"{s}^({self.m})"


@dataclass
class ZetaValue:
    value: PowerProduct
    symbolic: str
    steps: list = field(default_factory=list)

    @property
    def rational(self) -> Fraction | None:
        return self.value.rational()


def zeta_product_eval(z: ZetaProduct) -> ZetaValue:
    """prod (c n^k)^m = c^(m zeta(0)) exp(-k m zeta'(0)) = c^(-m/2) (2 pi)^(k m / 2)."""
    c_part = PowerProduct.of(z.c, z.m * ZETA0, pi=z.pi)
    n_part = PowerProduct.of(2, z.k * z.m / 2, pi=1) if z.k * z.m else PowerProduct()
    steps = [
        f"constant factor: prod c^m = c^(m*zeta(0)) = ({z.c}*pi^{z.pi})^({z.m * ZETA0})",
        f"power of n: prod n^(k m) = exp(-k m zeta'(0)) = (2*pi)^({z.k * z.m / 2})",
    ]
    base = f"{z.c}" + (f"*pi^{z.pi}" if z.pi else "")
    symbolic = f"({base})^({z.m}*zeta(0)) * exp(-({z.k * z.m})*zeta'(0))"
    return ZetaValue(c_part * n_part, symbolic, steps)


_FACTOR = re.compile(r"\s*(?:(?P<rat>\d+(?:/\d+)?)|(?P<sym>pi|n)(?:\s*\^\s*(?P<exp>\d+))?)\s*")


def parse_zeta_product(text: str) -> ZetaProduct:
    """Parse 'prod(2*pi*n)^2', 'prod(3)', 'prod(n^2)^(1/2)'."""
    m = re.fullmatch(r"\s*prod\s*\((?P<body>[^()]*)\)\s*(?:\^\s*(?:\((?P<e1>-?\d+(?:/\d+)?)\)|(?P<e2>\d+)))?\s*", text)
    if not m:
        raise UnsupportedPattern(f"not of the form prod(c*n^k)^m: {text!r}")
    c, pi, k = Fraction(1), 0, Fraction(0)
    for piece in m.group("body").split("*"):
        f = _FACTOR.fullmatch(piece)
        if not f:
            raise UnsupportedPattern(f"factor {piece.strip()!r} outside c*pi^j*n^k")
        if f.group("rat"):
            c *= Fraction(f.group("rat"))
        else:
            e = int(f.group("exp") or 1)
            if f.group("sym") == "pi":
                pi += e
            else:
                k += e
    if c <= 0:
        raise UnsupportedPattern("constant must be positive")
    e = m.group("e1") or m.group("e2") or "1"
    return ZetaProduct(c, pi, k, Fraction(e))
