"""Exterior algebra on R^7 with polynomial coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Mapping

from .coeffring import COORDS, R0, Poly, PolyRing, as_rational, poly_partial
from .errors import DegreeMismatch

DIM = 7
FULL = tuple(range(1, DIM + 1))


def sort_sign(seq: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple; sign 0 on repeats."""
    seq = tuple(seq)
    if len(set(seq)) != len(seq):
        return 0, ()
    inv = sum(1 for a, b in combinations(seq, 2) if a > b)
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


@lru_cache(maxsize=None)
def _merge(i: tuple, j: tuple) -> tuple[int, tuple]:
    return sort_sign(i + j)


@lru_cache(maxsize=None)
def basis(k: int) -> tuple[tuple[int, ...], ...]:
    """Increasing index tuples of length k in lexicographic order."""
    return tuple(combinations(FULL, k))


def complement(idx: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(i for i in FULL if i not in idx)


@dataclass(frozen=True)
class Orientation:
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("orientation sign must be +1 or -1")


POSITIVE = Orientation(1)


def _coerce_coeff(c, r: PolyRing) -> Poly:
    if isinstance(c, Poly):
        return c
    return r.const(as_rational(c))


class KForm:
    """A homogeneous form of fixed degree: map from index tuples to Poly."""

    __slots__ = ("degree", "terms", "ring")

    def __init__(self, degree: int, terms: Mapping[tuple, object] | None = None, ring_: PolyRing | None = None):
        if not 0 <= degree <= DIM:
            raise ValueError(f"degree {degree} outside 0..7")
        r = ring_ or R0
        raw = {}
        for idx, c in (terms or {}).items():
            if isinstance(c, Poly):
                r = r.join(c.ring)
            raw[tuple(idx)] = c
        clean = {}
        for idx, c in raw.items():
            if len(idx) != degree:
                raise DegreeMismatch(f"tuple {idx} in a {degree}-form")
            s, srt = sort_sign(idx)
            if s == 0 or any(not 1 <= i <= DIM for i in idx):
                raise ValueError(f"invalid index tuple {idx}")
            p = _coerce_coeff(c, r).embed(r) * s
            clean[srt] = clean[srt] + p if srt in clean else p
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", {k: v for k, v in clean.items() if v})
        object.__setattr__(self, "ring", r)

    def __setattr__(self, *_):
        raise AttributeError("KForm is immutable")

    # constructors
    @staticmethod
    def e(*idx: int, coeff=1, ring_: PolyRing | None = None) -> "KForm":
        return KForm(len(idx), {tuple(idx): coeff}, ring_)

    @staticmethod
    def zero(degree: int, ring_: PolyRing | None = None) -> "KForm":
        return KForm(degree, {}, ring_)

    @staticmethod
    def scalar(c, ring_: PolyRing | None = None) -> "KForm":
        return KForm(0, {(): c}, ring_)

    # helpers
    def coeff(self, *idx: int) -> Poly:
        s, srt = sort_sign(idx)
        if s == 0 or len(idx) != self.degree:
            return self.ring.zero()
        return self.terms.get(srt, self.ring.zero()) * s

    def embed(self, r: PolyRing) -> "KForm":
        return KForm(self.degree, {k: v.embed(r) for k, v in self.terms.items()}, r)

    def map_coeffs(self, f: Callable[[Poly], Poly]) -> "KForm":
        return KForm(self.degree, {k: f(v) for k, v in self.terms.items()}, self.ring)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(v.is_constant() for v in self.terms.values())

    def vector(self) -> list[Poly]:
        """Coefficients in the lexicographic basis of the degree."""
        z = self.ring.zero()
        return [self.terms.get(b, z) for b in basis(self.degree)]

    @staticmethod
    def from_vector(degree: int, vec, ring_: PolyRing | None = None) -> "KForm":
        return KForm(degree, dict(zip(basis(degree), vec)), ring_)

    # arithmetic
    def _check(self, o: "KForm"):
        if o.degree != self.degree:
            raise DegreeMismatch(f"{self.degree}-form vs {o.degree}-form")

    def __add__(self, o: "KForm") -> "KForm":
        if not isinstance(o, KForm):
            return NotImplemented
        self._check(o)
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out[k] + v if k in out else v
        return KForm(self.degree, out, self.ring.join(o.ring))

    def __neg__(self) -> "KForm":
        return KForm(self.degree, {k: -v for k, v in self.terms.items()}, self.ring)

    def __sub__(self, o: "KForm") -> "KForm":
        if not isinstance(o, KForm):
            return NotImplemented
        return self + (-o)

    def __mul__(self, c) -> "KForm":
        if isinstance(c, KForm):
            return NotImplemented
        if not isinstance(c, Poly):
            c = as_rational(c)
        return KForm(self.degree, {k: v * c for k, v in self.terms.items()}, self.ring)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "KForm":
        return self * (1 / as_rational(c))

    def __xor__(self, o: "KForm") -> "KForm":
        return wedge(self, o)

    def __eq__(self, o):
        if not isinstance(o, KForm):
            return NotImplemented
        if o.degree != self.degree or o.terms.keys() != self.terms.keys():
            return False
        return all(self.terms[k] == o.terms[k] for k in self.terms)

    __hash__ = None

    def __repr__(self):
        return f"KForm({self.degree}, {form_to_str(self)})"

    def __str__(self):
        return form_to_str(self)


def wedge(w: KForm, h: KForm) -> KForm:
    deg = w.degree + h.degree
    r = w.ring.join(h.ring)
    if deg > DIM:
        return KForm.zero(DIM, r)
    out: dict = {}
    for i, a in w.terms.items():
        si = set(i)
        for j, b in h.terms.items():
            if si.intersection(j):
                continue
            s, k = _merge(i, j)
            p = a * b * s
            out[k] = out[k] + p if k in out else p
    return KForm(deg, out, r)


def wedge_all(*forms: KForm) -> KForm:
    acc = forms[0]
    for f in forms[1:]:
        acc = wedge(acc, f)
    return acc


def ext_d(w: KForm) -> KForm:
    if w.degree == DIM:
        return KForm.zero(DIM, w.ring)
    out: dict = {}
    for idx, c in w.terms.items():
        for v in range(1, DIM + 1):
            if v in idx:
                continue
            dc = poly_partial(c, COORDS[v - 1])
            if dc.is_zero():
                continue
            s, k = _merge((v,), idx)
            p = dc * s
            out[k] = out[k] + p if k in out else p
    return KForm(w.degree + 1, out, w.ring)


@lru_cache(maxsize=None)
def _hodge_sign(idx: tuple) -> tuple[int, tuple]:
    comp = complement(idx)
    s, _ = sort_sign(idx + comp)
    return s, comp


def hodge(w: KForm, orient: Orientation = POSITIVE) -> KForm:
    out = {}
    for idx, c in w.terms.items():
        s, comp = _hodge_sign(idx)
        out[comp] = c * (s * orient.sign)
    return KForm(DIM - w.degree, out, w.ring)


def contract(i: int, w: KForm) -> KForm:
    """Interior product of the basis vector e_i into w."""
    if w.degree == 0:
        return KForm.zero(0, w.ring)
    out = {}
    for idx, c in w.terms.items():
        if i in idx:
            pos = idx.index(i)
            k = idx[:pos] + idx[pos + 1 :]
            out[k] = c * (-1 if pos % 2 else 1)
    return KForm(w.degree - 1, out, w.ring)


def volume(orient: Orientation = POSITIVE, ring_: PolyRing | None = None) -> KForm:
    return KForm(DIM, {FULL: orient.sign}, ring_)


def top_coefficient(w: KForm, orient: Orientation = POSITIVE) -> Poly:
    """c with w = c * vol, for a 7-form w."""
    if w.degree != DIM:
        raise DegreeMismatch("not a top-degree form")
    return w.terms.get(FULL, w.ring.zero()) * orient.sign


def inner(w: KForm, h: KForm, orient: Orientation = POSITIVE) -> Poly:
    """Pointwise inner product, read off from w ^ *h = c * vol."""
    if w.degree != h.degree:
        raise DegreeMismatch(f"inner of {w.degree}-form and {h.degree}-form")
    return top_coefficient(wedge(w, hodge(h, orient)), orient)


def norm_sq(w: KForm) -> Poly:
    """Sum of squared coefficients; equals inner(w, w)."""
    acc = w.ring.zero()
    for c in w.terms.values():
        acc = acc + c * c
    return acc


# ---------------------------------------------------------------- text form

def form_to_str(w: KForm) -> str:
    if not w.terms:
        return "0"
    parts = []
    for idx in sorted(w.terms):
        c = w.terms[idx]
        cs = str(c)
        label = f"e[{','.join(map(str, idx))}]" if idx else ""
        if not idx:
            parts.append(f"({cs})")
        elif cs == "1":
            parts.append(label)
        elif cs == "-1":
            parts.append(f"-{label}")
        else:
            parts.append(f"({cs})*{label}")
    s = parts[0]
    for p in parts[1:]:
        s += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return s


def constant_vector(w: KForm) -> list[Fraction]:
    return [c.constant_value() for c in w.vector()]
