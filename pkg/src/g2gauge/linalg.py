"""Exact dense linear algebra over Q or Q(i).

Entries are Fractions or GaussianRationals; matrices are lists of rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list]


def _zero_like(x):
    return x * 0


def rref(m: Sequence[Sequence], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    If ``ncols`` is given, pivots are only searched in the first ncols
    columns (useful for augmented systems).
    """
    a = [list(r) for r in m]
    if not a:
        return a, []
    rows, cols = len(a), len(a[0])
    limit = cols if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        p = next((i for i in range(r, rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c] if not isinstance(a[r][c], int) else Fraction(1, a[r][c])
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    return len(rref(m)[1]) if m else 0


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of {x : m x = 0}, one vector per free column."""
    if not m:
        return [[Fraction(int(i == j)) for i in range(ncols or 0)] for j in range(ncols or 0)]
    cols = len(m[0])
    red, piv = rref(m)
    zero = _zero_like(next((x for row in m for x in row), Fraction(0)))
    one = zero + 1
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = [zero] * cols
        v[f] = one
        for i, p in enumerate(piv):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def solve(m: Sequence[Sequence], b: Sequence) -> list | None:
    """One solution of m x = b, or None when inconsistent."""
    cols = len(m[0])
    aug = [list(r) + [bi] for r, bi in zip(m, b)]
    red, piv = rref(aug, ncols=cols)
    for row in red[len(piv):]:
        if row[-1]:
            return None
    zero = _zero_like(b[0]) if b else Fraction(0)
    x = [zero] * cols
    for i, p in enumerate(piv):
        x[p] = red[i][-1]
    return x


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), start=_zero_like(row[0])) for col in bt] for row in a]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(r) for r in zip(*a)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def gram_schmidt(vectors: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Exact orthogonalization (no normalization); drops dependent vectors."""
    out: list[list[Fraction]] = []
    norms: list[Fraction] = []
    for v in vectors:
        w = [Fraction(x) for x in v]
        for u, nu in zip(out, norms):
            c = sum(x * y for x, y in zip(w, u)) / nu
            if c:
                w = [x - c * y for x, y in zip(w, u)]
        n = sum(x * x for x in w)
        if n:
            out.append(w)
            norms.append(n)
    return out


def projector(orth: Sequence[Sequence[Fraction]], dim: int) -> Matrix:
    """Orthogonal projector onto the span of mutually orthogonal vectors."""
    p = [[Fraction(0)] * dim for _ in range(dim)]
    for u in orth:
        n = sum(x * x for x in u)
        for i in range(dim):
            if u[i]:
                ui = u[i] / n
                row = p[i]
                for j in range(dim):
                    if u[j]:
                        row[j] += ui * u[j]
    return p


def apply(m: Sequence[Sequence], v: Sequence):
    out = []
    for row in m:
        acc = None
        for x, y in zip(row, v):
            if x:
                t = y * x
                acc = t if acc is None else acc + t
        out.append(acc if acc is not None else v[0] * 0)
    return out


class EchelonSpan:
    """Incrementally maintained row-echelon basis of a span."""

    def __init__(self):
        self.rows: dict[int, list] = {}

    def reduce(self, v) -> list:
        v = list(v)
        for p, r in self.rows.items():
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, r)]
        return v

    def insert(self, v) -> bool:
        """Add v; return True when it enlarged the span."""
        w = self.reduce(v)
        p = next((i for i, x in enumerate(w) if x), None)
        if p is None:
            return False
        inv = 1 / w[p]
        w = [x * inv for x in w]
        for q, r in self.rows.items():
            if r[p]:
                f = r[p]
                self.rows[q] = [x - f * y for x, y in zip(r, w)]
        self.rows[p] = w
        return True

    def __len__(self):
        return len(self.rows)


class SparseSpan:
    """Reduced echelon basis of a span of sparse vectors (dicts col -> value)."""

    def __init__(self):
        self.rows: dict = {}

    def reduce(self, v: dict) -> dict:
        v = {k: x for k, x in v.items() if x}
        for p in [k for k in v if k in self.rows]:
            f = v.get(p)
            if not f:
                continue
            for k, x in self.rows[p].items():
                y = v.get(k, 0) - f * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
        return v

    def insert(self, v: dict) -> bool:
        w = self.reduce(v)
        if not w:
            return False
        p = min(w)
        inv = 1 / w[p]
        w = {k: x * inv for k, x in w.items()}
        for q, r in self.rows.items():
            f = r.get(p)
            if f:
                for k, x in w.items():
                    y = r.get(k, 0) - f * x
                    if y:
                        r[k] = y
                    else:
                        r.pop(k, None)
        self.rows[p] = w
        return True

    def __len__(self):
        return len(self.rows)
