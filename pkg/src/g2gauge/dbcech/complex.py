"""Reference complexes, covers and polyhedral decompositions.

The test geometry is a Kuhn triangulation K of the torus T^m with N
vertices per side.  Charts are the vertices of K (open stars), so the
nerve is the set of simplices of K.  Local forms live on the barycentric
subdivision L, whose simplices are flags of faces of K; the chart
intersection for a nerve tuple t is the full subcomplex of L on the
barycenters of faces containing t.  The polyhedral pieces P_t are the
dual cells of the simplices t, with signs fixed so that

    boundary P_t = sum over s = t + {a} of (-1)^(position of a in s) P_s.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations, product

from ..errors import ConstructionFailure

Chain = dict  # simplex tuple -> int


def boundary(chain: Chain) -> Chain:
    out: dict = {}
    for s, c in chain.items():
        for i in range(len(s)):
            f = s[:i] + s[i + 1 :]
            v = out.get(f, 0) + (-c if i % 2 else c)
            if v:
                out[f] = v
            else:
                out.pop(f, None)
    return out


def chain_add(a: Chain, b: Chain, scale: int = 1) -> Chain:
    out = dict(a)
    for s, c in b.items():
        v = out.get(s, 0) + scale * c
        if v:
            out[s] = v
        else:
            out.pop(s, None)
    return out


def _det(rows: list[list[Fraction]]) -> Fraction:
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


@dataclass
class Cover:
    """Index set with its nerve (sorted tuples with nonempty intersection)."""

    index: tuple
    nerve: frozenset

    def __post_init__(self):
        for t in self.nerve:
            if list(t) != sorted(t):
                raise ValueError(f"nerve tuple {t} is not sorted")
            for k in range(1, len(t)):
                for sub in combinations(t, k):
                    if sub not in self.nerve:
                        raise ValueError(f"nerve not closed under subtuples: {sub} of {t}")
        for a in self.index:
            if (a,) not in self.nerve:
                raise ValueError(f"chart {a} missing from the nerve")

    def tuples(self, length: int) -> list[tuple]:
        return sorted(t for t in self.nerve if len(t) == length)


class RefComplex:
    """Ordered simplicial complex given by its simplices (vertex tuples, increasing)."""

    def __init__(self, dim: int, simplices: dict[int, list[tuple]]):
        self.dim = dim
        self.simplices = {p: sorted(set(v)) for p, v in simplices.items()}
        self._sets = {p: set(v) for p, v in self.simplices.items()}

    def has(self, s: tuple) -> bool:
        return s in self._sets.get(len(s) - 1, ())

    def count(self) -> int:
        return sum(len(v) for v in self.simplices.values())


@dataclass
class ChartSupport:
    """Vertex set of L for every nerve tuple; L_t is the full subcomplex on it."""

    cx: RefComplex
    vertex_sets: dict  # chart -> frozenset of L vertices
    _cache: dict = field(default_factory=dict, repr=False)

    def vertices(self, t: tuple) -> frozenset:
        key = ("v", t)
        if key not in self._cache:
            vs = None
            for a in t:
                vs = self.vertex_sets[a] if vs is None else vs & self.vertex_sets[a]
            self._cache[key] = vs if vs is not None else frozenset()
        return self._cache[key]

    def simplices(self, t: tuple, p: int) -> list[tuple]:
        key = ("s", t, p)
        if key not in self._cache:
            vs = self.vertices(t)
            self._cache[key] = [s for s in self.cx.simplices.get(p, []) if all(v in vs for v in s)]
        return self._cache[key]

    def contains(self, t: tuple, s: tuple) -> bool:
        vs = self.vertices(t)
        return all(v in vs for v in s)


@dataclass
class PolyDecomp:
    """Chains P_t (t a nerve tuple) of dimension n + 1 - len(t)."""

    n: int
    chains: dict

    def chain(self, t: tuple) -> Chain:
        return self.chains.get(t, {})

    def insertion_defects(self, cover: Cover) -> list[tuple]:
        """Tuples whose chain violates the alternating-insertion boundary rule."""
        bad = []
        for t in cover.nerve:
            if len(t) > self.n:
                continue
            want: Chain = {}
            for s in cover.tuples(len(t) + 1):
                if set(t) <= set(s):
                    (a,) = set(s) - set(t)
                    want = chain_add(want, self.chain(s), -1 if s.index(a) % 2 else 1)
            if boundary(self.chain(t)) != want:
                bad.append(t)
        return bad

    def dd_defects(self) -> list[tuple]:
        return [t for t, c in self.chains.items() if boundary(boundary(c))]

    def support_defects(self, sup: ChartSupport) -> list[tuple]:
        return [t for t, c in self.chains.items() if not all(sup.contains(t, s) for s in c)]


class TorusComplex:
    """Kuhn triangulation of (R/NZ)^m, its barycentric subdivision and dual cells."""

    def __init__(self, m: int, N: int = 3):
        if N < 3:
            raise ValueError("need at least 3 vertices per side for a simplicial complex")
        self.m, self.N = m, N
        grid = list(product(range(N), repeat=m))
        self.vid = {v: i for i, v in enumerate(grid)}
        self.coords = grid
        tops = []
        for base in grid:
            for perm in permutations(range(m)):
                lift = [tuple(base)]
                cur = list(base)
                for ax in perm:
                    cur[ax] += 1
                    lift.append(tuple(cur))
                ids = [self.vid[tuple(c % N for c in p)] for p in lift]
                tops.append(dict(zip(ids, lift)))
        self.top_lifts = tops
        verts = {tuple(sorted(t)) for t in tops}
        if len(verts) != len(tops):
            raise ConstructionFailure("Kuhn triangulation has repeated top simplices")
        faces = set()
        for t in verts:
            for k in range(1, m + 2):
                faces.update(combinations(t, k))
        self.faces = sorted(faces, key=lambda f: (len(f), f))
        self.face_id = {f: i for i, f in enumerate(self.faces)}
        self.lift_of_top = {tuple(sorted(t)): t for t in tops}
        self.cover = Cover(tuple(range(len(grid))), frozenset(self.faces))
        self._build_subdivision()
        self._build_dual()

    # ------------------------------------------------------------ K data
    def face_dim(self, fid: int) -> int:
        return len(self.faces[fid]) - 1

    def winding(self, axis: int, a: int, b: int) -> int:
        """Lifted coordinate difference b - a along an edge of K."""
        for top, lift in self.lift_of_top.items():
            if a in lift and b in lift:
                return lift[b][axis] - lift[a][axis]
        raise KeyError((a, b))

    # ------------------------------------------------------------ subdivision
    def _build_subdivision(self):
        simp: dict[int, set] = {p: set() for p in range(self.m + 1)}
        for top in self.lift_of_top:
            sub = [self.face_id[f] for k in range(1, self.m + 2) for f in combinations(top, k)]
            sub_sets = {i: set(self.faces[i]) for i in sub}

            def extend(chain):
                simp[len(chain) - 1].add(tuple(chain))
                last = sub_sets[chain[-1]]
                for j in sub:
                    if last < sub_sets[j]:
                        extend(chain + [j])

            for i in sub:
                extend([i])
        self.L = RefComplex(self.m, {p: list(v) for p, v in simp.items()})
        vsets = {a: frozenset(i for i, f in enumerate(self.faces) if a in f) for a in self.cover.index}
        self.support = ChartSupport(self.L, vsets)

    def _barycenter(self, fid: int, lift: dict) -> list[Fraction]:
        f = self.faces[fid]
        return [Fraction(sum(lift[v][ax] for v in f), len(f)) for ax in range(self.m)]

    def orientation(self, flag: tuple) -> int:
        """Sign of a top simplex of L (a full flag) in lifted coordinates."""
        top = self.faces[flag[-1]]
        lift = self.lift_of_top[top]
        pts = [self._barycenter(f, lift) for f in flag]
        d = _det([[x - y for x, y in zip(p, pts[0])] for p in pts[1:]])
        if d == 0:
            raise ConstructionFailure(f"degenerate flag {flag}")
        return 1 if d > 0 else -1

    def _downward(self, t: tuple) -> tuple:
        return tuple(self.face_id[t[: i + 1]] for i in range(len(t) - 1))

    def _build_dual(self):
        cof: dict[int, list[int]] = {i: [] for i in range(len(self.faces))}
        for j, g in enumerate(self.faces):
            for k in range(1, len(g)):
                for f in combinations(g, k):
                    if len(f) == len(g) - 1:
                        cof[self.face_id[f]].append(j)
        self.cofaces = cof
        raw = {}
        for t in self.faces:
            start = self.face_id[t]
            out: Chain = {}
            stack = [[start]]
            while stack:
                chain = stack.pop()
                if self.face_dim(chain[-1]) == self.m:
                    out[tuple(chain)] = self.orientation(self._downward(t) + tuple(chain))
                    continue
                for j in cof[chain[-1]]:
                    stack.append(chain + [j])
            raw[t] = out
        # fix one sign per dimension so the insertion rule holds
        lam = {0: 1}
        for p in range(self.m):
            kappa = None
            for t in self.faces:
                if len(t) != p + 1:
                    continue
                want: Chain = {}
                for j in cof[self.face_id[t]]:
                    s = self.faces[j]
                    (a,) = set(s) - set(t)
                    want = chain_add(want, raw[s], -1 if s.index(a) % 2 else 1)
                got = boundary(raw[t])
                if got == want:
                    k = 1
                elif got == {s: -c for s, c in want.items()}:
                    k = -1
                else:
                    raise ConstructionFailure(f"dual cell of {t} has an irregular boundary")
                if kappa is None:
                    kappa = k
                elif k != kappa:
                    raise ConstructionFailure("boundary signs of dual cells are not uniform")
            lam[p + 1] = lam[p] * (kappa or 1)
        self.cell_sign = lam
        self.P = PolyDecomp(self.m, {t: {s: lam[len(t) - 1] * c for s, c in raw[t].items()} for t in self.faces})

    @cached_property
    def partition_of_unity(self) -> dict:
        """xi_a(b(sigma)) = 1/|sigma| if a in sigma: rational, sums to 1, supported in chart a."""
        out = {}
        for a in self.cover.index:
            out[a] = {(i,): Fraction(1, len(f)) for i, f in enumerate(self.faces) if a in f}
        return out

    def coefficient(self, flag: tuple) -> int:
        """Coefficient of an L-simplex in P_t, t its first face; computed from scratch."""
        dims = [self.face_dim(f) for f in flag]
        if dims[-1] != self.m or any(b - a != 1 for a, b in zip(dims, dims[1:])):
            return 0
        if any(not set(self.faces[a]) < set(self.faces[b]) for a, b in zip(flag, flag[1:])):
            return 0
        t = self.faces[flag[0]]
        return self.cell_sign[len(t) - 1] * self.orientation(self._downward(t) + tuple(flag))
