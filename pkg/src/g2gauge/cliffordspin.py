"""Clifford algebra of R^7 with explicit 8x8 gamma matrices.

The gamma matrices are stored as row strings: '+' is sqrt(-1), '-' is
-sqrt(-1), '0' is zero.  They are checked against the Clifford relation
and the product identity for the seventh matrix on construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from . import linalg
from .coeffring import GaussianRational
from .errors import ConstructionFailure, NonRealCoefficient, NotInG2, NotInSpan, WrongNullity
from .exterior import KForm, sort_sign
from .g2core import SpinConnection, asd_residuals_row

GAMMA_ROWS = {
    1: ("0000000+", "00+00000", "0-000000", "000000+0", "00000-00", "0000+000", "000-0000", "-0000000"),
    2: ("00-00000", "0000000+", "+0000000", "00000+00", "000000+0", "000-0000", "0000-000", "0-000000"),
    3: ("0+000000", "-0000000", "0000000+", "0000-000", "000+0000", "000000+0", "00000-00", "00-00000"),
    4: ("000000-0", "00000-00", "0000+000", "0000000+", "00-00000", "0+000000", "+0000000", "000-0000"),
    5: ("00000+00", "000000-0", "000-0000", "00+00000", "0000000+", "-0000000", "0+000000", "0000-000"),
    6: ("0000-000", "000+0000", "000000-0", "0-000000", "+0000000", "0000000+", "00+00000", "00000-00"),
    7: ("000+0000", "0000+000", "00000+00", "-0000000", "0-000000", "00-00000", "0000000+", "000000-0"),
}

# (pair, sign) for V_k and W_k, k = 1..7
V_DEF = (
    (((5, 6), 1), ((1, 2), 1)),
    (((5, 7), 1), ((1, 3), 1)),
    (((3, 6), 1), ((1, 4), -1)),
    (((3, 7), 1), ((1, 5), -1)),
    (((2, 5), 1), ((1, 6), 1)),
    (((3, 5), 1), ((1, 7), 1)),
    (((6, 7), 1), ((2, 3), 1)),
)
W_DEF = (
    (((4, 7), 1), ((1, 2), -1)),
    (((4, 6), 1), ((1, 3), 1)),
    (((2, 7), 1), ((1, 4), 1)),
    (((2, 6), 1), ((1, 5), -1)),
    (((3, 4), 1), ((1, 6), 1)),
    (((2, 4), 1), ((1, 7), -1)),
    (((4, 5), 1), ((2, 3), -1)),
)

PRINTED_TABLE = " ".join((
    "[V1,V2]=-V7 [V1,V3]=V6+W6 [V1,V4]=V5 [V1,V5]=-2W4 [V1,V6]=-V3-W3 [V1,V7]=V2",
    "[V1,W2]=W7 [V1,W3]=-W6 [V1,W4]=2V5 [V1,W5]=-W4 [V1,W6]=W3 [V1,W7]=-W2",
    "[V2,V3]=W5 [V2,V4]=2V6 [V2,V5]=-V3-W3 [V2,V6]=-2V4 [V2,V7]=-V1 [V2,W1]=W7",
    "[V2,W3]=V5-W5 [V2,W4]=V6 [V2,W5]=-V3 [V2,W7]=-W1 [V3,V4]=-V7-W7 [V3,V5]=W2",
    "[V3,V6]=V1+W1 [V3,V7]=V4-W4 [V3,W1]=W6 [V3,W2]=-2W5 [V3,W4]=-W7 [V3,W5]=2W2",
    "[V3,W6]=-W1 [V3,W7]=W4 [V4,V5]=V1 [V4,V6]=2V2 [V4,V7]=-V3-W3 [V4,W1]=V5-W5",
    "[V4,W2]=-V6 [V4,W3]=-W7 [V4,W5]=V1+W1 [V4,W6]=-V2 [V4,W7]=W3 [V5,V6]=-V7",
    "[V5,V7]=V6 [V5,W1]=-W4 [V5,W2]=V3 [V5,W3]=-V2+W2 [V5,W4]=-2V1 [V5,W6]=V7+W7",
    "[V5,W7]=-V6-W6 [V6,V7]=-V5 [V6,W1]=-W3 [V6,W2]=V4 [V6,W3]=W1 [V6,W4]=-V2",
    "[V6,W5]=V7+W7 [V6,W7]=V5-W5 [V7,W1]=W2 [V7,W2]=-W1 [V7,W3]=-V4+W4 [V7,W4]=-V3-W3",
    "[V7,W5]=W6 [V7,W6]=-W5 [W1,W2]=V7 [W1,W3]=2W6 [W1,W4]=-V5 [W1,W5]=-V4+W4",
    "[W1,W6]=-2W3 [W1,W7]=V2 [W2,W3]=-W5 [W2,W4]=V6+W6 [W2,W5]=-2V3 [W2,W6]=V4-W4",
    "[W2,W7]=V1 [W3,W4]=V7+W7 [W3,W5]=-W2 [W3,W6]=2W1 [W3,W7]=-V4 [W4,W5]=V1",
    "[W4,W6]=-V2+W2 [W4,W7]=-V3 [W5,W6]=V7 [W5,W7]=V6+W6 [W6,W7]=V5-W5",
))

# the spinor as printed (unnormalized) and the frame reassignment as printed
PRINTED_ETA0 = (0, 1, 0, 0, 0, 0, 0, -1)
PRINTED_FRAME = (1, 2, 3, 6, 7, 4, 5)

ZERO = GaussianRational(0)
ONE = GaussianRational(1)


class Mat8:
    """Immutable 8x8 matrix over Q(i)."""

    __slots__ = ("rows",)
    N = 8

    def __init__(self, rows):
        rows = tuple(tuple(GaussianRational.coerce(x) for x in r) for r in rows)
        if len(rows) != 8 or any(len(r) != 8 for r in rows):
            raise ValueError("Mat8 needs 8x8 entries")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, *_):
        raise AttributeError("Mat8 is immutable")

    @staticmethod
    def identity() -> "Mat8":
        return Mat8([[ONE if i == j else ZERO for j in range(8)] for i in range(8)])

    @staticmethod
    def zeros() -> "Mat8":
        return Mat8([[ZERO] * 8 for _ in range(8)])

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __add__(self, o: "Mat8") -> "Mat8":
        return Mat8([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, o.rows)])

    def __sub__(self, o: "Mat8") -> "Mat8":
        return Mat8([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, o.rows)])

    def __neg__(self) -> "Mat8":
        return Mat8([[-a for a in r] for r in self.rows])

    def scale(self, c) -> "Mat8":
        c = GaussianRational.coerce(c)
        return Mat8([[a * c for a in r] for r in self.rows])

    def __matmul__(self, o: "Mat8") -> "Mat8":
        # the generators are sparse, so accumulate over nonzero entries only
        onz = [[(j, b) for j, b in enumerate(r) if b] for r in o.rows]
        out = []
        for r in self.rows:
            row = [ZERO] * 8
            for k, a in enumerate(r):
                if a:
                    for j, b in onz[k]:
                        row[j] = row[j] + a * b
            out.append(row)
        return Mat8(out)

    def apply(self, v) -> tuple:
        return tuple(
            sum((a * GaussianRational.coerce(x) for a, x in zip(r, v) if a), ZERO) for r in self.rows
        )

    def dagger(self) -> "Mat8":
        return Mat8([[self.rows[j][i].conj() for j in range(8)] for i in range(8)])

    def flat(self) -> list:
        return [x for r in self.rows for x in r]

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def is_real(self) -> bool:
        return all(x.im == 0 for r in self.rows for x in r)

    def __eq__(self, o):
        return isinstance(o, Mat8) and self.rows == o.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "Mat8(" + "; ".join(" ".join(str(x) for x in r) for r in self.rows) + ")"


def commutator(a: Mat8, b: Mat8) -> Mat8:
    return a @ b - b @ a


def _decode(rows) -> Mat8:
    table = {"0": ZERO, "+": GaussianRational(0, 1), "-": GaussianRational(0, -1)}
    return Mat8([[table[ch] for ch in r] for r in rows])


@dataclass(frozen=True)
class SpinGenerators:
    gamma: tuple  # gamma[0] is Gamma_1
    sigma: dict   # (i, j) with i < j -> Sigma_ij

    def Sigma(self, i: int, j: int) -> Mat8:
        if i == j:
            return Mat8.zeros()
        return self.sigma[(i, j)] if i < j else -self.sigma[(j, i)]


@dataclass(frozen=True)
class G2Basis:
    V: tuple
    W: tuple

    def named(self) -> dict[str, Mat8]:
        d = {f"V{k}": m for k, m in enumerate(self.V, 1)}
        d.update({f"W{k}": m for k, m in enumerate(self.W, 1)})
        return d

    def ordered(self) -> list[Mat8]:
        return list(self.V) + list(self.W)


NAMES = tuple(f"V{k}" for k in range(1, 8)) + tuple(f"W{k}" for k in range(1, 8))


@dataclass(frozen=True)
class Spinor:
    vec: tuple
    norm_sq: Fraction


def clifford_failures(gamma) -> list[str]:
    """Human-readable list of failed Clifford identities (empty when all hold)."""
    bad = []
    eye = Mat8.identity()
    for i in range(7):
        for j in range(i, 7):
            ac = gamma[i] @ gamma[j] + gamma[j] @ gamma[i]
            want = eye.scale(2) if i == j else Mat8.zeros()
            if ac != want:
                r, c = next((r, c) for r in range(8) for c in range(8) if ac[r, c] != want[r, c])
                bad.append(f"{{G{i+1},G{j+1}}} wrong at entry ({r+1},{c+1})")
    prod = gamma[0]
    for g in gamma[1:6]:
        prod = prod @ g
    g7 = prod.scale(GaussianRational(0, 1))
    if g7 != gamma[6]:
        r, c = next((r, c) for r in range(8) for c in range(8) if g7[r, c] != gamma[6][r, c])
        bad.append(f"G7 != i*G1...G6 at entry ({r+1},{c+1})")
    return bad


def gamma_matrices(rows: dict | None = None) -> SpinGenerators:
    """Decode and verify the gamma matrices; ``rows`` overrides the table (testing)."""
    src = rows or GAMMA_ROWS
    gamma = tuple(_decode(src[k]) for k in range(1, 8))
    bad = clifford_failures(gamma)
    if bad:
        raise ConstructionFailure("; ".join(bad))
    sigma = {}
    q = GaussianRational(Fraction(1, 4))
    for i, j in combinations(range(1, 8), 2):
        sigma[(i, j)] = commutator(gamma[i - 1], gamma[j - 1]).scale(q)
    return SpinGenerators(gamma, sigma)


@lru_cache(maxsize=None)
def default_generators() -> SpinGenerators:
    return gamma_matrices()


def spin7_bracket_check(g: SpinGenerators) -> bool:
    """[S_ij, S_kl] = S_il d_jk + S_jk d_il - S_ik d_jl - S_jl d_ik for all i<j, k<l."""
    pairs = list(combinations(range(1, 8), 2))
    for i, j in pairs:
        for k, l in pairs:
            lhs = commutator(g.Sigma(i, j), g.Sigma(k, l))
            rhs = Mat8.zeros()
            if j == k:
                rhs = rhs + g.Sigma(i, l)
            if i == l:
                rhs = rhs + g.Sigma(j, k)
            if j == l:
                rhs = rhs - g.Sigma(i, k)
            if i == k:
                rhs = rhs - g.Sigma(j, l)
            if lhs != rhs:
                return False
    return True


def _combo(g: SpinGenerators, spec) -> Mat8:
    (p1, s1), (p2, s2) = spec
    return g.Sigma(*p1).scale(s1) + g.Sigma(*p2).scale(s2)


def g2_basis(g: SpinGenerators | None = None) -> G2Basis:
    g = g or default_generators()
    return G2Basis(tuple(_combo(g, d) for d in V_DEF), tuple(_combo(g, d) for d in W_DEF))


# ---------------------------------------------------------------- span coordinates

def _field_vector(m: Mat8, real: bool) -> list:
    return [x.re for x in m.flat()] if real else m.flat()


def span_coordinates(m: Mat8, mats: list[Mat8]) -> list | None:
    """Exact coordinates of m in the span of mats, or None."""
    real = m.is_real() and all(x.is_real() for x in mats)
    cols = [_field_vector(x, real) for x in mats]
    a = [list(r) for r in zip(*cols)]
    sol = linalg.solve(a, _field_vector(m, real))
    if sol is None or not real:
        return sol
    return [GaussianRational(x) for x in sol]


def parse_combination(text: str) -> dict[str, int]:
    """'-V3-W3' -> {'V3': -1, 'W3': -1}."""
    out: dict[str, int] = {}
    for sign, coef, name in re.findall(r"([+-]?)(\d*)([VW]\d)", text):
        c = int(coef) if coef else 1
        out[name] = out.get(name, 0) + (-c if sign == "-" else c)
    return out


def printed_table() -> dict[tuple[str, str], dict[str, int]]:
    table = {}
    for a, b, rhs in re.findall(r"\[([VW]\d),([VW]\d)\]=(\S+)", PRINTED_TABLE):
        table[(a, b)] = parse_combination(rhs)
    return table


def commutator_table(b: G2Basis) -> dict[tuple[str, str], dict[str, Fraction]]:
    """All 91 brackets of distinct basis elements, expressed in the V/W span."""
    named = b.named()
    mats = [named[n] for n in NAMES]
    out = {}
    for x, y in combinations(NAMES, 2):
        c = commutator(named[x], named[y])
        coords = span_coordinates(c, mats)
        if coords is None:
            raise NotInSpan(f"[{x},{y}] leaves the span")
        out[(x, y)] = {n: v.re for n, v in zip(NAMES, coords) if v}
    return out


def compare_with_printed(b: G2Basis) -> dict:
    """Compare the computed brackets with the printed table.

    Returns listed-entry mismatches and nonzero brackets that the
    printed table omits (in either argument order).
    """
    computed = commutator_table(b)
    listed = printed_table()
    mismatches, unlisted = [], []
    order = {n: k for k, n in enumerate(NAMES)}
    for (x, y), rhs in listed.items():
        if order[x] < order[y]:
            got = computed[(x, y)]
        else:
            got = {n: -v for n, v in computed[(y, x)].items()}
        want = {n: Fraction(v) for n, v in rhs.items() if v}
        if got != want:
            mismatches.append(((x, y), want, got))
    keys = {tuple(sorted(k, key=order.get)) for k in listed}
    for k, v in computed.items():
        if v and k not in keys:
            unlisted.append((k, v))
    return {"listed": len(listed), "mismatches": mismatches, "unlisted_nonzero": unlisted}


def closure_check(mats: list[Mat8]) -> int:
    """Dimension of the smallest bracket-closed span containing mats."""
    basis: list[Mat8] = []
    span = linalg.EchelonSpan()

    def add(m: Mat8) -> bool:
        if span.insert(m.flat()):
            basis.append(m)
            return True
        return False

    for m in mats:
        add(m)
    frontier = list(basis)
    while frontier:
        new = []
        for x in frontier:
            for y in list(basis):
                c = commutator(x, y)
                if not c.is_zero() and add(c):
                    new.append(c)
        frontier = new
    return len(basis)


# ---------------------------------------------------------------- spinor and psi

def _canonical(vec: list) -> tuple:
    """Scale so the first nonzero entry is 1, then clear denominators."""
    lead = next(x for x in vec if x)
    v = [x / lead for x in vec]
    den = 1
    for x in v:
        for part in (x.re, x.im):
            den = den * part.denominator // _gcd(den, part.denominator)
    return tuple(x * den for x in v)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def invariant_spinor(b: G2Basis | None = None) -> Spinor:
    b = b or g2_basis()
    rows = []
    for m in b.ordered():
        rows.extend(list(r) for r in m.rows)
    null = linalg.nullspace(rows)
    if len(null) != 1:
        raise WrongNullity(f"common nullspace has dimension {len(null)}")
    vec = _canonical(null[0])
    return Spinor(vec, sum((x * x.conj()).re for x in vec))


def printed_spinor() -> Spinor:
    vec = tuple(GaussianRational(x) for x in PRINTED_ETA0)
    return Spinor(vec, Fraction(sum(x * x for x in PRINTED_ETA0)))


def annihilators(eta: Spinor, b: G2Basis | None = None) -> dict[str, bool]:
    b = b or g2_basis()
    return {n: not any(m.apply(eta.vec)) for n, m in b.named().items()}


def psi_form(eta: Spinor, g: SpinGenerators | None = None) -> KForm:
    """3-form with coefficients i eta^dag G_ijk eta / |eta|^2 (i<j<k)."""
    g = g or default_generators()
    conj = [x.conj() for x in eta.vec]
    terms = {}
    for i, j, k in combinations(range(1, 8), 3):
        # distinct gammas anticommute, so the antisymmetrized product is the plain product
        m = g.gamma[i - 1] @ g.gamma[j - 1] @ g.gamma[k - 1]
        w = m.apply(eta.vec)
        val = sum((a * x for a, x in zip(conj, w)), ZERO) * GaussianRational(0, 1)
        val = val / GaussianRational(eta.norm_sq)
        if val.im:
            raise NonRealCoefficient(f"psi_{i}{j}{k} = {val}")
        if val.re:
            terms[(i, j, k)] = val.re
    return KForm(3, terms)


def antisymmetrized_gamma(g: SpinGenerators, idx) -> Mat8:
    """(1/k!) sum over permutations with sign; used to cross-check psi_form."""
    acc = Mat8.zeros()
    n = 0
    for perm in permutations(idx):
        s, _ = sort_sign(perm)
        m = Mat8.identity()
        for p in perm:
            m = m @ g.gamma[p - 1]
        acc = acc + m.scale(s)
        n += 1
    return acc.scale(Fraction(1, n))


def full_sum_form(w: KForm) -> KForm:
    """w_ijk e^{ijk} summed over all ordered triples, i.e. (deg w)! times w."""
    f = 1
    for k in range(2, w.degree + 1):
        f *= k
    return w * f


# ---------------------------------------------------------------- frame relabeling

def frame_relabel(w: KForm, perm) -> KForm:
    """Send e^i to e^{perm(i)}; perm is a tuple with perm[i-1] = image of i."""
    perm = tuple(perm)
    if sorted(perm) != list(range(1, 8)):
        raise ValueError("perm must be a permutation of 1..7")
    out = {}
    for idx, c in w.terms.items():
        out[tuple(perm[i - 1] for i in idx)] = c
    return KForm(w.degree, out, w.ring)


def inverse_perm(perm) -> tuple:
    inv = [0] * 7
    for i, p in enumerate(perm, 1):
        inv[p - 1] = i
    return tuple(inv)


def resolve_frame_permutation(psi: KForm, target: KForm, listing=PRINTED_FRAME) -> dict:
    """Try the listed reassignment as push-forward and as pull-back.

    ``listing`` is the frame order that gets renamed to e_1..e_7.  The
    result records which directions succeed; ``flagged`` is set when
    neither or both do.  Plain permutations that do work are listed
    for diagnosis.
    """
    forward = inverse_perm(listing)  # old index listing[k] becomes k+1
    backward = tuple(listing)
    ok_f = frame_relabel(psi, forward) == target
    ok_b = frame_relabel(psi, backward) == target
    alternatives = [p for p in permutations(range(1, 8)) if frame_relabel(psi, p) == target]
    resolved = forward if ok_f else (backward if ok_b else None)
    return {
        "forward": ok_f,
        "backward": ok_b,
        "same_map": forward == backward,
        "flagged": ok_f == ok_b,
        "resolved": resolved,
        "alternatives": alternatives,
    }


# ---------------------------------------------------------------- g2 rewrite

def _pair_index():
    vpairs = [d[0][0] for d in V_DEF]
    wpairs = [d[0][0] for d in W_DEF]
    return vpairs, wpairs


def g2_rewrite(om: SpinConnection, b: G2Basis | None = None, g: SpinGenerators | None = None):
    """Per row i, coefficients (c_k, d_k) with sum_{j<k} Om^i_jk S_jk = sum c_k V_k + d_k W_k."""
    g = g or default_generators()
    b = b or g2_basis(g)
    vpairs, wpairs = _pair_index()
    out = {}
    for i in range(1, 8):
        row = om.row(i)
        res = [r.constant_value() for r in asd_residuals_row(row)]
        if any(res):
            raise NotInG2(f"row {i} residuals {res}")
        c = [om(i, *p) for p in vpairs]
        d = [om(i, *p) for p in wpairs]
        lhs = Mat8.zeros()
        for (j, k), val in ((key, v.constant_value()) for key, v in row.terms.items()):
            lhs = lhs + g.Sigma(j, k).scale(val)
        rhs = Mat8.zeros()
        for ck, vk in zip(c, b.V):
            if ck:
                rhs = rhs + vk.scale(ck)
        for dk, wk in zip(d, b.W):
            if dk:
                rhs = rhs + wk.scale(dk)
        if lhs != rhs:
            raise NotInG2(f"row {i}: reconstruction mismatch")
        out[i] = (c, d)
    return out


# ---------------------------------------------------------------- shadows

def shadow(m: Mat8, g: SpinGenerators | None = None) -> KForm:
    """Image of a spin(7) element under S_ij -> e^{ij}."""
    g = g or default_generators()
    mats = [g.sigma[p] for p in combinations(range(1, 8), 2)]
    coords = span_coordinates(m, mats)
    if coords is None:
        raise NotInSpan("matrix is not in spin(7)")
    return KForm(2, {p: c.re for p, c in zip(combinations(range(1, 8), 2), coords) if c})


def derivation_action(a: KForm, w: KForm) -> KForm:
    """Action of the so(7) element with matrix a_ij (a 2-form) on a form, as a derivation.

    On 1-forms: e^k -> sum_i a_ik e^i.
    """
    out = KForm.zero(w.degree, w.ring.join(a.ring))
    for idx, c in w.terms.items():
        for pos, k in enumerate(idx):
            for i in range(1, 8):
                aik = a.coeff(i, k)
                if aik.is_zero():
                    continue
                new = idx[:pos] + (i,) + idx[pos + 1 :]
                if len(set(new)) < len(new):
                    continue
                out = out + KForm(w.degree, {new: c * aik}, w.ring)
    return out
