"""Command-line front end: form parser, verification suite and subcommands.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on
usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import cliffordspin as cs
from . import g2core, instanton, linalg
from .coeffring import PolyParser, as_rational, ring
from .coeffring import _Tokens as Tokens
from .errors import DegreeMismatch, G2GaugeError, ParseError
from .exterior import DIM, KForm, form_to_str, sort_sign

SCHEMA = "g2gauge-report"
SCHEMA_VERSION = 1

PRINTED_PSI = {(1, 2, 3): 1, (2, 4, 6): 1, (1, 6, 7): 1, (2, 5, 7): 1, (3, 5, 6): 1, (3, 4, 7): -1, (1, 4, 5): -1}


# ---------------------------------------------------------------- form parser


class FormParser(PolyParser):
    """form := sterm (('+'|'-') sterm)*;  sterm := [poly '*'] 'e[' idxlist ']' | poly"""

    def parse_form(self, text: str, degree: int | None = None) -> KForm:
        ts = Tokens(text)
        terms: dict = {}
        deg = None
        sign = 1
        if ts.peek()[0] == "op" and ts.peek()[1] in "+-":
            sign = -1 if ts.next()[1] == "-" else 1
        while True:
            pos = ts.peek()[2]
            coeff, idx = self._sterm(ts)
            if deg is None:
                deg = len(idx)
            elif len(idx) != deg:
                raise ParseError(f"term of degree {len(idx)} in a {deg}-form", text, pos)
            s, srt = sort_sign(idx)
            c = coeff * (sign * s)
            terms[srt] = terms[srt] + c if srt in terms else c
            if ts.peek()[0] == "op" and ts.peek()[1] in "+-":
                sign = -1 if ts.next()[1] == "-" else 1
                continue
            if ts.peek()[0] != "eof":
                ts.error(f"unexpected {ts.peek()[1]!r}")
            break
        w = KForm(deg or 0, terms, self.ring)
        if degree is not None and w.degree != degree:
            if not w.is_zero():
                raise DegreeMismatch(f"expected a {degree}-form, got degree {w.degree}")
            w = KForm.zero(degree, self.ring)
        return w

    def _basis(self, ts) -> tuple:
        ts.next()  # 'e'
        ts.expect("[")
        idx = []
        while True:
            kind, val, pos = ts.next()
            if kind != "int":
                raise ParseError("expected an index", ts.text, pos)
            i = int(val)
            if not 1 <= i <= DIM:
                raise ParseError(f"index {i} outside 1..{DIM}", ts.text, pos)
            if i in idx:
                raise ParseError(f"repeated index {i}", ts.text, pos)
            idx.append(i)
            if ts.peek()[1] == ",":
                ts.next()
                continue
            ts.expect("]")
            return tuple(idx)

    def _is_basis(self, ts) -> bool:
        return ts.peek()[0] == "name" and ts.peek()[1] == "e" and ts.peek(1)[1] == "["

    def _sterm(self, ts):
        coeff = self.ring.const(1)
        if self._is_basis(ts):
            return coeff, self._basis(ts)
        coeff = self.factor(ts)
        while ts.peek()[0] == "op" and ts.peek()[1] == "*":
            ts.next()
            if self._is_basis(ts):
                return coeff, self._basis(ts)
            coeff = coeff * self.factor(ts)
        return coeff, ()


def parse_form(text: str, params=(), degree: int | None = None) -> KForm:
    """Parse a form; with ``degree`` a zero form gets that degree and other degrees are rejected."""
    return FormParser(ring(tuple(params))).parse_form(text, degree)


def print_form(w: KForm) -> str:
    return form_to_str(w)


# ---------------------------------------------------------------- reports


def jsonable(x):
    """Witness values as plain JSON: tuples become lists or joined keys, rationals become strings."""
    if isinstance(x, dict):
        return {(",".join(map(str, k)) if isinstance(k, tuple) else str(k)): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


@dataclass
class Check:
    name: str
    ok: bool
    witness: object = None


@dataclass
class Report:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def add(self, name: str, ok: bool, witness=None):
        self.checks.append(Check(name, bool(ok), witness))

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "version": SCHEMA_VERSION,
            "suite": self.suite,
            "ok": self.ok,
            "checks": [{"name": c.name, "status": "pass" if c.ok else "fail", "witness": jsonable(c.witness)} for c in self.checks],
        }

    def text(self) -> str:
        lines = [f"{self.suite}:"]
        for c in self.checks:
            line = f"  {'PASS' if c.ok else 'FAIL'}  {c.name}"
            if not c.ok and c.witness is not None:
                line += f"  {json.dumps(jsonable(c.witness))}"
            lines.append(line)
        lines.append(f"{sum(c.ok for c in self.checks)}/{len(self.checks)} passed")
        return "\n".join(lines)


def corrupt_rows(rows: dict, k: int, r: int, c: int) -> dict:
    """Copy of the gamma table with entry (r, c) of Gamma_k flipped in sign (or set, if zero)."""
    out = {key: list(v) for key, v in rows.items()}
    row = list(out[k][r - 1])
    row[c - 1] = {"+": "-", "-": "+", "0": "+"}[row[c - 1]]
    out[k][r - 1] = "".join(row)
    return {key: tuple(v) for key, v in out.items()}


def run_verify(seed: int = 0, corrupt: tuple | None = None) -> Report:
    rep = Report("verify")
    rows = corrupt_rows(cs.GAMMA_ROWS, *corrupt) if corrupt else cs.GAMMA_ROWS
    gamma = tuple(cs._decode(rows[k]) for k in range(1, 8))
    bad = cs.clifford_failures(gamma)
    rep.add("clifford", not bad, bad or None)
    if bad:
        rep.add("downstream", False, "gamma matrices invalid; remaining checks skipped")
        rep.checks.sort(key=lambda c: c.name)
        return rep
    g = cs.gamma_matrices(rows)
    rep.add("spin7-brackets", cs.spin7_bracket_check(g))
    b = cs.g2_basis(g)
    cmp = cs.compare_with_printed(b)
    rep.add(
        "commutator-table",
        not cmp["mismatches"] and not cmp["unlisted_nonzero"] and cmp["listed"] == 98,
        {
            "listed": cmp["listed"],
            "expected_listed": 98,
            "mismatches": [f"[{x},{y}]" for (x, y), *_ in cmp["mismatches"]],
            "unlisted_nonzero": [f"[{x},{y}]=" + " + ".join(f"{c}*{n}" for n, c in v.items()) for (x, y), v in cmp["unlisted_nonzero"]],
        },
    )
    rep.add("closure", cs.closure_check(b.ordered()) == 14, cs.closure_check(b.ordered()))
    try:
        eta = cs.invariant_spinor(b)
        vec = [str(x) for x in eta.vec]
        ok = tuple(eta.vec) == tuple(cs.GaussianRational(x) for x in cs.PRINTED_ETA0) and eta.norm_sq == 2
        rep.add("invariant-spinor", ok, {"computed": vec, "printed": list(cs.PRINTED_ETA0), "norm_sq": str(eta.norm_sq)})
    except G2GaugeError as e:
        rep.add("invariant-spinor", False, str(e))
    psi = cs.psi_form(cs.printed_spinor(), g)
    got = {k: int(v.constant_value()) for k, v in psi.terms.items()}
    rep.add("psi-table", got == PRINTED_PSI, None if got == PRINTED_PSI else {str(k): v for k, v in got.items()})
    f = g2core.build_structure()
    res = cs.resolve_frame_permutation(psi, f.phi0)
    rep.add(
        "frame-relabel",
        res["resolved"] is not None and not res["flagged"],
        {"forward": res["forward"], "backward": res["backward"], "alternatives": len(res["alternatives"])},
    )
    t1, t2 = g2core.t_tensor(f), g2core.t_tensor_bruteforce(f)
    rep.add("t-tensor", t1.nonzero() == t2.nonzero())
    mult = g2core.eigen_multiplicities(f.orientation)
    rep.add("lambda2-eigenvalues", mult[-2] == 7 and mult[1] == 14, {str(k): v for k, v in mult.items()})
    for deg, projs in ((3, g2core.lambda3_projectors()), (4, g2core.lambda4_projectors())):
        ranks = [linalg.rank(p) for p in projs]
        ok = ranks == [1, 7, 27]
        for i, p in enumerate(projs):
            for j, q in enumerate(projs):
                prod = linalg.matmul(p, q)
                want = p if i == j else [[0] * len(p) for _ in p]
                ok = ok and all(x == y for r1, r2 in zip(prod, want) for x, y in zip(r1, r2))
        rep.add(f"lambda{deg}-projectors", ok, ranks)
    rows_ = instanton.worked_example(strict=False)
    mism = [r["name"] for r in rows_ if not r["match"]]
    rep.add("worked-example", not mism, {r["name"]: r["diff"] for r in rows_ if not r["match"]} or None)
    rep.checks.sort(key=lambda c: c.name)
    return rep


# ---------------------------------------------------------------- commands


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from e


def _params(items) -> tuple[tuple, dict]:
    names, values = [], {}
    for it in items or []:
        name, _, val = it.partition("=")
        name = name.strip()
        if not name.isidentifier() or name == "e" or (name.startswith("x") and name[1:].isdigit()):
            raise ParseError(f"bad parameter name {name!r}")
        names.append(name)
        if val:
            try:
                values[name] = as_rational(Fraction(val.strip()))
            except (ValueError, ZeroDivisionError) as e:
                raise ParseError(f"bad value for {name}: {val!r}") from e
    return tuple(names), values


def _emit(obj, as_json: bool, text: str):
    print(json.dumps(obj, indent=2, default=str) if as_json else text)


def cmd_verify(a) -> int:
    corrupt = None
    if a.corrupt_gamma:
        try:
            corrupt = tuple(int(x) for x in a.corrupt_gamma.split(","))
            if len(corrupt) != 3 or not 1 <= corrupt[0] <= 7 or not all(1 <= x <= 8 for x in corrupt[1:]):
                raise ValueError
        except ValueError as e:
            raise ParseError("--corrupt-gamma expects K,ROW,COL with K in 1..7 and ROW, COL in 1..8") from e
    rep = run_verify(a.seed, corrupt)
    _emit(rep.to_json(), a.json, rep.text())
    return rep.exit_code


def cmd_classify(a) -> int:
    names, values = _params(a.param)
    B = parse_form(_read(a.form).strip(), names, degree=1)
    rep = instanton.classify(B, params=values or None)
    lines = [f"B = {print_form(B)}"] + [f"  {k}: {v.describe()}" for k, v in rep.verdicts.items()]
    _emit({"schema": SCHEMA, "version": SCHEMA_VERSION, "form": print_form(B), "verdicts": rep.to_json()}, a.json, "\n".join(lines))
    return 0


def cmd_decompose(a) -> int:
    w = parse_form(_read(a.form).strip(), degree=a.degree)
    parts = g2core.lambda2_split(w) if a.degree == 2 else g2core.lambda3_split(w) if a.degree == 3 else g2core.lambda4_split(w)
    dims = {2: (7, 14), 3: (1, 7, 27), 4: (1, 7, 27)}[a.degree]
    out = {f"Lambda{a.degree}_{i + 1} (dim {d})": print_form(p) for i, (p, d) in enumerate(zip(parts, dims))}
    _emit({"schema": SCHEMA, "version": SCHEMA_VERSION, "degree": a.degree, "pieces": out}, a.json,
          "\n".join(f"{k}: {v}" for k, v in out.items()))
    return 0


def cmd_example(a) -> int:
    av = as_rational(Fraction(a.a)) if a.a is not None else None
    bv = as_rational(Fraction(a.b)) if a.b is not None else None
    rows = instanton.worked_example(av, bv, strict=False)
    rep = Report("example")
    for r in rows:
        rep.add(r["name"], r["match"], None if r["match"] else {"computed": print_form(r["computed"]), "expected": print_form(r["expected"])})
    lines = [f"{'PASS' if r['match'] else 'FAIL'}  {r['name']:<12} computed {print_form(r['computed'])}"
             + ("" if r["match"] else f"   printed {print_form(r['expected'])}") for r in rows]
    _emit(rep.to_json(), a.json, "\n".join(lines))
    return rep.exit_code


def cmd_spinor(a) -> int:
    eta = cs.invariant_spinor()
    psi = cs.psi_form(cs.printed_spinor())
    res = cs.resolve_frame_permutation(psi, g2core.build_structure().phi0)
    obj = {
        "eta0_computed": [str(x) for x in eta.vec],
        "eta0_printed": list(cs.PRINTED_ETA0),
        "psi_from_printed_eta0": {"".join(map(str, k)): str(v) for k, v in psi.terms.items()},
        "frame": {"listing": list(cs.PRINTED_FRAME), "forward": res["forward"], "backward": res["backward"],
                  "resolved": res["resolved"], "example_alternative": list(res["alternatives"][0]) if res["alternatives"] else None},
    }
    text = "\n".join([
        f"eta0 (computed nullspace): {obj['eta0_computed']}",
        f"eta0 (printed): {obj['eta0_printed']}",
        "psi_ijk from the printed eta0: " + ", ".join(f"psi{k}={v}" for k, v in obj["psi_from_printed_eta0"].items()),
        f"frame reassignment {tuple(cs.PRINTED_FRAME)}: forward={res['forward']} backward={res['backward']} resolved={res['resolved']}",
        f"a permutation that does send psi to phi0: {obj['frame']['example_alternative']}",
    ])
    _emit(obj, a.json, text)
    return 0


def cmd_zeta_det(a) -> int:
    from .regdet import Trace, normalize, parse_det_expr, parse_zeta_product, zeta_product_eval

    expr = a.expr.strip()
    if expr.startswith("prod"):
        v = zeta_product_eval(parse_zeta_product(expr))
        obj = {"input": expr, "value": str(v.value), "rational": str(v.rational) if v.rational is not None else None,
               "symbolic": v.symbolic, "steps": v.steps}
        _emit(obj, a.json, "\n".join(v.steps + [f"= {v.value}"]))
        return 0
    betti = {0: a.b0, 1: a.b1}
    D = parse_det_expr(expr, betti)
    tr = Trace()
    N = normalize(D, tr)
    obj = {"input": expr, "parsed": str(D), "normal_form": str(N), "trace": tr.steps}
    text = "\n".join([f"parsed: {D}"] + [f"  [{s['rule']}] {s['result']}" for s in tr.steps] + [f"= {N}"])
    _emit(obj, a.json, text)
    return 0


def cmd_assemble(a) -> int:
    from .regdet import assemble_Zsc

    r = assemble_Zsc(a.b0, a.b1)
    obj = {
        "b0": a.b0, "b1": a.b1,
        "trace": r.trace.steps,
        "result": str(r.expr),
        "prefactor": str(r.prefactor),
        "exponent_pattern": [str(e) for e in r.exponent_pattern()],
        "matches_printed_pattern": r.matches_printed_pattern(),
        "matches_printed_prefactor": r.matches_printed_prefactor(),
    }
    lines = [f"[{s['rule']}] {s['note']}\n    {s['result']}" for s in r.trace.steps]
    lines += [f"Z_sc = {r.expr.pretty()}", f"prefactor {r.prefactor}; printed pattern {'matches' if obj['matches_printed_pattern'] else 'differs'};"
              f" printed prefactor 1/9 {'matches' if obj['matches_printed_prefactor'] else 'differs'}"]
    _emit(obj, a.json, "\n".join(lines))
    return 0


def cmd_db_verify(a) -> int:
    from . import dbcech as db

    try:
        g = db.complex_from_json(json.loads(_read(a.complex)))
        classes, bg = db.cocycles_from_json(json.loads(_read(a.cocycles)), g)
        gauge = db.gauge_from_json(json.loads(_read(a.gauge))) if a.gauge else None
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}") from e
    rep = Report("db-verify")
    rep.add("poly-dd", not g.P.dd_defects(), [list(t) for t in g.P.dd_defects()] or None)
    ins = g.P.insertion_defects(g.cover)
    rep.add("poly-insertion-rule", not ins, [list(t) for t in ins] or None)
    sup = g.P.support_defects(g.support)
    rep.add("poly-support", not sup, [list(t) for t in sup] or None)
    for i, c in enumerate(classes):
        r = db.db_cocycle_check(c, g.cover, g.support)
        rep.add(f"class{i}-cocycle", r.ok and r.transition_cocycle, None if r.ok else r.to_json())
    bgc = db.background_check(bg, g.cover, g.support)
    rep.add("background", not any(bgc.values()), {k: [str(t) for t in v] for k, v in bgc.items() if v} or None)
    val = db.action_total(g.P, g.cover, g.support, classes, bg)
    rep.add("action", True, val.to_json())
    if gauge is not None:
        dv = db.gauge_variation(g.P, g.cover, g.support, classes, bg, gauge)
        ok = dv == 0 if gauge.kind == "local" else dv.denominator == 1
        rep.add(f"gauge-{gauge.kind}", ok, {"variation": str(dv)})
    text = rep.text() + f"\nS = {val.total}  (mod Z: {val.mod_lattice})"
    if gauge is not None:
        text += f"\ngauge variation = {dv}"
    _emit(rep.to_json(), a.json, text)
    return rep.exit_code


def cmd_db_example(a) -> int:
    import random

    from . import dbcech as db

    inst = db.torus_instance(a.dim, a.q, a.k, seed=a.seed)
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "complex.json").write_text(json.dumps(db.complex_to_json(inst.geometry)))
    (out / "cocycles.json").write_text(json.dumps(db.cocycles_to_json(inst.classes, inst.bg)))
    rng = random.Random(a.seed)
    for kind in ("local", "large"):
        gd = db.random_gauge(inst.geometry, a.k, kind, rng)
        (out / f"gauge-{kind}.json").write_text(json.dumps(db.gauge_to_json(gd)))
    print(f"wrote complex.json, cocycles.json, gauge-local.json, gauge-large.json to {out}")
    return 0


# ---------------------------------------------------------------- entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="g2gauge", description="Exact checks for U(1) gauge theory on G2-manifolds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verify", help="run the verification suite")
    s.add_argument("--json", action="store_true")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--corrupt-gamma", metavar="K,ROW,COL", help="test mode: flip one gamma entry")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("classify", help="classify a connection 1-form")
    s.add_argument("--form", required=True, metavar="FILE", help="form text file, - for stdin")
    s.add_argument("--param", action="append", metavar="NAME[=VALUE]")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("decompose", help="split a form into G2-irreducible pieces")
    s.add_argument("--degree", type=int, choices=(2, 3, 4), required=True)
    s.add_argument("--form", required=True, metavar="FILE", help="form text file, - for stdin")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("example", help="the worked example table")
    s.add_argument("--a")
    s.add_argument("--b")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_example)

    s = sub.add_parser("spinor", help="invariant spinor, psi table and frame relabeling")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_spinor)

    s = sub.add_parser("zeta-det", help="evaluate a zeta product or normalize a determinant expression")
    s.add_argument("expr")
    s.add_argument("--b0", type=int, default=1)
    s.add_argument("--b1", type=int, default=0)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_zeta_det)

    s = sub.add_parser("assemble-zsc", help="derive the semiclassical partition function")
    s.add_argument("--b0", type=int, required=True)
    s.add_argument("--b1", type=int, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_assemble)

    s = sub.add_parser("db-verify", help="check DB cocycles and evaluate the action")
    s.add_argument("complex")
    s.add_argument("cocycles")
    s.add_argument("--gauge", metavar="FILE")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_db_verify)

    s = sub.add_parser("db-example", help="write a torus test instance as JSON files")
    s.add_argument("--dim", type=int, default=2)
    s.add_argument("--q", type=int, default=1)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_db_example)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except (G2GaugeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
