"""Command-line front end.

    simpres check FILE
    simpres homology FILE [--theory hochschild|secondary] [--max-degree N] [--oracle] [--json]
    simpres cohomology FILE [...]
    simpres homotopy-verify FILE [--theory ...] [--max-degree N] [--json]

Exit codes: 0 success, 1 a check or comparison failed, 2 the input could not
be parsed or the request was refused (unknown names, infeasible degree).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from . import __version__
from .algebra import Algebra, AlgebraMorphism, Bimodule, check_b_symmetric, check_epsilon
from .complexes import hom_over, tensor_over, to_chain_complex, to_cochain_complex
from .exactlin import GF, QQ, Field, Matrix
from .homotopy import (HomotopyEquivalence, PresimplicialHomotopy, PresimplicialMorphism, SIGN, check_equivalence,
                       reflexive_homotopy, symmetric_homotopy, verify_replacement)
from .oracles import classical_hochschild_betti, classical_hochschild_cobetti
from .simplicial import (bar_module, check_module_compatibility, check_simplicial_identities,
                         coefficient_right_module, constant_cosimplicial_module, secondary_bar_module,
                         transport_diagonal)

DEFAULT_DIM_CAP = 1 << 20
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    """Malformed input document or refused request (exit code 2)."""


class ValidationError(RuntimeError):
    """Input parsed but describes invalid structures (exit code 1)."""


# -- input documents -----------------------------------------------------------


def parse_field(spec) -> Field:
    if spec in (None, "Q", "QQ"):
        return QQ
    if isinstance(spec, dict) and set(spec) == {"Fp"}:
        p = spec["Fp"]
        if not isinstance(p, int) or p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise InputError(f"Fp needs a prime, got {p!r}")
        return GF(p)
    raise InputError(f"unknown field {spec!r}; use \"Q\" or {{\"Fp\": p}}")


def _scalar(field: Field, x, where: str):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise InputError(f"{where}: scalars must be strings or integers, got {x!r}")
    try:
        return field.parse(str(x))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: bad scalar {x!r} ({exc})") from None


def _vector(field: Field, v, n: int, where: str) -> dict:
    if not isinstance(v, list) or len(v) != n:
        raise InputError(f"{where}: expected a list of {n} scalars")
    out = {}
    for i, x in enumerate(v):
        c = _scalar(field, x, f"{where}[{i}]")
        if c != 0:
            out[i] = c
    return out


def _matrix(field: Field, rows, shape, where: str) -> Matrix:
    r, c = shape
    if not isinstance(rows, list) or len(rows) != r:
        raise InputError(f"{where}: expected {r} rows")
    return Matrix.from_dense([[_scalar(field, x, f"{where}[{i}][{j}]") for j, x in enumerate(_row(row, c, where))]
                              for i, row in enumerate(rows)], field, cols=c)


def _row(row, c, where):
    if not isinstance(row, list) or len(row) != c:
        raise InputError(f"{where}: expected rows of length {c}")
    return row


def parse_algebra(field: Field, name: str, spec: dict) -> Algebra:
    where = f"algebras.{name}"
    if not isinstance(spec, dict):
        raise InputError(f"{where}: expected an object")
    basis = spec.get("basis")
    if not isinstance(basis, list) or not basis:
        raise InputError(f"{where}.basis: expected a nonempty list of labels")
    n = len(basis)
    if "dim" in spec and spec["dim"] != n:
        raise InputError(f"{where}.dim disagrees with the basis length")
    sc = spec.get("structure_constants")
    if not isinstance(sc, list) or len(sc) != n or any(not isinstance(r, list) or len(r) != n for r in sc):
        raise InputError(f"{where}.structure_constants: expected a {n}×{n} array of vectors")
    table = [[_vector(field, sc[i][j], n, f"{where}.structure_constants[{i}][{j}]") for j in range(n)]
             for i in range(n)]
    unit = _vector(field, spec.get("unit"), n, f"{where}.unit")
    try:
        return Algebra(field, table, unit, [str(b) for b in basis], name=spec.get("name", name))
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


@dataclass
class Document:
    name: str
    field: Field
    algebras: Dict[str, Algebra]
    a: Algebra
    b: Optional[Algebra] = None
    eps: Optional[AlgebraMorphism] = None
    bimodule: Optional[Bimodule] = None
    homotopy: Optional[dict] = None
    raw: dict = field(default_factory=dict)


def parse_document(doc: dict, name: str = "") -> Document:
    if not isinstance(doc, dict):
        raise InputError("top level must be a JSON object")
    fld = parse_field(doc.get("field", "Q"))
    algs_spec = doc.get("algebras")
    if not isinstance(algs_spec, dict) or not algs_spec:
        raise InputError("algebras: expected a nonempty object")
    algebras = {k: parse_algebra(fld, k, v) for k, v in sorted(algs_spec.items())}

    def ref(key, where):
        if key not in algebras:
            raise InputError(f"{where}: unknown algebra {key!r}")
        return algebras[key]

    triple = doc.get("triple")
    b = eps = None
    if triple is not None:
        a = ref(triple.get("A"), "triple.A")
        b = ref(triple.get("B"), "triple.B")
        mat = _matrix(fld, triple.get("epsilon"), (a.dim, b.dim), "triple.epsilon")
        eps = AlgebraMorphism(b, a, mat)
    elif "algebra" in doc:
        a = ref(doc["algebra"], "algebra")
    elif len(algebras) == 1:
        a = next(iter(algebras.values()))
    else:
        raise InputError("several algebras and no \"algebra\" or \"triple\" to choose one")

    bimodule = None
    bspec = doc.get("bimodule")
    if bspec is not None:
        if not isinstance(bspec, dict):
            raise InputError("bimodule: expected an object")
        if bspec.get("regular"):
            bimodule = Bimodule.regular(a)
        else:
            left, right = bspec.get("left"), bspec.get("right")
            if not isinstance(left, list) or not isinstance(right, list) or len(left) != a.dim or len(right) != a.dim:
                raise InputError(f"bimodule: need {a.dim} left and {a.dim} right action matrices")
            dim = len(left[0]) if left and isinstance(left[0], list) else 0
            bimodule = _bimodule(a, [_matrix(fld, m, (dim, dim), f"bimodule.left[{i}]") for i, m in enumerate(left)],
                                [_matrix(fld, m, (dim, dim), f"bimodule.right[{i}]") for i, m in enumerate(right)],
                                name=bspec.get("name", "M"))
    return Document(doc.get("name", name), fld, algebras, a, b, eps, bimodule, doc.get("homotopy"), doc)


def _bimodule(*args, **kwargs) -> Bimodule:
    try:
        return Bimodule(*args, **kwargs)
    except ValueError as exc:
        raise InputError(f"bimodule: {exc}") from None


def load(path: str) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_document(doc, os.path.splitext(os.path.basename(path))[0])


# -- output --------------------------------------------------------------------


@dataclass
class ResultTable:
    columns: List[str]
    rows: List[list]
    metadata: Dict[str, object]

    def tsv(self) -> str:
        lines = [f"# {k}\t{_fmt(v)}" for k, v in self.metadata.items()]
        lines.append("\t".join(self.columns))
        lines += ["\t".join(_fmt(x) for x in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    def json(self) -> str:
        body = {"metadata": self.metadata, "rows": [dict(zip(self.columns, row)) for row in self.rows]}
        return json.dumps(body, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, list):
        return ",".join(_fmt(y) for y in x)
    return str(x)


def _field_name(f: Field) -> str:
    return "Q" if f == QQ else f"F{f.p}"


# -- feasibility guard -----------------------------------------------------------


def dim_cap() -> int:
    raw = os.environ.get("SIMPRES_DIM_CAP")
    if raw is None:
        return DEFAULT_DIM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"SIMPRES_DIM_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise InputError("SIMPRES_DIM_CAP must be positive")
    return cap


def level_dim(doc: Document, theory: str, n: int) -> int:
    if theory == "hochschild":
        return doc.a.dim ** (n + 2)
    return doc.a.dim ** (n + 2) * doc.b.dim ** ((n + 1) * (n + 2) // 2)


def guard(doc: Document, theory: str, top_level: int, coeff_dim: int) -> None:
    cap = dim_cap()
    for n in range(top_level + 1):
        est = coeff_dim * level_dim(doc, theory, n)
        if est > cap:
            raise InputError(f"refusing: level {n} needs an ambient space of dimension {est} "
                             f"(cap {cap}; set SIMPRES_DIM_CAP to raise it)")


# -- commands -----------------------------------------------------------------


def _coefficients(doc: Document, choice: str) -> Bimodule:
    if choice == "regular":
        return Bimodule.regular(doc.a)
    if doc.bimodule is None:
        raise InputError("--coefficients bimodule needs a \"bimodule\" entry in the input")
    return doc.bimodule


def _resolution(doc: Document, theory: str, max_level: int):
    if theory == "hochschild":
        return bar_module(doc.a, max_level)
    if doc.eps is None:
        raise InputError("--theory secondary needs a \"triple\" entry in the input")
    return secondary_bar_module(doc.a, doc.b, doc.eps, max_level)


def _validate(doc: Document, theory: str, m: Bimodule) -> None:
    """Structures must be valid before any complex is built."""
    if theory == "secondary" and doc.eps is None:
        raise InputError("the secondary theory needs a triple (A, B, epsilon) in the input")
    problems = doc.a.check()
    if theory == "secondary":
        problems += doc.b.check() + doc.eps.check() + check_epsilon(doc.eps)
    if not problems:
        problems = m.check()
    if theory == "secondary" and not problems:
        problems = check_b_symmetric(m, doc.eps)
    if problems:
        raise ValidationError("invalid input: " + "; ".join(problems[:3]))


def _meta(doc: Document, command: str, theory: str, **extra) -> Dict[str, object]:
    meta: Dict[str, object] = {"fixture": doc.name, "command": command, "theory": theory,
                               "field": _field_name(doc.field)}
    meta.update(extra)
    return meta


def cmd_check(doc: Document, args) -> (ResultTable, int):
    rows = []

    def record(name, problems):
        rows.append([name, "ok" if not problems else "FAIL", "; ".join(problems[:5])])

    for key, alg in doc.algebras.items():
        record(f"algebra {key}", alg.check())
    if doc.eps is not None:
        record("epsilon", doc.eps.check() + check_epsilon(doc.eps))
    if doc.bimodule is not None:
        probs = doc.bimodule.check()
        record("bimodule", probs)
        if doc.eps is not None and not probs:
            record("bimodule B-symmetric", check_b_symmetric(doc.bimodule, doc.eps))
    basics_ok = all(r[1] == "ok" for r in rows)
    deg = args.max_degree
    theories = ["hochschild"] + (["secondary"] if doc.eps is not None else [])
    if basics_ok:
        for theory in theories:
            up = deg if deg is not None else (3 if theory == "hochschild" else 1)
            guard(doc, theory, up + 1, 1)
            mod = _resolution(doc, theory, up + 1)
            fmt = lambda fs: [f"{f.check} at degree {f.degree} {tuple(f.indices)}" + (f" ({f.detail})" if f.detail else "")
                              for f in fs]
            record(f"{theory} algebra identities", fmt(check_simplicial_identities(mod.algebra, up)))
            record(f"{theory} module identities", fmt(check_simplicial_identities(mod, up)))
            record(f"{theory} module compatibility", fmt(check_module_compatibility(mod, up)))
    ok = all(r[1] == "ok" for r in rows)
    table = ResultTable(["check", "result", "detail"], rows, _meta(doc, "check", "+".join(theories)))
    return table, EXIT_OK if ok else EXIT_FAIL


def _homology_like(doc: Document, args, dual: bool) -> (ResultTable, int):
    theory, top = args.theory, args.max_degree if args.max_degree is not None else 3
    m = _coefficients(doc, args.coefficients)
    _validate(doc, theory, m)
    guard(doc, theory, top + 1, m.dim)
    mod = _resolution(doc, theory, top + 1)
    if dual:
        cx = to_cochain_complex(hom_over(mod, constant_cosimplicial_module(m, mod.algebra)), top + 1)
    else:
        cx = to_chain_complex(tensor_over(coefficient_right_module(m, mod.algebra), mod), top + 1)
    table = cx.betti_table(top)
    columns = ["degree", "dim", "betti"]
    rows = [[n, cx.dims[n], b] for n, b in enumerate(table)]
    code = EXIT_OK
    if args.oracle:
        if theory == "secondary" and doc.b.dim != 1:
            raise InputError("no oracle for secondary theory unless B is one-dimensional")
        oracle = (classical_hochschild_cobetti if dual else classical_hochschild_betti)(doc.a, m, top)
        columns.append("oracle")
        for row, o in zip(rows, oracle):
            row.append(o)
        if oracle != table:
            code = EXIT_FAIL
    meta = _meta(doc, "cohomology" if dual else "homology", theory, coefficients=args.coefficients, max_degree=top)
    return ResultTable(columns, rows, meta), code


def cmd_homology(doc, args):
    return _homology_like(doc, args, dual=False)


def cmd_cohomology(doc, args):
    return _homology_like(doc, args, dual=True)


def _morphism_spec(spec, src, tgt, fld: Field, name: str, transported) -> PresimplicialMorphism:
    if spec in (None, "identity"):
        if transported is not None:
            if name == "f":
                return PresimplicialMorphism(src, tgt, lambda n: transported.phi_matrix(n), name="φ")
            return PresimplicialMorphism(src, tgt, lambda n: transported.phi_matrix(n, inverse_=True), name="φ⁻¹")
        return PresimplicialMorphism.identity(src)
    if spec == "zero":
        return PresimplicialMorphism.zero(src, tgt)
    if isinstance(spec, dict) and "scalar" in spec:
        if src is not tgt:
            raise InputError(f"homotopy.{name}: scalar morphisms need the same source and target")
        return PresimplicialMorphism.scalar(src, _scalar(fld, spec["scalar"], f"homotopy.{name}.scalar"))
    if isinstance(spec, dict) and "matrices" in spec:
        mats = {}
        for key, rows in spec["matrices"].items():
            try:
                n = int(key)
            except ValueError:
                raise InputError(f"homotopy.{name}.matrices: degree keys must be integers") from None
            mats[n] = _matrix(fld, rows, (tgt.dim(n), src.dim(n)), f"homotopy.{name}.matrices[{key}]")
        return PresimplicialMorphism.from_matrices(src, tgt, mats, name=name)
    raise InputError(f"homotopy.{name}: unknown morphism {spec!r}")


def _homotopy_spec(spec, start, end, fld: Field, name: str) -> PresimplicialHomotopy:
    mod = start.source
    ident = PresimplicialMorphism.identity(mod)
    if spec in (None, "reflexive"):
        base = reflexive_homotopy(ident)
    elif spec == "symmetric-reflexive":
        base = symmetric_homotopy(reflexive_homotopy(ident))
    elif isinstance(spec, dict) and "matrices" in spec:
        mats = {}
        for key, rows in spec["matrices"].items():
            try:
                n, i = (int(x) for x in key.split(","))
            except ValueError:
                raise InputError(f"homotopy.{name}.matrices: keys must look like \"n,i\"") from None
            mats[(n, i)] = _matrix(fld, rows, (mod.dim(n + 1), mod.dim(n)), f"homotopy.{name}.matrices[{key}]")
        return PresimplicialHomotopy.from_matrices(start, end, mats, name=name)
    else:
        raise InputError(f"homotopy.{name}: unknown homotopy {spec!r}")
    return PresimplicialHomotopy(start, end, base.component, name=name)


def _perturbed(obj, edits, fld):
    """Wrap a morphism or homotopy so selected matrix entries are overwritten."""
    if not edits:
        return obj
    if isinstance(obj, PresimplicialMorphism):
        inner = obj.matrix
        def make(n):
            m = inner(n)
            for e in edits:
                if e["key"] == (n,):
                    m = m.with_entry(e["row"], e["col"], e["value"])
            return m
        return PresimplicialMorphism(obj.source, obj.target, make, name=obj.name)
    inner_h = obj.component
    def make_h(n, i):
        m = inner_h(n, i)
        for e in edits:
            if e["key"] == (n, i):
                m = m.with_entry(e["row"], e["col"], e["value"])
        return m
    return PresimplicialHomotopy(obj.start, obj.end, make_h, name=obj.name)


def build_equivalence(doc: Document, theory: str, max_level: int):
    spec = doc.homotopy
    if not isinstance(spec, dict):
        raise InputError("homotopy-verify needs a \"homotopy\" object in the input")
    fld = doc.field
    base = _resolution(doc, theory, max_level)
    target = spec.get("target", "same")
    transported = None
    if target == "same":
        other = base
    elif isinstance(target, dict) and "transport" in target:
        psi = _matrix(fld, target["transport"], (doc.a.dim, doc.a.dim), "homotopy.target.transport")
        from .exactlin import rank
        if rank(psi) != doc.a.dim:
            raise InputError("homotopy.target.transport: ψ must be invertible")
        other = transported = transport_diagonal(base, psi)
    else:
        raise InputError(f"homotopy.target: unknown target {target!r}")

    edits: Dict[str, list] = {}
    for k, e in enumerate(spec.get("perturb", [])):
        where = f"homotopy.perturb[{k}]"
        try:
            key = tuple(int(x) for x in ([e["degree"]] + ([e["index"]] if "index" in e else [])))
            edits.setdefault(e["map"], []).append(
                {"key": key, "row": int(e["row"]), "col": int(e["col"]), "value": _scalar(fld, e["value"], where)})
        except (KeyError, TypeError, ValueError):
            raise InputError(f"{where}: need map, degree, [index,] row, col, value") from None
    f = _perturbed(_morphism_spec(spec.get("f"), base, other, fld, "f", transported), edits.get("f"), fld)
    g = _perturbed(_morphism_spec(spec.get("g"), other, base, fld, "g", transported), edits.get("g"), fld)
    h = _perturbed(_homotopy_spec(spec.get("h"), g.compose(f), PresimplicialMorphism.identity(base), fld, "h"),
                   edits.get("h"), fld)
    t = _perturbed(_homotopy_spec(spec.get("t"), f.compose(g), PresimplicialMorphism.identity(other), fld, "t"),
                   edits.get("t"), fld)
    return HomotopyEquivalence(f, g, h, t)


def cmd_homotopy_verify(doc: Document, args) -> (ResultTable, int):
    theory, top = args.theory, args.max_degree if args.max_degree is not None else 2
    m = _coefficients(doc, args.coefficients)
    _validate(doc, theory, m)
    guard(doc, theory, top + 1, m.dim)
    eq = build_equivalence(doc, theory, top + 1)
    rows = []
    inputs = check_equivalence(eq, top)
    for f in inputs:
        rows.append(["input", "FAIL", f"{f.check} at degree {f.degree} {tuple(f.indices)}" + (f" ({f.detail})" if f.detail else "")])
    if inputs:
        rows.append(["pipeline", "skipped", "inputs failed their checks"])
        ok = False
    else:
        coeff = coefficient_right_module(m, eq.source.algebra)
        report = verify_replacement(coeff, eq, top, check_inputs=False)
        rows.append(["input", "ok", "morphisms and homotopies pass all checks"])
        for name, fails in report.details.items():
            detail = ""
            if fails:
                f = fails[0]
                detail = f"{f.check} at degree {f.degree} {tuple(f.indices)}"
            rows.append([name, "FAIL" if fails else "ok", detail])
        rows.append(["betti source", "ok", _fmt(report.betti_source)])
        rows.append(["betti target", "ok" if report.betti_source == report.betti_target else "FAIL",
                     _fmt(report.betti_target)])
        ok = report.ok
    meta = _meta(doc, "homotopy-verify", theory, coefficients=args.coefficients, max_degree=top, sign=SIGN)
    return ResultTable(["check", "result", "detail"], rows, meta), EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"check": cmd_check, "homology": cmd_homology, "cohomology": cmd_cohomology,
            "homotopy-verify": cmd_homotopy_verify}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simpres", description="Simplicial resolutions and (secondary) Hochschild invariants.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("input", help="JSON input document")
        p.add_argument("--max-degree", type=int, default=None)
        p.add_argument("--json", action="store_true", help="emit JSON instead of TSV")
        if name != "check":
            p.add_argument("--theory", choices=["hochschild", "secondary"], default="hochschild")
            p.add_argument("--coefficients", choices=["regular", "bimodule"], default=None)
        if name in ("homology", "cohomology"):
            p.add_argument("--oracle", action="store_true", help="compare with the classical complex")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    started = time.perf_counter()
    try:
        if args.max_degree is not None and args.max_degree < 0:
            raise InputError("--max-degree must be nonnegative")
        doc = load(args.input)
        if args.command != "check" and args.coefficients is None:
            args.coefficients = "bimodule" if doc.bimodule is not None else "regular"
        table, code = COMMANDS[args.command](doc, args)
    except InputError as exc:
        print(f"simpres: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValidationError as exc:
        print(f"simpres: {exc}", file=sys.stderr)
        return EXIT_FAIL
    table.metadata["wall_time"] = f"{time.perf_counter() - started:.3f}"
    sys.stdout.write(table.json() if args.json else table.tsv())
    return code


if __name__ == "__main__":
    sys.exit(main())
