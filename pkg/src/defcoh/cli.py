"""Command-line interface: JSON algebroid documents in, deterministic reports out.

Subcommands::

    defcoh validate FILE
    defcoh betti FILE --weights A..B
    defcoh defclass FILE (--t SAMPLES | --ansatz-degree N)
    defcoh les FILE --kind action|regular --weights A..B
    defcoh poisson FILE --weights A..B

All accept ``--format json|text`` and ``--timing``.  Exit codes: 0 success,
1 invalid document or failed validation, 2 usage error.  Negative values
need the ``--weights=-2..3`` spelling so they are not read as flags.
"""

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from .algebroid import (
    Algebroid,
    Representation,
    build_action_algebroid,
    build_cotangent_algebroid,
    validate_algebroid,
    validate_representation,
)
from .defcomplex import FrameBundle, betti_def, top_degree
from .deformation import BracketFamily, triviality_solve, validate_family
from .poisson import MultiVectorField, is_poisson, poisson_complex, poisson_embedding_map
from .polybase import BaseSpec, PolyDerivation, PolynomialSyntaxError, parse_family_poly, parse_poly
from .ratlin import betti, les_from_ses
from .sequences import RegularData, build_action_ses, build_regular_ses

__all__ = [
    "DocumentError",
    "AlgebroidDocument",
    "load_schema",
    "parse_document",
    "run_command",
    "render",
    "main",
]

REPORT_VERSION = 1
DOCUMENT_SCHEMA = "algebroid-document-1.json"
REPORT_SCHEMA = "report-1.json"


def load_schema(name):
    return json.loads(resources.files("defcoh").joinpath("schemas", name).read_text("utf-8"))


# -- documents ------------------------------------------------------------------


@dataclass
class Diagnostic:
    message: str
    pointer: str = None
    line: int = None
    column: int = None

    def as_dict(self):
        out = {"message": self.message}
        if self.pointer is not None:
            out["pointer"] = self.pointer
        if self.line is not None:
            out["line"], out["column"] = self.line, self.column
        return out


class DocumentError(ValueError):
    """A document that is not valid JSON or does not describe an algebroid."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(_diag_text(d) for d in self.diagnostics))


def _diag_text(d):
    if d.line is not None:
        return f"line {d.line}, column {d.column}: {d.message}"
    return f"{d.pointer or '/'}: {d.message}"


def _pointer(parts):
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


@dataclass
class AlgebroidDocument:
    """A parsed document.  ``kind`` is ``"algebroid"``, ``"family"`` or ``"poisson"``."""

    name: str
    kind: str
    raw: dict
    base: BaseSpec
    algebroid: object = None
    family: object = None
    pi: object = None
    representations: list = field(default_factory=list)
    regular: object = None
    constant_brackets: bool = False


class _Builder:
    def __init__(self, raw):
        self.raw = raw
        self.errors = []

    def fail(self, parts, message):
        self.errors.append(Diagnostic(message, pointer=_pointer(parts)))

    def poly(self, text, parts, base, family=False):
        try:
            if family:
                return parse_family_poly(text, base)
            return parse_poly(text, base)
        except PolynomialSyntaxError as exc:
            self.fail(parts, f"{exc.message} at character {exc.position} of {text!r}")
        except ValueError as exc:
            self.fail(parts, str(exc))
        return None


def parse_document(data, name=None):
    """Parse bytes or text into an :class:`AlgebroidDocument`.

    Raises :class:`DocumentError` with line/column for JSON syntax errors
    and JSON pointers for structural or semantic errors.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentError([Diagnostic(f"not UTF-8: {exc.reason} at byte {exc.start}")])
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DocumentError([Diagnostic(exc.msg, line=exc.lineno, column=exc.colno)])
    validator = jsonschema.Draft202012Validator(load_schema(DOCUMENT_SCHEMA))
    problems = sorted(
        validator.iter_errors(raw), key=lambda e: (_pointer(e.absolute_path), e.message)
    )
    if problems:
        raise DocumentError(
            [Diagnostic(e.message, pointer=_pointer(e.absolute_path)) for e in problems]
        )
    b = _Builder(raw)
    doc = _build(b, raw, name or raw.get("name") or "document")
    if b.errors:
        raise DocumentError(b.errors)
    return doc


def _build(b, raw, name):
    bspec = raw["base"]
    if len(bspec["variables"]) != len(bspec["weights"]):
        b.fail(["base", "weights"], "need one weight per variable")
        return None
    try:
        base = BaseSpec(bspec["variables"], bspec["weights"])
    except ValueError as exc:
        b.fail(["base", "variables"], str(exc))
        return None
    if "t" in base.names and "t_degree" in raw:
        b.fail(["base", "variables"], "'t' is reserved for the family parameter")
        return None
    if "poisson" in raw:
        for key in ("frame", "anchor", "brackets", "t_degree", "representations", "regular_data"):
            if key in raw:
                b.fail([key], "not allowed in a Poisson document; the frame is dx_1..dx_n")
        if b.errors:
            return None
        pi = _build_poisson(b, raw["poisson"], base)
        doc = AlgebroidDocument(name, "poisson", raw, base, pi=pi)
        if pi is not None and not b.errors:
            weight = raw["poisson"].get("weight")
            try:
                if is_poisson(pi):
                    doc.algebroid = build_cotangent_algebroid(pi, label=name, weight=weight)
            except ValueError as exc:
                b.fail(["poisson"], str(exc))
        return doc
    if "frame" not in raw:
        b.fail([], "either 'frame' or 'poisson' is required")
        return None
    fr = raw["frame"]
    if len(fr["names"]) != len(fr["weights"]):
        b.fail(["frame", "weights"], "need one weight per frame element")
        return None
    try:
        bundle = FrameBundle(base, fr["names"], fr["weights"])
    except ValueError as exc:
        b.fail(["frame", "names"], str(exc))
        return None
    family = "t_degree" in raw
    tdeg = raw.get("t_degree", 0)
    r, n = bundle.rank, base.n
    powers = range(tdeg + 1)
    zero = base.zero()

    def coeff(text, parts):
        """Polynomial split by powers of t (a single power outside families)."""
        p = b.poly(text, parts, base, family)
        if p is None:
            return None
        if not family:
            return {0: p}
        bad = [k for k in p if k > tdeg]
        if bad:
            b.fail(parts, f"power t^{max(bad)} exceeds t_degree {tdeg}")
            return None
        return p

    anchors = {j: [[zero] * n for _ in range(r)] for j in powers}
    rows = raw.get("anchor")
    if rows is not None:
        if len(rows) != r:
            b.fail(["anchor"], f"need {r} rows (one per frame element), got {len(rows)}")
        for i, row in enumerate(rows[:r]):
            if len(row) != n:
                b.fail(["anchor", i], f"need {n} entries (one per variable), got {len(row)}")
                continue
            for a, text in enumerate(row):
                split = coeff(text, ["anchor", i, a])
                for j, p in (split or {}).items():
                    anchors[j][i][a] = p
    brackets = {j: {} for j in powers}
    seen = {}
    for idx, entry in enumerate(raw.get("brackets", [])):
        i, j = entry["i"], entry["j"]
        if not i < j:
            b.fail(["brackets", idx], f"need i < j, got i={i}, j={j}")
            continue
        if j >= r:
            b.fail(["brackets", idx, "j"], f"index {j} out of range for rank {r}")
            continue
        if (i, j) in seen:
            b.fail(["brackets", idx], f"pair ({i}, {j}) already given at /brackets/{seen[(i, j)]}")
            continue
        seen[(i, j)] = idx
        if len(entry["value"]) != r:
            b.fail(["brackets", idx, "value"], f"need {r} entries, got {len(entry['value'])}")
            continue
        for k, text in enumerate(entry["value"]):
            split = coeff(text, ["brackets", idx, "value", k])
            for s, p in (split or {}).items():
                brackets[s].setdefault((i, j), [zero] * r)[k] = p
    if b.errors:
        return None
    algs = []
    for j in powers:
        anchor = [PolyDerivation(base, anchors[j][i]) for i in range(r)]
        algs.append(Algebroid(bundle, brackets[j], anchor, label=name))
    doc = AlgebroidDocument(name, "family" if family else "algebroid", raw, base)
    doc.constant_brackets = all(
        p.is_constant() for s in brackets[0].values() for p in s
    )
    if family:
        doc.family = BracketFamily.from_algebroids(algs, label=name)
        doc.algebroid = algs[0]
    else:
        doc.algebroid = algs[0]
    A = doc.algebroid
    for ridx, rep in enumerate(raw.get("representations", [])):
        doc.representations.append(_build_rep(b, rep, ridx, A, family))
    if "regular_data" in raw:
        doc.regular = _build_regular(b, raw["regular_data"], A)
    return doc


def _build_poisson(b, spec, base):
    n = base.n
    values, seen = {}, {}
    for idx, entry in enumerate(spec["pairs"]):
        i, j = entry["i"], entry["j"]
        parts = ["poisson", "pairs", idx]
        if i == j:
            b.fail(parts, f"need i != j, got i=j={i}")
            continue
        if max(i, j) >= n:
            b.fail(parts, f"index {max(i, j)} out of range for {n} variables")
            continue
        key = (min(i, j), max(i, j))
        if key in seen:
            b.fail(parts, f"pair {key} already given at /poisson/pairs/{seen[key]}")
            continue
        seen[key] = idx
        p = b.poly(entry["value"], parts + ["value"], base)
        if p is not None:
            values[(i, j)] = p
    if b.errors:
        return None
    return MultiVectorField(base, 2, values)


def _frame_dims(b, parts, frame):
    if len(frame["names"]) != len(frame["weights"]):
        b.fail(parts + ["weights"], "need one weight per frame element")
        return False
    return True


def _build_rep(b, spec, ridx, A, family):
    parts = ["representations", ridx]
    if family:
        b.fail(parts, "representations are not supported on families")
        return None
    if not _frame_dims(b, parts + ["frame"], spec["frame"]):
        return None
    s, r = len(spec["frame"]["names"]), A.rank
    conn = spec["connection"]
    if len(conn) != r:
        b.fail(parts + ["connection"], f"need {r} matrices (one per frame element), got {len(conn)}")
        return None
    gamma = []
    for i, mat in enumerate(conn):
        if len(mat) != s or any(len(row) != s for row in mat):
            b.fail(parts + ["connection", i], f"need an {s} x {s} matrix")
            return None
        gamma.append(
            [
                [b.poly(text, parts + ["connection", i, k, j], A.base) for j, text in enumerate(row)]
                for k, row in enumerate(mat)
            ]
        )
    if b.errors:
        return None
    try:
        return Representation(A, spec["frame"]["names"], spec["frame"]["weights"], gamma, label=spec["name"])
    except (TypeError, ValueError) as exc:
        b.fail(parts, str(exc))
        return None


def _build_regular(b, spec, A):
    r, n = A.rank, A.base.n
    lists = {}
    for key, width in (("kernel", r), ("complement", r), ("normal", n)):
        vecs = []
        for idx, vec in enumerate(spec[key]):
            parts = ["regular_data", key, idx]
            if len(vec) != width:
                b.fail(parts, f"need {width} entries, got {len(vec)}")
                continue
            vecs.append([b.poly(text, parts + [a], A.base) for a, text in enumerate(vec)])
        lists[key] = vecs
    if b.errors:
        return None
    return {
        "kernel": lists["kernel"],
        "complement": lists["complement"],
        "normal": [PolyDerivation(A.base, v) for v in lists["normal"]],
    }


# -- validation ----------------------------------------------------------------


def _check_dict(obj, c):
    witness = None if c.witness is None else [
        w if isinstance(w, (int, str)) else str(w) for w in c.witness
    ]
    return {"object": obj, "name": c.name, "passed": c.passed, "witness": witness, "detail": c.detail}


def _regular_data(doc):
    spec = doc.regular
    return RegularData(doc.algebroid, spec["kernel"], spec["complement"], spec["normal"])


def validate_document(doc):
    """All checks that apply to ``doc``, as report dictionaries."""
    checks = []
    if doc.kind == "poisson":
        ok = is_poisson(doc.pi)
        checks.append(
            {
                "object": "poisson",
                "name": "schouten",
                "passed": ok,
                "witness": None,
                "detail": "" if ok else "[pi, pi] is nonzero",
            }
        )
        if not ok or doc.algebroid is None:
            return checks
    if doc.kind == "family":
        checks += [_check_dict("family", c) for c in validate_family(doc.family).checks]
    else:
        checks += [_check_dict("algebroid", c) for c in validate_algebroid(doc.algebroid).checks]
    algebroid_ok = all(c["passed"] for c in checks)
    for E in doc.representations:
        if not algebroid_ok:
            break
        checks += [_check_dict(f"representation {E.label}", c) for c in validate_representation(E).checks]
    if doc.regular is not None and algebroid_ok:
        try:
            _regular_data(doc)
            checks.append({"object": "regular_data", "name": "adapted_frames", "passed": True, "witness": None, "detail": ""})
        except (ArithmeticError, ValueError) as exc:
            checks.append(
                {"object": "regular_data", "name": "adapted_frames", "passed": False, "witness": None, "detail": str(exc)}
            )
    return checks


# -- serialisation ---------------------------------------------------------------


def _frac(x):
    return str(Fraction(x))


def _cochain_dict(D):
    names = D.bundle.names
    return {
        "degree": D.degree,
        "tensor": [
            {"args": [names[i] for i in I], "value": [str(p) for p in val]}
            for I, val in sorted(D.tensor.items())
        ],
        "symbol": [
            {"args": [names[i] for i in J], "value": [str(p) for p in X.coeffs]}
            for J, X in sorted(D.symbol.items())
        ],
    }


def _by_degree(d, degrees):
    return [d.get(k, 0) for k in degrees]


# -- commands --------------------------------------------------------------------


class UsageError(Exception):
    pass


def _require_valid(doc):
    checks = validate_document(doc)
    return checks, all(c["passed"] for c in checks)


def cmd_validate(doc, args):
    checks, ok = _require_valid(doc)
    return (0 if ok else 1), {"checks": checks, "result": {"kind": doc.kind, "valid": ok}}


def cmd_betti(doc, args):
    checks, ok = _require_valid(doc)
    if not ok:
        return 1, {"checks": checks}
    A = doc.algebroid
    degrees = list(range(top_degree(A) + 1))
    rows = []
    for w in args.weights:
        b = betti_def(A, [w])
        rows.append({"weight": w, "betti": [b[(k, w)] for k in degrees]})
    result = {"kind": doc.kind, "degrees": degrees, "table": rows}
    if doc.kind == "family":
        result["specialized_at_t"] = "0"
    return 0, {"result": result}


def cmd_defclass(doc, args):
    if doc.kind != "family":
        raise UsageError("defclass needs a family document (with t_degree)")
    checks, ok = _require_valid(doc)
    if not ok:
        return 1, {"checks": checks}
    F = doc.family
    if args.t is not None:
        sols = triviality_solve(F, samples=args.t)
        rows = []
        for s in sols:
            rows.append(
                {
                    "t": _frac(s.t),
                    "class_coords": [_frac(c) for c in s.class_coords],
                    "class_is_zero": not any(s.class_coords),
                    "primitive": None if s.primitive is None else _cochain_dict(s.primitive),
                }
            )
        return 0, {"result": {"mode": "samples", "samples": rows}}
    sol = triviality_solve(F, ansatz_degree=args.ansatz_degree)
    coeffs = None if not sol.solved else [_cochain_dict(D) for D in sol.coefficients]
    return 0, {"result": {"mode": "ansatz", "ansatz_degree": sol.ansatz_degree, "solved": sol.solved, "coefficients": coeffs}}


def _action_algebroid(doc):
    A = doc.algebroid
    if doc.kind != "algebroid":
        raise UsageError("les --kind action needs a plain algebroid document")
    if any(A.weights) or not doc.constant_brackets:
        return None, "action algebroids need constant brackets and frame weights 0"
    r = A.rank
    c = [[[Fraction(0)] * r for _ in range(r)] for _ in range(r)]
    for (i, j), s in A.brackets.items():
        for k, p in enumerate(s):
            c[i][j][k] = p.constant_term()
            c[j][i][k] = -p.constant_term()
    try:
        return build_action_algebroid(c, A.anchor, A.base, A.names, label=doc.name), None
    except ValueError as exc:
        return None, str(exc)


def cmd_les(doc, args):
    checks, ok = _require_valid(doc)
    if not ok:
        return 1, {"checks": checks}
    rows = []
    if args.kind == "action":
        A, why = _action_algebroid(doc)
        if A is None:
            checks.append({"object": "algebroid", "name": "action_form", "passed": False, "witness": None, "detail": why})
            return 1, {"checks": checks}
        degrees = list(range(A.rank + 2))
        for w in args.weights:
            S = build_action_ses(A, w)
            problems = S.violations()
            L = les_from_ses(S) if not problems else None
            rows.append(
                {
                    "weight": w,
                    "ses_valid": not problems,
                    "ses_problems": problems,
                    "exact": bool(L and L.exact),
                    "exact_at": [] if L is None else list(L.exact_at),
                    "H(A;TM) shifted": _by_degree(L.h_sub, degrees) if L else [],
                    "DH": _by_degree(L.h_mid, degrees) if L else [],
                    "H(A;g_M)": _by_degree(L.h_quot, degrees) if L else [],
                }
            )
        return 0, {"result": {"kind": "action", "degrees": degrees, "slices": rows}}
    if doc.regular is None:
        raise UsageError("les --kind regular needs regular_data in the document")
    if doc.kind != "algebroid":
        raise UsageError("les --kind regular needs a plain algebroid document")
    R = _regular_data(doc)
    degrees = list(range(doc.algebroid.rank + 2))
    for w in args.weights:
        RS = build_regular_ses(R, w)
        rows.append(
            {
                "weight": w,
                "c2_betti": _by_degree(RS.c2_betti, degrees),
                "c2_homotopy": RS.c2_homotopy,
                "c2_acyclic": RS.c2_acyclic,
                "les1_exact": RS.les1.exact,
                "les2_exact": RS.les2.exact,
                "exact": RS.exact,
                "H(A;g)": [row["H(A;g)"] for row in RS.composite],
                "DH": [row["DH"] for row in RS.composite],
                "H(A;nu) shifted": [row["H(A;nu) shifted"] for row in RS.composite],
            }
        )
    return 0, {"result": {"kind": "regular", "degrees": degrees, "slices": rows}}


def cmd_poisson(doc, args):
    if doc.kind != "poisson":
        raise UsageError("poisson needs a document with a poisson field")
    checks, ok = _require_valid(doc)
    if not ok:
        return 1, {"checks": checks}
    pi, A = doc.pi, doc.algebroid
    W = A.weights[0] - A.base.weights[0] if A.rank else 0
    degrees = list(range(pi.base.n + 1))
    rows = []
    for w in args.weights:
        C, _ = poisson_complex(pi, w, W)
        _, defects = poisson_embedding_map(pi, w, A)
        rows.append(
            {
                "weight": w,
                "betti": _by_degree(betti(C), degrees),
                "embedding_weight": w + W,
                "embedding_chain_map": not defects,
            }
        )
    return 0, {"result": {"bivector_weight": W, "degrees": degrees, "table": rows}}


COMMANDS = {
    "validate": cmd_validate,
    "betti": cmd_betti,
    "defclass": cmd_defclass,
    "les": cmd_les,
    "poisson": cmd_poisson,
}


# -- argument parsing ------------------------------------------------------------


def _weight_range(text):
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def _samples(text):
    try:
        out = [Fraction(s.strip()) for s in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}")
    return out


def _nonneg(text):
    try:
        n = int(text)
    except ValueError:
        n = -1
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return n


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    p = _Parser(prog="defcoh", description="Exact deformation cohomology of Lie algebroids.", allow_abbrev=False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("file", help="algebroid document (JSON)")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")

    common(sub.add_parser("validate", help="validate a document", allow_abbrev=False))
    sp = sub.add_parser("betti", help="Betti numbers of the deformation complex", allow_abbrev=False)
    common(sp)
    sp.add_argument("--weights", type=_weight_range, required=True, metavar="A..B")
    sp = sub.add_parser("defclass", help="deformation classes of a family", allow_abbrev=False)
    common(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--t", type=_samples, metavar="SAMPLES", help="comma-separated rationals")
    g.add_argument("--ansatz-degree", type=_nonneg, metavar="N")
    sp = sub.add_parser("les", help="long exact sequence certificates", allow_abbrev=False)
    common(sp)
    sp.add_argument("--kind", choices=("action", "regular"), required=True)
    sp.add_argument("--weights", type=_weight_range, required=True, metavar="A..B")
    sp = sub.add_parser("poisson", help="Poisson cohomology and its embedding", allow_abbrev=False)
    common(sp)
    sp.add_argument("--weights", type=_weight_range, required=True, metavar="A..B")
    return p


# -- driver ----------------------------------------------------------------------


@dataclass
class Outcome:
    code: int
    report: dict = None
    message: str = ""
    format: str = "json"


def run_command(argv):
    """Run one subcommand; returns an :class:`Outcome` with the exit code and report."""
    fmt = "text" if "--format=text" in argv or _follows(argv, "--format", "text") else "json"
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return Outcome(2, message=str(exc), format=fmt)
    try:
        data = Path(args.file).read_bytes()
    except OSError as exc:
        return Outcome(2, message=f"defcoh: cannot read {args.file}: {exc.strerror}", format=fmt)
    report = {
        "report_version": REPORT_VERSION,
        "command": args.command,
        "document": Path(args.file).name,
        "status": "ok",
    }
    start = time.perf_counter()
    try:
        doc = parse_document(data)
    except DocumentError as exc:
        report["status"] = "invalid"
        report["errors"] = [d.as_dict() for d in exc.diagnostics]
        return Outcome(1, report, format=args.format)
    report["document"] = doc.name if "name" in doc.raw else report["document"]
    try:
        code, body = COMMANDS[args.command](doc, args)
    except UsageError as exc:
        return Outcome(2, message=f"defcoh {args.command}: {exc}", format=args.format)
    if code:
        report["status"] = "invalid"
    report.update(body)
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    return Outcome(code, report, format=args.format)


def _follows(argv, flag, value):
    return any(a == flag and b == value for a, b in zip(argv, argv[1:]))


def render(report, fmt="json"):
    if fmt == "json":
        return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    lines = []
    _text(report, 0, lines)
    return "\n".join(lines) + "\n"


def _scalar(x):
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    return str(x)


def _text(obj, indent, lines):
    pad = "  " * indent
    for key, val in obj.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            _text(val, indent + 1, lines)
        elif isinstance(val, list) and val and all(isinstance(v, dict) for v in val):
            lines.append(f"{pad}{key}:")
            for v in val:
                sub = []
                _text(v, indent + 2, sub)
                sub[0] = pad + "  - " + sub[0].lstrip()
                lines.extend(sub)
        elif isinstance(val, list):
            lines.append(f"{pad}{key}: " + (" ".join(_scalar(v) for v in val) or "none"))
        else:
            lines.append(f"{pad}{key}: {_scalar(val)}".rstrip())


def main(argv=None):
    out = run_command(sys.argv[1:] if argv is None else list(argv))
    if out.message:
        print(out.message, file=sys.stderr)
    if out.report is not None:
        sys.stdout.write(render(out.report, out.format))
    return out.code


if __name__ == "__main__":
    sys.exit(main())
