"""Command-line front end.

Exit codes: 0 when a claim was proven (and its JSON re-verified), 2 when
the run was inconclusive, 1 on usage or precondition errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .albert import TitsAlgebra, non_division_pipeline, verify_tits_report
from .cyclic import CyclicAlgebra, SplitCertificate, verify_certificate
from .expr import ExpressionError, evaluate
from .fields import Field, UnsupportedFieldError, field_from_descriptor
from .forms import (
    DiagonalForm,
    ExhaustedNo,
    Representation,
    SearchBudget,
    represent_search,
)
from .kummer import KummerExtension
from .splitting import (
    DegenerateSplit,
    Inconclusive,
    Split,
    SplitInstance,
    binary_form_split_pipeline,
    cubic_split_conditions,
    row_label,
    verify_counterexample,
    verify_degenerate,
)

EXIT_PROVEN, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class UsageError(ValueError):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def canonical_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


# -- parsing -------------------------------------------------------------------


def parse_field(text: str) -> Field:
    return field_from_descriptor(text)


def parse_parameters(k: Field, **exprs) -> dict:
    """Evaluate parameter expressions in order; later ones may use earlier names."""
    symbols = dict(k.symbols())
    out = {}
    for name, text in exprs.items():
        if text is None:
            continue
        value = evaluate(str(text), symbols, k)
        out[name] = value
        symbols[name] = value
    return out


_FORM = re.compile(r"^\s*(?:form\s+)?d\s*=\s*(\d+)\s*:?\s*\[(.*)\]\s*$")


def parse_form(text: str, k: Field, symbols: dict) -> DiagonalForm:
    """Form literals "d=3:[2,3]" or "form d=3 [a, b^2]"."""
    m = _FORM.match(text)
    if m is None:
        raise UsageError(f"cannot parse form literal {text!r}; expected e.g. 'd=3:[2,3]'")
    d = int(m.group(1))
    parts = [p for p in m.group(2).split(",")]
    if not parts or any(not p.strip() for p in parts):
        raise UsageError(f"empty coefficient in form literal {text!r}")
    scope = dict(k.symbols())
    scope.update(symbols)
    coeffs = [evaluate(p, scope, k) for p in parts]
    return DiagonalForm(k, d, coeffs)


def _budget(args) -> SearchBudget:
    return SearchBudget(height=args.budget, max_candidates=args.max_candidates)


# -- output ----------------------------------------------------------------------


def _emit(args, data: dict, text_lines: list[str]) -> str:
    payload = canonical_json(data)
    if args.format == "json":
        sys.stdout.write(payload)
    else:
        print("\n".join(text_lines))
    if args.json:
        Path(args.json).write_text(payload)
    return payload


def _roundtrip(payload: str) -> bool:
    """A proven result must re-verify from its own serialization."""
    ok, _ = verify_payload(json.loads(payload))
    return ok


# -- subcommands ------------------------------------------------------------------


def cmd_split_check(args) -> int:
    k = parse_field(args.field)
    params = parse_parameters(k, b=args.b, a=args.a)
    inst = SplitInstance(k, args.d, params["b"], params["a"], args.r, args.s)
    out = binary_form_split_pipeline(inst, _budget(args), threads=args.threads)
    data = out.to_dict()
    lines = [f"field {k}  d={args.d}  b={inst.b}  a={inst.a}  r={args.r}  s={args.s}"]
    lines += _outcome_lines(out)
    payload = _emit(args, data, lines)
    return _exit_for(out, payload)


def _outcome_lines(out) -> list[str]:
    if isinstance(out, Split):
        cert = out.certificate
        x, y = out.representation.args
        return [
            f"Split: <a, b^r> represents b^s at (x, y) = ({x}, {y})",
            f"  witness u = {cert.witness}   N(u) = {cert.witness.norm()}",
            f"  w = u^-1 z = {cert.w}",
            f"  idempotent e = {cert.e}",
        ]
    if isinstance(out, DegenerateSplit):
        return [f"DegenerateSplit: {out.reason}"]
    return [f"Inconclusive: {out.reason}  {json.dumps(out.details, sort_keys=True)}"]


def _exit_for(out, payload: str) -> int:
    if isinstance(out, Inconclusive):
        return EXIT_INCONCLUSIVE
    if not _roundtrip(payload):
        print("error: emitted JSON failed re-verification", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_PROVEN


def cmd_corollary1(args) -> int:
    k = parse_field(args.field)
    params = parse_parameters(k, b=args.b, a=args.a)
    report = cubic_split_conditions(k, params["a"], params["b"], _budget(args), args.threads)
    data = report.to_dict()
    lines = [f"field {k}  d=3  b={params['b']}  a={params['a']}"]
    for r, s, out in report.rows:
        lines.append(f"  (r, s) = ({r}, {s})  {out.status:<16} {row_label(r, s)}")
    lines.append("split" if report.split else "no condition fired (no claim)")
    payload = _emit(args, data, lines)
    if not report.split:
        return EXIT_INCONCLUSIVE
    return EXIT_PROVEN if _roundtrip(payload) else EXIT_ERROR


def cmd_example1(args) -> int:
    report = verify_counterexample(args.witness, args.degree_bound)
    data = report.to_dict()
    lines = [
        f"a = {report.expected}",
        f"N({report.witness}) = {report.norm}",
        f"identity verified: {report.identity_verified}   norm paths agree: {report.paths_agree}",
    ]
    for case in report.cases:
        search = "skipped" if case.search is None else case.search.to_dict()["result"]
        lines.append(f"  {case.claim:<28} {case.verdict.verdict:<12} search: {search}")
    c3 = report.case3.to_dict()
    lines.append(
        f"  {'<a, t^2> represents 1':<28} {c3['obstruction']['verdict']:<12} "
        f"search: {c3['search_status']}  (after x -> 0; hypothesis: {c3['hypothesis']})"
    )
    lines.append(
        "split by a direct witness, yet no binary-form condition holds"
        if report.converse_fails
        else "counterexample NOT confirmed"
    )
    payload = _emit(args, data, lines)
    if not report.converse_fails:
        return EXIT_INCONCLUSIVE
    return EXIT_PROVEN if _roundtrip(payload) else EXIT_ERROR


def cmd_form_represent(args) -> int:
    k = parse_field(args.field)
    params = parse_parameters(k, b=args.b, a=args.a, c=args.c)
    form = parse_form(args.form, k, params)
    scope = dict(k.symbols())
    scope.update(params)
    target = evaluate(args.target, scope, k)
    out = represent_search(form, target, _budget(args), threads=args.threads)
    data = out.to_dict()
    if isinstance(out, ExhaustedNo):
        data.update({"field": k.descriptor, "form": form.describe(), "target": target.to_json()})
    lines = [f"{form} over {k}, target {target}"]
    if isinstance(out, Representation):
        lines.append(
            "Representation: (" + ", ".join(str(x) for x in out.args) + f")  after {out.searched} candidates"
        )
    elif isinstance(out, ExhaustedNo):
        lines.append(f"ExhaustedNo: none of {out.searched} candidates works")
    else:
        lines.append(f"NotFound: {out.searched} candidates up to height {out.height} (no claim)")
    payload = _emit(args, data, lines)
    if not isinstance(out, (Representation, ExhaustedNo)):
        return EXIT_INCONCLUSIVE
    return EXIT_PROVEN if _roundtrip(payload) else EXIT_ERROR


def cmd_tits_check(args) -> int:
    k = parse_field(args.field)
    if args.d != 3:
        raise UsageError("the first Tits construction needs d = 3")
    params = parse_parameters(k, b=args.b, a=args.a, c=args.c)
    ext = KummerExtension(k, 3, params["b"])
    if ext.omega is None:
        raise UsageError(f"{k} contains no primitive 3rd root of unity")
    J = TitsAlgebra(CyclicAlgebra(ext, params["a"]), params["c"])
    out = non_division_pipeline(J, _budget(args), args.threads)
    data = out.to_dict()
    lines = [f"J(A, c) over {k}: A = (l, {J.A.a}), l = k[A]/(A^3 - {ext.b}), c = {J.c}"]
    if out.status == "NotDivision":
        lines += [
            f"NotDivision via condition {out.condition}: {data['condition_text']}",
            f"  w = {out.w}   n(w) = {out.w.reduced_norm()}",
            f"  zero vector (-w, 1, 0): N = {J.norm(out.zero_vector)}",
            f"  hypothesis: {data['hypothesis']}"
            + ("  (violated: A is split)" if out.hypothesis_violated else ""),
        ]
    else:
        lines.append("Inconclusive: no condition found within budget")
    payload = _emit(args, data, lines)
    if out.status != "NotDivision":
        return EXIT_INCONCLUSIVE
    return EXIT_PROVEN if _roundtrip(payload) else EXIT_ERROR


# -- verification -------------------------------------------------------------------


def verify_payload(data: dict) -> tuple[bool, str]:
    """Re-verify any JSON artifact this CLI emits; returns (ok, canonical text)."""
    kind = data.get("kind")
    status = data.get("status")
    if kind == "split-certificate":
        cert = SplitCertificate.from_dict(data)
        return verify_certificate(cert), canonical_json(cert.to_dict())
    if status == "Split":
        cert = SplitCertificate.from_dict(data["certificate"])
        rep = Representation.from_dict(data["representation"])
        ok = verify_certificate(cert) and rep.verify()
        return ok, canonical_json({**data, "certificate": cert.to_dict(), "representation": rep.to_dict()})
    if status == "DegenerateSplit":
        return verify_degenerate(data), canonical_json(data)
    if kind == "representation":
        rep = Representation.from_dict(data)
        return rep.verify(), canonical_json(rep.to_dict())
    if kind == "exhausted-no":
        k = field_from_descriptor(data["field"])
        spec = data["form"]
        form = DiagonalForm(k, spec["d"], [k.from_json(c) for c in spec["coefficients"]])
        again = represent_search(form, k.from_json(data["target"]))
        return isinstance(again, ExhaustedNo) and again.searched == data["searched"], canonical_json(data)
    if kind == "cubic-conditions":
        ok = data["split"] and all(
            verify_payload(row)[0] for row in data["rows"] if row["status"] != "Inconclusive"
        )
        return ok, canonical_json(data)
    if kind == "tits-report":
        return verify_tits_report(data), canonical_json(data)
    if kind == "counterexample-report":
        search = data["case3"]["search"]
        fresh = verify_counterexample(data["witness"], search["degree_bound"] if search else 0)
        fresh_data = fresh.to_dict()
        return fresh.converse_fails and fresh_data == data, canonical_json(fresh_data)
    raise UsageError(f"unknown artifact kind {kind!r}")


def cmd_verify(args) -> int:
    worst = EXIT_PROVEN
    for name in args.files:
        text = Path(name).read_text()
        data = json.loads(text)
        ok, canonical = verify_payload(data)
        stable = canonical == text
        status = "OK" if ok and stable else ("NOT CANONICAL" if ok else "FAILED")
        print(f"{name}: {status}")
        if not (ok and stable):
            worst = EXIT_ERROR
    return worst


# -- entry point ---------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, required: tuple[str, ...], optional: tuple[str, ...] = ()):
    p.add_argument("--field", required=True, help='e.g. "Fp:7", "Q", "QW:3"')
    for name in required + optional:
        p.add_argument(
            f"--{name}", required=name in required, help=f"expression for {name}, e.g. 'b^2'"
        )
    p.add_argument("--budget", type=int, default=50, help="height bound over Q and Q(w)")
    p.add_argument("--max-candidates", type=int, default=100_000)
    p.add_argument("--threads", type=int, default=1)
    _output(p)


def _output(p):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--json", metavar="PATH", help="also write canonical JSON here")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="cyclicsplit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("split-check", help="binary-form splitting test for one (r, s)")
    _common(p, ("b", "a"))
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(func=cmd_split_check)

    p = sub.add_parser("corollary1", help="the four cubic conditions for (a, b)")
    _common(p, ("b", "a"))
    p.set_defaults(func=cmd_corollary1)

    p = sub.add_parser("example1", help="split algebra failing every binary-form condition")
    p.add_argument("--witness", default="x + y*A + z*A^2")
    p.add_argument("--degree-bound", type=int, default=4)
    _output(p)
    p.set_defaults(func=cmd_example1)

    p = sub.add_parser("form-represent", help="search a diagonal form for a target")
    _common(p, (), ("b", "a", "c"))
    p.add_argument("--form", required=True, help='"d=3:[2,3]" or "form d=3 [a, b^2]"')
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_form_represent)

    p = sub.add_parser("tits-check", help="non-division test for J(A, c)")
    _common(p, ("b", "a", "c"))
    p.add_argument("--d", type=int, default=3)
    p.set_defaults(func=cmd_tits_check)

    p = sub.add_parser("verify", help="re-verify JSON artifacts")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            parser.error("--threads must be at least 1")
    except SystemExit as exc:
        # --help exits 0; every parse error exits EXIT_ERROR
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    try:
        return args.func(args)
    except (UsageError, ExpressionError, UnsupportedFieldError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
