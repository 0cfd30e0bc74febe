"""Command-line interface.

Subcommands cover the pipeline end to end: validate, quiver, algebra,
cartan, tilt-shrink, tilt-enlarge, reduce, classify, and the builders omega
and an.  Output is plain text by default or JSON with --json; identical
inputs and flags give byte-identical output.  Exit codes: 0 success, 1
validation or parse error, 2 engine not stabilized, 3 certificate failure,
4 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .algebra import (
    CompositionMismatch,
    NotStabilized,
    QuiverMismatch,
    a_n_presentation,
    omega_relations,
    presentations_equal_on_basis,
    quotient_basis,
    socle_quotient,
)
from .graph import (
    DomainError,
    MalformedInput,
    ValidationError,
    edge_count,
    loop_star,
    parse_graph,
    serialize_graph,
    validate,
    _canonical_obj,
)
from .homological import NotAComplex
from .linalg import parse_field
from .quiver import InternalError, build_quiver, quiver_to_dot
from .reduction import certify_trace, classify, reduce_to_normal_form
from .tilting import (
    CertificateFailure,
    EmptyTree,
    NonUniqueHom,
    RelationFailure,
    check_tilting,
    enlarge_complex,
    enlarge_data,
    shrink_complex,
    verify_end_generators,
)

SCHEMA = "brauer-derive/1"

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NOT_STABILIZED = 2
EXIT_CERTIFICATE = 3
EXIT_USAGE = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_graph(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from None
    g = parse_graph(text)
    validate(g)
    return g


def _algebra_args(sub):
    sub.add_argument("--cap", type=int, default=None, help="path length bound")
    sub.add_argument("--margin", type=int, default=None, help="length slack")
    sub.add_argument("--field", default=None, help="rationals (default) or a prime")


def _build(g, args):
    return quotient_basis(
        omega_relations(build_quiver(g)),
        cap=args.cap,
        margin=args.margin,
        field=parse_field(args.field),
    )


def _emit(args, payload_json, text_lines):
    if getattr(args, "json", False):
        payload_json = {"schema": SCHEMA, **payload_json}
        print(json.dumps(payload_json, indent=2, sort_keys=False))
    else:
        print("\n".join(text_lines))


def _presentation_lines(p):
    return [f"  {rel}" for rel in p.relations]


def _cartan_lines(c):
    lines = [f"cartan (order {' '.join(c.order)}):"]
    lines += ["  " + row for row in str(c).splitlines()]
    lines.append(f"dim: {c.dim}")
    lines.append(f"det: {c.det()}")
    return lines


def cmd_validate(args):
    g = _read_graph(args.file)
    _emit(
        args,
        {"valid": True, "edges": edge_count(g), "graph": _canonical_obj(g)},
        [f"valid one-loop Brauer graph with {edge_count(g)} edges"],
    )
    return EXIT_OK


def cmd_quiver(args):
    g = _read_graph(args.file)
    q = build_quiver(g)
    if args.json:
        payload = {
            "vertices": list(q.vertices),
            "arrows": [
                {"name": a.name, "source": a.source, "target": a.target, "camp": a.camp}
                for a in q.arrows
            ],
            "dot": quiver_to_dot(q),
        }
        _emit(args, payload, [])
    else:
        print(quiver_to_dot(q), end="")
    return EXIT_OK


def cmd_algebra(args):
    g = _read_graph(args.file)
    A = _build(g, args)
    p = A.presentation
    c = A.cartan()
    payload = {
        "relations": [str(r) for r in p.relations],
        "dim": A.dim,
        "cartan": c.to_json(),
        "basis": A.basis_table().splitlines(),
    }
    lines = ["relations:"] + _presentation_lines(p)
    lines.append(f"dim: {A.dim}")
    lines += _cartan_lines(c)
    lines.append("basis:")
    lines += ["  " + ln for ln in A.basis_table().splitlines()]
    _emit(args, payload, lines)
    return EXIT_OK


def _cartan_target(args):
    given = [bool(args.file), args.omega is not None, args.an is not None]
    if sum(given) != 1:
        raise UsageError("cartan needs exactly one of FILE, --omega N, --an N")
    if args.file:
        return _build(_read_graph(args.file), args)
    n = args.omega if args.omega is not None else args.an
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if args.omega is not None:
        return quotient_basis(
            omega_relations(build_quiver(loop_star(n))),
            cap=args.cap, margin=args.margin, field=parse_field(args.field),
        )
    return quotient_basis(
        a_n_presentation(n), cap=args.cap, margin=args.margin, field=parse_field(args.field)
    )


def cmd_cartan(args):
    A = _cartan_target(args)
    c = A.cartan()
    _emit(args, c.to_json(), _cartan_lines(c))
    return EXIT_OK


def cmd_tilt_shrink(args):
    g = _read_graph(args.file)
    A = _build(g, args)
    Q = shrink_complex(A, g)
    cert = check_tilting(Q)
    verify_end_generators(Q)
    payload = {
        "ordering": list(Q.ordering),
        "certificate": cert.to_json(),
        "endGenerators": "ok",
    }
    lines = [f"shrink tilting complex, ordering: {' '.join(Q.ordering)}"]
    for z in Q.ordering:
        lines.append(f"Q({z}):")
        lines += ["  " + ln for ln in Q.summands[z].dump().splitlines()]
    lines.append(f"hom vanishing: {cert.hom_vanishing}")
    lines += _cartan_lines(cert.end_cartan)
    lines.append(f"|det| source/end: {abs(cert.det_source)} {abs(cert.det_end)}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_tilt_enlarge(args):
    g = _read_graph(args.file)
    A = _build(g, args)
    d = enlarge_data(g, args.at)
    Q = enlarge_complex(A, g, d)
    cert = check_tilting(Q)
    verify_end_generators(Q)
    payload = {
        "at": d.at,
        "successor": d.succ,
        "betaFan": list(d.beta_fan),
        "certificate": cert.to_json(),
        "endGenerators": "ok",
    }
    lines = [f"enlarge tilting complex at {d.at} (successor {d.succ})"]
    lines.append(f"Q'({d.succ}):")
    lines += ["  " + ln for ln in Q.summands[d.succ].dump().splitlines()]
    lines.append(f"hom vanishing: {cert.hom_vanishing}")
    lines += _cartan_lines(cert.end_cartan)
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_reduce(args):
    g = _read_graph(args.file)
    trace = reduce_to_normal_form(
        g, certify=args.certify, cap=args.cap, margin=args.margin,
        field=parse_field(args.field),
    )
    if args.certify:
        certify_trace(trace, cap=args.cap, margin=args.margin, field=parse_field(args.field))
    payload = trace.to_json()
    lines = [f"n: {trace.n}", f"steps: {len(trace.steps)}"]
    for i, s in enumerate(trace.steps):
        mark = " [certified]" if s.certificate else ""
        lines.append(f"  step {i}: move successor of {s.at} onto the cycle{mark}")
    lines.append(f"normal form: {serialize_graph(trace.normal_form)}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_classify(args):
    g = _read_graph(args.file)
    n = classify(g)
    _emit(args, {"n": n}, [str(n)])
    return EXIT_OK


def _builder_report(args, kind):
    n = args.n
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    field = parse_field(args.field)
    q = build_quiver(loop_star(n))
    if kind == "omega":
        p = omega_relations(q)
    else:
        p = a_n_presentation(n)
    A = quotient_basis(p, cap=args.cap, margin=args.margin, field=field)
    c = A.cartan()
    payload = {
        "kind": kind,
        "n": n,
        "relations": [str(r) for r in p.relations],
        "dim": A.dim,
        "cartan": c.to_json(),
    }
    lines = [f"{kind}({n})", "relations:"] + _presentation_lines(p)
    lines.append(f"dim: {A.dim}")
    lines += _cartan_lines(c)
    if args.compare_socle:
        other = (
            quotient_basis(a_n_presentation(n), cap=args.cap, margin=args.margin, field=field)
            if kind == "omega"
            else quotient_basis(
                omega_relations(q), cap=args.cap, margin=args.margin, field=field
            )
        )
        equal = presentations_equal_on_basis(socle_quotient(A), socle_quotient(other))
        payload["socleQuotientsEqual"] = equal
        lines.append(f"socle quotients equal: {str(equal).lower()}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_omega(args):
    return _builder_report(args, "omega")


def cmd_an(args):
    return _builder_report(args, "an")


def build_parser():
    parser = _Parser(prog="brauer-derive", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", metavar="command")

    def sub(name, fn, **kw):
        s = subs.add_parser(name, **kw)
        s.set_defaults(fn=fn)
        s.add_argument("--json", action="store_true", help="JSON output")
        return s

    s = sub("validate", cmd_validate, help="check a graph file")
    s.add_argument("file")

    s = sub("quiver", cmd_quiver, help="DOT export of the Brauer quiver")
    s.add_argument("file")

    s = sub("algebra", cmd_algebra, help="relations, dimension, basis")
    s.add_argument("file")
    _algebra_args(s)

    s = sub("cartan", cmd_cartan, help="Cartan matrix of a graph algebra")
    s.add_argument("file", nargs="?", default=None)
    s.add_argument("--omega", type=int, default=None, metavar="N")
    s.add_argument("--an", type=int, default=None, metavar="N")
    _algebra_args(s)

    s = sub("tilt-shrink", cmd_tilt_shrink, help="shrinking tilting complex + certificate")
    s.add_argument("file")
    _algebra_args(s)

    s = sub("tilt-enlarge", cmd_tilt_enlarge, help="enlarging tilting complex + certificate")
    s.add_argument("file")
    s.add_argument("--at", required=True, help="cycle edge with a non-empty tree")
    _algebra_args(s)

    s = sub("reduce", cmd_reduce, help="reduce to the loop-star normal form")
    s.add_argument("file")
    s.add_argument("--certify", action="store_true", help="attach per-step certificates")
    _algebra_args(s)

    s = sub("classify", cmd_classify, help="derived-equivalence class index n")
    s.add_argument("file")

    s = sub("omega", cmd_omega, help="the normal-form algebra on n edges")
    s.add_argument("n", type=int)
    s.add_argument("--compare-socle", action="store_true")
    _algebra_args(s)

    s = sub("an", cmd_an, help="the socle-deformed comparison algebra")
    s.add_argument("n", type=int)
    s.add_argument("--compare-socle", action="store_true")
    _algebra_args(s)

    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "fn", None):
            raise UsageError("missing command")
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MalformedInput, ValidationError, DomainError, EmptyTree, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NotStabilized as exc:
        print(f"NotStabilized: {exc}", file=sys.stderr)
        return EXIT_NOT_STABILIZED
    except (
        CertificateFailure,
        RelationFailure,
        NonUniqueHom,
        NotAComplex,
        InternalError,
        CompositionMismatch,
        QuiverMismatch,
    ) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
