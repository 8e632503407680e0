"""Command-line front end.

Exit codes: 0 success or conclusive certificate, 2 usage error,
3 structural or internal error, 4 inconclusive certificate.

Shorthand specifiers:
  trees    path:N  star:N  e:N  or a tree document path
  targets  t:X,Y,Z  that:X,Y,Z  k:Q  hind  or a graph document path
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import __version__
from .certify import (
    A_WINS,
    B_WINS,
    Certificate,
    CertificateFormatError,
    StructureError,
    certify_dominant,
    certify_parity,
    replay,
)
from .exactalg import DEFAULT_WIDTH, format_rational
from .graphs import (
    GraphParseError,
    InvalidGraphError,
    SourceTree,
    TargetGraph,
    make_E,
    make_T,
    make_complete,
    make_hind,
    make_path,
    make_star,
    read_graph,
    read_tree,
)
from .homcount import hom_oracle, hom_quotient
from .orbits import (
    DEFAULT_MAX_VERTICES,
    OrbitQuotient,
    SizeLimitError,
    coarsest_equitable,
    orbit_quotient,
    structural_orbits_T,
    verify_equitable,
)
from .search import SearchSpec, SearchSpecError, report, report_table, scan

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_STRUCTURE = 3
EXIT_INCONCLUSIVE = 4


class UsageError(Exception):
    pass


def _ints(text: str, count: int, spec: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse numbers in {spec!r}") from None
    if len(vals) != count:
        raise UsageError(f"{spec!r} needs {count} comma-separated integers")
    return vals


def resolve_tree(spec: str) -> SourceTree:
    kind, _, arg = spec.partition(":")
    makers: dict[str, Callable[[int], SourceTree]] = {"path": make_path, "star": make_star, "e": make_E}
    try:
        if kind in makers and arg:
            return makers[kind](_ints(arg, 1, spec)[0])
        path = Path(spec)
        if path.is_file():
            return read_tree(path.read_text())
    except (InvalidGraphError, GraphParseError) as exc:
        raise UsageError(f"{spec}: {exc}") from None
    raise UsageError(f"unrecognised tree specifier {spec!r}")


@dataclass
class ResolvedTarget:
    spec: str
    params: tuple[int, int, int, bool] | None = None
    graph_: TargetGraph | None = None

    def graph(self) -> TargetGraph:
        if self.graph_ is None:
            x, y, z, looped = self.params
            self.graph_ = make_T(x, y, z, looped)
        return self.graph_

    def quotient(self, strict_orbits: bool = False) -> OrbitQuotient:
        if self.params is not None:
            return structural_orbits_T(*self.params)
        g = self.graph()
        if g.vertex_count <= DEFAULT_MAX_VERTICES or strict_orbits:
            return orbit_quotient(g)
        q = verify_equitable(g, coarsest_equitable(g))
        assert isinstance(q, OrbitQuotient)
        return q


def resolve_target(spec: str) -> ResolvedTarget:
    kind, _, arg = spec.partition(":")
    try:
        if kind in ("t", "that") and arg:
            x, y, z = _ints(arg, 3, spec)
            if min(x, y, z) < 1:
                raise UsageError(f"{spec}: parameters must be positive")
            return ResolvedTarget(spec, (x, y, z, kind == "that"))
        if kind == "k" and arg:
            return ResolvedTarget(spec, graph_=make_complete(_ints(arg, 1, spec)[0]))
        if spec == "hind":
            return ResolvedTarget(spec, graph_=make_hind())
        path = Path(spec)
        if path.is_file():
            return ResolvedTarget(spec, graph_=read_graph(path.read_text()))
    except (InvalidGraphError, GraphParseError) as exc:
        raise UsageError(f"{spec}: {exc}") from None
    raise UsageError(f"unrecognised target specifier {spec!r}")


def _parse_width(text: str) -> Fraction:
    try:
        w = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad width {text!r}; use num/den") from None
    if w <= 0:
        raise argparse.ArgumentTypeError("width must be positive")
    return w


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


# -- subcommands ------------------------------------------------------------

def cmd_count(args) -> int:
    tree = resolve_tree(args.tree)
    target = resolve_target(args.target)
    results = {}
    if args.engine in ("quotient", "both"):
        results["quotient"] = hom_quotient(tree, target.quotient())
    if args.engine in ("oracle", "both"):
        results["oracle"] = hom_oracle(tree, target.graph())
    values = set(results.values())
    if len(values) != 1:
        print(f"error: engines disagree: {results}", file=sys.stderr)
        return EXIT_STRUCTURE
    count = values.pop()
    if args.format == "structured":
        _emit({"tree": args.tree, "target": args.target, "engine": args.engine, "count": str(count)})
    else:
        print(count)
    return EXIT_OK


def cmd_orbits(args) -> int:
    target = resolve_target(args.target)
    try:
        q = target.quotient(strict_orbits=True)
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "structured":
        _emit(q.to_dict())
        return EXIT_OK
    print(f"kind: {q.kind}")
    print(f"sizes: {list(q.class_sizes)}")
    print("matrix:")
    for row in q.quotient:
        print("  " + " ".join(f"{v:>4}" for v in row))
    print("classes:")
    for i, cls in enumerate(q.partition.classes):
        members = list(cls[:8])
        more = f" ... ({len(cls)} vertices)" if len(cls) > 8 else ""
        print(f"  {i}: {members}{more}")
    return EXIT_OK


def _certificate_summary(cert: Certificate) -> str:
    scope = {"odd": "odd n", "even": "even n", "all": "n"}[cert.scope]
    if cert.conclusion == A_WINS:
        return (
            f"conclusive: hom(P_m) > hom(E_m) for all {scope} >= {cert.threshold_n} "
            f"(trees with m = n + 4 >= {cert.threshold_vertices} vertices); the target is Leontovich there"
        )
    if cert.conclusion == B_WINS:
        return (
            f"conclusive, reversed: hom(E_m) > hom(P_m) for all {scope} >= {cert.threshold_n} "
            f"(m >= {cert.threshold_vertices}); no Leontovich certificate"
        )
    return "inconclusive at the width cap; no claim"


def cmd_certify(args) -> int:
    target = resolve_target(args.target)
    if target.params is None:
        raise UsageError("certify needs a t:X,Y,Z or that:X,Y,Z target")
    x, y, z, looped = target.params
    try:
        if args.mode == "dominant":
            cert = certify_dominant(x, y, z, looped, args.width)
        else:
            if looped:
                raise StructureError("parity certificates need the unlooped target t:X,Y,Z")
            cert = certify_parity(x, y, z, args.mode, args.width)
    except StructureError as exc:
        print(f"structure error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    name = f"certificate-{args.mode}-{'that' if looped else 't'}-{x}-{y}-{z}.json"
    (out / name).write_text(cert.dumps())
    if args.format == "structured":
        _emit(cert.to_dict())
    else:
        print(_certificate_summary(cert))
        print(f"lower bound for the path coefficient: {format_rational(cert.a_lower)} (~{float(cert.a_lower):.10g})")
        print(f"upper bound for the E coefficient:    {format_rational(cert.b_upper)} (~{float(cert.b_upper):.10g})")
        print(f"certificate written to {out / name}")
    return EXIT_OK if cert.conclusive else EXIT_INCONCLUSIVE


def cmd_replay(args) -> int:
    try:
        cert = Certificate.loads(Path(args.certificate).read_text())
    except (OSError, CertificateFormatError) as exc:
        raise UsageError(str(exc)) from None
    ok = replay(cert)
    print("pass" if ok else "fail")
    return EXIT_OK if ok else EXIT_STRUCTURE


def cmd_search(args) -> int:
    try:
        spec = SearchSpec.loads(Path(args.spec).read_text())
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except SearchSpecError as exc:
        raise UsageError(f"{args.spec}: {exc}") from None
    result = scan(spec, workers=args.workers, max_seconds=args.max_seconds)
    summary = report(result)
    text = json.dumps(summary, indent=2) + "\n"
    if args.out:
        out = Path(args.out)
        hits_dir = out / "hits"
        hits_dir.mkdir(parents=True, exist_ok=True)
        (out / "summary.json").write_text(text)
        for hit in summary["hits"]:
            name = f"{hit['x']}-{hit['y']}-{hit['z']}-{'looped' if hit['looped'] else 'plain'}.json"
            (hits_dir / name).write_text(json.dumps(hit, indent=2) + "\n")
    if args.format == "structured":
        sys.stdout.write(text)
    else:
        sys.stdout.write(report_table(summary))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hcolor",
        description="Exact H-coloring counts of trees and Leontovich certificates.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("table", "structured"), default="table")

    p = sub.add_parser("count", help="count homomorphisms from a tree to a target")
    p.add_argument("tree")
    p.add_argument("target")
    p.add_argument("--engine", choices=("oracle", "quotient", "both"), default="quotient")
    fmt(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("orbits", help="orbit partition and quotient matrix of a target")
    p.add_argument("target")
    fmt(p)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("certify", help="certify an eventual comparison of P_n and E_n")
    p.add_argument("mode", choices=("odd", "even", "dominant"))
    p.add_argument("target")
    p.add_argument("--width", type=_parse_width, default=DEFAULT_WIDTH)
    p.add_argument("--out", default=".")
    fmt(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("replay", help="re-verify a certificate document")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("search", help="scan a parameter grid")
    p.add_argument("spec")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--max-seconds", type=float, default=None)
    p.add_argument("--out", default=None)
    fmt(p)
    p.set_defaults(func=cmd_search)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE


if __name__ == "__main__":
    sys.exit(main())
