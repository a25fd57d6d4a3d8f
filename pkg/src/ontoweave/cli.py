"""Command-line front end: parsing, validation, derivability queries,
fibring, connection, and development-graph management.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
All output is canonical and deterministic for fixed inputs, flags, and seed.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .consequence import Fuel, check_operator_laws, derives
from .devgraph import DevGraph, Link, add_link, add_node, load_graph, save_graph
from .devgraph import verify_decomposition, verify_heterogeneous_refinement
from .devgraph import verify_homogeneous_refinement, verify_integration
from .dsl import Document, emit_calculus, emit_ontology, emit_signature, parse_document
from .errors import (
    ArityError,
    CapExceeded,
    CycleError,
    DuplicateName,
    EvidenceRefuted,
    FormatError,
    LanguageError,
    MissingSplittingLink,
    OntoweaveError,
    ParseError,
    UnknownInternIndex,
    UnknownNode,
    UnknownSymbol,
    ValidationFailed,
)
from .fibring import dump_session, fibred_derives, open_session
from .ontology import connect, validate_ontology
from .syntax import parse_formula

DEFAULT_FUEL = Fuel(max_closure_rounds=6, max_formula_size=31, max_set_size=512)

_USAGE_ERRORS = (
    ParseError,
    UnknownSymbol,
    ArityError,
    FormatError,
    UnknownNode,
    UnknownInternIndex,
    LanguageError,
)
_VERIFICATION_ERRORS = (
    ValidationFailed,
    EvidenceRefuted,
    CycleError,
    DuplicateName,
    MissingSplittingLink,
    CapExceeded,
)


@dataclass
class Workspace:
    """A manifest-backed graph plus the defaults commands run with."""

    manifest: Path
    graph: DevGraph
    fuel: Fuel

    @property
    def root(self) -> Path:
        return self.manifest.parent

    @classmethod
    def open(cls, manifest: Path, fuel: Fuel) -> "Workspace":
        if manifest.exists():
            graph = load_graph(manifest.read_bytes())
        else:
            graph = DevGraph()
        return cls(manifest=manifest, graph=graph, fuel=fuel)

    def commit(self, graph: DevGraph) -> None:
        """Persist and swap in the new graph; disk and memory stay in step."""
        self.manifest.write_bytes(save_graph(graph))
        self.graph = graph


def _fuel_from_args(args: argparse.Namespace) -> Fuel:
    return Fuel(
        max_closure_rounds=args.fuel_rounds,
        max_formula_size=args.fuel_size,
        max_set_size=args.fuel_set,
    )


def _load_defs(path: str) -> Document:
    return parse_document(Path(path).read_text(encoding="utf-8"))


def _read_gamma(path: str | None, sig) -> list:
    if path is None:
        return []
    out = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append(parse_formula(line, sig))
    return out


# ---------------------------------------------------------------------------
# Commands


def cmd_check(args: argparse.Namespace) -> int:
    fuel = _fuel_from_args(args)
    ok = True
    first_witness = ""
    for path in args.files:
        doc = _load_defs(path)
        for name in sorted(doc.calculi):
            report = check_operator_laws(
                doc.calculi[name], samples=args.samples, fuel=fuel, seed=args.seed,
                corpus_depth=args.corpus_depth,
            )
            for entry in report.entries:
                print(f"{path}\tcalculus {name}\t{entry.render()}")
                if not entry.ok and not first_witness:
                    first_witness = entry.witness
            ok = ok and report.ok
        for name in sorted(doc.ontologies):
            report = validate_ontology(doc.ontologies[name], fuel)
            for entry in report.entries:
                print(f"{path}\tontology {name}\t{entry.render()}")
                if not entry.ok and not first_witness:
                    first_witness = entry.witness or entry.label
            ok = ok and report.ok
    if not ok:
        print(first_witness, file=sys.stderr)
        return 1
    return 0


def cmd_derive(args: argparse.Namespace) -> int:
    doc = _load_defs(args.defs)
    cal = doc.calculi.get(args.calculus)
    if cal is None:
        raise UnknownSymbol(f"unknown calculus {args.calculus!r}")
    fuel = _fuel_from_args(args)
    gamma = _read_gamma(args.gamma, cal.sig)
    phi = parse_formula(args.phi, cal.sig)
    verdict = derives(cal, gamma, phi, fuel)
    if verdict.is_derived:
        print(f"DERIVED depth={verdict.depth}")
    else:
        print(
            "UNKNOWN bound=rounds:{},size:{},set:{}".format(
                fuel.max_closure_rounds, fuel.max_formula_size, fuel.max_set_size
            )
        )
    return 0


def cmd_fibre(args: argparse.Namespace) -> int:
    doc = _load_defs(args.defs)
    left = doc.calculi.get(args.left)
    right = doc.calculi.get(args.right)
    if left is None or right is None:
        raise UnknownSymbol("unknown calculus name for --left or --right")
    fuel = _fuel_from_args(args)
    if args.rounds is not None:
        fuel = Fuel(args.rounds, fuel.max_formula_size, fuel.max_set_size)
    session = open_session(left, right, fuel)
    gamma = _read_gamma(args.gamma, session.union_sig)
    phi = parse_formula(args.phi, session.union_sig)
    verdict = fibred_derives(session, gamma, phi)
    if verdict.is_derived:
        print(f"DERIVED depth={verdict.depth}")
    else:
        print(f"UNKNOWN bound=rounds:{fuel.max_closure_rounds}")
    if args.dump:
        Path(args.dump).write_text(dump_session(session), encoding="utf-8")
        print(f"session dumped to {args.dump}")
    return 0


def cmd_connect(args: argparse.Namespace) -> int:
    doc = _load_defs(args.defs)
    left = doc.ontologies.get(args.left)
    right = doc.ontologies.get(args.right)
    if left is None or right is None:
        raise UnknownSymbol("unknown ontology name for --left or --right")
    fuel = _fuel_from_args(args)
    result = connect(left, right, fuel, name=args.name)
    print(emit_signature("connected_sig", result.base.sig))
    print(emit_calculus("connected_cal", result.base, "connected_sig"))
    print(emit_ontology(result.name, result, "connected_cal"))
    report = validate_ontology(result, fuel)
    print(report.render())
    return 0 if report.ok else 1


def _workspace(args: argparse.Namespace) -> Workspace:
    return Workspace.open(Path(args.manifest), _fuel_from_args(args))


def cmd_graph_add_node(args: argparse.Namespace) -> int:
    ws = _workspace(args)
    doc = _load_defs(args.defs)
    onto = doc.ontologies.get(args.name)
    if onto is None:
        raise UnknownSymbol(f"unknown ontology {args.name!r} in {args.defs}")
    ws.commit(add_node(ws.graph, onto, ws.fuel))
    print(f"added node {args.name}")
    return 0


def cmd_graph_add_link(args: argparse.Namespace) -> int:
    ws = _workspace(args)
    morphism = None
    if args.morphism is not None:
        if args.defs is None:
            raise ParseError("--morphism needs --defs to resolve the name")
        doc = _load_defs(args.defs)
        morphism = doc.morphisms.get(args.morphism) or doc.splittings.get(args.morphism)
        if morphism is None:
            raise UnknownSymbol(f"unknown morphism {args.morphism!r}")
    link = Link(args.kind, args.src, args.dst, morphism)
    graph = add_link(
        ws.graph, link, corpus_depth=args.corpus_depth, fuel=ws.fuel, asserted=args.assert_
    )
    ws.commit(graph)
    evidence = graph.evidence[link]
    print(f"added link {args.kind} {args.src} -> {args.dst} [{evidence.status}]")
    return 0


def cmd_graph_verify_refinement(args: argparse.Namespace) -> int:
    ws = _workspace(args)
    if args.via is None:
        ok = verify_homogeneous_refinement(ws.graph, args.src, args.dst)
        shape = "homogeneous"
    else:
        ok = verify_heterogeneous_refinement(ws.graph, args.src, args.dst, args.via)
        shape = "heterogeneous"
    print(f"refinement\t{shape}\t{'holds' if ok else 'fails'}")
    return 0 if ok else 1


def cmd_graph_verify_integration(args: argparse.Namespace) -> int:
    ws = _workspace(args)
    ok = verify_integration(ws.graph, args.node, args.left, args.right, args.conservative)
    mode = "conservative" if args.conservative else "plain"
    print(f"integration\t{mode}\t{'holds' if ok else 'fails'}")
    return 0 if ok else 1


def cmd_graph_verify_decomposition(args: argparse.Namespace) -> int:
    ws = _workspace(args)
    report = verify_decomposition(
        ws.graph, args.node, args.parts, corpus_depth=args.corpus_depth, fuel=ws.fuel
    )
    print(report.render())
    return 0 if report.ok else 1


def cmd_graph_save(args: argparse.Namespace) -> int:
    ws = _workspace(args)
    data = save_graph(ws.graph)
    if args.to:
        Path(args.to).write_bytes(data)
        print(f"saved to {args.to}")
    else:
        sys.stdout.write(data.decode("utf-8"))
    return 0


def cmd_graph_load(args: argparse.Namespace) -> int:
    ws = _workspace(args)
    print(f"nodes={len(ws.graph.nodes)} links={len(ws.graph.links)}")
    return 0


# ---------------------------------------------------------------------------
# Argument plumbing


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--fuel-rounds", type=int, default=DEFAULT_FUEL.max_closure_rounds)
    parser.add_argument("--fuel-size", type=int, default=DEFAULT_FUEL.max_formula_size)
    parser.add_argument("--fuel-set", type=int, default=DEFAULT_FUEL.max_set_size)
    parser.add_argument("--corpus-depth", type=int, default=2)
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ontoweave",
        description="Workbench for consequence systems, ontologies, and their combination.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse files, validate calculi and ontologies")
    _add_common(p)
    p.add_argument("--samples", type=int, default=30)
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("derive", help="bounded derivability query")
    _add_common(p)
    p.add_argument("--defs", required=True)
    p.add_argument("--calculus", required=True)
    p.add_argument("--gamma")
    p.add_argument("--phi", required=True)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("fibre", help="derivability in the fibred combination")
    _add_common(p)
    p.add_argument("--defs", required=True)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--gamma")
    p.add_argument("--phi", required=True)
    p.add_argument("--rounds", type=int)
    p.add_argument("--dump")
    p.set_defaults(func=cmd_fibre)

    p = sub.add_parser("connect", help="connect two ontologies through fibring")
    _add_common(p)
    p.add_argument("--defs", required=True)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--as", dest="name")
    p.set_defaults(func=cmd_connect)

    p = sub.add_parser("graph", help="manage a manifest-backed development graph")
    _add_common(p)
    p.add_argument("--manifest", required=True)
    gsub = p.add_subparsers(dest="graph_command", required=True)

    q = gsub.add_parser("add-node")
    q.add_argument("--defs", required=True)
    q.add_argument("--name", required=True)
    q.set_defaults(func=cmd_graph_add_node)

    q = gsub.add_parser("add-link")
    q.add_argument("--kind", choices=("definition", "theorem", "splitting"), required=True)
    q.add_argument("--from", dest="src", required=True)
    q.add_argument("--to", dest="dst", required=True)
    q.add_argument("--defs")
    q.add_argument("--morphism")
    q.add_argument("--assert", dest="assert_", action="store_true")
    q.set_defaults(func=cmd_graph_add_link)

    q = gsub.add_parser("verify-refinement")
    q.add_argument("--from", dest="src", required=True)
    q.add_argument("--to", dest="dst", required=True)
    q.add_argument("--via")
    q.set_defaults(func=cmd_graph_verify_refinement)

    q = gsub.add_parser("verify-integration")
    q.add_argument("--node", required=True)
    q.add_argument("--left", required=True)
    q.add_argument("--right", required=True)
    q.add_argument("--conservative", action="store_true")
    q.set_defaults(func=cmd_graph_verify_integration)

    q = gsub.add_parser("verify-decomposition")
    q.add_argument("--node", required=True)
    q.add_argument("--parts", nargs="+", required=True)
    q.set_defaults(func=cmd_graph_verify_decomposition)

    q = gsub.add_parser("save")
    q.add_argument("--to")
    q.set_defaults(func=cmd_graph_save)

    q = gsub.add_parser("load")
    q.set_defaults(func=cmd_graph_load)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except _VERIFICATION_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OntoweaveError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
