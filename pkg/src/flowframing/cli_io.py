"""Instance files, JSON/DOT output, and the ``flowframing`` command line.

Instance format::

    {"vertices": [{"id": "v", "in": [...], "out": [...]}, ...],
     "edges": [{"id": "e", "tail": "u", "head": "v"}, ...],
     "sources": [...], "sinks": [...], "netflow": {"v": 1, ...}}

Edge lists are bottom-to-top; ``netflow`` is optional.  Rationals are
written as strings ``"p/q"``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Mapping, Optional, Sequence

from .embedded_dag import (
    Edge,
    EmbeddedDag,
    Vertex,
    check_nondegenerate,
    unit_netflow,
    validate_strong_planarity,
)
from .errors import FramingError, InternalInvariantViolated, InvalidInput, LimitExceeded, StructuralError
from .layerings import Layering, LayeringClique, decompose_flow, enumerate_layerings
from .mutation import FramingPoset, build_framing_poset
from .oracle import VerificationReport, k33_obstruction_check, random_instance, verify_triangulation
from .reduction import Placement, decontract
from .routes import DEFAULT_LIMIT, enumerate_routes
from .triangulation import Triangulation, build_triangulation, simplex_normalized_volume

SCHEMA_VERSION = 1

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_LIMIT, EXIT_INTERNAL = 0, 1, 2, 3, 4

_TOP_KEYS = {"vertices", "edges", "sources", "sinks", "netflow"}
_VERTEX_KEYS = {"id", "in", "out"}
_EDGE_KEYS = {"id", "tail", "head"}


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ parsing


def _str_list(x: Any, what: str) -> tuple[str, ...]:
    if not isinstance(x, list) or not all(isinstance(i, str) for i in x):
        raise InvalidInput(f"{what} must be a list of strings")
    return tuple(x)


def _keys(obj: Any, allowed: set[str], required: set[str], what: str) -> None:
    if not isinstance(obj, dict):
        raise InvalidInput(f"{what} must be an object")
    unknown = set(obj) - allowed
    if unknown:
        raise InvalidInput(f"unknown keys in {what}: {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise InvalidInput(f"missing keys in {what}: {sorted(missing)}")


def parse_instance(doc: Any) -> tuple[EmbeddedDag, Optional[dict[str, int]]]:
    """Instance document (or JSON text) -> dag and optional netflow."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"not valid JSON: {exc}") from None
    _keys(doc, _TOP_KEYS, _TOP_KEYS - {"netflow"}, "instance")
    if not isinstance(doc["vertices"], list) or not isinstance(doc["edges"], list):
        raise InvalidInput("vertices and edges must be lists")
    vertices = []
    for v in doc["vertices"]:
        _keys(v, _VERTEX_KEYS, _VERTEX_KEYS, "vertex")
        if not isinstance(v["id"], str):
            raise InvalidInput("vertex id must be a string")
        vertices.append(Vertex(v["id"], _str_list(v["in"], "in"), _str_list(v["out"], "out")))
    edges = []
    for e in doc["edges"]:
        _keys(e, _EDGE_KEYS, _EDGE_KEYS, "edge")
        if not all(isinstance(e[k], str) for k in _EDGE_KEYS):
            raise InvalidInput("edge fields must be strings")
        edges.append(Edge(e["id"], e["tail"], e["head"]))
    ids = [v.id for v in vertices]
    if len(set(ids)) != len(ids):
        raise InvalidInput("duplicate vertex ids")
    eids = [e.id for e in edges]
    if len(set(eids)) != len(eids):
        raise InvalidInput("duplicate edge ids")
    dag = EmbeddedDag(
        tuple(vertices), tuple(edges), _str_list(doc["sources"], "sources"), _str_list(doc["sinks"], "sinks")
    )
    netflow = None
    if "netflow" in doc:
        raw = doc["netflow"]
        if not isinstance(raw, dict) or not all(isinstance(x, int) and not isinstance(x, bool) for x in raw.values()):
            raise InvalidInput("netflow must map vertex ids to integers")
        unknown = set(raw) - set(ids)
        if unknown:
            raise InvalidInput(f"netflow names unknown vertices {sorted(unknown)}")
        netflow = {v: raw.get(v, 0) for v in ids}
    return dag, netflow


def instance_document(dag: EmbeddedDag, netflow: Optional[Mapping[str, int]] = None) -> dict:
    doc: dict[str, Any] = {
        "vertices": [{"id": v.id, "in": list(v.in_edges), "out": list(v.out_edges)} for v in dag.vertices],
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in dag.edges],
        "sources": list(dag.sources),
        "sinks": list(dag.sinks),
    }
    if netflow is not None:
        doc["netflow"] = {v: int(netflow[v]) for v in dag.vertex_ids}
    return doc


def dumps(doc: Any) -> str:
    """Canonical JSON text: two-space indent, key order as built, trailing newline."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def load_instance(path: str) -> tuple[EmbeddedDag, Optional[dict[str, int]]]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_instance(text)


def rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(x: Any) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InvalidInput(f"rational values must be integers or 'p/q' strings, got {x!r}")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"bad rational {x!r}") from None


# ---------------------------------------------------------------- documents


def _doc(kind: str, **body) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind, **body}


def layering_json(p: Layering) -> list[list[str]]:
    return [list(r) for r in p]


def clique_json(K: LayeringClique) -> list[list[list[str]]]:
    return [layering_json(p) for p in K.layerings]


def triangulation_document(dag: EmbeddedDag, tri: Triangulation) -> dict:
    cells = []
    for K, s in tri.cells:
        cells.append({
            "layerings": clique_json(K),
            "vertices": [list(v) for v in s.vertices],
            "volume": simplex_normalized_volume(s, tri.lattice),
        })
    return _doc(
        "triangulation",
        edges=list(tri.edge_ids),
        dimension=tri.d,
        lattice={"origin": list(tri.lattice.origin), "basis": [list(b) for b in tri.lattice.basis]},
        volume=len(cells),
        cells=cells,
    )


def poset_document(poset: FramingPoset) -> dict:
    return _doc(
        "poset",
        nodes=[clique_json(K) for K in poset.nodes],
        down_edges=[
            {"upper": hi, "lower": lo, "mutation": str(poset.kinds[(hi, lo)]), "cover": (hi, lo) in poset.reduction}
            for hi, lo in sorted(poset.down_edges)
        ],
        maximal=poset.maximal(),
        minimal=poset.minimal(),
    )


def report_document(report: VerificationReport, kind: str) -> dict:
    return _doc(
        kind,
        overall=report.overall,
        checks=[{"name": n, "passed": ok, "detail": detail} for n, ok, detail in report.checks],
    )


def emit_dot(poset: FramingPoset) -> str:
    """Hasse diagram: covers drawn from the lower clique up to the upper one."""
    lines = ["digraph framing_poset {", "  rankdir=BT;"]
    for i in range(len(poset.nodes)):
        lines.append(f'  n{i} [label="{i}"];')
    for hi, lo in sorted(poset.reduction, key=lambda e: (e[1], e[0])):
        kind = poset.kinds[(hi, lo)].kind.value
        lines.append(f'  n{lo} -> n{hi} [label="{kind}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------------- cli


def _balanced(args, dag: EmbeddedDag, netflow: Optional[dict[str, int]]) -> EmbeddedDag:
    """The dag itself, or its decontraction when a non-unit netflow is given."""
    if netflow is None or netflow == unit_netflow(dag):
        return dag
    _note(args, "non-unit netflow: working on the decontracted instance")
    return decontract(dag, netflow, Placement.BELOW).reduced


def _note(args, msg: str) -> None:
    if not args.quiet:
        print(msg, file=sys.stderr)


def _emit(args, doc: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(dumps(doc))
    elif not args.quiet:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _fmt_layering(p: Layering) -> str:
    return " | ".join(" ".join(r) for r in p)


def cmd_validate(args) -> int:
    dag, netflow = load_instance(args.file)
    report = validate_strong_planarity(dag)
    violations = list(report.violations)
    if report.ok:
        a = netflow if netflow is not None else unit_netflow(dag)
        violations += list(check_nondegenerate(dag, a).violations)
    ok = not violations
    doc = _doc("validation", ok=ok, violations=[{"rule": r, "detail": d} for r, d in violations])
    text = "ok" if ok else "\n".join(f"{r}: {d}" for r, d in violations)
    _emit(args, doc, text)
    if not ok:
        _note(args, f"{len(violations)} violation(s)")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_reduce(args) -> int:
    dag, netflow = load_instance(args.file)
    a = netflow if netflow is not None else unit_netflow(dag)
    rmap = decontract(dag, a, Placement(args.placement))
    sys.stdout.write(dumps(instance_document(rmap.reduced)))
    return EXIT_OK


def cmd_routes(args) -> int:
    dag, _ = load_instance(args.file)
    _check_dag(dag)
    routes = enumerate_routes(dag, args.limit)
    _emit(args, _doc("routes", routes=[list(r) for r in routes]), "\n".join(" ".join(r) for r in routes))
    return EXIT_OK


def cmd_layerings(args) -> int:
    dag, netflow = load_instance(args.file)
    dag = _balanced(args, dag, netflow)
    layerings = enumerate_layerings(dag, args.limit)
    _emit(
        args,
        _doc("layerings", sources=list(dag.sources), layerings=[layering_json(p) for p in layerings]),
        "\n".join(_fmt_layering(p) for p in layerings),
    )
    return EXIT_OK


def _read_flow(spec: str) -> dict:
    text = spec
    if spec.startswith("@"):
        try:
            with open(spec[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {spec[1:]}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"flow is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise InvalidInput("flow must be an object mapping edge ids to rationals")
    return {e: parse_rational(x) for e, x in raw.items()}


def cmd_decompose(args) -> int:
    dag, netflow = load_instance(args.file)
    dag = _balanced(args, dag, netflow)
    flow = _read_flow(args.flow)
    missing = set(dag.edge_ids) - set(flow)
    unknown = set(flow) - set(dag.edge_ids)
    if unknown:
        raise InvalidInput(f"flow names unknown edges {sorted(unknown)}")
    for e in missing:
        flow[e] = Fraction(0)
    dec = decompose_flow(dag, flow)
    doc = _doc("decomposition", terms=[{"coefficient": rational(c), "layering": layering_json(p)} for p, c in dec.terms])
    text = "\n".join(f"{rational(c)}  {_fmt_layering(p)}" for p, c in dec.terms) or "(zero flow)"
    _emit(args, doc, text)
    return EXIT_OK


def cmd_triangulate(args) -> int:
    dag, netflow = load_instance(args.file)
    dag = _balanced(args, dag, netflow)
    tri = build_triangulation(dag, args.limit)
    doc = triangulation_document(dag, tri)
    lines = [f"dimension {tri.d}, {len(tri.cells)} cells, volume {len(tri.cells)}"]
    for k, (K, _) in enumerate(tri.cells):
        lines.append(f"cell {k}:")
        lines.extend(f"  {_fmt_layering(p)}" for p in K.layerings)
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def cmd_poset(args) -> int:
    dag, netflow = load_instance(args.file)
    dag = _balanced(args, dag, netflow)
    poset = build_framing_poset(dag, args.limit)
    if args.dot:
        sys.stdout.write(emit_dot(poset))
        return EXIT_OK
    lines = [f"{len(poset.nodes)} cliques, maximal {poset.maximal()}, minimal {poset.minimal()}"]
    for hi, lo in sorted(poset.reduction):
        lines.append(f"{hi} > {lo}  {poset.kinds[(hi, lo)]}")
    _emit(args, poset_document(poset), "\n".join(lines))
    return EXIT_OK


def _report_text(report: VerificationReport) -> str:
    lines = [f"{'PASS' if ok else 'FAIL'} {name}: {detail}" for name, ok, detail in report.checks]
    lines.append("overall: " + ("pass" if report.overall else "FAIL"))
    return "\n".join(lines)


def cmd_verify(args) -> int:
    dag, netflow = load_instance(args.file)
    dag = _balanced(args, dag, netflow)
    tri = build_triangulation(dag, args.limit)
    report = verify_triangulation(dag, tri, args.face_cutoff, args.samples, args.seed)
    _emit(args, report_document(report, "verification"), _report_text(report))
    return EXIT_OK if report.overall else EXIT_INTERNAL


def cmd_k33(args) -> int:
    report = k33_obstruction_check()
    _emit(args, report_document(report, "k33_obstruction"), _report_text(report))
    return EXIT_OK if report.overall else EXIT_INTERNAL


def cmd_generate(args) -> int:
    dag = random_instance(args.seed, args.max_edges, args.max_sources)
    sys.stdout.write(dumps(instance_document(dag)))
    return EXIT_OK


def _check_dag(dag: EmbeddedDag) -> None:
    report = validate_strong_planarity(dag)
    if not report.ok:
        raise StructuralError("; ".join(f"{r}: {d}" for r, d in report.violations))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--limit", type=int, default=argparse.SUPPRESS, help="cap on enumerated objects")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="no diagnostics or text summaries")

    ap = argparse.ArgumentParser(prog="flowframing", description="Framing triangulations of strongly planar flow polytopes.")
    ap.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="cap on enumerated objects")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--quiet", action="store_true", help="no diagnostics or text summaries")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, with_file=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if with_file:
            p.add_argument("file", help="instance JSON file")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check strong planarity and nondegeneracy")
    p = add("reduce", cmd_reduce, "decontract to a balanced instance")
    p.add_argument("--placement", choices=[x.value for x in Placement], default="below")
    add("routes", cmd_routes, "list routes")
    add("layerings", cmd_layerings, "list layerings in post-source order")
    p = add("decompose", cmd_decompose, "write a flow as a layering-clique combination")
    p.add_argument("--flow", required=True, help="JSON object edge -> rational, or @file")
    add("triangulate", cmd_triangulate, "framing triangulation")
    p = add("poset", cmd_poset, "framing poset")
    p.add_argument("--dot", action="store_true", help="emit the Hasse diagram as DOT")
    p = add("verify", cmd_verify, "check the triangulation against independent oracles")
    p.add_argument("--face-cutoff", type=int, default=5)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    add("k33-check", cmd_k33, "certify that K_{3,3} has no framing triangulation", with_file=False)
    p = add("generate", cmd_generate, "random strongly planar balanced instance", with_file=False)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-edges", type=int, default=12)
    p.add_argument("--max-sources", type=int, default=3)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.limit < 1:
        print("error: --limit must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LimitExceeded as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except InternalInvariantViolated as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (InvalidInput, StructuralError, FramingError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
