"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import catalog
from .coloring import count_colorings, enumerate_colorings, roundtrip_mismatch
from .core import LETTERS, GROUPS, DerivationScript, ReplayError, replay, start_state
from .formats import (
    FormatError,
    dump_deriv,
    dump_lset_stream,
    dump_rot,
    load_start,
    parse_deriv,
    parse_rot,
    read_text,
)
from .search import PROBES, SearchConfig, bfs
from .triangulation import (
    EmbeddingError,
    ShellingError,
    build_from_derivation,
    compute_shelling_order,
    validate,
)


class UsageError(Exception):
    pass


def _load_graph(source: str):
    if source in catalog.NAMES and not Path(source).exists():
        return catalog.load(source)
    return parse_rot(read_text(source), source)


def _load_script(path: str, start=None) -> DerivationScript:
    steps = parse_deriv(read_text(path), path)
    return DerivationScript(start if start is not None else start_state(), steps)


def _kv_block(values: dict[str, str]) -> str:
    return "".join(f"{key}={values[key]}\n" for key in sorted(values))


def cmd_derive(args) -> int:
    start = load_start(args.start)
    states = replay(_load_script(args.script, start))
    sys.stdout.write(dump_lset_stream(states))
    return 0


def cmd_search(args) -> int:
    start = start_state(args.alphabet) if args.start == "S" else load_start(args.start)
    config = SearchConfig(
        max_depth=args.max_depth,
        max_length=args.max_length,
        max_states=args.max_states,
        group=args.canon,
        probes=tuple(args.probe or ()),
        k=args.alphabet,
        workers=args.workers,
    )
    states = []
    report = bfs(start, config, (lambda _, state: states.append(state)) if args.emit_states else None)
    if args.emit_states:
        Path(args.emit_states).write_text(dump_lset_stream(states))

    out = sys.stdout
    out.write(f"{'depth':>5}  {'states':>8}\n")
    peak = max(report.depth_counts) if report.depth_counts else 1
    for depth, count in enumerate(report.depth_counts):
        bar = "#" * max(1, round(40 * count / peak)) if args.histogram and count else ""
        out.write(f"{depth:>5}  {count:>8}  {bar}".rstrip() + "\n")
    out.write("\n")
    out.write(_kv_block(report.summary()))
    if args.emit_witness and report.witness is not None:
        Path(args.emit_witness).write_text(dump_deriv(report.witness))
    if any(res.violations for res in report.probes.values()):
        return 1
    return 0


def cmd_build(args) -> int:
    G, _ = build_from_derivation(_load_script(args.script).steps)
    text = dump_rot(G)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_order(args) -> int:
    G = _load_graph(args.graph)
    if (args.v1 is None) != (args.v2 is None):
        raise UsageError("--v1 and --v2 must be given together")
    order = compute_shelling_order(G, args.v1, args.v2)
    n = G.n
    failures = []
    for i in range(3, n - 2):
        for part, verts in (("prefix", order.order[:i]), ("suffix", order.order[i:])):
            try:
                ok = validate(G.induced(verts)).is_near_triangulation
            except EmbeddingError:
                ok = False
            if not ok:
                failures.append(f"{part} {i}")
    sys.stdout.write("order " + " ".join(map(str, order.order)) + "\n")
    sys.stdout.write(dump_deriv(order.labels))
    if args.emit_script:
        Path(args.emit_script).write_text(dump_deriv(order.labels))
    if failures:
        sys.stderr.write("not a near-triangulation: " + ", ".join(failures) + "\n")
        return 1
    return 0


def cmd_verify_roundtrip(args) -> int:
    script = _load_script(args.script)
    bad = roundtrip_mismatch(script)
    if bad is None:
        sys.stdout.write(f"roundtrip=ok steps={len(script.steps)}\n")
        return 0
    sys.stdout.write(f"roundtrip=mismatch prefix={bad}\n")
    return 1


def _parse_seed(text: str | None) -> dict[int, str]:
    if not text:
        return {}
    seed = {}
    for item in text.split(","):
        vertex, _, letter = item.partition("=")
        if not vertex.strip().isdigit() or len(letter.strip()) != 1 or letter.strip() not in LETTERS:
            raise UsageError(f"bad seed entry {item!r}; expected <vertex>=<letter>")
        seed[int(vertex)] = letter.strip()
    return seed


def cmd_colorings(args) -> int:
    G = _load_graph(args.graph)
    seed = _parse_seed(args.seed)
    if args.count:
        sys.stdout.write(f"{count_colorings(G, seed, args.k)}\n")
        return 0
    for g in enumerate_colorings(G, seed, args.k):
        sys.stdout.write("".join(LETTERS[g[v]] for v in G.vertices) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="colorstrings", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("derive", help="replay a .deriv script and print every state")
    p.add_argument("--start", default="S", help="'S' for {acb} or a .lset path (default: S)")
    p.add_argument("--script", required=True, help=".deriv file")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("search", help="bounded breadth-first search for the empty set")
    p.add_argument("--start", default="S", help="'S' for {acb} or a .lset path (default: S)")
    p.add_argument("--max-depth", type=int, default=6, help="derivation depth bound (default: 6)")
    p.add_argument("--max-length", type=int, default=7, help="prune states longer than this (default: 7)")
    p.add_argument("--max-states", type=int, default=1_000_000, help="distinct-state budget (default: 1000000)")
    p.add_argument("--canon", choices=GROUPS, default="cd", help="symmetry group for deduplication (default: cd)")
    p.add_argument("--alphabet", type=int, choices=(4, 5), default=4, help="alphabet size (default: 4)")
    p.add_argument("--probe", action="append", choices=sorted(PROBES), help="property checked on every state; repeatable")
    p.add_argument("--emit-states", metavar="PATH", help="write every canonical state as a .lset stream")
    p.add_argument("--emit-witness", metavar="PATH", help="write the witness script when the empty set is reached")
    p.add_argument("--workers", type=int, default=1, help="processes used to expand each depth (default: 1)")
    p.add_argument("--histogram", action="store_true", help="draw a bar per depth in the table")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("build", help="build the near-triangulation of a .deriv script")
    p.add_argument("--script", required=True, help=".deriv file (applied from S)")
    p.add_argument("--output", help="write the .rot here instead of stdout")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("order", help="shelling order of a 4-connected triangulation")
    p.add_argument("--graph", required=True, help=f".rot file or catalog name ({', '.join(catalog.NAMES)})")
    p.add_argument("--v1", type=int, help="first outer vertex")
    p.add_argument("--v2", type=int, help="second outer vertex")
    p.add_argument("--emit-script", metavar="PATH", help="write the attachment labels as a .deriv file")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("verify-roundtrip", help="compare replayed states with boundary colorings")
    p.add_argument("--script", required=True, help=".deriv file (applied from S)")
    p.set_defaults(func=cmd_verify_roundtrip)

    p = sub.add_parser("colorings", help="enumerate or count proper colorings")
    p.add_argument("--graph", required=True, help=f".rot file or catalog name ({', '.join(catalog.NAMES)})")
    p.add_argument("--k", type=int, default=4, help="number of letters (default: 4)")
    p.add_argument("--seed", help="fixed letters, e.g. 1=a,2=b,3=c")
    p.add_argument("--count", action="store_true", help="print only the number of colorings")
    p.set_defaults(func=cmd_colorings)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (FormatError, ReplayError, UsageError, ShellingError, EmbeddingError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
