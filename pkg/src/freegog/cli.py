"""Command-line interface.

Exit codes: 0 when every verdict passes, 1 when some verdict fails, 2 on
input errors or violated hypotheses.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import dot, shnc
from .errors import FreeGogError, HypothesisError, PreconditionError
from .gog import GraphOfGraphs, from_json, parse_instance, to_json
from .graphs import LabeledGraph, generators, graph_from_words, join, to_text
from .pullback import intersection_subgroup
from .reduction import format_trace, reduce_to_valence_three
from .words import parse_words

log = logging.getLogger("freegog")


class InputError(FreeGogError):
    pass


def _summary(g: LabeledGraph, title: str) -> str:
    gens = " ".join(str(w) for w in generators(g)) if g.basepoint is not None else "-"
    return (
        f"{title}: vertices={g.n_vertices} edges={g.n_edges} rank={g.rank() if g.n_vertices else 0} "
        f"chi={g.euler_characteristic()}\n"
        f"generators: {gens or '1'}\n"
    )


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_gog(path: str) -> GraphOfGraphs:
    text = _read(path)
    if text.lstrip().startswith("{"):
        return from_json(text)
    return parse_instance(text).build()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# -- commands ------------------------------------------------------------------


def cmd_fold(args) -> int:
    g = graph_from_words(parse_words(args.words, args.rank), args.rank)
    sys.stdout.write(_summary(g, "subgroup"))
    if args.graph:
        sys.stdout.write(to_text(g))
    return 0


def cmd_intersect(args) -> int:
    g1 = graph_from_words(parse_words(args.first, args.rank), args.rank)
    g2 = graph_from_words(parse_words(args.second, args.rank), args.rank)
    sys.stdout.write(_summary(intersection_subgroup(g1, g2), "intersection"))
    return 0


def cmd_join(args) -> int:
    g1 = graph_from_words(parse_words(args.first, args.rank), args.rank)
    g2 = graph_from_words(parse_words(args.second, args.rank), args.rank)
    sys.stdout.write(_summary(join(g1, g2), "join"))
    return 0


def cmd_build(args) -> int:
    x = parse_instance(_read(args.instance)).build()
    _write(args.output, to_json(x))
    return 0


def _reduce(args, x: GraphOfGraphs):
    terminal, trace = reduce_to_valence_three(x, strip_trees=args.strip_tree_mids)
    if args.trace:
        Path(args.trace).write_text(format_trace(trace))
    return terminal, trace


def cmd_reduce(args) -> int:
    terminal, trace = _reduce(args, _load_gog(args.input))
    _write(args.output, to_json(terminal))
    log.info("%d moves, terminal complexity %s", len(trace), terminal.complexity())
    return 0


def cmd_check_identity(args) -> int:
    terminal, _ = _reduce(args, _load_gog(args.input))
    stats = shnc.delta_statistics(terminal)
    ident = shnc.identity_check(stats, terminal)
    census = shnc.census_checks(terminal, stats)
    value, nonneg = shnc.shnc_inequality(terminal)
    out = [
        f"sigma1={len(stats.sigma1)} sigma2={len(stats.sigma2)} mu={stats.mu}",
        f"lhs=4chi(H1)chi(H2)+4sum(chi(M))={ident.lhs}",
        f"lhs_from_terminal_graphs={ident.lhs_census}",
        f"rhs=|S1||S2|-2mu={ident.rhs}",
        f"identity={'equal' if ident.equal else 'DIFFERENT'}",
    ]
    out += [f"{k}={'ok' if v else 'FAIL'}" for k, v in census.items()]
    out.append(f"chi(H1)chi(H2)+chi(M)={value} {'nonnegative' if nonneg else 'NEGATIVE'}")
    sys.stdout.write("\n".join(out) + "\n")
    return 0 if ident.equal and all(census.values()) and nonneg else 1


def _emit_report(args, rep: shnc.Report) -> int:
    _write(args.output, rep.text())
    return 0 if rep.ok else 1


def cmd_experiment_cs(args) -> int:
    rep = shnc.culler_shalen_experiment(args.trials, args.seed, args.max_len)
    return _emit_report(args, rep)


def cmd_experiment_shnc(args) -> int:
    rep = shnc.shnc_experiment(args.trials, args.seed, args.max_len, rank=args.rank or 2)
    return _emit_report(args, rep)


def cmd_export_dot(args) -> int:
    if args.words is not None:
        if not args.rank:
            raise InputError("--words needs --rank")
        obj = graph_from_words(parse_words(args.words, args.rank), args.rank)
    elif args.input is not None:
        obj = _load_gog(args.input)
    else:
        raise InputError("give an instance file or --words")
    _write(args.output, dot.to_dot(obj))
    return 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="freegog", description="Subgroups of free groups and graphs of graphs.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def words_cmd(name, helptext, *positional):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("--rank", type=int, required=True, help="rank of the ambient free group")
        for arg in positional:
            c.add_argument(arg, help="generating words, comma or space separated (uppercase = inverse)")
        return c

    c = words_cmd("fold", "Stallings graph of a subgroup", "words")
    c.add_argument("--graph", action="store_true", help="also print the graph in text format")
    c.set_defaults(func=cmd_fold)
    words_cmd("intersect", "intersection of two subgroups", "first", "second").set_defaults(func=cmd_intersect)
    words_cmd("join", "subgroup generated by two subgroups", "first", "second").set_defaults(func=cmd_join)

    c = sub.add_parser("build", help="build the graph of graphs of an instance file")
    c.add_argument("instance")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_build)

    for name, func, helptext in (
        ("reduce", cmd_reduce, "reduce to valence three; writes the terminal graph of graphs"),
        ("check-identity", cmd_check_identity, "reduce, then evaluate both sides of the Δ identity"),
    ):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("input", help="instance file or graph-of-graphs JSON ('-' for stdin)")
        c.add_argument("-o", "--output")
        c.add_argument("--trace", help="write the move trace to this path")
        c.add_argument("--strip-tree-mids", action="store_true", help="delete tree components of the mid-graph")
        c.set_defaults(func=func)

    for name, func, trials, rank in (
        ("experiment-cs", cmd_experiment_cs, 30, 3),
        ("experiment-shnc", cmd_experiment_shnc, 50, 2),
    ):
        c = sub.add_parser(name, help="seeded batch experiment")
        c.add_argument("--trials", type=int, default=trials)
        c.add_argument("--seed", type=int, default=0)
        c.add_argument("--max-len", type=int, default=6)
        c.add_argument("--rank", type=int, default=rank)
        c.add_argument("-o", "--output")
        c.set_defaults(func=func)

    c = sub.add_parser("export-dot", help="DOT for a subgroup graph or a graph of graphs")
    c.add_argument("input", nargs="?")
    c.add_argument("--words")
    c.add_argument("--rank", type=int)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if getattr(args, "command", None) == "experiment-cs" and args.rank != 3:
        print("freegog: experiment-cs runs in rank 3 only", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (HypothesisError, PreconditionError) as exc:
        print(f"freegog: hypothesis violated: {exc}", file=sys.stderr)
        return 2
    except (FreeGogError, ValueError) as exc:
        print(f"freegog: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
