"""Command-line front end.

Subcommands: ``verify`` (exhaustively check a strategy table, optionally
repairing it), ``solve`` (synthesise a strategy by exhaustive search),
``plan`` (compose a full n-coin plan), ``bounds`` (tabulate the exact
bounds), ``session`` (interactive terminal assistant), ``serve`` (HTTP
session service) and ``export`` (DOT rendering of a strategy).

Exit codes: 0 success, 1 verification failure, 2 unreadable/unparseable
input, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .bounds import bounds_rows, format_rows, upper
from .composition import ContradictoryOutcome, plan
from .core import DIGIT_OF_SYMBOL, Semantics
from .search import (
    BudgetExceeded,
    SearchProblem,
    SearchStats,
    WeighingPolicy,
    solve,
)
from .session import Session, plan_for_tree
from .strategies import (
    EmptyTable,
    PACKAGED_TABLES,
    ParseError,
    data_path,
    load_table,
    packaged_table,
    repair_tree_detailed,
    save_table,
    serialize_table,
    table_to_tree,
    tree_to_dot,
    tree_to_table,
    verify_tree,
)
from .core import HypothesisSet


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weighwright",
        description="adaptive balance-weighing strategies for counterfeit coins",
    )
    sub = parser.add_subparsers(required=True)

    p = sub.add_parser("verify", help="exhaustively verify a strategy table")
    p.add_argument("table", help=f"one of {', '.join(PACKAGED_TABLES)} or a file path")
    p.add_argument("--semantics", choices=["exact", "sort"], default="sort")
    p.add_argument("--repair", action="store_true",
                   help="rebuild failing subtrees by exhaustive search")
    p.add_argument("--budget", type=int, default=None,
                   help="depth budget (default: ceil(7n/11))")
    p.add_argument("--report", help="write the verification report as JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="synthesise a strategy by exhaustive search")
    p.add_argument("n", type=int)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--semantics", choices=["exact", "sort"], default="exact")
    p.add_argument("--budget", type=int, default=None,
                   help="cap on search nodes; exceeding it exits 3")
    p.add_argument("--budget-seconds", type=float, default=None)
    p.add_argument("--uniform-by", type=int, default=None, metavar="K",
                   help="require the uniform class isolated within K weighings"
                        " (sorting semantics)")
    p.add_argument("--force", action="store_true",
                   help="lift the n <= 8 feasibility guard")
    p.add_argument("-o", "--output", help="write the strategy JSON here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("plan", help="compose a plan for n coins")
    p.add_argument("n", type=int)
    p.add_argument("--semantics", choices=["exact", "sort"], default="exact")
    p.add_argument("--export", help="write the plan as JSON")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("bounds", help="tabulate the exact weighing-count bounds")
    p.add_argument("n_from", type=int)
    p.add_argument("n_to", type=int)
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("session", help="interactive weighing assistant")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("n", type=int, nargs="?")
    group.add_argument("--tree", help="strategy file to execute")
    p.add_argument("--semantics", choices=["exact", "sort"], default="sort")
    p.add_argument("--log-dir", help="append session events to JSON-lines files here")
    p.set_defaults(func=cmd_session)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8011)
    p.add_argument("--log-dir", help="append session events to JSON-lines files here")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("export", help="export a strategy for inspection")
    p.add_argument("table", help=f"one of {', '.join(PACKAGED_TABLES)} or a file path")
    p.add_argument("--dot", action="store_true", help="Graphviz DOT output")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)

    return parser


def _load(ref: str):
    if ref in PACKAGED_TABLES:
        return packaged_table(ref)
    return load_table(ref)


def cmd_verify(args) -> int:
    try:
        table = _load(args.table)
        tree = table_to_tree(table)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, EmptyTable) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    semantics = Semantics(args.semantics)
    budget = args.budget if args.budget is not None else upper(tree.universe)
    report = verify_tree(tree, semantics, depth_budget=budget)
    if table.defects:
        print(f"{len(table.defects)} table defect(s) noted while loading")
    print(f"raw: {report.summary()}")
    repaired_count = 0
    if args.repair and not report.ok:
        tree, repaired_paths = repair_tree_detailed(tree, report, budget, semantics)
        repaired_count = len(repaired_paths)
        report = verify_tree(tree, semantics, depth_budget=budget)
        print(f"repaired {repaired_count} subtree(s): {report.summary()}")
    if args.report:
        doc = {
            "table": args.table,
            "semantics": semantics.value,
            "total_cases": report.total_cases,
            "correct": report.correct,
            "max_depth": report.max_depth,
            "uniform_resolved_by": report.uniform_resolved_by,
            "defects": [
                {"path": list(d.path), "kind": d.kind, "detail": d.detail}
                for d in report.defects
            ],
            "repaired_nodes": repaired_count,
        }
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
    return 0 if report.ok else 1


def cmd_solve(args) -> int:
    if args.n > 8 and not args.force:
        print(f"n={args.n} exceeds the exhaustive-search guard (use --force)",
              file=sys.stderr)
        return 2
    semantics = Semantics(args.semantics)
    problem = SearchProblem(
        universe=args.n,
        hypotheses=HypothesisSet.all_sets(args.n, semantics),
        depth_budget=args.depth,
        policy=WeighingPolicy.for_universe(args.n, refs=semantics is Semantics.EXACT),
        uniform_deadline=args.uniform_by,
    )
    stats = SearchStats()
    try:
        tree = solve(problem, node_cap=args.budget,
                     time_cap=args.budget_seconds, stats=stats)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    if tree is None:
        print(f"infeasible at depth {args.depth} "
              f"({stats.nodes_expanded} nodes searched)")
        return 0
    print(f"found a depth-{tree.depth()} strategy "
          f"({stats.nodes_expanded} nodes, {stats.elapsed:.2f}s)")
    if args.output:
        table = tree_to_table(tree, f"solve{args.n}", semantics)
        save_table(table, args.output)
        print(f"wrote {args.output}")
    return 0


def cmd_plan(args) -> int:
    p = plan(args.n, Semantics(args.semantics))
    print(p.describe())
    if args.export:
        with open(args.export, "w", encoding="utf-8") as fh:
            json.dump(p.to_json(), fh, indent=2)
        print(f"wrote {args.export}")
    return 0


def cmd_bounds(args) -> int:
    try:
        print(format_rows(bounds_rows(args.n_from, args.n_to), args.format))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def cmd_session(args) -> int:
    semantics = Semantics(args.semantics)
    if args.tree:
        tree = table_to_tree(_load(args.tree))
        session = Session.for_plan(plan_for_tree(tree, semantics, args.tree),
                                   args.log_dir)
    else:
        session = Session.for_n(args.n, semantics, args.log_dir)
    print(f"session {session.id}: {session.n} coins, {semantics.value} semantics")
    print("answer each weighing with <, = or > (q quits)")
    while not session.finished:
        w = session.next_weighing()
        prompt = (f"put coins {w.left.describe()} on the left pan, "
                  f"{w.right.describe()} on the right > ")
        sys.stdout.write(prompt)
        sys.stdout.flush()
        line = sys.stdin.readline()
        if not line or line.strip().lower() in ("q", "quit"):
            print("\nsession abandoned")
            return 0
        symbol = line.strip()
        if symbol not in DIGIT_OF_SYMBOL:
            print("please answer <, = or >")
            continue
        try:
            session.submit_symbol(symbol)
        except ContradictoryOutcome:
            print("contradictory outcome history; re-check that weighing")
    doc = session.result_doc()
    if doc["uniform"]:
        print("all coins uniform")
    else:
        fakes = ",".join(map(str, doc["fakes"])) or "none"
        print(f"fake coins: {{{fakes}}}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(log_dir=args.log_dir), host=args.host, port=args.port)
    return 0


def cmd_export(args) -> int:
    try:
        table = _load(args.table)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, EmptyTable) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    if args.dot:
        out = tree_to_dot(table_to_tree(table), table.name)
    else:
        out = json.dumps(serialize_table(table), indent=1)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
        print(f"wrote {args.output}")
    else:
        print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
