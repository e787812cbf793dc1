"""Machine-readable 11-coin weighing tables: loading, verification, repair.

Three seven-weighing strategies for sorting 11 coins ship with the package
(``alg1``, ``alg2``, ``alg3``), each as a versioned JSON strategy file plus
the plain-text table transcription it was imported from.

A strategy file is JSON::

    { "name": str, "universe": int, "semantics": "exact" | "sort",
      "nodes":  [ { "path": [digits],
                    "left":  {"coins": [ints], "refs": int},
                    "right": {"coins": [ints], "refs": int} } ],
      "leaves": [ { "path": [digits], "class": int | "uniform" } ] }

The text importer accepts the legacy table format: blocks headed
``The k-th weighing`` of rows ``w(d,...) = {..}:{..}``, then a ``map``
section of rows ``f(d,...) = value``.  Printed direction keys in such tables
are often truncated; when a block holds exactly ``3**(k-1)`` rows they are
reconstructed positionally (the enumeration varies the first digit fastest),
and map rows are placed on the outcome path their own value simulates to.
Rows that contradict their reconstructed position are recorded as defects
and dropped rather than guessed at; the exhaustive verifier is the source of
truth, and :func:`repair_tree` rebuilds whatever subtrees it flags.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from itertools import product
from typing import IO, Optional, Union

from .core import (
    BALANCED,
    DecisionTree,
    HypothesisSet,
    Internal,
    Leaf,
    LeafNode,
    MalformedTree,
    NOOP_WEIGHING,
    Node,
    Pan,
    Semantics,
    UNIFORM_LEAF,
    Weighing,
    refine,
    run_strategy,
    weigh,
)

PACKAGED_TABLES = ("alg1", "alg2", "alg3")

DATA_ENV_VAR = "WEIGHWRIGHT_DATA"


class ParseError(Exception):
    """A strategy file could not be parsed; carries line/column when known."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        loc = "" if line is None else f" at line {line}" + ("" if column is None else f", column {column}")
        super().__init__(message + loc)
        self.line = line
        self.column = column


class EmptyTable(Exception):
    """The table has no classification rows."""


class MissingWeighing(Exception):
    """A leaf's ancestor weighing is absent from the table."""

    def __init__(self, prefix: tuple[int, ...]):
        super().__init__(f"no weighing stored for prefix {prefix}")
        self.prefix = prefix


class IrreparableNode(Exception):
    """No replacement subtree exists within the depth budget."""

    def __init__(self, prefix: tuple[int, ...]):
        super().__init__(f"cannot rebuild subtree at {prefix} within budget")
        self.prefix = prefix


@dataclass(frozen=True)
class TableDefect:
    path: tuple[int, ...]
    kind: str
    detail: str = ""


@dataclass
class StrategyTable:
    """Flat serialisation of an adaptive strategy: weighings and leaf rows."""

    name: str
    universe: int
    semantics: Semantics
    weighings: dict[tuple[int, ...], Weighing] = field(default_factory=dict)
    outcomes: dict[tuple[int, ...], Leaf] = field(default_factory=dict)
    defects: list[TableDefect] = field(default_factory=list)


@dataclass
class VerificationReport:
    """Result of exhaustively simulating a tree against every fake set."""

    total_cases: int
    correct: int
    max_depth: int
    uniform_resolved_by: Optional[int]
    defects: list[TableDefect] = field(default_factory=list)
    # max consistent class count per node depth, over reachable nodes
    class_profile: dict[int, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.correct == self.total_cases

    def summary(self) -> str:
        uni = "-" if self.uniform_resolved_by is None else str(self.uniform_resolved_by)
        return (
            f"{self.correct}/{self.total_cases} correct, max depth {self.max_depth}, "
            f"uniform resolved by {uni}, {len(self.defects)} defect(s)"
        )


# ---------------------------------------------------------------------------
# JSON strategy files
# ---------------------------------------------------------------------------


def load_table(source: Union[str, os.PathLike, IO[str]]) -> StrategyTable:
    """Load a strategy file (JSON, or legacy table text by sniffing)."""
    if hasattr(source, "read"):
        text = source.read()
        name_hint = getattr(source, "name", "strategy")
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
        name_hint = os.path.splitext(os.path.basename(source))[0]
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _load_json(text, name_hint)
    return import_table_text(text, name=name_hint)


def _load_json(text: str, name_hint: str) -> StrategyTable:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    for key in ("universe", "nodes", "leaves"):
        if key not in doc:
            raise ParseError(f"strategy file missing {key!r}")
    semantics = Semantics(doc.get("semantics", "sort"))
    table = StrategyTable(doc.get("name", name_hint), int(doc["universe"]), semantics)
    for row in doc["nodes"]:
        path = tuple(int(d) for d in row["path"])
        _check_digits(path)
        w = Weighing(_pan_from_json(row["left"]), _pan_from_json(row["right"]))
        if path in table.weighings:
            table.defects.append(TableDefect(path, "duplicate-key", "weighing row"))
        table.weighings[path] = w
    for row in doc["leaves"]:
        path = tuple(int(d) for d in row["path"])
        _check_digits(path)
        cls = row["class"]
        leaf = UNIFORM_LEAF if cls == "uniform" else Leaf.classified(int(cls))
        if path in table.outcomes:
            table.defects.append(TableDefect(path, "duplicate-key", "leaf row"))
        table.outcomes[path] = leaf
    if not table.outcomes:
        raise EmptyTable(f"{table.name}: no classification rows")
    return table


def _check_digits(path: tuple[int, ...]) -> None:
    if any(d not in (0, 1, 2) for d in path):
        raise ParseError(f"direction digits must be 0, 1 or 2: {path}")


def _pan_from_json(doc: dict) -> Pan:
    return Pan(frozenset(int(c) for c in doc.get("coins", ())), int(doc.get("refs", 0)))


def serialize_table(table: StrategyTable) -> dict:
    def pan_doc(p: Pan) -> dict:
        return {"coins": sorted(p.coins), "refs": p.refs}

    return {
        "name": table.name,
        "universe": table.universe,
        "semantics": table.semantics.value,
        "nodes": [
            {"path": list(path), "left": pan_doc(w.left), "right": pan_doc(w.right)}
            for path, w in sorted(table.weighings.items(), key=_path_order)
        ],
        "leaves": [
            {"path": list(path), "class": "uniform" if leaf.uniform else leaf.fake_set}
            for path, leaf in sorted(table.outcomes.items(), key=_path_order)
        ],
    }


def _path_order(item):
    path = item[0]
    return (len(path), tuple(reversed(path)))


def save_table(table: StrategyTable, path: Union[str, os.PathLike]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(serialize_table(table), fh, indent=1)
        fh.write("\n")


def tree_to_table(tree: DecisionTree, name: str, semantics: Semantics) -> StrategyTable:
    table = StrategyTable(name, tree.universe, semantics)
    for path, node in tree.iter_nodes():
        if isinstance(node, Internal):
            table.weighings[path] = node.weighing
        else:
            table.outcomes[path] = node.leaf
    return table


# ---------------------------------------------------------------------------
# Legacy table text importer
# ---------------------------------------------------------------------------

_W_ROW = re.compile(
    r"[wW]\(\s*([0-9,\s\\]*)\)\s*=\s*\\?\{([^}:]*)\\?\}\s*:\s*\\?\{([^}:]*)\\?\}"
)
_F_ROW = re.compile(r"f\(\s*([0-9,\s\\]*)\)\s*=\s*(~|uniform|\d+|\\?\{[^}]*\\?\})")
_BLOCK_HEAD = re.compile(r"The\s+(\d+)-th weighing", re.IGNORECASE)
_MAP_HEAD = re.compile(r"^\s*(The\s+map\b|map\s*:)", re.IGNORECASE | re.MULTILINE)
_HEADER = re.compile(r"^\s*(name|universe|semantics)\s*:\s*(\S+)", re.IGNORECASE)


def import_table_text(text: str, name: str = "imported") -> StrategyTable:
    """One-shot importer for the legacy plain-text table format.

    Weighing blocks whose row count matches the complete ``3**(k-1)``
    enumeration have their direction keys reconstructed positionally (the
    printed keys, truncated or not, must agree with the reconstruction as a
    subsequence, else the row is flagged).  Map rows are then placed by
    simulating their own value through the loaded weighings.
    """
    universe = None
    semantics = Semantics.SORT_CLASSES
    table_name = name
    for line in text.splitlines():
        m = _HEADER.match(line)
        if not m:
            continue
        key, value = m.group(1).lower(), m.group(2)
        if key == "name":
            table_name = value
        elif key == "universe":
            universe = int(value)
        elif key == "semantics":
            semantics = Semantics(value)

    map_match = _MAP_HEAD.search(text)
    w_text = text[: map_match.start()] if map_match else text
    f_text = text[map_match.end():] if map_match else text

    table = StrategyTable(table_name, universe or 0, semantics)
    _import_weighing_blocks(table, w_text)
    if universe is None:
        seen = {c for w in table.weighings.values() for c in w.coins}
        table.universe = max(seen) if seen else 0
    _import_map_rows(table, f_text)
    if not table.outcomes:
        raise EmptyTable(f"{table_name}: no classification rows")
    return table


def _canonical_keys(arity: int) -> list[tuple[int, ...]]:
    # The printed enumeration varies the FIRST digit fastest.
    return [tuple(reversed(t)) for t in product((0, 1, 2), repeat=arity)]


def _is_subsequence(short: tuple[int, ...], long: tuple[int, ...]) -> bool:
    it = iter(long)
    return all(d in it for d in short)


def _parse_key(raw: str) -> tuple[int, ...]:
    raw = raw.replace("\\", "").strip()
    if not raw:
        return ()
    return tuple(int(d) for d in raw.split(",") if d.strip())


def _parse_pan_text(raw: str) -> Pan:
    coins: set[int] = set()
    refs = 0
    for token in raw.replace("\\", "").split(","):
        token = token.strip()
        if not token:
            continue
        if token.lower() == "ref":
            refs += 1
        else:
            coins.add(int(token))
    return Pan(frozenset(coins), refs)


def _import_weighing_blocks(table: StrategyTable, text: str) -> None:
    heads = list(_BLOCK_HEAD.finditer(text))
    if not heads:
        # headerless: keys taken literally
        for m in _W_ROW.finditer(text):
            _store_weighing(table, _parse_key(m.group(1)), m, positional=None)
        return
    for i, head in enumerate(heads):
        start = head.end()
        end = heads[i + 1].start() if i + 1 < len(heads) else len(text)
        k = int(head.group(1))
        rows = list(_W_ROW.finditer(text[start:end]))
        expected = _canonical_keys(k - 1)
        if len(rows) == len(expected):
            for m, true_key in zip(rows, expected):
                printed = _parse_key(m.group(1))
                if printed != true_key and not _is_subsequence(printed, true_key):
                    table.defects.append(
                        TableDefect(true_key, "key-conflict",
                                    f"printed key {printed} contradicts position")
                    )
                    continue
                if printed != true_key:
                    table.defects.append(
                        TableDefect(true_key, "truncated-key", f"printed as {printed}")
                    )
                _store_weighing(table, true_key, m, positional=true_key)
        else:
            table.defects.append(
                TableDefect((k - 1,), "incomplete-block",
                            f"weighing block {k} has {len(rows)} rows, expected {len(expected)}")
            )
            for m in rows:
                _store_weighing(table, _parse_key(m.group(1)), m, positional=None)


def _store_weighing(table: StrategyTable, key: tuple[int, ...], m, positional) -> None:
    try:
        w = Weighing(_parse_pan_text(m.group(2)), _parse_pan_text(m.group(3)))
    except Exception as exc:
        table.defects.append(TableDefect(key, "bad-weighing", str(exc)))
        return
    if key in table.weighings and positional is None:
        table.defects.append(TableDefect(key, "duplicate-key", "last write wins"))
    table.weighings[key] = w


def _import_map_rows(table: StrategyTable, text: str) -> None:
    full = (1 << table.universe) - 1 if table.universe else 0
    complete = _weighings_complete(table)
    for m in _F_ROW.finditer(text):
        printed = _parse_key(m.group(1))
        raw_value = m.group(2).replace("\\", "")
        if raw_value in ("~", "uniform"):
            leaf: Leaf = UNIFORM_LEAF
            value = None
        elif raw_value.startswith("{"):
            coins = [int(t) for t in raw_value.strip("{}").split(",") if t.strip()]
            value = 0
            for c in coins:
                value |= 1 << (c - 1)
            leaf = Leaf.classified(value)
        else:
            value = int(raw_value)
            leaf = Leaf.classified(value)
        if table.semantics is Semantics.SORT_CLASSES and value in (0, full) and value is not None:
            leaf = UNIFORM_LEAF
        if complete and value is not None:
            sim = 0 if (leaf.uniform and value == full) else value
            path = _simulate_path(table, sim)
            if printed != path and not _is_subsequence(printed, path):
                table.defects.append(
                    TableDefect(printed, "key-conflict",
                                f"value {value} simulates to {path}, printed key disagrees")
                )
                continue
            if printed != path:
                table.defects.append(TableDefect(path, "truncated-key", f"printed as {printed}"))
            key = path
        else:
            key = printed
        if key in table.outcomes:
            table.defects.append(TableDefect(key, "duplicate-key", "leaf row, last write wins"))
        table.outcomes[key] = leaf


def _weighings_complete(table: StrategyTable) -> bool:
    """True when the stored weighings form a complete ternary tree of some depth."""
    if () not in table.weighings:
        return False
    depth = max(len(p) for p in table.weighings)
    return all(
        key in table.weighings for k in range(depth + 1) for key in _canonical_keys(k)
    )


def _simulate_path(table: StrategyTable, fake_set: int) -> tuple[int, ...]:
    path: list[int] = []
    while tuple(path) in table.weighings:
        path.append(weigh(fake_set, table.weighings[tuple(path)]))
    return tuple(path)


# ---------------------------------------------------------------------------
# Table -> tree
# ---------------------------------------------------------------------------


def table_to_tree(table: StrategyTable) -> DecisionTree:
    """Assemble the decision tree a table describes.

    A prefix with a leaf row and no deeper weighing becomes a leaf; a leaf
    row whose ancestors lack weighings raises :class:`MissingWeighing`.
    Direction slots that neither a weighing nor a leaf ever reaches stay
    empty (``None`` children); executing into one raises
    :class:`~weighwright.core.MalformedTree`.
    """
    if not table.outcomes:
        raise EmptyTable(table.name)
    for path in table.outcomes:
        for i in range(len(path)):
            if path[:i] not in table.weighings:
                raise MissingWeighing(path[:i])

    def build(path: tuple[int, ...]) -> Optional[Node]:
        if path in table.outcomes:
            return LeafNode(table.outcomes[path])
        if path in table.weighings:
            return Internal(
                table.weighings[path],
                tuple(build(path + (d,)) for d in (0, 1, 2)),
            )
        return None

    root = build(())
    if root is None:
        raise EmptyTable(table.name)
    return DecisionTree(table.universe, root)


# ---------------------------------------------------------------------------
# Exhaustive verification
# ---------------------------------------------------------------------------


def verify_tree(tree: DecisionTree, semantics: Semantics,
                depth_budget: Optional[int] = None) -> VerificationReport:
    """Simulate every fake set through ``tree`` and report all failures.

    Checks, per fake set: the reached leaf claims exactly that set (or the
    uniform class for the empty/full set under sorting semantics).  Also
    records the maximum weighing depth, the depth by which the strategy has
    isolated the uniform pair on the all-balanced path, and the maximum
    number of consistent classes at every node depth (reachable nodes only).
    Failures become report defects; nothing raises.
    """
    n = tree.universe
    total = 1 << n
    full = total - 1
    correct = 0
    max_depth = 0
    defects: list[TableDefect] = []
    prefix_classes: dict[tuple[int, ...], set[int]] = {}

    for s in range(total):
        try:
            leaf, path, used = run_strategy(tree, s)
        except MalformedTree as exc:
            defects.append(TableDefect((), "missing-child", f"fake set {s}: {exc}"))
            continue
        max_depth = max(max_depth, used)
        cls = -1 if (semantics is Semantics.SORT_CLASSES and s in (0, full)) else s
        for i in range(len(path) + 1):
            prefix_classes.setdefault(path[:i], set()).add(cls)
        if semantics is Semantics.SORT_CLASSES and s in (0, full):
            if not leaf.uniform:
                defects.append(TableDefect(path, "wrong-class",
                                           f"fake set {s} should reach the uniform leaf"))
            elif any(d != BALANCED for d in path):
                defects.append(TableDefect(path, "wrong-class",
                                           f"uniform case took a non-balanced path"))
            else:
                correct += 1
        else:
            if leaf.uniform or leaf.fake_set != s:
                defects.append(TableDefect(path, "wrong-class",
                                           f"fake set {s} classified as {leaf.describe()}"))
            else:
                correct += 1

    profile = {
        depth: max(len(c) for p, c in prefix_classes.items() if len(p) == depth)
        for depth in range(max(len(p) for p in prefix_classes) + 1)
    }
    uniform_by = _uniform_resolution_depth(tree)
    report = VerificationReport(total, correct, max_depth, uniform_by, defects, profile)
    if depth_budget is not None and max_depth > depth_budget:
        report.defects.append(
            TableDefect((), "depth-exceeded", f"max depth {max_depth} > budget {depth_budget}")
        )
    return report


def _uniform_resolution_depth(tree: DecisionTree) -> Optional[int]:
    """Weighings after which, on the empty set's own path, only the uniform
    pair remains consistent.  None if a missing child interrupts the walk."""
    h = HypothesisSet.all_sets(tree.universe, Semantics.SORT_CLASSES)
    uniform_only = {0, h.full_mask}
    node = tree.root
    used = 0
    while True:
        if set(h.members) <= uniform_only:
            return used
        if not isinstance(node, Internal):
            return None
        digit = weigh(0, node.weighing)
        h = refine(h, node.weighing, digit)
        if not node.weighing.is_noop:
            used += 1
        node = node.children[digit]
        if node is None:
            return None


def consistent_hypotheses(tree: DecisionTree, path: tuple[int, ...],
                          semantics: Semantics) -> HypothesisSet:
    """Hypotheses consistent with following ``path`` from the root."""
    h = HypothesisSet.all_sets(tree.universe, semantics)
    node = tree.root
    for digit in path:
        if not isinstance(node, Internal):
            raise MalformedTree(f"path {path} leaves the tree")
        h = refine(h, node.weighing, digit)
        node = node.children[digit]
        if node is None and h.members:
            raise MalformedTree(f"path {path} reaches a missing child")
    return h


# ---------------------------------------------------------------------------
# Repair
# ---------------------------------------------------------------------------


def repair_tree(tree: DecisionTree, report: VerificationReport, budget: int,
                semantics: Semantics, **search_opts) -> DecisionTree:
    """Rebuild the defective subtrees a verification report points at.

    Each defect's node is replaced by a strategy synthesised for the
    hypotheses actually consistent there, within the remaining depth budget;
    when no such subtree exists the defect propagates to its parent, and a
    defect that survives at the root raises :class:`IrreparableNode`.  The
    returned tree re-verifies clean.
    """
    result = repair_tree_detailed(tree, report, budget, semantics, **search_opts)
    return result[0]


def repair_tree_detailed(tree: DecisionTree, report: VerificationReport, budget: int,
                         semantics: Semantics, **search_opts
                         ) -> tuple[DecisionTree, list[tuple[int, ...]]]:
    from .search import SearchProblem, WeighingPolicy, solve

    if not report.defects:
        return tree, []

    repaired: list[tuple[int, ...]] = []
    current = tree
    pending = sorted({d.path for d in report.defects}, key=len, reverse=True)
    attempts = 0
    while pending:
        attempts += 1
        if attempts > 64:
            raise IrreparableNode(pending[0])
        path = pending.pop(0)
        if any(p != path and path[: len(p)] == p for p in repaired):
            continue  # an ancestor was already rebuilt
        target = path
        while True:
            try:
                h = consistent_hypotheses(current, target, semantics)
            except MalformedTree:
                target = target[:-1]
                continue
            if not h.members:
                # outcome combination unreachable: nothing to fix here
                replacement = None
                break
            remaining = budget - _real_depth_along(current, target)
            if remaining >= 0:
                problem = SearchProblem(
                    universe=current.universe,
                    hypotheses=h,
                    depth_budget=remaining,
                    policy=WeighingPolicy.for_universe(
                        current.universe, refs=semantics is Semantics.EXACT
                    ),
                )
                replacement = solve(problem, **search_opts)
                if replacement is not None:
                    break
            if not target:
                raise IrreparableNode(path)
            target = target[:-1]
        if replacement is not None:
            current = _replace_subtree(current, target, replacement.root)
            repaired.append(target)
    check = verify_tree(current, semantics, depth_budget=budget)
    if not check.ok:
        remaining_defects = sorted({d.path for d in check.defects}, key=len)
        raise IrreparableNode(remaining_defects[0] if remaining_defects else ())
    return current, repaired


def _real_depth_along(tree: DecisionTree, path: tuple[int, ...]) -> int:
    node = tree.root
    used = 0
    for digit in path:
        if not isinstance(node, Internal):
            break
        if not node.weighing.is_noop:
            used += 1
        node = node.children[digit]
        if node is None:
            break
    return used


def _replace_subtree(tree: DecisionTree, path: tuple[int, ...], new_node: Node) -> DecisionTree:
    def rebuild(node: Optional[Node], remaining: tuple[int, ...]) -> Optional[Node]:
        if not remaining:
            return new_node
        assert isinstance(node, Internal), "replacement path must follow internal nodes"
        d = remaining[0]
        children = list(node.children)
        children[d] = rebuild(children[d], remaining[1:])
        return Internal(node.weighing, tuple(children))

    return DecisionTree(tree.universe, rebuild(tree.root, path))


# ---------------------------------------------------------------------------
# Packaged tables
# ---------------------------------------------------------------------------

_packaged_cache: dict[tuple[str, Semantics], DecisionTree] = {}


def data_path(filename: str) -> str:
    """Resolve a strategy data file, honouring the data-directory override."""
    override = os.environ.get(DATA_ENV_VAR)
    if override:
        candidate = os.path.join(override, filename)
        if os.path.exists(candidate):
            return candidate
    ref = resources.files(__package__).joinpath("data", filename)
    return str(ref)


def packaged_table(name: str) -> StrategyTable:
    if name not in PACKAGED_TABLES:
        raise ValueError(f"unknown packaged table {name!r}; have {PACKAGED_TABLES}")
    return load_table(data_path(f"{name}.json"))


def packaged_tree(name: str, semantics: Semantics = Semantics.SORT_CLASSES) -> DecisionTree:
    """A packaged 11-coin strategy, verified and (for exact semantics)
    upgraded to split the uniform pair with a reference-coin weighing."""
    key = (name, semantics)
    if key in _packaged_cache:
        return _packaged_cache[key]
    tree = table_to_tree(packaged_table(name))
    report = verify_tree(tree, semantics, depth_budget=7)
    if not report.ok:
        tree = repair_tree(tree, report, budget=7, semantics=semantics)
    _packaged_cache[key] = tree
    return tree


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------


def tree_to_dot(tree: DecisionTree, name: str = "strategy") -> str:
    """Graphviz rendering of a strategy for eyeballing."""
    lines = [f'digraph "{name}" {{', "  node [fontname=monospace];"]
    edge_labels = {0: "=", 1: "<", 2: ">"}

    def node_id(path: tuple[int, ...]) -> str:
        return "n" + "".join(map(str, path)) if path else "root"

    for path, node in tree.iter_nodes():
        nid = node_id(path)
        if isinstance(node, Internal):
            shape = "box"
            label = node.weighing.describe() if not node.weighing.is_noop else "(no-op)"
        else:
            shape = "ellipse"
            label = node.leaf.describe()
        lines.append(f'  {nid} [shape={shape}, label="{label}"];')
        if isinstance(node, Internal):
            for d, child in enumerate(node.children):
                if child is not None:
                    lines.append(f'  {nid} -> {node_id(path + (d,))} [label="{edge_labels[d]}"];')
    lines.append("}")
    return "\n".join(lines)
