"""Exact strategy synthesis by depth-bounded adversarial search.

Given a hypothesis set, a depth budget and a weighing-generation policy, the
searcher either returns a decision tree that isolates every hypothesis class
within the budget, or proves that none exists under the policy.  The search
is exhaustive over canonical weighings, so an infeasibility answer is a
proof, not a heuristic give-up; hitting a configured node or wall-clock cap
raises :class:`BudgetExceeded` instead of returning a wrong answer.

Key machinery:

* canonical weighing enumeration: pans are unordered, so only one of each
  mirror pair is generated, and reference padding is normalised to the
  smaller pan;
* an information-bound cut: a branch holding ``c`` classes cannot be solved
  in fewer than ``ceil(log3 c)`` further weighings;
* memoisation on the (hypothesis set, remaining budget) pair;
* an optional symmetry filter that skips weighings differing from an
  already-tried one only by permuting coins the current hypothesis set does
  not distinguish.

Ties are broken deterministically: candidate weighings are tried in a fixed
lexicographic order (smaller pans first), and the first feasible one wins,
so repeated runs return identical trees.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .bounds import upper
from .core import (
    DecisionTree,
    HypothesisSet,
    Internal,
    Leaf,
    LeafNode,
    Node,
    Pan,
    Semantics,
    UNIFORM_LEAF,
    Weighing,
    weigh,
)


class BudgetExceeded(Exception):
    """A node or wall-clock cap was hit before the search finished."""


@dataclass(frozen=True)
class WeighingPolicy:
    """What weighings the searcher may propose.

    ``coins`` are the usable coin ids; ``refs`` says whether known-normal
    reference coins may pad the smaller pan (any number, they are
    interchangeable).  ``max_pan`` optionally caps the per-pan object count.
    """

    coins: tuple[int, ...]
    refs: bool
    max_pan: Optional[int] = None

    @classmethod
    def for_universe(cls, n: int, refs: bool, max_pan: Optional[int] = None) -> "WeighingPolicy":
        return cls(tuple(range(1, n + 1)), refs, max_pan)


@dataclass
class SearchProblem:
    """A synthesis task: isolate every class of ``hypotheses`` in ``depth_budget``."""

    universe: int
    hypotheses: HypothesisSet
    depth_budget: int
    policy: WeighingPolicy
    # Depth (counted from this problem's root) by which the class containing
    # the uniform pair must be isolated; None disables the constraint.
    uniform_deadline: Optional[int] = None

    def __post_init__(self) -> None:
        if self.depth_budget < 0:
            raise ValueError("depth budget must be non-negative")
        if not self.hypotheses.members:
            raise ValueError("hypothesis set must be non-empty")


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    memo_hits: int = 0
    elapsed: float = 0.0


def enumerate_weighings(policy: WeighingPolicy) -> list[Weighing]:
    """All canonical candidate weighings under ``policy``.

    Canonical form: left pan holds at least as many coins as the right; for
    equal coin counts the lexicographically smaller pan goes left; reference
    padding only ever appears on the right (the side with fewer coins).
    """
    coins = sorted(policy.coins)
    n = len(coins)
    cap = policy.max_pan if policy.max_pan is not None else n
    out: list[Weighing] = []
    for a in range(1, min(n, cap) + 1):
        bs = range(a, 0, -1) if not policy.refs else range(a, -1, -1)
        for b in bs:
            if not policy.refs and b != a:
                continue
            if a + b > n or a > cap:
                continue
            if a == b == 0:
                continue
            for left in combinations(coins, a):
                rest = [c for c in coins if c not in left]
                for right in combinations(rest, b):
                    if a == b and right < left:
                        continue  # mirror image already generated
                    out.append(
                        Weighing(Pan(frozenset(left)), Pan(frozenset(right), refs=a - b))
                    )
    out.sort(key=_weighing_order_key)
    return out


def _weighing_order_key(w: Weighing):
    return (
        w.left.size,
        tuple(sorted(w.left.coins)),
        w.left.refs,
        tuple(sorted(w.right.coins)),
        w.right.refs,
    )


class _Searcher:
    def __init__(self, problem: SearchProblem, node_cap: Optional[int],
                 time_cap: Optional[float], symmetry_filter: bool, memoize: bool):
        self.problem = problem
        self.semantics = problem.hypotheses.semantics
        self.universe = problem.universe
        self.full = (1 << problem.universe) - 1
        self.weighings = enumerate_weighings(problem.policy)
        self.node_cap = node_cap
        self.time_cap = time_cap
        self.symmetry_filter = symmetry_filter
        self.memoize = memoize
        self.memo: dict = {}
        self.stats = SearchStats()
        self.t0 = time.monotonic()

    # -- class bookkeeping ------------------------------------------------

    def classes(self, members: frozenset[int]) -> frozenset[int]:
        if self.semantics is Semantics.EXACT:
            return members
        return frozenset(-1 if s in (0, self.full) else s for s in members)

    def has_uniform(self, members: frozenset[int]) -> bool:
        return self.semantics is Semantics.SORT_CLASSES and (
            0 in members or self.full in members
        )

    def leaf_for(self, members: frozenset[int]) -> Leaf:
        cls = self.classes(members)
        assert len(cls) == 1
        key = next(iter(cls))
        return UNIFORM_LEAF if key == -1 else Leaf.classified(key)

    # -- symmetry filter ---------------------------------------------------

    def _coin_signatures(self, members: frozenset[int]) -> dict[int, tuple[int, ...]]:
        ordered = sorted(members)
        return {
            c: tuple((s >> (c - 1)) & 1 for s in ordered)
            for c in self.problem.policy.coins
        }

    # -- core recursion ----------------------------------------------------

    def solve(self, members: frozenset[int], budget: int, depth: int) -> Optional[Node]:
        self.stats.nodes_expanded += 1
        if self.node_cap is not None and self.stats.nodes_expanded > self.node_cap:
            raise BudgetExceeded(f"node cap {self.node_cap} hit")
        if self.time_cap is not None and time.monotonic() - self.t0 > self.time_cap:
            raise BudgetExceeded(f"time cap {self.time_cap}s hit")

        cls = self.classes(members)
        deadline = self.problem.uniform_deadline
        if len(cls) == 1:
            return LeafNode(self.leaf_for(members))
        if deadline is not None and -1 in cls and depth >= deadline:
            return None  # uniform class not isolated in time
        if budget == 0 or 3 ** budget < len(cls):
            return None

        deadline_slack = None
        if deadline is not None and -1 in cls:
            deadline_slack = deadline - depth
        key = (members, budget, deadline_slack)
        if self.memoize and key in self.memo:
            self.stats.memo_hits += 1
            return self.memo[key]

        result: Optional[Node] = None
        seen_shapes: set = set()
        signatures = self._coin_signatures(members) if self.symmetry_filter else None
        for w in self.weighings:
            if signatures is not None:
                shape = (
                    tuple(sorted(signatures[c] for c in w.left.coins)),
                    w.left.refs,
                    tuple(sorted(signatures[c] for c in w.right.coins)),
                    w.right.refs,
                )
                if shape in seen_shapes or (shape[2], shape[3], shape[0], shape[1]) in seen_shapes:
                    continue
                seen_shapes.add(shape)
            parts: tuple[list[int], list[int], list[int]] = ([], [], [])
            for s in members:
                parts[weigh(s, w)].append(s)
            part_classes = [self.classes(frozenset(p)) if p else frozenset() for p in parts]
            worst = max(len(pc) for pc in part_classes)
            if worst >= len(cls):
                continue  # no progress on the worst branch
            if 3 ** (budget - 1) < worst:
                continue
            children: list[Optional[Node]] = []
            for p in parts:
                if not p:
                    children.append(None)
                    continue
                sub = self.solve(frozenset(p), budget - 1, depth + 1)
                if sub is None:
                    break
                children.append(sub)
            else:
                result = Internal(w, tuple(children))
                break
        if self.memoize:
            self.memo[key] = result
        return result


def solve(problem: SearchProblem, *, node_cap: Optional[int] = None,
          time_cap: Optional[float] = None, symmetry_filter: bool = True,
          memoize: bool = True, stats: Optional[SearchStats] = None,
          ) -> Optional[DecisionTree]:
    """Search for a tree solving ``problem``; ``None`` proves none exists.

    ``None`` is a proof of infeasibility under the problem's weighing
    policy; resource-cap violations raise :class:`BudgetExceeded` instead.
    """
    searcher = _Searcher(problem, node_cap, time_cap, symmetry_filter, memoize)
    root = searcher.solve(frozenset(problem.hypotheses.members), problem.depth_budget, 0)
    searcher.stats.elapsed = time.monotonic() - searcher.t0
    if stats is not None:
        stats.nodes_expanded = searcher.stats.nodes_expanded
        stats.memo_hits = searcher.stats.memo_hits
        stats.elapsed = searcher.stats.elapsed
    if root is None:
        return None
    return DecisionTree(problem.universe, root)


def _full_problem(n: int, semantics: Semantics, depth: int,
                  uniform_deadline: Optional[int] = None) -> SearchProblem:
    refs = semantics is Semantics.EXACT
    return SearchProblem(
        universe=n,
        hypotheses=HypothesisSet.all_sets(n, semantics),
        depth_budget=depth,
        policy=WeighingPolicy.for_universe(n, refs=refs),
        uniform_deadline=uniform_deadline,
    )


def min_weighings_exact(n: int, d_max: Optional[int] = None, **search_opts) -> int:
    """Least number of weighings identifying every fake set among ``n`` coins,
    reference coins available.  Exhaustive, so the answer is exact."""
    return _least_depth(n, Semantics.EXACT, d_max, **search_opts)


def min_weighings_sorting(n: int, d_max: Optional[int] = None, **search_opts) -> int:
    """Least number of weighings sorting ``n`` coins with no reference coins
    (the empty and full fake sets count as one uniform class)."""
    return _least_depth(n, Semantics.SORT_CLASSES, d_max, **search_opts)


def _least_depth(n: int, semantics: Semantics, d_max: Optional[int], **search_opts) -> int:
    if n < 1:
        raise ValueError("need at least one coin")
    if d_max is None:
        d_max = 2 * n + 1
    for d in range(0, d_max + 1):
        if solve(_full_problem(n, semantics, d), **search_opts) is not None:
            return d
    raise ValueError(f"no strategy of depth <= {d_max} exists for n={n}")


# ---------------------------------------------------------------------------
# Base strategies for small coin counts.
#
# Small instances are synthesised directly.  Larger ones are assembled the
# way the 11-coin bound generalises downward: a sorted n-coin strategy that
# detects uniformity one weighing early extends to n+1 coins with a single
# extra comparison against an already-classified coin, and the nine-coin
# strategy arises from the six-coin one by a three-coin extension
# (see composition.extend_with_three_coins).  Eleven coins use the shipped tables.
# ---------------------------------------------------------------------------

_DIRECT_SEARCH_MAX = 6

_base_cache: dict[tuple[int, Semantics], DecisionTree] = {}


def synthesize_base(n: int, semantics: Semantics = Semantics.SORT_CLASSES,
                    **search_opts) -> DecisionTree:
    """A strategy for ``n <= 11`` coins with at most ``ceil(7n/11)`` weighings.

    In sorting semantics the tree additionally isolates the uniform class one
    weighing early (not possible for ``n == 3``).  In exact semantics the
    uniform pair is split by a final coin-versus-reference weighing; for
    ``n == 3`` that costs a third weighing, the one case exceeding the bound.
    """
    if not 1 <= n <= 11:
        raise ValueError("base strategies cover 1..11 coins")
    key = (n, semantics)
    if key in _base_cache:
        return _base_cache[key]

    tree = _build_base(n, semantics, search_opts)
    _base_cache[key] = tree
    return tree


def _build_base(n: int, semantics: Semantics, search_opts) -> DecisionTree:
    budget = upper(n)
    if semantics is Semantics.EXACT:
        if n == 3:
            tree = solve(_full_problem(3, Semantics.EXACT, 3), **search_opts)
            assert tree is not None
            return tree
        return _split_uniform(synthesize_base(n, Semantics.SORT_CLASSES, **search_opts))

    deadline = None if n == 3 else budget - 1
    if n <= _DIRECT_SEARCH_MAX:
        tree = solve(_full_problem(n, semantics, budget, uniform_deadline=deadline),
                     **search_opts)
        if tree is None:
            raise ValueError(f"no depth-{budget} sorting strategy for n={n}")
        return tree
    if n in (7, 8, 10):
        return extend_by_one(synthesize_base(n - 1, semantics, **search_opts))
    if n == 9:
        from .composition import extend_with_three_coins

        base6 = synthesize_base(6, semantics, **search_opts)
        return extend_with_three_coins(base6, (7, 8, 9), semantics=semantics,
                             uniform_deadline=upper(9) - 1)
    # n == 11: the shipped seven-weighing tables
    from .strategies import packaged_tree

    return packaged_tree("alg1", semantics=semantics)


def extend_by_one(tree: DecisionTree) -> DecisionTree:
    """Extend a sorted-strategy tree to one more coin with one extra weighing.

    Every classified leaf gains a comparison of the new coin against a coin
    known to be in the lighter class there; the uniform leaf compares the
    new coin against any old coin, which either confirms uniformity or
    orients both classes at once.  Adds one to the depth and keeps the
    uniform class isolated one weighing before the end.
    """
    n = tree.universe
    new = n + 1
    full_old = (1 << n) - 1

    def rebuild(node: Optional[Node]) -> Optional[Node]:
        if node is None:
            return None
        if isinstance(node, Internal):
            return Internal(node.weighing, tuple(rebuild(c) for c in node.children))
        leaf = node.leaf
        if leaf.uniform:
            w = Weighing(Pan(frozenset({new})), Pan(frozenset({1})))
            return Internal(w, (
                LeafNode(UNIFORM_LEAF),                       # new coin matches the rest
                LeafNode(Leaf.classified(full_old)),          # new coin lighter: old coins heavy
                LeafNode(Leaf.classified(1 << (new - 1))),    # new coin is the lone heavy one
            ))
        s = leaf.fake_set
        light = next(c for c in range(1, n + 1) if not s >> (c - 1) & 1)
        w = Weighing(Pan(frozenset({new})), Pan(frozenset({light})))
        return Internal(w, (
            LeafNode(Leaf.classified(s)),                     # new coin light
            None,                                             # lighter than light: impossible
            LeafNode(Leaf.classified(s | 1 << (new - 1))),    # new coin heavy
        ))

    return DecisionTree(new, rebuild(tree.root))


def _split_uniform(tree: DecisionTree) -> DecisionTree:
    """Turn a sorting tree into an exact one by resolving the uniform pair.

    The uniform leaf becomes a weighing of coin 1 against one reference
    coin: balance means no coin is heavy, a heavier left pan means all are.
    """
    full = (1 << tree.universe) - 1

    def rebuild(node: Optional[Node]) -> Optional[Node]:
        if node is None:
            return None
        if isinstance(node, Internal):
            return Internal(node.weighing, tuple(rebuild(c) for c in node.children))
        if not node.leaf.uniform:
            return node
        w = Weighing(Pan(frozenset({1})), Pan(frozenset(), refs=1))
        return Internal(w, (
            LeafNode(Leaf.classified(0)),
            None,  # a coin cannot be lighter than a reference coin
            LeafNode(Leaf.classified(full)),
        ))

    return DecisionTree(tree.universe, rebuild(tree.root))
