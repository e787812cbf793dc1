"""Composing verified building blocks into full n-coin weighing plans.

The shipped 11-coin tables cost 7 weighings each, so splitting ``n`` coins
into blocks of 11 plus a remainder of ``r`` coins costs ``7m + ceil(7r/11)``
weighings, within ``ceil(7n/11)`` except when ``r == 3``, where the naive
split would overshoot by one.  That case is rescued by the three-coin
extension (:func:`extend_with_three_coins`): run a depth-``k`` block strategy for only
``k - 1`` weighings, read off the at-most-three still-consistent answers,
and finish the block answer *together with* the three extra coins in three
more weighings, for ``k + 2`` total.

The finishing sub-strategies hinge on encoding the three candidate block
answers into one or two designated coins (picking elements of the symmetric
differences between the candidate sets), then exhaustively searching a
three-weighing strategy over the designated coins, the three new coins, and
whatever known-weight make-weight coins the situation offers.  One case,
candidate answers nested as X < Y < Z, provably needs a known-normal coin
on the pan, which sorting-style plans borrow from an already-classified
block.

Also here: the paired-coins strategy (11 pairs, each one fake and one
normal, resolved in 7 weighings) and the plan runner that executes a
composite plan weighing by weighing, including the cross-block
reconciliation a sorting plan needs when a whole block turns out uniform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

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
    decode_subset,
    encode_subset,
    refine,
    weigh,
)


class PreconditionViolated(Exception):
    """A cut node holds more than three consistent classes."""


class FinisherInfeasible(Exception):
    """No three-weighing finisher exists for a cut node's situation."""


class ContradictoryOutcome(Exception):
    """An observed outcome is impossible for every remaining hypothesis."""


UNIFORM_RESULT = "uniform"


@dataclass(frozen=True)
class FinisherCase:
    """How one cut node's residual ambiguity was finished off."""

    kind: str  # answer-settled | single-marker | markers-exclusive |
    #            markers-joint | markers-nested | markers-chain
    path: tuple[int, ...]
    designated: tuple[int, ...]
    needs_ref: bool
    finisher: DecisionTree


# ---------------------------------------------------------------------------
# The k+2 extension
# ---------------------------------------------------------------------------


def extend_with_three_coins(tree: DecisionTree, extra: Sequence[int],
                            semantics: Semantics = Semantics.EXACT,
                            uniform_deadline: Optional[int] = None,
                            allow_external_ref: bool = False,
                            cases_out: Optional[list[FinisherCase]] = None,
                            ) -> DecisionTree:
    """Extend a depth-``k`` strategy over ``A`` to ``A`` plus three coins,
    within ``k + 2`` weighings.

    ``extra`` must be the three coin ids directly above the tree's universe.
    Every node at weighing depth ``k - 1`` must have at most three consistent
    classes (:class:`PreconditionViolated` otherwise).  With
    ``allow_external_ref`` a sorting-semantics finisher that needs a
    known-normal make-weight may use reference slots, to be filled at run
    time from an already-classified block.
    """
    a = tree.universe
    b = tuple(sorted(extra))
    if b != (a + 1, a + 2, a + 3):
        raise ValueError(f"extra coins must be {a + 1}..{a + 3}, got {extra}")
    k = tree.depth()
    if k < 1:
        raise ValueError("cannot extend an empty strategy")
    new_universe = a + 3
    builder = _FinisherBuilder(tree.universe, new_universe, b, semantics,
                               uniform_deadline, allow_external_ref, cases_out)

    def walk(node: Optional[Node], path: tuple[int, ...],
             h: HypothesisSet, used: int) -> Optional[Node]:
        if node is None or not h.members:
            return None
        at_cut = used == k - 1 or isinstance(node, LeafNode)
        if at_cut:
            return builder.build(path, h, used)
        assert isinstance(node, Internal)
        children = []
        for digit in (0, 1, 2):
            child = node.children[digit]
            h2 = refine(h, node.weighing, digit)
            children.append(walk(child, path + (digit,), h2,
                                 used + (0 if node.weighing.is_noop else 1)))
        return Internal(node.weighing, tuple(children))

    h0 = HypothesisSet.all_sets(a, semantics)
    root = walk(tree.root, (), h0, 0)
    return DecisionTree(new_universe, root)


class _FinisherBuilder:
    """Synthesises and caches the three-weighing finishers for cut nodes."""

    def __init__(self, old_universe: int, new_universe: int, b: tuple[int, ...],
                 semantics: Semantics, uniform_deadline: Optional[int],
                 allow_external_ref: bool, cases_out: Optional[list]):
        self.a = old_universe
        self.universe = new_universe
        self.b = b
        self.semantics = semantics
        self.uniform_deadline = uniform_deadline
        self.allow_external_ref = allow_external_ref
        self.cases_out = cases_out
        self.full_a = (1 << old_universe) - 1
        self._memo: dict = {}

    def build(self, path: tuple[int, ...], h: HypothesisSet, used: int) -> Node:
        classes = h.classes()
        if len(classes) > 3:
            raise PreconditionViolated(
                f"{len(classes)} classes remain at {path}; at most 3 allowed")
        kind, designated, class_patterns, needs_ref = self._analyse(classes)
        deadline = None
        if self.uniform_deadline is not None and -1 in classes:
            deadline = self.uniform_deadline - used
        slot_tree, slots = self._solve_slots(kind, designated, class_patterns,
                                             needs_ref, deadline, path)
        node = self._instantiate(slot_tree.root, slots, class_patterns)
        if self.cases_out is not None:
            self.cases_out.append(FinisherCase(
                kind, path, designated, needs_ref,
                DecisionTree(self.universe, node)))
        return node

    # -- case analysis ------------------------------------------------------

    def _analyse(self, classes: frozenset[int]):
        """Pick the designated coins and the per-class heavy patterns.

        Returns ``(kind, designated, {class: pattern}, needs_ref)`` where each
        pattern is a bit tuple over the designated coins (the uniform class
        maps to the two constant patterns).
        """
        if -1 in classes and len(classes) > 1:
            # a strategy that isolates uniformity a weighing early never
            # leaves the uniform class sharing a cut node with other classes
            raise FinisherInfeasible(
                "uniform class shares the cut node with other classes")
        if classes == frozenset({-1}):
            pool = (1, 2, 3)  # any three block coins; all alike here
            return "answer-settled", pool, {-1: None}, False
        masks = sorted(classes)
        if len(masks) == 1:
            return "answer-settled", (), {masks[0]: ()}, False
        sets = {m: decode_subset(m) for m in masks}
        if len(masks) == 2:
            x_mask, y_mask = masks
            diff = sets[x_mask] - sets[y_mask]
            if diff:
                x = min(diff)
                patterns = {x_mask: (1,), y_mask: (0,)}
            else:
                x = min(sets[y_mask] - sets[x_mask])
                patterns = {x_mask: (0,), y_mask: (1,)}
            return "single-marker", (x,), patterns, False
        return self._analyse_triple(masks, sets)

    def _analyse_triple(self, masks, sets):
        from itertools import permutations

        for xm, ym, zm in permutations(masks):
            X, Y, Z = sets[xm], sets[ym], sets[zm]
            if not X <= (Y | Z) and not Y <= (X | Z):
                x = min(X - (Y | Z))
                y = min(Y - (X | Z))
                return ("markers-exclusive", (x, y),
                        {xm: (1, 0), ym: (0, 1), zm: (0, 0)}, False)
        for xm, ym, zm in permutations(masks):
            X, Y, Z = sets[xm], sets[ym], sets[zm]
            if not (X <= (Y | Z) and Y <= (X | Z)):
                continue
            zx, zy = Z & X, Z & Y
            if not zx <= zy and not zy <= zx:
                x = min(zx - zy)
                y = min(zy - zx)
                return ("markers-joint", (x, y),
                        {xm: (1, 0), ym: (0, 1), zm: (1, 1)}, False)
            if zx < zy:
                if not X <= zy:
                    x = min(X - zy)
                    z = min(zy - X)
                    return ("markers-nested", (x, z),
                            {xm: (1, 0), ym: (1, 1), zm: (0, 1)}, False)
                # X <= Z&Y forces the nested chain X < Y < Z
                y = min(Y - X)
                z = min(Z - Y)
                return ("markers-chain", (y, z),
                        {xm: (0, 0), ym: (1, 0), zm: (1, 1)}, True)
        raise FinisherInfeasible(f"no designated-coin encoding for {masks}")

    # -- slot problems -------------------------------------------------------

    def _solve_slots(self, kind, designated, class_patterns, needs_ref,
                     deadline, path):
        """Search the finisher in an abstract slot space and cache it.

        Slots: designated (or pool) coins first, then known-weight
        make-weights, then the three new coins.  The hypothesis masks over
        slots fully determine the problem, so structurally identical cut
        nodes share one search.
        """
        from .search import SearchProblem, WeighingPolicy, solve

        uniform_case = kind == "answer-settled" and -1 in class_patterns
        lights: tuple[int, ...] = ()
        heavies: tuple[int, ...] = ()
        use_refs = self.semantics is Semantics.EXACT
        if not use_refs and not uniform_case:
            union = frozenset().union(*(decode_subset(m) for m in class_patterns))
            inter = frozenset(range(1, self.a + 1))
            for m in class_patterns:
                inter &= decode_subset(m)
            all_coins = frozenset(range(1, self.a + 1))
            lights = tuple(sorted(all_coins - union))[:3]
            heavies = tuple(sorted(inter))[:3]
            if needs_ref and not lights and not heavies:
                if not self.allow_external_ref:
                    raise FinisherInfeasible(
                        f"nested case at {path} needs a known coin and none exists")
                use_refs = True

        slots = list(designated) + list(lights) + list(heavies) + list(self.b)
        n_slots = len(slots)
        n_designated = len(designated)
        light_bits = [1 if c in heavies else 0 for c in list(lights) + list(heavies)]

        members = set()
        slot_semantics = Semantics.EXACT
        for cls, pattern in class_patterns.items():
            if pattern is None:  # uniform class: both constant pool patterns
                base_patterns = [(0,) * n_designated, (1,) * n_designated]
                slot_semantics = Semantics.SORT_CLASSES
            else:
                base_patterns = [tuple(pattern)]
            for bp in base_patterns:
                fixed = list(bp) + light_bits
                for sb in range(8):
                    mask = 0
                    for i, bit in enumerate(fixed):
                        mask |= bit << i
                    for j in range(3):
                        mask |= ((sb >> j) & 1) << (len(fixed) + j)
                    members.add(mask)

        key = (frozenset(members), n_slots, slot_semantics, use_refs, deadline)
        if key in self._memo:
            slot_tree = self._memo[key]
        else:
            problem = SearchProblem(
                universe=n_slots,
                hypotheses=HypothesisSet(frozenset(members), n_slots, slot_semantics),
                depth_budget=3,
                policy=WeighingPolicy.for_universe(n_slots, refs=use_refs),
                uniform_deadline=deadline,
            )
            slot_tree = solve(problem)
            if slot_tree is None:
                raise FinisherInfeasible(f"no 3-weighing finisher at {path}")
            self._memo[key] = slot_tree
        return slot_tree, slots

    # -- slot tree -> real coins ---------------------------------------------

    def _instantiate(self, node: Optional[Node], slots: list[int],
                     class_patterns: dict) -> Optional[Node]:
        if node is None:
            return None
        if isinstance(node, Internal):
            w = node.weighing
            real = Weighing(
                Pan(frozenset(slots[c - 1] for c in w.left.coins), w.left.refs),
                Pan(frozenset(slots[c - 1] for c in w.right.coins), w.right.refs),
            )
            return Internal(real, tuple(
                self._instantiate(ch, slots, class_patterns) for ch in node.children))
        leaf = node.leaf
        if leaf.uniform:
            return LeafNode(UNIFORM_LEAF)
        slot_mask = leaf.fake_set
        n_designated = len(next(p for p in class_patterns.values() if p is not None)
                           ) if any(p is not None for p in class_patterns.values()) else 3
        pattern = tuple((slot_mask >> i) & 1 for i in range(n_designated))
        a_mask = None
        for cls, pat in class_patterns.items():
            if pat is None:  # uniform pool: constant patterns pick empty/full
                if pattern == (0,) * n_designated:
                    a_mask = 0
                elif pattern == (1,) * n_designated:
                    a_mask = self.full_a
            elif tuple(pat) == pattern:
                a_mask = cls
        if a_mask is None:
            raise FinisherInfeasible(f"finisher leaf pattern {pattern} matches no class")
        b_bits = 0
        base = len(slots) - 3
        for j in range(3):
            if (slot_mask >> (base + j)) & 1:
                b_bits |= 1 << (self.b[j] - 1)
        return LeafNode(Leaf.classified(a_mask | b_bits))


# ---------------------------------------------------------------------------
# Composite plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlanStep:
    coins: tuple[int, ...]  # global ids; local coin i is coins[i - 1]
    tree: DecisionTree
    label: str
    weighings: int


@dataclass(frozen=True)
class SpliceInfo:
    block_index: int
    extra_coins: tuple[int, ...]
    case_counts: dict
    external_ref: bool


@dataclass(frozen=True)
class CompositePlan:
    n: int
    semantics: Semantics
    blocks: tuple[tuple[int, ...], ...]
    remainder: tuple[int, ...]
    splice: Optional[SpliceInfo]
    steps: tuple[PlanStep, ...]
    total_weighings: int

    @property
    def bound(self) -> int:
        return upper(self.n)

    def describe(self) -> str:
        lines = [
            f"plan for {self.n} coins ({self.semantics.value} semantics): "
            f"{self.total_weighings} weighings (bound {self.bound})"
            + ("; exceeds the bound (the documented 3-coin exception)"
               if self.total_weighings > self.bound else "")
        ]
        for i, step in enumerate(self.steps, 1):
            ids = _span(step.coins)
            lines.append(f"  step {i}: coins {ids}: {step.label}, "
                         f"<= {step.weighings} weighings")
        if self.splice:
            cases = ", ".join(f"{k}: {v}" for k, v in sorted(self.splice.case_counts.items()))
            lines.append(f"  splice on block {self.splice.block_index + 1} "
                         f"absorbs coins {_span(self.splice.extra_coins)} ({cases})")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "semantics": self.semantics.value,
            "blocks": [list(b) for b in self.blocks],
            "remainder": list(self.remainder),
            "splice": None if self.splice is None else {
                "block_index": self.splice.block_index,
                "extra_coins": list(self.splice.extra_coins),
                "case_counts": dict(self.splice.case_counts),
                "external_ref": self.splice.external_ref,
            },
            "steps": [
                {"coins": list(s.coins), "strategy": s.label, "weighings": s.weighings}
                for s in self.steps
            ],
            "total_weighings": self.total_weighings,
            "bound": self.bound,
        }


def _span(ids: Sequence[int]) -> str:
    ids = sorted(ids)
    if len(ids) > 2 and ids == list(range(ids[0], ids[-1] + 1)):
        return f"{ids[0]}..{ids[-1]}"
    return "{" + ",".join(map(str, ids)) + "}"


def _block_tree(semantics: Semantics) -> DecisionTree:
    from .strategies import packaged_tree

    return packaged_tree("alg1", semantics=semantics)


_splice_cache: dict[Semantics, tuple[DecisionTree, list[FinisherCase]]] = {}


def _spliced_tree(semantics: Semantics) -> tuple[DecisionTree, list[FinisherCase]]:
    if semantics not in _splice_cache:
        cases: list[FinisherCase] = []
        deadline = upper(14) - 1 if semantics is Semantics.SORT_CLASSES else None
        tree = extend_with_three_coins(_block_tree(semantics), (12, 13, 14), semantics,
                             uniform_deadline=deadline, cases_out=cases)
        _splice_cache[semantics] = (tree, cases)
    return _splice_cache[semantics]


def plan(n: int, semantics: Semantics = Semantics.EXACT) -> CompositePlan:
    """Partition ``n`` coins into 11-coin blocks plus a remainder and attach
    strategies totalling at most ``ceil(7n/11)`` weighings.

    A remainder of exactly three coins is absorbed into the last block by
    the three-coin extension (two extra weighings instead of three).  The
    lone exception is ``n == 3`` in exact semantics, which needs 3 weighings
    against a bound of 2.
    """
    if n < 1:
        raise ValueError("need at least one coin")
    from .search import synthesize_base

    m, r = divmod(n, 11)
    spliced = r == 3 and m >= 1
    blocks = tuple(tuple(range(11 * i + 1, 11 * i + 12)) for i in range(m))
    remainder = tuple(range(11 * m + 1, n + 1))
    steps: list[PlanStep] = []
    splice_info = None

    plain_blocks = m - 1 if spliced else m
    for i in range(plain_blocks):
        steps.append(PlanStep(blocks[i], _block_tree(semantics), "table:alg1", 7))
    if spliced:
        tree, cases = _spliced_tree(semantics)
        counts: dict[str, int] = {}
        for c in cases:
            counts[c.kind] = counts.get(c.kind, 0) + 1
        external = any(c.needs_ref and _uses_refs(c.finisher) for c in cases)
        coins = blocks[-1] + remainder
        steps.append(PlanStep(coins, tree, "splice:alg1+3", 9))
        splice_info = SpliceInfo(m - 1, remainder, counts, external)
    elif r:
        tree = synthesize_base(r, semantics)
        if semantics is Semantics.EXACT or m == 0:
            budget = tree.depth()
        else:
            # reserve the freed slot for reconciling a uniform remainder
            budget = max(upper(r), tree.depth())
        steps.append(PlanStep(remainder, tree, f"base:{r}", budget))

    total = sum(s.weighings for s in steps)
    return CompositePlan(
        n=n,
        semantics=semantics,
        blocks=blocks,
        remainder=remainder,
        splice=splice_info,
        steps=tuple(steps),
        total_weighings=total,
    )


def _uses_refs(tree: DecisionTree) -> bool:
    return any(
        isinstance(node, Internal)
        and (node.weighing.left.refs or node.weighing.right.refs)
        for _, node in tree.iter_nodes()
    )


# ---------------------------------------------------------------------------
# Plan execution
# ---------------------------------------------------------------------------


_profile_cache: dict[int, tuple[DecisionTree, dict]] = {}


def _tree_profile(tree: DecisionTree, semantics: Semantics) -> dict[tuple[int, ...], tuple[int, int]]:
    """Per-prefix ``(class_count, sole_class)`` map from one exhaustive pass.

    ``sole_class`` is meaningful only when the count is 1 (``-1`` denotes the
    uniform class).  Prefixes absent from the map are reachable by no
    hypothesis at all, which is how the runner detects contradictory
    outcome histories in O(1).
    """
    key = id(tree)
    cached = _profile_cache.get(key)
    if cached is not None and cached[0] is tree:
        return cached[1]
    from .core import run_strategy

    full = (1 << tree.universe) - 1
    classes_at: dict[tuple[int, ...], set[int]] = {}
    for s in range(1 << tree.universe):
        _, path, _ = run_strategy(tree, s)
        cls = -1 if (semantics is Semantics.SORT_CLASSES and s in (0, full)) else s
        for i in range(len(path) + 1):
            classes_at.setdefault(path[:i], set()).add(cls)
    profile = {p: (len(c), next(iter(c))) for p, c in classes_at.items()}
    _profile_cache[key] = (tree, profile)
    return profile


@dataclass
class _StepState:
    step: PlanStep
    node: Node
    path: tuple[int, ...]
    profile: dict
    result: Union[int, str, None] = None  # local mask, "uniform", or unfinished


class PlanRunner:
    """Executes a composite plan one weighing at a time.

    Presents each weighing in global coin ids, consumes outcome digits,
    stops each block early once a single class remains, and in sorting
    semantics reconciles blocks that came out uniform against coins
    classified elsewhere, or against each other when everything looks
    uniform so far.  Rejects outcomes no remaining hypothesis can produce.
    """

    def __init__(self, plan_: CompositePlan):
        self.plan = plan_
        self.semantics = plan_.semantics
        self._steps = [
            _StepState(step, step.tree.root, (),
                       _tree_profile(step.tree, plan_.semantics))
            for step in plan_.steps
        ]
        self._index = 0
        self.history: list[tuple[Weighing, int]] = []
        self.weighings_used = 0
        # sorting-mode reconciliation state
        self._oriented: dict[int, bool] = {}  # global id -> is heavy
        self._pools: list[tuple[tuple[int, ...], ...]] = []  # groups known同 class
        self._pending: Optional[tuple] = None
        self._recon_queue: list = []
        self._uniform_all = False
        self._done = False
        self._advance()

    # -- public surface ------------------------------------------------------

    @property
    def done(self) -> bool:
        return self._done

    def next_weighing(self) -> Optional[Weighing]:
        """The weighing to perform next, in global coin ids; None when done."""
        if self._done:
            return None
        return self._current_weighing()

    def submit(self, digit: int) -> None:
        """Record the outcome of the pending weighing and advance."""
        if self._done:
            raise ValueError("plan already finished")
        if digit not in (0, 1, 2):
            raise ValueError("outcome digit must be 0, 1 or 2")
        if self._index < len(self._steps):
            self._submit_step(digit)
        else:
            self._submit_reconciliation(digit)
        self._advance()

    def result(self) -> Union[frozenset, str, None]:
        """Global heavy-coin set, or "uniform", once the plan is finished."""
        if not self._done:
            return None
        if self._uniform_all:
            return UNIFORM_RESULT
        return frozenset(c for c, heavy in self._oriented.items() if heavy)

    # -- step execution --------------------------------------------------------

    def _current_weighing(self) -> Weighing:
        if self._index < len(self._steps):
            st = self._steps[self._index]
            assert isinstance(st.node, Internal)
            return self._globalise(st.node.weighing, st.step.coins)
        kind = self._recon_queue[0][0]
        if kind == "anchor":
            _, pool, light = self._recon_queue[0]
            return Weighing(Pan(frozenset({pool[0][0]})), Pan(frozenset({light})))
        _, pool_a, pool_b = self._recon_queue[0]
        return Weighing(Pan(frozenset({pool_a[0][0]})), Pan(frozenset({pool_b[0][0]})))

    def _globalise(self, w: Weighing, coins: tuple[int, ...]) -> Weighing:
        def map_pan(p: Pan) -> Pan:
            mapped = frozenset(coins[c - 1] for c in p.coins)
            if p.refs and self.semantics is Semantics.SORT_CLASSES:
                lights = self._known_lights(p.refs, exclude=mapped)
                return Pan(mapped | lights, 0)
            return Pan(mapped, p.refs)

        return Weighing(map_pan(w.left), map_pan(w.right))

    def _known_lights(self, count: int, exclude: frozenset) -> frozenset:
        lights = [c for c, heavy in sorted(self._oriented.items())
                  if not heavy and c not in exclude]
        if len(lights) < count:
            raise FinisherInfeasible(
                "a finisher needs known-normal coins before any block classified them")
        return frozenset(lights[:count])

    def _submit_step(self, digit: int) -> None:
        st = self._steps[self._index]
        assert isinstance(st.node, Internal)
        w = st.node.weighing
        new_path = st.path + (digit,)
        if new_path not in st.profile:
            raise ContradictoryOutcome(
                "that outcome is impossible given the earlier ones; "
                "re-check the weighing")
        child = st.node.children[digit]
        if child is None:
            raise ContradictoryOutcome("strategy has no continuation for that outcome")
        self.history.append((self._globalise(w, st.step.coins), digit))
        if not w.is_noop:
            self.weighings_used += 1
        st.path = new_path
        st.node = child

    def _submit_reconciliation(self, digit: int) -> None:
        entry = self._recon_queue[0]
        if entry[0] == "anchor" and digit == 1:
            raise ContradictoryOutcome(
                "a coin cannot be lighter than a known-normal coin")
        self._recon_queue.pop(0)
        self.history.append((self._current_weighing_for(entry), digit))
        self.weighings_used += 1
        if entry[0] == "anchor":
            _, pool, light = entry
            heavy = digit == 2
            for group in pool:
                for c in group:
                    self._oriented[c] = heavy
        else:
            _, pool_a, pool_b = entry
            if digit == 0:
                self._pools.append(pool_a + pool_b)  # still one indistinct pool
            else:
                heavy_pool, light_pool = (pool_a, pool_b) if digit == 2 else (pool_b, pool_a)
                for group in heavy_pool:
                    for c in group:
                        self._oriented[c] = True
                for group in light_pool:
                    for c in group:
                        self._oriented[c] = False

    def _current_weighing_for(self, entry) -> Weighing:
        if entry[0] == "anchor":
            _, pool, light = entry
            return Weighing(Pan(frozenset({pool[0][0]})), Pan(frozenset({light})))
        _, pool_a, pool_b = entry
        return Weighing(Pan(frozenset({pool_a[0][0]})), Pan(frozenset({pool_b[0][0]})))

    # -- control ----------------------------------------------------------------

    def _advance(self) -> None:
        while self._index < len(self._steps):
            st = self._steps[self._index]
            count, sole = st.profile[st.path]
            if count == 1:
                st.result = sole
                self._finish_step(st)
                self._index += 1
                continue
            if isinstance(st.node, LeafNode):
                leaf = st.node.leaf
                st.result = -1 if leaf.uniform else leaf.fake_set
                self._finish_step(st)
                self._index += 1
                continue
            if st.node.weighing.is_noop:
                if st.node.children[0] is None:
                    raise ContradictoryOutcome("strategy dead-ends at a placeholder")
                st.path = st.path + (0,)
                st.node = st.node.children[0]
                continue
            return  # awaiting an outcome
        if self._recon_queue:
            return
        self._plan_reconciliation()
        if self._recon_queue:
            return
        self._finalise()

    def _finish_step(self, st: _StepState) -> None:
        result = st.result
        if result == -1 or result is None:
            self._pools.append((st.step.coins,))
            return
        for local, c in enumerate(st.step.coins, start=1):
            self._oriented[c] = bool(result >> (local - 1) & 1)

    def _plan_reconciliation(self) -> None:
        if self.semantics is Semantics.EXACT:
            assert not self._pools, "exact strategies resolve every block"
            return
        if not self._pools:
            return
        lights = [c for c, heavy in sorted(self._oriented.items()) if not heavy]
        if lights:
            for pool in self._pools:
                self._recon_queue.append(("anchor", pool, lights[0]))
            self._pools = []
        elif len(self._pools) >= 2:
            a = self._pools.pop(0)
            bpool = self._pools.pop(0)
            self._recon_queue.append(("cross", a, bpool))
        # exactly one pool and no oriented coins: everything is uniform

    def _finalise(self) -> None:
        if self._pools:
            total = sum(len(g) for pool in self._pools for g in pool)
            assert total == self.plan.n, "a pool survived alongside oriented coins"
            self._uniform_all = True
        self._done = True


def run_plan(plan_: CompositePlan, fake_set: int) -> Union[frozenset, str]:
    """Simulate a plan against ground truth; returns the runner's verdict."""
    runner = PlanRunner(plan_)
    while not runner.done:
        w = runner.next_weighing()
        runner.submit(weigh(fake_set, w))
    return runner.result()


def check_plan(plan_: CompositePlan, fake_set: int) -> bool:
    """True when the plan classifies ``fake_set`` correctly."""
    verdict = run_plan(plan_, fake_set)
    full = (1 << plan_.n) - 1
    if plan_.semantics is Semantics.SORT_CLASSES and fake_set in (0, full):
        return verdict == UNIFORM_RESULT
    return verdict == decode_subset(fake_set)


# ---------------------------------------------------------------------------
# Paired coins
# ---------------------------------------------------------------------------


def paired_coins_tree(pairs: Sequence[tuple[int, int]]) -> DecisionTree:
    """Find the fake in each of 11 pairs (one fake, one normal) in 7 weighings.

    Runs an 11-coin sorting strategy on one representative per pair: if two
    weight classes show up, every pair is decided by its representative; if
    the representatives look uniform (known by the sixth weighing), the
    seventh weighing compares one representative against its own partner,
    which cannot balance, and orients everything at once.
    """
    from .strategies import packaged_tree

    if len(pairs) != 11:
        raise ValueError("exactly 11 pairs required")
    ids = [c for p in pairs for c in p]
    if len(set(ids)) != 22:
        raise ValueError("pair coin ids must be distinct")
    reps = [p[0] for p in pairs]
    partners = [p[1] for p in pairs]
    universe = max(ids)
    base = packaged_tree("alg1", semantics=Semantics.SORT_CLASSES)

    def global_mask(rep_mask: int) -> int:
        mask = 0
        for i in range(11):
            fake = reps[i] if rep_mask >> i & 1 else partners[i]
            mask |= 1 << (fake - 1)
        return mask

    def rebuild(node: Optional[Node]) -> Optional[Node]:
        if node is None:
            return None
        if isinstance(node, Internal):
            w = node.weighing
            real = Weighing(
                Pan(frozenset(reps[c - 1] for c in w.left.coins), w.left.refs),
                Pan(frozenset(reps[c - 1] for c in w.right.coins), w.right.refs),
            )
            return Internal(real, tuple(rebuild(ch) for ch in node.children))
        leaf = node.leaf
        if not leaf.uniform:
            return LeafNode(Leaf.classified(global_mask(leaf.fake_set)))
        tie_break = Weighing(Pan(frozenset({reps[0]})), Pan(frozenset({partners[0]})))
        return Internal(tie_break, (
            None,  # a pair never balances: one coin of each pair is fake
            LeafNode(Leaf.classified(global_mask(0))),          # representative light
            LeafNode(Leaf.classified(global_mask((1 << 11) - 1))),  # representative heavy
        ))

    return DecisionTree(universe, rebuild(base.root))


def pair_orientation_mask(pairs: Sequence[tuple[int, int]], rep_mask: int) -> int:
    """Global fake set when ``rep_mask`` says which representatives are fake."""
    mask = 0
    for i, (rep, partner) in enumerate(pairs):
        fake = rep if rep_mask >> i & 1 else partner
        mask |= 1 << (fake - 1)
    return mask
