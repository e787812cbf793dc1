"""Domain model for balance-weighing strategies over two-weight coin sets.

A *fake set* is the subset of coins belonging to the heavier weight class,
encoded as a bitmask: bit ``i - 1`` is set iff coin ``i`` is heavy.  A
*weighing* puts two disjoint coin sets on a balance, optionally padded with
known-normal reference coins so both pans hold the same number of objects.
Outcomes are ternary digits: ``0`` the pans balance, ``1`` the left pan is
lighter, ``2`` the left pan is heavier.

An adaptive strategy is a ternary decision tree: each internal node holds a
weighing and three children indexed by the outcome digit; leaves either name
the fake set exactly or declare the *uniform* class (all coins weigh the
same; the empty and the full fake set are indistinguishable without a
reference coin, so sorting-style strategies merge them).

Everything here is immutable and purely functional; simulation of a strategy
against a candidate fake set never mutates shared state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional, Union

BALANCED = 0
LEFT_LIGHTER = 1
LEFT_HEAVIER = 2

OUTCOME_DIGITS = (BALANCED, LEFT_LIGHTER, LEFT_HEAVIER)

#: Outcome digit <-> balance symbol, as presented to humans.
SYMBOL_OF_DIGIT = {BALANCED: "=", LEFT_LIGHTER: "<", LEFT_HEAVIER: ">"}
DIGIT_OF_SYMBOL = {v: k for k, v in SYMBOL_OF_DIGIT.items()}


class WeighError(Exception):
    """Base class for domain errors."""


class UnbalancedPans(WeighError):
    """A weighing whose pans hold different object counts was rejected.

    With an unknown weight gap the balance outcome of unequal pans is not a
    function of the fake set, so such weighings carry no reliable
    information and are not modelled.
    """


class MalformedTree(WeighError):
    """Strategy execution reached a missing child node."""


class Semantics(enum.Enum):
    """Hypothesis-space semantics of a strategy.

    EXACT: reference coins are available; all ``2**n`` fake sets are
    distinguishable, including the empty set versus the full set.

    SORT_CLASSES: no external reference coins; the empty and the full fake
    set produce identical outcomes under every legal weighing and are merged
    into a single *uniform* class, leaving ``2**n - 1`` classes.
    """

    EXACT = "exact"
    SORT_CLASSES = "sort"


def encode_subset(coins: Iterable[int]) -> int:
    """Encode a coin-id set as an integer: sum of ``2**(i - 1)``."""
    mask = 0
    for c in coins:
        if c < 1:
            raise ValueError(f"coin ids are 1-based, got {c}")
        mask |= 1 << (c - 1)
    return mask


def decode_subset(mask: int) -> frozenset[int]:
    """Inverse of :func:`encode_subset`."""
    if mask < 0:
        raise ValueError("fake-set mask must be non-negative")
    out = set()
    i = 1
    while mask:
        if mask & 1:
            out.add(i)
        mask >>= 1
        i += 1
    return frozenset(out)


@dataclass(frozen=True)
class Pan:
    """One side of a weighing: unknown coins plus reference-coin padding."""

    coins: frozenset[int] = frozenset()
    refs: int = 0

    def __post_init__(self) -> None:
        if self.refs < 0:
            raise ValueError("reference-coin count must be non-negative")
        if any(c < 1 for c in self.coins):
            raise ValueError("coin ids are 1-based")
        if not isinstance(self.coins, frozenset):
            object.__setattr__(self, "coins", frozenset(self.coins))

    @cached_property
    def mask(self) -> int:
        return encode_subset(self.coins)

    @property
    def size(self) -> int:
        return len(self.coins) + self.refs

    def describe(self) -> str:
        body = ",".join(str(c) for c in sorted(self.coins))
        if self.refs:
            body = ",".join(filter(None, [body] + ["ref"] * self.refs))
        return "{" + body + "}"


def pan(coins: Iterable[int] = (), refs: int = 0) -> Pan:
    return Pan(frozenset(coins), refs)


@dataclass(frozen=True)
class Weighing:
    """A balance comparison of two disjoint pans of equal total size.

    The weighing with two empty pans is the distinguished no-op: it always
    reports ``BALANCED`` and does not count toward a strategy's depth.
    Transcribed tables use it as a placeholder on paths that are already
    decided.
    """

    left: Pan
    right: Pan

    def __post_init__(self) -> None:
        if self.left.coins & self.right.coins:
            raise ValueError("pans must be disjoint")
        if self.left.size != self.right.size:
            raise UnbalancedPans(
                f"pan sizes differ: {self.left.describe()} vs {self.right.describe()}"
            )

    @property
    def is_noop(self) -> bool:
        return self.left.size == 0 and self.right.size == 0

    @property
    def coins(self) -> frozenset[int]:
        return self.left.coins | self.right.coins

    def describe(self) -> str:
        return f"{self.left.describe()}:{self.right.describe()}"


NOOP_WEIGHING = Weighing(Pan(), Pan())


def weighing(left: Iterable[int], right: Iterable[int], *, lrefs: int = 0, rrefs: int = 0) -> Weighing:
    return Weighing(pan(left, lrefs), pan(right, rrefs))


def weigh(fake_set: int, w: Weighing) -> int:
    """Outcome digit of ``w`` when exactly the coins in ``fake_set`` are heavy.

    Reference coins are known normal and contribute nothing; with pans of
    equal total size the heavier pan is simply the one holding more heavy
    coins.
    """
    lh = (fake_set & w.left.mask).bit_count()
    rh = (fake_set & w.right.mask).bit_count()
    if lh == rh:
        return BALANCED
    return LEFT_HEAVIER if lh > rh else LEFT_LIGHTER


@dataclass(frozen=True)
class Leaf:
    """Terminal claim of a strategy: an exact fake set, or the uniform class."""

    fake_set: Optional[int]
    uniform: bool = False

    def __post_init__(self) -> None:
        if self.uniform != (self.fake_set is None):
            raise ValueError("a leaf is either classified or uniform, not both")

    @classmethod
    def classified(cls, fake_set: int) -> "Leaf":
        return cls(fake_set=fake_set, uniform=False)

    def describe(self) -> str:
        if self.uniform:
            return "uniform"
        coins = sorted(decode_subset(self.fake_set))
        return "{" + ",".join(map(str, coins)) + "}"


UNIFORM_LEAF = Leaf(fake_set=None, uniform=True)


@dataclass(frozen=True)
class Internal:
    weighing: Weighing
    children: tuple[Optional["Node"], Optional["Node"], Optional["Node"]]


@dataclass(frozen=True)
class LeafNode:
    leaf: Leaf


Node = Union[Internal, LeafNode]


@dataclass(frozen=True)
class DecisionTree:
    """An adaptive weighing strategy over coins ``1..universe``."""

    universe: int
    root: Node

    def depth(self) -> int:
        """Maximum number of non-no-op weighings on any root-to-leaf path."""

        def walk(node: Optional[Node]) -> int:
            if node is None or isinstance(node, LeafNode):
                return 0
            step = 0 if node.weighing.is_noop else 1
            return step + max(walk(c) for c in node.children)

        return walk(self.root)

    def node_at(self, path: tuple[int, ...]) -> Optional[Node]:
        node: Optional[Node] = self.root
        for digit in path:
            if node is None or isinstance(node, LeafNode):
                return None
            node = node.children[digit]
        return node

    def iter_nodes(self) -> Iterator[tuple[tuple[int, ...], Node]]:
        stack: list[tuple[tuple[int, ...], Node]] = [((), self.root)]
        while stack:
            path, node = stack.pop()
            yield path, node
            if isinstance(node, Internal):
                for d in (2, 1, 0):
                    child = node.children[d]
                    if child is not None:
                        stack.append((path + (d,), child))


def run_strategy(tree: DecisionTree, fake_set: int) -> tuple[Leaf, tuple[int, ...], int]:
    """Execute ``tree`` against a candidate fake set.

    Returns ``(leaf, path, weighings_used)`` where ``path`` holds the outcome
    digit of every visited node (no-ops included, always 0) and
    ``weighings_used`` counts only non-no-op weighings.
    """
    if not 0 <= fake_set < (1 << tree.universe):
        raise ValueError(f"fake set {fake_set} outside universe of {tree.universe} coins")
    node = tree.root
    path: list[int] = []
    used = 0
    while isinstance(node, Internal):
        digit = weigh(fake_set, node.weighing)
        path.append(digit)
        if not node.weighing.is_noop:
            used += 1
        node = node.children[digit]
        if node is None:
            raise MalformedTree(f"missing child at path {tuple(path)}")
    return node.leaf, tuple(path), used


@dataclass(frozen=True)
class HypothesisSet:
    """Fake-set hypotheses still consistent with the observed outcomes."""

    members: frozenset[int]
    universe: int
    semantics: Semantics = Semantics.EXACT

    @classmethod
    def all_sets(cls, universe: int, semantics: Semantics = Semantics.EXACT) -> "HypothesisSet":
        return cls(frozenset(range(1 << universe)), universe, semantics)

    @property
    def full_mask(self) -> int:
        return (1 << self.universe) - 1

    def classes(self) -> frozenset[int]:
        """Distinguishable classes; the uniform class is keyed as ``-1``."""
        if self.semantics is Semantics.EXACT:
            return frozenset(self.members)
        full = self.full_mask
        return frozenset(-1 if s in (0, full) else s for s in self.members)

    def class_count(self) -> int:
        return len(self.classes())

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)


def refine(h: HypothesisSet, w: Weighing, outcome: int) -> HypothesisSet:
    """Keep the hypotheses for which ``w`` would report ``outcome``.

    An empty result is legal and signals an inconsistent outcome history
    to the caller.
    """
    if outcome not in OUTCOME_DIGITS:
        raise ValueError(f"outcome digit must be 0, 1 or 2, got {outcome}")
    kept = frozenset(s for s in h.members if weigh(s, w) == outcome)
    return HypothesisSet(kept, h.universe, h.semantics)


def complement(fake_set: int, universe: int) -> int:
    return ~fake_set & ((1 << universe) - 1)
