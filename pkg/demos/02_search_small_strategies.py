"""Synthesise provably optimal strategies for small coin counts.

Two settings: with extra known-normal reference coins every one of the 2^n
fake sets must be named (g); with no references the all-normal and all-fake
cases are indistinguishable and merge into one "uniform" answer.

The famous anomaly: three coins with references need three weighings even
though the information bound allows two; the search proves it by
exhausting every depth-2 strategy.
"""

from weighwright import (
    HypothesisSet,
    SearchProblem,
    Semantics,
    WeighingPolicy,
    min_weighings_exact,
    min_weighings_sorting,
    solve,
    upper,
)
from weighwright.core import Internal, LeafNode
from weighwright.strategies import verify_tree

print("n      with refs  sorting  ceil(7n/11)")
for n in range(1, 7):
    print(f"{n:<6} {min_weighings_exact(n):<10} {min_weighings_sorting(n):<8} {upper(n)}")

print()
print("=== the three-coin anomaly, proven ===")
problem = SearchProblem(
    universe=3,
    hypotheses=HypothesisSet.all_sets(3, Semantics.EXACT),
    depth_budget=2,
    policy=WeighingPolicy.for_universe(3, refs=True),
)
assert solve(problem) is None
print("depth 2 with references: infeasible (exhaustive proof), "
      "despite 8 hypotheses <= 9 outcomes")

print()
print("=== a two-weighing sort of three coins, printed ===")
tree = solve(SearchProblem(
    universe=3,
    hypotheses=HypothesisSet.all_sets(3, Semantics.SORT_CLASSES),
    depth_budget=2,
    policy=WeighingPolicy.for_universe(3, refs=False),
))
assert verify_tree(tree, Semantics.SORT_CLASSES).ok


def show(node, indent=""):
    if node is None:
        return
    if isinstance(node, LeafNode):
        print(f"{indent}-> {node.leaf.describe()}")
        return
    print(f"{indent}weigh {node.weighing.describe()}")
    for symbol, child in zip("=<>", node.children):
        if child is not None:
            print(f"{indent}  on {symbol}:")
            show(child, indent + "    ")


show(tree.root)
