"""Verify the three shipped 11-coin tables, then break one and repair it.

Each table claims to sort 11 coins of two possible weights in at most seven
weighings, detecting the all-same-weight case by the sixth.  The verifier
simply simulates all 2048 candidate fake sets, so a pass is a proof.
"""

from weighwright import Semantics, verify_tree
from weighwright.core import Leaf, encode_subset, run_strategy
from weighwright.strategies import (
    PACKAGED_TABLES,
    packaged_table,
    repair_tree_detailed,
    table_to_tree,
    tree_to_table,
)

print("=== exhaustive verification of the shipped tables ===")
for name in PACKAGED_TABLES:
    tree = table_to_tree(packaged_table(name))
    report = verify_tree(tree, Semantics.SORT_CLASSES, depth_budget=7)
    print(f"{name}: {report.summary()}")
    print(f"       classes at depth 6: at most {report.class_profile[6]}")

print()
print("=== mutate one answer row, watch the verifier catch it, repair ===")
tree = table_to_tree(packaged_table("alg1"))
victim = encode_subset({4, 9})
_, path, _ = run_strategy(tree, victim)
table = tree_to_table(tree, "mutant", Semantics.SORT_CLASSES)
table.outcomes[path] = Leaf.classified(victim ^ 1)  # claim the wrong set
broken = table_to_tree(table)

report = verify_tree(broken, Semantics.SORT_CLASSES)
print(f"after mutation: {report.summary()}")
for defect in report.defects:
    print(f"  defect at {defect.path}: {defect.detail}")

fixed, rebuilt = repair_tree_detailed(broken, report, budget=7,
                                      semantics=Semantics.SORT_CLASSES)
print(f"repair rebuilt {len(rebuilt)} subtree(s) "
      f"-> {verify_tree(fixed, Semantics.SORT_CLASSES).summary()}")
