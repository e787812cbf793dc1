"""Exact bounds at scale, and the paired-coins strategy.

Lower bounds come from counting distinguishable answers against ternary
outcomes, computed with exact integers only (the float version of
ceil(n*log3(2)) goes wrong near integer boundaries).  The paired-coins
strategy sorts 11 fake/normal pairs in seven weighings by running the
11-coin table on one representative per pair.
"""

import time

from weighwright import bounds_rows, format_rows, upper
from weighwright.bounds import sweep_lower_bound_exact
from weighwright.composition import paired_coins_tree, pair_orientation_mask
from weighwright.core import decode_subset, run_strategy

print(format_rows(bounds_rows(1, 30)))

print()
t0 = time.perf_counter()
worst_gap = max(upper(n) - k for n, k in sweep_lower_bound_exact(1_000_000))
print(f"sandwich check to n = 10^6: lower_bound_exact <= upper everywhere "
      f"(max gap {worst_gap}) in {time.perf_counter() - t0:.1f}s")

print()
print("=== 11 coin pairs, each one fake and one normal ===")
pairs = tuple((i, 11 + i) for i in range(1, 12))
tree = paired_coins_tree(pairs)
worst = 0
for rep_mask in range(1 << 11):
    truth = pair_orientation_mask(pairs, rep_mask)
    leaf, _, used = run_strategy(tree, truth)
    assert leaf.fake_set == truth
    worst = max(worst, used)
print(f"all 2048 orientations classified, at most {worst} weighings")

example = pair_orientation_mask(pairs, 0b00000011111)
leaf, _, used = run_strategy(tree, example)
print(f"example: representatives of pairs 1..5 fake -> fakes "
      f"{sorted(decode_subset(leaf.fake_set))} in {used} weighings")
