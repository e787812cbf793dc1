"""Compose weighing plans for many coins and watch one run end to end.

Blocks of 11 coins take 7 weighings each; a remainder of exactly three
coins would overshoot the ceil(7n/11) budget by one, so it is absorbed
into the last block: run that block's strategy for six weighings only,
then finish the at-most-three surviving block answers together with the
three extra coins in three more weighings.
"""

import random

from weighwright import Semantics, plan, upper
from weighwright.composition import PlanRunner, run_plan
from weighwright.core import SYMBOL_OF_DIGIT, decode_subset, weigh

for n in (22, 25, 47, 200):
    p = plan(n, Semantics.EXACT)
    print(p.describe())
    print()

print("=== simulate plan(25) against a random fake set ===")
rng = random.Random(99)
truth = rng.randrange(1 << 25)
print(f"hidden fake coins: {sorted(decode_subset(truth))}")
p = plan(25, Semantics.EXACT)
runner = PlanRunner(p)
step = 0
while not runner.done:
    w = runner.next_weighing()
    outcome = weigh(truth, w)
    step += 1
    print(f"  weighing {step:>2}: {w.describe():<34} balance says "
          f"{SYMBOL_OF_DIGIT[outcome]}")
    runner.submit(outcome)
found = runner.result()
print(f"classified fake coins: {sorted(found)}")
assert found == decode_subset(truth)
print(f"({step} weighings used, bound {upper(25)})")

print()
print("=== sorting semantics: two blocks that each look uniform ===")
p22 = plan(22, Semantics.SORT_CLASSES)
truth = (1 << 11) - 1  # first block entirely heavy, second entirely normal
verdict = run_plan(p22, truth)
print(f"first block all heavy -> cross-block weighing resolves it: "
      f"{sorted(verdict)}")
assert verdict == decode_subset(truth)
