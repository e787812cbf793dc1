"""Drive an assistant session programmatically, including a caught mistake.

The session machinery behind `weighwright session` and the HTTP service:
it presents weighings, accepts <, =, > outcomes, and stops as soon as the
answer is pinned.  An answer that is impossible for *every* remaining
hypothesis is refused on the spot (a misread balance surfaces immediately);
note that a wrong answer that still fits some hypothesis cannot be detected
by any strategy; only outright impossibilities are.
"""

from weighwright import Semantics, packaged_tree
from weighwright.composition import ContradictoryOutcome
from weighwright.core import SYMBOL_OF_DIGIT, encode_subset, weigh
from weighwright.session import Session
from weighwright.strategies import consistent_hypotheses

truth = encode_subset({1, 2})
print("secretly, the fake coins are {1, 2}")

tree = packaged_tree("alg1")
session = Session.for_n(11, Semantics.SORT_CLASSES)
path: tuple[int, ...] = ()
step = 0
mistake_made = False
while not session.finished:
    w = session.next_weighing()
    honest = weigh(truth, w)
    feasible = {
        o for o in (0, 1, 2)
        if consistent_hypotheses(tree, path + (o,), Semantics.SORT_CLASSES).members
    }
    if not mistake_made and len(feasible) < 3:
        impossible = min({0, 1, 2} - feasible)
        try:
            session.submit_digit(impossible)
        except ContradictoryOutcome:
            print(f"  (answered {SYMBOL_OF_DIGIT[impossible]!r} by mistake -> "
                  f"session refuses: re-check that weighing)")
        mistake_made = True
        continue
    step += 1
    print(f"  weighing {step}: {w.describe():<28} -> {SYMBOL_OF_DIGIT[honest]}")
    session.submit_digit(honest)
    path = path + (honest,)

doc = session.result_doc()
print(f"verdict: fake coins {doc['fakes']}")
assert doc["fakes"] == [1, 2]
assert mistake_made, "expected to hit a node with an impossible outcome"
