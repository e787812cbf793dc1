"""Interactive weighing sessions: one human, one balance, one strategy.

A session wraps a plan runner and feeds it outcome symbols (``<``, ``=``,
``>``) as the balance settles, one weighing at a time.  Outcomes that no
remaining hypothesis can produce are rejected without advancing the session,
so a mis-read weighing surfaces immediately instead of producing a wrong
classification.  Sessions can optionally append every event to a JSON-lines
log for audit or crash recovery.
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Optional, Union

from .composition import (
    CompositePlan,
    ContradictoryOutcome,
    PlanRunner,
    PlanStep,
    UNIFORM_RESULT,
    plan,
)
from .core import (
    DIGIT_OF_SYMBOL,
    DecisionTree,
    SYMBOL_OF_DIGIT,
    Semantics,
    Weighing,
)


class SessionBusy(Exception):
    """Another mutation on the same session is in flight."""


def plan_for_tree(tree: DecisionTree, semantics: Semantics,
                  label: str = "custom") -> CompositePlan:
    """Wrap a standalone strategy tree as a single-step plan."""
    coins = tuple(range(1, tree.universe + 1))
    step = PlanStep(coins, tree, label, tree.depth())
    return CompositePlan(
        n=tree.universe,
        semantics=semantics,
        blocks=(),
        remainder=coins,
        splice=None,
        steps=(step,),
        total_weighings=step.weighings,
    )


@dataclass
class Session:
    id: str
    n: int
    semantics: Semantics
    runner: PlanRunner
    created: float = field(default_factory=time.time)
    outcomes: list[int] = field(default_factory=list)
    log_path: Optional[str] = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @classmethod
    def for_n(cls, n: int, semantics: Semantics = Semantics.SORT_CLASSES,
              log_dir: Optional[str] = None) -> "Session":
        return cls._create(plan(n, semantics), log_dir)

    @classmethod
    def for_plan(cls, plan_: CompositePlan, log_dir: Optional[str] = None) -> "Session":
        return cls._create(plan_, log_dir)

    @classmethod
    def _create(cls, plan_: CompositePlan, log_dir: Optional[str]) -> "Session":
        sid = uuid.uuid4().hex[:12]
        log_path = None
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
            log_path = os.path.join(log_dir, f"session-{sid}.jsonl")
        session = cls(sid, plan_.n, plan_.semantics, PlanRunner(plan_), log_path=log_path)
        session._log({"event": "created", "n": plan_.n,
                      "semantics": plan_.semantics.value})
        return session

    # -- state --------------------------------------------------------------

    @property
    def finished(self) -> bool:
        return self.runner.done

    def next_weighing(self) -> Optional[Weighing]:
        return self.runner.next_weighing()

    def result(self) -> Union[frozenset, str, None]:
        return self.runner.result()

    def submit_symbol(self, symbol: str) -> None:
        if symbol not in DIGIT_OF_SYMBOL:
            raise ValueError(f"outcome must be one of <, =, >; got {symbol!r}")
        self.submit_digit(DIGIT_OF_SYMBOL[symbol])

    def submit_digit(self, digit: int) -> None:
        """Apply one outcome; contradiction leaves the session untouched."""
        if not self._lock.acquire(blocking=False):
            raise SessionBusy(self.id)
        try:
            self.runner.submit(digit)
            self.outcomes.append(digit)
            self._log({"event": "outcome", "digit": digit,
                       "symbol": SYMBOL_OF_DIGIT[digit]})
            if self.finished:
                self._log({"event": "finished", "result": self.result_doc()})
        finally:
            self._lock.release()

    # -- wire shapes ----------------------------------------------------------

    def result_doc(self) -> Optional[dict]:
        result = self.result()
        if result is None:
            return None
        if result == UNIFORM_RESULT:
            return {"uniform": True, "fakes": []}
        return {"uniform": False, "fakes": sorted(result)}

    def next_doc(self) -> dict:
        if self.finished:
            return {"done": True, "result": self.result_doc()}
        w = self.next_weighing()
        return {
            "done": False,
            "weighing_index": self.runner.weighings_used + 1,
            "left": _pan_doc(w.left),
            "right": _pan_doc(w.right),
        }

    def state_doc(self) -> dict:
        return {
            "id": self.id,
            "n": self.n,
            "semantics": self.semantics.value,
            "status": "finished" if self.finished else "awaiting-outcome",
            "history": [
                {
                    "left": _pan_doc(w.left),
                    "right": _pan_doc(w.right),
                    "outcome": SYMBOL_OF_DIGIT[digit],
                }
                for w, digit in self.runner.history
            ],
            "result": self.result_doc(),
        }

    def _log(self, doc: dict) -> None:
        if not self.log_path:
            return
        doc = {"session": self.id, "t": time.time(), **doc}
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(doc) + "\n")


def _pan_doc(p) -> dict:
    return {"coins": sorted(p.coins), "refs": p.refs}


class SessionStore:
    """In-memory session registry; creation and lookup are thread-safe."""

    def __init__(self, log_dir: Optional[str] = None):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self.log_dir = log_dir

    def create(self, n: Optional[int] = None, tree: Optional[DecisionTree] = None,
               semantics: Semantics = Semantics.SORT_CLASSES,
               label: str = "custom") -> Session:
        if (n is None) == (tree is None):
            raise ValueError("provide exactly one of n or tree")
        if tree is not None:
            session = Session.for_plan(plan_for_tree(tree, semantics, label), self.log_dir)
        else:
            session = Session.for_n(n, semantics, self.log_dir)
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            if session_id not in self._sessions:
                raise KeyError(session_id)
            return self._sessions[session_id]
