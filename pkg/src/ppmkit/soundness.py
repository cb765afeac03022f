"""Classical soundness of workflow nets by explicit state exploration.

A net is sound when, starting from one token on the source place: the
completion marking (one token on the sink, nothing else) stays reachable
from every reachable marking, nothing is ever left over once the sink is
marked, and every transition can fire in some run. Exploration is
breadth-first with deterministic transition order, so witnesses and traces
are reproducible. A marking that strictly dominates one of its ancestors
proves the net unbounded (the pumping run can repeat), which rules out
soundness immediately; the state count cap turns pathological nets into an
honest Unknown instead of an endless run.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass

from .wfnet import WFNet, is_wf_structured

DEFAULT_MAX_STATES = 100_000
MAX_STATES_ENV = "PPMKIT_MAX_STATES"

SOUND = "Sound"
UNSOUND = "Unsound"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Violation:
    kind: str  # NotWFStructured | DeadlockNoCompletion | ImproperCompletion
    #          # | DeadTransition | Unbounded | StateSpaceExceeded
    witness: object = None  # marking dict, transition id, or offending node ids
    trace: tuple[str, ...] | None = None  # firing sequence from the initial marking

    def to_dict(self) -> dict:
        witness = self.witness
        if isinstance(witness, tuple):
            witness = list(witness)
        return {
            "kind": self.kind,
            "witness": witness,
            "trace": list(self.trace) if self.trace is not None else None,
        }


@dataclass(frozen=True)
class SoundnessReport:
    verdict: str  # Sound | Unsound | Unknown
    violations: tuple[Violation, ...]
    states_explored: int

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "states_explored": self.states_explored,
            "violations": [v.to_dict() for v in self.violations],
        }


def default_max_states() -> int:
    raw = os.environ.get(MAX_STATES_ENV)
    if raw is None:
        return DEFAULT_MAX_STATES
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{MAX_STATES_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{MAX_STATES_ENV} must be >= 1, got {value}")
    return value


def check_soundness(net: WFNet, max_states: int | None = None) -> SoundnessReport:
    """Decide soundness; Unknown only when the state cap is hit.

    max_states defaults to the PPMKIT_MAX_STATES environment variable or
    100,000.
    """
    if max_states is None:
        max_states = default_max_states()
    if max_states < 1:
        raise ValueError(f"max_states must be >= 1, got {max_states}")

    structured, offending = is_wf_structured(net)
    if not structured:
        return SoundnessReport(
            verdict=UNSOUND,
            violations=(Violation("NotWFStructured", witness=offending),),
            states_explored=0,
        )

    index = {p: k for k, p in enumerate(net.places)}
    compiled = [
        (t.id, tuple(index[p] for p in t.pre), tuple(index[p] for p in t.post))
        for t in net.transitions
    ]
    o_idx = index[net.sink]

    initial = tuple(1 if k == index[net.source] else 0 for k in range(len(net.places)))
    final = tuple(1 if k == o_idx else 0 for k in range(len(net.places)))

    # parent[m] = (parent marking, transition fired to reach m)
    parent: dict[tuple[int, ...], tuple[tuple[int, ...] | None, str | None]] = {
        initial: (None, None)
    }
    order = [initial]
    succ: dict[tuple[int, ...], list[tuple[str, tuple[int, ...]]]] = {initial: []}
    fired: set[str] = set()
    queue = deque([initial])

    def trace_to(m: tuple[int, ...]) -> tuple[str, ...]:
        steps = []
        while True:
            prev, tid = parent[m]
            if prev is None:
                return tuple(reversed(steps))
            steps.append(tid)
            m = prev

    def as_dict(m: tuple[int, ...]) -> dict[str, int]:
        return {net.places[k]: c for k, c in enumerate(m) if c}

    while queue:
        m = queue.popleft()
        for tid, pre, post in compiled:
            if any(m[k] < 1 for k in pre):
                continue
            marked = list(m)
            for k in pre:
                marked[k] -= 1
            for k in post:
                marked[k] += 1
            child = tuple(marked)
            succ[m].append((tid, child))
            fired.add(tid)
            if child in parent:
                continue
            # Strict domination of any ancestor on the generation path means
            # the connecting firing sequence can be repeated forever.
            anc = m
            while anc is not None:
                if child != anc and all(a >= b for a, b in zip(child, anc)):
                    return SoundnessReport(
                        verdict=UNSOUND,
                        violations=(
                            Violation("Unbounded", witness=as_dict(child),
                                      trace=trace_to(m) + (tid,)),
                        ),
                        states_explored=len(parent),
                    )
                anc = parent[anc][0]
            parent[child] = (m, tid)
            if len(parent) > max_states:
                return SoundnessReport(
                    verdict=UNKNOWN,
                    violations=(Violation("StateSpaceExceeded"),),
                    states_explored=len(parent),
                )
            order.append(child)
            succ[child] = []
            queue.append(child)

    violations: list[Violation] = []

    # Option to complete: every reachable marking must reach the completion
    # marking. Witness preference: a stuck marking over a live-locked one.
    backward: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for m, outs in succ.items():
        for _, child in outs:
            backward.setdefault(child, []).append(m)
    completing: set[tuple[int, ...]] = set()
    if final in parent:
        completing.add(final)
        stack = [final]
        while stack:
            for prev in backward.get(stack.pop(), ()):
                if prev not in completing:
                    completing.add(prev)
                    stack.append(prev)
    stranded = [m for m in order if m not in completing]
    if stranded:
        witness = next((m for m in stranded if not succ[m]), stranded[0])
        violations.append(
            Violation("DeadlockNoCompletion", witness=as_dict(witness),
                      trace=trace_to(witness))
        )

    # Proper completion: a token on the sink means exactly the completion
    # marking, nothing more.
    for m in order:
        if m[o_idx] >= 1 and m != final:
            violations.append(
                Violation("ImproperCompletion", witness=as_dict(m), trace=trace_to(m))
            )
            break

    for t in net.transitions:
        if t.id not in fired:
            violations.append(Violation("DeadTransition", witness=t.id))

    return SoundnessReport(
        verdict=SOUND if not violations else UNSOUND,
        violations=tuple(violations),
        states_explored=len(parent),
    )
