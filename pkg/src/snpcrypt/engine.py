"""Clocked execution of SN P systems.

Timing model used by both engines.  A neuron that fires at step ``q`` with
delay ``d``:

* consumes its spikes at ``q`` and releases one spike to every successor at
  ``q + d``;
* cannot receive spikes during ``[q + 1, q + d - 1]`` (spikes sent to it then
  are lost);
* may apply a rule again from ``q + d + 1``.

Spikes delivered at step ``t`` become usable at ``t + 1``; initial spikes are
usable at step 1.  With this model neuron s1 of the adder system emits at
``t1, 2*t1, ...``, s3 fires at ``t1*k + 1`` and the output neuron spikes at
``1`` and ``t1*k + t2 + 1``.

:func:`run` ticks one step at a time.  :func:`run_events` jumps the clock to
the next step at which something can happen; both produce identical traces.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Callable, Optional

from .system import FiringRule, SnpSystem, check_system

__all__ = [
    "STRICT",
    "PERMISSIVE",
    "AmbiguousChoice",
    "OverBudget",
    "SystemState",
    "StepEvents",
    "SpikeTrace",
    "initial_state",
    "step",
    "run",
    "run_events",
]

STRICT = "strict"
PERMISSIVE = "permissive"


class AmbiguousChoice(RuntimeError):
    """More than one rule applies in a neuron under the strict policy."""

    def __init__(self, neuron: str, time: int, count: int):
        self.neuron, self.time, self.count = neuron, time, count
        super().__init__(f"neuron {neuron!r} has {count} applicable rules at step {time}")


class OverBudget(RuntimeError):
    """A computation did not halt within its step/event budget."""


@dataclass
class SystemState:
    clock: int
    spikes: list
    inbox: list
    closed_from: list
    closed_until: list
    fire_eligible_at: list
    pending_emission: list

    @property
    def receive_closed_until(self) -> list:
        return list(self.closed_until)

    def copy(self) -> "SystemState":
        return copy.deepcopy(self)


@dataclass
class StepEvents:
    time: int
    fired: list = field(default_factory=list)       # (neuron id, rule)
    forgot: list = field(default_factory=list)      # (neuron id, rule)
    emitted: list = field(default_factory=list)     # neuron ids
    consumed: dict = field(default_factory=dict)
    forgotten: dict = field(default_factory=dict)
    delivered: dict = field(default_factory=dict)
    lost: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.fired or self.forgot or self.emitted)


@dataclass
class SpikeTrace:
    emissions: list
    halted: bool
    steps_executed: int
    events: int = 0
    stop_reason: str = "halted"

    @property
    def intervals(self) -> list:
        e = self.emissions
        return [b - a for a, b in zip(e, e[1:])]


def initial_state(sys: SnpSystem) -> SystemState:
    n = len(sys.neurons)
    return SystemState(
        clock=0,
        spikes=[nr.initial_spikes for nr in sys.neurons],
        inbox=[0] * n,
        closed_from=[0] * n,
        closed_until=[None] * n,
        fire_eligible_at=[1] * n,
        pending_emission=[None] * n,
    )


class _Machine:
    """Mutable engine state over one validated system."""

    def __init__(self, sys: SnpSystem, policy: str, state: Optional[SystemState] = None):
        if policy not in (STRICT, PERMISSIVE):
            raise ValueError(f"unknown policy {policy!r}")
        self.sys = sys
        self.strict = policy == STRICT
        idx = sys.index()
        self.ids = [n.id for n in sys.neurons]
        self.rules = [n.rules for n in sys.neurons]
        self.succ = [[] for _ in sys.neurons]
        for src, dst in sorted(sys.synapses, key=lambda e: (idx[e[0]], idx[e[1]])):
            self.succ[idx[src]].append(idx[dst])
        self.out = idx[sys.output]
        self.state = state if state is not None else initial_state(sys)
        self._cache_count = [None] * len(self.ids)
        self._cache_rules = [()] * len(self.ids)
        self.emissions = []
        self.events = 0

    def applicable(self, i: int) -> tuple:
        count = self.state.spikes[i]
        if self._cache_count[i] != count:
            self._cache_count[i] = count
            self._cache_rules[i] = tuple(r for r in self.rules[i] if r.accepts(count))
        return self._cache_rules[i]

    def halted(self) -> bool:
        st = self.state
        for i in range(len(self.ids)):
            if st.pending_emission[i] is not None or st.inbox[i] or self.applicable(i):
                return False
        return True

    def next_event_time(self) -> Optional[int]:
        st = self.state
        best = None
        floor = st.clock + 1
        for i in range(len(self.ids)):
            p = st.pending_emission[i]
            if p is None:
                if self.applicable(i):
                    p = max(st.fire_eligible_at[i], floor)
                else:
                    continue
            if best is None or p < best:
                best = p
        return best

    def advance(self, t: int, rec: Optional[StepEvents] = None) -> bool:
        """Execute global step `t`; return True if anything happened."""
        st = self.state
        spikes, pending = st.spikes, st.pending_emission
        eligible = st.fire_eligible_at
        n = len(self.ids)
        active = False

        # rule application
        for i in range(n):
            if pending[i] is not None or eligible[i] > t:
                continue
            app = self.applicable(i)
            if not app:
                continue
            if self.strict and len(app) > 1:
                raise AmbiguousChoice(self.ids[i], t, len(app))
            rule = app[0]
            active = True
            if isinstance(rule, FiringRule):
                spikes[i] -= rule.consume
                d = rule.delay
                pending[i] = t + d
                eligible[i] = t + d + 1
                st.closed_from[i] = t + 1
                st.closed_until[i] = t + d - 1
                if rec is not None:
                    rec.fired.append((self.ids[i], rule))
                    rec.consumed[self.ids[i]] = rule.consume
            else:
                spikes[i] -= rule.exact
                if rec is not None:
                    rec.forgot.append((self.ids[i], rule))
                    rec.forgotten[self.ids[i]] = rule.exact

        # emission and delivery
        inbox = st.inbox
        for i in range(n):
            if pending[i] != t:
                continue
            active = True
            pending[i] = None
            if i == self.out:
                self.emissions.append(t)
            if rec is not None:
                rec.emitted.append(self.ids[i])
            for j in self.succ[i]:
                cu = st.closed_until[j]
                if cu is not None and st.closed_from[j] <= t <= cu:
                    if rec is not None:
                        rec.lost[self.ids[j]] = rec.lost.get(self.ids[j], 0) + 1
                    continue
                inbox[j] += 1

        # inbox becomes usable from t + 1
        for j in range(n):
            if inbox[j]:
                if rec is not None:
                    rec.delivered[self.ids[j]] = inbox[j]
                spikes[j] += inbox[j]
                inbox[j] = 0

        st.clock = t
        if active:
            self.events += 1
        return active


def step(state: SystemState, sys: SnpSystem, policy: str = STRICT):
    """Run one global clock step on a copy of `state`; return ``(new_state, events)``."""
    m = _Machine(sys, policy, state.copy())
    rec = StepEvents(time=state.clock + 1)
    m.advance(state.clock + 1, rec)
    return m.state, rec


def run(
    sys: SnpSystem,
    budget: int,
    mode: str = "literal",
    policy: str = STRICT,
    max_emissions: Optional[int] = None,
    on_step: Optional[Callable[[StepEvents], None]] = None,
) -> SpikeTrace:
    """Simulate `sys` for at most `budget` steps (or events, when ``mode="events"``).

    Stops early once the output neuron has spiked `max_emissions` times.
    `on_step` receives the :class:`StepEvents` of every non-idle step.
    """
    if mode == "events":
        return run_events(sys, budget, policy, max_emissions=max_emissions, on_step=on_step)
    if mode != "literal":
        raise ValueError(f"unknown mode {mode!r}")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    check_system(sys)
    m = _Machine(sys, policy)
    if m.halted():
        return SpikeTrace([], True, 0, 0)
    for t in range(1, budget + 1):
        rec = StepEvents(time=t) if on_step is not None else None
        m.advance(t, rec)
        if rec:
            on_step(rec)
        if max_emissions is not None and len(m.emissions) >= max_emissions:
            return SpikeTrace(m.emissions, m.halted(), t, m.events, "emissions")
        if m.halted():
            return SpikeTrace(m.emissions, True, t, m.events, "halted")
    return SpikeTrace(m.emissions, False, budget, m.events, "budget")


def run_events(
    sys: SnpSystem,
    budget_events: int,
    policy: str = STRICT,
    max_emissions: Optional[int] = None,
    until: Optional[int] = None,
    on_step: Optional[Callable[[StepEvents], None]] = None,
) -> SpikeTrace:
    """Event-jump simulation; `budget_events` bounds the number of active steps.

    With `until`, no step later than that clock value is executed, which lets
    non-halting runs be compared against :func:`run` over the same horizon.
    """
    if budget_events < 1:
        raise ValueError("budget must be >= 1")
    check_system(sys)
    m = _Machine(sys, policy)
    while True:
        t = m.next_event_time()
        if t is None:
            return SpikeTrace(m.emissions, True, m.state.clock, m.events, "halted")
        if until is not None and t > until:
            return SpikeTrace(m.emissions, False, until, m.events, "until")
        if m.events >= budget_events:
            return SpikeTrace(m.emissions, False, m.state.clock, m.events, "budget")
        rec = StepEvents(time=t) if on_step is not None else None
        m.advance(t, rec)
        if rec:
            on_step(rec)
        if max_emissions is not None and len(m.emissions) >= max_emissions:
            return SpikeTrace(m.emissions, m.halted(), t, m.events, "emissions")
