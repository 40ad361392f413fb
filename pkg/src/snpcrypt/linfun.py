"""The three-neuron adder system computing ``t1*k + t2``.

Neuron s1 starts with ``2k - 1`` spikes and fires one spike every ``t1``
steps into s3.  s3 fires once it holds exactly ``k`` spikes and, ``t2``
steps later, wakes the output neuron s2.  s2 also spikes at step 1 from its
initial spike, so the distance between its two spikes is ``t1*k + t2``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import OverBudget, run, run_events
from .patterns import Atom, Plus
from .system import FiringRule, Neuron, SnpSystem

__all__ = [
    "LinParams",
    "TraceShape",
    "build_pi_add",
    "linfun_oracle",
    "eval_linear",
    "literal_budget",
    "events_budget",
]


class TraceShape(RuntimeError):
    """The adder produced something other than exactly two output spikes."""


@dataclass(frozen=True)
class LinParams:
    t1: int
    t2: int
    k: int

    def __post_init__(self):
        for name in ("t1", "t2", "k"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a natural >= 1, got {v!r}")


def build_pi_add(p: LinParams) -> SnpSystem:
    s1 = Neuron("s1", 2 * p.k - 1, (FiringRule(Plus(Atom(1)), 1, p.t1 - 1),))
    s2 = Neuron("s2", 1, (FiringRule.exact(1, 0),))
    s3 = Neuron("s3", 0, (FiringRule.exact(p.k, p.t2 - 1),))
    return SnpSystem((s1, s2, s3), {("s1", "s3"), ("s3", "s2")}, "s2")


def linfun_oracle(p: LinParams) -> int:
    return p.t1 * p.k + p.t2


def literal_budget(p: LinParams) -> int:
    # covers s1's tail firings after the output has spiked
    return (2 * p.k - 1) * p.t1 + p.t2 + 4


def events_budget(p: LinParams) -> int:
    # s1 fires and emits once per spike; s3, s2 add a handful
    return 2 * (2 * p.k - 1) + 8


def eval_linear(p: LinParams, engine: str = "literal", budget: int | None = None) -> int:
    """Run the adder to completion and return the interval between output spikes."""
    sys = build_pi_add(p)
    if engine == "literal":
        trace = run(sys, budget or literal_budget(p))
    elif engine == "events":
        trace = run_events(sys, budget or events_budget(p))
    else:
        raise ValueError(f"unknown engine {engine!r}")
    if not trace.halted:
        raise OverBudget(f"adder {p} did not halt within budget ({trace.steps_executed} steps)")
    if len(trace.emissions) != 2:
        raise TraceShape(f"expected two output spikes, got {trace.emissions}")
    return trace.emissions[1] - trace.emissions[0]
