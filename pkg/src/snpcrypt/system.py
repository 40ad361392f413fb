"""Static description of a spiking neural P system."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .patterns import Atom, SpikeSet, compile_pattern

__all__ = [
    "FiringRule",
    "ForgettingRule",
    "Neuron",
    "SnpSystem",
    "Violation",
    "ValidationError",
    "validate_system",
    "check_system",
    "applicable_rules",
]


@dataclass(frozen=True)
class FiringRule:
    """``E/a^consume -> a; delay``."""

    pattern: object
    consume: int
    delay: int = 0
    compiled: Optional[SpikeSet] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.compiled is None:
            object.__setattr__(self, "compiled", compile_pattern(self.pattern))

    @classmethod
    def exact(cls, count: int, delay: int = 0) -> "FiringRule":
        """``a^count -> a; delay``: fires on exactly `count` spikes, consuming all."""
        return cls(Atom(count), count, delay)

    def accepts(self, n: int) -> bool:
        return n >= self.consume and n in self.compiled


@dataclass(frozen=True)
class ForgettingRule:
    """``a^exact -> lambda``."""

    exact: int

    def accepts(self, n: int) -> bool:
        return n == self.exact


@dataclass(frozen=True)
class Neuron:
    id: str
    initial_spikes: int = 0
    firing_rules: tuple = ()
    forgetting_rules: tuple = ()

    @property
    def rules(self) -> tuple:
        return self.firing_rules + self.forgetting_rules


@dataclass(frozen=True)
class SnpSystem:
    neurons: tuple
    synapses: frozenset
    output: str

    def __post_init__(self):
        object.__setattr__(self, "neurons", tuple(self.neurons))
        object.__setattr__(self, "synapses", frozenset(self.synapses))

    def neuron(self, nid: str) -> Neuron:
        for n in self.neurons:
            if n.id == nid:
                return n
        raise KeyError(nid)

    def index(self) -> dict:
        return {n.id: i for i, n in enumerate(self.neurons)}


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    message: str
    severity: str = "error"

    def __str__(self):
        return f"{self.severity}: {self.kind} at {self.where}: {self.message}"


class ValidationError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


def validate_system(sys: SnpSystem) -> list:
    """Return every violation (errors and warnings) found in `sys`.

    The system is usable iff no returned violation has severity ``error``.
    Overlap between a firing rule and a forgetting rule of the same neuron is
    reported as a warning; the engine resolves it by its determinism policy.
    """
    out = []
    seen = set()
    for n in sys.neurons:
        if n.id in seen:
            out.append(Violation("duplicate neuron", n.id, "neuron id declared twice"))
        seen.add(n.id)
        if not isinstance(n.initial_spikes, int) or n.initial_spikes < 0:
            out.append(Violation("bad spike count", n.id, f"initial spikes {n.initial_spikes!r}"))
        for j, r in enumerate(n.firing_rules):
            where = f"{n.id}.firing[{j}]"
            if r.consume < 1:
                out.append(Violation("bad consume", where, "consume must be >= 1"))
            if r.delay < 0:
                out.append(Violation("bad delay", where, "delay must be >= 0"))
            lo = r.compiled.min()
            if lo is not None and lo < r.consume:
                out.append(Violation(
                    "consume exceeds pattern", where,
                    f"pattern accepts {lo} spikes but rule consumes {r.consume}"))
            for f in n.forgetting_rules:
                if r.accepts(f.exact):
                    out.append(Violation(
                        "firing/forgetting overlap", where,
                        f"both apply at {f.exact} spikes", severity="warning"))
        for j, f in enumerate(n.forgetting_rules):
            if f.exact < 1:
                out.append(Violation("bad forgetting", f"{n.id}.forgetting[{j}]", "exact must be >= 1"))

    for src, dst in sorted(sys.synapses):
        if src == dst:
            out.append(Violation("self-synapse", f"{src}->{dst}", "a neuron cannot feed itself"))
        for end in (src, dst):
            if end not in seen:
                out.append(Violation("unknown neuron", f"{src}->{dst}", f"synapse endpoint {end!r} undeclared"))
    if sys.output not in seen:
        out.append(Violation("unknown output neuron", sys.output, "output id undeclared"))
    return out


def check_system(sys: SnpSystem) -> list:
    """Raise ValidationError on any error; return the warnings."""
    found = validate_system(sys)
    errors = [v for v in found if v.severity == "error"]
    if errors:
        raise ValidationError(errors)
    return found


def applicable_rules(neuron: Neuron, count: int) -> list:
    """Rules of `neuron` usable at `count` spikes: firing rules first, then forgetting."""
    return [r for r in neuron.rules if r.accepts(count)]
