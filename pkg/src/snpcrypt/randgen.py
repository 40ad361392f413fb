"""Seeded generators of random patterns and systems for cross-checking."""

from __future__ import annotations

import random

from .patterns import Atom, Concat, Lambda, Plus, UnionP, compile_pattern
from .system import FiringRule, ForgettingRule, Neuron, SnpSystem


def random_pattern(rng: random.Random, depth: int = 4, max_atom: int = 6, allow_lambda: bool = True):
    kinds = ["atom", "concat", "union", "plus"] if depth > 0 else ["atom"]
    kind = rng.choice(kinds)
    if kind == "atom":
        if allow_lambda and rng.random() < 0.05:
            return Lambda()
        return Atom(rng.randint(1, max_atom))
    if kind == "plus":
        return Plus(random_pattern(rng, depth - 1, max_atom, allow_lambda))
    children = tuple(random_pattern(rng, depth - 1, max_atom, allow_lambda) for _ in range(rng.randint(2, 3)))
    return Concat(children) if kind == "concat" else UnionP(children)


def random_system(rng: random.Random, max_neurons: int = 6, max_rules: int = 3) -> SnpSystem:
    """Small random system that passes validation (no lambda inside patterns)."""
    n = rng.randint(1, max_neurons)
    ids = [f"n{i}" for i in range(n)]
    neurons = []
    for nid in ids:
        firing, forgetting = [], []
        for _ in range(rng.randint(0, max_rules)):
            if rng.random() < 0.75:
                pat = random_pattern(rng, depth=2, max_atom=4, allow_lambda=False)
                lo = compile_pattern(pat).min()
                firing.append(FiringRule(pat, rng.randint(1, lo), rng.randint(0, 3)))
            else:
                forgetting.append(ForgettingRule(rng.randint(1, 5)))
        neurons.append(Neuron(nid, rng.randint(0, 6), tuple(firing), tuple(forgetting)))
    syn = {(a, b) for a in ids for b in ids if a != b and rng.random() < 0.3}
    return SnpSystem(tuple(neurons), syn, rng.choice(ids))
