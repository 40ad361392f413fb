"""Slow reference implementations used to cross-check the fast paths.

Each oracle takes a different route from the code it checks: pattern sets
by simulating a Thompson automaton, primality by trial division, powers by
repeated multiplication.
"""

from __future__ import annotations

from .patterns import Atom, Concat, Lambda, Plus, UnionP


def nfa_lengths(pattern, max_len: int) -> set:
    """Lengths ``n <= max_len`` such that ``a^n`` is accepted by the pattern's NFA."""
    eps, step = [], []

    def new():
        eps.append([])
        step.append([])
        return len(eps) - 1

    def build(p):
        s = new()
        if isinstance(p, Lambda):
            return s, s
        if isinstance(p, Atom):
            cur = s
            for _ in range(p.count):
                nxt = new()
                step[cur].append(nxt)
                cur = nxt
            return s, cur
        if isinstance(p, Concat):
            cur = s
            for c in p.children:
                a, b = build(c)
                eps[cur].append(a)
                cur = b
            return s, cur
        if isinstance(p, UnionP):
            e = new()
            for c in p.children:
                a, b = build(c)
                eps[s].append(a)
                eps[b].append(e)
            return s, e
        if isinstance(p, Plus):
            a, b = build(p.child)
            e = new()
            eps[s].append(a)
            eps[b].extend((a, e))
            return s, e
        raise ValueError(f"not a spike pattern: {p!r}")

    start, accept = build(pattern)

    def closure(states):
        stack, seen = list(states), set(states)
        while stack:
            for t in eps[stack.pop()]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen

    cur, out = closure({start}), set()
    for n in range(max_len + 1):
        if accept in cur:
            out.add(n)
        cur = closure({t for s in cur for t in step[s]})
    return out


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def slow_pow(base: int, exp: int, modulus: int) -> int:
    r = 1 % modulus
    for _ in range(exp):
        r = r * base % modulus
    return r
