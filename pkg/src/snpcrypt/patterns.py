"""Regular expressions over the one-letter alphabet {a} and their compiled form.

A pattern denotes a set of spike counts.  Because the alphabet is unary,
concatenation adds counts and Kleene plus takes additive closure, so every
pattern compiles to an ultimately periodic set of naturals (a
:class:`SpikeSet`).  Compilation goes through an intermediate union of
arithmetic progressions, which keeps huge constants such as ``a^(2**256)``
cheap as long as the resulting set is simple.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Union

__all__ = [
    "Lambda",
    "Atom",
    "Concat",
    "UnionP",
    "Plus",
    "SpikePattern",
    "SpikeSet",
    "PatternTooLarge",
    "compile_pattern",
    "pattern_matches",
    "check_pattern",
]

#: Upper bound on explicit enumeration during compilation.
DEFAULT_LIMIT = 1 << 20


class PatternTooLarge(ValueError):
    """Raised when the canonical form would need too many explicit members."""


@dataclass(frozen=True)
class Lambda:
    """The empty word, i.e. the count 0."""


@dataclass(frozen=True)
class Atom:
    """``a^count``; ``a`` alone is ``Atom(1)``."""

    count: int = 1


@dataclass(frozen=True)
class Concat:
    children: tuple


@dataclass(frozen=True)
class UnionP:
    children: tuple


@dataclass(frozen=True)
class Plus:
    child: "SpikePattern"


SpikePattern = Union[Lambda, Atom, Concat, UnionP, Plus]


def check_pattern(p) -> None:
    """Raise ``ValueError`` unless `p` is a well-formed pattern tree."""
    if isinstance(p, Lambda):
        return
    if isinstance(p, Atom):
        if not isinstance(p.count, int) or p.count < 1:
            raise ValueError(f"atom count must be a positive integer, got {p.count!r}")
        return
    if isinstance(p, (Concat, UnionP)):
        if len(p.children) < 2:
            raise ValueError(f"{type(p).__name__} needs at least two children")
        for c in p.children:
            check_pattern(c)
        return
    if isinstance(p, Plus):
        check_pattern(p.child)
        return
    raise ValueError(f"not a spike pattern: {p!r}")


@dataclass(frozen=True)
class SpikeSet:
    """Canonical ultimately periodic set of naturals.

    ``finite`` holds the members below ``threshold``.  When ``period`` is
    nonzero, every ``n >= threshold`` is a member iff ``n % period`` is in
    ``residues``.  ``period == 0`` means the set is finite.
    """

    finite: tuple = ()
    threshold: int = 0
    residues: frozenset = frozenset()
    period: int = 0

    @property
    def periodic(self) -> bool:
        return self.period > 0

    def __contains__(self, n: int) -> bool:
        if self.period and n >= self.threshold:
            return n % self.period in self.residues
        return n in self._finite_set

    @property
    def _finite_set(self) -> frozenset:
        # cached lazily; dataclass is frozen so go through object.__setattr__
        try:
            return self.__dict__["_fs"]
        except KeyError:
            fs = frozenset(self.finite)
            object.__setattr__(self, "_fs", fs)
            return fs

    def is_empty(self) -> bool:
        return not self.finite and not self.period

    def min(self) -> Optional[int]:
        """Smallest member, or None for the empty set."""
        if self.finite:
            return self.finite[0]
        if self.period:
            t, p = self.threshold, self.period
            return min(t + (r - t) % p for r in self.residues)
        return None

    def members_below(self, bound: int) -> list:
        """Sorted members smaller than `bound` (test/debug helper)."""
        return [n for n in range(bound) if n in self]


def pattern_matches(s: SpikeSet, n: int) -> bool:
    return n in s


# --- progression form -----------------------------------------------------
#
# A linear set is a frozenset of (base, step) pairs: step 0 is the singleton
# {base}, otherwise {base + step*m : m >= 0}.


def _guard(count: int, limit: int, what: str) -> None:
    if count > limit:
        raise PatternTooLarge(f"{what} needs {count} explicit entries (limit {limit})")


def _semigroup2(p1: int, p2: int, limit: int) -> set:
    """{i*p1 + j*p2 : i, j >= 0} as progressions."""
    if p1 % p2 == 0:
        return {(0, p2)}
    if p2 % p1 == 0:
        return {(0, p1)}
    if p1 > p2:
        p1, p2 = p2, p1
    # i*p2 for i < p1/g covers every residue class mod p1 that is reachable
    count = p1 // gcd(p1, p2)
    _guard(count, limit, "sum of two progressions")
    return {(i * p2, p1) for i in range(count)}


def _sum(a: Iterable, b: Iterable, limit: int) -> set:
    out = set()
    for b1, s1 in a:
        for b2, s2 in b:
            if s1 == 0 or s2 == 0:
                out.add((b1 + b2, s1 or s2))
            else:
                for base, step in _semigroup2(s1, s2, limit):
                    out.add((b1 + b2 + base, step))
            _guard(len(out), limit, "concatenation")
    return out


def _plus(a: set, limit: int) -> set:
    """Additive closure: sums of one or more members."""
    has_zero = any(base == 0 for base, _ in a)
    positives = set()
    for base, step in a:
        if base > 0:
            positives.add(base)
        elif step > 0:
            positives.add(step)
    if not positives:
        return set(a)  # empty set or {0}
    mod = min(positives)

    # Least member of `a` in each residue class mod `mod`.  Larger members of
    # the same class are generated from it and `mod` itself.
    gens = {}
    for base, step in a:
        if base == 0 and step == 0:
            continue
        start = base if base > 0 else step
        if step == 0:
            cycle = 1
        else:
            cycle = mod // gcd(step, mod)
            _guard(cycle, limit, "closure generators")
        for m in range(cycle):
            v = start + step * m
            r = v % mod
            if r not in gens or v < gens[r]:
                gens[r] = v
    gen_values = sorted(set(gens.values()))

    # Dijkstra over residues: least monoid element in each class.
    dist = {0: 0}
    heap = [(0, 0)]
    while heap:
        d, r = heapq.heappop(heap)
        if d > dist.get(r, d):
            continue
        for g in gen_values:
            nd, nr = d + g, (r + g) % mod
            if nr not in dist or nd < dist[nr]:
                dist[nr] = nd
                _guard(len(dist), limit, "closure residues")
                heapq.heappush(heap, (nd, nr))

    out = {(w, mod) for r, w in dist.items() if r != 0}
    out.add((mod, mod))
    if has_zero:
        out.add((0, 0))
    return out


def _linear(p, limit: int) -> set:
    if isinstance(p, Lambda):
        return {(0, 0)}
    if isinstance(p, Atom):
        return {(p.count, 0)}
    if isinstance(p, UnionP):
        out = set()
        for c in p.children:
            out |= _linear(c, limit)
        return out
    if isinstance(p, Concat):
        acc = _linear(p.children[0], limit)
        for c in p.children[1:]:
            acc = _sum(acc, _linear(c, limit), limit)
        return acc
    if isinstance(p, Plus):
        return _plus(_linear(p.child, limit), limit)
    raise ValueError(f"not a spike pattern: {p!r}")


def _divisors(n: int) -> list:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _canonical(progs: set, limit: int) -> SpikeSet:
    singles = {b for b, s in progs if s == 0}
    periodic = [(b, s) for b, s in progs if s > 0]
    if not periodic:
        return SpikeSet(finite=tuple(sorted(singles)))

    period = 1
    for _, s in periodic:
        period = period * s // gcd(period, s)
    threshold = max(b for b, _ in periodic)

    residues = set()
    for b, s in periodic:
        _guard(period // s, limit, "residue table")
        r0 = b % s
        residues.update(r0 + s * i for i in range(period // s))
        _guard(len(residues), limit, "residue table")

    finite = set(singles)
    for b, s in periodic:
        _guard((threshold - b) // s, limit, "finite prefix")
        finite.update(range(b, threshold, s))

    # Singletons past the threshold are either already predicted or force
    # the threshold up.
    stray = [f for f in finite if f >= threshold and f % period not in residues]
    if stray:
        new_t = max(stray) + 1
        for b, s in periodic:
            lo = max(b, threshold)
            if lo < new_t:
                start = lo + (b - lo) % s
                _guard((new_t - start) // s, limit, "finite prefix")
                finite.update(range(start, new_t, s))
        threshold = new_t
    finite = {f for f in finite if f < threshold}

    # Smallest period: pattern repeats with period/e iff e divides |residues|
    # and the residues fold onto exactly |residues|/e classes.
    n_res = len(residues)
    for e in reversed(_divisors(gcd(period, n_res))):
        d = period // e
        folded = {r % d for r in residues}
        if len(folded) * e == n_res:
            period, residues = d, folded
            break

    # Lowest threshold: walk down past the region where the explicit members
    # agree with the periodic prediction.
    lowest = -1
    for r in residues:
        n = threshold - 1 - ((threshold - 1 - r) % period)
        while n >= 0 and n in finite:
            n -= period
        lowest = max(lowest, n)
    for f in finite:
        if f % period not in residues:
            lowest = max(lowest, f)
    threshold = lowest + 1
    finite = {f for f in finite if f < threshold}

    return SpikeSet(
        finite=tuple(sorted(finite)),
        threshold=threshold,
        residues=frozenset(residues),
        period=period,
    )


def compile_pattern(p, limit: int = DEFAULT_LIMIT) -> SpikeSet:
    """Compile a pattern into the canonical set of counts it accepts."""
    check_pattern(p)
    return _canonical(_linear(p, limit), limit)
