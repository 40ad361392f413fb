"""Modular arithmetic, primality testing and safe-prime group generation.

Randomness is always passed in explicitly as a :class:`random.Random`
instance: seeded for reproducible tests, :func:`make_rng` with no seed for
operating-system entropy.
"""

from __future__ import annotations

import random
from typing import Optional

__all__ = [
    "DomainError",
    "NotInvertible",
    "GenerationFailed",
    "make_rng",
    "mod_pow",
    "mod_inv",
    "rand_below",
    "is_probable_prime",
    "miller_rabin",
    "gen_group",
    "SMALL_PRIMES",
]

MR_ROUNDS = 40


class DomainError(ValueError):
    pass


class NotInvertible(ArithmeticError):
    pass


class GenerationFailed(RuntimeError):
    pass


def make_rng(seed: Optional[int] = None) -> random.Random:
    """Seeded generator, or one backed by ``os.urandom`` when `seed` is None."""
    if seed is None:
        return random.SystemRandom()
    return random.Random(seed)


def mod_pow(base: int, exp: int, modulus: int) -> int:
    """Left-to-right square-and-multiply."""
    if modulus < 2:
        raise DomainError(f"modulus must be >= 2, got {modulus}")
    if exp < 0:
        raise DomainError("negative exponent")
    base %= modulus
    result = 1
    for bit in bin(exp)[2:]:
        result = result * result % modulus
        if bit == "1":
            result = result * base % modulus
    return result


def mod_inv(a: int, modulus: int) -> int:
    if modulus < 2:
        raise DomainError(f"modulus must be >= 2, got {modulus}")
    old_r, r = a % modulus, modulus
    old_s, s = 1, 0
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
    if old_r != 1:
        raise NotInvertible(f"{a} has no inverse modulo {modulus}")
    return old_s % modulus


def rand_below(bound: int, rng: random.Random) -> int:
    """Uniform integer in ``[0, bound)`` by rejection on ``bound.bit_length()``-bit draws."""
    if bound < 1:
        raise DomainError("bound must be >= 1")
    width = bound.bit_length()
    while True:
        v = rng.getrandbits(width)
        if v < bound:
            return v


def _sieve(limit: int) -> list:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, int(limit ** 0.5) + 1):
        if flags[i]:
            flags[i * i::i] = bytearray(len(flags[i * i::i]))
    return [i for i, f in enumerate(flags) if f]


SMALL_PRIMES = _sieve(1000)


def is_probable_prime(n: int, rounds: int = MR_ROUNDS, rng: Optional[random.Random] = None) -> bool:
    """Miller-Rabin after trial division by the primes below 1000.

    A False answer is certain; True is wrong with probability at most
    ``4**-rounds``.
    """
    if n < 2:
        return False
    for p in SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < SMALL_PRIMES[-1] ** 2:
        return True
    return miller_rabin(n, rounds, rng)


def miller_rabin(n: int, rounds: int = MR_ROUNDS, rng: Optional[random.Random] = None) -> bool:
    """Miller-Rabin alone, for odd ``n >= 5``; random bases in ``[2, n-2]``."""
    if n < 5 or n % 2 == 0:
        raise DomainError("miller_rabin needs an odd n >= 5")
    if rng is None:
        rng = make_rng()
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        a = 2 + rand_below(n - 3, rng)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def gen_group(bits: int, rng: random.Random, max_candidates: Optional[int] = None) -> tuple:
    """Return ``(p, g)``: a `bits`-bit safe prime and a generator of Z_p^*.

    ``p = 2q + 1`` with ``q`` prime, so ``g`` generates the whole group iff
    ``g^2 != 1`` and ``g^q != 1`` modulo ``p``.
    """
    if bits < 3:
        raise DomainError("safe primes need at least 3 bits")
    if max_candidates is None:
        max_candidates = 200 * bits * bits
    lo, hi = 1 << (bits - 2), 1 << (bits - 1)  # range of q
    for _ in range(max_candidates):
        q = lo + rand_below(hi - lo, rng)
        p = 2 * q + 1
        if p.bit_length() != bits:
            continue
        if is_probable_prime(q, MR_ROUNDS, rng) and is_probable_prime(p, MR_ROUNDS, rng):
            break
    else:
        raise GenerationFailed(f"no {bits}-bit safe prime in {max_candidates} candidates")
    while True:
        g = 2 + rand_below(p - 3, rng)
        if mod_pow(g, 2, p) != 1 and mod_pow(g, q, p) != 1:
            return p, g
