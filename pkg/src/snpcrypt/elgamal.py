"""Multiplicative ElGamal over Z_p^* and its homomorphic operations.

``hom_mul`` multiplies plaintexts, ``hom_scale`` multiplies a plaintext by a
public constant and ``hom_add`` adds plaintexts of two ciphertexts that share
their randomness (equal first components).  Sharing randomness gives up
semantic security between those ciphertexts; only use it where that is
acceptable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .numtheory import MR_ROUNDS, DomainError, is_probable_prime, make_rng, mod_inv, mod_pow, rand_below

__all__ = [
    "GroupParams",
    "KeyPair",
    "Ciphertext",
    "MessageOutOfRange",
    "RandomnessOutOfRange",
    "ScalarOutOfRange",
    "RandomnessMismatch",
    "KeyFileError",
    "keygen",
    "encrypt_with",
    "encrypt",
    "decrypt",
    "hom_mul",
    "hom_scale",
    "hom_add",
    "format_hex",
    "parse_hex",
    "write_params",
    "read_params",
    "write_public",
    "read_public",
    "write_secret",
    "read_secret",
]


class MessageOutOfRange(ValueError):
    pass


class RandomnessOutOfRange(ValueError):
    pass


class ScalarOutOfRange(ValueError):
    pass


class RandomnessMismatch(ValueError):
    pass


class KeyFileError(ValueError):
    pass


@dataclass(frozen=True)
class GroupParams:
    p: int
    g: int

    @property
    def q(self) -> int:
        """Exponent modulus (order of Z_p^*)."""
        return self.p - 1

    def check(self, rng: random.Random | None = None) -> None:
        """Verify `p` is a safe prime and `g` generates Z_p^*."""
        p, g = self.p, self.g
        rng = rng or make_rng(p)
        if p < 5 or not is_probable_prime(p, MR_ROUNDS, rng):
            raise DomainError(f"p={p} is not prime")
        half = (p - 1) // 2
        if not is_probable_prime(half, MR_ROUNDS, rng):
            raise DomainError(f"p={p} is not a safe prime")
        if not 2 <= g <= p - 2 or mod_pow(g, 2, p) == 1 or mod_pow(g, half, p) == 1:
            raise DomainError(f"g={g} does not generate Z_{p}^*")


@dataclass(frozen=True)
class KeyPair:
    x: int
    h: int


@dataclass(frozen=True)
class Ciphertext:
    c1: int
    c2: int


def keygen(params: GroupParams, rng: random.Random) -> KeyPair:
    x = 1 + rand_below(params.q - 1, rng)
    return KeyPair(x, mod_pow(params.g, x, params.p))


def encrypt_with(params: GroupParams, h: int, m: int, y: int) -> Ciphertext:
    p = params.p
    if not 1 <= m <= p - 1:
        raise MessageOutOfRange(f"message must lie in [1, {p - 1}], got {m}")
    if not 1 <= y <= params.q - 1:
        raise RandomnessOutOfRange(f"randomness must lie in [1, {params.q - 1}], got {y}")
    return Ciphertext(mod_pow(params.g, y, p), m * mod_pow(h, y, p) % p)


def encrypt(params: GroupParams, h: int, m: int, rng: random.Random):
    """Encrypt under fresh randomness; returns ``(ciphertext, y)``."""
    y = 1 + rand_below(params.q - 1, rng)
    return encrypt_with(params, h, m, y), y


def decrypt(params: GroupParams, x: int, c: Ciphertext) -> int:
    p = params.p
    s = mod_pow(c.c1, x, p)
    return c.c2 * mod_inv(s, p) % p


def hom_mul(params: GroupParams, c: Ciphertext, other: Ciphertext) -> Ciphertext:
    p = params.p
    return Ciphertext(c.c1 * other.c1 % p, c.c2 * other.c2 % p)


def hom_scale(params: GroupParams, c: Ciphertext, k: int) -> Ciphertext:
    p = params.p
    if not 1 <= k <= p - 1:
        raise ScalarOutOfRange(f"scalar must lie in [1, {p - 1}], got {k}")
    return Ciphertext(c.c1, c.c2 * k % p)


def hom_add(params: GroupParams, c: Ciphertext, other: Ciphertext) -> Ciphertext:
    """Sum of plaintexts modulo p.  A sum equal to p decrypts to 0."""
    if c.c1 != other.c1:
        raise RandomnessMismatch("addition needs ciphertexts with the same first component")
    return Ciphertext(c.c1, (c.c2 + other.c2) % params.p)


# key files -----------------------------------------------------------------


def format_hex(n: int) -> str:
    if n < 0:
        raise ValueError("negative value")
    return format(n, "x")


def parse_hex(text: str) -> int:
    """Strict lowercase hex without leading zeros (``0`` itself allowed)."""
    if not text or any(ch not in "0123456789abcdef" for ch in text):
        raise ValueError(f"not lowercase hex: {text!r}")
    if len(text) > 1 and text[0] == "0":
        raise ValueError(f"leading zero in {text!r}")
    return int(text, 16)


def _write_fields(path, fields: dict) -> None:
    Path(path).write_text("".join(f"{k}={format_hex(v)}\n" for k, v in fields.items()), encoding="utf-8")


def _read_fields(path, names: tuple) -> dict:
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or key not in names or key in out:
            raise KeyFileError(f"{path}:{lineno}: unexpected line {line!r}")
        try:
            out[key] = parse_hex(value)
        except ValueError as e:
            raise KeyFileError(f"{path}:{lineno}: {e}") from None
    missing = [n for n in names if n not in out]
    if missing:
        raise KeyFileError(f"{path}: missing {', '.join(missing)}")
    return out


def write_params(path, params: GroupParams) -> None:
    _write_fields(path, {"p": params.p, "g": params.g})


def read_params(path) -> GroupParams:
    f = _read_fields(path, ("p", "g"))
    return GroupParams(f["p"], f["g"])


def write_public(path, h: int) -> None:
    _write_fields(path, {"h": h})


def read_public(path) -> int:
    return _read_fields(path, ("h",))["h"]


def write_secret(path, x: int) -> None:
    _write_fields(path, {"x": x})


def read_secret(path) -> int:
    return _read_fields(path, ("x",))["x"]
