import random

import pytest

from snpcrypt.elgamal import (
    Ciphertext, GroupParams, KeyFileError, MessageOutOfRange, RandomnessMismatch,
    RandomnessOutOfRange, ScalarOutOfRange, decrypt, encrypt, encrypt_with, hom_add, hom_mul,
    hom_scale, keygen, read_params, read_public, read_secret, write_params, write_public,
    write_secret,
)
from snpcrypt.numtheory import DomainError, mod_pow

P = GroupParams(23, 5)
X, H = 6, 8
P64 = GroupParams(14953484038930518119, 6179927171673960735)


def test_params():
    assert P.q == 22
    P.check()
    P64.check()
    with pytest.raises(DomainError):
        GroupParams(23, 2).check()  # 2 has order 11


def test_keygen_derives_h():
    assert mod_pow(5, 6, 23) == 8
    kp = keygen(P, random.Random(0))
    assert 1 <= kp.x <= 21 and kp.h == mod_pow(5, kp.x, 23)
    assert keygen(P64, random.Random(1)).x != keygen(P64, random.Random(2)).x


def test_encrypt_vector():
    assert encrypt_with(P, H, 7, 3) == Ciphertext(10, 19)
    assert decrypt(P, X, Ciphertext(10, 19)) == 7


def test_encrypt_range_errors():
    with pytest.raises(MessageOutOfRange):
        encrypt_with(P, H, 0, 3)
    with pytest.raises(MessageOutOfRange):
        encrypt_with(P, H, 23, 3)
    with pytest.raises(RandomnessOutOfRange):
        encrypt_with(P, H, 5, 0)
    with pytest.raises(RandomnessOutOfRange):
        encrypt_with(P, H, 5, 22)


def test_top_message():
    c = encrypt_with(P, H, 22, 1)
    assert c == Ciphertext(5, 22 * 8 % 23)
    assert decrypt(P, X, c) == 22


def test_exhaustive_roundtrip_small_field():
    for m in range(1, 23):
        for y in range(1, 22):
            assert decrypt(P, X, encrypt_with(P, H, m, y)) == m


def test_identity_encryption():
    c = Ciphertext(mod_pow(5, 4, 23), mod_pow(H, 4, 23))
    assert decrypt(P, X, c) == 1


def test_seeded_encrypt_is_reproducible_and_fresh():
    c1, y1 = encrypt(P64, 12345, 99, random.Random(5))
    c2, y2 = encrypt(P64, 12345, 99, random.Random(5))
    assert (c1, y1) == (c2, y2)
    rng = random.Random(6)
    assert encrypt(P64, 12345, 99, rng)[0] != encrypt(P64, 12345, 99, rng)[0]


def test_random_roundtrip_64bit():
    rng = random.Random(7)
    kp = keygen(P64, rng)
    for _ in range(1000):
        m = 1 + rng.randrange(P64.p - 1)
        assert decrypt(P64, kp.x, encrypt(P64, kp.h, m, rng)[0]) == m


def test_hom_mul_vector():
    a, b = encrypt_with(P, H, 3, 2), encrypt_with(P, H, 4, 5)
    assert (a, b) == (Ciphertext(2, 8), Ciphertext(20, 18))
    prod = hom_mul(P, a, b)
    assert prod == Ciphertext(17, 6)
    assert decrypt(P, X, prod) == 12
    assert hom_mul(P, a, b) == hom_mul(P, b, a)
    assert decrypt(P, X, hom_mul(P, a, encrypt_with(P, H, 1, 9))) == 3


def test_hom_scale_vector():
    c = Ciphertext(10, 19)
    assert hom_scale(P, c, 1) == c
    assert hom_scale(P, c, 3) == Ciphertext(10, 11)
    assert decrypt(P, X, Ciphertext(10, 11)) == 21
    with pytest.raises(ScalarOutOfRange):
        hom_scale(P, c, 0)


def test_hom_add():
    s = hom_add(P, encrypt_with(P, H, 3, 3), encrypt_with(P, H, 4, 3))
    assert decrypt(P, X, s) == 7
    with pytest.raises(RandomnessMismatch):
        hom_add(P, encrypt_with(P, H, 3, 3), encrypt_with(P, H, 4, 2))


def test_hom_add_wraps_mod_p():
    for m in range(1, 23):
        for m2 in range(1, 23):
            s = hom_add(P, encrypt_with(P, H, m, 5), encrypt_with(P, H, m2, 5))
            assert decrypt(P, X, s) == (m + m2) % 23


def test_key_files(tmp_path):
    write_params(tmp_path / "params", P64)
    write_public(tmp_path / "pub", 255)
    write_secret(tmp_path / "sec", 0)
    assert read_params(tmp_path / "params") == P64
    assert (tmp_path / "pub").read_text() == "h=ff\n"
    assert read_public(tmp_path / "pub") == 255
    assert read_secret(tmp_path / "sec") == 0
    assert (tmp_path / "params").read_text().startswith(f"p={P64.p:x}\ng=")


@pytest.mark.parametrize("body", ["p=17\n", "p=17\ng=05\n", "p=17\ng=A\n", "p=17\ng=5\nz=1\n", "p=17\np=17\ng=5\n"])
def test_key_file_rejects_noncanonical(tmp_path, body):
    f = tmp_path / "params"
    f.write_text(body)
    with pytest.raises(KeyFileError):
        read_params(f)
