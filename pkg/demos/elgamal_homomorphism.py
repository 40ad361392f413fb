"""ElGamal over a toy group: multiply, scale and add under encryption."""
import random

from snpcrypt import GroupParams, decrypt, encrypt_with, hom_add, hom_mul, hom_scale

params = GroupParams(p=23, g=5)
x = 6
h = pow(params.g, x, params.p)

a = encrypt_with(params, h, 3, 2)
b = encrypt_with(params, h, 4, 5)
print("Enc(3) =", a, " Enc(4) =", b)
print("product decrypts to", decrypt(params, x, hom_mul(params, a, b)))

c = encrypt_with(params, h, 7, 3)
print("Enc(7) scaled by 3 decrypts to", decrypt(params, x, hom_scale(params, c, 3)))

# Addition only works when both ciphertexts share their randomness.
y = random.Random(0).randrange(1, params.q)
s = hom_add(params, encrypt_with(params, h, 9, y), encrypt_with(params, h, 10, y))
print("9 + 10 under shared randomness decrypts to", decrypt(params, x, s))
