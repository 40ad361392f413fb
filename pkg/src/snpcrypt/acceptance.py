"""Acceptance criteria as runnable checks.

Used by ``tests/test_acceptance.py`` and by ``snpc selftest``.  Every check
is deterministic for a given seed and returns a :class:`Result`.
"""

from __future__ import annotations

import functools
import random
import time
from dataclasses import dataclass

from .dsl import parse_system, render_system
from .elgamal import GroupParams, decrypt, encrypt, encrypt_with, hom_add, hom_mul, hom_scale, keygen
from .engine import PERMISSIVE, run, run_events
from .linfun import LinParams, build_pi_add, literal_budget
from .numtheory import is_probable_prime, miller_rabin, mod_pow, rand_below
from .oracles import nfa_lengths, trial_division_is_prime
from .patterns import compile_pattern
from .protocol import (
    assembled_ciphertext, client_finish, client_prepare, decode_request,
    decode_response, encode_request, encode_response, request_compute, serve_in_thread,
    server_compute,
)
from .randgen import random_pattern, random_system

# Fixed groups: outputs of gen_group(bits, random.Random(7)) for 64, 32 and 10 bits.
P23 = GroupParams(23, 5)
P64 = GroupParams(14953484038930518119, 6179927171673960735)
P32 = GroupParams(2985629447, 1258282195)
P10 = GroupParams(587, 98)

DEFAULT_SEED = 2024


@dataclass
class Result:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] AC{self.number} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(number: int, name: str, limit: float | None = None):
    def wrap(fn):
        @functools.wraps(fn)
        def inner(seed: int = DEFAULT_SEED) -> Result:
            t0 = time.perf_counter()
            ok, detail = fn(seed)
            dt = time.perf_counter() - t0
            if limit is not None and dt >= limit:
                ok = False
                detail += f"; exceeded {limit:.0f}s limit"
            return Result(number, name, ok, detail, dt)
        inner.number = number
        return inner
    return wrap


def _grid(n: int = 12):
    r = range(1, n + 1)
    return [LinParams(a, b, c) for a in r for b in r for c in r]


@functools.lru_cache(maxsize=4)
def _random_systems(seed: int, count: int = 100):
    rng = random.Random(seed)
    return tuple(random_system(rng) for _ in range(count))


@_timed(1, "adder law, literal engine, [1,12]^3", limit=60)
def ac1_pi_add_law(seed):
    bad = []
    for p in _grid():
        tr = run(build_pi_add(p), literal_budget(p))
        want = [1, p.t1 * p.k + p.t2 + 1]
        if tr.emissions != want or not tr.halted or tr.intervals != [p.t1 * p.k + p.t2]:
            bad.append(p)
    return not bad, f"{1728 - len(bad)}/1728 instances exact" + (f"; first failure {bad[0]}" if bad else "")


@_timed(2, "literal vs event-jump traces")
def ac2_engine_equivalence(seed):
    bad = 0
    for p in _grid():
        sys = build_pi_add(p)
        a = run(sys, literal_budget(p))
        b = run_events(sys, 10 * literal_budget(p))
        bad += (a.emissions, a.halted, a.steps_executed) != (b.emissions, b.halted, b.steps_executed)
    rbad = 0
    horizon = 10_000
    for sys in _random_systems(seed):
        # compare every neuron's activity, not only the output trace
        log_a, log_b = [], []
        a = run(sys, horizon, policy=PERMISSIVE, on_step=lambda e: log_a.append(_activity(e)))
        b = run_events(sys, horizon + 1, policy=PERMISSIVE, until=horizon,
                       on_step=lambda e: log_b.append(_activity(e)))
        rbad += (a.emissions, a.halted, a.steps_executed, log_a) != (b.emissions, b.halted, b.steps_executed, log_b)
    return bad == 0 and rbad == 0, f"grid mismatches {bad}/1728, random mismatches {rbad}/100"


def _activity(ev):
    return (ev.time, tuple(n for n, _ in ev.fired), tuple(n for n, _ in ev.forgot), tuple(ev.emitted),
            tuple(sorted(ev.delivered.items())), tuple(sorted(ev.lost.items())))


@_timed(3, "pattern compiler vs NFA enumeration")
def ac3_pattern_compiler(seed):
    rng = random.Random(seed)
    bad = 0
    for _ in range(200):
        pat = random_pattern(rng, depth=4)
        s = compile_pattern(pat)
        bad += {n for n in range(61) if n in s} != nfa_lengths(pat, 60)
    return bad == 0, f"{200 - bad}/200 patterns agree up to length 60"


@_timed(4, "ElGamal round-trip", limit=10)
def ac4_elgamal_roundtrip(seed):
    P = P23
    fails = 0
    cases = 0
    for x in range(1, P.q):
        h = mod_pow(P.g, x, P.p)
        for m in range(1, P.p):
            for y in range(1, P.q):
                fails += decrypt(P, x, encrypt_with(P, h, m, y)) != m
                cases += 1
    rng = random.Random(seed)
    kp = keygen(P64, rng)
    for _ in range(1000):
        m = 1 + rand_below(P64.p - 1, rng)
        c, _y = encrypt(P64, kp.h, m, rng)
        fails += decrypt(P64, kp.x, c) != m
    return fails == 0, f"{cases} exhaustive cases at p=23 + 1000 at 64-bit p, {fails} failures"


@_timed(5, "homomorphic identities at 64-bit p")
def ac5_homomorphic(seed):
    P, rng = P64, random.Random(seed)
    kp = keygen(P, rng)
    p = P.p
    fails = [0, 0, 0]
    for _ in range(500):
        m1, m2 = 1 + rand_below(p - 1, rng), 1 + rand_below(p - 1, rng)
        c1, _ = encrypt(P, kp.h, m1, rng)
        c2, _ = encrypt(P, kp.h, m2, rng)
        fails[0] += decrypt(P, kp.x, hom_mul(P, c1, c2)) != m1 * m2 % p
    for _ in range(500):
        m, k = 1 + rand_below(p - 1, rng), 1 + rand_below(p - 1, rng)
        c, _ = encrypt(P, kp.h, m, rng)
        fails[1] += decrypt(P, kp.x, hom_scale(P, c, k)) != m * k % p
    for _ in range(500):
        m1, m2 = 1 + rand_below(p - 1, rng), 1 + rand_below(p - 1, rng)
        y = 1 + rand_below(P.q - 1, rng)
        s = hom_add(P, encrypt_with(P, kp.h, m1, y), encrypt_with(P, kp.h, m2, y))
        fails[2] += decrypt(P, kp.x, s) != (m1 + m2) % p
    return sum(fails) == 0, f"failures mul={fails[0]} scale={fails[1]} add={fails[2]} of 500 each"


def _random_triple(rng, p):
    while True:
        t1 = 1 + rand_below(p - 1, rng)
        k = 1 + rand_below((p - 2) // t1 or 1, rng)
        if t1 * k < p - 1:
            t2 = 1 + rand_below(p - 1 - t1 * k, rng)
            return LinParams(t1, t2, k)


def _loopback(req):
    # in-process round-trip through the wire codec
    line = encode_request(req)
    return decode_response(encode_response(server_compute(decode_request(line))))


@functools.lru_cache(maxsize=4)
def protocol_exchanges(seed: int):
    """Run every exchange of the end-to-end criterion; returns (part, session, response, recovered)."""
    rng = random.Random(seed)
    out = []
    for t1 in range(1, 23):
        for k in range(1, 23):
            for t2 in range(1, 23 - t1 * k):
                s, req = client_prepare(P23, LinParams(t1, t2, k), rng, mode="closed")
                resp = _loopback(req)
                out.append(("a", s, resp, client_finish(s, resp)))
    srv = serve_in_thread(mode="literal")
    try:
        addr = srv.server_address
        for _ in range(200):
            s, req = client_prepare(P32, _random_triple(rng, P32.p), rng, mode="closed")
            resp = request_compute(addr, req)
            out.append(("b", s, resp, client_finish(s, resp)))
        for _ in range(20):
            s, req = client_prepare(P10, _random_triple(rng, P10.p), rng, mode="literal")
            resp = request_compute(addr, req)
            out.append(("c", s, resp, client_finish(s, resp)))
    finally:
        srv.shutdown()
        srv.server_close()
    return tuple(out)


@_timed(6, "end-to-end protocol", limit=120)
def ac6_protocol(seed):
    ex = protocol_exchanges(seed)
    counts, bad = {}, {}
    for part, s, resp, got in ex:
        counts[part] = counts.get(part, 0) + 1
        want = s.plain.t1 * s.plain.k + s.plain.t2
        if got != want or (part == "c" and resp.ticks == 0):
            bad[part] = bad.get(part, 0) + 1
    ok = not bad and counts.get("c", 0) >= 20 and counts.get("b", 0) == 200
    max_ticks = max(r.ticks for part, _, r, _ in ex if part == "c")
    return ok, (f"p=23 closed {counts.get('a', 0)}, 32-bit socket {counts.get('b', 0)}, "
                f"10-bit literal {counts.get('c', 0)} (max {max_ticks} ticks); failures {sum(bad.values())}")


@_timed(7, "recomposition identity")
def ac7_recomposition(seed):
    bad = 0
    ex = protocol_exchanges(seed)
    for _, s, resp, _ in ex:
        P = s.params
        c_t1, c_k, c_t2 = s.ciphertexts()
        expected = hom_add(P, hom_mul(P, c_t1, c_k), c_t2)
        bad += assembled_ciphertext(s, resp) != expected
    return bad == 0, f"{len(ex) - bad}/{len(ex)} exchanges match componentwise"


@_timed(8, "randomized encryption")
def ac8_randomization(seed):
    rng = random.Random(seed)
    kp = keygen(P64, rng)
    m = 1 + rand_below(P64.p - 1, rng)
    cts = {encrypt(P64, kp.h, m, rng)[0] for _ in range(1000)}
    return len(cts) == 1000, f"{len(cts)}/1000 distinct ciphertexts"


@_timed(9, "Miller-Rabin vs trial division below 1e5")
def ac9_primality(seed):
    rng = random.Random(seed)
    bad = []
    for n in range(100_000):
        truth = trial_division_is_prime(n)
        if is_probable_prime(n, 40, rng) != truth:
            bad.append(n)
        elif n >= 5 and n % 2 and miller_rabin(n, 40, rng) != truth:
            bad.append(n)
    carmichael = all(not miller_rabin(n, 40, rng) and not is_probable_prime(n, 40, rng) for n in (561, 1105, 1729))
    return not bad and carmichael, f"{len(bad)} disagreements; Carmichael 561/1105/1729 rejected: {carmichael}"


@_timed(10, "DSL round-trip")
def ac10_dsl_roundtrip(seed):
    bad = 0
    systems = [build_pi_add(p) for p in _grid()] + list(_random_systems(seed))
    for sys in systems:
        bad += parse_system(render_system(sys)) != sys
    return bad == 0, f"{len(systems) - bad}/{len(systems)} systems round-trip"


CRITERIA = (
    ac1_pi_add_law,
    ac2_engine_equivalence,
    ac3_pattern_compiler,
    ac4_elgamal_roundtrip,
    ac5_homomorphic,
    ac6_protocol,
    ac7_recomposition,
    ac8_randomization,
    ac9_primality,
    ac10_dsl_roundtrip,
)


def run_all(seed: int = DEFAULT_SEED, echo=print) -> bool:
    ok = True
    for check in CRITERIA:
        res = check(seed)
        if echo is not None:
            echo(res.line())
        ok &= res.passed
    return ok
