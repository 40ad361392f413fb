"""Private evaluation of ``t1*k + t2`` on a remote adder system.

The client encrypts ``t1`` under randomness ``y1``, ``k`` under ``y2`` and
``t2`` under ``y1 + y2``, keeps the first components and sends only the
second ones.  The server runs the adder on those second components as plain
naturals and returns ``t1c*kc + t2c``.  That value, reduced mod p, is the
second component of an encryption of ``t1*k + t2`` whose first component is
``g^y1 * g^y2``, so the client can decrypt it.

Wire format (one request and one response line per connection)::

    SNPC1 COMPUTE mode=<literal|events|closed> t1c=<hex> t2c=<hex> kc=<hex>
    SNPC1 RESULT c2=<hex> ticks=<dec> events=<dec>
    SNPC1 ERROR code=<CODE> msg="<escaped>"
"""

from __future__ import annotations

import logging
import random
import re
import socket
import socketserver
import threading
from dataclasses import dataclass
from typing import Optional

from .elgamal import Ciphertext, GroupParams, KeyPair, decrypt, encrypt_with, format_hex, keygen, parse_hex
from .engine import OverBudget, run
from .linfun import LinParams, build_pi_add, linfun_oracle
from .numtheory import rand_below

__all__ = [
    "MODES",
    "MAX_LINE",
    "ERROR_CODES",
    "ClientSession",
    "ComputeRequest",
    "ComputeResponse",
    "ErrorResponse",
    "PlaintextTooLarge",
    "BadRequest",
    "DecryptionDegenerate",
    "WireError",
    "Budgets",
    "client_prepare",
    "server_compute",
    "client_finish",
    "assembled_ciphertext",
    "encode_request",
    "decode_request",
    "encode_response",
    "decode_response",
    "handle_line",
    "make_server",
    "serve",
    "serve_in_thread",
    "request_compute",
]

log = logging.getLogger(__name__)

TAG = "SNPC1"
MODES = ("literal", "events", "closed")
MAX_LINE = 1 << 20
ERROR_CODES = ("BAD_SYNTAX", "BAD_MODE", "VALUE_RANGE", "OVERBUDGET", "INTERNAL")

# cost order: a server configured for one mode also serves the cheaper ones
_MODE_COST = {"closed": 0, "events": 1, "literal": 2}


class PlaintextTooLarge(ValueError):
    """``t1*k + t2`` would wrap modulo p."""


class BadRequest(ValueError):
    pass


class DecryptionDegenerate(ValueError):
    pass


class WireError(ValueError):
    def __init__(self, code: str, message: str):
        self.code = code
        self.message = message
        super().__init__(f"{code}: {message}")


@dataclass(frozen=True)
class ComputeRequest:
    mode: str
    t1c: int
    t2c: int
    kc: int


@dataclass(frozen=True)
class ComputeResponse:
    c2: int
    ticks: int = 0
    events: int = 0


@dataclass(frozen=True)
class ErrorResponse:
    code: str
    msg: str


@dataclass
class ClientSession:
    params: GroupParams
    keys: KeyPair
    y1: int
    y2: int
    plain: LinParams
    c1_t1: int
    c1_t2: int
    c1_k: int
    # second components, kept only for the recomposition check
    c2_t1: int = 0
    c2_t2: int = 0
    c2_k: int = 0

    def ciphertexts(self) -> tuple:
        """The three full ciphertexts ``(c_t1, c_k, c_t2)``."""
        return (Ciphertext(self.c1_t1, self.c2_t1),
                Ciphertext(self.c1_k, self.c2_k),
                Ciphertext(self.c1_t2, self.c2_t2))


@dataclass(frozen=True)
class Budgets:
    literal_ticks: int = 1 << 22
    events: int = 1 << 22


def client_prepare(params: GroupParams, plain: LinParams, rng: random.Random, mode: str = "closed"):
    """Key generation, encryption and request construction; returns ``(session, request)``."""
    p, q = params.p, params.q
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    for name in ("t1", "t2", "k"):
        if getattr(plain, name) > p - 1:
            raise PlaintextTooLarge(f"{name} must be below p")
    if linfun_oracle(plain) >= p:
        raise PlaintextTooLarge(f"t1*k + t2 = {linfun_oracle(plain)} does not fit below p = {p}")

    keys = keygen(params, rng)
    while True:
        y1 = 1 + rand_below(q - 1, rng)
        y2 = 1 + rand_below(q - 1, rng)
        y3 = (y1 + y2) % q
        if y3:
            break
    ct1 = encrypt_with(params, keys.h, plain.t1, y1)
    ck = encrypt_with(params, keys.h, plain.k, y2)
    ct2 = encrypt_with(params, keys.h, plain.t2, y3)
    session = ClientSession(
        params, keys, y1, y2, plain,
        c1_t1=ct1.c1, c1_t2=ct2.c1, c1_k=ck.c1,
        c2_t1=ct1.c2, c2_t2=ct2.c2, c2_k=ck.c2,
    )
    assert session.c1_t2 == session.c1_t1 * session.c1_k % p
    return session, ComputeRequest(mode, ct1.c2, ct2.c2, ck.c2)


def server_compute(req: ComputeRequest, budgets: Budgets = Budgets()) -> ComputeResponse:
    """Run the adder on the received naturals; the result is never reduced."""
    if req.mode not in MODES:
        raise BadRequest(f"unknown mode {req.mode!r}")
    if min(req.t1c, req.t2c, req.kc) < 1:
        raise BadRequest("ciphertext components must be >= 1")
    lp = LinParams(req.t1c, req.t2c, req.kc)
    if req.mode == "closed":
        return ComputeResponse(linfun_oracle(lp), 0, 0)
    sys = build_pi_add(lp)
    budget = budgets.literal_ticks if req.mode == "literal" else budgets.events
    # the second output spike fixes the result; s1's remaining firings are skipped
    trace = run(sys, budget, mode=req.mode, max_emissions=2)
    if len(trace.emissions) < 2:
        raise OverBudget(f"{req.mode} run stopped after {trace.steps_executed} steps, {trace.events} events")
    return ComputeResponse(trace.emissions[1] - trace.emissions[0], trace.steps_executed, trace.events)


def assembled_ciphertext(session: ClientSession, resp: ComputeResponse) -> Ciphertext:
    p = session.params.p
    return Ciphertext(session.c1_t1 * session.c1_k % p, resp.c2 % p)


def client_finish(session: ClientSession, resp: ComputeResponse) -> int:
    c = assembled_ciphertext(session, resp)
    if c.c2 == 0:
        raise DecryptionDegenerate("server result is 0 modulo p")
    return decrypt(session.params, session.keys.x, c)


# wire codec ----------------------------------------------------------------

_REQ = re.compile(r"SNPC1 COMPUTE mode=(\S+) t1c=(\S+) t2c=(\S+) kc=(\S+)")
_RES = re.compile(r"SNPC1 RESULT c2=(\S+) ticks=(\S+) events=(\S+)")
_ERR = re.compile(r'SNPC1 ERROR code=([A-Z_]+) msg="((?:[^"\\]|\\.)*)"')
_DEC = re.compile(r"0|[1-9][0-9]*")


def _line(data) -> str:
    if isinstance(data, (bytes, bytearray)):
        if len(data) > MAX_LINE:
            raise WireError("BAD_SYNTAX", "line too long")
        try:
            data = bytes(data).decode("utf-8")
        except UnicodeDecodeError:
            raise WireError("BAD_SYNTAX", "not UTF-8") from None
    if not data.endswith("\n") or "\n" in data[:-1]:
        raise WireError("BAD_SYNTAX", "expected exactly one newline-terminated line")
    return data[:-1]


def _hex(text: str, what: str) -> int:
    try:
        return parse_hex(text)
    except ValueError:
        raise WireError("BAD_SYNTAX", f"{what} is not canonical lowercase hex") from None


def _dec(text: str, what: str) -> int:
    if not _DEC.fullmatch(text):
        raise WireError("BAD_SYNTAX", f"{what} is not a decimal natural")
    return int(text)


def encode_request(req: ComputeRequest) -> bytes:
    return (f"{TAG} COMPUTE mode={req.mode} t1c={format_hex(req.t1c)} "
            f"t2c={format_hex(req.t2c)} kc={format_hex(req.kc)}\n").encode("ascii")


def decode_request(data) -> ComputeRequest:
    m = _REQ.fullmatch(_line(data))
    if m is None:
        raise WireError("BAD_SYNTAX", "malformed COMPUTE line")
    mode = m.group(1)
    if mode not in MODES:
        raise WireError("BAD_MODE", f"unknown mode {mode!r}")
    t1c, t2c, kc = (_hex(m.group(i), n) for i, n in ((2, "t1c"), (3, "t2c"), (4, "kc")))
    if min(t1c, t2c, kc) < 1:
        raise WireError("VALUE_RANGE", "components must be nonzero")
    return ComputeRequest(mode, t1c, t2c, kc)


def _escape(msg: str) -> str:
    return msg.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\r", "\\r")


def _unescape(text: str) -> str:
    table = {"\\": "\\", '"': '"', "n": "\n", "r": "\r"}
    out, it = [], iter(text)
    for ch in it:
        if ch == "\\":
            nxt = next(it)
            if nxt not in table:
                raise WireError("BAD_SYNTAX", f"bad escape \\{nxt}")
            out.append(table[nxt])
        else:
            out.append(ch)
    return "".join(out)


def encode_response(resp) -> bytes:
    if isinstance(resp, ErrorResponse):
        line = f'{TAG} ERROR code={resp.code} msg="{_escape(resp.msg)}"\n'
    else:
        line = f"{TAG} RESULT c2={format_hex(resp.c2)} ticks={resp.ticks} events={resp.events}\n"
    return line.encode("utf-8")


def decode_response(data):
    """Return a ComputeResponse or an ErrorResponse."""
    line = _line(data)
    m = _RES.fullmatch(line)
    if m:
        return ComputeResponse(_hex(m.group(1), "c2"), _dec(m.group(2), "ticks"), _dec(m.group(3), "events"))
    m = _ERR.fullmatch(line)
    if m:
        return ErrorResponse(m.group(1), _unescape(m.group(2)))
    raise WireError("BAD_SYNTAX", "malformed response line")


# server --------------------------------------------------------------------


def handle_line(data: bytes, mode: str = "literal", budgets: Budgets = Budgets()) -> bytes:
    """Turn one raw request line into one raw response line.

    `mode` is the most expensive mode this server agrees to run.
    """
    try:
        req = decode_request(data)
        if _MODE_COST[req.mode] > _MODE_COST[mode]:
            raise WireError("BAD_MODE", f"server runs at most {mode!r}")
        resp = server_compute(req, budgets)
    except WireError as e:
        resp = ErrorResponse(e.code, e.message)
    except OverBudget as e:
        resp = ErrorResponse("OVERBUDGET", str(e))
    except BadRequest as e:
        resp = ErrorResponse("VALUE_RANGE", str(e))
    except Exception as e:  # noqa: BLE001 - every failure becomes an ERROR line
        log.exception("request failed")
        resp = ErrorResponse("INTERNAL", type(e).__name__)
    return encode_response(resp)


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        data = self.rfile.readline(MAX_LINE + 1)
        if len(data) > MAX_LINE or not data.endswith(b"\n"):
            reply = encode_response(ErrorResponse("BAD_SYNTAX", "line too long or unterminated"))
        else:
            reply = handle_line(data, self.server.mode, self.server.budgets)
        self.wfile.write(reply)
        self.wfile.flush()


class _Server(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address, mode: str, budgets: Budgets):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.budgets = budgets
        super().__init__(address, _Handler)


def make_server(address=("127.0.0.1", 0), mode: str = "literal", budgets: Budgets = Budgets()):
    """Bound but not yet serving; call ``serve_forever()`` (e.g. in a thread)."""
    return _Server(address, mode, budgets)


def serve(address, mode: str = "literal", budgets: Budgets = Budgets()) -> None:
    with make_server(address, mode, budgets) as srv:
        log.info("listening on %s:%d (mode %s)", *srv.server_address[:2], mode)
        srv.serve_forever()


def serve_in_thread(address=("127.0.0.1", 0), mode: str = "literal", budgets: Budgets = Budgets()):
    """Start a background server; returns it (``server_address`` tells the port)."""
    srv = make_server(address, mode, budgets)
    threading.Thread(target=srv.serve_forever, daemon=True).start()
    return srv


def request_compute(address, req: ComputeRequest, timeout: Optional[float] = 30.0):
    """Send one request, return the decoded response (ComputeResponse or ErrorResponse)."""
    with socket.create_connection(address, timeout=timeout) as sock:
        sock.sendall(encode_request(req))
        with sock.makefile("rb") as f:
            line = f.readline(MAX_LINE + 1)
    return decode_response(line)
