import random
import socket
import threading

import pytest

from snpcrypt.elgamal import GroupParams, encrypt_with
from snpcrypt.linfun import LinParams
from snpcrypt.numtheory import mod_pow
from snpcrypt.protocol import (
    BadRequest, Budgets, ComputeRequest, ComputeResponse, ErrorResponse, MAX_LINE,
    PlaintextTooLarge, WireError, client_finish, client_prepare, decode_request,
    decode_response, encode_request, encode_response, handle_line, request_compute,
    serve_in_thread, server_compute,
)

P23 = GroupParams(23, 5)
P32 = GroupParams(2985629447, 1258282195)


@pytest.fixture
def server():
    srv = serve_in_thread(mode="literal")
    yield srv
    srv.shutdown()
    srv.server_close()


def test_session_shape_and_result():
    session, req = client_prepare(P23, LinParams(2, 4, 3), random.Random(1))
    assert session.c1_t2 == session.c1_t1 * session.c1_k % 23
    assert (session.y1 + session.y2) % 22 != 0
    assert req.mode == "closed"
    assert client_finish(session, server_compute(req)) == 10


def test_plaintext_bound():
    client_prepare(P23, LinParams(2, 4, 9), random.Random(0))  # 22 fits
    with pytest.raises(PlaintextTooLarge):
        client_prepare(P23, LinParams(2, 5, 9), random.Random(0))
    with pytest.raises(PlaintextTooLarge):
        client_prepare(P23, LinParams(23, 1, 1), random.Random(0))


def test_seeded_runs_repeat():
    a = client_prepare(P32, LinParams(5, 6, 7), random.Random(42))
    b = client_prepare(P32, LinParams(5, 6, 7), random.Random(42))
    assert a == b
    assert client_prepare(P32, LinParams(5, 6, 7), random.Random(43))[1] != a[1]


@pytest.mark.parametrize("mode", ["literal", "events", "closed"])
def test_server_compute_modes(mode):
    resp = server_compute(ComputeRequest(mode, 3, 2, 4))
    assert resp.c2 == 14
    if mode == "literal":
        assert (resp.ticks, resp.events) == (15, 11)


def test_server_rejects_zero_and_budget():
    with pytest.raises(BadRequest):
        server_compute(ComputeRequest("closed", 3, 2, 0))
    assert b"OVERBUDGET" in handle_line(b"SNPC1 COMPUTE mode=literal t1c=ff t2c=2 kc=ff\n",
                                        budgets=Budgets(literal_ticks=100))
    assert b"VALUE_RANGE" in handle_line(b"SNPC1 COMPUTE mode=closed t1c=0 t2c=2 kc=4\n")


def test_request_codec():
    req = ComputeRequest("closed", 3, 2, 4)
    assert encode_request(req) == b"SNPC1 COMPUTE mode=closed t1c=3 t2c=2 kc=4\n"
    assert decode_request(encode_request(req)) == req
    big = ComputeRequest("events", 2 ** 64 + 10, 255, 1)
    assert b"t2c=ff " in encode_request(big)
    assert decode_request(encode_request(big)) == big


def test_response_codec():
    assert encode_response(ComputeResponse(14, 15, 11)) == b"SNPC1 RESULT c2=e ticks=15 events=11\n"
    assert encode_response(ComputeResponse(0)) == b"SNPC1 RESULT c2=0 ticks=0 events=0\n"
    err = ErrorResponse("BAD_MODE", 'no "warp" \\ here')
    assert decode_response(encode_response(err)) == err
    assert decode_response(b"SNPC1 RESULT c2=e ticks=15 events=11\n") == ComputeResponse(14, 15, 11)


@pytest.mark.parametrize("line", [
    b"SNPC1 COMPUTE mode=closed t1c=03 t2c=2 kc=4\n",
    b"SNPC1 COMPUTE mode=closed t1c=3 t2c=2\n",
    b"SNPC1 COMPUTE mode=closed t1c=3 t2c=2 kc=4",
    b"SNPC1 COMPUTE mode=closed t1c=3 t2c=2 kc=4 \n",
    b"SNPC2 COMPUTE mode=closed t1c=3 t2c=2 kc=4\n",
    b"SNPC1 COMPUTE mode=closed t1c=3 t2c=2 kc=A\n",
])
def test_bad_syntax(line):
    with pytest.raises(WireError) as info:
        decode_request(line)
    assert info.value.code == "BAD_SYNTAX"
    assert handle_line(line).startswith(b"SNPC1 ERROR code=BAD_SYNTAX")


def test_unknown_mode():
    out = handle_line(b"SNPC1 COMPUTE mode=warp t1c=3 t2c=2 kc=4\n")
    assert decode_response(out).code == "BAD_MODE"


def test_mode_ceiling():
    line = b"SNPC1 COMPUTE mode=literal t1c=3 t2c=2 kc=4\n"
    assert decode_response(handle_line(line, mode="closed")).code == "BAD_MODE"
    assert decode_response(handle_line(line, mode="literal")).c2 == 14


def test_socket_roundtrip(server):
    session, req = client_prepare(P32, LinParams(3, 2, 4), random.Random(5), mode="closed")
    resp = request_compute(server.server_address, req)
    assert client_finish(session, resp) == 14


def test_socket_oversized_line(server):
    with socket.create_connection(server.server_address, timeout=10) as sock:
        sock.sendall(b"SNPC1 " + b"x" * (MAX_LINE + 10) + b"\n")
        reply = sock.makefile("rb").readline()
    assert decode_response(reply).code == "BAD_SYNTAX"


def test_socket_concurrent_clients(server):
    results = {}

    def work(i):
        session, req = client_prepare(P32, LinParams(i + 1, 2, 3), random.Random(i), mode="closed")
        results[i] = client_finish(session, request_compute(server.server_address, req))

    threads = [threading.Thread(target=work, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join(30)
    assert results == {i: (i + 1) * 3 + 2 for i in range(8)}


def test_ciphertext_collision_hides_plaintext():
    # the server sees only second components; distinct secrets can give identical requests
    h = mod_pow(5, 6, 23)
    seen = {}
    for t1 in range(1, 5):
        for k in range(1, 5):
            for t2 in range(1, 5):
                for y1 in range(1, 22):
                    y2 = 3
                    y3 = (y1 + y2) % 22
                    if not y3:
                        continue
                    wire = (encrypt_with(P23, h, t1, y1).c2, encrypt_with(P23, h, t2, y3).c2,
                            encrypt_with(P23, h, k, y2).c2)
                    seen.setdefault(wire, set()).add((t1, t2, k))
    assert any(len(v) > 1 for v in seen.values())
