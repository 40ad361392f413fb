"""Evaluate t1*k + t2 on a server that only ever sees ciphertext halves."""
import random

from snpcrypt import GroupParams, LinParams
from snpcrypt.protocol import client_finish, client_prepare, request_compute, serve_in_thread

params = GroupParams(p=2985629447, g=1258282195)
server = serve_in_thread(mode="closed")

session, request = client_prepare(params, LinParams(t1=123, t2=45, k=678), random.Random(1))
print("sent:", request)
response = request_compute(server.server_address, request)
print("server returned c2 =", response.c2)
print("client decrypts", client_finish(session, response), "expected", 123 * 678 + 45)

server.shutdown()
