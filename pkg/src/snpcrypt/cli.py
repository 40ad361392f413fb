"""Command-line entry point (``snpc``).

Exit codes: 0 success, 1 domain or validation error, 2 usage error,
3 network error.  Plaintext inputs given on the command line end up in shell
history; fine for experiments, not for real secrets.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import acceptance
from .dsl import ParseError, parse_system
from .elgamal import GroupParams, KeyFileError, keygen, read_params, write_params, write_public, write_secret
from .engine import PERMISSIVE, STRICT, AmbiguousChoice, OverBudget, run
from .linfun import LinParams, eval_linear, linfun_oracle
from .numtheory import DomainError, GenerationFailed, gen_group, make_rng
from .protocol import MODES, Budgets, ErrorResponse, WireError, client_finish, client_prepare, request_compute, serve
from .system import ValidationError

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_NETWORK = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _address(text: str) -> tuple:
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        raise UsageError(f"expected HOST:PORT, got {text!r}")
    return host or "127.0.0.1", int(port)


def _format_event(ev) -> str:
    parts = [f"step {ev.time}:"]
    parts += [f"fire {n}" for n, _ in ev.fired]
    parts += [f"forget {n}" for n, _ in ev.forgot]
    parts += [f"emit {n}" for n in ev.emitted]
    parts += [f"lost@{n}x{c}" for n, c in ev.lost.items()]
    return " ".join(parts)


def cmd_simulate(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    system = parse_system(text)
    on_step = (lambda ev: print(_format_event(ev))) if args.trace else None
    policy = PERMISSIVE if args.permissive else STRICT
    trace = run(system, args.budget, mode=args.mode, policy=policy, on_step=on_step)
    print("emissions:", *trace.emissions)
    gaps = trace.intervals
    if len(gaps) == 1:
        print(f"interval: {gaps[0]}")
    elif gaps:
        print("intervals:", *gaps)
    if not trace.halted:
        print(f"error: no halt within budget {args.budget}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_pi_add(args) -> int:
    p = LinParams(args.t1, args.t2, args.k)
    expected = linfun_oracle(p)
    got = expected if args.mode == "closed" else eval_linear(p, args.mode, args.budget)
    print(got)
    if got != expected:
        print(f"error: simulation gave {got}, closed form {expected}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_keygen(args) -> int:
    rng = make_rng(args.seed)
    p, g = gen_group(args.bits, rng)
    params = GroupParams(p, g)
    kp = keygen(params, rng)
    write_params(args.out_params, params)
    write_public(args.out_pub, kp.h)
    write_secret(args.out_sec, kp.x)
    print(f"wrote {args.bits}-bit group to {args.out_params}")
    return EXIT_OK


def cmd_serve(args) -> int:
    bind = args.bind or os.environ.get("SNPC_BIND")
    if not bind:
        raise UsageError("no bind address: pass --bind or set SNPC_BIND")
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")
    budgets = Budgets(literal_ticks=args.budget, events=args.budget)
    try:
        serve(_address(bind), args.mode, budgets)
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def cmd_compute(args) -> int:
    params = read_params(args.params)
    rng = make_rng(args.seed)
    session, req = client_prepare(params, LinParams(args.t1, args.t2, args.k), rng, mode=args.mode)
    resp = request_compute(_address(args.server), req)
    if isinstance(resp, ErrorResponse):
        print(f"error: server replied {resp.code}: {resp.msg}", file=sys.stderr)
        return EXIT_DOMAIN
    print(client_finish(session, resp))
    return EXIT_OK


def cmd_selftest(args) -> int:
    ok = acceptance.run_all(args.seed)
    return EXIT_OK if ok else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="snpc", description="SN P system simulator and private linear evaluation")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="run a .snp system")
    sp.add_argument("file")
    sp.add_argument("--mode", choices=("literal", "events"), default="literal")
    sp.add_argument("--budget", type=int, default=1_000_000)
    sp.add_argument("--trace", action="store_true", help="print per-step activity")
    sp.add_argument("--permissive", action="store_true", help="pick the first applicable rule instead of failing")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("pi-add", help="evaluate t1*k + t2 on the adder system")
    sp.add_argument("--t1", type=int, required=True)
    sp.add_argument("--t2", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--mode", choices=MODES, default="literal")
    sp.add_argument("--budget", type=int, default=None)
    sp.set_defaults(func=cmd_pi_add)

    sp = sub.add_parser("keygen", help="generate group parameters and a key pair")
    sp.add_argument("--bits", type=int, required=True)
    sp.add_argument("--out-params", required=True)
    sp.add_argument("--out-pub", required=True)
    sp.add_argument("--out-sec", required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_keygen)

    sp = sub.add_parser("serve", help="run the evaluation server")
    sp.add_argument("--bind", default=None, help="HOST:PORT (default: $SNPC_BIND)")
    sp.add_argument("--mode", choices=MODES, default="literal",
                    help="most expensive mode the server accepts")
    sp.add_argument("--budget", type=int, default=Budgets().literal_ticks)
    sp.set_defaults(func=cmd_serve)

    sp = sub.add_parser("compute", help="privately evaluate t1*k + t2 on a server")
    sp.add_argument("--server", required=True)
    sp.add_argument("--params", required=True)
    sp.add_argument("--t1", type=int, required=True)
    sp.add_argument("--t2", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--mode", choices=MODES, default="closed")
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("selftest", help="run the acceptance checks")
    sp.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    sp.set_defaults(func=cmd_selftest)
    return ap


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ConnectionError, TimeoutError, OSError) as e:
        if isinstance(e, FileNotFoundError):
            print(f"error: {e}", file=sys.stderr)
            return EXIT_DOMAIN
        print(f"network error: {e}", file=sys.stderr)
        return EXIT_NETWORK
    except (ParseError, ValidationError, KeyFileError, DomainError, GenerationFailed,
            AmbiguousChoice, OverBudget, WireError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run_cli())
