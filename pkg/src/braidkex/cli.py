"""Command line front end.

Exit codes: 0 ok, 2 input error, 3 algebraic invariant failure,
4 protocol/wire error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .braid import BraidContext, BraidError, Word, canonical_bytes, to_normal_form
from .scenario import (
    AlgebraicFailure,
    ScenarioError,
    attack,
    bundled_scenarios,
    generate_scenario,
    load_scenario,
    reverify,
    simulate,
)
from .wire import WireError, open_endpoint, session_over_socket

EXIT_OK, EXIT_INPUT, EXIT_ALGEBRA, EXIT_WIRE = 0, 2, 3, 4


def _dump(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def cmd_normal_form(args) -> int:
    ctx = BraidContext(args.n)
    w = ctx.check(Word.parse(args.word))
    nf = to_normal_form(ctx, w)
    print(f"delta_power={nf.delta_power}")
    print("factors=[" + ", ".join("[" + " ".join(map(str, f.perm)) + "]" for f in nf.factors) + "]")
    print(f"hex={canonical_bytes(nf).hex()}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    _dump(simulate(load_scenario(args.scenario)))
    return EXIT_OK


def cmd_attack(args) -> int:
    _dump(attack(load_scenario(args.scenario), timing=not args.no_timing))
    return EXIT_OK


def cmd_verify(args) -> int:
    sc = load_scenario(args.scenario)
    try:
        with open(args.transcript, encoding="utf-8") as fh:
            saved = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"cannot read transcript: {exc}") from exc
    transcript = saved.get("transcript", saved) if isinstance(saved, dict) else saved
    out = reverify(sc, transcript)
    _dump(out)
    if "keys" in saved and saved["keys"] != out["keys"]:
        print("recomputed keys differ from the saved ones", file=sys.stderr)
        return EXIT_ALGEBRA
    return EXIT_OK if out["match"] else EXIT_ALGEBRA


def cmd_session(args) -> int:
    sc = load_scenario(args.scenario)

    def announce(addr) -> None:
        print(f"listening on {addr[0]}:{addr[1]}", file=sys.stderr, flush=True)

    try:
        conn = open_endpoint(args.endpoint, timeout=args.timeout, on_listen=announce)
    except OSError as exc:
        raise WireError(f"cannot open {args.endpoint}: {exc}") from exc
    result = session_over_socket(args.role, sc, conn)
    print(result.key.hex())
    return EXIT_OK


def cmd_gen(args) -> int:
    _dump(generate_scenario(args.protocol, args.n, args.split, args.priv_len, args.seed, args.w_len))
    return EXIT_OK


def cmd_list(args) -> int:
    for name in bundled_scenarios():
        print(name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="braidkex", description="Braid-group key exchange workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normal-form", help="left normal form and canonical bytes of a word")
    p.add_argument("word", help='signed generator indices, e.g. "1 2 -1"')
    p.add_argument("-n", type=int, required=True, help="strand count")
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("simulate", help="run the honest protocol of a scenario")
    p.add_argument("scenario", help="scenario file or bundled scenario name")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("attack", help="run the scenario's attack and report")
    p.add_argument("scenario")
    p.add_argument("--no-timing", action="store_true", help="report elapsed_ms as 0 for byte-stable output")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("verify", help="recompute keys from a scenario and a saved simulate output")
    p.add_argument("scenario")
    p.add_argument("transcript")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("session", help="run one party over TCP")
    p.add_argument("role", choices=["alice", "bob"])
    p.add_argument("endpoint", help="listen:HOST:PORT or connect:HOST:PORT")
    p.add_argument("scenario")
    p.add_argument("--timeout", type=float, default=30.0)
    p.set_defaults(func=cmd_session)

    p = sub.add_parser("gen", help="generate a random scenario")
    p.add_argument("--protocol", choices=["kolee", "aag"], default="kolee")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--split", type=int, default=None)
    p.add_argument("--priv-len", type=int, default=3)
    p.add_argument("--w-len", type=int, default=8)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("list", help="list bundled scenarios")
    p.set_defaults(func=cmd_list)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, BraidError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AlgebraicFailure as exc:
        print(f"algebraic failure: {exc}", file=sys.stderr)
        return EXIT_ALGEBRA
    except WireError as exc:
        print(f"wire error: {exc}", file=sys.stderr)
        return EXIT_WIRE


if __name__ == "__main__":
    sys.exit(main())
