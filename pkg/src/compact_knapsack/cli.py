"""Command-line front end: keys, signing, attacks, benchmark tables and parameter help.

Exit codes: 0 success (or signature accepted), 1 signature rejected,
2 usage or input errors.  With ``--format json`` errors are reported as a
JSON object on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bench
from .attacks import (
    AttackConfig,
    KnapsackInstance,
    SolutionSpace,
    cvp_attack,
    divide_and_conquer_attack,
    generate_instance,
    parse_fraction,
)
from .encoding import DecodeError
from .linalg import NoIntegerSolution
from .sigma import (
    DEFAULT_PARAMS,
    SMALL_PARAMS,
    SchemeParams,
    completeness_probability,
    epsilon,
    keygen,
    public_key_from_secret,
    suggest_betas,
)
from .signature import (
    SIG_VERSION_CANONICAL,
    SIG_VERSION_PACKED,
    commitment_collision_bound,
    decode_public_key,
    decode_secret_key,
    decode_signature,
    encode_public_key,
    encode_secret_key,
    encode_signature,
    sign,
    verify_signature,
)
from .xof import XofStream

PARAM_PRESETS = {"default": DEFAULT_PARAMS, "small": SMALL_PARAMS}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fractions(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(parse_fraction(v) for v in text.split(",") if v.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad fraction list {text!r}") from exc


def _load_json(text: str):
    """Inline JSON, or the path of a JSON file."""
    if text.lstrip().startswith(("{", "[")):
        return json.loads(text)
    with open(text) as fh:
        return json.load(fh)


def _load_params(text: str) -> SchemeParams:
    if text in PARAM_PRESETS:
        return PARAM_PRESETS[text]
    d = _load_json(text)
    return SchemeParams(int(d["n"]), int(d["m"]), int(d["R"]), tuple(d["alphas"]), tuple(d["betas"]),
                        int(d.get("t", 80)), int(d.get("entry_bits", 24)))


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _write(path: str, data: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(data)


def _seed_bytes(text: str | None) -> bytes | None:
    if text is None:
        return None
    try:
        return bytes.fromhex(text)
    except ValueError as exc:
        raise UsageError("--seed must be hex") from exc


def cmd_keygen(args) -> int:
    params = _load_params(args.params)
    pk, sk = keygen(params, _seed_bytes(args.seed))
    _write(args.out_pk, encode_public_key(pk))
    _write(args.out_sk, encode_secret_key(sk, params))
    print(f"wrote {args.out_pk} and {args.out_sk}")
    return 0


def cmd_sign(args) -> int:
    sk, params = decode_secret_key(_read(args.sk))
    pk = public_key_from_secret(sk, params)
    seed = _seed_bytes(args.seed)
    rng = XofStream(seed) if seed is not None else None
    sig = sign(sk, pk, _read(args.msg_file), rng)
    version = SIG_VERSION_CANONICAL if args.canonical else SIG_VERSION_PACKED
    data = encode_signature(sig, version)
    _write(args.out, data)
    print(f"wrote {args.out} ({len(data)} bytes)")
    return 0


def cmd_verify(args) -> int:
    pk = decode_public_key(_read(args.pk))
    sig = decode_signature(_read(args.sig))
    verdict = verify_signature(pk, _read(args.msg_file), sig)
    if verdict:
        print("accept")
        return 0
    print(f"reject: {verdict.reason}")
    return 1


def _random_instance(spec: dict) -> KnapsackInstance:
    space = SolutionSpace(int(spec["n"]), int(spec["R"]), tuple(spec["alphas"]))
    entry_bits = int(spec.get("entry_bits", max(1, space.R // 8)))
    seed = str(spec.get("seed", 0)).encode()
    return generate_instance(space, int(spec["m"]), entry_bits, XofStream(seed, bench.TAG_BENCH))


def cmd_attack(args) -> int:
    if (args.instance is None) == (args.random is None):
        raise UsageError("attack: give exactly one of --instance or --random")
    if args.instance is not None:
        inst = KnapsackInstance.from_dict(_load_json(args.instance))
        rng = XofStream(b"attack")
    else:
        spec = _load_json(args.random)
        inst = _random_instance(spec)
        rng = XofStream(str(spec.get("seed", 0)).encode() + b"|dnc", bench.TAG_BENCH)
    cfg = AttackConfig(args.search_width, _fractions(args.betas) if args.betas else None)
    rep = cvp_attack(inst, cfg) if args.kind == "cvp" else divide_and_conquer_attack(inst, cfg, rng=rng)
    out = {
        "attack": args.kind,
        "space": inst.space.label(),
        "m": inst.m,
        "n": inst.space.n,
        "satisfied_coords": rep.satisfied_coords,
        "total_coords": rep.total_coords,
        "fraction": rep.fraction,
        "full_solution": rep.full_solution,
        "equality_holds": rep.equality_holds,
        "candidate": list(rep.candidate),
    }
    if args.format == "json":
        print(json.dumps(out, sort_keys=True))
    else:
        print(f"{out['space']} m={out['m']}: {rep.satisfied_coords}/{rep.total_coords} coordinates "
              f"({100 * rep.fraction:.1f}%), full solution: {rep.full_solution}")
    return 0


def cmd_bench(args) -> int:
    specs = bench.load_specs(args.spec)
    timing = not args.no_timing
    if args.format == "json":
        docs = [json.loads(bench.run_experiment(s, args.jobs).to_json(timing)) for s in specs]
        print(json.dumps(docs if len(docs) > 1 else docs[0], sort_keys=True, indent=2))
    else:
        for i, s in enumerate(specs):
            rep = bench.run_experiment(s, args.jobs)
            sys.stdout.write(rep.to_csv(timing, header=i == 0))
            sys.stdout.flush()
    return 0


def cmd_params(args) -> int:
    alphas = _fractions(args.alphas)
    eps = [Fraction(v) for v in args.epsilon.split(",")]
    rows = []
    for betas in suggest_betas(alphas, args.R, eps):
        a_bits = [int(a * args.R) for a in alphas]
        b_bits = [int(b * args.R) for b in betas]
        row = {
            "betas": [str(b) for b in betas],
            "beta_bits": b_bits,
            "epsilons": [float(epsilon(a, b)) for a, b in zip(a_bits, b_bits)],
            "collision_bound_log2": -min(b_bits),
        }
        if args.n is not None:
            p = SchemeParams(args.n, 1, args.R, alphas, betas, 1, 1)
            row["completeness"] = float(completeness_probability(p))
            row["collision_bound"] = float(commitment_collision_bound(p))
        rows.append(row)
    if args.format == "json":
        print(json.dumps({"alphas": [str(a) for a in alphas], "R": args.R, "candidates": rows},
                         sort_keys=True, indent=2))
    else:
        for row in rows:
            line = "betas=(" + ", ".join(row["betas"]) + ")  eps=" + ", ".join(f"{e:.3e}" for e in row["epsilons"])
            if "completeness" in row:
                line += f"  completeness={row['completeness']:.9f}"
            print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="compact-knapsack", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    k = sub.add_parser("keygen", help="generate a key pair")
    k.add_argument("--params", required=True, help="preset (default, small) or JSON file")
    k.add_argument("--out-pk", required=True)
    k.add_argument("--out-sk", required=True)
    k.add_argument("--seed", help="master seed as hex (random if omitted)")
    k.set_defaults(func=cmd_keygen)

    s = sub.add_parser("sign", help="sign a file")
    s.add_argument("--sk", required=True)
    s.add_argument("--msg-file", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--seed", help="nonce seed as hex (random if omitted)")
    s.add_argument("--canonical", action="store_true", help="write 4-byte entry lengths (larger file)")
    s.set_defaults(func=cmd_sign)

    v = sub.add_parser("verify", help="verify a signature; exit 0 accept, 1 reject")
    v.add_argument("--pk", required=True)
    v.add_argument("--msg-file", required=True)
    v.add_argument("--sig", required=True)
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("attack", help="run an attack on one instance")
    a.add_argument("kind", choices=("cvp", "dnc"))
    a.add_argument("--instance", help="instance JSON file")
    a.add_argument("--random", help="JSON (inline or file) with n, m, R, alphas[, entry_bits, seed]")
    a.add_argument("--search-width", type=int, default=10)
    a.add_argument("--betas", help="divide-and-conquer split sizes, e.g. 1/2")
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.set_defaults(func=cmd_attack)

    b = sub.add_parser("bench", help="experiment tables")
    bsub = b.add_subparsers(dest="bench_command", required=True, parser_class=_Parser)
    t = bsub.add_parser("tables", help="run specs and print CSV or JSON rows")
    t.add_argument("--spec", required=True, help=f"JSON file or preset ({', '.join(bench.PRESETS)})")
    t.add_argument("--format", choices=("csv", "json"), default="csv")
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("--no-timing", action="store_true", help="report wall_ms as 0 for byte-identical reruns")
    t.set_defaults(func=cmd_bench)

    pp = sub.add_parser("params", help="parameter helpers")
    psub = pp.add_subparsers(dest="params_command", required=True, parser_class=_Parser)
    g = psub.add_parser("suggest", help="nonce sizes meeting a failure-rate target")
    g.add_argument("--alphas", required=True)
    g.add_argument("--R", type=int, required=True)
    g.add_argument("--epsilon", required=True, help="target per block, or one value for all")
    g.add_argument("--n", type=int, help="also report completeness for this n")
    g.add_argument("--format", choices=("text", "json"), default="text")
    g.set_defaults(func=cmd_params)
    return p


def _wants_json(argv) -> bool:
    return any(a == "--format=json" for a in argv) or any(
        a == "--format" and nxt == "json" for a, nxt in zip(argv, argv[1:]))


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = _wants_json(argv)
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, DecodeError, NoIntegerSolution, ValueError, KeyError, OSError,
            json.JSONDecodeError) as exc:
        msg = str(exc) if not isinstance(exc, KeyError) else f"missing field {exc}"
        if as_json:
            print(json.dumps({"error": type(exc).__name__, "message": msg, "exit_code": 2}))
        else:
            print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
