"""Command-line entry point: build, run, verify, resources, period, factor."""
from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

import numpy as np

from .blocks import BLOCKS, PreconditionError, build_block, get_block, visible
from .circuit import Circuit, CircuitError, resources
from .driver import factor, precheck
from .netlist import emit_netlist
from .shor import ShorParams, build_hadamard_layer, build_inverse_qft, pipeline_netlist
from .simulate import run_block, sample_period, verify_block

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_MISMATCH = 0, 2, 3, 4
MAX_N = 1 << 16
MAX_EXHAUSTIVE_W = 5
TABLE_ROW = {"implementation": "Current Work", "depth": "O(n^3)", "gates": "O(n^3)", "qubits": "O(n)"}


class UsageError(Exception):
    pass


def _sizes(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or a range like 2..8, got {text!r}") from None


def _assignments(items: list[str]) -> dict[str, int]:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise UsageError(f"expected NAME=VALUE, got {item!r}")
        try:
            out[name] = int(value, 10)
        except ValueError:
            raise UsageError(f"{name}: {value!r} is not a decimal integer") from None
    return out


def _check_N(N: int | None) -> None:
    if N is not None and not 2 <= N < MAX_N:
        raise UsageError(f"N must satisfy 2 <= N < {MAX_N}")


def _params(args) -> dict:
    _check_N(args.N)
    p = {}
    if args.N is not None:
        p["N"] = args.N
    if args.A is not None:
        p["A"] = args.A
    if getattr(args, "exp_bits", None) is not None:
        p["exp_bits"] = args.exp_bits
    return p


def _width(args, block: str) -> int:
    sizes = _size_list(args, block)
    if len(sizes) != 1:
        raise UsageError("give a single size here, not a range")
    return sizes[0]


def _size_list(args, block: str) -> list[int]:
    if block in ("modexp", "pipeline"):
        return [0]
    if args.w is not None:
        return args.w
    if args.n is not None:
        return [n + 1 for n in args.n]
    raise UsageError(f"{block} needs --w or --n")


def _shor(p: dict) -> ShorParams:
    if "N" not in p or "A" not in p:
        raise UsageError("--N and --A are required")
    try:
        return ShorParams(p["N"], p["A"])
    except CircuitError as exc:
        raise UsageError(str(exc)) from None


def _circuit(block: str, w: int, p: dict) -> Circuit:
    if block == "hadamard":
        return build_hadamard_layer(w)
    if block == "iqft":
        return build_inverse_qft(w)
    if block == "modexp":
        _shor(p)
    return build_block(block, w, p).circuit


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _print(args, data, text: str) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def cmd_build(args) -> int:
    p = _params(args)
    if args.block == "pipeline":
        _emit(pipeline_netlist(_shor(p), p.get("exp_bits")), args.output)
        return EXIT_OK
    w = _width(args, args.block)
    circuit = _circuit(args.block, w, p)
    label = f"{args.block} N={p['N']} A={p['A']}" if args.block == "modexp" else f"{args.block} w={w}"
    _emit(emit_netlist(circuit, [label]), args.output)
    return EXIT_OK


def cmd_run(args) -> int:
    p = _params(args)
    w = _width(args, args.block)
    if args.block == "modexp":
        _shor(p)
    values = visible(run_block(args.block, w, _assignments(args.inputs), **p))
    _print(args, values, " ".join(f"{k}={v}" for k, v in values.items()))
    return EXIT_OK


def cmd_verify(args) -> int:
    p = _params(args)
    w = _width(args, args.block)
    if args.block == "modexp":
        _shor(p)
    samples = args.samples
    if samples is None and args.block != "modexp" and w > MAX_EXHAUSTIVE_W:
        if args.exhaustive:
            raise UsageError(f"exhaustive verification is limited to w <= {MAX_EXHAUSTIVE_W}; use --samples")
        samples = 1000
    report = verify_block(args.block, w, samples=samples, seed=args.seed, params=p)
    mode = "exhaustive" if samples is None else f"{samples} samples, seed {args.seed}"
    verdict = "PASS" if report.passed else "FAIL"
    text = f"{verdict} {args.block} w={w}: {report.cases} cases ({mode}), {report.mismatches} mismatches"
    if report.counterexample:
        text += f"\nfirst counterexample: {report.counterexample}"
    data = {"block": args.block, "w": w, "mode": mode, "cases": report.cases,
            "mismatches": report.mismatches, "passed": report.passed,
            "counterexample": report.counterexample}
    _print(args, data, text)
    return EXIT_OK if report.passed else EXIT_MISMATCH


def _fit(xs, ys) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def cmd_resources(args) -> int:
    p = _params(args)
    rows = []
    if args.block in ("modexp", "pipeline"):
        if args.n is None and "N" not in p:
            raise UsageError(f"{args.block} needs --n (sweeps N = 2^n - 1, A = 2) or --N/--A")
        pairs = [(p["N"], p["A"])] if args.n is None else [((1 << n) - 1, 2) for n in args.n]
        for N, A in pairs:
            sp = _shor({"N": N, "A": A})
            if args.block == "modexp":
                circuit = build_block("modexp", 0, {"N": N, "A": A, **_exp(p)}).circuit
            else:
                from .shor import build_pipeline
                circuit = build_pipeline(sp, p.get("exp_bits"))[0]
            rows.append(resources(circuit, args.block, sp.n).as_dict())
    else:
        for w in _size_list(args, args.block):
            rows.append(resources(_circuit(args.block, w, p), args.block, w).as_dict())
    data = {"rows": rows, "reference": TABLE_ROW}
    lines = [f"{'size':>5} {'width':>6} {'total':>8} {'depth':>7}  counts"]
    for r in rows:
        counts = " ".join(f"{k}={v}" for k, v in r["counts"].items())
        lines.append(f"{r['n']:>5} {r['width']:>6} {r['total']:>8} {r['depth']:>7}  {counts}")
    if args.fit:
        if len(rows) < 2:
            raise UsageError("--fit needs at least two sizes")
        slope = _fit([r["n"] for r in rows], [r["total"] for r in rows])
        data["slope"] = slope
        lines.append(f"log-log slope of total gates vs size: {slope:.3f}")
    lines.append("reference: {implementation}: depth {depth}, gates {gates}, qubits {qubits}".format(**TABLE_ROW))
    _print(args, data, "\n".join(lines))
    return EXIT_OK


def _exp(p: dict) -> dict:
    return {"exp_bits": p["exp_bits"]} if "exp_bits" in p else {}


def cmd_period(args) -> int:
    _check_N(args.N_pos)
    sp = _shor({"N": args.N_pos, "A": args.A_pos})
    rng = np.random.default_rng(args.seed)
    records = [sample_period(sp, int(rng.integers(2**32)), args.exp_bits) for _ in range(args.shots)]
    hist = Counter(r.m for r in records)
    periods = Counter(r.r for r in records if r.r is not None)
    M = 1 << records[0].exp_bits if records else 0
    data = {
        "N": sp.N, "A": sp.A, "seed": args.seed, "shots": args.shots, "M": M,
        "histogram": {str(m): c for m, c in sorted(hist.items())},
        "periods": {str(r): c for r, c in sorted(periods.items())},
        "records": [r.as_dict() for r in records],
    }
    lines = [f"N={sp.N} A={sp.A} M={M} shots={args.shots} seed={args.seed}"]
    lines += [f"m={m:>5}  {c}" for m, c in sorted(hist.items())]
    best = periods.most_common(1)
    lines.append(f"r={best[0][0]} ({best[0][1]} shots)" if best else "no period recovered")
    _print(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_factor(args) -> int:
    N = args.N_pos
    _check_N(N)
    if precheck(N).status == "prime":
        raise UsageError(f"N={N} is prime")
    res = factor(N, attempts=args.attempts, seed=args.seed, exp_bits=args.exp_bits)
    if res.factors:
        text = f"{res.factors[0]} x {res.factors[1]}"
    else:
        text = f"no factor found for {N} after {res.attempts} attempts"
    _print(args, res.as_dict(), text)
    return EXIT_OK


def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--json", action="store_true", help="structured output")


def _sized(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("block")
    sp.add_argument("--w", type=_sizes, help="register width (or range a..b)")
    sp.add_argument("--n", type=_sizes, help="bit size n (w = n + 1; or range a..b)")
    sp.add_argument("--N", type=int, help="modulus")
    sp.add_argument("--A", type=int, help="base or classical multiplicand")
    sp.add_argument("--exp-bits", type=int, dest="exp_bits", help="exponent register width (default n + 1)")
    _common(sp)


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="revshor", description="Reversible arithmetic and period-finding circuits.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("build", help="write a QNET v1 netlist")
    _sized(sp)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("run", help="simulate a block on one input")
    _sized(sp)
    sp.add_argument("inputs", nargs="*", metavar="NAME=VALUE")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("verify", help="compare a block against its integer oracle")
    _sized(sp)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("resources", help="gate counts, depth and width")
    _sized(sp)
    sp.add_argument("--fit", action="store_true", help="log-log slope of total gates")
    sp.set_defaults(func=cmd_resources)

    sp = sub.add_parser("period", help="sample period-finding runs")
    sp.add_argument("N_pos", type=int, metavar="N")
    sp.add_argument("A_pos", type=int, metavar="A")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--shots", type=int, default=1)
    sp.add_argument("--exp-bits", type=int, dest="exp_bits")
    _common(sp)
    sp.set_defaults(func=cmd_period)

    sp = sub.add_parser("factor", help="factor N end to end")
    sp.add_argument("N_pos", type=int, metavar="N")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--attempts", type=int, default=25)
    sp.add_argument("--exp-bits", type=int, dest="exp_bits")
    _common(sp)
    sp.set_defaults(func=cmd_factor)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = make_parser()
    args, extra = ap.parse_known_args(argv)
    if extra:
        if args.command != "run" or any(a.startswith("-") for a in extra):
            ap.error(f"unrecognized arguments: {' '.join(extra)}")
        args.inputs = [*args.inputs, *extra]
    block = getattr(args, "block", None)
    if block is not None and block not in BLOCKS and block not in ("hadamard", "iqft", "pipeline"):
        try:
            get_block(block)
        except KeyError as exc:
            print(f"error: {exc.args[0]}", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (UsageError, CircuitError, ValueError, KeyError) as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
