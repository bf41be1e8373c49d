"""Command-line interface: simulate, decide, compress, verify, analyze, gen."""
from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from typing import Any, Sequence

from . import __version__
from .circuit import Circuit, CircuitError, depth, size, validate
from .circuit_io import ParseError, emit_circuit, gen_random, read_circuit, write_circuit
from .decider import Threshold, decide, decide_direct, preset_threshold
from .lightcone import bounds_hold, dependency_graph, greedy_coloring
from .ring import Cyclotomic
from .simulator import marginal_probability, run_statevector
from .teleport import compress_to_depth3, verify_compression

MAX_SWEEP_INPUTS = 12


def _clean(value: Any) -> Any:
    """JSON-safe copy with floats rounded to 12 significant digits."""
    if isinstance(value, Cyclotomic):
        return {"value": _clean(float(value) if value.is_real else str(value)), "exact": str(value)}
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def _metrics(c: Circuit) -> dict:
    return {"num_qubits": c.num_qubits, "size": size(c), "depth": depth(c)}


def _load(path: str) -> Circuit:
    c = read_circuit(path)
    problems = validate(c)
    if problems:
        raise CircuitError(problems[0])
    return c


def _input(c: Circuit, bits: str | None) -> str:
    if bits is None:
        bits = "0" * len(c.inputs)
    c.initial_bits(bits)
    return bits


def _parse_marginal(spec: str) -> tuple[list[int], str]:
    try:
        qubits, outcome = spec.split("=")
        subset = [int(q) for q in qubits.split(",")]
    except ValueError:
        raise CircuitError(f"bad --marginal {spec!r}; expected e.g. 0,2=01") from None
    if len(outcome) != len(subset) or set(outcome) - {"0", "1"}:
        raise CircuitError(f"bad --marginal {spec!r}: outcome must be {len(subset)} bits")
    return subset, outcome


def cmd_simulate(args: argparse.Namespace) -> dict:
    c = _load(args.file)
    x = _input(c, args.input)
    state = run_statevector(c, x, args.backend)
    results: dict[str, Any] = {
        "input": x,
        "acceptance_probability": marginal_probability(
            c, x, list(c.outputs), "0" * len(c.outputs), state=state
        ),
    }
    marg = {}
    for spec in args.marginal or []:
        subset, outcome = _parse_marginal(spec)
        marg[spec] = marginal_probability(c, x, subset, outcome, state=state)
    if marg:
        results["marginals"] = marg
    return {"circuit": _metrics(c), "results": results, "backend": args.backend}


def cmd_decide(args: argparse.Namespace) -> dict:
    c = _load(args.file)
    x = _input(c, args.input)
    if args.mode == "direct":
        decision = decide_direct(c, x, args.backend)
    else:
        if args.t is not None:
            thr = Threshold.parse(args.t)
        else:
            thr = preset_threshold(args.mode or "eqnc", c, args.eps)
        decision = decide(c, x, thr, args.backend)
    return {
        "circuit": _metrics(c),
        "results": {"input": x, "decision": decision.to_dict()},
        "backend": args.backend,
    }


def cmd_compress(args: argparse.Namespace) -> dict:
    c = _load(args.file)
    res = compress_to_depth3(c)
    out: dict[str, Any] = {"compression": res.to_dict(), "cprime": _metrics(res.cprime)}
    if args.output:
        write_circuit(res.cprime, args.output)
        sidecar = args.output + ".json"
        with open(sidecar, "w", encoding="utf-8") as fh:
            json.dump(res.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        out["written"] = [args.output, sidecar]
    else:
        out["cprime_text"] = emit_circuit(res.cprime)
    return {"circuit": _metrics(c), "results": out}


def cmd_verify(args: argparse.Namespace) -> dict:
    c = _load(args.file)
    if args.all_inputs:
        if len(c.inputs) > MAX_SWEEP_INPUTS:
            raise CircuitError(f"--all-inputs needs at most {MAX_SWEEP_INPUTS} inputs")
        xs = ["".join(b) for b in itertools.product("01", repeat=len(c.inputs))]
    else:
        xs = [_input(c, args.input)]
    res = compress_to_depth3(c)
    runs = []
    for x in xs:
        report = verify_compression(c, x, args.backend, result=res)
        report["input"] = x
        runs.append(report)
    worst = max(float(r["abs_error"]) for r in runs)
    return {
        "circuit": _metrics(c),
        "results": {
            "k": res.k,
            "cprime": _metrics(res.cprime),
            "max_abs_error": worst,
            "runs": runs,
        },
        "backend": args.backend,
    }


def cmd_analyze(args: argparse.Namespace) -> dict:
    c = _load(args.file)
    g = dependency_graph(c)
    coloring = greedy_coloring(g)
    return {
        "circuit": {**_metrics(c), "max_gate_width": c.max_width},
        "results": {
            "cone_sizes": {q: len(g.cones[q]) for q in g.vertices},
            "cones": {q: sorted(g.cones[q]) for q in g.vertices},
            "edges": sorted(sorted(e) for e in g.edges),
            "degree": g.degree,
            "D": g.num_colors,
            "coloring": coloring,
            "bounds": bounds_hold(c, g),
        },
    }


def cmd_gen(args: argparse.Namespace) -> dict:
    c = gen_random(args.qubits, args.depth, args.gateset, args.seed, max_gates=args.max_gates)
    text = emit_circuit(c)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return {"circuit": _metrics(c), "results": {"written": args.output}, "seed": args.seed}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shallowq", description=__doc__)
    p.add_argument("--version", action="version", version=f"shallowq {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, backend: bool = True) -> None:
        sp.add_argument("--json", metavar="PATH", help="write the JSON report here")
        sp.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
        if backend:
            sp.add_argument("--backend", choices=("float", "exact"), default="float")

    sp = sub.add_parser("simulate", help="acceptance probability and marginals")
    sp.add_argument("file")
    sp.add_argument("--input", help="input bits, one per input qubit (default all 0)")
    sp.add_argument("--marginal", action="append", metavar="Q,Q=BITS")
    common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("decide", help="lightcone decision procedure")
    sp.add_argument("file")
    sp.add_argument("--input")
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--t", help="rational threshold such as 1/8")
    grp.add_argument("--mode", choices=("eqnc", "bqnc-half", "master", "direct"))
    sp.add_argument("--eps", help="epsilon for --mode master")
    common(sp)
    sp.set_defaults(func=cmd_decide)

    sp = sub.add_parser("compress", help="depth-3 teleportation compression")
    sp.add_argument("file")
    sp.add_argument("-o", "--output", help="write C' here (and a .json sidecar)")
    common(sp, backend=False)
    sp.set_defaults(func=cmd_compress)

    sp = sub.add_parser("verify", help="check Pr[C'] = 4^-k Pr[C] with the oracle")
    sp.add_argument("file")
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--input")
    grp.add_argument("--all-inputs", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("analyze", help="size, depth, lightcones and coloring")
    sp.add_argument("file")
    common(sp, backend=False)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("gen", help="seeded random circuit")
    sp.add_argument("--qubits", type=int, required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--gateset", default="clifford+t", choices=("clifford+t", "full"))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-gates", type=int)
    sp.add_argument("-o", "--output")
    common(sp, backend=False)
    sp.set_defaults(func=cmd_gen)
    return p


def _print_table(report: dict, stream) -> None:
    def walk(prefix: str, value: Any) -> None:
        if isinstance(value, dict) and value and not {"value", "exact"} == set(value):
            for k, v in value.items():
                walk(f"{prefix}.{k}" if prefix else str(k), v)
        elif isinstance(value, str) and "\n" in value:
            print(f"{prefix}:", file=stream)
            print(value.rstrip("\n"), file=stream)
        else:
            print(f"{prefix}: {json.dumps(value)}", file=stream)

    walk("", report)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        body = args.func(args)
    except (ParseError, CircuitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    elapsed = time.perf_counter() - start
    report = {"command": args.command, **_clean(body)}
    report.setdefault("backend", None)
    report.setdefault("seed", None)
    if args.timing:
        report["timing_s"] = elapsed
    # gen writes the circuit itself to stdout when no -o is given
    out = sys.stderr if args.command == "gen" and not args.output else sys.stdout
    _print_table(report, out)
    if not args.timing:
        print(f"time: {elapsed:.3f}s", file=out)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
