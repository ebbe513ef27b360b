"""Command-line front end.

Bases and points are given as arithmetic expressions (see altbase.expr),
so irrational inputs like ``(1+sqrt(13))/2`` keep full double precision.
Every command prints a human-readable summary by default and a
deterministic JSON document with ``--json``; plot data goes to CSV files.

Exit codes: 0 success, 2 expression parse error, 3 domain error, 4 numeric
failure, 5 enumeration too large.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Iterable

from . import core, digitset, measure, oracle
from .core import EPS_SNAP, AlternateBase, StatePoint
from .errors import (
    AlphabetError,
    DomainError,
    NotAllowable,
    ParseError,
    SearchTooLarge,
    SingularSystem,
    TruncationTooShallow,
)
from .expr import parse_base_list, parse_expression

SCHEMA_VERSION = "1"
SAMPLES_PER_UNIT = 2048

EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_NUMERIC = 4
EXIT_RESOURCE = 5


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _to_json(value) -> str:
    """Minimal deterministic JSON emitter; reals carry 17 significant digits."""
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"cannot serialize {value!r}")
        return _fmt(value)
    if isinstance(value, str):
        out = ['"']
        for ch in value:
            if ch in '"\\':
                out.append("\\" + ch)
            elif ord(ch) < 0x20:
                out.append(f"\\u{ord(ch):04x}")
            else:
                out.append(ch)
        out.append('"')
        return "".join(out)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_to_json(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ",".join(f"{_to_json(str(k))}:{_to_json(v)}" for k, v in value.items()) + "}"
    raise TypeError(f"cannot serialize {type(value)!r}")


def run_output(command: str, base: AlternateBase, payload: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "base": list(base.betas),
        "payload": payload,
    }


def _emit(args, doc: dict, human: Iterable[str]) -> None:
    if args.json:
        print(_to_json(doc))
    else:
        for line in human:
            print(line)


def _write_csv(path: str, header: str, rows: Iterable[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")


def _parse_base(args) -> AlternateBase:
    return core.new_base(parse_base_list(args.base))


def _digit_string(digits) -> str:
    if all(d <= 9 for d in digits):
        return "".join(str(d) for d in digits)
    return ",".join(str(d) for d in digits)


def _sample_grid(lo: float, hi: float, cuts: Iterable[float], per_unit: int | None = None) -> list[float]:
    """Uniform samples plus both sides of every interior cut."""
    rate = per_unit or SAMPLES_PER_UNIT
    n = max(2, int(round(rate * (hi - lo))))
    pts = [lo + (hi - lo) * k / n for k in range(n)]
    for c in cuts:
        for q in (c - EPS_SNAP, c + EPS_SNAP):
            if lo <= q < hi:
                pts.append(q)
    return sorted(set(pts))


def cmd_expand(args) -> None:
    base = _parse_base(args)
    x = parse_expression(args.x).value
    if args.mode == "greedy":
        word = core.greedy_expand(base, x, args.digits)
    else:
        word = core.lazy_expand(base, x, args.digits)
    value = core.evaluate(base, word)
    prod = math.prod(base.beta(k) for k in range(len(word)))
    residual_bound = base.xsup(len(word)) / prod
    doc = run_output(
        "expand",
        base,
        {
            "mode": args.mode,
            "x": x,
            "digits": list(word.digits),
            "value": value,
            "residual_bound": residual_bound,
        },
    )
    _emit(
        args,
        doc,
        [
            f"digits: {_digit_string(word.digits)}",
            f"partial value: {_fmt(value)}",
            f"residual bound: {_fmt(residual_bound)}",
        ],
    )


def cmd_density(args) -> None:
    base = _parse_base(args)
    pw = measure.compose_map(base, args.slot)
    spec = measure.gora_density(pw, args.truncation)
    if args.csv:
        pts = _sample_grid(0.0, 1.0, spec.thresholds, args.samples)
        _write_csv(args.csv, "x,density", ((x, measure.density_eval(spec, x)) for x in pts))
    doc = run_output(
        "density",
        base,
        {
            "slot": args.slot,
            "K": spec.K,
            "c": list(spec.c),
            "d": list(spec.d),
            "C": spec.C,
            "slope": spec.B,
            "truncation": spec.M,
        },
    )
    lines = [
        f"slot {args.slot}: K={spec.K}, C={_fmt(spec.C)}, slope={_fmt(spec.B)}",
        "c: " + " ".join(_fmt(c) for c in spec.c),
        "d: " + " ".join(_fmt(d) for d in spec.d),
    ]
    if args.csv:
        lines.append(f"density samples written to {args.csv}")
    _emit(args, doc, lines)


def _parse_interval(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError("interval needs two comma-separated expressions", 0)
    return parse_expression(parts[0]).value, parse_expression(parts[1]).value


def cmd_measure(args) -> None:
    base = _parse_base(args)
    a, b = _parse_interval(args.interval)
    spec = measure.gora_density(measure.compose_map(base, args.slot), args.truncation)
    value = measure.measure_interval(spec, a, b)
    doc = run_output("measure", base, {"slot": args.slot, "a": a, "b": b, "value": value})
    _emit(args, doc, [f"measure of slot {args.slot} interval [{_fmt(a)}, {_fmt(b)}): {_fmt(value)}"])


def cmd_freq(args) -> None:
    base = _parse_base(args)
    value = measure.frequency(base, args.digit)
    payload = {"digit": args.digit, "frequency": value}
    lines = [f"digit {args.digit} frequency: {_fmt(value)}"]
    if args.empirical:
        emp = oracle.birkhoff_frequency(base, args.x0, args.digit, args.empirical, args.seed)
        payload["empirical"] = emp
        payload["iterations"] = args.empirical
        payload["seed"] = args.seed
        lines.append(f"empirical over {args.empirical} steps: {_fmt(emp)}")
    _emit(args, run_output("freq", base, payload), lines)


def cmd_entropy(args) -> None:
    base = _parse_base(args)
    value = measure.entropy(base)
    _emit(
        args,
        run_output("entropy", base, {"entropy": value}),
        [f"entropy: {_fmt(value)}"],
    )


def cmd_compare(args) -> None:
    base = _parse_base(args)
    report = digitset.compare_transforms(base)
    payload = {
        "coincide": not report.intervals,
        "intervals": [list(iv) for iv in report.intervals],
        "witnesses": [
            {"x": w.x, "blocked_image": w.delta_image, "period_image": w.composed_image}
            for w in report.witnesses
        ],
    }
    lines = []
    if not report.intervals:
        lines.append("the blocked and period transformations coincide")
    else:
        lines.append(f"{len(report.intervals)} disagreement interval(s):")
        for iv, w in zip(report.intervals, report.witnesses):
            lines.append(
                f"  [{_fmt(iv[0])}, {_fmt(iv[1])})"
                f"  witness x={_fmt(w.x)}: {_fmt(w.delta_image)} vs {_fmt(w.composed_image)}"
            )
    _emit(args, run_output("compare", base, payload), lines)


def cmd_orbit(args) -> None:
    base = _parse_base(args)
    x = parse_expression(args.x).value
    s = StatePoint(0, x)
    step = core.greedy_step if args.mode == "greedy" else core.lazy_step
    rows = []
    for k in range(args.steps):
        nxt, d = step(base, s)
        rows.append((k, s.slot, s.value, d))
        s = nxt
    if args.csv:
        _write_csv(args.csv, "step,slot,x,digit", rows)
    doc = run_output(
        "orbit",
        base,
        {
            "mode": args.mode,
            "x": x,
            "steps": args.steps,
            "trajectory": [{"step": k, "slot": i, "x": v, "digit": d} for k, i, v, d in rows],
        },
    )
    lines = [f"{k}: slot {i} x={_fmt(v)} digit {d}" for k, i, v, d in rows]
    if args.csv:
        lines.append(f"trajectory written to {args.csv}")
    _emit(args, doc, lines)


def _greedy_branches(base: AlternateBase, i: int) -> list[tuple[float, float, int]]:
    b = base.betas[i]
    m = base.alphabets[i]
    cuts = [k / b for k in range(m + 1)] + [base.xmax[i]]
    return [(cuts[k], cuts[k + 1], k) for k in range(m + 1)]


def _lazy_branches(base: AlternateBase, i: int) -> list[tuple[float, float, int]]:
    b = base.betas[i]
    m = base.alphabets[i]
    hi_next = base.xsup(i + 1)
    cuts = [0.0] + [(hi_next + k) / b for k in range(m + 1)]
    return [(cuts[k], cuts[k + 1], k) for k in range(m + 1)]


def cmd_graph(args) -> None:
    base = _parse_base(args)
    written = []
    for kind in ("greedy", "lazy") if args.mode == "both" else (args.mode,):
        rows = []
        for i in range(base.p):
            branches = _greedy_branches(base, i) if kind == "greedy" else _lazy_branches(base, i)
            cuts = [lo for lo, _, _ in branches[1:]]
            for lo, hi, k in branches:
                for x in _sample_grid(lo, hi, cuts, args.samples):
                    if lo <= x < hi:
                        rows.append((x, base.betas[i] * x - k, k, i))
        stem, ext = os.path.splitext(args.csv)
        path = f"{stem}_{kind}{ext or '.csv'}" if args.mode == "both" else args.csv
        _write_csv(path, "x,y,branch_index,slot", rows)
        written.append(path)
    doc = run_output("graph", base, {"mode": args.mode, "files": written})
    _emit(args, doc, [f"graph samples written to {p}" for p in written])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="altbase", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    default_seed = int(os.environ.get("ALTBASE_SEED", "0"))

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.add_argument("--base", required=True, help="comma-separated base expressions")
        p.add_argument("--json", action="store_true", help="emit a JSON document")
        p.set_defaults(fn=fn)
        return p

    p = add("expand", cmd_expand, help="greedy or lazy digit expansion")
    p.add_argument("--x", required=True, help="point to expand")
    p.add_argument("--mode", choices=("greedy", "lazy"), default="greedy")
    p.add_argument("--digits", type=int, default=16)

    p = add("density", cmd_density, help="invariant density data for one slot")
    p.add_argument("--slot", type=int, default=0)
    p.add_argument("--truncation", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--csv", default=None)

    p = add("measure", cmd_measure, help="invariant measure of an interval")
    p.add_argument("--slot", type=int, default=0)
    p.add_argument("--interval", required=True, help="two expressions: a,b")
    p.add_argument("--truncation", type=int, default=None)

    p = add("freq", cmd_freq, help="digit frequency, closed form and empirical")
    p.add_argument("--digit", type=int, required=True)
    p.add_argument("--empirical", type=int, default=None, help="orbit length")
    p.add_argument("--x0", type=float, default=None)
    p.add_argument("--seed", type=int, default=default_seed)

    add("entropy", cmd_entropy, help="entropy of the dynamics")

    add("compare", cmd_compare, help="blocked vs period transformation")

    p = add("orbit", cmd_orbit, help="trajectory of one point")
    p.add_argument("--x", required=True)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--mode", choices=("greedy", "lazy"), default="greedy")
    p.add_argument("--csv", default=None)

    p = add("graph", cmd_graph, help="sampled transformation graphs as CSV")
    p.add_argument("--mode", choices=("greedy", "lazy", "both"), default="both")
    p.add_argument("--samples", type=int, default=None, help="samples per unit length")
    p.add_argument("--csv", required=True)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.fn(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DomainError, AlphabetError, NotAllowable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (SingularSystem, TruncationTooShallow) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except SearchTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    return 0


if __name__ == "__main__":
    sys.exit(main())
