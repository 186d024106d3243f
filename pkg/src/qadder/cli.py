"""Command-line entry point: ``qadder {region,optimize,ratesum,simulate,verify}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import capacity as cap
from . import codes, schur, verify

SCHEMA_VERSION = 1
DEFAULT_SEED = 42


class CodeFileError(ValueError):
    pass


# ---------------------------------------------------------------- documents


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def region_document(tag: str, region: cap.RateRegion) -> dict:
    return _jsonable(
        {
            "schema_version": SCHEMA_VERSION,
            "scenario": tag,
            "constraints": [{"a": a, "b": b, "c": c} for a, b, c in region.constraints],
            "vertices": [list(v) for v in region.vertices],
            "notes": list(region.notes),
        }
    )


def _label_doc(label) -> dict:
    if isinstance(label, cap.Prep):
        return {"kind": "prepare", "theta": label.theta, "phi": label.phi}
    if isinstance(label, cap.Unitary):
        return {"kind": "unitary", "theta": label.theta, "phi": label.phi, "lam": label.lam}
    return {"kind": "pauli", "name": str(label)}


def optimize_document(r: cap.OptimizationResult) -> dict:
    e = r.best_ensemble
    return _jsonable(
        {
            "schema_version": SCHEMA_VERSION,
            "scenario": r.scenario.tag if r.scenario.alpha is None else f"ss:{r.scenario.alpha}",
            "mode": r.mode,
            "seed": r.seed,
            "restarts": r.restarts,
            "budget": r.budget,
            "evaluations": r.evaluations,
            "best_value": r.best_value,
            "restart_values": r.restart_values,
            "best_ensemble": {
                "sender1": [{"weight": w, **_label_doc(l)} for w, l in zip(e.p, e.labels1)],
                "sender2": [{"weight": w, **_label_doc(l)} for w, l in zip(e.q, e.labels2)],
            },
        }
    )


def performance_document(code: str, perf: codes.CodePerformance, messages1=None, messages2=None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "code": code,
        "rates": list(perf.rates),
        "average_error": perf.average_error,
        "max_message_error": perf.max_message_error,
        "zero_error": perf.zero_error,
        "per_message_errors": perf.per_message_errors,
    }
    if messages1 is not None:
        doc["messages1"] = [str(m) for m in messages1]
        doc["messages2"] = [str(m) for m in messages2]
    return _jsonable(doc)


RATESUM_HEADER = ["L", "quantum_sum", "classical_sum", "asymptote", "oracle_sum"]


def ratesum_rows(rows: list) -> list:
    return [
        {
            "L": r.L,
            "quantum_sum": r.quantum_sum,
            "classical_sum": r.classical_sum,
            "asymptote": r.asymptote,
            "oracle_sum": r.oracle_sum,
        }
        for r in rows
    ]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def to_csv(doc) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if "rows" in doc:
        w.writerow(RATESUM_HEADER)
        for row in doc["rows"]:
            w.writerow([_fmt(row[k]) for k in RATESUM_HEADER])
    else:
        w.writerow(["key", "value"])
        for k, v in doc.items():
            w.writerow([k, _fmt(v) if not isinstance(v, (list, dict)) else json.dumps(v)])
    return buf.getvalue()


# ---------------------------------------------------------------- code files


def load_code_file(path: str | Path) -> codes.AdderCode:
    """Read ``{"n": int, "book1": [...], "book2": [...], "decoder": {"1,2": [i, j]}}``."""
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise CodeFileError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None

    def where(key):
        for lineno, line in enumerate(text.splitlines(), 1):
            if f'"{key}"' in line:
                return f"{path}: line {lineno}"
        return f"{path}"

    if not isinstance(raw, dict):
        raise CodeFileError(f"{path}: line 1: top level must be an object")
    for key in ("n", "book1", "book2"):
        if key not in raw:
            raise CodeFileError(f"{path}: missing field {key!r}")
    if not isinstance(raw["n"], int) or raw["n"] < 1:
        raise CodeFileError(f"{where('n')}: 'n' must be a positive integer")
    for key in ("book1", "book2"):
        book = raw[key]
        if not isinstance(book, list) or not all(isinstance(w, str) and set(w) <= {"0", "1"} for w in book):
            raise CodeFileError(f"{where(key)}: {key!r} must be a list of bit strings")
    decoder = None
    if raw.get("decoder") is not None:
        decoder = {}
        for k, v in raw["decoder"].items():
            try:
                y = tuple(int(s) for s in k.split(","))
                msg = (int(v[0]), int(v[1]))
            except (ValueError, TypeError, IndexError):
                raise CodeFileError(f"{where(k)}: bad decoder entry {k!r}: {v!r}") from None
            decoder[y] = msg
    try:
        return codes.AdderCode(raw["n"], tuple(raw["book1"]), tuple(raw["book2"]), decoder)
    except ValueError as e:
        raise CodeFileError(f"{path}: {e}") from None


# ---------------------------------------------------------------- commands


def parse_scenario(text: str, alpha: float | None = None) -> cap.Scenario:
    t = text.strip().lower()
    if t in ("unassisted", "classical"):
        return cap.Scenario("unassisted")
    if t == "ghz":
        return cap.Scenario("ghz")
    if t in ("2ebit", "two_ebit"):
        return cap.Scenario("two_ebit")
    if t.startswith("ss"):
        value = t[3:] if t.startswith("ss:") else None
        a = float(value) if value else alpha
        if a is None:
            raise ValueError("sender-sender scenario needs an alpha (ss:<alpha> or --alpha)")
        return cap.Scenario("sender_sender", a)
    raise ValueError(f"unknown scenario {text!r}")


def cmd_region(args) -> dict:
    t = args.scenario.strip().lower()
    if t == "classical":
        return region_document("classical", cap.named_region("classical"))
    if t == "ghz":
        return region_document("ghz", cap.named_region("ghz"))
    if t == "2ebit":
        return region_document("2ebit", cap.named_region("two_ebit_unitary"))
    if t.startswith("ss"):
        s = parse_scenario(t, args.alpha)
        return region_document(f"ss:{s.alpha}", cap.time_sharing_region(s.alpha))
    raise ValueError(f"unknown scenario {args.scenario!r} (classical, ss:<alpha>, ghz, 2ebit)")


def cmd_optimize(args) -> dict:
    s = parse_scenario(args.scenario, args.alpha)
    mode = args.mode or s.modes[0]
    s.check_mode(mode)
    r = cap.optimize_rate_sum(s, restarts=args.restarts, seed=args.seed, budget=args.budget, mode=mode)
    return optimize_document(r)


def _ratesum_values(args) -> list:
    if args.list:
        values = [int(v) for v in args.list.split(",") if v.strip()]
    else:
        values = list(range(1, (args.max or 8) + 1))
    if not values or min(values) < 1:
        raise ValueError("L values must be positive")
    return values


def cmd_ratesum(args) -> dict:
    rows = ratesum_rows(schur.rate_sum_table(_ratesum_values(args)))
    return _jsonable({"schema_version": SCHEMA_VERSION, "columns": RATESUM_HEADER, "rows": rows})


def cmd_simulate(args) -> dict:
    code_arg = args.code
    if code_arg == "dense":
        code = codes.dense_coding_code()
        return performance_document(code_arg, codes.error_probability(code), code.messages1, code.messages2)
    kind, _, path = code_arg.partition(":")
    if not path:
        raise ValueError(f"code {code_arg!r} needs a file (e.g. {kind}:code.json)")
    base = load_code_file(path)
    if kind == "classical":
        return performance_document(code_arg, codes.classical_code_performance(base))
    if kind == "ghz-lift":
        lifted = codes.ghz_lift(base)
        return performance_document(code_arg, codes.error_probability(lifted), lifted.messages1, lifted.messages2)
    if kind == "wrap":
        doc = performance_document(code_arg, codes.wrap_shared_randomness(base).performance())
        doc["base_average_error"] = codes.classical_code_performance(base).average_error
        return doc
    raise ValueError(f"unknown code kind {kind!r} (dense, classical:, ghz-lift:, wrap:)")


def cmd_verify(args) -> tuple:
    sign = 1 if args.corrupt_psi_minus else -1
    results = verify.run_all(args.seed, psi_minus_sign=sign)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "seed": args.seed,
        "suites": [
            {"name": r.name, "passed": r.passed, "total": r.total, "worst": r.worst, "ok": r.ok} for r in results
        ],
        "ok": all(r.ok for r in results),
    }
    return _jsonable(doc), doc["ok"]


def build_parser() -> argparse.ArgumentParser:
    env_seed = os.environ.get("QADDER_SEED")
    default_seed = int(env_seed) if env_seed else DEFAULT_SEED

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--seed", type=int, default=default_seed)

    p = argparse.ArgumentParser(prog="qadder", description="Quantum binary adder channel laboratory.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("region", parents=[common], help="constant rate regions")
    r.add_argument("--scenario", required=True, help="classical, ss:<alpha>, ghz or 2ebit")
    r.add_argument("--alpha", type=float)

    o = sub.add_parser("optimize", parents=[common], help="maximize the joint Holevo quantity")
    o.add_argument("--scenario", required=True, help="unassisted, ss:<alpha>, ghz or 2ebit")
    o.add_argument("--mode", choices=cap.MODES)
    o.add_argument("--alpha", type=float)
    o.add_argument("--restarts", type=int, default=20)
    o.add_argument("--budget", type=int, default=20000)

    t = sub.add_parser("ratesum", parents=[common], help="many-sender rate sums")
    g = t.add_mutually_exclusive_group()
    g.add_argument("--max", type=int)
    g.add_argument("--list")

    s = sub.add_parser("simulate", parents=[common], help="exact code error probabilities")
    s.add_argument("--code", required=True, help="dense, classical:<file>, ghz-lift:<file> or wrap:<file>")

    v = sub.add_parser("verify", parents=[common], help="run the built-in check suites")
    v.add_argument("--corrupt-psi-minus", action="store_true", help=argparse.SUPPRESS)
    return p


def _emit(doc, fmt: str, out: str | None) -> None:
    text = to_csv(doc) if fmt == "csv" else json.dumps(doc, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("seed", "restarts", "budget", "max"):
        v = getattr(args, name, None)
        if v is not None and v < (0 if name == "seed" else 1):
            parser.error(f"--{name} must be positive")
    fmt = args.format or ("csv" if args.command == "ratesum" else "json")
    try:
        if args.command == "verify":
            doc, ok = cmd_verify(args)
            for suite in doc["suites"]:
                status = "PASS" if suite["ok"] else "FAIL"
                print(f"{status} {suite['name']}: {suite['passed']}/{suite['total']} (worst {suite['worst']:.3g})",
                      file=sys.stderr)
            _emit(doc, fmt, args.out)
            return 0 if ok else 1
        handler = {"region": cmd_region, "optimize": cmd_optimize, "ratesum": cmd_ratesum, "simulate": cmd_simulate}
        doc = handler[args.command](args)
    except (ValueError, OSError) as e:
        parser.error(str(e))
    _emit(doc, fmt, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
