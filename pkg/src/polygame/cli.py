"""Command-line front end.

Exit codes: 0 success, 2 invalid input (error object on stderr),
3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

import numpy as np

from polygame import applications as apps
from polygame.brute import brute_solve
from polygame.decompose import decompose_base_point
from polygame.errors import CapExceeded, InvalidInput, PolygameError
from polygame.fastpaths import (
    PermutationSampler,
    ZetaIndex,
    monotone_value,
    zeta_solve,
    zeta_witness,
)
from polygame.games import GameSpec, Variant, is_player2_optimal, ratio_extremize, solve
from polygame.io import dumps, instance_from_json, read_json
from polygame.setfunc import DEFAULT_TOL, base_violation, verify_structure

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CAP = 3


class ReportedFailure(InvalidInput):
    """A check ran and failed; carries the report for stdout."""

    code = "check-failed"

    def __init__(self, message, report, **details):
        super().__init__(message, **details)
        self.report = report


def _common(p: argparse.ArgumentParser):
    p.add_argument("input", nargs="?", default="-", help="instance JSON path, or - for stdin")
    p.add_argument("--variant", help="maxmin-poly, maxmin-contra, minmax-contra, minmax-poly")
    p.add_argument("--zeta", help="payoff index: JSON list inline or a path")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--cap", type=int, default=None, help="enumeration cap on n")
    p.add_argument("--format", choices=("json", "table"), default="json")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--fast", action="store_true", help="force the monotone fast path")
    mode.add_argument("--brute", action="store_true", help="force the LP oracle")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polygame",
                                     description="Zero-sum games on polymatroid bases.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, hlp in [("solve", "value and optimal strategies"),
                      ("value", "game value only"),
                      ("verify", "check normalization, monotonicity and kind")]:
        _common(sub.add_parser(name, help=hlp))
    p = sub.add_parser("decompose", help="write a base point as a vertex mixture")
    _common(p)
    p.add_argument("--point", help="JSON list; defaults to the optimal Player 1 strategy")
    p = sub.add_parser("check-optimal", help="test a solution's strategies for optimality")
    _common(p)
    p.add_argument("--solution", required=True, help="solution JSON (path or inline)")
    p = sub.add_parser("sample", help="draw permutations from the equalizing strategy")
    _common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--histogram", help="write a JSON histogram of the draws to this path")
    p = sub.add_parser("app", help="applied problems")
    p.add_argument("name", choices=("search", "varspeed", "rescue", "throughput", "queue"))
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--brute", action="store_true", help="solve by enumeration, not the fast path")
    return parser


def _json_arg(text):
    if text is None:
        return None
    return read_json(text)


def _load(args):
    inst = instance_from_json(read_json(args.input))
    variant = args.variant or inst.variant or Variant.default_for(inst.fn.kind)
    spec = GameSpec(variant, inst.fn, inst.w)
    zeta = _json_arg(getattr(args, "zeta", None))
    if zeta is None:
        zeta = inst.zeta
    zeta = None if zeta is None else ZetaIndex.for_kind(zeta, spec.fn.kind)
    return inst, spec, zeta


def _solve(args, spec, zeta):
    if args.fast:
        if zeta is not None:
            return zeta_solve(spec, zeta, args.tol)
        return monotone_value(spec)[1]
    return solve(spec, args.tol, args.cap)


def _mixture(terms):
    return [{"probability": t, "order": list(sigma)} for t, sigma in terms]


def cmd_solve(args):
    _, spec, zeta = _load(args)
    if args.brute:
        res = brute_solve(spec)
        return {"variant": spec.variant.value, "method": "brute", "value": res.value,
                "gap": res.gap,
                "rows": _mixture(sorted((p, s) for s, p in res.rows.items())),
                "theta": res.theta.tolist()}
    return _solve(args, spec, zeta).to_json()


def cmd_value(args):
    out = cmd_solve(args)
    return {"variant": out["variant"], "value": out["value"]}


def cmd_decompose(args):
    inst, spec, zeta = _load(args)
    point = _json_arg(args.point)
    if point is None:
        point = inst.doc.get("x")
    if point is None:
        point = _solve(args, spec, zeta).x
    terms = decompose_base_point(spec.fn, point, args.tol)
    return {"x": list(map(float, point)), "terms": _mixture(terms)}


def cmd_check_optimal(args):
    _, spec, _ = _load(args)
    sol = _json_arg(args.solution)
    res = ratio_extremize(spec.governing, spec.w, spec.sense, args.tol, args.cap)
    report = {"value": res.value}
    if "y" in sol:
        report["player2_optimal"] = is_player2_optimal(np.asarray(sol["y"]), spec, args.tol,
                                                       args.cap, family=res.family)
    if "x" in sol:
        x = np.asarray(sol["x"], dtype=np.float64)
        scale = max(1.0, abs(res.value))
        in_base = base_violation(spec.fn, x, args.tol * scale, args.cap) is None
        pay = spec.w * x
        if spec.variant.player1_maximizes:
            secures = float(pay.min()) >= res.value - args.tol * scale
        else:
            secures = float(pay.max()) <= res.value + args.tol * scale
        report["player1_optimal"] = bool(in_base and secures)
    checks = [v for k, v in report.items() if k.endswith("_optimal")]
    if not checks:
        raise InvalidInput("solution has neither 'x' nor 'y'")
    if not all(checks):
        raise ReportedFailure("strategy is not optimal", report)
    return report


def cmd_verify(args):
    inst, spec, zeta = _load(args)
    rep = verify_structure(spec.fn, args.tol, args.cap)
    report = rep.to_json()
    ok = rep.ok
    if zeta is not None:
        wit = zeta_witness(spec.fn, spec.w, zeta, args.tol, args.cap)
        report["zeta_monotone"] = wit is None
        if wit is not None:
            s, i, t, j = wit
            report["witnesses"]["zeta_monotone"] = {"S": s, "i": i, "T": t, "j": j}
            ok = False
    if not ok:
        raise ReportedFailure("structure check failed", report,
                              witnesses=report["witnesses"])
    return report


def cmd_sample(args):
    _, spec, _ = _load(args)
    if args.count < 0:
        raise InvalidInput("--count must be non-negative")
    sampler = PermutationSampler(spec.fn, spec.w, args.tol)
    rng = np.random.default_rng(args.seed)
    draws = [sampler.sample(rng) for _ in range(args.count)]
    lines = [" ".join(str(e) for e in sigma) for sigma in draws]
    if args.histogram:
        hist = Counter(draws)
        summary = {"count": args.count, "seed": args.seed,
                   "histogram": [{"order": list(s), "count": c}
                                 for s, c in sorted(hist.items())]}
        with open(args.histogram, "w") as fh:
            fh.write(dumps(summary) + "\n")
    return lines


def cmd_app(args):
    doc = read_json(args.input)
    if not isinstance(doc, dict):
        raise InvalidInput("application input must be a JSON object")

    def get(key, default=None):
        if key in doc:
            return doc[key]
        if default is not None:
            return default
        raise InvalidInput(f"missing field {key!r}")

    fast = not args.brute
    name = args.name
    if name == "search":
        app = apps.weighted_search(apps.SearchInstance(get("t"), get("d", [1.0] * len(get("t")))))
        return apps.search_report(app, app.solve(fast, args.tol, args.cap))
    if name == "varspeed":
        a = get("a")
        app = apps.variable_speed_search(apps.VariableSpeedInstance(a, get("b"),
                                                                    get("d", [1.0] * len(a))))
        return apps.search_report(app, app.solve(fast, args.tol, args.cap))
    if name == "rescue":
        p = get("p")
        app = apps.search_rescue(apps.RescueInstance(p, get("q", [1.0] * len(p))))
        return apps.rescue_report(app, app.solve(fast, args.tol, args.cap))
    if name == "throughput":
        res = apps.max_throughput(apps.ThroughputInstance(get("p"), get("r")), fast, args.tol)
        return res.to_json()
    lam = get("lambda")
    _, report = apps.queue_priority(
        apps.QueueInstance(lam, get("mu"), get("c", [1.0] * len(lam))), args.tol, args.cap)
    return report


COMMANDS = {
    "solve": cmd_solve,
    "value": cmd_value,
    "decompose": cmd_decompose,
    "check-optimal": cmd_check_optimal,
    "verify": cmd_verify,
    "sample": cmd_sample,
    "app": cmd_app,
}


def _table(obj, prefix="") -> list:
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not all(
                    isinstance(e, (int, float)) for e in (v if isinstance(v, list) else [0])):
                lines.append(f"{prefix}{k}:")
                lines.extend(_table(v, prefix + "  "))
            else:
                lines.append(f"{prefix}{k}: {dumps(v, indent=0)}")
    elif isinstance(obj, list):
        for item in obj:
            lines.append(f"{prefix}- {dumps(item, indent=0)}")
    else:
        lines.append(prefix + dumps(obj, indent=0))
    return lines


def _write(result, fmt, stream):
    if isinstance(result, list) and all(isinstance(r, str) for r in result):
        for line in result:
            stream.write(line + "\n")
    elif fmt == "table":
        stream.write("\n".join(_table(result)) + "\n")
    else:
        stream.write(dumps(result) + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        result = COMMANDS[args.command](args)
    except ReportedFailure as exc:
        _write(exc.report, args.format, stdout)
        stderr.write(json.dumps(exc.to_json(), sort_keys=True) + "\n")
        return EXIT_INVALID
    except CapExceeded as exc:
        stderr.write(json.dumps(exc.to_json(), sort_keys=True) + "\n")
        return EXIT_CAP
    except PolygameError as exc:
        stderr.write(json.dumps(exc.to_json(), sort_keys=True) + "\n")
        return EXIT_INVALID
    except (ValueError, KeyError, TypeError) as exc:
        err = {"error": "invalid-input", "message": f"{type(exc).__name__}: {exc}"}
        stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return EXIT_INVALID
    _write(result, args.format, stdout)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
