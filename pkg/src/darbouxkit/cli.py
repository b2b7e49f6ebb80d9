"""Command-line front end.  Every verb prints one JSON report with keys
``command``, ``status``, ``result``, ``certificates`` and ``timing_ms``.

Exit codes: 0 Certified, 2 NotCertified, 1 Error.
"""

from __future__ import annotations

import argparse
import dataclasses
import enum
import json
import sys
import time
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

from . import cantorpath
from .cantorpath import CantorIndefinite, FatCantorSpec, build_stage, nonconstancy_report
from .darboux import DEFAULT_BUDGET, Partition, integrate
from .errors import (BudgetExceeded, DarbouxKitError, NoClosedForm, NoContinuityCertificate,
                     NotIntegrable, NoWitness, ParseError)
from .exactnum import RatInterval, fmt, parse_rational, to_decimal
from .families import DEFAULT_SEED
from .funcmodel import FatCantorIndicator, PiRat, parse_function, point_json
from .indefinite import IndefiniteIntegral, parse_table, thomson_adversarial, thomson_sum
from .mvt import (DEFAULT_N_TARGET, Kind, MvtWitness, bounded_mean_inequality, epsilon_witnesses,
                  exact_witness_continuous, inequality_witnesses, no_exact_witness_demo,
                  step_sublevel_measures)
from .oscillation import (ContinuityWitness, NestedIntervalTrace, Stage, find_continuity_point,
                          osc_interval, osc_point)
from .suites import SUITES, run_suite

CERTIFIED, NOT_CERTIFIED, ERROR = "Certified", "NotCertified", "Error"
EXIT = {CERTIFIED: 0, NOT_CERTIFIED: 2, ERROR: 1}


class UsageError(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which is reserved for NotCertified
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# JSON helpers

def jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return fmt(obj)
    if isinstance(obj, RatInterval):
        return obj.to_json()
    if isinstance(obj, PiRat):
        return point_json(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _q(text: str) -> Fraction:
    return parse_rational(str(text))


def _iv(obj) -> RatInterval:
    if isinstance(obj, str):
        return RatInterval.parse(obj)
    return RatInterval(_q(obj[0]), _q(obj[1]))


def _point(obj):
    if obj is None:
        return None
    if isinstance(obj, dict):
        val = _q(obj["pi_times"])
        return PiRat(val.numerator, val.denominator)
    return _q(obj)


def _arg_rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ParseError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _arg_interval(text: str) -> RatInterval:
    try:
        return RatInterval.parse(text)
    except (DarbouxKitError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _arg_rationals(text: str) -> list[Fraction]:
    return [_arg_rational(t) for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------------------
# certificates: each is a JSON dict with a "type"; CHECKERS re-derive it from scratch

def _cw_json(fn: str, cw: ContinuityWitness) -> dict:
    return {
        "type": "continuity", "fn": fn, "search_interval": cw.search_interval,
        "point": cw.point, "radius": cw.radius, "osc_bound": cw.osc_bound,
        "stages": [] if cw.trace is None else
        [{"interval": s.interval, "osc_bound": s.osc_bound, "width": s.width}
         for s in cw.trace.stages],
    }


def _cw_from(cert: dict) -> ContinuityWitness:
    search = _iv(cert["search_interval"])
    point = _q(cert["point"])
    stages = tuple(Stage(_iv(s["interval"]), _q(s["osc_bound"]), _q(s["width"]))
                   for s in cert["stages"])
    trace = NestedIntervalTrace(stages, point, search) if stages else None
    return ContinuityWitness(point, _q(cert["radius"]), _q(cert["osc_bound"]), search, trace)


def _mvt_json(fn: str, w: MvtWitness) -> dict:
    return {
        "type": "mvt", "fn": fn, "kind": w.kind, "interval": w.interval,
        "c1": None if w.c1 is None else point_json(w.c1),
        "c2": None if w.c2 is None else point_json(w.c2),
        "integral": w.integral, "epsilon": w.epsilon, "tol": w.tol,
        "integrate_eps": w.integrate_eps, "budget": w.budget,
        "continuity": [None if cw is None else _cw_json(fn, cw) for cw in w.continuity],
    }


def _check_integral(c: dict) -> bool:
    f = parse_function(c["fn"])
    enc = integrate(f, _iv(c["interval"]), _q(c["eps"]), int(c["budget"]),
                    use_hints=c["use_hints"], stop_when_nonintegrable=c["stop_when_nonintegrable"])
    return (enc.lower_integral == _iv(c["lower_integral"])
            and enc.upper_integral == _iv(c["upper_integral"])
            and enc.certified == c["certified"])


def _check_continuity(c: dict) -> bool:
    return _cw_from(c).verify(parse_function(c["fn"]))


def _check_mvt(c: dict) -> bool:
    f = parse_function(c["fn"])
    cws = tuple(None if x is None else _cw_from(x) for x in c["continuity"])
    w = MvtWitness(Kind(c["kind"]), _iv(c["interval"]), _point(c["c1"]), _point(c["c2"]),
                   _iv(c["integral"]),
                   epsilon=None if c["epsilon"] is None else _q(c["epsilon"]),
                   tol=None if c["tol"] is None else _q(c["tol"]),
                   continuity=cws, integrate_eps=_q(c["integrate_eps"]), budget=int(c["budget"]))
    if w.kind is Kind.BOUNDED_PAIR:
        enc = integrate(f, w.interval, 0, w.budget, stop_when_nonintegrable=False)
        w = dataclasses.replace(w, lower_integral=enc.lower_integral,
                                upper_integral=enc.upper_integral)
    return w.verify(f)


def _check_osc(c: dict) -> bool:
    f = parse_function(c["fn"])
    if c.get("interval") is not None:
        v = osc_interval(f, _iv(c["interval"]))
    else:
        v = osc_point(f, _q(c["point"]), [_q(r) for r in c["radii"]])
    return v.value == _iv(c["value"]) and v.exact == c["exact"]


def _cantor_spec(c: dict) -> FatCantorSpec:
    return FatCantorSpec(ratio=_q(c.get("ratio", "1/4")))


def _check_cantor(c: dict) -> bool:
    rep = nonconstancy_report(CantorIndefinite(_cantor_spec(c), int(c["depth"])))
    return (rep.certified == c["certified"] and rep.F1 == _iv(c["F1"])
            and rep.witnesses_verified == int(c["witnesses_verified"]))


def _check_thomson(c: dict) -> bool:
    F = _thomson_source(c["source"])
    P = Partition([_q(x) for x in c["points"]])
    tags = [(_q(a), _q(b)) for a, b in c["tags"]]
    return thomson_sum(F, P, tags).sum_value == _q(c["sum"])


def _check_no_equality(c: dict) -> bool:
    rep = no_exact_witness_demo(parse_function(c["fn"]))
    return (rep.mean_slope == _q(c["mean_slope"]) and rep.empty == c["empty"]
            and jsonable(rep.below) == c["below"] and jsonable(rep.above) == c["above"])


def _check_step_measures(c: dict) -> bool:
    rep = step_sublevel_measures(parse_function(c["fn"]), _iv(c["interval"]))
    return (rep.threshold == _q(c["threshold"])
            and rep.sublevel_measure == _q(c["sublevel_measure"])
            and rep.superlevel_measure == _q(c["superlevel_measure"]))


def _check_suite(c: dict) -> bool:
    return run_suite(c["suite"], int(c["seed"])).passed == c["passed"]


CHECKERS: dict[str, Callable[[dict], bool]] = {
    "integral": _check_integral,
    "continuity": _check_continuity,
    "mvt": _check_mvt,
    "osc": _check_osc,
    "cantor_nonconstancy": _check_cantor,
    "thomson": _check_thomson,
    "no_equality": _check_no_equality,
    "step_measures": _check_step_measures,
    "suite": _check_suite,
}


def check_certificate(cert: dict) -> bool:
    try:
        checker = CHECKERS[cert["type"]]
    except KeyError:
        raise ValueError(f"unknown certificate type {cert.get('type')!r}") from None
    return checker(cert)


# ---------------------------------------------------------------------------
# verbs: each returns (status, result, certificates)

def _model(args):
    f = parse_function(args.fn)
    I = args.interval if args.interval is not None else f.domain
    return f, I


def cmd_integrate(args):
    f, I = _model(args)
    enc = integrate(f, I, args.eps, args.budget, use_hints=not args.no_hints,
                    stop_when_nonintegrable=not args.keep_refining)
    result = {
        "interval": I, "lower": enc.lower_integral, "upper": enc.upper_integral,
        "gap_upper_bound": enc.gap_upper_bound, "upper_sum": enc.upper_sum,
        "lower_sum": enc.lower_sum, "cells": len(enc.partition_used.cells),
        "proves_nonintegrable": enc.proves_nonintegrable,
    }
    if enc.certified:
        result["integral"] = enc.integral
    cert = {"type": "integral", "fn": args.fn, "interval": I, "eps": args.eps,
            "budget": args.budget, "use_hints": not args.no_hints,
            "stop_when_nonintegrable": not args.keep_refining,
            "lower_integral": enc.lower_integral, "upper_integral": enc.upper_integral,
            "certified": enc.certified}
    return (CERTIFIED if enc.certified else NOT_CERTIFIED), result, [cert]


def cmd_osc(args):
    f, I = _model(args)
    if args.point is not None:
        radii = args.radii or [Fraction(1, 2 ** k) for k in range(2, 12)]
        v = osc_point(f, args.point, radii)
        cert = {"type": "osc", "fn": args.fn, "point": args.point, "radii": radii,
                "value": v.value, "exact": v.exact}
        result = {"point": args.point, "osc": v.value, "exact": v.exact}
    else:
        v = osc_interval(f, I)
        cert = {"type": "osc", "fn": args.fn, "interval": I, "value": v.value, "exact": v.exact}
        result = {"interval": I, "osc": v.value, "exact": v.exact}
    return (CERTIFIED if v.exact else NOT_CERTIFIED), result, [cert]


def cmd_find_continuity(args):
    f, I = _model(args)
    try:
        cw = find_continuity_point(f, I, args.n, args.budget)
    except NoContinuityCertificate as exc:
        return NOT_CERTIFIED, {"reason": str(exc), "stages_completed": exc.stages_completed}, []
    result = {"point": cw.point, "radius": cw.radius, "osc_bound": cw.osc_bound,
              "stages": len(cw.trace.stages), "verified": cw.verify(f)}
    return CERTIFIED, result, [_cw_json(args.fn, cw)]


def cmd_mvt(args):
    f, I = _model(args)
    if args.no_equality:
        rep = no_exact_witness_demo(f)
        result = {"mean_slope": rep.mean_slope, "equality_set_empty": rep.empty,
                  "equality_set": [{"kind": p.kind, "where": p.where, "count": p.count}
                                   for p in rep.equality_set],
                  "below": rep.below, "above": rep.above,
                  "derivative_undefined_at": list(rep.undefined_at)}
        ok = rep.below is not None and rep.above is not None
        cert = {"type": "no_equality", "fn": args.fn, "mean_slope": rep.mean_slope,
                "empty": rep.empty, "below": rep.below, "above": rep.above}
        return (CERTIFIED if ok else NOT_CERTIFIED), result, [cert]
    if args.step_measures:
        rep = step_sublevel_measures(f, I)
        result = {"threshold": rep.threshold, "sublevel_measure": rep.sublevel_measure,
                  "superlevel_measure": rep.superlevel_measure}
        cert = {"type": "step_measures", "fn": args.fn, "interval": I, **result}
        return (CERTIFIED if rep.both_positive else NOT_CERTIFIED), result, [cert]
    try:
        if args.exact:
            w = exact_witness_continuous(f, I, args.tol, args.budget)
        elif args.eps is not None:
            w = epsilon_witnesses(f, I, args.eps, args.n, args.budget)
        elif args.bounded:
            w = bounded_mean_inequality(f, I, args.budget)
        else:
            w = inequality_witnesses(f, I, args.n, args.budget)
    except (NotIntegrable, NoWitness, BudgetExceeded) as exc:
        result = {"reason": str(exc), "error": type(exc).__name__}
        if isinstance(exc, NoWitness):
            result["sides"] = list(exc.sides)
        return NOT_CERTIFIED, result, []
    result = {"kind": w.kind, "interval": w.interval, "integral": w.integral}
    for name in ("c1", "c2"):
        c = getattr(w, name)
        if c is not None:
            result[name] = point_json(c)
            result[f"f({name})"] = f.eval(c)
    if w.kind is Kind.EXACT:
        c = w.c1
        result["c"] = c
        result["c_decimal"] = to_decimal(c, 16)
        result["residual_bound"] = w.tol * I.width
        result["residual"] = RatInterval(f.eval(c) * I.width - w.integral.hi,
                                         f.eval(c) * I.width - w.integral.lo)
        result["bisection_steps"] = w.steps
    if w.kind is Kind.BOUNDED_PAIR:
        result["lower_integral"] = w.lower_integral
        result["upper_integral"] = w.upper_integral
    return CERTIFIED, result, [_mvt_json(args.fn, w)]


def cmd_cantor(args):
    spec = FatCantorSpec(ratio=args.ratio)
    if args.report == "nonconstancy":
        rep = nonconstancy_report(CantorIndefinite(spec, args.depth))
        cert = {"type": "cantor_nonconstancy", "depth": args.depth, "ratio": args.ratio,
                "F1": rep.F1, "witnesses_verified": rep.witnesses_verified,
                "certified": rep.certified}
        return (CERTIFIED if rep.certified else NOT_CERTIFIED), rep.to_json(), [cert]
    if args.report == "stage":
        st = build_stage(spec, args.depth)
        return CERTIFIED, {"stage": st.stage, "kept_measure": st.kept_measure,
                           "kept_intervals": list(st.kept_intervals),
                           "removed_intervals": list(st.removed_intervals)}, []
    if args.report == "measure":
        st = build_stage(spec, args.depth)
        try:
            mu = cantorpath.limit_measure(spec)
            return CERTIFIED, {"limit_measure": mu, "kept_measure": st.kept_measure}, []
        except NoClosedForm as exc:
            return NOT_CERTIFIED, {"limit_measure_bounds": exc.bounds,
                                   "kept_measure": st.kept_measure}, []
    # integrate: stage-aligned sums of the indicator
    f = FatCantorIndicator(spec, args.depth)
    enc = integrate(f, f.domain, 0, args.budget)
    fn = f.spec_string()
    result = {"upper_sum": enc.upper_sum, "lower_sum": enc.lower_sum,
              "lower": enc.lower_integral, "upper": enc.upper_integral,
              "cells": len(enc.partition_used.cells), "proves_nonintegrable": enc.proves_nonintegrable}
    cert = {"type": "integral", "fn": fn, "interval": f.domain, "eps": 0, "budget": args.budget,
            "use_hints": True, "stop_when_nonintegrable": True,
            "lower_integral": enc.lower_integral, "upper_integral": enc.upper_integral,
            "certified": enc.certified}
    return (CERTIFIED if enc.certified else NOT_CERTIFIED), result, [cert]


def _thomson_source(src: dict):
    if src["kind"] == "fn":
        return parse_function(src["spec"])
    if src["kind"] == "integrand":
        return IndefiniteIntegral(parse_function(src["spec"]), constant=_q(src.get("constant", "0")))
    if src["kind"] == "table":
        return {_q(k): _q(v) for k, v in src["table"]}
    raise ValueError(f"unknown thomson source {src['kind']!r}")


def cmd_thomson(args):
    if args.table is not None:
        with open(args.table, encoding="utf-8") as fh:
            table = parse_table(fh.read())
        src = {"kind": "table", "table": sorted(table.items())}
        lo, hi = min(table), max(table)
        I = args.interval or RatInterval(lo, hi)
    elif args.fn is not None:
        src = {"kind": "fn", "spec": args.fn}
        I = args.interval or parse_function(args.fn).domain
    elif args.integrand is not None:
        src = {"kind": "integrand", "spec": args.integrand, "constant": args.constant}
        I = args.interval or parse_function(args.integrand).domain
    else:
        raise UsageError("thomson needs --fn, --integrand or --table")
    F = _thomson_source(src)
    if args.points is not None:
        P = Partition(args.points)
    elif args.table is not None and args.n is None:
        P = Partition(sorted(k for k in F if I.contains(k)))
    else:
        P = Partition.uniform(I, args.n or 4)
    if args.tags == "adversarial":
        rep = thomson_adversarial(F, P)
    else:
        rep = thomson_sum(F, P)
    result = {"sum": rep.sum_value, "tag_policy": rep.tag_policy, "cells": len(P.cells),
              "mesh": P.mesh}
    cert = {"type": "thomson", "source": src, "points": list(P.points),
            "tags": [list(t) for t in rep.tags], "sum": rep.sum_value}
    return CERTIFIED, result, [cert]


def cmd_verify(args):
    rep = run_suite(args.suite, args.seed)
    items = [{"name": i.name, "passed": i.passed, "detail": i.detail} for i in rep.items]
    result = {"suite": rep.suite, "seed": rep.seed, "items": items,
              "passed": sum(i.passed for i in rep.items), "total": len(rep.items)}
    cert = {"type": "suite", "suite": rep.suite, "seed": rep.seed, "passed": rep.passed}
    return (CERTIFIED if rep.passed else NOT_CERTIFIED), result, [cert]


def cmd_verify_certificate(args):
    if args.file == "-":
        data = json.load(sys.stdin)
    else:
        with open(args.file, encoding="utf-8") as fh:
            data = json.load(fh)
    if isinstance(data, dict) and "certificates" in data:
        certs = data["certificates"]
    elif isinstance(data, list):
        certs = data
    else:
        certs = [data]
    results = [{"type": c.get("type"), "ok": check_certificate(c)} for c in certs]
    ok = bool(results) and all(r["ok"] for r in results)
    return (CERTIFIED if ok else NOT_CERTIFIED), {"checked": len(results), "results": results}, []


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _ArgParser(add_help=False)
    common.add_argument("--output", choices=("json", "text"), default="json")
    common.add_argument("--timing", action="store_true",
                        help="fill timing_ms (off by default so output is byte-stable)")

    fn_opts = _ArgParser(add_help=False)
    fn_opts.add_argument("--fn", required=True, help="function spec, e.g. 'step 0 1 bp=1/2 vals=1,0'")
    fn_opts.add_argument("--interval", type=_arg_interval, help="a,b (default: the model's domain)")
    fn_opts.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = _ArgParser(prog="darbouxkit", description=__doc__)
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_ArgParser)

    s = sub.add_parser("integrate", parents=[common, fn_opts])
    s.add_argument("--eps", type=_arg_rational, default=Fraction(0))
    s.add_argument("--no-hints", action="store_true", help="pure Darboux refinement")
    s.add_argument("--keep-refining", action="store_true",
                   help="do not stop once non-integrability is proved")
    s.set_defaults(handler=cmd_integrate)

    s = sub.add_parser("osc", parents=[common, fn_opts])
    s.add_argument("--point", type=_arg_rational)
    s.add_argument("--radii", type=_arg_rationals)
    s.set_defaults(handler=cmd_osc)

    s = sub.add_parser("find-continuity", parents=[common, fn_opts])
    s.add_argument("--n", type=int, default=10, help="number of nested stages")
    s.set_defaults(handler=cmd_find_continuity)

    s = sub.add_parser("mvt", parents=[common, fn_opts])
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--eps", type=_arg_rational)
    mode.add_argument("--bounded", action="store_true")
    mode.add_argument("--step-measures", action="store_true")
    mode.add_argument("--no-equality", action="store_true")
    s.add_argument("--tol", type=_arg_rational, default=Fraction(1, 10 ** 12))
    s.add_argument("--n", type=int, default=DEFAULT_N_TARGET)
    s.set_defaults(handler=cmd_mvt)

    s = sub.add_parser("cantor", parents=[common])
    s.add_argument("--depth", type=int, default=8)
    s.add_argument("--ratio", type=_arg_rational, default=Fraction(1, 4))
    s.add_argument("--report", choices=("nonconstancy", "stage", "measure", "integrate"),
                   default="nonconstancy")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.set_defaults(handler=cmd_cantor)

    s = sub.add_parser("thomson", parents=[common])
    src = s.add_mutually_exclusive_group()
    src.add_argument("--fn", help="F itself as a model")
    src.add_argument("--integrand", help="F = c + integral of this model")
    src.add_argument("--table", help="file of 'x F(x)' lines")
    s.add_argument("--constant", type=_arg_rational, default=Fraction(0))
    s.add_argument("--interval", type=_arg_interval)
    s.add_argument("--n", type=int)
    s.add_argument("--points", type=_arg_rationals)
    s.add_argument("--tags", choices=("midpoint", "adversarial"), default="midpoint")
    s.set_defaults(handler=cmd_thomson)

    s = sub.add_parser("verify", parents=[common])
    s.add_argument("suite", choices=sorted(SUITES))
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.set_defaults(handler=cmd_verify)

    s = sub.add_parser("verify-certificate", parents=[common])
    s.add_argument("file", help="report JSON file, or - for stdin")
    s.set_defaults(handler=cmd_verify_certificate)
    return p


def _render_text(report: dict) -> str:
    lines = [f"status: {report['status']}"]
    for k, v in report["result"].items():
        lines.append(f"{k}: {json.dumps(v)}")
    lines.append(f"certificates: {len(report['certificates'])}")
    return "\n".join(lines)


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT[ERROR]
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        status, result, certs = args.handler(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT[ERROR]
    except (DarbouxKitError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        status, result, certs = ERROR, {"error": type(exc).__name__, "message": str(exc)}, []
    elapsed = round((time.perf_counter() - t0) * 1000, 3) if args.timing else None
    report = {
        "command": {"verb": args.verb, "argv": argv},
        "status": status,
        "result": jsonable(result),
        "certificates": jsonable(certs),
        "timing_ms": elapsed,
    }
    if args.output == "text":
        print(_render_text(report), file=out)
    else:
        print(json.dumps(report, indent=2), file=out)
    return EXIT[status]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
