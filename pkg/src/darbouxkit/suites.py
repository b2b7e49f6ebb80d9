"""Named verification suites.  Each returns pass/fail items with exact values;
every model a suite touches also gets the global mean-bounds check."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .cantorpath import CantorIndefinite, FatCantorSpec, build_stage, nonconstancy_report
from .darboux import Partition, global_bounds_check, integrate
from .errors import NoWitness, NotIntegrable
from .exactnum import RatInterval
from .families import DEFAULT_SEED, random_steps, vanishing_steps
from .funcmodel import AbsShift, FatCantorIndicator, FuncModel, Pathological, parse_function
from .indefinite import (IndefiniteIntegral, Verdict, cantor_approximant,
                         dense_zero_derivative_harness, indefinite_eval, thomson_adversarial,
                         thomson_sum)
from .mvt import (bounded_mean_inequality, constancy_check_partC, epsilon_witnesses,
                  exact_witness_continuous, inequality_witnesses, no_exact_witness_demo,
                  step_sublevel_measures)
from .oscillation import find_continuity_point

# adversarial Thomson sum for the Cantor integral, frozen from an exhaustive oracle
THOMSON_CANTOR_DEPTH = 6
THOMSON_CANTOR_RESOLUTION = 8
THOMSON_CANTOR_FLOOR = Fraction(325, 33536)


@dataclass
class SuiteItem:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class SuiteReport:
    suite: str
    seed: int
    items: list[SuiteItem]

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.items)


class _Bounds:
    """Collects global_bounds_check results across a suite."""

    def __init__(self):
        self.checked = 0
        self.failed: list[str] = []

    def check(self, f: FuncModel, I=None, enc=None):
        I = f.domain if I is None else I
        if enc is None:
            enc = integrate(f, I, 0, stop_when_nonintegrable=True)
        self.checked += 1
        if not global_bounds_check(f, I, enc):
            self.failed.append(f.spec_string())

    def item(self) -> SuiteItem:
        return SuiteItem("global_bounds_check", not self.failed and self.checked > 0,
                         {"models": self.checked, "failed": self.failed})


def _count_item(name, results, **detail) -> SuiteItem:
    ok = sum(bool(r) for r in results)
    return SuiteItem(name, ok == len(results), {"passed": ok, "total": len(results), **detail})


# ---------------------------------------------------------------------------
def cantor_exactness(depth: int):
    """Stage-aligned open-cell sums of the fat Cantor indicator."""
    f = FatCantorIndicator(depth=depth)
    enc = integrate(f, f.domain, 0)
    kept = Fraction(1, 2) + Fraction(1, 2 ** (depth + 1))
    return f, enc, kept


def pathological_integrals(budgets=(1, 10, 100, 1000, 10_000)):
    f = Pathological()
    out = []
    for b in budgets:
        enc = integrate(f, f.domain, 0, b, stop_when_nonintegrable=False)
        out.append((b, len(enc.partition_used.cells), enc))
    return f, out


def cantor_thomson(depth: int = THOMSON_CANTOR_DEPTH, resolution: int = THOMSON_CANTOR_RESOLUTION):
    """Adversarial Thomson sum of the Cantor integral (resolved at ``resolution``
    stages) on the stage-``depth`` subdivision; candidates are the endpoints
    of deeper stages inside each cell plus the default inward offsets."""
    F = cantor_approximant(CantorIndefinite(FatCantorSpec(), resolution))
    P = Partition(build_stage(FatCantorSpec(), depth).endpoints)
    ends = build_stage(FatCantorSpec(), resolution).endpoints
    cands = []
    for cell in P.cells:
        w = cell.width
        inner = [e for e in ends if cell.lo < e < cell.hi]
        offsets = [cell.lo + w / 2 ** k for k in (2, 3, 4)] + [cell.hi - w / 2 ** k for k in (2, 3, 4)]
        cands.append(sorted({*inner, *offsets, cell.midpoint}))
    return thomson_adversarial(F, P, cands)


def suite_counterexamples(seed: int = DEFAULT_SEED) -> SuiteReport:
    items, bounds = [], _Bounds()
    for d in (4, 8, 12):
        f, enc, kept = cantor_exactness(d)
        bounds.check(f, enc=enc)
        items.append(SuiteItem(f"fatcantor_depth_{d}",
                               enc.upper_sum == kept and enc.lower_sum == 0,
                               {"upper": enc.upper_sum, "lower": enc.lower_sum, "expected_upper": kept}))
        rep = nonconstancy_report(CantorIndefinite(depth=d))
        items.append(SuiteItem(f"cantor_nonconstancy_depth_{d}",
                               rep.certified and rep.witnesses_verified >= 2 ** d - 1
                               and rep.F1.width <= Fraction(1, 2 ** (d + 1)) and rep.F1.contains(Fraction(1, 2)),
                               rep.to_json()))
    f, runs = pathological_integrals()
    for _b, _n, enc in runs:
        bounds.check(f, enc=enc)
    items.append(SuiteItem(
        "pathological_integrals",
        all(e.upper_sum == 1 and e.lower_sum == 0 and e.upper_integral == RatInterval(1)
            and e.lower_integral == RatInterval(0) for _b, _n, e in runs),
        {"runs": [{"budget": b, "cells": n, "upper": e.upper_sum, "lower": e.lower_sum}
                  for b, n, e in runs]}))
    try:
        bounded_mean_inequality(f, f.domain)
        items.append(SuiteItem("pathological_no_upper_witness", False))
    except NoWitness as exc:
        items.append(SuiteItem("pathological_no_upper_witness", "upper" in exc.sides,
                               {"sides": list(exc.sides)}))
    for g in (AbsShift((-1, 1), 0), AbsShift((0, 1), Fraction(1, 2))):
        bounds.check(g)
        rep = no_exact_witness_demo(g)
        items.append(SuiteItem(f"no_equality:{g.spec_string()}",
                               rep.empty and rep.below is not None and rep.above is not None,
                               {"mean_slope": rep.mean_slope, "below": rep.below, "above": rep.above,
                                "derivative_undefined_at": list(rep.undefined_at)}))
    th = cantor_thomson()
    floor = THOMSON_CANTOR_FLOOR
    items.append(SuiteItem("thomson_cantor_floor", floor is not None and th.sum_value >= floor,
                           {"sum": th.sum_value, "floor": floor}))
    items.append(bounds.item())
    return SuiteReport("counterexamples", seed, items)


def suite_tkol_c(seed: int = DEFAULT_SEED, n_models: int = 100, n_probes: int = 1000) -> SuiteReport:
    items, bounds = [], _Bounds()
    cells = [RatInterval(Fraction(k, 64), Fraction(k + 1, 64)) for k in range(64)]
    results = []
    for f in vanishing_steps(n_models, seed):
        bounds.check(f)
        rep = dense_zero_derivative_harness(IndefiniteIntegral(f), cells, n_probes=n_probes)
        results.append(rep.verdict is Verdict.CONSTANT_CERTIFIED and rep.probes_exact == n_probes)
    items.append(_count_item("vanishing_steps_constant", results, probes=n_probes))
    chi = parse_function("step 0 1 bp=1/2 vals=1,0")
    fc = FatCantorIndicator(depth=8)
    controls = [(chi, cells), (fc, build_stage(FatCantorSpec(), 8).kept_intervals)]
    for g, probe in controls:
        bounds.check(g)
        rep = dense_zero_derivative_harness(IndefiniteIntegral(g), probe)
        items.append(SuiteItem(f"control:{g.spec_string()}",
                               rep.verdict is Verdict.DENSE_ZEROS_NOT_FOUND,
                               {"verdict": rep.verdict.value}))
    items.append(bounds.item())
    return SuiteReport("tkol-c", seed, items)


def suite_t1(seed: int = DEFAULT_SEED, n_models: int = 100) -> SuiteReport:
    items, bounds = [], _Bounds()
    partc = []
    for f in vanishing_steps(n_models, seed):
        bounds.check(f)
        partc.append(constancy_check_partC(IndefiniteIntegral(f), n_probes=128))
    items.append(_count_item("constancy_vanishing_steps", partc))
    levels = []
    for f in random_steps(n_models, seed):
        bounds.check(f)
        levels.append(step_sublevel_measures(f).both_positive)
    items.append(_count_item("sublevel_superlevel_positive", levels))
    x2 = parse_function("poly 0 1 coeffs=0,0,1")
    bounds.check(x2)
    sums = {n: thomson_sum(x2, Partition.uniform(x2.domain, n)).sum_value for n in (4, 16, 64)}
    items.append(SuiteItem("thomson_x2_midpoint", sums == {n: Fraction(1, n) for n in sums},
                           {"sums": {str(n): v for n, v in sums.items()}}))
    chi = parse_function("step 0 1 bp=1/2 vals=1,0")
    v = indefinite_eval(IndefiniteIntegral(chi, constant=3), 1)
    items.append(SuiteItem("indefinite_chi", v == RatInterval(Fraction(7, 2)), {"F(1)": v}))
    items.append(bounds.item())
    return SuiteReport("t1", seed, items)


def suite_mvt_riemann(seed: int = DEFAULT_SEED, n_models: int = 100, n_target: int = 20) -> SuiteReport:
    items, bounds = [], _Bounds()
    models = random_steps(n_models, seed)
    pairs, traces = [], []
    for f in models:
        bounds.check(f)
        pairs.append(inequality_witnesses(f, f.domain).verify(f))
        w = find_continuity_point(f, f.domain, n_target)
        traces.append(len(w.trace.stages) == n_target and w.trace.verify(f)
                      and w.verify(f) and w.point not in f.breakpoints)
    items.append(_count_item("inequality_witness_pairs", pairs))
    items.append(_count_item("continuity_traces", traces, stages=n_target))
    x = parse_function("poly 0 1 coeffs=0,1")
    chi = parse_function("step 0 1 bp=1/2 vals=1,0")
    for g, eps in ((x, Fraction(1, 10)), (chi, Fraction(1, 4))):
        bounds.check(g)
        w = epsilon_witnesses(g, g.domain, eps)
        items.append(SuiteItem(f"epsilon_pair:{g.spec_string()}", w.verify(g),
                               {"eps": eps, "c1": w.c1, "c2": w.c2}))
    x2 = parse_function("poly 0 1 coeffs=0,0,1")
    bounds.check(x2)
    tol = Fraction(1, 10 ** 12)
    w = exact_witness_continuous(x2, x2.domain, tol)
    items.append(SuiteItem("exact_witness_x2", abs(w.c1 ** 2 - Fraction(1, 3)) <= tol
                           and w.steps <= 60 and w.verify(x2),
                           {"c": w.c1, "steps": w.steps}))
    try:
        epsilon_witnesses(Pathological(), RatInterval(0, 1), Fraction(1, 10))
        items.append(SuiteItem("pathological_not_integrable", False))
    except NotIntegrable:
        items.append(SuiteItem("pathological_not_integrable", True))
    items.append(bounds.item())
    return SuiteReport("mvt-riemann", seed, items)


def suite_bounded_mvt(seed: int = DEFAULT_SEED, n_models: int = 100) -> SuiteReport:
    items, bounds = [], _Bounds()
    mixed = parse_function("glue ( patho 0 1/2 ) ( step 1/2 1 vals=1/2 )")
    bounds.check(mixed)
    w = bounded_mean_inequality(mixed, mixed.domain)
    items.append(SuiteItem("mixed_model", w.upper_integral == RatInterval(Fraction(3, 4))
                           and w.verify(mixed), {"upper": w.upper_integral, "c1": w.c1, "c2": w.c2}))
    p = Pathological()
    bounds.check(p)
    try:
        bounded_mean_inequality(p, p.domain)
        items.append(SuiteItem("pathological_no_witness", False))
    except NoWitness as exc:
        items.append(SuiteItem("pathological_no_witness", "upper" in exc.sides,
                               {"sides": list(exc.sides)}))
    const = parse_function("step 0 2 vals=5")
    bounds.check(const)
    items.append(SuiteItem("constant", bounded_mean_inequality(const, const.domain).verify(const)))
    res = []
    for f in random_steps(n_models, seed):
        bounds.check(f)
        res.append(bounded_mean_inequality(f, f.domain).verify(f))
    items.append(_count_item("random_steps", res))
    items.append(bounds.item())
    return SuiteReport("bounded-mvt", seed, items)


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "tkol-c": suite_tkol_c,
    "t1": suite_t1,
    "mvt-riemann": suite_mvt_riemann,
    "bounded-mvt": suite_bounded_mvt,
    "counterexamples": suite_counterexamples,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> SuiteReport:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return fn(seed=seed)
