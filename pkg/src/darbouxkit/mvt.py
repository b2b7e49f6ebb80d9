"""Mean value witnesses for integrals.

Conventions: ``w = b - a``, ``J`` an enclosure of the integral.  A claimed
``f(c)·w <= ∫`` is checked against ``J.lo`` and ``f(c)·w >= ∫`` against
``J.hi``, so every claim holds for the true integral.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .darboux import DEFAULT_BUDGET, AdaptivePartition, integrate
from .errors import (BudgetExceeded, NoContinuityCertificate, NotContinuousModel,
                     NotIntegrable, NoWitness, RangeNotExact)
from .exactnum import RatInterval, as_rational
from .funcmodel import FuncModel, PiecewisePoly, PointRep, Step, strictly_inside
from .indefinite import IndefiniteIntegral, indefinite_eval_many
from .oscillation import ContinuityWitness, find_continuity_point
from .polynomial import Polynomial

DEFAULT_N_TARGET = 8


class Kind(str, enum.Enum):
    EPSILON_PAIR = "EpsilonPair"
    INEQUALITY_PAIR = "InequalityPair"
    EXACT = "Exact"
    BOUNDED_PAIR = "BoundedPair"


@dataclass(frozen=True)
class MvtWitness:
    kind: Kind
    interval: RatInterval
    c1: Optional[PointRep]
    c2: Optional[PointRep]
    integral: RatInterval  # for BoundedPair: [lower.lo, upper.hi] of the Darboux integrals
    epsilon: Optional[Fraction] = None
    tol: Optional[Fraction] = None
    continuity: tuple[Optional[ContinuityWitness], Optional[ContinuityWitness]] = (None, None)
    # parameters to re-run the integrator from scratch
    integrate_eps: Fraction = Fraction(0)
    budget: int = DEFAULT_BUDGET
    steps: int = 0
    lower_integral: Optional[RatInterval] = None
    upper_integral: Optional[RatInterval] = None

    def claims(self, f: FuncModel, J: RatInterval, lower=None, upper=None) -> dict[str, bool]:
        w = self.interval.width
        out: dict[str, bool] = {}
        for name, c in (("c1", self.c1), ("c2", self.c2)):
            if c is not None:
                out[f"{name}_interior"] = strictly_inside(c, self.interval)
        v1 = None if self.c1 is None else f.eval(self.c1) * w
        v2 = None if self.c2 is None else f.eval(self.c2) * w
        if self.kind is Kind.EPSILON_PAIR:
            out["c1_side"] = v1 < J.lo + self.epsilon
            out["c2_side"] = J.hi - self.epsilon < v2
        elif self.kind is Kind.INEQUALITY_PAIR:
            out["c1_side"] = v1 <= J.lo
            out["c2_side"] = J.hi <= v2
        elif self.kind is Kind.EXACT:
            slack = self.tol * w
            out["residual"] = -slack <= v1 - J.hi and v1 - J.lo <= slack
        elif self.kind is Kind.BOUNDED_PAIR:
            out["c1_side"] = v1 <= lower.lo
            out["c2_side"] = upper.hi <= v2
        for name, cw in zip(("c1", "c2"), self.continuity):
            if cw is not None:
                c = getattr(self, name)
                out[f"{name}_continuity"] = cw.point == c and cw.verify(f)
        return out

    def verify(self, f: FuncModel) -> bool:
        """Re-run the integrator and re-check every comparison exactly."""
        enc = integrate(f, self.interval, self.integrate_eps, self.budget,
                        stop_when_nonintegrable=False)
        if self.kind is not Kind.BOUNDED_PAIR and not enc.certified:
            return False
        needs_cont = self.kind in (Kind.EPSILON_PAIR, Kind.INEQUALITY_PAIR)
        if needs_cont and any(cw is None for cw in self.continuity):
            return False
        return all(self.claims(f, enc.integral, enc.lower_integral,
                               enc.upper_integral).values())


def _certified_integral(f: FuncModel, I: RatInterval, eps: Fraction, budget: int):
    if f.integrable is False:
        raise NotIntegrable(f"{f!r} is not Riemann integrable")
    enc = integrate(f, I, eps, budget)
    if enc.proves_nonintegrable:
        raise NotIntegrable("upper and lower Darboux integrals differ", enclosure=enc)
    if not enc.certified:
        raise BudgetExceeded(f"gap not closed to {eps} within budget", partial=enc)
    return enc


def _inner(cell: RatInterval) -> RatInterval:
    # a closed interval strictly inside the open cell
    w = cell.width
    return RatInterval(cell.lo + w / 4, cell.hi - w / 4)


def _continuity_in(f, cells, ok, n_target, budget, max_tries=8) -> Optional[ContinuityWitness]:
    """First continuity witness inside a cell passing ``ok``.  The point lies
    in the open cell, so its value obeys the cell's bounds."""
    tries = 0
    for cell, enc in cells:
        if not ok(enc.bounds, cell):
            continue
        tries += 1
        if tries > max_tries:
            break
        try:
            cw = find_continuity_point(f, _inner(cell), n_target, budget)
        except NoContinuityCertificate:
            continue
        return cw
    return None


def _pair_search(f, I, J, kind, eps, n_target, budget, integrate_eps):
    """Refine an open-cell partition until suitable cells appear for both
    sides, then certify a continuity point inside each."""
    w = I.width
    if kind is Kind.EPSILON_PAIR:
        up_ok = lambda b, _c: b.hi * w < J.lo + eps
        lo_ok = lambda b, _c: J.hi - eps < b.lo * w
    else:
        up_ok = lambda b, _c: b.hi * w <= J.lo
        lo_ok = lambda b, _c: J.hi <= b.lo * w
    ap = AdaptivePartition(f, I, open_cells=True)
    c1 = c2 = None
    while True:
        cells = ap.sorted_cells()
        if c1 is None:
            by_sup = sorted(cells, key=lambda ce: (ce[1].bounds.hi, ce[0].lo))
            c1 = _continuity_in(f, by_sup, up_ok, n_target, budget)
        if c2 is None:
            by_inf = sorted(cells, key=lambda ce: (-ce[1].bounds.lo, ce[0].lo))
            c2 = _continuity_in(f, by_inf, lo_ok, n_target, budget)
        if c1 is not None and c2 is not None:
            break
        before = len(ap)
        ap.refine_until(lambda a: len(a) >= 2 * before, budget)
        if len(ap) == before:
            raise BudgetExceeded(f"no {kind.value} cells within {budget} cells")
    return MvtWitness(kind, I, c1.point, c2.point, J, epsilon=eps,
                      continuity=(c1, c2), integrate_eps=integrate_eps, budget=budget)


def epsilon_witnesses(f: FuncModel, I, eps, n_target: int = DEFAULT_N_TARGET,
                      budget: int = DEFAULT_BUDGET) -> MvtWitness:
    """Continuity points ``c1, c2`` with ``f(c1)·w < ∫ + ε`` and ``∫ - ε < f(c2)·w``."""
    I = f._check(I)
    eps = as_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be > 0")
    enc = _certified_integral(f, I, eps / 2, budget)
    return _pair_search(f, I, enc.integral, Kind.EPSILON_PAIR, eps, n_target, budget, eps / 2)


def inequality_witnesses(f: FuncModel, I, n_target: int = DEFAULT_N_TARGET,
                         budget: int = DEFAULT_BUDGET, eps=0) -> MvtWitness:
    """Continuity points with ``f(c1)·w <= ∫ <= f(c2)·w``, by direct selection
    of cells whose open-cell sup (inf) is on the right side of the mean."""
    I = f._check(I)
    eps = as_rational(eps)
    enc = _certified_integral(f, I, eps, budget)
    return _pair_search(f, I, enc.integral, Kind.INEQUALITY_PAIR, None, n_target, budget, eps)


def exact_witness_continuous(f: FuncModel, I, tol, budget: int = DEFAULT_BUDGET,
                             max_steps: int = 200) -> MvtWitness:
    """Bisect ``g(c) = f(c)·w - ∫`` between inequality witnesses until
    ``|g(c)| <= tol·w`` holds for the whole integral enclosure."""
    I = f._check(I)
    tol = as_rational(tol)
    if tol <= 0:
        raise ValueError("tol must be > 0")
    if not f.continuous:
        raise NotContinuousModel(f"{f!r} is not certified continuous")
    w = I.width
    slack = tol * w
    enc = _certified_integral(f, I, slack / 2, budget)
    J = enc.integral
    v = J.midpoint

    def good(c):
        val = f.eval(c) * w
        return -slack <= val - J.hi and val - J.lo <= slack

    def done(c, steps):
        return MvtWitness(Kind.EXACT, I, c, None, J, tol=tol, integrate_eps=slack / 2,
                          budget=budget, steps=steps)

    mid = I.midpoint
    if good(mid):
        return done(mid, 0)
    pair = inequality_witnesses(f, I, budget=budget, eps=slack / 2)
    lo, hi = pair.c1, pair.c2  # g(lo) <= 0 <= g(hi)
    for c in (lo, hi):
        if good(c):
            return done(c, 0)
    for steps in range(1, max_steps + 1):
        m = (lo + hi) / 2
        if good(m):
            return done(m, steps)
        if f.eval(m) * w - v <= 0:
            lo = m
        else:
            hi = m
    raise BudgetExceeded(f"no residual within tolerance after {max_steps} bisections")


def bounded_mean_inequality(f: FuncModel, I, budget: int = DEFAULT_BUDGET) -> MvtWitness:
    """Points with ``f(c1)·w <= lower ∫`` and ``upper ∫ <= f(c2)·w``; no
    continuity needed.  Uses the outer bounds of both Darboux enclosures."""
    I = f._check(I)
    if not f.enclose(I).exact:
        raise RangeNotExact(f"range of {f!r} over {I} is not exact")
    enc = integrate(f, I, 0, budget, stop_when_nonintegrable=False)
    w = I.width
    up, low = enc.upper_integral, enc.lower_integral
    missing, c1, c2 = [], None, None
    try:
        c2 = f.witness_above(I, up.hi / w, strict=False)
    except NoWitness:
        missing.append("upper")
    try:
        c1 = f.witness_below(I, low.lo / w, strict=False)
    except NoWitness:
        missing.append("lower")
    if missing:
        raise NoWitness(f"no attaining point on the {' and '.join(missing)} side",
                        sides=tuple(missing))
    return MvtWitness(Kind.BOUNDED_PAIR, I, c1, c2, enc.integral, budget=budget,
                      lower_integral=low, upper_integral=up)


@dataclass(frozen=True)
class StepMeasureReport:
    interval: RatInterval
    threshold: Fraction
    sublevel_measure: Fraction
    superlevel_measure: Fraction

    @property
    def both_positive(self) -> bool:
        return self.sublevel_measure > 0 and self.superlevel_measure > 0


def step_sublevel_measures(f: Step, I=None) -> StepMeasureReport:
    """Exact measures of ``{f <= mean}`` and ``{f >= mean}``; breakpoints are null."""
    if not isinstance(f, Step):
        raise TypeError("step_sublevel_measures needs a Step model")
    I = f.domain if I is None else f._check(I)
    if I.is_degenerate:
        raise ValueError("need a nondegenerate interval")
    parts = f.overlaps(I)
    mean = sum((v * (hi - lo) for lo, hi, v in parts), Fraction(0)) / I.width
    sub = sup = Fraction(0)
    for lo, hi, v in parts:
        if v <= mean:
            sub += hi - lo
        if v >= mean:
            sup += hi - lo
    return StepMeasureReport(I, mean, sub, sup)


def constancy_check_partC(F: IndefiniteIntegral, n_probes: int = 1024) -> bool:
    """``F' = 0`` off finitely many points forces ``F`` constant.

    Each probe ``x`` is checked directly and through the sublevel argument: on
    ``[a, x]`` both level sets have positive measure and ``f`` is 0 there, so
    the mean is 0.
    """
    f = F.integrand
    if not isinstance(f, Step) or any(v != 0 for v in f.values):
        raise ValueError("constancy_check_partC needs a Step integrand vanishing off breakpoints")
    dom, a = F.domain, F.base_point
    probes = [dom.lo + dom.width * k / n_probes for k in range(n_probes + 1)]
    probes = [x for x in probes if x > a]
    values = indefinite_eval_many(F, probes)
    for x in probes:
        rep = step_sublevel_measures(f, RatInterval(a, x))
        if not (rep.both_positive and rep.threshold == 0):
            return False
        if values[x] != RatInterval(F.constant):
            return False
    return True


@dataclass(frozen=True)
class EqualityPart:
    kind: str  # "piece": identity on an open piece; "points": isolated roots; "boundary": a shared endpoint
    where: RatInterval
    count: Optional[int] = None


@dataclass(frozen=True)
class NoEqualityReport:
    interval: RatInterval
    mean_slope: Fraction
    equality_set: tuple[EqualityPart, ...]
    below: Optional[tuple[Fraction, Fraction]]  # (c, F'(c)) with F'(c) <= slope
    above: Optional[tuple[Fraction, Fraction]]
    undefined_at: tuple[Fraction, ...] = field(default=())

    @property
    def empty(self) -> bool:
        return not self.equality_set


def no_exact_witness_demo(F: PiecewisePoly) -> NoEqualityReport:
    """Symbolic search for ``c`` in ``(a, b)`` with ``F(b) - F(a) = F'(c)(b - a)``
    over a continuous piecewise polynomial."""
    if not isinstance(F, PiecewisePoly):
        raise TypeError("no_exact_witness_demo needs a PiecewisePoly (or AbsShift) model")
    I = F.domain
    s = (F.eval(I.hi) - F.eval(I.lo)) / I.width
    parts, undefined = [], []
    below = above = None
    pieces = F.pieces
    for k, (seg, p) in enumerate(pieces):
        d = p.derivative()
        cnt = (d - Polynomial([s])).count_roots_open(seg.lo, seg.hi)
        if cnt is None:
            parts.append(EqualityPart("piece", seg))
        elif cnt:
            parts.append(EqualityPart("points", seg, cnt))
        m = seg.midpoint
        dm = d(m)
        if dm <= s and below is None:
            below = (m, dm)
        if dm >= s and above is None:
            above = (m, dm)
        if k + 1 < len(pieces):
            u = seg.hi
            left, right = d(u), pieces[k + 1][1].derivative()(u)
            if left != right:
                undefined.append(u)
            elif left == s:
                parts.append(EqualityPart("boundary", RatInterval(u)))
    return NoEqualityReport(I, s, tuple(parts), below, above, tuple(undefined))
