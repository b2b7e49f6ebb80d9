"""Oscillation over intervals and at points, and the nested-interval search
for a continuity point of an integrable function."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .darboux import DEFAULT_BUDGET, AdaptivePartition
from .errors import NoContinuityCertificate, OutOfDomain
from .exactnum import RatInterval, as_rational
from .funcmodel import FuncModel


@dataclass(frozen=True)
class OscValue:
    value: RatInterval
    exact: bool


def osc_interval(f: FuncModel, I) -> OscValue:
    enc = f.enclose(I)
    w = enc.bounds.width
    if enc.exact:
        return OscValue(RatInterval(w), True)
    return OscValue(RatInterval(0, w), False)


def osc_point(f: FuncModel, c, delta_schedule: Sequence) -> OscValue:
    """Enclose ``osc(f, c) = inf_δ osc(f, [c-δ, c+δ])`` along a schedule.

    The upper end is the smallest oscillation seen.  The value is exact when
    some stage gives oscillation 0, or when the model guarantees the
    oscillation has stabilized at that radius.
    """
    c = as_rational(c)
    if not f.domain.contains_strictly(c):
        raise OutOfDomain(f"{c} is not interior to {f.domain}")
    stable = f.osc_stable_radius(c)
    best: Optional[Fraction] = None
    for delta in delta_schedule:
        delta = as_rational(delta)
        if delta <= 0:
            raise ValueError("radii must be positive")
        J = RatInterval(max(c - delta, f.domain.lo), min(c + delta, f.domain.hi))
        enc = f.enclose(J)
        w = enc.bounds.width
        best = w if best is None else min(best, w)
        if enc.exact and (w == 0 or (stable is not None and delta < stable)):
            return OscValue(RatInterval(w), True)
    if best is None:
        raise ValueError("empty schedule")
    return OscValue(RatInterval(0, best), False)


@dataclass(frozen=True)
class Stage:
    interval: RatInterval
    osc_bound: Fraction
    width: Fraction


@dataclass(frozen=True)
class NestedIntervalTrace:
    stages: tuple[Stage, ...]
    limit_point: Fraction
    search_interval: RatInterval

    def verify(self, f: FuncModel) -> bool:
        """Re-check every stage with fresh range calls."""
        outer = self.search_interval
        for n, st in enumerate(self.stages, start=1):
            J = st.interval
            if not (outer.lo < J.lo and J.hi < outer.hi):
                return False
            if f.enclose(J).bounds.width > st.osc_bound or not st.osc_bound < Fraction(1, n):
                return False
            if st.width != J.width or not J.width < Fraction(1, n):
                return False
            if not J.contains(self.limit_point):
                return False
            outer = J
        return True


@dataclass(frozen=True)
class ContinuityWitness:
    point: Fraction
    radius: Fraction
    osc_bound: Fraction
    search_interval: RatInterval
    trace: Optional[NestedIntervalTrace] = None

    @property
    def neighborhood(self) -> RatInterval:
        return RatInterval(self.point - self.radius, self.point + self.radius)

    def verify(self, f: FuncModel) -> bool:
        if not self.search_interval.contains_strictly(self.point) or self.radius <= 0:
            return False
        if f.enclose(self.neighborhood).bounds.width > self.osc_bound:
            return False
        return self.trace is None or self.trace.verify(f)


def _pick_cell(cells, bound: Fraction):
    """Among cells with oscillation < bound: least oscillation, then widest,
    then leftmost."""
    best = None
    for cell, enc in cells:
        osc = enc.bounds.width
        if osc >= bound:
            continue
        key = (osc, -cell.width, cell.lo)
        if best is None or key < best[0]:
            best = (key, cell)
    return None if best is None else best[1]


def find_continuity_point(f: FuncModel, I, n_target: int = 10,
                          budget: int = DEFAULT_BUDGET) -> ContinuityWitness:
    """Build ``[a_n, b_n]`` with osc < 1/n, width < 1/n, each strictly inside
    the previous one; return the midpoint of the last stage."""
    I = f._check(I)
    if I.is_degenerate:
        raise NoContinuityCertificate("degenerate search interval")
    if n_target < 1:
        raise ValueError("n_target must be >= 1")
    stages: list[Stage] = []
    current = I
    for n in range(1, n_target + 1):
        bound = Fraction(1, n)
        ap = AdaptivePartition(f, current, open_cells=False)
        target = current.width * bound
        ap.refine_until(lambda a: a.gap_sum < target, budget)
        cell = _pick_cell(ap.sorted_cells(), bound)
        if cell is None:
            raise NoContinuityCertificate(
                f"stage {n}: no cell with oscillation < 1/{n} within budget",
                stages_completed=n - 1)
        # centered sub-cell short enough that the shrunk interval has width < 1/n
        w = cell.width
        while w / 2 >= bound:
            w /= 2
        m = cell.midpoint
        sub = RatInterval(m - w / 2, m + w / 2)
        nxt = RatInterval(sub.lo + w / 4, sub.hi - w / 4)
        osc = f.enclose(nxt).bounds.width
        if not osc < bound:
            raise NoContinuityCertificate(
                f"stage {n}: shrunk cell lost its oscillation bound", stages_completed=n - 1)
        stages.append(Stage(nxt, osc, nxt.width))
        current = nxt
    point = current.midpoint
    if point in f.split_points(I):
        point = current.lo + current.width / 3
    radius = min(point - current.lo, current.hi - point)
    nb = RatInterval(point - radius, point + radius)
    trace = NestedIntervalTrace(tuple(stages), point, I)
    return ContinuityWitness(point, radius, f.enclose(nb).bounds.width, I, trace)


@dataclass(frozen=True)
class DenseSample:
    witnesses: tuple[Optional[ContinuityWitness], ...]
    failures: tuple[tuple[RatInterval, str], ...]

    @property
    def all_found(self) -> bool:
        return not self.failures


def dense_continuity_sample(f: FuncModel, subintervals: Sequence, n_target: int = 10,
                            budget: int = DEFAULT_BUDGET) -> DenseSample:
    """One continuity witness strictly inside each subinterval; failures are collected."""
    wits, fails = [], []
    for J in subintervals:
        J = J if isinstance(J, RatInterval) else RatInterval(*J)
        try:
            wits.append(find_continuity_point(f, J, n_target, budget))
        except NoContinuityCertificate as exc:
            wits.append(None)
            fails.append((J, str(exc)))
    return DenseSample(tuple(wits), tuple(fails))
