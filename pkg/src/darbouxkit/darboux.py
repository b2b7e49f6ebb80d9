"""Partitions, Darboux sums and a certified adaptive integrator.

``darboux_sums`` computes ``U(f, P)`` and ``L(f, P)`` with closed cells.
``integrate`` encloses the lower and upper Darboux *integrals*; for that it
may use open-cell ranges, because the integrals ignore the values of ``f`` at
finitely many points.  Models can also contribute closed forms or envelope
facts through ``integral_hint``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import BudgetExceeded, OutOfDomain, RangeNotExact
from .exactnum import RatInterval, as_rational
from .funcmodel import Enclosure, FuncModel

DEFAULT_BUDGET = 10_000


@dataclass(frozen=True)
class Partition:
    points: tuple[Fraction, ...]

    def __init__(self, points: Sequence):
        pts = tuple(as_rational(p) for p in points)
        if len(pts) < 2:
            raise ValueError("a partition needs at least two points")
        if any(a >= b for a, b in zip(pts, pts[1:])):
            raise ValueError("partition points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, I: RatInterval, n: int) -> "Partition":
        if n < 1:
            raise ValueError("n must be >= 1")
        return cls([I.lo + I.width * k / n for k in range(n + 1)])

    @property
    def interval(self) -> RatInterval:
        return RatInterval(self.points[0], self.points[-1])

    @property
    def cells(self) -> list[RatInterval]:
        return [RatInterval(a, b) for a, b in zip(self.points, self.points[1:])]

    @property
    def mesh(self) -> Fraction:
        return max(b - a for a, b in zip(self.points, self.points[1:]))

    def refine(self, extra: Sequence) -> "Partition":
        I = self.interval
        pts = set(self.points)
        pts.update(as_rational(p) for p in extra if I.contains(as_rational(p)))
        return Partition(sorted(pts))

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class DarbouxSums:
    upper: Fraction
    lower: Fraction
    upper_exact: bool
    lower_exact: bool

    @property
    def gap(self) -> Fraction:
        return self.upper - self.lower


def darboux_sums(f: FuncModel, P: Partition) -> DarbouxSums:
    """Closed-cell upper and lower sums.  Exact flags mirror range exactness."""
    if not f.domain.contains_interval(P.interval):
        raise OutOfDomain(f"partition {P.interval} leaves the domain {f.domain}")
    upper = lower = Fraction(0)
    exact = True
    for cell in P.cells:
        enc = f.enclose(cell)
        upper += enc.bounds.hi * cell.width
        lower += enc.bounds.lo * cell.width
        exact = exact and enc.exact
    return DarbouxSums(upper, lower, exact, exact)


def oscillation_sum(f: FuncModel, P: Partition) -> Fraction:
    """``Σ osc(f, cell) · width(cell)`` with closed cells."""
    return sum((f.enclose(c).osc * c.width for c in P.cells), Fraction(0))


class AdaptivePartition:
    """Refines a partition by bisecting the cell with the largest osc·width
    (ties: leftmost).  ``open_cells`` selects interior ranges."""

    def __init__(self, f: FuncModel, I: RatInterval, *, open_cells: bool,
                 seeds: Optional[Sequence[Fraction]] = None):
        self.f = f
        self.I = I
        self._enc = f.enclose_open if open_cells else f.enclose
        pts = sorted({I.lo, I.hi, *(f.split_points(I) if seeds is None else seeds)})
        pts = [p for p in pts if I.lo <= p <= I.hi]
        self.cells: dict[Fraction, tuple[Fraction, Enclosure]] = {}
        self.heap: list = []
        self.upper = self.lower = Fraction(0)
        self.all_exact = True
        for a, b in zip(pts, pts[1:]):
            self._add(a, b)

    def _add(self, a: Fraction, b: Fraction):
        enc = self._enc(RatInterval(a, b))
        w = b - a
        self.cells[a] = (b, enc)
        self.upper += enc.bounds.hi * w
        self.lower += enc.bounds.lo * w
        self.all_exact = self.all_exact and enc.exact
        heapq.heappush(self.heap, (-(enc.osc * w), a, b))

    def __len__(self):
        return len(self.cells)

    @property
    def gap_sum(self) -> Fraction:
        return self.upper - self.lower

    def top_contribution(self) -> Fraction:
        while self.heap:
            neg, a, b = self.heap[0]
            if a in self.cells and self.cells[a][0] == b:
                return -neg
            heapq.heappop(self.heap)
        return Fraction(0)

    def bisect_top(self) -> bool:
        if self.top_contribution() == 0:
            return False
        _neg, a, b = heapq.heappop(self.heap)
        _b, enc = self.cells.pop(a)
        w = b - a
        self.upper -= enc.bounds.hi * w
        self.lower -= enc.bounds.lo * w
        m = (a + b) / 2
        self._add(a, m)
        self._add(m, b)
        return True

    def refine_until(self, stop: Callable[["AdaptivePartition"], bool], budget: int) -> bool:
        """Bisect until ``stop`` holds.  Returns whether it did."""
        while not stop(self):
            if len(self) >= budget or not self.bisect_top():
                return stop(self)
        return True

    def sorted_cells(self) -> list[tuple[RatInterval, Enclosure]]:
        return [(RatInterval(a, self.cells[a][0]), self.cells[a][1])
                for a in sorted(self.cells)]

    def partition(self) -> Partition:
        pts = sorted(self.cells)
        pts.append(self.I.hi)
        return Partition(pts)


@dataclass(frozen=True)
class IntegralEnclosure:
    lower_integral: RatInterval
    upper_integral: RatInterval
    gap_upper_bound: Fraction
    partition_used: Partition
    certified: bool
    eps: Fraction
    upper_sum: Fraction = field(compare=False)
    lower_sum: Fraction = field(compare=False)

    @property
    def status(self) -> str:
        return "Certified" if self.certified else "NotCertified"

    @property
    def proves_nonintegrable(self) -> bool:
        """The upper integral is certifiably larger than the lower one."""
        return self.upper_integral.lo > self.lower_integral.hi

    @property
    def integral(self) -> RatInterval:
        """Enclosure of the Riemann integral, meaningful for integrable f."""
        return RatInterval(self.lower_integral.lo, self.upper_integral.hi)

    @property
    def interval(self) -> RatInterval:
        return self.partition_used.interval


def _enclosures(ap: AdaptivePartition, hint):
    lo_sum, up_sum = ap.lower, ap.upper
    lower = RatInterval(lo_sum, up_sum)
    upper = RatInterval(lo_sum, up_sum)
    if hint is not None:
        h_lower, h_upper = hint
        lower = RatInterval(max(lower.lo, h_lower.lo), min(lower.hi, h_lower.hi))
        upper = RatInterval(max(upper.lo, h_upper.lo), min(upper.hi, h_upper.hi))
    return lower, upper


def integrate(f: FuncModel, I, eps=0, budget: int = DEFAULT_BUDGET, *,
              use_hints: bool = True, stop_when_nonintegrable: bool = True,
              strict: bool = False) -> IntegralEnclosure:
    """Certified enclosures of the lower and upper Darboux integrals over ``I``.

    Refines until the gap bound is at most ``eps`` (``eps = 0`` means exact),
    the cell budget is spent, or the enclosures already prove the gap cannot
    close.  An uncertified result is returned, not raised, unless ``strict``.
    """
    I = I if isinstance(I, RatInterval) else RatInterval(*I)
    eps = as_rational(eps)
    if eps < 0:
        raise ValueError("eps must be >= 0")
    if not f.domain.contains_interval(I):
        raise OutOfDomain(f"{I} is not inside {f.domain}")
    if I.is_degenerate:
        zero = RatInterval(0)
        return IntegralEnclosure(zero, zero, Fraction(0), _PointPartition(I.lo),
                                 True, eps, Fraction(0), Fraction(0))
    hint = f.integral_hint(I) if use_hints else None
    ap = AdaptivePartition(f, I, open_cells=True)

    def state():
        lower, upper = _enclosures(ap, hint)
        return lower, upper, upper.hi - lower.lo

    def done(_ap):
        lower, upper, gap = state()
        if gap <= eps:
            return True
        return stop_when_nonintegrable and upper.lo > lower.hi

    ap.refine_until(done, budget)
    lower, upper, gap = state()
    enc = IntegralEnclosure(lower, upper, gap, ap.partition(), gap <= eps, eps,
                            ap.upper, ap.lower)
    if strict and not enc.certified:
        raise BudgetExceeded(f"gap {gap} > eps {eps} after {len(ap)} cells", partial=enc)
    return enc


class _PointPartition(Partition):
    # degenerate intervals admit no strictly increasing partition
    def __init__(self, x):
        object.__setattr__(self, "points", (as_rational(x),))

    @property
    def interval(self):
        return RatInterval(self.points[0])

    @property
    def cells(self):
        return []


def global_bounds_check(f: FuncModel, I, enc: IntegralEnclosure) -> bool:
    """``m(b-a) <= lower <= upper <= M(b-a)`` with ``[m, M]`` the exact range."""
    I = I if isinstance(I, RatInterval) else RatInterval(*I)
    rng = f.enclose(I)
    if not rng.exact:
        raise RangeNotExact(f"range of {f!r} over {I} is not exact")
    w = I.width
    m, M = rng.bounds.lo, rng.bounds.hi
    return (m * w <= enc.lower_integral.lo
            and enc.lower_integral.lo <= enc.upper_integral.hi
            and enc.upper_integral.hi <= M * w)
