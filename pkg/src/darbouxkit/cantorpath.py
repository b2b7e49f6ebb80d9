"""Fat Cantor sets built by centered removal, and their indefinite integrals.

At stage ``k`` every kept interval loses a centered open subinterval of
length ``r_k`` (default ``r_k = 4**-k``).  With the default rule the kept
measure after ``n`` stages is ``1/2 + 2**-(n+1)`` and the limit set ``C``
has measure ``1/2``.

``F(x) = m(C ∩ [0, x])`` is Lipschitz, has zero derivative off ``C`` (a
dense open set) and yet ``F(1) > F(0)``.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from .errors import InadmissibleSpec, NoClosedForm, OutOfDomain
from .exactnum import RatInterval, as_rational, fmt

DEFAULT_RATIO = Fraction(1, 4)


@dataclass(frozen=True)
class FatCantorSpec:
    """Removal rule ``k -> r_k`` (per-interval length removed at stage ``k``).

    The geometric family ``r_k = ratio**k`` (optionally with a finite set of
    per-stage overrides) has a closed-form limit measure.  A custom ``rule``
    must come with ``tail_ratio`` such that ``r_{k+1} <= tail_ratio * r_k``
    beyond ``checked_depth``; the limit is then only bracketed.
    """

    ratio: Fraction = DEFAULT_RATIO
    overrides: tuple[tuple[int, Fraction], ...] = ()
    rule: Optional[Callable[[int], Fraction]] = field(default=None, compare=True)
    tail_ratio: Optional[Fraction] = None
    checked_depth: int = 16

    def __post_init__(self):
        object.__setattr__(self, "ratio", as_rational(self.ratio))
        object.__setattr__(self, "overrides", tuple(
            sorted((int(k), as_rational(v)) for k, v in self.overrides)))
        if self.rule is None:
            if not 0 < self.ratio < Fraction(1, 2):
                raise InadmissibleSpec("geometric ratio must lie in (0, 1/2)")
            for k, v in self.overrides:
                if k < 1 or v <= 0:
                    raise InadmissibleSpec(f"stage {k}: removal length must be > 0")
        else:
            if self.tail_ratio is None or not 0 < 2 * as_rational(self.tail_ratio) < 1:
                raise InadmissibleSpec("custom rules need tail_ratio in (0, 1/2)")
            object.__setattr__(self, "tail_ratio", as_rational(self.tail_ratio))
            for k in range(1, self.checked_depth + 1):
                if self.removal_length(k) <= 0:
                    raise InadmissibleSpec(f"stage {k}: removal length must be > 0")
        if self.removed_upper_bound() >= 1:
            raise InadmissibleSpec("total removed length must be < 1")

    def removal_length(self, k: int) -> Fraction:
        if self.rule is not None:
            return as_rational(self.rule(k))
        for stage, v in self.overrides:
            if stage == k:
                return v
        return self.ratio ** k

    def removed_through(self, n: int) -> Fraction:
        """Exact total length removed by stages ``1..n``."""
        return sum((2 ** (k - 1) * self.removal_length(k) for k in range(1, n + 1)),
                   Fraction(0))

    def _closed_form_removed(self) -> Fraction:
        rho = self.ratio
        total = rho / (1 - 2 * rho)  # sum_{k>=1} 2^{k-1} rho^k
        for k, v in self.overrides:
            total += 2 ** (k - 1) * (v - rho ** k)
        return total

    def _tail_bound(self) -> Fraction:
        d = self.checked_depth
        return 2 ** d * self.removal_length(d + 1) / (1 - 2 * self.tail_ratio)

    def removed_upper_bound(self) -> Fraction:
        if self.rule is None:
            return self._closed_form_removed()
        return self.removed_through(self.checked_depth) + self._tail_bound()

    def to_text(self) -> str:
        if self.rule is not None:
            return "custom"
        parts = [] if self.ratio == DEFAULT_RATIO else [f"ratio={fmt(self.ratio)}"]
        parts += [f"r{k}={fmt(v)}" for k, v in self.overrides]
        return " ".join(parts)


@dataclass(frozen=True)
class FatCantorStage:
    stage: int
    kept_intervals: tuple[RatInterval, ...]
    removed_intervals: tuple[RatInterval, ...]  # open intervals, stored by endpoints
    kept_measure: Fraction

    @property
    def endpoints(self) -> list[Fraction]:
        out = []
        for iv in self.kept_intervals:
            out.extend((iv.lo, iv.hi))
        return out

    def dump(self) -> str:
        """One kept interval per line: ``lo hi``."""
        return "\n".join(f"{fmt(iv.lo)} {fmt(iv.hi)}" for iv in self.kept_intervals)


@lru_cache(maxsize=64)
def build_stage(spec: FatCantorSpec, n: int) -> FatCantorStage:
    if n < 0:
        raise ValueError("stage must be >= 0")
    if n == 0:
        return FatCantorStage(0, (RatInterval(0, 1),), (), Fraction(1))
    prev = build_stage(spec, n - 1)
    r = spec.removal_length(n)
    kept, removed = [], list(prev.removed_intervals)
    for iv in prev.kept_intervals:
        if r >= iv.width:
            raise InadmissibleSpec(
                f"stage {n}: removal length {r} does not fit in {iv}")
        c = iv.midpoint
        gap = RatInterval(c - r / 2, c + r / 2)
        kept.append(RatInterval(iv.lo, gap.lo))
        kept.append(RatInterval(gap.hi, iv.hi))
        removed.append(gap)
    removed.sort(key=lambda g: g.lo)
    measure = prev.kept_measure - 2 ** (n - 1) * r
    return FatCantorStage(n, tuple(kept), tuple(removed), measure)


def limit_measure(spec: FatCantorSpec) -> Fraction:
    """Measure of the limit set.

    Raises :class:`NoClosedForm` (with certified ``bounds``) for custom rules.
    """
    if spec.rule is None:
        return 1 - spec._closed_form_removed()
    hi = 1 - spec.removed_through(spec.checked_depth)
    raise NoClosedForm("custom removal rule has no closed-form limit",
                       bounds=RatInterval(hi - spec._tail_bound(), hi))


def limit_measure_bounds(spec: FatCantorSpec) -> RatInterval:
    try:
        return RatInterval(limit_measure(spec))
    except NoClosedForm as exc:
        return exc.bounds


class StageIndex:
    """Bisect-based queries against the kept cover of one stage."""

    def __init__(self, stage: FatCantorStage):
        self.stage = stage
        self.los = [iv.lo for iv in stage.kept_intervals]
        self.his = [iv.hi for iv in stage.kept_intervals]
        self.ends = stage.endpoints
        # prefix[i] = total kept length of the first i intervals
        self.prefix = [Fraction(0)]
        for iv in stage.kept_intervals:
            self.prefix.append(self.prefix[-1] + iv.width)

    def meets_closed(self, I: RatInterval) -> bool:
        i = bisect.bisect_left(self.his, I.lo)
        return i < len(self.los) and self.los[i] <= I.hi

    def meets_open(self, lo: Fraction, hi: Fraction) -> bool:
        i = bisect.bisect_right(self.his, lo)
        return i < len(self.los) and self.los[i] < hi

    def endpoints_in(self, lo: Fraction, hi: Fraction, *, strict: bool) -> list[Fraction]:
        if strict:
            return self.ends[bisect.bisect_right(self.ends, lo):bisect.bisect_left(self.ends, hi)]
        return self.ends[bisect.bisect_left(self.ends, lo):bisect.bisect_right(self.ends, hi)]

    def measure_up_to(self, x: Fraction) -> Fraction:
        """Exact ``m(C_n ∩ [0, x])``."""
        i = bisect.bisect_right(self.los, x)
        if i == 0:
            return Fraction(0)
        last = self.stage.kept_intervals[i - 1]
        return self.prefix[i - 1] + min(x, last.hi) - last.lo

    def measure_in(self, I: RatInterval) -> Fraction:
        return self.measure_up_to(I.hi) - self.measure_up_to(I.lo)


@lru_cache(maxsize=64)
def stage_index(spec: FatCantorSpec, n: int) -> StageIndex:
    return StageIndex(build_stage(spec, n))


def membership(spec: FatCantorSpec, x: Fraction, max_stage: int) -> tuple[int, bool]:
    """Decide ``x ∈ C`` by following the kept interval containing ``x``.

    Returns ``(value, certain)``.  Removal at some stage, or landing on a kept
    endpoint (never removed later), is certain; surviving ``max_stage``
    stages otherwise gives ``(1, False)``.
    """
    if not 0 <= x <= 1:
        raise OutOfDomain(f"{x} is outside [0, 1]")
    lo, hi = Fraction(0), Fraction(1)
    for k in range(1, max_stage + 1):
        if x == lo or x == hi:
            return 1, True
        r = spec.removal_length(k)
        c = (lo + hi) / 2
        g_lo, g_hi = c - r / 2, c + r / 2
        if g_lo < x < g_hi:
            return 0, True
        if x <= g_lo:
            hi = g_lo
        else:
            lo = g_hi
    if x == lo or x == hi:
        return 1, True
    return 1, False


@dataclass(frozen=True)
class CantorIndefinite:
    """``F(x) = ∫_0^x χ_C``, enclosed through the depth-``depth`` cover."""

    spec: FatCantorSpec = FatCantorSpec()
    depth: int = 8
    base: Fraction = Fraction(0)

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be >= 0")

    @property
    def stage(self) -> FatCantorStage:
        return build_stage(self.spec, self.depth)

    @property
    def tail(self) -> Fraction:
        """Upper bound on ``m(C_depth) - m(C)``."""
        return self.stage.kept_measure - limit_measure_bounds(self.spec).lo

    def cover_measure_up_to(self, x: Fraction) -> Fraction:
        return stage_index(self.spec, self.depth).measure_up_to(x)


def cantor_F_eval(F: CantorIndefinite, x) -> RatInterval:
    x = as_rational(x)
    if not 0 <= x <= 1:
        raise OutOfDomain(f"{x} is outside [0, 1]")
    hi = F.cover_measure_up_to(x)
    return RatInterval(max(Fraction(0), hi - F.tail), hi)


@dataclass(frozen=True)
class ZeroDerivativeWitness:
    point: Fraction
    radius: Fraction
    stage: int

    @property
    def neighborhood(self) -> RatInterval:
        return RatInterval(self.point - self.radius, self.point + self.radius)

    def verify(self, F: CantorIndefinite) -> bool:
        """``F`` is constant on the neighborhood: it misses the kept cover and
        the cover-measure (hence the enclosure) does not increase across it."""
        nb = self.neighborhood
        if stage_index(F.spec, F.depth).meets_closed(nb):
            return False
        left, right = cantor_F_eval(F, nb.lo), cantor_F_eval(F, nb.hi)
        return left == right


def zero_derivative_witnesses(F: CantorIndefinite, count: int) -> list[ZeroDerivativeWitness]:
    """Centres of removed intervals (stage by stage, left to right), each with
    radius a quarter of the removed length."""
    if count <= 0:
        return []
    if F.depth < 1:
        raise ValueError("depth must be >= 1 to have removed intervals")
    out = []
    for k in range(1, F.depth + 1):
        r = F.spec.removal_length(k)
        prev = build_stage(F.spec, k - 1)
        for iv in prev.kept_intervals:
            out.append(ZeroDerivativeWitness(iv.midpoint, r / 4, k))
            if len(out) == count:
                return out
    return out


@dataclass(frozen=True)
class NonconstancyReport:
    depth: int
    F0: RatInterval
    F1: RatInterval
    witnesses: tuple[ZeroDerivativeWitness, ...]
    witnesses_verified: int
    certified: bool

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "F0": self.F0.to_json(),
            "F1": self.F1.to_json(),
            "zero_derivative_witnesses": len(self.witnesses),
            "witnesses_verified": self.witnesses_verified,
            "certified": self.certified,
        }


def nonconstancy_report(F: CantorIndefinite) -> NonconstancyReport:
    """Certify ``F(1) > 0 = F(0)`` alongside every zero-derivative witness."""
    if F.depth < 1:
        raise InadmissibleSpec("need depth >= 1 for zero-derivative witnesses")
    total = 2 ** F.depth - 1
    wits = tuple(zero_derivative_witnesses(F, total))
    verified = sum(w.verify(F) for w in wits)
    F0, F1 = cantor_F_eval(F, 0), cantor_F_eval(F, 1)
    ok = F1.lo > F0.hi and verified == len(wits) and F0 == RatInterval(0)
    return NonconstancyReport(F.depth, F0, F1, wits, verified, ok)
