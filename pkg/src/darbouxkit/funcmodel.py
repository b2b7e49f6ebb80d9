"""Represented real functions: exact point values and certified ranges.

Every model answers ``eval`` exactly at rational points of its domain and
``enclose`` with an interval containing ``[inf f, sup f]`` over a closed
subinterval.  ``enclose_open`` bounds the same quantities over the open
interior, which is what the Darboux *integrals* depend on (changing ``f`` at
finitely many partition points never moves them).
"""

from __future__ import annotations

import bisect
import functools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from . import cantorpath
from .cantorpath import FatCantorSpec
from .errors import NoWitness, OutOfDomain, ParseError, UnsupportedPointKind
from .exactnum import RatInterval, as_rational, fmt, parse_rational
from .polynomial import Polynomial

# pi lies strictly between these (35 correct decimals)
PI_LO = Fraction(314159265358979323846264338327950288, 10**35)
PI_HI = PI_LO + Fraction(1, 10**35)
PI_ENCLOSURE = RatInterval(PI_LO, PI_HI)


@dataclass(frozen=True)
class PiRat:
    """The irrational point ``(p/q)·π``, normalized so that gcd(p, q) = 1."""

    p: int
    q: int

    def __post_init__(self):
        if self.q <= 0:
            raise ValueError("q must be positive")
        g = math.gcd(self.p, self.q)
        if g > 1:
            object.__setattr__(self, "p", self.p // g)
            object.__setattr__(self, "q", self.q // g)

    def enclosure(self) -> RatInterval:
        return PI_ENCLOSURE * Fraction(self.p, self.q)

    def __str__(self):
        return f"pi*{self.p}/{self.q}"


PointRep = Union[Fraction, PiRat]


def point_json(x: PointRep):
    if isinstance(x, PiRat):
        return {"pi_times": fmt(Fraction(x.p, x.q))}
    return fmt(x)


def point_enclosure(x: PointRep) -> RatInterval:
    return x.enclosure() if isinstance(x, PiRat) else RatInterval(x)


def strictly_inside(x: PointRep, I: RatInterval) -> bool:
    box = point_enclosure(x)
    return I.lo < box.lo and box.hi < I.hi


@dataclass(frozen=True)
class Enclosure:
    bounds: RatInterval
    exact: bool

    @property
    def osc(self) -> Fraction:
        return self.bounds.width


def _as_interval(I) -> RatInterval:
    if isinstance(I, RatInterval):
        return I
    lo, hi = I
    return RatInterval(lo, hi)


class FuncModel:
    """Base class; subclasses set ``domain`` and implement the hooks."""

    domain: RatInterval
    #: True/False when Riemann integrability on the domain is known.
    integrable: Optional[bool] = None
    continuous: bool = False

    # -- point evaluation ---------------------------------------------------
    def eval(self, x: PointRep) -> Fraction:
        if isinstance(x, PiRat):
            raise UnsupportedPointKind(f"{type(self).__name__} rejects pi-rational points")
        x = as_rational(x)
        self._check_point(x)
        return self._eval(x)

    def _eval(self, x: Fraction) -> Fraction:
        raise NotImplementedError

    def _check_point(self, x: Fraction):
        if not self.domain.contains(x):
            raise OutOfDomain(f"{x} is outside {self.domain}")

    def _check(self, I) -> RatInterval:
        I = _as_interval(I)
        if not self.domain.contains_interval(I):
            raise OutOfDomain(f"{I} is not inside {self.domain}")
        return I

    # -- ranges ---------------------------------------------------------
    def enclose(self, I) -> Enclosure:
        I = self._check(I)
        if I.is_degenerate:
            return Enclosure(RatInterval(self._eval(I.lo)), True)
        return self._enclose(I)

    def enclose_open(self, I) -> Enclosure:
        I = self._check(I)
        if I.is_degenerate:
            return Enclosure(RatInterval(self._eval(I.lo)), True)
        return self._enclose_open(I)

    def range(self, I) -> RatInterval:
        return self.enclose(I).bounds

    def _enclose(self, I: RatInterval) -> Enclosure:
        raise NotImplementedError

    def _enclose_open(self, I: RatInterval) -> Enclosure:
        return self._enclose(I)

    # -- structure hints ----------------------------------------------------
    def split_points(self, I: RatInterval) -> list[Fraction]:
        """Natural refinement points strictly inside ``I`` (sorted)."""
        return []

    def integral_hint(self, I: RatInterval):
        """Optional ``(lower_integral, upper_integral)`` enclosures over ``I``."""
        return None

    def lebesgue_integral(self, I: RatInterval) -> Optional[RatInterval]:
        hint = self.integral_hint(I)
        if hint is not None and self.integrable:
            return RatInterval(hint[0].lo, hint[1].hi)
        return None

    def osc_stable_radius(self, c: Fraction) -> Optional[Fraction]:
        """Radius below which ``osc(f, [c-δ, c+δ])`` no longer changes."""
        return None

    # -- attaining points -------------------------------------------------------
    def witness_above(self, I, t, strict: bool = True) -> PointRep:
        """A point strictly inside ``I`` with ``f > t`` (``>=`` if not strict)."""
        return self._search(self._check(I), as_rational(t), strict, above=True)

    def witness_below(self, I, t, strict: bool = True) -> PointRep:
        return self._search(self._check(I), as_rational(t), strict, above=False)

    def _candidates(self, I: RatInterval) -> Iterable[Fraction]:
        yield I.midpoint
        for level in range(2, 11):
            n = 2 ** level
            for k in range(1, n, 2):
                yield I.lo + I.width * k / n

    def _search(self, I: RatInterval, t: Fraction, strict: bool, above: bool) -> PointRep:
        if I.is_degenerate:
            raise NoWitness("degenerate interval has no interior")

        def ok(v):
            if above:
                return v > t if strict else v >= t
            return v < t if strict else v <= t

        for x in self._candidates(I):
            if I.lo < x < I.hi and ok(self._eval(x)):
                return x
        side = "above" if above else "below"
        raise NoWitness(f"no represented point {side} {t} in {I}")

    def spec_string(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec_string()}>"


# ---------------------------------------------------------------------------
class Step(FuncModel):
    """Piecewise constant: ``values[i]`` on the i-th open piece.

    ``point_values[i]`` is the value at ``breakpoints[i]`` (default: the left
    limit, i.e. ``values[i]``).  Domain endpoints take their piece's value.
    """

    integrable = True

    def __init__(self, domain, breakpoints: Sequence = (), values: Sequence = (0,),
                 point_values: Optional[Sequence] = None):
        self.domain = _as_interval(domain)
        self.breakpoints = tuple(as_rational(b) for b in breakpoints)
        self.values = tuple(as_rational(v) for v in values)
        if len(self.values) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one value per open piece")
        if any(b >= c for b, c in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if self.breakpoints and not (self.domain.lo < self.breakpoints[0]
                                     and self.breakpoints[-1] < self.domain.hi):
            raise ValueError("breakpoints must be interior to the domain")
        if point_values is None:
            self.point_values = self.values[:-1]
        else:
            self.point_values = tuple(as_rational(v) for v in point_values)
            if len(self.point_values) != len(self.breakpoints):
                raise ValueError("need one point value per breakpoint")
        self.continuous = len(set(self.values) | set(self.point_values)) == 1

    @functools.cached_property
    def pieces(self) -> tuple[tuple[RatInterval, Fraction], ...]:
        ends = [self.domain.lo, *self.breakpoints, self.domain.hi]
        return tuple((RatInterval(a, b), v) for a, b, v in zip(ends, ends[1:], self.values))

    def _eval(self, x):
        i = bisect.bisect_left(self.breakpoints, x)
        if i < len(self.breakpoints) and self.breakpoints[i] == x:
            return self.point_values[i]
        return self.values[i]

    def _values_over(self, lo, hi, closed: bool) -> list[Fraction]:
        bps = self.breakpoints
        # pieces i with (ends[i], ends[i+1]) meeting (lo, hi)
        first = bisect.bisect_right(bps, lo)
        last = bisect.bisect_left(bps, hi)
        vals = list(self.values[first:last + 1])
        if closed:
            j0, j1 = bisect.bisect_left(bps, lo), bisect.bisect_right(bps, hi)
        else:
            j0, j1 = bisect.bisect_right(bps, lo), bisect.bisect_left(bps, hi)
        vals.extend(self.point_values[j0:j1])
        return vals

    def _enclose(self, I):
        return Enclosure(RatInterval.hull_of(self._values_over(I.lo, I.hi, True)), True)

    def _enclose_open(self, I):
        return Enclosure(RatInterval.hull_of(self._values_over(I.lo, I.hi, False)), True)

    def split_points(self, I):
        bps = self.breakpoints
        return list(bps[bisect.bisect_right(bps, I.lo):bisect.bisect_left(bps, I.hi)])

    def osc_stable_radius(self, c):
        marks = [self.domain.lo, *self.breakpoints, self.domain.hi]
        dists = [abs(m - c) for m in marks if m != c]
        return min(dists) if dists else None

    def exact_integral(self, I: RatInterval) -> Fraction:
        """Telescoped ``Σ value · overlap``; breakpoints are null."""
        return sum((v * (b - a) for a, b, v in self.overlaps(I)), Fraction(0))

    def overlaps(self, I: RatInterval) -> list[tuple[Fraction, Fraction, Fraction]]:
        """``(lo, hi, value)`` for each piece meeting ``I``, clipped to ``I``."""
        bps = self.breakpoints
        first = bisect.bisect_right(bps, I.lo)
        last = bisect.bisect_left(bps, I.hi)
        ends = [I.lo, *bps[first:last], I.hi]
        return list(zip(ends, ends[1:], self.values[first:last + 1]))

    def lebesgue_integral(self, I):
        return RatInterval(self.exact_integral(self._check(I)))

    def _candidates(self, I):
        for piece, _v in self.pieces:
            lo, hi = max(piece.lo, I.lo), min(piece.hi, I.hi)
            if lo < hi:
                yield (lo + hi) / 2
        yield from self.split_points(I)

    def spec_string(self):
        s = (f"step {fmt(self.domain.lo)} {fmt(self.domain.hi)} "
             f"bp={','.join(map(fmt, self.breakpoints))} vals={','.join(map(fmt, self.values))}")
        if self.point_values != self.values[:-1]:
            s += f" at={','.join(map(fmt, self.point_values))}"
        return s


# ---------------------------------------------------------------------------
class PiecewisePoly(FuncModel):
    """Contiguous polynomial pieces.  A shared endpoint belongs to the left piece."""

    integrable = True

    def __init__(self, pieces: Sequence[tuple]):
        ps = []
        for seg, coeffs in pieces:
            poly = coeffs if isinstance(coeffs, Polynomial) else Polynomial(coeffs)
            ps.append((_as_interval(seg), poly))
        if not ps:
            raise ValueError("need at least one piece")
        for (a, _), (b, _) in zip(ps, ps[1:]):
            if a.hi != b.lo:
                raise ValueError("pieces must be contiguous")
        self.pieces = tuple(ps)
        self.domain = RatInterval(ps[0][0].lo, ps[-1][0].hi)
        self._starts = [seg.lo for seg, _ in ps]
        self.continuous = all(p(a.hi) == q(b.lo)
                              for (a, p), (b, q) in zip(ps, ps[1:]))

    @classmethod
    def single(cls, domain, coeffs) -> "PiecewisePoly":
        return cls([(_as_interval(domain), coeffs)])

    def _piece_index(self, x):
        # left piece owns shared endpoints
        i = bisect.bisect_left(self._starts, x) - 1
        return max(i, 0)

    def _eval(self, x):
        return self.pieces[self._piece_index(x)][1](x)

    def _segments(self, I: RatInterval):
        for i, (seg, poly) in enumerate(self.pieces):
            lo, hi = max(seg.lo, I.lo), min(seg.hi, I.hi)
            if lo > hi or (lo == hi and i > 0 and lo == seg.lo):
                continue
            yield i, RatInterval(lo, hi), poly

    def _enclose(self, I):
        out, exact = None, True
        for _i, seg, poly in self._segments(I):
            r, ex = poly.range_on(seg)
            out = r if out is None else out.hull(r)
            exact = exact and ex
        return Enclosure(out, exact)

    def _enclose_open(self, I):
        if self.continuous:
            return self._enclose(I)
        out, exact = None, True
        for i, seg, poly in self._segments(I):
            if seg.is_degenerate:
                continue
            r, ex = poly.range_on(seg)  # sup/inf over the open segment
            out = r if out is None else out.hull(r)
            exact = exact and ex
        inner = [s.lo for s, _ in self.pieces[1:] if I.lo < s.lo < I.hi]
        for b in inner:
            out = out.hull(RatInterval(self._eval(b)))
        return Enclosure(out, exact)

    def split_points(self, I):
        return [s.lo for s, _ in self.pieces[1:] if I.lo < s.lo < I.hi]

    def exact_integral(self, I: RatInterval) -> Fraction:
        total = Fraction(0)
        for _i, seg, poly in self._segments(I):
            total += poly.integral(seg.lo, seg.hi)
        return total

    def integral_hint(self, I):
        v = RatInterval(self.exact_integral(I))
        return v, v

    def _candidates(self, I):
        for _i, seg, poly in self._segments(I):
            yield from poly.rational_critical_points(seg.lo, seg.hi)
            if not seg.is_degenerate:
                yield seg.midpoint
        yield from self.split_points(I)
        # approach each segment end, where monotone extremes sit
        for _i, seg, _p in self._segments(I):
            w = seg.width
            for k in range(1, 64):
                yield seg.lo + w / 2 ** k
                yield seg.hi - w / 2 ** k
        yield from super()._candidates(I)

    def spec_string(self):
        parts = []
        for seg, poly in self.pieces:
            parts.append(f"{fmt(seg.lo)} {fmt(seg.hi)} coeffs={','.join(map(fmt, poly.coeffs))}")
        return "poly " + " ; ".join(parts)


class AbsShift(PiecewisePoly):
    """``x -> |x - center|``."""

    def __init__(self, domain, center=0):
        domain = _as_interval(domain)
        self.center = c = as_rational(center)
        left, right = (c, -1), (-c, 1)
        if domain.lo < c < domain.hi:
            pieces = [(RatInterval(domain.lo, c), left), (RatInterval(c, domain.hi), right)]
        elif c >= domain.hi:
            pieces = [(domain, left)]
        else:
            pieces = [(domain, right)]
        super().__init__(pieces)

    def spec_string(self):
        return f"abs {fmt(self.domain.lo)} {fmt(self.domain.hi)} center={fmt(self.center)}"


# ---------------------------------------------------------------------------
class FatCantorIndicator(FuncModel):
    """Indicator of the limit fat Cantor set, enclosed via the depth-``d`` cover.

    Point membership is decided by following ``x`` through up to
    ``resolution`` stages; see :func:`cantorpath.membership`.
    """

    integrable = False

    def __init__(self, spec: FatCantorSpec = FatCantorSpec(), depth: int = 8,
                 resolution: Optional[int] = None):
        if depth < 0:
            raise ValueError("depth must be >= 0")
        self.spec = spec
        self.depth = depth
        self.resolution = max(depth, 64) if resolution is None else max(depth, resolution)
        self.domain = RatInterval(0, 1)
        self._index = cantorpath.stage_index(spec, depth)

    def membership(self, x: Fraction) -> tuple[int, bool]:
        return cantorpath.membership(self.spec, x, self.resolution)

    def _eval(self, x):
        return Fraction(self.membership(x)[0])

    def _enclose(self, I):
        if not self._index.meets_closed(I):
            return Enclosure(RatInterval(0), True)
        exact = bool(self._index.endpoints_in(I.lo, I.hi, strict=False))
        return Enclosure(RatInterval(0, 1), exact)

    def _enclose_open(self, I):
        if not self._index.meets_open(I.lo, I.hi):
            return Enclosure(RatInterval(0), True)
        exact = bool(self._index.endpoints_in(I.lo, I.hi, strict=True))
        return Enclosure(RatInterval(0, 1), exact)

    def enclose(self, I):
        I = self._check(I)
        if I.is_degenerate:
            v, certain = self.membership(I.lo)
            return Enclosure(RatInterval(v) if certain else RatInterval(0, 1), certain)
        return self._enclose(I)

    def split_points(self, I):
        return list(self._index.endpoints_in(I.lo, I.hi, strict=True))

    def integral_hint(self, I):
        # lower envelope of χ_C is 0 (C has empty interior); upper integral = m(C ∩ I)
        cover = self._index.measure_in(I)
        tail = self._index.stage.kept_measure - cantorpath.limit_measure_bounds(self.spec).lo
        lower = RatInterval(0)
        upper = RatInterval(max(Fraction(0), cover - tail), cover)
        return lower, upper

    def lebesgue_integral(self, I):
        return self.integral_hint(self._check(I))[1]

    def _search(self, I, t, strict, above):
        if I.is_degenerate:
            raise NoWitness("degenerate interval has no interior")
        if above:
            if (t < 1) if strict else (t <= 1):
                pts = self._index.endpoints_in(I.lo, I.hi, strict=True)
                if pts:
                    return pts[0]
        elif (t > 0) if strict else (t >= 0):
            gap = self._removed_point(I)
            if gap is not None:
                return gap
        raise NoWitness(f"no certified point {'above' if above else 'below'} {t} in {I}")

    def _removed_point(self, I: RatInterval) -> Optional[Fraction]:
        """A point of ``I``'s interior removed at some stage <= resolution."""
        frontier = [RatInterval(0, 1)]
        for k in range(1, self.resolution + 1):
            r = self.spec.removal_length(k)
            nxt = []
            for iv in frontier:
                c = iv.midpoint
                g_lo, g_hi = c - r / 2, c + r / 2
                lo, hi = max(g_lo, I.lo), min(g_hi, I.hi)
                if lo < hi:
                    return (lo + hi) / 2
                for part in (RatInterval(iv.lo, g_lo), RatInterval(g_hi, iv.hi)):
                    if part.lo < I.hi and part.hi > I.lo:
                        nxt.append(part)
            frontier = nxt
            if not frontier or len(frontier) > 4096:
                break
        return None

    def spec_string(self):
        extra = self.spec.to_text()
        return f"fatcantor depth={self.depth}" + (f" {extra}" if extra else "")


# ---------------------------------------------------------------------------
class Pathological(FuncModel):
    """``p/q ↦ 1/q``, ``π·p/q ↦ 1 - 1/q``, ``1/2`` elsewhere (on a subinterval of [0, 1]).

    Rationals with denominator 1 (0 and 1) fall in the "elsewhere" clause so
    that ``0 < f < 1`` holds everywhere.
    """

    integrable = False

    def __init__(self, domain=(0, 1)):
        self.domain = _as_interval(domain)
        if not RatInterval(0, 1).contains_interval(self.domain):
            raise ValueError("pathological model lives on a subinterval of [0, 1]")
        self.integrable = None if self.domain.is_degenerate else False

    def eval(self, x):
        if isinstance(x, PiRat):
            if not (x.p >= 1 and self.domain.lo <= x.enclosure().lo
                    and x.enclosure().hi <= self.domain.hi):
                raise OutOfDomain(f"{x} is not certifiably inside {self.domain}")
            return 1 - Fraction(1, x.q)
        return super().eval(x)

    def _eval(self, x):
        if x.denominator == 1:
            return Fraction(1, 2)
        return Fraction(1, x.denominator)

    def _enclose(self, I):
        return Enclosure(RatInterval(0, 1), True)

    def integral_hint(self, I):
        return RatInterval(0), RatInterval(I.width)

    def lebesgue_integral(self, I):
        # f = 1/2 off a countable set
        return RatInterval(self._check(I).width / 2)

    def _search(self, I, t, strict, above):
        if I.is_degenerate:
            raise NoWitness("degenerate interval has no interior")
        if above:
            if t >= 1:
                raise NoWitness(f"f < 1 everywhere; nothing {'above' if strict else 'at least'} {t}")
            q = 4
            while not ((1 - Fraction(1, q) > t) if strict else (1 - Fraction(1, q) >= t)):
                q += 1
            return self._pi_point(I, q)
        if t <= 0:
            raise NoWitness(f"f > 0 everywhere; nothing below {t}")
        q = 2
        while not ((Fraction(1, q) < t) if strict else (Fraction(1, q) <= t)):
            q += 1
        return self._rat_point(I, q)

    def _pi_point(self, I: RatInterval, q0: int) -> PiRat:
        for q in range(q0, q0 + 100_000):
            p = max(1, math.floor(I.midpoint * q / PI_HI))
            for cand in (p, p + 1, p - 1, p + 2):
                if cand >= 1 and math.gcd(cand, q) == 1:
                    pt = PiRat(cand, q)
                    if strictly_inside(pt, I):
                        return pt
        raise NoWitness(f"no pi-rational point found in {I}")

    def _rat_point(self, I: RatInterval, q0: int) -> Fraction:
        for q in range(q0, q0 + 100_000):
            p = math.floor(I.lo * q) + 1
            while Fraction(p, q) < I.hi:
                if math.gcd(p, q) == 1 and I.lo < Fraction(p, q):
                    return Fraction(p, q)
                p += 1
        raise NoWitness(f"no rational point found in {I}")

    def spec_string(self):
        if self.domain == RatInterval(0, 1):
            return "patho"
        return f"patho {fmt(self.domain.lo)} {fmt(self.domain.hi)}"


# ---------------------------------------------------------------------------
class AffineImage(FuncModel):
    """``scale · inner + offset``."""

    def __init__(self, inner: FuncModel, scale=1, offset=0):
        self.inner = inner
        self.scale = as_rational(scale)
        self.offset = as_rational(offset)
        self.domain = inner.domain
        self.integrable = True if self.scale == 0 else inner.integrable
        self.continuous = True if self.scale == 0 else inner.continuous

    def _map(self, enc: Enclosure) -> Enclosure:
        return Enclosure(enc.bounds * self.scale + self.offset, enc.exact)

    def eval(self, x):
        return self.scale * self.inner.eval(x) + self.offset

    def _eval(self, x):
        return self.scale * self.inner._eval(x) + self.offset

    def enclose(self, I):
        return self._map(self.inner.enclose(I))

    def enclose_open(self, I):
        return self._map(self.inner.enclose_open(I))

    def split_points(self, I):
        return self.inner.split_points(I)

    def osc_stable_radius(self, c):
        return self.inner.osc_stable_radius(c)

    def integral_hint(self, I):
        if self.scale == 0:
            v = RatInterval(self.offset * I.width)
            return v, v
        hint = self.inner.integral_hint(I)
        if hint is None:
            return None
        lo, up = hint
        shift = self.offset * I.width
        if self.scale > 0:
            return lo * self.scale + shift, up * self.scale + shift
        # negation swaps lower and upper integrals
        return up * self.scale + shift, lo * self.scale + shift

    def lebesgue_integral(self, I):
        inner = self.inner.lebesgue_integral(I)
        if inner is None:
            return None
        return inner * self.scale + self.offset * I.width

    def _search(self, I, t, strict, above):
        if self.scale == 0:
            if I.is_degenerate:
                raise NoWitness("degenerate interval has no interior")
            ok = (self.offset > t if strict else self.offset >= t) if above else \
                 (self.offset < t if strict else self.offset <= t)
            if ok:
                return I.midpoint
            raise NoWitness(f"constant {self.offset} does not beat {t}")
        u = (t - self.offset) / self.scale
        if (self.scale > 0) == above:
            return self.inner.witness_above(I, u, strict)
        return self.inner.witness_below(I, u, strict)

    def spec_string(self):
        return (f"affine scale={fmt(self.scale)} offset={fmt(self.offset)} "
                f"( {self.inner.spec_string()} )")


# ---------------------------------------------------------------------------
class Glued(FuncModel):
    """Models on contiguous domains, glued; a shared endpoint belongs to the left one."""

    def __init__(self, parts: Sequence[FuncModel]):
        if not parts:
            raise ValueError("need at least one part")
        for a, b in zip(parts, parts[1:]):
            if a.domain.hi != b.domain.lo:
                raise ValueError("glued domains must be contiguous")
        self.parts = tuple(parts)
        self.domain = RatInterval(parts[0].domain.lo, parts[-1].domain.hi)
        flags = [p.integrable for p in parts]
        self.integrable = False if False in flags else (True if all(flags) else None)
        self.continuous = all(p.continuous for p in parts) and all(
            a._eval(a.domain.hi) == b._eval(b.domain.lo) for a, b in zip(parts, parts[1:]))
        self._starts = [p.domain.lo for p in parts]

    def _part(self, x):
        return self.parts[max(bisect.bisect_left(self._starts, x) - 1, 0)]

    def eval(self, x):
        if isinstance(x, PiRat):
            box = x.enclosure()
            for p in self.parts:
                if p.domain.lo < box.lo and box.hi < p.domain.hi:
                    return p.eval(x)
            raise OutOfDomain(f"{x} is not certifiably inside one part")
        return super().eval(x)

    def _eval(self, x):
        return self._part(x)._eval(x)

    def _segments(self, I):
        for i, p in enumerate(self.parts):
            lo, hi = max(p.domain.lo, I.lo), min(p.domain.hi, I.hi)
            if lo > hi or (lo == hi and i > 0 and lo == p.domain.lo):
                continue
            yield i, p, RatInterval(lo, hi)

    def _enclose(self, I):
        out, exact = None, True
        for i, p, seg in self._segments(I):
            enc = p.enclose(seg)
            if i > 0 and seg.lo == p.domain.lo and not seg.is_degenerate:
                # the left end belongs to the previous part; exact only if it does not matter
                exact = exact and enc == p.enclose_open(seg)
            out = enc.bounds if out is None else out.hull(enc.bounds)
            exact = exact and enc.exact
        return Enclosure(out, exact)

    def _enclose_open(self, I):
        out, exact = None, True
        for _i, p, seg in self._segments(I):
            if seg.is_degenerate:
                continue
            enc = p.enclose_open(seg)
            out = enc.bounds if out is None else out.hull(enc.bounds)
            exact = exact and enc.exact
        for b in self._starts[1:]:
            if I.lo < b < I.hi:
                out = out.hull(RatInterval(self._eval(b)))
        return Enclosure(out, exact)

    def split_points(self, I):
        pts = []
        for b in self._starts[1:]:
            if I.lo < b < I.hi:
                pts.append(b)
        for _i, p, seg in self._segments(I):
            if not seg.is_degenerate:
                pts.extend(p.split_points(seg))
        return sorted(set(pts))

    def integral_hint(self, I):
        lower, upper = RatInterval(0), RatInterval(0)
        any_hint = False
        for _i, p, seg in self._segments(I):
            if seg.is_degenerate:
                continue
            hint = p.integral_hint(seg)
            if hint is None:
                box = p.range(seg) * seg.width
                hint = (box, box)
            else:
                any_hint = True
            lower, upper = lower + hint[0], upper + hint[1]
        return (lower, upper) if any_hint else None

    def lebesgue_integral(self, I):
        total = RatInterval(0)
        for _i, p, seg in self._segments(I):
            if seg.is_degenerate:
                continue
            part = p.lebesgue_integral(seg)
            if part is None:
                return None
            total = total + part
        return total

    def _search(self, I, t, strict, above):
        for _i, p, seg in self._segments(I):
            if seg.is_degenerate:
                continue
            try:
                x = (p.witness_above if above else p.witness_below)(seg, t, strict)
            except NoWitness:
                continue
            if strictly_inside(x, seg):
                return x
        raise NoWitness(f"no part yields a point {'above' if above else 'below'} {t}")

    def spec_string(self):
        return "glue " + " ".join(f"( {p.spec_string()} )" for p in self.parts)


# ---------------------------------------------------------------------------
# mini-language

_TOKEN_RE = re.compile(r"\(|\)|;|[^\s();]+")


def _kv(tokens: list[str]) -> tuple[list[str], dict[str, str]]:
    pos, kw = [], {}
    for t in tokens:
        if "=" in t:
            k, v = t.split("=", 1)
            kw[k] = v
        else:
            pos.append(t)
    return pos, kw


def _nums(text: str) -> list[Fraction]:
    return [parse_rational(s) for s in text.split(",") if s.strip()]


class _Parser:
    def __init__(self, text: str):
        self.tokens = _TOKEN_RE.findall(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of function spec")
        self.i += 1
        return tok

    def expect(self, tok):
        got = self.take()
        if got != tok:
            raise ParseError(f"expected {tok!r}, got {got!r}")

    def flat_until_close(self) -> list[str]:
        out = []
        while self.peek() not in (None, "(", ")"):
            out.append(self.take())
        return out

    def model(self) -> FuncModel:
        head = self.take()
        if head == "(":
            m = self.model()
            self.expect(")")
            return m
        if head == "affine":
            _pos, kw = _kv(self.flat_until_close())
            self.expect("(")
            inner = self.model()
            self.expect(")")
            return AffineImage(inner, parse_rational(kw.get("scale", "1")),
                               parse_rational(kw.get("offset", "0")))
        if head == "glue":
            parts = []
            while self.peek() == "(":
                self.take()
                parts.append(self.model())
                self.expect(")")
            return Glued(parts)
        body = self.flat_until_close()
        if head == "poly":
            return _parse_poly(body)
        pos, kw = _kv(body)
        if head == "step":
            if len(pos) != 2:
                raise ParseError("step needs <a> <b>")
            at = _nums(kw["at"]) if "at" in kw else None
            return Step(RatInterval(parse_rational(pos[0]), parse_rational(pos[1])),
                        _nums(kw.get("bp", "")), _nums(kw.get("vals", "0")), at)
        if head == "abs":
            if len(pos) != 2:
                raise ParseError("abs needs <a> <b>")
            return AbsShift(RatInterval(parse_rational(pos[0]), parse_rational(pos[1])),
                            parse_rational(kw.get("center", "0")))
        if head == "fatcantor":
            depth = int(kw.get("depth", "8"))
            ratio = parse_rational(kw.get("ratio", "1/4"))
            overrides = tuple((int(k[1:]), parse_rational(v)) for k, v in kw.items()
                              if re.fullmatch(r"r\d+", k))
            return FatCantorIndicator(FatCantorSpec(ratio=ratio, overrides=overrides), depth)
        if head == "patho":
            if pos:
                if len(pos) != 2:
                    raise ParseError("patho takes no endpoints or exactly two")
                return Pathological(RatInterval(parse_rational(pos[0]), parse_rational(pos[1])))
            return Pathological()
        raise ParseError(f"unknown function kind {head!r}")


def _parse_poly(tokens: list[str]) -> PiecewisePoly:
    groups, cur = [], []
    for t in tokens:
        if t == ";":
            groups.append(cur)
            cur = []
        else:
            cur.append(t)
    groups.append(cur)
    pieces = []
    for g in groups:
        if g and g[0] == "poly":
            g = g[1:]
        pos, kw = _kv(g)
        if len(pos) != 2 or "coeffs" not in kw:
            raise ParseError("poly piece needs <a> <b> coeffs=<c0,...>")
        pieces.append((RatInterval(parse_rational(pos[0]), parse_rational(pos[1])),
                       _nums(kw["coeffs"])))
    return PiecewisePoly(pieces)


def parse_function(text: str) -> FuncModel:
    """Parse the function mini-language, e.g. ``step 0 1 bp=1/2 vals=1,0``."""
    p = _Parser(text.replace(";", " ; "))
    try:
        model = p.model()
    except (ValueError, KeyError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc
    if p.peek() is not None:
        raise ParseError(f"trailing tokens in function spec: {p.tokens[p.i:]}")
    return model
