"""Indefinite integrals ``F(x) = c + ∫_a^x f``: evaluation, derivative
certificates, the dense-zero-derivative constancy harness, and Thomson's
subdivision sums."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .cantorpath import CantorIndefinite, cantor_F_eval, stage_index
from .darboux import DEFAULT_BUDGET, Partition, integrate
from .errors import NonExactEvaluation, NotIntegrable, OutOfDomain
from .exactnum import RatInterval, as_rational, parse_rational
from .funcmodel import FuncModel


class IndefiniteIntegral:
    """``F(x) = constant + ∫_{base_point}^x integrand``.

    Values are enclosures.  When the Darboux gap cannot be closed the model's
    Lebesgue integral is used if it has one (fat Cantor indicators do).
    """

    def __init__(self, integrand: FuncModel, base_point=None, constant=0,
                 eps=0, budget: int = DEFAULT_BUDGET):
        self.integrand = integrand
        self.base_point = integrand.domain.lo if base_point is None else as_rational(base_point)
        self.constant = as_rational(constant)
        self.eps = as_rational(eps)
        self.budget = budget
        if not integrand.domain.contains(self.base_point):
            raise OutOfDomain("base point outside the integrand's domain")
        self._cache: dict[Fraction, RatInterval] = {}

    @property
    def domain(self) -> RatInterval:
        return self.integrand.domain

    def segment_integral(self, lo: Fraction, hi: Fraction) -> RatInterval:
        seg = RatInterval(lo, hi)
        closed = getattr(self.integrand, "exact_integral", None)
        if closed is not None:
            # step and polynomial models integrate in closed form
            return RatInterval(closed(seg))
        enc = integrate(self.integrand, seg, self.eps, self.budget)
        if enc.certified:
            return enc.integral
        leb = self.integrand.lebesgue_integral(seg)
        if leb is not None:
            return leb
        raise NotIntegrable(f"integral over {seg} is not certified", enclosure=enc)

    def __call__(self, x) -> RatInterval:
        return indefinite_eval(self, x)

    def __repr__(self):
        return (f"IndefiniteIntegral({self.integrand!r}, base={self.base_point}, "
                f"c={self.constant})")


def indefinite_eval(F: IndefiniteIntegral, x) -> RatInterval:
    x = as_rational(x)
    if not F.domain.contains(x):
        raise OutOfDomain(f"{x} is outside {F.domain}")
    if x in F._cache:
        return F._cache[x]
    a = F.base_point
    if x == a:
        out = RatInterval(F.constant)
    elif x > a:
        out = F.segment_integral(a, x) + F.constant
    else:
        out = (-F.segment_integral(x, a)) + F.constant
    F._cache[x] = out
    return out


def indefinite_eval_many(F: IndefiniteIntegral, xs: Iterable) -> dict[Fraction, RatInterval]:
    """Evaluate at many points to the right of the base by accumulating
    integrals over consecutive gaps (additivity)."""
    pts = sorted({as_rational(x) for x in xs})
    out = {}
    prev, acc = F.base_point, RatInterval(F.constant)
    for x in pts:
        if x < F.base_point:
            out[x] = indefinite_eval(F, x)
            continue
        if x > prev:
            acc = acc + F.segment_integral(prev, x)
            prev = x
        out[x] = acc
    return out


@dataclass(frozen=True)
class DerivativeEnclosure:
    point: Fraction
    radii: tuple[Fraction, ...]
    quotient_enclosures: tuple[RatInterval, ...]

    @property
    def certified_zero(self) -> bool:
        return any(q == RatInterval(0) for q in self.quotient_enclosures)

    @property
    def tightest(self) -> RatInterval:
        return min(self.quotient_enclosures, key=lambda q: q.width)


def derivative_enclosure(F: IndefiniteIntegral, z, radii: Sequence) -> DerivativeEnclosure:
    """Every difference quotient of ``F`` at ``z`` with the other point within
    ``ρ`` is an average of the integrand, so it lies in the integrand's range
    over ``[z-ρ, z+ρ]``."""
    z = as_rational(z)
    dom = F.domain
    if not dom.contains_strictly(z):
        raise OutOfDomain(f"{z} is not interior to {dom}")
    rs, qs = [], []
    for rho in radii:
        rho = as_rational(rho)
        if rho <= 0:
            raise ValueError("radii must be positive")
        J = RatInterval(max(z - rho, dom.lo), min(z + rho, dom.hi))
        rs.append(rho)
        qs.append(F.integrand.range(J))
    return DerivativeEnclosure(z, tuple(rs), tuple(qs))


class Verdict(str, enum.Enum):
    CONSTANT_CERTIFIED = "ConstantCertified"
    DENSE_ZEROS_NOT_FOUND = "DenseZerosNotFound"
    INAPPLICABLE = "Inapplicable"
    # zeros found and integrand integrable, yet F moved: signals a defect, never expected
    CONSTANCY_REFUTED = "ConstancyRefuted"


@dataclass(frozen=True)
class HarnessReport:
    verdict: Verdict
    zero_points: tuple[Optional[tuple[Fraction, Fraction]], ...]
    cells_without_zero: tuple[RatInterval, ...]
    probes_checked: int
    probes_exact: int
    note: str = ("density is approximated by the supplied probe cells; "
                 "each cell must contain a certified zero of F'")


def find_zero_derivative(F: IndefiniteIntegral, cell: RatInterval,
                         search_depth: int = 8) -> Optional[tuple[Fraction, Fraction]]:
    """A point ``z`` and radius ``ρ`` inside ``cell`` with ``F' = 0`` certified."""
    f = F.integrand
    pts = [cell.lo, *f.split_points(cell), cell.hi]
    gaps = list(zip(pts, pts[1:]))
    for _level in range(search_depth + 1):
        nxt = []
        for u, v in gaps:
            w = v - u
            J = RatInterval(u + w / 4, v - w / 4)
            enc = f.enclose(J)
            if enc.exact and enc.bounds == RatInterval(0):
                z, rho = J.midpoint, J.width / 2
                if derivative_enclosure(F, z, [rho]).certified_zero:
                    return z, rho
            m = (u + v) / 2
            nxt.extend([(u, m), (m, v)])
        gaps = nxt
    return None


def _certified_integrable(f: FuncModel) -> bool:
    if f.integrable is not None:
        return f.integrable
    return integrate(f, f.domain, 0).certified


def dense_zero_derivative_harness(F: IndefiniteIntegral, probe_cells: Sequence,
                                  probe_points: Optional[Sequence] = None,
                                  n_probes: int = 1000,
                                  search_depth: int = 8,
                                  stop_at_first_failure: bool = True) -> HarnessReport:
    """If ``F' = 0`` is certified in every probe cell and the integrand is
    Riemann integrable, ``F`` must be constant; check it at the probes."""
    zeros, missing = [], []
    for cell in probe_cells:
        cell = cell if isinstance(cell, RatInterval) else RatInterval(*cell)
        hit = find_zero_derivative(F, cell, search_depth)
        zeros.append(hit)
        if hit is None:
            missing.append(cell)
            if stop_at_first_failure:
                break
    if missing:
        return HarnessReport(Verdict.DENSE_ZEROS_NOT_FOUND, tuple(zeros), tuple(missing), 0, 0)
    if not _certified_integrable(F.integrand):
        return HarnessReport(Verdict.INAPPLICABLE, tuple(zeros), (), 0, 0)
    dom = F.domain
    if probe_points is None:
        probe_points = [dom.lo + dom.width * k / n_probes for k in range(1, n_probes + 1)]
    values = indefinite_eval_many(F, probe_points)
    c = F.constant
    exact = sum(v == RatInterval(c) for v in values.values())
    ok = all(v.contains(c) for v in values.values())
    verdict = Verdict.CONSTANT_CERTIFIED if ok else Verdict.CONSTANCY_REFUTED
    return HarnessReport(verdict, tuple(zeros), (), len(values), exact)


# ---------------------------------------------------------------------------
# Thomson sums

Evaluable = Union[IndefiniteIntegral, CantorIndefinite, FuncModel,
                  Mapping, Callable[[Fraction], Fraction]]


def _evaluator(F: Evaluable) -> Callable[[Fraction], RatInterval]:
    if isinstance(F, IndefiniteIntegral):
        return lambda x: indefinite_eval(F, x)
    if isinstance(F, CantorIndefinite):
        return lambda x: cantor_F_eval(F, x)
    if isinstance(F, FuncModel):
        return lambda x: RatInterval(F.eval(x))
    if isinstance(F, Mapping):
        table = {as_rational(k): as_rational(v) for k, v in F.items()}

        def lookup(x):
            try:
                return RatInterval(table[x])
            except KeyError:
                raise NonExactEvaluation(f"table has no value at {x}") from None
        return lookup
    if callable(F):
        return lambda x: RatInterval(as_rational(F(x)))
    raise TypeError(f"cannot evaluate {type(F).__name__}")


def cantor_approximant(F: CantorIndefinite) -> Callable[[Fraction], Fraction]:
    """Exact ``x ↦ m(C_depth ∩ [0, x])``: the indefinite integral of the
    depth-``depth`` cover's indicator."""
    idx = stage_index(F.spec, F.depth)
    return idx.measure_up_to


def parse_table(text: str) -> dict[Fraction, Fraction]:
    """Lines ``x F(x)`` in exact syntax; blank lines and ``#`` comments skipped."""
    table = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"expected 'x F(x)', got {line!r}")
        table[parse_rational(parts[0])] = parse_rational(parts[1])
    return table


def _abs_interval(q: RatInterval) -> RatInterval:
    if q.lo >= 0:
        return q
    if q.hi <= 0:
        return -q
    return RatInterval(0, max(-q.lo, q.hi))


class TagPolicy(str, enum.Enum):
    MIDPOINT = "Midpoint"
    ADVERSARIAL = "Adversarial"
    GIVEN = "Given"


@dataclass(frozen=True)
class ThomsonReport:
    subdivision: Partition
    tags: tuple[tuple[Fraction, Fraction], ...]
    sum_value: Fraction
    sum_enclosure: RatInterval
    tag_policy: TagPolicy
    terms: tuple[RatInterval, ...] = field(repr=False)

    @property
    def exact(self) -> bool:
        return self.sum_enclosure.is_degenerate


def _term(ev, u, v, xi, xi2) -> RatInterval:
    Fu, Fv, Fx, Fx2 = ev(u), ev(v), ev(xi), ev(xi2)
    left = (Fx - Fu) * (1 / (xi - u))
    right = (Fv - Fx2) * (1 / (v - xi2))
    return _abs_interval(left - right) * (v - u)


def _check_tags(P: Partition, tags):
    if len(tags) != len(P.cells):
        raise ValueError("need one tag pair per cell")
    for cell, (a, b) in zip(P.cells, tags):
        if not (cell.lo < a <= b < cell.hi):
            raise ValueError(f"tags {a}, {b} violate {cell.lo} < ξ <= ξ' < {cell.hi}")


def _finish(P, tags, terms, policy, max_width) -> ThomsonReport:
    total = RatInterval(0)
    for t in terms:
        total = total + t
    if total.width > max_width:
        raise NonExactEvaluation(
            f"enclosure width {total.width} exceeds the allowed {max_width}")
    return ThomsonReport(P, tuple(tags), total.hi, total, policy, tuple(terms))


def midpoint_tags(P: Partition) -> list[tuple[Fraction, Fraction]]:
    return [(c.midpoint, c.midpoint) for c in P.cells]


def thomson_sum(F: Evaluable, P: Partition, tags=None, max_width=0) -> ThomsonReport:
    """``Σ |ΔF/Δx on [x_{i-1}, ξ] - ΔF/Δx on [ξ', x_i]| · (x_i - x_{i-1})``."""
    policy = TagPolicy.GIVEN
    if tags is None:
        tags, policy = midpoint_tags(P), TagPolicy.MIDPOINT
    tags = [(as_rational(a), as_rational(b)) for a, b in tags]
    _check_tags(P, tags)
    ev = _evaluator(F)
    terms = [_term(ev, c.lo, c.hi, a, b) for c, (a, b) in zip(P.cells, tags)]
    return _finish(P, tags, terms, policy, as_rational(max_width))


def default_candidates(F: Evaluable, cell: RatInterval) -> list[Fraction]:
    u, v, w = cell.lo, cell.hi, cell.width
    pts = {cell.midpoint}
    for k in (2, 3, 4):
        pts.add(u + w / 2 ** k)
        pts.add(v - w / 2 ** k)
    if isinstance(F, IndefiniteIntegral):
        pts.update(F.integrand.split_points(cell))
    return sorted(p for p in pts if u < p < v)


def thomson_adversarial(F: Evaluable, P: Partition, candidate_tags_per_cell=None,
                        max_width=0) -> ThomsonReport:
    """Maximize each cell's term over candidate pairs ``ξ <= ξ'``.  A lower
    bound for the supremum over all tags; midpoints are always candidates."""
    ev = _evaluator(F)
    tags, terms = [], []
    for i, cell in enumerate(P.cells):
        if candidate_tags_per_cell is None:
            cands = default_candidates(F, cell)
        else:
            cands = sorted({as_rational(x) for x in candidate_tags_per_cell[i]
                            if cell.lo < as_rational(x) < cell.hi})
        if cell.midpoint not in cands:
            cands = sorted({*cands, cell.midpoint})
        best = None
        for j, a in enumerate(cands):
            for b in cands[j:]:
                t = _term(ev, cell.lo, cell.hi, a, b)
                if best is None or t.lo > best[0].lo:
                    best = (t, (a, b))
        terms.append(best[0])
        tags.append(best[1])
    return _finish(P, tags, terms, TagPolicy.ADVERSARIAL, as_rational(max_width))


class Evidence(str, enum.Enum):
    CONSISTENT = "ConsistentWithIndefinite"
    INCONSISTENT = "InconsistentEvidence"


@dataclass(frozen=True)
class ThomsonEvidence:
    classification: Evidence
    schedule: tuple[tuple[int, Fraction], ...]
    eps: Fraction


def thomson_evidence(F: Evaluable, I: RatInterval, ns: Sequence[int], eps) -> ThomsonEvidence:
    """Adversarial sums along uniform meshes; consistent when the finest one
    is below ``eps``.  Evidence only: the criterion quantifies over all δ."""
    eps = as_rational(eps)
    sched = []
    for n in ns:
        rep = thomson_adversarial(F, Partition.uniform(I, n))
        sched.append((n, rep.sum_value))
    cls = Evidence.CONSISTENT if sched and sched[-1][1] < eps else Evidence.INCONSISTENT
    return ThomsonEvidence(cls, tuple(sched), eps)
