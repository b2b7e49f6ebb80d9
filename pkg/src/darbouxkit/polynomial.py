"""Univariate polynomials with rational coefficients and certified ranges.

Root isolation for the derivative is delegated to sympy (exact factorization
over QQ, then rational isolating intervals for irreducible factors).  Every
value that reaches a certificate is recomputed here with Fractions.
"""

from __future__ import annotations

from functools import cached_property
from fractions import Fraction
from typing import Sequence

from .exactnum import RatInterval, as_rational


class Polynomial:
    """``c0 + c1 x + ... + cn x^n`` with exact rational coefficients."""

    def __init__(self, coeffs: Sequence):
        cs = [as_rational(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs) if cs else (Fraction(0),)

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_interval(self, box: RatInterval) -> RatInterval:
        """Naive interval Horner; sound, not tight."""
        acc = RatInterval(0)
        for c in reversed(self.coeffs):
            acc = acc * box + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:] or [0])

    def antiderivative(self) -> "Polynomial":
        return Polynomial([0] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def integral(self, a: Fraction, b: Fraction) -> Fraction:
        anti = self.antiderivative()
        return anti(b) - anti(a)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial([x - y for x, y in zip(a, b)])

    @cached_property
    def _critical_structure(self):
        """(rational roots of p', irreducible nonlinear sympy factors of p')."""
        d = self.derivative()
        if d.degree <= 0:
            return (), ()
        if d.degree == 1:
            return (-d.coeffs[0] / d.coeffs[1],), ()
        import sympy

        x = sympy.Symbol("x")
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator)
                           for c in reversed(d.coeffs)], x, domain="QQ")
        _, factors = sympy.factor_list(poly)
        rational, nonlinear = [], []
        for fac, _mult in factors:
            if fac.degree() == 1:
                a1, a0 = fac.all_coeffs()
                r = -sympy.Rational(a0) / sympy.Rational(a1)
                rational.append(Fraction(int(r.p), int(r.q)))
            elif fac.degree() > 1:
                nonlinear.append(fac)
        return tuple(sorted(set(rational))), tuple(nonlinear)

    def rational_critical_points(self, lo: Fraction, hi: Fraction) -> list[Fraction]:
        return [r for r in self._critical_structure[0] if lo < r < hi]

    def irrational_critical_boxes(self, lo: Fraction, hi: Fraction,
                                  width: Fraction) -> list[RatInterval]:
        """Isolating boxes (clipped to [lo, hi]) for irrational roots of p'."""
        nonlinear = self._critical_structure[1]
        if not nonlinear:
            return []
        import sympy

        boxes = []
        for fac in nonlinear:
            for (u, v), _m in fac.intervals(
                    eps=sympy.Rational(width.numerator, width.denominator)):
                u = Fraction(int(sympy.Rational(u).p), int(sympy.Rational(u).q))
                v = Fraction(int(sympy.Rational(v).p), int(sympy.Rational(v).q))
                if v < lo or u > hi:
                    continue
                boxes.append(RatInterval(max(u, lo), min(v, hi)))
        return boxes

    def range_on(self, seg: RatInterval,
                 width: Fraction = Fraction(1, 2**40)) -> tuple[RatInterval, bool]:
        """Enclosure of ``[min p, max p]`` over ``seg`` and an exactness flag.

        Exact whenever every interior critical point is rational; otherwise
        irrational critical points are boxed to ``width`` and the flag is
        ``False``.
        """
        lo, hi = seg.lo, seg.hi
        vals = [self(lo), self(hi)]
        if seg.is_degenerate or self.degree <= 1:
            return RatInterval.hull_of(vals), True
        vals.extend(self(r) for r in self.rational_critical_points(lo, hi))
        out = RatInterval.hull_of(vals)
        exact = True
        for box in self.irrational_critical_boxes(lo, hi, width):
            if box.hi <= lo or box.lo >= hi:
                continue
            out = out.hull(self._tight_box_range(box))
            exact = False
        return out, exact

    def _tight_box_range(self, box: RatInterval) -> RatInterval:
        # mean-value form: p(box) ⊆ p(m) + p'(box)(box - m)
        m = box.midpoint
        slope = self.derivative().eval_interval(box)
        mvf = (box - m) * slope + self(m)
        naive = self.eval_interval(box)
        return RatInterval(max(mvf.lo, naive.lo), min(mvf.hi, naive.hi))

    def argext_candidates(self, seg: RatInterval) -> list[Fraction]:
        """Rational points where the extremes over ``seg`` may be attained."""
        return [seg.lo, seg.hi] + self.rational_critical_points(seg.lo, seg.hi)

    def count_roots_open(self, lo: Fraction, hi: Fraction) -> int | None:
        """Number of distinct real roots in the open interval (lo, hi).

        ``None`` for the zero polynomial (infinitely many).
        """
        if all(c == 0 for c in self.coeffs):
            return None
        if self.degree == 0:
            return 0
        import sympy

        x = sympy.Symbol("x")
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator)
                           for c in reversed(self.coeffs)], x, domain="QQ")
        sq = sympy.Poly(sympy.sqf_part(poly.as_expr()), x, domain="QQ")
        slo = sympy.Rational(lo.numerator, lo.denominator)
        shi = sympy.Rational(hi.numerator, hi.denominator)
        n = sq.count_roots(slo, shi)
        # count_roots counts closed [lo, hi]; drop endpoint roots
        n -= int(sq.eval(slo) == 0) + int(sq.eval(shi) == 0)
        return int(n)
