from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from darbouxkit.cantorpath import (CantorIndefinite, FatCantorSpec, build_stage, cantor_F_eval,
                                   limit_measure, membership, nonconstancy_report,
                                   zero_derivative_witnesses)
from darbouxkit.darboux import integrate
from darbouxkit.errors import InadmissibleSpec, NoClosedForm, OutOfDomain
from darbouxkit.exactnum import RatInterval
from darbouxkit.funcmodel import FatCantorIndicator

SPEC = FatCantorSpec()


def test_build_stage_examples():
    s1 = build_stage(SPEC, 1)
    assert s1.kept_intervals == (RatInterval(0, Q(3, 8)), RatInterval(Q(5, 8), 1))
    assert s1.kept_measure == Q(3, 4)
    s2 = build_stage(SPEC, 2)
    assert len(s2.kept_intervals) == 4 and s2.kept_measure == Q(5, 8)
    s0 = build_stage(SPEC, 0)
    assert s0.kept_intervals == (RatInterval(0, 1),) and s0.kept_measure == 1


def test_limit_measure_examples():
    assert limit_measure(SPEC) == Q(1, 2)
    # 1 - sum 2^(k-1) 9^-k = 1 - (1/2)(2/9)/(1 - 2/9)
    assert limit_measure(FatCantorSpec(ratio=Q(1, 9))) == 1 - Q(1, 2) * Q(2, 9) / (1 - Q(2, 9)) == Q(6, 7)
    with pytest.raises(InadmissibleSpec):
        FatCantorSpec(ratio=Q(1, 2))
    with pytest.raises(InadmissibleSpec):
        FatCantorSpec(overrides=((1, Q(0)),))


def test_custom_rule_has_bounds_not_closed_form():
    spec = FatCantorSpec(rule=lambda k: Q(1, 5 ** k), tail_ratio=Q(2, 5))
    with pytest.raises(NoClosedForm) as info:
        limit_measure(spec)
    b = info.value.bounds
    # exact value 1 - (1/2)(2/5)/(3/5) = 2/3
    assert b.contains(Q(2, 3))


@pytest.mark.parametrize("n", range(0, 12))
def test_stage_recursion_and_nesting(n):
    s, t = build_stage(SPEC, n), build_stage(SPEC, n + 1)
    assert t.kept_measure == s.kept_measure - 2 ** n * Q(1, 4 ** (n + 1))
    assert s.kept_measure == Q(1, 2) + Q(1, 2 ** (n + 1))
    assert len(t.kept_intervals) == 2 ** (n + 1)
    for iv in t.kept_intervals:
        assert any(c.contains_interval(iv) for c in s.kept_intervals)


def test_cantor_F_examples():
    F = CantorIndefinite(depth=8)
    v = cantor_F_eval(F, 1)
    assert v == RatInterval(Q(1, 2), Q(1, 2) + Q(1, 512))
    assert cantor_F_eval(F, 0) == RatInterval(0)
    half = cantor_F_eval(F, Q(1, 2))
    assert half.contains(Q(1, 4)) and half.width <= Q(1, 512)
    with pytest.raises(OutOfDomain):
        cantor_F_eval(F, 2)


def test_zero_derivative_witness_examples():
    w = zero_derivative_witnesses(CantorIndefinite(depth=1), 1)
    assert [(x.point, x.radius) for x in w] == [(Q(1, 2), Q(1, 16))]
    assert w[0].neighborhood == RatInterval(Q(7, 16), Q(9, 16))
    F3 = CantorIndefinite(depth=3)
    w3 = zero_derivative_witnesses(F3, 7)
    assert len(w3) == 7 and all(x.verify(F3) for x in w3)
    assert zero_derivative_witnesses(F3, 0) == []


def test_nonconstancy_examples():
    r = nonconstancy_report(CantorIndefinite(depth=8))
    assert r.certified and len(r.witnesses) == 255 and r.F1.lo >= Q(1, 2)
    r1 = nonconstancy_report(CantorIndefinite(depth=1))
    assert r1.F1 == RatInterval(Q(1, 2), Q(3, 4)) and r1.certified
    with pytest.raises(InadmissibleSpec):
        nonconstancy_report(CantorIndefinite(depth=0))


def test_membership_cases():
    assert membership(SPEC, Q(1, 2), 64) == (0, True)
    assert membership(SPEC, Q(3, 8), 64) == (1, True)
    assert membership(SPEC, Q(0), 64) == (1, True)


@given(st.integers(0, 2000), st.integers(0, 2000), st.integers(1, 10))
def test_F_monotone_width_lipschitz(i, j, d):
    x, y = sorted((Q(i, 2000), Q(j, 2000)))
    F = CantorIndefinite(depth=d)
    fx, fy = cantor_F_eval(F, x), cantor_F_eval(F, y)
    assert fx.lo <= fy.lo and fx.hi <= fy.hi
    assert fx.width <= Q(1, 2 ** (d + 1))
    # F(y) - F(x) <= y - x, with both enclosures widened by their width
    assert fy.lo - fx.hi <= y - x


@pytest.mark.parametrize("d", [3, 6, 9])
def test_consistency_with_darboux(d):
    enc = integrate(FatCantorIndicator(depth=d), RatInterval(0, 1), 0)
    assert enc.upper_integral.hi == build_stage(SPEC, d).kept_measure == enc.upper_sum
