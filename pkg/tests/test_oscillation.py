import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from darbouxkit.cantorpath import FatCantorSpec, membership
from darbouxkit.errors import NoContinuityCertificate, OutOfDomain
from darbouxkit.exactnum import RatInterval
from darbouxkit.families import random_step
from darbouxkit.funcmodel import AbsShift, FatCantorIndicator, Pathological, parse_function
from darbouxkit.oscillation import (dense_continuity_sample, find_continuity_point, osc_interval,
                                    osc_point)

CHI = "step 0 1 bp=1/2 vals=1,0"
CHI0 = "step 0 1 bp=1/2 vals=1,0 at=0"


def test_osc_interval_examples():
    o = osc_interval(parse_function(CHI), RatInterval(Q(1, 4), Q(3, 4)))
    assert o.value == RatInterval(1) and o.exact
    assert osc_interval(parse_function("poly 1 2 coeffs=0,0,1"), RatInterval(1, 2)).value == RatInterval(3)
    assert osc_interval(Pathological(), RatInterval(Q(1, 5), Q(1, 4))).value == RatInterval(1)


def test_osc_point_examples():
    chi = parse_function(CHI0)
    assert osc_point(chi, Q(1, 2), [Q(1, 4), Q(1, 8)]).value == RatInterval(1)
    v = osc_point(chi, Q(1, 4), [Q(1, 2), Q(1, 8)])
    assert v.value == RatInterval(0) and v.exact
    sched = [Q(1, 2 ** k) for k in range(1, 12)]
    v = osc_point(AbsShift((-1, 1), 0), 0, sched)
    # osc(|x|, [-d, d]) = d, so the bound is the last radius
    assert not v.exact and v.value == RatInterval(0, sched[-1])
    with pytest.raises(OutOfDomain):
        osc_point(chi, 0, sched)


def test_find_continuity_chi():
    f = parse_function(CHI)
    w = find_continuity_point(f, f.domain, 10)
    assert w.point != Q(1, 2) and w.osc_bound < Q(1, 10)
    assert len(w.trace.stages) == 10 and w.trace.verify(f) and w.verify(f)


def test_find_continuity_fatcantor_lands_in_removed_interval():
    f = FatCantorIndicator(depth=8)
    w = find_continuity_point(f, f.domain, 5)
    assert w.osc_bound == 0 and w.verify(f)
    assert membership(FatCantorSpec(), w.point, 64) == (0, True)


def test_find_continuity_pathological_fails():
    with pytest.raises(NoContinuityCertificate):
        find_continuity_point(Pathological(), RatInterval(0, 1), 2)


def test_dense_sample_examples():
    cells = [RatInterval(Q(k, 8), Q(k + 1, 8)) for k in range(8)]
    s = dense_continuity_sample(parse_function(CHI), cells, 6)
    assert s.all_found and all(w.point != Q(1, 2) for w in s.witnesses)
    cells16 = [RatInterval(Q(k, 16), Q(k + 1, 16)) for k in range(16)]
    fc = FatCantorIndicator(depth=6)
    s = dense_continuity_sample(fc, cells16, 4)
    assert s.all_found
    for w, c in zip(s.witnesses, cells16):
        assert c.contains_strictly(w.point) and fc.eval(w.point) == 0
    s = dense_continuity_sample(Pathological(), cells[:3], 3)
    assert len(s.failures) == 3


def test_tampered_trace_is_rejected():
    f = parse_function(CHI)
    w = find_continuity_point(f, f.domain, 6)
    bad = type(w.trace)(w.trace.stages, Q(1, 2), w.trace.search_interval)
    assert not bad.verify(f)


@given(st.integers(0, 2**32))
def test_osc_monotone_and_bounds_differences(seed):
    rng = random.Random(seed)
    f = random_step(rng)
    a, b = sorted(Q(rng.randint(0, 1000), 1000) for _ in range(2))
    I = RatInterval(a, b)
    c, d = sorted(a + (b - a) * Q(rng.randint(0, 100), 100) for _ in range(2))
    J = RatInterval(c, d)
    assert osc_interval(f, J).value.hi <= osc_interval(f, I).value.hi
    o = osc_interval(f, I).value.hi
    for _ in range(20):
        x, y = (a + (b - a) * Q(rng.randint(0, 100), 100) for _ in range(2))
        assert abs(f.eval(x) - f.eval(y)) <= o


@given(st.integers(0, 2**32))
def test_witness_checkable_for_random_steps(seed):
    f = random_step(random.Random(seed))
    w = find_continuity_point(f, f.domain, 8)
    assert w.verify(f) and w.point not in f.breakpoints
