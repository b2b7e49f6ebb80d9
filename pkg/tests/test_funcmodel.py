import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from darbouxkit.cantorpath import FatCantorSpec, build_stage
from darbouxkit.errors import NoWitness, OutOfDomain, ParseError, UnsupportedPointKind
from darbouxkit.exactnum import RatInterval
from darbouxkit.families import random_step
from darbouxkit.funcmodel import (AbsShift, AffineImage, FatCantorIndicator, Glued, Pathological,
                                  PiecewisePoly, PiRat, Step, parse_function, point_enclosure,
                                  strictly_inside)

CHI = "step 0 1 bp=1/2 vals=1,0"


def test_eval_examples():
    p = Pathological()
    assert p.eval(Q(1, 3)) == Q(1, 3)
    assert p.eval(PiRat(1, 4)) == Q(3, 4)
    assert AbsShift((-1, 1), 0).eval(Q(-1, 2)) == Q(1, 2)


def test_pathological_values_strictly_between_0_and_1():
    p = Pathological()
    for x in (Q(0), Q(1), Q(1, 2), Q(2, 7), Q(999, 1000)):
        assert 0 < p.eval(x) < 1
    # clause at denominator 1 falls back to 1/2
    assert p.eval(Q(0)) == p.eval(Q(1)) == Q(1, 2)
    assert p.eval(PiRat(1, 4)) == Q(3, 4)


def test_pirat_rejected_by_other_models_and_outside_domain():
    with pytest.raises(UnsupportedPointKind):
        parse_function(CHI).eval(PiRat(1, 4))
    with pytest.raises(OutOfDomain):
        Pathological().eval(PiRat(1, 2))  # pi/2 > 1
    assert PiRat(2, 8) == PiRat(1, 4)


def test_range_examples():
    chi = parse_function(CHI)
    assert chi.range(RatInterval(Q(1, 4), Q(3, 4))) == RatInterval(0, 1)
    x2 = parse_function("poly 1 2 coeffs=0,0,1")
    enc = x2.enclose(RatInterval(1, 2))
    assert enc.bounds == RatInterval(1, 4) and enc.exact
    assert Pathological().range(RatInterval(Q(1, 3), Q(1, 2))) == RatInterval(0, 1)
    assert Pathological().range(RatInterval(Q(1, 3))) == RatInterval(Q(1, 3))


def test_polynomial_interior_extremum():
    f = parse_function("poly -1 1 coeffs=0,-3,0,1")  # x^3 - 3x
    enc = f.enclose(RatInterval(-1, 1))
    assert enc.exact and enc.bounds == RatInterval(-2, 2)


def test_polynomial_irrational_critical_point_is_sound_not_exact():
    f = parse_function("poly 0 1 coeffs=0,-2,0,3")  # 3x^3 - 2x, min at sqrt(2)/3
    enc = f.enclose(RatInterval(0, 1))
    assert not enc.exact
    s_lo = Q(141421356237309504880168872420, 10**29)
    s_hi = s_lo + Q(1, 10**29)
    assert s_lo ** 2 < 2 < s_hi ** 2
    # true minimum -(4/9)·sqrt(2) lies in (-(4/9)s_hi, -(4/9)s_lo)
    assert enc.bounds.lo <= -Q(4, 9) * s_hi and enc.bounds.hi == 1
    assert enc.bounds.lo > -Q(4, 9) * s_hi - Q(1, 10**9)


def test_witness_above_examples():
    p = Pathological()
    w = p.witness_above(RatInterval(0, 1), Q(3, 4))
    assert isinstance(w, PiRat) and p.eval(w) > Q(3, 4)
    assert strictly_inside(w, RatInterval(0, 1))
    c = parse_function(CHI).witness_above(RatInterval(0, 1), Q(1, 2))
    assert 0 < c < Q(1, 2)
    with pytest.raises(NoWitness):
        parse_function("step 0 1 vals=0").witness_above(RatInterval(0, 1), Q(1, 2))


def test_fatcantor_eval_membership():
    f = FatCantorIndicator(depth=8)
    assert f.eval(Q(1, 2)) == 0          # centre of the first removed interval
    assert f.eval(Q(0)) == 1 and f.eval(Q(3, 8)) == 1   # kept endpoints
    assert f.range(RatInterval(Q(7, 16), Q(9, 16))) == RatInterval(0)
    assert f.range(RatInterval(0, Q(1, 4))) == RatInterval(0, 1)


def test_parse_errors():
    for bad in ("step 0 1 bp=1/2 vals=1", "wiggle 0 1", "poly 0 1 coeffs=0.1e", "step 0 1 vals=1 )"):
        with pytest.raises((ParseError, ValueError)):
            parse_function(bad)


@pytest.mark.parametrize("text", [
    CHI, "step 0 1 bp=1/2 vals=1,0 at=0", "step 0 2 vals=5", "poly 0 1 coeffs=0,0,1",
    "poly -1 0 coeffs=0,-1 ; 0 1 coeffs=0,1", "abs -1 1 center=0", "fatcantor depth=6",
    "fatcantor depth=3 ratio=1/9", "patho", "patho 0 1/2",
    "affine scale=-2 offset=1 ( step 0 1 bp=1/2 vals=1,0 )",
    "glue ( patho 0 1/2 ) ( step 1/2 1 vals=1/2 )",
])
def test_spec_string_round_trip(text):
    f = parse_function(text)
    g = parse_function(f.spec_string())
    assert g.spec_string() == f.spec_string()
    for x in (f.domain.lo, f.domain.midpoint, f.domain.hi):
        assert f.eval(x) == g.eval(x)


MODELS = [
    parse_function(CHI), parse_function("poly 0 1 coeffs=1,-3,2,5"), AbsShift((-1, 1), Q(1, 3)),
    FatCantorIndicator(depth=6), Pathological(),
    AffineImage(parse_function(CHI), -2, 1),
    parse_function("glue ( patho 0 1/2 ) ( step 1/2 1 vals=1/2 )"),
    parse_function("poly -1 0 coeffs=0,-1 ; 0 1 coeffs=0,1,1"),
]


@pytest.mark.parametrize("f", MODELS, ids=lambda f: f.spec_string())
def test_soundness_sampling(f):
    rng = random.Random(7)
    D = f.domain
    for _ in range(40):
        a, b = sorted(D.lo + D.width * Q(rng.randint(0, 512), 512) for _ in range(2))
        I = RatInterval(a, b)
        r = f.range(I)
        for _ in range(25):
            x = I.lo + I.width * Q(rng.randint(0, 1000), 1000)
            assert r.contains(f.eval(x))


@given(st.integers(0, 2**32))
def test_step_soundness_random(seed):
    rng = random.Random(seed)
    f = random_step(rng)
    a, b = sorted(Q(rng.randint(0, 999), 999) for _ in range(2))
    I = RatInterval(a, b)
    r = f.range(I)
    assert f.enclose(I).exact
    pts = [a, b, *[x for x in f.breakpoints if a <= x <= b]]
    pts += [I.lo + I.width * Q(k, 17) for k in range(18)]
    assert all(r.contains(f.eval(x)) for x in pts)


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(0, 2**16))
def test_affine_coherence(s, o, seed):
    rng = random.Random(seed)
    inner = random_step(rng)
    g = AffineImage(inner, s, o)
    a, b = sorted(Q(rng.randint(0, 64), 64) for _ in range(2))
    I = RatInterval(a, b)
    expect = inner.range(I) * Q(s) + Q(o)
    assert g.range(I) == expect


@pytest.mark.parametrize("d", range(1, 9))
def test_fatcantor_range_never_widens_with_depth(d):
    rng = random.Random(d)
    f, g = FatCantorIndicator(depth=d), FatCantorIndicator(depth=d + 1)
    cover_next = build_stage(FatCantorSpec(), d + 1).kept_intervals
    cover = build_stage(FatCantorSpec(), d).kept_intervals
    for iv in cover_next:
        assert any(c.contains_interval(iv) for c in cover)
    for _ in range(50):
        a, b = sorted(Q(rng.randint(0, 4096), 4096) for _ in range(2))
        I = RatInterval(a, b)
        assert f.range(I).contains_interval(g.range(I))


def test_point_enclosure_of_pirat():
    box = point_enclosure(PiRat(1, 4))
    assert Q(7853981633, 10**10) < box.lo
    assert box.hi < Q(7853981634, 10**10)
