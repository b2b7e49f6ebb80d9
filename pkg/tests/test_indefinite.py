import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from darbouxkit.cantorpath import CantorIndefinite, FatCantorSpec, build_stage
from darbouxkit.darboux import Partition, integrate
from darbouxkit.errors import NonExactEvaluation, NotIntegrable, OutOfDomain
from darbouxkit.exactnum import RatInterval
from darbouxkit.families import random_step
from darbouxkit.funcmodel import FatCantorIndicator, Pathological, PiecewisePoly, Step, parse_function
from darbouxkit.indefinite import (Evidence, IndefiniteIntegral, Verdict, cantor_approximant,
                                   dense_zero_derivative_harness, derivative_enclosure,
                                   indefinite_eval, parse_table, thomson_adversarial,
                                   thomson_evidence, thomson_sum)

CHI = "step 0 1 bp=1/2 vals=1,0"
I01 = RatInterval(0, 1)
CELLS64 = [RatInterval(Q(k, 64), Q(k + 1, 64)) for k in range(64)]


def test_indefinite_eval_examples():
    F = IndefiniteIntegral(parse_function(CHI), constant=3)
    assert indefinite_eval(F, 1) == RatInterval(Q(7, 2))
    assert indefinite_eval(F, 0) == RatInterval(3)
    Fc = IndefiniteIntegral(FatCantorIndicator(depth=8))
    v = indefinite_eval(Fc, 1)
    assert v.contains(Q(1, 2)) and v.width <= Q(1, 512)
    with pytest.raises(OutOfDomain):
        indefinite_eval(F, 2)


def test_indefinite_eval_orientation():
    F = IndefiniteIntegral(parse_function(CHI), base_point=1)
    assert indefinite_eval(F, 0) == RatInterval(-Q(1, 2))


def test_indefinite_of_pathological_falls_back_to_lebesgue():
    F = IndefiniteIntegral(Pathological())
    assert indefinite_eval(F, Q(1, 2)) == RatInterval(Q(1, 4))


def test_indefinite_without_any_integral_raises():
    class Opaque(Step):
        def lebesgue_integral(self, I):
            return None
    f = Opaque((0, 1), [Q(1, 2)], [1, 0])
    F = IndefiniteIntegral(Pathological(), eps=0, budget=8)
    F.integrand.lebesgue_integral = lambda I: None
    with pytest.raises(NotIntegrable):
        indefinite_eval(F, 1)
    assert indefinite_eval(IndefiniteIntegral(f), 1) == RatInterval(Q(1, 2))


def test_derivative_enclosure_examples():
    F = IndefiniteIntegral(parse_function(CHI))
    assert derivative_enclosure(F, Q(3, 4), [Q(1, 8)]).certified_zero
    Fx = IndefiniteIntegral(parse_function("poly 0 1 coeffs=0,1"))
    d = derivative_enclosure(Fx, Q(1, 2), [Q(1, 8)])
    assert d.quotient_enclosures == (RatInterval(Q(3, 8), Q(5, 8)),) and not d.certified_zero
    Fc = IndefiniteIntegral(FatCantorIndicator(depth=8))
    assert derivative_enclosure(Fc, Q(1, 2), [Q(1, 16)]).certified_zero
    with pytest.raises(OutOfDomain):
        derivative_enclosure(F, 0, [Q(1, 8)])


def test_harness_examples():
    spikes = Step((0, 1), [Q(k, 8) for k in range(1, 8)], [0] * 8, [7] * 7)
    r = dense_zero_derivative_harness(IndefiniteIntegral(spikes), CELLS64)
    assert r.verdict is Verdict.CONSTANT_CERTIFIED and r.probes_exact == 1000
    kept = build_stage(FatCantorSpec(), 8).kept_intervals
    r = dense_zero_derivative_harness(IndefiniteIntegral(FatCantorIndicator(depth=8)), kept)
    assert r.verdict is Verdict.DENSE_ZEROS_NOT_FOUND
    r = dense_zero_derivative_harness(IndefiniteIntegral(parse_function(CHI)), CELLS64)
    assert r.verdict is Verdict.DENSE_ZEROS_NOT_FOUND


def test_harness_inapplicable_when_not_integrable():
    # zeros everywhere in the right half, integrand not integrable on the left
    g = parse_function("glue ( patho 0 1/2 ) ( step 1/2 1 vals=0 )")
    cells = [RatInterval(Q(1, 2) + Q(k, 16), Q(1, 2) + Q(k + 1, 16)) for k in range(8)]
    r = dense_zero_derivative_harness(IndefiniteIntegral(g), cells)
    assert r.verdict is Verdict.INAPPLICABLE


def test_thomson_examples():
    x2 = parse_function("poly 0 1 coeffs=0,0,1")
    assert thomson_sum(x2, Partition.uniform(I01, 4)).sum_value == Q(1, 4)
    assert thomson_sum(x2, Partition.uniform(I01, 16)).sum_value == Q(1, 16)
    lin = parse_function("poly 0 1 coeffs=3,-2")
    rng = random.Random(1)
    for n in (1, 3, 10):
        P = Partition.uniform(I01, n)
        tags = []
        for c in P.cells:
            a, b = sorted(c.lo + c.width * Q(rng.randint(1, 99), 100) for _ in range(2))
            tags.append((a, b))
        assert thomson_sum(lin, P, tags).sum_value == 0
        assert thomson_adversarial(lin, P).sum_value == 0


def test_thomson_adversarial_x2_bounded_by_mesh():
    x2 = parse_function("poly 0 1 coeffs=0,0,1")
    for n in (2, 5, 16):
        P = Partition.uniform(I01, n)
        r = thomson_adversarial(x2, P)
        # quotients u+xi and xi2+v differ by at most 2h
        assert r.sum_value <= 2 * P.mesh
        assert r.sum_value >= thomson_sum(x2, P).sum_value


def test_thomson_tags_validated():
    x2 = parse_function("poly 0 1 coeffs=0,0,1")
    P = Partition.uniform(I01, 2)
    with pytest.raises(ValueError):
        thomson_sum(x2, P, [(Q(1, 4), Q(1, 8)), (Q(3, 4), Q(3, 4))])
    with pytest.raises(ValueError):
        thomson_sum(x2, P, [(Q(0), Q(1, 4)), (Q(3, 4), Q(3, 4))])


def test_thomson_rejects_wide_enclosures():
    F = CantorIndefinite(depth=4)
    with pytest.raises(NonExactEvaluation):
        thomson_sum(F, Partition.uniform(I01, 4))
    r = thomson_sum(F, Partition.uniform(I01, 4), max_width=1)
    assert r.sum_enclosure.width <= 1


def test_thomson_table_input():
    table = parse_table("# x F(x)\n0 0\n1/4 1/16\n1/2 1/4\n3/4 9/16\n1 1\n1/8 1/64\n3/8 9/64\n5/8 25/64\n7/8 49/64\n")
    r = thomson_sum(table, Partition.uniform(I01, 4))
    assert r.sum_value == Q(1, 4)
    with pytest.raises(NonExactEvaluation):
        thomson_sum(table, Partition.uniform(I01, 3))


def test_thomson_evidence_classifies():
    x2 = parse_function("poly 0 1 coeffs=0,0,1")
    ev = thomson_evidence(x2, I01, [4, 16, 64], Q(1, 32))
    assert ev.classification is Evidence.CONSISTENT
    F = cantor_approximant(CantorIndefinite(depth=8))
    ev = thomson_evidence(F, I01, [4, 8], Q(1, 10 ** 6))
    assert ev.classification is Evidence.INCONSISTENT


@given(st.integers(0, 2**32), st.integers(0, 1000), st.integers(0, 1000))
def test_additivity(seed, i, j):
    f = random_step(random.Random(seed))
    x, y = sorted((Q(i, 1000), Q(j, 1000)))
    F = IndefiniteIntegral(f, constant=Q(5, 3))
    diff = indefinite_eval(F, y) - indefinite_eval(F, x)
    assert diff.is_degenerate
    assert diff == integrate(f, RatInterval(x, y), 0).integral


@given(st.integers(0, 2**32))
def test_derivative_soundness_piecewise_poly(seed):
    rng = random.Random(seed)
    coeffs = [Q(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(rng.randint(1, 4))]
    coeffs2 = [Q(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(rng.randint(1, 4))]
    from darbouxkit.polynomial import Polynomial
    p, q = Polynomial(coeffs), Polynomial(coeffs2)
    f = PiecewisePoly([(RatInterval(0, Q(1, 2)), p), (RatInterval(Q(1, 2), 1), q)])
    F = IndefiniteIntegral(f)
    z = Q(rng.randint(1, 999), 1000)
    if z == Q(1, 2):
        return
    d = derivative_enclosure(F, z, [Q(1, 64), Q(1, 4096)])
    assert all(e.contains(f.eval(z)) for e in d.quotient_enclosures)


@given(st.integers(0, 2**32))
def test_thomson_vanishes_on_breakpoint_aligned_steps(seed):
    f = random_step(random.Random(seed), max_breakpoints=10)
    F = IndefiniteIntegral(f)
    P = Partition([f.domain.lo, *f.breakpoints, f.domain.hi])
    assert thomson_adversarial(F, P).sum_value == 0
