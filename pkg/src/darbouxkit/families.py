"""Seeded random model families used by the suites and tests."""

from __future__ import annotations

import random
from fractions import Fraction

from .funcmodel import Step

DEFAULT_SEED = 20240607
MAX_BREAKPOINTS = 50
MAX_DENOMINATOR = 256


def _breakpoints(rng: random.Random, lo: Fraction, hi: Fraction, k: int) -> list[Fraction]:
    pts: set[Fraction] = set()
    w = hi - lo
    while len(pts) < k:
        q = rng.randint(2, MAX_DENOMINATOR)
        p = rng.randint(1, q - 1)
        pts.add(lo + w * Fraction(p, q))
    return sorted(pts)


def _value(rng: random.Random) -> Fraction:
    # values in [-10, 10] with denominators up to 8
    q = rng.choice((1, 2, 4, 8))
    return Fraction(rng.randint(-10 * q, 10 * q), q)


def random_step(rng: random.Random, domain=(0, 1), max_breakpoints: int = MAX_BREAKPOINTS) -> Step:
    lo, hi = Fraction(domain[0]), Fraction(domain[1])
    bps = _breakpoints(rng, lo, hi, rng.randint(0, max_breakpoints))
    vals = [_value(rng) for _ in range(len(bps) + 1)]
    at = [rng.choice((v, _value(rng))) for v in vals[:-1]]
    return Step((lo, hi), bps, vals, at)


def random_steps(n: int = 100, seed: int = DEFAULT_SEED, domain=(0, 1)) -> list[Step]:
    rng = random.Random(seed)
    return [random_step(rng, domain) for _ in range(n)]


def vanishing_step(rng: random.Random, domain=(0, 1), max_breakpoints: int = MAX_BREAKPOINTS) -> Step:
    """Zero on every open piece, arbitrary nonzero spikes at the breakpoints."""
    lo, hi = Fraction(domain[0]), Fraction(domain[1])
    bps = _breakpoints(rng, lo, hi, rng.randint(1, max_breakpoints))
    spikes = []
    for _ in bps:
        v = _value(rng)
        spikes.append(v if v != 0 else Fraction(7))
    return Step((lo, hi), bps, [0] * (len(bps) + 1), spikes)


def vanishing_steps(n: int = 100, seed: int = DEFAULT_SEED, domain=(0, 1)) -> list[Step]:
    rng = random.Random(seed + 1)
    return [vanishing_step(rng, domain) for _ in range(n)]
