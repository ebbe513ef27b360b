"""Shared test utilities: reproducible random bases and points."""

import math

from altbase.core import new_base
from altbase.oracle import SplitMix64

SQRT13 = math.sqrt(13)
PHI = (1.0 + math.sqrt(5.0)) / 2.0

BASE13_BETAS = ((1.0 + SQRT13) / 2.0, (5.0 + SQRT13) / 6.0)


def base13():
    return new_base(BASE13_BETAS)


def base_phi2():
    return new_base((PHI * PHI,))


def random_base(rng: SplitMix64, pmin=1, pmax=3, lo=1.1, hi=3.0):
    """A random base whose components stay clear of integers.

    Components within 1e-3 of an integer are resampled so that alphabet
    sizes are unambiguous under floating-point noise.
    """
    p = rng.randint(pmin, pmax)
    betas = []
    while len(betas) < p:
        b = rng.uniform(lo, hi)
        if abs(b - round(b)) > 1e-3:
            betas.append(b)
    return new_base(betas)


def interior_point(rng: SplitMix64, lo: float, hi: float, margin=1e-6) -> float:
    return rng.uniform(lo + margin, hi - margin)


def greedy_breakpoint_distance(base, slot: int, x: float) -> float:
    """Distance from x to the nearest branch endpoint of the slot's step map."""
    b = base.betas[slot]
    m = base.alphabets[slot]
    cuts = [k / b for k in range(m + 1)] + [1.0, base.xmax[slot], 0.0]
    return min(abs(x - c) for c in cuts)
