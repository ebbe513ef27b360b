"""Blocked digit sets and single-base expansions over general digits.

Blocking one period of an alternate-base expansion into a single digit
turns it into a representation in the product base over the digit set
formed by the weighted digit blocks.  This module builds that digit set,
checks the maximal-gap condition that makes a digit set usable, implements
the greedy and lazy single-base transformations over a general digit set,
and decides where the blocked transformation disagrees with one period of
the alternate-base dynamics.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Sequence

from .core import EPS_SNAP, AlternateBase, StatePoint, greedy_step
from .errors import AlphabetError, DomainError, NotAllowable, SearchTooLarge
from .oracle import ENUMERATION_BOUND

# collisions of distinct digit blocks are exact in theory but inexact in
# floats; values this close (relative to the top digit) are merged
DEDUP_REL = 1e-9
AGREE_TOL = 1e-9
MIN_CELL = 1e-12


@dataclass(frozen=True)
class DigitSet:
    """Strictly ascending digits starting at 0, paired with the base beta."""

    digits: tuple[float, ...]
    beta: float

    @property
    def top(self) -> float:
        return self.digits[-1]

    @property
    def xsup(self) -> float:
        """Supremum of values representable over these digits."""
        return self.top / (self.beta - 1.0)


def f_beta(base: AlternateBase, digits: Sequence[int]) -> float:
    """Weight of one digit block: sum of c_i times the product of later bases."""
    p = base.p
    if len(digits) != p:
        raise AlphabetError(f"expected {p} digits, got {len(digits)}")
    total = 0.0
    weight = 1.0
    for i in range(p - 1, -1, -1):
        c = digits[i]
        if not (0 <= c <= base.alphabets[i]):
            raise AlphabetError(f"digit {c} at slot {i} exceeds bound {base.alphabets[i]}")
        total += c * weight
        weight *= base.betas[i]
    return total


def _block_count(base: AlternateBase) -> int:
    total = 1
    for m in base.alphabets:
        total *= m + 1
        if total > ENUMERATION_BOUND:
            raise SearchTooLarge(
                f"digit-block enumeration exceeds the {ENUMERATION_BOUND:.0e} bound"
            )
    return total


def _all_block_values(base: AlternateBase) -> list[float]:
    """f-values of every digit block, in lexicographic block order."""
    _block_count(base)
    p = base.p
    suffix_weight = [1.0] * (p + 1)
    for i in range(p - 1, -1, -1):
        suffix_weight[i] = suffix_weight[i + 1] * base.betas[i]
    # weight of slot i is the product of bases i+1 .. p-1
    weights = [suffix_weight[i + 1] for i in range(p)]
    values = [0.0]
    for i in range(p):
        w = weights[i]
        values = [v + c * w for v in values for c in range(base.alphabets[i] + 1)]
    return values


def delta_set(base: AlternateBase) -> DigitSet:
    """The sorted, deduplicated set of digit-block weights, over the product base."""
    vals = sorted(_all_block_values(base))
    tol = DEDUP_REL * max(1.0, vals[-1])
    merged = [0.0]
    for v in vals[1:]:
        if v - merged[-1] > tol:
            merged.append(v)
    return DigitSet(tuple(merged), base.product)


def is_allowable(ds: DigitSet) -> bool:
    """Maximal-gap condition: every consecutive gap at most top/(beta-1)."""
    gap = max(b - a for a, b in zip(ds.digits, ds.digits[1:]))
    return gap <= ds.xsup + 1e-12


def tilde(ds: DigitSet) -> DigitSet:
    """Mirror image {top - d}; an involution, and allowability-preserving."""
    return DigitSet(tuple(sorted(ds.top - d for d in ds.digits)), ds.beta)


def _check_delta_domain(ds: DigitSet, x: float, open_left: bool) -> float:
    hi = ds.xsup
    if x < -EPS_SNAP or x > hi + EPS_SNAP:
        raise DomainError(f"{x!r} outside the expansion domain [0, {hi!r})")
    if open_left and x <= 0.0:
        raise DomainError("lazy expansions need a positive value")
    return min(max(x, 0.0), hi)


def greedy_delta_step(ds: DigitSet, x: float) -> tuple[float, float]:
    """Greedy step over a digit set: subtract the largest digit below beta*x."""
    if not is_allowable(ds):
        raise NotAllowable("digit set violates the maximal-gap condition")
    x = _check_delta_domain(ds, x, open_left=False)
    y = ds.beta * x
    k = bisect.bisect_right(ds.digits, y + EPS_SNAP) - 1
    d = ds.digits[max(k, 0)]
    return y - d, d


def lazy_delta_step(ds: DigitSet, x: float) -> tuple[float, float]:
    """Lazy step: subtract the least digit whose maximal tail still reaches x."""
    if not is_allowable(ds):
        raise NotAllowable("digit set violates the maximal-gap condition")
    x = _check_delta_domain(ds, x, open_left=True)
    z = ds.beta * x - ds.xsup
    k = bisect.bisect_left(ds.digits, z - EPS_SNAP)
    d = ds.digits[min(k, len(ds.digits) - 1)]
    return ds.beta * x - d, d


def nondecreasing_by_criterion(base: AlternateBase) -> bool:
    """Closed-form test for monotonicity of the block-weight map.

    The map respects lexicographic block order exactly when, for every cut
    position j in 1..p-2, the all-maximal weight of the suffix from j does
    not exceed the weight of a bare increment at j.  Periods of one or two
    have nothing to check.
    """
    p = base.p
    for j in range(1, p - 1):
        lhs = 0.0
        weight = 1.0
        for i in range(p - 1, j - 1, -1):
            lhs += base.alphabets[i] * weight
            weight *= base.betas[i]
        rhs = weight  # product of bases j .. p-1
        if lhs > rhs + AGREE_TOL:
            return False
    return True


def nondecreasing_bruteforce(base: AlternateBase) -> bool:
    """Monotonicity by full lexicographic enumeration of digit blocks."""
    vals = _all_block_values(base)
    return all(a <= b + AGREE_TOL for a, b in zip(vals, vals[1:]))


@dataclass(frozen=True)
class Witness:
    x: float
    delta_image: float
    composed_image: float


@dataclass(frozen=True)
class DisagreementReport:
    """Where the blocked transformation undercuts one period of the dynamics.

    ``intervals`` are maximal half-open stretches of the common domain on
    which the two maps differ; each carries one sampled witness with both
    images.  An empty report means the maps coincide.
    """

    intervals: tuple[tuple[float, float], ...]
    witnesses: tuple[Witness, ...]

    def __bool__(self) -> bool:
        return bool(self.intervals)


def _composed_period_value(base: AlternateBase, x: float) -> float:
    s = StatePoint(0, x)
    for _ in range(base.p):
        s, _ = greedy_step(base, s)
    return s.value


def _suffix_min_values(values: list[float]) -> list[float]:
    """Values that are strictly smaller than everything lexicographically later."""
    out = []
    running = math.inf
    for v in reversed(values):
        if v < running:
            out.append(v)
            running = v
    out.reverse()
    return out


def compare_transforms(base: AlternateBase) -> DisagreementReport:
    """Detect where the blocked greedy map differs from one greedy period.

    Both maps are affine with the same slope between breakpoints, so it is
    enough to merge the two exact breakpoint grids and compare the maps at
    one midpoint per cell.  Disagreeing cells are coalesced into maximal
    intervals; slivers below 1e-12 are numerical artifacts and dropped.
    """
    ds = delta_set(base)
    B = base.product
    xb = base.xmax[0]
    block_values = _all_block_values(base)
    cuts = {0.0, xb}
    cuts.update(d / B for d in ds.digits)
    cuts.update(v / B for v in _suffix_min_values(block_values))
    grid = sorted(c for c in cuts if -EPS_SNAP <= c < xb - MIN_CELL)
    grid.append(xb)

    intervals: list[list[float]] = []
    witnesses: list[Witness] = []
    for lo, hi in zip(grid, grid[1:]):
        if hi - lo < MIN_CELL:
            continue
        mid = 0.5 * (lo + hi)
        delta_img, _ = greedy_delta_step(ds, mid)
        comp_img = _composed_period_value(base, mid)
        if abs(delta_img - comp_img) <= AGREE_TOL * max(1.0, B):
            continue
        if intervals and abs(intervals[-1][1] - lo) <= MIN_CELL:
            intervals[-1][1] = hi
        else:
            intervals.append([lo, hi])
            witnesses.append(Witness(mid, delta_img, comp_img))
    return DisagreementReport(
        tuple((lo, hi) for lo, hi in intervals),
        tuple(witnesses),
    )


def compare_transforms_lazy(base: AlternateBase) -> DisagreementReport:
    """Disagreement of the lazy pair, by conjugation through the reflection.

    The blocked digit set is mirror symmetric, so reflecting the greedy
    disagreement through x -> xsup - x gives exactly the stretches where the
    lazy maps differ; witnesses are conjugated the same way.
    """
    greedy = compare_transforms(base)
    xb = base.xmax[0]
    intervals = tuple(sorted((xb - hi, xb - lo) for lo, hi in greedy.intervals))
    witnesses = tuple(
        Witness(xb - w.x, xb - w.delta_image, xb - w.composed_image)
        for w in reversed(greedy.witnesses)
    )
    return DisagreementReport(intervals, witnesses)
