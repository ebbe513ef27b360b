"""Invariant densities of composed expanding maps and derived statistics.

One period of the greedy dynamics, watched from a fixed slot, is a
piecewise-linear expanding map of the unit interval with constant slope
(the product of the bases) whose branches all start at height zero.  Its
unique absolutely continuous invariant density is a finite combination of
indicator steps built from the forward orbits of the endpoints of the
branches that do not reach height one.  This module constructs that map by
breakpoint refinement, evaluates the density in closed form, integrates it
over intervals, and uses it for digit frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import AlternateBase
from .errors import DomainError, SingularSystem, TruncationTooShallow

# branch images within this distance of the codomain top count as onto, and
# orbit points this close to a breakpoint are pulled onto it (left limits)
EPS_GEO = 1e-9
SERIES_TAIL = 1e-15


@dataclass(frozen=True)
class PiecewiseLinearMap:
    """Constant-slope map with branches x -> slope * (x - a_k) on [a_k, a_{k+1}).

    ``endpoints`` holds a_0 = 0 < a_1 < ... < a_K = domain_end, so branch k
    lives between endpoints k and k+1.  Every branch width is at most
    1/slope, which keeps the family closed under composition.
    """

    endpoints: tuple[float, ...]
    slope: float
    domain_end: float

    @property
    def branch_count(self) -> int:
        return len(self.endpoints) - 1

    def branch_of(self, x: float) -> int:
        k = int(np.searchsorted(self.endpoints, x, side="right")) - 1
        return min(max(k, 0), self.branch_count - 1)

    def branch_image_top(self, k: int) -> float:
        return self.slope * (self.endpoints[k + 1] - self.endpoints[k])

    def __call__(self, x: float) -> float:
        if not (0.0 <= x < self.domain_end):
            raise DomainError(f"{x!r} outside [0, {self.domain_end!r})")
        return self.slope * (x - self.endpoints[self.branch_of(x)])

    def left_limit(self, x: float) -> float:
        """Value approached from the left; at a breakpoint, the lower branch."""
        k = int(np.searchsorted(self.endpoints, x, side="left")) - 1
        k = min(max(k, 0), self.branch_count - 1)
        return self.slope * (x - self.endpoints[k])


def single_map(beta: float) -> PiecewiseLinearMap:
    """The one-base map x -> beta*x mod its digit on [0,1)."""
    if beta <= 1.0:
        raise DomainError(f"slope {beta!r} must exceed 1")
    m = math.ceil(beta - 1e-12) - 1
    pts = [k / beta for k in range(m + 1)] + [1.0]
    return PiecewiseLinearMap(tuple(pts), beta, 1.0)


def _compose(outer: PiecewiseLinearMap, inner: PiecewiseLinearMap) -> PiecewiseLinearMap:
    """outer after inner; refines the inner partition by pulled-back breakpoints."""
    s = inner.slope
    pts: list[float] = []
    a = inner.endpoints
    b = outer.endpoints
    for k in range(inner.branch_count):
        lo, hi = a[k], a[k + 1]
        pts.append(lo)
        for bl in b[1:-1]:
            q = lo + bl / s
            if q >= hi - 1e-14:
                break
            if q - pts[-1] > 1e-14:
                pts.append(q)
    pts.append(inner.domain_end)
    return PiecewiseLinearMap(tuple(pts), s * outer.slope, inner.domain_end)


def compose_map(base: AlternateBase, slot: int) -> PiecewiseLinearMap:
    """One full period of the greedy dynamics as seen from ``slot``.

    The returned map applies the base of ``slot`` first and the base of
    ``slot + p - 1`` last, acting on [0,1) with slope equal to the period
    product.
    """
    p = base.p
    if not (0 <= slot < p):
        raise DomainError(f"slot {slot} outside [0, {p})")
    acc = single_map(base.betas[slot])
    for j in range(1, p):
        acc = _compose(single_map(base.betas[(slot + j) % p]), acc)
    return acc


@dataclass(frozen=True)
class DensitySpec:
    """Closed-form invariant density of a constant-slope branch-zero map.

    The density is (1/C) * (d[0] + sum_j d[j] * sum_m chi_[0, orbit[j-1][m-1]]
    / B^m), truncated at depth M.  ``thresholds``/``weights`` hold the same
    data flattened and sorted for evaluation: the density at x is
    (d[0] + sum of weights with threshold >= x) / C.
    """

    K: int
    c: tuple[float, ...]
    orbit: tuple[tuple[float, ...], ...]
    S: tuple[tuple[float, ...], ...]
    d: tuple[float, ...]
    C: float
    B: float
    M: int
    thresholds: tuple[float, ...]
    weights: tuple[float, ...]


def default_truncation(B: float) -> int:
    """Depth at which the discarded geometric tail drops below 1e-15."""
    M = max(1, math.ceil(15.0 * math.log(10.0) / math.log(B)))
    while B ** (-M) > SERIES_TAIL * (B - 1.0) and M < 100000:
        M += 1
    return M


def _snap_to_breakpoints(x: float, endpoints: tuple[float, ...]) -> float:
    k = int(np.searchsorted(endpoints, x))
    for j in (k - 1, k):
        if 0 <= j < len(endpoints) and abs(endpoints[j] - x) <= EPS_GEO:
            return endpoints[j]
    return x


def _modified_step(map_: PiecewiseLinearMap, x: float) -> float:
    """One orbit step with the left-limit convention at breakpoints."""
    x = _snap_to_breakpoints(x, map_.endpoints)
    if x in map_.endpoints and x > 0.0:
        y = map_.left_limit(x)
    else:
        y = map_.slope * (x - map_.endpoints[map_.branch_of(x)])
    return _snap_to_breakpoints(y, map_.endpoints)


def gora_density(map_: PiecewiseLinearMap, M: int | None = None) -> DensitySpec:
    """Invariant density data for a map produced by :func:`compose_map`.

    Branches whose image stops short of the codomain top contribute their
    right endpoint c_j; the truncated geometric series over the forward
    orbit of each c_j (left limits at breakpoints) yields the correction
    matrix S, the weights d and the normalization C.  A map with only onto
    branches has the constant density 1.
    """
    B = map_.slope
    if M is None:
        M = default_truncation(B)
    if M < 1:
        raise DomainError("truncation depth must be positive")
    if B ** (-M) > SERIES_TAIL * (B - 1.0):
        raise TruncationTooShallow(
            f"depth {M} leaves a geometric tail above {SERIES_TAIL:g} for slope {B!r}"
        )
    top = map_.domain_end
    cs = [
        map_.endpoints[k + 1]
        for k in range(map_.branch_count)
        if map_.branch_image_top(k) < top - EPS_GEO
    ]
    K = len(cs)
    if K == 0:
        return DensitySpec(0, (), (), (), (1.0,), 1.0, B, M, (), ())

    orbits = []
    for c in cs:
        x = map_.left_limit(_snap_to_breakpoints(c, map_.endpoints))
        x = _snap_to_breakpoints(x, map_.endpoints)
        orb = [x]
        for _ in range(M - 1):
            x = _modified_step(map_, x)
            orb.append(x)
        orbits.append(tuple(orb))

    powers = B ** -np.arange(1, M + 1)
    S = np.zeros((K, K))
    for i in range(K):
        hits = np.asarray(orbits[i])
        for j in range(K):
            S[i, j] = float(powers[hits > cs[j]].sum())

    A = np.eye(K) - S
    if np.linalg.cond(A, 1) > 1e10:
        raise SingularSystem("Id - S is singular or too ill-conditioned")
    dtail = np.linalg.solve(A.T, np.ones(K))
    d = (1.0,) + tuple(float(v) for v in dtail)

    C = 1.0 * top
    thresholds = []
    weights = []
    for j in range(K):
        for m in range(M):
            t = min(orbits[j][m], top)
            w = d[j + 1] * float(powers[m])
            C += w * t
            thresholds.append(t)
            weights.append(w)
    order = np.argsort(thresholds)
    thresholds = tuple(float(thresholds[k]) for k in order)
    weights = tuple(float(weights[k]) for k in order)
    if C <= 0.0:
        raise SingularSystem(f"normalization constant came out nonpositive ({C!r})")
    return DensitySpec(
        K,
        tuple(cs),
        tuple(orbits),
        tuple(tuple(row) for row in S),
        d,
        C,
        B,
        M,
        thresholds,
        weights,
    )


def density_eval(spec: DensitySpec, x: float) -> float:
    """Density value at x (indicators taken over closed intervals [0, t])."""
    if not (0.0 <= x < 1.0):
        raise DomainError(f"{x!r} outside [0,1)")
    total = spec.d[0]
    k = int(np.searchsorted(spec.thresholds, x, side="left"))
    for w in spec.weights[k:]:
        total += w
    return total / spec.C


def measure_interval(spec: DensitySpec, a: float, b: float) -> float:
    """Exact integral of the density over [a, b)."""
    if not (0.0 <= a <= b <= 1.0):
        raise DomainError(f"bad interval [{a!r}, {b!r})")
    total = spec.d[0] * (b - a)
    k = int(np.searchsorted(spec.thresholds, a, side="right"))
    for t, w in zip(spec.thresholds[k:], spec.weights[k:]):
        total += w * (min(t, b) - a)
    return total / spec.C


def preimage(map_: PiecewiseLinearMap, a: float, b: float) -> list[tuple[float, float]]:
    """Disjoint ascending intervals mapped into [a, b) by the map."""
    if not (0.0 <= a <= b <= map_.domain_end):
        raise DomainError(f"bad interval [{a!r}, {b!r})")
    out = []
    s = map_.slope
    for k in range(map_.branch_count):
        lo = map_.endpoints[k] + a / s
        hi = min(map_.endpoints[k] + b / s, map_.endpoints[k + 1])
        if hi > lo:
            out.append((lo, hi))
    return out


def slot_densities(base: AlternateBase, M: int | None = None) -> tuple[DensitySpec, ...]:
    """The invariant density of every slot's period map."""
    return tuple(gora_density(compose_map(base, i), M) for i in range(base.p))


def frequency(base: AlternateBase, digit: int) -> float:
    """Almost-sure frequency of a digit in greedy expansions.

    Averages, across slots, the invariant mass of the set of points that
    emit the digit at that slot.  Digits beyond every alphabet have
    frequency zero.
    """
    if digit < 0:
        raise DomainError("digits are nonnegative")
    specs = slot_densities(base)
    total = 0.0
    for i in range(base.p):
        lo = min(digit / base.betas[i], 1.0)
        hi = min((digit + 1) / base.betas[i], 1.0)
        if hi > lo:
            total += measure_interval(specs[i], lo, hi)
    return total / base.p


def entropy(base: AlternateBase) -> float:
    """Average information per digit: log of the period product over the period."""
    return math.log(base.product) / base.p


class IntervalMeasureQuery:
    """A per-slot interval query for the product-space measure."""

    __slots__ = ("slot", "a", "b")

    def __init__(self, slot: int, a: float, b: float):
        self.slot = slot
        self.a = a
        self.b = b


def mu_product(base: AlternateBase, queries: list[IntervalMeasureQuery]) -> float:
    """Measure of a disjoint union of per-slot intervals, averaged over slots."""
    seen = set()
    for q in queries:
        if not (0 <= q.slot < base.p):
            raise DomainError(f"slot {q.slot} outside [0, {base.p})")
        if q.slot in seen:
            raise DomainError(f"duplicate slot {q.slot} in query")
        seen.add(q.slot)
    specs = slot_densities(base)
    return sum(measure_interval(specs[q.slot], q.a, q.b) for q in queries) / base.p
