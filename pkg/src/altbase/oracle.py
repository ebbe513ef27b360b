"""Independent oracles: exhaustive tuple searches and orbit statistics.

The searches here deliberately avoid the one-step transformations of
:mod:`altbase.core`; they characterize the same digit strings through their
defining extremal property (lexicographically greatest value-bounded tuple,
or least tuple whose maximal continuation still reaches the target), so the
two routes can be checked against each other.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import Optional

from .core import EPS_SNAP, AlternateBase, StatePoint
from .errors import DomainError, SearchTooLarge

ENUMERATION_BOUND = 10**7

RNG_ALGORITHM = "splitmix64"

# Orbits are iterated with a deterministic one-ulp dither.  Multiplication
# by an exactly representable slope (an integer base like 2) is lossless in
# binary floating point, so the undithered orbit of every double collapses
# onto a dyadic point and its statistics are maximally atypical.  Expanding
# maps are stochastically stable, so a perturbation at the last mantissa bit
# leaves the invariant statistics unchanged far below the tolerances used
# here while restoring generic behavior.  The dither stream is seeded from
# the bit pattern of the starting point, keeping every run reproducible.
DITHER_AMPLITUDE = 2.0**-52
_DITHER_SALT = 0xD1B54A32D192ED03


class SplitMix64:
    """Seedable 64-bit generator (algorithm id: ``splitmix64``).

    The update is the standard splitmix64 finalizer, so any implementation
    of the same algorithm reproduces the stream bit for bit.
    """

    _MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self._state = seed & self._MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & self._MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self._MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self._MASK
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        # 53 significant bits, uniform in [lo, hi)
        u = (self.next_u64() >> 11) * 2.0**-53
        return lo + u * (hi - lo)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] by rejection."""
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            u = self.next_u64()
            if u < limit:
                return lo + u % span


@dataclass(frozen=True)
class TupleSearchResult:
    digits: tuple[int, ...]
    value: float


def _check_enumeration_bound(base: AlternateBase, n: int) -> None:
    total = 1
    for k in range(n):
        total *= base.alphabet(k) + 1
        if total > ENUMERATION_BOUND:
            raise SearchTooLarge(
                f"{n}-digit enumeration exceeds the {ENUMERATION_BOUND:.0e} tuple bound"
            )


def _prefix_products(base: AlternateBase, n: int) -> list[float]:
    prods = [1.0]
    for k in range(n):
        prods.append(prods[-1] * base.beta(k))
    return prods


def lex_greatest(base: AlternateBase, x: float, n: int) -> TupleSearchResult:
    """Lexicographically greatest digit tuple whose value stays <= x.

    Descending depth-first enumeration; a prefix is abandoned as soon as its
    own value (its cheapest completion) already exceeds x.
    """
    if not (-EPS_SNAP <= x <= base.xmax[0] + EPS_SNAP):
        raise DomainError(f"x={x!r} outside [0, xmax)")
    _check_enumeration_bound(base, n)
    prods = _prefix_products(base, n)
    digits = [0] * n
    values = [0.0] * (n + 1)

    def descend(k: int, acc: float) -> bool:
        if k == n:
            return True
        for c in range(base.alphabet(k), -1, -1):
            v = acc + c / prods[k + 1]
            if v <= x:
                digits[k] = c
                values[k + 1] = v
                if descend(k + 1, v):
                    return True
        return False

    if not descend(0, 0.0):
        raise DomainError(f"no admissible tuple below x={x!r}")
    return TupleSearchResult(tuple(digits), values[n])


def lex_least(base: AlternateBase, x: float, n: int) -> TupleSearchResult:
    """Lexicographically least tuple whose maximal continuation reaches x.

    Ascending depth-first enumeration; a prefix is viable only while its
    value plus the all-maximal tail is still >= x.
    """
    if not (0.0 < x <= base.xmax[0] + EPS_SNAP):
        raise DomainError(f"x={x!r} outside (0, xmax]")
    _check_enumeration_bound(base, n)
    prods = _prefix_products(base, n)
    digits = [0] * n
    values = [0.0] * (n + 1)

    def descend(k: int, acc: float) -> bool:
        if k == n:
            return True
        for c in range(base.alphabet(k) + 1):
            v = acc + c / prods[k + 1]
            if v + base.xsup(k + 1) / prods[k + 1] >= x:
                digits[k] = c
                values[k + 1] = v
                if descend(k + 1, v):
                    return True
        return False

    if not descend(0, 0.0):
        raise DomainError(f"no admissible tuple reaching x={x!r}")
    return TupleSearchResult(tuple(digits), values[n])


def _enumerate_naive(base: AlternateBase, n: int):
    """All digit tuples with their values, in lexicographic order."""
    _check_enumeration_bound(base, n)
    prods = _prefix_products(base, n)

    def rec(k: int, prefix: tuple[int, ...], acc: float):
        if k == n:
            yield prefix, acc
            return
        for c in range(base.alphabet(k) + 1):
            yield from rec(k + 1, prefix + (c,), acc + c / prods[k + 1])

    yield from rec(0, (), 0.0)


def lex_greatest_naive(base: AlternateBase, x: float, n: int) -> TupleSearchResult:
    best = None
    for digits, v in _enumerate_naive(base, n):
        if v <= x:
            best = (digits, v)  # lex order of enumeration makes the last hit greatest
    if best is None:
        raise DomainError(f"no admissible tuple below x={x!r}")
    return TupleSearchResult(*best)


def lex_least_naive(base: AlternateBase, x: float, n: int) -> TupleSearchResult:
    prods = _prefix_products(base, n)
    tail = base.xsup(n) / prods[n]
    for digits, v in _enumerate_naive(base, n):
        if v + tail >= x:
            return TupleSearchResult(digits, v)
    raise DomainError(f"no admissible tuple reaching x={x!r}")


def _dither_stream(x0: float) -> SplitMix64:
    (bits,) = struct.unpack("<Q", struct.pack("<d", x0))
    return SplitMix64(bits ^ _DITHER_SALT)


def _greedy_orbit_digits(base: AlternateBase, x0: float, nsteps: int) -> list[int]:
    # tight loop over the restricted transformation on [0,1), dithered
    betas = base.betas
    alph = base.alphabets
    p = len(betas)
    rng = _dither_stream(x0)
    uniform = rng.uniform
    x = x0
    i = 0
    out = []
    append = out.append
    for _ in range(nsteps):
        y = betas[i] * x
        d = int(y + EPS_SNAP)
        if d > alph[i]:
            d = alph[i]
        x = y - d + uniform(-DITHER_AMPLITUDE, DITHER_AMPLITUDE)
        if x < 0.0:
            x = 0.0
        elif x >= 1.0:
            x = math.nextafter(1.0, 0.0)
        i += 1
        if i == p:
            i = 0
        append(d)
    return out


def birkhoff_frequency(
    base: AlternateBase,
    x0: Optional[float],
    digit: int,
    N: int,
    seed: int = 0,
) -> float:
    """Fraction of the first N greedy digits of x0 equal to ``digit``.

    The orbit carries the one-ulp dither described above, so the result
    approximates the almost-sure frequency even for integer bases.  With
    ``x0=None`` a uniform random starting point is drawn from the splitmix64
    stream for ``seed``; the seed plays no other role.  Deterministic starts
    should be generic; sqrt(2) - 1 is a reasonable default.
    """
    if N < 1:
        raise DomainError("N must be positive")
    if x0 is None:
        x0 = SplitMix64(seed).uniform()
    if not (0.0 <= x0 < 1.0):
        raise DomainError(f"starting point {x0!r} outside [0,1)")
    count = 0
    for d in _greedy_orbit_digits(base, x0, N):
        if d == digit:
            count += 1
    return count / N


@dataclass(frozen=True)
class EmpiricalStats:
    counts: tuple[int, ...]
    iterations: int
    seed: Optional[int]
    start: StatePoint


def empirical_histogram(
    base: AlternateBase,
    slot: int,
    x0: float,
    N: int,
    bins: int,
) -> EmpiricalStats:
    """Histogram over [0,1) of the orbit values seen at one slot.

    Collects the N values the greedy orbit of (0, x0) takes at steps
    congruent to ``slot`` modulo the period, binned uniformly.
    """
    if not (0.0 <= x0 < 1.0):
        raise DomainError(f"starting point {x0!r} outside [0,1)")
    if bins < 1:
        raise DomainError("need at least one bin")
    if not (0 <= slot < base.p):
        raise DomainError(f"slot {slot} outside [0, {base.p})")
    counts = [0] * bins
    betas = base.betas
    alph = base.alphabets
    p = len(betas)
    rng = _dither_stream(x0)
    uniform = rng.uniform
    x = x0
    i = 0
    remaining = N
    while remaining > 0:
        if i == slot:
            k = int(x * bins)
            if k >= bins:
                k = bins - 1
            counts[k] += 1
            remaining -= 1
        y = betas[i] * x
        d = int(y + EPS_SNAP)
        if d > alph[i]:
            d = alph[i]
        x = y - d + uniform(-DITHER_AMPLITUDE, DITHER_AMPLITUDE)
        if x < 0.0:
            x = 0.0
        elif x >= 1.0:
            x = math.nextafter(1.0, 0.0)
        i += 1
        if i == p:
            i = 0
    return EmpiricalStats(tuple(counts), N, None, StatePoint(0, x0))
