import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from altbase.core import StatePoint, greedy_step, lazy_step, new_base
from altbase.digitset import (
    DigitSet,
    compare_transforms,
    compare_transforms_lazy,
    delta_set,
    f_beta,
    greedy_delta_step,
    is_allowable,
    lazy_delta_step,
    nondecreasing_bruteforce,
    nondecreasing_by_criterion,
    tilde,
)
from altbase.errors import AlphabetError, DomainError, SearchTooLarge
from altbase.oracle import SplitMix64
from helpers import PHI, base13, random_base

R5 = math.sqrt(5)


def base_pps5():
    return new_base((PHI, PHI, R5))


def base_324():
    return new_base((1.5, 1.5, 4.0))


def base_567():
    return new_base((math.sqrt(5) / 2, math.sqrt(6) / 2, math.sqrt(7) / 2))


def phi_digit_set():
    return DigitSet((0.0, 1.0, PHI + 1 / PHI, PHI**2), PHI)


class TestFBeta:
    def test_weighted_sum(self):
        assert f_beta(base_pps5(), (0, 1, 2)) == pytest.approx(R5 + 2, abs=1e-12)

    def test_zero(self):
        assert f_beta(base_pps5(), (0, 0, 0)) == 0.0

    def test_integer_collision_pair(self):
        b = base_324()
        assert f_beta(b, (0, 1, 3)) == pytest.approx(7.0, abs=1e-12)
        assert f_beta(b, (1, 0, 0)) == pytest.approx(6.0, abs=1e-12)

    def test_bad_tuple(self):
        with pytest.raises(AlphabetError):
            f_beta(base_pps5(), (0, 1))
        with pytest.raises(AlphabetError):
            f_beta(base_pps5(), (2, 0, 0))


class TestDeltaSet:
    def test_integers_up_to_13(self):
        ds = delta_set(base_324())
        assert ds.digits == pytest.approx(tuple(float(k) for k in range(14)), abs=1e-12)

    def test_sqrt13(self):
        b = base13()
        b1 = b.betas[1]
        ds = delta_set(b)
        assert ds.digits == pytest.approx((0, 1, b1, b1 + 1, 2 * b1, 2 * b1 + 1), abs=1e-12)
        assert ds.xsup == pytest.approx(b.xmax[0], abs=1e-10)

    def test_binary(self):
        assert delta_set(new_base((2,))).digits == (0.0, 1.0)

    def test_enumeration_bound(self):
        with pytest.raises(SearchTooLarge):
            delta_set(new_base((1e6, 1e6)))


class TestAllowable:
    def test_phi_example(self):
        assert is_allowable(phi_digit_set())

    def test_two_point_sets(self):
        assert is_allowable(DigitSet((0.0, 10.0), 2.0))
        assert not is_allowable(DigitSet((0.0, 10.0), 3.0))

    def test_blocked_sets_always_allowable(self):
        rng = SplitMix64(31)
        for _ in range(100):
            b = random_base(rng, pmax=4, lo=1.05, hi=5.0)
            assert is_allowable(delta_set(b))


class TestTilde:
    def test_phi_example(self):
        dt = tilde(phi_digit_set())
        assert dt.digits == pytest.approx((0.0, 1 - 1 / PHI, PHI, PHI**2), abs=1e-12)

    def test_two_point_fixed(self):
        ds = DigitSet((0.0, 3.5), 2.0)
        assert tilde(ds).digits == ds.digits

    def test_blocked_sets_self_mirrored(self):
        rng = SplitMix64(32)
        for _ in range(50):
            ds = delta_set(random_base(rng))
            assert tilde(ds).digits == pytest.approx(ds.digits, abs=1e-9)

    @given(st.lists(st.floats(0.01, 50.0), min_size=1, max_size=8), st.floats(1.1, 9.0))
    @settings(max_examples=80, deadline=None)
    def test_involution(self, gaps, beta):
        digits = [0.0]
        for g in gaps:
            digits.append(digits[-1] + g)
        ds = DigitSet(tuple(digits), beta)
        back = tilde(tilde(ds))
        assert back.digits == pytest.approx(ds.digits, abs=1e-12)


class TestDeltaSteps:
    def test_known_image_at_three_quarters(self):
        b = base_pps5()
        ds = delta_set(b)
        img, d = greedy_delta_step(ds, 0.75)
        assert img == pytest.approx(0.1545084971874733, abs=1e-9)
        assert d == pytest.approx(R5 + 2, abs=1e-12)

    def test_zero(self):
        assert greedy_delta_step(delta_set(base13()), 0.0) == (0.0, 0.0)

    def test_doubling(self):
        img, d = greedy_delta_step(DigitSet((0.0, 1.0), 2.0), 0.7)
        assert (img, d) == (pytest.approx(0.4), 1.0)

    def test_lazy_maximal_fixed_point(self):
        ds = phi_digit_set()
        img, d = lazy_delta_step(ds, ds.xsup)
        assert d == ds.top
        assert img == pytest.approx(ds.xsup, abs=1e-12)

    def test_lazy_branch_structure(self):
        # digit switches at the three interior breakpoints of the mirrored set
        dt = tilde(phi_digit_set())
        cuts = (PHI / (PHI - 1), (PHI + 3) / PHI, (2 * PHI - 1) / (PHI - 1))
        eps = 1e-6
        expected = (0.0, dt.digits[1], dt.digits[2], dt.digits[3])
        for k, c in enumerate(cuts):
            _, before = lazy_delta_step(dt, c - eps)
            _, after = lazy_delta_step(dt, c + eps)
            assert before == pytest.approx(expected[k], abs=1e-9)
            assert after == pytest.approx(expected[k + 1], abs=1e-9)

    def test_greedy_lazy_conjugate(self):
        ds = phi_digit_set()
        dt = tilde(ds)
        for x in (0.3, 0.75, 1.9, 2.4):
            g, _ = greedy_delta_step(ds, x)
            l, _ = lazy_delta_step(dt, ds.xsup - x)
            assert l == pytest.approx(ds.xsup - g, abs=1e-9)

    def test_domain_errors(self):
        ds = delta_set(base13())
        with pytest.raises(DomainError):
            greedy_delta_step(ds, ds.xsup + 0.5)
        with pytest.raises(DomainError):
            lazy_delta_step(ds, 0.0)


class TestNondecreasing:
    def test_period_two_always(self):
        rng = SplitMix64(33)
        for _ in range(20):
            assert nondecreasing_by_criterion(random_base(rng, pmin=2, pmax=2))

    def test_known_nonmonotone_bases(self):
        assert not nondecreasing_by_criterion(base_324())
        assert not nondecreasing_by_criterion(base_pps5())
        assert not nondecreasing_bruteforce(base_324())
        assert not nondecreasing_bruteforce(base_567())

    def test_integer_blocks_monotone(self):
        assert nondecreasing_bruteforce(new_base((2.0, 2.0)))

    def test_criterion_matches_bruteforce(self):
        rng = SplitMix64(34)
        for _ in range(100):
            b = random_base(rng, pmin=1, pmax=4, lo=1.05, hi=3.0)
            assert nondecreasing_by_criterion(b) == nondecreasing_bruteforce(b)


class TestCompareTransforms:
    def test_phi_phi_sqrt5_interval(self):
        rep = compare_transforms(base_pps5())
        B = R5 * PHI**2
        assert len(rep.intervals) == 1
        lo, hi = rep.intervals[0]
        assert lo == pytest.approx((R5 + 2) / B, abs=1e-9)
        assert hi == pytest.approx((R5 * PHI + 1) / B, abs=1e-9)
        w = rep.witnesses[0]
        assert w.delta_image < w.composed_image

    def test_collision_base_coincides(self):
        assert not compare_transforms(base_324())

    def test_period_two_coincides(self):
        rng = SplitMix64(35)
        for _ in range(20):
            assert not compare_transforms(random_base(rng, pmin=2, pmax=2))

    def test_sqrt567_disagrees_above_one(self):
        rep = compare_transforms(base_567())
        assert rep.intervals
        assert all(lo >= 1.0 for lo, _ in rep.intervals)
        lo, hi = rep.intervals[0]
        assert lo == pytest.approx(1.28, abs=1e-2)
        assert hi == pytest.approx(1.44, abs=1e-2)

    def test_monotone_implies_coincide(self):
        rng = SplitMix64(36)
        for _ in range(60):
            b = random_base(rng, pmin=1, pmax=4, lo=1.05, hi=3.0)
            if nondecreasing_by_criterion(b):
                assert not compare_transforms(b)

    def test_inequality_direction(self):
        # the blocked map never exceeds one period of the dynamics
        for b in (base_pps5(), base_567(), base13()):
            ds = delta_set(b)
            xb = b.xmax[0]
            for k in range(1, 1000):
                x = k * xb / 1000
                g, _ = greedy_delta_step(ds, x)
                s = StatePoint(0, x)
                for _ in range(b.p):
                    s, _ = greedy_step(b, s)
                assert g <= s.value + 1e-9

    def test_lazy_inequality_direction(self):
        for b in (base_pps5(), base_567()):
            ds = delta_set(b)
            xb = b.xmax[0]
            for k in range(1, 1000):
                x = k * xb / 1000
                l, _ = lazy_delta_step(ds, x)
                s = StatePoint(0, x)
                for _ in range(b.p):
                    s, _ = lazy_step(b, s)
                assert l >= s.value - 1e-9

    def test_lazy_comparison_is_mirror(self):
        for b in (base_pps5(), base_324(), base_567(), base13()):
            greedy_rep = compare_transforms(b)
            lazy_rep = compare_transforms_lazy(b)
            assert bool(greedy_rep) == bool(lazy_rep)
            xb = b.xmax[0]
            mirrored = sorted((xb - hi, xb - lo) for lo, hi in greedy_rep.intervals)
            for got, exp in zip(lazy_rep.intervals, mirrored):
                assert got == pytest.approx(exp, abs=1e-12)

    def test_lazy_witnesses_certify_disagreement(self):
        b = base_pps5()
        for w in compare_transforms_lazy(b).witnesses:
            ds = delta_set(b)
            img, _ = lazy_delta_step(ds, w.x)
            s = StatePoint(0, w.x)
            for _ in range(b.p):
                s, _ = lazy_step(b, s)
            assert img == pytest.approx(w.delta_image, abs=1e-9)
            assert s.value == pytest.approx(w.composed_image, abs=1e-9)
            assert abs(img - s.value) > 1e-6
