"""Histogramming, escape-rate inversion, and the forward density map."""

import math

import numpy as np
import pytest

from washboard import fd_escape_rate, histogram, scd_from_rate
from washboard.escape import RateCurve


def exponential_sample(gamma_over_v, n=4000):
    """Deterministic inverse-CDF sample of an exponential switching law."""
    u = (np.arange(n) + 0.5) / n
    return -np.log1p(-u) / gamma_over_v


class TestHistogram:
    def test_density_normalized(self):
        values = exponential_sample(50.0)
        hist = histogram(values, bin_count=16)
        widths = np.diff(hist.bin_edges)
        assert float(np.sum(hist.densities * widths)) == pytest.approx(
            1.0, rel=1e-12)
        assert hist.n == len(values)

    def test_bin_count_honored(self):
        hist = histogram(np.linspace(0, 1, 100), bin_count=7)
        assert len(hist.densities) == 7
        assert len(hist.bin_edges) == 8

    def test_fd_rule_default(self):
        hist = histogram(np.linspace(0, 1, 100))
        assert len(hist.densities) >= 2

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            histogram(np.array([]))

    def test_bad_bin_count(self):
        with pytest.raises(ValueError):
            histogram(np.linspace(0, 1, 10), bin_count=0)


class TestFdEscapeRate:
    def test_hand_computed_survivors(self):
        values = np.array([1.0, 2.0, 3.0, 4.0])
        rate = fd_escape_rate(values, v=2.0, bin_count=3)
        # edges 1,2,3,4; survivors 4,3,2,1; Gamma = v ln(S_k/S_k+1) / di
        np.testing.assert_allclose(rate.i, [1.5, 2.5, 3.5])
        np.testing.assert_allclose(
            rate.gamma,
            [2.0 * math.log(4 / 3), 2.0 * math.log(3 / 2),
             2.0 * math.log(2.0)], rtol=1e-12)

    def test_censored_trials_survive_every_edge(self):
        values = np.array([1.0, 2.0, 3.0, 4.0])

        class Sample:
            pass

        s = Sample()
        s.values = values
        s.censored_count = 2
        rate = fd_escape_rate(s, v=2.0, bin_count=3)
        np.testing.assert_allclose(
            rate.gamma,
            [2.0 * math.log(6 / 5), 2.0 * math.log(5 / 4),
             2.0 * math.log(4 / 3)], rtol=1e-12)

    def test_constant_rate_recovered(self):
        v, gamma = 1e-3, 0.05
        values = exponential_sample(gamma / v)
        rate = fd_escape_rate(values, v=v, bin_count=20)
        # interior bins of a dense exponential sample see the flat rate
        interior = rate.gamma[:10]
        np.testing.assert_allclose(interior, gamma, rtol=0.1)

    def test_truncates_after_last_survivor(self):
        values = np.array([1.0, 1.1, 1.2, 5.0])
        rate = fd_escape_rate(values, v=1.0, bin_count=8)
        assert len(rate.i) <= 8

    def test_validation(self):
        with pytest.raises(ValueError):
            fd_escape_rate(np.array([1.0, 2.0]), v=0.0)
        with pytest.raises(ValueError):
            fd_escape_rate(np.array([]), v=1.0)


class TestScdFromRate:
    def test_constant_rate_density(self):
        v, gamma = 1e-3, 0.05
        grid = np.linspace(0.0, 0.1, 200)
        curve = scd_from_rate(RateCurve(i=grid,
                                        gamma=np.full_like(grid, gamma)), v)
        expected = (gamma / v) * np.exp(-(gamma / v) * grid)
        np.testing.assert_allclose(curve.density, expected, rtol=1e-4)

    def test_accepts_plain_pair(self):
        grid = np.array([0.0, 1.0])
        curve = scd_from_rate((grid, np.array([2.0, 2.0])), v=1.0)
        assert curve.density[0] == pytest.approx(2.0)

    def test_mass_matches_exponential_law(self):
        v = 1e-3
        grid = np.linspace(0.0, 0.5, 400)
        curve = scd_from_rate(RateCurve(i=grid,
                                        gamma=np.full_like(grid, 0.02)), v)
        mass = float(np.trapezoid(curve.density, grid))
        assert mass == pytest.approx(1.0 - math.exp(-10.0), abs=2e-3)

    def test_validation(self):
        grid = np.array([0.0, 1.0])
        with pytest.raises(ValueError):
            scd_from_rate((grid, np.array([-1.0, 1.0])), v=1.0)
        with pytest.raises(ValueError):
            scd_from_rate((grid, np.array([1.0, 1.0])), v=0.0)


class TestRoundtrip:
    def test_peaked_law_roundtrip_tv(self):
        # rising rate Gamma/v = a i gives a peaked density that, like a
        # real switching distribution, vanishes at the left bin edge
        v, a, n = 1e-3, 2000.0, 6000
        u = (np.arange(n) + 0.5) / n
        values = np.sqrt(-2.0 * np.log1p(-u) / a)
        hist = histogram(values, bin_count=24)
        rate = fd_escape_rate(values, v=v, bin_count=24)
        pred = scd_from_rate(rate, v=v)
        widths = np.diff(hist.bin_edges)
        m = len(pred.i)
        tv = 0.5 * float(np.sum(np.abs(hist.densities[:m] - pred.density)
                                * widths[:m]))
        assert m == 24
        assert tv < 0.05
