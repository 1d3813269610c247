import math

import pytest

from lorenzlab import LorenzParams
from lorenzlab.lyapunov import leading_exponent, lyapunov_spectrum
from lorenzlab.sweep import SweepSettings, classify_r, cluster_maxima, sweep

P = LorenzParams(10.0, 8.0 / 3.0, 28.0)
DIVERGENCE = -41.0 / 3.0


class TestLyapunovSpectrum:
    def test_sinking_orbit_matches_origin_eigenvalues(self):
        spec = lyapunov_spectrum(P.with_r(0.5), total=400.0, transient=50.0)
        root = math.sqrt(101.0)
        targets = ((-11.0 + root) / 2.0, -8.0 / 3.0, (-11.0 - root) / 2.0)
        for got, want in zip(spec.exponents, targets):
            assert got == pytest.approx(want, abs=0.02)

    def test_chaotic_band_at_r28(self):
        spec = lyapunov_spectrum(P, total=2000.0)
        assert 0.7 <= spec.exponents[0] <= 1.1
        assert abs(spec.total_sum - DIVERGENCE) < 0.05
        assert abs(spec.closest_to_zero) < 0.05

    def test_stable_cycle_at_r350(self):
        spec = lyapunov_spectrum(P.with_r(350.0), total=600.0)
        assert abs(spec.exponents[0]) < 0.02
        assert spec.exponents[1] < -0.1
        assert abs(spec.total_sum - DIVERGENCE) < 0.05

    @pytest.mark.parametrize("r,total", [(0.5, 300.0), (28.0, 600.0),
                                         (350.0, 250.0)])
    def test_doubling_total_time_is_stable(self, r, total):
        a = lyapunov_spectrum(P.with_r(r), total=total)
        b = lyapunov_spectrum(P.with_r(r), total=2.0 * total)
        for ea, eb in zip(a.exponents, b.exponents):
            assert abs(ea - eb) < 0.05

    def test_sum_identity_across_grid(self):
        for r in (0.5, 10.0, 20.0):
            spec = lyapunov_spectrum(P.with_r(r), total=300.0)
            assert abs(spec.total_sum - DIVERGENCE) < 0.05

    def test_leading_exponent_agrees_with_spectrum(self):
        lam = leading_exponent(P, total=800.0)
        assert 0.7 <= lam <= 1.1


class TestClusterMaxima:
    def test_groups_by_diameter(self):
        groups = cluster_maxima([1.0, 1.0005, 2.0, 2.0009, 5.0], diameter=1e-3)
        assert [len(g) for g in groups] == [2, 2, 1]

    def test_empty(self):
        assert cluster_maxima([]) == []

    def test_diameter_bound_respected(self):
        vals = [0.0, 0.0004, 0.0008, 0.0012, 0.0016]
        for g in cluster_maxima(vals, diameter=1e-3):
            assert max(g) - min(g) < 1e-3


class TestSweep:
    def test_canonical_verdicts(self):
        recs = sweep(P, [0.5, 28.0, 350.0])
        by_r = {rec.r: rec for rec in recs}
        assert by_r[0.5].verdict == "fixed-point"
        assert by_r[28.0].verdict == "chaotic"
        assert by_r[28.0].leading_exponent > 0.01
        assert by_r[350.0].verdict == "periodic"
        assert by_r[350.0].n_clusters <= 2
        assert all(rec.error is None for rec in recs)

    def test_records_independent_of_grid_order(self):
        fwd = sweep(P, [0.5, 10.0])
        rev = sweep(P, [10.0, 0.5])
        assert fwd[0] == rev[1]
        assert fwd[1] == rev[0]

    def test_verdict_invariants(self):
        settings = SweepSettings(transient=60.0, collect=80.0, lyap_total=300.0)
        for r in (0.5, 28.0, 350.0):
            rec = classify_r(P.with_r(r), settings)
            if rec.verdict == "chaotic":
                assert rec.leading_exponent > 0.01
            if rec.verdict == "periodic":
                assert rec.n_clusters <= 32
                groups = cluster_maxima(rec.maxima)
                assert all(max(g) - min(g) < 1e-3 for g in groups)
