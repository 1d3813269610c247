import math

import numpy as np
import pytest

from lorenzlab import BracketError, DomainError, LorenzParams, ToleranceSpec
from lorenzlab.equilibria import nontrivial_points
from lorenzlab.separatrix import (
    BisectionResult,
    classify_separatrix_fate,
    fate_profile,
    find_fate_transition_r,
    find_homoclinic_r,
    first_return_lobe_x,
    launch_separatrix,
    unstable_directions,
)

P = LorenzParams(10.0, 8.0 / 3.0, 28.0)

# Frozen from a bisection at offset 1e-8 and tolerances 1e-12, independent of
# the defaults used by the operation under test.
R1_REFERENCE = 13.926557


class TestUnstableDirections:
    def test_z_component_vanishes(self):
        plus, minus = unstable_directions(P)
        assert plus.z == 0.0 and minus.z == 0.0

    def test_eigenvector_ratio(self):
        plus, _ = unstable_directions(P)
        lam = (-11.0 + math.sqrt(1201.0)) / 2.0
        assert plus.y / plus.x == pytest.approx((lam + 10.0) / 10.0, rel=1e-12)

    def test_pair_exchanged_by_mirror(self):
        plus, minus = unstable_directions(P)
        assert plus.mirror() == minus
        assert abs(np.linalg.norm(plus.array()) - 1.0) < 1e-14

    def test_no_direction_below_r1(self):
        with pytest.raises(DomainError):
            unstable_directions(P.with_r(0.9))


class TestLaunchSeparatrix:
    def test_r10_lands_on_o1(self):
        traj = launch_separatrix(P.with_r(10.0), side=1, t_max=100.0)
        o1, _ = nontrivial_points(P.with_r(10.0))
        assert traj.final_state.distance(o1) < 1e-5
        assert traj.label == "separatrix+"

    def test_r20_lands_on_o2(self):
        traj = launch_separatrix(P.with_r(20.0), side=1, t_max=150.0)
        _, o2 = nontrivial_points(P.with_r(20.0))
        assert traj.final_state.distance(o2) < 1e-5

    def test_mirror_of_plus_is_minus(self):
        tol = ToleranceSpec(t_max=40.0)
        plus = launch_separatrix(P.with_r(10.0), side=1, tol=tol)
        minus = launch_separatrix(P.with_r(10.0), side=-1, tol=tol)
        m = plus.mirror()
        assert np.array_equal(plus.times, minus.times)
        assert np.abs(m.states - minus.states).max() < 1e-7

    def test_offset_validated(self):
        with pytest.raises(DomainError):
            launch_separatrix(P.with_r(10.0), side=1, offset=1e-2)
        with pytest.raises(DomainError):
            launch_separatrix(P.with_r(10.0), side=1, offset=1e-9)
        with pytest.raises(DomainError):
            launch_separatrix(P.with_r(10.0), side=2)


class TestClassifyFate:
    def test_canonical_fates(self):
        assert classify_separatrix_fate(P.with_r(10.0), t_max=200.0).verdict == \
            "converges-to-O1"
        assert classify_separatrix_fate(P.with_r(20.0), t_max=200.0).verdict == \
            "converges-to-O2"
        fate = classify_separatrix_fate(P.with_r(28.0), t_max=200.0)
        assert fate.verdict == "undecided-wandering"
        assert math.isnan(fate.decision_time)

    def test_side_symmetry_swaps_targets(self):
        for r in (10.0, 20.0, 28.0):
            fp = classify_separatrix_fate(P.with_r(r), side=1, t_max=200.0)
            fm = classify_separatrix_fate(P.with_r(r), side=-1, t_max=200.0)
            swap = {"converges-to-O1": "converges-to-O2",
                    "converges-to-O2": "converges-to-O1"}
            assert fm.verdict == swap.get(fp.verdict, fp.verdict)

    @pytest.mark.parametrize("r", [10.0, 20.0, 28.0])
    def test_offset_robustness(self, r):
        verdicts = {
            classify_separatrix_fate(P.with_r(r), t_max=150.0, offset=off).verdict
            for off in (1e-7, 1e-6, 1e-5)
        }
        assert len(verdicts) == 1


class TestHomoclinicSearch:
    def test_lobe_sign_flips_across_bracket(self):
        x_lo, n_lo = first_return_lobe_x(P.with_r(13.0))
        x_hi, n_hi = first_return_lobe_x(P.with_r(15.0))
        assert x_lo > 0 > x_hi
        assert n_lo == 1 and n_hi == 1  # single loop before the first descent

    def test_locates_r1(self):
        res = find_homoclinic_r(P, (13.0, 15.0), r_tol=1e-4)
        assert isinstance(res, BisectionResult)
        assert abs(res.estimate - 13.9) < 0.05
        assert abs(res.estimate - R1_REFERENCE) < 1e-3
        lo, hi = res.bracket_history[-1]
        assert hi - lo <= 1e-4

    def test_bracket_above_r1_rejected(self):
        with pytest.raises(BracketError):
            find_homoclinic_r(P, (20.0, 22.0))

    def test_min_origin_distance_dips_at_r1(self):
        # The re-approach hugs the z-axis, so the dip depth scales like a
        # small power of |r - r1|; only its location is asserted.
        grid = np.arange(13.87, 13.99, 0.01)
        dips = [classify_separatrix_fate(P.with_r(float(r)), t_max=150.0)
                .min_dist_origin for r in grid]
        r_min = float(grid[int(np.argmin(dips))])
        assert abs(r_min - R1_REFERENCE) < 0.05
        assert min(dips) < 0.95 * dips[0]
        assert min(dips) < 0.95 * dips[-1]


class TestFateTransition:
    def test_bracket_where_both_ends_converge_rejected(self):
        with pytest.raises(BracketError):
            find_fate_transition_r(P, (10.0, 12.0), t_max=150.0)

    def test_locates_transition_at_reduced_horizon(self):
        res = find_fate_transition_r(P, (23.0, 24.5), t_max=700.0, r_tol=2e-3)
        assert 23.8 < res.estimate < 24.3
        lo, hi = res.bracket_history[-1]
        assert hi - lo <= 2e-3
        verdicts = dict(res.probes)
        assert verdicts[23.0].startswith("converges")
        assert verdicts[24.5] == "undecided-wandering"

    def test_decision_time_grows_toward_transition(self):
        grid = [round(23.5 + 0.01 * k, 2) for k in range(101)]  # [23.5, 24.5]
        rows = fate_profile(P, grid, t_max=1000.0)
        assert [row.r for row in rows] == grid
        decided = [(row.r, row.decision_time) for row in rows
                   if not math.isnan(row.decision_time) and row.r <= 24.05]
        undecided = [row for row in rows if math.isnan(row.decision_time)]
        assert len(decided) > 20
        assert len(undecided) > 20
        third = len(decided) // 3
        early = np.mean([t for _, t in decided[:third]])
        late = np.mean([t for _, t in decided[-third:]])
        assert late > 1.3 * early
