import numpy as np
import pytest

from lorenzlab import (
    InsufficientDataError,
    LorenzParams,
    State,
    ToleranceSpec,
    integrate,
)
from lorenzlab.orbits import (
    cycle_search_battery,
    find_periodic_orbit,
    same_orbit,
    symmetry_image,
)
from lorenzlab.poincare import (
    diagonal_crossing_slope,
    fixed_point_spread,
    lorenz_return_map,
    poincare_crossings,
    return_map_thinness,
)

P28 = LorenzParams(10.0, 8.0 / 3.0, 28.0)
P245 = LorenzParams(10.0, 8.0 / 3.0, 24.5)
P350 = LorenzParams(10.0, 8.0 / 3.0, 350.0)


@pytest.fixture(scope="module")
def stable_cycle_350():
    cs = poincare_crossings(P350, State(1, 1, 1), n=30, t_max=100.0)
    return find_periodic_orbit(P350, cs.states[-1], returns=2)


@pytest.fixture(scope="module")
def battery_245():
    return cycle_search_battery(P245, budget=40)


class TestPoincareCrossings:
    def test_crossings_on_periodic_orbit_repeat(self, stable_cycle_350):
        orb = stable_cycle_350
        cs = poincare_crossings(P350, orb.anchor, n=9, t_max=20.0)
        assert cs.complete
        for a, b in zip(cs.states, cs.states[orb.returns:]):
            assert a.distance(b) < 1e-6
        # Section period: time between same-phase crossings equals the period.
        gaps = [t2 - t1 for t1, t2 in zip(cs.times, cs.times[orb.returns:])]
        for g in gaps:
            assert g == pytest.approx(orb.period, abs=1e-6)

    def test_chaotic_crossings_alternate_irregularly(self):
        cs = poincare_crossings(P28, State(1, 1, 1), n=60, t_max=200.0)
        signs = [1 if s.x > 0 else -1 for s in cs.states]
        assert {1, -1} <= set(signs)
        runs = [a == b for a, b in zip(signs, signs[1:])]
        # Irregular: neither constant nor strictly alternating.
        assert any(runs) and not all(runs)

    def test_decayed_orbit_yields_partial_result(self):
        p = P28.with_r(0.5)
        cs = poincare_crossings(p, State(1, 1, 1), n=5, direction=1,
                                t_max=60.0)
        assert not cs.complete
        assert len(cs.states) == 0

    def test_crossing_accuracy(self):
        cs = poincare_crossings(P28, State(1, 1, 1), n=10, t_max=100.0)
        for s in cs.states:
            assert abs(s.z - 27.0) < 1e-10


class TestReturnMap:
    def test_fixed_point_when_seeded_on_cycle(self, stable_cycle_350):
        samples = lorenz_return_map(P350, stable_cycle_350.anchor,
                                    n_maxima=40, discard=0)
        assert fixed_point_spread(samples) < 1e-6

    def test_tent_like_graph_is_thin_at_r28(self):
        samples = lorenz_return_map(P28, State(1, 1, 1), n_maxima=3000,
                                    discard=30)
        assert return_map_thinness(samples, bins=200) < 0.01
        cur, nxt = np.array([s.zmax_current for s in samples]), \
            np.array([s.zmax_next for s in samples])
        # Single sharp peak: the map rises to one maximum and falls after it.
        peak = cur[np.argmax(nxt)]
        assert cur.min() < peak < cur.max()

    def test_no_stable_fixed_point_at_r28(self):
        samples = lorenz_return_map(P28, State(1, 1, 1), n_maxima=3000,
                                    discard=30)
        assert abs(diagonal_crossing_slope(samples)) > 1.0

    def test_insufficient_maxima_raises(self):
        with pytest.raises(InsufficientDataError):
            lorenz_return_map(P28.with_r(0.5), State(1, 1, 1), n_maxima=10,
                              discard=5, t_max=80.0)

    def test_maxima_are_genuine(self):
        # dz/dt changes sign + to - at each recorded maximum: values exceed
        # their immediate neighbours on a dense resampling.
        traj = integrate(P28, State(1, 1, 1), ToleranceSpec(t_max=30.0))
        samples = lorenz_return_map(P28, State(1, 1, 1), n_maxima=10,
                                    discard=2)
        zs = traj.states[:, 2]
        interior_max = zs[1:-1][(zs[1:-1] > zs[:-2]) & (zs[1:-1] > zs[2:])]
        for s in samples[:3]:
            assert np.min(np.abs(interior_max - s.zmax_current)) < 1e-3


class TestFindPeriodicOrbit:
    def test_stable_symmetric_cycle_at_r350(self, stable_cycle_350):
        orb = stable_cycle_350
        assert orb.stability == "stable"
        assert orb.symmetric
        assert orb.signature == (1, 1)
        assert all(abs(m) < 1.0 for m in orb.nontrivial_multipliers)
        assert abs(orb.trivial_multiplier - 1.0) < 1e-4

    def test_multiplier_product_identity(self, stable_cycle_350):
        assert stable_cycle_350.multiplier_product_defect() < 1e-5

    def test_reintegration_closes_orbit(self, stable_cycle_350):
        orb = stable_cycle_350
        end = integrate(P350, orb.anchor, ToleranceSpec(rel=1e-12, abs=1e-12),
                        t_max=orb.period, dense=False).final_state
        assert end.distance(orb.anchor) < 1e-7

    def test_saddle_cycle_at_r245(self, battery_245):
        l1 = [o for o in battery_245.orbits if o.signature == (1, 0)]
        assert len(l1) == 1
        assert l1[0].stability == "saddle"
        outside = [m for m in l1[0].nontrivial_multipliers if abs(m) > 1.0]
        assert len(outside) == 1

    def test_reseeding_on_found_orbit_converges_immediately(self, stable_cycle_350):
        orb = stable_cycle_350
        again = find_periodic_orbit(P350, orb.anchor, returns=orb.returns)
        assert again.newton_iterations <= 2
        assert again.period == pytest.approx(orb.period, abs=1e-9)

    def test_double_cover_normalizes_to_minimal_period(self, battery_245):
        l1 = next(o for o in battery_245.orbits if o.signature == (1, 0))
        doubled = find_periodic_orbit(P245, l1.anchor, returns=2)
        assert doubled.returns == 1
        assert doubled.period == pytest.approx(l1.period, rel=1e-6)


class TestSymmetryImage:
    def test_involution(self, stable_cycle_350):
        orb = stable_cycle_350
        twice = symmetry_image(symmetry_image(orb))
        assert twice.anchor == orb.anchor
        assert twice.signature == orb.signature
        assert np.allclose(twice.monodromy, orb.monodromy)

    def test_state_and_trajectory_mirroring(self):
        s = State(1.0, -2.0, 3.0)
        assert symmetry_image(s) == State(-1.0, 2.0, 3.0)
        traj = integrate(P28, s, ToleranceSpec(t_max=1.0))
        m = symmetry_image(traj)
        assert np.allclose(m.states[:, 2], traj.states[:, 2])
        assert np.allclose(m.states[:, 0], -traj.states[:, 0])

    def test_l2_is_image_of_l1_with_identical_period(self, battery_245):
        l1 = next(o for o in battery_245.orbits if o.signature == (1, 0))
        l2 = next(o for o in battery_245.orbits if o.signature == (0, 1))
        image = symmetry_image(l1)
        assert same_orbit(image, l2)
        assert image.period == l1.period
        assert image.multipliers == l1.multipliers
        assert image.signature == (0, 1)

    def test_symmetric_orbit_maps_to_itself(self, stable_cycle_350):
        image = symmetry_image(stable_cycle_350)
        assert same_orbit(image, stable_cycle_350)


class TestBattery:
    def test_finds_l1_and_l2_at_r245(self, battery_245):
        sigs = {o.signature for o in battery_245.orbits}
        assert (1, 0) in sigs and (0, 1) in sigs

    def test_r28_finds_distinct_unstable_cycles(self):
        res = cycle_search_battery(P28, budget=200)
        sigs = {o.signature for o in res.orbits}
        assert len(sigs) >= 3
        assert all(any(abs(m) > 1.0 for m in o.nontrivial_multipliers)
                   for o in res.orbits)

    def test_r350_unique_up_to_symmetry(self):
        res = cycle_search_battery(P350, budget=50, t_run=60.0)
        assert len(res.orbits) == 1
        assert res.orbits[0].symmetric
        assert res.orbits[0].stability == "stable"
        assert res.stats.seeds_tried <= 50

    def test_closed_under_symmetry(self, battery_245):
        for o in battery_245.orbits:
            image = symmetry_image(o)
            assert any(same_orbit(image, other) for other in battery_245.orbits)

    def test_orbit_invariants_hold_for_every_found_orbit(self, battery_245):
        from lorenzlab.orbits import orbit_liouville_defect

        for o in battery_245.orbits:
            near_one = [m for m in o.multipliers if abs(m - 1.0) < 1e-4]
            assert len(near_one) == 1
            # The multiplier-product identity, evaluated in log space; the
            # raw eigenvalue product saturates at the eigensolver floor once
            # the smallest multiplier drops toward 1e-16 * ||M||.
            assert orbit_liouville_defect(o) < 1e-5
            if abs(o.multipliers[-1]) > 1e-13 * abs(o.multipliers[0]) * 100:
                assert o.multiplier_product_defect() < 1e-4
            end = integrate(o.params, o.anchor,
                            ToleranceSpec(rel=1e-12, abs=1e-12),
                            t_max=o.period, dense=False).final_state
            assert end.distance(o.anchor) < 1e-7
