import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorenzlab import (
    BracketError,
    DomainError,
    LorenzParams,
    State,
    classify,
    equilibria,
    find_hopf_numeric,
    hopf_threshold,
    vector_field,
)
from lorenzlab.equilibria import cubic_roots, jacobian_eigenvalues

R_A = 470.0 / 19.0  # closed-form threshold at (10, 8/3)


def canonical(r):
    return LorenzParams(10.0, 8.0 / 3.0, r)


class TestEquilibria:
    def test_below_r1_only_stable_origin(self):
        eqs = equilibria(canonical(0.5))
        assert len(eqs) == 1
        assert eqs[0].location == State(0, 0, 0)
        assert eqs[0].classification == "stable-node"

    def test_triple_degeneracy_at_r1(self):
        eqs = equilibria(canonical(1.0))
        assert len(eqs) == 1
        assert eqs[0].classification == "triple-degenerate"

    def test_three_points_at_r28(self):
        eqs = equilibria(canonical(28.0))
        assert len(eqs) == 3
        o1 = eqs[1]
        w = math.sqrt(72.0)
        assert o1.location.x == pytest.approx(w, abs=1e-12)
        assert o1.location.x == pytest.approx(8.48528, abs=1e-5)
        assert o1.location.y == pytest.approx(w, abs=1e-12)
        assert o1.location.z == pytest.approx(27.0, abs=1e-12)

    def test_o2_is_exact_mirror_of_o1(self):
        eqs = equilibria(canonical(28.0))
        assert eqs[2].location == eqs[1].location.mirror()
        assert eqs[2].eigenvalues == eqs[1].eigenvalues

    @pytest.mark.parametrize("r", [0.5, 2.0, 10.0, 20.0, 24.5, 28.0, 350.0])
    def test_field_vanishes_at_every_equilibrium(self, r):
        for eq in equilibria(canonical(r)):
            f = vector_field(canonical(r), eq.location)
            fnorm = math.sqrt(f.x ** 2 + f.y ** 2 + f.z ** 2)
            snorm = np.linalg.norm(eq.location.array())
            assert fnorm < 1e-12 * (1.0 + snorm)

    @pytest.mark.parametrize("r", [0.5, 2.0, 10.0, 20.0, 24.5, 28.0, 350.0])
    def test_eigenvalue_sum_identity(self, r):
        p = canonical(r)
        for eq in equilibria(p):
            total = sum(ev.real for ev in eq.eigenvalues)
            assert total == pytest.approx(p.divergence, abs=1e-9)


class TestClassify:
    def test_origin_stable_node_below_1(self):
        eq = classify(canonical(0.5), State(0, 0, 0))
        assert eq.classification == "stable-node"
        assert all(ev.imag == 0 and ev.real < 0 for ev in eq.eigenvalues)

    def test_origin_saddle_at_r28(self):
        eq = classify(canonical(28.0), State(0, 0, 0))
        assert eq.classification == "saddle-index-1"
        reals = sorted(ev.real for ev in eq.eigenvalues)
        assert reals[2] > 0 > reals[1]
        assert all(ev.imag == 0 for ev in eq.eigenvalues)

    def test_o1_unstable_saddle_focus_at_r28(self):
        w = math.sqrt(72.0)
        eq = classify(canonical(28.0), State(w, w, 27.0))
        assert eq.classification == "unstable-saddle-focus"
        pair = [ev for ev in eq.eigenvalues if abs(ev.imag) > 0]
        assert len(pair) == 2
        assert all(ev.real > 0 for ev in pair)

    def test_o1_stable_before_threshold(self):
        for r in (2.0, 10.0, 20.0, 24.0):
            p = canonical(r)
            w = math.sqrt(p.b * (r - 1.0))
            eq = classify(p, State(w, w, r - 1.0))
            assert eq.classification in ("stable-node", "stable-focus-node")

    def test_rejects_non_equilibrium(self):
        with pytest.raises(DomainError):
            classify(canonical(28.0), State(1.0, 1.0, 1.0))

    def test_single_flip_on_fine_grid_near_threshold(self):
        r_star = find_hopf_numeric(10.0, 8.0 / 3.0, (20.0, 30.0))
        grid = np.arange(r_star - 0.05, r_star + 0.05, 1e-3)
        stable = []
        for r in grid:
            p = canonical(float(r))
            w = math.sqrt(p.b * (r - 1.0))
            eq = classify(p, State(w, w, float(r) - 1.0))
            stable.append(eq.max_real_part < 0)
        flips = sum(1 for a, b in zip(stable, stable[1:]) if a != b)
        assert flips == 1
        assert stable[0] and not stable[-1]


class TestHopfThreshold:
    def test_canonical_value(self):
        assert hopf_threshold(10.0, 8.0 / 3.0) == pytest.approx(R_A, abs=1e-12)
        assert hopf_threshold(10.0, 8.0 / 3.0) == pytest.approx(24.7368, abs=1e-4)

    def test_alternate_parameters(self):
        assert hopf_threshold(16.0, 4.0) == pytest.approx(368.0 / 11.0, abs=1e-12)

    def test_pole_raises(self):
        with pytest.raises(DomainError):
            hopf_threshold(3.0, 2.0)


class TestFindHopfNumeric:
    def test_matches_closed_form(self):
        r_star = find_hopf_numeric(10.0, 8.0 / 3.0, (20.0, 30.0))
        assert r_star == pytest.approx(R_A, abs=1e-6)

    def test_alternate_parameters(self):
        r_star = find_hopf_numeric(16.0, 4.0, (30.0, 40.0))
        assert r_star == pytest.approx(368.0 / 11.0, abs=1e-6)

    def test_bracket_without_switch_raises(self):
        with pytest.raises(BracketError):
            find_hopf_numeric(10.0, 8.0 / 3.0, (25.0, 30.0))


class TestCubicRoots:
    @given(
        st.floats(-20.0, 20.0),
        st.floats(-20.0, 20.0),
        st.floats(-20.0, 20.0),
    )
    @settings(max_examples=300, deadline=None)
    def test_against_numpy_companion_matrix(self, c2, c1, c0):
        mine = cubic_roots(c2, c1, c0)
        ref = [complex(v) for v in np.roots([1.0, c2, c1, c0])]
        scale = max(1.0, max(abs(v) for v in ref))
        # Match nearest roots; sorting is unstable under 1-ulp real parts.
        for b in ref:
            assert min(abs(a - b) for a in mine) < 1e-6 * scale
        for a in mine:
            assert min(abs(a - b) for b in ref) < 1e-6 * scale

    @given(
        st.builds(LorenzParams, sigma=st.floats(1.0, 40.0), b=st.floats(0.5, 8.0),
                  r=st.floats(1.001, 400.0)),
    )
    @settings(max_examples=200, deadline=None)
    def test_nontrivial_point_spectrum_against_numpy(self, p):
        from lorenzlab.dynamics import jacobian

        w = math.sqrt(p.b * (p.r - 1.0))
        s = State(w, w, p.r - 1.0)
        mine = sorted(jacobian_eigenvalues(p, s), key=lambda v: (v.real, v.imag))
        ref = sorted(np.linalg.eigvals(jacobian(p, s)),
                     key=lambda v: (v.real, v.imag))
        scale = max(1.0, max(abs(complex(v)) for v in ref))
        for a, b in zip(mine, ref):
            assert abs(a - complex(b)) < 1e-7 * scale
