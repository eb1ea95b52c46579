import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import ortho_group

from modules.coercivity import (
    StressEnergyFrame,
    coercivity_constant,
    growth_report,
    integrated_radius,
    pairing_direct,
    pairing_grouped,
    random_stress_frames,
    stress_energy_pairing,
)
from modules.errors import CoercivityError, GrowthError, ProfileError
from modules.radial_comparison import log_grid, radial_hessian, radial_profile

GRID = log_grid(1000)
HH2_SPECTRUM = [-4.0, -4.0, -4.0, -1.0, -1.0, -1.0, -1.0]

unit = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


@st.composite
def frames(draw):
    size = draw(st.integers(min_value=3, max_value=7))
    r = draw(st.floats(min_value=1e-3, max_value=50.0))
    curvatures = draw(st.lists(st.floats(min_value=-4.0, max_value=0.0), min_size=size, max_size=size))
    hessian = np.array([radial_hessian(k, r) for k in curvatures])
    components = np.array(draw(st.lists(unit, min_size=size + 1, max_size=size + 1)))
    seed = draw(st.integers(min_value=0, max_value=2 ** 32 - 1))
    return StressEnergyFrame(r, hessian, float(components[0]), components[1:]), seed


@settings(max_examples=100, deadline=None)
@given(frames())
def test_pairing_routes_agree(drawn):
    frame, seed = drawn
    rotation = ortho_group.rvs(frame.u_t.size, random_state=np.random.default_rng(seed))
    result = stress_energy_pairing(frame, rotation)
    assert result.passed, (result.direct, result.grouped, result.rotated)


@settings(max_examples=50, deadline=None)
@given(frames(), st.floats(min_value=-10.0, max_value=10.0))
def test_pairing_is_quadratic(drawn, factor):
    frame, _ = drawn
    scaled = pairing_direct(frame.scaled(factor))
    assert scaled == pytest.approx(factor ** 2 * pairing_direct(frame), rel=1e-10, abs=1e-12)


def test_flat_pairing_equals_norm():
    r = 2.0
    frame = StressEnergyFrame(r, np.full(3, 1.0 / r), 1.0, np.zeros(3))
    assert pairing_direct(frame) == pytest.approx(1.0)
    frame = StressEnergyFrame(r, np.full(3, 1.0 / r), 0.6, np.array([0.0, 0.8, 0.0]))
    assert pairing_grouped(frame) == pytest.approx(frame.norm_sq)


def test_zero_form_pairs_to_zero():
    frame = StressEnergyFrame(1.0, np.array([1.3, 1.3, 1.3]), 0.0, np.zeros(3))
    assert stress_energy_pairing(frame).direct == 0.0


def test_frame_validation():
    with pytest.raises(ProfileError):
        StressEnergyFrame(0.0, np.ones(3), 1.0, np.ones(3))
    with pytest.raises(ProfileError):
        StressEnergyFrame(1.0, np.ones(3), 1.0, np.ones(2))


def test_random_stress_frames(rng):
    profile = radial_profile(HH2_SPECTRUM, GRID)
    frames_, rotations = random_stress_frames(rng, profile, 25)
    assert len(frames_) == len(rotations) == 25
    for frame, rotation in zip(frames_, rotations):
        assert frame.hessian.shape == (7,)
        assert np.allclose(rotation @ rotation.T, np.eye(7))
        assert stress_energy_pairing(frame, rotation).passed


def test_coercivity_constant_real_hyperbolic():
    profile = radial_profile([-1.0, -1.0, -1.0], GRID)
    result = coercivity_constant([profile])
    assert result.constant == pytest.approx(1.0, abs=1e-5)
    assert result.bound == 0.5
    assert result.passed
    assert result.argmin_r == GRID[0]


def test_coercivity_constant_flat_is_one():
    result = coercivity_constant([radial_profile([0.0, 0.0, 0.0], GRID)])
    assert result.constant == pytest.approx(1.0, abs=1e-12)


def test_coercivity_constant_quaternionic():
    profiles = [radial_profile(HH2_SPECTRUM, GRID), radial_profile([-2.0, -1.0, 0.0, -3.0, -1.0, -1.0, 0.0], GRID)]
    result = coercivity_constant(profiles)
    assert result.constant >= 0.5
    assert result.to_dict()["passed"] is True


def test_coercivity_is_grid_stable():
    spectrum = [-4.0, -1.0, -1.0, 0.0]
    coarse = coercivity_constant([radial_profile(spectrum, log_grid(1000))])
    fine = coercivity_constant([radial_profile(spectrum, log_grid(4000))])
    assert abs(coarse.constant - fine.constant) < 1e-6


def test_coercivity_needs_profiles():
    with pytest.raises(CoercivityError):
        coercivity_constant([])


def test_integrated_radius():
    result = coercivity_constant([radial_profile([0.0, 0.0, 0.0], GRID)])
    radius = integrated_radius(result, threshold=1.0)
    # c = 1 gives 2 ln(R / r_min) = 1
    assert radius == pytest.approx(GRID[0] * np.exp(0.5), rel=0.02)
    assert integrated_radius(result, threshold=1e6) is None


def test_growth_report_examples():
    report = growth_report(1.0, 1.0)
    assert report.radii == [10.0, 100.0, 1000.0]
    assert report.partial_integrals == pytest.approx([4.605170, 9.210340, 13.815511], abs=1e-6)
    assert not report.inconclusive
    assert "no nonzero L2-harmonic 1-form" in report.text()
    assert report.to_dict()["conclusion"] == report.conclusion


def test_growth_report_inconclusive_for_tiny_constant():
    assert growth_report(1e-12, 1.0).inconclusive


@pytest.mark.parametrize("constant, r0", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0)])
def test_growth_report_rejects_bad_constants(constant, r0):
    with pytest.raises(GrowthError):
        growth_report(constant, r0)


@settings(max_examples=50)
@given(st.floats(min_value=1e-6, max_value=10.0), st.floats(min_value=1e-3, max_value=1e3))
def test_growth_integrals_are_logarithmic(constant, r0):
    report = growth_report(constant, r0)
    assert np.allclose(np.diff(report.partial_integrals), 2.0 * constant * np.log(10.0))
    assert report.radii[0] == pytest.approx(10.0 * r0)
