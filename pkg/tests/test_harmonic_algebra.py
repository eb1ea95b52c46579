import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st_
from hypothesis.extra.numpy import arrays

from conftest import build_pipeline
from modules.harmonic_algebra import (
    FormCoefficients,
    constraint_matrix,
    horizontality_residual,
    horizontality_survey,
    invariant_harmonic_space,
    mirror_symmetrized,
    negative_control,
    random_forms,
    superposition_residual,
    vertical_constancy_check,
)

coefficients = st_.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)


def test_no_invariant_harmonic_forms(pipeline):
    space = invariant_harmonic_space(pipeline.structure)
    assert space.dimension == 0
    assert space.min_singular_value > 0.1
    assert space.basis.shape == (0, pipeline.canonical.n1)


def test_constraint_matrix_shape(pipeline_for):
    st = pipeline_for("so(1,4)").structure
    n1 = st.basis.n1
    assert constraint_matrix(st).shape == (n1 * (n1 - 1) // 2, n1)


def test_superposition(pipeline_for, rng):
    st = pipeline_for("sp(1,2)").structure
    first, second = random_forms(rng, st, 2)
    assert superposition_residual(st, first, second, 0.3, -1.7) < 1e-12


def test_random_forms_are_horizontal_on_the_base(pipeline, rng):
    forms = random_forms(rng, pipeline.structure, 1000)
    assert horizontality_survey(pipeline.structure, forms) < 1e-12


def test_single_basis_form(pipeline_for):
    st = pipeline_for("so(2,4)").structure
    form = FormCoefficients.from_vector(np.eye(st.basis.n1)[0], st.basis.n)
    for s in st.basis.fiber_indices:
        assert horizontality_residual(st, form, int(s)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, 8, elements=coefficients))
def test_horizontality_holds_for_any_coefficients(values):
    st = build_pipeline("sp(1,2)").structure
    form = FormCoefficients(values, np.zeros(st.basis.fiber_dim))
    assert horizontality_survey(st, [form]) < 1e-12


def test_negative_control_detects_broken_antisymmetry(pipeline, rng):
    forms = random_forms(rng, pipeline.structure, 200)
    assert negative_control(pipeline.structure, forms) >= 0.01


def test_mirror_symmetrized_is_symmetric_in_outer_indices(pipeline_for):
    mirrored = mirror_symmetrized(pipeline_for("so(1,4)").structure.c_low)
    assert np.allclose(mirrored, mirrored.transpose(2, 1, 0))
    assert np.allclose(np.einsum("aba->ab", mirrored), 0.0)


def test_form_coefficients():
    form = FormCoefficients.from_vector([3.0, 0.0, 4.0], 2)
    assert form.norm_sq == 25.0
    assert list(form.vector) == [3.0, 0.0, 4.0]
    assert FormCoefficients.zero(4, 3).is_zero
    assert not form.is_zero


def test_vertical_constancy_record(pipeline_for):
    st = pipeline_for("so(2,4)").structure
    report = vertical_constancy_check(st)
    assert report.passed
    assert report.volume_witness["killing_positive_directions"] == st.basis.n
    assert {entry["kind"] for entry in report.entries} == {"trivial", "logical"}
    assert any("Yano-Bochner" in item["statement"] for item in report.assumptions)
    assert report.to_dict()["passed"] is True


@pytest.mark.parametrize("count", [0, 1])
def test_horizontality_survey_small_inputs(pipeline_for, rng, count):
    st = pipeline_for("sp(1,1)").structure
    assert horizontality_survey(st, random_forms(rng, st, count)) < 1e-12
