from dataclasses import replace

import numpy as np
from numpy.testing import assert_allclose
import pytest
from scipy.stats import ortho_group

from modules.algebra_core import structure_tensor
from modules.identity_suite import (
    STATEMENTS,
    antisymmetry_residual,
    jacobi_residual,
    k_block_contraction,
    m_block_contraction,
    verify_identities,
)


def test_all_identities_hold(pipeline):
    report = verify_identities(pipeline.structure)
    assert report.all_passed, report.residuals
    assert set(report.residuals) == set(STATEMENTS)


def test_m_block_contraction_is_half_identity(pipeline_for):
    st = pipeline_for("so(1,4)").structure
    assert_allclose(m_block_contraction(st), 0.5 * np.eye(st.n), atol=1e-12)


def test_k_block_contraction_is_identity(pipeline_for):
    st = pipeline_for("sp(1,2)").structure
    assert_allclose(k_block_contraction(st), np.eye(st.r), atol=1e-10)


def test_lowered_constants_are_totally_antisymmetric(pipeline_for):
    st = pipeline_for("so(2,4)").structure
    assert antisymmetry_residual(st.c_low) < 1e-10
    assert jacobi_residual(st.c_up) < 1e-10


@pytest.mark.parametrize("seed", range(4))
def test_identities_survive_block_remixing(pipeline_for, seed):
    cb = pipeline_for("so(2,4)").canonical
    rng = np.random.default_rng(seed)
    mixed = cb.remixed(
        m_rotation=ortho_group.rvs(cb.n, random_state=rng),
        fiber_rotation=ortho_group.rvs(cb.fiber_dim, random_state=rng),
        v_rotation=ortho_group.rvs(cb.dim - cb.n1, random_state=rng),
    )
    assert verify_identities(structure_tensor(mixed)).all_passed


def test_perturbed_tensor_is_reported_not_raised(pipeline_for):
    st = pipeline_for("sp(1,1)").structure
    c_low = np.array(st.c_low)
    c_low[0, 1, 2] += 1e-3
    report = verify_identities(replace(st, c_low=c_low))
    assert not report.passed["total_antisymmetry"]
    assert not report.all_passed
    assert report.to_dict()["passed"] is False


def test_report_metadata(pipeline_for):
    report = verify_identities(pipeline_for("so(1,4)").structure).to_dict()
    assert report["metadata"]["algebra"]["label"] == "so(1,4)"
    assert report["metadata"]["lowering"] == "killing"
    assert len(report["metadata"]["basis_hash"]) == 16
    assert [check["name"] for check in report["checks"]] == list(STATEMENTS)
