import json

import numpy as np
import pytest

from modules.algebra_core import (
    AlgebraSpec,
    _orthonormalize,
    allowed_block_mask,
    basis_document,
    basis_hash,
    build_algebra,
    canonical_basis,
    cartan_decompose,
    centralizer_subalgebra,
    construct,
    killing_form,
    killing_trace_factor,
    maximal_torus,
    real_rank,
    theta_compatibility_residual,
    trace_form,
)
from modules.errors import AlgebraSpecError, CentralizerError

# label -> (dim g, dim m, dim k)
DIMENSIONS = {
    "so(1,4)": (10, 4, 6),
    "so(2,4)": (15, 8, 7),
    "so(3,4)": (21, 12, 9),
    "sp(1,1)": (10, 4, 6),
    "sp(1,2)": (21, 8, 13),
    "sp(2,2)": (36, 16, 20),
}


def test_dimensions_and_closure(pipeline):
    dim, n, r = DIMENSIONS[pipeline.spec.label]
    assert pipeline.basis.dim == dim == pipeline.spec.dimension
    assert pipeline.canonical.n == n
    assert pipeline.canonical.r == r
    assert pipeline.basis.closure_residual < 1e-12
    assert pipeline.basis.min_singular_value > 1e-10


def test_killing_form_matches_trace_form(pipeline):
    killing = killing_form(pipeline.basis)
    assert np.max(np.abs(killing - killing.T)) < 1e-10
    assert np.max(np.abs(killing - trace_form(pipeline.basis))) < 1e-9 * max(1.0, np.abs(killing).max())


def test_killing_trace_factor():
    assert killing_trace_factor(AlgebraSpec("so", 1, 2)) == 3.0
    assert killing_trace_factor(AlgebraSpec("so", 3, 2)) == 5.0
    assert killing_trace_factor(AlgebraSpec("sp", 1, 2)) == 4.0


def test_killing_signature_so_2_4(pipeline_for):
    killing = killing_form(pipeline_for("so(2,4)").basis)
    eigenvalues = np.linalg.eigvalsh(killing)
    assert np.sum(eigenvalues > 0) == 8
    assert np.sum(eigenvalues < 0) == 7


def test_theta_preserves_killing_form(pipeline):
    residual = theta_compatibility_residual(pipeline.decomposition)
    assert residual < 1e-9 * max(1.0, np.abs(pipeline.decomposition.killing).max())


def test_compact_cartan_subgroup(pipeline):
    assert pipeline.torus.compact_cartan


def test_real_rank():
    assert real_rank(AlgebraSpec("so", 1, 2)) == 1
    assert real_rank(AlgebraSpec("so", 3, 2)) == 3
    assert real_rank(AlgebraSpec("sp", 2, 2)) == 2


def test_default_xi_centralizer_is_torus_sized(pipeline_for):
    pipeline = pipeline_for("so(2,4)")
    assert pipeline.torus.dim == 3
    assert pipeline.centralizer.dim == 3
    assert pipeline.canonical.n1 == 8 + 4
    assert pipeline.spec.xi == (1.0, 2.0, 3.0)


def test_xi_lies_in_its_centralizer(pipeline):
    inner = pipeline.decomposition.inner
    v_rows = _orthonormalize(pipeline.centralizer.v_rows, inner)
    xi = pipeline.centralizer.xi_row
    projected = (v_rows @ inner @ xi) @ v_rows
    assert np.linalg.norm(projected - xi) < 1e-9 * np.linalg.norm(xi)


def test_degenerate_xi_is_rejected():
    # xi in the so(2) factor alone is central in k
    with pytest.raises(CentralizerError):
        construct(AlgebraSpec("so", 2, 2), xi=(1.0, 0.0, 0.0))


def test_wrong_xi_length_is_rejected():
    with pytest.raises(CentralizerError):
        construct(AlgebraSpec("so", 1, 2), xi=(1.0,))


def test_canonical_gram_is_signature(pipeline):
    cb = pipeline.canonical
    gram = cb.coefficients @ pipeline.decomposition.killing @ cb.coefficients.T
    assert np.max(np.abs(gram - np.diag(cb.signature))) < 1e-10
    assert cb.gram_residual < 1e-10


def test_canonical_basis_is_idempotent(pipeline):
    cb, inner = pipeline.canonical, pipeline.decomposition.inner
    again = _orthonormalize(cb.coefficients, inner)
    assert np.max(np.abs(again - cb.coefficients)) < 1e-10


def test_index_ranges_cover_the_algebra(pipeline):
    ranges = pipeline.canonical.index_ranges()
    assert ranges["m"][0] == 0
    assert ranges["m"][1] == ranges["fiber"][0]
    assert ranges["fiber"][1] == ranges["v"][0]
    assert ranges["v"][1] == pipeline.basis.dim


def test_structure_constants_respect_cartan_blocks(pipeline):
    st = pipeline.structure
    forbidden = ~allowed_block_mask(st.n, st.dim)
    assert np.max(np.abs(st.c_up[forbidden])) < 1e-10
    assert np.max(np.abs(st.c_up + st.c_up.transpose(1, 0, 2))) < 1e-12
    assert np.allclose(st.gram_g, np.eye(st.dim))


def test_remixed_basis_keeps_blocks(pipeline_for, rng):
    cb = pipeline_for("sp(1,2)").canonical
    rotation, _ = np.linalg.qr(rng.standard_normal((cb.n, cb.n)))
    mixed = cb.remixed(m_rotation=rotation)
    assert mixed.n1 == cb.n1
    assert np.allclose(mixed.matrices[cb.n:], cb.matrices[cb.n:])
    assert not np.allclose(mixed.matrices[:cb.n], cb.matrices[:cb.n])


@pytest.mark.parametrize(
    "family, first, second",
    [("su", 1, 1), ("so", 0, 2), ("sp", 1, -1), ("so", "two", 2), ("so", 1.5, 2), ("sp", True, 1)],
)
def test_invalid_spec_raises(family, first, second):
    with pytest.raises(AlgebraSpecError):
        AlgebraSpec(family, first, second)


def test_from_dict_parameter_names():
    assert AlgebraSpec.from_dict({"family": "so", "p": 2, "q": 2}) == AlgebraSpec("so", 2, 2)
    assert AlgebraSpec.from_dict({"family": "SP", "m": 1, "n": 2}).label == "sp(1,2)"
    spec = AlgebraSpec.from_dict({"family": "so", "p": 2, "q": 2, "xi": [1, 2, 3]})
    assert spec.xi == (1.0, 2.0, 3.0)
    with pytest.raises(AlgebraSpecError):
        AlgebraSpec.from_dict({"family": "so", "p": 2})
    with pytest.raises(AlgebraSpecError):
        AlgebraSpec.from_dict({"p": 2, "q": 2})


def test_q_below_two_is_outside_the_table():
    assert not AlgebraSpec("so", 2, 1).table_applicable
    assert AlgebraSpec("so", 2, 2).table_applicable


def test_basis_document_is_json_ready_and_stable(pipeline_for):
    pipeline = pipeline_for("so(1,4)")
    document = basis_document(pipeline)
    text = json.dumps(document, sort_keys=True)
    assert json.loads(text)["dimension"] == 10
    assert document["index_ranges"] == {"m": [0, 4], "fiber": [4, 8], "v": [8, 10]}
    rebuilt = construct(AlgebraSpec("so", 1, 2))
    assert basis_hash(rebuilt.canonical.matrices) == document["basis_hash"]


def test_build_algebra_matrices_are_read_only():
    basis = build_algebra(AlgebraSpec("sp", 1, 1))
    with pytest.raises(ValueError):
        basis.matrices[0, 0, 0] = 1.0


def test_pipeline_stages_by_hand():
    spec = AlgebraSpec("sp", 1, 2)
    basis = build_algebra(spec)
    decomposition = cartan_decompose(basis, spec)
    assert decomposition.m_rows.shape[0] == 8
    assert np.allclose(decomposition.theta @ decomposition.theta, np.eye(basis.dim), atol=1e-12)
    torus = maximal_torus(decomposition, spec)
    centralizer = centralizer_subalgebra(decomposition, torus, (1.0, 2.0, 3.0))
    assert centralizer.dim == torus.dim == 3
    cb = canonical_basis(decomposition, centralizer)
    assert (cb.n, cb.r, cb.n1) == (8, 13, 18)
