"""Pointwise algebra of invariant harmonic 1-forms on G/V."""
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from modules.algebra_core import RANK_CUTOFF

HORIZONTALITY_TOL = 1e-12
NEGATIVE_CONTROL_FLOOR = 0.01
SINGULAR_VALUE_FLOOR = 0.1


@dataclass(frozen=True)
class FormCoefficients:
    """omega = u_i omega^i + u_s omega^s at a point, in the canonical coframe."""

    horizontal: np.ndarray
    fiber: np.ndarray

    @classmethod
    def from_vector(cls, vector, n):
        vector = np.asarray(vector, dtype=float)
        return cls(vector[:n].copy(), vector[n:].copy())

    @classmethod
    def zero(cls, n, fiber_dim):
        return cls(np.zeros(n), np.zeros(fiber_dim))

    @property
    def vector(self):
        return np.concatenate([self.horizontal, self.fiber])

    @property
    def norm_sq(self):
        return float(self.horizontal @ self.horizontal + self.fiber @ self.fiber)

    @property
    def is_zero(self):
        return not (np.any(self.horizontal) or np.any(self.fiber))


def random_forms(rng, st, count):
    """Forms with every coefficient uniform in [-1, 1]."""
    n, fiber_dim = st.basis.n, st.basis.fiber_dim
    values = rng.uniform(-1.0, 1.0, size=(count, n + fiber_dim))
    return [FormCoefficients.from_vector(row, n) for row in values]


# --- constant-coefficient solutions -------------------------------------------

def constraint_matrix(st):
    """Rows (c_{i1 i2}^{j1})_{j1} for i1 < i2 over the G/V complement."""
    h = st.basis.horizontal_indices
    first, second = np.triu_indices(h.size, k=1)
    return st.c_up[np.ix_(h, h, h)][first, second, :]


@dataclass(frozen=True)
class HarmonicSpace:
    dimension: int
    basis: np.ndarray
    singular_values: np.ndarray

    @property
    def min_singular_value(self):
        return float(self.singular_values.min()) if self.singular_values.size else 0.0

    def to_dict(self):
        return {
            "dimension": self.dimension,
            "min_singular_value": self.min_singular_value,
            "basis": self.basis.tolist(),
        }


def invariant_harmonic_space(st):
    """Constant u with c_{i1 i2}^{j1} u_{j1} = 0 for all i1 < i2 (the co-closed condition is automatic)."""
    matrix = constraint_matrix(st)
    _, singular, vt = linalg.svd(matrix)
    columns = matrix.shape[1]
    # pad: a wide matrix has fewer singular values than unknowns
    padded = np.zeros(columns)
    padded[: singular.size] = singular
    scale = max(1.0, padded[0]) if columns else 1.0
    rank = int(np.sum(padded > RANK_CUTOFF * scale))
    return HarmonicSpace(columns - rank, vt[rank:].copy(), padded)


def superposition_residual(st, first, second, alpha=1.0, beta=1.0):
    matrix = constraint_matrix(st)
    combined = matrix @ (alpha * first.vector + beta * second.vector)
    separate = alpha * (matrix @ first.vector) + beta * (matrix @ second.vector)
    return float(np.max(np.abs(combined - separate)))


# --- horizontality ---------------------------------------------------------------

def mirror_symmetrized(c_low):
    """Copy entries with first < third index onto their mirror; zero when first == third."""
    size = c_low.shape[0]
    upper = np.triu(np.ones((size, size), dtype=bool), k=1)
    kept = np.where(upper[:, None, :], c_low, 0.0)
    return kept + kept.transpose(2, 1, 0)


def horizontality_residual(st, form, s, c_low=None):
    """|sum_{i,j} c_{j s i} u_i u_j| over base indices i, j for fiber index s."""
    c_low = st.c_low if c_low is None else c_low
    m = st.basis.m_indices
    block = c_low[np.ix_(m, [s], m)][:, 0, :]
    u = form.horizontal
    return float(abs(u @ block @ u))


def horizontality_survey(st, forms, c_low=None):
    """Max horizontality residual over the given forms and every fiber index."""
    c_low = st.c_low if c_low is None else c_low
    basis = st.basis
    if not forms or not basis.fiber_dim:
        return 0.0
    u = np.array([form.horizontal for form in forms])
    block = c_low[np.ix_(basis.m_indices, basis.fiber_indices, basis.m_indices)]
    values = np.einsum("cj,jsi,ci->cs", u, block, u)
    return float(np.max(np.abs(values)))


def negative_control(st, forms):
    """Horizontality survey rerun on the mirror-symmetrized tensor; must be far from zero."""
    return horizontality_survey(st, forms, mirror_symmetrized(st.c_low))


# --- vertical constancy -------------------------------------------------------------

@dataclass
class VerticalConstancyReport:
    entries: list = field(default_factory=list)
    assumptions: list = field(default_factory=list)
    volume_witness: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(entry["passed"] for entry in self.entries)

    def to_dict(self):
        return {
            "entries": self.entries,
            "assumptions": self.assumptions,
            "volume_witness": self.volume_witness,
            "passed": self.passed,
        }


def vertical_constancy_check(st):
    """Logical record of why the fiber components of an L2 harmonic form vanish."""
    label = st.basis.spec.label
    eigenvalues = linalg.eigvalsh(st.gram_B)
    positive = int(np.sum(eigenvalues > RANK_CUTOFF))
    noncompact = positive > 0
    report = VerticalConstancyReport()
    report.volume_witness = {
        "killing_positive_directions": positive,
        "dim_m": st.basis.n,
        "noncompact": noncompact,
        "statement": f"B has {positive} positive eigenvalues, so G is noncompact and G/V has infinite volume",
    }
    report.assumptions = [
        {"name": "lie_derivative_vanishes", "statement": "L_{Pi_* X_s} omega = 0 for L2 harmonic omega (Yano-Bochner)"},
        {"name": "l2_hodge_representatives", "statement": "L2 cohomology classes have L2 harmonic representatives"},
    ]
    report.entries.append({
        "name": "fiber_component_constant",
        "statement": "i_{Pi_* X_s} omega = u_s is a constant function",
        "kind": "trivial",
        "passed": True,
    })
    report.entries.append({
        "name": "fiber_component_vanishes",
        "statement": f"{label}: u_s constant and |omega|^2 integrable and Vol = infinity imply u_s = 0",
        "kind": "logical",
        "passed": noncompact,
    })
    return report
