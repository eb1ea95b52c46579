"""Invariant-metric geometry of the reductive spaces G/K and G/V.

Tangent spaces are identified with the complement of the isotropy algebra inside
the canonical basis, on which the metric ds^2 = sum (omega^a)^2 has identity Gram
matrix. Curvature components are stored as R[a, b, c, d] = <R(X_a, X_b) X_c, X_d>
with R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y], so rank-one noncompact spaces have
negative sectional curvature.
"""
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import linalg

from modules.algebra_core import IDENTITY_TOL
from modules.errors import (
    AlgebraSpecError,
    CurvatureSymmetryError,
    DegeneratePlaneError,
    JacobiSymmetryError,
    NonReductiveError,
    ScaleFitError,
)
from modules.grassmann_search import OptimizerConfig, optimize_plane, orthonormal_frame, random_frames
from modules.logger import module_logger

log = module_logger(__name__)

SYMMETRY_TOL = 1e-9
ORTHONORMAL_TOL = 1e-10
FLAT_TOL = 1e-12


# --- homogeneous spaces -------------------------------------------------------

@dataclass(frozen=True)
class HomogeneousSpace:
    structure: object
    complement: np.ndarray
    isotropy: np.ndarray
    name: str
    invariance_residual: float

    @property
    def dim(self):
        return self.complement.size

    @property
    def label(self):
        return f"{self.structure.basis.spec.label} {self.name}"

    @property
    def metric(self):
        return np.eye(self.dim)

    def project_complement(self, coefficients):
        return np.asarray(coefficients)[..., self.complement]

    def project_isotropy(self, coefficients):
        return np.asarray(coefficients)[..., self.isotropy]

    def bracket_components(self):
        """c_ab^c restricted to complement x complement -> complement (the [ , ]_h projection)."""
        h = self.complement
        return self.structure.c_up[np.ix_(h, h, h)]


def _homogeneous(st, complement, isotropy, name):
    c = st.c_up
    h, iso = np.asarray(complement), np.asarray(isotropy)
    residuals = [0.0]
    if iso.size:
        action = c[np.ix_(iso, h, h)]
        residuals += [
            np.max(np.abs(c[np.ix_(iso, h, iso)])),
            np.max(np.abs(c[np.ix_(iso, iso, h)])),
            np.max(np.abs(action + action.transpose(0, 2, 1))),
        ]
    residual = float(max(residuals))
    if residual > IDENTITY_TOL:
        raise NonReductiveError(
            f"{st.basis.spec.label} {name}: complement is not Ad-invariant (residual {residual:.3e})"
        )
    return HomogeneousSpace(st, h, iso, name, residual)


def symmetric_space(st):
    """The base G/K with complement m."""
    return _homogeneous(st, st.basis.m_indices, st.basis.k_indices, "G/K")


def period_domain_space(st):
    """The total space G/V with complement m + (k minus v)."""
    return _homogeneous(st, st.basis.horizontal_indices, st.basis.v_indices, "G/V")


# --- connection and curvature ----------------------------------------------------

def koszul_connection(space):
    """Gamma[a, b, c] = <nabla_{X_a} X_b, X_c> from the Koszul formula with the bracket projected to h."""
    if space.invariance_residual > IDENTITY_TOL:
        raise NonReductiveError(f"{space.label}: connection requires a reductive complement")
    ch = space.bracket_components()
    # 2 Gamma_abc = c_ab^c - c_bc^a + c_ca^b
    return 0.5 * (ch - ch.transpose(2, 0, 1) + ch.transpose(1, 2, 0))


def metric_compatibility_residual(gamma):
    return float(np.max(np.abs(gamma + gamma.transpose(0, 2, 1)))) if gamma.size else 0.0


def torsion_residual(space, gamma):
    if not gamma.size:
        return 0.0
    return float(np.max(np.abs(gamma - gamma.transpose(1, 0, 2) - space.bracket_components())))


def curvature_symmetry_residuals(tensor):
    return {
        "antisymmetry_first_pair": float(np.max(np.abs(tensor + tensor.transpose(1, 0, 2, 3)))),
        "antisymmetry_second_pair": float(np.max(np.abs(tensor + tensor.transpose(0, 1, 3, 2)))),
        "pair_symmetry": float(np.max(np.abs(tensor - tensor.transpose(2, 3, 0, 1)))),
        "first_bianchi": float(
            np.max(np.abs(tensor + tensor.transpose(2, 0, 1, 3) + tensor.transpose(1, 2, 0, 3)))
        ),
    }


@dataclass(frozen=True)
class CurvatureModel:
    space: HomogeneousSpace
    gamma: np.ndarray
    tensor: np.ndarray
    symmetry_residuals: dict
    metric_scale: float = 1.0

    @property
    def dim(self):
        return self.tensor.shape[0]

    @property
    def label(self):
        return self.space.label

    @property
    def plane_matrix(self):
        """P[(a, d), (b, c)] = R[a, b, c, d], so K(x, y) = (x (x) x) . P . (y (x) y)."""
        n = self.dim
        return self.tensor.transpose(0, 3, 1, 2).reshape(n * n, n * n)

    def rescaled(self, factor):
        """Model for the metric multiplied by `factor` (components in its orthonormal frame)."""
        if factor <= 0:
            raise ValueError(f"metric scale must be positive, got {factor}")
        return replace(
            self,
            gamma=self.gamma / np.sqrt(factor),
            tensor=self.tensor / factor,
            metric_scale=self.metric_scale * factor,
        )


def curvature_tensor(space, gamma):
    h, iso = space.complement, space.isotropy
    c = space.structure.c_up
    ch = space.bracket_components()
    tensor = (
        np.einsum("bcd,ade->abce", gamma, gamma)
        - np.einsum("acd,bde->abce", gamma, gamma)
        - np.einsum("abd,dce->abce", ch, gamma)
    )
    if iso.size:
        tensor -= np.einsum("abd,dce->abce", c[np.ix_(h, h, iso)], c[np.ix_(iso, h, h)])

    residuals = curvature_symmetry_residuals(tensor)
    worst = max(residuals.values())
    if worst > SYMMETRY_TOL:
        raise CurvatureSymmetryError(f"{space.label}: curvature symmetry residual {worst:.3e} ({residuals})")
    return CurvatureModel(space, gamma, tensor, residuals)


def symmetric_curvature_oracle(st):
    """R(X, Y)Z = -[[X, Y], Z] on m, evaluated from double brackets."""
    m, k = st.basis.m_indices, st.basis.k_indices
    c = st.c_up
    return -np.einsum("abd,dce->abce", c[np.ix_(m, m, k)], c[np.ix_(k, m, m)])


def curvature_model(space):
    return curvature_tensor(space, koszul_connection(space))


def _check_plane(x, y):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    defects = (abs(x @ x - 1.0), abs(y @ y - 1.0), abs(x @ y))
    if max(defects) > ORTHONORMAL_TOL:
        raise DegeneratePlaneError(f"plane vectors are not orthonormal (|x|^2-1, |y|^2-1, x.y = {defects})")
    return x, y


def sectional_curvature(cm, x, y):
    x, y = _check_plane(x, y)
    return float(np.einsum("abcd,a,b,c,d->", cm.tensor, x, y, y, x))


def sectional_batch(plane_matrix, frames):
    """Sectional curvature of a stack of n x 2 orthonormal frames."""
    x, y = frames[:, :, 0], frames[:, :, 1]
    xx = np.einsum("sa,sb->sab", x, x).reshape(len(frames), -1)
    yy = np.einsum("sa,sb->sab", y, y).reshape(len(frames), -1)
    return np.sum((xx @ plane_matrix) * yy, axis=1)


def ricci_tensor(cm):
    return np.einsum("abca->bc", cm.tensor)


def einstein_constant(cm):
    """(rho, max |Ric - rho g|) with rho the mean Ricci eigenvalue."""
    ricci = ricci_tensor(cm)
    rho = float(np.trace(ricci) / cm.dim)
    return rho, float(np.max(np.abs(ricci - rho * np.eye(cm.dim))))


# --- Jacobi operator -------------------------------------------------------------------

@dataclass(frozen=True)
class JacobiSpectrum:
    direction: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    symmetry_residual: float


def jacobi_matrix(cm, v):
    """J with (J w)_d = <R(w, v)v, e_d>."""
    n = cm.dim
    v = np.asarray(v, dtype=float)
    return (cm.plane_matrix @ np.outer(v, v).ravel()).reshape(n, n).T


def jacobi_operator(cm, v):
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > ORTHONORMAL_TOL:
        raise DegeneratePlaneError(f"Jacobi direction must be a unit vector, |v| = {norm}")
    matrix = jacobi_matrix(cm, v)
    residual = float(np.max(np.abs(matrix - matrix.T)))
    if residual > SYMMETRY_TOL:
        raise JacobiSymmetryError(f"{cm.label}: Jacobi operator is not symmetric (residual {residual:.3e})")
    complement = linalg.null_space(v[None, :])
    eigenvalues, vectors = linalg.eigh(complement.T @ matrix @ complement)
    return JacobiSpectrum(v, eigenvalues, complement @ vectors, residual)


# --- plane objectives -------------------------------------------------------------------

class SectionalObjective:
    def __init__(self, cm):
        self.dim = cm.dim
        self.plane_matrix = cm.plane_matrix

    def __call__(self, frame):
        x, y = frame[:, 0], frame[:, 1]
        n = self.dim
        my = (self.plane_matrix @ np.outer(y, y).ravel()).reshape(n, n)
        mx = (self.plane_matrix.T @ np.outer(x, x).ravel()).reshape(n, n)
        value = x @ my @ x
        return value, np.column_stack([2.0 * my @ x, 2.0 * mx @ y])


class BracketNormObjective:
    """|[X, Y]|^2 for X, Y in m; vanishes exactly on flat planes of the symmetric space."""

    def __init__(self, st):
        m = st.basis.m_indices
        self.brackets = st.c_up[m][:, m, :]

    def __call__(self, frame):
        x, y = frame[:, 0], frame[:, 1]
        w = np.einsum("abk,a,b->k", self.brackets, x, y)
        grad_x = 2.0 * np.einsum("abk,b,k->a", self.brackets, y, w)
        grad_y = 2.0 * np.einsum("abk,a,k->b", self.brackets, x, w)
        return float(w @ w), np.column_stack([grad_x, grad_y])


# --- curvature survey -------------------------------------------------------------------

@dataclass
class CurvatureReport:
    label: str
    min_k: float
    max_k: float
    min_frame: np.ndarray
    max_frame: np.ndarray
    sample_count: int
    sample_min: float
    sample_max: float
    sample_std: float
    ricci_eigenvalues: np.ndarray
    rho: float
    einstein_residual: float
    flat_witnesses: list
    restarts: int
    nonconverged: list = field(default_factory=list)
    metric_scale: float = 1.0

    @property
    def ratio(self):
        return self.min_k / self.rho

    def to_dict(self):
        return {
            "space": self.label,
            "min_k": self.min_k,
            "max_k": self.max_k,
            "sample_count": self.sample_count,
            "sample_min": self.sample_min,
            "sample_max": self.sample_max,
            "sample_std": self.sample_std,
            "ricci_eigenvalues": [float(x) for x in self.ricci_eigenvalues],
            "rho": self.rho,
            "einstein_residual": self.einstein_residual,
            "min_k_over_rho": self.ratio,
            "flat_witnesses": self.flat_witnesses,
            "restarts": self.restarts,
            "nonconverged_restarts": self.nonconverged,
            "metric_scale": self.metric_scale,
        }


def _restart_starts(best_frames, count, rng, dim):
    starts = list(best_frames[: count // 2])
    if len(starts) < count:
        starts += list(random_frames(rng, count - len(starts), dim))
    return starts


def curvature_survey(cm, sample_count=100000, optimizer_config=None, seed=0, batch_size=5000, logger=None):
    """Estimate min/max sectional curvature of the base by sampling plus Grassmannian search."""
    logger = logger or log
    if cm.space.name != "G/K":
        raise ValueError(f"curvature survey needs the base space G/K, got {cm.label}")
    config = optimizer_config or OptimizerConfig()
    n = cm.dim
    sample_seed, restart_seed, flat_seed = np.random.SeedSequence(seed).spawn(3)
    rng = np.random.default_rng(sample_seed)

    plane_matrix = cm.plane_matrix
    keep = max(config.restarts, 1)
    values, low, high = [], [], []
    remaining = sample_count
    while remaining > 0:
        size = min(batch_size, remaining)
        frames = random_frames(rng, size, n)
        batch = sectional_batch(plane_matrix, frames)
        values.append(batch)
        order = np.argsort(batch, kind="stable")
        low += [(batch[i], frames[i]) for i in order[:keep]]
        high += [(batch[i], frames[i]) for i in order[::-1][:keep]]
        remaining -= size
    values = np.concatenate(values) if values else np.zeros(0)
    low = [frame for _, frame in sorted(low, key=lambda item: item[0])[:keep]]
    high = [frame for _, frame in sorted(high, key=lambda item: -item[0])[:keep]]

    objective = SectionalObjective(cm)
    best_min = (float(values.min()), low[0]) if values.size else (np.inf, None)
    best_max = (float(values.max()), high[0]) if values.size else (-np.inf, None)
    nonconverged = []
    for index, child in enumerate(restart_seed.spawn(config.restarts)):
        child_rng = np.random.default_rng(child)
        start_min = low[index] if index < min(len(low), config.restarts // 2) else random_frames(child_rng, 1, n)[0]
        start_max = high[index] if index < min(len(high), config.restarts // 2) else random_frames(child_rng, 1, n)[0]
        for direction, start, maximize in (("min", start_min, False), ("max", start_max, True)):
            result = optimize_plane(objective, start, config, maximize=maximize)
            if not result.converged:
                nonconverged.append({
                    "restart": index,
                    "direction": direction,
                    "iterations": result.iterations,
                    "gradient_norm": result.gradient_norm,
                })
            if maximize and result.value > best_max[0]:
                best_max = (result.value, result.frame)
            if not maximize and result.value < best_min[0]:
                best_min = (result.value, result.frame)

    if nonconverged:
        logger.warning(f"{cm.label}: {len(nonconverged)} of {2 * config.restarts} plane searches stopped before the gradient tolerance")

    rho, einstein_residual = einstein_constant(cm)
    witnesses = flat_plane_witnesses(cm, config, flat_seed)
    report = CurvatureReport(
        label=cm.label,
        min_k=float(best_min[0]),
        max_k=float(best_max[0]),
        min_frame=best_min[1],
        max_frame=best_max[1],
        sample_count=int(values.size),
        sample_min=float(values.min()) if values.size else float("nan"),
        sample_max=float(values.max()) if values.size else float("nan"),
        sample_std=float(values.std()) if values.size else float("nan"),
        ricci_eigenvalues=linalg.eigvalsh(ricci_tensor(cm)),
        rho=rho,
        einstein_residual=einstein_residual,
        flat_witnesses=witnesses,
        restarts=config.restarts,
        nonconverged=nonconverged,
        metric_scale=cm.metric_scale,
    )
    logger.info(f"{cm.label}: curvature survey minK={report.min_k:.6g} maxK={report.max_k:.6g} rho={rho:.6g}")
    return report


def flat_plane_witnesses(cm, config, seed_sequence, attempts=8):
    """Planes with [X, Y] = 0 found by minimizing the bracket norm; empty in rank one."""
    objective = BracketNormObjective(cm.space.structure)
    witnesses = []
    search = replace(config, max_iterations=max(config.max_iterations, 1000))
    for child in seed_sequence.spawn(attempts):
        start = random_frames(np.random.default_rng(child), 1, cm.dim)[0]
        result = optimize_plane(objective, start, search)
        if result.value < FLAT_TOL:
            frame = orthonormal_frame(result.frame)
            witnesses.append({
                "bracket_norm_sq": result.value,
                "sectional": sectional_curvature(cm, frame[:, 0], frame[:, 1]),
            })
    return witnesses


# --- curvature table ---------------------------------------------------------------------

@dataclass(frozen=True)
class TableRow:
    space_type: str
    k_min: float
    k_max: float
    ricci: float

    @property
    def constant_curvature(self):
        return self.k_min == self.k_max

    @property
    def ratio(self):
        return self.k_min / self.ricci

    def curvature_range(self):
        if self.constant_curvature:
            return f"K = {self.k_min:g}"
        return f"{self.k_min:g} <= K <= {self.k_max:g}"


def table_row(spec):
    if not spec.table_applicable:
        raise AlgebraSpecError(f"{spec.label}: the curvature table requires q >= 2 for SO(p,2q)/SO(p)xSO(2q)")
    if spec.family == "so":
        p, q = spec.param1, spec.param2
        ricci = -float(p + 2 * q - 2)
        if p == 1:
            return TableRow(f"SO(1,{2 * q})/SO({2 * q})", -1.0, -1.0, ricci)
        return TableRow(f"SO({p},{2 * q})/SO({p})xSO({2 * q})", -2.0, 0.0, ricci)
    m, n = spec.param1, spec.param2
    space_type = f"Sp({m},{n})/Sp({m})xSp({n})"
    ricci = -4.0 * (m + n + 1)
    if m == 1 and n == 1:
        return TableRow(space_type, -4.0, -4.0, ricci)
    if min(m, n) == 1:
        return TableRow(space_type, -4.0, -1.0, ricci)
    return TableRow(space_type, -4.0, 0.0, ricci)


@dataclass(frozen=True)
class TableFit:
    label: str
    row: TableRow
    scale: float
    fitted_min_k: float
    fitted_max_k: float
    fitted_ricci: float
    fitted_sample_std: float
    ricci_relative_error: float
    ratio: float
    ratio_relative_error: float
    upper_bound_error: float

    @property
    def metric_scale(self):
        return 1.0 / self.scale

    def to_dict(self):
        return {
            "space_type": self.row.space_type,
            "curvature_scale": self.scale,
            "metric_scale": self.metric_scale,
            "fitted_min_k": self.fitted_min_k,
            "fitted_max_k": self.fitted_max_k,
            "fitted_ricci": self.fitted_ricci,
            "fitted_sample_std": self.fitted_sample_std,
            "table_k_min": self.row.k_min,
            "table_k_max": self.row.k_max,
            "table_ricci": self.row.ricci,
            "ricci_relative_error": self.ricci_relative_error,
            "min_k_over_rho": self.ratio,
            "table_ratio": self.row.ratio,
            "ratio_relative_error": self.ratio_relative_error,
            "upper_bound_error": self.upper_bound_error,
        }

    def csv_row(self):
        return {
            "type": self.row.space_type,
            "algebra": self.label,
            "sec_curvature": f"{self.fitted_min_k:.6g} <= K <= {self.fitted_max_k:.6g}",
            "ricci_curvature": f"{self.fitted_ricci:.6g}",
            "table_sec_curvature": self.row.curvature_range(),
            "table_ricci_curvature": f"{self.row.ricci:g}",
        }


def fit_table_scale(report, spec, tolerance=0.01, logger=None):
    """Fix the curvature scale on minK, then cross-check the Ricci column against the table."""
    logger = logger or log
    row = table_row(spec)
    if not report.min_k < 0:
        raise ScaleFitError(f"{spec.label}: minK = {report.min_k:.3e} is not negative, no positive scale exists")
    scale = row.k_min / report.min_k
    fitted_ricci = scale * report.rho
    ricci_error = abs(fitted_ricci - row.ricci) / abs(row.ricci)
    if ricci_error > tolerance:
        raise ScaleFitError(
            f"{spec.label}: scale {scale:.6g} fitted on minK gives Ric = {fitted_ricci:.6g}, table value {row.ricci:g}"
        )
    fit = TableFit(
        label=spec.label,
        row=row,
        scale=scale,
        fitted_min_k=scale * report.min_k,
        fitted_max_k=scale * report.max_k,
        fitted_ricci=fitted_ricci,
        fitted_sample_std=scale * report.sample_std,
        ricci_relative_error=ricci_error,
        ratio=report.ratio,
        ratio_relative_error=abs(report.ratio - row.ratio) / abs(row.ratio),
        upper_bound_error=scale * report.max_k - row.k_max,
    )
    logger.info(f"{spec.label}: table fit scale={scale:.6g} Ric={fitted_ricci:.6g} (table {row.ricci:g})")
    return fit


# --- fibration -------------------------------------------------------------------------

def _fiber_positions(space):
    basis = space.structure.basis
    local = {index: position for position, index in enumerate(space.complement)}
    return np.array([local[i] for i in basis.fiber_indices]), np.array([local[i] for i in basis.m_indices])


def fiber_second_fundamental_form(space, gamma=None):
    """max |<nabla_{X_s} X_t, X_i>| over fiber s, t and base i in G/V."""
    gamma = koszul_connection(space) if gamma is None else gamma
    fiber, base = _fiber_positions(space)
    if not fiber.size:
        return 0.0
    return float(np.max(np.abs(gamma[np.ix_(fiber, fiber, base)])))


def fiber_mean_curvature(space, gamma=None):
    """Trace over the fiber of the second fundamental form, as a base vector."""
    gamma = koszul_connection(space) if gamma is None else gamma
    fiber, base = _fiber_positions(space)
    return np.einsum("ssi->i", gamma[np.ix_(fiber, fiber, base)])


def killing_field_residual(space, s):
    """max |(L_{X_s} g)(X_i1, X_j1)| = max |-c_{s i1}^{j1} - c_{s j1}^{i1}| over the G/V complement."""
    basis = space.structure.basis
    if s not in set(basis.fiber_indices.tolist()):
        raise IndexError(f"{s} is not a fiber index (fiber range {basis.index_ranges()['fiber']})")
    h = space.complement
    action = space.structure.c_up[s][np.ix_(h, h)]
    return float(np.max(np.abs(-action - action.T)))
