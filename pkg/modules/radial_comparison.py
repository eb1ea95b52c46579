"""Hessian of the distance function along radial geodesics of the base G/K.

On a symmetric space the Jacobi operator is parallel along geodesics, so each
eigen-direction obeys the scalar Riccati equation lambda' = -K - lambda^2 with
lambda ~ 1/r at the origin.
"""
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from modules.errors import ProfileError, RiccatiIntegrationError

MIN_DIMENSION = 4
SERIES_CUTOFF = 1e-4
CURVATURE_SLACK = 1e-9
DERIVATIVE_SLACK = 1e-6


@dataclass(frozen=True)
class ComparisonParams:
    """Curvature pinching -a^2 <= K <= 0 and Ric <= -b^2 of an n-dimensional base."""

    a_sq: float
    b_sq: float
    n: int

    def __post_init__(self):
        if self.a_sq < 0:
            raise ProfileError(f"a^2 must be nonnegative, got {self.a_sq}")
        if self.b_sq <= 0:
            raise ProfileError(f"b^2 must be positive, got {self.b_sq}")
        if self.n < MIN_DIMENSION:
            raise ProfileError(f"base dimension {self.n} < {MIN_DIMENSION}: A_s(0) > 0 needs n >= 4")

    @classmethod
    def from_table_fit(cls, fit, n):
        return cls(abs(fit.fitted_min_k), abs(fit.fitted_ricci), n)


def log_grid(points=2000, r_min=1e-3, r_max=100.0):
    if not 0 < r_min < r_max:
        raise ProfileError(f"invalid radial grid [{r_min}, {r_max}]")
    return np.geomspace(r_min, r_max, points)


def _check_curvature(curvature):
    if curvature > CURVATURE_SLACK:
        raise ProfileError(f"radial curvature {curvature:.3e} is positive")
    return min(float(curvature), 0.0)


def radial_hessian(curvature, r):
    """lambda = mu coth(mu r) with mu = sqrt(-K); 1/r when K = 0."""
    curvature = _check_curvature(curvature)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ProfileError("radial Hessian needs r > 0")
    mu = np.sqrt(-curvature)
    x = mu * r
    small = x < SERIES_CUTOFF
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = mu / np.tanh(x)
    series = 1.0 / r + mu ** 2 * r / 3.0 - mu ** 4 * r ** 3 / 45.0
    value = np.where(small, series, closed)
    return float(value) if value.ndim == 0 else value


def riccati_oracle(curvature, r_grid, r0=1e-4, rtol=1e-10, atol=1e-14):
    """Integrate the Riccati equation from the small-r series, in t = ln r and y = r lambda."""
    curvature = _check_curvature(curvature)
    r_grid = np.asarray(r_grid, dtype=float)
    if r_grid[0] < r0:
        raise ProfileError(f"grid starts at {r_grid[0]} below the initial radius {r0}")

    def rhs(t, y):
        r = np.exp(t)
        return y - y ** 2 - curvature * r ** 2

    y0 = 1.0 + (-curvature) * r0 ** 2 / 3.0
    times = np.log(r_grid)
    solution = solve_ivp(rhs, (np.log(r0), times[-1]), [y0], method="RK45", t_eval=times, rtol=rtol, atol=atol)
    if not solution.success:
        raise RiccatiIntegrationError(f"Riccati integration failed for K={curvature}: {solution.message}")
    return solution.y[0] / r_grid


def oracle_agreement(curvature, r_grid, rtol=1e-10):
    """Max relative gap between the closed form and the integrated oracle."""
    closed = radial_hessian(curvature, r_grid)
    oracle = riccati_oracle(curvature, r_grid, rtol=rtol)
    return float(np.max(np.abs(oracle - closed) / closed))


# --- profiles ------------------------------------------------------------------------

@dataclass(frozen=True)
class RadialProfile:
    direction: np.ndarray
    curvatures: np.ndarray
    grid: np.ndarray
    hessian: np.ndarray

    @property
    def n(self):
        return self.curvatures.size + 1

    @property
    def laplacian(self):
        return self.hessian.sum(axis=0)

    @property
    def a_values(self):
        """A_s(r) = sum_t lambda_t - 2 lambda_s, one row per tangential index."""
        return self.laplacian[None, :] - 2.0 * self.hessian

    def csv_rows(self):
        tangential = range(1, self.n)
        rows = []
        for position, r in enumerate(self.grid):
            row = {"r": repr(float(r))}
            row.update({f"lambda_{t}": repr(float(self.hessian[t - 1, position])) for t in tangential})
            row["laplacian"] = repr(float(self.laplacian[position]))
            row.update({f"A_{t}": repr(float(self.a_values[t - 1, position])) for t in tangential})
            rows.append(row)
        return rows


def radial_profile(curvatures, grid, direction=None):
    """Profile for the radial curvatures K_i (eigenvalues of the Jacobi operator on v-perp)."""
    curvatures = np.array([_check_curvature(k) for k in np.asarray(curvatures, dtype=float)])
    n = curvatures.size + 1
    if n < MIN_DIMENSION:
        raise ProfileError(f"base dimension {n} < {MIN_DIMENSION}: A_s(0) > 0 needs n >= 4")
    hessian = np.array([radial_hessian(k, grid) for k in curvatures])
    direction = np.zeros(n) if direction is None else np.asarray(direction, dtype=float)
    return RadialProfile(direction, curvatures, np.asarray(grid, dtype=float), hessian)


def profile_from_spectrum(spectrum, grid):
    return radial_profile(spectrum.eigenvalues, grid, spectrum.direction)


def random_directions(rng, dim, count):
    vectors = rng.standard_normal((count, dim))
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


# --- checks ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ASProfile:
    index: int
    values: np.ndarray
    positive: bool
    derivative_margin: float
    derivative_ok: bool
    # min of dA_s/dr + A_s Delta r without normalization
    absolute_margin: float


def a_s_profile(profile, s):
    """A_s on the grid, its positivity, and dA_s/dr >= -A_s Delta r by finite differences."""
    if profile.n < MIN_DIMENSION:
        raise ProfileError(f"base dimension {profile.n} < {MIN_DIMENSION}")
    values = profile.a_values[s]
    derivative = np.gradient(values, profile.grid, edge_order=2)
    damping = values * profile.laplacian
    raw = derivative + damping
    # finite-difference error grows with |A Delta r| near the origin
    margin = raw / np.maximum(1.0, np.abs(damping))
    worst = float(margin.min())
    return ASProfile(s, values, bool(np.all(values > 0)), worst, worst >= -DERIVATIVE_SLACK, float(raw.min()))


@dataclass(frozen=True)
class ComparisonResult:
    minimum: float
    bound: float
    min_r_lambda: float

    @property
    def passed(self):
        return self.minimum >= self.bound - CURVATURE_SLACK and self.min_r_lambda >= 1.0 - CURVATURE_SLACK


def radial_coefficient(profile):
    """1/2 sum_s r lambda_s - 1/2, the d/dr coefficient of the stress-energy pairing."""
    return 0.5 * (profile.grid * profile.laplacian) - 0.5


def comparison_check(profile):
    coefficient = radial_coefficient(profile)
    return ComparisonResult(
        minimum=float(coefficient.min()),
        bound=(profile.n - 2) / 2.0,
        min_r_lambda=float((profile.grid[None, :] * profile.hessian).min()),
    )


@dataclass(frozen=True)
class RicciGap:
    a_sq: float
    b_sq: float

    @property
    def gap(self):
        return self.b_sq - 2.0 * self.a_sq

    @property
    def passed(self):
        return self.gap >= -DERIVATIVE_SLACK

    def to_dict(self):
        return {"a_sq": self.a_sq, "b_sq": self.b_sq, "b_sq_minus_2a_sq": self.gap, "passed": self.passed}


def ricci_gap_check(fit):
    """b^2 - 2a^2 from the table-fitted curvature extremes."""
    return RicciGap(abs(fit.fitted_min_k), abs(fit.fitted_ricci))


def laplacian_residual(profile):
    """Relative gap between d(Delta r)/dr and -Ric(dr, dr) - |Hess r|^2 along the grid."""
    laplacian = profile.laplacian
    derivative = np.gradient(laplacian, profile.grid, edge_order=2)
    expected = -profile.curvatures.sum() - np.sum(profile.hessian ** 2, axis=0)
    return float(np.max(np.abs(derivative - expected) / np.maximum(1.0, np.abs(expected))))
