"""Extremal 2-plane search on the Grassmannian Gr(2, n) with pymanopt.

An objective receives an n x 2 orthonormal frame and returns (value, euclidean gradient);
its value must depend on the spanned plane only.
"""
from dataclasses import dataclass, fields

import numpy as np
import pymanopt
from pymanopt.optimizers.line_search import BackTrackingLineSearcher

from modules.logger import module_logger

log = module_logger(__name__)

STEP_SIZE_STOP = "step_size"


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 50
    max_iterations: int = 500
    gradient_tolerance: float = 1e-9
    initial_step: float = 1.0
    min_step: float = 1e-10
    armijo: float = 1e-4
    # gradient norm (relative to max(1, |value|)) accepted when the line search
    # can no longer resolve a decrease in float64
    stall_tolerance: float = 1e-5

    @classmethod
    def from_dict(cls, data):
        names = {f.name for f in fields(cls)}
        return cls(**{key: value for key, value in (data or {}).items() if key in names})

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class PlaneResult:
    value: float
    frame: np.ndarray
    iterations: int
    gradient_norm: float
    converged: bool
    stopping_criterion: str = ""


def orthonormal_frame(matrix):
    """QR orthonormalization with a positive R diagonal (works on stacks of n x 2 matrices)."""
    q, r = np.linalg.qr(matrix)
    signs = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    signs[signs == 0] = 1.0
    return q * signs[..., None, :]


def random_frames(rng, count, dim):
    return orthonormal_frame(rng.standard_normal((count, dim, 2)))


def plane_problem(objective, dim, maximize=False):
    """pymanopt problem on Gr(2, dim) for `objective`, negated when maximizing."""
    manifold = pymanopt.manifolds.Grassmann(dim, 2)
    sign = -1.0 if maximize else 1.0

    @pymanopt.function.numpy(manifold)
    def cost(point):
        return sign * objective(point)[0]

    @pymanopt.function.numpy(manifold)
    def euclidean_gradient(point):
        return sign * objective(point)[1]

    return pymanopt.Problem(manifold, cost, euclidean_gradient=euclidean_gradient)


def optimize_plane(objective, frame, config, maximize=False):
    frame = orthonormal_frame(np.asarray(frame, dtype=float))
    problem = plane_problem(objective, frame.shape[0], maximize)
    optimizer = pymanopt.optimizers.SteepestDescent(
        line_searcher=BackTrackingLineSearcher(
            sufficient_decrease=config.armijo, initial_step_size=config.initial_step
        ),
        max_iterations=config.max_iterations,
        min_gradient_norm=config.gradient_tolerance,
        min_step_size=config.min_step,
        max_cost_evaluations=50 * config.max_iterations,
        verbosity=0,
    )
    result = optimizer.run(problem, initial_point=frame)

    point = orthonormal_frame(result.point)
    value, gradient = objective(point)
    manifold = problem.manifold
    riemannian = manifold.euclidean_to_riemannian_gradient(point, gradient)
    norm = float(manifold.norm(point, riemannian))
    stalled = STEP_SIZE_STOP in result.stopping_criterion
    converged = norm <= config.gradient_tolerance or (
        stalled and norm <= config.stall_tolerance * max(1.0, abs(value))
    )
    if not converged:
        log.debug(f"plane search stopped after {result.iterations} iterations with gradient norm {norm:.2e}: "
                  f"{result.stopping_criterion}")
    return PlaneResult(float(value), point, int(result.iterations), norm, converged, result.stopping_criterion)
