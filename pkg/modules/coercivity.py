"""Stress-energy pairing with the radial field X = r d/dr and the resulting growth bound."""
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.stats import ortho_group

from modules.errors import CoercivityError, GrowthError, ProfileError
from modules.logger import module_logger
from modules.radial_comparison import radial_coefficient

log = module_logger(__name__)

PAIRING_TOL = 1e-12
COERCIVITY_SLACK = 1e-6
INCONCLUSIVE_BELOW = 1e-9
GROWTH_MULTIPLIERS = (10.0, 100.0, 1000.0)


@dataclass(frozen=True)
class StressEnergyFrame:
    """Hessian eigenvalues and form components at radius r, in the frame (d/dr, e_1, ..., e_{n-1})."""

    r: float
    hessian: np.ndarray
    u_r: float
    u_t: np.ndarray

    def __post_init__(self):
        if self.r <= 0:
            raise ProfileError(f"frame radius must be positive, got {self.r}")
        if np.shape(self.hessian) != np.shape(self.u_t):
            raise ProfileError(
                f"{np.size(self.hessian)} Hessian eigenvalues for {np.size(self.u_t)} tangential components"
            )

    @property
    def norm_sq(self):
        return float(self.u_r ** 2 + self.u_t @ self.u_t)

    @property
    def div_x(self):
        return float(1.0 + self.r * np.sum(self.hessian))

    @property
    def nabla_x(self):
        return np.diag(np.concatenate([[1.0], self.r * self.hessian]))

    def scaled(self, factor):
        return StressEnergyFrame(self.r, self.hessian, factor * self.u_r, factor * self.u_t)


def pairing_direct(frame):
    """1/2 |omega|^2 Div X - <omega (x) omega, nabla X>."""
    omega = np.concatenate([[frame.u_r], frame.u_t])
    return float(0.5 * frame.norm_sq * frame.div_x - omega @ frame.nabla_x @ omega)


def pairing_grouped(frame):
    """(1/2 sum r lambda - 1/2) u_r^2 + sum_s (1/2 + 1/2 sum r lambda - r lambda_s) u_s^2."""
    r_lambda = frame.r * frame.hessian
    total = r_lambda.sum()
    return float((0.5 * total - 0.5) * frame.u_r ** 2 + np.sum((0.5 + 0.5 * total - r_lambda) * frame.u_t ** 2))


def pairing_rotated(frame, rotation):
    """Same pairing with the tangential frame turned by `rotation` (non-diagonal Hessian)."""
    hessian = rotation.T @ np.diag(frame.hessian) @ rotation
    u_t = rotation.T @ frame.u_t
    norm_sq = frame.u_r ** 2 + u_t @ u_t
    div_x = 1.0 + frame.r * np.trace(hessian)
    return float(0.5 * norm_sq * div_x - frame.u_r ** 2 - frame.r * (u_t @ hessian @ u_t))


@dataclass(frozen=True)
class PairingResult:
    direct: float
    grouped: float
    rotated: float

    @property
    def residual(self):
        return max(abs(self.direct - self.grouped), abs(self.direct - self.rotated))

    @property
    def passed(self):
        return self.residual <= PAIRING_TOL * max(1.0, abs(self.direct))


def stress_energy_pairing(frame, rotation=None):
    rotation = np.eye(frame.u_t.size) if rotation is None else rotation
    return PairingResult(pairing_direct(frame), pairing_grouped(frame), pairing_rotated(frame, rotation))


def random_stress_frames(rng, profile, count):
    """Frames at random grid radii of `profile`, with form components uniform in [-1, 1]."""
    frames, rotations = [], []
    size = profile.n - 1
    for position in rng.integers(0, profile.grid.size, size=count):
        components = rng.uniform(-1.0, 1.0, size=profile.n)
        frames.append(StressEnergyFrame(
            float(profile.grid[position]), profile.hessian[:, position].copy(), float(components[0]), components[1:]
        ))
        rotations.append(ortho_group.rvs(size, random_state=rng))
    return frames, rotations


# --- coercivity constant ---------------------------------------------------------------

@dataclass(frozen=True)
class CoercivityResult:
    constant: float
    bound: float
    radial_min: float
    tangential_min: float
    argmin_r: float
    pointwise: np.ndarray = field(repr=False)
    grid: np.ndarray = field(repr=False)

    @property
    def passed(self):
        return self.constant >= self.bound - COERCIVITY_SLACK

    def to_dict(self):
        return {
            "constant": self.constant,
            "bound": self.bound,
            "radial_min": self.radial_min,
            "tangential_min": self.tangential_min,
            "argmin_r": self.argmin_r,
            "passed": self.passed,
        }


def tangential_coefficients(profile):
    """1/2 + 1/2 r A_s(r), one row per tangential index."""
    return 0.5 + 0.5 * profile.grid[None, :] * profile.a_values


def coercivity_constant(profiles):
    """C0 = min over grid and directions of the radial and tangential coefficients."""
    if not profiles:
        raise CoercivityError("no radial profiles given")
    grid = profiles[0].grid
    n = profiles[0].n
    radial = np.min([radial_coefficient(profile) for profile in profiles], axis=0)
    tangential = np.min([tangential_coefficients(profile).min(axis=0) for profile in profiles], axis=0)
    pointwise = np.minimum(radial, tangential)
    position = int(np.argmin(pointwise))
    constant = float(pointwise[position])
    if constant <= 0:
        raise CoercivityError(f"coercivity constant {constant:.6g} is not positive (at r = {grid[position]:.4g})")
    return CoercivityResult(
        constant=constant,
        bound=min((n - 2) / 2.0, 0.5),
        radial_min=float(radial.min()),
        tangential_min=float(tangential.min()),
        argmin_r=float(grid[position]),
        pointwise=pointwise,
        grid=grid,
    )


def integrated_radius(result, threshold=1.0):
    """Smallest grid radius where the integral of 2 c(r) / r from the grid start reaches `threshold`."""
    integral = cumulative_trapezoid(2.0 * result.pointwise / result.grid, result.grid, initial=0.0)
    reached = np.nonzero(integral >= threshold)[0]
    if not reached.size:
        return None
    return float(result.grid[reached[0]])


# --- growth report ----------------------------------------------------------------------

@dataclass
class GrowthReport:
    constant: float
    r0: float
    radii: list
    partial_integrals: list
    inconclusive: bool
    chain: list = field(default_factory=list)

    @property
    def conclusion(self):
        if self.inconclusive:
            return "inconclusive: the coercivity constant is too small to force divergence"
        return "no nonzero L2-harmonic 1-form is consistent with these constants"

    def to_dict(self):
        return {
            "constant": self.constant,
            "r0": self.r0,
            "radii": self.radii,
            "partial_integrals": self.partial_integrals,
            "inconclusive": self.inconclusive,
            "chain": self.chain,
            "conclusion": self.conclusion,
        }

    def text(self):
        lines = [f"growth bound with C = {self.constant:.6g}, R0 = {self.r0:.6g}"]
        lines += [f"  {step}" for step in self.chain]
        lines += [
            f"  int_R0^{radius:.6g} 2C/R dR = {value:.6f}"
            for radius, value in zip(self.radii, self.partial_integrals)
        ]
        lines.append(f"  conclusion: {self.conclusion}")
        return "\n".join(lines)


def growth_report(constant, r0, multipliers=GROWTH_MULTIPLIERS, logger=None):
    logger = logger or log
    if not constant > 0:
        raise GrowthError(f"coercivity constant must be positive, got {constant}")
    if not r0 > 0:
        raise GrowthError(f"R0 must be positive, got {r0}")
    radii = [float(m * r0) for m in multipliers]
    partial = [float(2.0 * constant * np.log(m)) for m in multipliers]
    chain = [
        "<S_omega, nabla X> >= C |omega|^2 pointwise",
        "R/2 int_{boundary D_R} |omega|^2 >= C int_{D_R} |omega|^2 >= C for R >= R0 (int_{D_R0} |omega|^2 = 1)",
        "int_{boundary D_R} |omega|^2 >= 2C/R for R >= R0",
        "int_R0^infinity 2C/R dR diverges, contradicting |omega| in L2 unless omega = 0",
    ]
    report = GrowthReport(constant, float(r0), radii, partial, constant < INCONCLUSIVE_BELOW, chain)
    logger.info(f"growth report: C={constant:.6g} R0={r0:.6g} {report.conclusion}")
    return report
