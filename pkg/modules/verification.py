"""Verification report model and the section-by-section orchestrator."""
import time
from dataclasses import dataclass, fields
from functools import partial

import numpy as np
from scipy import linalg
from scipy.stats import ortho_group

from modules.algebra_core import (
    SCHEMA_VERSION,
    basis_document,
    basis_hash,
    construct,
    real_rank,
    structure_tensor,
    theta_compatibility_residual,
    trace_form,
)
from modules.coercivity import (
    coercivity_constant,
    growth_report,
    integrated_radius,
    random_stress_frames,
    stress_energy_pairing,
)
from modules.errors import AlgebraSpecError, CentralizerError, VerificationError
from modules.geometry import (
    curvature_model,
    curvature_survey,
    einstein_constant,
    fiber_mean_curvature,
    fiber_second_fundamental_form,
    fit_table_scale,
    jacobi_operator,
    killing_field_residual,
    koszul_connection,
    metric_compatibility_residual,
    period_domain_space,
    sectional_curvature,
    symmetric_curvature_oracle,
    symmetric_space,
    torsion_residual,
)
from modules.grassmann_search import OptimizerConfig
from modules.harmonic_algebra import (
    FormCoefficients,
    horizontality_residual,
    horizontality_survey,
    invariant_harmonic_space,
    negative_control,
    random_forms,
    superposition_residual,
    vertical_constancy_check,
)
from modules.identity_suite import STATEMENTS, k_block_contraction, m_block_contraction, verify_identities
from modules.radial_comparison import (
    ComparisonParams,
    a_s_profile,
    comparison_check,
    laplacian_residual,
    log_grid,
    oracle_agreement,
    profile_from_spectrum,
    radial_hessian,
    random_directions,
    ricci_gap_check,
)

TOOLKIT_VERSION = "1.0.0"

SECTIONS = ("algebra", "identities", "curvature", "fibration", "harmonic", "comparison", "coercivity", "growth")
REQUIRES = {
    "algebra": (),
    "identities": ("algebra",),
    "curvature": ("algebra",),
    "fibration": ("algebra",),
    "harmonic": ("algebra",),
    "comparison": ("curvature",),
    "coercivity": ("comparison",),
    "growth": ("coercivity",),
}
TABLE_SECTIONS = {"curvature", "comparison", "coercivity", "growth"}
ORACLE_CURVATURES = (0.0, -0.5, -1.0, -2.0, -4.0)
SCALE_FACTORS = (0.5, 2.0, 7.0)
GROWTH_STEPS = (10.0, 100.0, 1000.0)

RELATIONS = {
    "<": lambda value, bound: value < bound,
    "<=": lambda value, bound: value <= bound,
    ">": lambda value, bound: value > bound,
    ">=": lambda value, bound: value >= bound,
    "==": lambda value, bound: value == bound,
}


def sections_for(requested):
    """Requested sections plus everything they depend on, in pipeline order."""
    needed = set()
    pending = list(requested)
    while pending:
        name = pending.pop()
        if name not in REQUIRES:
            raise AlgebraSpecError(f"Unknown section: {name}")
        if name not in needed:
            needed.add(name)
            pending.extend(REQUIRES[name])
    return [name for name in SECTIONS if name in needed]


@dataclass(frozen=True)
class VerificationSettings:
    samples: int = 100000
    restarts: int = 50
    max_iterations: int = 500
    gradient_tolerance: float = 1e-9
    directions: int = 200
    random_forms: int = 1000
    random_frames: int = 1000
    grid_points: int = 2000
    grid_min: float = 1e-3
    grid_max: float = 100.0
    riccati_rtol: float = 1e-10
    growth_threshold: float = 1.0
    profile_exports: int = 3
    seed: int = 0
    tol_scale: float = 1.0

    @classmethod
    def from_dict(cls, data):
        values = {}
        for f in fields(cls):
            if data and data.get(f.name) is not None:
                try:
                    values[f.name] = type(f.default)(data[f.name])
                except (TypeError, ValueError) as e:
                    raise AlgebraSpecError(f"Invalid verification setting {f.name}={data[f.name]!r}: {e}")
        settings = cls(**values)
        if settings.tol_scale <= 0:
            raise AlgebraSpecError(f"tol_scale must be positive, got {settings.tol_scale}")
        return settings

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @property
    def optimizer(self):
        return OptimizerConfig(
            restarts=self.restarts,
            max_iterations=self.max_iterations,
            gradient_tolerance=self.gradient_tolerance,
        )


@dataclass(frozen=True)
class CheckRecord:
    section: str
    name: str
    statement: str
    value: object
    bound: object
    relation: str
    passed: bool

    def to_dict(self):
        return {
            "section": self.section,
            "name": self.name,
            "statement": self.statement,
            "value": self.value,
            "bound": self.bound,
            "relation": self.relation,
            "passed": self.passed,
        }

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        value = f"{self.value:.6g}" if isinstance(self.value, float) else str(self.value)
        bound = f"{self.bound:.6g}" if isinstance(self.bound, float) else str(self.bound)
        return f"[{status}] {self.section}/{self.name}: {value} {self.relation} {bound}"


class VerificationReport:
    def __init__(self, spec, settings):
        self.spec = spec
        self.settings = settings
        self.records = []
        self.sections = {}
        self.timings = {}

    def record(self, section, name, statement, value, bound, relation="<", tolerance=False):
        """Append a check; `tolerance` bounds are multiplied by the configured tol_scale."""
        if isinstance(value, (np.bool_, bool)):
            value = bool(value)
        elif isinstance(value, (np.integer, int)):
            value = int(value)
        else:
            value = float(value)
        if tolerance:
            bound = bound * self.settings.tol_scale
        passed = bool(RELATIONS[relation](value, bound))
        check = CheckRecord(section, name, statement, value, bound, relation, passed)
        self.records.append(check)
        return check

    def fail(self, section, name, message):
        self.records.append(CheckRecord(section, name, message, False, True, "==", False))

    @property
    def passed(self):
        return bool(self.records) and all(record.passed for record in self.records)

    def section_passed(self, section):
        return all(record.passed for record in self.records if record.section == section)

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "toolkit_version": TOOLKIT_VERSION,
            "algebra": self.spec.to_dict(),
            "seed": self.settings.seed,
            "settings": self.settings.to_dict(),
            "sections": self.sections,
            "checks": [record.to_dict() for record in self.records],
            "passed": self.passed,
        }

    def summary(self):
        lines = [f"{self.spec.label}: {'PASS' if self.passed else 'FAIL'} ({len(self.records)} checks)"]
        lines += [record.line() for record in self.records]
        growth = self.sections.get("growth", {}).get("text")
        if growth:
            lines += ["", growth]
        return "\n".join(lines)


class Verifier:
    def __init__(self, spec, settings, logger):
        self.spec = spec
        self.settings = settings
        self.logger = logger  # Use the logger passed from the main script
        self.report = VerificationReport(spec, settings)
        self.pipeline = None
        self.curvature = None
        self.fit = None
        self.spectra = None
        self.profiles = None
        self.coercivity = None
        self.table_rows = []
        self.profile_rows = {}
        self.document = None

    def _seed(self, section):
        return np.random.SeedSequence([self.settings.seed, SECTIONS.index(section)])

    def _rng(self, section):
        return np.random.default_rng(self._seed(section))

    def run(self, requested=SECTIONS):
        sections = sections_for(requested)
        if not self.spec.table_applicable:
            if TABLE_SECTIONS.intersection(sections):
                raise AlgebraSpecError(
                    f"{self.spec.label}: q >= 2 is required by the curvature table hypotheses for SO(p,2q)/SO(p)xSO(2q)"
                )
            self.logger.warning(f"{self.spec.label}: q >= 2 is required for the curvature table to apply")
        completed = set()
        for section in sections:
            missing = [name for name in REQUIRES[section] if name not in completed]
            if missing:
                self.logger.warning(f"{self.spec.label}: skipping {section}, it needs {', '.join(missing)}")
                self.report.fail(section, "skipped", f"not run: prerequisite {', '.join(missing)} failed")
                continue
            self.logger.info(f"{self.spec.label}: running {section}")
            start = time.perf_counter()
            try:
                getattr(self, f"_{section}")()
                completed.add(section)
            except VerificationError as e:
                self.logger.error(f"{self.spec.label}: {section} failed: {e}")
                self.report.fail(section, "error", f"{type(e).__name__}: {e}")
            finally:
                self.report.timings[section] = time.perf_counter() - start
            status = "passed" if self.report.section_passed(section) else "FAILED"
            self.logger.info(f"{self.spec.label}: {section} {status} in {self.report.timings[section]:.2f}s")
        return self.report

    # --- sections -----------------------------------------------------------------------

    def _algebra(self):
        report, spec = self.report, self.spec
        pipeline = construct(spec)
        self.pipeline = pipeline
        basis, decomposition, cb, st = pipeline.basis, pipeline.decomposition, pipeline.canonical, pipeline.structure
        killing = decomposition.killing
        scale = max(1.0, float(np.max(np.abs(killing))))
        eigenvalues = linalg.eigvalsh(killing)

        add = partial(report.record, "algebra")
        add("dimension", "number of basis matrices equals the dimension formula", basis.dim, spec.dimension, "==")
        add("closure", "max |[X_a, X_b] - c_ab^c X_c|", basis.closure_residual, 1e-10, tolerance=True)
        add("independence", "smallest singular value of the flattened basis", basis.min_singular_value, 1e-10, ">")
        add("killing_symmetry", "max |B_ab - B_ba|", float(np.max(np.abs(killing - killing.T))), 1e-12 * scale,
            tolerance=True)
        add("killing_trace_oracle", "B(X, Y) equals the closed-form multiple of tr(XY)",
            float(np.max(np.abs(killing - trace_form(basis)))), 1e-10 * scale, tolerance=True)
        add("killing_positive_directions", "positive eigenvalues of B equal dim m",
            int(np.sum(eigenvalues > 0)), cb.n, "==")
        add("killing_negative_directions", "negative eigenvalues of B equal dim k",
            int(np.sum(eigenvalues < 0)), cb.r, "==")
        add("theta_compatibility", "max |B(theta X, theta Y) - B(X, Y)|",
            theta_compatibility_residual(decomposition), 1e-12 * scale, tolerance=True)
        add("compact_cartan", "rank G = rank K (the Cartan subgroup is compact)", pipeline.torus.compact_cartan, True, "==")
        add("centralizer_split", "dim v + dim(k minus v) = dim k", pipeline.centralizer.dim + cb.fiber_dim, cb.r, "==")
        add("standing_assumption", "r1 + r2 + 1 < r", cb.r1 + cb.r2 + 1, cb.r, "<")
        add("canonical_gram", "B-Gram of the canonical basis deviates from diag(+1, -1)", cb.gram_residual, 1e-10,
            tolerance=True)
        add("expansion", "least-squares residual of the bracket expansion", st.expansion_residual, 1e-10,
            tolerance=True)
        add("block_pattern", "only (k,k)->k, (m,m)->k, (m,k)->m brackets are nonzero", st.block_residual, 1e-10,
            tolerance=True)

        document = basis_document(pipeline)
        self.document = document
        report.sections["algebra"] = {key: value for key, value in document.items() if key != "matrices"}
        self.logger.info(
            f"{spec.label}: n={cb.n} r={cb.r} r1={cb.r1} r2={cb.r2} n1={cb.n1} basis {basis_hash(cb.matrices)}"
        )

    def _identities(self):
        st = self.pipeline.structure
        identities = verify_identities(st)
        for name, value in identities.residuals.items():
            self.report.record("identities", name, STATEMENTS[name], value, identities.tolerance, tolerance=True)

        cb = st.basis
        rng = self._rng("identities")
        worst = 0.0
        for _ in range(10):
            mixed = cb.remixed(
                m_rotation=_orthogonal(rng, cb.n),
                fiber_rotation=_orthogonal(rng, cb.fiber_dim),
                v_rotation=_orthogonal(rng, cb.dim - cb.n1),
            )
            remixed = structure_tensor(mixed)
            worst = max(
                worst,
                float(np.max(np.abs(m_block_contraction(remixed) - 0.5 * np.eye(cb.n)))),
                float(np.max(np.abs(k_block_contraction(remixed) - np.eye(cb.r)))),
            )
        self.report.record("identities", "remix_invariance",
                           "block contractions survive 10 orthogonal re-mixings of m, k minus v and v",
                           worst, identities.tolerance, tolerance=True)
        self.report.sections["identities"] = identities.to_dict()

    def _curvature(self):
        report, spec, settings = self.report, self.spec, self.settings
        st = self.pipeline.structure
        add = partial(report.record, "curvature")

        model = curvature_model(symmetric_space(st))
        self.curvature = model
        add("double_bracket_oracle", "R(X, Y)Z = -[[X, Y], Z] on m",
            float(np.max(np.abs(model.tensor - symmetric_curvature_oracle(st)))), 1e-10, tolerance=True)
        for name, value in model.symmetry_residuals.items():
            add(f"base_{name}", f"G/K curvature {name.replace('_', ' ')}", value, 1e-9, tolerance=True)
        total = curvature_model(period_domain_space(st))
        add("total_space_symmetries", "G/V curvature symmetries and first Bianchi",
            max(total.symmetry_residuals.values()), 1e-9, tolerance=True)

        survey = curvature_survey(
            model, settings.samples, settings.optimizer, seed=settings.seed, logger=self.logger
        )
        add("sign", "minK < 0 (noncompact type)", survey.min_k, 0.0, "<")
        add("nonpositive", "maxK <= 1e-6", survey.max_k, 1e-6, "<=", tolerance=True)
        add("einstein", "max |Ric - rho g|", survey.einstein_residual, 1e-8, tolerance=True)

        if real_rank(spec) >= 2:
            add("flat_witnesses", "planes with [X, Y] = 0 exist in rank >= 2", len(survey.flat_witnesses), 1, ">=")
            if survey.flat_witnesses:
                add("flat_sectional", "sectional curvature of the flat witnesses",
                    max(abs(w["sectional"]) for w in survey.flat_witnesses), 1e-8, tolerance=True)

        scale_gap = 0.0
        for factor in SCALE_FACTORS:
            scaled = model.rescaled(factor)
            frame = survey.min_frame
            k_scaled = sectional_curvature(scaled, frame[:, 0], frame[:, 1])
            rho_scaled, _ = einstein_constant(scaled)
            scale_gap = max(scale_gap, abs(k_scaled * factor - survey.min_k), abs(rho_scaled * factor - survey.rho))
        add("scale_covariance", "metric scale s divides K and Ric by s", scale_gap, 1e-12, tolerance=True)

        fit = fit_table_scale(survey, spec, logger=self.logger)
        self.fit = fit
        row = fit.row
        add("table_ricci", "fitted Ricci matches the table within 1%", fit.ricci_relative_error, 0.01, "<=")
        add("table_ratio", "minK / rho matches the table within 2%", fit.ratio_relative_error, 0.02, "<=")
        add("table_upper_bound", "fitted maxK does not exceed the table's upper bound",
            fit.upper_bound_error, 0.02 * abs(row.k_min), "<=")
        if row.k_max < 0:
            expected = row.k_max / row.ricci
            observed = survey.max_k / survey.rho
            add("table_upper_ratio", "maxK / rho matches the pinched row within 2%",
                abs(observed - expected) / expected, 0.02, "<=")
        if row.constant_curvature:
            add("constant_curvature", "sampled K spread after fit", fit.fitted_sample_std, 1e-6, tolerance=True)

        self.table_rows.append(fit.csv_row())
        report.sections["curvature"] = {"survey": survey.to_dict(), "table_fit": fit.to_dict()}

    def _fibration(self):
        st = self.pipeline.structure
        add = partial(self.report.record, "fibration")
        space = period_domain_space(st)
        gamma = koszul_connection(space)
        fiber = st.basis.fiber_indices
        killing = [killing_field_residual(space, s) for s in fiber]
        second = fiber_second_fundamental_form(space, gamma)
        mean = fiber_mean_curvature(space, gamma)

        add("metric_compatibility", "Gamma_ab^c + Gamma_ac^b = 0", metric_compatibility_residual(gamma), 1e-12,
            tolerance=True)
        add("torsion_free", "Gamma_ab^c - Gamma_ba^c = [X_a, X_b]_h", torsion_residual(space, gamma), 1e-10,
            tolerance=True)
        add("totally_geodesic_fibers", "max |<nabla_{X_s} X_t, X_i>|", second, 1e-10, tolerance=True)
        add("fiber_mean_curvature", "trace of the fiber second fundamental form",
            float(np.max(np.abs(mean))) if mean.size else 0.0, 1e-10, tolerance=True)
        add("killing_fields", "max over s of |L_{Pi_* X_s} g|", max(killing, default=0.0), 1e-10, tolerance=True)

        rng = self._rng("fibration")
        worst, tried = 0.0, 0
        for _ in range(3):
            xi = tuple(rng.uniform(0.5, 3.0, size=self.pipeline.torus.dim))
            try:
                other = construct(self.spec, xi).structure
            except CentralizerError as e:
                self.logger.warning(f"{self.spec.label}: random xi {xi} rejected: {e}")
                continue
            other_space = period_domain_space(other)
            worst = max(
                worst,
                fiber_second_fundamental_form(other_space),
                max((killing_field_residual(other_space, s) for s in other.basis.fiber_indices), default=0.0),
            )
            tried += 1
        add("xi_independence", f"fiber and Killing residuals for {tried} random generic xi", worst, 1e-10,
            tolerance=True)
        self.report.sections["fibration"] = {
            "fiber_dimension": int(fiber.size),
            "second_fundamental_form": second,
            "killing_residuals": killing,
            "random_xi_checked": tried,
        }

    def _harmonic(self):
        st = self.pipeline.structure
        settings = self.settings
        add = partial(self.report.record, "harmonic")
        space = invariant_harmonic_space(st)
        add("invariant_solutions", "dimension of constant solutions of the closed-form constraint", space.dimension,
            0, "==")
        add("constraint_conditioning", "smallest singular value of the constraint matrix", space.min_singular_value,
            0.1, ">")

        forms = random_forms(self._rng("harmonic"), st, settings.random_forms)
        add("horizontality", "max |sum c_jsi u_i u_j| over random forms and fiber indices",
            horizontality_survey(st, forms), 1e-12, tolerance=True)
        control = negative_control(st, forms)
        add("negative_control", "mirror-symmetrized tensor breaks horizontality", control, 0.01, ">=")
        if st.basis.fiber_dim:
            unit = FormCoefficients.from_vector(np.eye(st.basis.n1)[0], st.basis.n)
            add("single_component", "u = e_1 sees only c_1s1 = 0",
                horizontality_residual(st, unit, st.basis.fiber_indices[0]), 1e-12, tolerance=True)
        superposition = max(
            (superposition_residual(st, a, b, 2.0, -3.0) for a, b in zip(forms[:10], forms[10:20])), default=0.0
        )
        add("superposition", "constraint map is linear", superposition, 1e-12, tolerance=True)

        vertical = vertical_constancy_check(st)
        for entry in vertical.entries:
            add(entry["name"], entry["statement"], entry["passed"], True, "==")
        self.report.sections["harmonic"] = {
            "invariant_space": space.to_dict(),
            "negative_control": control,
            "vertical_constancy": vertical.to_dict(),
        }

    def _comparison(self):
        settings, fit = self.settings, self.fit
        add = partial(self.report.record, "comparison")
        fitted = self.curvature.rescaled(fit.metric_scale)
        n = fitted.dim
        params = ComparisonParams.from_table_fit(fit, n)
        grid = log_grid(settings.grid_points, settings.grid_min, settings.grid_max)

        directions = random_directions(self._rng("comparison"), n, settings.directions)
        self.spectra = [jacobi_operator(fitted, v) for v in directions]
        eigenvalues = np.concatenate([spectrum.eigenvalues for spectrum in self.spectra])
        add("jacobi_nonpositive", "radial curvatures are <= 0", float(eigenvalues.max()), 1e-9, "<=", tolerance=True)
        add("jacobi_pinching", "radial curvatures are >= -a^2", float(eigenvalues.min()), -params.a_sq - 1e-6, ">=")
        add("jacobi_symmetry", "max |<R(w,v)v, u> - <R(u,v)v, w>|",
            max(spectrum.symmetry_residual for spectrum in self.spectra), 1e-10, tolerance=True)

        oracle = max(oracle_agreement(k, grid, settings.riccati_rtol) for k in ORACLE_CURVATURES)
        add("riccati_oracle", "closed-form Hessian vs integrated Riccati equation (relative)", oracle, 1e-8,
            tolerance=True)
        reference = np.array([radial_hessian(k, grid) for k in ORACLE_CURVATURES])
        add("hessian_monotone_in_r", "lambda(r) is nonincreasing", float(np.max(np.diff(reference, axis=1))), 1e-12,
            "<=")
        add("hessian_monotone_in_curvature", "lambda grows with |K|", float(np.min(np.diff(reference, axis=0))),
            -1e-12, ">=")

        profiles = [profile_from_spectrum(spectrum, grid) for spectrum in self.spectra]
        self.profiles = profiles
        checks = [comparison_check(profile) for profile in profiles]
        a_profiles = [a_s_profile(profile, s) for profile in profiles for s in range(n - 1)]
        add("hessian_comparison", "min r lambda(r) >= 1", min(c.min_r_lambda for c in checks), 1.0 - 1e-9, ">=")
        add("radial_coefficient", "min (1/2 sum r lambda - 1/2) >= (n-2)/2", min(c.minimum for c in checks),
            (n - 2) / 2.0 - 1e-9, ">=")
        add("a_s_positive", "min A_s(r) over directions, indices and grid",
            min(float(a.values.min()) for a in a_profiles), 0.0, ">")
        add("a_s_differential_inequality", "min of (dA_s/dr + A_s Delta r) / max(1, |A_s Delta r|)",
            min(a.derivative_margin for a in a_profiles), -1e-6, ">=")
        add("laplacian_evolution", "d(Delta r)/dr = -Ric(dr, dr) - |Hess r|^2 (relative, finite differences)",
            max(laplacian_residual(profile) for profile in profiles), 1e-3, tolerance=True)
        gap = ricci_gap_check(fit)
        add("ricci_gap", "b^2 - 2a^2 >= 0", gap.gap, -1e-6, ">=")

        for index, profile in enumerate(profiles[: settings.profile_exports]):
            self.profile_rows[f"profiles/direction_{index:03d}.csv"] = profile.csv_rows()
        self.report.sections["comparison"] = {
            "a_sq": params.a_sq,
            "b_sq": params.b_sq,
            "n": n,
            "directions": len(profiles),
            "ricci_gap": gap.to_dict(),
            "radial_coefficient_min": min(c.minimum for c in checks),
            "a_s_normalized_margin": min(a.derivative_margin for a in a_profiles),
            "a_s_absolute_margin": min(a.absolute_margin for a in a_profiles),
        }

    def _coercivity(self):
        settings = self.settings
        add = partial(self.report.record, "coercivity")
        rng = self._rng("coercivity")
        worst, scaling = 0.0, 0.0
        for index in range(settings.random_frames):
            profile = self.profiles[index % len(self.profiles)]
            (frame,), (rotation,) = random_stress_frames(rng, profile, 1)
            pairing = stress_energy_pairing(frame, rotation)
            worst = max(worst, pairing.residual / max(1.0, abs(pairing.direct)))
            if index < 10:
                for factor in (2.0, 10.0):
                    scaled = stress_energy_pairing(frame.scaled(factor)).direct
                    scaling = max(scaling, abs(scaled - factor ** 2 * pairing.direct) / max(1.0, abs(scaled)))
        add("pairing_routes", "direct, grouped and rotated-frame pairings agree (relative)", worst, 1e-12,
            "<=", tolerance=True)
        add("pairing_scaling", "<S_{t omega}, nabla X> = t^2 <S_omega, nabla X>", scaling, 1e-12, "<=",
            tolerance=True)

        result = coercivity_constant(self.profiles)
        self.coercivity = result
        add("coercivity_constant", "C0 >= min((n-2)/2, 1/2)", result.constant, result.bound - 1e-6, ">=")
        refined_grid = log_grid(2 * settings.grid_points, settings.grid_min, settings.grid_max)
        refined = coercivity_constant([profile_from_spectrum(s, refined_grid) for s in self.spectra])
        add("grid_convergence", "C0 change under grid refinement", abs(refined.constant - result.constant), 1e-6,
            tolerance=True)
        self.report.sections["coercivity"] = result.to_dict()

    def _growth(self):
        add = partial(self.report.record, "growth")
        constant = self.coercivity.constant
        r0 = integrated_radius(self.coercivity, self.settings.growth_threshold)
        add("r0_reached", f"integrated coercivity reaches {self.settings.growth_threshold} on the grid",
            r0 is not None, True, "==")
        if r0 is None:
            return
        growth = growth_report(constant, r0, GROWTH_STEPS, logger=self.logger)
        expected = [2.0 * constant * np.log(step) for step in GROWTH_STEPS]
        add("partial_integrals", "int_R0^R 2C/R dR = 2C ln(R/R0)",
            float(np.max(np.abs(np.array(growth.partial_integrals) - expected))), 1e-12, "<=")
        add("conclusive", "C0 is large enough to force divergence", not growth.inconclusive, True, "==")
        section = growth.to_dict()
        section["text"] = growth.text()
        self.report.sections["growth"] = section


def _orthogonal(rng, size):
    # ortho_group needs dim >= 2
    if size <= 1:
        return np.eye(size)
    return ortho_group.rvs(size, random_state=rng)
