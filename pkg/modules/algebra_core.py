"""Matrix realizations of so(p,2q) and sp(m,n), Cartan splitting and structure constants.

All algebras are stored as real dense matrices. Subspaces (m, k, v, the maximal
torus) are carried as rows of coefficients over the constructed MatrixBasis, so
the Killing form and the Cartan involution act on coefficient vectors and never
depend on how the matrices happen to be scaled.
"""
import hashlib
from dataclasses import dataclass, replace

import numpy as np
from scipy import linalg

from modules.errors import (
    AlgebraSpecError,
    CartanError,
    CentralizerError,
    ClosureError,
    DegenerateBasisError,
    StructureError,
)
from modules.logger import module_logger

log = module_logger(__name__)

# Tolerance ladder: construction, identities, rank decisions
CONSTRUCTION_TOL = 1e-12
IDENTITY_TOL = 1e-10
RANK_CUTOFF = 1e-8
CONDITION_LIMIT = 1e12

FAMILIES = ("so", "sp")
SCHEMA_VERSION = 1


def _frozen(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


def _null_rows(matrix, cutoff=RANK_CUTOFF):
    """Orthonormal rows spanning the null space of `matrix` (acting on column vectors)."""
    matrix = np.atleast_2d(matrix)
    _, singular, vt = linalg.svd(matrix)
    scale = max(1.0, singular[0]) if singular.size else 1.0
    rank = int(np.sum(singular > cutoff * scale))
    return vt[rank:].copy()


@dataclass(frozen=True)
class AlgebraSpec:
    """A real matrix Lie algebra so(p,2q) (param1=p, param2=q) or sp(m,n) (param1=m, param2=n)."""

    family: str
    param1: int
    param2: int
    xi: tuple = None

    def __post_init__(self):
        family = str(self.family).strip().lower()
        if family not in FAMILIES:
            raise AlgebraSpecError(f"Unsupported algebra family: {self.family!r} (expected 'so' or 'sp')")
        object.__setattr__(self, "family", family)

        for name, value in (("param1", self.param1), ("param2", self.param2)):
            label = self.parameter_names[name == "param2"]
            try:
                integral = not isinstance(value, bool) and float(value).is_integer()
            except (TypeError, ValueError):
                integral = False
            if not integral or int(float(value)) < 1:
                raise AlgebraSpecError(f"{label} must be a positive integer, got {value!r}")
            object.__setattr__(self, name, int(float(value)))

        if self.xi is not None:
            object.__setattr__(self, "xi", tuple(float(x) for x in self.xi))

        if family == "so" and self.param1 + 2 * self.param2 < 3:
            raise AlgebraSpecError(f"{self.label} is not semisimple (p+2q < 3)")
        if family == "sp" and self.param1 + self.param2 < 2:
            raise AlgebraSpecError(f"{self.label} is trivial (m+n < 2)")

    @classmethod
    def from_dict(cls, data):
        """Build a spec from a config mapping such as {"family": "so", "p": 2, "q": 2, "xi": [1, 2, 3]}."""
        try:
            family = str(data["family"]).lower()
            if family == "so":
                first, second = data.get("p", data.get("param1")), data.get("q", data.get("param2"))
            else:
                first, second = data.get("m", data.get("param1")), data.get("n", data.get("param2"))
        except (KeyError, TypeError, AttributeError) as e:
            raise AlgebraSpecError(f"Invalid algebra config {data!r}: missing {e}")
        if first is None or second is None:
            raise AlgebraSpecError(f"Invalid algebra config {data!r}: both parameters are required")
        return cls(family, first, second, data.get("xi"))

    @property
    def parameter_names(self):
        return ("p", "q") if self.family == "so" else ("m", "n")

    @property
    def label(self):
        if self.family == "so":
            return f"so({self.param1},{2 * self.param2})"
        return f"sp({self.param1},{self.param2})"

    @property
    def matrix_size(self):
        if self.family == "so":
            return self.param1 + 2 * self.param2
        return 4 * (self.param1 + self.param2)

    @property
    def dimension(self):
        if self.family == "so":
            size = self.param1 + 2 * self.param2
            return size * (size - 1) // 2
        size = self.param1 + self.param2
        return size * (2 * size + 1)

    @property
    def table_applicable(self):
        return self.family == "sp" or self.param2 >= 2

    def with_xi(self, xi):
        return replace(self, xi=None if xi is None else tuple(xi))

    def to_dict(self):
        first, second = self.parameter_names
        data = {"family": self.family, first: self.param1, second: self.param2, "label": self.label}
        data["xi"] = None if self.xi is None else list(self.xi)
        return data


# --- quaternions -----------------------------------------------------------

QUATERNION_UNITS = np.eye(4)  # 1, i, j, k


def hamilton_product(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.array([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ])


def quaternion_matrix(q):
    """Real 4x4 matrix of left multiplication by q (coefficients over 1, i, j, k)."""
    return np.column_stack([hamilton_product(q, unit) for unit in QUATERNION_UNITS])


# --- bases ------------------------------------------------------------------

def _so_generators(p, q):
    size = p + 2 * q
    generators = []
    for a in range(size):
        for b in range(a + 1, size):
            x = np.zeros((size, size))
            x[a, b] = 1.0
            # rotations inside a block, boosts across the two blocks
            x[b, a] = -1.0 if (a < p) == (b < p) else 1.0
            generators.append(x)
    return generators


def _sp_generators(m, n):
    size = m + n
    generators = []
    for a in range(size):
        for b in range(a, size):
            for unit in range(4):
                if a == b and unit == 0:
                    continue
                block = quaternion_matrix(QUATERNION_UNITS[unit])
                x = np.zeros((4 * size, 4 * size))
                x[4 * a:4 * a + 4, 4 * b:4 * b + 4] = block
                if a != b:
                    sign = -1.0 if (a < m) == (b < m) else 1.0
                    x[4 * b:4 * b + 4, 4 * a:4 * a + 4] = sign * block.T
                generators.append(x)
    return generators


def involution_signature(spec):
    """Diagonal of eta, with X^T eta + eta X = 0 defining the algebra and theta(X) = eta X eta."""
    first = np.ones(spec.param1)
    if spec.family == "so":
        return np.concatenate([first, -np.ones(2 * spec.param2)])
    return np.kron(np.concatenate([first, -np.ones(spec.param2)]), np.ones(4))


def bracket_table(matrices):
    """All commutators [X_a, X_b] as an array of shape (D, D, N, N)."""
    products = np.einsum("aij,bjk->abik", matrices, matrices)
    return products - products.transpose(1, 0, 2, 3)


def expand_in_basis(matrices, targets):
    """Least-squares coefficients of `targets` (..., N, N) over `matrices` via the basis Gram matrix.

    Returns the coefficient array of shape targets.shape[:-2] + (D,) and the max-norm
    residual of the reconstruction.
    """
    dim = matrices.shape[0]
    flat = matrices.reshape(dim, -1)
    lead_shape = targets.shape[:-2]
    target_flat = targets.reshape(-1, flat.shape[1])
    gram = flat @ flat.T
    coefficients = linalg.solve(gram, flat @ target_flat.T, assume_a="pos").T
    residual = float(np.max(np.abs(coefficients @ flat - target_flat))) if target_flat.size else 0.0
    return coefficients.reshape(lead_shape + (dim,)), residual


def killing_gram(structure):
    """B_ab = trace(ad X_a ad X_b) = c_ae^f c_bf^e from a structure-constant array c[a, b, e]."""
    return np.einsum("aef,bfe->ab", structure, structure)


@dataclass(frozen=True)
class MatrixBasis:
    spec: AlgebraSpec
    matrices: np.ndarray
    structure: np.ndarray
    closure_residual: float
    min_singular_value: float

    @property
    def dim(self):
        return self.matrices.shape[0]

    def combine(self, rows):
        """Matrices sum_b rows[a, b] X_b for coefficient rows."""
        return np.einsum("ab,bij->aij", np.atleast_2d(rows), self.matrices)

    def ad(self, row):
        """Row-convention matrix of ad(x): (x_row @ A) gives the coefficients of [x, .]."""
        return np.einsum("a,abe->be", row, self.structure)


def build_algebra(spec):
    """Closed, linearly independent real matrix basis of so(p,2q) or sp(m,n)."""
    if spec.family == "so":
        generators = _so_generators(spec.param1, spec.param2)
    else:
        generators = _sp_generators(spec.param1, spec.param2)
    matrices = np.array(generators)

    if matrices.shape[0] != spec.dimension:
        raise ClosureError(f"{spec.label}: generated {matrices.shape[0]} matrices, expected dimension {spec.dimension}")

    eta = involution_signature(spec)
    defining = np.einsum("aji,j->aij", matrices, eta) + eta[None, :, None] * matrices
    if np.max(np.abs(defining)) > CONSTRUCTION_TOL:
        raise ClosureError(f"{spec.label}: generator violates X^T eta + eta X = 0")

    singular = linalg.svdvals(matrices.reshape(matrices.shape[0], -1))
    if singular[-1] <= 1e-10:
        raise DegenerateBasisError(f"{spec.label}: basis matrices are linearly dependent (sigma_min={singular[-1]:.3e})")

    structure, residual = expand_in_basis(matrices, bracket_table(matrices))
    if residual >= IDENTITY_TOL:
        raise ClosureError(f"{spec.label}: bracket closure residual {residual:.3e} exceeds {IDENTITY_TOL}")

    log.debug(f"{spec.label}: built basis of {matrices.shape[0]} matrices, closure residual {residual:.2e}")
    return MatrixBasis(spec, _frozen(matrices), _frozen(structure), residual, float(singular[-1]))


def killing_form(basis):
    """Killing Gram matrix of the basis, computed from adjoint operators."""
    return killing_gram(basis.structure)


def killing_trace_factor(spec):
    """c with B(X, Y) = c tr(XY) in the real matrix realization."""
    if spec.family == "so":
        return float(spec.matrix_size - 2)
    # sp(N) realized in R^{4N}: B = (2N + 2) Re tr_H = (N + 1) tr_R
    return float(spec.param1 + spec.param2 + 1)


def trace_form(basis):
    """Closed-form Killing Gram matrix c tr(X_a X_b), an oracle for killing_form."""
    return killing_trace_factor(basis.spec) * np.einsum("aij,bji->ab", basis.matrices, basis.matrices)


def real_rank(spec):
    """Real rank of G/K: the dimension of its maximal flats."""
    if spec.family == "so":
        return min(spec.param1, 2 * spec.param2)
    return min(spec.param1, spec.param2)


# --- Cartan decomposition ----------------------------------------------------

@dataclass(frozen=True)
class CartanDecomposition:
    basis: MatrixBasis
    killing: np.ndarray
    theta: np.ndarray
    m_rows: np.ndarray
    k_rows: np.ndarray

    @property
    def inner(self):
        """Positive form <x, y> = -B(x, theta y) in row convention."""
        form = -self.killing @ self.theta.T
        return 0.5 * (form + form.T)

    @property
    def m_basis(self):
        return self.basis.combine(self.m_rows)

    @property
    def k_basis(self):
        return self.basis.combine(self.k_rows)


def cartan_decompose(basis, spec):
    """Split g = k + m along the Cartan involution theta(X) = eta X eta."""
    eta = involution_signature(spec)
    images = eta[None, :, None] * basis.matrices * eta[None, None, :]
    theta, residual = expand_in_basis(basis.matrices, images)
    if residual > IDENTITY_TOL:
        raise CartanError(f"{spec.label}: theta does not preserve the algebra (residual {residual:.3e})")

    identity = np.eye(basis.dim)
    k_rows = _null_rows((theta - identity).T)
    m_rows = _null_rows((theta + identity).T)
    if k_rows.shape[0] + m_rows.shape[0] != basis.dim:
        raise CartanError(f"{spec.label}: theta eigenspaces have dimensions {k_rows.shape[0]} + {m_rows.shape[0]} != {basis.dim}")

    killing = killing_form(basis)
    on_k = linalg.eigvalsh(k_rows @ killing @ k_rows.T)
    on_m = linalg.eigvalsh(m_rows @ killing @ m_rows.T) if m_rows.size else np.array([1.0])
    if on_k.max() >= 0 or on_m.min() <= 0:
        raise CartanError(
            f"{spec.label}: Killing form is not definite on the blocks "
            f"(max on k {on_k.max():.3e}, min on m {on_m.min():.3e}); wrong involution"
        )
    return CartanDecomposition(basis, _frozen(killing), _frozen(theta), _frozen(m_rows), _frozen(k_rows))


@dataclass(frozen=True)
class MaximalTorus:
    rows: np.ndarray
    centralizer_dim_k: int
    centralizer_dim_g: int

    @property
    def dim(self):
        return self.rows.shape[0]

    @property
    def compact_cartan(self):
        return self.centralizer_dim_g == self.dim


def _torus_generators(spec):
    size = spec.matrix_size
    generators = []
    if spec.family == "so":
        p, width = spec.param1, 2 * spec.param2
        for start, block in ((0, p), (p, width)):
            for a in range(start, start + block - 1, 2):
                x = np.zeros((size, size))
                x[a, a + 1], x[a + 1, a] = 1.0, -1.0
                generators.append(x)
    else:
        unit_i = quaternion_matrix(QUATERNION_UNITS[1])
        for a in range(spec.param1 + spec.param2):
            x = np.zeros((size, size))
            x[4 * a:4 * a + 4, 4 * a:4 * a + 4] = unit_i
            generators.append(x)
    return np.array(generators)


def _centralizer_dim(basis, row, subspace_rows):
    action = subspace_rows @ basis.ad(row)
    return _null_rows(action.T).shape[0]


def maximal_torus(decomposition, spec):
    """Maximal torus of k, validated as abelian, maximal in k, and a Cartan subalgebra of g."""
    basis = decomposition.basis
    rows, residual = expand_in_basis(basis.matrices, _torus_generators(spec))
    if residual > IDENTITY_TOL:
        raise CartanError(f"{spec.label}: torus generators are not in the algebra")

    m_part = rows @ decomposition.inner @ decomposition.m_rows.T if decomposition.m_rows.size else np.zeros(1)
    if np.max(np.abs(m_part)) > IDENTITY_TOL:
        raise CartanError(f"{spec.label}: torus generators leave k")

    brackets = np.einsum("sa,tb,abe->ste", rows, rows, basis.structure)
    if np.max(np.abs(brackets)) > IDENTITY_TOL:
        raise CartanError(f"{spec.label}: torus generators do not commute")

    weights = np.sqrt(np.array([2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37], dtype=float))[: rows.shape[0]]
    generic = weights @ rows
    dim_k = _centralizer_dim(basis, generic, decomposition.k_rows)
    dim_g = _centralizer_dim(basis, generic, np.eye(basis.dim))
    if dim_k != rows.shape[0]:
        raise CartanError(f"{spec.label}: torus of dimension {rows.shape[0]} is not maximal in k (centralizer {dim_k})")
    if dim_g != rows.shape[0]:
        raise CartanError(f"{spec.label}: rank G != rank K, the Cartan subgroup is not compact")
    return MaximalTorus(_frozen(rows), dim_k, dim_g)


def default_xi(torus):
    return tuple(float(j + 1) for j in range(torus.dim))


@dataclass(frozen=True)
class Centralizer:
    xi: tuple
    xi_row: np.ndarray
    v_rows: np.ndarray
    r: int
    r1: int
    r2: int

    @property
    def dim(self):
        return self.v_rows.shape[0]


def centralizer_subalgebra(decomposition, torus, xi=None):
    """v = {X in k : [xi, X] = 0} for xi given as coefficients over the maximal-torus basis."""
    xi = default_xi(torus) if xi is None else tuple(float(x) for x in xi)
    if len(xi) != torus.dim:
        raise CentralizerError(f"xi has {len(xi)} coefficients, the maximal torus has dimension {torus.dim}")
    xi_row = np.asarray(xi) @ torus.rows
    if np.linalg.norm(xi_row) <= RANK_CUTOFF:
        raise CentralizerError("xi must be nonzero")

    basis = decomposition.basis
    action = decomposition.k_rows @ basis.ad(xi_row)
    v_rows = _null_rows(action.T) @ decomposition.k_rows

    r = decomposition.k_rows.shape[0]
    r1 = torus.dim - 1
    r2 = v_rows.shape[0] - torus.dim
    if r1 + r2 + 1 >= r:
        raise CentralizerError(f"degenerate xi={list(xi)}: dim v = {v_rows.shape[0]} equals dim k = {r}, k minus v is empty")
    return Centralizer(xi, _frozen(xi_row), _frozen(v_rows), r, r1, r2)


# --- canonical basis -------------------------------------------------------------

def _check_condition(rows, inner, block):
    if rows.shape[0] == 0:
        return
    gram = rows @ inner @ rows.T
    condition = np.linalg.cond(gram)
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise DegenerateBasisError(f"{block}-block Gram matrix is near-degenerate (condition number {condition:.3e})")


def _orthonormalize(rows, inner, against=()):
    """Modified Gram-Schmidt (two passes) in the inner product `inner`, dropping dependent rows."""
    accepted = [np.asarray(b) for b in against]
    start = len(accepted)
    for vector in rows:
        w = np.array(vector, dtype=float)
        for _ in range(2):
            for b in accepted:
                w = w - (w @ inner @ b) * b
        norm = np.sqrt(max(w @ inner @ w, 0.0))
        if norm <= RANK_CUTOFF:
            continue
        accepted.append(w / norm)
    new = accepted[start:]
    return np.array(new) if new else np.zeros((0, inner.shape[0]))


@dataclass(frozen=True)
class CanonicalBasis:
    """Ordered basis: m-block, then the k-minus-v (fiber) block, then the v-block."""

    spec: AlgebraSpec
    xi: tuple
    matrices: np.ndarray
    coefficients: np.ndarray
    n: int
    r: int
    r1: int
    r2: int
    gram_residual: float

    @property
    def dim(self):
        return self.n + self.r

    @property
    def n1(self):
        return self.n + (self.r - self.r1 - self.r2 - 1)

    @property
    def fiber_dim(self):
        return self.n1 - self.n

    @property
    def m_indices(self):
        return np.arange(0, self.n)

    @property
    def k_indices(self):
        return np.arange(self.n, self.dim)

    @property
    def fiber_indices(self):
        return np.arange(self.n, self.n1)

    @property
    def v_indices(self):
        return np.arange(self.n1, self.dim)

    @property
    def horizontal_indices(self):
        """Indices i_1 of the G/V complement: m then fiber."""
        return np.arange(0, self.n1)

    @property
    def signature(self):
        return np.concatenate([np.ones(self.n), -np.ones(self.r)])

    def index_ranges(self):
        return {
            "m": [0, self.n],
            "fiber": [self.n, self.n1],
            "v": [self.n1, self.dim],
        }

    def remixed(self, m_rotation=None, fiber_rotation=None, v_rotation=None):
        """Same splitting with orthogonal re-mixing inside the m, fiber and v blocks."""
        blocks = [
            np.eye(self.n) if m_rotation is None else np.asarray(m_rotation),
            np.eye(self.fiber_dim) if fiber_rotation is None else np.asarray(fiber_rotation),
            np.eye(self.dim - self.n1) if v_rotation is None else np.asarray(v_rotation),
        ]
        mix = linalg.block_diag(*blocks)
        return replace(
            self,
            matrices=_frozen(np.einsum("ab,bij->aij", mix, self.matrices)),
            coefficients=_frozen(mix @ self.coefficients),
        )


def canonical_basis(decomposition, centralizer):
    """Orthonormalize w.r.t. -B(X, theta Y) and order the blocks m, k minus v, v."""
    inner = decomposition.inner
    for rows, block in ((decomposition.m_rows, "m"), (decomposition.k_rows, "k"), (centralizer.v_rows, "v")):
        _check_condition(rows, inner, block)

    m_block = _orthonormalize(decomposition.m_rows, inner)
    v_block = _orthonormalize(centralizer.v_rows, inner)
    fiber_block = _orthonormalize(decomposition.k_rows, inner, against=v_block)

    n, r = m_block.shape[0], decomposition.k_rows.shape[0]
    if fiber_block.shape[0] + v_block.shape[0] != r:
        raise DegenerateBasisError(
            f"k splits into {fiber_block.shape[0]} + {v_block.shape[0]} directions, expected dim k = {r}"
        )

    coefficients = np.vstack([m_block, fiber_block, v_block])
    signature = np.concatenate([np.ones(n), -np.ones(r)])
    gram = coefficients @ decomposition.killing @ coefficients.T
    gram_residual = float(np.max(np.abs(gram - np.diag(signature))))
    if gram_residual > IDENTITY_TOL:
        raise DegenerateBasisError(f"canonical Killing Gram deviates from diag(+1, -1) by {gram_residual:.3e}")

    spec = decomposition.basis.spec
    matrices = decomposition.basis.combine(coefficients)
    return CanonicalBasis(
        spec=spec,
        xi=centralizer.xi,
        matrices=_frozen(matrices),
        coefficients=_frozen(coefficients),
        n=n,
        r=r,
        r1=centralizer.r1,
        r2=centralizer.r2,
        gram_residual=gram_residual,
    )


# --- structure constants -----------------------------------------------------

def allowed_block_mask(n, dim):
    """True where c_ab^c may be nonzero: (k,k)->k, (m,m)->k, (m,k)->m, (k,m)->m."""
    is_k = np.arange(dim) >= n
    ka, kb, kc = np.meshgrid(is_k, is_k, is_k, indexing="ij")
    return (ka & kb & kc) | (~ka & ~kb & kc) | ((ka != kb) & ~kc)


@dataclass(frozen=True)
class StructureTensor:
    basis: CanonicalBasis
    c_up: np.ndarray
    c_low: np.ndarray
    gram_B: np.ndarray
    gram_g: np.ndarray
    expansion_residual: float
    block_residual: float
    lowering: str = "killing"

    @property
    def dim(self):
        return self.c_up.shape[0]

    @property
    def n(self):
        return self.basis.n

    @property
    def r(self):
        return self.basis.r


def _lower(c_up, gram_B):
    # c_dab = c_ab^e B_de
    return np.einsum("de,abe->dab", gram_B, c_up)


def structure_tensor(cb):
    """Structure constants c_ab^c of the canonical basis and their Killing-lowered form c_dab."""
    coefficients, residual = expand_in_basis(cb.matrices, bracket_table(cb.matrices))
    if residual > IDENTITY_TOL:
        raise StructureError(f"{cb.spec.label}: bracket expansion residual {residual:.3e}; basis is not closed")

    gram_B = killing_gram(coefficients)
    c_low = _lower(coefficients, gram_B)
    forbidden = ~allowed_block_mask(cb.n, cb.dim)
    block_residual = float(np.max(np.abs(coefficients[forbidden]))) if forbidden.any() else 0.0
    if block_residual > IDENTITY_TOL:
        raise StructureError(f"{cb.spec.label}: bracket leaves the Cartan block pattern (residual {block_residual:.3e})")

    return StructureTensor(
        basis=cb,
        c_up=_frozen(coefficients),
        c_low=_frozen(c_low),
        gram_B=_frozen(gram_B),
        gram_g=_frozen(np.eye(cb.dim)),
        expansion_residual=residual,
        block_residual=block_residual,
    )


def theta_compatibility_residual(decomposition):
    """max |B(theta X_a, theta X_b) - B(X_a, X_b)| over basis pairs."""
    theta, killing = decomposition.theta, decomposition.killing
    return float(np.max(np.abs(theta @ killing @ theta.T - killing)))


# --- pipeline and serialization ---------------------------------------------

@dataclass(frozen=True)
class AlgebraPipeline:
    spec: AlgebraSpec
    basis: MatrixBasis
    decomposition: CartanDecomposition
    torus: MaximalTorus
    centralizer: Centralizer
    canonical: CanonicalBasis
    structure: StructureTensor


def construct(spec, xi=None):
    """Run build, Cartan split, torus, centralizer, canonical basis and structure constants."""
    basis = build_algebra(spec)
    decomposition = cartan_decompose(basis, spec)
    torus = maximal_torus(decomposition, spec)
    centralizer = centralizer_subalgebra(decomposition, torus, xi if xi is not None else spec.xi)
    canonical = canonical_basis(decomposition, centralizer)
    structure = structure_tensor(canonical)
    return AlgebraPipeline(spec.with_xi(centralizer.xi), basis, decomposition, torus, centralizer, canonical, structure)


def basis_hash(matrices):
    return hashlib.sha256(np.ascontiguousarray(np.asarray(matrices) + 0.0).tobytes()).hexdigest()[:16]


def basis_document(pipeline):
    """JSON-ready description of a constructed algebra (matrices row-major, full float precision)."""
    cb, st = pipeline.canonical, pipeline.structure
    return {
        "schema": SCHEMA_VERSION,
        "algebra": pipeline.spec.to_dict(),
        "dimension": cb.dim,
        "n": cb.n,
        "r": cb.r,
        "r1": cb.r1,
        "r2": cb.r2,
        "n1": cb.n1,
        "index_ranges": cb.index_ranges(),
        "basis_hash": basis_hash(cb.matrices),
        "residuals": {
            "closure": pipeline.basis.closure_residual,
            "independence_sigma_min": pipeline.basis.min_singular_value,
            "canonical_gram": cb.gram_residual,
            "expansion": st.expansion_residual,
            "block_pattern": st.block_residual,
            "theta_compatibility": theta_compatibility_residual(pipeline.decomposition),
        },
        "compact_cartan": pipeline.torus.compact_cartan,
        "matrices": [matrix.tolist() for matrix in cb.matrices],
    }
