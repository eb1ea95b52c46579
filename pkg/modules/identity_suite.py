"""Residual checks of the structure-constant identities in the Killing-lowered convention."""
from dataclasses import dataclass, field

import numpy as np

from modules.algebra_core import basis_hash

IDENTITY_CHECK_TOL = 1e-9

# name -> human-readable statement of the identity being checked
STATEMENTS = {
    "killing_trace": "B_ab = c_ae^f c_bf^e reproduces diag(+1 on m, -1 on k)",
    "total_antisymmetry": "c_abc = c_ab^e B_ce is antisymmetric in all indices",
    "m_block_contraction": "sum_{alpha,k} c_{alpha i k} c_{alpha j k} = delta_ij / 2",
    "k_block_contraction": "sum_{i,j} c_{i alpha j} c_{i beta j} + sum_{gamma,delta} c_{gamma alpha delta} c_{gamma beta delta} = delta_{alpha beta}",
    "jacobi": "c_ab^e c_ce^f + c_ca^e c_be^f + c_bc^e c_ae^f = 0 (d^2 = 0 on invariant forms)",
}


@dataclass
class IdentityReport:
    residuals: dict
    tolerance: float = IDENTITY_CHECK_TOL
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self):
        return {name: bool(value < self.tolerance) for name, value in self.residuals.items()}

    @property
    def all_passed(self):
        return all(self.passed.values())

    def to_dict(self):
        return {
            "metadata": self.metadata,
            "tolerance": self.tolerance,
            "checks": [
                {"name": name, "statement": STATEMENTS[name], "residual": value, "passed": self.passed[name]}
                for name, value in self.residuals.items()
            ],
            "passed": self.all_passed,
        }


def killing_trace_residual(st):
    traced = np.einsum("aef,bfe->ab", st.c_up, st.c_up)
    return float(np.max(np.abs(traced - np.diag(st.basis.signature))))


def antisymmetry_residual(c_low):
    first = np.max(np.abs(c_low + c_low.transpose(1, 0, 2)))
    last = np.max(np.abs(c_low + c_low.transpose(0, 2, 1)))
    return float(max(first, last))


def m_block_contraction(st):
    m, k = st.basis.m_indices, st.basis.k_indices
    block = st.c_low[np.ix_(k, m, m)]
    return np.einsum("aik,ajk->ij", block, block)


def k_block_contraction(st):
    m, k = st.basis.m_indices, st.basis.k_indices
    mixed = st.c_low[np.ix_(m, k, m)]
    compact = st.c_low[np.ix_(k, k, k)]
    return np.einsum("iaj,ibj->ab", mixed, mixed) + np.einsum("gad,gbd->ab", compact, compact)


def jacobi_residual(c_up):
    first = np.einsum("abe,cef->abcf", c_up, c_up)
    # cyclic permutations (a, b, c) -> (c, a, b) -> (b, c, a)
    second = first.transpose(1, 2, 0, 3)
    third = first.transpose(2, 0, 1, 3)
    return float(np.max(np.abs(first + second + third)))


def verify_identities(st, tolerance=IDENTITY_CHECK_TOL):
    """Residuals (max-norm) of the Killing trace, antisymmetry, block contractions and Jacobi identity.

    Failures are reported, never raised.
    """
    n, r = st.n, st.r
    residuals = {
        "killing_trace": killing_trace_residual(st),
        "total_antisymmetry": antisymmetry_residual(st.c_low),
        "m_block_contraction": float(np.max(np.abs(m_block_contraction(st) - 0.5 * np.eye(n)))),
        "k_block_contraction": float(np.max(np.abs(k_block_contraction(st) - np.eye(r)))),
        "jacobi": jacobi_residual(st.c_up),
    }
    metadata = {
        "algebra": st.basis.spec.to_dict(),
        "basis_hash": basis_hash(st.basis.matrices),
        "lowering": st.lowering,
    }
    return IdentityReport(residuals, tolerance, metadata)
