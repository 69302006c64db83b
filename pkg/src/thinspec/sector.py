"""Collective-spin sector Hamiltonian: construction and diagonalization.

The device Hamiltonian (2J/N) S_A.S_B - b_eff (S_A^z - S_B^z) is restricted
to the maximal-sublattice-spin sector S_A = S_B = N/4 with S^z_tot = 0,
spanned by |m_A = m, m_B = -m> for m = -s..s.  In this basis the operator is
a real symmetric tridiagonal matrix of dimension N/2 + 1, which keeps exact
diagonalization cheap for N up to ~10^5.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConvergenceError, ParameterError
from .params import ModelParams


@dataclass(frozen=True)
class SectorHamiltonian:
    """Tridiagonal sector Hamiltonian.

    diag[i] and offdiag[i] are indexed by i = m + s, i.e. ascending m.
    """

    s: int
    dim: int
    diag: np.ndarray
    offdiag: np.ndarray
    b_eff: float

    def to_dense(self) -> np.ndarray:
        h = np.diag(self.diag)
        h += np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        return h


@dataclass(frozen=True)
class SpectrumResult:
    """Eigenvalues (ascending) and matching orthonormal eigenvector columns.

    May hold only the lowest part of the spectrum, or no vectors at all
    (values-only solves); ``sector_dim`` always refers to the full sector.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    sector_dim: int

    @property
    def count(self) -> int:
        return int(self.eigenvalues.shape[0])


def build_sector_hamiltonian(params: ModelParams, branch: int = 0) -> SectorHamiltonian:
    """Assemble the sector Hamiltonian for one qubit branch.

    ``branch`` is the eigenvalue of S_1^z - S_2^z dragged by the device
    (+1, -1), or 0 for the uncoupled device.  The qubit coupling
    (gamma/N)(S_A^z - S_B^z)(S_1^z - S_2^z) acts as a staggered-field shift,
    b_eff = B - branch * gamma / N.
    """
    if branch not in (-1, 0, 1):
        raise ParameterError(f"branch must be -1, 0 or +1, got {branch!r}")
    s = params.sublattice_spin
    dim = params.sector_dim
    b_eff = params.b - branch * params.gamma / params.n
    m = np.arange(-s, s + 1, dtype=float)
    diag = -(2.0 * params.j / params.n) * m**2 - 2.0 * b_eff * m
    mm = m[:-1]
    offdiag = (params.j / params.n) * (s * (s + 1.0) - mm * (mm + 1.0))
    return SectorHamiltonian(s=s, dim=dim, diag=diag, offdiag=offdiag, b_eff=b_eff)


def diagonalize(h: SectorHamiltonian, lowest: int | None = None) -> SpectrumResult:
    """Eigendecomposition of the sector Hamiltonian.

    With ``lowest=k`` only the k lowest eigenpairs are computed (bisection
    plus inverse iteration); otherwise the full spectrum is returned.
    Eigenvalues are ascending and nondegenerate (the off-diagonals are
    strictly positive), eigenvectors orthonormal.
    """
    try:
        if lowest is None or lowest >= h.dim:
            w, v = eigh_tridiagonal(h.diag, h.offdiag)
        else:
            if lowest < 1:
                raise ParameterError(f"lowest must be >= 1, got {lowest}")
            w, v = eigh_tridiagonal(
                h.diag, h.offdiag, select="i", select_range=(0, lowest - 1)
            )
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"tridiagonal eigensolver failed for dim={h.dim}, b_eff={h.b_eff}"
        ) from exc
    return SpectrumResult(eigenvalues=w, eigenvectors=v, sector_dim=h.dim)


def eigenvalues(h: SectorHamiltonian, lowest: int | None = None) -> np.ndarray:
    """Eigenvalues only; cheaper than :func:`diagonalize` for large sectors."""
    try:
        if lowest is None or lowest >= h.dim:
            return eigh_tridiagonal(h.diag, h.offdiag, eigvals_only=True)
        if lowest < 1:
            raise ParameterError(f"lowest must be >= 1, got {lowest}")
        return eigh_tridiagonal(
            h.diag, h.offdiag, eigvals_only=True, select="i",
            select_range=(0, lowest - 1),
        )
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"tridiagonal eigensolver failed for dim={h.dim}, b_eff={h.b_eff}"
        ) from exc
