"""Ground truth by truncated diagonalization in the photon-number basis.

The rescaled operator

    K = [[2x a†a + (a†² + a²),  mu],
         [mu,  2x a†a - (a†² + a²)]]

preserves photon-number parity, so each parity sector reduces to photon
indices of fixed residue mod 2 with the two spin components interleaved:
(n_k, up), (n_k, down), (n_{k+1}, up), ...  In that ordering the matrix is
real symmetric pentadiagonal: diagonal 2x n, the mu coupling at offset 1
(within an n-pair), and ±sqrt((n+1)(n+2)) at offset 2.

Eigenvalues E convert to chi; truncation is doubled until the requested
leading eigenvalues are stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eig_banded

from .errors import NoConvergence
from .model_params import ModelParams, Sector, chi_from_E

N_START = 64
N_CAP = 2 ** 14
CONVERGENCE_TOL = 1e-9


@dataclass
class TruncatedOperator:
    """Banded upper storage (scipy eig_banded layout): bands[2-k] is offset k."""

    bands: np.ndarray            # (3, 2*n_modes)
    n_modes: int
    sector: Sector
    params: ModelParams

    @property
    def dimension(self) -> int:
        return 2 * self.n_modes

    def as_dense(self) -> np.ndarray:
        dim = self.dimension
        A = np.zeros((dim, dim))
        A[np.arange(dim), np.arange(dim)] = self.bands[2]
        i = np.arange(dim - 1)
        A[i, i + 1] = self.bands[1, 1:]
        A[i + 1, i] = self.bands[1, 1:]
        i = np.arange(dim - 2)
        A[i, i + 2] = self.bands[0, 2:]
        A[i + 2, i] = self.bands[0, 2:]
        return A

    def eigenvalues(self, count: int | None = None) -> np.ndarray:
        if count is None:
            return eig_banded(self.bands, lower=False, eigvals_only=True)
        count = min(count, self.dimension)
        return eig_banded(self.bands, lower=False, eigvals_only=True,
                          select="i", select_range=(0, count - 1))


@dataclass
class OracleSpectrum:
    chis: np.ndarray
    energies: np.ndarray
    truncation_n: int
    converged_count: int
    sector: Sector

    def to_csv(self, fh) -> None:
        fh.write("sector,index,chi,E,truncation_N\n")
        for i, (c, e) in enumerate(zip(self.chis, self.energies)):
            fh.write(f"{self.sector.value},{i},{c:.12g},{e:.12g},{self.truncation_n}\n")


def build(params: ModelParams, n_modes: int,
          sector: Sector | None = None) -> TruncatedOperator:
    """Parity-reduced truncated matrix with n_modes photon states per spin."""
    if n_modes < 2:
        raise ValueError("need at least 2 modes")
    sector = params.sector if sector is None else sector
    x = params.x
    base = 0 if sector is Sector.EVEN else 1
    ns = base + 2 * np.arange(n_modes)
    dim = 2 * n_modes
    bands = np.zeros((3, dim))
    bands[2, 0::2] = 2.0 * x * ns            # spin-up diagonal
    bands[2, 1::2] = 2.0 * x * ns            # spin-down diagonal
    bands[1, 1::2] = params.mu               # mu couples spins at equal n
    pair = np.sqrt((ns[:-1] + 1.0) * (ns[:-1] + 2.0))
    bands[0, 2::2] = pair                    # up: +(a†²+a²)
    bands[0, 3::2] = -pair                   # down: -(a†²+a²)
    return TruncatedOperator(bands=bands, n_modes=n_modes, sector=sector,
                             params=params)


def eigen_chis(params: ModelParams, sector: Sector | None = None,
               target_count: int = 8, rtol: float = CONVERGENCE_TOL,
               n_start: int = N_START) -> OracleSpectrum:
    """Leading chi values, with the truncation doubled until they stabilize."""
    sector = params.sector if sector is None else sector
    n_modes = max(n_start, 4 * target_count)
    prev = None
    while n_modes <= N_CAP:
        op = build(params, n_modes, sector)
        E = op.eigenvalues(target_count)
        chis = chi_from_E(E, params.kappa)
        if prev is not None and len(prev) == len(chis):
            stable = np.abs(chis - prev) < rtol
            if np.all(stable):
                return OracleSpectrum(chis=chis, energies=E,
                                      truncation_n=n_modes,
                                      converged_count=int(np.sum(stable)),
                                      sector=sector)
        prev = chis
        n_modes *= 2
    raise NoConvergence(
        f"spectrum not stable to {rtol} with {N_CAP} modes "
        "(kappa close to 1 converges slowly)")
