"""The 2x2 linear systems v' = M(u) v obtained by the Mellin transform.

Transforming the coefficient recurrence with b_n = (1/n!) int_C u^n v(u) du
turns it into a Fuchsian system whose finite singular points sit exactly at
the admissible growth types ±kappa/2, ±1/(2 kappa).  Even sector:

    M(u) = -[[ (6u+4x+E)/(4u²+4xu+1),  -mu/(4u²+4xu+1) ],
             [  mu/(4u²-4xu+1),  (6u-4x-E)/(4u²-4xu+1) ]],

odd sector: 6u ± (4x+E) is replaced by 2u ± (2x+E), with the same
denominators 4u² ± 4xu + 1 = 4(u ± kappa/2)(u ± 1/(2 kappa)).

M is represented by its partial-fraction decomposition
M(u) = sum_p R_p/(u - p); the residue matrices R_p carry the local data
(their eigenvalues are the characteristic exponents) and double as the
input to Frobenius expansions.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import NearSingularity
from .model_params import ModelParams, Sector

DELTA_SING = 1e-8

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class SingularPointInfo:
    location: complex           # math.inf stands for the point at infinity
    exponents: tuple[float, float]


@dataclass(frozen=True)
class MellinSystem:
    params: ModelParams

    def __post_init__(self):
        self.params.require_chi()

    @property
    def sector(self) -> Sector:
        return self.params.sector

    @property
    def chi(self) -> float:
        return self.params.chi

    @functools.cached_property
    def finite_singular_points(self) -> tuple[float, float, float, float]:
        k = self.params.kappa
        return (k / 2.0, -k / 2.0, 1.0 / (2.0 * k), -1.0 / (2.0 * k))

    @functools.cached_property
    def residue_matrices(self) -> dict[float, np.ndarray]:
        """R_p with M(u) = sum_p R_p / (u - p), exact partial fractions."""
        p = self.params
        E, x, mu = p.energy, p.x, p.mu
        if self.sector is Sector.EVEN:
            def num_row1(u):  # numerator of row 1 before the overall minus sign
                return np.array([6.0 * u + 4.0 * x + E, -mu])

            def num_row2(u):
                return np.array([mu, 6.0 * u - 4.0 * x - E])
        else:
            def num_row1(u):
                return np.array([2.0 * (u + x) + E, -mu])

            def num_row2(u):
                return np.array([mu, 2.0 * (u - x) - E])

        k = p.kappa
        res: dict[float, np.ndarray] = {}
        for point in (-k / 2.0, -1.0 / (2.0 * k)):      # poles of 4u²+4xu+1 (row 1)
            R = np.zeros((2, 2))
            R[0] = -num_row1(point) / (8.0 * point + 4.0 * x)
            res[point] = R
        for point in (k / 2.0, 1.0 / (2.0 * k)):        # poles of 4u²-4xu+1 (row 2)
            R = np.zeros((2, 2))
            R[1] = -num_row2(point) / (8.0 * point - 4.0 * x)
            res[point] = R
        return res

    def matrix(self, u: complex) -> np.ndarray:
        u = complex(u)
        M = np.zeros((2, 2), dtype=complex)
        for p, R in self.residue_matrices.items():
            M += R / (u - p)
        return M

    def rhs(self, u: complex, v: np.ndarray) -> np.ndarray:
        """M(u) v, guarded against evaluation on top of a pole."""
        d = min(abs(u - p) for p in self.finite_singular_points)
        if d < DELTA_SING:
            raise NearSingularity(
                f"u={u} is within {d:.2e} of a singular point (min {DELTA_SING})")
        return self.matrix(u) @ np.asarray(v, dtype=complex)

    def exponents_at(self, point: float | complex) -> tuple[float, float]:
        """Characteristic exponent pair at a finite singular point or infinity."""
        chi = self.chi
        k = self.params.kappa
        if point == math.inf:
            return (-1.5, -1.5) if self.sector is Sector.EVEN else (-0.5, -0.5)
        if abs(abs(point) - k / 2.0) < 1e-12:
            return (0.0, -chi) if self.sector is Sector.EVEN else (0.0, 0.5 - chi)
        if abs(abs(point) - 1.0 / (2.0 * k)) < 1e-12:
            return (0.0, chi - 1.5) if self.sector is Sector.EVEN else (0.0, chi - 1.0)
        raise ValueError(f"{point} is not a singular point of the system")

    def local_matrix_expansion(self, point: float, n_terms: int
                               ) -> tuple[np.ndarray, list[np.ndarray]]:
        """(residue, Taylor coefficients of the regular part) at a finite point."""
        others = [(p, R) for p, R in self.residue_matrices.items() if p != point]
        taylor = [-sum(R / (p - point) ** (k + 1) for p, R in others)
                  for k in range(n_terms)]
        return self.residue_matrices[point], taylor


def singular_points(sys: MellinSystem) -> list[SingularPointInfo]:
    """The four finite regular singular points plus the record at infinity."""
    pts = [SingularPointInfo(location=p, exponents=sys.exponents_at(p))
           for p in sys.finite_singular_points]
    pts.append(SingularPointInfo(location=math.inf,
                                 exponents=sys.exponents_at(math.inf)))
    return pts


def local_exponent_sum_check(sys: MellinSystem, point: float) -> float:
    """|tr Res(M, point) - (nu1 + nu2)|; the trace of the residue matrix must
    equal the exponent sum."""
    tr = float(np.trace(sys.residue_matrices[point]).real)
    nu1, nu2 = sys.exponents_at(point)
    return abs(tr - (nu1 + nu2))
