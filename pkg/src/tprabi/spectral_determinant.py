"""The spectral determinant W(chi, kappa, mu) = det[e, sigma_x e].

e is the distinguished initial vector at u=0: the holonomy eigenvector for
the non-unit eigenvalue (generic chi), the unique Jordan eigenvector
(logarithmic case), or the null vector of the Cauchy-evaluated fundamental
matrix at kappa/2 (trivial holonomy, negative-exponent side).  At
quasi-exact points with a pole-type local solution two explicit states
exist and W is zero by convention.  Zeros of W in chi are the eigenvalues.

With e = [e1, e2] normalized to unit norm and real-positive leading
component, W = e1² - e2²; W vanishes exactly when e is an eigenvector of
sigma_x.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .contour_holonomy import (Classification, HolonomyData, cauchy_eval,
                               holonomy_data, integrate_fundamental,
                               ContourPath, DEFAULT_TOL)
from .errors import AmbiguousClassification
from .mellin_system import SIGMA_X, MellinSystem
from .model_params import ModelParams, Sector

# singular-value ratio below which the Cauchy-evaluated matrix counts as
# rank deficient (the vanishing solution exists)
RANK_DEFICIENT_RATIO = 1e-6


class Branch(enum.Enum):
    GENERIC = "Generic"
    JORDAN = "Jordan"
    IDENTITY_POSITIVE = "IdentityPositive"
    IDENTITY_NEGATIVE = "IdentityNegative"


@dataclass
class DeterminantSample:
    chi: float
    W: complex
    branch: Branch
    e: np.ndarray
    null_vector_found: bool = True


def normalize_phase(v: np.ndarray) -> np.ndarray:
    """Unit norm; the largest-magnitude component is made real positive
    (exact tie resolved toward the first component)."""
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    i = int(np.argmax(np.abs(v)))
    return v * (abs(v[i]) / v[i])


def _nonunit_eigenvector(F: np.ndarray) -> np.ndarray:
    """Eigenvector of the eigenvalue farthest from 1.

    One eigenvalue of the loop holonomy is always 1, so the range of
    (F - 1) is the other eigenspace; taking its larger column is stable
    arbitrarily close to degeneracy and reduces to the Jordan eigenvector
    in the degenerate limit.
    """
    G = F - np.eye(2)
    c0, c1 = np.linalg.norm(G[:, 0]), np.linalg.norm(G[:, 1])
    return G[:, 0] if c0 >= c1 else G[:, 1]


def eigenvector_e(holo: HolonomyData, sys: MellinSystem,
                  chi: float | None = None) -> tuple[np.ndarray | None, Branch, bool]:
    """(e, branch, null_found) per the classification of the holonomy."""
    chi = sys.chi if chi is None else chi
    if holo.classification in (Classification.GENERIC, Classification.JORDAN):
        e = normalize_phase(_nonunit_eigenvector(holo.F_plus))
        branch = (Branch.GENERIC if holo.classification is Classification.GENERIC
                  else Branch.JORDAN)
        return e, branch, True

    # trivial holonomy: route on the sign of the second exponent at kappa/2
    nu2 = sys.exponents_at(sys.params.kappa / 2.0)[1]
    m = round(nu2)
    if abs(nu2 - m) > 1e-6:
        raise AmbiguousClassification(
            f"identity holonomy with non-integer exponent {nu2}")
    if m <= -1:
        # pole-type local solution: two explicit quasi-exact states
        return None, Branch.IDENTITY_POSITIVE, True
    if m == 0:
        raise AmbiguousClassification(
            "identity holonomy with exponent 0 (logarithms always present here)")
    V = cauchy_eval(sys, holo.integrator_tolerance)
    u, s, vh = np.linalg.svd(V)
    e = normalize_phase(vh[-1].conj())
    found = bool(s[-1] <= RANK_DEFICIENT_RATIO * s[0])
    return e, Branch.IDENTITY_NEGATIVE, found


def determinant_W(params: ModelParams, tol: float = DEFAULT_TOL) -> DeterminantSample:
    """One loop integration + classification + eigenvector extraction."""
    sys = MellinSystem(params)
    holo = holonomy_data(sys, tol)
    e, branch, found = eigenvector_e(holo, sys)
    if branch is Branch.IDENTITY_POSITIVE:
        # both [1,1] and [1,-1] are admissible; W is zero by definition
        e = normalize_phase(np.array([1.0, 1.0]))
        return DeterminantSample(chi=sys.chi, W=0.0 + 0.0j, branch=branch, e=e)
    W = e[0] ** 2 - e[1] ** 2
    return DeterminantSample(chi=sys.chi, W=complex(W), branch=branch, e=e,
                             null_vector_found=found)


def wronskian_prefactor(u: complex, params: ModelParams) -> complex:
    """Closed form of exp(int_0^u tr M): the Wronskian of two solutions seeded
    at 0 equals W times this factor."""
    k = params.kappa
    chi = params.require_chi()
    a = 1.0 - 4.0 * u * u / (k * k)      # vanishes at ±kappa/2
    b = 1.0 - 4.0 * k * k * u * u        # vanishes at ±1/(2 kappa)
    if params.sector is Sector.EVEN:
        return a ** (-chi) * b ** (chi - 1.5)
    return a ** (0.5 - chi) * b ** (chi - 1.0)


def wronskian_crosscheck(params: ModelParams, u_sample: float,
                         tol: float = DEFAULT_TOL,
                         sample: DeterminantSample | None = None) -> float:
    """Transport [e, sigma_x e] from 0 to u_sample and compare the Wronskian
    against W times the closed-form prefactor; returns the relative residual."""
    if not abs(u_sample) < params.kappa / 2.0:
        raise ValueError("u_sample must satisfy |u| < kappa/2")
    if sample is None:
        sample = determinant_W(params, tol)
    sys = MellinSystem(params)
    Y0 = np.column_stack([sample.e, SIGMA_X @ sample.e])
    path = ContourPath.segment(0.0, u_sample)
    Y1 = integrate_fundamental(sys, path, tol, y0=Y0)
    wr = np.linalg.det(Y1)
    ref = sample.W * wronskian_prefactor(u_sample, params)
    return float(abs(wr - ref) / (abs(sample.W) + 1e-30))
