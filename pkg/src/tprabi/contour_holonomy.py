"""Analytic continuation of the Mellin system along contours.

The fundamental matrix V(u), V(0) = 1, is continued along a parametrized
loop gamma by solving the initial value problem

    dY/dt = gamma'(t) M(gamma(t)) Y,   Y(0) = 1,   t in [0, 1],

which turns continuation in the complex plane into a real-interval ODE with
a smooth coefficient.  For a loop through the origin enclosing kappa/2 the
value Y(1) is the holonomy matrix F+; the reflected loop gives
F- = sigma_x F+ sigma_x.  When the holonomy is trivial the fundamental
matrix extends analytically to kappa/2 and is recovered there with Cauchy's
integral, evaluated by the trapezoid rule (spectrally accurate for periodic
analytic integrands).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (AmbiguousClassification, NearSingularity, NotApplicable,
                     StepSizeUnderflow, ToleranceNotMet)
from .mellin_system import DELTA_SING, SIGMA_X, MellinSystem
from .model_params import ModelParams, Sector

DEFAULT_TOL = 1e-11
TOL_RANGE = (1e-13, 1e-6)


class PathKind(enum.Enum):
    LOOP = "loop"
    SEGMENT = "segment"


class Classification(enum.Enum):
    GENERIC = "generic"
    JORDAN = "jordan"
    IDENTITY = "identity"


@dataclass
class ContourPath:
    """Piecewise-smooth path t in [0,1] -> gamma(t), with winding metadata."""

    gamma: Callable[[float], complex]
    gamma_dot: Callable[[float], complex]
    kind: PathKind
    enclosed_point: complex | None = None

    @staticmethod
    def circle_through(d: float, reflected: bool = False,
                       enclosed: complex | None = None) -> "ContourPath":
        """Circle through 0 re-crossing the real axis at d (center d/2, radius d/2)."""
        sgn = -1.0 if reflected else 1.0

        def gamma(t: float) -> complex:
            return sgn * (d / 2.0) * (1.0 - np.exp(2j * np.pi * t))

        def gamma_dot(t: float) -> complex:
            return -sgn * (d / 2.0) * 2j * np.pi * np.exp(2j * np.pi * t)

        return ContourPath(gamma, gamma_dot, PathKind.LOOP, enclosed_point=enclosed)

    @staticmethod
    def segment(z0: complex, z1: complex) -> "ContourPath":
        z0, z1 = complex(z0), complex(z1)

        def gamma(t: float) -> complex:
            return z0 + t * (z1 - z0)

        def gamma_dot(t: float) -> complex:
            return z1 - z0

        return ContourPath(gamma, gamma_dot, PathKind.SEGMENT)

    def reparametrized(self, phi: Callable[[float], float],
                       phi_dot: Callable[[float], float]) -> "ContourPath":
        return ContourPath(lambda t: self.gamma(phi(t)),
                           lambda t: self.gamma_dot(phi(t)) * phi_dot(t),
                           self.kind, self.enclosed_point)

    def winding_number(self, point: complex, samples: int = 4096) -> float:
        ts = (np.arange(samples) + 0.5) / samples
        g = np.array([self.gamma(t) for t in ts])
        gd = np.array([self.gamma_dot(t) for t in ts])
        return float((np.mean(gd / (g - point)) / (2j * np.pi)).real)

    def min_distance(self, points, samples: int = 2048) -> float:
        ts = np.linspace(0.0, 1.0, samples)
        g = np.array([self.gamma(t) for t in ts])
        return float(min(np.min(np.abs(g - p)) for p in points))


def default_loop(params: ModelParams, scale: float = 1.0,
                 reflected: bool = False) -> ContourPath:
    """Loop through 0 around ±kappa/2, excluding ±1/(2 kappa) for all kappa.

    The circle re-crosses the real axis at the midpoint d of kappa/2 and
    1/(2 kappa) (scaled by `scale` for homotopy-invariance checks; any
    kappa/2 < scale*d < 1/(2 kappa) gives the same holonomy).
    """
    k = params.kappa
    d = (k / 2.0 + 1.0 / (2.0 * k)) / 2.0 * scale
    enclosed = -k / 2.0 if reflected else k / 2.0
    return ContourPath.circle_through(d, reflected=reflected, enclosed=enclosed)


def _check_clearance(sys: MellinSystem, path: ContourPath) -> None:
    avoid = [p for p in sys.finite_singular_points
             if path.enclosed_point is None or abs(p - path.enclosed_point) > 1e-14]
    if avoid and path.min_distance(avoid) < DELTA_SING:
        raise NearSingularity("path passes within delta_sing of a singular point "
                              "that it does not enclose")


def integrate_fundamental(sys: MellinSystem, path: ContourPath,
                          tol: float = DEFAULT_TOL, y0: np.ndarray | None = None,
                          dense: bool = False):
    """Continue Y along the path; returns Y(1) (2x2), or (Y(1), dense solution).

    For a loop with Y(0)=1 the result is the holonomy matrix.  y0 may be a
    2-vector (single solution transport) or a 2x2 matrix.
    """
    if not (TOL_RANGE[0] <= tol <= TOL_RANGE[1] * 10):
        raise ValueError(f"tol {tol} outside sensible range {TOL_RANGE}")
    if y0 is None:
        y0 = np.eye(2, dtype=complex)
    y0 = np.asarray(y0, dtype=complex)
    shape = y0.shape

    if path.kind is PathKind.SEGMENT and abs(path.gamma(0.0) - path.gamma(1.0)) == 0.0:
        return (y0, None) if dense else y0

    _check_clearance(sys, path)

    def rhs(t, y):
        M = sys.matrix(path.gamma(t))
        return (path.gamma_dot(t) * (M @ y.reshape(shape))).ravel()

    sol = solve_ivp(rhs, (0.0, 1.0), y0.ravel(), method="DOP853",
                    rtol=tol, atol=tol, dense_output=dense)
    if not sol.success:
        msg = sol.message or ""
        if "step size" in msg.lower():
            raise StepSizeUnderflow(msg)
        raise ToleranceNotMet(msg)
    y1 = sol.y[:, -1].reshape(shape)
    return (y1, sol.sol) if dense else y1


def holonomy_pair(sys: MellinSystem, tol: float = DEFAULT_TOL,
                  verify: bool = False):
    """(F+, F-) with F- = sigma_x F+ sigma_x; optionally also integrates F-
    directly along the reflected loop and returns it third."""
    F_plus = integrate_fundamental(sys, default_loop(sys.params), tol)
    F_minus = SIGMA_X @ F_plus @ SIGMA_X
    if verify:
        F_direct = integrate_fundamental(
            sys, default_loop(sys.params, reflected=True), tol)
        return F_plus, F_minus, F_direct
    return F_plus, F_minus


def classify(F_plus: np.ndarray, chi: float, sector: Sector,
             eps_J: float) -> Classification:
    """Branch decision of the spectral algorithm.

    Away from the sector's quasi-exact lattice the eigenvalues
    {1, exp(-2 pi i chi)} (even; the odd lattice is chi in Z+1/2) are
    distinct and the holonomy is generic.  On the lattice both eigenvalues
    equal 1 and the matrix is either a Jordan block (logarithmic local
    solution) or exactly the identity (quasi-exact point).
    """
    if not sector.is_special_chi(chi):
        return Classification.GENERIC
    dev = float(np.max(np.abs(F_plus - np.eye(2))))
    if dev <= eps_J:
        return Classification.IDENTITY
    if dev <= 10.0 * eps_J:
        raise AmbiguousClassification(
            f"|F-1| = {dev:.3e} in ({eps_J:.1e}, {10*eps_J:.1e}); tighten tol")
    return Classification.JORDAN


@dataclass
class HolonomyData:
    F_plus: np.ndarray
    classification: Classification
    eigenpairs: list[tuple[complex, np.ndarray]]
    integrator_tolerance: float
    eps_J: float = field(default=0.0)

    @property
    def F_minus(self) -> np.ndarray:
        return SIGMA_X @ self.F_plus @ SIGMA_X


def eps_J_for(tol: float) -> float:
    """Jordan-vs-identity margin, scaled so it dominates integration error."""
    return 1e3 * tol


def holonomy_data(sys: MellinSystem, tol: float = DEFAULT_TOL,
                  eps_J: float | None = None) -> HolonomyData:
    F_plus = integrate_fundamental(sys, default_loop(sys.params), tol)
    eps = eps_J_for(tol) if eps_J is None else eps_J
    cls = classify(F_plus, sys.chi, sys.sector, eps)
    w, V = np.linalg.eig(F_plus)
    pairs = [(complex(w[i]), V[:, i].copy()) for i in range(2)]
    return HolonomyData(F_plus=F_plus, classification=cls, eigenpairs=pairs,
                        integrator_tolerance=tol, eps_J=eps)


def cauchy_point_quadrature(path: ContourPath, f: Callable[[float], np.ndarray],
                            pole: complex, nodes: int = 512) -> np.ndarray:
    r"""(1/2 pi i) \oint f(t) / (gamma(t) - pole) dgamma by the trapezoid rule.

    f takes the path parameter t and returns the integrand value at gamma(t)
    (scalar or array).  Periodic analytic integrand: the error decays
    geometrically in `nodes`.
    """
    acc = None
    for k in range(nodes):
        t = k / nodes
        w = path.gamma_dot(t) / (path.gamma(t) - pole)
        term = w * np.asarray(f(t))
        acc = term if acc is None else acc + term
    return acc / nodes / (2j * np.pi)


def cauchy_eval(sys: MellinSystem, tol: float = DEFAULT_TOL,
                nodes: int = 512) -> np.ndarray:
    """Fundamental matrix V(kappa/2) via Cauchy's integral over the loop.

    Valid only when the holonomy is trivial, so that V is single-valued and
    analytic at kappa/2.  Node count is doubled until two levels agree.
    """
    path = default_loop(sys.params)
    pole = sys.params.kappa / 2.0
    F, dense = integrate_fundamental(sys, path, tol, dense=True)
    if np.max(np.abs(F - np.eye(2))) > eps_J_for(tol):
        raise NotApplicable(
            "Cauchy evaluation needs a trivial holonomy (classification "
            f"Identity); |F-1| = {np.max(np.abs(F - np.eye(2))):.2e}")

    def f(t: float) -> np.ndarray:
        return dense(t).reshape(2, 2)

    prev = cauchy_point_quadrature(path, f, pole, nodes)
    for m in (nodes * 2, nodes * 4, nodes * 8):
        cur = cauchy_point_quadrature(path, f, pole, m)
        if np.max(np.abs(cur - prev)) < max(tol * 10.0, 1e-13):
            return cur
        prev = cur
    raise ToleranceNotMet("Cauchy quadrature did not stabilize under node doubling")


def trace_to_csv(sys: MellinSystem, fh, path: ContourPath | None = None,
                 tol: float = DEFAULT_TOL, nodes: int = 256) -> None:
    """Debug dump of the continuation: t, gamma(t) and the entries of Y(t)."""
    if path is None:
        path = default_loop(sys.params)
    _, dense = integrate_fundamental(sys, path, tol, dense=True)
    fh.write("t,re_gamma,im_gamma,re_y11,im_y11,re_y12,im_y12,"
             "re_y21,im_y21,re_y22,im_y22\n")
    for t in np.linspace(0.0, 1.0, nodes):
        g = path.gamma(t)
        Y = dense(t).reshape(2, 2)
        cells = ",".join(f"{Y[i, j].real:.12g},{Y[i, j].imag:.12g}"
                         for i in (0, 1) for j in (0, 1))
        fh.write(f"{t:.12g},{g.real:.12g},{g.imag:.12g},{cells}\n")
