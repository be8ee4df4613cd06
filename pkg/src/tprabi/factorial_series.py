"""Frobenius expansions at the singular points and factorial-series solutions.

Around a finite singular point u0 the system v' = M(u) v has a solution
v(u) = sum_j h_j (u - u0)^(nu + j); pushing it through the integral
transform b_n = (1/n!) int_C u^n v(u) du (loop from 0 around u0, or the
segment [0, u0] for positive integer nu) gives a convergent factorial
series for a recurrence solution of growth type u0:

    b_n = pref * u0^(n+1)/n! * sum_j (-u0)^(nu+j)
          * Gamma(n+1) Gamma(1+nu+j) / Gamma(2+n+nu+j) * h_j,

with pref = 1 - exp(2 pi i nu) for a loop and 1 for a segment.  The branch
convention is the principal power throughout, which makes the series agree
exactly with contour quadrature of the transform seeded by the
principal-branch series value at u = 0.

When the local exponent is a negative integer the solution generically
carries log(u - u0) times the analytic solution; the transform then splits
into a residue sum plus a segment factorial series.

For kappa > 1/sqrt(2) the expansion point is too close to its neighbours
for the series to converge on the contour; the change of variable
w = (u/u0)^p with p = max(1, 1/(2(1-kappa))) pushes the other singular
points out, and the transform becomes a factorial series in the remapped
coefficients H_j with Gamma argument (n+1)/p.

Rank test: an entire solution of the recurrence with finite norm exists at
chi exactly when the sequence a_n (from the power series at 0) is a linear
combination of b_n^+ and b_n^-; equivalently all four 3x3 minors of the
4x3 matrix [(a, b+, b-) at n0, n0+1] vanish.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import binom, gammaln, gammasgn

from .errors import ResonantExponent, SlowConvergence
from .mellin_system import SIGMA_X, MellinSystem
from .recurrence import CoefficientSequence

DEFAULT_REL_TOL = 1e-13
MAX_TERMS = 10_000
DEFAULT_N_TERMS = 80
RANK_EPS_DEFAULT = 1e-6


@dataclass
class FrobeniusSeries:
    """Local solution (u-u0)^nu sum_j h_j (u-u0)^j; principal-branch powers.

    For the logarithmic variant (exponent a negative integer -m) the full
    solution is v1 + log_coupling * log(u-u0) * v2 with v1 the pole-type
    series stored in `coeffs` and v2 the analytic partner in `log_coeffs`.
    """

    base_point: float
    exponent: float
    coeffs: np.ndarray                   # (n_terms, 2) complex
    radius: float
    log_coeffs: np.ndarray | None = None
    log_coupling: complex | None = None
    system: "MellinSystem | None" = None

    @property
    def n_terms(self) -> int:
        return len(self.coeffs)

    def evaluate(self, u: complex) -> np.ndarray:
        du = complex(u) - self.base_point
        powers = du ** (self.exponent + np.arange(self.n_terms))
        val = (self.coeffs * powers[:, None]).sum(axis=0)
        if self.log_coupling is not None:
            an = (self.log_coeffs * (du ** np.arange(len(self.log_coeffs)))[:, None]
                  ).sum(axis=0)
            val = val + self.log_coupling * np.log(du) * an
        return val

    def derivative(self, u: complex) -> np.ndarray:
        du = complex(u) - self.base_point
        expo = self.exponent + np.arange(self.n_terms)
        powers = expo * du ** (expo - 1.0)
        val = (self.coeffs * powers[:, None]).sum(axis=0)
        if self.log_coupling is not None:
            j = np.arange(len(self.log_coeffs))
            an = (self.log_coeffs * (du ** j)[:, None]).sum(axis=0)
            dan = (self.log_coeffs[1:] * (j[1:] * du ** (j[1:] - 1.0))[:, None]
                   ).sum(axis=0)
            val = val + self.log_coupling * (np.log(du) * dan + an / du)
        return val


@dataclass
class RemappedSeries:
    """Coefficients after the w = (u/u0)^p change of variable."""

    p: float
    base_point: float
    exponent: float
    H_coeffs: np.ndarray
    A_table: np.ndarray
    B_coeffs: np.ndarray


def _indicial_null_vector(ind: np.ndarray) -> np.ndarray:
    _, s, vh = np.linalg.svd(ind)
    v = vh[-1].conj()
    i = int(np.argmax(np.abs(v)))
    return v * (abs(v[i]) / v[i])


def _series_radius(sys: MellinSystem, point: float) -> float:
    return min(abs(point - p) for p in sys.finite_singular_points if p != point)


def frobenius_at(sys: MellinSystem, point: float, exponent: float,
                 n_terms: int = DEFAULT_N_TERMS,
                 logarithm: bool = False) -> FrobeniusSeries:
    """Series solution at a finite singular point for one of its exponents.

    With an integer exponent gap the recursion for the smaller exponent hits
    a singular step; pass logarithm=True to build the log-carrying solution
    instead (exponent must then be the smaller of the pair).
    """
    res, taylor = sys.local_matrix_expansion(point, n_terms)
    nu1, nu2 = sys.exponents_at(point)
    if not any(abs(exponent - nu) < 1e-9 for nu in (nu1, nu2)):
        raise ValueError(f"{exponent} is not a characteristic exponent at {point}")
    radius = _series_radius(sys, point)
    other = nu1 if abs(exponent - nu2) < abs(exponent - nu1) else nu2
    gap = other - exponent
    resonant_step = int(round(gap)) if abs(gap - round(gap)) < 1e-9 and gap > 0 else None

    if logarithm:
        if resonant_step is None:
            raise ValueError("logarithm requested but the exponent gap is not "
                             "a positive integer")
        return _frobenius_log(sys, point, exponent, resonant_step, n_terms,
                              res, taylor, radius)

    h = np.zeros((n_terms, 2), dtype=complex)
    h[0] = _indicial_null_vector(res - exponent * np.eye(2))
    eye = np.eye(2)
    for j in range(1, n_terms):
        if resonant_step is not None and j == resonant_step:
            raise ResonantExponent(
                f"indicial shift singular at step {j} (gap {gap:.0f}); "
                "request the larger exponent or logarithm=True")
        rhs = -sum(taylor[k] @ h[j - 1 - k] for k in range(j))
        h[j] = np.linalg.solve(res - (exponent + j) * eye, rhs)
    return FrobeniusSeries(base_point=point, exponent=exponent, coeffs=h,
                           radius=radius, system=sys)


def _frobenius_log(sys, point, exponent, m, n_terms, res, taylor, radius):
    """v = v1 + c log(u-u0) v2: v2 is the analytic solution (exponent other),
    v1 carries exponent -m; the coupling c is fixed at the resonant step."""
    g = frobenius_at(sys, point, exponent + m, n_terms).coeffs
    h = np.zeros((n_terms, 2), dtype=complex)
    h[0] = _indicial_null_vector(res - exponent * np.eye(2))
    eye = np.eye(2)
    c = None
    for j in range(1, n_terms):
        rhs = -sum(taylor[k] @ h[j - 1 - k] for k in range(j))
        A = res - (exponent + j) * eye
        if j == m:
            # singular step: solve [A | -g0] [h_j; c] = rhs, minimal norm
            aug = np.hstack([A, -g[0].reshape(2, 1)])
            sol, *_ = np.linalg.lstsq(aug, rhs, rcond=None)
            h[j] = sol[:2]
            c = complex(sol[2])
        else:
            if j > m:
                rhs = rhs + c * g[j - m]
            h[j] = np.linalg.solve(A, rhs)
    return FrobeniusSeries(base_point=point, exponent=exponent, coeffs=h,
                           radius=radius, log_coeffs=g, log_coupling=c,
                           system=sys)


def gamma_ratio(n_eff: float, nu: float, j: int) -> float:
    """Gamma(n_eff+1) Gamma(1+nu+j) / Gamma(2+n_eff+nu+j), overflow safe."""
    a, b, c = n_eff + 1.0, 1.0 + nu + j, 2.0 + n_eff + nu + j
    val = gammaln(a) + gammaln(b) - gammaln(c)
    sign = gammasgn(a) * gammasgn(b) * gammasgn(c)
    return float(sign * np.exp(val))


def _factorial_sum(coeffs: np.ndarray, u0: float, nu: float, n_eff: float,
                   rel_tol: float) -> np.ndarray:
    """sum_j (-u0)^(nu+j) GammaRatio(n_eff, nu, j) h_j with principal powers.

    A series shorter than 16 coefficients is treated as a deliberate
    truncation and summed in full without the convergence demand.
    """
    minus_u0 = complex(-u0)
    acc = np.zeros(2, dtype=complex)
    power = minus_u0 ** nu
    for j in range(len(coeffs)):
        term = power * gamma_ratio(n_eff, nu, j) * coeffs[j]
        acc = acc + term
        power = power * minus_u0
        if j >= 4 and np.max(np.abs(term)) <= rel_tol * max(np.max(np.abs(acc)), 1e-300):
            return acc
        if j + 1 >= MAX_TERMS:
            break
    if len(coeffs) < 16:
        return acc
    raise SlowConvergence(
        f"factorial series not below rel_tol={rel_tol} within {len(coeffs)} terms; "
        "increase n_terms or loosen rel_tol (the remapped series converges "
        "only at a power-law rate)")


def factorial_b(series: FrobeniusSeries, n: int,
                rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """Term b_n of the recurrence solution attached to this local series.

    Contour selection follows the exponent: loop for non-integer nu,
    segment [0, u0] for positive integer nu (the local solution vanishes at
    u0), pure residue for negative integer nu without logarithm, and the
    residue-plus-segment split for the logarithmic solution.
    """
    if n < 2:
        raise ValueError("the transform represents the recurrence only for n >= 2")
    u0, nu = series.base_point, series.exponent
    m = round(nu)
    integer_nu = abs(nu - m) < 1e-9

    if series.log_coupling is not None:
        return _factorial_b_log(series, n, rel_tol)

    if not integer_nu:
        pref = 1.0 - np.exp(2j * np.pi * nu)
    elif m >= 1:
        pref = 1.0 + 0.0j                              # segment contour
    else:
        # meromorphic single-valued solution: loop integral = 2 pi i residue
        return 2j * np.pi * _residue_sum(series, n) * math.exp(-gammaln(n + 1))
    s = _factorial_sum(series.coeffs, u0, nu, float(n), rel_tol)
    return pref * u0 ** (n + 1) * np.exp(-gammaln(n + 1)) * s


def factorial_b_scaled(series: FrobeniusSeries, n: int,
                       rel_tol: float = DEFAULT_REL_TOL
                       ) -> tuple[np.ndarray, int]:
    """(mantissa, base-2 exponent) form of b_n; the plain value underflows
    doubles past n ~ 150 because of the u0^(n+1)/n! scale."""
    if n < 2:
        raise ValueError("the transform represents the recurrence only for n >= 2")
    u0, nu = series.base_point, series.exponent
    if series.log_coupling is not None or abs(nu - round(nu)) < 1e-9:
        raise ValueError("scaled evaluation supports the loop contour only")
    pref = 1.0 - np.exp(2j * np.pi * nu)
    s = _factorial_sum(series.coeffs, u0, nu, float(n), rel_tol)
    ln_scale = (n + 1) * math.log(abs(u0)) - gammaln(n + 1)
    e2 = int(math.floor(ln_scale / math.log(2.0)))
    mant = pref * math.exp(ln_scale - e2 * math.log(2.0)) * s
    if u0 < 0 and (n + 1) % 2:
        mant = -mant
    return mant, e2


def _residue_sum(series: FrobeniusSeries, n: int) -> np.ndarray:
    """res_{u0} u^n v1(u) for a pole of order m at u0."""
    u0 = series.base_point
    m = -round(series.exponent)
    acc = np.zeros(2, dtype=complex)
    for i in range(min(m, n + 1)):
        acc += binom(n, i) * u0 ** (n - i) * series.coeffs[m - 1 - i]
    return acc


def _factorial_b_log(series: FrobeniusSeries, n: int, rel_tol: float) -> np.ndarray:
    """b_n = (2 pi i / n!) [res_{u0}(u^n v1) - c * int_0^{u0} u^n v2 du]."""
    u0 = series.base_point
    res = _residue_sum(series, n)
    line_sum = _factorial_sum(series.log_coeffs, u0, 0.0, float(n), rel_tol)
    line = u0 ** (n + 1) * line_sum
    return 2j * np.pi * (res - series.log_coupling * line) * math.exp(-gammaln(n + 1))


# ---------------------------------------------------------------------------
# change of variable w = (u/u0)^p for kappa > 1/sqrt(2)
# ---------------------------------------------------------------------------

def remap_power(kappa: float) -> float:
    return max(1.0, 1.0 / (2.0 * (1.0 - kappa)))


@functools.lru_cache(maxsize=32)
def binomial_power_table(p: float, size: int) -> np.ndarray:
    """A[m, j]: (w^(1/p) - 1)^m = sum_j A[m, j] (w - 1)^j; A[0, j] = delta_0j."""
    A = np.zeros((size, size))
    A[0, 0] = 1.0
    b = np.array([binom(1.0 / p, l) for l in range(size)])
    for m in range(1, size):
        for j in range(m, size):
            lmax = j - m + 1
            A[m, j] = float(np.dot(b[1:lmax + 1], A[m - 1, j - 1::-1][:lmax]))
    return A


def boundary_expansion_coeffs(p: float, nu: float, size: int) -> np.ndarray:
    """B_j with (w^(1/p) - 1)^nu = (w - 1)^nu sum_j B_j (w - 1)^j.

    Factor out (w-1)/p: the remainder is analytic with value 1 at w = 1 and
    its nu-th power follows from the power-of-series recurrence.
    """
    g = np.array([p * binom(1.0 / p, k + 1) for k in range(size)])  # g[0] = 1
    P = np.zeros(size)
    P[0] = 1.0
    for n in range(1, size):
        P[n] = sum((k * (nu + 1.0) - n) * g[k] * P[n - k]
                   for k in range(1, n + 1)) / n
    return p ** (-nu) * P


def h_coeffs_by_tables(series: FrobeniusSeries, A: np.ndarray,
                       B: np.ndarray) -> np.ndarray:
    """The defining relation H_j = u0^nu sum_k B_{j-k} sum_m A_{m,k} h_m u0^m.

    Exact in exact arithmetic, but h_m u0^m grows geometrically whenever the
    expansion point is closer to another singular point than to the origin
    (the very situation the remap exists for), so in doubles the high-j
    output loses up to ~log10(|h_j u0^j|) digits to cancellation.  Kept as
    the reference relation; the production path below builds H by the
    Frobenius recursion in the w variable instead.
    """
    u0, nu = series.base_point, series.exponent
    J = series.n_terms
    hu = series.coeffs * (u0 ** np.arange(J))[:, None]        # h_m u0^m
    inner = A.T @ hu                                          # sum_m A[m,k] h_m u0^m
    H = np.zeros((J, 2), dtype=complex)
    for j in range(J):
        H[j] = (B[j::-1, None] * inner[:j + 1]).sum(axis=0)
    return complex(u0) ** nu * H


def _series_reciprocal(d: np.ndarray, J: int) -> np.ndarray:
    r = np.zeros(J, dtype=d.dtype)
    r[0] = 1.0 / d[0]
    for k in range(1, J):
        r[k] = -np.dot(d[1:k + 1], r[k - 1::-1]) / d[0]
    return r


def _wplane_local_expansion(sys: MellinSystem, u0: float, p: float, J: int
                            ) -> tuple[np.ndarray, list[np.ndarray]]:
    """Residue and Taylor coefficients at w=1 of the transformed system
    dv/dw = (u0/p) w^(1/p-1) M(u0 w^(1/p)) v, in powers of s = w-1.

    The residue matrix is unchanged by the conformal change of variable;
    every series here has O(1) coefficients, so no cancellation occurs.
    """
    pow_jac = np.array([binom(1.0 / p - 1.0, k) for k in range(J + 1)])
    R0 = sys.residue_matrices[u0]
    # enclosed pole: u0[(1+s)^(1/p) - 1] = (u0/p) s q(s), q(0) = 1
    q = np.array([p * binom(1.0 / p, k + 1) for k in range(J + 1)])
    E = np.convolve(pow_jac, _series_reciprocal(q, J + 1))[:J + 1]
    taylor = [E[k + 1] * R0 for k in range(J)]
    for ps, R in sys.residue_matrices.items():
        if ps == u0:
            continue
        d = u0 * np.array([binom(1.0 / p, k) for k in range(J + 1)])
        d[0] = u0 - ps
        piece = (u0 / p) * np.convolve(pow_jac, _series_reciprocal(d, J + 1))[:J]
        for k in range(J):
            taylor[k] = taylor[k] + piece[k] * R
    return R0, taylor


def remap_series(series: FrobeniusSeries, kappa: float,
                 p: float | None = None) -> RemappedSeries:
    """Remapped coefficients H_j of v as a series in (w-1), w = (u/u0)^p.

    H is generated by the Frobenius recursion of the w-plane system, seeded
    with H_0 = u0^nu p^(-nu) h_0 so that it carries exactly the
    normalization of the defining relation (see h_coeffs_by_tables); the
    A and B tables are carried along as the relation's data.
    """
    if series.log_coupling is not None:
        raise ValueError("remap of the logarithmic solution is not supported")
    p = remap_power(kappa) if p is None else p
    u0, nu = series.base_point, series.exponent
    J = series.n_terms
    A = binomial_power_table(p, J)
    B = boundary_expansion_coeffs(p, nu, J)
    if series.system is None:
        raise ValueError("remap needs the series' originating system")
    sys = series.system
    R0, taylor = _wplane_local_expansion(sys, u0, p, J)
    H = np.zeros((J, 2), dtype=complex)
    H[0] = complex(u0) ** nu * p ** (-nu) * series.coeffs[0]
    eye = np.eye(2)
    for j in range(1, J):
        rhs = -sum(taylor[k] @ H[j - 1 - k] for k in range(j))
        H[j] = np.linalg.solve(R0 - (nu + j) * eye, rhs)
    return RemappedSeries(p=p, base_point=u0, exponent=nu,
                          H_coeffs=H, A_table=A, B_coeffs=B)


REMAP_REL_TOL = 1e-10


def remap_and_b(remapped: RemappedSeries, n: int,
                rel_tol: float = REMAP_REL_TOL) -> np.ndarray:
    """b_n from the remapped series; exact substitution gives the Gamma
    argument (n+1)/p and prefactor u0^(n+1)/p.

    The change of variable puts the image of u=0 on the boundary of the
    H-series disk (the branch point of w^(1/p)), so the terms decay only
    like a power of j and the truncation error is ~ j_stop times the last
    term; the default tolerance absorbs that factor.
    """
    if n < 2:
        raise ValueError("the transform represents the recurrence only for n >= 2")
    u0, nu, p = remapped.base_point, remapped.exponent, remapped.p
    pref = 1.0 - np.exp(2j * np.pi * nu)
    n_eff = (n + 1.0) / p - 1.0
    s = _factorial_sum(remapped.H_coeffs, 1.0, nu, n_eff, rel_tol)
    return pref * u0 ** (n + 1) / p * np.exp(-gammaln(n + 1)) * s


# ---------------------------------------------------------------------------
# linear-dependence (rank) test
# ---------------------------------------------------------------------------

def reflected_pair(b_n0: np.ndarray, b_n1: np.ndarray, n0: int
                   ) -> tuple[np.ndarray, np.ndarray]:
    """Solution at -u0 from the one at u0: b-_n = (-1)^(n+1) sigma_x b+_n."""
    return ((-1.0) ** (n0 + 1) * SIGMA_X @ b_n0,
            (-1.0) ** (n0 + 2) * SIGMA_X @ b_n1)


def _pair_at(source, n0: int, rel_tol: float) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(source, FrobeniusSeries):
        return factorial_b(source, n0, rel_tol), factorial_b(source, n0 + 1, rel_tol)
    if isinstance(source, RemappedSeries):
        tol = max(rel_tol, REMAP_REL_TOL)
        return remap_and_b(source, n0, tol), remap_and_b(source, n0 + 1, tol)
    if isinstance(source, CoefficientSequence):
        return source.value(n0), source.value(n0 + 1)
    b0, b1 = source
    return np.asarray(b0, dtype=complex), np.asarray(b1, dtype=complex)


def rank_condition(a, b_plus, b_minus, n0: int = 20,
                   rel_tol: float = DEFAULT_REL_TOL) -> list[complex]:
    """The four 3x3 minors of [(a, b+, b-) at rows n0, n0+1], columns
    unit-normalized.  chi belongs to the spectrum when all minors vanish.

    Inputs may be CoefficientSequence, FrobeniusSeries / RemappedSeries, or
    explicit (vec, vec) pairs.
    """
    if n0 < 2:
        raise ValueError("n0 must be >= 2")
    cols = [_pair_at(src, n0, rel_tol) for src in (a, b_plus, b_minus)]
    M = np.zeros((4, 3), dtype=complex)
    for c, (v0, v1) in enumerate(cols):
        M[:2, c] = v0
        M[2:, c] = v1
    norms = np.linalg.norm(M, axis=0)
    if np.any(norms == 0.0):
        raise ValueError("zero column in the rank test")
    M = M / norms
    return [complex(np.linalg.det(M[list(rows)]))
            for rows in itertools.combinations(range(4), 3)]
