"""Power-series coefficient sequences of candidate entire solutions.

Writing the wavefunction as psi(z) = f(z²) (even sector) or z f(z²)
(odd sector), the vector coefficients of f(xi) = sum_n a_n xi^n satisfy a
second-order matrix recurrence.  Even sector:

    2n(2n-1) a_n = [[E - 4x(n-1), -mu], [mu, -E + 4x(n-1)]] a_{n-1} - a_{n-2},

odd sector:

    2n(2n-1) c_n = [[E - 2x(2n-1), -mu], [mu, -E + 2x(2n-1)]] c_{n-1} - c_{n-2},

with a_0 = [1, 1] (s = +1, +i) or [1, -1] (s = -1, -i).  Terms decay roughly
like sigma^n / n!, which underflows doubles near n ~ 170, so every term is
stored as a unit-scale mantissa with a base-2 exponent.

The generic solution has growth type 1/(2 kappa); the normalizable type
kappa/2 survives only at eigenvalues, and forward iteration in double
precision loses it at a relative rate (1/kappa²) per step.  High-precision
seeds for such subdominant evaluations are provided by
``high_precision_pair``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .errors import DegenerateWindow
from .model_params import GrowthEstimate, ModelParams, Sector

# mantissa magnitudes are renormalized once they leave [2^-512, 2^512]
_SCALE_HI = 512
_SCALE_LO = -512

EVEN_SIGNS = (1, -1)
ODD_SIGNS = (1j, -1j)


def step_matrix(params: ModelParams, n: int) -> np.ndarray:
    """Coefficient matrix multiplying the previous term at step n."""
    E = params.energy
    x = params.x
    if params.sector is Sector.EVEN:
        d = E - 4.0 * x * (n - 1)
    else:
        d = E - 2.0 * x * (2 * n - 1)
    return np.array([[d, -params.mu], [params.mu, -d]])


def initial_vector(s: complex) -> np.ndarray:
    s = complex(s)
    if s in (1 + 0j, 1j):
        return np.array([1.0, 1.0], dtype=complex)
    if s in (-1 + 0j, -1j):
        return np.array([1.0, -1.0], dtype=complex)
    raise ValueError(f"parity sign must be one of ±1 (even), ±i (odd); got {s}")


@dataclass
class CoefficientSequence:
    """Scaled terms of a recurrence solution: term n = mantissas[n] * 2**exponents[n]."""

    params: ModelParams
    parity_sign: complex
    mantissas: np.ndarray          # (n_max+1, 2) complex
    exponents: np.ndarray          # (n_max+1,) int64
    sector: Sector = field(init=False)

    def __post_init__(self):
        self.sector = self.params.sector

    def __len__(self) -> int:
        return len(self.exponents)

    @property
    def n_max(self) -> int:
        return len(self.exponents) - 1

    def value(self, n: int) -> np.ndarray:
        """Unscaled term; may overflow to inf / underflow to 0 for extreme n."""
        m = self.mantissas[n]
        e = int(self.exponents[n])
        return np.array([_ldexp_c(m[0], e), _ldexp_c(m[1], e)])

    def log_magnitude(self, n: int) -> float:
        """ln max(|a_n^1|, |a_n^2|), computed without under/overflow."""
        m = float(np.max(np.abs(self.mantissas[n])))
        if m == 0.0:
            return -math.inf
        return math.log(m) + int(self.exponents[n]) * math.log(2.0)

    def residual(self, n: int) -> float:
        """Relative defect of the recurrence at term n (n >= 2)."""
        base = int(self.exponents[n])
        an = self.mantissas[n]
        an1 = self.mantissas[n - 1] * 2.0 ** float(self.exponents[n - 1] - base)
        an2 = self.mantissas[n - 2] * 2.0 ** float(self.exponents[n - 2] - base)
        lhs = 2 * n * (2 * n - 1) * an
        rhs = step_matrix(self.params, n) @ an1 - an2
        scale = np.max(np.abs(lhs))
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(lhs - rhs)) / scale)

    def to_csv(self, fh) -> None:
        fh.write("n,re_1,im_1,re_2,im_2,scale_exponent\n")
        for n in range(len(self)):
            m = self.mantissas[n]
            fh.write(f"{n},{m[0].real:.17g},{m[0].imag:.17g},"
                     f"{m[1].real:.17g},{m[1].imag:.17g},{int(self.exponents[n])}\n")


def _ldexp_c(z: complex, e: int) -> complex:
    try:
        return complex(math.ldexp(z.real, e), math.ldexp(z.imag, e))
    except OverflowError:
        return complex(math.inf if z.real > 0 else -math.inf,
                       math.inf if z.imag > 0 else -math.inf)


def _normalize(vec: np.ndarray, exponent: int) -> tuple[np.ndarray, int]:
    m = float(np.max(np.abs(vec)))
    if m == 0.0 or 2.0 ** _SCALE_LO <= m <= 2.0 ** _SCALE_HI:
        return vec, exponent
    shift = int(math.floor(math.log2(m)))
    return vec * 2.0 ** float(-shift), exponent + shift


def _generate(params: ModelParams, s: complex, n_max: int,
              initial: np.ndarray | None = None) -> CoefficientSequence:
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    a0 = initial_vector(s) if initial is None else np.asarray(initial, dtype=complex)
    mants = np.zeros((n_max + 1, 2), dtype=complex)
    exps = np.zeros(n_max + 1, dtype=np.int64)
    mants[0] = a0
    prev2, e2 = np.zeros(2, dtype=complex), 0     # term n-2
    prev1, e1 = a0.copy(), 0                      # term n-1
    for n in range(1, n_max + 1):
        # work in the frame of term n-1; 2^(e2-e1) <= 1 once decay sets in
        new = (step_matrix(params, n) @ prev1
               - prev2 * 2.0 ** float(e2 - e1)) / (2 * n * (2 * n - 1))
        new, e_new = _normalize(new, e1)
        mants[n], exps[n] = new, e_new
        prev2, e2 = prev1, e1
        prev1, e1 = new, e_new
    return CoefficientSequence(params=params, parity_sign=complex(s),
                               mantissas=mants, exponents=exps)


def generate_even(params: ModelParams, s: int, n_max: int,
                  initial: np.ndarray | None = None) -> CoefficientSequence:
    """Even-sector sequence a_n for parity s in {+1, -1}."""
    if params.sector is not Sector.EVEN:
        params = params.with_sector(Sector.EVEN)
    if complex(s) not in (1 + 0j, -1 + 0j):
        raise ValueError(f"even sector takes s = ±1, got {s}")
    return _generate(params, s, n_max, initial)


def generate_odd(params: ModelParams, s: complex, n_max: int,
                 initial: np.ndarray | None = None) -> CoefficientSequence:
    """Odd-sector sequence c_n for parity s in {+i, -i}."""
    if params.sector is not Sector.ODD:
        params = params.with_sector(Sector.ODD)
    if complex(s) not in (1j, -1j):
        raise ValueError(f"odd sector takes s = ±i, got {s}")
    return _generate(params, s, n_max, initial)


def growth_estimate(seq: CoefficientSequence, window: range | tuple[int, int]) -> GrowthEstimate:
    """Estimate (order, type) of the underlying entire function psi(z).

    The raw limsup formulas are noise-dominated at finite n, so both
    quantities come from least-squares fits of the asymptotic law
    ln|a_n| ~ -(1/rho_f) n ln n + c n + beta ln n + d over the window:
    the n ln n coefficient gives the order rho_f of f(xi) (psi has order
    2 rho_f), and the fit of ln(n! |a_n|) against [n, ln n, 1] gives
    ln|sigma| as the n-coefficient.  The sign of sigma is taken from the
    median of consecutive-term ratios n a_n / a_{n-1}.
    """
    if isinstance(window, tuple):
        window = range(window[0], window[1] + 1)
    if len(window) < 20:
        raise ValueError("growth window must contain at least 20 terms")
    if window.start < 0 or window.stop - 1 > seq.n_max:
        raise ValueError("window outside generated range")
    ns = np.array(list(window), dtype=float)
    logs = np.array([seq.log_magnitude(n) for n in window])
    if not np.all(np.isfinite(logs)):
        raise DegenerateWindow("coefficients vanish inside the window")

    lgam = np.array([math.lgamma(n + 1.0) for n in ns])
    # type: ln(n! |a_n|) = n ln|sigma| + beta ln n + const
    A = np.stack([ns, np.log(ns), np.ones_like(ns)], axis=1)
    coef, *_ = np.linalg.lstsq(A, logs + lgam, rcond=None)
    sigma_abs = math.exp(coef[0])

    # order: ln(1/|a_n|) = (1/rho_f) n ln n - c n - beta ln n - d
    A4 = np.stack([ns * np.log(ns), ns, np.log(ns), np.ones_like(ns)], axis=1)
    coef4, *_ = np.linalg.lstsq(A4, -logs, rcond=None)
    rho_f = 1.0 / coef4[0] if coef4[0] > 0 else math.inf

    # phase of sigma from the median of componentwise ratios n a_n / a_{n-1}
    ratios = []
    for n in window:
        if n == 0:
            continue
        v1, v0 = seq.mantissas[n], seq.mantissas[n - 1]
        de = float(seq.exponents[n] - seq.exponents[n - 1])
        i = int(np.argmax(np.abs(v0)))
        if v0[i] != 0:
            ratios.append(n * v1[i] / v0[i] * 2.0 ** de)
    if ratios:
        phases = np.array([r / abs(r) for r in ratios if abs(r) > 0])
        mean_phase = np.mean(phases)
        phase = mean_phase / abs(mean_phase) if abs(mean_phase) > 0.5 else 1.0
    else:
        phase = 1.0

    return GrowthEstimate(order=2.0 * rho_f, type_=sigma_abs * complex(phase))


def high_precision_pair(params: ModelParams, s: complex, n0: int,
                        chi: "mp.mpf | None" = None, dps: int = 60) -> np.ndarray:
    """(a_n0, a_n0+1) as a unit-normalized 4-vector, iterated in mpmath.

    chi may be an mpmath scalar finer than double resolution; kappa and mu
    are promoted from their double values.  Used where the subdominant
    solution content of a_n must survive past the double-precision
    contamination horizon (rank-condition checks).
    """
    a0 = initial_vector(s)
    with mp.workdps(dps):
        kap = mp.mpf(params.kappa)
        muu = mp.mpf(params.mu)
        chi_mp = mp.mpf(params.require_chi()) if chi is None else chi
        E = 2 * (1 - kap ** 2) * (chi_mp - 1) / kap - kap
        x = (kap + 1 / kap) / 2
        odd = params.sector is Sector.ODD
        prev = [mp.mpc(a0[0]), mp.mpc(a0[1])]
        prev2 = [mp.mpc(0), mp.mpc(0)]
        out = {}
        for n in range(1, n0 + 2):
            den = mp.mpf(2 * n * (2 * n - 1))
            d = E - 2 * x * (2 * n - 1) if odd else E - 4 * x * (n - 1)
            new = [(d * prev[0] - muu * prev[1] - prev2[0]) / den,
                   (muu * prev[0] - d * prev[1] - prev2[1]) / den]
            prev2, prev = prev, new
            if n in (n0, n0 + 1):
                out[n] = list(new)
        flat = out[n0] + out[n0 + 1]
        scale = max(abs(v) for v in flat)
        return np.array([complex(v / scale) for v in flat])
