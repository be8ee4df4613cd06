"""Independent reference implementations used only by the tests.

Everything here deliberately avoids the production code paths it checks:
exact rational arithmetic for the coefficient recurrence, mpmath
reimplementations of the local series and its transform, plain quadrature
for contour integrals.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp
import numpy as np
from scipy.integrate import quad


# ---------------------------------------------------------------------------
# exact-rational recurrence
# ---------------------------------------------------------------------------

def rational_E(chi: Fraction, kappa: Fraction) -> Fraction:
    return 2 * (1 - kappa * kappa) * (chi - 1) / kappa - kappa


def rational_recurrence(kappa: Fraction, mu: Fraction, chi: Fraction,
                        a0: tuple[int, int], n_max: int,
                        odd: bool = False) -> list[tuple[Fraction, Fraction]]:
    """Terms 0..n_max of the coefficient recurrence in exact arithmetic."""
    E = rational_E(chi, kappa)
    x = (kappa + 1 / kappa) / 2
    prev = (Fraction(a0[0]), Fraction(a0[1]))
    prev2 = (Fraction(0), Fraction(0))
    out = [prev]
    for n in range(1, n_max + 1):
        den = Fraction(2 * n * (2 * n - 1))
        d = E - 2 * x * (2 * n - 1) if odd else E - 4 * x * (n - 1)
        new = ((d * prev[0] - mu * prev[1] - prev2[0]) / den,
               (mu * prev[0] - d * prev[1] - prev2[1]) / den)
        out.append(new)
        prev2, prev = prev, new
    return out


# ---------------------------------------------------------------------------
# high-precision recurrence sequence in mantissa/exponent form
# ---------------------------------------------------------------------------

def mp_sequence_terms(kappa: float, mu: float, chi, s: complex, n_max: int,
                      odd: bool = False, dps: int = 250):
    """(mantissas, exponents) of the recurrence solution, scaled per term."""
    with mp.workdps(dps):
        kap, muu = mp.mpf(kappa), mp.mpf(mu)
        chi_mp = chi if isinstance(chi, mp.mpf) else mp.mpf(repr(chi))
        E = 2 * (1 - kap ** 2) * (chi_mp - 1) / kap - kap
        x = (kap + 1 / kap) / 2
        s = complex(s)
        first = [mp.mpc(1), mp.mpc(1)] if s in (1, 1j) else [mp.mpc(1), mp.mpc(-1)]
        prev, prev2 = first, [mp.mpc(0), mp.mpc(0)]
        mants = np.zeros((n_max + 1, 2), dtype=complex)
        exps = np.zeros(n_max + 1, dtype=np.int64)
        mants[0] = [complex(v) for v in first]
        for n in range(1, n_max + 1):
            den = mp.mpf(2 * n * (2 * n - 1))
            d = E - 2 * x * (2 * n - 1) if odd else E - 4 * x * (n - 1)
            new = [(d * prev[0] - muu * prev[1] - prev2[0]) / den,
                   (muu * prev[0] - d * prev[1] - prev2[1]) / den]
            prev2, prev = prev, new
            m = max(abs(v) for v in new)
            e = int(mp.floor(mp.log(m, 2))) if m > 0 else 0
            mants[n] = [complex(v / mp.mpf(2) ** e) for v in new]
            exps[n] = e
        return mants, exps


# ---------------------------------------------------------------------------
# mpmath local series + factorial series (independent of the numpy path)
# ---------------------------------------------------------------------------

def mp_frobenius_and_b(kappa: float, mu: float, chi: float, ns: list[int],
                       n_terms: int = 60, dps: int = 50):
    """b_n at +kappa/2 with exponent -chi, entirely in mpmath."""
    with mp.workdps(dps):
        kap, muu = mp.mpf(kappa), mp.mpf(mu)
        chi_mp = mp.mpf(repr(chi))
        E = 2 * (1 - kap ** 2) * (chi_mp - 1) / kap - kap
        x = (kap + 1 / kap) / 2
        u0 = kap / 2
        nu = -chi_mp

        pts_row1 = [-kap / 2, -1 / (2 * kap)]
        pts_row2 = [kap / 2, 1 / (2 * kap)]
        res = {}
        for p in pts_row1:
            R = [[-(6 * p + 4 * x + E) / (8 * p + 4 * x),
                  muu / (8 * p + 4 * x)], [mp.mpf(0), mp.mpf(0)]]
            res[p] = R
        for p in pts_row2:
            R = [[mp.mpf(0), mp.mpf(0)],
                 [-muu / (8 * p - 4 * x), -(6 * p - 4 * x - E) / (8 * p - 4 * x)]]
            res[p] = R

        def mat_sub(A, B):
            return [[A[i][j] - B[i][j] for j in range(2)] for i in range(2)]

        def mat_vec(A, v):
            return [A[0][0] * v[0] + A[0][1] * v[1],
                    A[1][0] * v[0] + A[1][1] * v[1]]

        others = [(p, R) for p, R in res.items() if p != u0]
        taylor = []
        for k in range(n_terms):
            T = [[mp.mpf(0)] * 2 for _ in range(2)]
            for p, R in others:
                f = 1 / (p - u0) ** (k + 1)
                for i in range(2):
                    for j in range(2):
                        T[i][j] -= R[i][j] * f
            taylor.append(T)

        R0 = res[u0]
        # indicial null vector of (R0 - nu): R0 row1 is zero here
        # (R0 - nu) h0 = 0 with R0 = [[0,0],[r, t]]: h0 = [nu - t, r] ... solve 2x2
        A = mat_sub(R0, [[nu, 0], [0, nu]])
        # null vector via adjugate: [A01, -A00] or [A11, -A10]
        cand1 = [A[0][1], -A[0][0]]
        cand2 = [A[1][1], -A[1][0]]
        h0 = cand1 if max(abs(c) for c in cand1) > max(abs(c) for c in cand2) else cand2
        # match the production convention: unit norm, largest component
        # real positive
        big = h0[0] if abs(h0[0]) >= abs(h0[1]) else h0[1]
        scale = (big / abs(big)) * mp.sqrt(h0[0] ** 2 + h0[1] ** 2)
        h0 = [c / scale for c in h0]
        hs = [h0]
        for j in range(1, n_terms):
            rhs = [mp.mpf(0), mp.mpf(0)]
            for k in range(j):
                t = mat_vec(taylor[k], hs[j - 1 - k])
                rhs[0] -= t[0]
                rhs[1] -= t[1]
            Aj = mat_sub(R0, [[nu + j, 0], [0, nu + j]])
            det = Aj[0][0] * Aj[1][1] - Aj[0][1] * Aj[1][0]
            hs.append([(Aj[1][1] * rhs[0] - Aj[0][1] * rhs[1]) / det,
                       (-Aj[1][0] * rhs[0] + Aj[0][0] * rhs[1]) / det])

        pref = 1 - mp.e ** (2j * mp.pi * nu)
        out = []
        for n in ns:
            acc = [mp.mpc(0), mp.mpc(0)]
            for j in range(n_terms):
                g = (mp.gamma(n + 1) * mp.gamma(1 + nu + j)
                     / mp.gamma(2 + n + nu + j))
                w = (mp.mpc(-u0)) ** (nu + j) * g
                acc[0] += w * hs[j][0]
                acc[1] += w * hs[j][1]
            scale = pref * u0 ** (n + 1) / mp.gamma(n + 1)
            out.append([scale * acc[0], scale * acc[1]])
        return out


def mp_refine_eigen_chi(kappa: float, mu: float, chi_center: float, s: complex,
                        n0: int = 230, halfwidth: float = 2e-5,
                        dps: int = 340, iters: int = 430):
    """Eigenvalue chi to ~4^(-n0) precision, by bisecting the sign change of
    the dominant rank minor with the factorial-series columns frozen at the
    bracket center (their chi-dependence shifts the zero by less than the
    target width).  Returns an mp.mpf carrying far more digits than a double."""
    with mp.workdps(dps):
        bs = mp_frobenius_and_b(kappa, mu, chi_center, [n0, n0 + 1],
                                n_terms=60, dps=dps)
        bp = [bs[0][0], bs[0][1], bs[1][0], bs[1][1]]
        sgn0, sgn1 = (-1) ** (n0 + 1), (-1) ** (n0 + 2)
        bm = [sgn0 * bs[0][1], sgn0 * bs[0][0], sgn1 * bs[1][1], sgn1 * bs[1][0]]

        def norm4(v):
            m = mp.sqrt(sum((x.real ** 2 + x.imag ** 2) for x in v))
            return [x / m for x in v]

        bp, bm = norm4(bp), norm4(bm)

        all_rows = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))

        def minors(chi_mp):
            kap, muu = mp.mpf(kappa), mp.mpf(mu)
            E = 2 * (1 - kap ** 2) * (chi_mp - 1) / kap - kap
            x = (kap + 1 / kap) / 2
            first = ([mp.mpc(1), mp.mpc(1)] if complex(s) in (1, 1j)
                     else [mp.mpc(1), mp.mpc(-1)])
            prev, prev2 = first, [mp.mpc(0), mp.mpc(0)]
            keep = {}
            for n in range(1, n0 + 2):
                den = mp.mpf(2 * n * (2 * n - 1))
                dd = E - 4 * x * (n - 1)
                new = [(dd * prev[0] - muu * prev[1] - prev2[0]) / den,
                       (muu * prev[0] - dd * prev[1] - prev2[1]) / den]
                prev2, prev = prev, new
                if n in (n0, n0 + 1):
                    keep[n] = new
            a4 = norm4(keep[n0] + keep[n0 + 1])
            return [_mp_det3([[a4[r], bp[r], bm[r]] for r in rows])
                    for rows in all_rows]

        lo = mp.mpf(repr(chi_center)) - mp.mpf(repr(halfwidth))
        hi = mp.mpf(repr(chi_center)) + mp.mpf(repr(halfwidth))
        ms_lo, ms_hi = minors(lo), minors(hi)
        idx = max(range(4), key=lambda i: abs(ms_lo[i]))

        def minor(chi_mp):
            return minors(chi_mp)[idx]

        mlo, mhi = ms_lo[idx], ms_hi[idx]
        ph = mlo / abs(mlo)
        glo, ghi = (mlo / ph).real, (mhi / ph).real
        assert glo * ghi < 0, "no minor sign change in the refine bracket"
        for _ in range(iters):
            mid = (lo + hi) / 2
            gm = (minor(mid) / ph).real
            if gm == 0:
                return mid
            if glo * gm < 0:
                hi = mid
            else:
                lo, glo = mid, gm
        return (lo + hi) / 2


def _mp_det3(rows):
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def mp_forward_from_pair(kappa: float, mu: float, chi: float, b0, b1,
                         n0: int, k_steps: int, dps: int = 50):
    """Run the recurrence forward from (b_n0, b_n0+1) given as mp pairs."""
    with mp.workdps(dps):
        kap, muu = mp.mpf(kappa), mp.mpf(mu)
        chi_mp = mp.mpf(repr(chi))
        E = 2 * (1 - kap ** 2) * (chi_mp - 1) / kap - kap
        x = (kap + 1 / kap) / 2
        prev2, prev = list(b0), list(b1)
        out = {n0: list(b0), n0 + 1: list(b1)}
        for n in range(n0 + 2, n0 + k_steps + 1):
            den = mp.mpf(2 * n * (2 * n - 1))
            d = E - 4 * x * (n - 1)
            new = [(d * prev[0] - muu * prev[1] - prev2[0]) / den,
                   (muu * prev[0] - d * prev[1] - prev2[1]) / den]
            prev2, prev = prev, new
            out[n] = list(new)
        return out


# ---------------------------------------------------------------------------
# quadrature oracles
# ---------------------------------------------------------------------------

def loop_trace_integral(sys, scale: float = 1.0) -> complex:
    r"""\oint tr M du over the default loop, by adaptive real quadrature."""
    k = sys.params.kappa
    d = (k / 2.0 + 1.0 / (2.0 * k)) / 2.0 * scale

    def integrand(t: float) -> complex:
        g = (d / 2.0) * (1.0 - np.exp(2j * np.pi * t))
        gd = -(d / 2.0) * 2j * np.pi * np.exp(2j * np.pi * t)
        return gd * np.trace(sys.matrix(g))

    re = quad(lambda t: integrand(t).real, 0.0, 1.0, limit=400)[0]
    im = quad(lambda t: integrand(t).imag, 0.0, 1.0, limit=400)[0]
    return complex(re, im)


def residue_by_quadrature(sys, point: float, radius: float = 1e-2,
                          nodes: int = 2048) -> np.ndarray:
    r"""(1/2 pi i) \oint M(u) du on a small circle around one pole."""
    ts = (np.arange(nodes) + 0.5) / nodes
    acc = np.zeros((2, 2), dtype=complex)
    for t in ts:
        u = point + radius * np.exp(2j * np.pi * t)
        du = radius * 2j * np.pi * np.exp(2j * np.pi * t)
        acc += sys.matrix(u) * du
    return acc / nodes / (2j * np.pi)


def quad_mellin_b(sys, series, ns, loop_scale: float = 1.0,
                  tol: float = 1e-12, nodes: int = 6001,
                  seed_offset: float | None = None) -> np.ndarray:
    r"""(1/n!) \oint u^n v du with v continued along the loop by the ODE,
    seeded by the principal-branch series value (at u=0, or carried from
    u0-seed_offset when the series does not converge at 0)."""
    from scipy.special import gammaln
    from tprabi.contour_holonomy import ContourPath, integrate_fundamental

    u0 = series.base_point
    if seed_offset is None:
        v0 = series.evaluate(0.0)
    else:
        us = u0 - seed_offset
        v_us = series.evaluate(us)
        seg = ContourPath.segment(us, 0.0)
        v0 = integrate_fundamental(sys, seg, tol, y0=v_us)
    k = sys.params.kappa
    d = (k / 2.0 + 1.0 / (2.0 * k)) / 2.0 * loop_scale
    sgn = 1.0 if u0 > 0 else -1.0
    loop = ContourPath.circle_through(sgn * d, enclosed=u0)
    _, dense = integrate_fundamental(sys, loop, tol, y0=v0, dense=True)
    ts = np.linspace(0.0, 1.0, nodes)
    g = sgn * (d / 2.0) * (1.0 - np.exp(2j * np.pi * ts))
    gd = -sgn * (d / 2.0) * 2j * np.pi * np.exp(2j * np.pi * ts)
    vs = dense(ts)
    out = []
    for n in ns:
        integ = g ** n * vs * gd
        out.append(np.trapezoid(integ, ts, axis=1) * np.exp(-gammaln(n + 1)))
    return np.array(out)


def segment_mellin_b(series, n: int) -> np.ndarray:
    r"""(1/n!) \int_0^{u0} u^n v du by adaptive quadrature of the series."""
    from scipy.special import gammaln

    u0 = series.base_point

    def f(t: float, comp: int, part: str) -> float:
        v = series.evaluate(t * u0)[comp] * (t * u0) ** n * u0
        return v.real if part == "re" else v.imag

    out = np.zeros(2, dtype=complex)
    for comp in (0, 1):
        re = quad(lambda t: f(t, comp, "re"), 0.0, 1.0, limit=400)[0]
        im = quad(lambda t: f(t, comp, "im"), 0.0, 1.0, limit=400)[0]
        out[comp] = complex(re, im)
    return out * np.exp(-gammaln(n + 1))


def bogoliubov_chis(count: int, odd: bool = False) -> np.ndarray:
    """mu = 0 closed form: chi_n = 1 + n/2, each doubly degenerate; the even
    sector takes integer n_b, the odd sector odd n_b."""
    base = 1 if odd else 0
    ns = base + 2 * np.arange((count + 1) // 2)
    chis = np.repeat(1.0 + ns / 2.0, 2)
    return chis[:count]
