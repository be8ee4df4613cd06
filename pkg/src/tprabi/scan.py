"""Grid evaluation of the spectral determinant, root refinement, and
cross-validation of the three spectral methods.

Roots of W(chi) are located in two passes: sign changes of Re W (W is
numerically real under the phase normalization of the eigenvector) are
bisected directly; residual |W| minima without a sign change get a zoomed
local search, which also resolves the extremely narrow dips that appear
next to the quasi-exact lattice when parity pairs nearly merge.  Lattice
points themselves are probed separately: a trivial holonomy there is
reported as an Emary-Bishop flag, never as a |W| minimum.

The factorial-series method discovers candidates with a low-order rank
test (order 4, where the minors vary smoothly) and then verifies each root
at the configured orders by bisecting the dominant minor's sign change
with chi carried in mpmath precision: the a-column's subdominant content
decays like kappa^(2 n0) relative to contamination, which puts the minor's
zero crossing far below double resolution at order 40.
"""

from __future__ import annotations

import dataclasses
import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np
from scipy.optimize import brentq

from .contour_holonomy import DEFAULT_TOL, default_loop, integrate_fundamental
from .errors import SolverError
from .factorial_series import (factorial_b, frobenius_at, rank_condition,
                               reflected_pair, remap_and_b, remap_series)
from .fock_oracle import eigen_chis
from .mellin_system import MellinSystem
from .model_params import ModelParams, Sector
from .recurrence import high_precision_pair
from .spectral_determinant import Branch, DeterminantSample, determinant_W

METHODS = ("holonomy", "factorial", "oracle")
REMAP_THRESHOLD = 1.0 / math.sqrt(2.0)
DISCOVERY_ORDER = 4
MATCH_WINDOW = 1e-2
DISCREPANCY_TOL = 1e-4


@dataclass(frozen=True)
class ScanConfig:
    kappa: float
    mu: float
    chi_range: tuple[float, float]
    sector: Sector = Sector.EVEN
    grid_points: int = 500
    tol_ode: float = DEFAULT_TOL
    eps_root: float = 1e-7
    eps_rank: float = 1e-6
    methods: tuple[str, ...] = ("holonomy",)
    rank_orders: tuple[int, ...] = (20, 40)
    workers: int = 1
    oracle_rtol: float = 1e-9

    def __post_init__(self):
        lo, hi = self.chi_range
        if lo > hi:
            raise ValueError("chi_range must satisfy lo <= hi")
        if self.grid_points < 2:
            raise ValueError("grid_points must be >= 2")
        for t in (self.tol_ode, self.eps_root, self.eps_rank):
            if t <= 0:
                raise ValueError("tolerances must be positive")
        bad = set(self.methods) - set(METHODS)
        if bad:
            raise ValueError(f"unknown methods {sorted(bad)}; choose from {METHODS}")
        if isinstance(self.sector, str):
            object.__setattr__(self, "sector", Sector(self.sector))

    def params(self) -> ModelParams:
        return ModelParams(kappa=self.kappa, mu=self.mu, sector=self.sector)


@dataclass
class RootRecord:
    chi: float
    method: str
    residual: float
    parity: complex | None = None


@dataclass
class EmaryBishopFlag:
    chi: float
    sector: Sector
    deviation: float            # |F+ - 1| at the flagged point


@dataclass
class ScanReport:
    config: ScanConfig
    samples: list[DeterminantSample] = field(default_factory=list)
    roots: list[RootRecord] = field(default_factory=list)
    emary_bishop_flags: list[EmaryBishopFlag] = field(default_factory=list)
    method_discrepancies: list[dict] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)


def _grid(cfg: ScanConfig) -> np.ndarray:
    lo, hi = cfg.chi_range
    h = (hi - lo) / cfg.grid_points
    # half-step offset keeps nodes off the quasi-exact lattice
    return lo + (np.arange(cfg.grid_points) + 0.5) * h


def _special_chis(cfg: ScanConfig) -> list[float]:
    lo, hi = cfg.chi_range
    first = math.ceil(lo) if cfg.sector is Sector.EVEN else math.ceil(lo - 0.5) + 0.5
    out = []
    c = first
    while c <= hi:
        out.append(float(c))
        c += 1.0
    return out


def scan_determinant(cfg: ScanConfig) -> ScanReport:
    """Determinant samples on the grid, refined roots, quasi-exact flags."""
    report = ScanReport(config=cfg)
    lo, hi = cfg.chi_range
    if lo == hi:
        return report
    params = cfg.params()
    grid = _grid(cfg)

    def sample(chi: float) -> DeterminantSample | None:
        try:
            return determinant_W(params.with_chi(chi), cfg.tol_ode)
        except SolverError as exc:
            report.errors.append(f"chi={chi!r}: {type(exc).__name__}: {exc}")
            return None

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            samples = list(pool.map(sample, grid))
    else:
        samples = [sample(c) for c in grid]
    report.samples.extend(s for s in samples if s is not None)

    def w_real(chi: float) -> float:
        s = sample(chi)
        return math.nan if s is None else s.W.real

    def w_abs(chi: float) -> float:
        s = sample(chi)
        return math.inf if s is None else abs(s.W)

    roots: list[float] = []

    def add_root(chi: float) -> None:
        """Accept a bisected sign-change crossing of Re W.

        W is real up to integrator noise, but next to a nearly merged
        parity pair the noise is amplified by the small eigenvalue gap
        into an |Im W| floor that can exceed eps_root even though the
        crossing itself is sharp; the acceptance therefore gates the
        real part, with a sanity cap on the floor.
        """
        s = sample(chi)
        if s is None:
            return
        if not (abs(s.W) < cfg.eps_root
                or (abs(s.W.real) < cfg.eps_root
                    and abs(s.W.imag) < 1e3 * cfg.eps_root)):
            return
        if cfg.sector.is_special_chi(chi, tol=1e-9):
            return  # lattice points are reported through the flag channel
        if all(abs(chi - r) > 1e-8 for r in roots):
            roots.append(chi)
            report.roots.append(RootRecord(chi=chi, method="holonomy",
                                           residual=abs(s.W.real)))

    # pass 1: sign changes of Re W between adjacent nodes; the half-step
    # grid offset leaves half-cells at both range ends, so the endpoints
    # are bracketed as well
    nodes = np.concatenate([[lo], grid, [hi]])
    node_samples = [sample(lo)] + samples + [sample(hi)]
    for i in range(len(nodes) - 1):
        sa, sb = node_samples[i], node_samples[i + 1]
        if sa is None or sb is None:
            continue
        wa, wb = sa.W.real, sb.W.real
        if wa == 0.0:
            add_root(nodes[i])
        elif wa * wb < 0.0:
            try:
                add_root(brentq(w_real, nodes[i], nodes[i + 1], xtol=1e-15))
            except ValueError:
                pass

    # pass 2: interior |W| minima without a sign change (tangential or
    # unresolved double roots)
    absW = [math.inf if s is None else abs(s.W) for s in samples]
    for i in range(1, len(grid) - 1):
        if absW[i] < 0.6 * min(absW[i - 1], absW[i + 1]):
            if any(grid[i - 1] <= r <= grid[i + 1] for r in roots):
                continue
            for r in _zoomed_minima(w_real, w_abs, grid[i - 1], grid[i + 1],
                                    cfg.eps_root):
                add_root(r)

    # lattice probes: flags plus a zoomed search for adjacent narrow dips
    h = (hi - lo) / cfg.grid_points
    for c in _special_chis(cfg):
        try:
            s = determinant_W(params.with_chi(c), cfg.tol_ode)
            report.samples.append(s)
            if s.branch in (Branch.IDENTITY_POSITIVE, Branch.IDENTITY_NEGATIVE):
                sys = MellinSystem(params.with_chi(c))
                F = integrate_fundamental(sys, default_loop(params.with_chi(c)),
                                          cfg.tol_ode)
                dev = float(np.max(np.abs(F - np.eye(2))))
                report.emary_bishop_flags.append(
                    EmaryBishopFlag(chi=c, sector=cfg.sector, deviation=dev))
        except SolverError as exc:
            report.errors.append(f"chi={c!r}: {type(exc).__name__}: {exc}")
        window = max(1.5 * h, 5e-3)
        if any(abs(r - c) <= window for r in roots):
            continue
        if any(abs(f.chi - c) < 1e-12 for f in report.emary_bishop_flags):
            continue
        for r in _lattice_zoom(w_real, w_abs, c, window, cfg.eps_root):
            add_root(r)

    report.roots.sort(key=lambda r: r.chi)
    return report


def _bisect_level(w_real, w_abs, ts, vals, eps_root, found) -> None:
    # the final eps_root acceptance happens in add_root; here only garbage
    # is filtered (a loose cap, since the gap-amplified |Im W| floor can sit
    # well above eps_root at a genuine crossing)
    for i in range(len(ts) - 1):
        va, vb = vals[i], vals[i + 1]
        if math.isnan(va) or math.isnan(vb) or va * vb >= 0.0:
            continue
        try:
            r = brentq(w_real, ts[i], ts[i + 1], xtol=1e-15)
        except ValueError:
            continue
        if w_abs(r) < 1e3 * eps_root and all(abs(r - f) > 1e-8 for f in found):
            found.append(r)


def _zoomed_minima(w_real, w_abs, lo: float, hi: float, eps_root: float,
                   levels: int = 4, points: int = 33) -> list[float]:
    """Zoom onto a residual |W| dip without a grid-level sign change."""
    found: list[float] = []
    best_prev = math.inf
    for _ in range(levels):
        ts = np.linspace(lo, hi, points)
        vals = [w_real(t) for t in ts]
        _bisect_level(w_real, w_abs, ts, vals, eps_root, found)
        if found:
            return found
        absv = [abs(v) if not math.isnan(v) else math.inf for v in vals]
        i_min = int(np.argmin(absv))
        if absv[i_min] >= best_prev * 0.5:
            break     # not improving: no root here
        best_prev = absv[i_min]
        span = (hi - lo) / (points - 1)
        lo = max(lo, ts[i_min] - 2 * span)
        hi = min(hi, ts[i_min] + 2 * span)
    return found


def _lattice_zoom(w_real, w_abs, center: float, width: float, eps_root: float,
                  levels: int = 9, points: int = 33) -> list[float]:
    """Contracting search around a lattice point for nearly merged parity
    pairs: as mu -> 0 the two zeros straddle the lattice point at a distance
    far below any grid resolution, with |W| plateauing away from them.  The
    window contracts toward the center until the sign changes appear or the
    sampled values stabilize (no dip: nothing to find).
    """
    found: list[float] = []
    stable = 0
    prev_min = math.inf
    for _ in range(levels):
        ts = np.linspace(center - width, center + width, points)
        vals = [w_real(t) for t in ts]
        _bisect_level(w_real, w_abs, ts, vals, eps_root, found)
        if found:
            return found
        absv = [abs(v) if not math.isnan(v) else math.inf for v in vals]
        m = min(absv)
        if abs(m - prev_min) < 0.05 * prev_min:
            stable += 1
            if stable >= 2:
                break     # smooth nonzero W: no merged pair here
        else:
            stable = 0
        prev_min = m
        width /= 8.0
        if width < 1e-11:
            break
    return found


# ---------------------------------------------------------------------------
# factorial-series (rank condition) method
# ---------------------------------------------------------------------------

def _b_pairs(params: ModelParams, chi: float, n0: int):
    """((b+_n0, b+_n0+1), (b-_n0, b-_n0+1)) at double precision."""
    k = params.kappa
    sys = MellinSystem(params.with_chi(chi))
    nu = sys.exponents_at(k / 2.0)[1]
    if k > REMAP_THRESHOLD:
        # the remapped series converges only power-law in j, and at small
        # n0 (the discovery order) the Gamma factors decay slowly too: back
        # off the tolerance there (the verification orders re-pin the root)
        series = frobenius_at(sys, k / 2.0, nu, 200)
        remapped = remap_series(series, k)
        tol = 1e-7 if n0 < 10 else 1e-10
        bp = (remap_and_b(remapped, n0, tol), remap_and_b(remapped, n0 + 1, tol))
    else:
        series = frobenius_at(sys, k / 2.0, nu, 80)
        bp = (factorial_b(series, n0), factorial_b(series, n0 + 1))
    bm = reflected_pair(bp[0], bp[1], n0)
    return bp, bm


def _minors_mp(params: ModelParams, chi_mp, s: complex, n0: int,
               b_cache: dict) -> np.ndarray:
    """Minors with the a-pair iterated in mpmath at chi_mp (b side cached
    per double chi; it varies smoothly and needs no sub-double resolution)."""
    key = (float(chi_mp), n0)
    if key not in b_cache:
        b_cache[key] = _b_pairs(params, float(chi_mp), n0)
    bp, bm = b_cache[key]
    a4 = high_precision_pair(params, s, n0, chi=chi_mp)
    M = np.zeros((4, 3), dtype=complex)
    M[:, 0] = a4
    M[:2, 1], M[2:, 1] = bp
    M[:2, 2], M[2:, 2] = bm
    M /= np.linalg.norm(M, axis=0, keepdims=True)
    return np.array([np.linalg.det(M[list(r)])
                     for r in itertools.combinations(range(4), 3)])


def _bisect_minor(params: ModelParams, lo: float, hi: float, s: complex,
                  n0: int, b_cache: dict, iters: int = 140):
    """(chi*, max|minor|) from bisecting the dominant minor's sign change,
    chi carried as an mpmath scalar; None when no sign change in [lo, hi]."""
    with mp.workdps(60):
        lo_mp, hi_mp = mp.mpf(lo), mp.mpf(hi)
        mlo = _minors_mp(params, lo_mp, s, n0, b_cache)
        i = int(np.argmax(np.abs(mlo)))
        ph = mlo[i] / abs(mlo[i])
        glo = (mlo[i] / ph).real
        ghi = (_minors_mp(params, hi_mp, s, n0, b_cache)[i] / ph).real
        if not (glo * ghi < 0.0):
            return None
        for _ in range(iters):
            mid = (lo_mp + hi_mp) / 2
            gm = (_minors_mp(params, mid, s, n0, b_cache)[i] / ph).real
            if gm == 0.0:
                lo_mp = hi_mp = mid
                break
            if glo * gm < 0.0:
                hi_mp = mid
            else:
                lo_mp, glo = mid, gm
        mid = (lo_mp + hi_mp) / 2
        residual = float(np.max(np.abs(_minors_mp(params, mid, s, n0, b_cache))))
        return float(mid), residual


def factorial_roots(cfg: ScanConfig) -> tuple[list[RootRecord], list[str]]:
    """Rank-condition roots: low-order discovery scan per parity, then
    verification at every configured order."""
    params = cfg.params()
    lo, hi = cfg.chi_range
    if lo == hi:
        return [], []
    errors: list[str] = []
    roots: list[RootRecord] = []
    n_disc = max(40, cfg.grid_points // 8)
    grid = _grid(dataclasses.replace(cfg, grid_points=n_disc))
    signs = ((1, -1) if cfg.sector is Sector.EVEN else (1j, -1j))
    b_cache: dict = {}
    for s in signs:
        vals = []
        for c in grid:
            try:
                vals.append(_minors_mp(params, mp.mpf(c), s, DISCOVERY_ORDER,
                                       b_cache))
            except SolverError as exc:
                errors.append(f"chi={c!r}: {type(exc).__name__}: {exc}")
                vals.append(None)
        for i in range(len(grid) - 1):
            ma, mb = vals[i], vals[i + 1]
            if ma is None or mb is None:
                continue
            k = int(np.argmax(np.abs(ma)))
            va, vb = ma[k], mb[k]
            if (va * vb.conjugate()).real >= 0.0:
                continue
            # candidate bracket: bisect at the discovery order first
            cand = _bisect_minor(params, grid[i], grid[i + 1], s,
                                 DISCOVERY_ORDER, b_cache)
            if cand is None:
                continue
            chi0, _ = cand
            chis, residuals = [], []
            for n0 in cfg.rank_orders:
                hit = None
                for w in (2e-5, 1e-4, 1e-3):
                    hit = _bisect_minor(params, chi0 - w, chi0 + w, s, n0, b_cache)
                    if hit is not None:
                        break
                if hit is None:
                    errors.append(f"no minor sign change at order {n0} near "
                                  f"chi={chi0}")
                    break
                chis.append(hit[0])
                residuals.append(hit[1])
            if len(chis) == len(cfg.rank_orders) and max(residuals) < cfg.eps_rank:
                roots.append(RootRecord(chi=chis[-1], method="factorial",
                                        residual=max(residuals), parity=s))
    roots.sort(key=lambda r: r.chi)
    return roots, errors


def oracle_roots(cfg: ScanConfig) -> list[RootRecord]:
    """Eigenvalues of the truncated diagonalization inside the scan range."""
    lo, hi = cfg.chi_range
    if lo == hi:
        return []
    params = cfg.params()
    target = 8
    while True:
        spec = eigen_chis(params, cfg.sector, target_count=target,
                          rtol=cfg.oracle_rtol)
        if spec.chis[-1] > hi or target >= 64:
            break
        target *= 2
    return [RootRecord(chi=float(c), method="oracle", residual=0.0)
            for c in spec.chis if lo <= c <= hi]


def match_roots(reference: list[float], candidates: list[RootRecord],
                eb_flags: list[EmaryBishopFlag] = (),
                window: float = MATCH_WINDOW):
    """Pair reference chi values with candidate roots (nearest within the
    window).  A quasi-exact flag may absorb two reference values (the two
    degenerate explicit states).  Returns (pairs, unmatched_reference,
    unused_candidates)."""
    pool: list[tuple[float, RootRecord | EmaryBishopFlag, int]] = []
    for r in candidates:
        pool.append((r.chi, r, 1))
    for f in eb_flags:
        pool.append((f.chi, f, 2))
    capacity = [c for _, _, c in pool]
    pairs, unmatched = [], []
    for ref in sorted(reference):
        best, best_d = None, window
        for idx, (chi, obj, _) in enumerate(pool):
            d = abs(chi - ref)
            if d <= best_d and capacity[idx] > 0:
                best, best_d = idx, d
        if best is None:
            unmatched.append(ref)
        else:
            capacity[best] -= 1
            pairs.append((ref, pool[best][1], best_d))
    unused = [pool[i][1] for i in range(len(pool))
              if capacity[i] == (pool[i][2])]
    return pairs, unmatched, unused


def compare_methods(cfg: ScanConfig) -> list[dict]:
    """Per-root |delta chi| across every enabled pair of methods; entries
    above the discrepancy tolerance are flagged."""
    if len(set(cfg.methods)) < 2:
        raise ValueError(
            f"compare needs at least two methods, got {sorted(set(cfg.methods))}")
    report = run_scan(cfg)
    return report.method_discrepancies


def run_scan(cfg: ScanConfig) -> ScanReport:
    """Run every configured method and assemble the combined report."""
    if "holonomy" in cfg.methods:
        report = scan_determinant(cfg)
    else:
        report = ScanReport(config=cfg)
    if "factorial" in cfg.methods:
        roots, errs = factorial_roots(cfg)
        report.roots.extend(roots)
        report.errors.extend(errs)
    if "oracle" in cfg.methods:
        report.roots.extend(oracle_roots(cfg))
    report.roots.sort(key=lambda r: r.chi)

    by_method: dict[str, list[RootRecord]] = {}
    for r in report.roots:
        by_method.setdefault(r.method, []).append(r)
    for ma, mb in itertools.combinations(sorted(by_method), 2):
        for ra in by_method[ma]:
            best = None
            for rb in by_method[mb]:
                d = abs(ra.chi - rb.chi)
                if best is None or d < best[0]:
                    best = (d, rb)
            if best is None:
                continue
            d, rb = best
            if d <= MATCH_WINDOW:
                report.method_discrepancies.append({
                    "methods": [ma, mb], "chi_a": ra.chi, "chi_b": rb.chi,
                    "delta": d, "flagged": bool(d > DISCREPANCY_TOL)})
            else:
                report.method_discrepancies.append({
                    "methods": [ma, mb], "chi_a": ra.chi, "chi_b": None,
                    "delta": None, "flagged": True})
    return report


# ---------------------------------------------------------------------------
# structured output
# ---------------------------------------------------------------------------

def write_samples_csv(report: ScanReport, fh) -> None:
    fh.write("chi,re_w,im_w,abs_w,branch\n")
    for s in sorted(report.samples, key=lambda s: s.chi):
        fh.write(f"{s.chi:.12g},{s.W.real:.12g},{s.W.imag:.12g},"
                 f"{abs(s.W):.12g},{s.branch.value}\n")


def report_to_dict(report: ScanReport) -> dict:
    cfg = report.config
    return {
        "kappa": cfg.kappa, "mu": cfg.mu, "sector": cfg.sector.value,
        "chi_min": cfg.chi_range[0], "chi_max": cfg.chi_range[1],
        "grid_points": cfg.grid_points,
        "methods": list(cfg.methods),
        "roots": [{"chi": r.chi, "method": r.method, "residual": r.residual,
                   "parity": _parity_str(r.parity)} for r in report.roots],
        "emary_bishop": [{"chi": f.chi, "sector": f.sector.value,
                          "deviation": f.deviation}
                         for f in report.emary_bishop_flags],
        "discrepancies": report.method_discrepancies,
        "errors": report.errors,
    }


def _parity_str(s: complex | None) -> str | None:
    if s is None:
        return None
    return {1 + 0j: "+1", -1 + 0j: "-1", 1j: "+i", -1j: "-i"}.get(complex(s), str(s))


def write_roots_json(report: ScanReport, fh) -> None:
    json.dump(report_to_dict(report), fh, indent=2)
    fh.write("\n")
