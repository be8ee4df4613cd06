"""Command-line interface.

Subcommands: det, scan, oracle, compare, holonomy.  Parameters may be given
in spectral form (--kappa, --mu) or physical form (--omega, --omega0, --g);
a config file of key=value lines mirrors every flag, with flags winning.
Exit codes: 0 success, 2 parameter rejection, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import model_params
from .contour_holonomy import holonomy_data
from .errors import RejectedParameters, SolverError, SolverNumericalError
from .fock_oracle import eigen_chis
from .mellin_system import MellinSystem
from .model_params import ModelParams, PhysicalParams, Sector
from .scan import (ScanConfig, run_scan, write_roots_json, write_samples_csv)
from .spectral_determinant import determinant_W

EXIT_OK = 0
EXIT_REJECTED = 2
EXIT_NUMERICAL = 3


def _read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {line!r}")
            key, val = line.split("=", 1)
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _coerce(raw: str):
    low = raw.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        return raw


def _merge_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    """Fill unset flags from the config file; explicit flags win."""
    if not getattr(args, "config", None):
        return
    sub = parser.subcommand_parsers[args.command]
    for key, raw in _read_config(args.config).items():
        if not hasattr(args, key):
            raise ValueError(f"unknown config key {key!r}")
        if sub.get_default(key) == getattr(args, key):
            setattr(args, key, _coerce(raw))


def _params_from(args: argparse.Namespace) -> ModelParams:
    sector = Sector(getattr(args, "sector", "even"))
    if args.omega is not None or args.omega0 is not None or args.g is not None:
        if args.kappa is not None or args.mu is not None:
            raise RejectedParameters(
                "give either (--kappa, --mu) or (--omega, --omega0, --g)")
        phys = PhysicalParams(omega=args.omega,
                              omega0=0.0 if args.omega0 is None else args.omega0,
                              g=1.0 if args.g is None else args.g)
        return model_params.from_physical(phys, sector)
    if args.kappa is None:
        raise RejectedParameters("parameters required: --kappa/--mu or --omega/--g")
    return ModelParams(kappa=args.kappa, mu=0.0 if args.mu is None else args.mu,
                       sector=sector)


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--omega0", type=float, default=None)
    p.add_argument("--g", type=float, default=None)
    p.add_argument("--sector", choices=["even", "odd"], default="even")
    p.add_argument("--config", default=None, help="key=value file mirroring flags")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tprabi",
                                 description="Two-photon quantum Rabi spectra")
    sub = ap.add_subparsers(dest="command", required=True)

    det = sub.add_parser("det", help="single spectral-determinant sample")
    _add_param_flags(det)
    det.add_argument("--chi", type=float, required=True)
    det.add_argument("--tol", type=float, default=1e-11)

    hol = sub.add_parser("holonomy", help="holonomy matrix and classification")
    _add_param_flags(hol)
    hol.add_argument("--chi", type=float, required=True)
    hol.add_argument("--tol", type=float, default=1e-11)

    sc = sub.add_parser("scan", help="grid scan of W with root refinement")
    _add_param_flags(sc)
    sc.add_argument("--chi-min", type=float, required=True, dest="chi_min")
    sc.add_argument("--chi-max", type=float, required=True, dest="chi_max")
    sc.add_argument("--points", type=int, default=500)
    sc.add_argument("--methods", default="holonomy",
                    help="comma list from holonomy,factorial,oracle")
    sc.add_argument("--tol", type=float, default=1e-11)
    sc.add_argument("--workers", type=int, default=1)
    sc.add_argument("--out", default="scan.csv", help="samples CSV path")
    sc.add_argument("--roots-out", default="roots.json", dest="roots_out")

    orc = sub.add_parser("oracle", help="truncated-diagonalization spectrum")
    _add_param_flags(orc)
    orc.add_argument("--count", type=int, default=8)
    orc.add_argument("--out", default=None, help="CSV path (default stdout)")

    cmp_ = sub.add_parser("compare", help="cross-method root comparison")
    _add_param_flags(cmp_)
    cmp_.add_argument("--chi-min", type=float, required=True, dest="chi_min")
    cmp_.add_argument("--chi-max", type=float, required=True, dest="chi_max")
    cmp_.add_argument("--points", type=int, default=300)
    cmp_.add_argument("--methods", default="holonomy,oracle")
    cmp_.add_argument("--tol", type=float, default=1e-11)

    ap.subcommand_parsers = {"det": det, "holonomy": hol, "scan": sc,
                             "oracle": orc, "compare": cmp_}
    return ap


def _cmd_det(args) -> int:
    params = _params_from(args).with_chi(args.chi)
    s = determinant_W(params, args.tol)
    json.dump({"chi": s.chi, "kappa": params.kappa, "mu": params.mu,
               "sector": params.sector.value,
               "re_w": s.W.real, "im_w": s.W.imag, "abs_w": abs(s.W),
               "branch": s.branch.value,
               "e": [[s.e[0].real, s.e[0].imag], [s.e[1].real, s.e[1].imag]]},
              sys.stdout, indent=2)
    print()
    return EXIT_OK


def _cmd_holonomy(args) -> int:
    params = _params_from(args).with_chi(args.chi)
    holo = holonomy_data(MellinSystem(params), args.tol)
    F = holo.F_plus
    json.dump({"chi": args.chi, "kappa": params.kappa, "mu": params.mu,
               "sector": params.sector.value,
               "f_plus": [[[F[i, j].real, F[i, j].imag] for j in (0, 1)]
                          for i in (0, 1)],
               "eigenvalues": [[w.real, w.imag] for w, _ in holo.eigenpairs],
               "det": [complex(np.linalg.det(F)).real,
                       complex(np.linalg.det(F)).imag],
               "classification": holo.classification.value},
              sys.stdout, indent=2)
    print()
    return EXIT_OK


def _cmd_scan(args) -> int:
    params = _params_from(args)
    cfg = ScanConfig(kappa=params.kappa, mu=params.mu,
                     chi_range=(args.chi_min, args.chi_max),
                     sector=params.sector, grid_points=args.points,
                     tol_ode=args.tol, workers=args.workers,
                     methods=tuple(m.strip() for m in args.methods.split(",")))
    report = run_scan(cfg)
    with open(args.out, "w", encoding="utf-8") as fh:
        write_samples_csv(report, fh)
    with open(args.roots_out, "w", encoding="utf-8") as fh:
        write_roots_json(report, fh)
    for r in report.roots:
        print(f"root chi={r.chi:.12g} method={r.method} residual={r.residual:.3e}")
    for f in report.emary_bishop_flags:
        print(f"emary-bishop chi={f.chi:.12g} deviation={f.deviation:.3e}")
    print(f"wrote {args.out} and {args.roots_out}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    params = _params_from(args)
    spec = eigen_chis(params, params.sector, target_count=args.count)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            spec.to_csv(fh)
    else:
        spec.to_csv(sys.stdout)
    return EXIT_OK


def _cmd_compare(args) -> int:
    params = _params_from(args)
    cfg = ScanConfig(kappa=params.kappa, mu=params.mu,
                     chi_range=(args.chi_min, args.chi_max),
                     sector=params.sector, grid_points=args.points,
                     tol_ode=args.tol,
                     methods=tuple(m.strip() for m in args.methods.split(",")))
    report = run_scan(cfg)
    json.dump({"discrepancies": report.method_discrepancies,
               "roots": [{"chi": r.chi, "method": r.method,
                          "residual": r.residual} for r in report.roots],
               "errors": report.errors}, sys.stdout, indent=2)
    print()
    flagged = [d for d in report.method_discrepancies if d["flagged"]]
    return EXIT_OK if not flagged else EXIT_NUMERICAL


_COMMANDS = {"det": _cmd_det, "holonomy": _cmd_holonomy, "scan": _cmd_scan,
             "oracle": _cmd_oracle, "compare": _cmd_compare}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args, parser)
        return _COMMANDS[args.command](args)
    except RejectedParameters as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except SolverNumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SolverError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
