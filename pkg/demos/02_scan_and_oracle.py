"""Scan W over a chi window, refine the roots, and cross that against the
truncated photon-number diagonalization.  Writes the same CSV/JSON pair the
`tprabi scan` command produces (which the frontend plotter consumes).
"""

from tprabi import ModelParams, eigen_chis
from tprabi.scan import ScanConfig, run_scan, write_roots_json, write_samples_csv

cfg = ScanConfig(kappa=0.5, mu=1 / 3, chi_range=(0.9, 4.0), grid_points=500,
                 methods=("holonomy", "oracle"))
report = run_scan(cfg)

print(f"{len(report.samples)} samples, {len(report.roots)} roots")
print(f"{'chi':>16} {'method':>10} {'residual':>10}")
for r in report.roots:
    print(f"{r.chi:16.10f} {r.method:>10} {r.residual:10.2e}")

worst = max((d["delta"] for d in report.method_discrepancies
             if d["delta"] is not None), default=0.0)
print(f"\nworst holonomy-vs-oracle disagreement: {worst:.2e}")

with open("scan.csv", "w") as fh:
    write_samples_csv(report, fh)
with open("roots.json", "w") as fh:
    write_roots_json(report, fh)
print("wrote scan.csv and roots.json "
      "(render with: frontend plot --csv scan.csv --roots roots.json --out w.svg)")
