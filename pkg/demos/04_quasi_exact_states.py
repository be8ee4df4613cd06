"""Quasi-exact (Juddian) points: at kappa=1/2, mu=1 the even sector carries
an exactly degenerate pair of polynomial-times-Gaussian eigenstates at
chi=2, where the holonomy collapses to the identity.

At chi=2 the quasi-exact condition reads mu^2 = 4 (kappa^4 - 4 kappa^2 + 1)
/ kappa^2, which mu=1 satisfies exactly at kappa=1/2.
"""

import numpy as np

from tprabi import ModelParams, determinant_W, eigen_chis
from tprabi.scan import ScanConfig, scan_determinant

mu_sq = 4 * (0.5 ** 4 - 4 * 0.5 ** 2 + 1) / 0.5 ** 2
print(f"quasi-exact condition at kappa=1/2, chi=2: mu = {np.sqrt(mu_sq)}")

params = ModelParams(kappa=0.5, mu=1.0)
s = determinant_W(params.with_chi(2.0))
print(f"branch at chi=2: {s.branch.value} (two explicit states, W := 0)")

spec = eigen_chis(params, target_count=8)
print("oracle spectrum:", [f"{c:.9f}" for c in spec.chis])

report = scan_determinant(ScanConfig(kappa=0.5, mu=1.0, chi_range=(0.9, 4.1),
                                     grid_points=300))
print("scan roots:", [f"{r.chi:.6f}" for r in report.roots])
for f in report.emary_bishop_flags:
    print(f"quasi-exact flag at chi={f.chi} (|F-1| = {f.deviation:.2e})")

# contrast: mu=1/3 at chi=2 keeps a logarithmic local solution instead
s = determinant_W(ModelParams(kappa=0.5, mu=1 / 3, chi=2.0))
print(f"\nsame chi at mu=1/3: branch {s.branch.value}, W = {s.W.real:+.4f}")
