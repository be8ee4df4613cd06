"""Walk through the holonomy route to the spectrum at a single point.

The spectral problem is encoded in a 2x2 linear system on the complex
plane; continuing its fundamental matrix around the singular point at
kappa/2 gives a holonomy matrix F+, whose distinguished eigenvector e
yields the spectral determinant W = det[e, sigma_x e].  W vanishes exactly
at the eigenvalues.
"""

import numpy as np

from tprabi import (ModelParams, determinant_W, eigen_chis, holonomy_data,
                    integrate_fundamental, default_loop)
from tprabi.mellin_system import MellinSystem

params = ModelParams(kappa=0.5, mu=1 / 3)

# --- the holonomy at a generic chi -------------------------------------
chi = 1.3
sys = MellinSystem(params.with_chi(chi))
F = integrate_fundamental(sys, default_loop(sys.params), tol=1e-12)
print(f"F+ at chi={chi}:")
print(np.array_str(F, precision=6))
print(f"det F+  = {np.linalg.det(F):.10f}")
print(f"exp(-2 pi i chi) = {np.exp(-2j*np.pi*chi):.10f}   (Liouville)")

holo = holonomy_data(sys)
print("classification:", holo.classification.value)
print("eigenvalues:", [f"{w:.6f}" for w, _ in holo.eigenpairs])

# --- the determinant as a function of chi ------------------------------
print("\nW along a few chi values (zeros are eigenvalues):")
for chi in (0.95, 1.05, 1.5, 2.5, 3.5):
    s = determinant_W(params.with_chi(chi))
    print(f"  chi={chi:4.2f}: W = {s.W.real:+.6f}  ({s.branch.value})")

# --- compare a refined root with the truncated-basis eigenvalue --------
from scipy.optimize import brentq

root = brentq(lambda c: determinant_W(params.with_chi(c)).W.real, 1.02, 1.12)
oracle = eigen_chis(params, target_count=4)
print(f"\nsecond root of W: chi = {root:.12f}")
print(f"oracle value:     chi = {oracle.chis[1]:.12f}")
print(f"difference: {abs(root - oracle.chis[1]):.2e}")
