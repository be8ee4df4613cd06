import numpy as np
import pytest

from tprabi import (Branch, Classification, HolonomyData, ModelParams, Sector,
                    determinant_W, eigenvector_e, wronskian_crosscheck)
from tprabi.contour_holonomy import default_loop, holonomy_data, integrate_fundamental
from tprabi.mellin_system import SIGMA_X, MellinSystem
from tprabi.spectral_determinant import _nonunit_eigenvector, normalize_phase

KAPPA, MU = 0.5, 1.0 / 3.0

# lowest even eigenvalue at (kappa, mu) = (1/2, 1/3): truncated-basis oracle
# at N=4096 (converged to machine precision) and the high-order rank-test
# bisection agree on this value to ~1e-15
ROOT_LOW = 0.910967606193101


def params(chi, kappa=KAPPA, mu=MU, sector=Sector.EVEN):
    return ModelParams(kappa=kappa, mu=mu, chi=chi, sector=sector)


def synthetic_holo(F, chi=1.3, sector=Sector.EVEN, tol=1e-11):
    w, V = np.linalg.eig(F)
    pairs = [(complex(w[i]), V[:, i]) for i in range(2)]
    cls = Classification.GENERIC if not sector.is_special_chi(chi) \
        else Classification.JORDAN
    return HolonomyData(F_plus=np.asarray(F, dtype=complex), classification=cls,
                        eigenpairs=pairs, integrator_tolerance=tol, eps_J=1e-8)


class TestEigenvector:
    def test_diagonal_case(self):
        F = np.diag([np.exp(-2j * np.pi * 1.3), 1.0])
        holo = synthetic_holo(F)
        sys = MellinSystem(params(1.3))
        e, branch, found = eigenvector_e(holo, sys)
        np.testing.assert_allclose(e, [1.0, 0.0], atol=1e-14)
        assert branch is Branch.GENERIC and found

    def test_sigma_x_eigenvector_gives_zero_W(self):
        # F with non-unit eigenvalue along [1,1]/sqrt(2)
        lam = np.exp(-2j * np.pi * 1.3)
        v = np.array([1.0, 1.0]) / np.sqrt(2)
        w = np.array([1.0, -1.0]) / np.sqrt(2)
        F = lam * np.outer(v, v) + np.outer(w, w)
        e = normalize_phase(_nonunit_eigenvector(F))
        W = e[0] ** 2 - e[1] ** 2
        assert abs(W) < 1e-14

    def test_residual_against_eig(self):
        sys = MellinSystem(params(1.2))
        holo = holonomy_data(sys, 1e-12)
        e, branch, _ = eigenvector_e(holo, sys)
        lam = min((ev for ev, _ in holo.eigenpairs), key=lambda z: -abs(z - 1))
        res = np.linalg.norm(holo.F_plus @ e - lam * e)
        assert res <= 1e-8
        assert branch is Branch.GENERIC

    def test_normalization_convention(self):
        e = normalize_phase(np.array([3.0j, 1.0]))
        assert abs(np.linalg.norm(e) - 1.0) < 1e-15
        assert e[0].imag == pytest.approx(0.0, abs=1e-15)
        assert e[0].real > 0.0
        # exact tie resolves toward the first component
        e = normalize_phase(np.array([1.0j, 1.0j]))
        assert e[0].real > 0 and e[0].imag == pytest.approx(0.0, abs=1e-15)


class TestDeterminant:
    def test_w_formula_units(self):
        e = np.array([1.0, 1.0]) / np.sqrt(2)
        assert abs(e[0] ** 2 - e[1] ** 2) < 1e-16
        e = np.array([1.0, 0.0])
        assert e[0] ** 2 - e[1] ** 2 == 1.0

    def test_generic_sample(self):
        s = determinant_W(params(1.2), 1e-11)
        assert s.branch is Branch.GENERIC
        assert abs(s.W.imag) < 1e-9              # W is real for real parameters
        assert 0 < abs(s.W) <= 1.0

    def test_w_vanishes_at_root(self):
        s = determinant_W(params(ROOT_LOW), 1e-12)
        assert abs(s.W) < 1e-9
        # e aligns with a sigma_x eigenvector exactly when W = 0
        dev = min(np.linalg.norm(SIGMA_X @ s.e - s.e),
                  np.linalg.norm(SIGMA_X @ s.e + s.e))
        assert dev < 1e-4

    def test_jordan_branch_continuity(self):
        # W through an integer chi: the Jordan branch value interpolates the
        # generic neighbours (smooth determinant)
        w_left = determinant_W(params(2.0 - 1e-4), 1e-12).W
        w_at = determinant_W(params(2.0), 1e-12).W
        w_right = determinant_W(params(2.0 + 1e-4), 1e-12).W
        assert determinant_W(params(2.0), 1e-12).branch is Branch.JORDAN
        assert abs(w_at - (w_left + w_right) / 2) < 5e-3

    def test_quasi_exact_flagged(self):
        s = determinant_W(params(2.0, mu=1.0), 1e-11)
        assert s.branch is Branch.IDENTITY_POSITIVE
        assert s.W == 0.0

    def test_identity_negative_branch(self):
        s = determinant_W(params(-1.0, mu=0.0), 1e-11)
        assert s.branch is Branch.IDENTITY_NEGATIVE
        # null vector [0, 1]: W = 0 - 1 = -1; chi=-1 is not in the spectrum
        assert s.W == pytest.approx(-1.0, abs=1e-8)
        assert s.null_vector_found

    def test_zero_locus_invariant_under_contour_radius(self):
        # the root location is a property of the system, not of the loop
        sys = MellinSystem(params(ROOT_LOW))
        for scale in (0.8, 1.0, 1.15):
            F = integrate_fundamental(sys, default_loop(sys.params, scale), 1e-12)
            e = normalize_phase(_nonunit_eigenvector(F))
            assert abs(e[0] ** 2 - e[1] ** 2) < 1e-8


class TestWronskian:
    def test_prefactor_is_one_at_origin(self):
        from tprabi.spectral_determinant import wronskian_prefactor
        assert wronskian_prefactor(0.0, params(1.2)) == 1.0

    def test_crosscheck_reference_point(self):
        res = wronskian_crosscheck(params(1.2), 0.1, 1e-12)
        assert res <= 1e-7

    @pytest.mark.parametrize("sector", [Sector.EVEN, Sector.ODD])
    def test_crosscheck_both_sectors(self, sector):
        res = wronskian_crosscheck(params(1.35, sector=sector), -0.07, 1e-12)
        assert res <= 1e-7

    def test_degenerate_case_wronskian_vanishes(self):
        # at a root the two transported solutions are parallel: the
        # Wronskian vanishes along the segment
        p = params(ROOT_LOW)
        s = determinant_W(p, 1e-12)
        sys = MellinSystem(p)
        from tprabi.contour_holonomy import ContourPath
        Y0 = np.column_stack([s.e, SIGMA_X @ s.e])
        for u in (0.05, 0.12):
            Y = integrate_fundamental(sys, ContourPath.segment(0.0, u), 1e-12,
                                      y0=Y0)
            assert abs(np.linalg.det(Y)) < 1e-8

    def test_u_sample_range_validation(self):
        with pytest.raises(ValueError):
            wronskian_crosscheck(params(1.2), 0.3, 1e-11)
