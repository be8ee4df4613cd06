import math

import numpy as np
import pytest

from tprabi import ModelParams, NoConvergence, Sector
from tprabi import fock_oracle
from tprabi.fock_oracle import build, eigen_chis
from tprabi.model_params import chi_from_E, energy_lower_bound

from oracles import bogoliubov_chis

KAPPA, MU = 0.5, 1.0 / 3.0


def params(kappa=KAPPA, mu=MU):
    return ModelParams(kappa=kappa, mu=mu)


class TestBuild:
    def test_two_mode_block(self):
        # mu=0, even sector: the spin-up block over {|0>, |2>} is
        # [[0, sqrt(2)], [sqrt(2), 4x]]
        p = ModelParams(kappa=KAPPA, mu=0.0)
        op = build(p, 2)
        x = p.x
        dense = op.as_dense()
        up = dense[np.ix_([0, 2], [0, 2])]
        np.testing.assert_allclose(up, [[0.0, math.sqrt(2.0)],
                                        [math.sqrt(2.0), 4 * x]], rtol=1e-15)
        # spin-down block carries the opposite pair-coupling sign
        down = dense[np.ix_([1, 3], [1, 3])]
        np.testing.assert_allclose(down, [[0.0, -math.sqrt(2.0)],
                                          [-math.sqrt(2.0), 4 * x]], rtol=1e-15)

    def test_mu_couples_equal_photon_numbers(self):
        op = build(params(), 4)
        dense = op.as_dense()
        for k in range(4):
            assert dense[2 * k, 2 * k + 1] == MU
        # no spin coupling across different photon numbers
        assert dense[1, 2] == 0.0 and dense[3, 4] == 0.0

    def test_symmetric(self):
        dense = build(params(), 16).as_dense()
        assert np.array_equal(dense, dense.T)

    def test_odd_sector_photon_numbers(self):
        p = ModelParams(kappa=KAPPA, mu=0.0, sector=Sector.ODD)
        op = build(p, 3)
        dense = op.as_dense()
        x = p.x
        np.testing.assert_allclose(np.diag(dense)[::2], 2 * x * np.array([1, 3, 5]))

    def test_minimum_size(self):
        with pytest.raises(ValueError):
            build(params(), 1)


class TestSpectrum:
    @pytest.mark.parametrize("sector", [Sector.EVEN, Sector.ODD])
    def test_mu_zero_closed_form(self, sector):
        p = ModelParams(kappa=KAPPA, mu=0.0, sector=sector)
        spec = eigen_chis(p, sector, target_count=6)
        expect = bogoliubov_chis(6, odd=(sector is Sector.ODD))
        np.testing.assert_allclose(spec.chis, expect, atol=1e-9)

    def test_mu_zero_other_kappa(self):
        p = ModelParams(kappa=0.3, mu=0.0)
        spec = eigen_chis(p, target_count=4)
        np.testing.assert_allclose(spec.chis, [1.0, 1.0, 2.0, 2.0], atol=1e-9)

    @pytest.mark.parametrize("kappa,mu", [(0.3, 0.7), (0.5, 1 / 3), (0.5, 1.0),
                                          (0.8, 1 / 3)])
    def test_lower_bound(self, kappa, mu):
        p = ModelParams(kappa=kappa, mu=mu)
        spec = eigen_chis(p, target_count=4)
        _, chi_min = energy_lower_bound(kappa, mu)
        assert spec.chis[0] >= chi_min - 1e-9

    def test_degenerate_pair_at_quasi_exact_point(self):
        # kappa=1/2, mu=1: exactly degenerate pair at chi=2
        spec = eigen_chis(ModelParams(kappa=0.5, mu=1.0), target_count=6)
        gaps = np.abs(spec.chis - 2.0)
        pair = np.sort(gaps)[:2]
        assert np.all(pair < 1e-8)

    def test_mu_sign_invariance(self):
        a = eigen_chis(ModelParams(kappa=KAPPA, mu=MU), target_count=5)
        b = eigen_chis(ModelParams(kappa=KAPPA, mu=-MU), target_count=5)
        np.testing.assert_allclose(a.chis, b.chis, atol=1e-10)

    def test_sector_spectra_disjoint(self):
        even = eigen_chis(params(), Sector.EVEN, target_count=8)
        odd = eigen_chis(params(), Sector.ODD, target_count=8)
        gaps = np.abs(even.chis[:, None] - odd.chis[None, :])
        assert gaps.min() > 1e-3

    def test_variational_monotonicity(self):
        p = params()
        prev = None
        for n_modes in (32, 64, 128, 256):
            E = build(p, n_modes).eigenvalues(6)
            if prev is not None:
                assert np.all(E <= prev + 1e-12)
            prev = E

    def test_chi_conversion_consistency(self):
        spec = eigen_chis(params(), target_count=4)
        np.testing.assert_allclose(spec.chis,
                                   chi_from_E(spec.energies, KAPPA), rtol=1e-14)

    def test_no_convergence_signalled(self, monkeypatch):
        monkeypatch.setattr(fock_oracle, "N_CAP", 128)
        with pytest.raises(NoConvergence):
            eigen_chis(ModelParams(kappa=0.95, mu=0.3), target_count=8)

    def test_csv_output(self, tmp_path):
        spec = eigen_chis(params(), target_count=3)
        path = tmp_path / "spec.csv"
        with open(path, "w") as fh:
            spec.to_csv(fh)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "sector,index,chi,E,truncation_N"
        assert len(lines) == 4
        assert lines[1].startswith("even,0,")
