"""Spectra of the two-photon quantum Rabi model.

Three independent routes to the eigenvalues, parametrized by
(chi, kappa, mu):

* holonomy of the Mellin-transformed system and the spectral determinant
  W = det[e, sigma_x e] (``spectral_determinant``, ``contour_holonomy``),
* factorial-series solutions of the coefficient recurrence and the
  linear-dependence rank test (``factorial_series``, ``recurrence``),
* truncated diagonalization in the photon-number basis (``fock_oracle``).

``scan`` drives chi grids, root refinement and cross-method comparison;
``cli`` exposes it all as the ``tprabi`` command.
"""

from .model_params import (GrowthEstimate, ModelParams, PhysicalParams, Sector,
                           admissible_growth_types, chi_from_E, E_from_chi,
                           energy_lower_bound, from_physical, kappa_from_x,
                           x_from_kappa)
from .errors import (AmbiguousClassification, DegenerateWindow, NearSingularity,
                     NoConvergence, NotApplicable, NullVectorNotFound,
                     RejectedParameters, ResonantExponent, SlowConvergence,
                     SolverError, SolverNumericalError, StepSizeUnderflow,
                     ToleranceNotMet)
from .recurrence import (CoefficientSequence, generate_even, generate_odd,
                         growth_estimate, high_precision_pair)
from .mellin_system import (MellinSystem, SingularPointInfo,
                            local_exponent_sum_check, singular_points)
from .contour_holonomy import (Classification, ContourPath, HolonomyData,
                               cauchy_eval, classify, default_loop,
                               holonomy_data, holonomy_pair,
                               integrate_fundamental)
from .spectral_determinant import (Branch, DeterminantSample, determinant_W,
                                   eigenvector_e, wronskian_crosscheck)
from .factorial_series import (FrobeniusSeries, RemappedSeries, factorial_b,
                               frobenius_at, rank_condition, remap_and_b,
                               remap_series)
from .fock_oracle import OracleSpectrum, TruncatedOperator, build, eigen_chis
from .scan import (EmaryBishopFlag, RootRecord, ScanConfig, ScanReport,
                   compare_methods, factorial_roots, match_roots, oracle_roots,
                   run_scan, scan_determinant, write_roots_json,
                   write_samples_csv)

__version__ = "0.1.0"
