"""Parametrizations of the two-photon Rabi model and their conversions.

The model H = omega a†a + (omega0/2) sigma_z + 2g[(a†)² + a²] sigma_x is
rescaled by 2g and described internally by the dimensionless triple
(chi, kappa, mu):

    x  = omega/(4g) = (kappa + 1/kappa)/2,   0 < kappa < 1  <=>  x > 1,
    mu = omega0/(4g),
    chi = kappa (E + kappa) / (2 (1 - kappa²)) + 1,

with E the eigenvalue of the rescaled operator.  kappa is the canonical
parameter; x and E are derived views.  For x <= 1 no normalizable
eigenstates exist and the parameters are rejected.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass

from .errors import RejectedParameters

KAPPA_MARGIN = 1e-6
SPECIAL_CHI_TOL = 1e-9


class Sector(enum.Enum):
    """Parity sector of the Z4 symmetry: even covers s=±1, odd covers s=±i."""

    EVEN = "even"
    ODD = "odd"

    def is_special_chi(self, chi: float, tol: float = SPECIAL_CHI_TOL) -> bool:
        """Whether chi sits on the quasi-exact lattice of this sector.

        Logarithmic/Emary-Bishop branching happens at integer chi in the
        even sector and at proper half-integer chi in the odd sector.
        """
        if self is Sector.EVEN:
            return abs(chi - round(chi)) < tol
        return abs(chi - (math.floor(chi) + 0.5)) < tol

    def nearest_special_chi(self, chi: float) -> float:
        if self is Sector.EVEN:
            return float(round(chi))
        return math.floor(chi) + 0.5


@dataclass(frozen=True)
class PhysicalParams:
    """Laboratory-frame parameters (all in the same energy units)."""

    omega: float
    omega0: float
    g: float

    def __post_init__(self):
        if not (self.g > 0):
            raise RejectedParameters(f"coupling g must be positive, got {self.g}")
        if not (self.omega > 0):
            raise RejectedParameters(f"omega must be positive, got {self.omega}")
        if self.omega0 < 0:
            raise RejectedParameters(f"omega0 must be >= 0, got {self.omega0}")


@dataclass(frozen=True)
class ModelParams:
    """Spectral-side parameters (kappa, mu) with optional chi and parity sector.

    chi is left unset when the instance describes a parameter point to be
    scanned; operations that need a spectral parameter require it.
    mu < 0 is normalized to |mu| (the spectrum depends on mu² only).
    """

    kappa: float
    mu: float
    chi: float | None = None
    sector: Sector = Sector.EVEN

    def __post_init__(self):
        if not (KAPPA_MARGIN < self.kappa < 1.0 - KAPPA_MARGIN):
            raise RejectedParameters(
                f"kappa={self.kappa} outside ({KAPPA_MARGIN}, {1 - KAPPA_MARGIN}); "
                "x <= 1 admits no normalizable eigenstates"
            )
        if self.mu < 0:
            object.__setattr__(self, "mu", abs(self.mu))
        if isinstance(self.sector, str):
            object.__setattr__(self, "sector", Sector(self.sector))

    @property
    def x(self) -> float:
        return (self.kappa + 1.0 / self.kappa) / 2.0

    @property
    def energy(self) -> float:
        """E corresponding to chi (requires chi set)."""
        return E_from_chi(self.require_chi(), self.kappa)

    def require_chi(self) -> float:
        if self.chi is None:
            raise ValueError("operation requires chi; use with_chi()")
        return self.chi

    def with_chi(self, chi: float) -> "ModelParams":
        return dataclasses.replace(self, chi=float(chi))

    def with_sector(self, sector: Sector | str) -> "ModelParams":
        return dataclasses.replace(self, sector=Sector(sector))


@dataclass(frozen=True)
class GrowthEstimate:
    """Finite-n estimate of the growth order and type of the entire solution."""

    order: float
    type_: complex

    def is_bargmann_admissible(self, order_tol: float = 0.05) -> bool:
        """order < 2, or order = 2 with |type| < 1/2 (finite-norm criterion).

        Finite-n estimates carry a bias of a few percent, so orders within
        order_tol of 2 are treated as exactly 2 and decided by the type.
        """
        if self.order < 2.0 - order_tol:
            return True
        if self.order > 2.0 + order_tol:
            return False
        return abs(self.type_) < 0.5


def kappa_from_x(x: float) -> float:
    """Root of x = kappa/2 + 1/(2 kappa) in (0, 1)."""
    if x <= 1.0:
        raise RejectedParameters(
            f"x={x} <= 1: only |sigma|=1/2 growth types are available and the "
            "norm series always diverges; no eigenstates"
        )
    return x - math.sqrt(x * x - 1.0)


def x_from_kappa(kappa: float) -> float:
    return (kappa + 1.0 / kappa) / 2.0


def from_physical(p: PhysicalParams, sector: Sector = Sector.EVEN) -> ModelParams:
    """Convert (omega, omega0, g) to (kappa, mu); chi stays unset (scan variable)."""
    x = p.omega / (4.0 * p.g)
    mu = p.omega0 / (4.0 * p.g)
    return ModelParams(kappa=kappa_from_x(x), mu=mu, sector=sector)


def chi_from_E(E: float, kappa: float, mu: float | None = None) -> float:
    """Spectral parameter chi = kappa (E + kappa) / (2 (1 - kappa²)) + 1."""
    return kappa * (E + kappa) / (2.0 * (1.0 - kappa * kappa)) + 1.0


def E_from_chi(chi: float, kappa: float) -> float:
    return 2.0 * (1.0 - kappa * kappa) * (chi - 1.0) / kappa - kappa


def energy_lower_bound(kappa: float, mu: float) -> tuple[float, float]:
    """(E_min, chi_min): E >= -mu - kappa and the corresponding chi bound."""
    e_min = -mu - kappa
    chi_min = 1.0 - mu * kappa / (2.0 * (1.0 - kappa * kappa))
    return e_min, chi_min


def admissible_growth_types(kappa: float) -> tuple[float, float, float, float]:
    """The four possible growth types ±(x ± sqrt(x²-1))/2 = ±kappa/2, ±1/(2 kappa).

    Only |sigma| = kappa/2 < 1/2 is compatible with a finite norm.
    """
    return (kappa / 2.0, -kappa / 2.0, 1.0 / (2.0 * kappa), -1.0 / (2.0 * kappa))
