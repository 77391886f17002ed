"""Parameter containers and the SI <-> reduced-unit adapter.

Two layers:

* Microscopic SI objects (`AtomParams`, `CrystalParams`, `PhotonMode`,
  `ProbeDrive`) carry laboratory quantities in rad/s, meters, C m.
* `ReducedMedium` is what the response functions consume: every rate and
  detuning in units of gamma2, lengths in cm.  `reduce_medium` converts the
  microscopic layer down; `ReducedMedium.to_si_dict` goes back up.

All containers are frozen; evaluation over scan grids is therefore safe to
run concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .constants import C_CM, C_LIGHT, EPSILON_0, HBAR
from .errors import ValidationError


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValidationError(msg)


@dataclass(frozen=True)
class AtomParams:
    """Four-level atom: relaxation rates [1/s], dipoles [C m], transition
    angular frequencies [rad/s]."""

    gamma2: float
    gamma3: float
    gamma4: float
    mu12: float
    mu23: float
    mu34: float
    omega21: float
    omega23: float
    omega43: float

    def __post_init__(self):
        _require(self.gamma2 > 0, "gamma2 must be > 0")
        _require(self.gamma3 >= 0, "gamma3 must be >= 0")
        _require(self.gamma4 >= 0, "gamma4 must be >= 0")
        for name in ("mu12", "mu23", "mu34"):
            _require(getattr(self, name) >= 0, f"{name} must be >= 0")
        for name in ("omega21", "omega23", "omega43"):
            _require(getattr(self, name) > 0, f"{name} must be > 0")


@dataclass(frozen=True)
class CrystalParams:
    """Host crystal geometry and the structured-reservoir frequencies.

    delta_d, delta_e: defect-mode and band-edge detunings from omega23
    [rad/s].  beta_d, beta_e are the reservoir coupling constants [rad/s];
    pass None to have them derived from the atom microscopically.
    rho_d, rho_e only matter for the discretized-reservoir oracle; the
    response functions depend on the beta combinations alone.
    """

    delta_d: float
    delta_e: float
    beta_d: float | None = None
    beta_e: float | None = None
    defect_extent: float = 2.0        # r, in lattice cells
    lattice_period: float | None = None  # L [m]; default pi*c/omega23
    dopant_density: float = 1.0e18    # N [atoms/m^3]
    host_index: float = 1.0           # n_a
    length: float = 0.01              # zeta [m]
    rho_d: float = 1.0
    rho_e: float = 1.0

    def __post_init__(self):
        if self.beta_d is not None:
            _require(self.beta_d >= 0, "beta_d must be >= 0")
        if self.beta_e is not None:
            _require(self.beta_e >= 0, "beta_e must be >= 0")
        _require(self.defect_extent > 0, "defect extent r must be > 0")
        _require(self.dopant_density > 0, "dopant density must be > 0")
        _require(self.host_index >= 1, "host index must be >= 1")
        _require(self.length > 0, "length zeta must be > 0")


@dataclass(frozen=True)
class PhotonMode:
    """Quantized wavepacket mode: carrier [rad/s], cross-section [m^2],
    quantization length [m], dimensionless envelope amplitude."""

    omega: float
    sigma: float
    length: float
    envelope: float = 1.0

    def __post_init__(self):
        _require(self.omega > 0, "omega must be > 0")
        _require(self.sigma > 0, "sigma must be > 0")
        _require(self.length > 0, "quantization length must be > 0")

    @property
    def field_per_photon(self) -> float:
        """Field amplitude per photon sqrt(hbar*omega / 2 eps0 sigma l) [V/m]."""
        return math.sqrt(HBAR * self.omega /
                         (2.0 * EPSILON_0 * self.sigma * self.length))

    def rabi(self, mu: float) -> float:
        """Rabi frequency mu * f * eps / hbar [rad/s] for dipole mu [C m]."""
        return mu * self.envelope * self.field_per_photon / HBAR


@dataclass(frozen=True)
class ProbeDrive:
    """Photon-b drive: Rabi magnitude and detuning [same units as gamma2].

    s3 and gamma31 are normally derived (stark_parameters); the override
    fields support reduced-units workflows that set them directly.
    """

    rabi_b: float = 0.0
    delta_b: float = 0.0
    s3_override: float | None = None
    gamma31_override: float | None = None

    def __post_init__(self):
        _require(self.rabi_b >= 0, "rabi_b must be >= 0")
        if self.rabi_b > 0 and self.s3_override is None:
            _require(self.delta_b != 0,
                     "delta_b must be nonzero when rabi_b > 0")


@dataclass(frozen=True)
class ReducedMedium:
    """Everything the response functions need, in reduced units.

    Rates and detunings in units of gamma2, alpha0 in 1/cm.  gamma2_si
    anchors the time axis for outputs carrying seconds (group velocity,
    delay, dispersion).  gamma3/gamma4 are kept for the order-of-magnitude
    switch formulas; gamma3 defaults to gamma31 (undriven medium).
    """

    alpha0: float
    beta_d: float
    beta_e: float
    delta_d: float
    delta_e: float
    gamma31: float
    s3: float = 0.0
    gamma3: float | None = None
    gamma4: float = 1.0
    n_host: float = 1.0
    gamma2_si: float = 5.0e7
    zeta_cm: float = 1.0

    def __post_init__(self):
        _require(self.alpha0 >= 0, "alpha0 must be >= 0")
        _require(self.beta_d >= 0, "beta_d must be >= 0")
        _require(self.beta_e >= 0, "beta_e must be >= 0")
        _require(self.n_host >= 1, "host index must be >= 1")
        _require(self.gamma2_si > 0, "gamma2_si must be > 0")
        _require(self.zeta_cm > 0, "zeta_cm must be > 0")

    @property
    def gamma3_eff(self) -> float:
        return self.gamma31 if self.gamma3 is None else self.gamma3

    def undriven(self) -> "ReducedMedium":
        """The same medium with the photon-b drive removed (s3 = 0,
        gamma31 back to gamma3)."""
        return replace(self, s3=0.0, gamma31=self.gamma3_eff)

    def with_s3(self, s3: float) -> "ReducedMedium":
        return replace(self, s3=s3)

    def to_si_dict(self) -> dict:
        """Reduced -> SI: rates back to rad/s, alpha0 to 1/m."""
        g2 = self.gamma2_si
        return {
            "alpha0_per_m": self.alpha0 * 100.0,
            "beta_d": self.beta_d * g2,
            "beta_e": self.beta_e * g2,
            "delta_d": self.delta_d * g2,
            "delta_e": self.delta_e * g2,
            "gamma31": self.gamma31 * g2,
            "s3": self.s3 * g2,
            "gamma3": self.gamma3_eff * g2,
            "gamma4": self.gamma4 * g2,
            "n_host": self.n_host,
            "zeta_m": self.zeta_cm / 100.0,
        }


def medium_from_si(alpha0_per_m: float, beta_d: float, beta_e: float,
                   delta_d: float, delta_e: float, gamma31: float,
                   gamma2: float, s3: float = 0.0, gamma3: float | None = None,
                   gamma4: float | None = None, n_host: float = 1.0,
                   zeta_m: float = 0.01) -> ReducedMedium:
    """Build a ReducedMedium from SI quantities (rad/s, 1/m, m)."""
    _require(gamma2 > 0, "gamma2 must be > 0")
    return ReducedMedium(
        alpha0=alpha0_per_m / 100.0,
        beta_d=beta_d / gamma2,
        beta_e=beta_e / gamma2,
        delta_d=delta_d / gamma2,
        delta_e=delta_e / gamma2,
        gamma31=gamma31 / gamma2,
        s3=s3 / gamma2,
        gamma3=None if gamma3 is None else gamma3 / gamma2,
        gamma4=1.0 if gamma4 is None else gamma4 / gamma2,
        n_host=n_host,
        gamma2_si=gamma2,
        zeta_cm=zeta_m * 100.0,
    )


def lattice_period(atom: AtomParams, crystal: CrystalParams) -> float:
    """Lattice period L [m]; defaults to pi*c/omega23 near the gap."""
    if crystal.lattice_period is not None:
        return crystal.lattice_period
    return math.pi * C_LIGHT / atom.omega23


def fig2a_medium(**overrides) -> ReducedMedium:
    """The canonical undriven reduced parameter set (beta_d = beta_e = 1,
    delta_d = -1, delta_e = +1, gamma31 = 1e-3, alpha0 = 1/cm)."""
    base = dict(alpha0=1.0, beta_d=1.0, beta_e=1.0, delta_d=-1.0,
                delta_e=1.0, gamma31=1.0e-3)
    base.update(overrides)
    return ReducedMedium(**base)
