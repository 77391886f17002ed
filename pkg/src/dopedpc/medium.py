"""Complex polarizability of the doped band-gap medium.

The linear response of the probe transition is

    alpha(delta_a) = alpha0 * i*gamma2 / (gamma2 - i*delta_a + I)

with I the structured-reservoir saturation sum: a Lorentzian from the
high-Q defect mode plus an inverse-square-root term from the band-edge
mode continuum,

    I = beta_d^2 / (gamma31 - i*x_d)  -  beta_e^(3/2) / sqrt_phys(i*gamma31 + x_e)

where x_d = delta_a - delta_d - s3 and x_e = delta_a - delta_e - s3 fold
the photon-b Stark shift into the Raman detunings.

Branch policy: `sqrt_phys` takes the square root with non-positive
imaginary part.  Because gamma31 > 0 keeps the argument strictly inside
the upper half plane, the two roots always have opposite-sign imaginary
parts and the choice is unambiguous and smooth along any real scan.  This
root makes Re(I) > 0 everywhere (damping above the edge, pure level shift
inside the gap), hence Im(alpha) > 0: a passive medium.  Passivity is
asserted on every evaluation, never assumed.

All functions accept scalars or numpy arrays of detunings; reduced units
(rates in gamma2, lengths in cm) throughout unless noted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT, EPSILON_0, HBAR
from .errors import (BranchPolicyError, DegenerateInputError,
                     SingularityError, ValidationError)
from .params import AtomParams, CrystalParams, ReducedMedium, lattice_period

# Im(alpha) may dip below zero by at most this fraction of alpha0 (rounding).
PASSIVITY_TOL = 1.0e-12
# |denominator| below this means the linear response has collapsed.
DEGENERATE_TOL = 1.0e-30

BRANCH_LABEL = "im_nonpositive_root"


def sqrt_phys(w):
    """Square root of w with Im(result) <= 0 (the physical branch)."""
    s = np.sqrt(np.asarray(w, dtype=complex))
    s = np.where(s.imag > 0, -s, s)
    if np.ndim(w) == 0:
        return complex(s)
    return s


def saturation_integral(delta_a, med: ReducedMedium):
    """Reservoir saturation sum I(delta_a) [gamma2 units].

    Raises SingularityError for gamma31 <= 0: the band-edge term has a
    genuine pole/branch point there.  Callers wanting the gamma31 -> 0
    limit must pass a small positive value explicitly.
    """
    if med.gamma31 <= 0:
        raise SingularityError("band-edge pole; set gamma31 > 0")
    # The drive enters only through the shifted Raman detuning; forming it
    # first makes the s3 translation of the response exact to the bit.
    x = np.asarray(delta_a, dtype=float) - med.s3
    term_d = med.beta_d**2 / (med.gamma31 - 1j * (x - med.delta_d))
    root = sqrt_phys(1j * med.gamma31 + (x - med.delta_e))
    term_e = -med.beta_e**1.5 / root
    out = term_d + term_e
    if np.ndim(delta_a) == 0:
        return complex(out)
    return out


@dataclass(frozen=True)
class Polarizability:
    """alpha [1/cm] with its resonant-absorption scale and branch record."""

    alpha: complex
    alpha0: float
    branch_used: str = BRANCH_LABEL


def alpha_from_denominator(denom, alpha0: float):
    """alpha = alpha0 * i / denom  (denominator in gamma2 units, gamma2 = 1).

    Shared by the closed form and by callers that obtained the denominator
    elsewhere; enforces the degeneracy guard and the passivity assertion.
    """
    d = np.asarray(denom, dtype=complex)
    if np.any(np.abs(d) < DEGENERATE_TOL):
        raise DegenerateInputError(
            "polarizability denominator below 1e-30; linear response invalid")
    alpha = alpha0 * 1j / d
    bad = alpha.imag < -PASSIVITY_TOL * max(alpha0, 1.0)
    if np.any(bad):
        worst = float(np.min(np.asarray(alpha.imag)))
        raise BranchPolicyError(
            f"Im(alpha) = {worst:g} < 0 after branch selection")
    return alpha


def polarizability(delta_a, med: ReducedMedium):
    """Complex polarizability alpha(delta_a) [1/cm].

    Scalar input returns a Polarizability record; array input returns the
    complex array (same branch policy and guards applied pointwise).
    """
    x = np.asarray(delta_a, dtype=float)
    denom = 1.0 - 1j * x + saturation_integral(x, med)
    alpha = alpha_from_denominator(denom, med.alpha0)
    if np.ndim(delta_a) == 0:
        return Polarizability(alpha=complex(alpha), alpha0=med.alpha0)
    return alpha


def stark_parameters(rabi_b: float, delta_b: float, gamma3: float,
                     gamma4: float) -> tuple[float, float]:
    """ac Stark shift of level |3> and the driven Raman decoherence rate:

        s3 = |Omega_b|^2 / Delta_b
        gamma31 = gamma3 + gamma4 |Omega_b|^2 / Delta_b^2

    Valid in the far-detuned regime |Delta_b| >> |Omega_b|, gamma4.
    """
    if rabi_b != 0.0 and delta_b == 0.0:
        raise ValidationError(
            "delta_b = 0: far-detuned regime requires |delta_b| >> |rabi_b|, gamma4")
    if rabi_b == 0.0:
        return 0.0, gamma3
    ratio = rabi_b * rabi_b / delta_b
    return ratio, gamma3 + gamma4 * ratio / delta_b


def derive_coupling_constants(atom: AtomParams,
                              crystal: CrystalParams) -> tuple[float, float]:
    """Reservoir coupling constants (beta_d, beta_e) [rad/s] from the
    microscopic dipole and geometry:

        beta_d^2     = |mu23|^2 omega23^4 / (2 eps0 hbar (pi c r)^3)
        beta_e^(3/2) = |mu23|^2 omega23^(7/2) / (6 eps0 hbar pi c^3)
    """
    r = crystal.defect_extent
    if r <= 0:
        raise ValidationError("defect extent r must be > 0")
    if atom.omega23 <= 0:
        raise ValidationError("omega23 must be > 0")
    mu2 = atom.mu23 * atom.mu23
    beta_d_sq = mu2 * atom.omega23**4 / (
        2.0 * EPSILON_0 * HBAR * (math.pi * C_LIGHT * r)**3)
    beta_e_32 = mu2 * atom.omega23**3.5 / (
        6.0 * EPSILON_0 * HBAR * math.pi * C_LIGHT**3)
    return math.sqrt(beta_d_sq), beta_e_32**(2.0 / 3.0)


def alpha0(atom: AtomParams, crystal: CrystalParams,
           sigma0_override: float | None = None) -> float:
    """Linear resonant absorption coefficient alpha0 = sigma0 * N [1/m].

    With sigma0_override the cross-section formula is bypassed and
    sigma0_override * N is returned directly.
    """
    n = crystal.dopant_density
    if sigma0_override is not None:
        return sigma0_override * n
    if atom.gamma2 <= 0:
        raise ValidationError("gamma2 must be > 0")
    return (atom.mu12**2 * atom.omega21 * n /
            (2.0 * EPSILON_0 * C_LIGHT * HBAR * crystal.host_index * atom.gamma2))


def dom_density(omega: float, atom: AtomParams,
                crystal: CrystalParams) -> tuple[float, float]:
    """Density of modes split into the defect-mode delta weight (rho_d,
    reported separately since it is not a pointwise density) and the
    band-edge continuum density rho_e / sqrt(omega - omega_e) at omega
    (zero below the edge).  omega in rad/s."""
    omega_e = atom.omega23 + crystal.delta_e
    if omega <= omega_e:
        return crystal.rho_d, 0.0
    return crystal.rho_d, crystal.rho_e / math.sqrt(omega - omega_e)


@dataclass(frozen=True)
class DiluteCheck:
    ok: bool
    margin: float
    bound: float


def dilute_check(crystal: CrystalParams, atom: AtomParams) -> DiluteCheck:
    """Dilute-doping condition N < (omega23 / (pi c r))^3, strict."""
    r = crystal.defect_extent
    if r <= 0:
        raise ValidationError("defect extent r must be > 0")
    bound = (atom.omega23 / (math.pi * C_LIGHT * r))**3
    n = crystal.dopant_density
    return DiluteCheck(ok=n < bound, margin=bound / n, bound=bound)


def reduce_microscopic(atom: AtomParams, crystal: CrystalParams,
                       rabi_b: float = 0.0, delta_b: float = 0.0,
                       gamma2_si: float | None = None) -> ReducedMedium:
    """SI adapter: build the reduced parameter set from microscopic inputs.

    rabi_b, delta_b in rad/s; the Stark shift and driven decoherence are
    derived, never assumed.  The dilute flag is computed by `dilute_check`.
    """
    g2 = atom.gamma2 if gamma2_si is None else gamma2_si
    bd, be = crystal.beta_d, crystal.beta_e
    if bd is None or be is None:
        bd_m, be_m = derive_coupling_constants(atom, crystal)
        bd = bd_m if bd is None else bd
        be = be_m if be is None else be
    s3, gamma31 = stark_parameters(rabi_b, delta_b, atom.gamma3, atom.gamma4)
    return ReducedMedium(
        alpha0=alpha0(atom, crystal) / 100.0,
        beta_d=bd / g2,
        beta_e=be / g2,
        delta_d=crystal.delta_d / g2,
        delta_e=crystal.delta_e / g2,
        gamma31=gamma31 / g2,
        s3=s3 / g2,
        gamma3=atom.gamma3 / g2,
        gamma4=atom.gamma4 / g2,
        n_host=crystal.host_index,
        gamma2_si=g2,
        zeta_cm=crystal.length * 100.0,
    )


__all__ = [
    "sqrt_phys", "saturation_integral", "polarizability", "Polarizability",
    "alpha_from_denominator", "stark_parameters", "derive_coupling_constants",
    "alpha0", "dom_density", "dilute_check", "DiluteCheck",
    "reduce_microscopic", "BRANCH_LABEL", "lattice_period",
]
