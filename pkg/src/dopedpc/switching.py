"""The two photon-photon interaction regimes.

Near the defect-mode Raman resonance the co-propagating photon imprints a
nonlinear phase on the slow probe; near the band edge it switches on
strong absorption.  The order-of-magnitude closed forms are implemented
verbatim as estimates and always paired with exact evaluation through the
full polarizability, so reports never conflate the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C_CM, C_LIGHT, EPSILON_0, HBAR
from .dispersion import alpha_derivatives, group_velocity, scan_spectrum
from .errors import ValidationError
from .medium import polarizability
from .params import ReducedMedium

# |s3| beyond this fraction of beta_d leaves the perturbative phase regime.
S3_REGIME_FRACTION = 0.3
# Threshold ratio for "much greater than" regime flags.
LARGE_RATIO = 10.0


def effective_length(l_b_cm: float, v_g_cm_s: float, zeta_cm: float):
    """Photon co-propagation length z_eff = min(l_b * v_g / c, zeta) [cm]
    and the simultaneous-exit condition (l_b + zeta)/c <= zeta/v_g."""
    if l_b_cm <= 0 or v_g_cm_s <= 0 or zeta_cm <= 0:
        raise ValidationError("l_b, v_g and zeta must all be > 0")
    z_eff = min(l_b_cm * v_g_cm_s / C_CM, zeta_cm)
    entry_ok = (l_b_cm + zeta_cm) / C_CM <= zeta_cm / v_g_cm_s
    return z_eff, entry_ok


@dataclass(frozen=True)
class PhaseShiftTiers:
    """Defect-regime nonlinear phase shift, three ways [rad]:
    exact Re(alpha) * z with the drive on, derivative * s3 * z, and the
    coarse scale estimate."""

    exact: float
    derivative: float
    scale: float
    regime_ok: bool


def phase_shift_local(s3: float, z_cm: float, med: ReducedMedium) -> PhaseShiftTiers:
    """Nonlinear phase accumulated at delta_a = delta_d over z_cm.

    Tier 1 evaluates Re(alpha) exactly with the Stark shift applied;
    tier 2 is -dRe(alpha)/d(delta) * s3 * z on the undriven spectrum;
    tier 3 the scale -(gamma2 alpha0 / beta_d^2) s3 z.
    """
    driven = med.undriven().with_s3(s3)
    exact = polarizability(med.delta_d, driven).alpha.real * z_cm
    _, ap, _ = alpha_derivatives(med.delta_d, med.undriven())
    derivative = -ap.real * s3 * z_cm
    if med.beta_d <= 0:
        raise ValidationError("phase regime requires beta_d > 0")
    scale = -(med.alpha0 / med.beta_d**2) * s3 * z_cm
    regime_ok = abs(s3) <= S3_REGIME_FRACTION * med.beta_d
    return PhaseShiftTiers(exact=exact, derivative=derivative, scale=scale,
                           regime_ok=regime_ok)


def phase_shift_saturated(mu34: float, omega_b: float, sigma_b: float,
                          delta_b: float) -> float:
    """Saturated nonlinear phase [rad], independent of wavepacket length:

        phi_a = -|mu34|^2 omega_b / (2 eps0 hbar c sigma_b Delta_b)

    SI inputs: mu34 [C m], omega_b [rad/s], sigma_b [m^2], delta_b [rad/s].
    """
    if mu34 < 0 or omega_b <= 0 or sigma_b <= 0:
        raise ValidationError("mu34 >= 0, omega_b > 0, sigma_b > 0 required")
    if delta_b == 0:
        raise ValidationError("delta_b must be nonzero")
    return -(mu34**2) * omega_b / (
        2.0 * EPSILON_0 * HBAR * C_LIGHT * sigma_b * delta_b)


@dataclass(frozen=True)
class EdgeAbsorption:
    estimate: float   # order-of-magnitude closed form [1/cm]
    exact: float      # Im(alpha) from the full response [1/cm]


def edge_absorption_off(med: ReducedMedium) -> EdgeAbsorption:
    """Residual absorption at delta_a = delta_e with the drive off.

    Estimate (gamma2 alpha0 / beta_e^(3/2)) sqrt(gamma3 / 2); exact value
    from the full response.  They agree in order of magnitude only.
    """
    g3 = med.gamma3_eff
    if g3 < 0:
        raise ValidationError("gamma3 must be >= 0")
    if med.beta_e <= 0:
        raise ValidationError("edge regime requires beta_e > 0")
    est = med.alpha0 / med.beta_e**1.5 * math.sqrt(g3 / 2.0)
    exact = polarizability(med.delta_e, med.undriven()).alpha.imag
    return EdgeAbsorption(estimate=est, exact=exact)


def edge_absorption_on(s3: float, med: ReducedMedium) -> EdgeAbsorption:
    """Drive-on absorption at delta_a = delta_e.

    Piecewise estimate: gamma2^2 alpha0 s3 / beta_e^3 for s3 > 0 (probe
    pushed into the gap), gamma2 alpha0 sqrt(|s3|) / beta_e^(3/2) for
    s3 < 0; s3 = 0 returns the drive-off values (continuous choice).
    Applicable once |s3| exceeds the transparency width.
    """
    if s3 == 0.0:
        return edge_absorption_off(med)
    if med.beta_e <= 0:
        raise ValidationError("edge regime requires beta_e > 0")
    if s3 > 0:
        est = med.alpha0 * s3 / med.beta_e**3
    else:
        est = med.alpha0 * math.sqrt(abs(s3)) / med.beta_e**1.5
    exact = polarizability(med.delta_e, med.with_s3(s3)).alpha.imag
    return EdgeAbsorption(estimate=est, exact=exact)


@dataclass(frozen=True)
class DefectSwitch:
    """Small-detuning (EIT-destruction) switch at the defect resonance."""

    im_alpha: float          # local estimate [1/cm]
    loss_at_z_eff: float     # 2 Im(alpha) z_eff, saturates there
    z_eff_cm: float
    saturated_closed_form: float | None  # |mu34|^2 w_b/(eps0 hbar c sigma_b gamma4)


def defect_switch_absorption(rabi_b: float, gamma4: float, med: ReducedMedium,
                             l_b_cm: float, mu34: float | None = None,
                             omega_b: float | None = None,
                             sigma_b: float | None = None) -> DefectSwitch:
    """Absorption switching at delta_a = delta_d for |delta_b| <= gamma4.

    Local estimate Im(alpha) = gamma2 alpha0 |Omega_b|^2 / (gamma4 beta_d^2)
    saturating over z_eff = l_b v_g / c.  When the SI photon-b parameters
    are supplied the length-free closed form of the saturated loss is
    reported alongside.
    """
    if gamma4 <= 0:
        raise ValidationError("gamma4 must be > 0 in the small-detuning regime")
    if med.beta_d <= 0:
        raise ValidationError("defect switch requires beta_d > 0")
    im_est = med.alpha0 * rabi_b**2 / (gamma4 * med.beta_d**2)
    vg = group_velocity(med.delta_d, med.undriven(), mode="exact").value
    z_eff, _ = effective_length(l_b_cm, vg, med.zeta_cm)
    closed = None
    if mu34 is not None and omega_b is not None and sigma_b is not None:
        gamma4_si = gamma4 * med.gamma2_si
        closed = mu34**2 * omega_b / (
            EPSILON_0 * HBAR * C_LIGHT * sigma_b * gamma4_si)
    return DefectSwitch(im_alpha=im_est, loss_at_z_eff=2.0 * im_est * z_eff,
                        z_eff_cm=z_eff, saturated_closed_form=closed)


@dataclass(frozen=True)
class TransparencyWindow:
    width: float          # model definition: gamma3 [gamma2 units]
    tau_min_s: float      # pi / width, in seconds
    measured_width: float # full width at Im = 2 * min over a scan near the edge


def transparency_window(med: ReducedMedium) -> TransparencyWindow:
    """Band-edge transparency window: the model width is gamma3 and the
    minimum pulse duration pi/width; the actually realized width (full
    width at twice the scan minimum of Im(alpha)) is measured and reported
    separately, with no attempt to reconcile the two."""
    g3 = med.gamma3_eff
    if g3 <= 0:
        raise ValidationError("gamma3 must be > 0 for a transparency window")
    tau_min = math.pi / (g3 * med.gamma2_si)

    # The dip is asymmetric (rises ~sqrt above the edge, slowly below), so
    # the window expands until the 2 * min level is crossed on both sides.
    step = med.gamma31 / 10.0
    half_span = 50.0 * med.gamma31
    scan = med.undriven().with_s3(med.s3)
    for _ in range(12):
        table = scan_spectrum(med.delta_e + med.s3 - half_span,
                              med.delta_e + med.s3 + half_span, step, scan)
        im = table.im_alpha
        k0 = int(np.argmin(im))
        level = 2.0 * im[k0]
        lo = k0
        while lo > 0 and im[lo] < level:
            lo -= 1
        hi = k0
        while hi < im.size - 1 and im[hi] < level:
            hi += 1
        if lo > 0 and hi < im.size - 1:
            break
        half_span *= 2.0
        step *= 2.0
    measured = float(table.delta_a[hi] - table.delta_a[lo])
    return TransparencyWindow(width=g3, tau_min_s=tau_min,
                              measured_width=measured)


@dataclass(frozen=True)
class RegimeFlags:
    """One boolean per modelling condition, with the ratios that produced
    it.  Reporting only: nothing here silently blocks an evaluation."""

    large_detuning: bool        # |delta_b| >> |rabi_b|, gamma4
    small_detuning_switch: bool # |delta_b| <= gamma4 (EIT-destruction regime)
    weak_probe: bool            # much less than one photon per atom
    entry_condition: bool       # (l_b + zeta)/c <= zeta/v_g
    ratios: dict


def validate_regime(med: ReducedMedium, rabi_b: float, delta_b: float,
                    rabi_a: float = 0.0, l_b_cm: float | None = None,
                    v_g_cm_s: float | None = None) -> RegimeFlags:
    """Compute every regime condition with its ratio; never raises."""
    ab = abs(delta_b)
    r_drive = ab / rabi_b if rabi_b > 0 else math.inf
    r_gamma4 = ab / med.gamma4 if med.gamma4 > 0 else math.inf
    large = r_drive >= LARGE_RATIO and r_gamma4 >= LARGE_RATIO
    small = ab <= med.gamma4
    weak_ratio = rabi_a  # reduced units: |Omega_a| / gamma2
    weak = weak_ratio < 0.1
    entry = True
    entry_ratio = 0.0
    if l_b_cm is not None:
        vg = v_g_cm_s
        if vg is None:
            vg = group_velocity(med.delta_d, med.undriven()).value
        entry = (l_b_cm + med.zeta_cm) / C_CM <= med.zeta_cm / vg
        entry_ratio = ((l_b_cm + med.zeta_cm) / C_CM) / (med.zeta_cm / vg)
    return RegimeFlags(
        large_detuning=large, small_detuning_switch=small, weak_probe=weak,
        entry_condition=entry,
        ratios={"delta_b_over_rabi_b": r_drive,
                "delta_b_over_gamma4": r_gamma4,
                "rabi_a_over_gamma2": weak_ratio,
                "entry_time_ratio": entry_ratio})


@dataclass(frozen=True)
class SwitchReport:
    """Side-by-side summary of one interaction scenario."""

    regime: str                  # "defect" or "edge"
    phase_shift_local_rad_per_cm: float
    phase_shift_saturated_rad: float | None
    im_alpha_off: float
    im_alpha_on: float
    power_loss_off: float
    power_loss_on: float
    z_eff_cm: float
    contrast: float
    flags: RegimeFlags

    def __post_init__(self):
        if self.power_loss_off < 0 or self.power_loss_on < 0:
            raise ValidationError("power losses must be >= 0")


def switch_report(med: ReducedMedium, regime: str, rabi_b: float,
                  delta_b: float, l_b_cm: float,
                  mu34: float | None = None, omega_b: float | None = None,
                  sigma_b: float | None = None) -> SwitchReport:
    """Assemble the full on/off comparison for one regime.

    The probe point is delta_d (defect) or delta_e (edge); losses are
    2 Im(alpha) * length with length = z_eff in the defect regime (the
    interaction saturates there) and zeta at the edge (no saturation)."""
    if regime not in ("defect", "edge"):
        raise ValidationError("regime must be 'defect' or 'edge'")
    point = med.delta_d if regime == "defect" else med.delta_e
    off = polarizability(point, med.undriven()).alpha
    on = polarizability(point, med).alpha

    vg = group_velocity(med.delta_d, med.undriven()).value
    z_eff, _ = effective_length(l_b_cm, vg, med.zeta_cm)
    length = z_eff if regime == "defect" else med.zeta_cm

    tiers = phase_shift_local(med.s3, 1.0, med)
    sat = None
    if mu34 is not None and omega_b is not None and sigma_b is not None:
        sat = phase_shift_saturated(mu34, omega_b, sigma_b,
                                    delta_b * med.gamma2_si)
    flags = validate_regime(med, rabi_b, delta_b, l_b_cm=l_b_cm, v_g_cm_s=vg)
    return SwitchReport(
        regime=regime,
        phase_shift_local_rad_per_cm=tiers.exact,
        phase_shift_saturated_rad=sat,
        im_alpha_off=off.imag, im_alpha_on=on.imag,
        power_loss_off=2.0 * off.imag * length,
        power_loss_on=2.0 * on.imag * length,
        z_eff_cm=z_eff,
        contrast=2.0 * (on.imag - off.imag) * length,
        flags=flags)
