"""Slow-light quantities from the polarizability spectrum.

Group velocity, delay time and group-velocity dispersion all derive from
frequency derivatives of Re(alpha).  The production path differentiates
the closed form term by term (with d sqrt_phys / dw = 1 / (2 sqrt_phys),
valid along real scans since the argument never crosses the branch cut);
an adaptive Richardson finite-difference estimator exists solely as an
independent cross-check and is kept free of the analytic expressions.

Detunings are in gamma2 units.  Since the probe frequency enters only
through delta_a, d/d(omega_a) = d/d(delta_a) up to the gamma2_si scale:
reduced derivatives divide by gamma2_si once per order to give s/cm and
s^2/cm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import C_CM
from .errors import DerivativeUnstableError
from .medium import alpha_from_denominator, saturation_integral, sqrt_phys
from .params import ReducedMedium

# Stencils within this many gamma31 of the edge point must not straddle it.
EDGE_STENCIL_ZONE = 3.0


def alpha_derivatives(delta_a, med: ReducedMedium):
    """Closed-form (alpha, dalpha/ddelta_a, d2alpha/ddelta_a^2) [1/cm per
    gamma2 power].  Vectorized over delta_a."""
    x = np.asarray(delta_a, dtype=float) - med.s3
    u = med.gamma31 - 1j * (x - med.delta_d)
    s = sqrt_phys(1j * med.gamma31 + (x - med.delta_e))
    bd2 = med.beta_d**2
    be32 = med.beta_e**1.5

    i_val = bd2 / u - be32 / s
    i_p = 1j * bd2 / u**2 + 0.5 * be32 / s**3
    i_pp = -2.0 * bd2 / u**3 - 0.75 * be32 / s**5

    denom = 1.0 - 1j * np.asarray(delta_a, dtype=float) + i_val
    alpha = alpha_from_denominator(denom, med.alpha0)
    d_p = -1j + i_p
    alpha_p = -1j * med.alpha0 * d_p / denom**2
    alpha_pp = 1j * med.alpha0 * (2.0 * d_p**2 - denom * i_pp) / denom**3
    return alpha, alpha_p, alpha_pp


def d_re_alpha(delta_a: float, med: ReducedMedium) -> float:
    """d Re(alpha) / d omega_a [s/cm] at the given detuning (closed form)."""
    _, ap, _ = alpha_derivatives(delta_a, med)
    return float(np.real(ap)) / med.gamma2_si


def gvd(delta_a: float, med: ReducedMedium) -> float:
    """Group-velocity dispersion D = d^2 Re(alpha) / d omega_a^2 [s^2/cm]."""
    _, _, app = alpha_derivatives(delta_a, med)
    return float(np.real(app)) / med.gamma2_si**2


def _richardson(samples):
    """One Richardson sweep per halving; returns the refined diagonal."""
    table = [samples[0]]
    prev = samples
    fac = 1.0
    for k in range(1, len(samples)):
        fac *= 4.0
        cur = [(fac * prev[j + 1] - prev[j]) / (fac - 1.0)
               for j in range(len(prev) - 1)]
        table.append(cur[0])
        prev = cur
    return table


def d_re_alpha_fd(delta_a: float, med: ReducedMedium, rtol: float = 1.0e-6,
                  max_halvings: int = 40):
    """Finite-difference oracle for d Re(alpha) / d delta_a [1/cm per gamma2].

    Central differences with Richardson refinement until two successive
    refined estimates agree to `rtol` relative, or h underflows.  Within
    EDGE_STENCIL_ZONE * gamma31 of the edge point the stencil is one-sided
    so that it never straddles the near-singular region.

    Returns (value, h_final, relative_spread).
    """
    def re_alpha(x):
        x = np.asarray(x, dtype=float)
        denom = 1.0 - 1j * x + saturation_integral(x, med)
        return np.real(alpha_from_denominator(denom, med.alpha0))

    edge = med.delta_e + med.s3
    dist = abs(delta_a - edge)
    one_sided = dist < EDGE_STENCIL_ZONE * med.gamma31
    side = 1.0 if delta_a >= edge else -1.0

    h = 1.0e-3 * min(1.0, med.gamma31)
    if one_sided:
        h = min(h, 0.25 * max(dist, med.gamma31))

    estimates = []
    prev_refined = None
    while h > 1.0e-14 and len(estimates) < max_halvings:
        if one_sided:
            f0 = re_alpha(delta_a)
            f1 = re_alpha(delta_a + side * h)
            f2 = re_alpha(delta_a + side * 2.0 * h)
            est = side * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h)
        else:
            est = (re_alpha(delta_a + h) - re_alpha(delta_a - h)) / (2.0 * h)
        estimates.append(float(est))
        refined = _richardson(estimates)[-1]
        if prev_refined is not None:
            scale = max(abs(refined), abs(prev_refined), 1.0e-300)
            if abs(refined - prev_refined) <= rtol * scale:
                return refined, h, abs(refined - prev_refined) / scale
        prev_refined = refined
        h *= 0.5
    raise DerivativeUnstableError(
        f"finite-difference refinement did not converge at delta_a={delta_a}"
        f" (last h={h:g}, estimates={estimates[-3:]})")


@dataclass(frozen=True)
class GroupVelocity:
    value: float          # cm/s
    anomalous: bool       # total d(k)/d(omega) was <= 0
    mode: str             # "exact" or "medium-only"


def group_velocity(delta_a: float, med: ReducedMedium,
                   mode: str = "exact") -> GroupVelocity:
    """v_g = [n_a/c + d Re(alpha)/d omega]^-1 [cm/s]; "medium-only" drops
    the host term (valid when the medium response dominates)."""
    slope = d_re_alpha(delta_a, med)
    total = slope if mode == "medium-only" else med.n_host / C_CM + slope
    anomalous = total <= 0
    value = np.inf if total == 0 else 1.0 / total
    return GroupVelocity(value=float(value), anomalous=bool(anomalous), mode=mode)


def delay_time(delta_a: float, zeta_cm: float, med: ReducedMedium):
    """(T_del, T_0) [s]: delay relative to the passive passage time
    T_0 = zeta * n_a / c."""
    t_del = d_re_alpha(delta_a, med) * zeta_cm
    t_0 = zeta_cm * med.n_host / C_CM
    return t_del, t_0


@dataclass
class SpectrumTable:
    """Ascending-detuning scan of the complex response and its slow-light
    derivatives.  Singular grid points are dropped and recorded."""

    delta_a: np.ndarray
    re_alpha: np.ndarray
    im_alpha: np.ndarray
    v_g: np.ndarray
    t_del_per_cm: np.ndarray
    gvd: np.ndarray
    anomalous: np.ndarray
    skipped: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    CSV_HEADER = "delta_a,re_alpha,im_alpha,v_g,t_del_per_cm,gvd"

    def __len__(self):
        return self.delta_a.size

    def rows(self):
        for k in range(len(self)):
            yield (self.delta_a[k], self.re_alpha[k], self.im_alpha[k],
                   self.v_g[k], self.t_del_per_cm[k], self.gvd[k])


def scan_grid(lo: float, hi: float, step: float) -> np.ndarray:
    if not (step > 0) or not np.isfinite([lo, hi, step]).all() or hi <= lo:
        raise ValueError("scan range must be finite with hi > lo and step > 0")
    n = int(round((hi - lo) / step)) + 1
    if n < 2:
        raise ValueError("empty scan range")
    return lo + step * np.arange(n)


def scan_spectrum(lo: float, hi: float, step: float,
                  med: ReducedMedium) -> SpectrumTable:
    """Evaluate the spectrum on a uniform grid.  Rows where the response is
    singular or non-finite are dropped and reported in `skipped`."""
    grid = scan_grid(lo, hi, step)
    alpha, ap, app = alpha_derivatives(grid, med)
    slope = ap.real / med.gamma2_si
    total = med.n_host / C_CM + slope
    with np.errstate(divide="ignore"):
        v_g = np.where(total != 0, 1.0 / total, np.inf)
    anomalous = total <= 0
    d_val = app.real / med.gamma2_si**2

    cols = np.vstack([alpha.real, alpha.imag, v_g, slope, d_val])
    good = np.isfinite(cols).all(axis=0)
    skipped = [(float(grid[k]), "non-finite response")
               for k in np.nonzero(~good)[0]]
    meta = {
        "alpha0": med.alpha0, "beta_d": med.beta_d, "beta_e": med.beta_e,
        "delta_d": med.delta_d, "delta_e": med.delta_e,
        "gamma31": med.gamma31, "s3": med.s3, "n_host": med.n_host,
        "gamma2_si": med.gamma2_si,
    }
    return SpectrumTable(
        delta_a=grid[good], re_alpha=alpha.real[good], im_alpha=alpha.imag[good],
        v_g=v_g[good], t_del_per_cm=slope[good], gvd=d_val[good],
        anomalous=anomalous[good], skipped=skipped, meta=meta)
