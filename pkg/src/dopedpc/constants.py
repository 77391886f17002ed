"""Physical constants (CODATA 2018) and unit helpers.

Internal computations run in reduced units: all rates and detunings in units
of the |2> relaxation rate gamma2, lengths in cm.  The functions here anchor
those reduced quantities back to SI where an absolute scale is needed.
"""

C_LIGHT = 2.99792458e8          # speed of light [m/s], exact
C_CM = C_LIGHT * 100.0          # [cm/s]
HBAR = 1.054571817e-34          # reduced Planck constant [J s]
EPSILON_0 = 8.8541878128e-12    # vacuum permittivity [F/m]
DIPOLE_AU = 8.4783536255e-30    # 1 atomic unit of electric dipole [C m]


def dipole_au_to_si(mu_au: float) -> float:
    """Convert a dipole matrix element from atomic units to C m."""
    return mu_au * DIPOLE_AU


def dipole_si_to_au(mu_si: float) -> float:
    return mu_si / DIPOLE_AU
