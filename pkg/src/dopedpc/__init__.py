"""Photon-photon interaction engine for doped band-gap media.

Computes the complex polarizability of a four-level-atom-doped photonic
crystal near a band-gap edge and defect mode, the derived slow-light and
dispersion quantities, the two nonlinear switching regimes, single-photon
pulse propagation, and the resulting entangled two-photon states, with a
brute-force time-domain oracle validating the closed-form response.
"""

__version__ = "0.1.0"

from .params import (AtomParams, CrystalParams, PhotonMode, ProbeDrive,
                     ReducedMedium, fig2a_medium, medium_from_si)
from .medium import (polarizability, saturation_integral, sqrt_phys,
                     stark_parameters, derive_coupling_constants, alpha0,
                     dom_density, dilute_check, reduce_microscopic)
from .dispersion import (alpha_derivatives, d_re_alpha, d_re_alpha_fd,
                         group_velocity, delay_time, gvd, scan_spectrum,
                         SpectrumTable)
from .switching import (effective_length, phase_shift_local,
                        phase_shift_saturated, edge_absorption_off,
                        edge_absorption_on, defect_switch_absorption,
                        transparency_window, validate_regime, switch_report)
from .pulse import PulseWaveform, make_gaussian, propagate, pulse_metrics
from .oracle import (DiscretizedReservoir, discretize, integrate,
                     extract_polarizability, oracle_alpha)
from .entangle import (beamsplitter_split, absorption_entangle,
                       phase_entangle, coherent_overlap,
                       coherent_overlap_fock, negativity, end_to_end)
