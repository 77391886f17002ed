"""Two-photon output states of the switch and phase schemes.

Scheme a (band edge): photon b is split over two paths; the path that
co-propagates with photon a switches its absorption on.  Transmission
amplitudes t_on/t_off turn the joint state into a path (x) occupation
pair; in the ideal limit (t_on, t_off) = (0, 1) it is the Bell state
(|10,0> + |01,1>)/sqrt(2).

Scheme b (defect mode): a coherent probe picks up the conditional phase
phi_a in one arm only, giving a path-entangled pair of coherent states
whose distinguishability is the phase-plane overlap.

The absorbed amplitude is transferred coherently into the empty mode;
the purity that a trace over an orthogonal recording environment would
leave is reported alongside as bookkeeping (`purity_env_traced`,
`negativity_env_traced`), so the idealization is always quantified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

# Basis order for the 4-dim system: |10,1>, |10,0>, |01,1>, |01,0>
# (path qubit first: 10 = photon b co-propagating, then photon-a occupation).
BASIS_LABELS = ("10,1", "10,0", "01,1", "01,0")

BELL_TARGET = np.array([0.0, 1.0, 1.0, 0.0]) / math.sqrt(2.0)  # (|10,0>+|01,1>)/sqrt2

CAT_OVERLAP_SQ = 0.01


def beamsplitter_split() -> np.ndarray:
    """50/50 split of the single photon b: amplitudes (1/sqrt2, 1/sqrt2)
    over the two paths, real and positive."""
    return np.array([1.0, 1.0]) / math.sqrt(2.0)


def partial_transpose_4(rho: np.ndarray) -> np.ndarray:
    """Partial transpose over the second qubit of a 4x4 two-qubit matrix."""
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    return r.transpose(0, 3, 2, 1).reshape(4, 4)


def negativity(rho: np.ndarray) -> float:
    """|sum of negative eigenvalues| of the partial transpose."""
    eig = np.linalg.eigvalsh(partial_transpose_4(rho))
    return float(abs(eig[eig < 0].sum()))


def _check_density(rho: np.ndarray) -> None:
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > 1.0e-12:
        raise ValidationError(f"density matrix trace {tr} != 1")
    eig = np.linalg.eigvalsh(rho)
    if eig.min() < -1.0e-10:
        raise ValidationError(f"density matrix not PSD (min eig {eig.min():g})")


@dataclass(frozen=True)
class JointPhotonState:
    """Path (x) photon-a state after the medium.

    fock representation: four complex amplitudes over BASIS_LABELS (the
    coherent-transfer idealization keeps the state pure); the environment
    bookkeeping quantifies how much an orthogonal absorption record would
    degrade it.
    """

    representation: str
    amplitudes: np.ndarray | None
    rho: np.ndarray
    purity_env_traced: float
    coherent_params: tuple | None = None

    def __post_init__(self):
        _check_density(self.rho)


@dataclass(frozen=True)
class AbsorptionEntanglement:
    state: JointPhotonState
    negativity: float
    bell_fidelity: float
    negativity_env_traced: float


def absorption_entangle(t_on: complex, t_off: complex) -> AbsorptionEntanglement:
    """Joint state for transmission amplitude t_on in the co-propagating
    arm and t_off in the free arm.

    The absorbed fraction sqrt(1 - |t|^2) moves coherently to the empty
    occupation state.  Negativity is the partial-transpose measure;
    fidelity is against the Bell target (|10,0> + |01,1>)/sqrt(2).
    """
    t_on = complex(t_on)
    t_off = complex(t_off)
    if abs(t_on) > 1.0 + 1.0e-12 or abs(t_off) > 1.0 + 1.0e-12:
        raise ValidationError("transmission amplitudes must have |t| <= 1")
    s_on = math.sqrt(max(0.0, 1.0 - abs(t_on) ** 2))
    s_off = math.sqrt(max(0.0, 1.0 - abs(t_off) ** 2))
    amps = np.array([t_on, s_on, t_off, s_off], dtype=complex) / math.sqrt(2.0)
    rho = np.outer(amps, amps.conj())

    # Orthogonal-environment bookkeeping: an absorption record kills the
    # occupied/empty cross-arm coherences.
    keep = np.ones((4, 4))
    occupied = np.array([1, 0, 1, 0])
    for i in range(4):
        for j in range(4):
            if occupied[i] != occupied[j] and i // 2 != j // 2:
                keep[i, j] = 0.0
    rho_traced = rho * keep

    state = JointPhotonState(
        representation="fock", amplitudes=amps, rho=rho,
        purity_env_traced=float(np.trace(rho_traced @ rho_traced).real))
    fid = float(np.real(BELL_TARGET @ rho @ BELL_TARGET))
    return AbsorptionEntanglement(
        state=state, negativity=negativity(rho), bell_fidelity=fid,
        negativity_env_traced=negativity(rho_traced))


def coherent_overlap(phi: float, alpha_sq: float) -> complex:
    """<alpha | e^{i phi} alpha> = exp(|alpha|^2 (e^{i phi} - 1))."""
    return complex(np.exp(alpha_sq * (np.exp(1j * phi) - 1.0)))


def coherent_overlap_fock(phi: float, alpha: complex, cutoff: int = 64) -> complex:
    """The same overlap summed in a truncated number basis (oracle path)."""
    n = np.arange(cutoff)
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, cutoff)))))
    amp = np.exp(-0.5 * abs(alpha) ** 2 + n * np.log(complex(alpha)) - 0.5 * log_fact
                 ) if alpha != 0 else np.where(n == 0, 1.0, 0.0).astype(complex)
    amp_rot = amp * np.exp(1j * phi * n)
    return complex(np.vdot(amp, amp_rot))


@dataclass(frozen=True)
class PhaseEntanglement:
    state: JointPhotonState
    overlap: complex
    path_entropy_bits: float
    cat_state: bool


def phase_entangle(phi: float, alpha_coh: complex) -> PhaseEntanglement:
    """Path-conditioned phase kick on a coherent probe.

    The path-qubit reduced state has eigenvalues (1 +- |O|)/2 with
    O the coherent-state overlap; entropy in bits.  The pair counts as a
    cat state once |O|^2 < 0.01 (no phase-plane overlap).
    """
    alpha_sq = abs(alpha_coh) ** 2
    if alpha_sq > 1.0e6:
        raise ValidationError("coherent amplitude too large (|alpha|^2 > 1e6)")
    ov = coherent_overlap(phi, alpha_sq)
    p = np.array([(1.0 + abs(ov)) / 2.0, (1.0 - abs(ov)) / 2.0])
    entropy = float(-sum(x * math.log2(x) for x in p if x > 0.0))
    rho_path = 0.5 * np.array([[1.0, ov.conjugate()], [ov, 1.0]], dtype=complex)
    # embed the path state in the 4-dim container (photon a pure per arm)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho_path[0, 0]
    rho[2, 2] = rho_path[1, 1]
    rho[0, 2] = rho_path[0, 1]
    rho[2, 0] = rho_path[1, 0]
    state = JointPhotonState(
        representation="coherent", amplitudes=None, rho=rho,
        purity_env_traced=1.0,
        coherent_params=(alpha_coh * np.exp(1j * phi), alpha_coh))
    return PhaseEntanglement(state=state, overlap=ov,
                             path_entropy_bits=entropy,
                             cat_state=abs(ov) ** 2 < CAT_OVERLAP_SQ)


@dataclass(frozen=True)
class SceneReport:
    scheme: str
    t_on: complex | None
    t_off: complex | None
    phi_a: float | None
    negativity: float | None
    bell_fidelity: float | None
    path_entropy_bits: float | None
    overlap_sq: float | None
    flags: dict
    details: dict = field(default_factory=dict)


def end_to_end(med, scheme: str, zeta_cm: float | None = None,
               rabi_b: float = 0.0, delta_b: float = 0.0,
               l_b_cm: float = 30.0, mu34: float | None = None,
               omega_b: float | None = None, sigma_b: float | None = None,
               alpha_coh: complex = 2.0) -> SceneReport:
    """Compose the medium response into one of the two output scenarios.

    Scheme a: transmissions exp(i alpha zeta) at delta_a = delta_e with the
    drive off/on feed absorption_entangle.  Scheme b: the saturated phase
    shift (SI photon-b parameters) feeds phase_entangle.  Regime flags are
    evaluated and attached; nothing proceeds silently.
    """
    from .medium import polarizability
    from .switching import phase_shift_saturated, validate_regime

    if scheme not in ("a", "b"):
        raise ValidationError("scheme must be 'a' or 'b'")
    zeta = med.zeta_cm if zeta_cm is None else zeta_cm
    if zeta < 0:
        raise ValidationError("zeta must be >= 0")
    flags = validate_regime(med, rabi_b, delta_b, l_b_cm=l_b_cm)

    if scheme == "a":
        a_off = polarizability(med.delta_e, med.undriven()).alpha
        a_on = polarizability(med.delta_e, med).alpha
        t_off = np.exp(1j * a_off * zeta)
        t_on = np.exp(1j * a_on * zeta)
        ent = absorption_entangle(t_on, t_off)
        return SceneReport(
            scheme="a", t_on=complex(t_on), t_off=complex(t_off), phi_a=None,
            negativity=ent.negativity, bell_fidelity=ent.bell_fidelity,
            path_entropy_bits=None, overlap_sq=None,
            flags=flags.ratios | {
                "large_detuning": flags.large_detuning,
                "entry_condition": flags.entry_condition},
            details={"alpha_on": complex(a_on), "alpha_off": complex(a_off),
                     "loss_on": 2.0 * a_on.imag * zeta,
                     "loss_off": 2.0 * a_off.imag * zeta,
                     "negativity_env_traced": ent.negativity_env_traced,
                     "purity_env_traced": ent.state.purity_env_traced})

    if mu34 is None or omega_b is None or sigma_b is None:
        raise ValidationError("scheme b needs mu34, omega_b and sigma_b")
    phi = phase_shift_saturated(mu34, omega_b, sigma_b,
                                delta_b * med.gamma2_si)
    ent = phase_entangle(phi, alpha_coh)
    return SceneReport(
        scheme="b", t_on=None, t_off=None, phi_a=phi,
        negativity=None, bell_fidelity=None,
        path_entropy_bits=ent.path_entropy_bits,
        overlap_sq=abs(ent.overlap) ** 2,
        flags=flags.ratios | {
            "large_detuning": flags.large_detuning,
            "entry_condition": flags.entry_condition},
        details={"cat_state": ent.cat_state})
