"""Configuration ingestion: flat key-value files, exhaustive validation.

Format: one `key = value` per line, `#` starts a comment, blank lines
ignored.  The `units` key selects reduced (rates in gamma2, lengths in cm)
or si (rad/s, meters) interpretation; keys carry their unit in the name
where it is not the mode default.  Unknown keys are rejected and every
problem is reported, not just the first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .constants import DIPOLE_AU
from .errors import ConfigError
from .medium import reduce_microscopic
from .params import AtomParams, CrystalParams, ReducedMedium, medium_from_si

SUBCOMMANDS = ("spectrum", "dispersion", "switch", "pulse", "oracle",
               "entangle", "reproduce-figs", "plot")


@dataclass(frozen=True)
class Key:
    name: str
    kind: str = "float"            # float | int | str
    modes: tuple = ("reduced", "si")
    default: object = None
    choices: tuple | None = None
    minimum: float | None = None
    strict_min: bool = False
    required_for: tuple = ()       # subcommands that need it


KEYS = [
    Key("units", kind="str", choices=("reduced", "si"),
        required_for=SUBCOMMANDS),
    # medium block, reduced mode
    Key("alpha0_per_cm", modes=("reduced",), minimum=0.0,
        required_for=("spectrum", "dispersion", "switch", "pulse", "oracle",
                      "entangle", "reproduce-figs")),
    Key("beta_d", modes=("reduced",), minimum=0.0,
        required_for=("spectrum", "dispersion", "switch", "pulse", "oracle",
                      "entangle", "reproduce-figs")),
    Key("beta_e", modes=("reduced",), minimum=0.0,
        required_for=("spectrum", "dispersion", "switch", "pulse", "oracle",
                      "entangle", "reproduce-figs")),
    Key("delta_d", modes=("reduced",),
        required_for=("spectrum", "dispersion", "switch", "pulse", "oracle",
                      "entangle", "reproduce-figs")),
    Key("delta_e", modes=("reduced",),
        required_for=("spectrum", "dispersion", "switch", "pulse", "oracle",
                      "entangle", "reproduce-figs")),
    Key("gamma31", modes=("reduced",), minimum=0.0, strict_min=True,
        required_for=("spectrum", "dispersion", "switch", "pulse", "oracle",
                      "entangle", "reproduce-figs")),
    Key("s3", modes=("reduced",), default=0.0),
    Key("gamma3", modes=("reduced",), minimum=0.0),
    Key("gamma4", modes=("reduced",), default=1.0, minimum=0.0),
    Key("rabi_b", modes=("reduced",), default=0.0, minimum=0.0),
    Key("delta_b", modes=("reduced",), default=0.0),
    Key("n_host", default=1.0, minimum=1.0),
    Key("gamma2_si", default=5.0e7, minimum=0.0, strict_min=True),
    Key("zeta_cm", default=1.0, minimum=0.0, strict_min=True),
    # medium block, si mode (microscopic)
    Key("omega21_rad_s", modes=("si",), minimum=0.0, strict_min=True,
        required_for=("spectrum", "dispersion")),
    Key("omega23_rad_s", modes=("si",), minimum=0.0, strict_min=True,
        required_for=("spectrum", "dispersion")),
    Key("omega43_rad_s", modes=("si",), minimum=0.0, strict_min=True,
        required_for=("spectrum", "dispersion")),
    Key("omega_d_rad_s", modes=("si",), minimum=0.0, strict_min=True,
        required_for=("spectrum", "dispersion")),
    Key("omega_e_rad_s", modes=("si",), minimum=0.0, strict_min=True,
        required_for=("spectrum", "dispersion")),
    Key("gamma2_rad_s", modes=("si",), minimum=0.0, strict_min=True,
        required_for=("spectrum", "dispersion")),
    Key("gamma3_rad_s", modes=("si",), default=0.0, minimum=0.0),
    Key("gamma4_rad_s", modes=("si",), default=0.0, minimum=0.0),
    Key("mu12_au", modes=("si",), minimum=0.0,
        required_for=("spectrum", "dispersion")),
    Key("mu23_au", modes=("si",), minimum=0.0,
        required_for=("spectrum", "dispersion")),
    Key("mu34_au", minimum=0.0),
    Key("defect_extent_r", modes=("si",), default=2.0, minimum=0.0,
        strict_min=True),
    Key("dopant_density_m3", modes=("si",), minimum=0.0, strict_min=True,
        required_for=("spectrum", "dispersion")),
    Key("rabi_b_rad_s", modes=("si",), default=0.0, minimum=0.0),
    Key("delta_b_rad_s", modes=("si",), default=0.0),
    # scan block
    Key("scan_min", default=-4.0),
    Key("scan_max", default=4.0),
    Key("scan_step", default=0.01, minimum=0.0, strict_min=True),
    # pulse block
    Key("pulse_tau", minimum=0.0, strict_min=True, required_for=("pulse",)),
    Key("pulse_carrier_delta_a", required_for=("pulse",)),
    Key("pulse_n", kind="int", default=4096, minimum=256),
    Key("pulse_dt", minimum=0.0, strict_min=True),
    # oracle block
    Key("oracle_m", kind="int", default=2000, minimum=1),
    Key("oracle_w", default=50.0, minimum=0.0, strict_min=True),
    Key("oracle_t_final", default=800.0, minimum=0.0, strict_min=True),
    Key("oracle_rabi_a", default=1.0e-6, minimum=0.0, strict_min=True),
    Key("oracle_points", kind="int", default=5, minimum=1),
    Key("oracle_rtol", default=1.0e-8, minimum=0.0, strict_min=True),
    # entangle / switch block
    Key("scheme", kind="str", choices=("a", "b"), default="a"),
    Key("alpha_coh_sq", default=4.0, minimum=0.0),
    Key("l_b_cm", default=30.0, minimum=0.0, strict_min=True),
    Key("sigma_b_cm2", default=1.0e-10, minimum=0.0, strict_min=True),
    Key("omega_b_rad_s", default=4.0e15, minimum=0.0, strict_min=True),
    # plot block
    Key("panel", kind="str",
        choices=("fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b")),
]

KEY_MAP = {k.name: k for k in KEYS}


@dataclass
class RunConfig:
    units: str
    values: dict = field(default_factory=dict)

    def get(self, name: str):
        if name in self.values:
            return self.values[name]
        return KEY_MAP[name].default

    def medium(self) -> ReducedMedium:
        if self.units == "reduced":
            s3 = self.get("s3")
            gamma31 = self.get("gamma31")
            rabi_b = self.get("rabi_b")
            if rabi_b > 0 and "s3" not in self.values:
                from .medium import stark_parameters
                g3 = self.get("gamma3")
                s3, gamma31 = stark_parameters(
                    rabi_b, self.get("delta_b"),
                    gamma31 if g3 is None else g3, self.get("gamma4"))
            return ReducedMedium(
                alpha0=self.get("alpha0_per_cm"),
                beta_d=self.get("beta_d"), beta_e=self.get("beta_e"),
                delta_d=self.get("delta_d"), delta_e=self.get("delta_e"),
                gamma31=gamma31, s3=s3,
                gamma3=self.get("gamma3"), gamma4=self.get("gamma4"),
                n_host=self.get("n_host"), gamma2_si=self.get("gamma2_si"),
                zeta_cm=self.get("zeta_cm"))
        atom = AtomParams(
            gamma2=self.get("gamma2_rad_s"),
            gamma3=self.get("gamma3_rad_s"),
            gamma4=self.get("gamma4_rad_s"),
            mu12=self.get("mu12_au") * DIPOLE_AU,
            mu23=self.get("mu23_au") * DIPOLE_AU,
            mu34=(self.get("mu34_au") or 0.0) * DIPOLE_AU,
            omega21=self.get("omega21_rad_s"),
            omega23=self.get("omega23_rad_s"),
            omega43=self.get("omega43_rad_s"))
        crystal = CrystalParams(
            delta_d=self.get("omega_d_rad_s") - self.get("omega23_rad_s"),
            delta_e=self.get("omega_e_rad_s") - self.get("omega23_rad_s"),
            defect_extent=self.get("defect_extent_r"),
            dopant_density=self.get("dopant_density_m3"),
            host_index=self.get("n_host"),
            length=self.get("zeta_cm") / 100.0)
        return reduce_microscopic(
            atom, crystal, rabi_b=self.get("rabi_b_rad_s"),
            delta_b=self.get("delta_b_rad_s"))


def parse_config(text: str, subcommand: str = "spectrum") -> RunConfig:
    """Parse and validate; raises ConfigError carrying every problem."""
    problems: list[str] = []
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            problems.append(f"line {lineno}: expected 'key = value'")
            continue
        name, _, val = line.partition("=")
        name = name.strip()
        val = val.strip()
        spec = KEY_MAP.get(name)
        if spec is None:
            problems.append(f"line {lineno}: unknown key '{name}'")
            continue
        if name in values:
            problems.append(f"line {lineno}: duplicate key '{name}'")
            continue
        if spec.kind == "str":
            if spec.choices and val not in spec.choices:
                problems.append(
                    f"line {lineno}: {name} must be one of {spec.choices}")
                continue
            values[name] = val
            continue
        try:
            num = int(val) if spec.kind == "int" else float(val)
        except ValueError:
            problems.append(f"line {lineno}: {name} is not a number: '{val}'")
            continue
        if spec.minimum is not None:
            if spec.strict_min and not num > spec.minimum:
                problems.append(f"line {lineno}: {name} must be > {spec.minimum}")
                continue
            if not spec.strict_min and not num >= spec.minimum:
                problems.append(f"line {lineno}: {name} must be >= {spec.minimum}")
                continue
        values[name] = num

    units = values.get("units")
    if units is None:
        problems.append("missing required key 'units'")
    else:
        for name in values:
            spec = KEY_MAP[name]
            if units not in spec.modes:
                problems.append(
                    f"key '{name}' is not valid in units={units} mode")
    if subcommand not in SUBCOMMANDS:
        problems.append(f"unknown subcommand '{subcommand}'")
    else:
        for spec in KEYS:
            if subcommand in spec.required_for and spec.name not in values:
                if units is not None and units not in spec.modes:
                    continue
                problems.append(
                    f"missing key '{spec.name}' required for {subcommand}")
    if "scan_min" in values and "scan_max" in values:
        if values["scan_max"] <= values["scan_min"]:
            problems.append("scan_max must exceed scan_min")
    if "s3" in values and (values.get("rabi_b", 0.0) or 0.0) > 0:
        problems.append("give either s3 directly or rabi_b/delta_b, not both")
    if values.get("rabi_b", 0.0) and not values.get("delta_b", 0.0):
        problems.append("delta_b must be nonzero when rabi_b > 0")
    if problems:
        raise ConfigError(problems)
    return RunConfig(units=units, values=values)
