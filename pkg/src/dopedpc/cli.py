"""Command-line interface.

    dopedpc <subcommand> --config CONFIG [--out DIR] [...]

Subcommands: spectrum, dispersion, switch, pulse, oracle, entangle,
reproduce-figs, plot.  Exit codes: 0 success, 2 validation error,
3 numerical error.  There is no randomness anywhere, so no seed flag:
identical inputs give byte-identical outputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, parse_config
from .constants import DIPOLE_AU
from .dispersion import scan_spectrum
from .entangle import end_to_end
from .errors import NumericalError, ValidationError
from .medium import polarizability
from .oracle import oracle_alpha
from .params import fig2a_medium
from .plotting import PanelSpec, render, render_all
from .pulse import make_gaussian, propagate, pulse_metrics
from .report import (json_report, spectrum_csv, waveform_csv, write_text)
from .switching import (edge_absorption_off, edge_absorption_on,
                        phase_shift_local, phase_shift_saturated,
                        switch_report, transparency_window, validate_regime)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _read_config(args, subcommand: str) -> RunConfig:
    text = Path(args.config).read_text(encoding="utf-8")
    return parse_config(text, subcommand=subcommand)


def _flags_dict(cfg: RunConfig, med) -> dict:
    fl = validate_regime(med, cfg.get("rabi_b") or 0.0,
                         cfg.get("delta_b") or 0.0,
                         l_b_cm=cfg.get("l_b_cm"))
    return {"large_detuning": fl.large_detuning,
            "small_detuning_switch": fl.small_detuning_switch,
            "weak_probe": fl.weak_probe,
            "entry_condition": fl.entry_condition,
            **fl.ratios}


def cmd_spectrum(args) -> int:
    cfg = _read_config(args, "spectrum")
    med = cfg.medium()
    table = scan_spectrum(cfg.get("scan_min"), cfg.get("scan_max"),
                          cfg.get("scan_step"), med)
    out = Path(args.out)
    write_text(out / "spectrum.csv", spectrum_csv(table))
    write_text(out / "spectrum.json", json_report(
        cfg.values,
        {"rows": len(table), "skipped": len(table.skipped)},
        _flags_dict(cfg, med)))
    print(f"wrote {out/'spectrum.csv'} ({len(table)} rows)")
    return EXIT_OK


def cmd_dispersion(args) -> int:
    # identical scan machinery; kept separate so scripts can ask for the
    # derivative columns by name
    cfg = _read_config(args, "dispersion")
    med = cfg.medium()
    table = scan_spectrum(cfg.get("scan_min"), cfg.get("scan_max"),
                          cfg.get("scan_step"), med)
    out = Path(args.out)
    write_text(out / "dispersion.csv", spectrum_csv(table))
    k_d = int(np.argmin(np.abs(table.delta_a - med.delta_d)))
    k_e = int(np.argmin(np.abs(table.delta_a - med.delta_e)))
    write_text(out / "dispersion.json", json_report(
        cfg.values,
        {"v_g_at_delta_d_cm_s": table.v_g[k_d],
         "v_g_at_delta_e_cm_s": table.v_g[k_e],
         "t_del_per_cm_at_delta_d": table.t_del_per_cm[k_d],
         "gvd_at_delta_e": table.gvd[k_e]},
        _flags_dict(cfg, med)))
    print(f"wrote {out/'dispersion.csv'}")
    return EXIT_OK


def cmd_switch(args) -> int:
    cfg = _read_config(args, "switch")
    med = cfg.medium()
    mu34 = cfg.get("mu34_au")
    mu34_si = None if mu34 is None else mu34 * DIPOLE_AU
    sigma_b = cfg.get("sigma_b_cm2") * 1.0e-4
    reports = {}
    for regime in ("defect", "edge"):
        rep = switch_report(med, regime, cfg.get("rabi_b") or 0.0,
                            cfg.get("delta_b") or 0.0, cfg.get("l_b_cm"),
                            mu34=mu34_si, omega_b=cfg.get("omega_b_rad_s"),
                            sigma_b=sigma_b)
        reports[regime] = {
            "phase_shift_local_rad_per_cm": rep.phase_shift_local_rad_per_cm,
            "phase_shift_saturated_rad": rep.phase_shift_saturated_rad,
            "im_alpha_off": rep.im_alpha_off, "im_alpha_on": rep.im_alpha_on,
            "power_loss_off": rep.power_loss_off,
            "power_loss_on": rep.power_loss_on,
            "z_eff_cm": rep.z_eff_cm, "contrast": rep.contrast,
        }
    tiers = phase_shift_local(med.s3, med.zeta_cm, med)
    win = transparency_window(med)
    off = edge_absorption_off(med)
    on = edge_absorption_on(med.s3, med)
    results = {
        "regimes": reports,
        "phase_tiers": {"exact": tiers.exact, "derivative": tiers.derivative,
                        "scale": tiers.scale, "regime_ok": tiers.regime_ok},
        "edge_absorption": {"off_estimate": off.estimate, "off_exact": off.exact,
                            "on_estimate": on.estimate, "on_exact": on.exact},
        "transparency_window": {"width": win.width, "tau_min_s": win.tau_min_s,
                                "measured_width": win.measured_width},
    }
    if mu34_si is not None:
        results["phase_shift_saturated_rad"] = phase_shift_saturated(
            mu34_si, cfg.get("omega_b_rad_s"), sigma_b,
            (cfg.get("delta_b") or 0.0) * med.gamma2_si)
    out = Path(args.out)
    write_text(out / "switch.json",
               json_report(cfg.values, results, _flags_dict(cfg, med)))
    print(f"wrote {out/'switch.json'}")
    return EXIT_OK


def cmd_pulse(args) -> int:
    cfg = _read_config(args, "pulse")
    med = cfg.medium()
    tau_s = cfg.get("pulse_tau") / med.gamma2_si if cfg.units == "reduced" \
        else cfg.get("pulse_tau")
    pulse = make_gaussian(tau_s, cfg.get("pulse_carrier_delta_a"),
                          n=cfg.get("pulse_n"), dt_s=cfg.get("pulse_dt"))
    out_wave = propagate(pulse, med, med.zeta_cm)
    metrics = pulse_metrics(pulse, out_wave)
    out = Path(args.out)
    write_text(out / "pulse_in.csv", waveform_csv(pulse))
    write_text(out / "pulse_out.csv", waveform_csv(out_wave))
    write_text(out / "pulse.json", json_report(
        cfg.values,
        {"transmission": metrics.transmission,
         "centroid_delay_s": metrics.centroid_delay_s,
         "rms_in_s": metrics.rms_in_s, "rms_out_s": metrics.rms_out_s},
        _flags_dict(cfg, med)))
    print(f"wrote {out/'pulse.json'} (T={metrics.transmission:.4f})")
    return EXIT_OK


def cmd_oracle(args) -> int:
    cfg = _read_config(args, "oracle")
    med = cfg.medium()
    pts = cfg.get("oracle_points")
    lo, hi = cfg.get("scan_min"), cfg.get("scan_max")
    dets = np.linspace(lo, hi, pts)
    alpha_oracle = oracle_alpha(
        med, dets, span_w=cfg.get("oracle_w"), count_m=cfg.get("oracle_m"),
        t_final=cfg.get("oracle_t_final"), rabi_a=cfg.get("oracle_rabi_a"),
        rtol=cfg.get("oracle_rtol"), gamma3=med.gamma3_eff)
    alpha_exact = polarizability(dets, med.undriven())
    rows = []
    for d, ao, ae in zip(dets, alpha_oracle, alpha_exact):
        rows.append({"delta_a": float(d), "alpha_exact": complex(ae),
                     "alpha_oracle": complex(ao),
                     "rel_error": abs(ao - ae) / abs(ae)})
    out = Path(args.out)
    write_text(out / "oracle.json", json_report(
        cfg.values, {"points": rows,
                     "m": cfg.get("oracle_m"), "w": cfg.get("oracle_w")},
        _flags_dict(cfg, med)))
    worst = max(r["rel_error"] for r in rows)
    print(f"wrote {out/'oracle.json'} (max rel error {worst:.3e})")
    return EXIT_OK


def cmd_entangle(args) -> int:
    cfg = _read_config(args, "entangle")
    med = cfg.medium()
    mu34 = cfg.get("mu34_au")
    rep = end_to_end(
        med, cfg.get("scheme"), rabi_b=cfg.get("rabi_b") or 0.0,
        delta_b=cfg.get("delta_b") or 0.0, l_b_cm=cfg.get("l_b_cm"),
        mu34=None if mu34 is None else mu34 * DIPOLE_AU,
        omega_b=cfg.get("omega_b_rad_s"),
        sigma_b=cfg.get("sigma_b_cm2") * 1.0e-4,
        alpha_coh=np.sqrt(cfg.get("alpha_coh_sq")))
    results = {"scheme": rep.scheme, "t_on": rep.t_on, "t_off": rep.t_off,
               "phi_a_rad": rep.phi_a, "negativity": rep.negativity,
               "bell_fidelity": rep.bell_fidelity,
               "path_entropy_bits": rep.path_entropy_bits,
               "overlap_sq": rep.overlap_sq, **rep.details}
    out = Path(args.out)
    write_text(out / "entangle.json",
               json_report(cfg.values, results, rep.flags))
    print(f"wrote {out/'entangle.json'}")
    return EXIT_OK


def cmd_reproduce_figs(args) -> int:
    cfg = _read_config(args, "reproduce-figs")
    med = cfg.medium()
    out = Path(args.out)
    lo, hi, step = -4.0, 4.0, 0.01
    base = med.undriven()
    t_a = scan_spectrum(lo, hi, step, base)
    write_text(out / "fig2a.csv", spectrum_csv(t_a))
    import dataclasses
    doubled = dataclasses.replace(base, beta_d=2.0 * base.beta_d,
                                  beta_e=2.0 * base.beta_e)
    write_text(out / "fig2b.csv", spectrum_csv(scan_spectrum(lo, hi, step, doubled)))
    s3 = med.s3 if med.s3 != 0.0 else -0.1
    write_text(out / "fig3_on.csv",
               spectrum_csv(scan_spectrum(lo, hi, step, base.with_s3(s3))))
    panels = render_all(out, out)
    write_text(out / "figs.json", json_report(
        cfg.values,
        {"csv": ["fig2a.csv", "fig2b.csv", "fig3_on.csv"],
         "panels": [p.name for p in panels]},
        _flags_dict(cfg, med)))
    print(f"wrote 3 CSVs and {len(panels)} panels under {out}")
    return EXIT_OK


def cmd_plot(args) -> int:
    spec = PanelSpec(panel=args.panel, csv_paths=args.csv,
                     out_path=Path(args.out_file))
    render(spec)
    print(f"wrote {args.out_file}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dopedpc",
        description="Photon-photon interaction engine for doped band-gap media")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, needs_config=True):
        p = sub.add_parser(name)
        if needs_config:
            p.add_argument("--config", required=True)
            p.add_argument("--out", default="out")
        p.set_defaults(fn=fn)
        return p

    for name, fn in [("spectrum", cmd_spectrum), ("dispersion", cmd_dispersion),
                     ("switch", cmd_switch), ("pulse", cmd_pulse),
                     ("oracle", cmd_oracle), ("entangle", cmd_entangle),
                     ("reproduce-figs", cmd_reproduce_figs)]:
        add(name, fn)
    p = sub.add_parser("plot")
    p.add_argument("--csv", action="append", required=True,
                   help="spectrum CSV (repeat for overlay panels)")
    p.add_argument("--panel", required=True)
    p.add_argument("--out", dest="out_file", required=True)
    p.set_defaults(fn=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, matching the validation code
        return int(exc.code) if exc.code is not None else EXIT_VALIDATION
    try:
        return args.fn(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
