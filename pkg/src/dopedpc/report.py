"""Deterministic CSV and JSON emission.

Floats are written as their shortest round-trip decimal (Python repr), so
identical configurations produce byte-identical files.  CSV metadata rides
in `#`-prefixed lines before the header.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import __version__
from .dispersion import SpectrumTable
from .pulse import PulseWaveform


def fmt(x) -> str:
    return repr(float(x))


def spectrum_csv(table: SpectrumTable) -> str:
    lines = [f"# dopedpc spectrum v{__version__}"]
    lines.append("# units: delta_a in gamma2 units; re_alpha, im_alpha in 1/cm; "
                 "v_g in cm/s; t_del_per_cm in s/cm; gvd in s^2/cm")
    meta = " ".join(f"{k}={fmt(v)}" for k, v in sorted(table.meta.items()))
    lines.append(f"# params: {meta}")
    if table.skipped:
        skipped = " ".join(fmt(x) for x, _ in table.skipped)
        lines.append(f"# skipped: {skipped}")
    lines.append(table.CSV_HEADER)
    for row in table.rows():
        lines.append(",".join(fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_spectrum_csv(text: str):
    """Read back an emitted spectrum CSV: (columns dict, meta dict)."""
    meta: dict = {}
    header = None
    rows: list[list[float]] = []
    for line in text.splitlines():
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("params:"):
                for pair in body[len("params:"):].split():
                    k, _, v = pair.partition("=")
                    meta[k] = float(v)
            continue
        if not line.strip():
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append([float(x) for x in line.split(",")])
    if header is None:
        raise ValueError("CSV has no header line")
    data = np.asarray(rows, dtype=float)
    if data.size == 0:
        raise ValueError("CSV has no data rows")
    return {name: data[:, k] for k, name in enumerate(header)}, meta


def waveform_csv(pulse: PulseWaveform) -> str:
    lines = [f"# dopedpc waveform v{__version__}"]
    lines.append(f"# n={pulse.n} dt_s={fmt(pulse.dt)} "
                 f"carrier_delta_a={fmt(pulse.carrier_delta_a)}")
    lines.append("t,re,im")
    for t, z in zip(pulse.t, pulse.envelope):
        lines.append(f"{fmt(t)},{fmt(z.real)},{fmt(z.imag)}")
    return "\n".join(lines) + "\n"


def parse_waveform_csv(text: str) -> PulseWaveform:
    carrier = 0.0
    rows = []
    header_seen = False
    for line in text.splitlines():
        if line.startswith("#"):
            for pair in line[1:].split():
                if pair.startswith("carrier_delta_a="):
                    carrier = float(pair.split("=", 1)[1])
            continue
        if not line.strip():
            continue
        if not header_seen:
            header_seen = True
            continue
        t, re, im = (float(x) for x in line.split(","))
        rows.append((t, re + 1j * im))
    t = np.array([r[0] for r in rows])
    env = np.array([r[1] for r in rows])
    return PulseWaveform(t=t, envelope=env, carrier_delta_a=carrier)


def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, complex):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def json_report(config_echo: dict, results: dict, flags: dict) -> str:
    doc = {
        "config_echo": _jsonify(config_echo),
        "results": _jsonify(results),
        "flags": _jsonify(flags),
        "version": __version__,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_text(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path
