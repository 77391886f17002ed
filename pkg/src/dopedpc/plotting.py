"""Publication-style panels from emitted spectrum CSVs.

Conventions: imaginary parts are solid, real parts dashed.  The driven
overlay panels add magnifying insets on the two interesting frequency
regions (defect mode and band edge), windows +- 0.3 around each by
default.  Rendering never alters data: the plotted arrays are exactly the
CSV columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .errors import ValidationError
from .report import parse_spectrum_csv

INSET_HALF_WIDTH = 0.3

# panel id -> (y columns, labels, needs overlay csv)
PANELS = {
    "fig2a": (("im_alpha", "re_alpha"), "polarizability [1/cm]", False),
    "fig2b": (("im_alpha", "re_alpha"), "polarizability [1/cm]", False),
    "fig2c": (("t_del_per_cm",), "delay time per cm [s/cm]", False),
    "fig2d": (("gvd",), "GVD coefficient [s^2/cm]", False),
    "fig3a": (("im_alpha",), "Im(alpha) [1/cm]", True),
    "fig3b": (("re_alpha",), "Re(alpha) [1/cm]", True),
}


@dataclass
class PanelSpec:
    panel: str
    csv_paths: list
    out_path: Path
    inset_half_width: float = INSET_HALF_WIDTH
    meta: dict = field(default_factory=dict)


def _load(path):
    cols, meta = parse_spectrum_csv(Path(path).read_text(encoding="utf-8"))
    return cols, meta


def _require_columns(cols: dict, names, path) -> None:
    missing = [n for n in names if n not in cols]
    if missing:
        raise ValidationError(f"{path}: missing columns {missing}")


def render(spec: PanelSpec) -> Path:
    """Render one panel to spec.out_path (format from the suffix)."""
    if spec.panel not in PANELS:
        raise ValidationError(f"unknown panel '{spec.panel}'")
    ycols, ylabel, overlay = PANELS[spec.panel]
    if overlay and len(spec.csv_paths) < 2:
        raise ValidationError(
            f"panel {spec.panel} needs the undriven and driven CSVs")

    cols, meta = _load(spec.csv_paths[0])
    _require_columns(cols, ("delta_a",) + ycols, spec.csv_paths[0])

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    x = cols["delta_a"]
    if overlay:
        cols_on, meta_on = _load(spec.csv_paths[1])
        _require_columns(cols_on, ("delta_a",) + ycols, spec.csv_paths[1])
        y = cols[ycols[0]]
        ax.plot(x, y, "-", color="C0", lw=1.2, label="drive off")
        ax.plot(cols_on["delta_a"], cols_on[ycols[0]], "--", color="C3",
                lw=1.2, label="drive on")
        ax.legend(frameon=False, fontsize=9)
        for center in (meta.get("delta_d"), meta.get("delta_e")):
            if center is None:
                continue
            win = spec.inset_half_width
            axins = ax.inset_axes(
                [0.1 if center == meta.get("delta_d") else 0.62,
                 0.55, 0.28, 0.38])
            sel = (x >= center - win) & (x <= center + win)
            sel_on = ((cols_on["delta_a"] >= center - win) &
                      (cols_on["delta_a"] <= center + win))
            axins.plot(x[sel], y[sel], "-", color="C0", lw=1.0)
            axins.plot(cols_on["delta_a"][sel_on], cols_on[ycols[0]][sel_on],
                       "--", color="C3", lw=1.0)
            axins.set_xlim(center - win, center + win)
            axins.tick_params(labelsize=6)
            ax.indicate_inset_zoom(axins, edgecolor="gray")
    else:
        styles = ("-", "--")
        labels = ("Im", "Re")
        for yname, sty, lab in zip(ycols, styles, labels):
            ax.plot(x, cols[yname], sty, color="C0", lw=1.2,
                    label=lab if len(ycols) > 1 else None)
        if len(ycols) > 1:
            ax.legend(frameon=False, fontsize=9)

    ax.set_xlabel("detuning [gamma2]")
    ax.set_ylabel(ylabel)
    ax.set_title(spec.panel)
    ax.axhline(0.0, color="0.8", lw=0.6, zorder=0)
    fig.tight_layout()
    out = Path(spec.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def render_all(csv_dir: Path, out_dir: Path) -> list:
    """The six canonical panels from a reproduce-figs CSV set."""
    csv_dir, out_dir = Path(csv_dir), Path(out_dir)
    jobs = [
        ("fig2a", [csv_dir / "fig2a.csv"]),
        ("fig2b", [csv_dir / "fig2b.csv"]),
        ("fig2c", [csv_dir / "fig2a.csv"]),
        ("fig2d", [csv_dir / "fig2a.csv"]),
        ("fig3a", [csv_dir / "fig2a.csv", csv_dir / "fig3_on.csv"]),
        ("fig3b", [csv_dir / "fig2a.csv", csv_dir / "fig3_on.csv"]),
    ]
    return [render(PanelSpec(panel=p, csv_paths=paths,
                             out_path=out_dir / f"{p}.png"))
            for p, paths in jobs]
