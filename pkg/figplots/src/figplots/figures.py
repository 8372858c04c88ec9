"""Figure catalog and rendering for sweep CSVs.

Consumes the fixed CSV schema written by the negtemp CLI (no in-process
coupling). Figures 1-6 are 3x2 grids, one row per bath occupation, with
average inversion on the left and scaled temperature on the right;
figure 7 is a 4x2 grid, one row per sideband order, against the bath
occupation. Temperature curves are never drawn through an
infinite-temperature sentinel or through a divergence-type sign flip:
the curve breaks there.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

CSV_HEADER = (
    "scenario,k,n_bath,axis,axis_value,atom,sigma_z,entropy_nats,"
    "kT_over_omega0,coherence_abs,n_max_used,residual"
)

# divergence detection: a temperature sign flip with both magnitudes
# above this is the +inf/-inf crossing, not a zero crossing
DIVERGENCE_SCALE = 1.0

K_STYLES = {
    0: dict(color="black", linestyle="-"),
    1: dict(color="tab:blue", linestyle="--"),
    2: dict(color="tab:red", linestyle="-."),
    3: dict(color="tab:green", linestyle=":"),
}
ATOM_STYLES = {
    "A": dict(color="black", linestyle="-"),
    "B": dict(color="tab:blue", linestyle="--"),
}

AXIS_LABELS = {
    "cooperativity": "C",
    "lambda_over_gamma": r"$\lambda/\gamma$",
    "bath_n": r"$n$",
}


class RenderError(ValueError):
    """Raised when the CSV cannot produce the requested figure."""


@dataclass(frozen=True)
class Row:
    scenario: str
    k: int
    n_bath: float
    axis: str
    axis_value: float
    atom: str
    sigma_z: float
    kT_over_omega0: float


@dataclass(frozen=True)
class SeriesKey:
    k: int
    atom: str
    n_bath: float | None  # None: the swept axis is the bath occupation

    def label(self) -> str:
        if self.n_bath is None:
            return f"k={self.k}, atom {self.atom}"
        return f"k={self.k}, {self.atom}, n={self.n_bath:g}"


@dataclass(frozen=True)
class PanelSpec:
    title: str
    series: tuple[SeriesKey, ...]
    styles: tuple[dict, ...]


@dataclass(frozen=True)
class FigureSpec:
    figure_id: int
    panels: tuple[PanelSpec, ...]  # one per grid row
    xscale: str
    xlabel: str


_N_ROWS = (0.0, 0.5, 2.0)


def figure_spec(figure_id: int) -> FigureSpec:
    if figure_id == 1:
        panels = tuple(
            PanelSpec(
                title=f"n = {n:g}",
                series=tuple(SeriesKey(k, "A", n) for k in range(4)),
                styles=tuple(K_STYLES[k] for k in range(4)),
            )
            for n in _N_ROWS
        )
        return FigureSpec(1, panels, xscale="log", xlabel=AXIS_LABELS["cooperativity"])
    if figure_id in (2, 3):
        k = figure_id - 2
        panels = tuple(
            PanelSpec(
                title=f"n = {n:g}",
                series=(SeriesKey(k, "A", n), SeriesKey(k, "B", n)),
                styles=(ATOM_STYLES["A"], ATOM_STYLES["B"]),
            )
            for n in _N_ROWS
        )
        return FigureSpec(figure_id, panels, "log", AXIS_LABELS["cooperativity"])
    if figure_id in (4, 5, 6):
        k = figure_id - 4
        panels = tuple(
            PanelSpec(
                title=f"n = {n:g}",
                series=(SeriesKey(k, "A", n), SeriesKey(k, "B", n)),
                styles=(ATOM_STYLES["A"], ATOM_STYLES["B"]),
            )
            for n in _N_ROWS
        )
        return FigureSpec(figure_id, panels, "linear", AXIS_LABELS["lambda_over_gamma"])
    if figure_id == 7:
        panels = tuple(
            PanelSpec(
                title=f"k = {k}",
                series=(SeriesKey(k, "A", None), SeriesKey(k, "B", None)),
                styles=(ATOM_STYLES["A"], ATOM_STYLES["B"]),
            )
            for k in range(4)
        )
        return FigureSpec(7, panels, "linear", AXIS_LABELS["bath_n"])
    raise RenderError(f"no figure layout with id {figure_id}")


def read_rows(csv_path: str | Path) -> list[Row]:
    rows = []
    with open(csv_path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER.split(","):
            raise RenderError(f"unexpected CSV header in {csv_path}")
        for rec in reader:
            rows.append(
                Row(
                    scenario=rec[0], k=int(rec[1]), n_bath=float(rec[2]),
                    axis=rec[3], axis_value=float(rec[4]), atom=rec[5],
                    sigma_z=float(rec[6]), kT_over_omega0=float(rec[8]),
                )
            )
    return rows


def select_series(rows: list[Row], key: SeriesKey) -> list[Row]:
    out = [
        r for r in rows
        if r.k == key.k and r.atom == key.atom
        and (key.n_bath is None or r.n_bath == key.n_bath)
    ]
    out.sort(key=lambda r: r.axis_value)
    return out


def _available_keys(rows: list[Row]) -> str:
    combos = sorted({(r.k, r.atom, r.n_bath) for r in rows})
    return ", ".join(f"(k={k}, {atom}, n={n:g})" for k, atom, n in combos)


def build_figure(rows: list[Row], figure_id: int):
    """Assemble the matplotlib figure; left column inversion, right column
    scaled temperature."""
    if not rows:
        raise RenderError("CSV contains no data rows")
    spec = figure_spec(figure_id)
    n_rows = len(spec.panels)
    fig, axes = plt.subplots(n_rows, 2, figsize=(8.0, 2.4 * n_rows), squeeze=False)

    for i, panel in enumerate(spec.panels):
        ax_sz, ax_kt = axes[i]
        for key, style in zip(panel.series, panel.styles):
            sel = select_series(rows, key)
            if not sel:
                plt.close(fig)
                raise RenderError(
                    f"series {key.label()} not in CSV; available: {_available_keys(rows)}"
                )
            x = np.array([r.axis_value for r in sel])
            sz = np.array([r.sigma_z for r in sel])
            kt = [r.kT_over_omega0 for r in sel]
            ax_sz.plot(x, sz, label=key.label(), **style)
            x_b, kt_b = _with_breaks(x, kt)
            ax_kt.plot(x_b, kt_b, label=key.label(), **style)
        for ax in (ax_sz, ax_kt):
            ax.set_xscale(spec.xscale)
            ax.set_xlabel(spec.xlabel)
            ax.set_title(panel.title, fontsize=9)
        ax_sz.axhline(0.0, color="0.6", linewidth=0.7, zorder=0)
        ax_sz.set_ylabel(r"$\langle\sigma_z\rangle$")
        ax_kt.set_ylabel(r"$k_B T/\omega_0$")
        ax_sz.legend(fontsize=7, frameon=False)
    fig.tight_layout()
    return fig


def _with_breaks(x: np.ndarray, values) -> tuple[np.ndarray, np.ndarray]:
    """Expand (x, y) so breaks get their own NaN vertex."""
    xs, ys = [x[0]], [values[0] if math.isfinite(values[0]) else np.nan]
    for x_prev, x_cur, prev, cur in zip(x, x[1:], values, values[1:]):
        p = prev if math.isfinite(prev) else np.nan
        c = cur if math.isfinite(cur) else np.nan
        if (
            np.isfinite(p) and np.isfinite(c)
            and p * c < 0
            and min(abs(p), abs(c)) > DIVERGENCE_SCALE
        ):
            xs.append(0.5 * (x_prev + x_cur))
            ys.append(np.nan)
        xs.append(x_cur)
        ys.append(c)
    return np.array(xs), np.array(ys)


def render(csv_path: str | Path, figure_id: int, out_path: str | Path) -> Path:
    """Render one figure from a sweep CSV to a raster image file."""
    rows = read_rows(csv_path)
    fig = build_figure(rows, figure_id)
    out_path = Path(out_path)
    try:
        fig.savefig(out_path, dpi=150)
    finally:
        plt.close(fig)
    return out_path
