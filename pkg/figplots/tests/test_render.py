import math
import time

import numpy as np
import pytest

from figplots.cli import main
from figplots.figures import (
    CSV_HEADER,
    RenderError,
    build_figure,
    figure_spec,
    read_rows,
    render,
)


def temperature(sigma_z):
    p_e = (1.0 + sigma_z) / 2.0
    p_g = 1.0 - p_e
    if p_e == p_g:
        return math.inf
    if p_e in (0.0, 1.0):
        return 0.0
    return 1.0 / math.log(p_g / p_e)


def synth_rows(fig_id):
    """Rows with the same series structure the solver CLI writes."""
    if fig_id in (1, 2, 3):
        axis, xs = "cooperativity", np.geomspace(0.1, 100, 9)
    elif fig_id in (4, 5, 6):
        axis, xs = "lambda_over_gamma", np.linspace(0.0, 48.0, 9)
    else:
        axis, xs = "bath_n", np.linspace(0.0, 2.0, 9)

    k_list = {1: (0, 1, 2, 3), 2: (0,), 3: (1,), 4: (0,), 5: (1,), 6: (2,), 7: (0, 1, 2, 3)}[fig_id]
    atoms = ("A",) if fig_id == 1 else ("A", "B")
    n_list = (0.0, 0.5, 2.0) if fig_id != 7 else (None,)

    rows = []
    for k in k_list:
        for n in n_list:
            for i, x in enumerate(xs):
                for atom in atoms:
                    if k == 0:
                        sz = -0.8 + 0.05 * i  # stays below zero
                    else:
                        sz = -0.4 + 0.1 * i  # crosses zero at i == 4
                    if atom == "B":
                        sz -= 0.05
                    n_bath = float(x) if n is None else n
                    rows.append([
                        f"fig{fig_id}", k, n_bath, axis, float(x), atom,
                        sz, 0.3, temperature(sz), 0.0, 12, 1e-13,
                    ])
    return rows


def write_csv(path, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")


@pytest.fixture(params=range(1, 8))
def fig_csv(request, tmp_path):
    fig_id = request.param
    path = tmp_path / f"fig{fig_id}.csv"
    write_csv(path, synth_rows(fig_id))
    return fig_id, path


def test_layout_panel_counts_and_scales(fig_csv):
    fig_id, path = fig_csv
    fig = build_figure(read_rows(path), fig_id)
    expected_panels = 8 if fig_id == 7 else 6
    assert len(fig.axes) == expected_panels
    expected_scale = "log" if fig_id in (1, 2, 3) else "linear"
    assert all(ax.get_xscale() == expected_scale for ax in fig.axes)
    # left column carries the zero line on top of the series
    spec = figure_spec(fig_id)
    per_panel = len(spec.panels[0].series)
    assert len(fig.axes[0].get_lines()) == per_panel + 1
    assert len(fig.axes[1].get_lines()) == per_panel


def test_render_writes_images_for_all_figures(tmp_path):
    started = time.perf_counter()
    for fig_id in range(1, 8):
        csv_path = tmp_path / f"fig{fig_id}.csv"
        write_csv(csv_path, synth_rows(fig_id))
        out = render(csv_path, fig_id, tmp_path / f"fig{fig_id}.png")
        assert out.exists() and out.stat().st_size > 0
    assert time.perf_counter() - started < 30.0


def test_temperature_curve_breaks_at_sentinel(tmp_path):
    path = tmp_path / "fig3.csv"
    write_csv(path, synth_rows(3))
    rows = read_rows(path)
    assert any(math.isinf(r.kT_over_omega0) for r in rows)
    fig = build_figure(rows, 3)
    kt_axis = fig.axes[1]
    has_break = any(np.isnan(line.get_ydata()).any() for line in kt_axis.get_lines())
    assert has_break


def test_divergence_sign_flip_breaks_even_without_sentinel_row(tmp_path):
    rows = synth_rows(3)
    # remove the exact-crossing rows so the flip happens between grid points
    rows = [r for r in rows if r[6] != 0.0]
    path = tmp_path / "fig3.csv"
    write_csv(path, rows)
    fig = build_figure(read_rows(path), 3)
    kt_axis = fig.axes[1]
    assert any(np.isnan(line.get_ydata()).any() for line in kt_axis.get_lines())


def test_missing_series_error_lists_available(tmp_path):
    rows = [r for r in synth_rows(3) if r[5] != "B"]
    path = tmp_path / "fig3.csv"
    write_csv(path, rows)
    with pytest.raises(RenderError) as info:
        build_figure(read_rows(path), 3)
    assert "available" in str(info.value)
    assert "atom" not in str(info.value) or "B" in str(info.value)


def test_empty_csv_errors_without_output(tmp_path):
    path = tmp_path / "empty.csv"
    write_csv(path, [])
    out = tmp_path / "out.png"
    with pytest.raises(RenderError):
        render(path, 1, out)
    assert not out.exists()


def test_bad_header_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n", encoding="utf-8")
    with pytest.raises(RenderError):
        read_rows(path)


def test_unknown_figure_id():
    with pytest.raises(RenderError):
        figure_spec(9)


def test_cli_round_trip(tmp_path):
    csv_path = tmp_path / "fig1.csv"
    write_csv(csv_path, synth_rows(1))
    out = tmp_path / "fig1.png"
    assert main(["render", "--csv", str(csv_path), "--fig", "1", "--out", str(out)]) == 0
    assert out.exists()


def test_cli_error_codes(tmp_path):
    assert main([
        "render", "--csv", str(tmp_path / "missing.csv"), "--fig", "1",
        "--out", str(tmp_path / "o.png"),
    ]) == 1
    rows = [r for r in synth_rows(1) if r[1] != 3]
    csv_path = tmp_path / "partial.csv"
    write_csv(csv_path, rows)
    assert main([
        "render", "--csv", str(csv_path), "--fig", "1", "--out", str(tmp_path / "o.png"),
    ]) == 2
