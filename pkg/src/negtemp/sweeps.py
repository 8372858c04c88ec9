"""Truncation-converged parameter sweeps and feature detection on the rows.

A scenario maps a swept axis (cooperativity, exchange strength, or bath
occupation) onto model specs, converges the Fock truncation per point,
solves the steady state, and emits one row per qubit. Points are
independent and may be solved in parallel; row order is deterministic.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .dynamics import SolverOptions, SteadyStateResult, liouvillian, steady_state
from .errors import NegtempError, SweepError, TruncationError
from .models import ModelInstance, ModelSpec, build_model, coupling_from_cooperativity
from .thermo import QubitThermo, partial_trace, qubit_thermo

SWEEP_AXES = ("cooperativity", "lambda_over_gamma", "bath_n")
CANONICAL_IDS = tuple(f"fig{i}" for i in range(1, 8))


@dataclass(frozen=True)
class TruncationPolicy:
    """Adaptive Fock-cutoff policy: grow n by x1.5 until observables settle."""

    n_start: int = 8
    n_cap: int = 96
    tol_sigma_z: float = 1e-6
    tail_eps: float = 1e-8

    def __post_init__(self):
        if self.n_start < 4:
            raise ValueError(f"n_start must be >= 4, got {self.n_start}")
        if self.n_cap < self.n_start:
            raise ValueError("n_cap must be >= n_start")
        if self.tol_sigma_z <= 0 or self.tail_eps <= 0:
            raise ValueError("truncation tolerances must be > 0")


@dataclass(frozen=True)
class FixedParams:
    """Parameters held fixed along the sweep; C and g are alternatives."""

    C: float | None = None
    g: float | None = None
    lam: float | None = None
    kappa: float = 1.0
    gamma_B: float | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    scenario_id: str
    k_list: tuple[int, ...]
    n_list: tuple[float, ...]
    sweep_axis: str
    axis_grid: tuple[float, ...]
    fixed: FixedParams = field(default_factory=FixedParams)
    truncation: TruncationPolicy = field(default_factory=TruncationPolicy)

    def __post_init__(self):
        if not self.scenario_id or any(c in self.scenario_id for c in ",\n"):
            raise ValueError(f"bad scenario id {self.scenario_id!r}")
        if self.sweep_axis not in SWEEP_AXES:
            raise ValueError(f"sweep_axis must be one of {SWEEP_AXES}")
        grid = tuple(float(x) for x in self.axis_grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("axis_grid must be strictly increasing")
        object.__setattr__(self, "axis_grid", grid)
        object.__setattr__(self, "k_list", tuple(int(k) for k in self.k_list))
        object.__setattr__(self, "n_list", tuple(float(n) for n in self.n_list))

        fixed = self.fixed
        if self.sweep_axis == "cooperativity":
            if fixed.C is not None or fixed.g is not None:
                raise ValueError("cooperativity sweeps take C from the axis, not from fixed")
        else:
            if (fixed.C is None) == (fixed.g is None):
                raise ValueError("exactly one of fixed C or g is required off the C-axis")
        if self.sweep_axis == "lambda_over_gamma":
            if fixed.lam is not None:
                raise ValueError("exchange sweeps take lambda from the axis, not from fixed")
            if fixed.gamma_B is None:
                raise ValueError("exchange sweeps need gamma_B for the second qubit")
        if self.sweep_axis == "bath_n":
            if self.n_list:
                raise ValueError("bath-occupation sweeps take n from the axis; n_list must be empty")
            if any(x < 0 for x in grid):
                raise ValueError("bath occupations must be >= 0")
        elif not self.n_list:
            raise ValueError("n_list must not be empty")

    @property
    def two_atom(self) -> bool:
        return self.sweep_axis == "lambda_over_gamma" or self.fixed.lam is not None


@dataclass(frozen=True)
class SweepRow:
    """One steady-state observation: a single qubit at a single axis point."""

    scenario_id: str
    k: int
    n_bath: float
    axis: str
    axis_value: float
    atom: str
    sigma_z: float
    entropy_nats: float
    kT_over_omega0: float
    coherence_abs: float
    n_max_used: int
    residual: float


def canonical_config(fig_id: int) -> ScenarioConfig:
    """Default sweep configuration for one of the seven canonical figures."""
    c_grid = tuple(np.geomspace(0.1, 100.0, 40))
    # unit spacing out to 48: the atoms only lock (gap < 0.01) for
    # exchange strengths around 40 and beyond
    lam_grid = tuple(np.linspace(0.0, 48.0, 49))
    n_grid = tuple(np.linspace(0.0, 2.0, 21))
    g_fixed = math.sqrt(10.0)
    all_n = (0.0, 0.5, 2.0)
    if fig_id == 1:
        return ScenarioConfig("fig1", (0, 1, 2, 3), all_n, "cooperativity", c_grid)
    if fig_id in (2, 3):
        return ScenarioConfig(
            f"fig{fig_id}", (0,) if fig_id == 2 else (1,), all_n, "cooperativity",
            c_grid, FixedParams(lam=3.0, gamma_B=1.0),
        )
    if fig_id in (4, 5, 6):
        return ScenarioConfig(
            f"fig{fig_id}", (fig_id - 4,), all_n, "lambda_over_gamma",
            lam_grid, FixedParams(g=g_fixed, gamma_B=1.0),
        )
    if fig_id == 7:
        return ScenarioConfig(
            "fig7", (0, 1, 2, 3), (), "bath_n", n_grid,
            FixedParams(C=10.0, lam=3.0, gamma_B=1.0),
        )
    raise ValueError(f"no canonical scenario for figure {fig_id}")


# ---------------------------------------------------------------------------
# truncation convergence


def _ladder(n_start: int, n_cap: int):
    n = n_start
    while True:
        yield n
        if n >= n_cap:
            return
        n = min(math.ceil(1.5 * n), n_cap)


def _solve_model(
    model: ModelInstance,
    qubit_slots: Sequence[int],
    boson_slot: int | None,
    solver: SolverOptions,
):
    result = steady_state(liouvillian(model), solver)
    thermos = tuple(qubit_thermo(result.rho, s) for s in qubit_slots)
    if boson_slot is not None and model.space.dims[boson_slot] >= 2:
        pops = partial_trace(result.rho, {boson_slot}).matrix.diagonal().real
        tail = float(pops[-1] + pops[-2])
    else:
        tail = 0.0
    return result, thermos, tail


@dataclass(frozen=True)
class PointSolution:
    n_max: int
    result: SteadyStateResult
    thermos: tuple[QubitThermo, ...]


def _converge_models(
    build: Callable[[int], ModelInstance],
    qubit_slots: Sequence[int],
    n_start: int,
    tol_sigma_z: float,
    tail_eps: float,
    n_cap: int,
    boson_slot: int | None = 0,
    solver: SolverOptions = SolverOptions(),
) -> PointSolution:
    """Walk the truncation ladder until both convergence criteria hold.

    Criterion (i): every qubit's <sigma_z> moved less than tol_sigma_z
    since the previous rung (vacuously true with no qubits). Criterion
    (ii): the top two Fock populations sum below tail_eps.
    """
    if tol_sigma_z <= 0 or tail_eps <= 0:
        raise ValueError("truncation tolerances must be > 0")
    prev_sigma = None
    last_delta = None
    for n in _ladder(n_start, n_cap):
        result, thermos, tail = _solve_model(build(n), qubit_slots, boson_slot, solver)
        sigma = np.array([t.sigma_z for t in thermos])
        if prev_sigma is not None:
            last_delta = float(np.max(np.abs(sigma - prev_sigma))) if len(sigma) else 0.0
        sigma_ok = not len(sigma) or (last_delta is not None and last_delta < tol_sigma_z)
        if tail < tail_eps and sigma_ok:
            return PointSolution(n, result, thermos)
        prev_sigma = sigma
    raise TruncationError(
        f"no truncation convergence up to n_max={n_cap} "
        f"(last sigma_z delta {last_delta}, tail {tail:.3e})",
        last_delta=last_delta,
    )


def _converged_solution(
    spec: ModelSpec,
    tol_sigma_z: float,
    tail_eps: float,
    n_cap: int,
    solver: SolverOptions = SolverOptions(),
) -> PointSolution:
    if spec.n_max == 1:
        # Degenerate boson stands in for a qubit-only model; nothing to grow.
        result, thermos, _ = _solve_model(build_model(spec), spec.qubit_slots, None, solver)
        return PointSolution(1, result, thermos)
    return _converge_models(
        lambda n: build_model(spec.with_n_max(n)),
        spec.qubit_slots,
        spec.n_max,
        tol_sigma_z,
        tail_eps,
        n_cap,
        solver=solver,
    )


def converge_truncation(spec: ModelSpec, tol_sigma_z: float, tail_eps: float, n_cap: int) -> int:
    """Smallest ladder cutoff (from spec.n_max upward) meeting both criteria."""
    return _converged_solution(spec, tol_sigma_z, tail_eps, n_cap).n_max


# ---------------------------------------------------------------------------
# scenario execution


@dataclass(frozen=True)
class _Point:
    scenario_id: str
    axis: str
    k: int
    n_bath: float
    axis_value: float
    spec: ModelSpec
    truncation: TruncationPolicy


def _spec_for_point(config: ScenarioConfig, k: int, n_bath: float, axis_value: float) -> ModelSpec:
    fixed = config.fixed
    kappa = fixed.kappa
    if config.sweep_axis == "cooperativity":
        g = coupling_from_cooperativity(axis_value, 1.0, kappa)
    elif fixed.g is not None:
        g = fixed.g
    else:
        g = coupling_from_cooperativity(fixed.C, 1.0, kappa)

    if config.sweep_axis == "lambda_over_gamma":
        lam = axis_value
    else:
        lam = fixed.lam

    return ModelSpec(
        k=k,
        coupling_g=g,
        gamma=1.0,
        kappa=kappa,
        n_f=n_bath,
        n_a=n_bath,
        lam=lam,
        gamma_B=fixed.gamma_B if lam is not None else None,
        n_max=config.truncation.n_start,
    )


def _enumerate_points(config: ScenarioConfig) -> list[_Point]:
    n_values: tuple[float | None, ...]
    n_values = (None,) if config.sweep_axis == "bath_n" else config.n_list
    points = []
    for k in config.k_list:
        for n in n_values:
            for x in config.axis_grid:
                n_bath = x if n is None else n
                spec = _spec_for_point(config, k, n_bath, x)
                points.append(
                    _Point(config.scenario_id, config.sweep_axis, k, n_bath, x, spec,
                           config.truncation)
                )
    return points


def _solve_point(point: _Point) -> list[SweepRow]:
    trunc = point.truncation
    try:
        sol = _converged_solution(point.spec, trunc.tol_sigma_z, trunc.tail_eps, trunc.n_cap)
    except NegtempError as exc:
        raise SweepError(
            f"scenario {point.scenario_id} failed at k={point.k}, "
            f"n={point.n_bath}, {point.axis}={point.axis_value}: {exc}",
            coords={
                "scenario_id": point.scenario_id,
                "k": point.k,
                "n_bath": point.n_bath,
                "axis": point.axis,
                "axis_value": point.axis_value,
            },
        ) from exc
    rows = []
    for label, t in zip("AB", sol.thermos):
        rows.append(
            SweepRow(
                scenario_id=point.scenario_id,
                k=point.k,
                n_bath=point.n_bath,
                axis=point.axis,
                axis_value=point.axis_value,
                atom=label,
                sigma_z=t.sigma_z,
                entropy_nats=t.entropy_nats,
                kT_over_omega0=t.kT_over_omega0,
                coherence_abs=t.coherence_abs,
                n_max_used=sol.n_max,
                residual=sol.result.residual,
            )
        )
    return rows


def run_scenario(config: ScenarioConfig, jobs: int = 1) -> list[SweepRow]:
    """Solve every scenario point and return rows ordered by
    (k, n_bath, axis_value, atom)."""
    points = _enumerate_points(config)
    if not points:
        return []
    if jobs <= 1 or len(points) == 1:
        solved = [_solve_point(p) for p in points]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(points))) as pool:
            solved = list(pool.map(_solve_point, points, chunksize=1))
    rows = [row for group in solved for row in group]
    rows.sort(key=lambda r: (r.k, r.n_bath, r.axis_value, r.atom))
    return rows


# ---------------------------------------------------------------------------
# feature detection


def select_rows(
    rows: Sequence[SweepRow],
    atom: str | None = None,
    k: int | None = None,
    n_bath: float | None = None,
) -> list[SweepRow]:
    """Filter rows by atom/k/n and sort them along the axis."""
    out = [
        r for r in rows
        if (atom is None or r.atom == atom)
        and (k is None or r.k == k)
        and (n_bath is None or r.n_bath == n_bath)
    ]
    out.sort(key=lambda r: r.axis_value)
    return out


def detect_sign_change(
    rows: Sequence[SweepRow], atom: str, k: int, n_bath: float
) -> list[float]:
    """Axis locations where sigma_z crosses zero, linearly interpolated.

    Returns every crossing in axis order; an empty list means the
    selection never changes sign.
    """
    sel = select_rows(rows, atom=atom, k=k, n_bath=n_bath)
    crossings = []
    for a, b in zip(sel, sel[1:]):
        if a.sigma_z == 0.0:
            crossings.append(a.axis_value)
        elif a.sigma_z * b.sigma_z < 0.0:
            frac = a.sigma_z / (a.sigma_z - b.sigma_z)
            crossings.append(a.axis_value + frac * (b.axis_value - a.axis_value))
    if sel and sel[-1].sigma_z == 0.0:
        crossings.append(sel[-1].axis_value)
    return crossings


@dataclass(frozen=True)
class ExtremumResult:
    axis_value: float
    value: float
    at_boundary: bool


def detect_extremum(
    rows: Sequence[SweepRow],
    atom: str,
    k: int,
    n_bath: float,
    column: str,
    mode: str = "max",
) -> ExtremumResult:
    """Locate the extremum of one column with 3-point parabolic refinement.

    Non-finite values (temperature sentinels) are ignored. An extremum on
    the grid edge cannot be refined and comes back boundary-flagged.
    """
    if mode not in ("max", "min"):
        raise ValueError("mode must be 'max' or 'min'")
    sel = select_rows(rows, atom=atom, k=k, n_bath=n_bath)
    pts = [(r.axis_value, getattr(r, column)) for r in sel if math.isfinite(getattr(r, column))]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 finite points, got {len(pts)}")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    idx = int(np.argmax(ys) if mode == "max" else np.argmin(ys))
    if idx == 0 or idx == len(pts) - 1:
        return ExtremumResult(float(xs[idx]), float(ys[idx]), at_boundary=True)
    x3, y3 = xs[idx - 1: idx + 2], ys[idx - 1: idx + 2]
    a, b, c = np.polyfit(x3, y3, 2)
    if a == 0.0:
        return ExtremumResult(float(xs[idx]), float(ys[idx]), at_boundary=False)
    x_star = -b / (2.0 * a)
    y_star = float(np.polyval([a, b, c], x_star))
    return ExtremumResult(float(x_star), y_star, at_boundary=False)
