"""Closed-form fixed points used to cross-check the numerical pipeline.

Everything here is analytic (detailed balance or the resonant Bloch
equations under the factor-2 dissipator) and deliberately does not go
through the superoperator machinery it is used to validate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def thermal_boson_populations(n_f: float, n_max: int) -> np.ndarray:
    """Truncated geometric distribution p_m proportional to (n_f/(n_f+1))^m.

    Detailed balance of the thermal birth-death chain makes this the exact
    steady state of the damped boson even after truncation.
    """
    if n_f < 0 or n_max < 1:
        raise ValueError("need n_f >= 0 and n_max >= 1")
    if n_f == 0:
        p = np.zeros(n_max)
        p[0] = 1.0
        return p
    ratio = n_f / (n_f + 1.0)
    p = ratio ** np.arange(n_max)
    return p / p.sum()


def bath_qubit_excited_population(n_a: float) -> float:
    """Fixed point p_e = n/(2n+1) of a qubit coupled only to its bath."""
    if n_a < 0:
        raise ValueError("need n_a >= 0")
    return n_a / (2.0 * n_a + 1.0)


def carrier_qubit_state(g: float, gamma: float, n_a: float) -> np.ndarray:
    """Steady state of a resonantly driven qubit, H = g sigma_x, in the
    (|g>, |e>) basis.

    Bloch-equation fixed point for thermal relaxation at rates
    gamma (n+1) down / gamma n up:

        <sigma_z> = -gamma^2 (2n+1) / (8 g^2 + gamma^2 (2n+1)^2),
        <g|rho|e> = -2i g <sigma_z> / (gamma (2n+1)).
    """
    if gamma <= 0 or n_a < 0:
        raise ValueError("need gamma > 0 and n_a >= 0")
    width = gamma * (2.0 * n_a + 1.0)
    z = -(gamma**2) * (2.0 * n_a + 1.0) / (8.0 * g**2 + width**2)
    coh = -2j * g * z / width
    return np.array(
        [[(1.0 - z) / 2.0, coh], [np.conj(coh), (1.0 + z) / 2.0]], dtype=complex
    )


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def run_all_checks() -> list[CheckResult]:
    """Compare the solver pipeline against every analytic fixed point."""
    from .dynamics import (
        evolve,
        ground_state,
        liouvillian,
        steady_state,
        trace_distance,
    )
    from .hilbert import annihilation
    from .models import (
        LindbladTerm,
        ModelInstance,
        ModelSpec,
        build_model,
        coupling_from_cooperativity,
    )
    from .sweeps import _converged_solution
    from .thermo import partial_trace

    results = []

    # Damped boson against the truncated geometric distribution.
    n_f, n_max = 2.0, 80
    a = annihilation(n_max)
    model = ModelInstance(
        a.space,
        0.0 * a,
        (LindbladTerm(n_f + 1.0, a), LindbladTerm(n_f, a.adjoint())),
    )
    rho = steady_state(liouvillian(model)).rho
    pops = rho.matrix.diagonal().real
    expected = thermal_boson_populations(n_f, n_max)
    pop_err = float(np.max(np.abs(pops - expected)))
    mean_err = abs(float(pops @ np.arange(n_max)) - n_f)
    ok = pop_err < 1e-10 and mean_err < 1e-8
    results.append(
        CheckResult(
            "thermal boson fixed point",
            ok,
            f"population error {pop_err:.2e}, mean occupation error {mean_err:.2e}",
        )
    )

    # Undriven qubit against detailed balance.
    spec = ModelSpec(k=0, coupling_g=0.0, n_a=0.5, n_f=0.0, n_max=1)
    rho = steady_state(liouvillian(build_model(spec))).rho
    p_e = float(partial_trace(rho, {1}).matrix[1, 1].real)
    err = abs(p_e - bath_qubit_excited_population(0.5))
    results.append(
        CheckResult("bath qubit fixed point", err < 1e-10, f"p_e error {err:.2e}")
    )

    # Carrier-driven qubit against the Bloch closed form.
    g = coupling_from_cooperativity(10.0, 1.0, 1.0)
    spec = ModelSpec(k=0, coupling_g=g, n_a=0.5, n_f=0.5, n_max=12)
    rho = steady_state(liouvillian(build_model(spec))).rho
    reduced = partial_trace(rho, {1}).matrix
    err = float(np.max(np.abs(reduced - carrier_qubit_state(g, 1.0, 0.5))))
    results.append(
        CheckResult("carrier Bloch fixed point", err < 1e-8, f"state error {err:.2e}")
    )

    # Steady-state solver against long-time integration.
    spec = ModelSpec(k=1, coupling_g=g, n_a=0.5, n_f=0.5, n_max=8)
    sol = _converged_solution(spec, 1e-6, 1e-8, 96)
    model = build_model(spec.with_n_max(sol.n_max))
    L = liouvillian(model)
    dt = 0.5 / max(float(abs(L.matrix).sum(axis=1).max()), 1e-30)
    evolved = evolve(model, ground_state(model.space), t_final=50.0, dt=dt)
    dist = trace_distance(evolved, sol.result.rho)
    results.append(
        CheckResult(
            "integration cross-check", dist < 1e-6, f"trace distance {dist:.2e}"
        )
    )
    return results
