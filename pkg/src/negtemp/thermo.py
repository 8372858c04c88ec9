"""Reduced-state observables: populations, entropy, effective temperature.

The effective temperature of a qubit is the Boltzmann-ratio form
k_B T / omega_0 = 1 / ln(p_g / p_e), which is the entropy-energy
derivative evaluated along the family of diagonal qubit states. It is
negative exactly when the population is inverted, and diverges at
p_e = p_g, which is reported as a +inf sentinel rather than a sign.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .dynamics import DensityMatrix, POSITIVITY_SLACK
from .errors import PositivityError
from .hilbert import SpaceDescriptor

EIGENVALUE_FLOOR = 1e-14
COHERENCE_FLAG = 1e-3


@dataclass(frozen=True)
class QubitThermo:
    """Populations, inversion, entropy and scaled temperature of one qubit."""

    p_g: float
    p_e: float
    sigma_z: float
    entropy_nats: float
    kT_over_omega0: float
    coherence_abs: float


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the kept slots, order preserved."""
    keep = sorted(set(keep))
    dims = rho.space.dims
    n = len(dims)
    if not keep:
        raise ValueError("keep-set must not be empty")
    if any(not 0 <= s < n for s in keep):
        raise ValueError(f"keep slots {keep} out of range for {n} subsystems")

    letters = string.ascii_lowercase
    row = list(letters[:n])
    col = [letters[n + i] if i in keep else row[i] for i in range(n)]
    out = [row[i] for i in keep] + [col[i] for i in keep]
    expr = "".join(row) + "".join(col) + "->" + "".join(out)

    tensor = rho.matrix.reshape(dims + dims)
    reduced = np.einsum(expr, tensor)
    d = math.prod(dims[i] for i in keep)
    space = SpaceDescriptor(tuple(dims[i] for i in keep))
    return DensityMatrix(space, reduced.reshape((d, d)))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """- sum lambda ln lambda in nats, with 0 ln 0 = 0."""
    eigs = rho.eigenvalues()
    if eigs[0] < -POSITIVITY_SLACK:
        raise PositivityError(f"state has eigenvalue {eigs[0]:.3e}")
    eigs = np.where(eigs < EIGENVALUE_FLOOR, 0.0, eigs)
    nonzero = eigs[eigs > 0]
    return float(-np.sum(nonzero * np.log(nonzero)))


def effective_temperature(p_g: float, p_e: float) -> float:
    """Scaled Boltzmann temperature k_B T / omega_0 = 1 / ln(p_g / p_e).

    Returns +inf at the p_e = p_g crossing (sign undefined there), 0.0 for
    the ground state and -0.0 for full inversion. Computed from the
    max/min ratio so that swapping p_g and p_e flips the sign exactly.
    """
    for name, p in (("p_g", p_g), ("p_e", p_e)):
        if p < -POSITIVITY_SLACK:
            raise PositivityError(f"{name} = {p} is negative")
    p_g, p_e = max(p_g, 0.0), max(p_e, 0.0)
    if abs(p_g + p_e - 1.0) > 1e-8:
        raise ValueError(f"populations must sum to 1, got {p_g + p_e}")
    if p_e == p_g:
        return math.inf
    hi, lo = (p_g, p_e) if p_g > p_e else (p_e, p_g)
    magnitude = 0.0 if lo == 0.0 else 1.0 / math.log(hi / lo)
    return math.copysign(magnitude, 1.0 if p_g > p_e else -1.0)


def qubit_thermo(rho_full: DensityMatrix, slot: int) -> QubitThermo:
    """Trace down to `slot` and compute all qubit observables.

    Entropy comes from the eigenvalues of the full reduced matrix;
    temperature from the populations alone, with coherence reported
    separately.
    """
    if rho_full.space.dims[slot] != 2:
        raise ValueError(f"slot {slot} of {rho_full.space.dims} is not a qubit slot")
    reduced = partial_trace(rho_full, {slot})
    p_g = float(reduced.matrix[0, 0].real)
    p_e = float(reduced.matrix[1, 1].real)
    for p in (p_g, p_e):
        if p < -POSITIVITY_SLACK:
            raise PositivityError(f"qubit population {p} is negative")
    p_g, p_e = min(max(p_g, 0.0), 1.0), min(max(p_e, 0.0), 1.0)
    return QubitThermo(
        p_g=p_g,
        p_e=p_e,
        sigma_z=p_e - p_g,
        entropy_nats=von_neumann_entropy(reduced),
        kT_over_omega0=effective_temperature(p_g, p_e),
        coherence_abs=float(abs(reduced.matrix[0, 1])),
    )
