"""Hamiltonians and thermal dissipator lists for the driven qubit-boson models.

All rates are expressed in units of the first qubit's decay rate gamma,
which is fixed to 1 unless overridden. A model is either a single driven
qubit coupled to one bosonic mode (space [n_max, 2]) or that system plus
a second qubit attached through an excitation exchange term
(space [n_max, 2, 2]).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import EmbeddingError, ModelError
from .hilbert import (
    Operator,
    SpaceDescriptor,
    annihilation,
    embed,
    op_power,
    qubit_operator,
)

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class ModelSpec:
    """Full physical configuration of one model instance.

    k is the sideband order of the qubit-boson coupling (0 = carrier,
    1 = first blue sideband, ...). coupling_g is the coupling magnitude,
    usually set from a cooperativity via coupling_from_cooperativity.
    lam/gamma_B describe the optional second qubit; both present or both
    absent. n_max = 1 degenerates the boson to a single level and stands
    in for a qubit-only model.
    """

    k: int
    coupling_g: float
    gamma: float = 1.0
    kappa: float = 1.0
    n_f: float = 0.0
    n_a: float = 0.0
    lam: float | None = None
    gamma_B: float | None = None
    n_max: int = 8

    def __post_init__(self):
        if self.k < 0 or self.k != int(self.k):
            raise ModelError(f"sideband order must be a nonnegative integer, got {self.k}")
        if self.n_max < 1:
            raise ModelError(f"Fock truncation must be >= 1, got {self.n_max}")
        for name in ("coupling_g", "gamma", "kappa", "n_f", "n_a"):
            if getattr(self, name) < 0:
                raise ModelError(f"{name} must be >= 0, got {getattr(self, name)}")
        if (self.lam is None) != (self.gamma_B is None):
            raise ModelError("lam and gamma_B must be given together or not at all")
        if self.gamma_B is not None and self.gamma_B < 0:
            raise ModelError(f"gamma_B must be >= 0, got {self.gamma_B}")

    @property
    def two_atom(self) -> bool:
        return self.lam is not None

    @property
    def space(self) -> SpaceDescriptor:
        dims = (self.n_max, 2, 2) if self.two_atom else (self.n_max, 2)
        return SpaceDescriptor(dims)

    @property
    def qubit_slots(self) -> tuple[int, ...]:
        return (1, 2) if self.two_atom else (1,)

    def with_n_max(self, n_max: int) -> "ModelSpec":
        return replace(self, n_max=n_max)


@dataclass(frozen=True)
class LindbladTerm:
    """One dissipation channel: rate * D[jump]."""

    rate: float
    jump: Operator

    def __post_init__(self):
        if self.rate < 0:
            raise ModelError(f"dissipation rate must be >= 0, got {self.rate}")


@dataclass(frozen=True)
class ModelInstance:
    """Assembled Hamiltonian plus dissipator list on one composite space."""

    space: SpaceDescriptor
    hamiltonian: Operator
    dissipators: tuple[LindbladTerm, ...]

    def __post_init__(self):
        h = self.hamiltonian.to_dense()
        if np.max(np.abs(h - h.conj().T)) > HERMITICITY_TOL:
            raise ModelError("hamiltonian is not Hermitian")
        for term in self.dissipators:
            if term.jump.space != self.space:
                raise ModelError("dissipator jump operator on a different space")


def coupling_from_cooperativity(C: float, gamma: float, kappa: float) -> float:
    """Coupling magnitude g with cooperativity C = g^2 / (gamma * kappa)."""
    if C < 0:
        raise ModelError(f"cooperativity must be >= 0, got {C}")
    if gamma <= 0 or kappa <= 0:
        raise ModelError("gamma and kappa must be > 0 to define a cooperativity")
    return math.sqrt(C * gamma * kappa)


def build_ajcm_hamiltonian(k: int, g: float, space: SpaceDescriptor, atom_slot: int) -> Operator:
    """Anti-Jaynes-Cummings coupling g * (sigma_minus a^k + sigma_plus a^dag^k).

    The boson occupies slot 0 of `space` by package convention; for k = 0
    this reduces to a carrier drive g * sigma_x on the atom.
    """
    if k < 0:
        raise ModelError(f"sideband order must be >= 0, got {k}")
    if not 0 < atom_slot < len(space) or space.dims[atom_slot] != 2:
        raise EmbeddingError(f"slot {atom_slot} of {space.dims} is not a qubit slot")
    n_max = space.dims[0]
    a_k = op_power(annihilation(n_max), k)
    if g > 0 and k >= n_max:
        warnings.warn(
            f"a^{k} vanishes on a {n_max}-level Fock space; "
            "the qubit-boson coupling is trivially zero",
            stacklevel=2,
        )
    lower = embed(qubit_operator("sigma_minus"), space, atom_slot) @ embed(a_k, space, 0)
    return g * (lower + lower.adjoint())


def build_exchange_hamiltonian(lam: float, space: SpaceDescriptor, slot_a: int, slot_b: int) -> Operator:
    """Excitation exchange lam * (sp_A sm_B + sm_A sp_B) between two qubits."""
    if slot_a == slot_b:
        raise EmbeddingError("exchange requires two distinct qubit slots")
    for slot in (slot_a, slot_b):
        if not 0 <= slot < len(space) or space.dims[slot] != 2:
            raise EmbeddingError(f"slot {slot} of {space.dims} is not a qubit slot")
    flip = embed(qubit_operator("sigma_plus"), space, slot_a) @ embed(
        qubit_operator("sigma_minus"), space, slot_b
    )
    return lam * (flip + flip.adjoint())


def build_dissipators(spec: ModelSpec, space: SpaceDescriptor) -> list[LindbladTerm]:
    """Thermal-bath channels for the boson and each qubit.

    Per bath: decay at rate r*(n+1) with the lowering jump and excitation
    at r*n with the raising jump; zero-rate terms are dropped. The second
    qubit sees a bath at the same occupation n_a but decays at gamma_B.
    """
    a = embed(annihilation(spec.n_max), space, 0)
    sm = [embed(qubit_operator("sigma_minus"), space, slot) for slot in spec.qubit_slots]

    pairs = [(spec.kappa, spec.n_f, a)]
    pairs.append((spec.gamma, spec.n_a, sm[0]))
    if spec.two_atom:
        pairs.append((spec.gamma_B, spec.n_a, sm[1]))

    terms: list[LindbladTerm] = []
    for rate, n, lower in pairs:
        if rate * (n + 1) > 0:
            terms.append(LindbladTerm(rate * (n + 1), lower))
        if rate * n > 0:
            terms.append(LindbladTerm(rate * n, lower.adjoint()))
    return terms


def build_model(spec: ModelSpec) -> ModelInstance:
    """Assemble the Hamiltonian and dissipator list for `spec`."""
    space = spec.space
    h = build_ajcm_hamiltonian(spec.k, spec.coupling_g, space, atom_slot=1)
    if spec.two_atom:
        h = h + build_exchange_hamiltonian(spec.lam, space, 1, 2)
    return ModelInstance(space, h, tuple(build_dissipators(spec, space)))
