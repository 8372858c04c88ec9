"""Operator algebra over composite finite-dimensional Hilbert spaces.

Conventions used throughout the package:

* qubit basis index 0 = |g>, index 1 = |e>, so sigma_z = diag(-1, +1)
  and <sigma_z> = p_e - p_g;
* in tensor products the leftmost factor varies slowest (numpy kron
  block order), and composite model spaces put the boson slot first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import EmbeddingError, InvalidDimensionError

# Operators with side above this are stored as CSR, at or below as dense.
SPARSE_SIDE = 64


@dataclass(frozen=True)
class SpaceDescriptor:
    """Ordered list of subsystem dimensions, e.g. (n_max, 2) for boson x qubit."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) == 0 or any(d < 1 for d in dims):
            raise InvalidDimensionError(f"subsystem dimensions must all be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def __len__(self) -> int:
        return len(self.dims)


def _normalize(matrix, side: int):
    """Store dense up to SPARSE_SIDE, CSR above."""
    if side > SPARSE_SIDE:
        return sp.csr_matrix(matrix, dtype=complex)
    if sp.issparse(matrix):
        matrix = matrix.toarray()
    return np.asarray(matrix, dtype=complex)


@dataclass(frozen=True)
class Operator:
    """Complex square matrix tagged with its composite space.

    Immutable after construction; matrices are stored dense for small
    sides and CSR for large ones, transparently to callers.
    """

    space: SpaceDescriptor
    matrix: object

    def __post_init__(self):
        d = self.space.total_dim
        shape = self.matrix.shape
        if shape != (d, d):
            raise InvalidDimensionError(
                f"matrix shape {shape} does not match space dimension {d}"
            )
        object.__setattr__(self, "matrix", _normalize(self.matrix, d))

    @property
    def dim(self) -> int:
        return self.space.total_dim

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray() if self.is_sparse else np.array(self.matrix)

    def to_csr(self) -> sp.csr_matrix:
        return self.matrix.tocsr() if self.is_sparse else sp.csr_matrix(self.matrix)

    def adjoint(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)

    def __matmul__(self, other: "Operator") -> "Operator":
        if self.space != other.space:
            raise InvalidDimensionError("operator product across different spaces")
        return Operator(self.space, self.matrix @ other.matrix)

    def __add__(self, other: "Operator") -> "Operator":
        if self.space != other.space:
            raise InvalidDimensionError("operator sum across different spaces")
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.space, self.matrix * scalar)

    __rmul__ = __mul__

    @cached_property
    def trace(self) -> complex:
        m = self.matrix
        return complex(m.trace()) if self.is_sparse else complex(np.trace(m))


def identity(space: SpaceDescriptor | int) -> Operator:
    if isinstance(space, int):
        space = SpaceDescriptor((space,))
    return Operator(space, np.eye(space.total_dim, dtype=complex))


def annihilation(n_max: int) -> Operator:
    """Bosonic lowering operator on the truncated Fock space of n_max levels.

    Entries A[m, m+1] = sqrt(m+1); n_max = 1 gives the 1x1 zero matrix.
    """
    if n_max < 1:
        raise InvalidDimensionError(f"Fock truncation must be >= 1, got {n_max}")
    a = np.zeros((n_max, n_max), dtype=complex)
    for m in range(n_max - 1):
        a[m, m + 1] = math.sqrt(m + 1)
    return Operator(SpaceDescriptor((n_max,)), a)


_QUBIT = SpaceDescriptor((2,))
_QUBIT_MATRICES = {
    "sigma_plus": np.array([[0, 0], [1, 0]], dtype=complex),   # |e><g|
    "sigma_minus": np.array([[0, 1], [0, 0]], dtype=complex),  # |g><e|
    "sigma_z": np.diag([-1.0, 1.0]).astype(complex),
    "identity": np.eye(2, dtype=complex),
}


def qubit_operator(which: str) -> Operator:
    """Two-level operators in the (|g>, |e>) ordering."""
    try:
        return Operator(_QUBIT, _QUBIT_MATRICES[which].copy())
    except KeyError:
        raise ValueError(f"unknown qubit operator {which!r}") from None


def kron(a: Operator, b: Operator) -> Operator:
    """Tensor product; the left factor varies slowest."""
    space = SpaceDescriptor(a.space.dims + b.space.dims)
    if a.is_sparse or b.is_sparse or space.total_dim > SPARSE_SIDE:
        m = sp.kron(a.to_csr(), b.to_csr(), format="csr")
    else:
        m = np.kron(a.to_dense(), b.to_dense())
    return Operator(space, m)


def embed(a: Operator, target: SpaceDescriptor, slot: int) -> Operator:
    """Lift a single-subsystem operator to `target`, identity elsewhere."""
    if len(a.space) != 1:
        raise EmbeddingError("only single-subsystem operators can be embedded")
    if not 0 <= slot < len(target):
        raise EmbeddingError(f"slot {slot} out of range for {len(target)} subsystems")
    if target.dims[slot] != a.space.dims[0]:
        raise EmbeddingError(
            f"operator dimension {a.space.dims[0]} does not match "
            f"target slot {slot} dimension {target.dims[slot]}"
        )
    left = math.prod(target.dims[:slot])
    right = math.prod(target.dims[slot + 1:])
    out = a
    if left > 1:
        out = kron(identity(left), out)
    if right > 1:
        out = kron(out, identity(right))
    return Operator(target, out.matrix)


def op_power(a: Operator, k: int) -> Operator:
    """k-fold operator product; k = 0 gives the identity on a's space."""
    if k < 0:
        raise ValueError(f"operator power must be >= 0, got {k}")
    out = identity(a.space)
    for _ in range(k):
        out = out @ a
    return out
