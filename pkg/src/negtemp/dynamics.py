"""Master-equation dynamics: superoperator assembly and steady-state solves.

Vectorization is column-stacking throughout: vec(rho)[j*d + i] = rho[i, j],
so vec(X rho Y) = (Y^T kron X) vec(rho). Dissipators use the standard GKSL
normalization,

    D[A] rho = A rho A^dag - (A^dag A rho + rho A^dag A) / 2,

so a rate r multiplying D[lowering operator] relaxes the population at
exactly r. The balance between coherent coupling and damping, and with it
every cooperativity threshold in the models, depends on this choice; the
quoted onset values (inversion from C ~ 0.65 upward for the first
sideband, and so on) hold in this normalization only.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    NoUniqueSteadyStateError,
    PositivityError,
    StepSizeError,
    SteadyStateError,
)
from .hilbert import SpaceDescriptor
from .models import ModelInstance

TRACE_TOL = 1e-10
HERM_TOL = 1e-10
POSITIVITY_SLACK = 1e-9


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(matrix, dtype=complex).reshape(-1, order="F")


def unvec(vector: np.ndarray, d: int) -> np.ndarray:
    """Inverse of vec for a d x d matrix."""
    return np.asarray(vector, dtype=complex).reshape((d, d), order="F")


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace Hermitian state on a composite space.

    Trace and Hermiticity are enforced at construction; positivity is
    checked where it matters (entropies, solver output) since it needs
    an eigendecomposition.
    """

    space: SpaceDescriptor
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d = self.space.total_dim
        if m.shape != (d, d):
            raise ValueError(f"state shape {m.shape} does not match space dimension {d}")
        if abs(np.trace(m) - 1.0) > TRACE_TOL:
            raise ValueError(f"state trace {np.trace(m)} is not 1")
        if np.max(np.abs(m - m.conj().T)) > HERM_TOL:
            raise ValueError("state is not Hermitian")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.space.total_dim

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues()[0])


def ground_state(space: SpaceDescriptor) -> DensityMatrix:
    """|0...0><0...0| on the composite space."""
    m = np.zeros((space.total_dim,) * 2, dtype=complex)
    m[0, 0] = 1.0
    return DensityMatrix(space, m)


def maximally_mixed(space: SpaceDescriptor) -> DensityMatrix:
    d = space.total_dim
    return DensityMatrix(space, np.eye(d, dtype=complex) / d)


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Half the trace norm of the difference."""
    eigs = np.linalg.eigvalsh(a.matrix - b.matrix)
    return 0.5 * float(np.sum(np.abs(eigs)))


@dataclass(frozen=True)
class Superoperator:
    """Sparse matrix acting on column-stacked density matrices."""

    space: SpaceDescriptor
    matrix: sp.csr_matrix

    def __post_init__(self):
        d2 = self.space.total_dim ** 2
        if self.matrix.shape != (d2, d2):
            raise ValueError(f"superoperator shape {self.matrix.shape} is not ({d2}, {d2})")
        object.__setattr__(self, "matrix", sp.csr_matrix(self.matrix, dtype=complex))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Return the matrix-valued action on a d x d array."""
        d = self.space.total_dim
        return unvec(self.matrix @ vec(rho), d)

    def norm_inf(self) -> float:
        return float(abs(self.matrix).sum(axis=1).max())


def liouvillian(model: ModelInstance) -> Superoperator:
    """Vectorized generator of the master equation for `model`.

    L = -i (I kron H - H^T kron I)
        + sum_j r_j (conj(A_j) kron A_j
                     - (I kron A_j^dag A_j + (A_j^dag A_j)^T kron I) / 2)
    """
    d = model.space.total_dim
    eye = sp.identity(d, dtype=complex, format="csr")
    h = model.hamiltonian.to_csr()
    L = -1j * (sp.kron(eye, h, format="csr") - sp.kron(h.T, eye, format="csr"))
    for term in model.dissipators:
        a = term.jump.to_csr()
        ada = (a.conj().T @ a).tocsr()
        L = L + term.rate * (
            sp.kron(a.conj(), a, format="csr")
            - 0.5 * sp.kron(eye, ada, format="csr")
            - 0.5 * sp.kron(ada.T, eye, format="csr")
        )
    return Superoperator(model.space, L.tocsr())


def residual(L: Superoperator, rho: DensityMatrix) -> float:
    """l2 norm of L vec(rho)."""
    return float(np.linalg.norm(L.matrix @ vec(rho.matrix)))


def _trace_row(d: int) -> sp.csr_matrix:
    """Row vector picking out the trace of a column-stacked matrix."""
    cols = np.arange(d) * (d + 1)
    data = np.ones(d, dtype=complex)
    return sp.csr_matrix((data, (np.zeros(d, dtype=int), cols)), shape=(1, d * d))


@dataclass(frozen=True)
class SolverOptions:
    """Steady-state solver configuration.

    method "direct" replaces the first row of L (a diagonal-index row,
    which is part of the trace dependency) with the trace functional and
    factorizes once; "eigen" targets the eigenvector of smallest-magnitude
    eigenvalue and exists as an independent diagnostics path.
    """

    method: str = "direct"
    tol: float | None = None

    def resolved_tol(self) -> float:
        if self.tol is not None:
            return self.tol
        return 1e-10 if self.method == "direct" else 1e-8

    def __post_init__(self):
        if self.method not in ("direct", "eigen"):
            raise ValueError(f"unknown steady-state method {self.method!r}")


@dataclass(frozen=True)
class SteadyStateResult:
    rho: DensityMatrix
    residual: float
    n_max_used: int
    solver: str


def steady_state(L: Superoperator, opts: SolverOptions = SolverOptions()) -> SteadyStateResult:
    """Solve L vec(rho) = 0 with trace(rho) = 1.

    The solution is projected to exact Hermiticity and unit trace, and
    the reported residual is measured against the unmodified L.
    """
    d = L.space.total_dim
    if opts.method == "direct":
        row = _trace_row(d)
        system = sp.vstack([row, L.matrix[1:, :]], format="csc")
        rhs = np.zeros(d * d, dtype=complex)
        rhs[0] = 1.0
        # a singular factorization (no dissipation) comes back as NaNs and
        # is reported as NoUniqueSteadyStateError below
        with np.errstate(all="ignore"), warnings.catch_warnings():
            warnings.simplefilter("ignore", spla.MatrixRankWarning)
            x = spla.spsolve(system, rhs)
    else:
        # Deterministic start vector; small negative shift keeps the
        # factorized matrix nonsingular while targeting the null vector.
        v0 = vec(np.eye(d, dtype=complex) / d)
        vals, vecs = spla.eigs(L.matrix.tocsc(), k=1, sigma=-1e-9, which="LM", v0=v0)
        x = vecs[:, 0]

    if not np.all(np.isfinite(x)):
        raise NoUniqueSteadyStateError(
            "steady-state system is singular; the model has no dissipation "
            "or a degenerate kernel"
        )

    rho = unvec(x, d)
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr) < 1e-300:
        raise NoUniqueSteadyStateError("solver returned a traceless kernel vector")
    rho = rho / tr

    state = DensityMatrix(L.space, rho)
    res = residual(L, state)
    tol = opts.resolved_tol()
    if not res <= tol:
        raise SteadyStateError(
            f"steady-state residual {res:.3e} above tolerance {tol:.1e}", residual=res
        )
    lam_min = state.min_eigenvalue()
    if lam_min < -POSITIVITY_SLACK:
        raise PositivityError(f"steady state has eigenvalue {lam_min:.3e}")
    return SteadyStateResult(
        rho=state, residual=res, n_max_used=L.space.dims[0], solver=opts.method
    )


def evolve(
    model: ModelInstance,
    rho0: DensityMatrix,
    t_final: float,
    dt: float | None = None,
) -> DensityMatrix:
    """Fixed-step classical RK4 integration of vec(rho)' = L vec(rho).

    Used as an independent cross-check of the steady-state solver; the
    default step 0.01/||L||_inf is far inside the stability region.
    """
    if rho0.space != model.space:
        raise ValueError("initial state is on a different space than the model")
    L = liouvillian(model)
    A = L.matrix
    if dt is None:
        dt = 0.01 / max(L.norm_inf(), 1e-30)
    if dt <= 0 or t_final < 0:
        raise ValueError("need dt > 0 and t_final >= 0")
    n_steps = max(1, math.ceil(t_final / dt))
    h = t_final / n_steps

    d = model.space.total_dim
    diag_idx = np.arange(d) * (d + 1)
    v = vec(rho0.matrix)
    for step in range(n_steps):
        k1 = A @ v
        k2 = A @ (v + 0.5 * h * k1)
        k3 = A @ (v + 0.5 * h * k2)
        k4 = A @ (v + h * k3)
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if step % 256 == 0 or step == n_steps - 1:
            drift = abs(v[diag_idx].sum() - 1.0)
            if not drift <= 1e-6:  # catches NaN from a blown-up step too
                raise StepSizeError(
                    f"trace drifted by {drift:.3e} at t={h * (step + 1):.3g}; reduce dt"
                )

    rho = unvec(v, d)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    return DensityMatrix(model.space, rho)
