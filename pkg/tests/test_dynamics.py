import math

import numpy as np
import pytest

from negtemp.dynamics import (
    DensityMatrix,
    SolverOptions,
    Superoperator,
    evolve,
    ground_state,
    liouvillian,
    maximally_mixed,
    residual,
    steady_state,
    trace_distance,
    unvec,
    vec,
)
from negtemp.errors import NoUniqueSteadyStateError, StepSizeError, SteadyStateError
from negtemp.hilbert import SpaceDescriptor, annihilation
from negtemp.models import LindbladTerm, ModelInstance, ModelSpec, build_model
from negtemp.oracles import (
    bath_qubit_excited_population,
    carrier_qubit_state,
    thermal_boson_populations,
)
from negtemp.thermo import partial_trace


def qubit_decay_model(gamma=1.0, n_a=0.0, g=0.0):
    return build_model(ModelSpec(k=0, coupling_g=g, gamma=gamma, n_a=n_a, n_f=0.0, n_max=1))


def random_hermitian(d, seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (m + m.conj().T) / 2


def test_vec_unvec_column_stacking():
    m = np.arange(4).reshape(2, 2).astype(complex)
    v = vec(m)
    assert np.array_equal(v, np.array([0, 2, 1, 3], dtype=complex))
    assert np.array_equal(unvec(v, 2), m)


def test_liouvillian_qubit_decay_action():
    # gamma (n+1) D[sigma_minus] relaxes the excited population at rate gamma
    L = liouvillian(qubit_decay_model())
    ee = np.zeros((2, 2), dtype=complex)
    ee[1, 1] = 1.0
    out = L.apply(ee)
    expected = np.diag([1.0, -1.0]).astype(complex)
    assert np.allclose(out, expected, atol=1e-14)


def test_liouvillian_commutator_only():
    space = SpaceDescriptor((4,))
    a = annihilation(4)
    h = a + a.adjoint()
    model = ModelInstance(space, h, ())
    L = liouvillian(model)
    rho = random_hermitian(4, seed=5)
    hm = h.to_dense()
    assert np.allclose(L.apply(rho), -1j * (hm @ rho - rho @ hm), atol=1e-13)


def test_trace_functional_is_left_null_vector():
    model = build_model(
        ModelSpec(k=2, coupling_g=1.3, kappa=0.8, n_f=0.4, n_a=0.2, n_max=6)
    )
    L = liouvillian(model)
    d = model.space.total_dim
    tr = vec(np.eye(d, dtype=complex)).conj()
    assert np.linalg.norm(tr @ L.matrix) < 1e-12 * L.norm_inf()


def test_liouvillian_preserves_hermiticity():
    model = build_model(
        ModelSpec(k=1, coupling_g=2.0, n_f=0.3, n_a=0.6, lam=1.5, gamma_B=0.5, n_max=4)
    )
    L = liouvillian(model)
    out = L.apply(random_hermitian(model.space.total_dim, seed=9))
    assert np.max(np.abs(out - out.conj().T)) < 1e-12


def test_steady_state_thermal_boson():
    n_f, n_max = 2.0, 80
    a = annihilation(n_max)
    model = ModelInstance(
        a.space, 0.0 * a, (LindbladTerm(n_f + 1, a), LindbladTerm(n_f, a.adjoint()))
    )
    result = steady_state(liouvillian(model))
    pops = result.rho.matrix.diagonal().real
    assert np.max(np.abs(pops - thermal_boson_populations(n_f, n_max))) < 1e-10
    mean = float(pops @ np.arange(n_max))
    assert mean == pytest.approx(2.0, abs=1e-8)
    assert result.residual < 1e-10
    assert result.solver == "direct"


def test_steady_state_bath_qubit():
    result = steady_state(liouvillian(qubit_decay_model(n_a=0.5)))
    rho_q = partial_trace(result.rho, {1}).matrix
    assert rho_q[1, 1].real == pytest.approx(
        bath_qubit_excited_population(0.5), abs=1e-10
    )


def test_steady_state_carrier_bloch():
    g = math.sqrt(10)
    model = build_model(ModelSpec(k=0, coupling_g=g, n_a=0.5, n_f=0.5, n_max=10))
    result = steady_state(liouvillian(model))
    rho_q = partial_trace(result.rho, {1}).matrix
    assert np.max(np.abs(rho_q - carrier_qubit_state(g, 1.0, 0.5))) < 1e-8


@pytest.mark.parametrize("C", [0.5, 5.0, 50.0])
def test_carrier_model_never_inverts(C):
    model = build_model(ModelSpec(k=0, coupling_g=math.sqrt(C), n_max=6))
    rho_q = partial_trace(steady_state(liouvillian(model)).rho, {1}).matrix
    assert rho_q[1, 1].real < rho_q[0, 0].real


def test_steady_state_eigen_path_agrees():
    model = build_model(ModelSpec(k=1, coupling_g=1.5, n_f=0.2, n_a=0.2, n_max=8))
    direct = steady_state(liouvillian(model))
    eig = steady_state(liouvillian(model), SolverOptions(method="eigen"))
    assert trace_distance(direct.rho, eig.rho) < 1e-8
    assert eig.solver == "eigen"


def test_steady_state_requires_dissipation():
    a = annihilation(4)
    model = ModelInstance(a.space, a + a.adjoint(), ())
    with pytest.raises((NoUniqueSteadyStateError, SteadyStateError)):
        steady_state(liouvillian(model))


def test_residual_values():
    L = liouvillian(qubit_decay_model())
    ee = np.zeros((2, 2), dtype=complex)
    ee[1, 1] = 1.0
    state = DensityMatrix(SpaceDescriptor((1, 2)), np.kron(np.eye(1), ee))
    assert residual(L, state) == pytest.approx(math.sqrt(2.0))
    result = steady_state(L)
    assert residual(L, result.rho) < 1e-10


def test_residual_scales_linearly():
    model = build_model(ModelSpec(k=1, coupling_g=1.0, n_f=0.1, n_a=0.1, n_max=5))
    L = liouvillian(model)
    rho = random_hermitian(model.space.total_dim, seed=2)
    rho = rho @ rho.conj().T
    rho /= np.trace(rho).real
    v1 = np.linalg.norm(L.matrix @ vec(rho))
    v3 = np.linalg.norm(L.matrix @ vec(3.0 * rho))
    assert v3 == pytest.approx(3.0 * v1)


def test_evolve_rabi_half_period():
    space = SpaceDescriptor((1, 2))
    g = 1.0
    model = build_model(ModelSpec(k=0, coupling_g=g, gamma=1.0, n_max=1))
    # strip the dissipators to get pure Rabi rotation
    model = ModelInstance(space, model.hamiltonian, ())
    final = evolve(model, ground_state(space), t_final=math.pi / (2 * g))
    expected = np.zeros((2, 2), dtype=complex)
    expected[1, 1] = 1.0
    assert np.max(np.abs(final.matrix - expected)) < 1e-6


def test_evolve_decay_to_ground():
    model = qubit_decay_model()
    excited = DensityMatrix(model.space, np.diag([0.0, 1.0]).astype(complex))
    final = evolve(model, excited, t_final=25.0)
    assert final.matrix[0, 0].real == pytest.approx(1.0, abs=1e-6)


def test_evolve_matches_steady_state():
    model = build_model(ModelSpec(k=1, coupling_g=math.sqrt(10), n_max=14))
    L = liouvillian(model)
    dt = 0.5 / L.norm_inf()
    final = evolve(model, ground_state(model.space), t_final=50.0, dt=dt)
    target = steady_state(L)
    assert trace_distance(final, target.rho) < 1e-6


def test_evolve_unique_fixed_point_from_two_starts():
    model = build_model(ModelSpec(k=1, coupling_g=math.sqrt(10), n_f=0.2, n_a=0.2, n_max=10))
    L = liouvillian(model)
    dt = 0.5 / L.norm_inf()
    a = evolve(model, ground_state(model.space), t_final=60.0, dt=dt)
    b = evolve(model, maximally_mixed(model.space), t_final=60.0, dt=dt)
    assert trace_distance(a, b) < 1e-6


def test_evolve_rejects_unstable_step():
    model = qubit_decay_model()
    excited = DensityMatrix(model.space, np.diag([0.0, 1.0]).astype(complex))
    with pytest.raises(StepSizeError):
        evolve(model, excited, t_final=5000.0, dt=5.0)


def test_steady_state_positivity():
    model = build_model(
        ModelSpec(k=1, coupling_g=math.sqrt(10), n_f=0.5, n_a=0.5, lam=3.0, gamma_B=1.0, n_max=10)
    )
    result = steady_state(liouvillian(model))
    assert result.rho.min_eigenvalue() >= -1e-9


def test_superoperator_shape_checked():
    import scipy.sparse as sp

    with pytest.raises(ValueError):
        Superoperator(SpaceDescriptor((2,)), sp.identity(3, format="csr"))
