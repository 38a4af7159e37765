import numpy as np
import pytest

from common.errors import DivergenceError, HankelMismatchError, InvalidParameterError, SpectrumError
from network_model import benchmark_network, clustered_system
from simulation import (
    Trajectory,
    compare_to_reference,
    contains_spectrum,
    deflated_abscissa,
    hankel_singular_values,
    lyapunov_solve,
    piecewise_constant,
    simulate,
    spectral_abscissa,
)


def test_scalar_decay():
    trajectory = simulate(np.array([[-1.0]]), x0=[1.0], horizon=1.0, step=1e-3)
    assert trajectory.final_state[0] == pytest.approx(np.exp(-1.0), abs=1e-8)
    assert len(trajectory.times) == 1001
    assert trajectory.step == pytest.approx(1e-3)


def test_rk4_is_fourth_order():
    errors = []
    for step in (0.1, 0.05):
        x = simulate(np.array([[-1.0]]), x0=[1.0], horizon=1.0, step=step).final_state[0]
        errors.append(abs(x - np.exp(-1.0)))
    assert 12.0 < errors[0] / errors[1] < 20.0


def test_oscillator_energy_is_preserved():
    A = np.array([[0.0, 1.0], [-1.0, 0.0]])
    trajectory = simulate(A, x0=[1.0, 0.0], horizon=10.0, step=1e-3)
    energy = np.sum(trajectory.states ** 2, axis=1)
    assert np.max(np.abs(energy - 1.0)) <= 1e-8


def test_forced_response_with_held_input():
    u = piecewise_constant(np.array([[1.0], [0.0]]), hold=1.0)
    trajectory = simulate(np.array([[0.0]]), np.array([[1.0]]), u, x0=[0.0], horizon=2.0, step=0.01)
    assert trajectory.final_state[0] == pytest.approx(1.0, abs=1e-12)


def test_invalid_grid():
    with pytest.raises(InvalidParameterError):
        simulate(np.eye(2), horizon=1.0, step=0.0)
    with pytest.raises(InvalidParameterError):
        simulate(np.eye(2), horizon=0.01, step=0.1)


def test_divergence_is_reported():
    with np.errstate(over='ignore', invalid='ignore'):
        with pytest.raises(DivergenceError) as info:
            simulate(1e3 * np.eye(2), x0=[1.0, 1.0], horizon=100.0, step=1.0)
    assert info.value.time > 0.0


def test_trajectory_csv(tmp_path):
    trajectory = simulate(np.array([[-0.5, 1.0], [0.0, -2.0]]), x0=[1.0, 1.0], horizon=1.0, step=0.1,
                          labels=['a', 'b'])
    path = trajectory.to_csv(tmp_path / 'run.csv')
    header = path.read_text().splitlines()[0]
    assert header == 'time,a,b'
    loaded = Trajectory.from_csv(path)
    assert np.array_equal(loaded.states, trajectory.states)
    assert np.array_equal(loaded.signal('b'), trajectory.signal('b'))


def test_spectral_abscissa():
    assert spectral_abscissa(-np.eye(3)) == pytest.approx(-1.0)
    assert spectral_abscissa(np.array([[0.0, 1.0], [0.0, 0.0]])) == 0.0
    assert spectral_abscissa(np.zeros((0, 0))) == float('-inf')
    net, _ = benchmark_network(1)
    assert abs(spectral_abscissa(net.state_matrix())) <= 1e-8


def test_deflated_abscissa_removes_marginal_direction():
    A = np.diag([0.0, -1.0, -2.0])
    assert deflated_abscissa(A, np.eye(3)[:, :1]) == pytest.approx(-1.0)
    net, _ = benchmark_network(1)
    rigid = np.kron(np.ones(9), [1.0, 0.0]).reshape(-1, 1)
    assert deflated_abscissa(net.state_matrix(), rigid) < 0.0


def test_contains_spectrum_counts_multiplicity():
    assert contains_spectrum(np.array([1.0, 1.0, 2.0]), np.array([1.0, 1.0]), 1e-12)
    assert not contains_spectrum(np.array([1.0, 2.0]), np.array([1.0, 1.0]), 1e-12)


def test_lyapunov_solve():
    assert lyapunov_solve(np.array([[-1.0]]), np.array([[2.0]]))[0, 0] == pytest.approx(1.0)
    assert np.allclose(lyapunov_solve(-np.eye(2), np.eye(2)), 0.5 * np.eye(2))
    rng = np.random.default_rng(0)
    A = rng.standard_normal((6, 6)) - 6.0 * np.eye(6)
    Q = np.eye(6)
    X = lyapunov_solve(A, Q)
    assert np.linalg.norm(A @ X + X @ A.T + Q) <= 1e-10
    with pytest.raises(SpectrumError):
        lyapunov_solve(np.eye(2), np.eye(2))


def test_hankel_values_of_scalar_system():
    result = hankel_singular_values(np.array([[-1.0]]), np.array([[1.0]]), np.array([[1.0]]))
    assert result.values[0] == pytest.approx(0.5)
    assert result.n_deflated == 0


def test_hankel_values_are_similarity_invariant():
    rng = np.random.default_rng(1)
    A = rng.standard_normal((4, 4)) - 5.0 * np.eye(4)
    B, C = rng.standard_normal((4, 2)), rng.standard_normal((1, 4))
    T = rng.standard_normal((4, 4)) + 4.0 * np.eye(4)
    Ti = np.linalg.inv(T)
    original = hankel_singular_values(A, B, C).values
    transformed = hankel_singular_values(Ti @ A @ T, Ti @ B, C @ T).values
    assert np.allclose(original, transformed, rtol=1e-8)


def test_hankel_needs_a_stable_part():
    with pytest.raises(SpectrumError):
        hankel_singular_values(np.zeros((2, 2)), np.ones((2, 1)), np.ones((1, 2)))


@pytest.mark.slow
def test_benchmark_hankel_values():
    net, clusters = benchmark_network(20)
    cs = clustered_system(net, clusters)
    result = hankel_singular_values(cs.A, cs.input_matrix(), cs.output_matrix())
    assert result.n_deflated == 1
    assert abs(result.deflated_eigenvalues[0]) <= 1e-6
    for local in (1.25, 5.0 / 3.0, 2.5):
        assert np.min(np.abs(result.values - local)) <= 1e-6

    # the complete-graph interarea values miss the 2.4 reference entry
    with pytest.raises(HankelMismatchError) as excinfo:
        compare_to_reference(result.distinct(1e-6), strict=True)
    assert excinfo.value.unmatched == [2.4]
    assert excinfo.value.closest[2.4] == pytest.approx(2.298, abs=1e-3)


def test_reference_comparison(caplog):
    comparison = compare_to_reference([2.5, 1.7], reference=(2.5, 1.3), band=0.05)
    assert comparison.matched == {2.5: 2.5}
    assert comparison.unmatched == [1.3]
    assert comparison.closest == {1.3: 1.7}
    assert 'without a match' in caplog.text
    with pytest.raises(HankelMismatchError):
        compare_to_reference([2.5, 1.7], reference=(2.5, 1.3), band=0.05, strict=True)
    assert compare_to_reference([1.32], reference=(1.3,), band=0.05).ok
