"""Lindblad evolution: closed-form and classical rate-equation oracles,
method cross-checks, and the leakage-rate calibration."""

import math

import numpy as np
import pytest
import scipy.linalg

from dfsmem import master_eq as me
from dfsmem.levels import ZERO_F, ONE_F, ZeemanLevel, Manifold

# leakage rate reproducing 12% qubit-subspace loss after 800 s
GAMMA_STAR = 8.262354012574365e-05


def _plus_state(space):
    psi = np.zeros(space.dim, dtype=complex)
    psi[space.index(ZERO_F)] = 1 / math.sqrt(2)
    psi[space.index(ONE_F)] = 1 / math.sqrt(2)
    return me.DensityMatrix.pure(space, psi)


# --------------------------------------------------- population dynamics

def classical_rate_matrix(ops, space):
    """Rate matrix of the embedded classical jump process.  For population
    transfers the Lindblad diagonal obeys dp/dt = M p exactly, which gives
    an oracle for evolve() that never touches the superoperator code."""
    M = np.zeros((space.dim, space.dim))
    for op in ops:
        i = space.index(op.source)
        j = space.index(op.target)
        r = op.amplitude ** 2
        M[j, i] += r
        M[i, i] -= r
    return M


def test_leakage_matches_classical_rate_equation():
    space = me.single_ion_space()
    params = me.NoiseParams(gamma_leak=3e-4, gamma_dephase=0.0)
    ops = me.build_jump_operators(params, 1)
    M = classical_rate_matrix(ops, space)
    p0 = np.zeros(space.dim)
    p0[space.index(ZERO_F)] = 1.0
    for T in (50.0, 400.0, 2000.0):
        rho = me.evolve(me.DensityMatrix.basis(space, ZERO_F), ops, T)
        expected = scipy.linalg.expm(M * T) @ p0
        np.testing.assert_allclose(np.diag(rho.mat).real, expected,
                                   rtol=0, atol=1e-12)


def test_two_level_exponential_decay():
    # a single directed channel drains the source exponentially
    space = me.single_ion_space()
    target = ZeemanLevel(Manifold.F_7HALF, 3, 1)
    gamma = 2.5e-3
    op = me.JumpOperator(1, "leak_up", source=ZERO_F, target=target,
                         amplitude=math.sqrt(gamma))
    rho = me.evolve(me.DensityMatrix.basis(space, ZERO_F), [op], 900.0)
    assert rho.population(ZERO_F) == pytest.approx(math.exp(-gamma * 900.0),
                                                   abs=1e-12)
    assert rho.population(target) == pytest.approx(1 - math.exp(-gamma * 900.0),
                                                   abs=1e-12)


def test_dephasing_closed_form():
    # coherence of an equal superposition decays as 0.5*exp(-2*gamma_d*T)
    space = me.single_ion_space()
    ops = me.build_jump_operators(
        me.NoiseParams(gamma_leak=0.0, gamma_dephase=0.01), 1)
    rho = me.evolve(_plus_state(space), ops, 10.0)
    c = rho.mat[space.index(ZERO_F), space.index(ONE_F)]
    assert c.real == pytest.approx(0.4093653765389909, abs=1e-12)
    assert abs(c.imag) < 1e-14
    # populations untouched by pure dephasing
    assert rho.population(ZERO_F) == pytest.approx(0.5, abs=1e-12)


def test_qubit_coherence_leakage_rate():
    # both qubit levels feed two neighbors each, so the qubit coherence
    # decays at exactly 2*gamma (single ion): no repopulation ever refills
    # an off-diagonal element.
    space = me.single_ion_space()
    gamma = 1e-4
    ops = me.build_jump_operators(me.NoiseParams(gamma, 0.0), 1)
    for T in (100.0, 1000.0):
        rho = me.evolve(_plus_state(space), ops, T)
        c = rho.mat[space.index(ZERO_F), space.index(ONE_F)].real
        assert c == pytest.approx(0.5 * math.exp(-2 * gamma * T), rel=1e-9)


# ------------------------------------------------------- method agreement

def test_rk4_matches_expm():
    space = me.single_ion_space()
    ops = me.build_jump_operators(me.NoiseParams(1e-4, 5e-4), 1)
    rho0 = _plus_state(space)
    a = me.evolve(rho0, ops, 500.0, method="expm")
    b = me.evolve(rho0, ops, 500.0, method="rk4", rk4_steps=2000)
    np.testing.assert_allclose(a.mat, b.mat, rtol=0, atol=1e-12)


def test_krylov_matches_expm():
    space = me.single_ion_space()
    ops = me.build_jump_operators(me.NoiseParams(2e-4, 1e-3), 1)
    rho0 = _plus_state(space)
    a = me.evolve(rho0, ops, 300.0, method="expm")
    b = me.evolve(rho0, ops, 300.0, method="krylov")
    np.testing.assert_allclose(a.mat, b.mat, rtol=0, atol=1e-9)


def test_two_ion_krylov_matches_rk4():
    space = me.two_ion_space()
    ops = me.build_jump_operators(me.NoiseParams(GAMMA_STAR, 0.0), 2)
    idx = me.qubit_subspace_indices(space)
    psi = np.zeros(space.dim, dtype=complex)
    psi[idx[1]] = 1.0  # |0_F, 1_F>
    rho0 = me.DensityMatrix.pure(space, psi)
    a = me.evolve(rho0, ops, 200.0, method="krylov")
    b = me.evolve(rho0, ops, 200.0, method="rk4")
    np.testing.assert_allclose(np.diag(a.mat).real, np.diag(b.mat).real,
                               rtol=0, atol=1e-9)


def test_zero_time_and_zero_noise_are_identity():
    space = me.single_ion_space()
    rho0 = _plus_state(space)
    ops = me.build_jump_operators(me.NoiseParams(1e-3, 1e-3), 1)
    same = me.evolve(rho0, ops, 0.0)
    np.testing.assert_array_equal(same.mat, rho0.mat)
    none = me.evolve(rho0, [], 100.0)
    np.testing.assert_array_equal(none.mat, rho0.mat)
    assert me.build_jump_operators(me.NoiseParams(0.0, 0.0), 2) == []


# --------------------------------------------------- DFS (anti)symmetry

def test_collective_dephasing_preserves_dfs_coherence():
    space = me.two_ion_space()
    idx = me.qubit_subspace_indices(space)
    psi = np.zeros(space.dim, dtype=complex)
    psi[idx[1]] = 1 / math.sqrt(2)
    psi[idx[2]] = 1 / math.sqrt(2)
    rho0 = me.DensityMatrix.pure(space, psi)
    ops = me.build_jump_operators(
        me.NoiseParams(0.0, 0.05, dephasing_mode="collective"), 2)
    rho = me.evolve(rho0, ops, 500.0)
    assert abs(rho.mat[idx[1], idx[2]] - 0.5) < 1e-10


def test_independent_dephasing_decays_dfs_coherence():
    space = me.two_ion_space()
    idx = me.qubit_subspace_indices(space)
    psi = np.zeros(space.dim, dtype=complex)
    psi[idx[1]] = 1 / math.sqrt(2)
    psi[idx[2]] = 1 / math.sqrt(2)
    rho0 = me.DensityMatrix.pure(space, psi)
    gd, T = 2e-4, 500.0
    ops = me.build_jump_operators(
        me.NoiseParams(0.0, gd, dephasing_mode="independent"), 2)
    rho = me.evolve(rho0, ops, T)
    expected = 0.5 * math.exp(-4 * gd * T)
    assert rho.mat[idx[1], idx[2]].real == pytest.approx(expected, rel=1e-8)


# ----------------------------------------------------------- calibration

def test_fit_gamma_to_leakage_anchor():
    gamma = me.fit_gamma_to_leakage(0.12, 800.0)
    assert gamma == pytest.approx(GAMMA_STAR, rel=1e-9)
    space = me.single_ion_space()
    ops = me.build_jump_operators(me.NoiseParams(gamma, 0.0), 1)
    rho = me.evolve(me.DensityMatrix.basis(space, ZERO_F), ops, 800.0)
    assert me.leakage_probability(rho) == pytest.approx(0.12, abs=1e-9)


def test_fit_gamma_monotone_and_errors():
    g1 = me.fit_gamma_to_leakage(0.05, 800.0)
    g2 = me.fit_gamma_to_leakage(0.20, 800.0)
    assert 0 < g1 < g2
    with pytest.raises(ValueError):
        me.fit_gamma_to_leakage(0.0, 800.0)
    with pytest.raises(ValueError):
        me.fit_gamma_to_leakage(1.0, 800.0)
    with pytest.raises(ValueError):
        me.fit_gamma_to_leakage(0.12, 0.0)


# ------------------------------------------------------ errors and (de)ser

def test_evolve_error_carries_time_reached():
    space = me.single_ion_space()
    ops = me.build_jump_operators(me.NoiseParams(100.0, 0.0), 1)
    rho0 = me.DensityMatrix.basis(space, ZERO_F)
    with pytest.raises(me.EvolveError) as exc:
        me.evolve(rho0, ops, 10.0, method="rk4", rk4_steps=5)
    assert 0.0 <= exc.value.t_reached <= 10.0


def test_validate_flags_bad_matrices():
    space = me.single_ion_space()
    good = _plus_state(space)
    good.validate()
    bad = good.copy()
    bad.mat[0, 1] = 0.5  # breaks Hermiticity
    with pytest.raises(ValueError):
        bad.validate()
    scaled = me.DensityMatrix(space, good.mat * 2.0)
    with pytest.raises(ValueError):
        scaled.validate()


def test_noise_params_validation():
    with pytest.raises(ValueError):
        me.NoiseParams(-1e-6, 0.0)
    with pytest.raises(ValueError):
        me.NoiseParams(0.0, 0.0, dephasing_mode="global")
    with pytest.raises(ValueError):
        me.build_jump_operators(me.NoiseParams(1e-4, 0.0), 3)


def test_density_round_trip(tmp_path):
    space = me.single_ion_space()
    gen = np.random.default_rng(12)
    m = gen.normal(size=(16, 16)) + 1j * gen.normal(size=(16, 16))
    m = m @ m.conj().T
    m /= np.trace(m).real
    rho = me.DensityMatrix(space, m)
    path = tmp_path / "rho.txt"
    me.save_density(rho, path)
    back = me.load_density(path)
    assert back.space == space
    np.testing.assert_array_equal(back.mat, rho.mat)


def test_two_ion_density_round_trip(tmp_path):
    space = me.two_ion_space()
    rho = me.DensityMatrix.basis(space, 51)
    path = tmp_path / "rho2.txt"
    me.save_density(rho, path)
    back = me.load_density(path)
    assert back.space.dim == 256
    assert back.space.n_ions == 2
    np.testing.assert_array_equal(back.mat, rho.mat)


def test_qubit_subspace_indices():
    assert me.qubit_subspace_indices(me.single_ion_space()) == [3, 11]
    assert me.qubit_subspace_indices(me.two_ion_space()) == [51, 59, 179, 187]


def test_leakage_probability_range():
    space = me.single_ion_space()
    rho = me.DensityMatrix.basis(space, ZERO_F)
    assert me.leakage_probability(rho) == 0.0
    hot = me.DensityMatrix.basis(space, 0)
    assert me.leakage_probability(hot) == 1.0
