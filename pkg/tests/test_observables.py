import numpy as np
import pytest

from bosedeph.model import ModelParams, build_operator_set
from bosedeph.observables import (
    PostSelectionError,
    bell_fidelities,
    bell_states,
    coherences,
    coincidence_probability,
    concurrence,
    fidelity,
    first_order_correlation,
    negativity,
    slocc_project,
    trace_distance,
)
from bosedeph.scenario import parse_initial_state
from bosedeph.solvers import IntegratorConfig, evolve_closed, pure_density

from conftest import random_density, random_pure


def _bell4(sign):
    v = np.array([0, 1, sign, 0], dtype=complex) / np.sqrt(2)
    return np.outer(v, v.conj())


def _werner(p):
    return p * _bell4(-1) + (1 - p) * np.eye(4) / 4


def test_concurrence_bell_state():
    assert concurrence(_bell4(1)) == pytest.approx(1.0, abs=1e-12)
    assert concurrence(_bell4(-1)) == pytest.approx(1.0, abs=1e-12)


def test_concurrence_product_state():
    v = np.kron([1, 0], [0, 1]).astype(complex)
    assert concurrence(np.outer(v, v)) == pytest.approx(0.0, abs=1e-12)
    assert concurrence(np.eye(4) / 4) == 0.0


def test_concurrence_werner_family():
    """Werner states: C = max(0, (3p - 1)/2); p = 0.5 gives 0.25."""
    assert concurrence(_werner(0.5)) == pytest.approx(0.25, abs=1e-12)
    assert concurrence(_werner(1 / 3)) == pytest.approx(0.0, abs=1e-10)
    for p in (0.4, 0.7, 0.95):
        assert concurrence(_werner(p)) == pytest.approx((3 * p - 1) / 2, abs=1e-10)


def test_concurrence_local_unitary_invariance():
    rng = np.random.default_rng(3)
    rho = 0.6 * _bell4(1) + 0.4 * np.eye(4) / 4
    c0 = concurrence(rho)
    for _ in range(5):
        z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        q, _ = np.linalg.qr(z)
        z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        q2, _ = np.linalg.qr(z)
        u = np.kron(q, q2)
        assert concurrence(u @ rho @ u.conj().T) == pytest.approx(c0, abs=1e-10)


def test_negativity_noon_state(basis):
    """(|2,0>_L + |0,2>_R)/sqrt(2) in one spin mode has negativity 1/2."""
    psi = np.zeros(basis.dim, dtype=complex)
    psi[basis.index_of((2, 0, 0, 0))] = 1 / np.sqrt(2)
    psi[basis.index_of((0, 0, 2, 0))] = 1 / np.sqrt(2)
    assert negativity(pure_density(psi), basis) == pytest.approx(0.5, abs=1e-12)


def test_negativity_separable_states(basis, rho_dist, rho_hom):
    assert negativity(rho_dist, basis) == pytest.approx(0.0, abs=1e-12)
    assert negativity(rho_hom, basis) == pytest.approx(0.0, abs=1e-12)
    bunched = np.zeros(basis.dim, dtype=complex)
    bunched[basis.index_of((1, 1, 0, 0))] = 1.0
    assert negativity(pure_density(bunched), basis) == pytest.approx(0.0, abs=1e-12)


def test_slocc_closed_beam_splitter(basis):
    """|L_up, R_down> after a quarter tunneling period: maximal spin
    entanglement in the one-per-site sector, success probability 1/2."""
    params = ModelParams(g0=0.0, lam=1.0, J=1.0, omega_0=0.0, omega_s=0.0)
    ops = build_operator_set(params, basis)
    psi0 = parse_initial_state("L_up,R_down", basis)
    t_star = np.pi / (2 * params.J)
    cfg = IntegratorConfig(dt=t_star / 400, t_end=t_star)
    traj = evolve_closed(ops.H_D, psi0, cfg, params)
    rho = traj.densities()[-1]
    assert abs(traj.times[-1] - t_star) < 1e-9
    rho4, success = slocc_project(rho, basis)
    assert success == pytest.approx(0.5, abs=1e-9)
    assert concurrence(rho4) == pytest.approx(1.0, abs=1e-9)


def test_slocc_failure_on_bunched_state(basis):
    bunched = np.zeros(basis.dim, dtype=complex)
    bunched[basis.index_of((2, 0, 0, 0))] = 1.0
    with pytest.raises(PostSelectionError):
        slocc_project(pure_density(bunched), basis)


def test_slocc_identity_on_one_per_site(basis, rho_dist):
    rho4, success = slocc_project(rho_dist, basis)
    assert success == pytest.approx(1.0, abs=1e-12)
    want = np.zeros((4, 4))
    want[1, 1] = 1.0  # |up down>
    assert np.abs(rho4 - want).max() < 1e-12


def test_coincidence_probability(basis, offres_ops, rho_dist):
    assert coincidence_probability(rho_dist, offres_ops.Pi_LR) == pytest.approx(1.0)
    bunched = np.zeros(basis.dim, dtype=complex)
    bunched[basis.index_of((1, 1, 0, 0))] = 1.0
    assert coincidence_probability(pure_density(bunched), offres_ops.Pi_LR) == 0.0


def test_first_order_correlation(basis):
    """C1 vanishes on site-local states and is extremal on delocalized ones."""
    psi_loc = parse_initial_state("L_up,R_up", basis)
    assert first_order_correlation(pure_density(psi_loc), basis) == pytest.approx(
        0.0, abs=1e-12)
    # symmetric single-particle-like superposition in the up mode:
    # (|L_up L_up> + sqrt(2)|L_up R_up> + |R_up R_up>)/2 = (L+ + R+)^2/2sqrt(2)|0>
    psi = np.zeros(basis.dim, dtype=complex)
    psi[basis.index_of((2, 0, 0, 0))] = 0.5
    psi[basis.index_of((1, 0, 1, 0))] = np.sqrt(0.5)
    psi[basis.index_of((0, 0, 2, 0))] = 0.5
    assert first_order_correlation(pure_density(psi), basis) == pytest.approx(
        2.0, abs=1e-12)
    with pytest.raises(ValueError):
        first_order_correlation(pure_density(psi), basis, spin="sideways")


def test_fidelity_basics():
    rng = np.random.default_rng(4)
    rho = random_density(rng, dim=6, rank=3)
    sig = random_density(rng, dim=6, rank=4)
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-7)
    assert 0.0 <= fidelity(rho, sig) <= 1.0
    assert fidelity(rho, sig) == pytest.approx(fidelity(sig, rho), abs=1e-7)


def test_fidelity_pure_states_overlap():
    rng = np.random.default_rng(5)
    for _ in range(5):
        a, b = random_pure(rng, 6), random_pure(rng, 6)
        got = fidelity(pure_density(a), pure_density(b))
        assert got == pytest.approx(abs(np.vdot(a, b)) ** 2, abs=1e-7)


def test_trace_distance_basics():
    rng = np.random.default_rng(6)
    rho = random_density(rng, dim=6, rank=3)
    sig = random_density(rng, dim=6, rank=4)
    assert trace_distance(rho, rho) == 0.0
    assert 0.0 < trace_distance(rho, sig) <= 1.0
    # orthogonal pure states are perfectly distinguishable
    e0, e1 = np.eye(6)[0], np.eye(6)[1]
    assert trace_distance(pure_density(e0), pure_density(e1)) == pytest.approx(1.0)


def test_fuchs_van_de_graaf_bounds():
    rng = np.random.default_rng(7)
    for _ in range(20):
        rho = random_density(rng, dim=5, rank=rng.integers(1, 5))
        sig = random_density(rng, dim=5, rank=rng.integers(1, 5))
        f = fidelity(rho, sig)
        t = trace_distance(rho, sig)
        assert 1 - np.sqrt(f) <= t + 1e-10
        assert t <= np.sqrt(1 - f) + 1e-10


def test_coherences_extraction(basis):
    rho = np.zeros((basis.dim, basis.dim), dtype=complex)
    rho[1, 6] = 0.25 - 0.1j
    got = coherences(rho, [(1, 6), (3, 4)])
    assert got == [0.25 - 0.1j, 0.0]


def test_bell_fidelities(basis):
    """The embedded |Psi-> spin state projects onto |Psi-> with F = 1."""
    psi = np.zeros(basis.dim, dtype=complex)
    psi[basis.index_of((1, 0, 0, 1))] = 1 / np.sqrt(2)   # |up down>
    psi[basis.index_of((0, 1, 1, 0))] = -1 / np.sqrt(2)  # |down up>
    f_p, f_m, success = bell_fidelities(pure_density(psi), basis)
    assert f_m == pytest.approx(1.0, abs=1e-12)
    assert f_p == pytest.approx(0.0, abs=1e-12)
    assert success == pytest.approx(1.0, abs=1e-12)
    psi_p, psi_m = bell_states(basis)
    assert np.trace(psi_p @ psi_m) == pytest.approx(0.0, abs=1e-12)
