import numpy as np
import pytest

from bosedeph.model import ModelParams, build_operator_set, system_basis
from bosedeph.solvers import pure_density
from bosedeph.scenario import parse_initial_state


@pytest.fixture(scope="session")
def basis():
    return system_basis()


@pytest.fixture(scope="session")
def offres_params():
    """Off-resonance regime: strong coupling, bath centered at zero."""
    return ModelParams(g0=0.15, lam=1.0, J=1.0, omega_0=0.0, omega_s=1.0)


@pytest.fixture(scope="session")
def onres_params():
    """On-resonance regime: bath centered at the tunneling frequency."""
    return ModelParams(g0=0.1, lam=0.5, J=1.0, omega_0=1.0, omega_s=1.0)


@pytest.fixture(scope="session")
def offres_ops(offres_params, basis):
    return build_operator_set(offres_params, basis)


@pytest.fixture(scope="session")
def onres_ops(onres_params, basis):
    return build_operator_set(onres_params, basis)


@pytest.fixture(scope="session")
def rho_hom(basis):
    """Both particles spin-up, one per site."""
    return pure_density(parse_initial_state("L_up,R_up", basis))


@pytest.fixture(scope="session")
def rho_dist(basis):
    """Opposite spins, one per site."""
    return pure_density(parse_initial_state("L_up,R_down", basis))


def random_density(rng, dim=10, rank=2):
    v = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = v @ v.conj().T
    return rho / np.trace(rho)


def random_pure(rng, dim=10):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)
