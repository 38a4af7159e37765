import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from control import design_glocal
from decomposition import decompose, robust_decompose
from network_model import Perturbation, benchmark_network, clustered_system


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: benchmark-scale runs (deselect with -m 'not slow')")


@pytest.fixture(scope="session")
def benchmark():
    return benchmark_network(1)


@pytest.fixture(scope="session")
def cs(benchmark):
    net, clusters = benchmark
    return clustered_system(net, clusters)


@pytest.fixture(scope="session")
def hd(cs):
    return decompose(cs)


@pytest.fixture(scope="session")
def controller(cs, hd):
    return design_glocal(cs, hd)


@pytest.fixture(scope="session")
def perturbed_cs():
    net, clusters = benchmark_network(1, Perturbation(0.2, seed=0))
    return clustered_system(net, clusters)


@pytest.fixture(scope="session")
def rd(perturbed_cs):
    return robust_decompose(perturbed_cs)
