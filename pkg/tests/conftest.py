import numpy as np
import pytest

import mdpsweep


@pytest.fixture(scope="session")
def chain3_g():
    return mdpsweep.chain3()


@pytest.fixture(scope="session")
def split_g():
    return mdpsweep.split()


@pytest.fixture(scope="session")
def grid_a():
    return mdpsweep.gen_gridworld(mdpsweep.layout("A", "standard"), 0.99)


@pytest.fixture(scope="session")
def grid_a_noisy():
    return mdpsweep.gen_gridworld(mdpsweep.layout("A", "noisy"), 0.99)


def reference_optimum(gmdp, eps=1e-10):
    """High-accuracy optimal values via plain value iteration."""
    report = mdpsweep.solve_vi(gmdp.mdp, np.zeros(gmdp.mdp.num_states),
                               mdpsweep.SolverConfig(eps=eps))
    assert report.converged
    return report.value


@pytest.fixture(scope="session")
def split_vstar(split_g):
    return reference_optimum(split_g)
