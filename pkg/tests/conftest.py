import numpy as np
import pytest

import pppcontract as pc


@pytest.fixture(scope="session")
def default_model():
    return pc.ContractModel.default()


@pytest.fixture(scope="session")
def reference_solves():
    """One converged solve per benchmark sigma at the production grid."""
    out = {}
    for sigma in (1.2, 1.65, 2.2):
        model = pc.ContractModel.default(pc.ModelParams(sigma=sigma))
        out[sigma] = pc.solve_hjbvi(pc.SolverConfig(model=model))
    return out


@pytest.fixture(scope="session")
def solve_12(reference_solves):
    return reference_solves[1.2]


@pytest.fixture(scope="session")
def coarse_solve():
    """Fast coarse-grid solve for mechanics tests (dx = 0.05)."""
    model = pc.ContractModel.default()
    return pc.solve_hjbvi(pc.SolverConfig(model=model, delta=0.05, n_a=256,
                                          refine_passes=2))


def attach(values_interior, v0, v_right):
    return np.concatenate(([v0], values_interior, [v_right]))
