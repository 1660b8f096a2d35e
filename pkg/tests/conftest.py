import numpy as np
import pytest

from wigner_deco import (
    PhysicalParams,
    PositionGrid,
    cat_state,
    density_from_pure,
    gaussian_packet,
    mix,
    oscillator_eigenstate,
    wigner_transform,
)

SIGMA_CAT = 1 / np.sqrt(2)


@pytest.fixture(scope="session")
def params():
    return PhysicalParams(hbar=1.0, mass=1.0, diffusion_d=1.0)


@pytest.fixture(scope="session")
def grid():
    return PositionGrid(x_min=-16.0, x_max=16.0, n_points=256)


def make_zoo(grid, params):
    """The state zoo used by the headline positivity checks: packets, cats
    of growing separation, low eigenstates, one 50/50 mixture."""
    zoo = {
        "packet": density_from_pure(gaussian_packet(grid, 0.0, 0.0, 1.0, params)),
        "packet_moving": density_from_pure(gaussian_packet(grid, 2.0, 1.0, 0.8, params)),
    }
    for x0 in (2, 3, 4, 6, 8):
        zoo[f"cat{x0}"] = density_from_pure(
            cat_state(grid, float(x0), SIGMA_CAT, 0.0, params)
        )
    for n in (1, 2, 3, 4):
        zoo[f"eigen{n}"] = density_from_pure(oscillator_eigenstate(grid, n, 1.0))
    zoo["mixture"] = mix(
        [
            (0.5, density_from_pure(gaussian_packet(grid, -4.0, 0.0, 1.0, params))),
            (0.5, density_from_pure(gaussian_packet(grid, 4.0, 0.0, 1.0, params))),
        ]
    )
    return zoo


@pytest.fixture(scope="session")
def zoo(grid, params):
    return make_zoo(grid, params)


@pytest.fixture(scope="session")
def zoo_fields(zoo, params):
    return {name: wigner_transform(rho, params) for name, rho in zoo.items()}
