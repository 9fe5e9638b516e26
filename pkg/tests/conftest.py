import numpy as np
import pytest

from cheshire.config import get_settings
from cheshire.schemas import ExperimentConfig, RotorSpec, WallSpec
from cheshire.state import JointState, RotorPacket, mode_count


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    monkeypatch.delenv("CHESHIRE_N_JOBS", raising=False)
    monkeypatch.delenv("CHESHIRE_PARALLEL_BACKEND", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def default_config():
    """N = 100, delta_theta = 0.05 Gaussian on G = 256."""
    return ExperimentConfig()


@pytest.fixture
def ideal_config():
    """Ideal limit on a smooth, well-resolved packet: grid effects stay below 1e-9."""
    return ExperimentConfig(
        n_rounds=10,
        rotor=RotorSpec(grid_size=4096, delta_theta=0.3, family="raised_cosine"),
        ideal=True,
    )


@pytest.fixture
def flux_config():
    return ExperimentConfig(n_rounds=20, rotor=RotorSpec(grid_size=4096, delta_theta=0.02), ideal=True)


@pytest.fixture
def momentum_config():
    def make(n_rounds=20, budget=0.01, delta_x=1.0, wall_grid=256, **extra):
        p0 = budget / (2 * n_rounds * delta_x)
        return ExperimentConfig(
            n_rounds=n_rounds,
            wall_packet=WallSpec(grid_size=wall_grid, delta_x=delta_x, box_momentum=p0),
            **extra,
        )

    return make


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_state(rng):
    """Normalized random states over the rotor support, last Out mode left empty."""

    def make(n_rounds: int, rotor: RotorPacket, wall=None) -> JointState:
        shape = (mode_count(n_rounds), 2, rotor.support.size) + (() if wall is None else (wall.grid_size,))
        amplitudes = rng.normal(size=shape) + 1j * rng.normal(size=shape)
        amplitudes[-1] = 0
        amplitudes /= np.sqrt(np.sum(np.abs(amplitudes) ** 2))
        return JointState(amplitudes, n_rounds, rotor.grid_size, rotor.support, wall)

    return make
