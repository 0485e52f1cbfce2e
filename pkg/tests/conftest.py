import numpy as np
import pytest

from fanct import DiskPrimitive, FanGeometry, Phantom


@pytest.fixture(scope="session")
def unit_support_disk():
    """Centered disk a=0.5, mu=1 inside the unit support: the workhorse fixture."""
    return Phantom(primitives=(DiskPrimitive(0.0, 0.0, 0.5, 1.0),), R=1.0)


@pytest.fixture(scope="session")
def offset_disk():
    return Phantom(primitives=(DiskPrimitive(0.3, -0.2, 0.4, 2.0),), R=1.0)


@pytest.fixture(scope="session")
def two_disk_phantom():
    return Phantom(primitives=(DiskPrimitive(-0.2, 0.1, 0.35, 0.5),
                               DiskPrimitive(0.25, -0.15, 0.3, 0.3)), R=1.0)


@pytest.fixture(scope="session")
def desk_geometry():
    """D=3, L=1, K=1 with the acceptance-scale sampling."""
    return FanGeometry(D=3.0, L=1.0, R=1.0, K=1.0, n_alpha=257, n_tau=720)


@pytest.fixture(scope="session")
def small_geometry():
    return FanGeometry(D=3.0, L=1.5, R=1.0, K=2.0, n_alpha=33, n_tau=48)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
