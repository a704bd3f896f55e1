"""Shared bodies and helpers. Bodies are immutable, so session scope is safe."""

import numpy as np
import pytest

from ellipsoid_forge import AffineImage, Ellipsoid, PBall


@pytest.fixture(scope="session")
def unit_ball():
    return Ellipsoid(np.zeros(3), np.eye(3))


@pytest.fixture(scope="session")
def ball2():
    return Ellipsoid(np.zeros(3), np.eye(3) / 4.0)


@pytest.fixture(scope="session")
def ball3():
    return Ellipsoid(np.zeros(3), np.eye(3) / 9.0)


@pytest.fixture(scope="session")
def ellipsoid149():
    # semi-axes 1, 1/2, 1/3
    return Ellipsoid(np.zeros(3), np.diag([1.0, 4.0, 9.0]))


@pytest.fixture(scope="session")
def l4_unit():
    return PBall(4.0, (1.0, 1.0, 1.0))


@pytest.fixture(scope="session")
def l4_half():
    return PBall(4.0, (0.5, 0.5, 0.5))


@pytest.fixture(scope="session")
def l4_double():
    return PBall(4.0, (2.0, 2.0, 2.0))


def random_affine(seed, dim=3, translate=True):
    """Invertible A with singular values in [0.7, 1.5] and a bounded shift.

    Built as U diag(s) V so rotations, anisotropic scalings, and shears all
    occur while the condition number stays small enough that cone sections
    remain bounded.
    """
    rng = np.random.default_rng(seed)
    u, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    v, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    a = u @ np.diag(rng.uniform(0.7, 1.5, size=dim)) @ v
    b = rng.uniform(-0.5, 0.5, size=dim) if translate else np.zeros(dim)
    return a, b


def map_body(body, a, b):
    return AffineImage(a, b, body)
