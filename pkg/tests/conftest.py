"""Shared fixtures and instance generators for the test suite."""

from pathlib import Path

import numpy as np
import pytest

from wbbeam import (
    ArrayGeometry,
    ConstraintSet,
    CovarianceMatrix,
    half_wavelength_spacing,
    reference_scenario,
)

REPO_ROOT = Path(__file__).resolve().parent.parent
REFERENCE_CONFIG = REPO_ROOT / "configs" / "reference_scenario.yaml"


def random_pd_instance(seed: int, num_constraints: int):
    """One well-conditioned random problem: Hermitian-PD covariance plus constraints.

    Constraint frequencies come from a coarse wide-band grid and the look
    direction stays well off broadside, so the constraint columns are far from
    colinear and the two solver paths can agree to near machine precision.
    Returns (covariance, constraint set, geometry, look direction, frequencies).
    """
    rng = np.random.default_rng(seed)
    n = 8
    c = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    r = CovarianceMatrix(matrix=c @ c.conj().T + n * np.eye(n))
    geom = ArrayGeometry(num_sensors=n, spacing_m=half_wavelength_spacing(8.0e9))
    theta = rng.choice([-1.0, 1.0]) * rng.uniform(np.radians(35.0), np.radians(70.0))
    freqs = np.sort(
        rng.choice(np.linspace(1.0e9, 8.0e9, 9), size=num_constraints, replace=False)
    )
    cs = ConstraintSet.for_direction(geom, theta, freqs)
    return r, cs, geom, theta, freqs


@pytest.fixture(scope="session")
def reference():
    return reference_scenario()
