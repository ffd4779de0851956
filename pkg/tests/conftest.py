"""Shared fixtures for the nonharmonic toolkit tests."""
import math

import numpy as np
import pytest

from src.models import Basis
from src.tools.spectral_transforms import SpectralField

E = math.e
GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def random_spectral(rng: np.random.Generator, K: int, basis: Basis = Basis.L) -> SpectralField:
    side = 2 * K + 1
    return SpectralField(K, rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side)), basis)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
