import math

import numpy as np
import pytest

from dimerdiff.model import TabulatedDensity, default_dimer_model


def make_gaussian_model(width: float, n: int = 4001, span: float = 8.0) -> TabulatedDensity:
    """Tabulated zero-mean Gaussian marginal density of std `width` nm."""
    x = np.linspace(-span * width, span * width, n)
    rho = np.exp(-0.5 * (x / width) ** 2) / (width * math.sqrt(2.0 * math.pi))
    rho = rho / np.trapezoid(rho, x)
    return TabulatedDensity(x, rho)


@pytest.fixture(scope="session")
def dimer():
    return default_dimer_model()
