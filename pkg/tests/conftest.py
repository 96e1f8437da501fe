import pytest

from expmodel import (DensityModel, GenerationMeta, QuadratureGrid,
                      ScatteringFunction, SpanConfig, generate)

SIGMA = 0.2
HALF_WIDTH = 2.0


@pytest.fixture(scope="session")
def span():
    return SpanConfig(HALF_WIDTH)


@pytest.fixture(scope="session")
def sf02(span):
    return ScatteringFunction(SIGMA, span)


@pytest.fixture(scope="session")
def grid257(span):
    return QuadratureGrid(span, 257)


@pytest.fixture(scope="session")
def logistic200():
    """Benchmark dataset: 200 noisy chaotic pairs, seed 1, sigma 0.2."""
    return generate(GenerationMeta(seed=1, sigma_noise=SIGMA, n=200))


@pytest.fixture(scope="session")
def model200(logistic200, sf02):
    return DensityModel(logistic200, sf02)
