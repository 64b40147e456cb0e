import numpy as np
import pytest

from orfq.errors import BadSpec
from orfq.measure import discrete, gram, inner_product, integrate, lebesgue, make_measure, poisson, random_discrete


def test_lebesgue_moments():
    mu = lebesgue(64)
    assert abs(integrate(lambda t: np.ones_like(t), mu) - 1) < 1e-15
    for k in range(1, 10):
        assert abs(integrate(lambda t: t**k, mu)) < 1e-14


def test_poisson_moments():
    r, th = 0.5, 0.7
    mu = poisson(r, th, 512)
    for k in range(1, 5):
        assert abs(integrate(lambda t: np.conj(t) ** k, mu) - (r * np.exp(-1j * th)) ** k) < 1e-12


def test_inner_product_conjugates_first_argument():
    mu = random_discrete(1, 20)
    f, g = (lambda t: 1j * t), (lambda t: t)
    assert abs(inner_product(f, g, mu) + 1j) < 1e-14
    G = gram([f, g], mu)
    assert np.allclose(G, G.conj().T)


def test_validation():
    with pytest.raises(BadSpec):
        discrete([1.1], [1])
    with pytest.raises(BadSpec):
        discrete([1, 1j], [-1, 2])
    with pytest.raises(BadSpec):
        make_measure({"type": "nope"})
    with pytest.raises(BadSpec):
        make_measure({"type": "discrete"})
    with pytest.raises(BadSpec):
        poisson(1.0)


def test_make_measure_variants():
    assert make_measure({"type": "lebesgue", "M": 16}).size == 16
    mu = make_measure({"type": "discrete", "nodes": [{"re": 1, "im": 0}, {"re": 0, "im": 1}], "masses": [1, 3]})
    assert np.allclose(mu.masses, [0.25, 0.75])
    mu = make_measure({"type": "random_discrete", "seed": 4, "N": 10})
    assert mu.size == 10 and np.all(mu.masses > 0)
