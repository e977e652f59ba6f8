import math

import numpy as np
import pytest

from slsys.errors import NoLimitError
from slsys.numerics import (
    gauss_panels,
    geometric_edges,
    limit_along,
    linear_edges,
    neville_zero,
    sequence_limit,
)


def test_sequence_limit_constant():
    limit, est = sequence_limit([3.0] * 10, tol=1e-12)
    assert limit == 3.0 and est == 0.0


def test_sequence_limit_geometric_mode():
    vals = [2.0 + 5.0 * 0.5 ** n for n in range(21)]
    limit, est = sequence_limit(vals, tol=1e-8)
    assert abs(limit - 2.0) <= 1e-10


def test_sequence_limit_two_modes():
    vals = [1.0 + 0.5 ** n - 3.0 * 0.25 ** n for n in range(21)]
    limit, _ = sequence_limit(vals, tol=1e-8)
    assert abs(limit - 1.0) <= 1e-9


def test_sequence_limit_rejects_nonconvergent():
    with pytest.raises(NoLimitError):
        sequence_limit([math.sin(float(n)) for n in range(21)], tol=1e-8)


def test_limit_along_divergence_positive():
    got = limit_along(lambda x: 1.0 + abs(x) ** -0.5, [-(4.0 ** -n) for n in range(21)],
                      tol=1e-8, extension=[-(4.0 ** -n) for n in range(21, 41)])
    assert got == math.inf


def test_limit_along_divergence_negative():
    got = limit_along(lambda x: x, [-(4.0 ** n) for n in range(21)], tol=1e-8)
    assert got == -math.inf


def test_limit_along_oscillation_raises():
    with pytest.raises(NoLimitError):
        limit_along(lambda x: math.sin(math.log(abs(x))), [-(4.0 ** n) for n in range(21)],
                    tol=1e-8)


def test_neville_zero_recovers_polynomial():
    xs = [0.4, 0.2, 0.1, 0.05]
    ys = [7.0 + 3.0 * x - 2.0 * x ** 2 for x in xs]
    value, err = neville_zero(xs, ys)
    assert abs(value - 7.0) <= 1e-12
    assert err <= 1e-10


def test_gauss_panels_polynomial_exactness():
    # degree-9 polynomial integrated exactly by 8-point panels
    val = gauss_panels(lambda t: t ** 9, linear_edges(0.0, 1.0, 4), 8)
    assert abs(val - 0.1) <= 1e-14


def test_geometric_edges_validation():
    edges = geometric_edges(1e-3, 1e3, 6)
    assert len(edges) == 7
    assert abs(edges[0] - 1e-3) < 1e-18 and abs(edges[-1] - 1e3) < 1e-9
    with pytest.raises(ValueError):
        geometric_edges(0.0, 1.0, 4)


def test_gauss_panels_deterministic_sum():
    f = lambda t: math.exp(-t) * math.cos(3 * t)
    a = gauss_panels(f, linear_edges(0.0, 5.0, 16), 24)
    b = gauss_panels(f, linear_edges(0.0, 5.0, 16), 24)
    assert a == b
    want = (np.exp(-5) * (3 * np.sin(15) - np.cos(15)) + 1) / 10.0
    assert abs(a - want) <= 1e-12
