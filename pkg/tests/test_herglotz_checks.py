import cmath
import math

import numpy as np
import pytest

from slsys import AnalyticFunction, herglotz_check, random_upper_points, stieltjes_check
from slsys.errors import DomainError, EvaluationError, InputError


def test_herglotz_check_identity_passes():
    f = AnalyticFunction(lambda z: z, "z")
    assert herglotz_check(f, [1j, 1 + 1j]).passed


def test_herglotz_check_reciprocal_passes():
    f = AnalyticFunction(lambda z: -1.0 / z, "-1/z")
    assert herglotz_check(f, [1j]).passed


def test_herglotz_check_square_fails_with_witness():
    f = AnalyticFunction(lambda z: z * z, "z^2")
    w = cmath.exp(3j * math.pi / 4)
    res = herglotz_check(f, [w])
    assert not res.passed
    assert res.witness == w


def test_herglotz_check_rejects_lower_half_plane():
    f = AnalyticFunction(lambda z: z)
    with pytest.raises(DomainError):
        herglotz_check(f, [1 - 1j])


def test_evaluator_failure_names_the_point():
    def bad(z):
        raise ZeroDivisionError("boom")

    with pytest.raises(EvaluationError) as err:
        herglotz_check(AnalyticFunction(bad), [2j])
    assert err.value.point == 2j


def test_stieltjes_check_reciprocal(example1_closed, example2_closed):
    f = AnalyticFunction(lambda z: -1.0 / z, "-1/z")
    assert stieltjes_check(f, [1j, -1 + 1j]).passed

    rng = np.random.default_rng(20250811)
    pts = random_upper_points(rng, 10)
    assert stieltjes_check(example1_closed, pts, variant="stieltjes").passed
    assert stieltjes_check(example2_closed, pts, variant="inverse_stieltjes").passed


def test_stieltjes_check_finds_violations(example2_closed):
    # the inverse-Stieltjes example is *not* a Stieltjes function
    pts = [complex(-5.0, 0.01)]
    res = stieltjes_check(example2_closed, pts, variant="stieltjes")
    assert not res.passed and res.witness == pts[0]


def test_stieltjes_check_rejects_real_axis():
    f = AnalyticFunction(lambda z: -1.0 / z)
    with pytest.raises(DomainError):
        stieltjes_check(f, [complex(-1.0, 0.0)])


def test_checks_validate_tol():
    f = AnalyticFunction(lambda z: z)
    with pytest.raises(InputError):
        herglotz_check(f, [1j], tol=0.0)


def test_herglotz_symmetry_of_examples(example1_closed, example2_closed, mu_inf_closed):
    rng = np.random.default_rng(7)
    pts = random_upper_points(rng, 20)
    for f in (example1_closed, example2_closed, mu_inf_closed):
        assert f.symmetry_defect(pts) <= 1e-12


def test_evaluator_determinism(example1_closed):
    z = 0.3 + 1.7j
    assert example1_closed(z) == example1_closed(z)
