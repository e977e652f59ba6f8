import math

import numpy as np
import pytest

import slsys.weyl as weyl_mod
from slsys import (
    Potential,
    SolverSettings,
    WeylFunction,
    sqrt_cut,
    weyl_m,
    weyl_m_dirichlet,
    weyl_m_neg_zero,
)
from slsys.errors import DomainError, InputError, InternalConsistencyError

ORACLE_LAMBDAS = (1j, 1 + 1j, -1 + 0j, -4 + 0j, 2 + 3j, -0.01 + 0j)


@pytest.mark.parametrize("lam", ORACLE_LAMBDAS)
def test_free_matches_closed_form(lam):
    got = weyl_m(Potential.free(), lam)
    want = -1j * sqrt_cut(lam)
    assert abs(got - want) <= 1e-6 * abs(want)


@pytest.mark.parametrize("lam", ORACLE_LAMBDAS)
def test_constant_matches_shifted_closed_form(lam):
    got = weyl_m(Potential.constant(2.0), lam)
    want = -1j * sqrt_cut(lam - 2.0)
    assert abs(got - want) <= 1e-6 * abs(want)


def test_branch_coherence_four_quadrants():
    """40-point grid over all quadrants off the cut, 1e-6 relative."""
    free = Potential.free()
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(40):
        r = math.exp(rng.uniform(math.log(1e-2), math.log(1e2)))
        arg = rng.uniform(0.05, 2.0 * math.pi - 0.05)
        lam = complex(r * math.cos(arg), r * math.sin(arg))
        if lam.imag == 0.0:
            continue
        got = weyl_m(free, lam)
        want = -1j * sqrt_cut(lam)
        worst = max(worst, abs(got - want) / abs(want))
    assert worst <= 1e-6


def test_translation_law():
    rng = np.random.default_rng(12)
    free, shifted = Potential.free(), Potential.constant(1.3)
    for _ in range(10):
        lam = complex(rng.uniform(-3, 3), rng.uniform(0.2, 3))
        a = weyl_m(shifted, lam)
        b = weyl_m(free, lam - 1.3)
        assert abs(a - b) <= 1e-6 * max(1.0, abs(a))


def test_neg_zero_limits():
    assert abs(weyl_m_neg_zero(Potential.free())) <= 1e-6
    assert abs(weyl_m_neg_zero(Potential.constant(2.0)) - math.sqrt(2.0)) <= 1e-6


def test_neg_zero_crosses_spectrum_is_domain_error():
    with pytest.raises(DomainError):
        weyl_m_neg_zero(Potential.constant(-1.0))


def test_real_lambda_in_spectrum_rejected():
    with pytest.raises(DomainError):
        weyl_m(Potential.free(), 0.5)
    with pytest.raises(DomainError):
        weyl_m(Potential.constant(2.0), 2.0)


def test_b_robustness():
    pot = Potential.constant(0.7)
    settings = SolverSettings()
    m1 = weyl_m(pot, 0.5 + 0.8j, settings)
    m2 = weyl_m(pot, 0.5 + 0.8j, SolverSettings(b_initial=pot.a + 40.0))
    assert abs(m1 - m2) <= settings.convergence_tol


def test_dirichlet_cross_check_small_lambda():
    for lam in (-0.25 + 0.0j, 0.3j):
        primary = weyl_m(Potential.free(), lam)
        cutoff = weyl_m_dirichlet(Potential.free(), lam, b=25.0)
        assert abs(primary - cutoff) <= 1e-5 * max(1.0, abs(primary))


def _table_potential():
    xs = np.linspace(0.0, 10.0, 201)
    return Potential.table(list(zip(xs, 2.0 * np.exp(-xs))))


def test_upper_half_plane_sign_all_potentials():
    """-m is the Herglotz transform here: Im m < 0 when Im lambda > 0."""
    rng = np.random.default_rng(77)
    pots = [Potential.free(), Potential.constant(2.0), _table_potential()]
    for pot in pots:
        n = 100 if pot.kind != "table" else 20
        for _ in range(n):
            lam = complex(rng.uniform(-5, 5), math.exp(rng.uniform(math.log(1e-2), math.log(1e1))))
            m = weyl_m(pot, lam)
            assert m.imag < 1e-9, f"{pot.description} at {lam}"


def test_conjugate_symmetry():
    pot = Potential.constant(0.5)
    for lam in (1 + 2j, -2 + 0.7j):
        assert abs(weyl_m(pot, lam.conjugate()) - weyl_m(pot, lam).conjugate()) <= 1e-8


def test_determinism_bit_identical():
    pot = _table_potential()
    a = weyl_m(pot, 0.7 + 0.9j)
    b = weyl_m(pot, 0.7 + 0.9j)
    assert a == b


class TestWeylFunction:
    def test_free_closed_form(self):
        wf = WeylFunction.free()
        assert wf.m_at_neg_zero == 0.0
        assert wf(1j) == -1j * sqrt_cut(1j)
        assert wf.source == "closed_form_free"

    def test_constant_closed_form(self):
        wf = WeylFunction.constant(2.0)
        assert abs(wf.m_at_neg_zero - math.sqrt(2.0)) == 0.0
        assert abs(wf(-1.0) - math.sqrt(3.0)) <= 1e-14

    def test_constant_negative_refused(self):
        with pytest.raises(DomainError):
            WeylFunction.constant(-1.0)

    def test_numeric_with_audit(self):
        wf = WeylFunction.numeric(_table_potential())
        assert wf.source == "numeric"
        assert math.isfinite(wf.m_at_neg_zero)
        m = wf(1 + 1j)
        assert m.imag < 0.0

    def test_numeric_refuses_flipped_branch(self, monkeypatch):
        """Sign audit: a flipped square-root branch must abort construction."""
        monkeypatch.setattr(weyl_mod, "sqrt_cut", lambda z: -sqrt_cut(z))
        with pytest.raises(InternalConsistencyError):
            WeylFunction.numeric(Potential.free())


class TestPotentialTable:
    def test_csv_round_trip(self, tmp_path):
        path = tmp_path / "pot.csv"
        path.write_text("# comment line\nx,q\n0.0,2.0\n1.0,1.0\n# another\n2.5,0.0\n")
        pot = Potential.from_csv(path)
        assert pot.kind == "table"
        assert pot.a == 0.0
        assert pot.q(0.5) == 1.5
        assert pot.q(3.0) == 0.0  # constant tail
        assert pot.spectrum_floor() == 0.0

    def test_csv_errors(self, tmp_path):
        bad_header = tmp_path / "h.csv"
        bad_header.write_text("a,b\n0,1\n")
        with pytest.raises(InputError):
            Potential.from_csv(bad_header)
        non_monotone = tmp_path / "m.csv"
        non_monotone.write_text("x,q\n0,1\n0,2\n")
        with pytest.raises(InputError):
            Potential.from_csv(non_monotone)
        bad_value = tmp_path / "v.csv"
        bad_value.write_text("x,q\n0,one\n")
        with pytest.raises(InputError):
            Potential.from_csv(bad_value)
        with pytest.raises(InputError):
            Potential.from_csv(tmp_path / "missing.csv")

    def test_strictly_increasing_required(self):
        with pytest.raises(InputError):
            Potential.table([(0.0, 1.0), (0.0, 2.0)])
