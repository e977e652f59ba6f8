import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from slsys import (
    SchrodingerLSystem,
    WeylFunction,
    alpha_from_class,
    class_angles,
    classify_extension,
    f_mu,
    full_report,
    impedance,
    impedance_from_transfer,
    impedance_function,
    mu0_inverse,
    mu0_stieltjes,
    random_upper_points,
    scan_mu,
    stieltjes_check,
    t_h_report,
    transfer,
    universal_beta,
)
from slsys.errors import (
    ClassError,
    DomainError,
    InputError,
    NotAccretiveError,
    PoleError,
    SingularRelationError,
)


class TestEvaluation:
    def test_impedance_hand_values(self, example1_system, example2_system, mu_inf_system):
        assert abs(impedance(example1_system, -1.0) - 2.0) <= 1e-12
        assert abs(impedance(example2_system, -1.0) + 1.0 / 3.0) <= 1e-12
        assert abs(impedance(mu_inf_system, -1.0) - 0.5) <= 1e-12

    def test_transfer_hand_values(self, example2_system, mu_inf_system):
        assert abs(transfer(example2_system, -1.0) - (4 + 3j) / 5) <= 1e-12
        assert abs(transfer(mu_inf_system, -1.0) - (3 - 4j) / 5) <= 1e-12

    def test_impedance_from_transfer_values(self):
        assert impedance_from_transfer(1.0) == 0.0
        assert abs(impedance_from_transfer((4 + 3j) / 5) + 1.0 / 3.0) <= 1e-12
        # regression: direct complex arithmetic i(i-1)/(i+1) = -1
        assert abs(impedance_from_transfer(1j) + 1.0) <= 1e-12

    def test_singular_relation(self):
        with pytest.raises(SingularRelationError):
            impedance_from_transfer(-1.0)

    def test_impedance_pole_is_reported(self, free_weyl):
        # mu in the gap: V has a genuine pole where m(x) = (|h|^2 - mu*Re h)/(mu - Re h)
        sys = SchrodingerLSystem(1 + 1j, 1.5, free_weyl)
        with pytest.raises(PoleError):
            impedance(sys, -1.0)

    def test_closed_forms_match_the_formulas(self, example1_system, example2_system,
                                             example1_closed, example2_closed):
        rng = np.random.default_rng(5)
        for z in random_upper_points(rng, 20):
            assert abs(impedance(example1_system, z) - example1_closed(z)) \
                <= 1e-12 * abs(example1_closed(z))
            assert abs(impedance(example2_system, z) - example2_closed(z)) \
                <= 1e-12 * abs(example2_closed(z))

    def test_impedance_herglotz_symmetry(self, example1_system):
        v = impedance_function(example1_system)
        rng = np.random.default_rng(31)
        assert v.symmetry_defect(random_upper_points(rng, 25)) <= 1e-12

    def test_round_trip_seeded(self, free_weyl):
        rng = np.random.default_rng(1729)
        for _ in range(200):
            h = complex(rng.uniform(-3, 3), rng.uniform(0.05, 2.0))
            pick = rng.uniform()
            mu = math.inf if pick < 0.15 else float(rng.uniform(-5, 5))
            sys = SchrodingerLSystem(h, mu, free_weyl)
            z = random_upper_points(rng, 1)[0]
            v = impedance(sys, z)
            assert abs(impedance_from_transfer(transfer(sys, z)) - v) <= 1e-10 * max(1.0, abs(v))

    def test_mu_infinity_limit_consistency(self, free_weyl, mu_inf_system):
        big = SchrodingerLSystem(1 + 1j, 1e12, free_weyl)
        for z in (-2.3 + 1.7j, 0.4 + 0.2j, -5.0 + 0.0j):
            a, b = impedance(big, z), impedance(mu_inf_system, z)
            assert abs(a - b) <= 1e-9 * abs(b)
            wa, wb = transfer(big, z), transfer(mu_inf_system, z)
            assert abs(wa - wb) <= 1e-9 * abs(wb)

    @given(st.complex_numbers(max_magnitude=50.0, allow_nan=False, allow_infinity=False))
    def test_transfer_impedance_relation_is_mobius_inverse(self, w):
        # i(W-1)/(W+1) followed by (1-iV)/(1+iV) is the identity off W = -1
        if abs(w + 1.0) < 1e-6:
            return
        v = impedance_from_transfer(w)
        if abs(1.0 + 1j * v) < 1e-9:
            return
        back = (1.0 - 1j * v) / (1.0 + 1j * v)
        assert abs(back - w) <= 1e-9 * max(1.0, abs(w))


class TestClassification:
    def test_three_way_split(self, example1_system, example2_system, free_weyl):
        assert classify_extension(example1_system) == "stieltjes"
        assert classify_extension(example2_system) == "inverse_stieltjes"
        assert classify_extension(SchrodingerLSystem(1 + 1j, 1.5, free_weyl)) == "neither"
        assert classify_extension(SchrodingerLSystem(1 + 1j, math.inf, free_weyl)) == "stieltjes"
        assert classify_extension(SchrodingerLSystem(1 + 1j, 2.0, free_weyl)) == "stieltjes"
        assert classify_extension(SchrodingerLSystem(1 + 1j, 1.0, free_weyl)) == "inverse_stieltjes"
        assert classify_extension(SchrodingerLSystem(1 + 1j, -0.5, free_weyl)) == "neither"

    def test_not_accretive_raises(self, free_weyl):
        with pytest.raises(NotAccretiveError):
            classify_extension(SchrodingerLSystem(-1 + 1j, 3.0, free_weyl))

    def test_degenerate_boundary_only_infinite_mu(self):
        # Re h = -m(-0): the Stieltjes bound degenerates, only mu = +inf stays
        wf = WeylFunction.constant(1.0)  # m(-0) = 1
        h = -1 + 1j
        assert mu0_stieltjes(h, wf.m_at_neg_zero) == math.inf
        assert classify_extension(SchrodingerLSystem(h, math.inf, wf)) == "stieltjes"
        assert classify_extension(SchrodingerLSystem(h, 5.0, wf)) == "neither"
        assert classify_extension(SchrodingerLSystem(h, -1.0, wf)) == "inverse_stieltjes"

    def test_mu0_values(self):
        assert mu0_stieltjes(0.5 + 0.5j, 0.0) == 1.0
        assert mu0_stieltjes(1 + 1j, 0.0) == 2.0
        assert mu0_inverse(1 + 1j) == 1.0

    def test_t_h_report_cases(self):
        rep = t_h_report(1 + 1j, 0.0)
        assert rep.accretive and rep.sectorial and rep.exact
        assert abs(rep.theta_tan - 1.0) <= 1e-15
        rep = t_h_report(0.5 + 0.5j, 0.0)
        assert abs(rep.theta_tan - 1.0) <= 1e-15
        rep = t_h_report(-1 + 1j, 1.0)
        assert rep.accretive and not rep.sectorial and rep.theta_tan == math.inf
        rep = t_h_report(-2 + 1j, 1.0)
        assert not rep.accretive and rep.theta_tan is None

    def test_branch_membership_is_function_level(self, free_weyl):
        """classified branch agrees with the pointwise class tests."""
        rng = np.random.default_rng(88)
        stj = SchrodingerLSystem(1 + 1j, 3.0, free_weyl)
        inv = SchrodingerLSystem(1 + 1j, 0.5, free_weyl)
        pts = random_upper_points(rng, 20)
        assert stieltjes_check(impedance_function(stj), pts, variant="stieltjes").passed
        assert stieltjes_check(impedance_function(inv), pts, variant="inverse_stieltjes").passed


class TestAngles:
    def test_class_angles_cross_validated(self, example1_system, example2_system,
                                          mu_inf_system, free_weyl):
        assert class_angles(example1_system, cross_validate=True) == (1.0, math.inf)
        assert class_angles(example2_system, cross_validate=True) == (0.0, 1.0)
        got = class_angles(SchrodingerLSystem(1 + 1j, 3.0, free_weyl), cross_validate=True)
        assert abs(got[0] - 0.5) <= 1e-12 and abs(got[1] - 3.0) <= 1e-12
        assert class_angles(mu_inf_system, cross_validate=True) == (0.0, 1.0)

    def test_class_angles_rejects_gap(self, free_weyl):
        with pytest.raises(ClassError):
            class_angles(SchrodingerLSystem(1 + 1j, 1.5, free_weyl))

    def test_alpha_from_class(self):
        for t in (0.0, 0.5, 1.0, 3.0, 17.0):
            assert alpha_from_class(0.0, t) == t
        assert abs(alpha_from_class(1.0, 2.0) - 4.0) <= 1e-15
        assert alpha_from_class(1.0, 1.0) == 1.0
        assert alpha_from_class(1.0, math.inf) == math.inf
        with pytest.raises(InputError):
            alpha_from_class(2.0, 1.0)

    def test_universal_beta(self):
        assert universal_beta(1.0, 4.0) == (5.0, False)
        assert universal_beta(0.0, 7.0) == (0.0, True)
        got = universal_beta(1.0, 2.0)
        assert abs(got.tan_beta - (1.0 + 2.0 * math.sqrt(2.0))) <= 1e-15
        assert universal_beta(1.0, math.inf) == (math.inf, False)

    def test_f_mu_matches_printed_fractions(self):
        # f = |F1| + 2 sqrt(F1 F2) with F1 the -0 fraction, F2 the -inf one
        want = {2.1: 29.7386290, 2.5: 8.6514837, 3.0: 5.4494897, 5.0: 2.9576611,
                10.0: 1.9953560, 100.0: 1.2234565}
        for mu, val in want.items():
            assert abs(f_mu(1 + 1j, 0.0, mu, "stieltjes") - val) <= 1e-6
        assert abs(f_mu(1 + 1j, 0.0, 1e8, "stieltjes") - 1.0) <= 1e-3
        assert f_mu(1 + 1j, 0.0, math.inf, "stieltjes") == 1.0

    def test_f_mu_domain_errors(self):
        with pytest.raises(DomainError):
            f_mu(1 + 1j, 0.0, 2.0, "stieltjes")      # exactly mu0
        with pytest.raises(DomainError):
            f_mu(1 + 1j, 0.0, 1.0, "inverse_stieltjes")  # exactly Re h
        with pytest.raises(DomainError):
            f_mu(1 + 1j, 0.0, -0.5, "inverse_stieltjes")

    def test_f_mu_inverse_branch_values(self):
        # increasing on the inverse branch (empirical direction)
        vals = [f_mu(1 + 1j, 0.0, mu, "inverse_stieltjes") for mu in (0.0, 0.25, 0.5, 0.9)]
        assert vals[0] == 0.0
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestReports:
    def test_example1_report(self, example1_system):
        rep = full_report(example1_system)
        assert rep.class_label == "stieltjes"
        assert rep.tan_a1 == 1.0 and rep.tan_a2 == math.inf
        assert rep.mu0_stieltjes == 1.0
        assert rep.state_operator.kind == "accretive_not_sectorial"
        assert rep.associated_operator.kind == "not_accretive"
        assert rep.theta_tan == 1.0 and rep.theta_exact
        assert rep.beta_tan == math.inf and not rep.beta_degenerate

    def test_example2_report(self, example2_system):
        rep = full_report(example2_system)
        assert rep.class_label == "inverse_stieltjes"
        assert (rep.tan_a1, rep.tan_a2) == (0.0, 1.0)
        assert rep.associated_operator.kind == "alpha_sectorial"
        assert abs(rep.associated_operator.tan_alpha - 1.0) <= 1e-12
        assert rep.state_operator.kind == "not_accretive"
        assert rep.beta_degenerate and rep.beta_tan == 0.0

    def test_mu_inf_report(self, mu_inf_system):
        rep = full_report(mu_inf_system)
        assert rep.class_label == "stieltjes"
        assert (rep.tan_a1, rep.tan_a2) == (0.0, 1.0)
        assert rep.state_operator.kind == "alpha_sectorial"
        assert abs(rep.state_operator.tan_alpha - 1.0) <= 1e-12

    def test_interior_stieltjes_report(self, free_weyl):
        rep = full_report(SchrodingerLSystem(1 + 1j, 3.0, free_weyl))
        assert rep.state_operator.kind == "alpha_sectorial"
        want = alpha_from_class(0.5, 3.0)
        assert abs(rep.state_operator.tan_alpha - want) <= 1e-12

    def test_inverse_interior_report(self, free_weyl):
        rep = full_report(SchrodingerLSystem(1 + 1j, 0.5, free_weyl))
        assert rep.associated_operator.kind == "alpha_sectorial"
        assert abs(rep.associated_operator.tan_alpha - alpha_from_class(*class_angles(
            SchrodingerLSystem(1 + 1j, 0.5, free_weyl)))) <= 1e-12

    def test_inverse_edge_report(self, free_weyl):
        rep = full_report(SchrodingerLSystem(1 + 1j, 1.0, free_weyl))
        assert rep.associated_operator.kind == "accretive_not_sectorial"

    def test_neither_report(self, free_weyl):
        rep = full_report(SchrodingerLSystem(1 + 1j, 1.5, free_weyl))
        assert rep.class_label == "neither"
        assert rep.tan_a1 is None and rep.alpha_tan is None
        assert rep.state_operator.kind == "not_accretive"
        assert rep.associated_operator.kind == "not_accretive"


class TestScan:
    def test_stieltjes_scan_decreasing(self, free_weyl):
        res = scan_mu(1 + 1j, free_weyl, "stieltjes", [2.5, 3, 5, 10, 100])
        fs = [r.f_of_mu for r in res.rows]
        assert all(b < a for a, b in zip(fs, fs[1:]))
        assert res.summary.direction == "decreasing"
        assert res.summary.bound_side == "mu>=mu_star"
        assert res.summary.bound_holds

    def test_single_point_grid(self, free_weyl):
        res = scan_mu(1 + 1j, free_weyl, "stieltjes", [3.0])
        assert len(res.rows) == 1
        assert abs(res.rows[0].f_of_mu - 5.4494897) <= 1e-6

    def test_grid_with_mu0_flagged(self, free_weyl):
        res = scan_mu(1 + 1j, free_weyl, "stieltjes", [2.0, 3.0])
        row = res.rows[0]
        assert "at_mu0" in row.flags and row.f_of_mu == math.inf
        assert "accretive_only" in row.flags
        assert "sectorial" in res.rows[1].flags

    def test_inverse_scan_direction_recorded(self, free_weyl):
        res = scan_mu(1 + 1j, free_weyl, "inverse_stieltjes", [0.0, 0.25, 0.5, 0.75])
        assert res.summary.direction == "increasing"
        assert res.summary.bound_side == "mu<=mu_star"
        assert res.summary.bound_holds

    def test_scan_errors(self, free_weyl):
        with pytest.raises(InputError):
            scan_mu(1 + 1j, free_weyl, "stieltjes", [])
        with pytest.raises(DomainError):
            scan_mu(1 + 1j, free_weyl, "stieltjes", [1.5, 3.0])


class TestValidation:
    def test_im_h_positive_required(self, free_weyl):
        with pytest.raises(InputError):
            SchrodingerLSystem(1.0 - 1j, 0.0, free_weyl)
        with pytest.raises(InputError):
            SchrodingerLSystem(1.0, 0.0, free_weyl)

    def test_mu_validation(self, free_weyl):
        with pytest.raises(InputError):
            SchrodingerLSystem(1 + 1j, -math.inf, free_weyl)
        with pytest.raises(InputError):
            SchrodingerLSystem(1 + 1j, math.nan, free_weyl)
