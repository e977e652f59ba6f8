import math

import pytest
from hypothesis import given, strategies as st

from slsys.branchcut import close_eq, ext_to_json, fmt_g17, parse_extended, sqrt_cut

finite = st.floats(min_value=-1e8, max_value=1e8, allow_nan=False)


@given(finite, finite)
def test_sqrt_cut_squares_back(re, im):
    z = complex(re, im)
    if z == 0:
        return
    w = sqrt_cut(z)
    assert abs(w * w - z) <= 1e-12 * abs(z) + 1e-300


@given(finite, st.floats(min_value=1e-8, max_value=1e8))
def test_sqrt_cut_upper_branch_and_symmetry(re, im):
    z = complex(re, im)
    w = sqrt_cut(z)
    assert w.imag > 0
    # conj z lands on the opposite side of the cut: sqrt flips to -conj
    assert abs(sqrt_cut(z.conjugate()) - (-w.conjugate())) <= 1e-12 * abs(w)


def test_sqrt_cut_on_negative_axis():
    assert sqrt_cut(-1.0) == 1j
    assert sqrt_cut(-4.0) == 2j
    assert abs(sqrt_cut(complex(-9.0, -0.0)) - 3j) == 0.0


def test_close_eq():
    assert close_eq(1.0, 1.0 + 1e-13)
    assert not close_eq(1.0, 1.0 + 1e-11)
    assert close_eq(math.inf, math.inf)
    assert not close_eq(math.inf, 1e300)
    assert close_eq(0.0, 5e-13)


def test_formatting_and_parsing():
    assert fmt_g17(0.1) == "0.10000000000000001"
    assert fmt_g17(math.inf) == "inf"
    assert parse_extended("inf") == math.inf
    assert parse_extended("-inf") == -math.inf
    assert parse_extended("2.5e-3") == 2.5e-3
    assert ext_to_json(math.inf) == "inf"
    assert ext_to_json(-math.inf) == "-inf"
    assert ext_to_json(1.5) == 1.5
    assert ext_to_json(None) is None
    with pytest.raises(ValueError):
        ext_to_json(math.nan)
