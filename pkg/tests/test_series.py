from fractions import Fraction

import pytest

from randlambda.counting import catalan, count_cl, enumerate_cl, schroder_M
from randlambda.series import coeffs_f, coeffs_f_t0, coeffs_m, ratio, render_decimal
from randlambda.terms import OMEGA_CL, contains_subterm_cl, parse_cl

II = parse_cl("I I")


def test_f_coefficients():
    f = coeffs_f(500)
    assert f[0] == 3 and f[1] == 9
    assert all(f[n] == catalan(n) * 3 ** (n + 1) for n in range(501))


def test_pattern_examples():
    g = coeffs_f_t0(II, 4)
    assert (g[0], g[1], g[2]) == (0, 1, 6)
    g = coeffs_f_t0(OMEGA_CL, 6)
    assert list(g.coefficients[:5]) == [0] * 5 and g[5] == 1


def test_atom_pattern_rejected():
    with pytest.raises(ValueError):
        coeffs_f_t0(parse_cl("S"), 5)


def test_brute_force_small():
    for t0 in (II, parse_cl("S K"), parse_cl("K (I S)"), parse_cl("S I I")):
        g = coeffs_f_t0(t0, 5)
        for n in range(6):
            assert g[n] == sum(1 for t in enumerate_cl(n) if contains_subterm_cl(t, t0))


def test_bounds_on_g():
    f = coeffs_f(60)
    g = coeffs_f_t0(parse_cl("S S"), 60, f)
    for n in range(61):
        assert 0 <= g[n] <= f[n]
        if n >= 1:
            # the all-K term of size n avoids any pattern containing S
            assert g[n] < f[n]


def test_ratio():
    assert ratio(II, 1) == Fraction(1, 9)
    assert ratio(II, 2) == Fraction(1, 9)
    assert ratio(OMEGA_CL, 4) == 0
    assert render_decimal(Fraction(1, 9), 5) == "0.11111"


def test_omega_ratios_increase():
    g = coeffs_f_t0(OMEGA_CL, 300)
    f = coeffs_f(300)
    r = [Fraction(g[n], f[n]) for n in range(10, 301)]
    assert all(a <= b for a, b in zip(r, r[1:]))


def test_m_coefficients():
    m = coeffs_m(40)
    assert m.coefficients[:3] == (1, 2, 6)
    assert list(m.coefficients) == [schroder_M(n) for n in range(41)]
    assert count_cl(3) == coeffs_f(3)[3]
