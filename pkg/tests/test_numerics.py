import math
import random
from fractions import Fraction as F

import mpmath
import pytest

from digitprod import CapabilityError, EvaluationError, InputError, constant, gamma
from digitprod.numerics import (CF_E_GAMMA, CF_GAMMA_QUARTER, CF_PI, Div,
                                Sub, cf_mul, cf_pow, cf_rat,
                                power_product_exponents, power_product_form)


def tol(digits, slack=2):
    return mpmath.mpf(10) ** (slack - digits)


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------

def test_gamma_half_is_sqrt_pi():
    with mpmath.workdps(70):
        assert abs(gamma(F(1, 2), 60) - mpmath.sqrt(mpmath.pi)) < tol(60)


def test_gamma_recurrence_quarter():
    with mpmath.workdps(70):
        assert abs(gamma(F(5, 4), 60) - gamma(F(1, 4), 60) / 4) < tol(60)


def test_gamma_reflection_chain_tan_pi_over_8():
    # Gamma(3/8)Gamma(5/8) / (Gamma(1/8)Gamma(7/8)) = tan(pi/8) = sqrt(2) - 1
    with mpmath.workdps(70):
        value = (gamma(F(3, 8), 60) * gamma(F(5, 8), 60)
                 / (gamma(F(1, 8), 60) * gamma(F(7, 8), 60)))
        assert abs(value - (mpmath.sqrt(2) - 1)) < tol(60)


def test_gamma_rejects_nonpositive():
    with pytest.raises(InputError):
        gamma(F(0), 30)
    with pytest.raises(InputError):
        gamma(F(-3, 2), 30)


def test_gamma_against_library_oracle():
    rng = random.Random(7)
    with mpmath.workdps(80):
        for _ in range(20):
            x = F(rng.randint(1, 40), rng.randint(1, 12))
            ours = gamma(x, 60)
            ref = mpmath.gamma(mpmath.mpf(x.numerator) / x.denominator)
            assert abs(ours - ref) < tol(60) * abs(ref)


def test_gamma_recurrence_invariant():
    rng = random.Random(11)
    with mpmath.workdps(40):
        for _ in range(100):
            x = F(rng.randint(1, 100), rng.randint(1, 10))
            lhs = gamma(x + 1, 30)
            rhs = x.numerator * gamma(x, 30) / x.denominator
            assert abs(lhs - rhs) < tol(30, 1) * abs(lhs)


def test_gamma_reflection_invariant():
    rng = random.Random(13)
    with mpmath.workdps(40):
        for _ in range(40):
            x = F(rng.randint(1, 23), 24)
            product = gamma(x, 30) * gamma(1 - x, 30)
            ref = mpmath.pi / mpmath.sin(mpmath.pi * x.numerator / x.denominator)
            assert abs(product - ref) < tol(30) * abs(ref)


def test_gamma_duplication_invariant():
    rng = random.Random(17)
    with mpmath.workdps(40):
        for _ in range(40):
            x = F(rng.randint(1, 60), rng.randint(1, 6))
            lhs = gamma(x / 2, 30) * gamma((x + 1) / 2, 30)
            rhs = (mpmath.power(2, 1 - mpmath.mpf(x.numerator) / x.denominator)
                   * mpmath.sqrt(mpmath.pi) * gamma(x, 30))
            assert abs(lhs - rhs) < tol(30) * abs(rhs)


def test_gamma_precision_monotonicity():
    with mpmath.workdps(80):
        low = gamma(F(1, 4), 30)
        high = gamma(F(1, 4), 70)
        assert abs(low - high) < tol(30)
        assert mpmath.nstr(low, 25) == mpmath.nstr(high, 25)


# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------

def test_pi_thirty_digits():
    with mpmath.workdps(40):
        assert mpmath.nstr(constant("pi", 30), 30) == \
            "3.14159265358979323846264338328"


def test_gamma_quarter_duplication_cross_check():
    # Gamma(1/8)Gamma(5/8) = 2^(3/4) sqrt(pi) Gamma(1/4)
    with mpmath.workdps(70):
        lhs = gamma(F(1, 8), 60) * gamma(F(5, 8), 60)
        rhs = (mpmath.power(2, mpmath.mpf(3) / 4) * mpmath.sqrt(mpmath.pi)
               * constant("gamma_quarter", 60))
        assert abs(lhs - rhs) < tol(60) * abs(rhs)


def test_euler_gamma_ten_digits():
    with mpmath.workdps(20):
        assert mpmath.nstr(constant("euler_gamma", 10), 10) == "0.5772156649"


def test_euler_gamma_against_series_oracle():
    # Euler-Maclaurin: H_n - log n - 1/(2n) + 1/(12 n^2) - 1/(120 n^4)
    n = 200
    h = sum(1.0 / k for k in range(1, n + 1))
    approx = h - math.log(n) - 1 / (2 * n) + 1 / (12 * n ** 2) - 1 / (120 * n ** 4)
    assert abs(float(constant("euler_gamma", 30)) - approx) < 1e-12


def test_euler_gamma_capability_cap():
    constant("euler_gamma", 100)
    with pytest.raises(CapabilityError):
        constant("euler_gamma", 101)


def test_unknown_constant():
    with pytest.raises(InputError):
        constant("feigenbaum", 30)


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def test_closed_form_pow():
    cf = cf_pow(2, F(-1, 2))
    with mpmath.workdps(70):
        assert abs(cf.eval(60) - 1 / mpmath.sqrt(2)) < tol(60)


def test_closed_form_theorem_five_constant():
    cf = cf_mul(cf_pow(CF_PI, F(3, 4)), cf_pow(2, F(1, 2)),
                cf_pow(CF_GAMMA_QUARTER, -1))
    with mpmath.workdps(70):
        expected = (mpmath.pi ** (mpmath.mpf(3) / 4) * mpmath.sqrt(2)
                    / mpmath.gamma(mpmath.mpf(1) / 4))
        assert abs(cf.eval(60) - expected) < tol(58)
        assert mpmath.nstr(cf.eval(60), 7) == "0.9204418"


def test_closed_form_rational_exact():
    assert cf_rat(9, 8).eval(30) == mpmath.mpf(9) / 8


def test_closed_form_sub_div_e_gamma():
    cf = Div(Sub(cf_rat(3), cf_rat(1)), cf_rat(4))
    assert cf.eval(30) == mpmath.mpf(1) / 2
    with mpmath.workdps(40):
        assert abs(CF_E_GAMMA.eval(30) - mpmath.exp(mpmath.euler)) < tol(30)


def test_closed_form_division_by_zero():
    with pytest.raises(EvaluationError):
        Div(cf_rat(1), Sub(cf_rat(1), cf_rat(1))).eval(30)


def test_closed_form_fractional_power_of_negative():
    with pytest.raises(EvaluationError):
        cf_pow(Sub(cf_rat(1), cf_rat(2)), F(1, 2)).eval(30)


def test_closed_form_render_and_json():
    cf = cf_mul(cf_rat(8), cf_pow(CF_PI, F(1, 2)), cf_pow(CF_GAMMA_QUARTER, -2))
    assert cf.render() == "8*pi^(1/2)*gamma_quarter^-2"
    blob = cf.to_json()
    assert blob["type"] == "mul" and len(blob["factors"]) == 3


def test_power_product_exponents():
    assert power_product_exponents(cf_pow(2, F(-1, 2))) == {2: F(-1, 2)}
    assert power_product_exponents(cf_rat(9, 8)) == {2: F(-3), 3: F(2)}
    assert power_product_exponents(cf_rat(1)) == {}
    assert power_product_exponents(CF_PI) is None
    assert power_product_exponents(cf_mul(cf_rat(6), cf_pow(3, F(1, 2)))) == \
        {2: F(1), 3: F(3, 2)}


def test_power_product_form_canonical():
    form = power_product_form({2: F(-1, 2)})
    assert isinstance(form, type(cf_mul(cf_rat(1, 2), cf_pow(2, F(1, 2)))))
    assert power_product_exponents(form) == {2: F(-1, 2)}
    assert power_product_form({2: F(2), 3: F(-1)}).render() == "4/3"
