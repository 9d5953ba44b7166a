import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from digitprod import (ConvergenceTag, EvaluationError, FactoredRational,
                       InputError, ParseError, classify, dyadic_split,
                       log_term, pole_check, rs_split, thue_morse)
from digitprod.factored_rational import positivity_check, rs_split_rational

WR = FactoredRational.parse("(2n+1)/(2n+2)")


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------

def test_normalize_monic():
    r = FactoredRational.from_raw_factors([(4, 3, 1)])
    assert r.scale == 4
    assert r.offset_dict() == {F(3, 4): 1}


def test_normalize_cancellation():
    r = FactoredRational.from_raw_factors([(2, 1, 1), (2, 1, -1)])
    assert r.is_one


def test_normalize_theorem_five_rational():
    r = FactoredRational.from_raw_factors([(1, 1, 1), (4, 5, 1), (1, 2, -1), (4, 1, -1)])
    assert r.scale == 1
    assert r.offset_dict() == {F(1): 1, F(5, 4): 1, F(2): -1, F(1, 4): -1}


def test_normalize_rejects_bad_input():
    with pytest.raises(InputError):
        FactoredRational.from_raw_factors([(-1, 1, 1)])
    with pytest.raises(InputError):
        FactoredRational.from_raw_factors([(0, 1, 1)])
    with pytest.raises(InputError):
        FactoredRational.from_raw_factors([(2, 1, 0)])


# ---------------------------------------------------------------------------
# Parsing and rendering
# ---------------------------------------------------------------------------

def test_parse_woods_robbins():
    assert WR.scale == 1
    assert WR.offset_dict() == {F(1, 2): 1, F(1): -1}


def test_parse_golay_shapiro_rational():
    r = FactoredRational.parse("4(n+2)(2n+1)^3(2n+3)^3/((n+3)(n+1)^2(4n+3)^4)")
    assert r.scale == 1
    assert r.offset_dict() == {F(2): 1, F(1, 2): 3, F(3, 2): 3,
                               F(3): -1, F(1): -2, F(3, 4): -4}


def test_parse_unbalanced_is_not_a_parse_error():
    r = FactoredRational.parse("(n+1)")
    assert r.offset_dict() == {F(1): 1}
    assert classify(r).tag is ConvergenceTag.DIVERGENT


@pytest.mark.parametrize("text", [
    "(2n-1)(4n+1)/((2n+1)(4n-1))",
    "(n+3/4)",
    "(4n)(4n+3)",
    "3(n+1/2)^2/(2(n+3/4)^2)",
    "1/(n+1)",
    "5/(2(n+2))",
    "(2n−1)/(2n+1)",  # unicode minus
])
def test_parse_accepts_grammar_forms(text):
    FactoredRational.parse(text)


@pytest.mark.parametrize("text", ["", "(n", "n+1", "(2x+1)", "(n+1)^0",
                                  "(n+1)/()", "(1.5n+1)"])
def test_parse_rejects_malformed(text):
    with pytest.raises((ParseError, InputError)):
        FactoredRational.parse(text)


def test_parse_reports_position():
    with pytest.raises(ParseError) as info:
        FactoredRational.parse("(2n+1)/(2x+2)")
    assert info.value.position > 0


def test_render_round_trip_catalog():
    from digitprod import catalog
    for identity in catalog():
        r = identity.spec.rational
        assert FactoredRational.parse(r.render()) == r


@st.composite
def balanced_rationals(draw):
    pairs = draw(st.integers(min_value=1, max_value=3))
    offsets = draw(st.lists(
        st.fractions(min_value=F(1, 8), max_value=4,
                     max_denominator=8),
        min_size=2 * pairs, max_size=2 * pairs, unique=True))
    return FactoredRational.from_offsets(
        {a: (1 if i < pairs else -1) for i, a in enumerate(offsets)})


@given(balanced_rationals())
@settings(max_examples=100, deadline=None)
def test_render_round_trip_random(r):
    assert FactoredRational.parse(r.render()) == r


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def test_classify_woods_robbins():
    cls = classify(WR)
    assert cls.tag is ConvergenceTag.PM_CONVERGENT
    assert not cls.fully


def test_classify_fully_convergent():
    r = FactoredRational.parse("(n+1)(4n+5)/((n+2)(4n+1))")
    assert classify(r).tag is ConvergenceTag.FULLY_CONVERGENT
    # equal offset sums on both sides: 1 + 5/4 = 2 + 1/4
    assert r.power_sum(1) == 0


def test_classify_divergent_scale():
    cls = classify(FactoredRational.parse("(2n+1)/(3n+2)"))
    assert cls.tag is ConvergenceTag.DIVERGENT
    assert "leading coefficient" in cls.detail


def test_classify_divergent_degree():
    cls = classify(FactoredRational.parse("(n+1)(n+2)/(n+3)"))
    assert cls.tag is ConvergenceTag.DIVERGENT
    assert "degree" in cls.detail


def test_classify_invariant_under_reordering(rng):
    raw = [(2, 1, 1), (4, 5, 1), (2, 3, -1), (4, 3, -1)]
    tags = set()
    for _ in range(6):
        rng.shuffle(raw)
        tags.add(classify(FactoredRational.from_raw_factors(raw)).tag)
    assert len(tags) == 1


@given(balanced_rationals(),
       st.fractions(min_value=F(1, 4), max_value=3, max_denominator=6))
@settings(max_examples=50, deadline=None)
def test_classify_invariant_under_common_factor(r, a):
    common = FactoredRational.from_offsets({a: 1})
    assert classify(r * common / common).tag == classify(r).tag


# ---------------------------------------------------------------------------
# Poles, positivity, log terms
# ---------------------------------------------------------------------------

def test_pole_check_examples():
    assert pole_check(FactoredRational.parse("(2n-1)(4n+1)/((2n+1)(4n-1))"), 1) is None
    assert pole_check(FactoredRational.parse("(n-1)"), 0) == 1
    assert pole_check(FactoredRational.parse("(n+1)/(n+2)"), 0) is None
    assert pole_check(FactoredRational.parse("(4n+1)/(4n)"), 0) == 0
    assert pole_check(FactoredRational.parse("(4n+1)/(4n)"), 1) is None


def test_positivity_check():
    positivity_check(FactoredRational.parse("(2n-1)/(2n+1)"), 1)
    with pytest.raises(EvaluationError):
        positivity_check(FactoredRational.parse("(n-3/2)/(n+1)"), 1)


def test_log_term_values():
    import mpmath
    with mpmath.workdps(50):
        assert abs(log_term(WR, 0, 40) + mpmath.log(2)) < mpmath.mpf("1e-39")
        assert abs(log_term(FactoredRational.parse("(n+1)(4n+5)/((n+2)(4n+1))"),
                            1, 40) - mpmath.log(mpmath.mpf(6) / 5)) < mpmath.mpf("1e-39")
    assert log_term(FactoredRational.one(), 7, 30) == 0


def test_log_term_rejects_nonpositive():
    with pytest.raises(EvaluationError):
        log_term(FactoredRational.parse("(n-2)/(n+1)"), 1, 30)


def test_value_at():
    assert WR.value_at(0) == F(1, 2)
    assert WR.value_at(F(1, 2)) == F(2, 3)
    with pytest.raises(EvaluationError):
        FactoredRational.parse("1/(n-1)").value_at(1)


# ---------------------------------------------------------------------------
# Dyadic split
# ---------------------------------------------------------------------------

def test_dyadic_split_single_factor_pair():
    a, b = F(1, 3), F(5, 7)
    r = FactoredRational.from_offsets({a: 1, b: -1})
    split, boundary = dyadic_split(r, 1)
    assert boundary == (1 + b) / (1 + a)
    assert split.offset_dict() == {a / 2: 1, (1 + b) / 2: 1,
                                   (1 + a) / 2: -1, b / 2: -1}


def test_dyadic_split_identity_rational():
    split, boundary = dyadic_split(FactoredRational.one(), 1)
    assert split.is_one and boundary == 1


def test_dyadic_split_woods_robbins_start0():
    split, boundary = dyadic_split(WR, 0)
    assert split == FactoredRational.parse("(4n+1)(4n+4)/((4n+2)(4n+3))")
    assert boundary == F(2, 3)


def test_dyadic_split_rejects_divergent():
    with pytest.raises(InputError):
        dyadic_split(FactoredRational.parse("(2n+1)/(3n+2)"), 1)


@pytest.mark.parametrize("start", [0, 1])
def test_dyadic_split_exact_finite_identity(rng, start):
    # prod_{n=start}^{2N+1} R(n)^eps equals boundary * prod_{n=1}^{N} of the
    # split rational exactly: the regrouping pairs indices (2n, 2n+1)
    from conftest import random_pm_convergent
    for _ in range(5):
        r = random_pm_convergent(rng)
        split, boundary = dyadic_split(r, start)
        n_top = 64
        lhs = F(1)
        for n in range(start, 2 * n_top + 2):
            lhs *= r.value_at(n) ** (1 - 2 * thue_morse(n))
        rhs = boundary
        for n in range(1, n_top + 1):
            rhs *= split.value_at(n) ** (1 - 2 * thue_morse(n))
        assert lhs == rhs


def test_dyadic_split_float_identity(rng):
    from conftest import naive_signed_product, random_pm_convergent
    r = random_pm_convergent(rng)
    split, boundary = dyadic_split(r, 0)
    n_top = 2 ** 12
    lhs = naive_signed_product(r, 0, 2 * n_top + 2)
    rhs = float(boundary) * naive_signed_product(split, 1, n_top + 1)
    assert abs(lhs - rhs) < 1e-9 * (1 + abs(lhs))


def test_dyadic_split_decay_promotion():
    # |log R| <= C/n^k turns into |log R_split| = O(1/n^{k+1})
    r = FactoredRational.from_offsets({F(1, 2): 1, F(3, 2): -1})
    for k in (1, 2, 3):
        split, _ = dyadic_split(r, 1)
        worst = max(abs(float(log_term(split, n, 25))) * n ** (k + 1)
                    for n in range(2 ** 10, 2 ** 11, 37))
        assert worst < 16.0
        r = split


# ---------------------------------------------------------------------------
# Rudin-Shapiro split
# ---------------------------------------------------------------------------

def test_rs_split_reconstructs_golay_shapiro_relation():
    # with R(X) = (X+2)^2/((X+1)(X+3)), the relation
    # prod (R(n) R(2n+1) / (R(2n) R(4n+1)^2))^{(-1)^{v_n}} = R(1) means the
    # combined rational must match the catalog entry evaluated to one
    base = FactoredRational.parse("(n+2)^2/((n+1)(n+3))")
    combined = (base * base.compose_linear(2, 1)
                / (base.compose_linear(2, 0) * base.compose_linear(4, 1) ** 2))
    expected = FactoredRational.parse("4(n+2)(2n+1)^3(2n+3)^3/((n+3)(n+1)^2(4n+3)^4)")
    assert combined == expected
    split, boundary = rs_split(base)
    assert boundary == F(9, 8)
    assert base / split == expected


def test_rs_split_halves_slow_component():
    r = FactoredRational.parse("(2n+1)^2/((n+1)(4n+1))")
    p1 = r.power_sum(1)
    for _ in range(4):
        r = rs_split_rational(r)
        p1 /= 2
        assert r.power_sum(1) == p1


def test_rs_split_preserves_balance(rng):
    from conftest import random_pm_convergent
    r = random_pm_convergent(rng)
    split, _ = rs_split(r)
    assert split.degree_sum() == 0 and split.scale == 1


def test_rs_split_rejects_divergent():
    with pytest.raises(InputError):
        rs_split(FactoredRational.parse("(n+1)(n+2)/(n+3)"))


# ---------------------------------------------------------------------------
# Algebra helpers
# ---------------------------------------------------------------------------

def test_compose_linear():
    r = FactoredRational.parse("(n+1)/(n+2)")
    even = r.compose_linear(2, 0)
    assert even.offset_dict() == {F(1, 2): 1, F(1): -1}
    assert even.scale == 1
    assert even.value_at(3) == r.value_at(6)


def test_mul_div_pow():
    r = FactoredRational.parse("(n+1)/(n+2)")
    s = FactoredRational.parse("(n+2)/(n+3)")
    assert (r * s) == FactoredRational.parse("(n+1)/(n+3)")
    assert (r / r).is_one
    assert (r ** 2).offset_dict() == {F(1): 2, F(2): -2}


def test_power_sum():
    r = FactoredRational.parse("(2n+1)^2/((n+1)(4n+1))")
    assert r.power_sum(1) == F(-1, 4)
    assert r.power_sum(2) == 2 * F(1, 4) - 1 - F(1, 16)
