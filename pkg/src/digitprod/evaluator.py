"""Numerical engines for the five exponent kinds and the analytic probes.

The +-1 Thue-Morse evaluator accelerates by iterated dyadic splitting:
each split is an exact identity whose boundary is an exact rational and
whose log-terms gain one order of decay, so L splits turn O(1/n) tails
into O(1/n^{L+1}) ones.  The summation itself runs in fixed-point integer
arithmetic driven by exact power sums of the split offsets, with exact
rational evaluation for the few smallest indices.

Plain products telescope into Gamma values.  The 0/1-exponent kinds use
2 s_n = 1 - (-1)^{s_n} and combine the plain and +-1 results.

Rudin-Shapiro products are summed directly (compensated summation over
float64 terms); when the rational is not fully convergent the O(1/n)
log-term component makes direct tails decay like 1/sqrt(N), so the
evaluator first applies the exact index-regrouping split (``rs_split``)
a configurable number of times, halving that slow component per level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import mpmath
import numpy as np

from .errors import ConsistencyError, EvaluationError, InputError
from .factored_rational import (FactoredRational, classify, dyadic_split,
                                pole_check, positivity_check,
                                rs_split_rational)
from .numerics import (DEFAULT_PRECISION, constant, gamma, log_fraction,
                       mpf_from_fraction, working_dps)
from .sequences import ExponentKind

DEFAULT_TM_TERMS = 4096
DEFAULT_RS_TERMS = 10 ** 6
DEFAULT_SPLIT_LEVELS = 8
DEFAULT_RS_SPLIT_LEVELS = 10


@dataclass(frozen=True)
class ProductSpec:
    """An infinite product: rational function, exponent kind, start index."""

    rational: FactoredRational
    kind: ExponentKind
    start: int

    def validate(self) -> None:
        if self.start not in (0, 1):
            raise InputError(f"start index must be 0 or 1, got {self.start}")
        cls = classify(self.rational)
        if self.kind in (ExponentKind.PM_THUE, ExponentKind.PM_RS):
            if not cls.at_least_pm:
                raise InputError(f"divergent product: {cls.detail}")
        else:
            if not cls.fully:
                raise InputError(
                    f"{self.kind.value} products require full convergence: "
                    f"{cls.detail}")
        n = pole_check(self.rational, self.start)
        if n is not None:
            raise InputError(f"factor vanishes at n = {n} within the "
                             f"product range n >= {self.start}")
        positivity_check(self.rational, self.start)


@dataclass(frozen=True)
class EvalOptions:
    """Work parameters: decimal precision, split levels, term counts.

    ``terms`` defaults to 4096 for Thue-Morse kinds and 10^6 for
    Rudin-Shapiro kinds.  ``rs_split_levels`` of None picks 0 for fully
    convergent rationals and 10 otherwise.
    """

    precision: int = DEFAULT_PRECISION
    split_levels: int = DEFAULT_SPLIT_LEVELS
    terms: Optional[int] = None
    rs_split_levels: Optional[int] = None

    def __post_init__(self):
        if self.precision < 1:
            raise InputError("precision must be at least 1 digit")
        if self.split_levels < 0:
            raise InputError("split levels must be >= 0")
        if self.terms is not None and self.terms < 16:
            raise InputError("terms must be >= 16")
        if self.rs_split_levels is not None and self.rs_split_levels < 0:
            raise InputError("rs split levels must be >= 0")

    def tm_terms(self) -> int:
        return self.terms if self.terms is not None else DEFAULT_TM_TERMS

    def rs_terms(self) -> int:
        return self.terms if self.terms is not None else DEFAULT_RS_TERMS


@dataclass(frozen=True)
class EvalResult:
    """Value with a heuristic error bound and the work actually done."""

    value: mpmath.mpf
    error_estimate: mpmath.mpf
    terms_used: int
    split_levels: int


def _floor_error(precision: int) -> mpmath.mpf:
    return mpmath.mpf(10) ** (5 - precision)


# ---------------------------------------------------------------------------
# +-1 Thue-Morse products
# ---------------------------------------------------------------------------

def _int_offsets(r: FactoredRational) -> Tuple[int, List[Tuple[int, int]]]:
    """Offsets as integers over a common denominator: a_i = u_i / D."""
    d = 1
    for f in r.factors:
        d = d * f.offset.denominator // math.gcd(d, f.offset.denominator)
    return d, [(int(f.offset * d), f.multiplicity) for f in r.factors]


def _exact_log_terms(r: FactoredRational, lo: int, hi: int,
                     precision: int) -> List[mpmath.mpf]:
    """[log R(n) for n in lo..hi-1] exactly (one log per exact rational)."""
    d, offs = _int_offsets(r)
    out = []
    wp = working_dps(precision)
    with mpmath.workdps(wp):
        for n in range(lo, hi):
            num = 1
            den = 1
            base_n = d * n
            for u, m in offs:
                b = base_n + u
                if b == 0:
                    raise EvaluationError(f"factor vanishes at n = {n}")
                if m > 0:
                    num *= b ** m
                else:
                    den *= b ** (-m)
            # net degree 0 makes the D powers cancel exactly
            if num * den < 0:
                raise EvaluationError(f"R({n}) is negative; real log undefined")
            out.append(mpmath.log(mpmath.mpf(num)) - mpmath.log(mpmath.mpf(den)))
    return out


def _power_sums(r: FactoredRational, j_max: int) -> List[Fraction]:
    """Exact power sums p_j = sum_i m_i a_i^j for j = 0..j_max."""
    d, offs = _int_offsets(r)
    sums = [0] * (j_max + 1)
    for u, m in offs:
        p = 1
        for j in range(1, j_max + 1):
            p *= u
            sums[j] += m * p
    out = [Fraction(0)] * (j_max + 1)
    dd = 1
    for j in range(1, j_max + 1):
        dd *= d
        out[j] = Fraction(sums[j], dd)
    return out


def _tm_log_sum(r: FactoredRational, start: int, terms: int,
                precision: int) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """(sum_{n=start}^{terms} (-1)^{t_n} log R(n), |last summand|).

    Hybrid scheme: exact rational values for small n, then a fixed-point
    integer Horner evaluation of log R(n) = sum_j (-1)^{j+1} p_j/(j n^j)
    built from exact power sums of the offsets.
    """
    wp = working_dps(precision)
    if r.is_one:
        with mpmath.workdps(wp):
            return mpmath.mpf(0), mpmath.mpf(0)
    max_abs = float(r.max_abs_offset())
    n0 = max(8, int(math.ceil(2 * max_abs)) + 1, start + 1)
    bits = int(math.ceil((precision + 12) * math.log2(10)))

    total = mpmath.mpf(0)
    last_mag = mpmath.mpf(0)

    exact_hi = min(n0, terms + 1)
    exact_terms = _exact_log_terms(r, start, exact_hi, precision)
    with mpmath.workdps(wp):
        for n, lt in zip(range(start, exact_hi), exact_terms):
            sign = -1 if (n.bit_count() & 1) else 1
            total += sign * lt
            last_mag = abs(lt)

    if terms >= n0:
        mass = sum(abs(f.multiplicity) for f in r.factors)
        # series term j at n >= n0 is bounded by mass*(max_abs/n0)^j / j
        ratio = max(max_abs, 1e-9) / n0
        j_max = int(math.ceil((bits + math.log2(mass + 1) + 4)
                              / -math.log2(ratio))) + 2
        psums = _power_sums(r, j_max)
        scale = 1 << bits
        q = [0] * (j_max + 1)
        for j in range(1, j_max + 1):
            c = psums[j] * scale * (1 if j % 2 == 1 else -1)
            q[j] = round(Fraction(c, j))
        acc = 0
        h = 0
        for n in range(n0, terms + 1):
            h = 0
            for j in range(j_max, 0, -1):
                h = (h + q[j]) // n
            acc += -h if (n.bit_count() & 1) else h
        with mpmath.workdps(wp):
            total += mpmath.mpf(acc) / scale
            last_mag = abs(mpmath.mpf(h)) / scale
    return total, last_mag


def eval_pm_thue(spec: ProductSpec, opts: EvalOptions = EvalOptions()) -> EvalResult:
    """Evaluate prod R(n)^{(-1)^{t_n}} by L-fold dyadic splitting."""
    if spec.kind is not ExponentKind.PM_THUE:
        raise InputError(f"eval_pm_thue expects kind pm-t, got {spec.kind.value}")
    spec.validate()
    levels = opts.split_levels
    terms = opts.tm_terms()
    precision = opts.precision
    wp = working_dps(precision)

    r = spec.rational
    start = spec.start
    boundary = Fraction(1)
    for _ in range(levels):
        r, b = dyadic_split(r, start)
        boundary *= b
        start = 1

    s, last = _tm_log_sum(r, start, terms, precision)
    with mpmath.workdps(wp):
        if boundary <= 0:
            raise EvaluationError(f"boundary product {boundary} is not positive")
        log_value = s + log_fraction(boundary, precision)
        value = mpmath.exp(log_value)
        err_log = last * terms / max(levels, 1) + _floor_error(precision)
        return EvalResult(value, value * err_log + _floor_error(precision),
                          terms, levels)


# ---------------------------------------------------------------------------
# Plain products (Gamma telescoping)
# ---------------------------------------------------------------------------

def eval_plain(spec: ProductSpec, opts: EvalOptions = EvalOptions()) -> EvalResult:
    """prod_{n>=s} prod_i (n+a_i)^{m_i} = prod_i Gamma(a_i + s)^{-m_i}.

    Exact telescoping; the only error is Gamma's own, so no truncation
    parameters apply.
    """
    if spec.kind is not ExponentKind.PLAIN:
        raise InputError(f"eval_plain expects kind plain, got {spec.kind.value}")
    spec.validate()
    r = spec.rational
    cls = classify(r)
    if not cls.fully:
        raise InputError(f"plain products need full convergence: {cls.detail}")
    precision = opts.precision
    mult_mass = 0
    with mpmath.workdps(working_dps(precision)):
        value = mpmath.mpf(1)
        for f in r.factors:
            arg = f.offset + spec.start
            if arg <= 0:
                raise InputError(
                    f"Gamma telescoping needs offset + start > 0; "
                    f"factor offset {f.offset} with start {spec.start}")
            value *= gamma(arg, precision) ** (-f.multiplicity)
            mult_mass += abs(f.multiplicity)
        err = value * (mult_mass + 1) * mpmath.mpf(10) ** (2 - precision)
        return EvalResult(value, err + _floor_error(precision), 0, 0)


def eval_zero_one_thue(spec: ProductSpec, opts: EvalOptions = EvalOptions()) -> EvalResult:
    """prod R(n)^{t_n} = sqrt(plain / pm) via 2 t_n = 1 - (-1)^{t_n}."""
    if spec.kind is not ExponentKind.ZERO_ONE_THUE:
        raise InputError(f"eval_zero_one_thue expects kind t, got {spec.kind.value}")
    spec.validate()
    plain = eval_plain(ProductSpec(spec.rational, ExponentKind.PLAIN, spec.start), opts)
    pm = eval_pm_thue(ProductSpec(spec.rational, ExponentKind.PM_THUE, spec.start), opts)
    return _sqrt_ratio(plain, pm, opts)


def _sqrt_ratio(plain: EvalResult, pm: EvalResult, opts: EvalOptions) -> EvalResult:
    with mpmath.workdps(working_dps(opts.precision)):
        value = mpmath.sqrt(plain.value / pm.value)
        rel = (plain.error_estimate / plain.value
               + pm.error_estimate / pm.value) / 2
        return EvalResult(value, value * rel + _floor_error(opts.precision),
                          pm.terms_used, pm.split_levels)


# ---------------------------------------------------------------------------
# Rudin-Shapiro products
# ---------------------------------------------------------------------------

_EPS_V_CACHE: Dict[int, np.ndarray] = {}


def _eps_v_array(count: int) -> np.ndarray:
    """(-1)^{v_n} for n = 0..count-1 as an int8 numpy array."""
    arr = _EPS_V_CACHE.get(count)
    if arr is None:
        n = np.arange(count, dtype=np.uint64)
        pairs = np.bitwise_count(n & (n >> np.uint64(1)))
        arr = (1 - 2 * (pairs.astype(np.int64) & 1)).astype(np.int8)
        if count <= 2 ** 21:
            _EPS_V_CACHE.clear()
            _EPS_V_CACHE[count] = arr
    return arr


def _rs_level_log_terms(r: FactoredRational, points: List[int]) -> List[float]:
    """[log R(n) for n in points] as floats via exactly rounded summation.

    Multiplicities after several rs splits are huge and cancel, so each
    term list is fed to math.fsum; the remaining error is the per-term
    log1p rounding, bounded by eps * sum_i |m_i * log1p(a_i/n)|.
    """
    offs = [(float(f.offset), f.multiplicity) for f in r.factors]
    out = []
    for n in points:
        out.append(math.fsum(m * math.log1p(a / n) for a, m in offs))
    return out


def eval_pm_rs(spec: ProductSpec, opts: EvalOptions = EvalOptions()) -> EvalResult:
    """Evaluate prod R(n)^{(-1)^{v_n}} by direct compensated summation,
    after optionally applying the exact Rudin-Shapiro split to damp the
    slow O(1/n) log-term component."""
    if spec.kind is not ExponentKind.PM_RS:
        raise InputError(f"eval_pm_rs expects kind pm-v, got {spec.kind.value}")
    spec.validate()
    precision = opts.precision
    wp = working_dps(precision)
    terms = opts.rs_terms()

    r = spec.rational
    levels = opts.rs_split_levels
    if levels is None:
        levels = 0 if r.power_sum(1) == 0 else DEFAULT_RS_SPLIT_LEVELS

    boundary_logs: List[float] = []
    exact_boundary = Fraction(1)
    if spec.start == 0:
        r0 = r.value_at(0)
        if r0 <= 0:
            raise EvaluationError(f"R(0) = {r0} is not positive")
        exact_boundary *= r0

    for _ in range(levels):
        boundary_logs.extend(_rs_level_log_terms(r, [1]))
        r = rs_split_rational(r)

    if r.is_one:
        with mpmath.workdps(wp):
            value = mpmath.exp(log_fraction(exact_boundary, precision)) \
                if exact_boundary != 1 else mpmath.mpf(1)
            return EvalResult(value, value * _floor_error(precision)
                              + _floor_error(precision), 0, levels)

    eps = _eps_v_array(terms + 1)
    n0 = max(8, int(math.ceil(2 * float(r.max_abs_offset()))) + 1)
    pieces: List[float] = list(boundary_logs)

    small_lo = 1 if levels > 0 else max(spec.start, 1)
    small_hi = min(n0, terms + 1)
    small_terms = _rs_level_log_terms(r, list(range(small_lo, small_hi)))
    pieces.extend(int(eps[n]) * t
                  for n, t in zip(range(small_lo, small_hi), small_terms))

    if terms >= n0:
        mass = sum(abs(f.multiplicity) for f in r.factors)
        ratio = max(float(r.max_abs_offset()), 1e-9) / n0
        j_max = max(4, int(math.ceil((46 + math.log2(mass + 1))
                                     / -math.log2(ratio))) + 2)
        psums = _power_sums(r, j_max)
        q = [0.0] * (j_max + 1)
        for j in range(1, j_max + 1):
            q[j] = float(psums[j] / j) * (1 if j % 2 == 1 else -1)
        n = np.arange(n0, terms + 1, dtype=np.float64)
        x = 1.0 / n
        acc = np.zeros_like(x)
        for j in range(j_max, 0, -1):
            acc = (acc + q[j]) * x
        signed = acc * eps[n0:terms + 1]
        pieces.append(math.fsum(signed.tolist()))

    log_sum = math.fsum(pieces)
    psums3 = _power_sums(r, 3)
    p1 = abs(float(psums3[1]))
    p2 = abs(float(psums3[2]))
    p3 = abs(float(psums3[3]))
    sqrt_n = math.sqrt(terms)
    local_var = p1 / terms ** 2 + 2 * (p2 + p3) / terms ** 3
    abel_tail = 3 * (2 * p1 / sqrt_n + (p2 + p3) * terms ** -1.5)
    err_log = 3 * sqrt_n * local_var + abel_tail + 1e-12 * (1 + abs(log_sum))

    with mpmath.workdps(wp):
        total = mpmath.mpf(log_sum)
        if exact_boundary != 1:
            total += log_fraction(exact_boundary, precision)
        value = mpmath.exp(total)
        return EvalResult(value, value * mpmath.mpf(err_log)
                          + _floor_error(precision), terms, levels)


def eval_zero_one_rs(spec: ProductSpec, opts: EvalOptions = EvalOptions()) -> EvalResult:
    """prod R(n)^{v_n} = sqrt(plain / pm_rs)."""
    if spec.kind is not ExponentKind.ZERO_ONE_RS:
        raise InputError(f"eval_zero_one_rs expects kind v, got {spec.kind.value}")
    spec.validate()
    plain = eval_plain(ProductSpec(spec.rational, ExponentKind.PLAIN, spec.start), opts)
    pm = eval_pm_rs(ProductSpec(spec.rational, ExponentKind.PM_RS, spec.start), opts)
    return _sqrt_ratio(plain, pm, opts)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

_DISPATCH = {
    ExponentKind.PM_THUE: eval_pm_thue,
    ExponentKind.ZERO_ONE_THUE: eval_zero_one_thue,
    ExponentKind.PM_RS: eval_pm_rs,
    ExponentKind.ZERO_ONE_RS: eval_zero_one_rs,
    ExponentKind.PLAIN: eval_plain,
}


def eval_product(spec: ProductSpec, opts: EvalOptions = EvalOptions()) -> EvalResult:
    """Dispatch to the kind-specific evaluator."""
    return _DISPATCH[spec.kind](spec, opts)


# ---------------------------------------------------------------------------
# The f and g functions
# ---------------------------------------------------------------------------

def _check_f_parameter(name: str, x: Fraction) -> None:
    if x.denominator == 1 and x <= -1:
        raise InputError(f"{name} = {x} is a negative integer; f is undefined there")


def f_value(a: Fraction, b: Fraction, opts: EvalOptions = EvalOptions()) -> EvalResult:
    """f(a, b) = prod_{n>=1} ((n+a)/(n+b))^{(-1)^{t_n}}."""
    a, b = Fraction(a), Fraction(b)
    _check_f_parameter("a", a)
    _check_f_parameter("b", b)
    if a == b:
        with mpmath.workdps(working_dps(opts.precision)):
            return EvalResult(mpmath.mpf(1), _floor_error(opts.precision),
                              0, opts.split_levels)
    rational = FactoredRational.from_offsets({a: 1, b: -1})
    spec = ProductSpec(rational, ExponentKind.PM_THUE, 1)
    return eval_pm_thue(spec, opts)


def g_value(x: Fraction, opts: EvalOptions = EvalOptions()) -> EvalResult:
    """g(x) = f(x/2, (x+1)/2) / (x+1)."""
    x = Fraction(x)
    if x.denominator == 1 and x <= -1:
        raise InputError(f"x = {x} is a negative integer; g is undefined there")
    if x < 0:
        raise InputError(f"g is evaluated on x >= 0 (real-log domain), got {x}")
    f = f_value(x / 2, (x + 1) / 2, opts)
    with mpmath.workdps(working_dps(opts.precision)):
        denom = mpf_from_fraction(x + 1, opts.precision)
        return EvalResult(f.value / denom, f.error_estimate / denom,
                          f.terms_used, f.split_levels)


# ---------------------------------------------------------------------------
# Flajolet-Martin constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlajoletMartin:
    g0: EvalResult
    ratio: EvalResult            # R = prod ((4n+1)(4n+2)/(4n(4n+3)))^{(-1)^{t_n}}
    phi: mpmath.mpf              # 2^{-1/2} e^gamma (2/3) R
    phi_via_g0: mpmath.mpf       # 2^{-1/2} e^gamma / g(0)
    cross_check_error: mpmath.mpf  # |R g(0) - 3/2|


FM_RATIO_RATIONAL = FactoredRational.from_raw_factors(
    [(4, 1, 1), (4, 2, 1), (4, 0, -1), (4, 3, -1)])


def flajolet_martin(opts: EvalOptions = EvalOptions()) -> FlajoletMartin:
    """g(0), the product R, and the probabilistic-counting constant phi.

    Checks R * g(0) = 3/2 within the combined error estimates and reports
    phi both as 2^{-1/2} e^gamma (2/3) R and as 2^{-1/2} e^gamma / g(0).
    """
    precision = opts.precision
    g0 = g_value(Fraction(0), opts)
    ratio = eval_pm_thue(ProductSpec(FM_RATIO_RATIONAL, ExponentKind.PM_THUE, 1), opts)
    with mpmath.workdps(working_dps(precision)):
        e_gamma = mpmath.exp(constant("euler_gamma", min(precision, 100)))
        inv_sqrt2 = 1 / mpmath.sqrt(mpmath.mpf(2))
        phi = inv_sqrt2 * e_gamma * mpmath.mpf(2) / 3 * ratio.value
        phi_alt = inv_sqrt2 * e_gamma / g0.value
        cross = abs(ratio.value * g0.value - mpmath.mpf(3) / 2)
        combined = (ratio.error_estimate * g0.value
                    + g0.error_estimate * ratio.value)
        if cross > 10 * combined + _floor_error(precision):
            raise ConsistencyError(
                f"R*g(0) = {mpmath.nstr(ratio.value * g0.value, 25)} "
                f"deviates from 3/2 by {mpmath.nstr(cross, 5)}")
        return FlajoletMartin(g0, ratio, phi, phi_alt, cross)


# ---------------------------------------------------------------------------
# Remainder sign probe (difference operator T G(x) = G(2x) - G(2x+1))
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignProbeRow:
    n: int
    sign: int
    expected: int

    @property
    def matches(self) -> bool:
        return self.sign == self.expected


def remainder_sign_probe(a: Fraction, b: Fraction, k: int, n_max: int,
                         n_tail: int = 2 ** 20) -> List[SignProbeRow]:
    """Signs of truncated remainders sum_{j=n}^{n_tail} (-1)^{t_j} T^k G(j)
    against (-1)^{t_n}, for G(x) = log((x+a)/(x+b)) with a > b > 0.

    T^k G(j) expands to sum_{i<2^k} (-1)^{t_i} G(2^k j + i), so the probe
    evaluates G on one dense grid and folds it k times.
    """
    a, b = Fraction(a), Fraction(b)
    if not (a > b > 0):
        raise InputError(f"need a > b > 0 for the completely monotone class, "
                         f"got a = {a}, b = {b}")
    if k < 0 or n_max < 1 or n_tail < n_max:
        raise InputError("need k >= 0 and 1 <= n_max <= n_tail")

    width = 1 << k
    top = width * (n_tail + 1)
    x = np.arange(0, top, dtype=np.float64)
    g = np.log(x + float(a)) - np.log(x + float(b))
    for _ in range(k):
        g = g[0::2] - g[1::2]
    tk = g[1:n_tail + 1]

    n_arr = np.arange(1, n_tail + 1, dtype=np.uint64)
    t_par = np.bitwise_count(n_arr).astype(np.int64) & 1
    eps = (1 - 2 * t_par).astype(np.float64)
    weighted = eps * tk
    suffix = np.cumsum(weighted[::-1])[::-1]

    rows = []
    for n in range(1, n_max + 1):
        s = suffix[n - 1]
        sign = 1 if s > 0 else (-1 if s < 0 else 0)
        expected = -1 if (n.bit_count() & 1) else 1
        rows.append(SignProbeRow(n, sign, expected))
    return rows


# ---------------------------------------------------------------------------
# Monotonicity scan of h(x) = f(x/2, (x+1)/2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanPoint:
    x: Fraction
    value: mpmath.mpf
    error_estimate: mpmath.mpf


@dataclass(frozen=True)
class ScanReport:
    points: List[ScanPoint]
    violations: List[Tuple[Fraction, Fraction]]  # adjacent pairs not decreasing

    @property
    def strictly_decreasing(self) -> bool:
        return not self.violations


def monotonicity_scan(x_lo: Fraction, x_hi: Fraction, steps: int,
                      opts: EvalOptions = EvalOptions()) -> ScanReport:
    """Evaluate h(x) = f(x/2, (x+1)/2) on a uniform grid and flag any
    adjacent pair whose decrease is not resolved beyond the combined
    error estimates."""
    x_lo, x_hi = Fraction(x_lo), Fraction(x_hi)
    if steps < 1 or (steps > 1 and not x_lo < x_hi) or x_lo < 0:
        raise InputError("need 0 <= x_lo < x_hi and steps >= 1")
    points = []
    for i in range(steps):
        x = x_lo if steps == 1 else x_lo + (x_hi - x_lo) * i / (steps - 1)
        res = f_value(x / 2, (x + 1) / 2, opts)
        points.append(ScanPoint(x, res.value, res.error_estimate))
    violations = []
    for left, right in zip(points, points[1:]):
        if not (left.value - right.value > left.error_estimate + right.error_estimate):
            violations.append((left.x, right.x))
    return ScanReport(points, violations)
