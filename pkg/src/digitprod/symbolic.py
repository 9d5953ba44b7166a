"""Formal algebra of the function g and the verified identity catalog.

A +-1 Thue-Morse product over a balanced rational with offsets a_i and
multiplicities m_i has logarithm sum_i m_i G(a_i), where G(x) = log g(x).
The functional equation (1+x) g(x) = g(x/2)/g((x+1)/2) turns into the
relation vector

    r_x :  G(x/2) - G((x+1)/2) - G(x) = log(1+x),

and reducing an expression to a constant means writing its G-part as an
exact rational combination of relation vectors.  The solver does exact
sparse Gaussian elimination over the rationals on a universe of candidate
relation points and returns the combination as a certificate; constants
come out as products of positive rationals with rational exponents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import mpmath

from .errors import InputError
from .evaluator import EvalOptions, ProductSpec, eval_product
from .factored_rational import FactoredRational, classify
from .numerics import (ClosedForm, Rat, Sub, cf_mul, cf_pow, cf_rat,
                       CF_PI, CF_GAMMA_QUARTER, eval_closed_form,
                       power_product_exponents, power_product_form,
                       working_dps, _factorize)
from .sequences import ExponentKind

DEFAULT_REDUCE_DEPTH = 6


# ---------------------------------------------------------------------------
# GExpression
# ---------------------------------------------------------------------------

def _clean(d: Dict[Fraction, Fraction]) -> Dict[Fraction, Fraction]:
    return {k: v for k, v in d.items() if v}


@dataclass(frozen=True)
class GExpression:
    """Rational combination of symbols G(x) plus a formal log-constant part.

    ``terms`` maps points x to coefficients; ``log_const`` maps positive
    rationals q to coefficients, denoting sum c_q log q.
    """

    terms: Tuple[Tuple[Fraction, Fraction], ...] = ()
    log_const: Tuple[Tuple[Fraction, Fraction], ...] = ()

    @staticmethod
    def build(terms: Dict[Fraction, Fraction],
              log_const: Optional[Dict[Fraction, Fraction]] = None) -> "GExpression":
        t = tuple(sorted(_clean(terms).items()))
        c = tuple(sorted(_clean(log_const or {}).items()))
        return GExpression(t, c)

    @staticmethod
    def g_symbol(x, coefficient=1) -> "GExpression":
        return GExpression.build({Fraction(x): Fraction(coefficient)})

    def terms_dict(self) -> Dict[Fraction, Fraction]:
        return dict(self.terms)

    def log_const_dict(self) -> Dict[Fraction, Fraction]:
        return dict(self.log_const)

    @property
    def is_zero(self) -> bool:
        return not self.terms and not self.log_const

    def __add__(self, other: "GExpression") -> "GExpression":
        t = self.terms_dict()
        for k, v in other.terms:
            t[k] = t.get(k, Fraction(0)) + v
        c = self.log_const_dict()
        for k, v in other.log_const:
            c[k] = c.get(k, Fraction(0)) + v
        return GExpression.build(t, c)

    def __neg__(self) -> "GExpression":
        return self.scaled(-1)

    def __sub__(self, other: "GExpression") -> "GExpression":
        return self + (-other)

    def scaled(self, factor) -> "GExpression":
        f = Fraction(factor)
        return GExpression.build({k: v * f for k, v in self.terms},
                                 {k: v * f for k, v in self.log_const})

    def render(self) -> str:
        parts = [f"{v}*G({k})" for k, v in self.terms]
        parts += [f"{v}*log({k})" for k, v in self.log_const]
        return " + ".join(parts) if parts else "0"


def expr_from_spec(spec: ProductSpec) -> GExpression:
    """The exact logarithm of a +-1 Thue-Morse product as a GExpression.

    For start 1 this is sum_i m_i G(a_i); a start-0 spec first moves the
    n = 0 factor value into the log-constant part.
    """
    if spec.kind is not ExponentKind.PM_THUE:
        raise InputError(f"expr_from_spec expects kind pm-t, got {spec.kind.value}")
    cls = classify(spec.rational)
    if not cls.at_least_pm:
        raise InputError(f"divergent product: {cls.detail}")
    terms = {f.offset: Fraction(f.multiplicity) for f in spec.rational.factors}
    log_const: Dict[Fraction, Fraction] = {}
    if spec.start == 0:
        r0 = spec.rational.value_at(0)
        if r0 <= 0:
            raise InputError(f"R(0) = {r0} is not positive; cannot shift start")
        if r0 != 1:
            log_const[r0] = Fraction(1)
    return GExpression.build(terms, log_const)


# ---------------------------------------------------------------------------
# Reduction over the relation lattice
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReduceResult:
    """Outcome of a reduction attempt.

    ``reduced`` carries the closed form plus its prime-exponent map and
    the certificate (coefficients of the relation vectors r_x).  An
    irreducible outcome is a result, not an error: it means no
    combination exists within the searched depth.
    """

    status: str  # "reduced" | "irreducible"
    depth: int
    closed_form: Optional[ClosedForm] = None
    exponents: Optional[Dict[int, Fraction]] = None
    certificate: Dict[Fraction, Fraction] = field(default_factory=dict)
    residual: Optional[GExpression] = None

    @property
    def reduced(self) -> bool:
        return self.status == "reduced"


def _universe(points, depth: int, cap: int = 20000) -> List[Fraction]:
    """Points reachable by x -> 2x, 2x-1, x/2, (x+1)/2, up to ``depth``."""
    seen = set(points)
    frontier = list(points)
    for _ in range(depth):
        nxt = []
        for p in frontier:
            for q in (2 * p, 2 * p - 1, p / 2, (p + 1) / 2):
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
            if len(seen) > cap:
                return sorted(seen)
        if not nxt:
            break
        frontier = nxt
    return sorted(seen)


def _solve_relations(universe: List[Fraction],
                     target: Dict[Fraction, Fraction]) -> Optional[Dict[Fraction, Fraction]]:
    """Exact sparse elimination for sum_x lambda_x r_x = target.

    Relation points must satisfy x > -1 so that log(1+x) is real.
    Returns the lambda coefficients or None when the target is not in
    the span of the available relations.
    """
    relations: Dict[Fraction, Dict[Fraction, Fraction]] = {}
    for x in universe:
        if x <= -1:
            continue
        vec: Dict[Fraction, Fraction] = {}
        for point, coef in ((x / 2, Fraction(1)), ((x + 1) / 2, Fraction(-1)),
                            (x, Fraction(-1))):
            vec[point] = vec.get(point, Fraction(0)) + coef
        relations[x] = _clean(vec)

    rows: Dict[Fraction, Dict[Fraction, Fraction]] = {}
    rhs: Dict[Fraction, Fraction] = {}
    for x, vec in relations.items():
        for p, coef in vec.items():
            rows.setdefault(p, {})[x] = coef
    for p, coef in target.items():
        rhs[p] = coef
        rows.setdefault(p, {})
    for p in rows:
        rhs.setdefault(p, Fraction(0))

    var_rows: Dict[Fraction, set] = {}
    for p, row in rows.items():
        for x in row:
            var_rows.setdefault(x, set()).add(p)

    pivots: List[Tuple[Fraction, Fraction]] = []  # (point, variable)
    active = set(rows)
    while True:
        best = None
        for p in active:
            if rows[p]:
                key = (len(rows[p]), p)
                if best is None or key < best[0]:
                    best = (key, p)
            elif rhs[p]:
                return None  # inconsistent equation 0 = nonzero
        if best is None:
            break
        p = best[1]
        x = min(rows[p])
        c = rows[p][x]
        # normalize pivot row
        if c != 1:
            rows[p] = {k: v / c for k, v in rows[p].items()}
            rhs[p] /= c
        # eliminate x from the other rows
        for p2 in list(var_rows.get(x, ())):
            if p2 == p:
                continue
            factor = rows[p2].get(x)
            if factor is None:
                continue
            for k, v in rows[p].items():
                newv = rows[p2].get(k, Fraction(0)) - factor * v
                if newv:
                    rows[p2][k] = newv
                    var_rows.setdefault(k, set()).add(p2)
                else:
                    rows[p2].pop(k, None)
                    var_rows.get(k, set()).discard(p2)
            rhs[p2] -= factor * rhs[p]
        pivots.append((p, x))
        active.discard(p)
        var_rows.get(x, set()).discard(p)

    solution: Dict[Fraction, Fraction] = {}
    for p, x in reversed(pivots):
        value = rhs[p]
        for k, v in rows[p].items():
            if k != x:
                value -= v * solution.get(k, Fraction(0))
        solution[x] = value
    return {x: v for x, v in solution.items() if v}


def reduce(expr: GExpression, depth: int = DEFAULT_REDUCE_DEPTH) -> ReduceResult:
    """Reduce a GExpression to an exact constant, if possible.

    Searches relation universes of increasing depth (each one built from
    the expression's points by the four maps) and solves exactly for a
    combination of relation vectors matching the G-part.  On success the
    constant exp(sum lambda_x log(1+x) + log-const part) is returned as a
    canonical product of primes with rational exponents.
    """
    target = expr.terms_dict()
    points = list(target) or [Fraction(1)]
    solution = None
    used_depth = depth
    for d in range(0, depth + 1):
        solution = _solve_relations(_universe(points, d), target)
        if solution is not None:
            used_depth = d
            break
    if solution is None:
        return ReduceResult("irreducible", depth, residual=expr)

    exponents: Dict[int, Fraction] = {}

    def _accumulate(q: Fraction, coefficient: Fraction) -> None:
        for prime, e in _factorize(q.numerator).items():
            exponents[prime] = exponents.get(prime, Fraction(0)) + e * coefficient
        for prime, e in _factorize(q.denominator).items():
            exponents[prime] = exponents.get(prime, Fraction(0)) - e * coefficient

    for x, lam in solution.items():
        _accumulate(1 + x, lam)
    for q, coef in expr.log_const:
        _accumulate(q, coef)
    exponents = {p: e for p, e in exponents.items() if e}
    return ReduceResult("reduced", used_depth,
                        closed_form=power_product_form(exponents),
                        exponents=exponents, certificate=solution)


# ---------------------------------------------------------------------------
# Identity families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Identity:
    name: str
    spec: ProductSpec
    closed_form: ClosedForm
    provenance: str


def _not_negative_integer(name: str, x: Fraction) -> None:
    if x.denominator == 1 and x <= -1:
        raise InputError(f"{name} = {x} is a negative integer (excluded)")


def family(family_id: str, a, b=None) -> Identity:
    """Instantiate one of the four parametric product families.

    (i)  rational ((n+a)(2n+a+1)(2n+b)) / ((2n+a)(n+b)(2n+b+1)),
         constant (b+1)/(a+1);
    (ii) is (i) with b = a+1, constant (a+2)/(a+1);
    (iii) is (i) with b = 0 after cancellation, constant 1/(a+1);
    (iv) is (i) with b = 2a-1 after cancellation, constant 2a/(a+1),
         excluding a in {0, -1, -2, ...} and {-1/2, -3/2, ...}.
    All products run over n >= 1 with the +-1 Thue-Morse exponent.
    """
    a = Fraction(a)
    _not_negative_integer("a", a)
    if family_id == "i":
        if b is None:
            raise InputError("family (i) needs both a and b")
        b = Fraction(b)
        _not_negative_integer("b", b)
        constant = Fraction(b + 1, a + 1)
    elif family_id == "ii":
        if b is not None:
            raise InputError("family (ii) takes only a")
        b = a + 1
        constant = Fraction(a + 2, a + 1)
    elif family_id == "iii":
        if b is not None:
            raise InputError("family (iii) takes only a")
        b = Fraction(0)
        constant = Fraction(1, a + 1)
    elif family_id == "iv":
        if b is not None:
            raise InputError("family (iv) takes only a")
        if a == 0 or (a.denominator == 2 and a < 0):
            raise InputError(f"family (iv) excludes a = {a}")
        b = 2 * a - 1
        constant = Fraction(2 * a, a + 1)
    else:
        raise InputError(f"unknown family {family_id!r}; expected i, ii, iii, iv")
    _not_negative_integer("b", b)

    rational = FactoredRational.from_raw_factors([
        (1, a, 1), (2, a + 1, 1), (2, b, 1),
        (2, a, -1), (1, b, -1), (2, b + 1, -1),
    ])
    spec = ProductSpec(rational, ExponentKind.PM_THUE, 1)
    name = f"C2{family_id}(a={a})" if family_id != "i" else f"C2i(a={a},b={b})"
    return Identity(name, spec, Rat(constant),
                    f"binary-split family ({family_id}) instance")


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

def _entry(name: str, text: str, kind: ExponentKind, start: int,
           cf: ClosedForm, provenance: str) -> Identity:
    return Identity(name, ProductSpec(FactoredRational.parse(text), kind, start),
                    cf, provenance)


_SQRT2_OVER_2 = cf_pow(2, Fraction(-1, 2))


def catalog() -> List[Identity]:
    """The 18 verified identities, in canonical order."""
    t6_text = "4(n+2)(2n+1)^3(2n+3)^3/((n+3)(n+1)^2(4n+3)^4)"
    return [
        _entry("WR", "(2n+1)/(2n+2)", ExponentKind.PM_THUE, 0,
               _SQRT2_OVER_2,
               "Woods-Robbins product; square of family (ii) at a=0, "
               "shifted to start 0"),
        _entry("C3b", "(4n+1)/(4n+3)", ExponentKind.PM_THUE, 0,
               cf_rat(1, 2),
               "inverse of family (iii) at a=1/2, shifted to start 0"),
        _entry("C3c", "(2n-1)(4n+1)/((2n+1)(4n-1))", ExponentKind.PM_THUE, 1,
               cf_rat(2),
               "family (iii) at a=1/2 rewritten with shifted index"),
        _entry("C3d", "(n+1)(2n+1)/((n+2)(2n+3))", ExponentKind.PM_THUE, 0,
               cf_rat(1, 2),
               "family (i) at a=1, b=2, shifted to start 0 and multiplied "
               "by the squared Woods-Robbins product"),
        _entry("C3e", "(2n+2)(4n+3)/((2n+3)(4n+5))", ExponentKind.PM_THUE, 0,
               _SQRT2_OVER_2,
               "family (i) at a=1, b=3/2, shifted to start 0 and multiplied "
               "by the Woods-Robbins product"),
        _entry("C3f", "(n+1)(4n+5)/((n+2)(4n+3))", ExponentKind.PM_THUE, 0,
               cf_rat(1),
               "inverse of family (i) at a=2, b=3/2 after cancellation, "
               "shifted to start 0"),
        _entry("C3g", "(n+1)(2n+2)/((n+2)(2n+3))", ExponentKind.PM_THUE, 0,
               _SQRT2_OVER_2,
               "family (ii) at a=1 shifted to start 0 times Woods-Robbins; "
               "equals the product of entries e and f"),
        _entry("C3h", "(n+1)(4n+5)/((n+2)(4n+1))", ExponentKind.PM_THUE, 0,
               cf_rat(2),
               "entry f divided by entry b"),
        _entry("C3i", "(2n+2)(4n+1)/((2n+3)(4n+5))", ExponentKind.PM_THUE, 0,
               cf_pow(2, Fraction(-3, 2)),
               "entry g divided by entry h"),
        _entry("C3j", "(2n+1)(4n+1)/((2n+3)(4n+5))", ExponentKind.PM_THUE, 0,
               cf_rat(1, 4),
               "entry i times the Woods-Robbins product"),
        _entry("C3k", "(4n+1)(8n+7)/((4n+2)(8n+3))", ExponentKind.PM_THUE, 0,
               cf_rat(1),
               "inverse of family (iv) at a=3/4, shifted to start 0"),
        _entry("C3l", "(8n+1)(8n+7)/((8n+3)(8n+5))", ExponentKind.PM_THUE, 0,
               cf_rat(1, 2),
               "family (i) at a=3/4, b=1/4, shifted to start 0 and "
               "multiplied by entry b"),
        _entry("T5a", "(4n+1)(4n+4)/((4n+2)(4n+3))", ExponentKind.ZERO_ONE_THUE, 0,
               cf_mul(cf_pow(CF_PI, Fraction(3, 4)), cf_pow(2, Fraction(1, 2)),
                      cf_pow(CF_GAMMA_QUARTER, -1)),
               "0/1-exponent form of the even/odd split of Woods-Robbins; "
               "plain part telescopes to Gamma values"),
        _entry("T5b", "(n+1)(4n+5)/((n+2)(4n+1))", ExponentKind.ZERO_ONE_THUE, 0,
               cf_pow(2, Fraction(1, 2)),
               "0/1-exponent form of entry h; plain part telescopes to 4"),
        _entry("T5c", "(8n+1)(8n+7)/((8n+3)(8n+5))", ExponentKind.ZERO_ONE_THUE, 0,
               cf_pow(Sub(cf_mul(2, cf_pow(2, Fraction(1, 2))), cf_rat(2)),
                      Fraction(1, 2)),
               "0/1-exponent form of entry l; plain part telescopes to "
               "the tangent of pi/8 via reflection"),
        _entry("T6a", t6_text, ExponentKind.PM_RS, 0,
               cf_rat(1),
               "index-regrouping relation for the Rudin-Shapiro sign "
               "applied to (X+2)^2/((X+1)(X+3)); boundary 9/8 cancels "
               "against the n=0 factor 8/9"),
        _entry("T6b", t6_text, ExponentKind.ZERO_ONE_RS, 0,
               cf_mul(8, cf_pow(CF_PI, Fraction(1, 2)),
                      cf_pow(CF_GAMMA_QUARTER, -2)),
               "square root of the plain telescoped product (the 0/1 "
               "relation with the unit value of the +-1 form); the plain "
               "product equals 16 Gamma(3/4)^4/pi^3 = 8 sqrt(pi) "
               "(Gamma(3)Gamma(3/4)^4 over Gamma(2)Gamma(1/2)^3 "
               "Gamma(3/2)^3)"),
        _entry("GS", "(2n+1)^2/((n+1)(4n+1))", ExponentKind.PM_RS, 1,
               _SQRT2_OVER_2,
               "Golay-Shapiro signed product over n >= 1"),
    ]


_ALIASES = {"C3A": "WR", "C3a": "WR"}


def catalog_entry(name: str) -> Identity:
    wanted = _ALIASES.get(name, name)
    for identity in catalog():
        if identity.name.lower() == wanted.lower():
            return identity
    raise InputError(f"unknown catalog entry {name!r}")


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerifyReport:
    name: str
    computed: mpmath.mpf
    expected: mpmath.mpf
    abs_error: mpmath.mpf
    passed: bool
    tolerance: mpmath.mpf
    error_estimate: mpmath.mpf
    symbolic_match: Optional[bool]  # None when no symbolic route applies


def verify(identity: Identity, opts: EvalOptions = EvalOptions(),
           tolerance: Optional[float] = None,
           symbolic: bool = True) -> VerifyReport:
    """Numerically verify one identity, and symbolically when possible.

    Pass criterion: |computed - expected| <= max(tolerance, combined
    error estimates), with the tolerance defaulting to ten times the
    combined estimate.  For +-1 Thue-Morse entries whose constant is a
    rational power product, the reduction engine must also recover the
    constant exactly.
    """
    result = eval_product(identity.spec, opts)
    with mpmath.workdps(working_dps(opts.precision)):
        expected = eval_closed_form(identity.closed_form, opts.precision)
        abs_error = abs(result.value - expected)
        combined = result.error_estimate + abs(expected) * mpmath.mpf(10) ** (
            -opts.precision + 2)
        tol = mpmath.mpf(tolerance) if tolerance is not None else 10 * combined
        passed = bool(abs_error <= max(tol, combined))

    symbolic_match: Optional[bool] = None
    if symbolic and identity.spec.kind is ExponentKind.PM_THUE:
        expected_exponents = power_product_exponents(identity.closed_form)
        if expected_exponents is not None:
            outcome = reduce(expr_from_spec(identity.spec))
            symbolic_match = bool(outcome.reduced
                                  and outcome.exponents == expected_exponents)
            passed = passed and symbolic_match
    return VerifyReport(identity.name, result.value, expected, abs_error,
                        passed, tol, result.error_estimate, symbolic_match)


def verify_all(opts: EvalOptions = EvalOptions(),
               tolerance: Optional[float] = None) -> List[VerifyReport]:
    return [verify(identity, opts, tolerance) for identity in catalog()]
