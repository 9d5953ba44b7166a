"""Exact factored rational functions R(n) = s * prod_i (n + a_i)^{m_i}.

Offsets a_i are exact rationals, multiplicities m_i nonzero integers
(positive factors belong to the numerator, negative to the denominator),
and the scale s is a positive rational.  Values are immutable after
construction and the factor list is kept sorted by offset, so equal
rationals compare and hash equal.

Everything here is exact; the only numerical operation is ``log_term``,
which defers to mpmath at a requested decimal precision.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Tuple, Union

import mpmath

from .errors import EvaluationError, InputError, ParseError

RationalLike = Union[int, Fraction]


@dataclass(frozen=True)
class AffineFactor:
    """One monic factor (n + offset)^multiplicity."""

    offset: Fraction
    multiplicity: int


@dataclass(frozen=True)
class FactoredRational:
    """Canonical product s * prod (n + a_i)^{m_i} with distinct sorted offsets."""

    scale: Fraction
    factors: Tuple[AffineFactor, ...]

    # -- construction -------------------------------------------------

    @staticmethod
    def from_offsets(offsets: dict, scale: RationalLike = 1) -> "FactoredRational":
        """Build from {offset: multiplicity}; zero multiplicities are dropped."""
        s = Fraction(scale)
        if s <= 0:
            raise InputError(f"scale must be positive, got {s}")
        items = []
        for a, m in offsets.items():
            if m:
                items.append(AffineFactor(Fraction(a), int(m)))
        items.sort(key=lambda f: f.offset)
        return FactoredRational(s, tuple(items))

    @staticmethod
    def from_raw_factors(raw: Iterable[Tuple[RationalLike, RationalLike, int]],
                         scale: RationalLike = 1) -> "FactoredRational":
        """Normalize a list of (c, d, m) meaning (c*n + d)^m.

        Each leading coefficient c must be positive and each multiplicity
        nonzero.  The monic form contributes c^m to the scale and offset
        d/c; duplicate offsets merge by summing multiplicities.
        """
        s = Fraction(scale)
        offsets: dict = {}
        for c, d, m in raw:
            c = Fraction(c)
            d = Fraction(d)
            m = int(m)
            if c <= 0:
                raise InputError(f"leading coefficient must be positive, got {c}")
            if m == 0:
                raise InputError("factor multiplicity must be nonzero")
            s *= c ** m
            a = d / c
            offsets[a] = offsets.get(a, 0) + m
        return FactoredRational.from_offsets(offsets, s)

    @staticmethod
    def one() -> "FactoredRational":
        return FactoredRational(Fraction(1), ())

    @staticmethod
    def parse(text: str) -> "FactoredRational":
        return _parse(text)

    # -- basic queries -------------------------------------------------

    @property
    def is_one(self) -> bool:
        return not self.factors and self.scale == 1

    def offset_dict(self) -> dict:
        return {f.offset: f.multiplicity for f in self.factors}

    def degree_sum(self) -> int:
        """Net degree (numerator degree minus denominator degree)."""
        return sum(f.multiplicity for f in self.factors)

    def power_sum(self, j: int) -> Fraction:
        """Exact power sum p_j = sum_i m_i * a_i^j."""
        return sum((Fraction(f.offset) ** j * f.multiplicity for f in self.factors),
                   Fraction(0))

    def max_abs_offset(self) -> Fraction:
        if not self.factors:
            return Fraction(0)
        return max(abs(f.offset) for f in self.factors)

    def value_at(self, n: RationalLike) -> Fraction:
        """Exact value R(n); raises EvaluationError at a pole."""
        n = Fraction(n)
        value = self.scale
        for f in self.factors:
            base = n + f.offset
            if base == 0:
                if f.multiplicity < 0:
                    raise EvaluationError(f"pole of R at n = {n}")
                return Fraction(0)
            value *= base ** f.multiplicity
        return value

    # -- algebra -------------------------------------------------------

    def __mul__(self, other: "FactoredRational") -> "FactoredRational":
        offsets = self.offset_dict()
        for a, m in other.offset_dict().items():
            offsets[a] = offsets.get(a, 0) + m
        return FactoredRational.from_offsets(offsets, self.scale * other.scale)

    def __truediv__(self, other: "FactoredRational") -> "FactoredRational":
        return self * other ** -1

    def __pow__(self, k: int) -> "FactoredRational":
        if not isinstance(k, int):
            return NotImplemented
        offsets = {a: m * k for a, m in self.offset_dict().items()}
        return FactoredRational.from_offsets(offsets, self.scale ** k)

    def compose_linear(self, c: int, d: int) -> "FactoredRational":
        """The rational n -> R(c*n + d) in canonical form (c > 0)."""
        if c <= 0:
            raise InputError(f"composition coefficient must be positive, got {c}")
        offsets = {}
        for f in self.factors:
            a = (d + f.offset) / c
            offsets[a] = offsets.get(a, 0) + f.multiplicity
        scale = self.scale * Fraction(c) ** self.degree_sum()
        return FactoredRational.from_offsets(offsets, scale)

    # -- rendering -------------------------------------------------------

    def render(self) -> str:
        """Canonical factor-expression string; parse(render(R)) == R."""
        num_parts = []
        den_parts = []
        # integer-coefficient linears: (n + p/q)^m is emitted as (qn+p)^m,
        # which multiplies the expression by q^m; compensate in the scale
        comp = Fraction(1)
        for f in self.factors:
            q = f.offset.denominator
            p = f.offset.numerator
            comp *= Fraction(q) ** f.multiplicity
            if q == 1:
                if p == 0:
                    body = "n"
                elif p > 0:
                    body = f"n+{p}"
                else:
                    body = f"n-{-p}"
            else:
                if p == 0:
                    body = f"{q}n"
                elif p > 0:
                    body = f"{q}n+{p}"
                else:
                    body = f"{q}n-{-p}"
            mult = abs(f.multiplicity)
            part = f"({body})" + (f"^{mult}" if mult != 1 else "")
            (num_parts if f.multiplicity > 0 else den_parts).append(part)
        emitted_scale = self.scale / comp
        u, v = emitted_scale.numerator, emitted_scale.denominator
        if u != 1 or not num_parts:
            num_parts.insert(0, str(u))
        if v != 1:
            den_parts.insert(0, str(v))
        num = "".join(num_parts)
        if not den_parts:
            return num
        if len(den_parts) == 1:
            return f"{num}/{den_parts[0]}"
        return f"{num}/({''.join(den_parts)})"


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(\d+|[n()^+/*-])")


class _Parser:
    """Recursive-descent parser for the factor-expression grammar.

    product := term { term } [ "/" "(" term { term } ")" | "/" term ]
    term    := [ integer ] "(" linear ")" [ "^" integer ] | integer
    linear  := [ integer ] "n" [ ("+"|"-") rational ] | rational
    rational:= integer [ "/" integer ]
    """

    def __init__(self, text: str):
        self.text = text.replace("−", "-")
        self.tokens = []
        pos = 0
        while pos < len(self.text):
            m = _TOKEN_RE.match(self.text, pos)
            if not m:
                raise ParseError(f"unexpected character {self.text[pos]!r}", pos)
            self.tokens.append((m.group(1), m.start(1)))
            pos = m.end()
        self.i = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        if self.i < len(self.tokens):
            return self.tokens[self.i][1]
        return len(self.text)

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression", self.pos())
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise ParseError(f"expected {tok!r}, found {got!r}", self.tokens[self.i - 1][1])

    def parse_integer(self) -> int:
        sign = 1
        if self.peek() == "-":
            self.next()
            sign = -1
        tok = self.next()
        if not tok.isdigit():
            raise ParseError(f"expected integer, found {tok!r}", self.tokens[self.i - 1][1])
        return sign * int(tok)

    def parse_rational(self) -> Fraction:
        num = self.parse_integer()
        if self.peek() == "/" and self.i + 1 < len(self.tokens) and self.tokens[self.i + 1][0].isdigit():
            # only a rational if a digit follows; a trailing "/" starts the denominator
            save = self.i
            self.next()
            den = self.parse_integer()
            if den == 0:
                self.i = save
                raise ParseError("zero denominator in rational", self.tokens[save][1])
            return Fraction(num, den)
        return Fraction(num)

    def parse_linear(self) -> Tuple[Fraction, Fraction]:
        """Returns (c, d) for c*n + d; c == 0 means the constant d."""
        at = self.pos()
        c = Fraction(0)
        d = Fraction(0)
        if self.peek() == "n":
            self.next()
            c = Fraction(1)
        elif self.peek() is not None and (self.peek().isdigit() or self.peek() == "-"):
            value = self.parse_rational()
            if self.peek() == "n":
                self.next()
                if value.denominator != 1:
                    raise ParseError("coefficient of n must be an integer", at)
                c = value
            else:
                return Fraction(0), value
        else:
            raise ParseError("expected linear expression", at)
        if self.peek() in ("+", "-"):
            sign = 1 if self.next() == "+" else -1
            d = sign * self.parse_rational()
        return c, d

    def parse_term(self):
        """Returns ('scale', Fraction) or ('factor', c, d, mult)."""
        tok = self.peek()
        at = self.pos()
        if tok is not None and tok.isdigit():
            # standalone terms are integers; rationals occur only in linears
            value = Fraction(self.parse_integer())
            return ("scale", value)
        if tok == "(":
            self.next()
            c, d = self.parse_linear()
            self.expect(")")
            mult = 1
            if self.peek() == "^":
                self.next()
                mult = self.parse_integer()
                if mult == 0:
                    raise ParseError("zero exponent is not allowed", at)
            if c == 0:
                return ("scale", d ** mult)
            return ("factor", c, d, mult)
        raise ParseError(f"expected term, found {tok!r}", at)

    def parse_term_sequence(self):
        terms = [self.parse_term()]
        while self.peek() is not None and (self.peek().isdigit() or self.peek() == "("):
            terms.append(self.parse_term())
        return terms

    def parse_product(self):
        num_terms = self.parse_term_sequence()
        den_terms = []
        if self.peek() == "/":
            self.next()
            if self.peek() == "(":
                # try a parenthesized group of terms; fall back to one term
                save = self.i
                try:
                    self.next()
                    den_terms = self.parse_term_sequence()
                    self.expect(")")
                except ParseError:
                    self.i = save
                    den_terms = [self.parse_term()]
            else:
                den_terms = [self.parse_term()]
        if self.peek() is not None:
            raise ParseError(f"unexpected trailing token {self.peek()!r}", self.pos())
        return num_terms, den_terms


def _parse(text: str) -> FactoredRational:
    num_terms, den_terms = _Parser(text).parse_product()
    scale = Fraction(1)
    raw = []
    for sign, terms in ((1, num_terms), (-1, den_terms)):
        for term in terms:
            if term[0] == "scale":
                value = term[1] ** sign
                if value <= 0:
                    raise InputError(f"scale contribution must be positive, got {term[1]}")
                scale *= value
            else:
                _, c, d, mult = term
                raw.append((c, d, sign * mult))
    return FactoredRational.from_raw_factors(raw, scale)


# ---------------------------------------------------------------------------
# Convergence classification
# ---------------------------------------------------------------------------

class ConvergenceTag(Enum):
    DIVERGENT = "divergent"
    PM_CONVERGENT = "pm-convergent"
    FULLY_CONVERGENT = "fully-convergent"


@dataclass(frozen=True)
class ConvergenceClass:
    tag: ConvergenceTag
    detail: str

    @property
    def at_least_pm(self) -> bool:
        return self.tag is not ConvergenceTag.DIVERGENT

    @property
    def fully(self) -> bool:
        return self.tag is ConvergenceTag.FULLY_CONVERGENT


def classify(r: FactoredRational) -> ConvergenceClass:
    """Convergence class of the products built on R.

    The +-1 Thue-Morse product over R converges exactly when numerator and
    denominator share degree and leading coefficient (net degree 0 and
    scale 1 in canonical form).  The plain and 0/1-exponent products need
    in addition the same sum of roots, i.e. sum_i m_i a_i = 0.
    """
    deg = r.degree_sum()
    if deg != 0:
        return ConvergenceClass(
            ConvergenceTag.DIVERGENT,
            f"numerator and denominator degrees differ (net degree {deg})")
    if r.scale != 1:
        return ConvergenceClass(
            ConvergenceTag.DIVERGENT,
            f"numerator and denominator leading coefficients differ "
            f"(net scale {r.scale})")
    s1 = r.power_sum(1)
    if s1 != 0:
        return ConvergenceClass(
            ConvergenceTag.PM_CONVERGENT,
            f"root sums differ (sum of m_i*a_i = {s1}); "
            f"only the +-1 exponent products converge")
    return ConvergenceClass(ConvergenceTag.FULLY_CONVERGENT,
                            "balanced with equal root sums")


def pole_check(r: FactoredRational, start: int) -> Optional[int]:
    """Smallest integer n >= start at which some factor n + a_i vanishes."""
    hits = []
    for f in r.factors:
        if f.offset.denominator == 1 and -f.offset >= start:
            hits.append(int(-f.offset))
    return min(hits) if hits else None


def positivity_check(r: FactoredRational, start: int) -> None:
    """Raise EvaluationError unless R(n) > 0 for every integer n >= start.

    Only finitely many n can fail: past n > max(-a_i) every factor is
    positive, so exact checks up to that bound decide the whole range.
    """
    if pole_check(r, start) is not None:
        raise EvaluationError(
            f"factor vanishes at n = {pole_check(r, start)} (n >= {start})")
    bound = start
    for f in r.factors:
        bound = max(bound, int(math.ceil(-f.offset)) + 1)
    for n in range(start, bound + 1):
        if r.value_at(n) <= 0:
            raise EvaluationError(f"R({n}) = {r.value_at(n)} is not positive; "
                                  f"real logarithms require R(n) > 0 for n >= {start}")


def log_term(r: FactoredRational, n: int, precision: int = 60) -> mpmath.mpf:
    """log R(n) to ``precision`` decimal digits (requires R(n) > 0)."""
    value = r.value_at(n)
    if value <= 0:
        raise EvaluationError(f"log of nonpositive value R({n}) = {value}")
    with mpmath.workdps(precision + 10):
        return mpmath.log(mpmath.mpf(value.numerator)) - \
            mpmath.log(mpmath.mpf(value.denominator))


# ---------------------------------------------------------------------------
# Split operators
# ---------------------------------------------------------------------------

def dyadic_split(r: FactoredRational, start: int) -> Tuple[FactoredRational, Fraction]:
    """Split a +-1 Thue-Morse product over even and odd indices.

    Exact identity, using the sign flips t_{2n} = t_n and t_{2n+1} = 1 - t_n:

        prod_{n>=start} R(n)^{(-1)^{t_n}}
            = boundary * prod_{n>=1} (R(2n)/R(2n+1))^{(-1)^{t_n}}

    with boundary = 1/R(1) for start 1 and boundary = R(0)/R(1) for
    start 0.  Each factor (n+a)^m maps to (n + a/2)^m (n + (1+a)/2)^{-m},
    so the log-term decay order increases by one.
    """
    if start not in (0, 1):
        raise InputError(f"start index must be 0 or 1, got {start}")
    cls = classify(r)
    if not cls.at_least_pm:
        raise InputError(f"dyadic split requires a convergent product: {cls.detail}")
    split = r.compose_linear(2, 0) / r.compose_linear(2, 1)
    r1 = r.value_at(1)
    if r1 == 0:
        raise EvaluationError("R(1) = 0; boundary term undefined")
    boundary = 1 / r1
    if start == 0:
        r0 = r.value_at(0)
        if r0 == 0:
            raise EvaluationError("R(0) = 0; boundary term undefined")
        boundary *= r0
    if pole_check(split, 1) is not None:
        raise EvaluationError("split rational has a factor vanishing at n >= 1")
    return split, boundary


def rs_split_rational(r: FactoredRational) -> FactoredRational:
    """The rational n -> R(2n) R(4n+1)^2 / R(2n+1) (see rs_split)."""
    split = (r.compose_linear(2, 0) * r.compose_linear(4, 1) ** 2
             / r.compose_linear(2, 1))
    if pole_check(split, 1) is not None:
        raise EvaluationError("split rational has a factor vanishing at n >= 1")
    return split


def rs_split(r: FactoredRational) -> Tuple[FactoredRational, Fraction]:
    """Split a +-1 Rudin-Shapiro product using the recursion of v_n.

    Exact identity for products over n >= 1, from regrouping the indices
    as {2n} u {4n+1} u {4n+3} and using v_{2n} = v_n, v_{4n+1} = v_n,
    v_{4n+3} = 1 - v_{2n+1}:

        prod_{n>=1} R(n)^{(-1)^{v_n}}
            = R(1) * prod_{n>=1} (R(2n) R(4n+1)^2 / R(2n+1))^{(-1)^{v_n}}

    The slow 1/n component of log R halves at each application while the
    net degree and scale stay balanced.  The exact boundary R(1) grows
    enormous after repeated splits (multiplicities scale by four per
    level); iterated use should accumulate its logarithm instead.
    """
    cls = classify(r)
    if not cls.at_least_pm:
        raise InputError(f"rs split requires a convergent product: {cls.detail}")
    split = rs_split_rational(r)
    boundary = r.value_at(1)
    if boundary == 0:
        raise EvaluationError("R(1) = 0; boundary term undefined")
    return split, boundary
