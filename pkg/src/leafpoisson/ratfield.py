"""Exact sparse arithmetic over a fixed coordinate chart.

Coefficient layer for the whole library: multivariate polynomials with
exact rational coefficients stored as sparse exponent maps, and reduced
fractions of those polynomials.  Everything downstream (multivectors,
brackets, solvers) keeps its coefficients in these types, so algebraic
identities are decided exactly instead of within a tolerance.

Two facts the rest of the code relies on:

* a fraction is zero iff its numerator has no terms, and
* equality of fractions is decided by cross multiplication,

so neither test depends on how far a fraction happens to be reduced.
Reduction itself (gcd cancellation) is a normalization pass kept for
size control; polynomial gcds are delegated to sympy's sparse rings
after a few cheap shortcuts.

Rational coefficients are gmpy2.mpq when available, with a
fractions.Fraction fallback; both expose numerator/denominator and exact
field arithmetic.
"""

from __future__ import annotations

import math
import re
from functools import lru_cache

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

from .chart import ChartSpec
from .errors import (
    ChartMismatchError,
    ParseError,
    SingularRestrictionError,
    UsageError,
)

Exponent = tuple[int, ...]

_Q_ZERO = Q(0)
_Q_ONE = Q(1)


def rational(value) -> Q:
    """Coerce ints, strings like "3/4", Fractions and Q values to Q."""
    if isinstance(value, float):
        raise UsageError("floating point coefficients are not allowed")
    try:
        return Q(value)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"not a rational value: {value!r}") from exc


def _grlex(exp: Exponent):
    return (sum(exp), exp)


class Poly:
    """Sparse multivariate polynomial over a chart.

    ``terms`` maps exponent tuples (one slot per chart variable, leaf
    variables first) to nonzero rationals; the zero polynomial is the
    empty map.  Instances are never mutated after construction.
    """

    __slots__ = ("chart", "terms")

    def __init__(self, chart: ChartSpec, terms=None):
        dim = chart.dim
        clean: dict[Exponent, Q] = {}
        if terms:
            for exp, coeff in terms.items():
                q = rational(coeff)
                if q == 0:
                    continue
                exp = tuple(exp)
                if len(exp) != dim or any(not isinstance(e, int) or e < 0 for e in exp):
                    raise UsageError(f"bad exponent vector {exp!r} for {chart}")
                clean[exp] = q
        self.chart = chart
        self.terms = clean

    @classmethod
    def _raw(cls, chart: ChartSpec, terms: dict) -> "Poly":
        # Trusted constructor: terms already canonical (no zeros, valid keys).
        p = object.__new__(cls)
        p.chart = chart
        p.terms = terms
        return p

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, chart: ChartSpec) -> "Poly":
        return cls._raw(chart, {})

    @classmethod
    def constant(cls, chart: ChartSpec, value) -> "Poly":
        q = rational(value)
        if q == 0:
            return cls.zero(chart)
        return cls._raw(chart, {(0,) * chart.dim: q})

    @classmethod
    def one(cls, chart: ChartSpec) -> "Poly":
        return cls.constant(chart, 1)

    @classmethod
    def variable(cls, chart: ChartSpec, index: int) -> "Poly":
        chart.check_index(index)
        exp = [0] * chart.dim
        exp[index] = 1
        return cls._raw(chart, {tuple(exp): _Q_ONE})

    @classmethod
    def monomial(cls, chart: ChartSpec, exp: Exponent, coeff=1) -> "Poly":
        return cls(chart, {tuple(exp): coeff})

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        if not self.terms:
            return True
        if len(self.terms) != 1:
            return False
        (exp,) = self.terms
        return not any(exp)

    def constant_value(self) -> Q:
        if not self.terms:
            return _Q_ZERO
        if not self.is_constant():
            raise UsageError(f"{self} is not constant")
        return next(iter(self.terms.values()))

    # -- ring operations ----------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Q)) or type(other).__name__ in ("mpq", "Fraction"):
            return Poly.constant(self.chart, other)
        return None

    def _check_chart(self, other: "Poly"):
        if other.chart != self.chart:
            raise ChartMismatchError(f"mixed charts {self.chart} and {other.chart}")

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_chart(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp)
            if s is None:
                out[exp] = c
            else:
                s = s + c
                if s == 0:
                    del out[exp]
                else:
                    out[exp] = s
        return Poly._raw(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.chart, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_chart(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.chart)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[Exponent, Q] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                exp = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(exp)
                out[exp] = c1 * c2 if s is None else s + c1 * c2
        return Poly._raw(self.chart, {e: c for e, c in out.items() if c != 0})

    __rmul__ = __mul__

    def scaled(self, q) -> "Poly":
        q = rational(q)
        if q == 0:
            return Poly.zero(self.chart)
        return Poly._raw(self.chart, {e: q * c for e, c in self.terms.items()})

    def __pow__(self, power: int):
        if not isinstance(power, int) or power < 0:
            raise UsageError("polynomial powers must be non-negative integers")
        result = Poly.one(self.chart)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base if power > 1 else base
            power >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    # -- calculus and grading ------------------------------------------

    def diff(self, index: int) -> "Poly":
        self.chart.check_index(index)
        out = {}
        for exp, c in self.terms.items():
            k = exp[index]
            if k:
                e2 = exp[:index] + (k - 1,) + exp[index + 1 :]
                out[e2] = c * k
        return Poly._raw(self.chart, out)

    def subs_y_zero(self) -> "Poly":
        cut = self.chart.leaf_dim
        out = {e: c for e, c in self.terms.items() if not any(e[cut:])}
        return Poly._raw(self.chart, out)

    def y_degree_of(self, exp: Exponent) -> int:
        return sum(exp[self.chart.leaf_dim :])

    def y_max_degree(self) -> int:
        if not self.terms:
            return 0
        return max(self.y_degree_of(e) for e in self.terms)

    def y_parts(self) -> dict[int, "Poly"]:
        """Split into parts homogeneous in the fiber variables."""
        parts: dict[int, dict] = {}
        for exp, c in self.terms.items():
            parts.setdefault(self.y_degree_of(exp), {})[exp] = c
        return {d: Poly._raw(self.chart, t) for d, t in sorted(parts.items())}

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    # -- normal form helpers -------------------------------------------

    def lead_exponent(self) -> Exponent:
        if not self.terms:
            raise UsageError("zero polynomial has no leading term")
        return max(self.terms, key=_grlex)

    def lead_coeff(self) -> Q:
        return self.terms[self.lead_exponent()]

    def content(self) -> Q:
        """Positive rational c with self/c integer-primitive."""
        if not self.terms:
            raise UsageError("zero polynomial has no content")
        gnum = 0
        lden = 1
        for c in self.terms.values():
            num = abs(int(c.numerator))
            den = int(c.denominator)
            gnum = math.gcd(gnum, num)
            lden = lden * den // math.gcd(lden, den)
        return Q(gnum, lden)

    def monomial_gcd(self) -> Exponent:
        it = iter(self.terms)
        low = list(next(it))
        for exp in it:
            for i, e in enumerate(exp):
                if e < low[i]:
                    low[i] = e
        return tuple(low)

    def shift_down(self, mono: Exponent) -> "Poly":
        if not any(mono):
            return self
        out = {tuple(a - b for a, b in zip(e, mono)): c for e, c in self.terms.items()}
        return Poly._raw(self.chart, out)

    def exact_div(self, divisor: "Poly"):
        """Quotient self/divisor when the division is exact, else None."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return Poly.zero(self.chart)
        if divisor.is_constant():
            return self.scaled(_Q_ONE / divisor.constant_value())
        self._check_chart(divisor)
        d_exp = divisor.lead_exponent()
        d_coeff = divisor.terms[d_exp]
        rem = dict(self.terms)
        out: dict[Exponent, Q] = {}
        while rem:
            exp = max(rem, key=_grlex)
            if any(e < d for e, d in zip(exp, d_exp)):
                return None
            q_exp = tuple(e - d for e, d in zip(exp, d_exp))
            q_c = rem[exp] / d_coeff
            out[q_exp] = q_c
            for e2, c2 in divisor.terms.items():
                ee = tuple(a + b for a, b in zip(e2, q_exp))
                s = rem.get(ee, _Q_ZERO) - q_c * c2
                if s == 0:
                    rem.pop(ee, None)
                else:
                    rem[ee] = s
        return Poly._raw(self.chart, out)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


# -- gcd ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _sym_ring(dim: int):
    from sympy.polys.domains import QQ
    from sympy.polys.rings import ring

    R, *_ = ring([f"v{i}" for i in range(dim)], QQ)
    return R, QQ


_EVAL_BASE = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@lru_cache(maxsize=None)
def _eval_points(dim: int) -> tuple[tuple[int, ...], ...]:
    first = tuple(_EVAL_BASE[i % len(_EVAL_BASE)] for i in range(dim))
    second = tuple(_EVAL_BASE[(2 * i + 3) % len(_EVAL_BASE)] for i in range(dim))
    return first, second


def _int_eval(p: Poly, point: tuple[int, ...]) -> int:
    # value of the primitive integer version of p: any common polynomial
    # factor of two polys divides both such values (Gauss's lemma)
    val = _Q_ZERO
    for exp, c in p.terms.items():
        m = 1
        for x, e in zip(point, exp):
            if e:
                m *= x**e
        val += c * m
    val = val / p.content()
    return int(val.numerator)


def _probably_coprime(a: Poly, b: Poly) -> bool:
    """Cheap screen used before reduction-only gcds.

    A common factor divides both primitive integer evaluations, so an
    integer gcd of 1 at a test point means any common factor takes the
    value +-1 there, which almost never happens for a genuine factor.
    A wrong True merely skips an optional reduction; correctness of the
    fraction arithmetic never depends on it.
    """
    for point in _eval_points(a.chart.dim):
        ea = _int_eval(a, point)
        eb = _int_eval(b, point)
        if ea and eb and math.gcd(ea, eb) == 1:
            return True
    return False


def _primitive_positive(p: Poly) -> Poly:
    c = p.content()
    if p.lead_coeff() < 0:
        c = -c
    if c == 1:
        return p
    return p.scaled(_Q_ONE / c)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Primitive gcd with positive leading coefficient (grlex order).

    Content is ignored: the result of gcd on nonzero inputs always has
    integer coprime coefficients, so cancelling it from a fraction
    leaves the content normalization to the fraction itself.
    """
    if a.is_zero():
        return Poly.one(a.chart) if b.is_zero() else _primitive_positive(b)
    if b.is_zero():
        return _primitive_positive(a)
    a._check_chart(b)
    chart = a.chart
    if a.is_constant() or b.is_constant():
        return Poly.one(chart)
    if a.terms.keys() == b.terms.keys() and a == b.scaled(a.lead_coeff() / b.lead_coeff()):
        return _primitive_positive(a)
    if len(a.terms) == 1 or len(b.terms) == 1:
        mono = tuple(min(x, y) for x, y in zip(a.monomial_gcd(), b.monomial_gcd()))
        return Poly.monomial(chart, mono) if any(mono) else Poly.one(chart)
    # common monomial factor first, it is free and helps the shortcuts
    mono = tuple(min(x, y) for x, y in zip(a.monomial_gcd(), b.monomial_gcd()))
    if any(mono):
        shell = poly_gcd(a.shift_down(mono), b.shift_down(mono))
        return shell * Poly.monomial(chart, mono)
    if a.exact_div(b) is not None:
        return _primitive_positive(b)
    if b.exact_div(a) is not None:
        return _primitive_positive(a)
    R, QQ = _sym_ring(chart.dim)
    sa = R.from_dict({e: QQ(int(c.numerator), int(c.denominator)) for e, c in a.terms.items()})
    sb = R.from_dict({e: QQ(int(c.numerator), int(c.denominator)) for e, c in b.terms.items()})
    sg = sa.gcd(sb)
    g = Poly._raw(
        chart,
        {tuple(e): Q(int(c.numerator), int(c.denominator)) for e, c in sg.items()},
    )
    if g.is_constant():
        return Poly.one(chart)
    return _primitive_positive(g)


def _reduction_gcd(p: Poly, q: Poly) -> Poly:
    """gcd for cancellation in fraction arithmetic.

    Screened by _probably_coprime, so it may miss a common factor (the
    fraction then stays unreduced, which is harmless); whatever it
    returns does divide both arguments.
    """
    if p.is_constant() or q.is_constant():
        return Poly.one(p.chart)
    if _probably_coprime(p, q):
        return Poly.one(p.chart)
    return poly_gcd(p, q)


# -- rational functions -------------------------------------------------


class RatFunc:
    """Fraction num/den of chart polynomials.

    The constructor normalizes: den has integer coprime coefficients
    with positive leading coefficient in graded lex order (x before y),
    a constant den is folded to 1, and common factors are cancelled
    (a cheap coprimality screen may occasionally leave a reducible pair
    in place).  Zero testing (num empty) and equality (cross
    multiplication) are exact regardless of reduction.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, _reduced: bool = False):
        if den is None:
            den = Poly.one(num.chart)
        if not isinstance(num, Poly) or not isinstance(den, Poly):
            raise UsageError("RatFunc expects Poly numerator and denominator")
        num._check_chart(den)
        if den.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        if num.is_zero():
            self.num = num
            self.den = Poly.one(num.chart)
            return
        if not _reduced:
            mono = tuple(
                min(x, y) for x, y in zip(num.monomial_gcd(), den.monomial_gcd())
            )
            if any(mono):
                num = num.shift_down(mono)
                den = den.shift_down(mono)
            if not den.is_constant():
                g = _reduction_gcd(num, den)
                if not g.is_constant():
                    num = num.exact_div(g)
                    den = den.exact_div(g)
        if den.is_constant():
            c = den.constant_value()
            self.num = num if c == 1 else num.scaled(_Q_ONE / c)
            self.den = Poly.one(num.chart)
            return
        c = den.content()
        if den.lead_coeff() < 0:
            c = -c
        if c != 1:
            num = num.scaled(_Q_ONE / c)
            den = den.scaled(_Q_ONE / c)
        self.num = num
        self.den = den

    # -- constructors ---------------------------------------------------

    @classmethod
    def _make(cls, num: Poly, den: Poly, reduced: bool) -> "RatFunc":
        return cls(num, den, _reduced=reduced)

    @classmethod
    def zero(cls, chart: ChartSpec) -> "RatFunc":
        return cls(Poly.zero(chart))

    @classmethod
    def one(cls, chart: ChartSpec) -> "RatFunc":
        return cls(Poly.one(chart))

    @classmethod
    def constant(cls, chart: ChartSpec, value) -> "RatFunc":
        return cls(Poly.constant(chart, value))

    @classmethod
    def variable(cls, chart: ChartSpec, index: int) -> "RatFunc":
        return cls(Poly.variable(chart, index))

    @classmethod
    def of(cls, chart: ChartSpec, value) -> "RatFunc":
        if isinstance(value, RatFunc):
            if value.chart != chart:
                raise ChartMismatchError(f"mixed charts {chart} and {value.chart}")
            return value
        if isinstance(value, Poly):
            if value.chart != chart:
                raise ChartMismatchError(f"mixed charts {chart} and {value.chart}")
            return cls(value)
        return cls.constant(chart, value)

    # -- views ----------------------------------------------------------

    @property
    def chart(self) -> ChartSpec:
        return self.num.chart

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise UsageError(f"{self} is not a polynomial")
        return self.num

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Q:
        return self.num.constant_value() / self.den.constant_value()

    def y_in_denominator(self) -> bool:
        return self.den.y_max_degree() > 0

    # -- field operations -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        if isinstance(other, (int, Q)) or type(other).__name__ in ("mpq", "Fraction"):
            return RatFunc.constant(self.chart, other)
        return None

    def _check_chart(self, other: "RatFunc"):
        if other.chart != self.chart:
            raise ChartMismatchError(f"mixed charts {self.chart} and {other.chart}")

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_chart(other)
        a, b = self.num, self.den
        c, d = other.num, other.den
        if b.is_constant() and d.is_constant():
            return RatFunc._make(a + c, Poly.one(self.chart), True)
        g0 = _reduction_gcd(b, d)
        if g0.is_constant():
            return RatFunc._make(a * d + c * b, b * d, True)
        b1 = b.exact_div(g0)
        d1 = d.exact_div(g0)
        t = a * d1 + c * b1
        if t.is_zero():
            return RatFunc.zero(self.chart)
        g1 = _reduction_gcd(t, g0)
        if g1.is_constant():
            return RatFunc._make(t, b1 * d, True)
        return RatFunc._make(t.exact_div(g1), b1 * d.exact_div(g1), True)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._make(-self.num, self.den, True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_chart(other)
        a, b = self.num, self.den
        c, d = other.num, other.den
        if a.is_zero() or c.is_zero():
            return RatFunc.zero(self.chart)
        if b.is_constant() and d.is_constant():
            return RatFunc._make(a * c, Poly.one(self.chart), True)
        g1 = _reduction_gcd(a, d)
        if not g1.is_constant():
            a = a.exact_div(g1)
            d = d.exact_div(g1)
        g2 = _reduction_gcd(c, b)
        if not g2.is_constant():
            c = c.exact_div(g2)
            b = b.exact_div(g2)
        return RatFunc._make(a * c, b * d, True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return self * RatFunc._make(other.den, other.num, True)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def scaled(self, q) -> "RatFunc":
        q = rational(q)
        if q == 0:
            return RatFunc.zero(self.chart)
        return RatFunc._make(self.num.scaled(q), self.den, True)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.chart != other.chart:
            return False
        return self.num * other.den == other.num * self.den

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    # -- calculus ---------------------------------------------------------

    def diff(self, index: int) -> "RatFunc":
        """Exact partial derivative (quotient rule when needed)."""
        p, q = self.num, self.den
        dp = p.diff(index)
        if q.is_constant():
            return RatFunc._make(dp, q, True)
        dq = q.diff(index)
        if dq.is_zero():
            # den untouched by this variable; dp may share factors with it
            return RatFunc(dp, q)
        g = _reduction_gcd(q, dq)
        if g.is_constant():
            # gcd(q, q') constant forces the quotient-rule result reduced
            return RatFunc._make(dp * q - p * dq, q * q, True)
        qhat = q.exact_div(g)
        t = dp * qhat - p * dq.exact_div(g)
        return RatFunc(t, qhat * q)

    def evaluate_on_leaf(self) -> "RatFunc":
        """Restrict to the leaf y = 0; error if the denominator dies there."""
        n0 = self.num.subs_y_zero()
        d0 = self.den.subs_y_zero()
        if d0.is_zero():
            raise SingularRestrictionError(
                f"denominator of {self} vanishes identically on the leaf y = 0"
            )
        return RatFunc(n0, d0)

    def y_parts(self) -> dict[int, "RatFunc"]:
        """Fiber-degree split; requires a denominator free of y."""
        if self.y_in_denominator():
            from .errors import NonPolynomialJetError

            raise NonPolynomialJetError(
                f"{self} has fiber variables in its denominator"
            )
        return {
            d: RatFunc._make(part, self.den, True)
            for d, part in self.num.y_parts().items()
        }

    def __str__(self):
        return format_ratfunc(self)

    def __repr__(self):
        return f"RatFunc({format_ratfunc(self)!r})"


# -- text format ---------------------------------------------------------

_TOKEN_RE = re.compile(r"(\d+)|([xy]\d+)|(\*\*)|([-+*/^()])|(\S)")


def _q_str(q) -> str:
    return str(q)


def format_poly(p: Poly) -> str:
    """Render with terms in decreasing graded lex order, e.g. ``y3 - 2*x1*y1^2``."""
    if p.is_zero():
        return "0"
    chart = p.chart
    pieces = []
    for exp in sorted(p.terms, key=_grlex, reverse=True):
        c = p.terms[exp]
        factors = []
        for i, e in enumerate(exp):
            if e == 1:
                factors.append(chart.var_name(i))
            elif e > 1:
                factors.append(f"{chart.var_name(i)}^{e}")
        if not factors:
            body = _q_str(abs(c))
        elif abs(c) == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_q_str(abs(c))] + factors)
        pieces.append(("- " if c < 0 else "+ ") + body)
    head = pieces[0]
    head = "-" + head[2:] if head.startswith("- ") else head[2:]
    return " ".join([head] + pieces[1:])


def format_ratfunc(f: RatFunc) -> str:
    if f.is_polynomial():
        return format_poly(f.num)
    return f"({format_poly(f.num)})/({format_poly(f.den)})"


class _Parser:
    """Recursive descent over +, -, *, /, ^ and parentheses."""

    def __init__(self, chart: ChartSpec, text: str):
        self.chart = chart
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        for m in _TOKEN_RE.finditer(text):
            if m.group(5):
                raise ParseError(f"unexpected character {m.group(5)!r}", column=m.start() + 1)
            if m.group(1):
                self.tokens.append(("int", m.group(1), m.start()))
            elif m.group(2):
                self.tokens.append(("var", m.group(2), m.start()))
            elif m.group(3):
                self.tokens.append(("op", "^", m.start()))
            else:
                self.tokens.append(("op", m.group(4), m.start()))
            pos = m.end()
        self.pos = 0

    def _peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return ("end", "", len(self.text))

    def _next(self):
        tok = self._peek()
        self.pos += 1
        return tok

    def _fail(self, message, tok):
        raise ParseError(message, column=tok[2] + 1)

    def parse(self) -> RatFunc:
        value = self.expr()
        tok = self._peek()
        if tok[0] != "end":
            self._fail(f"unexpected {tok[1]!r}", tok)
        return value

    def expr(self) -> RatFunc:
        kind, text, _ = self._peek()
        negate = False
        while kind == "op" and text in "+-":
            self._next()
            if text == "-":
                negate = not negate
            kind, text, _ = self._peek()
        value = self.term()
        if negate:
            value = -value
        while True:
            kind, text, _ = self._peek()
            if kind == "op" and text in "+-":
                self._next()
                rhs = self.term()
                value = value + rhs if text == "+" else value - rhs
            else:
                return value

    def term(self) -> RatFunc:
        value = self.factor()
        while True:
            tok = self._peek()
            kind, text = tok[0], tok[1]
            if kind == "op" and text in "*/":
                self._next()
                rhs = self.factor()
                if text == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero():
                        self._fail("division by zero", tok)
                    value = value / rhs
            else:
                return value

    def factor(self) -> RatFunc:
        kind, text, _ = self._peek()
        negate = False
        while kind == "op" and text in "+-":
            self._next()
            if text == "-":
                negate = not negate
            kind, text, _ = self._peek()
        value = self.power()
        return -value if negate else value

    def power(self) -> RatFunc:
        value = self.atom()
        kind, text, _ = self._peek()
        if kind == "op" and text == "^":
            self._next()
            tok = self._next()
            if tok[0] != "int":
                self._fail("exponent must be a non-negative integer", tok)
            e = int(tok[1])
            num = value.num**e
            den = value.den**e
            value = RatFunc._make(num, den, True) if not num.is_zero() else RatFunc.zero(self.chart)
        return value

    def atom(self) -> RatFunc:
        tok = self._next()
        kind, text, _ = tok
        if kind == "int":
            return RatFunc.constant(self.chart, int(text))
        if kind == "var":
            try:
                index = self.chart.var_index(text)
            except UsageError as exc:
                self._fail(str(exc), tok)
            return RatFunc.variable(self.chart, index)
        if kind == "op" and text == "(":
            value = self.expr()
            closing = self._next()
            if closing[:2] != ("op", ")"):
                self._fail("expected ')'", closing)
            return value
        self._fail(f"unexpected {text!r}" if text else "unexpected end of input", tok)


def parse_ratfunc(chart: ChartSpec, text: str) -> RatFunc:
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression")
    return _Parser(chart, text).parse()


def parse_poly(chart: ChartSpec, text: str) -> Poly:
    value = parse_ratfunc(chart, text)
    if not value.is_polynomial():
        raise ParseError(f"expected a polynomial, got {value}")
    return value.num
