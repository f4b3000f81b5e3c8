"""Exact arithmetic in Q(beta) for multinacci beta.

A multinacci number of order ``m`` is the root in (1, 2) of
``x^(m+1) - x^m - ... - x - 1``; ``TWO`` stands for beta = 2 (min poly
``x - 2``).  Field elements are rational coefficient vectors reduced modulo the
minimal polynomial.  Signs are decided exactly: the coefficient polynomial is
evaluated over a dyadic enclosure of beta, refined until the result interval
excludes zero.
"""
from __future__ import annotations

import threading
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from math import lcm, log
from numbers import Rational
from typing import Union

from .errors import DomainError
from .symbolic import EPSequence

TWO = "two"

Order = Union[int, str]
Scalar = Union[int, Fraction]

INITIAL_BITS = 64


def parse_order(value: Order) -> Order:
    if isinstance(value, str):
        if value.strip().lower() == TWO:
            return TWO
        value = int(value)
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise DomainError(f"order must be a positive integer or 'two', got {value!r}")
    return value


class MultinacciBeta:
    """A multinacci base with its minimal polynomial, root enclosure and delta(beta).

    Instances are interned per order by :func:`make_beta`; the enclosure cache
    is shared by all elements of the field.
    """

    def __init__(self, order: Order):
        order = parse_order(order)
        self.order = order
        if order == TWO:
            self.m = None
            self.min_poly = (-2, 1)
            self.delta = EPSequence("", "1")
        else:
            self.m = order
            # low-to-high coefficients of x^(m+1) - x^m - ... - 1
            self.min_poly = (-1,) * (order + 1) + (1,)
            self.delta = EPSequence("", "1" * order + "0")
        self.degree = len(self.min_poly) - 1
        self._lock = threading.Lock()
        # _levels[k] = n means beta lies in [n / 2^k, (n + 1) / 2^k]
        self._levels: list[int] = [1]
        if self.is_two:
            self._levels = [2]
        self._refine_to(INITIAL_BITS)
        self.zero = FieldElement(self, (Fraction(0),) * self.degree)
        self.one = self.element(1)
        self.gen = self.element(0, 1) if self.degree > 1 else self.element(2)
        self.inv_gen = self.one / self.gen

    @property
    def is_two(self) -> bool:
        return self.order == TWO

    @property
    def upper_run(self) -> int | None:
        """Length of the shortest forbidden run of 1s (``m + 1``), or None for beta = 2."""
        return None if self.is_two else self.m + 1

    def __repr__(self) -> str:
        return f"make_beta({self.order!r})"

    def __reduce__(self):
        return (make_beta, (self.order,))

    # -- enclosure -------------------------------------------------------

    def _poly_sign_at(self, num: int, bits: int) -> int:
        """Sign of min_poly at num / 2^bits, exactly."""
        d = self.degree
        total = sum(c * num**i * (1 << (bits * (d - i))) for i, c in enumerate(self.min_poly))
        return (total > 0) - (total < 0)

    def _refine_to(self, bits: int) -> None:
        if len(self._levels) > bits:
            return
        with self._lock:
            levels = list(self._levels)
            while len(levels) <= bits:
                n = levels[-1]
                k = len(levels) - 1
                if self.is_two:
                    levels.append(2 * n)
                    continue
                mid = 2 * n + 1
                # min_poly is negative left of the root and positive right of it.
                levels.append(2 * n if self._poly_sign_at(mid, k + 1) > 0 else mid)
            self._levels = levels

    def enclosure_num(self, bits: int) -> int:
        self._refine_to(bits)
        return self._levels[bits]

    def enclosure_at(self, bits: int) -> tuple[Fraction, Fraction]:
        if self.is_two:
            return Fraction(2), Fraction(2)
        n = self.enclosure_num(bits)
        return Fraction(n, 1 << bits), Fraction(n + 1, 1 << bits)

    @property
    def enclosure(self) -> tuple[Fraction, Fraction]:
        return self.enclosure_at(INITIAL_BITS)

    def __float__(self) -> float:
        lo, hi = self.enclosure
        return float((lo + hi) / 2)

    def log_bounds(self) -> tuple[float, float]:
        """Outward-rounded bounds on log(beta)."""
        lo, hi = self.enclosure
        return _down(log(float(lo))), _up(log(float(hi)))

    # -- elements --------------------------------------------------------

    def element(self, *coeffs: Scalar) -> FieldElement:
        """``c0 + c1*beta + c2*beta^2 + ...`` reduced mod the minimal polynomial."""
        return FieldElement(self, _reduce(self, [Fraction(c) for c in coeffs]))

    def __call__(self, value: Scalar | FieldElement) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.beta is not self:
                raise ValueError("element belongs to a different field")
            return value
        return self.element(value)

    def power(self, n: int) -> FieldElement:
        return self.gen**n

    @property
    def threshold(self) -> FieldElement:
        """``1 - 1/beta``, the supremum of the bifurcation set."""
        return _threshold(self)


def make_beta(order: Order) -> MultinacciBeta:
    """The shared field instance for ``order`` (a positive int or ``"two"``)."""
    return _interned(parse_order(order))


@lru_cache(maxsize=None)
def _interned(order: Order) -> MultinacciBeta:
    return MultinacciBeta(order)


@lru_cache(maxsize=None)
def _threshold(beta: MultinacciBeta) -> FieldElement:
    return beta.one - beta.inv_gen


def _down(x: float) -> float:
    from math import nextafter

    return nextafter(nextafter(x, float("-inf")), float("-inf"))


def _up(x: float) -> float:
    from math import nextafter

    return nextafter(nextafter(x, float("inf")), float("inf"))


def _reduce(beta: MultinacciBeta, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    d = beta.degree
    mp = beta.min_poly
    coeffs = list(coeffs)
    for e in range(len(coeffs) - 1, d - 1, -1):
        c = coeffs[e]
        if c:
            # x^e = x^(e-d) * x^d and x^d = -(mp[0] + ... + mp[d-1] x^(d-1))
            for i in range(d):
                coeffs[e - d + i] -= c * mp[i]
        coeffs.pop()
    coeffs.extend([Fraction(0)] * (d - len(coeffs)))
    return tuple(coeffs)


# -- polynomial helpers over Q, low-to-high coefficient lists --------------


def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _trim(list(a))
    b = _trim(list(b))
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        factor = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = factor
        for i, c in enumerate(b):
            a[k + i] -= factor * c
        _trim(a)
    return q, a


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _inverse(beta: MultinacciBeta, coeffs: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """Inverse modulo the minimal polynomial by the extended Euclidean algorithm."""
    r0, r1 = [Fraction(c) for c in beta.min_poly], _trim(list(coeffs))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if not r1:
        raise ArithmeticError("element shares a factor with the minimal polynomial")
    c = r1[0]
    return _reduce(beta, [x / c for x in s1])


class FieldElement:
    """An element ``c0 + c1*beta + ... + c_{d-1}*beta^(d-1)`` of Q(beta).

    Immutable.  Equality is coefficient equality; ordering uses the exact sign.
    """

    __slots__ = ("beta", "coeffs", "_hash")

    def __init__(self, beta: MultinacciBeta, coeffs: tuple[Fraction, ...]):
        self.beta = beta
        self.coeffs = coeffs
        self._hash = None

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.beta is not self.beta:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Rational)):
            return self.beta.element(Fraction(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.beta, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(self.beta, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.beta, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.beta, _reduce(self.beta, _poly_mul(list(self.coeffs), list(other.coeffs))))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.is_zero:
            raise ZeroDivisionError("division by zero in Q(beta)")
        return FieldElement(self.beta, _inverse(self.beta, self.coeffs))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int) -> FieldElement:
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.beta.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _bounds_num(self, bits: int) -> tuple[int, int, int]:
        """Integer bounds (lo, hi, scale) with value in [lo/scale, hi/scale]."""
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        d = len(ints) - 1
        if self.beta.is_two:
            v = sum(a * 2**i for i, a in enumerate(ints))
            return v, v, den
        n = self.beta.enclosure_num(bits)
        lo = hi = 0
        for i, a in enumerate(ints):
            if not a:
                continue
            w = 1 << (bits * (d - i))
            small, big = a * n**i * w, a * (n + 1) ** i * w
            if a > 0:
                lo, hi = lo + small, hi + big
            else:
                lo, hi = lo + big, hi + small
        return lo, hi, den << (bits * d)

    def sign(self) -> int:
        if self.is_zero:
            return 0
        bits = INITIAL_BITS
        while True:
            lo, hi, _ = self._bounds_num(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def interval(self, width: Fraction | None = None) -> tuple[Fraction, Fraction]:
        """Rational enclosure of the value, at most ``width`` wide when given."""
        bits = INITIAL_BITS
        while True:
            lo, hi, scale = self._bounds_num(bits)
            if width is None or Fraction(hi - lo, scale) <= width:
                return Fraction(lo, scale), Fraction(hi, scale)
            bits *= 2

    def __float__(self) -> float:
        lo, hi = self.interval(Fraction(1, 1 << 60))
        return float((lo + hi) / 2)

    def decimal(self, digits: int = 30) -> str:
        """Decimal rendering rounded to ``digits`` places (advisory; coeffs are authoritative)."""
        lo, hi = self.interval(Fraction(1, 10 ** (digits + 4)))
        mid = (lo + hi) / 2
        with localcontext() as ctx:
            ctx.prec = digits + 40
            value = Decimal(mid.numerator) / Decimal(mid.denominator)
            return format(value.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN), "f")

    def coeff_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def to_json(self, digits: int = 30) -> dict:
        return {"coeffs": self.coeff_strings(), "decimal": self.decimal(digits)}

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return other.beta is self.beta and other.coeffs == self.coeffs
        if isinstance(other, (int, Rational)):
            return self.coeffs == self.beta.element(Fraction(other)).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.beta.order, self.coeffs))
        return self._hash

    def _cmp(self, other) -> int:
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare FieldElement with {type(other).__name__}")
        return (self - other).sign()

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if i == 0 else f"{c}*b" if i == 1 else f"{c}*b^{i}")
        return "FieldElement(" + (" + ".join(terms) or "0") + ")"


def fe_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Apply ``op`` in {"add", "sub", "mul", "div"}."""
    ops = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
    try:
        return ops[op](b)
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None


def fe_sign(a: FieldElement) -> int:
    return a.sign()
