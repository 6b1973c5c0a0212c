"""Exact arithmetic: rationals, the field Q(sqrt 681), polynomials and
rational functions in one variable.

Rationals are :class:`fractions.Fraction`.  Everything else is built on top
of it, so every quantity computed by the package stays exact until it is
explicitly rendered with :func:`to_decimal`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence, Union

Rational = Fraction

#: The only irrationality that ever shows up: the optimal home probability
#: and expected meeting time of the block strategy live in Q(sqrt 681).
D = 681

Number = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


# --------------------------------------------------------------------------
# Q(sqrt D)
# --------------------------------------------------------------------------


@total_ordering
class QuadraticNumber:
    """``a + b*sqrt(681)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")
    d = D

    def __init__(self, a: Number | str = 0, b: Number | str = 0) -> None:
        self.a = as_fraction(a)
        self.b = as_fraction(b)

    @classmethod
    def coerce(cls, x) -> "QuadraticNumber":
        if isinstance(x, QuadraticNumber):
            return x
        return cls(as_fraction(x), 0)

    @classmethod
    def sqrt_d(cls) -> "QuadraticNumber":
        return cls(0, 1)

    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - D * self.b * self.b

    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt(d)``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: whichever square is larger wins
        diff = self.a * self.a - D * self.b * self.b
        return sa if diff > 0 else (sb if diff < 0 else 0)

    # arithmetic ----------------------------------------------------------

    def _other(self, other):
        if isinstance(other, QuadraticNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(other, 0)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(
            self.a * o.a + D * self.b * o.b, self.a * o.b + self.b * o.a
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadraticNumber has zero norm")
        return QuadraticNumber(self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** -n
        result, base = QuadraticNumber(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __lt__(self, other) -> bool:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self) -> int:
        return hash(self.a) if self.b == 0 else hash((self.a, self.b, D))

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(D)

    def __repr__(self) -> str:
        return f"QuadraticNumber({str(self.a)!r}, {str(self.b)!r})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        sb = "" if self.b == 1 else ("-" if self.b == -1 else f"{self.b}*")
        if self.a == 0:
            return f"{sb}sqrt({D})"
        op = "+" if self.b > 0 else "-"
        bb = abs(self.b)
        tail = f"sqrt({D})" if bb == 1 else f"{bb}*sqrt({D})"
        return f"{self.a} {op} {tail}"

    def to_json(self) -> dict:
        return {"a": encode_rational(self.a), "b": encode_rational(self.b), "d": D}

    @classmethod
    def from_json(cls, obj: dict) -> "QuadraticNumber":
        if int(obj.get("d", D)) != D:
            raise ValueError(f"only d={D} is supported, got {obj['d']}")
        return cls(decode_rational(obj["a"]), decode_rational(obj["b"]))


def _sign(x) -> int:
    if isinstance(x, QuadraticNumber):
        return x.sign()
    return (x > 0) - (x < 0)


def _floor(x) -> int:
    """Exact floor of a rational or quadratic number."""
    if not isinstance(x, QuadraticNumber) or x.b == 0:
        return math.floor(x.a if isinstance(x, QuadraticNumber) else x)
    # b*sqrt(d) = sign(b) * sqrt(P/Q) and isqrt(P*Q)/Q brackets it from below
    sq = x.b * x.b * D
    P, Q = sq.numerator, sq.denominator
    approx = Fraction(math.isqrt(P * Q), Q)
    m = math.floor(x.a + (approx if x.b > 0 else -approx))
    while (x - m).sign() < 0:
        m -= 1
    while (x - (m + 1)).sign() >= 0:
        m += 1
    return m


def to_decimal(x, digits: int, *, fixed: bool = False) -> str:
    """Render ``x`` with ``digits`` significant digits (or decimal places when
    ``fixed``), correctly rounded half-to-even.

    Zero renders as ``0.`` followed by ``digits`` zeros.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if not isinstance(x, QuadraticNumber):
        x = QuadraticNumber.coerce(x)
    s = x.sign()
    if s == 0:
        return "0." + "0" * digits
    y = x if s > 0 else -x

    if fixed:
        scale = digits
    else:
        # exact decimal exponent: 10**e <= y < 10**(e+1)
        e = math.floor(math.log10(float(y))) if float(y) > 0 else 0
        while (y - Fraction(10) ** e).sign() < 0:
            e -= 1
        while (y - Fraction(10) ** (e + 1)).sign() >= 0:
            e += 1
        scale = digits - 1 - e

    z = y * (Fraction(10) ** scale)
    m = _floor(z)
    c = (z - m - Fraction(1, 2)).sign()
    if c > 0 or (c == 0 and m % 2 == 1):
        m += 1
    if not fixed and m == 10**digits:
        # rounding carried into a new leading digit
        m //= 10
        scale -= 1

    text = str(m)
    if scale <= 0:
        body = text + "0" * (-scale)
    elif len(text) > scale:
        body = text[:-scale] + "." + text[-scale:]
    else:
        body = "0." + "0" * (scale - len(text)) + text
    return ("-" if s < 0 else "") + body


# --------------------------------------------------------------------------
# Polynomials
# --------------------------------------------------------------------------


class Polynomial:
    """Polynomial in one variable with exact rational coefficients, stored in
    ascending degree with no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()) -> None:
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _other(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial([other])
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result, base = Polynomial([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading()
        quot = [Fraction(0)] * max(0, len(rem) - dq)
        for k in range(len(rem) - dq - 1, -1, -1):
            c = rem[k + dq] / lead
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other) -> bool:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lead = self.leading()
        return Polynomial(c / lead for c in self.coeffs)

    def content(self) -> Fraction:
        """Positive rational ``c`` such that ``self / c`` has coprime integer
        coefficients."""
        if self.is_zero():
            return Fraction(0)
        den = math.lcm(*(c.denominator for c in self.coeffs))
        num = math.gcd(*(c.numerator * (den // c.denominator) for c in self.coeffs))
        return Fraction(num, den)

    def integer_coeffs(self) -> list[int]:
        for c in self.coeffs:
            if c.denominator != 1:
                raise ValueError("polynomial has non-integer coefficients")
        return [c.numerator for c in self.coeffs]

    def __repr__(self) -> str:
        return f"Polynomial([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mag = abs(c)
            coef = "" if (mag == 1 and i) else str(mag)
            mono = "" if i == 0 else ("p" if i == 1 else f"p^{i}")
            sep = "*" if coef and mono else ""
            sgn = "-" if c < 0 else "+"
            terms.append((sgn, f"{coef}{sep}{mono}"))
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {s} {t}" for s, t in terms[1:])

    def to_json(self) -> list[str]:
        return [encode_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, obj: Sequence[str]) -> "Polynomial":
        return cls(decode_rational(c) for c in obj)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over Q."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


# --------------------------------------------------------------------------
# Rational functions
# --------------------------------------------------------------------------


class RationalFunction:
    """``num(p) / den(p)``.  Equality is semantic (cross-multiplication)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None) -> None:
        num = num if isinstance(num, Polynomial) else Polynomial([num])
        if den is None:
            den = Polynomial([1])
        elif not isinstance(den, Polynomial):
            den = Polynomial([den])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den

    @classmethod
    def from_coeffs(cls, num: Iterable, den: Iterable = (1,)) -> "RationalFunction":
        return cls(Polynomial(num), Polynomial(den))

    def canonical(self) -> "RationalFunction":
        """Common factors cancelled, integer coefficients with no common
        content, positive leading coefficient of the denominator."""
        g = poly_gcd(self.num, self.den)
        num, den = self.num // g, self.den // g
        if num.is_zero():
            return RationalFunction(Polynomial(), Polynomial([1]))
        c = Polynomial(num.coeffs + den.coeffs).content()
        if den.leading() < 0:
            c = -c
        return RationalFunction(num * (1 / c), den * (1 / c))

    def __call__(self, x):
        d = self.den(x)
        if _sign(d) == 0:
            raise ZeroDivisionError("denominator vanishes at evaluation point")
        return self.num(x) / d

    def _other(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction, Polynomial)):
            return RationalFunction(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __eq__(self, other) -> bool:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self) -> int:
        c = self.canonical()
        return hash((c.num, c.den))

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def stationary_numerator(self) -> Polynomial:
        """Numerator of the derivative; its roots are the stationary points."""
        return self.num.derivative() * self.den - self.num * self.den.derivative()

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        return f"({self.num}) / ({self.den})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "RationalFunction":
        return cls(Polynomial.from_json(obj["num"]), Polynomial.from_json(obj["den"]))


def quadratic_eval(f, x) -> QuadraticNumber:
    """Evaluate a polynomial or rational function exactly at ``x`` in Q(sqrt d)."""
    x = QuadraticNumber.coerce(x)
    return QuadraticNumber.coerce(f(x))


def quadratic_roots(poly: Polynomial) -> list[QuadraticNumber]:
    """Real roots of a degree-2 rational polynomial whose discriminant is a
    rational square times ``d`` (or a rational square), in increasing order."""
    if poly.degree != 2:
        raise ValueError("expected a quadratic")
    c, b, a = poly.coeffs
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    for mult, unit in ((1, QuadraticNumber(1)), (D, QuadraticNumber(0, 1))):
        r = disc / mult
        rn, rd = math.isqrt(r.numerator), math.isqrt(r.denominator)
        if rn * rn == r.numerator and rd * rd == r.denominator:
            root = unit * Fraction(rn, rd)
            roots = [(-b - root) / (2 * a), (-b + root) / (2 * a)]
            return sorted(roots)
    raise ValueError(f"discriminant {disc} does not lie in Q(sqrt {D})")


# --------------------------------------------------------------------------
# JSON encodings
# --------------------------------------------------------------------------


def encode_rational(x) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def decode_rational(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return Fraction(str(s).strip())


def encode_exact(x):
    """JSON-ready encoding for any exact value used by the package.  Plain
    ints (counts, steps, seeds) stay JSON integers."""
    if isinstance(x, Fraction):
        return encode_rational(x)
    if isinstance(x, (QuadraticNumber, Polynomial, RationalFunction)):
        return x.to_json()
    if isinstance(x, (list, tuple)):
        return [encode_exact(v) for v in x]
    if isinstance(x, dict):
        return {k: encode_exact(v) for k, v in x.items()}
    return x
