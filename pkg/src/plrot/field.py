"""Exact arithmetic in Q and in the real quadratic fields Q(sqrt(d)).

A value is a + b*sqrt(d) with rational a, b and a fixed square-free integer
d >= 1 (d = 1 encodes plain rationals; the sqrt part is folded away).
Equality of representations coincides with equality of the real numbers they
denote, and sign, order and rationality are decided exactly.  Floating point
is used for display only and never feeds back into a computation.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

Rat = Union[int, Fraction]


class FieldError(ValueError):
    """Base class for exact-arithmetic errors."""


class ContextMismatchError(FieldError):
    """Two operands live in different quadratic fields."""


class FactorizationError(FieldError):
    """Trial division exhausted its bound before finishing."""


class LiteralError(FieldError):
    """Malformed field-element literal."""


_SQUARE_FREE_OK: set[int] = {1, 2, 3, 5, 6, 7, 10}


def _check_square_free(d: int) -> None:
    if d in _SQUARE_FREE_OK:
        return
    if d < 1:
        raise FieldError(f"field discriminant must be >= 1, got {d}")
    if d % 4 == 0:
        raise FieldError(f"{d} is not square-free")
    k = 3
    while k * k <= d:
        if d % (k * k) == 0:
            raise FieldError(f"{d} is not square-free")
        k += 2
    _SQUARE_FREE_OK.add(d)


@dataclass(frozen=True)
class FieldContext:
    """The ambient field Q(sqrt(d)); d = 1 means plain rationals."""

    d: int = 1

    def __post_init__(self) -> None:
        _check_square_free(self.d)

    def element(self, a: Rat, b: Rat = 0) -> FieldElement:
        return FieldElement(a, b, self.d)

    def parse(self, text: str) -> FieldElement:
        return parse_element(text, self)

    @property
    def is_rational_field(self) -> bool:
        return self.d == 1

    def __str__(self) -> str:
        return "Q" if self.d == 1 else f"Q(sqrt({self.d}))"


RATIONAL_CTX = FieldContext(1)
GOLDEN_CTX = FieldContext(5)


class FieldElement:
    """An exact real number a + b*sqrt(d)."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, a: Rat, b: Rat = 0, d: int = 1) -> None:
        _check_square_free(d)
        a = Fraction(a)
        b = Fraction(b)
        if d == 1:
            a, b = a + b, Fraction(0)
        object.__setattr__(self, "_a", a)
        object.__setattr__(self, "_b", b)
        object.__setattr__(self, "_d", d)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("FieldElement is immutable")

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def d(self) -> int:
        return self._d

    @property
    def ctx(self) -> FieldContext:
        return FieldContext(self._d)

    # -- predicates ------------------------------------------------------

    def is_rational(self) -> bool:
        return self._b == 0

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def as_fraction(self) -> Fraction:
        if self._b != 0:
            raise FieldError(f"{self} is irrational")
        return self._a

    def sign(self) -> int:
        """Exact sign in {-1, 0, +1}, decided by integer arithmetic."""
        a, b = self._a, self._b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        sa = 1 if a > 0 else -1
        sb = 1 if b > 0 else -1
        if sa == sb:
            return sa
        lhs = a * a
        rhs = b * b * self._d
        if lhs == rhs:  # impossible for square-free d > 1
            return 0
        return sa if lhs > rhs else sb

    def conjugate(self) -> FieldElement:
        return FieldElement(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        return self._a * self._a - self._b * self._b * self._d

    # -- arithmetic ------------------------------------------------------

    def _join(self, other: object) -> Optional[tuple[int, Fraction, Fraction]]:
        """Other's coefficients in a context compatible with self, or None."""
        if isinstance(other, FieldElement):
            if other._d == self._d or other._b == 0:
                return self._d if other._b == 0 else other._d, other._a, other._b
            if self._b == 0:
                return other._d, other._a, other._b
            raise ContextMismatchError(
                f"cannot mix sqrt({self._d}) with sqrt({other._d})"
            )
        if isinstance(other, (int, Fraction)):
            return self._d, Fraction(other), Fraction(0)
        return None

    def __add__(self, other: object) -> FieldElement:
        j = self._join(other)
        if j is None:
            return NotImplemented
        d, oa, ob = j
        return FieldElement(self._a + oa, self._b + ob, d)

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(-self._a, -self._b, self._d)

    def __sub__(self, other: object) -> FieldElement:
        j = self._join(other)
        if j is None:
            return NotImplemented
        d, oa, ob = j
        return FieldElement(self._a - oa, self._b - ob, d)

    def __rsub__(self, other: object) -> FieldElement:
        return (-self) + other

    def __mul__(self, other: object) -> FieldElement:
        j = self._join(other)
        if j is None:
            return NotImplemented
        d, oa, ob = j
        return FieldElement(
            self._a * oa + self._b * ob * d,
            self._a * ob + self._b * oa,
            d,
        )

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero field element")
        return FieldElement(self._a / n, -self._b / n, self._d)

    def __truediv__(self, other: object) -> FieldElement:
        j = self._join(other)
        if j is None:
            return NotImplemented
        d, oa, ob = j
        n = oa * oa - ob * ob * d
        if n == 0:
            raise ZeroDivisionError("division by zero field element")
        # multiply by the conjugate of other over its norm
        return FieldElement(
            (self._a * oa - self._b * ob * d) / n,
            (self._b * oa - self._a * ob) / n,
            d,
        )

    def __rtruediv__(self, other: object) -> FieldElement:
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return FieldElement(other, 0, self._d) / self

    def __pow__(self, n: int) -> FieldElement:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = FieldElement(1, 0, self._d)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparisons -----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and self._a == other
        if isinstance(other, FieldElement):
            if self._b == 0 and other._b == 0:
                return self._a == other._a
            return self._d == other._d and self._a == other._a and self._b == other._b
        return NotImplemented

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._d))

    def _diff_sign(self, other: object) -> int:
        diff = self - other
        if diff is NotImplemented:
            raise TypeError(f"cannot compare FieldElement with {type(other)!r}")
        return diff.sign()

    def __lt__(self, other: object) -> bool:
        return self._diff_sign(other) < 0

    def __le__(self, other: object) -> bool:
        return self._diff_sign(other) <= 0

    def __gt__(self, other: object) -> bool:
        return self._diff_sign(other) > 0

    def __ge__(self, other: object) -> bool:
        return self._diff_sign(other) >= 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- integer rounding (exact) ----------------------------------------

    def __floor__(self) -> int:
        a, b, d = self._a, self._b, self._d
        if b == 0:
            return a.numerator // a.denominator
        m = math.lcm(a.denominator, b.denominator)
        p = a.numerator * (m // a.denominator)
        r = b.numerator * (m // b.denominator)
        t = math.isqrt(r * r * d)
        if r >= 0:
            s = t
        else:
            s = -t if t * t == r * r * d else -(t + 1)
        n = (p + s) // m
        while self < n:
            n -= 1
        while not (self < n + 1):
            n += 1
        return n

    def __ceil__(self) -> int:
        return -((-self).__floor__())

    # -- display (never feeds back into computation) ----------------------

    def decimal(self, digits: int = 40) -> str:
        """Decimal expansion rounded half-even at `digits` fractional digits."""
        scale = 10 ** digits
        if self._b == 0:
            n = round(self._a * scale)
        else:
            guard = digits + 20
            while True:
                g = 10 ** guard
                root = math.isqrt(self._d * g * g)  # floor(sqrt(d) * g)
                if self._b > 0:
                    lo = self._a + self._b * Fraction(root, g)
                    hi = self._a + self._b * Fraction(root + 1, g)
                else:
                    lo = self._a + self._b * Fraction(root + 1, g)
                    hi = self._a + self._b * Fraction(root, g)
                nlo = round(lo * scale)
                nhi = round(hi * scale)
                if nlo == nhi:
                    n = nlo
                    break
                guard *= 2
        sign = "-" if n < 0 else ""
        ip, fp = divmod(abs(n), scale)
        if digits == 0:
            return f"{sign}{ip}"
        return f"{sign}{ip}.{str(fp).zfill(digits)}"

    def __float__(self) -> float:
        return float(self.decimal(20))

    def __str__(self) -> str:
        a, b, d = self._a, self._b, self._d
        if b == 0:
            return str(a)
        if abs(b) == 1:
            root = f"sqrt({d})"
        else:
            root = f"{abs(b)}*sqrt({d})"
        if a == 0:
            return root if b > 0 else f"-{root}"
        op = "+" if b > 0 else "-"
        return f"{a} {op} {root}"

    def __repr__(self) -> str:
        return f"FieldElement({self})"


TAU = FieldElement(Fraction(1, 2), Fraction(1, 2), 5)


def golden_power(x: FieldElement) -> Optional[int]:
    """The integer k with x = tau**k, if one exists (x > 0 required)."""
    if not isinstance(x, FieldElement):
        x = FieldElement(x)
    if x.sign() <= 0:
        return None
    if x.d not in (1, 5):
        return None
    y = FieldElement(x.a, x.b, 5)
    k = 0
    one = FieldElement(1, 0, 5)
    while y > one:
        y = y / TAU
        k += 1
    while y < one:
        y = y * TAU
        k -= 1
    return k if y == one else None


def pretty(x: FieldElement) -> str:
    """Human-oriented rendering; recognizes powers of the golden ratio."""
    if x.d == 5 and not x.is_rational():
        k = golden_power(x)
        if k is not None:
            return "tau" if k == 1 else f"tau^{k}"
        k = golden_power(-x)
        if k is not None:
            return "-tau" if k == 1 else f"-tau^{k}"
    return str(x)


# -- multiplicative dependence of positive rationals ------------------------


def _factorize(n: int, bound: int) -> dict[int, int]:
    """Prime factorization by trial division; error beyond `bound`."""
    if n < 1:
        raise ValueError("can only factor positive integers")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    while p * p <= n:
        if p > bound:
            raise FactorizationError(
                f"residual factor of {n} exceeds the trial-division bound {bound}"
            )
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 2 if p % 6 == 5 else 4  # skip multiples of 2 and 3
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _exponent_vector(q: Fraction, bound: int) -> dict[int, int]:
    vec = dict(_factorize(q.numerator, bound))
    for p, e in _factorize(q.denominator, bound).items():
        vec[p] = vec.get(p, 0) - e
    return {p: e for p, e in vec.items() if e != 0}


def multiplicative_dependence(
    a: Rat, b: Rat, *, factor_bound: int = 10**6
) -> Optional[Fraction]:
    """log_b(a) as an exact fraction m/n (so a**n = b**m), or None.

    None certifies multiplicative independence: the prime exponent vectors of
    a and b are not proportional.  Requires a, b > 0 and b != 1.
    """
    a = Fraction(a)
    b = Fraction(b)
    if a <= 0 or b <= 0:
        raise ValueError("arguments must be positive rationals")
    if b == 1:
        raise ValueError("the base b must differ from 1")
    if a == 1:
        return Fraction(0)
    va = _exponent_vector(a, factor_bound)
    vb = _exponent_vector(b, factor_bound)
    p0 = min(vb)
    ratio = Fraction(va.get(p0, 0), vb[p0])
    if ratio == 0:
        return None
    for p in set(va) | set(vb):
        if va.get(p, 0) * ratio.denominator != ratio.numerator * vb.get(p, 0):
            return None
    return ratio


# -- coefficient rings for breakpoints and slopes ----------------------------


@dataclass(frozen=True)
class RingSpec:
    """Which ring breakpoints and slopes of a map must come from."""

    kind: str  # 'dyadic' | 'golden' | 'stein' | 'rationals' | 'field'
    p: Optional[int] = None
    q: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in {"dyadic", "golden", "stein", "rationals", "field"}:
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "stein":
            p, q = self.p, self.q
            if not (isinstance(p, int) and isinstance(q, int)):
                raise ValueError("stein ring needs integer parameters")
            if not (1 < p < q):
                raise ValueError(f"stein ring needs 1 < p < q, got ({p}, {q})")
            if math.gcd(p, q) != 1:
                raise ValueError(f"stein parameters must be coprime, got ({p}, {q})")
        elif self.p is not None or self.q is not None:
            raise ValueError(f"ring kind {self.kind!r} takes no parameters")

    @classmethod
    def dyadic(cls) -> RingSpec:
        return cls("dyadic")

    @classmethod
    def golden(cls) -> RingSpec:
        return cls("golden")

    @classmethod
    def stein(cls, p: int, q: int) -> RingSpec:
        return cls("stein", p, q)

    @classmethod
    def rationals(cls) -> RingSpec:
        return cls("rationals")

    @classmethod
    def field(cls) -> RingSpec:
        return cls("field")

    def __str__(self) -> str:
        if self.kind == "stein":
            return f"stein({self.p},{self.q})"
        return self.kind


def _is_power_of(n: int, base: int) -> bool:
    while n % base == 0:
        n //= base
    return n == 1


def _pq_decomposes(n: int, p: int, q: int) -> bool:
    while n % p == 0:
        n //= p
    while n % q == 0:
        n //= q
    return n == 1


def ring_member(x: Union[FieldElement, Rat], spec: RingSpec, role: str) -> bool:
    """Exact membership of a breakpoint or slope value in the given ring."""
    if role not in ("breakpoint", "slope"):
        raise ValueError(f"role must be 'breakpoint' or 'slope', got {role!r}")
    if not isinstance(x, FieldElement):
        x = FieldElement(x)

    if spec.kind == "field":
        return x.sign() > 0 if role == "slope" else True

    if spec.kind == "rationals":
        if not x.is_rational():
            return False
        return x.sign() > 0 if role == "slope" else True

    if spec.kind == "dyadic":
        if not x.is_rational():
            return False
        q = x.as_fraction()
        if role == "breakpoint":
            return _is_power_of(q.denominator, 2)
        if q <= 0:
            return False
        return (q.numerator == 1 and _is_power_of(q.denominator, 2)) or (
            q.denominator == 1 and _is_power_of(q.numerator, 2)
        )

    if spec.kind == "stein":
        if not x.is_rational():
            return False
        q = x.as_fraction()
        assert spec.p is not None and spec.q is not None
        if role == "breakpoint":
            return _pq_decomposes(q.denominator, spec.p, spec.q)
        if q <= 0:
            return False
        return _pq_decomposes(q.numerator, spec.p, spec.q) and _pq_decomposes(
            q.denominator, spec.p, spec.q
        )

    # golden: breakpoints in Z[tau], slopes integer powers of tau
    if x.d not in (1, 5):
        return False
    if role == "breakpoint":
        # x = m + n*tau with integers m, n  <=>  2b and a - b are integers
        return (2 * x.b).denominator == 1 and (x.a - x.b).denominator == 1
    return golden_power(x) is not None


# -- literal parser -----------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\^|\+|\-|\*|·|/|\(|\)))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].strip()
            if not rest:
                break
            raise LiteralError(f"unexpected character {rest[0]!r} in {text!r}")
        if m.group("int") is not None:
            tokens.append(("int", m.group("int")))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name")))
        else:
            op = m.group("op")
            tokens.append(("op", "*" if op == "·" else op))
        pos = m.end()
    return tokens


class _LiteralParser:
    def __init__(self, tokens: list[tuple[str, str]], ctx: FieldContext) -> None:
        self.tokens = tokens
        self.ctx = ctx
        self.i = 0

    def peek(self) -> Optional[tuple[str, str]]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise LiteralError("unexpected end of literal")
        self.i += 1
        return tok

    def expect(self, op: str) -> None:
        tok = self.take()
        if tok != ("op", op):
            raise LiteralError(f"expected {op!r}, found {tok[1]!r}")

    def parse(self) -> FieldElement:
        value = self.expr()
        if self.peek() is not None:
            raise LiteralError(f"trailing tokens after literal: {self.tokens[self.i:]}")
        return value

    def expr(self) -> FieldElement:
        value = self.term()
        while True:
            tok = self.peek()
            if tok == ("op", "+"):
                self.take()
                value = value + self.term()
            elif tok == ("op", "-"):
                self.take()
                value = value - self.term()
            else:
                return value

    def term(self) -> FieldElement:
        value = self.factor()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                value = value * self.factor()
            elif tok == ("op", "/"):
                self.take()
                divisor = self.factor()
                if divisor.is_zero():
                    raise LiteralError("division by zero in literal")
                value = value / divisor
            else:
                return value

    def factor(self) -> FieldElement:
        tok = self.peek()
        if tok == ("op", "-"):
            self.take()
            return -self.factor()
        if tok == ("op", "+"):
            self.take()
            return self.factor()
        return self.power()

    def power(self) -> FieldElement:
        base = self.atom()
        while self.peek() == ("op", "^"):
            self.take()
            neg = False
            tok = self.take()
            if tok == ("op", "-"):
                neg = True
                tok = self.take()
            if tok[0] != "int":
                raise LiteralError("exponent must be an integer")
            e = int(tok[1])
            base = base ** (-e if neg else e)
        return base

    def atom(self) -> FieldElement:
        tok = self.take()
        if tok[0] == "int":
            return FieldElement(int(tok[1]), 0, self.ctx.d)
        if tok[0] == "name":
            name = tok[1]
            if name == "sqrt":
                self.expect("(")
                arg = self.take()
                if arg[0] != "int":
                    raise LiteralError("sqrt() takes an integer")
                self.expect(")")
                v = int(arg[1])
                r = math.isqrt(v)
                if r * r == v:
                    return FieldElement(r, 0, self.ctx.d)
                if v == self.ctx.d:
                    return FieldElement(0, 1, self.ctx.d)
                raise LiteralError(f"sqrt({v}) does not lie in {self.ctx}")
            if name == "tau":
                if self.ctx.d != 5:
                    raise LiteralError(f"tau does not lie in {self.ctx}")
                return TAU
            raise LiteralError(f"unknown symbol {name!r} in literal")
        if tok == ("op", "("):
            value = self.expr()
            self.expect(")")
            return value
        raise LiteralError(f"unexpected token {tok[1]!r} in literal")


def parse_element(text: str, ctx: Union[FieldContext, int] = RATIONAL_CTX) -> FieldElement:
    """Parse a field-element literal such as '1/2', 'tau^-3' or '(1+sqrt(5))/2'."""
    if isinstance(ctx, int):
        ctx = FieldContext(ctx)
    tokens = _tokenize(text)
    if not tokens:
        raise LiteralError("empty literal")
    return _LiteralParser(tokens, ctx).parse()


def infer_context(text: str) -> FieldContext:
    """Field context implied by the sqrt()/tau symbols appearing in a literal."""
    ds: set[int] = set()
    for m in re.finditer(r"sqrt\s*\(\s*(\d+)\s*\)", text):
        v = int(m.group(1))
        r = math.isqrt(v)
        if r * r != v:
            ds.add(v)
    if re.search(r"\btau\b", text):
        ds.add(5)
    if not ds:
        return RATIONAL_CTX
    if len(ds) > 1:
        raise ContextMismatchError(f"literal mixes several quadratic fields: {sorted(ds)}")
    return FieldContext(ds.pop())
