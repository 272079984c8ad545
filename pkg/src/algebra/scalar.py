"""Scalar field layer: rationals, quadratic extensions Q(√d) and floats.

Exact values are :class:`fractions.Fraction` (plain ``int`` is accepted
wherever a rational is) and :class:`QuadExt`. Float64 values are ``float``.
Arithmetic between an exact value and a float raises
:class:`~src.errors.MixedVariantError`; promotion is explicit via
:func:`promote`.

Textual grammar (shared by every file format)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := ('+'|'-') factor | INT | DECIMAL | 'r' INT | '(' expr ')'

``r2`` denotes √2, e.g. ``(5-3*r2)/14``. Decimal literals produce floats.
"""

import logging
import math
import re
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import reduce
from typing import Iterable, List, Optional, Tuple, Union

import sympy

from ..errors import DivisionByZeroError, MixedVariantError, ParseError

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


class QuadExt:
    """Element a + b·√d of the quadratic field Q(√d), d square-free."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Rational = 0, b: Rational = 0, d: int = 2):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    @classmethod
    def root(cls, d: int = 2) -> "QuadExt":
        return cls(0, 1, d)

    # coercion

    def _coerce(self, other) -> Optional["QuadExt"]:
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise MixedVariantError(
                    f"cannot combine Q(r{self.d}) with Q(r{other.d})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(other, 0, self.d)
        if isinstance(other, float):
            raise MixedVariantError(
                f"cannot combine exact {self} with float {other!r} without promotion"
            )
        return None

    # field operations

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(
            self.a * o.a + self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise DivisionByZeroError(f"division by zero in Q(r{self.d})")
        return QuadExt(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self) -> "QuadExt":
        return QuadExt(-self.a, -self.b, self.d)

    def __pos__(self) -> "QuadExt":
        return self

    def __pow__(self, exponent: int) -> "QuadExt":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = QuadExt(1, 0, self.d)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # comparison

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadExt):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def sign(self) -> int:
        """Exact sign of a + b√d."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a² with d·b²
        diff = self.a * self.a - self.d * self.b * self.b
        return sa if diff > 0 else sb

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def __abs__(self) -> "QuadExt":
        return -self if self.sign() < 0 else self

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __float__(self) -> float:
        if self.b == 0:
            return float(self.a)
        with localcontext() as ctx:
            ctx.prec = 60
            root = Decimal(self.d).sqrt()
            value = _decimal(self.a) + _decimal(self.b) * root
            return float(value)

    def __repr__(self) -> str:
        return f"QuadExt({format_scalar(self)})"

    def __str__(self) -> str:
        return format_scalar(self)


Scalar = Union[int, Fraction, QuadExt, float]


def _decimal(x: Fraction) -> Decimal:
    return Decimal(x.numerator) / Decimal(x.denominator)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadExt))


def is_zero(x) -> bool:
    """True only for scalar zeros; arrays are never structural zeros."""
    if isinstance(x, (int, Fraction, QuadExt, float)):
        return x == 0
    return False


def to_float(x: Scalar) -> float:
    return float(x)


def conjugate(x: Scalar) -> Scalar:
    if isinstance(x, QuadExt):
        return x.conjugate()
    return x


def radicand(values: Iterable[Scalar]) -> Optional[int]:
    """The common radicand of the QuadExt values among ``values``, if any."""
    found = None
    for v in values:
        if isinstance(v, QuadExt) and v.b != 0:
            if found is not None and found != v.d:
                raise MixedVariantError(f"values mix Q(r{found}) and Q(r{v.d})")
            found = v.d
    return found


def promote(x: Scalar, target: str, d: int = 2) -> Scalar:
    """Explicit promotion along Rational -> QuadExt -> Float64.

    ``target`` is one of ``"rational"``, ``"quadext"``, ``"float"``.
    """
    if target == "float":
        return float(x)
    if target == "quadext":
        if isinstance(x, QuadExt):
            return x
        if isinstance(x, float):
            raise MixedVariantError("floats cannot be promoted to an exact field")
        return QuadExt(x, 0, d)
    if target == "rational":
        if isinstance(x, QuadExt):
            if x.b != 0:
                raise MixedVariantError(f"{x} is not rational")
            return x.a
        if isinstance(x, float):
            raise MixedVariantError("floats cannot be demoted to rationals")
        return Fraction(x)
    raise ValueError(f"unknown scalar variant {target!r}")


def unify(values: List[Scalar], allow_float: bool = False) -> List[Scalar]:
    """Bring ``values`` into one variant.

    Mixed exact/float input raises unless ``allow_float`` requests promotion
    of everything to float.
    """
    has_float = any(isinstance(v, float) for v in values)
    # integer-valued exact entries (typically the zeros of a tableau) are lossless
    has_exact = any(
        isinstance(v, QuadExt) or (isinstance(v, Fraction) and v.denominator != 1)
        for v in values
    )
    if has_float:
        if has_exact and not allow_float:
            raise MixedVariantError("exact and float scalars mixed without promotion")
        return [float(v) for v in values]
    d = radicand(values)
    if d is None:
        return [v.a if isinstance(v, QuadExt) else Fraction(v) for v in values]
    return [promote(v, "quadext", d) for v in values]


# sympy bridge


def to_sympy(x: Scalar) -> sympy.Expr:
    if isinstance(x, QuadExt):
        return sympy.Rational(x.a.numerator, x.a.denominator) + sympy.Rational(
            x.b.numerator, x.b.denominator
        ) * sympy.sqrt(x.d)
    if isinstance(x, float):
        return sympy.Float(x)
    x = Fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


def from_sympy(expr: sympy.Expr, d: Optional[int] = None) -> Scalar:
    """Convert an expanded sympy number a + b·√d back into a scalar."""
    expr = sympy.expand(expr)
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    if expr.is_Float:
        return float(expr)
    if d is not None:
        root = sympy.sqrt(d)
        b = expr.coeff(root)
        a = sympy.expand(expr - b * root)
        if a.is_Rational and b.is_Rational:
            return QuadExt(Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q)), d)
    if expr.is_number:
        return float(expr)
    raise MixedVariantError(f"cannot represent {expr} as a scalar")


# text grammar

_TOKEN = re.compile(
    r"\s*(?:(?P<dec>\d+\.\d*(?:[eE][-+]?\d+)?|\d+[eE][-+]?\d+|\.\d+(?:[eE][-+]?\d+)?)"
    r"|(?P<int>\d+)|(?P<root>r\d+)|(?P<op>[-+*/()]))"
)


class _ScalarParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: List[Tuple[str, str, int]] = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            match = _TOKEN.match(stripped, pos)
            if not match or match.end() == pos:
                raise ParseError("unexpected character", text, pos)
            kind = match.lastgroup
            self.tokens.append((kind, match.group(kind), match.start(kind)))
            pos = match.end()
        self.index = 0

    def _peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _offset(self) -> int:
        token = self._peek()
        return token[2] if token else len(self.text)

    def parse(self) -> Scalar:
        if not self.tokens:
            raise ParseError("empty scalar", self.text, 0)
        value = self._expr()
        if self._peek() is not None:
            raise ParseError("trailing input", self.text, self._offset())
        return value

    def _expr(self) -> Scalar:
        value = self._term()
        while (token := self._peek()) and token[1] in "+-" and token[0] == "op":
            self.index += 1
            rhs = self._term()
            _check_variants(value, rhs)
            value = value + rhs if token[1] == "+" else value - rhs
        return value

    def _term(self) -> Scalar:
        value = self._factor()
        while (token := self._peek()) and token[1] in "*/" and token[0] == "op":
            self.index += 1
            rhs = self._factor()
            _check_variants(value, rhs)
            if token[1] == "*":
                value = value * rhs
            else:
                if rhs == 0:
                    raise DivisionByZeroError(f"division by zero in {self.text!r}")
                value = _divide(value, rhs)
        return value

    def _factor(self) -> Scalar:
        token = self._peek()
        if token is None:
            raise ParseError("unexpected end of input", self.text, len(self.text))
        kind, lexeme, offset = token
        self.index += 1
        if kind == "op" and lexeme in "+-":
            value = self._factor()
            return -value if lexeme == "-" else value
        if kind == "int":
            return Fraction(int(lexeme))
        if kind == "dec":
            return float(lexeme)
        if kind == "root":
            d = int(lexeme[1:])
            if d < 2 or math.isqrt(d) ** 2 == d:
                raise ParseError(f"radicand {d} is not a non-square", self.text, offset)
            return QuadExt.root(d)
        if lexeme == "(":
            value = self._expr()
            closing = self._peek()
            if closing is None or closing[1] != ")":
                raise ParseError("expected ')'", self.text, self._offset())
            self.index += 1
            return value
        raise ParseError(f"unexpected {lexeme!r}", self.text, offset)


def _check_variants(x: Scalar, y: Scalar) -> None:
    if isinstance(x, float) != isinstance(y, float):
        raise MixedVariantError(f"cannot combine {x!r} and {y!r} without promotion")


def _divide(x: Scalar, y: Scalar) -> Scalar:
    if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)):
        return Fraction(x) / Fraction(y)
    return x / y


def parse_scalar(text: str) -> Scalar:
    value = _ScalarParser(str(text)).parse()
    if isinstance(value, QuadExt) and value.b == 0:
        return value.a
    return value


def format_scalar(x: Scalar) -> str:
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, QuadExt):
        if x.b == 0:
            return str(x.a)
        den = reduce(math.lcm, (x.a.denominator, x.b.denominator))
        num_a = int(x.a * den)
        num_b = int(x.b * den)
        root = f"r{x.d}"
        if abs(num_b) == 1:
            root_term = root
        else:
            root_term = f"{abs(num_b)}*{root}"
        if num_a == 0:
            text = root_term if num_b > 0 else f"-{root_term}"
            return text if den == 1 else f"{text}/{den}"
        sign = "+" if num_b > 0 else "-"
        text = f"{num_a}{sign}{root_term}"
        return text if den == 1 else f"({text})/{den}"
    return str(x)
