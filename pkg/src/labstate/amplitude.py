"""Exact amplitudes in Q(i, sqrt 2).

Every amplitude produced by 1/sqrt(2) beamsplitters with the i / -1 phase
conventions lives in the field spanned over the rationals by
``{1, i, r2, r2*i}`` where ``r2`` is the square root of two.  :class:`Amp`
stores the four rational coordinates; squared moduli land in the real
subfield ``Q(sqrt 2)`` (:class:`RealQ2`) and are checked for rationality by
:func:`amp_as_rat` before being reported as probabilities.

Rationals are :class:`fractions.Fraction`, which already keeps lowest terms
with a positive denominator.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

from .errors import IrrationalProbability, LabstateError

__all__ = [
    "Rat",
    "Amp",
    "RealQ2",
    "ZERO",
    "ONE",
    "I",
    "R2",
    "INV_R2",
    "amp_mul",
    "amp_sqmod",
    "amp_as_rat",
    "parse_amp",
    "format_amp",
    "AmpParseError",
]

Rat = Fraction

SQRT2 = math.sqrt(2.0)


def _rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


class RealQ2:
    """``c1 + cr*sqrt(2)`` with rational coordinates."""

    __slots__ = ("c1", "cr")

    def __init__(self, c1=0, cr=0):
        object.__setattr__(self, "c1", _rat(c1))
        object.__setattr__(self, "cr", _rat(cr))

    def __setattr__(self, name, value):
        raise AttributeError("RealQ2 is immutable")

    def __eq__(self, other):
        if isinstance(other, RealQ2):
            return self.c1 == other.c1 and self.cr == other.cr
        if isinstance(other, (int, Fraction)):
            return self.cr == 0 and self.c1 == other
        return NotImplemented

    def __hash__(self):
        return hash((self.c1, self.cr))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RealQ2(other)
        if not isinstance(other, RealQ2):
            return NotImplemented
        return RealQ2(self.c1 + other.c1, self.cr + other.cr)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RealQ2(self.c1 * other, self.cr * other)
        if not isinstance(other, RealQ2):
            return NotImplemented
        return RealQ2(
            self.c1 * other.c1 + 2 * self.cr * other.cr,
            self.c1 * other.cr + self.cr * other.c1,
        )

    __rmul__ = __mul__

    def sign(self) -> int:
        """Exact sign of ``c1 + cr*sqrt(2)``."""
        a, b = self.c1, self.cr
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: compare a^2 with 2 b^2
        lhs, rhs = a * a, 2 * b * b
        if lhs == rhs:  # impossible for rationals, sqrt(2) is irrational
            return 0
        return (1 if a > 0 else -1) if lhs > rhs else (1 if b > 0 else -1)

    def __float__(self):
        return float(self.c1) + float(self.cr) * SQRT2

    def __repr__(self):
        return f"RealQ2({self.c1!s}, {self.cr!s})"


class Amp:
    """An element ``c1 + ci*i + cr*r2 + cir*i*r2`` of Q(i, sqrt 2).

    Instances are immutable and hashable; equality is exact, coordinate by
    coordinate.  Plain ints and Fractions mix freely with Amps in arithmetic.
    """

    __slots__ = ("c1", "ci", "cr", "cir")

    def __init__(self, c1=0, ci=0, cr=0, cir=0):
        object.__setattr__(self, "c1", _rat(c1))
        object.__setattr__(self, "ci", _rat(ci))
        object.__setattr__(self, "cr", _rat(cr))
        object.__setattr__(self, "cir", _rat(cir))

    def __setattr__(self, name, value):
        raise AttributeError("Amp is immutable")

    @classmethod
    def coerce(cls, x) -> "Amp":
        if isinstance(x, Amp):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Amp")

    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.c1, self.ci, self.cr, self.cir)

    # Gaussian-rational halves: self = u + v*r2 with u = c1 + ci*i, v = cr + cir*i
    def _uv(self):
        return (self.c1, self.ci), (self.cr, self.cir)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Amp(other)
        if not isinstance(other, Amp):
            return NotImplemented
        return self.coords() == other.coords()

    def __hash__(self):
        return hash(self.coords())

    def __bool__(self):
        return any(self.coords())

    def __neg__(self):
        return Amp(-self.c1, -self.ci, -self.cr, -self.cir)

    def __pos__(self):
        return self

    def __add__(self, other):
        try:
            other = Amp.coerce(other)
        except TypeError:
            return NotImplemented
        return Amp(
            self.c1 + other.c1,
            self.ci + other.ci,
            self.cr + other.cr,
            self.cir + other.cir,
        )

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = Amp.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Amp.coerce(other) - self

    def __mul__(self, other):
        try:
            y = Amp.coerce(other)
        except TypeError:
            return NotImplemented
        a1, ai, ar, air = self.coords()
        b1, bi, br, bir = y.coords()
        # i^2 = -1, r2^2 = 2, (i r2)^2 = -2
        return Amp(
            a1 * b1 - ai * bi + 2 * ar * br - 2 * air * bir,
            a1 * bi + ai * b1 + 2 * ar * bir + 2 * air * br,
            a1 * br + ar * b1 - ai * bir - air * bi,
            a1 * bir + air * b1 + ai * br + ar * bi,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "Amp":
        """Complex conjugate (i -> -i); sqrt(2) is real and is left alone."""
        return Amp(self.c1, -self.ci, self.cr, -self.cir)

    def sqrt2_conjugate(self) -> "Amp":
        """Galois conjugate r2 -> -r2."""
        return Amp(self.c1, self.ci, -self.cr, -self.cir)

    def inverse(self) -> "Amp":
        if not self:
            raise ZeroDivisionError("Amp division by zero")
        # rationalise over Q(sqrt 2): x * x' lies in Q(i)
        xc = self.sqrt2_conjugate()
        w = self * xc
        assert w.cr == 0 and w.cir == 0
        # then over Q(i): w * conj(w) is rational
        wc = w.conjugate()
        n = (w * wc).c1
        return xc * wc * Amp(1 / n)

    def __truediv__(self, other):
        try:
            other = Amp.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Amp.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __complex__(self):
        return complex(
            float(self.c1) + float(self.cr) * SQRT2,
            float(self.ci) + float(self.cir) * SQRT2,
        )

    def is_unit_modulus(self) -> bool:
        return amp_sqmod(self) == RealQ2(1)

    def __repr__(self):
        return f"Amp{format_amp(self)}"

    def __str__(self):
        return format_amp(self)


ZERO = Amp(0)
ONE = Amp(1)
I = Amp(0, 1)
R2 = Amp(0, 0, 1)
INV_R2 = Amp(0, 0, Fraction(1, 2))


def amp_mul(x: Amp, y: Amp) -> Amp:
    return Amp.coerce(x) * Amp.coerce(y)


def amp_sqmod(x: Amp) -> RealQ2:
    """Squared modulus ``x * conj(x)``, which always lies in Q(sqrt 2)."""
    p = Amp.coerce(x) * Amp.coerce(x).conjugate()
    # imaginary parts cancel identically
    assert p.ci == 0 and p.cir == 0, p
    return RealQ2(p.c1, p.cr)


def amp_as_rat(x: RealQ2) -> Fraction:
    """Return the rational value of ``x``; raise if it carries a sqrt(2) part."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if x.cr != 0:
        raise IrrationalProbability(
            f"value {x.c1} + ({x.cr})*sqrt(2) is not rational"
        )
    return x.c1


# ---------------------------------------------------------------------------
# text form

class AmpParseError(LabstateError):
    def __init__(self, message, pos=None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} (at offset {pos})")


_TOKEN = re.compile(r"\s*(?:(\d+)|(r2)|(i)|([-+*/()]))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise AmpParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("num", int(m.group(1)), start))
        elif m.group(2):
            out.append(("atom", R2, start))
        elif m.group(3):
            out.append(("atom", I, start))
        else:
            out.append(("op", m.group(4), start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _AmpParser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self):
        tok = self.toks[self.k]
        self.k += 1
        return tok

    def expr(self):
        val = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                val = val * rhs
            else:
                if not rhs:
                    raise AmpParseError("division by zero", pos)
                val = val / rhs
        return val

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        return self.atom()

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Amp(val)
        if kind == "atom":
            return val
        if kind == "op" and val == "(":
            inner = self.expr()
            kind2, val2, pos2 = self.take()
            if (kind2, val2) != ("op", ")"):
                raise AmpParseError("expected ')'", pos2)
            return inner
        raise AmpParseError("expected a number, 'i', 'r2' or '('", pos)


def parse_amp(text: str) -> Amp:
    """Parse an amplitude expression such as ``(i/r2)`` or ``(-3/4 + r2*i/2)``.

    The grammar is ordinary arithmetic (``+ - * /`` and parentheses) over
    integer literals and the atoms ``i`` and ``r2``.
    """
    p = _AmpParser(text)
    val = p.expr()
    kind, _, pos = p.peek()
    if kind != "end":
        raise AmpParseError("trailing input", pos)
    return val


_SYMBOLS = ("", "i", "r2", "r2*i")


def format_amp(x: Amp) -> str:
    """Canonical parenthesised text, e.g. ``(-3/4)``, ``(i/2)``, ``(r2*i/2)``."""
    x = Amp.coerce(x)
    parts = []
    for q, sym in zip(x.coords(), _SYMBOLS):
        if q == 0:
            continue
        n, d = abs(q.numerator), q.denominator
        if sym:
            body = sym if n == 1 else f"{n}*{sym}"
        else:
            body = str(n)
        if d != 1:
            body += f"/{d}"
        if not parts:
            parts.append(("-" if q < 0 else "") + body)
        else:
            parts.append((" - " if q < 0 else " + ") + body)
    return "(" + ("".join(parts) if parts else "0") + ")"


def format_amp_float(x: Amp, digits: int = 12) -> str:
    z = complex(x)
    re_, im = z.real, z.imag
    if im == 0:
        return f"({re_:.{digits}g})"
    if re_ == 0:
        return f"({im:.{digits}g}j)"
    sign = "+" if im > 0 else "-"
    return f"({re_:.{digits}g}{sign}{abs(im):.{digits}g}j)"
