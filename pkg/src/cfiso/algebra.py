"""Polynomials and truncated power series over a FieldSpec.

Degrees live in Z union {-infinity}; the sentinel NEG_INFINITY is an actual
float so every degree comparison is total.  The zero polynomial has degree
NEG_INFINITY and leading coefficient 0.

A SeriesPrefix holds the first n coefficients a_1..a_n of a power series
sum a_i x^(-i) in the falling variable.  Operations that would need unknown
coefficients raise PrecisionExhausted instead of padding; zero-padding is a
separate, explicit step (`pad`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .field import FieldSpec

__all__ = [
    "NEG_INFINITY",
    "PrecisionExhausted",
    "Polynomial",
    "SeriesPrefix",
    "ConvergentPair",
    "initial_convergents",
    "convergent_step",
    "convergents_from",
    "pair_determinant",
    "series_coefficients",
]

NEG_INFINITY = float("-inf")


class PrecisionExhausted(Exception):
    """Raised when an operation needs series coefficients beyond the known prefix."""


class Polynomial:
    """Immutable polynomial with coefficients stored constant-term first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Iterable[int] = ()):
        c = tuple(int(x) for x in coeffs)
        n = len(c)
        while n > 0 and c[n - 1] == 0:
            n -= 1
        c = c[:n]
        for x in c:
            if not 0 <= x < field.q:
                raise ValueError(f"coefficient {x} out of range for {field!r}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, *a):  # immutability
        raise AttributeError("Polynomial is immutable")

    # -- constructors --

    @classmethod
    def zero(cls, field: FieldSpec) -> "Polynomial":
        return cls(field, ())

    @classmethod
    def one(cls, field: FieldSpec) -> "Polynomial":
        return cls(field, (1,))

    @classmethod
    def x(cls, field: FieldSpec) -> "Polynomial":
        return cls(field, (0, 1))

    @classmethod
    def monomial(cls, field: FieldSpec, degree: int, coeff: int = 1) -> "Polynomial":
        if coeff == 0:
            return cls.zero(field)
        return cls(field, (0,) * degree + (coeff,))

    # -- structure --

    @property
    def degree(self) -> float | int:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INFINITY

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> int:
        if i < 0:
            raise IndexError("negative coefficient index")
        return self.coeffs[i] if i < len(self.coeffs) else 0

    # -- arithmetic --

    def _like(self, other: "Polynomial") -> None:
        if self.field != other.field:
            raise ValueError("mixed fields")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._like(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return Polynomial(f, out)

    def __neg__(self) -> "Polynomial":
        f = self.field
        return Polynomial(f, (f.neg(c) for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._like(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        out = [f.neg(c) for c in b]
        out.extend([0] * (len(a) - len(b)))
        for i, c in enumerate(a):
            out[i] = f.add(c, out[i]) if i < len(b) else c
        return Polynomial(f, out)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._like(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial.zero(f)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = f.add(out[i + j], f.mul(ai, bj))
        return Polynomial(f, out)

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial.one(self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, s: int) -> "Polynomial":
        f = self.field
        if s == 0:
            return Polynomial.zero(f)
        return Polynomial(f, (f.mul(s, c) for c in self.coeffs))

    def shift(self, m: int) -> "Polynomial":
        """Multiply by x^m (m >= 0)."""
        if m < 0:
            raise ValueError("negative shift")
        if self.is_zero:
            return self
        return Polynomial(self.field, (0,) * m + self.coeffs)

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        self._like(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        a = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        inv_lb = f.inv(b[-1])
        if len(a) - 1 < db:
            return Polynomial.zero(f), self
        qcoeffs = [0] * (len(a) - db)
        for k in range(len(a) - 1, db - 1, -1):
            c = a[k]
            if c:
                qc = f.mul(c, inv_lb)
                qcoeffs[k - db] = qc
                for j in range(db + 1):
                    a[k - db + j] = f.sub(a[k - db + j], f.mul(qc, b[j]))
        return Polynomial(f, qcoeffs), Polynomial(f, a[:db])

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def __repr__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c}")
            else:
                xs = "x" if i == 1 else f"x^{i}"
                terms.append(xs if c == 1 else f"{c}{xs}")
        return "+".join(terms)


# ---------------------------------------------------------------------------
# convergents


@dataclass(frozen=True)
class ConvergentPair:
    """Numerator/denominator pair P_i, Q_i of a continued fraction."""

    P: Polynomial
    Q: Polynomial
    index: int


def initial_convergents(field: FieldSpec) -> tuple[ConvergentPair, ConvergentPair]:
    """Seed pairs (index -1, index -2): P_-2 = Q_-1 = 0, P_-1 = Q_-2 = 1."""
    one = Polynomial.one(field)
    zero = Polynomial.zero(field)
    return ConvergentPair(one, zero, -1), ConvergentPair(zero, one, -2)


def convergent_step(A: Polynomial, prev: ConvergentPair, prev2: ConvergentPair) -> ConvergentPair:
    return ConvergentPair(A * prev.P + prev2.P, A * prev.Q + prev2.Q, prev.index + 1)


def convergents_from(denominators: Sequence[Polynomial], field: FieldSpec) -> list[ConvergentPair]:
    """All pairs P_i/Q_i, i = 0..k, for partial denominators A_1..A_k.

    Index 0 is the seed P_0 = 0, Q_0 = 1 produced by the vacuous step A_0.
    """
    prev, prev2 = initial_convergents(field)
    out = [ConvergentPair(Polynomial.zero(field), Polynomial.one(field), 0)]
    prev2, prev = prev, out[0]
    for A in denominators:
        cur = convergent_step(A, prev, prev2)
        out.append(cur)
        prev2, prev = prev, cur
    return out


def pair_determinant(cur: ConvergentPair, prev: ConvergentPair) -> int:
    """Constant value of P_i*Q_{i-1} - P_{i-1}*Q_i (an element of the field)."""
    d = cur.P * prev.Q - prev.P * cur.Q
    if d.degree > 0:
        raise ArithmeticError(f"determinant is not constant: {d!r}")
    return d.coefficient(0)


# ---------------------------------------------------------------------------
# truncated series


def series_coefficients(P: Polynomial, Q: Polynomial, n: int) -> tuple[int, ...]:
    """First n coefficients a_1..a_n of the series expansion of P/Q, |P| < |Q|."""
    if Q.is_zero:
        raise ZeroDivisionError("series expansion of P/0")
    if P.degree >= Q.degree:
        raise ValueError("series_coefficients needs |P| < |Q|")
    quot, _ = divmod(P.shift(n), Q)
    return tuple(quot.coefficient(n - i) for i in range(1, n + 1))


class SeriesPrefix:
    """Known prefix a_1..a_n of a power series sum_{i>=1} a_i x^(-i)."""

    __slots__ = ("field", "word")

    def __init__(self, field: FieldSpec, word: Iterable[int]):
        w = tuple(int(s) for s in word)
        for s in w:
            if not 0 <= s < field.q:
                raise ValueError(f"symbol {s} out of range for {field!r}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "word", w)

    def __setattr__(self, *a):
        raise AttributeError("SeriesPrefix is immutable")

    @classmethod
    def from_rational(cls, P: Polynomial, Q: Polynomial, n: int) -> "SeriesPrefix":
        return cls(P.field, series_coefficients(P, Q, n))

    @property
    def precision(self) -> int:
        return len(self.word)

    @property
    def degree(self) -> float | int:
        """Degree of the series as far as the prefix shows.

        Raises PrecisionExhausted on the all-zero prefix: the true degree
        could be anything below -precision, including -infinity.
        """
        for i, s in enumerate(self.word, start=1):
            if s:
                return -i
        raise PrecisionExhausted(
            f"all {self.precision} known coefficients are zero; degree undetermined"
        )

    def coefficient(self, i: int) -> int:
        """Coefficient a_i of x^(-i), i >= 1; raises beyond known precision."""
        if i < 1:
            raise IndexError("series coefficients start at i=1")
        if i > len(self.word):
            raise PrecisionExhausted(
                f"coefficient a_{i} beyond known precision {self.precision}"
            )
        return self.word[i - 1]

    def pad(self, extra: int) -> "SeriesPrefix":
        """Explicitly extend with `extra` zero coefficients."""
        if extra < 0:
            raise ValueError("negative padding")
        return SeriesPrefix(self.field, self.word + (0,) * extra)

    def truncate(self, n: int) -> "SeriesPrefix":
        if n > self.precision:
            raise PrecisionExhausted(f"cannot truncate to {n} > precision {self.precision}")
        return SeriesPrefix(self.field, self.word[:n])

    def __sub__(self, other: "SeriesPrefix") -> "SeriesPrefix":
        if self.field != other.field:
            raise ValueError("mixed fields")
        if self.precision != other.precision:
            raise PrecisionExhausted(
                f"precision mismatch {self.precision} != {other.precision}; pad explicitly"
            )
        f = self.field
        return SeriesPrefix(f, (f.sub(a, b) for a, b in zip(self.word, other.word)))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SeriesPrefix)
            and self.field == other.field
            and self.word == other.word
        )

    def __hash__(self) -> int:
        return hash((self.field, self.word))

    def __iter__(self) -> Iterator[int]:
        return iter(self.word)

    def __len__(self) -> int:
        return len(self.word)

    def __repr__(self) -> str:
        digits = "".join(str(s) for s in self.word[:40])
        tail = "..." if len(self.word) > 40 else ""
        return f"SeriesPrefix[{self.field!r}]({digits}{tail})"
