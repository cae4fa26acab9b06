"""Exact bivariate polynomials and rational functions in ``L`` and ``T``.

A ``MotivicRational`` is ``scalar * N(L, T) / prod (1 - L^a T^b)`` with an
exact rational scalar, an integer numerator and a multiset of pole pairs.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Mapping

import numpy as np

Pair = tuple[int, int]


_SAFE = 1 << 62


def _trim(c: np.ndarray) -> np.ndarray:
    nz = np.argwhere(c != 0)
    if nz.size == 0:
        return np.zeros((1, 1), dtype=c.dtype)
    return c[: nz[:, 0].max() + 1, : nz[:, 1].max() + 1]


def _maxabs(c: np.ndarray) -> int:
    if c.dtype == object:
        return max((abs(int(x)) for x in c.flat), default=0)
    return int(np.abs(c).max()) if c.size else 0


def _narrow(c: np.ndarray) -> np.ndarray:
    """Store as int64 when every entry is safely representable."""
    if c.dtype == object and _maxabs(c) < _SAFE:
        return c.astype(np.int64)
    if c.dtype != object and c.dtype != np.int64:
        return c.astype(np.int64)
    return c


def _widen(c: np.ndarray) -> np.ndarray:
    return c.astype(object) if c.dtype != object else c


class Poly:
    """Polynomial in ``L`` and ``T`` with nonnegative exponents; ``c[i, j]`` multiplies ``L^i T^j``.

    Coefficients are exact integers, stored as int64 when a magnitude bound
    allows it and as Python ints otherwise.
    """

    __slots__ = ("c",)

    def __init__(self, c):
        arr = c if isinstance(c, np.ndarray) else np.array(c, dtype=object)
        if arr.ndim != 2:
            raise ValueError("coefficient array must be 2-dimensional")
        self.c = _narrow(_trim(arr))

    @classmethod
    def monomial(cls, a: int, b: int, coeff=1) -> "Poly":
        if a < 0 or b < 0:
            raise ValueError("negative exponent")
        c = np.zeros((a + 1, b + 1), dtype=object)
        c[a, b] = coeff
        return cls(c)

    @classmethod
    def const(cls, k) -> "Poly":
        return cls.monomial(0, 0, k)

    @classmethod
    def from_terms(cls, terms: Mapping[Pair, object] | Iterable[tuple[int, int, object]]) -> "Poly":
        items = terms.items() if isinstance(terms, Mapping) else (((i, j), v) for i, j, v in terms)
        items = list(items)
        if not items:
            return cls.const(0)
        A = max(i for (i, _), _ in items) + 1
        B = max(j for (_, j), _ in items) + 1
        c = np.zeros((A, B), dtype=object)
        for (i, j), v in items:
            c[i, j] += int(v)
        return cls(c)

    @classmethod
    def factor(cls, a: int, b: int) -> "Poly":
        """``1 - L^a T^b``."""
        return cls.const(1) - cls.monomial(a, b)

    def is_zero(self) -> bool:
        return not np.any(self.c != 0)

    @property
    def deg_T(self) -> int:
        return -1 if self.is_zero() else self.c.shape[1] - 1

    @property
    def deg_L(self) -> int:
        return -1 if self.is_zero() else self.c.shape[0] - 1

    def terms(self) -> list[tuple[int, int, int]]:
        return [(int(i), int(j), int(self.c[i, j])) for i, j in np.argwhere(self.c != 0)]

    def _pair(self, other: "Poly", bound: int):
        if self.c.dtype != object and other.c.dtype != object and bound < _SAFE:
            return self.c, other.c, np.int64
        return _widen(self.c), _widen(other.c), object

    def __add__(self, other: "Poly") -> "Poly":
        a, b, dt = self._pair(other, _maxabs(self.c) + _maxabs(other.c))
        A = max(a.shape[0], b.shape[0])
        B = max(a.shape[1], b.shape[1])
        c = np.zeros((A, B), dtype=dt)
        c[: a.shape[0], : a.shape[1]] += a
        c[: b.shape[0], : b.shape[1]] += b
        return Poly(c)

    def __neg__(self) -> "Poly":
        return Poly(-self.c)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            k = int(other)
            if self.c.dtype != object and _maxabs(self.c) * abs(k) < _SAFE:
                return Poly(self.c * k)
            return Poly(_widen(self.c) * k)
        if other.c.size < self.c.size:
            return other * self
        nz = np.argwhere(self.c != 0)
        bound = _maxabs(self.c) * _maxabs(other.c) * max(len(nz), 1)
        a, b, dt = self._pair(other, bound)
        c = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), dtype=dt)
        for i, j in nz:
            c[i : i + b.shape[0], j : j + b.shape[1]] += a[i, j] * b
        return Poly(c)

    __rmul__ = __mul__

    def mul_factor(self, a: int, b: int) -> "Poly":
        """Multiply by ``1 - L^a T^b`` with one shifted subtraction."""
        src = self.c if self.c.dtype != object and 2 * _maxabs(self.c) < _SAFE else _widen(self.c)
        c = np.zeros((src.shape[0] + a, src.shape[1] + b), dtype=src.dtype)
        c[: src.shape[0], : src.shape[1]] += src
        c[a:, b:] -= src
        return Poly(c)

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted(self.terms())))

    def truncate_T(self, deg: int) -> "Poly":
        return Poly(self.c[:, : deg + 1]) if deg >= 0 else Poly.const(0)

    def content(self) -> int:
        return reduce(gcd, (abs(v) for _, _, v in self.terms()), 0)

    def exact_div(self, k: int) -> "Poly":
        return Poly(self.c // k)

    def divide_factor(self, a: int, b: int) -> "Poly | None":
        """Exact quotient by ``1 - L^a T^b``, or ``None`` if it does not divide."""
        if self.is_zero():
            return self
        N = self.c
        degT = N.shape[1] - 1 - b
        if degT < 0:
            return None
        # the quotient recurrence only adds shifted copies of N's entries
        bound = _maxabs(N) * int(np.count_nonzero(N))
        dt = np.int64 if N.dtype != object and bound < _SAFE else object
        rows = N.shape[0] + a * (degT // b + 1) + 1
        Q = np.zeros((rows, degT + 1), dtype=dt)
        Q[: N.shape[0], :] = N[:, : degT + 1]
        for j in range(b, degT + 1):
            if a:
                Q[a:, j] += Q[: rows - a, j - b]
            else:
                Q[:, j] += Q[:, j - b]
        q = Poly(Q)
        return q if q.mul_factor(a, b) == self else None

    def evaluate(self, L, T):
        return sum(v * L**i * T**j for i, j, v in self.terms())

    def __repr__(self) -> str:
        return f"Poly({render_poly(self)})"


def render_monomial(i: int, j: int) -> str:
    """``L^i*T^j`` with unit exponents and zero factors elided; ``1`` for the constant."""
    mon = "*".join(x for x in (f"L^{i}" if i > 1 else ("L" if i else ""), f"T^{j}" if j > 1 else ("T" if j else "")) if x)
    return mon or "1"


def render_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    out = ""
    for i, j, v in sorted(p.terms(), key=lambda t: (t[1], t[0])):
        mon = render_monomial(i, j)
        mag = abs(int(v))
        body = str(mag) if mon == "1" else (mon if mag == 1 else f"{mag}*{mon}")
        if not out:
            out = ("-" if v < 0 else "") + body
        else:
            out += (" - " if v < 0 else " + ") + body
    return out


@dataclass(frozen=True)
class MotivicRational:
    """``scalar * num / prod_{(a, b) in den} (1 - L^a T^b)``.

    ``den`` is a sorted tuple with repetitions allowed; every ``b`` is positive.
    """

    scalar: Fraction
    num: Poly
    den: tuple[Pair, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "scalar", Fraction(self.scalar))
        object.__setattr__(self, "den", tuple(sorted(tuple(int(x) for x in p) for p in self.den)))
        for a, b in self.den:
            if b <= 0:
                raise ValueError(f"pole pair ({a}, {b}) has b <= 0")

    @classmethod
    def zero(cls) -> "MotivicRational":
        return cls(Fraction(0), Poly.const(0))

    @classmethod
    def one(cls) -> "MotivicRational":
        return cls(Fraction(1), Poly.const(1))

    @classmethod
    def geometric(cls, a: int, b: int, num: Poly | None = None, scalar=1) -> "MotivicRational":
        """``scalar * num / (1 - L^a T^b)``."""
        return cls(Fraction(scalar), num if num is not None else Poly.const(1), ((a, b),))

    def is_zero(self) -> bool:
        return self.scalar == 0 or self.num.is_zero()

    def _with_den(self, den: Counter) -> Poly:
        extra = Counter(den)
        extra.subtract(Counter(self.den))
        out = self.num
        for (a, b), k in sorted(extra.items()):
            for _ in range(k):
                out = out.mul_factor(a, b)
        return out

    def __add__(self, other: "MotivicRational") -> "MotivicRational":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        den = Counter(self.den) | Counter(other.den)
        g = Fraction(gcd(self.scalar.numerator, other.scalar.numerator), _lcm(self.scalar.denominator, other.scalar.denominator))
        m1, m2 = self.scalar / g, other.scalar / g
        num = self._with_den(den) * int(m1) + other._with_den(den) * int(m2)
        return MotivicRational(g, num, tuple(den.elements()))

    def __neg__(self) -> "MotivicRational":
        return MotivicRational(-self.scalar, self.num, self.den)

    def __sub__(self, other: "MotivicRational") -> "MotivicRational":
        return self + (-other)

    def __mul__(self, other) -> "MotivicRational":
        if isinstance(other, MotivicRational):
            return MotivicRational(self.scalar * other.scalar, self.num * other.num, self.den + other.den)
        if isinstance(other, Poly):
            return MotivicRational(self.scalar, self.num * other, self.den)
        return MotivicRational(self.scalar * Fraction(other), self.num, self.den)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, MotivicRational):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def normalized(self) -> "MotivicRational":
        """Content moved into the scalar; zero collapses to the canonical zero."""
        if self.is_zero():
            return MotivicRational.zero()
        c = self.num.content()
        lead = self.num.terms()[0][2]
        if lead < 0:
            c = -c
        return MotivicRational(self.scalar * c, self.num.exact_div(c), self.den)

    def reduced(self) -> "MotivicRational":
        """Cancel denominator factors that divide the numerator exactly, repeatedly."""
        r = self.normalized()
        if r.is_zero():
            return r
        num, den = r.num, list(r.den)
        changed = True
        while changed:
            changed = False
            for p in sorted(set(den), key=lambda p: (-p[1], -p[0])):
                q = num.divide_factor(*p)
                if q is not None:
                    num = q
                    den.remove(p)
                    changed = True
                    break
        return MotivicRational(r.scalar, num, tuple(den)).normalized()

    def expand(self, s_max: int) -> "SeriesExpansion":
        return expand(self, s_max)

    def at_L1_series(self, s_max: int) -> list[Fraction]:
        return [sum(e, Fraction(0)) for e in self.expand(s_max).coeffs]

    def __repr__(self) -> str:
        den = "".join(f"(1-L^{a}T^{b})" for a, b in self.den)
        return f"({self.scalar})*({render_poly(self.num)})" + (f"/[{den}]" if den else "")


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class SeriesExpansion:
    """Coefficients of ``T^0..T^s_max``; ``coeffs[s][i]`` multiplies ``L^i``."""

    s_max: int
    coeffs: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_array(cls, arr: np.ndarray, s_max: int) -> "SeriesExpansion":
        """Build from an array indexed ``[L-exponent, s]``."""
        out = []
        for s in range(s_max + 1):
            col = [Fraction(x) for x in arr[:, s]] if s < arr.shape[1] else []
            while col and col[-1] == 0:
                col.pop()
            out.append(tuple(col))
        return cls(s_max, tuple(out))

    def coefficient(self, s: int) -> tuple[Fraction, ...]:
        return self.coeffs[s]

    def at_L(self, L) -> list[Fraction]:
        return [sum((c * Fraction(L) ** i for i, c in enumerate(col)), Fraction(0)) for col in self.coeffs]

    def truncate(self, s_max: int) -> "SeriesExpansion":
        return SeriesExpansion(s_max, self.coeffs[: s_max + 1])

    def __add__(self, other: "SeriesExpansion") -> "SeriesExpansion":
        m = min(self.s_max, other.s_max)
        out = []
        for s in range(m + 1):
            a, b = list(self.coeffs[s]), list(other.coeffs[s])
            n = max(len(a), len(b))
            a += [Fraction(0)] * (n - len(a))
            b += [Fraction(0)] * (n - len(b))
            col = [x + y for x, y in zip(a, b)]
            while col and col[-1] == 0:
                col.pop()
            out.append(tuple(col))
        return SeriesExpansion(m, tuple(out))


def expand(r: MotivicRational, s_max: int) -> SeriesExpansion:
    """Power-series expansion of ``r`` through ``T^s_max``."""
    N = _widen(r.num.truncate_T(s_max).c)
    degL = N.shape[0] - 1 + sum(a * (s_max // b) for a, b in r.den)
    Q = np.zeros((degL + 1, s_max + 1), dtype=object)
    Q[: N.shape[0], : N.shape[1]] = N
    for a, b in r.den:
        for j in range(b, s_max + 1):
            if a:
                Q[a:, j] += Q[:-a, j - b]
            else:
                Q[:, j] += Q[:, j - b]
    return SeriesExpansion.from_array(Q * r.scalar, s_max)
