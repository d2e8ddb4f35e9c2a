"""Exact Laurent series in the regulator eps with rational coefficients.

A series carries a truncation order ``trunc``: coefficients of eps**n are
known for n <= trunc, everything above is O(eps**(trunc+1)). ``trunc=None``
marks an exact (finite) Laurent polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

DEFAULT_TRUNC = 4

_INF = float("inf")


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class LaurentSeries:
    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs=None, trunc: int | None = None):
        clean = {}
        for n, c in (coeffs or {}).items():
            if type(c) is not Fraction:
                c = Fraction(c)
            if c and (trunc is None or n <= trunc):
                clean[int(n)] = c
        self.coeffs: dict[int, Fraction] = clean
        self.trunc = trunc

    @classmethod
    def _raw(cls, coeffs: dict[int, Fraction], trunc: int | None) -> "LaurentSeries":
        # coeffs already clean apart from zeros and entries above trunc
        out = cls.__new__(cls)
        out.coeffs = {n: c for n, c in coeffs.items() if c and (trunc is None or n <= trunc)}
        out.trunc = trunc
        return out

    @classmethod
    def constant(cls, c) -> "LaurentSeries":
        return cls({0: c})

    @classmethod
    def zero(cls) -> "LaurentSeries":
        return cls()

    @classmethod
    def one(cls) -> "LaurentSeries":
        return cls({0: 1})

    @classmethod
    def eps(cls, n: int = 1, c=1) -> "LaurentSeries":
        return cls({n: c})

    @property
    def valuation(self) -> float:
        """Lowest exponent that may be nonzero."""
        if self.coeffs:
            return min(self.coeffs)
        return _INF if self.trunc is None else self.trunc + 1

    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, (int, Rational)):
            return LaurentSeries.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out[n] + c if n in out else c
        return LaurentSeries._raw(out, _min_trunc(self.trunc, other.trunc))

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries._raw({n: -c for n, c in self.coeffs.items()}, self.trunc)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            other = Fraction(other)
            return LaurentSeries({n: c * other for n, c in self.coeffs.items()}, self.trunc)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        # x*y is known up to min(tx + val(y), ty + val(x))
        bounds = []
        if self.trunc is not None:
            bounds.append(self.trunc + other.valuation)
        if other.trunc is not None:
            bounds.append(other.trunc + self.valuation)
        finite = [b for b in bounds if b != _INF]
        if bounds and not finite:
            trunc = None  # one side is an exact zero
        else:
            trunc = int(min(finite)) if finite else None
        out: dict[int, Fraction] = {}
        limit = _INF if trunc is None else trunc
        for n, a in self.coeffs.items():
            for m, b in other.coeffs.items():
                k = n + m
                if k <= limit:
                    out[k] = out[k] + a * b if k in out else a * b
        return LaurentSeries._raw(out, trunc)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = _min_trunc(self.trunc, other.trunc)
        keys = set(self.coeffs) | set(other.coeffs)
        return all(
            self.coeffs.get(n, 0) == other.coeffs.get(n, 0)
            for n in keys if t is None or n <= t
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.coeffs

    def pole_part(self) -> "LaurentSeries":
        """Strictly negative powers of eps (exact if the poles are all known)."""
        trunc = None if self.trunc is None or self.trunc >= -1 else self.trunc
        return LaurentSeries({n: c for n, c in self.coeffs.items() if n < 0}, trunc)

    def regular_part(self) -> "LaurentSeries":
        return LaurentSeries({n: c for n, c in self.coeffs.items() if n >= 0}, self.trunc)

    def __repr__(self):
        return f"LaurentSeries({str(self)!r})"

    def __str__(self):
        parts = []
        for n in sorted(self.coeffs):
            c = self.coeffs[n]
            if n == 0:
                parts.append(str(c))
            else:
                parts.append(f"{c}*eps^{n}" if c != 1 else f"eps^{n}")
        if self.trunc is not None:
            parts.append(f"O(eps^{self.trunc + 1})")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "eps": {str(n): f"{c.numerator}/{c.denominator}" for n, c in sorted(self.coeffs.items())},
            "trunc": self.trunc,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LaurentSeries":
        return cls({int(n): Fraction(c) for n, c in data["eps"].items()}, data.get("trunc"))


def pole_part(x: LaurentSeries) -> LaurentSeries:
    return x.pole_part()
