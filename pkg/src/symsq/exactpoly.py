"""Univariate polynomials over the cyclotomic ring (exact coefficients)."""

from __future__ import annotations

from fractions import Fraction

from .cyclotomic import Cyclotomic


def _as_cyclotomic(c, n: int = 1) -> Cyclotomic:
    if isinstance(c, Cyclotomic):
        return c
    if isinstance(c, (int, Fraction)):
        return Cyclotomic.from_rational(c, n)
    raise TypeError(f"bad coefficient type {type(c).__name__}")


class ExactPoly:
    """Polynomial sum c_i X^i; the zero polynomial has empty coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_as_cyclotomic(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c) -> "ExactPoly":
        return cls([c])

    @classmethod
    def x(cls) -> "ExactPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Cyclotomic:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coefficient(self, i: int) -> Cyclotomic:
        return self.coeffs[i] if 0 <= i <= self.degree else Cyclotomic.zero(1)

    def __add__(self, other):
        other = other if isinstance(other, ExactPoly) else ExactPoly.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return ExactPoly([
            self.coefficient(i) + other.coefficient(i) for i in range(n)
        ])

    __radd__ = __add__

    def __neg__(self):
        return ExactPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = other if isinstance(other, ExactPoly) else ExactPoly.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            c = _as_cyclotomic(other)
            return ExactPoly([ci * c for ci in self.coeffs])
        if self.is_zero() or other.is_zero():
            return ExactPoly()
        out = [Cyclotomic.zero(1) for _ in range(self.degree + other.degree + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return ExactPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactPoly.constant(other)
        if not isinstance(other, ExactPoly):
            return NotImplemented
        if self.degree != other.degree:
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        """Evaluate by Horner; x may be Cyclotomic, int, or Fraction."""
        acc = Cyclotomic.zero(1)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def substitute_scaled(self, scale) -> "ExactPoly":
        """P(scale * X): multiplies c_i by scale^i."""
        scale = _as_cyclotomic(scale)
        out = []
        power = Cyclotomic.one(scale.n)
        for c in self.coeffs:
            out.append(c * power)
            power = power * scale
        return ExactPoly(out)

    def __repr__(self):
        if self.is_zero():
            return "ExactPoly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if i == 0:
                parts.append(f"({c})")
            elif i == 1:
                parts.append(f"({c})*X")
            else:
                parts.append(f"({c})*X^{i}")
        return " + ".join(parts)
