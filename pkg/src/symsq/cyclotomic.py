"""Exact arithmetic in cyclotomic fields Q(zeta_n) and quadratic fields Q(sqrt(d)).

Elements are stored with Fraction coefficients on the power basis
1, zeta, ..., zeta^(phi(n)-1), reduced modulo the n-th cyclotomic
polynomial so that equality testing is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from sympy import Poly, Symbol, cyclotomic_poly


def euler_phi(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first."""
    x = Symbol("x")
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(n, x), x).all_coeffs()))


@lru_cache(maxsize=None)
def _power_reduction_rows(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Row j = coordinates of zeta_n^(phi(n)+j) on the power basis, for j < phi(n)."""
    d = euler_phi(n)
    phi = _cyclotomic_coeffs(n)
    # zeta^d = -(phi[0] + phi[1] z + ... + phi[d-1] z^(d-1)) since Phi_n is monic
    rows = []
    cur = [Fraction(-phi[i]) for i in range(d)]
    rows.append(tuple(cur))
    for _ in range(d - 1):
        top = cur[d - 1]
        cur = [Fraction(0)] + cur[: d - 1]
        if top:
            base = rows[0]
            cur = [cur[i] + top * base[i] for i in range(d)]
        rows.append(tuple(cur))
    return tuple(rows)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


class Cyclotomic:
    """Element of Q(zeta_n) on the power basis, canonically reduced mod Phi_n."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs=None):
        if n < 1:
            raise ValueError("order must be positive")
        self.n = n
        d = euler_phi(n)
        if coeffs is None:
            self.coeffs = tuple(Fraction(0) for _ in range(d))
            return
        coeffs = [_as_fraction(c) for c in coeffs]
        if len(coeffs) > d:
            coeffs = self._reduce(n, coeffs)
        elif len(coeffs) < d:
            coeffs = coeffs + [Fraction(0)] * (d - len(coeffs))
        self.coeffs = tuple(coeffs)

    @staticmethod
    def _reduce(n: int, coeffs: list[Fraction]) -> list[Fraction]:
        """Reduce a raw power-basis vector of arbitrary length mod Phi_n."""
        d = euler_phi(n)
        rows = _power_reduction_rows(n)
        work = list(coeffs)
        for deg in range(len(work) - 1, d - 1, -1):
            c = work[deg]
            if not c:
                continue
            work[deg] = Fraction(0)
            shift = deg - d
            if shift < d:
                row = rows[shift]
                for i in range(d):
                    work[i] += c * row[i]
            else:
                # X^deg = X^shift * X^d; distributing strictly lowers the top degree
                row = rows[0]
                for i in range(d):
                    work[shift + i] += c * row[i]
        return work[:d]

    @staticmethod
    def _high_power_row(n: int, power: int) -> tuple[Fraction, ...]:
        power %= n
        d = euler_phi(n)
        if power < d:
            return tuple(Fraction(1) if i == power else Fraction(0) for i in range(d))
        mono = [Fraction(0)] * power + [Fraction(1)]
        return tuple(Cyclotomic._reduce(n, mono))

    @classmethod
    def zero(cls, n: int) -> "Cyclotomic":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "Cyclotomic":
        return cls(n, [Fraction(1)])

    @classmethod
    def from_rational(cls, q, n: int = 1) -> "Cyclotomic":
        return cls(n, [_as_fraction(q)])

    @classmethod
    def zeta(cls, n: int, power: int = 1) -> "Cyclotomic":
        """zeta_n^power as an exact element."""
        power %= n
        d = euler_phi(n)
        if power < d:
            return cls(n, [Fraction(0)] * power + [Fraction(1)])
        return cls(n, list(cls._high_power_row(n, power)))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_part(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0]

    def promote(self, m: int) -> "Cyclotomic":
        """Image in Q(zeta_m) for n | m, via zeta_n = zeta_m^(m/n)."""
        if m == self.n:
            return self
        if m % self.n != 0:
            raise ValueError(f"{self.n} does not divide {m}")
        step = m // self.n
        out = Cyclotomic.zero(m)
        for j, c in enumerate(self.coeffs):
            if c:
                out = out + Cyclotomic.zeta(m, j * step) * Cyclotomic.from_rational(c, m)
        return out

    @staticmethod
    def common_order(a: "Cyclotomic", b: "Cyclotomic"):
        if a.n == b.n:
            return a, b
        m = a.n * b.n // math.gcd(a.n, b.n)
        return a.promote(m), b.promote(m)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(other, self.n)
        a, b = Cyclotomic.common_order(self, other)
        return Cyclotomic(a.n, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, [-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(other, self.n)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
            return Cyclotomic(self.n, [c * q for c in self.coeffs])
        a, b = Cyclotomic.common_order(self, other)
        d = euler_phi(a.n)
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(a.n, prod)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclotomic.one(self.n)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "Cyclotomic":
        """Inverse via linear algebra over Q (multiplication matrix solve)."""
        if self.is_zero():
            raise ZeroDivisionError("cyclotomic division by zero")
        if self.is_rational():
            return Cyclotomic.from_rational(1 / self.coeffs[0], self.n)
        d = euler_phi(self.n)
        # columns: self * zeta^j
        cols = []
        cur = self
        zeta = Cyclotomic.zeta(self.n)
        for _ in range(d):
            cols.append(cur.coeffs)
            cur = cur * zeta
        # solve M x = e_0 by Gaussian elimination over Fraction
        mat = [[cols[j][i] for j in range(d)] + [Fraction(1 if i == 0 else 0)] for i in range(d)]
        for col in range(d):
            piv = next(r for r in range(col, d) if mat[r][col] != 0)
            mat[col], mat[piv] = mat[piv], mat[col]
            inv = 1 / mat[col][col]
            mat[col] = [v * inv for v in mat[col]]
            for r in range(d):
                if r != col and mat[r][col]:
                    f = mat[r][col]
                    mat[r] = [v - f * w for v, w in zip(mat[r], mat[col])]
        return Cyclotomic(self.n, [mat[i][d] for i in range(d)])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
            return Cyclotomic(self.n, [c / q for c in self.coeffs])
        return self * other.inverse()

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugation, zeta |-> zeta^(-1)."""
        return self.galois_map(self.n - 1) if self.n > 1 else self

    def galois_map(self, a: int) -> "Cyclotomic":
        """Galois automorphism zeta |-> zeta^a, for gcd(a, n) = 1."""
        if math.gcd(a, self.n) != 1:
            raise ValueError("not an automorphism")
        out = Cyclotomic.zero(self.n)
        for j, c in enumerate(self.coeffs):
            if c:
                out = out + Cyclotomic.zeta(self.n, (j * a) % self.n) * c
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = Cyclotomic.common_order(self, other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.n, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if j == 0:
                parts.append(str(c))
            else:
                mono = f"z{self.n}" if j == 1 else f"z{self.n}^{j}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


class QuadraticNumber:
    """a + b*sqrt(d) with exact rational a, b and square-free d != 0, 1."""

    __slots__ = ("d", "a", "b")

    def __init__(self, d: int, a=0, b=0):
        if d in (0, 1) or not _is_squarefree(d):
            raise ValueError("d must be square-free and distinct from 0, 1")
        self.d = d
        self.a = _as_fraction(a)
        self.b = _as_fraction(b)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(self.d, self.a + other, self.b)
        self._check(other)
        return QuadraticNumber(self.d, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(self.d, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-other if isinstance(other, QuadraticNumber) else QuadraticNumber(self.d, -_as_fraction(other)))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(self.d, self.a * other, self.b * other)
        self._check(other)
        return QuadraticNumber(
            self.d,
            self.a * other.a + self.d * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return QuadraticNumber(self.d, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("quadratic division by zero")
        return QuadraticNumber(self.d, self.a / n, -self.b / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(self.d, self.a / other, self.b / other)
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return isinstance(other, QuadraticNumber) and (self.d, self.a, self.b) == (other.d, other.a, other.b)

    def __hash__(self):
        return hash((self.d, self.a, self.b))

    def _check(self, other):
        if self.d != other.d:
            raise ValueError("mixed quadratic fields")

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.d})"


def _is_squarefree(d: int) -> bool:
    d = abs(d)
    if d == 0:
        return False
    p = 2
    while p * p <= d:
        if d % (p * p) == 0:
            return False
        if d % p == 0:
            d //= p
        p += 1
    return True


def _sqrt_as_cyclotomic(d: int) -> Cyclotomic:
    """sqrt(d) inside Q(zeta_m), principal branch (d>0: positive real;
    d<0: positive imaginary part).

    Uses quadratic Gauss sums: sum_a (a|p) zeta_p^a equals sqrt(p) for
    p = 1 mod 4 and i*sqrt(p) for p = 3 mod 4.
    """
    if d in (0, 1) or not _is_squarefree(d):
        raise ValueError("d must be square-free, not 0 or 1")
    m = 4 * abs(d)
    out = Cyclotomic.one(m)
    rem = d
    if rem < 0:
        out = out * Cyclotomic.zeta(m, m // 4)  # i
        rem = -rem
    if rem % 2 == 0:
        # sqrt(2) = zeta_8 + zeta_8^-1
        z8 = Cyclotomic.zeta(m, m // 8)
        out = out * (z8 + z8.galois_map(m - 1))
        rem //= 2
    p = 3
    while rem > 1:
        while rem % p:
            p += 2
        rem //= p
        g = Cyclotomic.zero(m)
        for a in range(1, p):
            ls = pow(a, (p - 1) // 2, p)
            sign = 1 if ls == 1 else -1
            g = g + sign * Cyclotomic.zeta(m, a * (m // p))
        if p % 4 == 3:
            # Gauss sum equals i*sqrt(p); divide out the i
            g = g * Cyclotomic.zeta(m, m // 4).inverse()
        out = out * g
    return out


def quadratic_to_cyclotomic(x: QuadraticNumber) -> Cyclotomic:
    root = _sqrt_as_cyclotomic(x.d)
    return root * x.b + Cyclotomic.from_rational(x.a, root.n)


def cyclotomic_to_quadratic(x: Cyclotomic, d: int) -> QuadraticNumber:
    """Inverse conversion; raises ValueError if x does not lie in Q(sqrt(d))."""
    root = _sqrt_as_cyclotomic(d)
    m = root.n
    xm = x.promote(m) if m % x.n == 0 else x.promote(m * x.n // math.gcd(m, x.n))
    if xm.n != m:
        root = root.promote(xm.n)
        m = xm.n
    # solve a + b*root = x on the power basis
    a_coeffs = Cyclotomic.one(m).coeffs
    b_coeffs = root.coeffs
    a_val = None
    b_val = None
    # two unknowns, phi(m) equations: pick pivot positions then verify all
    for i in range(len(a_coeffs)):
        det_rows = []
        for j in range(i + 1, len(a_coeffs)):
            det = a_coeffs[i] * b_coeffs[j] - a_coeffs[j] * b_coeffs[i]
            if det != 0:
                det_rows.append((i, j, det))
                break
        if det_rows:
            i0, j0, det = det_rows[0]
            a_val = (xm.coeffs[i0] * b_coeffs[j0] - xm.coeffs[j0] * b_coeffs[i0]) / det
            b_val = (a_coeffs[i0] * xm.coeffs[j0] - a_coeffs[j0] * xm.coeffs[i0]) / det
            break
    if a_val is None:
        raise ValueError("degenerate basis")
    cand = QuadraticNumber(d, a_val, b_val)
    if quadratic_to_cyclotomic(cand).promote(m) == xm:
        return cand
    raise ValueError("element does not lie in the requested quadratic field")
