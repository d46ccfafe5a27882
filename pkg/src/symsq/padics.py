"""Fixed-precision p-adic numbers, Hensel lifting, quadratic-field
embeddings into Q_p, and group rings over Z/p^K."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .cyclotomic import QuadraticNumber


class PadicError(ArithmeticError):
    pass


class NonSimpleRootError(PadicError):
    """f'(r0) = 0 mod p: Newton lifting does not apply."""


class PadicNumber:
    """Element of Q_p known to absolute precision O(p^prec).

    Stored as (valuation, unit mod p^(prec - valuation)); exact zero is a
    distinguished value with valuation = None.
    """

    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p: int, val, unit: int, prec: int):
        self.p = p
        if val is None:  # exact zero
            self.val = None
            self.unit = 0
            self.prec = prec
            return
        rel = prec - val
        if rel <= 0:
            # zero to the stated precision
            self.val = None
            self.unit = 0
            self.prec = prec
            return
        unit %= p**rel
        if unit == 0:
            self.val = None
            self.unit = 0
            self.prec = prec
            return
        # normalize so the unit really is a unit
        shift = 0
        while unit % p == 0:
            unit //= p
            shift += 1
        val += shift
        rel = prec - val
        if rel <= 0:
            self.val = None
            self.unit = 0
            self.prec = prec
            return
        self.val = val
        self.unit = unit % p**rel
        self.prec = prec

    # -- constructors --------------------------------------------------
    @classmethod
    def zero(cls, p: int, prec: int) -> "PadicNumber":
        return cls(p, None, 0, prec)

    @classmethod
    def exact_zero(cls, p: int) -> "PadicNumber":
        z = cls(p, None, 0, 10**9)
        return z

    @classmethod
    def from_rational(cls, x, p: int, prec: int) -> "PadicNumber":
        if isinstance(x, int):
            x = Fraction(x)
        if not isinstance(x, Fraction):
            raise TypeError("expected int or Fraction")
        if x == 0:
            return cls.exact_zero(p)
        num, den = x.numerator, x.denominator
        v = 0
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        rel = prec - v
        if rel <= 0:
            return cls.zero(p, prec)
        unit = num * pow(den, -1, p**rel) % p**rel
        return cls(p, v, unit, prec)

    def is_zero(self) -> bool:
        return self.val is None

    def is_exact_zero(self) -> bool:
        return self.val is None and self.prec >= 10**9

    def valuation(self):
        """Valuation; None means >= prec (indistinguishable from zero)."""
        return self.val

    def is_unit(self) -> bool:
        return self.val == 0

    def residue(self, K: int) -> int:
        """The value mod p^K as an integer in [0, p^K); requires val >= 0."""
        if self.val is None:
            return 0
        if self.val < 0:
            raise PadicError("negative valuation has no residue")
        if self.prec < K:
            raise PadicError(f"insufficient precision: O(p^{self.prec}) < p^{K}")
        return self.unit * self.p**self.val % self.p**K

    def digits(self, count: int) -> list[int]:
        """Base-p digits c_0..c_{count-1} of the value (val >= 0 required)."""
        r = self.residue(count)
        out = []
        for _ in range(count):
            out.append(r % self.p)
            r //= self.p
        return out

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise PadicError("mixed primes")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicNumber.from_rational(other, self.p, self.prec)
        raise TypeError(type(other).__name__)

    def __add__(self, other):
        other = self._coerce(other)
        prec = min(self.prec, other.prec)
        if self.val is None:
            return PadicNumber(other.p, other.val, other.unit, min(prec, other.prec))
        if other.val is None:
            return PadicNumber(self.p, self.val, self.unit, prec)
        v = min(self.val, other.val)
        rel = prec - v
        if rel <= 0:
            return PadicNumber.zero(self.p, prec)
        m = self.p**rel
        tot = (
            self.unit * self.p ** (self.val - v) + other.unit * self.p ** (other.val - v)
        ) % m
        return PadicNumber(self.p, v, tot, prec)

    __radd__ = __add__

    def __neg__(self):
        if self.val is None:
            return self
        return PadicNumber(self.p, self.val, -self.unit, self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if self.val is None or other.val is None:
            if self.is_exact_zero() or other.is_exact_zero():
                return PadicNumber.exact_zero(self.p)
            # zero-to-precision: valuation of the product is at least the sum
            # of the known valuation lower bounds
            v_lo = self.val if self.val is not None else self.prec
            w_lo = other.val if other.val is not None else other.prec
            return PadicNumber(self.p, None, 0, v_lo + w_lo)
        rel = min(self.prec - self.val, other.prec - other.val)
        v = self.val + other.val
        unit = self.unit * other.unit % self.p**rel
        return PadicNumber(self.p, v, unit, v + rel)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.val is None:
            raise PadicError("inverse of (indistinguishable-from-)zero")
        rel = self.prec - self.val
        unit = pow(self.unit, -1, self.p**rel)
        return PadicNumber(self.p, -self.val, unit, -self.val + rel)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = PadicNumber.from_rational(1, self.p, self.prec - min(0, (self.val or 0)))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        """Equality to the joint precision."""
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        diff = self - other
        return diff.val is None

    def __hash__(self):
        raise TypeError("PadicNumber compares to joint precision; not hashable")

    def __repr__(self):
        return self.render()

    def render(self, max_terms: int = 12) -> str:
        """Textual expansion "c0 + c1*p + ... + O(p^K)" with 0 <= ci < p."""
        p = self.p
        if self.val is None:
            K = min(self.prec, 10**6)
            return f"O({p}^{K})" if not self.is_exact_zero() else "0"
        terms = []
        v = self.val
        u = self.unit
        rel = self.prec - v
        shown = 0
        for i in range(rel):
            d = u % p
            u //= p
            e = v + i
            if d:
                if e == 0:
                    terms.append(f"{d}")
                elif e == 1:
                    terms.append(f"{d}*{p}")
                elif e < 0:
                    terms.append(f"{d}*{p}^({e})")
                else:
                    terms.append(f"{d}*{p}^{e}")
                shown += 1
                if shown >= max_terms:
                    terms.append("...")
                    break
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O({p}^{self.prec})"


def hensel_root(f_coeffs, p: int, r0: int, K: int) -> PadicNumber:
    """Unique root r = r0 mod p of f in Z_p, to precision O(p^K).

    f_coeffs: integer coefficients, constant term first.  Requires
    f(r0) = 0 mod p and f'(r0) != 0 mod p.
    """
    coeffs = [int(c) for c in f_coeffs]

    def ev(x, mod):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % mod
        return acc

    def ev_deriv(x, mod):
        acc = 0
        for i in range(len(coeffs) - 1, 0, -1):
            acc = (acc * x + i * coeffs[i]) % mod
        return acc

    if ev(r0, p) != 0:
        raise PadicError("r0 is not a root mod p")
    if ev_deriv(r0, p) == 0:
        raise NonSimpleRootError("f'(r0) = 0 mod p (non-simple root)")
    x = r0 % p
    mod = p
    while mod < p**K:
        mod = min(mod * mod, p**K)
        x = (x - ev(x, mod) * pow(ev_deriv(x, mod), -1, mod)) % mod
    return PadicNumber(p, 0, x % p**K, K) if x % p else PadicNumber.from_rational(x, p, K)


@dataclass(frozen=True)
class PadicEmbedding:
    """Embedding of Q(sqrt(d)) into Q_p selected by a generator a + b*sqrt(d)
    of a degree-1 prime above p: the root r of X^2 - d is pinned by
    r = -a/b mod p and then Hensel-lifted."""

    d: int
    p: int
    a: int
    b: int
    K: int

    def __post_init__(self):
        q = QuadraticNumber(self.d, self.a, self.b)
        norm = q.norm()
        if norm % self.p != 0:
            raise PadicError(f"{self.a} + {self.b}*sqrt({self.d}) does not generate a prime above {self.p}")
        if self.b % self.p == 0:
            raise PadicError("degenerate generator: b = 0 mod p")

    def root(self) -> PadicNumber:
        r0 = (-self.a * pow(self.b, -1, self.p)) % self.p
        return hensel_root([-self.d, 0, 1], self.p, r0, self.K)

    def __call__(self, x: QuadraticNumber, K: int | None = None) -> PadicNumber:
        return embed_quadratic(x, self, K or self.K)


def embed_quadratic(x: QuadraticNumber, emb: PadicEmbedding, K: int | None = None) -> PadicNumber:
    """Ring-homomorphic image of a + b*sqrt(d) in Q_p under the embedding."""
    if x.d != emb.d:
        raise PadicError("field mismatch")
    K = K or emb.K
    p = emb.p
    for part in (x.a, x.b):
        if part.denominator % p == 0:
            raise PadicError(f"denominator divisible by p = {p}")
    r = hensel_root([-emb.d, 0, 1], p, (-emb.a * pow(emb.b, -1, p)) % p, K + 2)
    av = PadicNumber.from_rational(x.a, p, K + 2)
    bv = PadicNumber.from_rational(x.b, p, K + 2)
    out = av + bv * r
    return PadicNumber(p, out.val, out.unit, min(out.prec, K))


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """Tonelli-Shanks; None when a is a non-residue."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = q 2^s
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


class GroupRingElt:
    """Element of (Z/p^K)[G] for a finite abelian G given by cyclic factor orders."""

    __slots__ = ("p", "K", "orders", "coeffs")

    def __init__(self, p: int, K: int, orders: tuple[int, ...], coeffs=None):
        self.p = p
        self.K = K
        self.orders = tuple(int(o) for o in orders)
        self.coeffs = dict(coeffs or {})
        m = p**K
        self.coeffs = {g: c % m for g, c in self.coeffs.items() if c % m}

    @classmethod
    def one(cls, p: int, K: int, orders) -> "GroupRingElt":
        return cls(p, K, orders, {tuple(0 for _ in orders): 1})

    @classmethod
    def group_element(cls, p: int, K: int, orders, g, coeff: int = 1) -> "GroupRingElt":
        g = tuple(gi % o for gi, o in zip(g, orders))
        return cls(p, K, orders, {g: coeff})

    def elements(self):
        return product(*(range(o) for o in self.orders))

    def __add__(self, other):
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, 0) + c
        return GroupRingElt(self.p, self.K, self.orders, out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, 0) - c
        return GroupRingElt(self.p, self.K, self.orders, out)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElt(self.p, self.K, self.orders,
                                {g: c * other for g, c in self.coeffs.items()})
        out: dict = {}
        for g, c in self.coeffs.items():
            for h, d in other.coeffs.items():
                gh = tuple((a + b) % o for a, b, o in zip(g, h, self.orders))
                out[gh] = out.get(gh, 0) + c * d
        return GroupRingElt(self.p, self.K, self.orders, out)

    __rmul__ = __mul__

    def is_one(self) -> bool:
        ident = tuple(0 for _ in self.orders)
        return self.coeffs == {ident: 1}

    def __eq__(self, other):
        return (self.orders, self.coeffs) == (other.orders, other.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*g{list(g)}" for g, c in sorted(self.coeffs.items()))


def groupring_invert(x: GroupRingElt):
    """Inverse in (Z/p^K)[G], or None when not invertible.

    Inverts the multiplication matrix mod p by Gaussian elimination, then
    Newton-lifts y -> y(2 - xy) up to p^K.
    """
    p, K = x.p, x.K
    elems = list(x.elements())
    index = {g: i for i, g in enumerate(elems)}
    n = len(elems)
    # multiplication-by-x matrix mod p
    mat = [[0] * n for _ in range(n)]
    for g, c in x.coeffs.items():
        for j, h in enumerate(elems):
            gh = tuple((a + b) % o for a, b, o in zip(g, h, x.orders))
            mat[index[gh]][j] = (mat[index[gh]][j] + c) % p
    # solve mat * y = e_identity mod p
    ident = index[tuple(0 for _ in x.orders)]
    aug = [row[:] + [1 if i == ident else 0] for i, row in enumerate(mat)]
    col = 0
    for colv in range(n):
        piv = next((r for r in range(col, n) if aug[r][colv] % p), None)
        if piv is None:
            return None  # singular mod p: not invertible
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][colv], -1, p)
        aug[col] = [v * inv % p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][colv]:
                f = aug[r][colv]
                aug[r] = [(v - f * w) % p for v, w in zip(aug[r], aug[col])]
        col += 1
    y = GroupRingElt(p, K, x.orders,
                     {elems[i]: aug[i][n] for i in range(n) if aug[i][n]})
    one = GroupRingElt.one(p, K, x.orders)
    two = one * 2
    # Newton lifting doubles the precision each step
    steps = max(1, math.ceil(math.log2(K))) + 1
    for _ in range(steps):
        y = y * (two - x * y)
    assert (x * y).is_one(), "group-ring Newton lift failed"
    return y
