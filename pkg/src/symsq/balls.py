"""Mid/rad ball arithmetic over mpmath floats.

Every operation returns a ball whose radius bounds the distance from the
true image of the input balls.  Midpoints are computed with mpmath at the
current working precision; basic operations there are correctly rounded,
transcendental ones are accurate to a few ulp, and every ball op adds a
2^(4-prec)*|mid| allowance on top of the propagated input radii.  Radii
are kept as Python floats and every radius computation is inflated by
RUP, so float rounding cannot shrink them.
"""

from __future__ import annotations

import math
from fractions import Fraction

from mpmath import mp, mpc, mpf, workprec

# upward fudge for float radius arithmetic (float ops err by <= 2^-52)
RUP = 1.0 + 1e-9
_TINY = 5e-324

DEFAULT_PREC = 128


class PrecisionError(ArithmeticError):
    """Raised when a ball is too wide for the requested operation."""


def _slack(mid_abs: float) -> float:
    # rounding allowance for the midpoint computation
    return (mid_abs * (2.0 ** (4 - mp.prec)) + _TINY) * RUP


def _absf(x) -> float:
    try:
        v = float(abs(x))
    except OverflowError:
        return math.inf
    if math.isinf(v):
        return math.inf
    return v


def _abs_upper(x) -> float:
    v = _absf(x)
    return v * RUP + _TINY if math.isfinite(v) else math.inf


class BallReal:
    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad: float = 0.0):
        if isinstance(mid, (int, Fraction)):
            mid, extra = _exact_to_mpf(mid)
            rad = (rad + extra) * RUP
        self.mid = mpf(mid) if not isinstance(mid, mpf) else mid
        self.rad = float(rad)
        if not (self.rad >= 0.0) or math.isnan(self.rad):
            raise ValueError("radius must be a nonnegative float")

    # -- constructors ------------------------------------------------
    @classmethod
    def exact(cls, x) -> "BallReal":
        return cls(x, 0.0)

    @classmethod
    def pi(cls) -> "BallReal":
        return cls(mp.pi, _slack(3.15))

    # -- queries -----------------------------------------------------
    def abs_upper(self) -> float:
        return (_abs_upper(self.mid) + self.rad) * RUP

    def abs_lower(self) -> float:
        v = _absf(self.mid) - self.rad
        return max(v / RUP, 0.0)

    def contains(self, x) -> bool:
        with workprec(mp.prec + 60):
            diff = abs(self.mid - (x.mid if isinstance(x, BallReal) else mpf(x)))
            other = x.rad if isinstance(x, BallReal) else 0.0
            return float(diff) <= (self.rad - other) * RUP + _TINY or diff <= self.rad - other

    def overlaps(self, other: "BallReal") -> bool:
        diff = _absf(self.mid - other.mid)
        return diff <= (self.rad + other.rad) * RUP + _TINY

    def __repr__(self):
        return f"BallReal({mp.nstr(self.mid, 20)} +/- {self.rad:.3e})"

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = _as_ball_real(other)
        m = self.mid + other.mid
        return BallReal(m, (self.rad + other.rad + _slack(_absf(m))) * RUP)

    __radd__ = __add__

    def __neg__(self):
        return BallReal(-self.mid, self.rad)

    def __sub__(self, other):
        return self + (-_as_ball_real(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_ball_real(other)
        m = self.mid * other.mid
        r = (
            _abs_upper(self.mid) * other.rad
            + _abs_upper(other.mid) * self.rad
            + self.rad * other.rad
            + _slack(_absf(m))
        ) * RUP
        return BallReal(m, r)

    __rmul__ = __mul__

    def reciprocal(self):
        low = self.abs_lower()
        if low <= 0.0:
            raise PrecisionError("reciprocal of a ball containing 0")
        m = 1 / self.mid
        r = (self.rad / (low * (low / RUP)) + _slack(_absf(m))) * RUP
        return BallReal(m, r)

    def __truediv__(self, other):
        return self * _as_ball_real(other).reciprocal()

    def __rtruediv__(self, other):
        return _as_ball_real(other) * self.reciprocal()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("use exp/log for non-integer powers")
        if e < 0:
            return (self ** (-e)).reciprocal()
        result = BallReal.exact(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def sqrt(self):
        if float(self.mid) - self.rad < 0:
            raise PrecisionError("sqrt of a ball touching the negative axis")
        m = mp.sqrt(self.mid)
        low = float(self.mid) - self.rad
        if low > 0:
            r = self.rad / (2 * math.sqrt(low) / RUP)
        else:
            r = math.sqrt(self.rad * RUP)
        return BallReal(m, (r + _slack(_absf(m))) * RUP)

    def exp(self):
        m = mp.exp(self.mid)
        if self.rad > 1.4:
            raise PrecisionError("exp of a wide ball")
        growth = 1.0 + self.rad + self.rad * self.rad
        r = (_abs_upper(m) * self.rad * growth + _slack(_absf(m))) * RUP
        return BallReal(m, r)

    def log(self):
        low = self.abs_lower()
        if low <= 0.0 or float(self.mid) < 0:
            raise PrecisionError("log of a ball touching (-inf, 0]")
        m = mp.log(self.mid)
        return BallReal(m, (self.rad / (low / RUP) + _slack(_absf(m))) * RUP)

    def power(self, s) -> "BallReal":
        """self**s for ball/real exponent via exp(s*log(self))."""
        return (self.log() * _as_ball_real(s)).exp()


class BallComplex:
    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad: float = 0.0):
        if isinstance(mid, BallReal):
            rad = (rad + mid.rad) * RUP
            mid = mid.mid
        if isinstance(mid, (int, Fraction)):
            mid, extra = _exact_to_mpf(mid)
            rad = (rad + extra) * RUP
        self.mid = mpc(mid)
        self.rad = float(rad)
        if not (self.rad >= 0.0) or math.isnan(self.rad):
            raise ValueError("radius must be a nonnegative float")

    @classmethod
    def exact(cls, re, im=0) -> "BallComplex":
        re_m, r1 = _exact_to_mpf(re)
        im_m, r2 = _exact_to_mpf(im)
        return cls(mpc(re_m, im_m), (r1 + r2) * RUP)

    @classmethod
    def from_real(cls, x: BallReal) -> "BallComplex":
        return cls(x.mid, x.rad)

    def abs_upper(self) -> float:
        return (_abs_upper(self.mid) + self.rad) * RUP

    def abs_lower(self) -> float:
        v = _absf(self.mid) - self.rad
        return max(v / RUP, 0.0)

    def real(self) -> BallReal:
        return BallReal(self.mid.real, self.rad)

    def imag(self) -> BallReal:
        return BallReal(self.mid.imag, self.rad)

    def conjugate(self) -> "BallComplex":
        return BallComplex(mp.conj(self.mid), self.rad)

    def abs_ball(self) -> BallReal:
        m = abs(self.mid)
        return BallReal(m, (self.rad + _slack(_absf(m))) * RUP)

    def contains(self, z) -> bool:
        with workprec(mp.prec + 60):
            zm = z.mid if isinstance(z, BallComplex) else mpc(z)
            zr = z.rad if isinstance(z, BallComplex) else 0.0
            diff = abs(self.mid - zm)
            return float(diff) <= (self.rad - zr) * RUP + _TINY or diff <= self.rad - zr

    def overlaps(self, other: "BallComplex") -> bool:
        diff = _absf(self.mid - other.mid)
        return diff <= (self.rad + other.rad) * RUP + _TINY

    def __repr__(self):
        return f"BallComplex({mp.nstr(self.mid, 20)} +/- {self.rad:.3e})"

    def __add__(self, other):
        other = _as_ball_complex(other)
        m = self.mid + other.mid
        return BallComplex(m, (self.rad + other.rad + _slack(_absf(m))) * RUP)

    __radd__ = __add__

    def __neg__(self):
        return BallComplex(-self.mid, self.rad)

    def __sub__(self, other):
        return self + (-_as_ball_complex(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_ball_complex(other)
        m = self.mid * other.mid
        r = (
            _abs_upper(self.mid) * other.rad
            + _abs_upper(other.mid) * self.rad
            + self.rad * other.rad
            + _slack(_absf(m))
        ) * RUP
        return BallComplex(m, r)

    __rmul__ = __mul__

    def reciprocal(self):
        low = self.abs_lower()
        if low <= 0.0:
            raise PrecisionError("reciprocal of a ball containing 0")
        m = 1 / self.mid
        r = (self.rad / (low * (low / RUP)) + _slack(_absf(m))) * RUP
        return BallComplex(m, r)

    def __truediv__(self, other):
        return self * _as_ball_complex(other).reciprocal()

    def __rtruediv__(self, other):
        return _as_ball_complex(other) * self.reciprocal()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("use exp/log for non-integer powers")
        if e < 0:
            return (self ** (-e)).reciprocal()
        result = BallComplex.exact(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def exp(self):
        m = mp.exp(self.mid)
        if self.rad > 1.4:
            raise PrecisionError("exp of a wide ball")
        growth = 1.0 + self.rad + self.rad * self.rad
        r = (_abs_upper(m) * self.rad * growth + _slack(_absf(m))) * RUP
        return BallComplex(m, r)

    def log(self):
        low = self.abs_lower()
        if low <= 0.0:
            raise PrecisionError("log of a ball containing 0")
        m = mp.log(self.mid)
        return BallComplex(m, (self.rad / (low / RUP) + _slack(_absf(m))) * RUP)

    def power(self, s) -> "BallComplex":
        return (self.log() * _as_ball_complex(s)).exp()


def _exact_to_mpf(x):
    """(midpoint, radius) for an exact int or Fraction at current precision."""
    if isinstance(x, int):
        m = mpf(x)
        err = 0.0 if int(m) == x else _abs_upper(mpf(x) - m)
        if err:  # recompute difference at higher precision
            with workprec(mp.prec + 64):
                err = _abs_upper(mpf(x) - m)
        return m, err
    if isinstance(x, Fraction):
        with workprec(mp.prec + 20):
            hi = mpf(x.numerator) / x.denominator
        m = +hi  # round to working precision
        err = (_abs_upper(m) * 2.0 ** (2 - mp.prec) + _TINY) * RUP
        return mpf(m), err
    if isinstance(x, float):
        return mpf(x), 0.0
    return mpf(x), 0.0


def _as_ball_real(x) -> BallReal:
    if isinstance(x, BallReal):
        return x
    if isinstance(x, (int, Fraction, float, mpf)):
        return BallReal(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to BallReal")


def _as_ball_complex(x) -> BallComplex:
    if isinstance(x, BallComplex):
        return x
    if isinstance(x, BallReal):
        return BallComplex.from_real(x)
    if isinstance(x, (int, Fraction, float, complex, mpf, mpc)):
        return BallComplex(mpc(x))
    raise TypeError(f"cannot coerce {type(x).__name__} to BallComplex")


def gamma(s) -> BallComplex:
    """Gamma function ball; input must stay away from the poles.

    The radius is propagated through a first-order bound |Gamma'| =
    |Gamma * psi0| inflated to cover the whole input disk.
    """
    s = _as_ball_complex(s)
    # distance to nearest pole (non-positive integers)
    re, im = float(s.mid.real), float(s.mid.imag)
    nearest = round(re) if re < 0.5 else 0
    pole_dist = math.hypot(re - min(nearest, 0), im)
    if pole_dist <= 4 * s.rad + 1e-300:
        raise PrecisionError("gamma ball encloses or touches a pole")
    m = mp.gamma(s.mid)
    if s.rad == 0.0:
        return BallComplex(m, _slack(_absf(m)) * RUP)
    psi0 = _abs_upper(mp.digamma(s.mid))
    # second-order headroom: require the derivative bound to be trustworthy
    if s.rad * (psi0 + 2.0 / pole_dist) > 0.25:
        raise PrecisionError("gamma ball too wide for derivative bound")
    deriv = _abs_upper(m) * (psi0 + 2.0 * s.rad * (psi0 * psi0 + 2.0)) * RUP
    return BallComplex(m, (deriv * s.rad + _slack(_absf(m))) * RUP)


def gamma_real(x) -> BallReal:
    b = gamma(_as_ball_real(x))
    return BallReal(b.mid.real, b.rad)


def ball_sum(items, zero=None):
    """Sum in fixed iteration order (deterministic reduction)."""
    total = zero
    for it in items:
        total = it if total is None else total + it
    if total is None:
        raise ValueError("empty sum needs an explicit zero")
    return total


def certified_digits(ball) -> int:
    """Number of correct significant digits guaranteed by the ball."""
    mid = _absf(ball.mid)
    if ball.rad == 0.0:
        return 10**6
    if mid == 0.0:
        return 0
    return max(0, int(math.floor(-math.log10(ball.rad / mid))))


def agree_digits(b1, b2) -> int:
    """Joint certified agreement of two balls, in significant digits."""
    diff = _absf(b1.mid - b2.mid) + b1.rad + b2.rad
    scale = max(_absf(b1.mid), _absf(b2.mid))
    if diff == 0.0:
        return 10**6
    if scale == 0.0:
        return 0
    return max(0, int(math.floor(-math.log10(diff / scale))))
