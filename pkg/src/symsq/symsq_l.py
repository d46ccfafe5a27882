"""Symmetric-square L-functions: local factors, Dirichlet coefficients,
complex evaluation, normalized critical-value ratios, algebraic
recognition, and p-adic interpolation multipliers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, workprec

from .balls import (BallComplex, BallReal, PrecisionError, ball_sum,
                    certified_digits)
from .cyclotomic import Cyclotomic, QuadraticNumber, quadratic_to_cyclotomic
from .dirichlet import (DirichletCharacter, embed_cyclotomic_complex,
                        gauss_sum)
from .exactpoly import ExactPoly
from .modforms import HeckeData, QExpansion
from .padics import PadicEmbedding, PadicError, PadicNumber
from .quadrature import FundamentalDomainStrip, integrate_2d


class DomainError(ValueError):
    pass


class TailDominatesError(ArithmeticError):
    """The requested accuracy is unreachable at the given truncation."""


class NonCriticalPointError(ValueError):
    pass


class InsufficientCoefficientsError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Descriptors and local factors
# ---------------------------------------------------------------------------

@dataclass
class SymSqDescriptor:
    """A symmetric square L-series L^imp(Sym^2 f, chi, s)."""

    hecke: HeckeData
    twist: DirichletCharacter
    level: int = 1
    primitive: bool = True  # for trivial nebentypus, square-free level: imp = primitive

    @property
    def weight(self) -> int:
        return self.hecke.weight

    def conjugate(self) -> "SymSqDescriptor":
        return SymSqDescriptor(hecke=self.hecke, twist=self.twist.inverse(),
                               level=self.level, primitive=self.primitive)


def euler_factor_symsq(h: HeckeData, chi: DirichletCharacter, ell: int,
                       level: int = 1) -> ExactPoly:
    """Local factor of Sym^2 f twisted by chi at ell, coefficients exact.

    For ell coprime to the level: (1 - a^2 X)(1 - ab X)(1 - b^2 X) with
    a, b the Hecke roots, expanded through symmetric functions (never
    extracting roots):
        e1 = a_l^2 - D,   e2 = D e1,   e3 = D^3,   D = l^(k-1) eps(l),
    then X -> chi(l) X.  For ell dividing the level the convention
    a = a_l, b = 0 applies; for ell dividing N_chi the factor is 1.
    """
    cval = chi.value(ell)
    if cval.is_zero():
        return ExactPoly([1])
    a_l = h.prime_eigenvalues.get(ell)
    if a_l is None:
        from .modforms import MissingPrimeError

        raise MissingPrimeError([ell])
    k = h.weight
    if level % ell == 0:
        # imprimitive convention: beta = 0
        poly = ExactPoly([1, -(Cyclotomic.from_rational(a_l * a_l))])
    else:
        D = Cyclotomic.from_rational(ell ** (k - 1)) * h.eps_value(ell)
        e1 = Cyclotomic.from_rational(a_l * a_l) - D
        e2 = D * e1
        e3 = D * D * D
        poly = ExactPoly([1, -e1, e2, -e3])
    return poly.substitute_scaled(cval)


def euler_factor_rankin(h: HeckeData, chi: DirichletCharacter, ell: int,
                        level: int = 1) -> ExactPoly:
    """Degree-4 local factor of f x f twisted by chi, from symmetric functions.

    Roots are {a^2, ab, ab, b^2}: with S = a_l^2 and D = l^(k-1) eps(l),
        s1 = S, s2 = 2 D S - 2 D^2, s3 = D^2 S, s4 = D^4.
    """
    cval = chi.value(ell)
    if cval.is_zero():
        return ExactPoly([1])
    a_l = h.prime_eigenvalues[ell]
    k = h.weight
    if level % ell == 0:
        return ExactPoly([1, -(Cyclotomic.from_rational(a_l * a_l))])
    S = Cyclotomic.from_rational(a_l * a_l)
    D = Cyclotomic.from_rational(ell ** (k - 1)) * h.eps_value(ell)
    s1 = S
    s2 = D * S * 2 - D * D * 2
    s3 = D * D * S
    s4 = (D * D) * (D * D)
    poly = ExactPoly([1, -s1, s2, -s3, s4])
    return poly.substitute_scaled(cval)


@dataclass(frozen=True)
class FactorizationVerdict:
    holds: bool
    rankin: ExactPoly
    product: ExactPoly
    theorem_a_quartic: ExactPoly | None = None


def factorization_identity_check(h: HeckeData, psi: DirichletCharacter,
                                 ell: int, level: int = 1) -> FactorizationVerdict:
    """Exact check that the rank-4 local factor of f x f x psi splits as
    (1 - l^(k-1) psi eps(l) X) * (Sym^2 local factor), and that for level 1
    and trivial psi both equal the quartic
        (1 - l^(k-1) X)^2 (1 - (a_l^2 - 2 l^(k-1)) X + l^(2k-2) X^2).
    """
    quartic = euler_factor_rankin(h, psi, ell, level)
    k = h.weight
    D = Cyclotomic.from_rational(ell ** (k - 1)) * h.eps_value(ell)
    linear = ExactPoly([1, -(D * psi.value(ell))])
    product = linear * euler_factor_symsq(h, psi, ell, level)
    theorem_a = None
    if psi.is_trivial() and h.eps is None and level == 1:
        a_l = h.prime_eigenvalues[ell]
        lk = ell ** (k - 1)
        theorem_a = (
            ExactPoly([1, -lk]) * ExactPoly([1, -lk])
            * ExactPoly([1, -(a_l * a_l - 2 * lk), lk * lk])
        )
    holds = quartic == product and (theorem_a is None or quartic == theorem_a)
    return FactorizationVerdict(holds=holds, rankin=quartic, product=product,
                                theorem_a_quartic=theorem_a)


# ---------------------------------------------------------------------------
# Dirichlet coefficients of the imprimitive series
# ---------------------------------------------------------------------------

def symsq_dirichlet_coeffs(desc: SymSqDescriptor, n_max: int) -> list[Cyclotomic]:
    """Coefficients b_1..b_n of L^imp(Sym^2 f, chi, s) = sum b_n n^(-s).

    b_n = sum over n = j m^2 of a_{j^2} chi(j) theta(m) m^(2k-2), where
    theta = (chi eps)^2 with the factors at primes dividing the level and
    N_chi stripped (theta(m) = 0 there).
    """
    chi = desc.twist
    h = desc.hecke
    k = desc.weight
    strip = desc.level * chi.modulus
    out = [None] * (n_max + 1)
    asq = _a_square_table(h, n_max)
    theta = chi * chi  # times eps^2; trivial nebentypus throughout level 1
    if h.eps is not None:
        theta = theta * (h.eps * h.eps)
    order = max(math.lcm(max(chi.order, 1), max(theta.order, 1)), 1)
    zero = Cyclotomic.zero(order)
    for n in range(1, n_max + 1):
        total = zero
        m = 1
        while m * m <= n:
            if n % (m * m) == 0:
                if math.gcd(m, strip) == 1:
                    j = n // (m * m)
                    cj = chi.value(j)
                    if not cj.is_zero():
                        tm = theta.value(m)
                        if not tm.is_zero():
                            total = total + cj * tm * (asq[j] * Fraction(m) ** (2 * k - 2))
            m += 1
        out[n] = total
    return out[1:]


def _a_square_table(h: HeckeData, n_max: int) -> list:
    """a_{j^2} for j <= n_max from prime-power recursions."""
    from sympy import factorint as _fi

    table = [0] * (n_max + 1)
    table[1] = 1
    for j in range(2, n_max + 1):
        v = 1
        for ell, e in _fi(j).items():
            v *= h.a_prime_power(int(ell), 2 * int(e))
        table[j] = v
    return table


def rankin_square_coeffs(desc: SymSqDescriptor, n_max: int) -> list[Cyclotomic]:
    """Coefficients of sum a_n(f)^2 chi(n) n^(-s) (second display form)."""
    chi = desc.twist
    h = desc.hecke
    out = []
    for n in range(1, n_max + 1):
        c = chi.value(n)
        if c.is_zero():
            out.append(Cyclotomic.zero(max(chi.order, 1)))
        else:
            a_n = h.a(n)
            out.append(c * (a_n * a_n))
    return out


# ---------------------------------------------------------------------------
# Complex evaluation: direct summation
# ---------------------------------------------------------------------------

def L_direct(desc: SymSqDescriptor, s, digits: int = 18,
             n_max: int = 10**4) -> BallComplex:
    """Ball containing L^imp(Sym^2 f, chi, s) by direct summation.

    Requires Re(s) > k (domain) and, for a finite tail bound,
    Re(s) > k + 1: the coefficients satisfy |b_n| <= sqrt(3) zeta(2) n^k,
    so the tail beyond n_max is at most
        sqrt(3) zeta(2) n_max^(k+1-Re s) / (Re s - k - 1).
    """
    k = desc.weight
    s_ball = s if isinstance(s, BallComplex) else BallComplex.exact(s)
    sigma = float(s_ball.mid.real)
    if sigma <= k:
        raise DomainError(f"Re(s) = {sigma} outside the convergence region Re(s) > {k}")
    prec = max(int(digits * 3.33) + 48, mp.prec)
    with workprec(prec):
        if sigma <= k + 1:
            raise TailDominatesError(
                "absolute-convergence tail bound needs Re(s) > k + 1")
        tail = math.sqrt(3) * (math.pi**2 / 6) * n_max ** (k + 1 - sigma) / (sigma - k - 1)
        tail *= 1.000001
        if tail > 10.0 ** (-digits):
            raise TailDominatesError(
                f"tail bound {tail:.2e} exceeds target 1e-{digits} at n_max = {n_max}")
        coeffs = symsq_dirichlet_coeffs(desc, n_max)
        order = coeffs[0].n
        width = len(coeffs[0].coeffs)
        # accumulate per power-basis coordinate, then embed zeta once
        comps = [BallComplex.exact(0) for _ in range(width)]
        int_s = isinstance(s, int)
        for n, b in enumerate(coeffs, start=1):
            if b.is_zero():
                continue
            if int_s:
                npow = BallComplex.exact(Fraction(1, n**s))
            else:
                npow = BallComplex.exact(n).power(BallComplex.exact(0) - s_ball)
            for i, c in enumerate(b.coeffs):
                if c:
                    comps[i] = comps[i] + npow * BallComplex.exact(c)
        total = BallComplex.exact(0)
        for i, comp in enumerate(comps):
            if i == 0:
                total = total + comp
            else:
                total = total + comp * embed_cyclotomic_complex(Cyclotomic.zeta(order, i))
        return BallComplex(total.mid, total.rad + tail)


# ---------------------------------------------------------------------------
# Petersson norm by rigorous quadrature
# ---------------------------------------------------------------------------

class _QSeriesBall:
    """Ball evaluation of f(x + iy) from exact coefficients with a tail bound.

    Truncation error uses |a_n| <= sqrt(3) n^(k/2) (Deligne with
    d(n) <= sqrt(3 n)) and a geometric-ratio envelope.  The Horner loop is
    fused: midpoints in mpmath, radius bounds propagated as floats.
    """

    def __init__(self, form: QExpansion, terms: int):
        if form.truncation < terms:
            raise InsufficientCoefficientsError(
                f"need {terms} coefficients, q-expansion has {form.truncation}")
        self.k = form.weight
        self.mids = [mpmath.mpf(int(form.coeffs[n])) for n in range(terms + 1)]
        self.absf = [float(abs(c)) for c in self.mids]
        self.terms = terms

    def tail_bound(self, y_min: float) -> float:
        M, k = self.terms, self.k
        t = 2.0 * math.pi * y_min
        term = math.sqrt(3) * (M + 1) ** (k / 2) * math.exp(-t * (M + 1))
        ratio = ((M + 2) / (M + 1)) ** (k / 2) * math.exp(-t)
        if ratio >= 1:
            return math.inf
        return term / (1 - ratio) * 1.0001

    def eval(self, x: BallReal, y: BallReal) -> BallComplex:
        mid, rad = self._eval_raw(x.mid, x.rad, y.mid, y.rad)
        return BallComplex(mid, rad)

    def _eval_raw(self, x_mid, x_rad: float, y_mid, y_rad: float):
        two_pi = 2 * mp.pi
        eps = 2.0 ** (4 - mp.prec)
        q_mid = mp.exp(mpmath.mpc(-two_pi * y_mid, two_pi * x_mid))
        q_abs = float(abs(q_mid)) * (1 + 1e-12)
        z_rad = 2 * math.pi * (x_rad + y_rad) * 1.001 + eps
        q_rad = (q_abs * z_rad * (1 + z_rad) + q_abs * eps) * 1.0001
        # Horner: acc <- (acc + a_n) * q, radii tracked as float bounds
        acc_mid = mpmath.mpc(0)
        acc_abs = 0.0
        acc_rad = 0.0
        for n in range(self.terms, 0, -1):
            s_abs = acc_abs + self.absf[n]
            acc_mid = (acc_mid + self.mids[n]) * q_mid
            acc_rad = ((acc_rad * q_abs) + s_abs * q_rad + s_abs * q_abs * eps) * (1 + 1e-12)
            acc_abs = s_abs * q_abs * (1 + 1e-12)
        y_min = float(y_mid) - y_rad
        return acc_mid, (acc_rad + self.tail_bound(y_min)) * 1.0001

    def petersson_integrand(self, x: BallReal, y: BallReal) -> BallReal:
        """|f(x+iy)|^2 y^(k-2) as a ball, fused for the quadrature hot path."""
        eps = 2.0 ** (4 - mp.prec)
        f_mid, f_rad = self._eval_raw(x.mid, x.rad, y.mid, y.rad)
        f_abs = float(abs(f_mid)) * (1 + 1e-12)
        m2_mid = f_mid.real * f_mid.real + f_mid.imag * f_mid.imag
        m2_rad = (2 * f_abs * f_rad + f_rad * f_rad + float(m2_mid) * eps) * 1.0001
        yp_mid = y.mid ** (self.k - 2)
        yp_abs = float(yp_mid) * (1 + 1e-12)
        y_lo = float(y.mid) - y.rad
        yp_rad = ((self.k - 2) * yp_abs / y_lo * y.rad + yp_abs * eps) * 1.0001 \
            if y_lo > 0 else math.inf
        out_mid = m2_mid * yp_mid
        out_rad = (float(m2_mid) * yp_rad + yp_abs * m2_rad + m2_rad * yp_rad
                   + abs(float(out_mid)) * eps) * 1.0001
        return BallReal(out_mid, out_rad)


def petersson_norm(form: QExpansion, digits: int = 12) -> BallReal:
    """Petersson norm of a level-1 cusp form by 2D tanh-sinh quadrature
    over the truncated fundamental domain, with an analytic tail above
    the truncation height.
    """
    if form.level != 1:
        raise DomainError("fundamental-domain quadrature is hard-coded for level 1")
    k = form.weight
    prec = int(digits * 3.33) + 56
    with workprec(prec):
        # rough scale of the value, for relative targets
        y_cut = max(4.0, (digits + 6) * math.log(10) / (4 * math.pi) + 1.0)
        terms = 12
        while True:
            probe = _QSeriesBall(form, min(terms, form.truncation))
            if probe.tail_bound(math.sqrt(3) / 2) < 10.0 ** (-(digits + 9)):
                break
            terms += 6
            if terms > form.truncation:
                raise InsufficientCoefficientsError(
                    f"q-expansion too short for {digits} digits at y >= sqrt(3)/2")
        series = probe
        integrand = series.petersson_integrand
        # scale estimate from a single midpoint evaluation
        mid_val = integrand(BallReal(Fraction(1, 4)), BallReal(1)).mid
        scale = abs(float(mid_val)) or 1e-7
        tol = scale * 10.0 ** (-(digits + 2))
        region = FundamentalDomainStrip(x_min=0, x_max=Fraction(1, 2), y_cut=y_cut)
        tail = _petersson_tail(series, y_cut, k)
        half = integrate_2d(integrand, region, tol, tail=None)
        total = half * 2 + BallReal(0, tail)
        return total


def _petersson_tail(series: _QSeriesBall, y_cut: float, k: int) -> float:
    """Upper bound for the integral over y > y_cut (both half-strips).

    |f| <= C e^(-2 pi y) with C = sum |a_n| e^(-2 pi (n-1) y_cut), so the
    tail is at most C^2 Gamma(k-1, 4 pi y_cut) / (4 pi)^(k-1).
    """
    t = math.exp(-2 * math.pi * y_cut)
    C = 0.0
    for n in range(1, series.terms + 1):
        C += series.absf[n] * t ** (n - 1)
    C += series.tail_bound(y_cut) * math.exp(2 * math.pi * y_cut)
    x = 4 * math.pi * y_cut
    # Gamma(k-1, x) = (k-2)! e^-x sum_{j<k-1} x^j/j!
    gam = 0.0
    term = 1.0
    for j in range(k - 1):
        if j:
            term *= x / j
        gam += term
    gam *= math.exp(-x) * math.factorial(k - 2)
    return C * C * gam / (4 * math.pi) ** (k - 1) * 1.0001


# ---------------------------------------------------------------------------
# Normalized critical ratios
# ---------------------------------------------------------------------------

def schmidt_ratio(desc: SymSqDescriptor, s: int, L_value: BallComplex,
                  petersson: BallReal, digits: int = 18) -> BallComplex:
    """Rationality ratio I(f, chi, s) = L / (pi^(k-1) <f,f>) *
    (G(chi^-1 eps^-1) / (2 pi i)^(s-k+1))^(1+delta), for critical s."""
    from .galois import is_critical_point

    k = desc.weight
    chi = desc.twist
    if not is_critical_point(s, k, chi.parity()):
        raise NonCriticalPointError(f"s = {s} is not critical for this parity")
    delta = 0 if s <= k - 1 else 1
    prec = int(digits * 3.33) + 48
    with workprec(prec):
        gbar = chi.inverse()
        if desc.hecke.eps is not None:
            gbar = gbar * desc.hecke.eps.inverse()
        G = embed_cyclotomic_complex(gauss_sum(gbar))
        two_pi_i = BallComplex(mpmath.mpc(0, 2)) * BallReal.pi()
        factor = (G / two_pi_i ** (s - k + 1)) ** (1 + delta)
        pi_pow = BallComplex.from_real(BallReal.pi() ** (k - 1))
        return L_value / (pi_pow * BallComplex.from_real(petersson)) * factor


def tilde_ratio_w16(s: int, L_value: BallComplex, petersson: BallReal,
                    psi: DirichletCharacter, digits: int = 18) -> BallComplex:
    """The weight-16 normalized ratio
        (s-1)! (s-16)! G(psi^-1)^2 / (2^(2s+1) pi^(2s-15) <F,F>) * L(s).
    """
    if s < 16 or s > 30 or s % 2 or psi.parity() != 1:
        raise NonCriticalPointError("ratio defined for even s in [16, 30], even psi")
    prec = int(digits * 3.33) + 48
    with workprec(prec):
        G = embed_cyclotomic_complex(gauss_sum(psi.inverse()))
        num = BallComplex.exact(math.factorial(s - 1) * math.factorial(s - 16)) * G * G
        den = BallComplex.exact(2 ** (2 * s + 1)) * \
            BallComplex.from_real(BallReal.pi() ** (2 * s - 15)) * \
            BallComplex.from_real(petersson)
        return num / den * L_value


# ---------------------------------------------------------------------------
# Algebraic recognition
# ---------------------------------------------------------------------------

def recognize_quadratic(z: BallComplex, d: int, height_bound: int = 10**6):
    """Search for z = (a + b sqrt(d))/c with bounded integer a, b, c.

    Integer-relation detection (PSLQ) on each coordinate; the candidate is
    returned only if its re-embedding lands within 10x the input radius.
    Returns None when nothing is found.
    """
    if z.rad <= 0:
        work_digits = mp.dps + 10
    else:
        work_digits = max(10, int(-math.log10(z.rad)) + 2)
    if 10.0 ** (-work_digits) * height_bound**2 > 1:
        return None  # radius too large relative to the height bound
    with workprec(int(work_digits * 3.33) + 24):
        re = z.mid.real
        im = z.mid.imag
        try:
            if d < 0:
                root = mp.sqrt(-d)
                rel_re = mpmath.pslq([mpmath.mpf(1), re], maxcoeff=height_bound,
                                     maxsteps=3000)
                rel_im = mpmath.pslq([root, im], maxcoeff=height_bound,
                                     maxsteps=3000)
            else:
                root = mp.sqrt(d)
                if abs(im) > max(z.rad * 4, 10.0 ** (-work_digits + 2)):
                    return None
                rel = mpmath.pslq([mpmath.mpf(1), root, re], maxcoeff=height_bound,
                                  maxsteps=3000)
                if rel is None or rel[2] == 0:
                    return None
                a, b, c = rel[0], rel[1], -rel[2]
                cand = QuadraticNumber(d, Fraction(a, c), Fraction(b, c))
                return _verify_candidate(cand, z)
        except (ValueError, ZeroDivisionError):
            return None
        if rel_re is None or rel_im is None or rel_re[1] == 0 or rel_im[1] == 0:
            return None
        a, c1 = rel_re[0], -rel_re[1]
        b, c2 = rel_im[0], -rel_im[1]
        cand = QuadraticNumber(d, Fraction(a, c1), Fraction(b, c2))
        return _verify_candidate(cand, z)


def _verify_candidate(cand: QuadraticNumber, z: BallComplex):
    emb = embed_complex(cand, digits=int(mp.dps))
    dist = abs(emb.mid - z.mid)
    tol = 10 * max(z.rad, 10.0 ** (-mp.dps + 4))
    if float(dist) <= tol:
        return cand
    return None


def embed_complex(x, digits: int = 20) -> BallComplex:
    """Complex ball image of a Cyclotomic or QuadraticNumber.

    zeta_n maps to e^(2 pi i / n); sqrt(d) to the principal branch.  The
    radius satisfies r <= 10^-digits * max(1, |x|).
    """
    prec = int(digits * 3.33) + 32
    with workprec(prec):
        if isinstance(x, QuadraticNumber):
            if x.d > 0:
                root = BallReal(mp.sqrt(x.d), 0.0)
                root = BallComplex(root.mid, (2.0 ** (4 - mp.prec)) * float(root.mid))
            else:
                m = mp.sqrt(-x.d)
                root = BallComplex(mpmath.mpc(0, m), (2.0 ** (4 - mp.prec)) * float(m))
            return BallComplex.exact(x.a) + BallComplex.exact(x.b) * root
        if isinstance(x, Cyclotomic):
            return embed_cyclotomic_complex(x)
        if isinstance(x, (int, Fraction)):
            return BallComplex.exact(x)
    raise TypeError(f"cannot embed {type(x).__name__}")


# ---------------------------------------------------------------------------
# p-adic interpolation multipliers
# ---------------------------------------------------------------------------

@dataclass
class InterpMultiplier:
    kind: str                      # "E" (1 <= s <= k-1) or "Eprime" (k <= s <= 2k-2)
    s: int
    chi_conductor_exponent: int    # r, with chi of conductor p^r
    value: PadicNumber
    vanishes: bool
    exceptional_case: bool


def interp_multiplier(kind: str, s: int, k: int, chi_cond_exp: int,
                      alpha: PadicNumber, beta: PadicNumber,
                      psi_p: PadicNumber, eps_p: PadicNumber,
                      K: int = 12) -> InterpMultiplier:
    """The multipliers relating classical and p-adic symmetric-square values.

    kind "E" (low range), chi trivial:
        (1 - p^(s-1) psi(p)^-1 a^-2)(1 - psi(p) a b p^-s)(1 - psi(p) b^2 p^-s)
    and (p^(s-1) psi(p)^-1 a^-2)^r when chi has conductor p^r > 1.

    kind "Eprime" (high range), chi trivial:
        (1 - p^(s-1) psi(p)^-1 a^-2)(1 - p^(s-1) psi(p)^-1 a^-1 b^-1)
        (1 - psi(p) b^2 p^-s)
    and (p^(s-1) psi(p)^-2 eps(p)^-1 a^-2)^r when chi has conductor p^r > 1.
    """
    if kind not in ("E", "Eprime"):
        raise ValueError("kind must be 'E' or 'Eprime'")
    if not alpha.is_unit():
        raise PadicError("non-ordinary: alpha is not a p-adic unit")
    p = alpha.p
    one = PadicNumber.from_rational(1, p, K + 2 * k + abs(s))
    p_s1 = PadicNumber.from_rational(Fraction(p) ** (s - 1), p, K + 2 * k + abs(s))
    p_ms = PadicNumber.from_rational(Fraction(1, p**s) if s >= 0 else Fraction(p**(-s)),
                                     p, K + 2 * k + abs(s))
    ainv2 = alpha.inverse() ** 2
    r = chi_cond_exp
    if r > 0:
        if kind == "E":
            base = p_s1 * psi_p.inverse() * ainv2
        else:
            base = p_s1 * psi_p.inverse() ** 2 * eps_p.inverse() * ainv2
        val = base**r
    else:
        f1 = one - p_s1 * psi_p.inverse() * ainv2
        f3 = one - psi_p * beta * beta * p_ms
        if kind == "E":
            f2 = one - psi_p * alpha * beta * p_ms
        else:
            f2 = one - p_s1 * psi_p.inverse() * alpha.inverse() * beta.inverse()
        val = f1 * f2 * f3
    # exact vanishing per the case analysis: chi = 1, eps psi(p) = 1, and
    # s = k-1 (E) or s = k (Eprime)
    epspsi_is_one = (eps_p * psi_p - one).is_zero()
    vanish = (r == 0) and epspsi_is_one and (s == (k - 1 if kind == "E" else k))
    exceptional = vanish and kind == "Eprime"
    val = PadicNumber(p, val.val, val.unit, min(val.prec, K))
    return InterpMultiplier(kind=kind, s=s, chi_conductor_exponent=chi_cond_exp,
                            value=val, vanishes=vanish, exceptional_case=exceptional)


def hecke_roots_padic(a_p: int, k: int, eps_p_int: int, p: int, K: int = 14
                      ) -> tuple[PadicNumber, PadicNumber]:
    """Ordinary pair (alpha, beta): alpha the unit root of
    X^2 - a_p X + p^(k-1) eps(p), beta = p^(k-1) eps(p)/alpha."""
    from .padics import hensel_root

    if a_p % p == 0:
        raise PadicError(f"p = {p} is not ordinary: p | a_p")
    norm = p ** (k - 1) * eps_p_int
    alpha = hensel_root([norm, -a_p, 1], p, a_p % p, K + k)
    beta = PadicNumber.from_rational(norm, p, K + 2 * k) / alpha
    return (PadicNumber(p, alpha.val, alpha.unit, min(alpha.prec, K + k)),
            beta)


@dataclass
class PadicSymSqValue:
    value: PadicNumber
    valuation: int | None
    is_unit: bool
    exceptional_zero: bool
    note: str


def padic_symsq_L_value(s: int, algebraic_ratio: QuadraticNumber,
                        emb: PadicEmbedding, eprime: InterpMultiplier,
                        K: int = 12, gauss_conductor: int = 7) -> PadicSymSqValue:
    """p-adic symmetric-square value at (s, chi = 1), up to p-adic units.

    value = Eprime(s, 1) * (embedding of the normalized algebraic ratio).
    The Gauss-sum square inside the ratio is a unit whenever p does not
    divide the twist conductor, so valuation and unit verdicts agree with
    the fully normalized value.
    """
    p = emb.p
    if gauss_conductor % p == 0:
        raise PadicError("p divides the twist conductor; Gauss factor not a unit")
    for part in (algebraic_ratio.a, algebraic_ratio.b):
        if part.denominator % p == 0:
            raise PadicError(f"ratio denominator divisible by p = {p}")
    ratio_p = emb(algebraic_ratio, K)
    value = eprime.value * ratio_p
    v = value.valuation()
    return PadicSymSqValue(
        value=value,
        valuation=v,
        is_unit=(v == 0),
        exceptional_zero=eprime.exceptional_case,
        note="value normalized up to the p-adic unit G(psi^-1)^2",
    )


# ---------------------------------------------------------------------------
# Reciprocity-law scalar
# ---------------------------------------------------------------------------

def reciprocity_multiplier(s: int, c: int, psi: DirichletCharacter,
                           eps: DirichletCharacter | None, k: int,
                           chi: DirichletCharacter | None = None) -> Cyclotomic:
    """(-1)^s (c^2 - c^(2s-2k+2) (psi eps)(c)^-2 chi(c)^2) G(psi^-1)^2 G(eps^-1)^2.

    chi of p-power conductor contributes chi(c)^2 through the character
    evaluation c^(2s-2k+2) at the point s + chi.
    """
    if c <= 1:
        raise ValueError("auxiliary c must exceed 1")
    pe = psi if eps is None else psi * eps
    pec = pe.value(c)
    if pec.is_zero():
        raise ValueError("c must be coprime to the character modulus")
    chic2 = Cyclotomic.one(1) if chi is None or chi.is_trivial() else chi.value(c) ** 2
    main = Cyclotomic.from_rational(c * c) - (
        Cyclotomic.from_rational(Fraction(c) ** (2 * s - 2 * k + 2))
        * pec.inverse() ** 2 * chic2
    )
    G1 = gauss_sum(psi.inverse())
    G2 = gauss_sum(eps.inverse()) if eps is not None else Cyclotomic.one(1)
    sign = 1 if s % 2 == 0 else -1
    return main * (G1 * G1) * (G2 * G2) * sign
