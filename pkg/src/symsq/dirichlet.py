"""Dirichlet characters with Conrey indexing, Gauss sums, generalized
Bernoulli numbers, Dirichlet L-values with stripped Euler factors, and
Kubota-Leopoldt p-adic values.

Classical Bernoulli numbers follow the B_1 = -1/2 convention throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy

from .balls import BallComplex, BallReal, ball_sum
from .cyclotomic import Cyclotomic, QuadraticNumber, cyclotomic_to_quadratic, euler_phi
from .padics import PadicEmbedding, PadicError, PadicNumber, hensel_root


class CharacterError(ValueError):
    pass


class ParityMismatchError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Conrey construction
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _conrey_generator(p: int) -> int:
    """Smallest primitive root mod p that stays primitive mod p^2."""
    for g in range(2, p):
        if sympy.is_primitive_root(g, p):
            return g if pow(g, p - 1, p * p) != 1 else g + p
    raise CharacterError(f"no primitive root mod {p}")


@lru_cache(maxsize=None)
def _dlog_table(p: int, e: int) -> dict:
    q = p**e
    g = _conrey_generator(p)
    table = {}
    x = 1
    for a in range(euler_phi(q)):
        table[x] = a
        x = x * g % q
    return table


def _odd_local_exponent(p: int, e: int, index: int, n: int) -> Fraction:
    """Exponent of e^(2 pi i .) for the local Conrey character at odd p^e."""
    q = p**e
    table = _dlog_table(p, e)
    a = table[index % q]
    b = table[n % q]
    return Fraction(a * b, euler_phi(q))


def _two_local_exponent(e: int, index: int, n: int) -> Fraction:
    q = 2**e
    if e == 1:
        return Fraction(0)
    if e == 2:
        em = 0 if index % 4 == 1 else 1
        en = 0 if n % 4 == 1 else 1
        return Fraction(em * en, 2)
    # decompose +-5^a mod 2^e
    def decompose(m):
        m %= q
        for sign in (1, -1):
            x = m if sign == 1 else (-m) % q
            a, y = 0, 1
            for a in range(q // 4):
                if y == x:
                    return sign, a
                y = y * 5 % q
        raise CharacterError("2-adic decomposition failed")
    sm, am = decompose(index)
    sn, an = decompose(n)
    eps_term = Fraction((1 - sm) * (1 - sn), 8)
    return eps_term + Fraction(am * an, q // 4)


class DirichletCharacter:
    """Character mod N addressed by its Conrey index; values are exact
    cyclotomic numbers of order dividing the character order."""

    def __init__(self, modulus: int, index: int = 1):
        if modulus < 1:
            raise CharacterError("modulus must be positive")
        index %= modulus if modulus > 1 else 1
        if modulus == 1:
            index = 1
        if math.gcd(index, modulus) != 1:
            raise CharacterError(f"index {index} not coprime to modulus {modulus}")
        self.modulus = modulus
        self.index = index if modulus > 1 else 1
        self._exponents: dict[int, Fraction | None] = {}
        self._fill_exponents()
        self.order = self._compute_order()
        self.conductor = self._compute_conductor()

    @classmethod
    def from_label(cls, label: str) -> "DirichletCharacter":
        try:
            n, i = label.split(".")
            return cls(int(n), int(i))
        except (ValueError, AttributeError):
            raise CharacterError(f"bad Conrey label {label!r} (expected 'N.i')")

    @property
    def label(self) -> str:
        return f"{self.modulus}.{self.index}"

    def _fill_exponents(self):
        N = self.modulus
        fact = sympy.factorint(N)
        for n in range(N if N > 1 else 2):
            nn = n % N if N > 1 else 1
            if math.gcd(nn if nn else N, N) != 1:
                self._exponents[nn] = None
                continue
            expo = Fraction(0)
            for p, e in fact.items():
                p, e = int(p), int(e)
                if p == 2:
                    expo += _two_local_exponent(e, self.index, nn)
                else:
                    expo += _odd_local_exponent(p, e, self.index, nn)
            self._exponents[nn] = expo % 1
        if N == 1:
            self._exponents = {0: Fraction(0)}

    def _compute_order(self) -> int:
        denoms = [e.denominator for e in self._exponents.values() if e is not None]
        return math.lcm(*denoms) if denoms else 1

    def _compute_conductor(self) -> int:
        for M in sorted(sympy.divisors(self.modulus)):
            if all(
                self._exponents[n % self.modulus] == 0
                for n in range(1, self.modulus + 1)
                if math.gcd(n, self.modulus) == 1 and n % M == 1 % M
            ):
                return int(M)
        return self.modulus

    def exponent(self, n: int) -> Fraction | None:
        """Fraction t with chi(n) = e^(2 pi i t), or None when chi(n) = 0."""
        if self.modulus == 1:
            return Fraction(0)
        return self._exponents[n % self.modulus]

    def value(self, n: int) -> Cyclotomic:
        t = self.exponent(n)
        if t is None:
            return Cyclotomic.zero(max(self.order, 1))
        return Cyclotomic.zeta(self.order, t.numerator * (self.order // t.denominator))

    def __call__(self, n: int) -> Cyclotomic:
        return self.value(n)

    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        t = self.exponent(self.modulus - 1 if self.modulus > 1 else 1)
        return 1 if t == 0 else -1

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.modulus == self.modulus:
            return DirichletCharacter(self.modulus, self.index * other.index % self.modulus)
        m = math.lcm(self.modulus, other.modulus)
        a = self.induce(m)
        b = other.induce(m)
        return DirichletCharacter(m, a.index * b.index % m)

    def __pow__(self, e: int) -> "DirichletCharacter":
        if self.modulus == 1:
            return self
        return DirichletCharacter(self.modulus, pow(self.index, e, self.modulus) if e >= 0
                                  else pow(pow(self.index, -1, self.modulus), -e, self.modulus))

    def inverse(self) -> "DirichletCharacter":
        return self**-1

    conjugate = inverse

    def induce(self, m: int) -> "DirichletCharacter":
        """The character mod m (a multiple of the modulus) with the same primitive core."""
        if m % self.modulus:
            raise CharacterError("can only induce to a multiple of the modulus")
        if m == self.modulus:
            return self
        for i in range(1, m):
            if math.gcd(i, m) == 1:
                cand = DirichletCharacter(m, i)
                if all(
                    cand.exponent(n) == self.exponent(n)
                    for n in range(1, m)
                    if math.gcd(n, m) == 1
                ):
                    return cand
        raise CharacterError("induction failed")

    def primitive_core(self) -> "DirichletCharacter":
        if self.is_primitive():
            return self
        for i in range(1, self.conductor + 1):
            if math.gcd(i, self.conductor) == 1:
                cand = DirichletCharacter(self.conductor, i)
                if all(
                    cand.exponent(n % self.conductor) == self.exponent(n)
                    for n in range(1, self.modulus)
                    if math.gcd(n, self.modulus) == 1
                ):
                    return cand
        raise CharacterError("no primitive core found")

    def value_table_csv(self, path) -> None:
        import csv

        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["a", "value"])
            for a in range(1, self.modulus + 1):
                w.writerow([a, repr(self.value(a))])

    def __eq__(self, other):
        return isinstance(other, DirichletCharacter) and \
            (self.modulus, self.index) == (other.modulus, other.index)

    def __hash__(self):
        return hash((self.modulus, self.index))

    def __repr__(self):
        return f"DirichletCharacter({self.label})"


def character_from_generator_value(modulus: int, gen: int, zeta_order: int,
                                   zeta_power: int = 1) -> DirichletCharacter:
    """The character chi mod `modulus` with chi(gen) = zeta_{zeta_order}^zeta_power.

    Raises CharacterError if no (or no unique-on-generators) character matches.
    """
    target = Fraction(zeta_power % zeta_order, zeta_order)
    matches = [
        DirichletCharacter(modulus, i)
        for i in range(1, modulus + 1)
        if math.gcd(i, modulus) == 1
        and DirichletCharacter(modulus, i).exponent(gen) == target
    ]
    if not matches:
        raise CharacterError("no character with the requested generator value")
    # prefer the one of smallest order (most canonical for a single constraint)
    matches.sort(key=lambda c: (c.order, c.index))
    if len(matches) > 1 and matches[0].order == matches[1].order:
        raise CharacterError(
            f"generator value does not pin a unique character mod {modulus}; "
            f"candidates {[c.label for c in matches]}")
    return matches[0]


# ---------------------------------------------------------------------------
# Gauss sums
# ---------------------------------------------------------------------------

def gauss_sum(chi: DirichletCharacter) -> Cyclotomic:
    """G(chi) = sum over a mod N_chi of chi(a) e^(2 pi i a / N_chi), exact.

    Convention: G(trivial) = 1.  The sum is taken over the conductor, i.e.
    the character is replaced by its primitive core.
    """
    if chi.is_trivial():
        return Cyclotomic.one(1)
    core = chi.primitive_core()
    N = core.conductor
    L = math.lcm(N, core.order)
    total = Cyclotomic.zero(L)
    for a in range(1, N + 1):
        if math.gcd(a, N) != 1:
            continue
        total = total + core.value(a).promote(L) * Cyclotomic.zeta(L, a * (L // N))
    return total


# ---------------------------------------------------------------------------
# Bernoulli machinery
# ---------------------------------------------------------------------------

_BERNOULLI_CACHE_LIMIT = 64


@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """Classical B_n with B_1 = -1/2."""
    if n == 1:
        return Fraction(-1, 2)
    b = sympy.bernoulli(n)
    return Fraction(int(sympy.numer(b)), int(sympy.denom(b)))


for _i in range(_BERNOULLI_CACHE_LIMIT + 1):
    bernoulli_number(_i)


def bernoulli_polynomial(n: int, x: Fraction) -> Fraction:
    """B_n(x) by the exact binomial expansion."""
    x = Fraction(x)
    total = Fraction(0)
    powx = Fraction(1)
    # sum_{j} C(n, j) B_{n-j} x^j  (iterate j ascending to reuse powers)
    for j in range(n + 1):
        total += math.comb(n, j) * bernoulli_number(n - j) * powx
        powx *= x
    return total


@dataclass(frozen=True)
class GenBernoulli:
    n: int
    psi: DirichletCharacter
    value: Cyclotomic


def gen_bernoulli(n: int, psi: DirichletCharacter) -> GenBernoulli:
    """B_{n, psi} = N^(n-1) sum_{a=1}^{N} psi(a) B_n(a/N), exact."""
    if n < 1:
        raise ValueError("index must be >= 1")
    N = psi.modulus
    order = max(psi.order, 1)
    total = Cyclotomic.zero(order)
    for a in range(1, N + 1):
        t = psi.exponent(a)
        if t is None:
            continue
        val = psi.value(a)
        total = total + val * bernoulli_polynomial(n, Fraction(a, N))
    total = total * (Fraction(N) ** (n - 1))
    return GenBernoulli(n=n, psi=psi, value=total)


# ---------------------------------------------------------------------------
# Complex Dirichlet L-values (Re s > 1, direct summation, stripped factors)
# ---------------------------------------------------------------------------

def embed_cyclotomic_complex(x: Cyclotomic, digits: int = 0) -> BallComplex:
    """Ball image of x under zeta_n -> e^(2 pi i / n) at current precision."""
    from .balls import _as_ball_complex  # local import to avoid cycle

    n = x.n
    two_pi_i = BallComplex(0 + 1j) * BallReal.pi() * 2
    zeta = (two_pi_i * BallComplex(Fraction(1, n))).exp()
    total = BallComplex.exact(0)
    power = BallComplex.exact(1)
    for j, c in enumerate(x.coeffs):
        if c:
            total = total + power * BallComplex.exact(c)
        power = power * zeta
    return total


def dirichlet_L_stripped(chi: DirichletCharacter, s, strip=(), digits: int = 15,
                         n_terms: int | None = None) -> BallComplex:
    """Ball containing L(chi, s) * prod_{l in strip} (1 - chi(l) l^(-s)).

    Direct summation; requires Re(s) > 1.  The tail is bounded by the
    zeta(Re s) remainder integral.
    """
    s_ball = s if isinstance(s, BallComplex) else BallComplex.exact(s)
    sigma = float(s_ball.mid.real)
    if sigma <= 1:
        raise ValueError("domain error: direct summation needs Re(s) > 1")
    if n_terms is None:
        # N^(1-sigma)/(sigma-1) <= 10^-digits
        n_terms = int(math.ceil((10 ** (digits / (sigma - 1))) / 1)) + 10
        n_terms = max(50, min(n_terms, 2 * 10**6))
    values = {}
    order = max(chi.order, 1)
    for rcls in range(chi.modulus if chi.modulus > 1 else 1):
        t = chi.exponent(rcls) if chi.modulus > 1 else Fraction(0)
        if t is None:
            values[rcls] = None
        else:
            values[rcls] = embed_cyclotomic_complex(
                Cyclotomic.zeta(order, int(t * order)))
    total = BallComplex.exact(0)
    for n in range(1, n_terms + 1):
        v = values[n % chi.modulus if chi.modulus > 1 else 0]
        if v is None:
            continue
        total = total + v * BallComplex.exact(n).power(BallComplex.exact(0) - s_ball)
    tail = (n_terms ** (1.0 - sigma)) / (sigma - 1.0) * 1.0000001
    total = BallComplex(total.mid, total.rad + tail)
    for ell in strip:
        factor = BallComplex.exact(1) - embed_cyclotomic_complex(chi.value(ell)) * \
            BallComplex.exact(ell).power(BallComplex.exact(0) - s_ball)
        total = total * factor
    return total


# ---------------------------------------------------------------------------
# Kubota-Leopoldt p-adic values
# ---------------------------------------------------------------------------

def _embed_cyclotomic_padic(x: Cyclotomic, p: int, K: int,
                            emb: PadicEmbedding | None) -> PadicNumber:
    """Image of a cyclotomic number in Q_p.

    Orders 1 and 2 are rational; orders 3 and 6 go through Q(sqrt(-3))
    using the supplied embedding; order 4 uses sqrt(-1).  Other orders are
    outside the supported value fields.
    """
    n = x.n
    if n == 1 or x.is_rational():
        return PadicNumber.from_rational(x.rational_part(), p, K)
    if n in (3, 6):
        if emb is None or emb.d != -3:
            raise PadicError("order-3/6 values need an embedding of Q(sqrt(-3))")
        quad = cyclotomic_to_quadratic(x, -3)
        return emb(quad, K)
    if n == 4:
        if emb is None or emb.d != -1:
            raise PadicError("order-4 values need an embedding of Q(i)")
        quad = cyclotomic_to_quadratic(x, -1)
        return emb(quad, K)
    if n == 2:
        return PadicNumber.from_rational(x.rational_part(), p, K)
    raise PadicError(f"unsupported cyclotomic order {n} for p-adic embedding")


def _chi_padic(chi: DirichletCharacter, a: int, p: int, K: int,
               emb: PadicEmbedding | None) -> PadicNumber:
    t = chi.exponent(a)
    if t is None:
        return PadicNumber.exact_zero(p)
    order = max(chi.order, 1)
    return _embed_cyclotomic_padic(
        Cyclotomic.zeta(order, int(t * order)), p, K, emb)


@dataclass
class KLValue:
    value: PadicNumber
    interpolation_s: int
    requested_s: int
    certificate: str  # "exact interpolation" or "congruent mod p"


def kl_padic_value(psi: DirichletCharacter, s: int, p: int,
                   emb: PadicEmbedding | None, K: int = 12) -> KLValue:
    """Kubota-Leopoldt value on the branch through B_{n, psi}.

    At an interpolation point s = 1 - n (n >= 1, psi(-1) = (-1)^n) the exact
    formula (1 - psi(p) p^(n-1)) (-B_{n, psi} / n) is evaluated.  At any
    other integer s the value returned is the one at the congruent
    interpolation point s' = s mod (p-1), certified modulo p only.
    """
    if psi.modulus % p == 0:
        raise PadicError("p divides the character modulus")
    parity = psi.parity()
    n = 1 - s
    if n >= 1 and parity == (1 if n % 2 == 0 else -1):
        return KLValue(_kl_interpolation(psi, n, p, emb, K), s, s, "exact interpolation")
    # transport to the congruent interpolation point in the same component
    n_prime = (1 - s) % (p - 1)
    if n_prime == 0:
        n_prime = p - 1
    if parity != (1 if n_prime % 2 == 0 else -1):
        raise ParityMismatchError(
            f"psi(-1) = {parity} excludes the component of s = {s} mod {p - 1}")
    value = _kl_interpolation(psi, n_prime, p, emb, K)
    return KLValue(value, 1 - n_prime, s, "congruent mod p")


def _kl_interpolation(psi: DirichletCharacter, n: int, p: int,
                      emb: PadicEmbedding | None, K: int) -> PadicNumber:
    B = gen_bernoulli(n, psi).value
    Bp = _embed_cyclotomic_padic(B, p, K + 2, emb)
    psi_p = _chi_padic(psi, p, p, K + 2, emb)
    one = PadicNumber.from_rational(1, p, K + 2)
    factor = one - psi_p * PadicNumber.from_rational(Fraction(p) ** (n - 1), p, K + 2 + n)
    out = factor * (-(Bp / PadicNumber.from_rational(n, p, K + 2)))
    return PadicNumber(p, out.val, out.unit, min(out.prec, K))


def kl_padic_value_branch(psi: DirichletCharacter, s: int, p: int,
                          emb: PadicEmbedding | None, K: int = 6) -> PadicNumber:
    """Genuine branch value at integer s, to full precision O(p^K).

    Evaluates the p-adic L-series on the analytic branch through the
    B_{n, psi} interpolation points (twist psi * omega^(1-s)) using the
    power-series expansion over a modulus F = lcm(N_psi, p):

        L_p(s) = 1/(F (s-1)) * sum_{a, p not| a} chi(a) <a>^(1-s)
                   * sum_j C(1-s, j) B_j (F/a)^j.
    """
    if psi.modulus % p == 0:
        raise PadicError("p divides the character modulus")
    work = K + 6
    pw = p**work
    F = math.lcm(psi.modulus, p)
    jmax = work + 8

    def teichmuller(a: int) -> int:
        x = a % pw
        for _ in range(work + 3):
            x2 = pow(x, p, pw)
            if x2 == x:
                break
            x = x2
        return x

    total = 0
    for a in range(1, F + 1):
        if a % p == 0:
            continue
        t = psi.exponent(a)
        if t is None:
            continue
        chi_val = _chi_padic(psi, a, p, work, emb)
        om = teichmuller(a)
        # omega(a)^(1-s) part of the twist
        om_pow = pow(om, (1 - s) % (p - 1), pw)
        chi_a = chi_val.residue(work) * om_pow % pw
        a_unit = a * pow(om, -1, pw) % pw
        e = 1 - s
        main = pow(a_unit, e, pw) if e >= 0 else pow(pow(a_unit, -1, pw), -e, pw)
        inner = 0
        for j in range(jmax):
            num = 1
            for i in range(j):
                num *= (1 - s - i)
            term = Fraction(num, math.factorial(j)) * bernoulli_number(j) * Fraction(F, a) ** j
            inner = (inner + term.numerator % pw * pow(term.denominator, -1, pw)) % pw
        total = (total + chi_a * main % pw * inner) % pw
    # divide by F (s - 1); the p-part of F divides the sum
    vp_F = 0
    Fu = F
    while Fu % p == 0:
        Fu //= p
        vp_F += 1
    for _ in range(vp_F):
        if total % p:
            raise PadicError("branch series lost p-divisibility; raise working precision")
        total //= p
    rest = Fu * (s - 1)
    if rest % p == 0:
        raise PadicError("s = 1 mod p not supported on this branch")
    total = total * pow(rest, -1, p ** (work - vp_F)) % p ** (work - vp_F)
    return PadicNumber.from_rational(total, p, K)


# ---------------------------------------------------------------------------
# Regular primes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegularityWitness:
    p: int
    is_regular: bool
    irregular_indices: tuple[int, ...]


def is_regular_prime(p: int) -> RegularityWitness:
    """p regular iff p divides no numerator of B_2, ..., B_{p-3}.

    B_k mod p computed by inverting the series (e^t - 1)/t mod (p, t^(p-2)).
    """
    if p > 10**5:
        raise ValueError("regularity scan limited to p <= 10^5")
    if p in (2, 3):
        return RegularityWitness(p, True, ())
    L = p - 2  # need B_k for k <= p-3
    # series (e^t-1)/t = sum t^j / (j+1)!
    inv_fact = [0] * L
    f = 1
    for j in range(L):
        f = f * (j + 1) % p
        inv_fact[j] = pow(f, -1, p)
    series = inv_fact
    inv = _series_inverse_modp(series, L, p)
    irregular = []
    fact = 1
    for k in range(L):
        if k >= 2 and k % 2 == 0:
            b_k = inv[k] * fact % p  # B_k = k! * coeff
            if b_k == 0:
                irregular.append(k)
        fact = fact * (k + 1) % p
    return RegularityWitness(p, not irregular, tuple(irregular))


def _series_inverse_modp(a: list[int], L: int, p: int) -> list[int]:
    """Inverse of a power series mod (p, t^L); a[0] must be a unit."""
    out = [0] * L
    out[0] = pow(a[0], -1, p)
    prec = 1
    while prec < L:
        prec = min(2 * prec, L)
        # Newton: out <- out * (2 - a * out) mod t^prec
        ao = _poly_mul_modp(a[:prec], out[:prec], prec, p)
        two_minus = [(-c) % p for c in ao]
        two_minus[0] = (2 - ao[0]) % p
        out = _poly_mul_modp(out[:prec], two_minus, prec, p)
    return out[:L]


def _poly_mul_modp(a: list[int], b: list[int], L: int, p: int) -> list[int]:
    if L <= 64:
        out = [0] * L
        for i, ai in enumerate(a[:L]):
            if ai:
                for j, bj in enumerate(b[: L - i]):
                    if bj:
                        out[i + j] = (out[i + j] + ai * bj) % p
        return out
    from .modforms import poly_mul_trunc

    return [c % p for c in poly_mul_trunc(list(a[:L]), list(b[:L]), L - 1)]
