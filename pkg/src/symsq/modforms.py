"""Level-1 modular forms: exact q-expansions of Delta, the Eisenstein
series E4/E6, the one-dimensional-cusp-space eigenforms, Hecke
prime-power recursions, and CSV ingestion of external coefficient data."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import factorint as _sympy_factorint


SUPPORTED_WEIGHTS = (12, 16, 18, 20, 22, 26)


class ModformError(ValueError):
    pass


class MissingPrimeError(ModformError):
    def __init__(self, primes):
        self.primes = sorted(primes)
        super().__init__(f"missing Hecke eigenvalues at primes {self.primes}")


def eta24_coefficients(n: int) -> list[int]:
    """Coefficients f_0..f_n of prod (1-q^m)^24 by the pentagonal recurrence.

    From q d/dq log(phi^24): j*f_j = -sum_{k != 0} (-1)^k (j - 25 g_k) f_{j-g_k}
    over pentagonal numbers g_k <= j.
    """
    pent = []
    j = 1
    while j * (3 * j - 1) // 2 <= n:
        for g in (j * (3 * j - 1) // 2, j * (3 * j + 1) // 2):
            if g <= n:
                pent.append((g, -1 if j % 2 else 1))
        j += 1
    pent.sort()
    f = [0] * (n + 1)
    f[0] = 1
    for m in range(1, n + 1):
        acc = 0
        for g, sign in pent:
            if g > m:
                break
            acc += sign * (m - 25 * g) * f[m - g]
        q, r = divmod(-acc, m)
        assert r == 0, "pentagonal recurrence must divide exactly"
        f[m] = q
    return f


def _divisor_power_sums(n: int, e: int) -> list[int]:
    sig = [0] * (n + 1)
    for d in range(1, n + 1):
        de = d**e
        for m in range(d, n + 1, d):
            sig[m] += de
    return sig


def eisenstein(weight: int, n: int) -> list[int]:
    if weight == 4:
        return [1] + [240 * s for s in _divisor_power_sums(n, 3)[1:]]
    if weight == 6:
        return [1] + [-504 * s for s in _divisor_power_sums(n, 5)[1:]]
    raise ModformError("only E4 and E6 are generated here")


def _split_signs(a: list[int]) -> tuple[list[int], list[int]]:
    pos = [c if c > 0 else 0 for c in a]
    neg = [-c if c < 0 else 0 for c in a]
    return pos, neg


def _kronecker_mul_nonneg(a: list[int], b: list[int], n: int, slot_bits: int) -> list[int]:
    # pack nonnegative coefficient lists into big ints; one big multiply
    base = 1 << slot_bits
    pa = 0
    for c in reversed(a[: n + 1]):
        pa = (pa << slot_bits) | c
    pb = 0
    for c in reversed(b[: n + 1]):
        pb = (pb << slot_bits) | c
    prod = pa * pb
    mask = base - 1
    out = []
    for _ in range(n + 1):
        out.append(prod & mask)
        prod >>= slot_bits
    return out


def poly_mul_trunc(a: list[int], b: list[int], n: int) -> list[int]:
    """Truncated integer polynomial product via Kronecker substitution."""
    a = a[: n + 1]
    b = b[: n + 1]
    max_a = max((abs(c) for c in a), default=0)
    max_b = max((abs(c) for c in b), default=0)
    if max_a == 0 or max_b == 0:
        return [0] * (n + 1)
    bound = max_a * max_b * (n + 1)
    slot_bits = bound.bit_length() + 2
    ap, an = _split_signs(a)
    bp, bn = _split_signs(b)
    pp = _kronecker_mul_nonneg(ap, bp, n, slot_bits)
    nn = _kronecker_mul_nonneg(an, bn, n, slot_bits)
    pn = _kronecker_mul_nonneg(ap, bn, n, slot_bits)
    np_ = _kronecker_mul_nonneg(an, bp, n, slot_bits)
    return [pp[i] + nn[i] - pn[i] - np_[i] for i in range(n + 1)]


@dataclass(frozen=True)
class QExpansion:
    """Exact q-expansion a_0..a_n of a modular form with metadata."""

    weight: int
    level: int
    coeffs: tuple
    nebentypus: object = None  # trivial for level 1

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def a(self, n: int):
        if n > self.truncation:
            raise ModformError(f"coefficient a_{n} beyond truncation {self.truncation}")
        return self.coeffs[n]

    def is_normalized(self) -> bool:
        return self.truncation >= 1 and self.coeffs[1] == 1

    def hecke_data(self) -> "HeckeData":
        primes = {}
        p = 2
        while p <= self.truncation:
            primes[p] = self.coeffs[p]
            p = _next_prime(p)
        return HeckeData(weight=self.weight, eps=self.nebentypus, prime_eigenvalues=primes)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "a_n"])
            for n in range(1, self.truncation + 1):
                w.writerow([n, self.coeffs[n]])


def _next_prime(p: int) -> int:
    q = p + 1
    while True:
        if all(q % r for r in range(2, int(math.isqrt(q)) + 1)):
            return q
        q += 1


def level1_eigenform(k: int, n: int) -> QExpansion:
    """The unique normalized cusp eigenform of level 1 and weight k, to q^n."""
    if k not in SUPPORTED_WEIGHTS:
        raise ModformError(
            f"weight {k}: cusp space is not 1-dimensional (supported: {SUPPORTED_WEIGHTS})"
        )
    if n < 1:
        raise ModformError("truncation must be >= 1")
    eta = eta24_coefficients(n)          # phi^24 up to q^n
    delta = [0] + eta[:n]                # q * phi^24
    form = delta
    extra = {12: (), 16: (4,), 18: (6,), 20: (4, 4), 22: (4, 6), 26: (4, 4, 6)}[k]
    for w in extra:
        form = poly_mul_trunc(form, eisenstein(w, n), n)
    return QExpansion(weight=k, level=1, coeffs=tuple(form))


@dataclass
class HeckeData:
    """Prime eigenvalues plus the derived prime-power tables.

    Prime powers satisfy a_{l^(r+1)} = a_l a_{l^r} - l^(k-1) eps(l) a_{l^(r-1)}.
    """

    weight: int
    eps: object = None  # None means the trivial character
    prime_eigenvalues: dict = field(default_factory=dict)
    _power_cache: dict = field(default_factory=dict, repr=False)

    def eps_value(self, ell: int):
        if self.eps is None:
            return 1
        return self.eps.value(ell)

    def a_prime_power(self, ell: int, r: int):
        if r == 0:
            return 1
        if ell not in self.prime_eigenvalues:
            raise MissingPrimeError([ell])
        key = (ell, r)
        if key in self._power_cache:
            return self._power_cache[key]
        a = self.prime_eigenvalues[ell]
        norm = ell ** (self.weight - 1) * self.eps_value(ell)
        prev, cur = 1, a
        for i in range(2, r + 1):
            prev, cur = cur, a * cur - norm * prev
            self._power_cache[(ell, i)] = cur
        self._power_cache[key] = cur if r > 1 else a
        return self._power_cache[key]

    def a(self, n: int):
        """a_n by multiplicativity over the prime factorization."""
        if n == 1:
            return 1
        out = 1
        missing = []
        for ell, e in _sympy_factorint(n).items():
            ell = int(ell)
            if ell not in self.prime_eigenvalues:
                missing.append(ell)
                continue
            out *= self.a_prime_power(ell, int(e))
        if missing:
            raise MissingPrimeError(missing)
        return out


def extend_multiplicatively(h: HeckeData, n: int) -> QExpansion:
    """QExpansion of length n from prime data alone (a_0 = 0)."""
    missing = []
    p = 2
    while p <= n:
        if p not in h.prime_eigenvalues:
            missing.append(p)
        p = _next_prime(p)
    if missing:
        raise MissingPrimeError(missing)
    coeffs = [0] * (n + 1)
    coeffs[0] = 0
    for m in range(1, n + 1):
        coeffs[m] = h.a(m)
    return QExpansion(weight=h.weight, level=1, coeffs=tuple(coeffs), nebentypus=h.eps)


class IngestWarning:
    def __init__(self, message: str):
        self.message = message

    def __repr__(self):
        return f"IngestWarning({self.message!r})"


def ingest_coeffs(path, weight: int, level: int = 1, hecke_check_bound: int = 100):
    """Read rows "n,a_n" (contiguous n from 1) and Hecke-check small primes.

    Returns (QExpansion, [IngestWarning...]).  Malformed input raises
    ModformError with the offending line number.
    """
    coeffs = [0]
    warnings: list[IngestWarning] = []
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ModformError("parse error at line 1: empty file")
    start = 0
    if rows and rows[0] and not _is_int(rows[0][0]):
        start = 1  # header
    expected = 1
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if not row:
            continue
        if len(row) != 2 or not _is_int(row[0]):
            raise ModformError(f"parse error at line {lineno}: expected 'n,a_n'")
        n = int(row[0])
        if n != expected:
            raise ModformError(f"parse error at line {lineno}: expected n = {expected}, found {n}")
        try:
            a_n = int(row[1]) if _is_int(row[1]) else Fraction(row[1])
        except ValueError:
            raise ModformError(f"parse error at line {lineno}: bad coefficient {row[1]!r}")
        coeffs.append(a_n)
        expected += 1
    if len(coeffs) == 1:
        raise ModformError("parse error at line 1: no data rows")
    q = QExpansion(weight=weight, level=level, coeffs=tuple(coeffs))
    if not q.is_normalized():
        warnings.append(IngestWarning("a_1 != 1: not a normalized eigenform"))
    # Hecke consistency on primes with l^2 or l*l' within range
    nmax = q.truncation
    p = 2
    while p <= min(hecke_check_bound, nmax):
        if p * p <= nmax:
            expect = coeffs[p] * coeffs[p] - p ** (weight - 1) * coeffs[1]
            if coeffs[p * p] != expect:
                warnings.append(IngestWarning(
                    f"Hecke inconsistency: a_{p*p} != a_{p}^2 - {p}^{weight-1}"))
        r = _next_prime(p)
        while p * r <= min(nmax, hecke_check_bound**2):
            if coeffs[p * r] != coeffs[p] * coeffs[r]:
                warnings.append(IngestWarning(
                    f"Hecke inconsistency: a_{p*r} != a_{p} a_{r}"))
            r = _next_prime(r)
        p = _next_prime(p)
    return q, warnings


def _is_int(s: str) -> bool:
    s = s.strip()
    return s.lstrip("+-").isdigit() if s else False


def deligne_bound_ok(q: QExpansion, prime_bound: int = 10**4) -> bool:
    """|a_l| <= 2 l^((k-1)/2) sanity check on generated prime coefficients."""
    p = 2
    while p <= min(prime_bound, q.truncation):
        if abs(q.coeffs[p]) ** 2 > 4 * p ** (q.weight - 1):
            return False
        p = _next_prime(p)
    return True
