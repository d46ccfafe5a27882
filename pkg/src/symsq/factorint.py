"""Integer factorization with a time budget and probable-prime flagging."""

from __future__ import annotations

import time
from dataclasses import dataclass

import sympy

_CERTIFIED_BELOW = 2**64  # BPSW is deterministic well beyond this


class FactorizationBudgetError(RuntimeError):
    """Factorization exceeded its time budget; carries the partial result."""

    def __init__(self, partial, remaining):
        self.partial = partial
        self.remaining = remaining
        super().__init__(
            f"factorization budget exceeded; unfactored cofactor with "
            f"{len(str(remaining))} digits remains")


@dataclass(frozen=True)
class PrimeFactor:
    prime: int
    exponent: int
    probable: bool  # True when primality is probabilistic (prime > 2^64)


def factor_integer(n: int, time_budget: float = 60.0) -> list[PrimeFactor]:
    """Factor n >= 1 into prime powers.

    Factors above 2^64 are flagged as probable primes.  If the budget runs
    out, FactorizationBudgetError carries the partial factorization.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return []
    deadline = time.monotonic() + time_budget
    found: dict[int, int] = {}
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if sympy.isprime(m):
            found[m] = found.get(m, 0) + 1
            continue
        if time.monotonic() > deadline:
            raise FactorizationBudgetError(_as_factors(found), m)
        # small primes first, then rho/p-1 via sympy with limited effort
        small = sympy.factorint(m, limit=10**5, multiple=False)
        composite_parts = []
        for q, e in small.items():
            q = int(q)
            if sympy.isprime(q):
                found[q] = found.get(q, 0) + int(e)
            else:
                composite_parts.extend([q] * int(e))
        for part in composite_parts:
            split = _try_split(part, deadline)
            if split is None:
                raise FactorizationBudgetError(_as_factors(found), part)
            stack.extend(split)
    result = _as_factors(found)
    check = 1
    for f in result:
        check *= f.prime**f.exponent
    assert check == n, "factorization recomposition failed"
    return result


def _try_split(m: int, deadline: float):
    for attempt in range(8):
        if time.monotonic() > deadline:
            return None
        r = sympy.pollard_rho(m, seed=1234 + attempt)
        if r is None:
            r = sympy.pollard_pm1(m, B=10**4 * (attempt + 1))
        if r and 1 < r < m:
            return [r, m // r]
    return None


def _as_factors(found: dict[int, int]) -> list[PrimeFactor]:
    return [
        PrimeFactor(prime=p, exponent=e, probable=p >= _CERTIFIED_BELOW)
        for p, e in sorted(found.items())
    ]
