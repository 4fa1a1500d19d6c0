"""Integer primality, factorization, and divisor enumeration.

Deterministic Miller-Rabin for the sizes that arise in practice, Pollard's
rho for factoring, and divisor lists built from the factorization.  These
support prime validation of places and rational root candidates.
"""

from __future__ import annotations

import math
import random

# Witnesses proving primality for every n < 3_317_044_064_679_887_385_961_981.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    """Return True iff ``n`` is prime.

    Deterministic for n below ~3.3e24 via the fixed Miller-Rabin witness
    set; beyond that, extra random witnesses are added (error probability
    below 4**-64).
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    witnesses = list(_MR_WITNESSES)
    if n >= _MR_DETERMINISTIC_LIMIT:
        rng = random.Random(0xC0FFEE ^ n)
        witnesses += [rng.randrange(2, n - 1) for _ in range(64)]
    for a in witnesses:
        a %= n
        if a in (0, 1, n - 1):
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int, rng: random.Random) -> int:
    """Find a nontrivial factor of composite odd ``n``."""
    while True:
        c = rng.randrange(1, n)
        x = rng.randrange(2, n)
        y = x
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d


def factorize(n: int) -> dict[int, int]:
    """Return the prime factorization of ``n`` >= 1 as {prime: exponent}."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    factors: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    if n == 1:
        return dict(sorted(factors.items()))
    rng = random.Random(0x5EED)
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m, rng)
        stack.append(d)
        stack.append(m // d)
    return dict(sorted(factors.items()))


def divisors(n: int) -> list[int]:
    """Return all positive divisors of ``n`` >= 1, ascending."""
    divs = [1]
    for p, k in factorize(n).items():
        divs = [d * p**i for d in divs for i in range(k + 1)]
    return sorted(divs)
