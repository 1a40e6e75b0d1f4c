"""Exact integer, modular and rational primitives."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .errors import InvalidInputError, NotCoprimeError

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# Above this bound no fixed base set is known to be deterministic.
_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_ROUNDS = 40
_TRIAL_LIMIT = 10**6


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ``((p1, r1), (p2, r2), ...)`` with p1 < p2 < ..."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        last = 1
        for p, r in self.factors:
            if p <= last or r < 1 or not is_prime(p):
                raise InvalidInputError(f"malformed factorization {self.factors}")
            last = p

    @property
    def value(self) -> int:
        return math.prod(p**r for p, r in self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)


def _mr_round(n: int, base: int, d: int, s: int) -> bool:
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, 40 seeded random rounds above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _DETERMINISTIC_LIMIT:
        bases = _SMALL_PRIMES
    else:
        rng = random.Random(n)
        bases = [rng.randrange(2, n - 1) for _ in range(_MR_ROUNDS)]
    return all(_mr_round(n, b, d, s) for b in bases)


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite n."""
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    f = _pollard_brent(n)
    _split(f, out)
    _split(n // f, out)


@lru_cache(maxsize=4096)
def factorize(n: int) -> Factorization:
    """Factor n >= 2: trial division below 10**6, then Pollard-Brent rho.

    >>> factorize(84).factors
    ((2, 2), (3, 1), (7, 1))
    """
    if n < 2:
        raise InvalidInputError(f"factorize needs n >= 2, got {n}")
    out: dict[int, int] = {}
    while n % 2 == 0:
        out[2] = out.get(2, 0) + 1
        n //= 2
    p = 3
    while p * p <= n and p < _TRIAL_LIMIT:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 2
    if n > 1:
        if p * p > n:
            out[n] = out.get(n, 0) + 1
        else:
            _split(n, out)
    return Factorization(tuple(sorted(out.items())))


def factorization_of(n: int) -> Factorization:
    """Like :func:`factorize` but maps 1 to the empty factorization."""
    return Factorization(()) if n == 1 else factorize(n)


def radical(n: int) -> int:
    return math.prod(factorization_of(n).primes)


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, r in factorization_of(n):
        divs = [d * p**e for d in divs for e in range(r + 1)]
    return sorted(divs)


def totient(n: int) -> int:
    result = n
    for p, _ in factorization_of(n):
        result -= result // p
    return result


def mod_pow(base: int, exp: int, modulus: int) -> int:
    if modulus < 1:
        raise InvalidInputError("modulus must be >= 1")
    if exp < 0:
        raise InvalidInputError("negative exponent; use mod_inverse")
    return pow(base, exp, modulus)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def mod_inverse(a: int, modulus: int) -> int:
    if modulus < 1:
        raise InvalidInputError("modulus must be >= 1")
    g, x, _ = ext_gcd(a % modulus, modulus)
    if g != 1:
        raise NotCoprimeError(a, modulus, g)
    return x % modulus


def multiplicative_order(a: int, modulus: int) -> int:
    """Least n >= 1 with a**n = 1 (mod modulus).

    Starts from phi(modulus) and strips prime factors while the power stays 1.
    """
    if modulus < 2:
        raise InvalidInputError("modulus must be >= 2")
    g = math.gcd(a, modulus)
    if g != 1:
        raise NotCoprimeError(a, modulus, g)
    order = totient(modulus)
    for p, _ in factorization_of(order):
        while order % p == 0 and pow(a, order // p, modulus) == 1:
            order //= p
    return order


def p_adic_valuation(n: int, p: int) -> int:
    if n == 0:
        raise InvalidInputError("valuation of 0 is infinite")
    if p < 2:
        raise InvalidInputError(f"bad prime {p}")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def primitive_root(p: int) -> int:
    """Smallest primitive root modulo the prime p."""
    if not is_prime(p):
        raise InvalidInputError(f"{p} is not prime")
    if p == 2:
        return 1
    cofactors = [(p - 1) // q for q in factorize(p - 1).primes]
    g = 2
    while any(pow(g, c, p) == 1 for c in cofactors):
        g += 1
    return g


_bernoulli_cache: list[Fraction] = [Fraction(1)]


def bernoulli_number(k: int) -> Fraction:
    """B_k from t/(e^t - 1), so B_1 = -1/2."""
    if k < 0:
        raise InvalidInputError("Bernoulli index must be >= 0")
    cache = _bernoulli_cache
    while len(cache) <= k:
        n = len(cache)
        if n > 1 and n % 2 == 1:
            cache.append(Fraction(0))
            continue
        acc = sum(math.comb(n + 1, j) * cache[j] for j in range(n))
        cache.append(-acc / (n + 1))
    return cache[k]


def bernoulli_polynomial(n: int, x: Fraction | int) -> Fraction:
    """B_n(x) = sum_k C(n, k) B_k x^(n-k), evaluated exactly."""
    if n < 0:
        raise InvalidInputError("degree must be >= 0")
    x = Fraction(x)
    return sum(
        (math.comb(n, k) * bernoulli_number(k) * x ** (n - k) for k in range(n + 1)),
        Fraction(0),
    )
