"""Carmichael function, Carmichael/Euler/Fermat quotients and their congruences."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

from .arith import (
    Factorization,
    ext_gcd,
    factorization_of,
    factorize,
    is_prime,
    mod_inverse,
    totient,
)
from .errors import HypothesisError, InvalidInputError, NotCoprimeError, SizeGuardError

# Exact powers a**lambda(m) larger than this many bits are refused.
EXACT_BIT_GUARD = 10**6


def prime_power_lambda(p: int, r: int) -> int:
    if p == 2 and r >= 3:
        return 2 ** (r - 2)
    return p ** (r - 1) * (p - 1)


def carmichael_lambda(f: Factorization | int) -> int:
    """lambda(m), the exponent of the unit group mod m; lambda(1) = 1."""
    if isinstance(f, int):
        if f < 1:
            raise InvalidInputError(f"lambda needs m >= 1, got {f}")
        f = factorization_of(f)
    lam = 1
    for p, r in f:
        lam = math.lcm(lam, prime_power_lambda(p, r))
    return lam


@dataclass(frozen=True)
class PrimeComponent:
    p: int
    r: int
    q: int  # p**r
    lam: int  # lambda(p**r)
    d: int  # lambda(m) / lambda(p**r)
    w: int  # p**w = gcd(d, p**r)
    m_i: int  # m / p**r
    m_i_prime: int  # m_i**2 * m_i_prime = 1 (mod p**r)


@dataclass(frozen=True)
class ModulusContext:
    """Everything about m that the quotient machinery keeps recomputing."""

    m: int
    factorization: Factorization
    lam: int
    phi: int
    per_prime: tuple[PrimeComponent, ...] = field(repr=False)

    def component(self, p: int) -> PrimeComponent:
        for c in self.per_prime:
            if c.p == p:
                return c
        raise InvalidInputError(f"{p} does not divide {self.m}")


@lru_cache(maxsize=8192)
def modulus_context(m: int) -> ModulusContext:
    if m < 2:
        raise InvalidInputError(f"modulus must be >= 2, got {m}")
    f = factorize(m)
    lam = carmichael_lambda(f)
    comps = []
    for p, r in f:
        q = p**r
        lam_q = prime_power_lambda(p, r)
        d = lam // lam_q
        g = math.gcd(d, q)
        w = 0
        while g % p == 0:
            g //= p
            w += 1
        m_i = m // q
        comps.append(PrimeComponent(p, r, q, lam_q, d, w, m_i, mod_inverse(m_i * m_i, q)))
    return ModulusContext(m, f, lam, totient(m), tuple(comps))


def _ctx(ctx: ModulusContext | int) -> ModulusContext:
    return modulus_context(ctx) if isinstance(ctx, int) else ctx


def _require_coprime(a: int, m: int) -> None:
    g = math.gcd(a, m)
    if g != 1:
        raise NotCoprimeError(a, m, g)


def _quotient_mod(a: int, exponent: int, m: int, k: int) -> int:
    # (a**e - 1)/m mod m**k, read off from a**e mod m**(k+1).
    if k < 1:
        raise InvalidInputError("level k must be >= 1")
    top = m ** (k + 1)
    return (pow(a, exponent, top) - 1) % top // m


def carmichael_quotient_exact(m: int, a: int, ctx: ModulusContext | None = None) -> int:
    """C_m(a) = (a**lambda(m) - 1) / m as an exact integer."""
    ctx = ctx or modulus_context(m)
    _require_coprime(a, m)
    if ctx.lam * abs(a).bit_length() > EXACT_BIT_GUARD:
        raise SizeGuardError(
            f"a**lambda(m) exceeds {EXACT_BIT_GUARD} bits; use carmichael_quotient_mod"
        )
    q, rem = divmod(a**ctx.lam - 1, m)
    if rem:
        raise InvalidInputError(f"({a}^{ctx.lam} - 1) is not divisible by {m}")
    return q


def carmichael_quotient_mod(ctx: ModulusContext | int, a: int, k: int = 1) -> int:
    ctx = _ctx(ctx)
    _require_coprime(a, ctx.m)
    return _quotient_mod(a, ctx.lam, ctx.m, k)


def euler_quotient_mod(ctx: ModulusContext | int, a: int, k: int = 1) -> int:
    ctx = _ctx(ctx)
    _require_coprime(a, ctx.m)
    return _quotient_mod(a, ctx.phi, ctx.m, k)


def fermat_quotient_mod(p: int, a: int, k: int = 1) -> int:
    if not is_prime(p):
        raise InvalidInputError(f"Fermat quotient needs a prime modulus, got {p}")
    _require_coprime(a, p)
    return _quotient_mod(a, p - 1, p, k)


def euler_quotient_exact(m: int, a: int) -> int:
    _require_coprime(a, m)
    phi = totient(m)
    if phi * abs(a).bit_length() > EXACT_BIT_GUARD:
        raise SizeGuardError("a**phi(m) exceeds the exact size guard")
    return (a**phi - 1) // m


_EXPONENTS = {
    "carmichael": lambda ctx: ctx.lam,
    "euler": lambda ctx: ctx.phi,
    "fermat": lambda ctx: ctx.m - 1,
}


@dataclass(frozen=True)
class QuotientValue:
    kind: Literal["carmichael", "euler", "fermat"]
    m: int
    a: int
    residues: dict[int, int]
    exact: int | None = None

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "m": str(self.m),
            "a": str(self.a),
            "residues": {str(k): str(v) for k, v in sorted(self.residues.items())},
        }
        if self.exact is not None:
            out["exact"] = str(self.exact)
        return out


def quotient_value(kind: str, m: int, a: int, levels=(1,), exact: bool = False) -> QuotientValue:
    if kind not in _EXPONENTS:
        raise InvalidInputError(f"unknown quotient kind {kind!r}")
    if kind == "fermat" and not is_prime(m):
        raise InvalidInputError(f"Fermat quotient needs a prime modulus, got {m}")
    ctx = modulus_context(m)
    _require_coprime(a, m)
    e = _EXPONENTS[kind](ctx)
    residues = {k: _quotient_mod(a, e, m, k) for k in levels}
    value = None
    if exact:
        if e * abs(a).bit_length() > EXACT_BIT_GUARD:
            raise SizeGuardError("exact value exceeds the size guard; drop --exact")
        value = (a**e - 1) // m
    return QuotientValue(kind, m, a, residues, value)


def relation_rhs(ctx: ModulusContext | int, a: int) -> int:
    """(phi(m)/lambda(m)) * C_m(a) mod m, which should equal Q_m(a) mod m."""
    ctx = _ctx(ctx)
    return ctx.phi // ctx.lam * carmichael_quotient_mod(ctx, a) % ctx.m


def shift_congruence_rhs(ctx: ModulusContext | int, a: int, t: int, alpha: int) -> int:
    """C_m(a) + t*lambda(m)*a^-1*m^(alpha-1) mod m^alpha, the value of C_m(a + t*m^alpha)."""
    ctx = _ctx(ctx)
    if alpha < 1:
        raise InvalidInputError("alpha must be >= 1")
    mod = ctx.m**alpha
    base = carmichael_quotient_mod(ctx, a, alpha)
    return (base + t * ctx.lam * mod_inverse(a, mod) * ctx.m ** (alpha - 1)) % mod


def block_sum(
    ctx: ModulusContext | int,
    variant: Literal["sum1", "sum2", "sum3"],
    a: int | None = None,
    k: int | None = None,
) -> int:
    """Left-hand sides of the three short-sum congruences, reduced mod m.

    sum1: sum_{j<m} C_m(a + j m)        (needs ``a``)
    sum2: sum over units a <= m^2 of C_m(a)
    sum3: sum over units in (k m, (k+1) m) of C_m(a)   (needs ``k``)
    """
    ctx = _ctx(ctx)
    m = ctx.m
    if variant in ("sum1", "sum2") and m < 3:
        raise HypothesisError(f"{variant} requires m >= 3")
    if variant == "sum1":
        if a is None:
            raise InvalidInputError("sum1 needs a base a")
        _require_coprime(a, m)
        return sum(carmichael_quotient_mod(ctx, a + j * m) for j in range(m)) % m
    if variant == "sum2":
        return sum(
            carmichael_quotient_mod(ctx, b) for b in range(1, m * m + 1) if math.gcd(b, m) == 1
        ) % m
    if variant == "sum3":
        if k is None:
            raise InvalidInputError("sum3 needs a block index k")
        return sum(
            carmichael_quotient_mod(ctx, b)
            for b in range(k * m + 1, (k + 1) * m)
            if math.gcd(b, m) == 1
        ) % m
    raise InvalidInputError(f"unknown block sum {variant!r}")


def crt_combine(ctx: ModulusContext | int, a: int) -> int:
    """sum_i m_i m'_i d_i C_{p_i^r_i}(a) mod m."""
    ctx = _ctx(ctx)
    _require_coprime(a, ctx.m)
    total = 0
    for c in ctx.per_prime:
        total += c.m_i * c.m_i_prime * c.d * carmichael_quotient_mod(c.q, a)
    return total % ctx.m


def prime_power_reduce(p: int, i: int, j: int, a: int) -> tuple[int, int]:
    """(C_{p^j}(a), C_{p^i}(a)) reduced mod p^i, or mod 2^(i-1) when p = 2."""
    if not is_prime(p):
        raise InvalidInputError(f"{p} is not prime")
    if not 1 <= i <= j:
        raise InvalidInputError("need 1 <= i <= j")
    if p == 2 and i < 3:
        raise HypothesisError("the 2-power reduction is stated for 3 <= i <= j")
    mod = p ** (i - 1) if p == 2 else p**i
    return carmichael_quotient_mod(p**j, a) % mod, carmichael_quotient_mod(p**i, a) % mod


def fermat_reduction(ctx: ModulusContext | int, p: int, a: int) -> int:
    """m_1 m_1' d_1 Q_p(a) mod p for an odd prime p | m."""
    ctx = _ctx(ctx)
    if p == 2:
        raise HypothesisError("reduction to Fermat quotients needs an odd prime")
    c = ctx.component(p)
    _require_coprime(a, ctx.m)
    return c.m_i * c.m_i_prime * c.d * fermat_quotient_mod(p, a) % p


def cross_modulus_rhs(m: int, n: int, a: int, mode: Literal["div", "bilinear"]) -> int:
    """Right-hand sides relating C_mn(a) to C_m(a) and C_n(a) for coprime m, n.

    ``div`` is taken mod m, ``bilinear`` mod mn.
    """
    if m < 2 or n < 2:
        raise InvalidInputError("moduli must be >= 2")
    if math.gcd(m, n) != 1:
        raise NotCoprimeError(m, n, math.gcd(m, n))
    _require_coprime(a, m * n)
    lm, ln = carmichael_lambda(m), carmichael_lambda(n)
    g = math.gcd(lm, ln)
    if mode == "div":
        return ln // g * mod_inverse(n, m) * carmichael_quotient_mod(m, a) % m
    if mode == "bilinear":
        one, x, y = ext_gcd(m * m, n * n)
        assert one == 1
        mn = m * n
        return (
            n * (ln // g) * y * carmichael_quotient_mod(m, a)
            + m * (lm // g) * x * carmichael_quotient_mod(n, a)
        ) % mn
    raise InvalidInputError(f"unknown mode {mode!r}")
