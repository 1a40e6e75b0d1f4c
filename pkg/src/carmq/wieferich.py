"""Carmichael-Wieferich numbers: valuation criterion, base sets, non-vanishing."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from .arith import factorize, is_prime, mod_inverse, p_adic_valuation, totient
from .errors import HypothesisError, InvalidInputError, InvariantViolation, NotCoprimeError
from .quotients import ModulusContext, carmichael_quotient_mod, modulus_context

INF = math.inf


def _ctx(ctx: ModulusContext | int) -> ModulusContext:
    return modulus_context(ctx) if isinstance(ctx, int) else ctx


def _valuation_power_minus_one(a: int, e: int, p: int) -> float | int:
    """ord_p(a**e - 1) without forming a**e; inf when a**e == 1."""
    if abs(a) == 1 and (a == 1 or e % 2 == 0):
        return INF
    k = 8
    while True:
        mod = p**k
        x = (pow(a, e, mod) - 1) % mod
        if x:
            return p_adic_valuation(x, p)
        k *= 2


def sigma(a: int, p: int) -> float | int:
    """sigma(a, p): ord_p(a^(p-1) - 1) - 1 for odd p; the mod-4 split at p = 2.

    Returns ``math.inf`` for a = 1 (and a = -1), where a^(p-1) - 1 vanishes.
    """
    if not is_prime(p):
        raise InvalidInputError(f"{p} is not prime")
    if a % p == 0:
        raise NotCoprimeError(a, p, p)
    if p == 2:
        b = a - 1 if a % 4 == 1 else a + 1
        return INF if b == 0 else p_adic_valuation(b, 2) - 1
    return _valuation_power_minus_one(a, p - 1, p) - 1


def e_exponent(ctx: ModulusContext | int, p: int) -> int:
    """Modulus-only part e(m, p) of ord_p C_m(a); can be -1 at p = 2."""
    ctx = _ctx(ctx)
    alpha = ctx.component(p).r
    lcm = math.lcm(*(q - 1 for q in ctx.factorization.primes))
    v = p_adic_valuation(lcm, p)
    if p != 2 or alpha <= 2:
        return max(0, v - alpha + 1)
    return max(0, v - alpha + 2) - 1


def quotient_p_valuation(ctx: ModulusContext | int, a: int, p: int) -> float | int:
    """ord_p C_m(a) = e(m, p) + sigma(a, p), for m >= 3."""
    ctx = _ctx(ctx)
    if ctx.m < 3:
        raise HypothesisError("the valuation formula is stated for m >= 3")
    g = math.gcd(a, ctx.m)
    if g != 1:
        raise NotCoprimeError(a, ctx.m, g)
    return e_exponent(ctx, p) + sigma(a, p)


@dataclass(frozen=True)
class Evidence:
    p: int
    alpha: int
    e: int | None
    sigma: float | int
    satisfied: bool

    def to_json(self) -> dict:
        return {
            "p": str(self.p),
            "alpha": str(self.alpha),
            "e": None if self.e is None else str(self.e),
            "sigma": "inf" if self.sigma == INF else str(self.sigma),
        }


@dataclass(frozen=True)
class WieferichRecord:
    m: int
    a: int
    is_cw: bool
    per_prime_evidence: tuple[Evidence, ...]
    # Excluded from JSON so that output stays byte-reproducible.
    wall_clock_ns: int = field(default=0, compare=False)

    def to_json(self) -> dict:
        return {
            "m": str(self.m),
            "a": str(self.a),
            "is_cw": self.is_cw,
            "evidence": [ev.to_json() for ev in self.per_prime_evidence],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WieferichRecord":
        ev = []
        for item in obj["evidence"]:
            alpha = int(item["alpha"])
            e = None if item["e"] is None else int(item["e"])
            s = INF if item["sigma"] == "inf" else int(item["sigma"])
            ok = e is not None and e + s >= alpha
            ev.append(Evidence(int(item["p"]), alpha, e, s, ok if e is not None else obj["is_cw"]))
        return cls(int(obj["m"]), int(obj["a"]), obj["is_cw"], tuple(ev))


def _is_cw_direct(ctx: ModulusContext, a: int) -> bool:
    return carmichael_quotient_mod(ctx, a) == 0


def is_carmichael_wieferich(
    ctx: ModulusContext | int, a: int, mode: Literal["criterion", "direct"] = "criterion"
) -> WieferichRecord:
    ctx = _ctx(ctx)
    g = math.gcd(a, ctx.m)
    if g != 1:
        raise NotCoprimeError(a, ctx.m, g)
    start = time.perf_counter_ns()
    if ctx.m == 2:
        # The valuation machinery assumes m >= 3.
        hit = _is_cw_direct(ctx, a)
        evidence = (Evidence(2, 1, None, sigma(a, 2), hit),)
    else:
        evidence = tuple(
            Evidence(c.p, c.r, e, s, e + s >= c.r)
            for c in ctx.per_prime
            for e, s in [(e_exponent(ctx, c.p), sigma(a, c.p))]
        )
        if mode == "criterion":
            hit = all(ev.satisfied for ev in evidence)
        elif mode == "direct":
            hit = _is_cw_direct(ctx, a)
        else:
            raise InvalidInputError(f"unknown mode {mode!r}")
    return WieferichRecord(ctx.m, a, hit, evidence, time.perf_counter_ns() - start)


def base_sets(ctx: ModulusContext | int) -> tuple[tuple[int, ...], int]:
    """(S_m, |T_m|): C-W bases in [1, m] and the count of C-W bases in [1, m^2]."""
    ctx = _ctx(ctx)
    m = ctx.m
    if m < 3:
        raise HypothesisError("base sets are defined for m >= 3")
    s_m = tuple(a for a in range(1, m + 1) if math.gcd(a, m) == 1 and _is_cw_direct(ctx, a))
    t_count = sum(
        1 for a in range(1, m * m + 1) if math.gcd(a, m) == 1 and _is_cw_direct(ctx, a)
    )
    return s_m, t_count


def image_by_enumeration(ctx: ModulusContext | int) -> frozenset[int]:
    """Image of a -> C_m(a) mod m over the units mod m^2."""
    ctx = _ctx(ctx)
    m = ctx.m
    return frozenset(
        carmichael_quotient_mod(ctx, a) for a in range(1, m * m + 1) if math.gcd(a, m) == 1
    )


def valuation_image_generator(ctx: ModulusContext | int) -> int:
    """Generator g with image(C) = gZ/mZ, read off the minimal p-adic valuations.

    sigma(a, p) attains 0 for odd p and 1 for p = 2, so the p-part of the
    image generator is p^min(alpha, e(m, p) + [p = 2]).
    """
    ctx = _ctx(ctx)
    if ctx.m == 2:
        return 1
    g = 1
    for c in ctx.per_prime:
        g *= c.p ** min(c.r, e_exponent(ctx, c.p) + (1 if c.p == 2 else 0))
    return g


@dataclass(frozen=True)
class HomReport:
    m: int
    d: int
    d_prime: int
    image_index: int  # [Z/mZ : d' Z/mZ] = gcd(d', m)
    image_size: int
    kernel_order: int  # d' * phi(m)
    valuation_generator: int


def hom_report(ctx: ModulusContext | int) -> HomReport:
    """Image and kernel of C : (Z/m^2)* -> Z/m from the per-prime d_r case split."""
    ctx = _ctx(ctx)
    m = ctx.m
    prod = math.prod(p - 1 for p in ctx.factorization.primes)
    d = 1
    for p, alpha in ctx.factorization:
        extra = 2 if p == 2 and alpha >= 2 else 1
        d *= math.gcd(p**alpha, extra * prod)
    d_prime = d // math.gcd(ctx.phi // ctx.lam, m)
    idx = math.gcd(d_prime, m)
    return HomReport(
        m=m,
        d=d,
        d_prime=d_prime,
        image_index=idx,
        image_size=m // idx,
        kernel_order=d_prime * ctx.phi,
        valuation_generator=valuation_image_generator(ctx),
    )


def density_ratio(m: int) -> Fraction:
    """|T_m| / phi(m^2) as predicted by the kernel-order formula."""
    if m < 3:
        raise HypothesisError("density ratio is defined for m >= 3")
    return Fraction(hom_report(m).kernel_order, totient(m * m))


def near_unity_expression(ctx: ModulusContext | int, a: int, r: int) -> int:
    """C_m(a) = +-(t/r) lambda(m) mod m where a^r = +-1 + t m."""
    ctx = _ctx(ctx)
    m = ctx.m
    if a < 2:
        raise HypothesisError("needs a >= 2")
    for x, y in ((a, m), (r, m)):
        if math.gcd(x, y) != 1:
            raise NotCoprimeError(x, y, math.gcd(x, y))
    if r < 1:
        raise InvalidInputError("r must be >= 1")
    residue = pow(a, r, m)
    if residue == 1 % m:
        sign, t = 1, (a**r - 1) // m
    elif residue == m - 1:
        sign, t = -1, (a**r + 1) // m
    else:
        raise HypothesisError(f"{a}^{r} is not +-1 mod {m}")
    return sign * t * mod_inverse(r, m) * ctx.lam % m


def _check_factored_d(m: int, a: int, s: int, k: int, sign: str) -> tuple[int, int, int]:
    if m < 2:
        raise InvalidInputError("m must be >= 2")
    if a < 2:
        raise HypothesisError("needs a >= 2")
    if s < 1 or k < 1:
        raise HypothesisError("needs s, k >= 1")
    if sign not in ("+", "-"):
        raise InvalidInputError("sign must be '+' (a^sk - 1) or '-' (a^sk + 1)")
    if math.gcd(a, m) != 1:
        raise NotCoprimeError(a, m, math.gcd(a, m))
    if math.gcd(s * k, m) != 1:
        raise HypothesisError(f"gcd(sk, m) = {math.gcd(s * k, m)} != 1")
    if sign == "-" and s % 2 == 0:
        raise HypothesisError("s must be odd for the a^sk + 1 form")
    eps = 1 if sign == "+" else -1
    denom = a**k - eps
    big_d, rem = divmod(a ** (s * k) - eps, denom)
    assert rem == 0
    return eps, denom, big_d


def factored_d_expression(m: int, a: int, s: int, k: int, sign: str) -> int:
    """+-d (a^k -+ 1) lambda(m) / (s k) mod m, valid when D = (a^sk -+ 1)/(a^k -+ 1) = m d."""
    eps, denom, big_d = _check_factored_d(m, a, s, k, sign)
    d, rem = divmod(big_d, m)
    if rem:
        raise HypothesisError(f"{m} does not divide D = {big_d}")
    lam = modulus_context(m).lam
    return eps * d * denom * lam * mod_inverse(s * k, m) % m


def linear_factor_nonvanishing(m: int, a: int, s: int, k: int, sign: str) -> bool:
    """True when m is a linear factor of D, which forces C_m(a) != 0 mod m."""
    eps, denom, big_d = _check_factored_d(m, a, s, k, sign)
    primes = factorize(m).primes
    if primes == (2,):
        raise HypothesisError("m is a power of 2; the largest-prime hypothesis is not stated there")
    if denom % primes[-1] == 0:
        raise HypothesisError(f"largest prime factor {primes[-1]} divides a^k -+ 1")
    return big_d % m == 0 and big_d % (m * m) != 0


def order_two_nonvanishing_applies(m: int, a: int) -> bool:
    """Whether the order-2 non-vanishing statement covers (m, a)."""
    if not 0 < a < m or math.gcd(a, m) != 1:
        return False
    return math.gcd(modulus_context(m).lam, m) == 1 and a * a % m == 1 and a != 1


def check_consistency(ctx: ModulusContext | int, a: int) -> WieferichRecord:
    """Run both modes and raise if they disagree."""
    crit = is_carmichael_wieferich(ctx, a, "criterion")
    direct = is_carmichael_wieferich(ctx, a, "direct")
    if crit.is_cw != direct.is_cw:
        raise InvariantViolation(f"criterion and direct disagree at m={crit.m}, a={a}")
    return crit
