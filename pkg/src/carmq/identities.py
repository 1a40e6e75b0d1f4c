"""Expressions for C_m(a) mod m through sums over the cyclic subgroup <a>.

Every expression carries a factor lambda(m)/n with n = ord_m(a). Since n
always divides lambda(m) this factor is taken as an exact integer before any
reduction mod m; gcd(n, m) = 1 is never needed.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

from .arith import bernoulli_number, bernoulli_polynomial, mod_inverse
from .errors import InvalidInputError, InvariantViolation, NotCoprimeError
from .quotients import (
    ModulusContext,
    carmichael_quotient_exact,
    carmichael_quotient_mod,
    modulus_context,
)


@dataclass(frozen=True)
class SubgroupScan:
    m: int
    a: int
    order_n: int
    members: tuple[int, ...]  # representatives in [1, m-1], ascending


def subgroup(m: int, a: int) -> SubgroupScan:
    g = math.gcd(a, m)
    if g != 1:
        raise NotCoprimeError(a, m, g)
    members = []
    x = 1 % m
    while True:
        members.append(x if x else m)
        x = x * a % m
        if x == 1 % m:
            break
    return SubgroupScan(m, a, len(members), tuple(sorted(members)))


def _setup(ctx: ModulusContext | int, a: int) -> tuple[ModulusContext, SubgroupScan]:
    ctx = modulus_context(ctx) if isinstance(ctx, int) else ctx
    if a < 1:
        raise InvalidInputError(f"these expressions take a base a >= 1, got {a}")
    scan = subgroup(ctx.m, a)
    if ctx.lam % scan.order_n:
        raise InvariantViolation(f"ord_{ctx.m}({a}) = {scan.order_n} does not divide lambda")
    return ctx, scan


def lerch_expression(ctx: ModulusContext | int, a: int) -> int:
    """(lambda/n) * sum_{r in <a>} floor(a r / m) / (a r)  mod m."""
    ctx, scan = _setup(ctx, a)
    m = ctx.m
    total = sum(mod_inverse(a * r, m) * (a * r // m) for r in scan.members)
    return ctx.lam // scan.order_n * total % m


def beta_expression(ctx: ModulusContext | int, a: int) -> int:
    """(lambda/n) * sum_{r in <a>} beta(r) / r  mod m.

    beta(r) is the least nonnegative residue of -r/m modulo a.
    """
    ctx, scan = _setup(ctx, a)
    m = ctx.m
    m_inv = mod_inverse(m, a) if a > 1 else 0
    total = sum((-r * m_inv) % a * mod_inverse(r, m) for r in scan.members)
    return ctx.lam // scan.order_n * total % m


def power_sum_expression(ctx: ModulusContext | int, a: int) -> int:
    """-(lambda/(a n)) * sum_{k<a} sum_{r in <a>, r <= floor(k m / a)} r^(lambda-1)  mod m."""
    ctx, scan = _setup(ctx, a)
    m, lam = ctx.m, ctx.lam
    members = scan.members
    prefix = [0, *accumulate(pow(r, lam - 1, m) for r in members)]
    inner = sum(prefix[bisect_right(members, k * m // a)] for k in range(a))
    return -(lam // scan.order_n) * mod_inverse(a, m) * inner % m


def s_terms(ctx: ModulusContext | int, a: int) -> list[int]:
    """s(k, a) mod m for k = 0..a-1: r^(lambda-1) summed over r in <a> with k m/a < r < (k+1) m/a."""
    ctx, scan = _setup(ctx, a)
    m = ctx.m
    s = [0] * a
    for r in scan.members:
        k, boundary = divmod(a * r, m)
        if boundary == 0:
            raise InvariantViolation(f"a r / m integral at r={r}, m={m}, a={a}")
        s[k] = (s[k] + pow(r, ctx.lam - 1, m)) % m
    return s


def lerch_s_expression(ctx: ModulusContext | int, a: int) -> int:
    """(lambda/(a n)) * sum_k k s(k, a)  mod m."""
    ctx, scan = _setup(ctx, a)
    m = ctx.m
    total = sum(k * v for k, v in enumerate(s_terms(ctx, a)))
    return ctx.lam // scan.order_n * mod_inverse(a, m) * total % m


def bernoulli_identity(m: int, a: int, ctx: ModulusContext | None = None) -> int:
    """Evaluate the Bernoulli-polynomial formula for C_m(a) in exact rationals.

    The result is an integer identity, not a congruence.
    """
    ctx = ctx or modulus_context(m)
    if a < 1:
        raise InvalidInputError("the Bernoulli identity takes a >= 1")
    g = math.gcd(a, m)
    if g != 1:
        raise NotCoprimeError(a, m, g)
    lam = ctx.lam
    b_lam = bernoulli_number(lam)
    if b_lam == 0:
        raise InvalidInputError(f"B_{lam} vanishes; identity undefined")
    deviation = sum(
        (bernoulli_polynomial(lam, Fraction(j, a)) - b_lam for j in range(a)), Fraction(0)
    )
    value = -Fraction(a**lam) / (a * m * b_lam) * deviation
    if value.denominator != 1:
        raise InvariantViolation(f"Bernoulli identity gave non-integer {value}")
    return value.numerator


def expression_pair(which: str, m: int, a: int) -> tuple[int, int]:
    """(expression value, direct value) for the named identity; used by the CLI."""
    ctx = modulus_context(m)
    if which == "bernoulli":
        return bernoulli_identity(m, a, ctx), carmichael_quotient_exact(m, a, ctx)
    fn = EXPRESSIONS.get(which)
    if fn is None:
        raise InvalidInputError(f"unknown identity {which!r}")
    return fn(ctx, a), carmichael_quotient_mod(ctx, a)


EXPRESSIONS = {
    "lerch": lerch_expression,
    "beta": beta_expression,
    "powersum": power_sum_expression,
    "s": lerch_s_expression,
}
