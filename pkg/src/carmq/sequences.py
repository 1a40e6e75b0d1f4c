"""The quotient sequences a_n, b_n and their least periods."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .arith import divisors, radical
from .errors import HorizonTooSmallError, InvalidInputError, InvariantViolation
from .quotients import ModulusContext, carmichael_quotient_mod, modulus_context


def _ctx(ctx: ModulusContext | int) -> ModulusContext:
    return modulus_context(ctx) if isinstance(ctx, int) else ctx


def sequence_a(ctx: ModulusContext | int, n: int) -> int:
    """CRT-assembled quotient; the p_i-component is zeroed when p_i | n."""
    ctx = _ctx(ctx)
    if n < 1:
        raise InvalidInputError("sequence index starts at 1")
    total = 0
    for c in ctx.per_prime:
        if n % c.p:
            total += c.m_i * c.m_i_prime * c.d * carmichael_quotient_mod(c.q, n)
    return total % ctx.m


def sequence_b(ctx: ModulusContext | int, n: int) -> int:
    ctx = _ctx(ctx)
    if n < 1:
        raise InvalidInputError("sequence index starts at 1")
    if math.gcd(n, ctx.m) != 1:
        return 0
    return carmichael_quotient_mod(ctx, n)


def period_component(p: int, r: int, w: int) -> int:
    """Least period T_i of the p-component, from (p, r, w)."""
    if r < 1 or not 0 <= w <= r:
        raise InvalidInputError(f"need r >= 1 and 0 <= w <= r, got r={r}, w={w}")
    if w == r:
        return 1
    if p != 2:
        return p ** (r - w + 1)
    if r == 1:
        return 4
    if r == 2:
        return 8 if w == 0 else 1
    return 2 ** (r - w + 2)


@dataclass(frozen=True)
class PeriodReport:
    m: int
    components: tuple[tuple[int, int, int, int], ...]  # (p, r, w, T)
    total: int
    # b_n additionally vanishes off the units, which folds rad(m) into its period.
    b_total: int

    def to_json(self) -> dict:
        return {
            "m": str(self.m),
            "components": [
                {"p": str(p), "r": str(r), "w": str(w), "T": str(t)} for p, r, w, t in self.components
            ],
            "total": str(self.total),
            "b_total": str(self.b_total),
        }


def predicted_period(ctx: ModulusContext | int) -> PeriodReport:
    ctx = _ctx(ctx)
    comps = tuple((c.p, c.r, c.w, period_component(c.p, c.r, c.w)) for c in ctx.per_prime)
    total = math.prod(t for *_, t in comps)
    return PeriodReport(ctx.m, comps, total, math.lcm(total, radical(ctx.m)))


def bruteforce_period(
    ctx: ModulusContext | int,
    which: Literal["a", "b"] = "a",
    horizon: int | None = None,
) -> int:
    """Least period found by listing terms; m^2 must be a period.

    Least-ness is decided over every divisor of m^2, never by first mismatch.
    """
    ctx = _ctx(ctx)
    seq = {"a": sequence_a, "b": sequence_b}.get(which)
    if seq is None:
        raise InvalidInputError(f"unknown sequence {which!r}")
    bound = ctx.m * ctx.m
    if horizon is None:
        horizon = 3 * bound
    if horizon < 2 * bound:
        raise HorizonTooSmallError(f"horizon {horizon} < 2 m^2 = {2 * bound}; raise it")
    s = [seq(ctx, n) for n in range(1, horizon + 1)]

    def is_period(d: int) -> bool:
        return all(s[i] == s[i + d] for i in range(horizon - d))

    if not is_period(bound):
        raise InvariantViolation(f"m^2 = {bound} is not a period of {which}_n for m={ctx.m}")
    return next(d for d in divisors(bound) if is_period(d))
