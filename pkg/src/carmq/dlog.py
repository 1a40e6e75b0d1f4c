"""Discrete logarithms modulo p read off Fermat quotients."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import is_prime, mod_inverse, multiplicative_order, primitive_root
from .errors import InvalidInputError, InvariantViolation, NotCoprimeError
from .quotients import carmichael_lambda, carmichael_quotient_mod, fermat_quotient_mod


def primitive_root_mod_p2(p: int) -> int:
    """Smallest primitive root g mod p, replaced by g + p when g^(p-1) = 1 mod p^2."""
    if p == 2 or not is_prime(p):
        raise InvalidInputError(f"{p} is not an odd prime")
    g = primitive_root(p)
    return g + p if pow(g, p - 1, p * p) == 1 else g


@dataclass(frozen=True)
class DlogInstance:
    p: int
    g: int
    qg_inv: int  # Q_p(g)^-1 mod p


def dlog_instance(p: int, g: int | None = None) -> DlogInstance:
    if g is None:
        g = primitive_root_mod_p2(p)
    elif p == 2 or not is_prime(p):
        raise InvalidInputError(f"{p} is not an odd prime")
    p2 = p * p
    g %= p2
    if math.gcd(g, p) != 1 or multiplicative_order(g, p2) != p * (p - 1):
        raise InvalidInputError(f"{g} is not a primitive root mod {p}^2")
    qg = fermat_quotient_mod(p, g)
    if qg == 0:
        raise InvariantViolation(f"Q_{p}({g}) = 0 for a primitive root mod p^2")
    return DlogInstance(p, g, mod_inverse(qg, p))


def quotient_dlog(inst: DlogInstance, u: int) -> int:
    """k mod p where u = g^k (mod p^2)."""
    if u % inst.p == 0:
        raise NotCoprimeError(u, inst.p, inst.p)
    return fermat_quotient_mod(inst.p, u) * inst.qg_inv % inst.p


def element_of_full_order(m: int) -> int | None:
    """Smallest g whose order mod m^2 is lambda(m^2), or None if none below m^2."""
    m2 = m * m
    target = carmichael_lambda(m2)
    for g in range(2, m2):
        if math.gcd(g, m) == 1 and multiplicative_order(g, m2) == target:
            return g
    return None


def diagram_check(m: int, g: int, n: int, a: int) -> bool:
    """Whether x -> a C_m(x) agrees with x -> n log_g(x) (mod m) on <g>.

    The sweep over all of <g> is compared with the one-line test
    a C_m(g) = n (mod m); disagreement raises InvariantViolation.
    """
    if m < 2:
        raise InvalidInputError("m must be >= 2")
    m2 = m * m
    order = carmichael_lambda(m2)
    if order % m:
        raise InvalidInputError(f"{m} does not divide lambda(m^2) = {order}")
    if math.gcd(g, m) != 1 or multiplicative_order(g, m2) != order:
        raise InvalidInputError(f"{g} does not have order lambda(m^2) = {order} mod {m2}")
    sweep = True
    x = 1
    for k in range(order):
        if (a * carmichael_quotient_mod(m, x) - n * k) % m:
            sweep = False
            break
        x = x * g % m2
    direct = (a * carmichael_quotient_mod(m, g) - n) % m == 0
    if sweep != direct:
        raise InvariantViolation(f"diagram sweep and criterion disagree for m={m}, g={g}")
    return direct
