"""Desk-scale invariant sweeps behind ``carmq verify``.

Each check returns None on success or a dict describing the first
counterexample. Statements known to be false are kept as checks,
so that ``verify`` reports them with a witness instead of hiding them.
"""

from __future__ import annotations

import math
import time
from collections.abc import Callable, Iterator
from dataclasses import dataclass

from . import arith, dlog, equidist, identities, quotients, sequences, wieferich
from .errors import InvalidInputError
from .quotients import carmichael_quotient_mod as cq
from .quotients import modulus_context

SCOPES = ("identities", "wieferich", "periods", "character", "dlog")


@dataclass(frozen=True)
class CheckResult:
    scope: str
    name: str
    passed: bool
    counterexample: dict | None
    seconds: float

    def to_json(self) -> dict:
        return {
            "scope": self.scope,
            "name": self.name,
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


def _units(m: int, hi: int, lo: int = 1) -> Iterator[int]:
    return (a for a in range(lo, hi + 1) if math.gcd(a, m) == 1)


def _first(items) -> dict | None:
    return next((x for x in items if x is not None), None)


# identities -------------------------------------------------------------


def check_relation():
    return _first(
        {"m": m, "a": a}
        for m in range(2, 101)
        for a in _units(m, m)
        if quotients.relation_rhs(m, a) != quotients.euler_quotient_mod(m, a)
    )


def check_product_rule():
    for m in range(2, 61):
        for a in _units(m, 2 * m):
            for b in _units(m, m):
                if cq(m, a * b) != (cq(m, a) + cq(m, b)) % m:
                    return {"m": m, "a": a, "b": b}
                if (a * b) % b == 0 and cq(m, a) != (cq(m, a * b) - cq(m, b)) % m:
                    return {"m": m, "a": a * b, "b": b, "rule": "quotient"}
    return None


def check_shift_rule():
    for m in range(2, 61):
        for a in _units(m, m):
            for alpha in (1, 2):
                for t in (-3, -1, 1, 2, 5):
                    if cq(m, a + t * m**alpha, alpha) != quotients.shift_congruence_rhs(m, a, t, alpha):
                        return {"m": m, "a": a, "t": t, "alpha": alpha}
    return None


def check_block_sums():
    for m in range(3, 41):
        if quotients.block_sum(m, "sum2") != 0:
            return {"m": m, "sum": "sum2"}
        for a in _units(m, m):
            if quotients.block_sum(m, "sum1", a=a) != 0:
                return {"m": m, "a": a, "sum": "sum1"}
        first = quotients.block_sum(m, "sum3", k=0)
        for k in (-2, 1, 3, 7):
            if quotients.block_sum(m, "sum3", k=k) != first:
                return {"m": m, "k": k, "sum": "sum3"}
    return None


def check_cross_modulus():
    for m in range(2, 21):
        for n in range(2, 21):
            if math.gcd(m, n) != 1:
                continue
            mn = m * n
            for a in _units(mn, 40):
                if quotients.cross_modulus_rhs(m, n, a, "div") != cq(mn, a) % m:
                    return {"m": m, "n": n, "a": a, "mode": "div"}
                if quotients.cross_modulus_rhs(m, n, a, "bilinear") != cq(mn, a):
                    return {"m": m, "n": n, "a": a, "mode": "bilinear"}
                cm = quotients.carmichael_quotient_exact(m, a)
                if cm and n * quotients.carmichael_quotient_exact(mn, a) % cm:
                    return {"m": m, "n": n, "a": a, "mode": "divides"}
    return None


def check_crt_factor():
    return _first(
        {"m": m, "a": a}
        for m in range(2, 301)
        for a in _units(m, m)
        if quotients.crt_combine(m, a) != cq(m, a)
    )


def check_prime_power_reduction():
    for p in (3, 5, 7, 11):
        for j in range(1, 4):
            for i in range(1, j + 1):
                for a in _units(p, 60):
                    x, y = quotients.prime_power_reduce(p, i, j, a)
                    if x != y:
                        return {"p": p, "i": i, "j": j, "a": a}
    for j in range(3, 8):
        for i in range(3, j + 1):
            for a in _units(2, 60):
                x, y = quotients.prime_power_reduce(2, i, j, a)
                if x != y:
                    return {"p": 2, "i": i, "j": j, "a": a}
    return None


def check_fermat_reduction():
    for m in range(3, 201):
        for p in modulus_context(m).factorization.primes:
            if p == 2:
                continue
            for a in _units(m, m):
                if quotients.fermat_reduction(m, p, a) != cq(m, a) % p:
                    return {"m": m, "p": p, "a": a}
    return None


def check_expressions():
    for m in range(3, 41):
        ctx = modulus_context(m)
        for a in _units(m, 3 * m):
            want = cq(ctx, a)
            for name, fn in identities.EXPRESSIONS.items():
                if fn(ctx, a) != want:
                    return {"m": m, "a": a, "expression": name}
    return None


def check_bernoulli():
    for m in [*range(2, 13), 13, 16, 18]:
        for a in _units(m, 10):
            if identities.bernoulli_identity(m, a) != quotients.carmichael_quotient_exact(m, a):
                return {"m": m, "a": a}
    return None


# wieferich --------------------------------------------------------------


def check_criterion_direct():
    for m in range(3, 41):
        ctx = modulus_context(m)
        for a in _units(m, m * m):
            c = wieferich.is_carmichael_wieferich(ctx, a, "criterion").is_cw
            if c != wieferich.is_carmichael_wieferich(ctx, a, "direct").is_cw:
                return {"m": m, "a": a}
    return None


def check_valuation_formula():
    for m in range(3, 41):
        ctx = modulus_context(m)
        for a in _units(m, m * m, lo=2):
            v = quotients.carmichael_quotient_exact(m, a, ctx)
            for p in ctx.factorization.primes:
                if wieferich.quotient_p_valuation(ctx, a, p) != arith.p_adic_valuation(v, p):
                    return {"m": m, "a": a, "p": p}
    return None


def check_exclusion():
    for m in range(3, 201):
        for a in _units(m, m):
            if cq(m, a) == 0 and cq(m, m - a) == 0:
                return {"m": m, "a": a}
    return None


def check_base_set_bound():
    for m in range(3, 61):
        s_m, _ = wieferich.base_sets(m)
        if 2 * len(s_m) > arith.totient(m):
            return {"m": m, "S_m": len(s_m)}
    return None


def check_kernel_count_d_prime():
    """|T_m| = d' phi(m) with d' from the per-prime d_r split, m in [3, 50]."""
    for m in range(3, 51):
        rep = wieferich.hom_report(m)
        _, t_count = wieferich.base_sets(m)
        image = wieferich.image_by_enumeration(m)
        expected = {rep.d_prime * k % m for k in range(m)}
        if t_count != rep.kernel_order or image != expected:
            return {"m": m, "T_m": t_count, "d_prime_phi": rep.kernel_order, "image_size": len(image)}
    return None


def check_image_valuation_generator():
    for m in range(3, 61):
        g = wieferich.valuation_image_generator(m)
        image = wieferich.image_by_enumeration(m)
        if image != {g * k % m for k in range(m)}:
            return {"m": m, "generator": g, "image_size": len(image)}
    return None


def _cw_numbers(limit: int, a: int) -> list[int]:
    return [m for m in range(3, limit + 1) if math.gcd(a, m) == 1 and cq(m, a) == 0]


def check_coprime_closure():
    for a in (2, 3, 5, 7, 19):
        found = set(_cw_numbers(400, a))
        for m1 in found:
            for m2 in found:
                if m1 < m2 and m1 * m2 <= 400 and math.gcd(m1, m2) == 1 and m1 * m2 not in found:
                    return {"a": a, "m1": m1, "m2": m2}
    return None


def check_wieferich_extraction():
    for a in range(2, 40):
        for m in _cw_numbers(300, a):
            p = arith.factorize(m).primes[-1]
            if p != 2 and wieferich.sigma(a, p) < 1:
                return {"a": a, "m": m, "p": p}
    return None


def check_order_two():
    for m in range(3, 1001):
        if math.gcd(modulus_context(m).lam, m) != 1:
            continue
        for a in range(2, m):
            if wieferich.order_two_nonvanishing_applies(m, a) and cq(m, a) == 0:
                return {"m": m, "a": a}
    return None


# periods ----------------------------------------------------------------


def check_period_theorem():
    for m in range(2, 41):
        pred = sequences.predicted_period(m).total
        got = sequences.bruteforce_period(m, "a")
        if pred != got:
            return {"m": m, "predicted": pred, "bruteforce": got}
    return None


def check_b_period():
    for m in range(2, 41):
        pred = sequences.predicted_period(m).b_total
        got = sequences.bruteforce_period(m, "b")
        if pred != got:
            return {"m": m, "predicted": pred, "bruteforce": got}
    return None


# character --------------------------------------------------------------


def check_character_laws():
    for m in range(2, 31):
        for a in _units(m, m):
            spec = equidist.CharacterSpec(m, a)
            chi = {n: equidist.character_value(spec, n) for n in range(1, 3 * m * m + 1)}
            for u in _units(m, m * m):
                for v in _units(m, m):
                    if (chi[u] + chi[v]) % m != equidist.character_value(spec, u * v):
                        return {"m": m, "a": a, "u": u, "v": v, "law": "multiplicative"}
            for n in range(1, 2 * m * m + 1):
                if chi[n] != chi[n + m * m]:
                    return {"m": m, "a": a, "n": n, "law": "period"}
            if not equidist.exponential_sum(spec, 0, m * m).exactly_zero:
                return {"m": m, "a": a, "law": "full-period sum"}
            if a >= 2:
                break
    return None


def check_non_principal():
    for m in range(2, 201):
        for a in _units(m, m):
            if equidist.character_value(equidist.CharacterSpec(m, a), m + 1) == 0:
                return {"m": m, "a": a}
    return None


# dlog -------------------------------------------------------------------


def check_dlog_total():
    for p in range(3, 200):
        if not arith.is_prime(p):
            continue
        inst = dlog.dlog_instance(p)
        p2 = p * p
        x = 1
        for k in range(p * (p - 1)):
            if dlog.quotient_dlog(inst, x) != k % p:
                return {"p": p, "u": x, "index": k}
            x = x * inst.g % p2
    return None


def check_dlog_lift():
    for p in range(3, 500):
        if arith.is_prime(p):
            g = dlog.primitive_root_mod_p2(p)
            if arith.multiplicative_order(g, p * p) != p * (p - 1):
                return {"p": p, "g": g}
    return None


def check_diagram():
    for m in (3, 4, 5, 6, 7, 9, 10, 12):
        g = dlog.element_of_full_order(m)
        if g is None:
            continue
        for n in range(m):
            for a in range(m):
                if dlog.diagram_check(m, g, n, a) != ((a * cq(m, g) - n) % m == 0):
                    return {"m": m, "g": g, "n": n, "a": a}
    return None


CHECKS: dict[str, list[tuple[str, Callable[[], dict | None]]]] = {
    "identities": [
        ("relation Q = (phi/lambda) C", check_relation),
        ("product rule", check_product_rule),
        ("shift rule", check_shift_rule),
        ("short sums sum1/sum2/sum3", check_block_sums),
        ("cross-modulus relations", check_cross_modulus),
        ("CRT factorization", check_crt_factor),
        ("prime-power reduction", check_prime_power_reduction),
        ("reduction to Fermat quotients", check_fermat_reduction),
        ("Lerch / beta / power-sum / s(k,a) expressions", check_expressions),
        ("Bernoulli identity", check_bernoulli),
    ],
    "wieferich": [
        ("criterion == direct", check_criterion_direct),
        ("valuation formula", check_valuation_formula),
        ("no m with both a and m-a", check_exclusion),
        ("|S_m| <= phi(m)/2", check_base_set_bound),
        ("|T_m| = d' phi(m), image = d'Z/mZ (d prime split)", check_kernel_count_d_prime),
        ("image = gZ/mZ, g from valuations", check_image_valuation_generator),
        ("coprime product closure", check_coprime_closure),
        ("Wieferich prime extraction", check_wieferich_extraction),
        ("order-2 non-vanishing", check_order_two),
    ],
    "periods": [
        ("least period of a_n", check_period_theorem),
        ("least period of b_n = lcm(T, rad m)", check_b_period),
    ],
    "character": [
        ("multiplicative, m^2-periodic, full sum 0", check_character_laws),
        ("chi(m+1) != 1", check_non_principal),
    ],
    "dlog": [
        ("quotient dlog = index mod p", check_dlog_total),
        ("lifted root has order p(p-1)", check_dlog_lift),
        ("commutative diagram criterion", check_diagram),
    ],
}


def verify_suite(scope: str = "all") -> Iterator[CheckResult]:
    if scope != "all" and scope not in CHECKS:
        raise InvalidInputError(f"unknown scope {scope!r}")
    for sc in SCOPES if scope == "all" else (scope,):
        for name, fn in CHECKS[sc]:
            t0 = time.perf_counter()
            witness = fn()
            yield CheckResult(sc, name, witness is None, witness, time.perf_counter() - t0)
