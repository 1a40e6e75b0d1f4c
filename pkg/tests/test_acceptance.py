"""Acceptance gate: one test per criterion, each with its runtime limit.

Reference values come from the brute-force helpers in ``oracles``. A summary
line per criterion is printed at the end of the run (see conftest.py).
"""

import math
import random
import time
from contextlib import contextmanager
from functools import lru_cache

import pytest

from carmq import dlog, equidist, identities, quotients, sequences, wieferich
from carmq.quotients import modulus_context
from oracles import brute_lambda, brute_phi, dlog_table, exact_quotient, trial_is_prime, valuation

criterion = pytest.mark.criterion


@contextmanager
def time_limit(seconds: float):
    t0 = time.perf_counter()
    yield
    elapsed = time.perf_counter() - t0
    assert elapsed < seconds, f"took {elapsed:.1f}s, limit {seconds}s"


@lru_cache(maxsize=None)
def ref_lambda(m: int) -> int:
    return brute_lambda(m)


def ref_cq(m: int, a: int, k: int = 1) -> int:
    """C_m(a) mod m^k from the brute-force exponent, by modular powering."""
    top = m ** (k + 1)
    return (pow(a, ref_lambda(m), top) - 1) % top // m


def coprime(m: int, hi: int, lo: int = 1) -> list[int]:
    return [a for a in range(lo, hi + 1) if math.gcd(a, m) == 1]


@criterion(1, "base-19 example")
def test_base_19():
    with time_limit(1):
        assert quotients.fermat_quotient_mod(3, 19) == 0
        assert quotients.fermat_quotient_mod(7, 19) == 0
        assert quotients.fermat_quotient_mod(2, 19) != 0
        assert exact_quotient(3, 19, 2) % 3 == 0 and exact_quotient(7, 19, 6) % 7 == 0
        assert exact_quotient(2, 19, 1) % 2 == 1
        assert wieferich.is_carmichael_wieferich(84, 19).is_cw is False
        assert exact_quotient(84, 19) % 84 != 0
        assert quotients.euler_quotient_mod(84, 19) == 0
        assert exact_quotient(84, 19, brute_phi(84)) % 84 == 0


@criterion(2, "criterion mode == direct mode, m in [3,60], a <= m^2")
def test_criterion_direct():
    with time_limit(120):
        for m in range(3, 61):
            ctx = modulus_context(m)
            for a in coprime(m, m * m):
                crit = wieferich.is_carmichael_wieferich(ctx, a, "criterion").is_cw
                direct = wieferich.is_carmichael_wieferich(ctx, a, "direct").is_cw
                assert crit == direct == (ref_cq(m, a) == 0), (m, a)


@criterion(3, "|T_m| = d' phi(m) and image = d'Z/mZ, m in [3,50]")
def test_kernel_image_counts():
    with time_limit(300):
        bad = []
        for m in range(3, 51):
            rep = wieferich.hom_report(m)
            units_m2 = coprime(m, m * m)
            image = {ref_cq(m, a) for a in units_m2}
            t_count = sum(1 for a in units_m2 if ref_cq(m, a) == 0)
            if t_count != rep.kernel_order or image != {rep.d_prime * k % m for k in range(m)}:
                bad.append((m, t_count, rep.kernel_order, len(image)))
        assert not bad, f"(m, |T_m|, d' phi(m), |image|) mismatches: {bad}"


@criterion(4, "predicted least period == brute force, m in [2,40]")
def test_period_theorem():
    with time_limit(300):
        for m in (2, 4, 8, 16, 32, 12, 20, 24):
            assert any(c[0] == 2 for c in sequences.predicted_period(m).components)
        for m in range(2, 41):
            assert sequences.predicted_period(m).total == sequences.bruteforce_period(m, "a"), m


def _identity_checks(m: int, a: int) -> None:
    ctx = modulus_context(m)
    want = ref_cq(m, a)
    # relation with the Euler quotient
    top = m * m
    q_euler = (pow(a, brute_phi(m), top) - 1) % top // m
    assert quotients.relation_rhs(ctx, a) == q_euler
    # product rule, quotient-of-bases rule, shift rule
    for b in coprime(m, 7, 2)[:3]:
        assert quotients.carmichael_quotient_mod(ctx, a * b) == (want + ref_cq(m, b)) % m
        assert (ref_cq(m, a * b) - ref_cq(m, b)) % m == want
    for t in (-1, 1, 3):
        for alpha in (1, 2):
            shifted = a + t * m**alpha
            if shifted > 0:
                assert ref_cq(m, shifted, alpha) == quotients.shift_congruence_rhs(ctx, a, t, alpha)
    # short sums
    assert quotients.block_sum(ctx, "sum1", a=a) == 0
    # cross-modulus relations against coprime partners n
    for n in (n for n in range(2, 8) if math.gcd(n, m) == 1 and math.gcd(n, a) == 1):
        mn = m * n
        big = ref_cq(mn, a)
        assert quotients.cross_modulus_rhs(m, n, a, "div") == big % m
        assert quotients.cross_modulus_rhs(m, n, a, "bilinear") == big
        small = (pow(a, ref_lambda(m)) - 1) // m if ref_lambda(m) * a.bit_length() < 20000 else None
        if small:
            lam_mn = ref_lambda(mn)
            x = pow(a, lam_mn, small * mn)
            assert (x - 1) % mn == 0 and n * ((x - 1) // mn) % small == 0
        break
    # CRT factorization, prime-power reduction, reduction mod p
    assert quotients.crt_combine(ctx, a) == want
    for c in ctx.per_prime:
        lo = 3 if c.p == 2 else 1
        for i in range(lo, c.r + 1):
            x, y = quotients.prime_power_reduce(c.p, i, c.r + 1, a)
            assert x == y
        if c.p != 2:
            assert quotients.fermat_reduction(ctx, c.p, a) == want % c.p
    # subgroup expressions
    for name, fn in identities.EXPRESSIONS.items():
        assert fn(ctx, a) == want, (name, m, a)


@criterion(5, "identity suite, m <= 60 exhaustive plus 200 random m <= 500")
def test_identity_suite():
    with time_limit(300):
        for m in range(3, 61):
            assert quotients.block_sum(m, "sum2") == 0
            first = quotients.block_sum(m, "sum3", k=0)
            for k in (-2, 1, 4, m):
                assert quotients.block_sum(m, "sum3", k=k) == first, (m, k)
            for a in coprime(m, 3 * m):
                _identity_checks(m, a)
        rng = random.Random(20240601)
        for _ in range(200):
            m = rng.randint(3, 500)
            a = rng.randint(1, 3 * m)
            while math.gcd(a, m) != 1:
                a = rng.randint(1, 3 * m)
            _identity_checks(m, a)


@criterion(6, "Bernoulli identity equals the exact quotient")
def test_bernoulli_identity():
    with time_limit(10):
        for m in [*range(2, 13), 13, 16, 18]:
            for a in coprime(m, 10):
                assert identities.bernoulli_identity(m, a) == exact_quotient(m, a), (m, a)


@criterion(7, "ord_p C_m(a) = e(m,p) + sigma(a,p), m <= 60 with lambda <= 40")
def test_valuation_formula():
    with time_limit(300):
        checked = 0
        for m in range(3, 61):
            if ref_lambda(m) > 40:
                continue
            ctx = modulus_context(m)
            primes = [p for p in range(2, m + 1) if m % p == 0 and trial_is_prime(p)]
            for a in coprime(m, m * m):
                c = exact_quotient(m, a)
                for p in primes:
                    want = math.inf if c == 0 else valuation(c, p)
                    assert wieferich.quotient_p_valuation(ctx, a, p) == want, (m, a, p)
                    checked += 1
        assert checked > 10000


@criterion(8, "quotient dlog == brute-force index mod p, odd p < 200")
def test_dlog():
    with time_limit(120):
        for p in range(3, 200):
            if not trial_is_prime(p):
                continue
            inst = dlog.dlog_instance(p)
            table = dlog_table(inst.g, p * p)
            assert len(table) == p * (p - 1)
            for u, k in table.items():
                assert dlog.quotient_dlog(inst, u) == k % p, (p, u)


@criterion(9, "character laws for m <= 30, non-principal for m <= 200")
def test_character():
    with time_limit(60):
        for m in range(2, 31):
            m2 = m * m
            for a in coprime(m, m):
                spec = equidist.CharacterSpec(m, a)
                chi = [None, *(equidist.character_value(spec, n) for n in range(1, m2 + 1))]
                for n in range(1, m2 + 1):
                    want = a * ref_cq(m, n) % m if math.gcd(n, m) == 1 else None
                    assert chi[n] == want
                    assert equidist.character_value(spec, n + m2) == chi[n]
                units = [u for u in range(1, m2 + 1) if chi[u] is not None]
                vs = units if a == 1 else units[:m]
                for u in units:
                    for v in vs:
                        assert equidist.character_value(spec, u * v) == (chi[u] + chi[v]) % m
                assert equidist.exponential_sum(spec, 0, m2).exactly_zero
        for m in range(2, 201):
            for a in coprime(m, m):
                assert equidist.character_value(equidist.CharacterSpec(m, a), m + 1) != 0


@criterion(10, "1093 flagged Wieferich base 2 with sigma >= 2; 1091, 1097 not")
def test_classical_sanity():
    with time_limit(1):
        assert quotients.fermat_quotient_mod(1093, 2) == 0
        assert wieferich.is_carmichael_wieferich(1093, 2).is_cw
        for p in (1091, 1097):
            assert quotients.fermat_quotient_mod(p, 2) != 0
            assert not wieferich.is_carmichael_wieferich(p, 2).is_cw
            assert wieferich.sigma(2, p) == 0
        s = wieferich.sigma(2, 1093)
        assert s == valuation(2**1092 - 1, 1093) - 1
        assert s >= 2, f"sigma(2, 1093) = {s}: 1093^2 divides 2^1092 - 1 but 1093^3 does not"
