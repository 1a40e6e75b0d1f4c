import pytest

from carmq import dlog
from carmq.errors import InvalidInputError, NotCoprimeError
from oracles import bsgs, dlog_table


def test_frozen_bsgs_case():
    assert bsgs(2, 8, 25, 20) == 3
    inst = dlog.dlog_instance(5)
    assert inst.g == 2
    assert dlog.quotient_dlog(inst, 8) == 3


def test_matches_table_small_primes():
    for p in (3, 5, 7, 11, 13, 29, 31):
        inst = dlog.dlog_instance(p)
        table = dlog_table(inst.g, p * p)
        assert len(table) == p * (p - 1)
        for u, k in table.items():
            assert dlog.quotient_dlog(inst, u) == k % p


def test_matches_bsgs_random_units():
    p = 9973
    inst = dlog.dlog_instance(p)
    for u in (2, 3, 12345, 99_000_000, p * p - 1):
        k = bsgs(inst.g, u, p * p, p * (p - 1))
        assert dlog.quotient_dlog(inst, u) == k % p


def test_root_lift():
    # 487: smallest root 3 already generates mod 487^2.
    assert dlog.primitive_root_mod_p2(487) == 3
    # 40487: smallest root 5 has 5^40486 = 1 mod 40487^2, so 5 + p is used.
    assert pow(5, 40486, 40487**2) == 1
    assert dlog.primitive_root_mod_p2(40487) == 40492
    inst = dlog.dlog_instance(40487)
    assert inst.g == 40492
    assert dlog.quotient_dlog(inst, pow(40492, 777, 40487**2)) == 777


def test_explicit_generator():
    inst = dlog.dlog_instance(7, 5)
    assert dlog.quotient_dlog(inst, pow(5, 10, 49)) == 3
    with pytest.raises(InvalidInputError):
        dlog.dlog_instance(7, 2)  # order 3
    with pytest.raises(InvalidInputError):
        dlog.dlog_instance(2)
    with pytest.raises(InvalidInputError):
        dlog.dlog_instance(9)
    with pytest.raises(NotCoprimeError):
        dlog.quotient_dlog(inst, 14)


def test_diagram():
    for m in (3, 4, 5, 6, 9, 10):
        g = dlog.element_of_full_order(m)
        assert g is not None
        hits = sum(dlog.diagram_check(m, g, n, a) for n in range(m) for a in range(m))
        assert hits >= m
    assert dlog.element_of_full_order(8) is not None
    with pytest.raises(InvalidInputError):
        dlog.diagram_check(5, 7, 1, 1)  # order 4 mod 25
