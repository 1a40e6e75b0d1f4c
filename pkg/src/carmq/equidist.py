"""The character n -> e(a C_m(n) / m) and its exponential sums.

Character values are m-th roots of unity, stored as integer exponents j
(value exp(2 pi i j / m)); None stands for the value 0 off the units.
Sums are accumulated as per-exponent counts so that vanishing can be decided
exactly, by reducing the count polynomial modulo the m-th cyclotomic polynomial.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import divisors
from .errors import InvalidInputError, NotCoprimeError
from .quotients import carmichael_quotient_mod, modulus_context


@dataclass(frozen=True)
class CharacterSpec:
    m: int
    a: int

    def __post_init__(self):
        if self.m < 2:
            raise InvalidInputError("m must be >= 2")
        g = math.gcd(self.a, self.m)
        if g != 1:
            raise NotCoprimeError(self.a, self.m, g)


def character_value(spec: CharacterSpec, n: int) -> int | None:
    """Exponent j of chi(n) = exp(2 pi i j / m), or None when gcd(n, m) > 1."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    if math.gcd(n, spec.m) != 1:
        return None
    return spec.a * carmichael_quotient_mod(modulus_context(spec.m), n) % spec.m


def root_of_unity(j: int, m: int) -> complex:
    return cmath.exp(2j * math.pi * j / m)


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # Coefficients low degree first; den is monic.
    num = num[:]
    q = [0] * max(1, len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    rem = num[: len(den) - 1]
    while rem and rem[-1] == 0:
        rem.pop()
    return q, rem


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    poly = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n):
        if d < n:
            poly, rem = _poly_divmod(poly, list(cyclotomic(d)))
            assert not rem
    while poly and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


def sum_is_zero(counts: list[int], m: int) -> bool:
    """Whether sum_j counts[j] zeta_m^j vanishes, decided exactly."""
    if not any(counts):
        return True
    _, rem = _poly_divmod(list(counts), list(cyclotomic(m)))
    return not rem


@dataclass(frozen=True)
class ExpSumReport:
    m: int
    a: int
    start: int  # sum runs over start < n <= start + length
    length: int
    counts: tuple[int, ...]  # counts[j] = #{n : chi(n) = zeta_m^j}
    value: complex
    exactly_zero: bool
    burgess_scale: float  # N^(1/2) m^(3/8), for display only

    @property
    def magnitude(self) -> float:
        return 0.0 if self.exactly_zero else abs(self.value)

    def to_json(self) -> dict:
        return {
            "m": str(self.m),
            "a": str(self.a),
            "from": str(self.start),
            "len": str(self.length),
            "real": 0.0 if self.exactly_zero else self.value.real,
            "imag": 0.0 if self.exactly_zero else self.value.imag,
            "abs": self.magnitude,
            "exactly_zero": self.exactly_zero,
            "burgess_scale": self.burgess_scale,
            "ratio": self.magnitude / self.burgess_scale,
        }


def exponential_sum(spec: CharacterSpec, start: int, length: int) -> ExpSumReport:
    """sum of chi(n) over start < n <= start + length."""
    if length < 1:
        raise InvalidInputError("length must be >= 1")
    if start < 0:
        raise InvalidInputError("start must be >= 0")
    m = spec.m
    counts = [0] * m
    for n in range(start + 1, start + length + 1):
        j = character_value(spec, n)
        if j is not None:
            counts[j] += 1
    value = sum((c * root_of_unity(j, m) for j, c in enumerate(counts) if c), 0j)
    return ExpSumReport(
        m, spec.a, start, length, tuple(counts), value, sum_is_zero(counts, m),
        math.sqrt(length) * m ** 0.375,
    )
