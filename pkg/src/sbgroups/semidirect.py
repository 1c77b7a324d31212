"""Balanced characters and isomorphism classes of mu_n : mu_3.

A unit d with d^3 = 1 mod n twists mu_n by mu_3.  The twist is *balanced*
when d is a nontrivial cube root of unity at every prime power of n, or
equivalently when multiplication by d fixes only 0 in Z/n.  Non-balanced
twists shed a direct cyclic factor: the product decomposes as
(mu_n1 : mu_3) x mu_n2 along the primes where d degenerates to 1.

Everything here lives over moduli whose prime divisors are 1 mod 3; other
primes admit no nontrivial cube root of unity locally and are rejected
outright with BadPrimeDivisor.

Two balanced characters d and d' give isomorphic groups exactly when
d' = d or d' = d^2 mod n (inverting the generator of mu_3 swaps the two),
so min(d, d^2 mod n) serves as a canonical class label.  That bound of two
per class is certified against the multiplication-table isomorphism oracle
in the tests rather than assumed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from . import residue_arith
from .residue_arith import NotACubeRoot, Residue


class BadPrimeDivisor(ValueError):
    """A prime divisor of the modulus is 3 or congruent to 2 mod 3."""


def _check_prime_divisors(n: int):
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    for p, _ in residue_arith.factorize(n):
        if p % 3 != 1:
            raise BadPrimeDivisor(
                f"prime divisor {p} of {n} admits no nontrivial cube root of unity"
            )


def _as_cube_root(n: int, d: int | Residue) -> int:
    if isinstance(d, Residue):
        if d.modulus != n:
            raise ValueError(f"modulus mismatch: {d.modulus} vs {n}")
        d = d.value
    d %= n
    if n > 1 and (math.gcd(d, n) != 1 or pow(d, 3, n) != 1):
        raise NotACubeRoot(f"{d} is not a cube root of unity mod {n}")
    return d


@dataclass(frozen=True, init=False)
class ResidueCharacter:
    """The action s -> d*s of mu_3 on mu_n.

    The modulus must have all prime divisors congruent to 1 mod 3, and d
    must be a cube root of unity mod n.
    """

    n: int
    d: Residue

    def __init__(self, n: int, d: int | Residue):
        _check_prime_divisors(n)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", Residue(_as_cube_root(n, d), n))

    def is_trivial(self) -> bool:
        return self.d.value == 1 % self.n


@dataclass(frozen=True, init=False)
class SemidirectDescriptor:
    """A group mu_n : mu_3 by modulus and character, with derived labels."""

    n: int
    d: Residue
    balanced: bool = field(init=False)
    canonical_d: Residue = field(init=False)

    def __init__(self, n: int, d: int | Residue):
        char = ResidueCharacter(n, d)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", char.d)
        object.__setattr__(self, "balanced", is_balanced(n, char.d))
        object.__setattr__(self, "canonical_d", canonical_character(n, char.d))

    def to_json(self) -> str:
        return json.dumps(
            {"kind": "semidirect", "n": self.n, "d": self.d.value},
            sort_keys=True,
            separators=(",", ":"),
        )


@dataclass(frozen=True)
class NonBalancedDecomposition:
    """mu_n : mu_3 ~ (mu_n1 : mu_3) x mu_n2.

    n1 collects the prime powers where d acts nontrivially, so (n1, d1) is
    balanced; n2 collects the ones where d is congruent to 1.
    """

    n1: int
    d1: Residue
    n2: int


def is_balanced(n: int, d: int | Residue) -> bool:
    """True when d is a nontrivial cube root of unity at every prime power of n.

    The trivial modulus n = 1 counts as balanced (nothing to check).  Raises
    BadPrimeDivisor when some prime divisor of n is 3 or 2 mod 3, and
    NotACubeRoot when d^3 != 1 mod n.
    """
    _check_prime_divisors(n)
    d = _as_cube_root(n, d)
    if n == 1:
        return True
    for p, e in residue_arith.factorize(n):
        if d % p**e == 1:
            return False
    return True


def fixed_points_are_trivial(n: int, d: int | Residue) -> bool:
    """Equivalent balance test through the fixed subgroup of the character."""
    fixed = residue_arith.fixed_subgroup_of_character(n, d)
    return len(fixed) == 1


def all_balanced_characters(n: int) -> list[ResidueCharacter]:
    """All balanced characters mod n, ascending in d.

    For n > 1 with k distinct prime divisors the list has 2^k entries, two
    independent nontrivial local roots per prime power; for n = 1 it is the
    lone trivial character.  Raises BadPrimeDivisor for inadmissible n.
    """
    _check_prime_divisors(n)
    if n == 1:
        return [ResidueCharacter(1, 0)]
    chars = [
        ResidueCharacter(n, r)
        for r in residue_arith.cube_roots_of_unity(n)
        if is_balanced(n, r)
    ]
    k = len(residue_arith.factorize(n).factors)
    if len(chars) != 2**k:
        raise RuntimeError(
            f"expected {2**k} balanced characters mod {n}, found {len(chars)}"
        )
    return chars


def canonical_character(n: int, d: int | Residue) -> Residue:
    """min(d, d^2 mod n): constant on {d, d^2} and idempotent."""
    char_d = ResidueCharacter(n, d).d.value
    return Residue(min(char_d, char_d * char_d % n), n)


def isomorphism_classes_of_balanced(n: int) -> list[Residue]:
    """Canonical representatives of balanced characters mod n, ascending.

    For n > 1 with k distinct prime divisors there are 2^(k-1) classes: the
    2^k balanced characters fold in pairs under d -> d^2.
    """
    return sorted(
        {canonical_character(n, c.d) for c in all_balanced_characters(n)},
        key=lambda r: r.value,
    )


def decompose_non_balanced(n: int, d: int | Residue) -> NonBalancedDecomposition:
    """Split off the direct cyclic factor of a (possibly) non-balanced twist.

    n2 is the product of the prime powers of n where d = 1; the restriction
    of d to the complementary part n1 is balanced.  A balanced input returns
    n2 = 1; the trivial character returns n1 = 1, n2 = n.
    """
    _check_prime_divisors(n)
    d = _as_cube_root(n, d)
    if n == 1:
        return NonBalancedDecomposition(1, Residue(0, 1), 1)
    n1 = n2 = 1
    for p, e in residue_arith.factorize(n):
        q = p**e
        if d % q == 1:
            n2 *= q
        else:
            n1 *= q
    return NonBalancedDecomposition(n1, Residue(d % n1, n1), n2)
