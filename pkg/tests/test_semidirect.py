"""Balanced characters, canonical classes, and the non-balanced splitting."""

import json

import pytest
from hypothesis import given, settings, strategies as st

from sbgroups import residue_arith
from sbgroups.group_kernel import build_semidirect, is_isomorphic
from sbgroups.residue_arith import NotACubeRoot, Residue, crt_combine
from sbgroups.semidirect import (
    BadPrimeDivisor,
    NonBalancedDecomposition,
    ResidueCharacter,
    SemidirectDescriptor,
    all_balanced_characters,
    canonical_character,
    decompose_non_balanced,
    fixed_points_are_trivial,
    is_balanced,
    isomorphism_classes_of_balanced,
)
from oracles import trial_division_factorization

# d = 1 mod 7 and of multiplicative order 3 mod 13: the classic example of a
# character that degenerates at one prime but not the other.
D91_LOPSIDED = int(crt_combine([(1, 7), (3, 13)]))


def admissible_moduli(limit):
    """All n <= limit whose prime divisors are congruent to 1 mod 3."""
    out = []
    for n in range(1, limit + 1):
        fac = trial_division_factorization(n)
        if all(p % 3 == 1 for p, _ in fac):
            out.append((n, fac))
    return out


# ---------------------------------------------------------------- balance


def test_balanced_examples():
    assert is_balanced(7, 2)
    assert is_balanced(7, 4)
    assert not is_balanced(7, 1)
    assert is_balanced(1, 0)
    assert not is_balanced(91, D91_LOPSIDED)
    assert is_balanced(91, 9)


@pytest.mark.parametrize("n", [2, 3, 5, 9, 14, 21, 63, 100])
def test_inadmissible_modulus_rejected_everywhere(n):
    with pytest.raises(BadPrimeDivisor):
        is_balanced(n, 1)
    with pytest.raises(BadPrimeDivisor):
        all_balanced_characters(n)
    with pytest.raises(BadPrimeDivisor):
        isomorphism_classes_of_balanced(n)
    with pytest.raises(BadPrimeDivisor):
        ResidueCharacter(n, 1)
    with pytest.raises(BadPrimeDivisor):
        decompose_non_balanced(n, 1)


def test_non_cube_root_rejected():
    with pytest.raises(NotACubeRoot):
        is_balanced(7, 3)
    with pytest.raises(NotACubeRoot):
        ResidueCharacter(91, 2)
    with pytest.raises(NotACubeRoot):
        canonical_character(13, 2)


def test_residue_modulus_mismatch_rejected():
    with pytest.raises(ValueError):
        is_balanced(7, Residue(2, 13))


def test_balance_iff_fixed_points_trivial_small():
    assert fixed_points_are_trivial(7, 2)
    assert not fixed_points_are_trivial(7, 1)
    assert not fixed_points_are_trivial(91, D91_LOPSIDED)


def test_balance_iff_fixed_points_trivial_exhaustive():
    # Trivial fixed subgroup and local non-degeneracy are the same condition,
    # checked over every admissible modulus up to 5000 and every cube root.
    checked = 0
    for n, _fac in admissible_moduli(5000):
        for d in residue_arith.cube_roots_of_unity(n):
            assert is_balanced(n, d) == fixed_points_are_trivial(n, d), (n, int(d))
            checked += 1
    assert checked > 1000


# ------------------------------------------------------------- enumeration


def test_all_balanced_characters_examples():
    assert [int(c.d) for c in all_balanced_characters(7)] == [2, 4]

    trivial = all_balanced_characters(1)
    assert len(trivial) == 1 and trivial[0].is_trivial()

    chars91 = all_balanced_characters(91)
    assert len(chars91) == 4
    assert all(is_balanced(91, c.d) for c in chars91)


@pytest.mark.parametrize("n", [7, 13, 49, 91, 133, 169, 637])
def test_all_balanced_characters_against_residue_scan(n):
    # Independent brute force straight from the definition: no factor is
    # allowed to degenerate to 1.
    fac = trial_division_factorization(n)
    expect = [
        d
        for d in range(n)
        if pow(d, 3, n) == 1 and all(d % p**e != 1 for p, e in fac)
    ]
    assert [int(c.d) for c in all_balanced_characters(n)] == expect
    assert len(expect) == 2 ** len(fac)


def test_all_balanced_characters_count_is_power_of_two():
    for n, fac in admissible_moduli(600):
        chars = all_balanced_characters(n)
        want = 1 if n == 1 else 2 ** len(fac)
        assert len(chars) == want, n


# ------------------------------------------------------------ canonical form


def test_canonical_character_examples():
    assert int(canonical_character(7, 4)) == 2
    assert int(canonical_character(7, 2)) == 2
    assert canonical_character(7, 2).modulus == 7


def test_canonical_character_squaring_and_idempotence():
    for n, _fac in admissible_moduli(2000):
        for d in residue_arith.cube_roots_of_unity(n):
            c = canonical_character(n, d)
            assert canonical_character(n, int(d) ** 2 % n) == c
            assert canonical_character(n, c) == c


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=80)
def test_canonical_character_prime_modulus(seed):
    # For a prime p = 1 mod 3 the two nontrivial roots square into each other.
    primes = [p for p in residue_arith.primes_up_to(600) if p % 3 == 1]
    p = primes[seed % len(primes)]
    roots = [int(r) for r in residue_arith.cube_roots_of_unity(p) if int(r) != 1]
    assert len(roots) == 2
    a, b = roots
    assert a * a % p == b and b * b % p == a
    assert int(canonical_character(p, a)) == int(canonical_character(p, b)) == a


# ------------------------------------------------------------- decomposition


def test_decompose_examples():
    dec = decompose_non_balanced(91, D91_LOPSIDED)
    assert (dec.n1, dec.n2) == (13, 7)
    assert dec.d1 == Residue(D91_LOPSIDED % 13, 13)
    assert is_balanced(dec.n1, dec.d1)

    assert decompose_non_balanced(7, 2) == NonBalancedDecomposition(7, Residue(2, 7), 1)
    assert decompose_non_balanced(91, 9) == NonBalancedDecomposition(91, Residue(9, 91), 1)
    assert decompose_non_balanced(7, 1) == NonBalancedDecomposition(1, Residue(0, 1), 7)
    assert decompose_non_balanced(1, 0) == NonBalancedDecomposition(1, Residue(0, 1), 1)


def test_decompose_retest_and_crt_roundtrip():
    for n, _fac in admissible_moduli(2000):
        for d in residue_arith.cube_roots_of_unity(n):
            dec = decompose_non_balanced(n, d)
            assert dec.n1 * dec.n2 == n
            assert is_balanced(dec.n1, dec.d1)
            if n > 1 and not is_balanced(n, d):
                assert dec.n2 > 1
            back = crt_combine([(dec.d1.value, dec.n1), (1 % dec.n2, dec.n2)])
            assert back == Residue(int(d) % n, n), (n, int(d))


# -------------------------------------------------------------- descriptors


def test_residue_character_plumbing():
    c = ResidueCharacter(7, Residue(2, 7))
    assert c.d == Residue(2, 7)
    assert not c.is_trivial()
    assert ResidueCharacter(7, 1).is_trivial()
    assert ResidueCharacter(1, 0).is_trivial()
    with pytest.raises(ValueError):
        ResidueCharacter(7, Residue(2, 13))


def test_semidirect_descriptor_fields_and_json():
    d = SemidirectDescriptor(7, 4)
    assert d.balanced and d.canonical_d == Residue(2, 7)
    assert d.to_json() == '{"d":4,"kind":"semidirect","n":7}'
    assert json.loads(d.to_json()) == {"kind": "semidirect", "n": 7, "d": 4}

    lop = SemidirectDescriptor(91, D91_LOPSIDED)
    assert not lop.balanced
    assert int(lop.canonical_d) == min(D91_LOPSIDED, D91_LOPSIDED**2 % 91)

    with pytest.raises(Exception):
        d.n = 13  # frozen


# ------------------------------------------------------ isomorphism classes


def test_isomorphism_classes_examples():
    assert isomorphism_classes_of_balanced(7) == [Residue(2, 7)]
    assert isomorphism_classes_of_balanced(91) == [Residue(9, 91), Residue(16, 91)]
    assert isomorphism_classes_of_balanced(1) == [Residue(0, 1)]


def test_two_classes_mod_91_are_genuinely_distinct_groups():
    reps = isomorphism_classes_of_balanced(91)
    G1 = build_semidirect(91, 3, int(reps[0]))
    G2 = build_semidirect(91, 3, int(reps[1]))
    assert not is_isomorphic(G1, G2)
    # while squaring a character stays inside its class
    G1b = build_semidirect(91, 3, int(reps[0]) ** 2 % 91)
    assert is_isomorphic(G1, G1b)


def test_classes_certified_by_multiplication_table_oracle():
    # The heavyweight certification: for every admissible modulus up to 2000,
    # two twists give isomorphic groups exactly when their canonical forms
    # agree, and the balanced class count is 2^(k-1).  Runs in roughly ten
    # minutes; everything the classifier reports rests on this bound of two
    # characters per class.
    for n, fac in admissible_moduli(2000):
        roots = residue_arith.cube_roots_of_unity(n)
        classes = {}
        for d in roots:
            c = int(canonical_character(n, d))
            classes.setdefault(c, []).append(int(d))

        balanced_reps = [int(r) for r in isomorphism_classes_of_balanced(n)]
        want = 1 if n == 1 else 2 ** (len(fac) - 1)
        assert len(balanced_reps) == want, n
        assert set(balanced_reps) <= set(classes), n

        reps = {c: build_semidirect(n, 3, c) for c in sorted(classes)}
        for c, members in sorted(classes.items()):
            for d in members:
                if d == c:
                    continue
                G = build_semidirect(n, 3, d)
                assert is_isomorphic(reps[c], G), (n, c, d)
                del G
        ordered = sorted(classes)
        for i in range(len(ordered)):
            for j in range(i + 1, len(ordered)):
                assert not is_isomorphic(reps[ordered[i]], reps[ordered[j]]), (
                    n,
                    ordered[i],
                    ordered[j],
                )
        del reps
