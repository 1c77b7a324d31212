"""Which finite groups act on a non-split degree-3 surface, with witnesses.

The realizable groups fall into a short list of shapes.  Acting by honest
automorphisms: cyclic mu_n, cyclic mu_3n, a balanced semidirect product
mu_n : mu_3, or mu_3 x (balanced product), always with n a product of
primes congruent to 1 mod 3 and never with an element of order 9.  Acting
merely birationally adds exactly one more group, mu_3 x mu_3 x mu_3.

``classify_group`` decides membership for a concrete multiplication table
and returns a verdict plus either a structural witness (enough to rebuild
the group, and to realize it inside a cyclic algebra) or an obstruction
string.  ``classify_descriptor`` answers the same question symbolically for
the JSON descriptor grammar, without building tables.  Over the rationals
the only candidates are subgroups of mu_3 x mu_3 x mu_3, which is what
``classify_over_Q`` tests.

The non-abelian branch mirrors the structure theory: find a cyclic normal
abelian subgroup of index 3, split off a complement, read the twist d off
the conjugation action, and demand that d be balanced after the forced
mu_3 direct factor is peeled away.  Every realizable non-abelian group has
such a subgroup, so the search is complete, and any success certifies
itself by exhibiting the witness.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from . import residue_arith, semidirect
from .group_kernel import (
    FiniteGroup,
    NoSplit,
    abelian_invariants,
    build_cyclic,
    build_semidirect,
    direct_product,
    element_orders,
    elementary_abelian_3,
    normal_abelian_index3_subgroups,
    split_over,
)
from .residue_arith import Residue

AUT_REALIZABLE = "aut_realizable"
BIR_ONLY_REALIZABLE = "bir_only_realizable"
NOT_REALIZABLE = "not_realizable"

DEFAULT_MAX_ORDER = 6000


class TooLarge(ValueError):
    """The group's multiplication table is beyond the supported size."""


class MalformedDescriptor(ValueError):
    """The JSON descriptor is not one of the recognized shapes."""


# ------------------------------------------------------------ order verdicts


@dataclass(frozen=True)
class DivisibleBy9:
    def to_dict(self) -> dict:
        return {"kind": "divisible_by_9"}


@dataclass(frozen=True)
class BadPrime:
    p: int

    def to_dict(self) -> dict:
        return {"kind": "bad_prime", "p": self.p}


@dataclass(frozen=True)
class OrderVerdict:
    """Whether some element of this order can act on such a surface."""

    n: int
    admissible: bool
    obstruction: DivisibleBy9 | BadPrime | None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "admissible": self.admissible,
            "obstruction": None if self.obstruction is None else self.obstruction.to_dict(),
        }


def admissible_order(n: int) -> OrderVerdict:
    """Decide whether n = 3^r * (primes 1 mod 3) with r at most 1.

    These are exactly the orders of elements that can act; the first
    obstruction in ascending prime order is reported.
    """
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    for p, e in residue_arith.factorize(n):
        if p == 3:
            if e >= 2:
                return OrderVerdict(n, False, DivisibleBy9())
        elif p % 3 != 1:
            return OrderVerdict(n, False, BadPrime(p))
    return OrderVerdict(n, True, None)


def enumerate_admissible_orders(limit: int) -> list[int]:
    """All admissible element orders up to limit, ascending."""
    if limit > 10**6:
        raise ValueError("enumeration sweep capped at 10^6")
    return [n for n in range(1, limit + 1) if admissible_order(n).admissible]


# ----------------------------------------------------------------- witnesses


@dataclass(frozen=True)
class Cyclic:
    """mu_n with n a product of primes 1 mod 3 (possibly n = 1)."""

    n: int

    @property
    def group_order(self) -> int:
        return self.n

    def to_dict(self) -> dict:
        return {"kind": "cyclic", "n": self.n}

    def descriptor(self) -> dict:
        return {"kind": "cyclic", "n": self.n}


@dataclass(frozen=True)
class Cyclic3n:
    """mu_3n where 3 does not divide n; n = 1 gives mu_3 itself."""

    n: int

    @property
    def group_order(self) -> int:
        return 3 * self.n

    def to_dict(self) -> dict:
        return {"kind": "cyclic_times_mu3", "n": self.n}

    def descriptor(self) -> dict:
        return {"kind": "cyclic", "n": 3 * self.n}


@dataclass(frozen=True)
class Balanced:
    """The balanced semidirect product mu_n : mu_3 with canonical twist d."""

    n: int
    d: int

    @property
    def group_order(self) -> int:
        return 3 * self.n

    def to_dict(self) -> dict:
        return {"kind": "balanced_semidirect", "n": self.n, "d": self.d}

    def descriptor(self) -> dict:
        return {"kind": "semidirect", "n": self.n, "d": self.d}


@dataclass(frozen=True)
class Mu3TimesBalanced:
    """mu_3 x (mu_n : mu_3); the degenerate n = 1 case is mu_3 x mu_3."""

    n: int
    d: int

    @property
    def group_order(self) -> int:
        return 9 * self.n

    def to_dict(self) -> dict:
        return {"kind": "mu3_times_balanced", "n": self.n, "d": self.d}

    def descriptor(self) -> dict:
        return {"kind": "mu3_times_semidirect", "n": self.n, "d": self.d}


@dataclass(frozen=True)
class Mu3Cubed:
    """mu_3 x mu_3 x mu_3: birationally realizable, never by automorphisms."""

    @property
    def group_order(self) -> int:
        return 27

    def to_dict(self) -> dict:
        return {"kind": "mu3_cubed"}

    def descriptor(self) -> dict:
        return {"kind": "mu3k", "k": 3}


Witness = Cyclic | Cyclic3n | Balanced | Mu3TimesBalanced | Mu3Cubed


@dataclass(frozen=True)
class Classification:
    verdict: str
    witness: Witness | None = None
    obstruction: str | None = None

    def __post_init__(self):
        if (self.witness is None) != (self.verdict == NOT_REALIZABLE):
            raise ValueError("witness present iff verdict is realizable")

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "obstruction": self.obstruction,
        }


def _aut(witness: Witness) -> Classification:
    return Classification(AUT_REALIZABLE, witness)


def _not(obstruction: str) -> Classification:
    return Classification(NOT_REALIZABLE, None, obstruction)


MU3_CUBED_CLASSIFICATION = Classification(BIR_ONLY_REALIZABLE, Mu3Cubed())


# ------------------------------------------------------------ table analysis


def _three_part(n: int) -> tuple[int, int]:
    """(s, n') with n = 3^s * n'."""
    s = 0
    while n % 3 == 0:
        n //= 3
        s += 1
    return s, n


def _bad_prime_of(n: int) -> int | None:
    for p, _ in residue_arith.factorize(n):
        if p != 3 and p % 3 != 1:
            return p
    return None


def _twist_of_conjugation(G: FiniteGroup, x: int, y: int) -> int:
    """d with y^-1 x y = x^d, given that the conjugate lies in <x>."""
    z = G.mul(G.mul(G.inv(y), x), y)
    power, k = 0, 0
    while True:
        if power == z:
            return k
        power, k = G.mul(power, x), k + 1
        if k > G.order:  # pragma: no cover
            raise RuntimeError("conjugate escaped the cyclic subgroup")


def classify_group(G: FiniteGroup, max_order: int = DEFAULT_MAX_ORDER) -> Classification:
    """Verdict and witness for a concrete finite group.

    Raises TooLarge when the table is beyond max_order; the default bound
    keeps every scan comfortably in memory.
    """
    if G.order > max_order:
        raise TooLarge(f"group order {G.order} exceeds the bound {max_order}")

    spectrum = element_orders(G)
    if any(o % 9 == 0 for o in spectrum):
        return _not("contains an element of order 9")
    bad = _bad_prime_of(G.order)
    if bad is not None:
        # Cauchy: a prime dividing the order is the order of some element.
        return _not(f"contains an element of prime order {bad}, which is not 1 mod 3")

    if G.is_abelian():
        invs = abelian_invariants(G)
        if len(invs) <= 1:
            n = G.order
            s, rest = _three_part(n)
            if s == 0:
                return _aut(Cyclic(rest))
            return _aut(Cyclic3n(rest))  # s == 1; s >= 2 was screened above
        if invs == [3, 3]:
            return _aut(Mu3TimesBalanced(1, 0))
        if invs == [3, 3, 3]:
            return MU3_CUBED_CLASSIFICATION
        return _not(f"abelian with invariant factors {invs}, not cyclic or elementary of rank <= 3")

    for ids in normal_abelian_index3_subgroups(G):
        sub = G.subgroup_table(ids)
        h = sub.order
        sub_orders = sub.orders()
        gen_positions = [i for i in range(h) if int(sub_orders[i]) == h]
        if not gen_positions:
            continue  # not cyclic
        x = ids[gen_positions[0]]
        try:
            complement = split_over(G, ids)
        except NoSplit:  # pragma: no cover - order-9 elements were screened
            continue
        y = complement[1]
        d = _twist_of_conjugation(G, x, y)
        s, n_prime = _three_part(h)
        if s == 0:
            if semidirect.is_balanced(h, d):
                return _aut(Balanced(h, int(semidirect.canonical_character(h, d))))
        else:
            d_prime = d % n_prime
            if n_prime > 1 and semidirect.is_balanced(n_prime, d_prime):
                return _aut(
                    Mu3TimesBalanced(
                        n_prime, int(semidirect.canonical_character(n_prime, d_prime))
                    )
                )
    return _not(
        "no cyclic normal subgroup of index 3 acts balanced after removing the central mu_3 part"
    )


# ------------------------------------------------------------- descriptors


def _require_int(desc: dict, key: str) -> int:
    v = desc.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise MalformedDescriptor(f"field {key!r} must be an integer, got {v!r}")
    return v


def _check_keys(desc: dict, allowed: set[str]):
    extra = set(desc) - allowed
    if extra:
        raise MalformedDescriptor(f"unexpected descriptor fields {sorted(extra)}")


def _classify_cyclic(n: int) -> Classification:
    if n < 1:
        raise MalformedDescriptor(f"cyclic order must be positive, got {n}")
    s, rest = _three_part(n)
    if s >= 2:
        return _not("contains an element of order 9")
    bad = _bad_prime_of(rest)
    if bad is not None:
        return _not(f"contains an element of prime order {bad}, which is not 1 mod 3")
    if s == 0:
        return _aut(Cyclic(rest))
    return _aut(Cyclic3n(rest))


def _classify_semidirect(n: int, d: int) -> Classification:
    """mu_n twisted by d, for arbitrary valid (n, d); the group has order 3n."""
    if n < 1:
        raise MalformedDescriptor(f"modulus must be positive, got {n}")
    d %= n
    if n > 1 and (math.gcd(d, n) != 1 or pow(d, 3, n) != 1):
        raise MalformedDescriptor(f"{d} is not a unit cube root of 1 mod {n}")
    s, n0 = _three_part(n)
    if s >= 2:
        return _not("contains an element of order 9")
    bad = _bad_prime_of(n0)
    if bad is not None:
        return _not(f"contains an element of prime order {bad}, which is not 1 mod 3")

    # The 3-part of n is acted on trivially (1 is the only cube root mod 3),
    # so it contributes a central mu_3 direct factor.
    d0 = d % n0 if n0 > 1 else 0
    dec = semidirect.decompose_non_balanced(n0, d0)
    if s == 0:
        if dec.n1 == 1:
            return _classify_cyclic(3 * n)  # trivial twist: mu_n x mu_3 is cyclic
        if dec.n2 == 1:
            return _aut(Balanced(n, int(semidirect.canonical_character(n, d))))
        return _not(
            f"decomposes as a balanced part of modulus {dec.n1} times a direct mu_{dec.n2} factor"
        )
    if dec.n1 == 1:
        # mu_3 x mu_3 x mu_n0: elementary rank 2 only survives when n0 = 1.
        if n0 == 1:
            return _aut(Mu3TimesBalanced(1, 0))
        return _not(f"abelian mu_3 x mu_3 x mu_{n0} is not cyclic or elementary of rank <= 3")
    if dec.n2 == 1:
        return _aut(
            Mu3TimesBalanced(n0, int(semidirect.canonical_character(n0, d0)))
        )
    return _not(
        f"decomposes as mu_3 times a balanced part of modulus {dec.n1} times a direct mu_{dec.n2} factor"
    )


def _classify_mu3_times_semidirect(n: int, d: int) -> Classification:
    inner = _classify_semidirect(n, d)
    if inner.verdict == NOT_REALIZABLE:
        # A further direct mu_3 factor cannot repair any obstruction.
        return inner
    w = inner.witness
    if isinstance(w, Cyclic3n):
        if w.n == 1:
            return _aut(Mu3TimesBalanced(1, 0))
        return _not(f"abelian mu_3 x mu_3 x mu_{w.n} is not cyclic or elementary of rank <= 3")
    if isinstance(w, Balanced):
        return _aut(Mu3TimesBalanced(w.n, w.d))
    if isinstance(w, Mu3TimesBalanced):
        if w.n == 1:
            return MU3_CUBED_CLASSIFICATION
        return _not(f"mu_3 x mu_3 x (balanced part mod {w.n}) exceeds the realizable shapes")
    raise MalformedDescriptor(f"unexpected inner witness {w!r}")  # pragma: no cover


def _classify_mu3k(k: int) -> Classification:
    if k < 0:
        raise MalformedDescriptor(f"exponent k must be non-negative, got {k}")
    if k == 0:
        return _aut(Cyclic(1))
    if k == 1:
        return _aut(Cyclic3n(1))
    if k == 2:
        return _aut(Mu3TimesBalanced(1, 0))
    if k == 3:
        return MU3_CUBED_CLASSIFICATION
    return _not("elementary abelian 3-group of rank 4 or more")


def _parse_descriptor(desc: dict | str) -> dict:
    if isinstance(desc, str):
        try:
            desc = json.loads(desc)
        except json.JSONDecodeError as e:
            raise MalformedDescriptor(f"not valid JSON: {e}") from e
    if not isinstance(desc, dict):
        raise MalformedDescriptor(f"descriptor must be an object, got {type(desc).__name__}")
    return desc


def classify_descriptor(desc: dict | str) -> Classification:
    """Symbolic classification of a JSON group descriptor.

    Accepts a dict or a JSON string with "kind" one of cyclic, semidirect,
    mu3_times_semidirect, mu3k.  Agrees with classify_group on the realized
    multiplication table.
    """
    desc = _parse_descriptor(desc)
    kind = desc.get("kind")
    if kind == "cyclic":
        _check_keys(desc, {"kind", "n"})
        return _classify_cyclic(_require_int(desc, "n"))
    if kind == "semidirect":
        _check_keys(desc, {"kind", "n", "d"})
        return _classify_semidirect(_require_int(desc, "n"), _require_int(desc, "d"))
    if kind == "mu3_times_semidirect":
        _check_keys(desc, {"kind", "n", "d"})
        return _classify_mu3_times_semidirect(
            _require_int(desc, "n"), _require_int(desc, "d")
        )
    if kind == "mu3k":
        _check_keys(desc, {"kind", "k"})
        return _classify_mu3k(_require_int(desc, "k"))
    raise MalformedDescriptor(f"unknown descriptor kind {kind!r}")


def realize_descriptor(desc: dict | str) -> FiniteGroup:
    """Build the multiplication table a descriptor denotes."""
    desc = _parse_descriptor(desc)
    kind = desc.get("kind")
    if kind == "cyclic":
        _check_keys(desc, {"kind", "n"})
        n = _require_int(desc, "n")
        if n < 1:
            raise MalformedDescriptor(f"cyclic order must be positive, got {n}")
        return build_cyclic(n)
    if kind == "semidirect":
        _check_keys(desc, {"kind", "n", "d"})
        n, d = _require_int(desc, "n"), _require_int(desc, "d")
        _classify_semidirect(n, d)  # validates (n, d)
        return build_semidirect(n, 3, d % n)
    if kind == "mu3_times_semidirect":
        _check_keys(desc, {"kind", "n", "d"})
        n, d = _require_int(desc, "n"), _require_int(desc, "d")
        _classify_semidirect(n, d)
        return direct_product(build_cyclic(3), build_semidirect(n, 3, d % n))
    if kind == "mu3k":
        _check_keys(desc, {"kind", "k"})
        k = _require_int(desc, "k")
        if k < 0:
            raise MalformedDescriptor(f"exponent k must be non-negative, got {k}")
        if k > 3:
            raise MalformedDescriptor("mu3k realization supported for k <= 3 only")
        return elementary_abelian_3(k)
    raise MalformedDescriptor(f"unknown descriptor kind {kind!r}")


# ------------------------------------------------------------- enumeration


def _admissible_moduli(limit: int) -> list[int]:
    """n <= limit with every prime divisor 1 mod 3 (the twist moduli)."""
    out = []
    for n in range(1, limit + 1):
        if all(p % 3 == 1 for p, _ in residue_arith.factorize(n)):
            out.append(n)
    return out


def enumerate_aut_groups(max_order: int) -> list[Classification]:
    """Every automorphism-realizable class of order <= max_order, once each.

    Sorted by (group order, shape, modulus, twist); balanced twists appear
    by canonical representative only.
    """
    found: list[Classification] = []
    for n in _admissible_moduli(max_order):
        if n <= max_order:
            found.append(_aut(Cyclic(n)))
        if 3 * n <= max_order:
            found.append(_aut(Cyclic3n(n)))
            if n > 1:
                for rep in semidirect.isomorphism_classes_of_balanced(n):
                    found.append(_aut(Balanced(n, int(rep))))
        if 9 * n <= max_order:
            if n == 1:
                found.append(_aut(Mu3TimesBalanced(1, 0)))
            else:
                for rep in semidirect.isomorphism_classes_of_balanced(n):
                    found.append(_aut(Mu3TimesBalanced(n, int(rep))))

    shape_rank = {Cyclic: 0, Cyclic3n: 1, Balanced: 2, Mu3TimesBalanced: 3}

    def key(c: Classification):
        w = c.witness
        d = getattr(w, "d", -1)
        return (w.group_order, shape_rank[type(w)], getattr(w, "n", 0), d)

    return sorted(found, key=key)


# ------------------------------------------------------------ rational case


def classify_over_Q(G: FiniteGroup) -> bool:
    """True iff G could act over the rationals: abelian, exponent 3, order <= 27.

    This is the proven upper bound (a subgroup of mu_3 x mu_3 x mu_3);
    whether every such subgroup actually occurs over Q is open.
    """
    if not G.is_abelian():
        return False
    if G.order > 27 or 27 % G.order != 0:
        return False
    return all(o in (1, 3) for o in element_orders(G))
