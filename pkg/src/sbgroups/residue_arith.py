"""Residue arithmetic: factorization, unit groups, cube roots of unity.

The classification of group actions on a nontrivial Severi-Brauer surface
keeps asking the same residue questions: what are the cube roots of unity
mod n, what does a unit d of order three fix in Z/n, which primes divide n.
This module answers them exactly for moduli up to 2**64 - 1.

Factorization is deterministic Miller-Rabin plus Brent's cycle variant of
Pollard rho, both self-contained.  Small-modulus paths use direct search
so that the structured (CRT) paths can be cross-checked against them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

N_MAX = 2**64 - 1

# Direct-search threshold.  At or below this bound, cube roots of unity and
# fixed subgroups are found by scanning the full residue system; above it,
# the CRT-based construction takes over.  The two agree on the overlap.
BRUTE_LIMIT = 10**6

_SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
    67, 71, 73, 79, 83, 89, 97,
)

# Witness set making Miller-Rabin deterministic for all n < 3.3 * 10**24,
# comfortably past 2**64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class EvenModulus(ValueError):
    """Raised when an odd modulus is required but an even one was given."""


class NotAUnit(ValueError):
    """Raised when a residue is not invertible mod its modulus."""


class NotACubeRoot(ValueError):
    """Raised when a residue was expected to cube to 1 but does not."""


@dataclass(frozen=True)
class Residue:
    """A residue class ``value`` mod ``modulus``, stored reduced.

    The modulus 1 is allowed; its single residue is stored as value 0.
    """

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def __int__(self) -> int:
        return self.value

    def is_unit(self) -> bool:
        return math.gcd(self.value, self.modulus) == 1 or self.modulus == 1


@dataclass(frozen=True)
class Factorization:
    """Prime factorization ``n = prod p_i ** e_i`` with p_i strictly increasing."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __iter__(self):
        return iter(self.factors)


@dataclass(frozen=True)
class UnitGroupStructure:
    """Cyclic decomposition of (Z/n)* for odd n.

    ``local_factors`` lists one pair (p**e, order of the local cyclic factor)
    per prime power in n; for odd n every local unit group is cyclic.
    """

    n: int
    local_factors: tuple[tuple[int, int], ...]
    order: int = field(init=False)

    def __post_init__(self):
        total = 1
        for _, k in self.local_factors:
            total *= k
        object.__setattr__(self, "order", total)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 0 <= n <= 2**64 - 1 and a bit beyond."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """One nontrivial factor of composite odd n, Brent's variant of Pollard rho."""
    if n % 2 == 0:
        return 2
    # Deterministic parameter sweep; each (y0, c) pair is tried in turn.
    for c in range(1, 50):
        y, m = 2, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")  # pragma: no cover


def factorize(n: int) -> Factorization:
    """Prime factorization of n, 1 <= n <= 2**64 - 1.

    factorize(1) has an empty factor list.  Raises ValueError outside the
    supported range.
    """
    if not (1 <= n <= N_MAX):
        raise ValueError(f"n must satisfy 1 <= n <= 2**64 - 1, got {n}")
    counts: dict[int, int] = {}
    m = n
    for p in _SMALL_PRIMES:
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
    stack = [m] if m > 1 else []
    while stack:
        t = stack.pop()
        if t == 1:
            continue
        if is_prime(t):
            counts[t] = counts.get(t, 0) + 1
            continue
        d = _brent_rho(t)
        stack.append(d)
        stack.append(t // d)
    return Factorization(n, tuple(sorted(counts.items())))


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n):
        phi *= (p - 1) * p ** (e - 1)
    return phi


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit by a plain sieve."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, b in enumerate(sieve) if b]


def crt_combine(pairs: list[tuple[int, int]]) -> Residue:
    """Solve x = v_i mod m_i for pairwise coprime moduli."""
    x, m = 0, 1
    for v, mi in pairs:
        g, inv, _ = _ext_gcd(m % mi, mi)
        if g != 1:
            raise ValueError("moduli are not pairwise coprime")
        x = x + m * ((v - x) * inv % mi)
        m *= mi
    return Residue(x % m, m)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def unit_group_structure(n: int) -> UnitGroupStructure:
    """Cyclic decomposition of (Z/n)* for odd n >= 1.

    Raises EvenModulus for even n (the even local factor is not cyclic in
    general and is never needed here: the moduli of interest are odd or
    handled elementwise).
    """
    if n % 2 == 0:
        raise EvenModulus(f"unit group structure requires odd n, got {n}")
    if n == 1:
        return UnitGroupStructure(1, ())
    locals_ = []
    for p, e in factorize(n):
        q = p**e
        locals_.append((q, (p - 1) * p ** (e - 1)))
    return UnitGroupStructure(n, tuple(locals_))


def _primitive_root_mod_prime_power(p: int, e: int) -> int:
    """A generator of the cyclic group (Z/p**e)* for odd p."""
    phi_p = p - 1
    prime_parts = [q for q, _ in factorize(phi_p)]
    g = None
    for cand in range(2, p):
        if all(pow(cand, phi_p // q, p) != 1 for q in prime_parts):
            g = cand
            break
    if g is None:  # pragma: no cover
        raise ArithmeticError(f"no primitive root mod {p}")
    if e == 1:
        return g
    # Lift: g works mod p**e unless g**(p-1) = 1 mod p**2, then g + p does.
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _local_cube_roots(p: int, e: int) -> list[int]:
    """Cube roots of unity mod the odd prime power p**e."""
    q = p**e
    phi_q = (p - 1) * p ** (e - 1)
    if phi_q % 3 != 0:
        return [1]
    g = _primitive_root_mod_prime_power(p, e)
    h = pow(g, phi_q // 3, q)
    return sorted({1, h, h * h % q})


def cube_roots_of_unity(n: int) -> list[Residue]:
    """All d mod n with d**3 = 1 and gcd(d, n) = 1, sorted by value.

    For n <= 10**6 this is a direct scan; above, local roots at each odd
    prime power are glued by CRT (the factor at 2**e is always trivial,
    since its unit group has order a power of two).  The two strategies
    agree on their common range, which the tests exercise.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n == 1:
        return [Residue(0, 1)]
    if n <= BRUTE_LIMIT:
        return [
            Residue(d, n)
            for d in range(1, n)
            if math.gcd(d, n) == 1 and pow(d, 3, n) == 1
        ]
    local_roots = []
    moduli = []
    for p, e in factorize(n):
        q = p**e
        moduli.append(q)
        local_roots.append([1] if p == 2 else _local_cube_roots(p, e))
    out = []
    # Cartesian product over local choices, assembled by CRT.
    for combo in itertools.product(*local_roots):
        x = crt_combine([(v, q) for v, q in zip(combo, moduli)])
        out.append(Residue(x.value, n))
    return sorted(out, key=lambda r: r.value)


def multiplicative_order(d: int | Residue, n: int | None = None) -> int:
    """Order of the unit d in (Z/n)*.  Raises NotAUnit when gcd(d, n) > 1."""
    if isinstance(d, Residue):
        if n is not None and n != d.modulus:
            raise ValueError("modulus mismatch")
        n = d.modulus
        d = d.value
    if n is None:
        raise TypeError("modulus required when d is a plain int")
    if n == 1:
        return 1
    d %= n
    if math.gcd(d, n) != 1:
        raise NotAUnit(f"{d} is not a unit mod {n}")
    order = 1
    for p, e in factorize(n):
        q = p**e
        phi_q = (p - 1) * p ** (e - 1)
        # Order mod q divides phi(q); strip primes from the exponent.
        k = phi_q
        for pp, _ in factorize(phi_q):
            while k % pp == 0 and pow(d, k // pp, q) == 1:
                k //= pp
        order = order * k // math.gcd(order, k)
    return order


def fixed_subgroup_of_character(n: int, d: int | Residue) -> list[Residue]:
    """The subgroup {t in Z/n : d*t = t}, for d a cube root of unity mod n.

    Multiplication by d is the twist appearing in mu_n : mu_3; its fixed
    subgroup is cyclic, generated by n / gcd(d - 1, n).  For n <= 10**6 the
    result is recomputed by direct scan instead, sorted ascending either way.
    Raises NotACubeRoot when d**3 != 1 mod n or d is not a unit.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if isinstance(d, Residue):
        if d.modulus != n:
            raise ValueError("modulus mismatch")
        d = d.value
    d %= n
    if n > 1 and (math.gcd(d, n) != 1 or pow(d, 3, n) != 1):
        raise NotACubeRoot(f"{d} is not a cube root of unity mod {n}")
    if n == 1:
        return [Residue(0, 1)]
    if n <= BRUTE_LIMIT:
        return [Residue(t, n) for t in range(n) if (t * d - t) % n == 0]
    step = n // math.gcd(d - 1, n)
    return [Residue(t, n) for t in range(0, n, step)]
