"""Brute-force reference implementations used to pin expected values.

Everything here is deliberately naive: trial division, full loops over
residue systems, closure by repeated multiplication, backtracking over
all candidate bijections.  Nothing imports the package under test, so
agreement between the two is meaningful evidence rather than a tautology.
"""

from __future__ import annotations

import itertools
import math


def trial_division_factorization(n: int) -> list[tuple[int, int]]:
    assert n >= 1
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


def brute_euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def brute_cube_roots(n: int) -> list[int]:
    """All units d mod n with d^3 = 1, by direct search (0 stands for 1 mod 1)."""
    if n == 1:
        return [0]
    return [d for d in range(1, n) if math.gcd(d, n) == 1 and pow(d, 3, n) == 1]


def brute_fixed_subgroup(n: int, d: int) -> list[int]:
    return [t for t in range(n) if (t * d - t) % n == 0]


def brute_multiplicative_order(d: int, n: int) -> int:
    assert math.gcd(d, n) == 1
    if n == 1:
        return 1
    k, x = 1, d % n
    while x != 1:
        x = x * d % n
        k += 1
    return k


def brute_order3_unit_exists(p: int) -> bool:
    return any(pow(x, 3, p) == 1 for x in range(2, p))


def semidirect_product(m: int, n: int, d: int):
    """Multiplication on pairs (r, s), r mod m acting on s mod n through d."""

    def mul(x, y):
        r1, s1 = x
        r2, s2 = y
        return ((r1 + r2) % m, (s1 * pow(d, r2, n) + s2) % n)

    return mul


def naive_closure(gens, mul, identity):
    """Closure of a generating set under ``mul``, as a sorted element list."""
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def table_from_mul(elements, mul):
    """Dense multiplication table over an explicit element list."""
    index = {e: i for i, e in enumerate(elements)}
    return [[index[mul(a, b)] for b in elements] for a in elements]


def naive_element_orders(table) -> dict[int, int]:
    """Order of every element of a table group, by repeated multiplication."""
    out = {}
    for g in range(len(table)):
        k, x = 1, g
        while x != 0:
            x = table[x][g]
            k += 1
        out[g] = k
    return out


def naive_is_isomorphic(table_g, table_h) -> bool:
    """Backtracking isomorphism search for very small tables (order <= 30 or so).

    Tries every order-compatible assignment of a generating sequence and
    checks the induced map on the full tables.  Exponential, test-only.
    """
    n = len(table_g)
    if n != len(table_h):
        return False
    ord_g = naive_element_orders(table_g)
    ord_h = naive_element_orders(table_h)
    if sorted(ord_g.values()) != sorted(ord_h.values()):
        return False

    def closure_map(gen_pairs):
        f = {0: 0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g, h in gen_pairs:
                    y = table_g[x][g]
                    fy = table_h[f[x]][h]
                    if y in f:
                        if f[y] != fy:
                            return None
                    else:
                        f[y] = fy
                        nxt.append(y)
            frontier = nxt
        return f

    # Greedy generating sequence for table_g.
    gens = []
    covered = {0}
    while len(covered) < n:
        g = min(x for x in range(n) if x not in covered)
        gens.append(g)
        mul = semidirect_product  # noqa: F841 (keep linters honest about unused)
        covered = set(naive_closure(gens, lambda a, b: table_g[a][b], 0))

    def extend(level, gen_pairs):
        if level == len(gens):
            f = closure_map(gen_pairs)
            if f is None or len(f) != n:
                return False
            inv = set(f.values())
            if len(inv) != n:
                return False
            return all(
                f[table_g[a][b]] == table_h[f[a]][f[b]]
                for a in range(n)
                for b in range(n)
            )
        g = gens[level]
        for h in range(n):
            if ord_h[h] != ord_g[g]:
                continue
            if extend(level + 1, gen_pairs + [(g, h)]):
                return True
        return False

    return extend(0, [])


def heisenberg_table(p: int = 3):
    """Upper unitriangular 3x3 matrices over Z/p, encoded as (a, b, c) triples."""
    elements = list(itertools.product(range(p), repeat=3))

    def mul(x, y):
        a1, b1, c1 = x
        a2, b2, c2 = y
        return ((a1 + a2) % p, (b1 + b2) % p, (c1 + c2 + a1 * b2) % p)

    elements = [(0, 0, 0)] + [e for e in elements if e != (0, 0, 0)]
    return table_from_mul(elements, mul)


def rational_nullspace(rows):
    """Basis of the right nullspace of a matrix of Fractions.

    Plain Gauss-Jordan over the rationals; returns a list of coordinate
    tuples spanning {v : M v = 0}.  Small and exact, which is all the
    tests need.
    """
    from fractions import Fraction

    if not rows:
        return []
    ncols = len(rows[0])
    work = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        inv = Fraction(1) / work[r][c]
        work[r] = [x * inv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -work[i][fc]
        basis.append(tuple(v))
    return basis


def poly_mul_mod(a, b, mod_coeffs, q):
    """Multiply two coefficient lists mod (x^k - last reduction) style helper.

    ``mod_coeffs`` is the monic modulus as an ascending coefficient list.
    Coefficients live in the field of rationals represented by ``q`` (a
    callable wrapping values, e.g. Fraction).  Used to cross-check the
    cyclotomic arithmetic against direct polynomial division.
    """
    k = len(mod_coeffs) - 1
    prod = [q(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            prod[i + j] += x * y
    # long division by the monic modulus
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i]
        if c == 0:
            continue
        prod[i] = q(0)
        for j in range(k):
            prod[i - k + j] -= c * mod_coeffs[j]
    out = prod[:k]
    while len(out) < k:
        out.append(q(0))
    return out
