"""Finite groups as dense multiplication tables.

A group of order N is an N x N int32 array T with T[a, b] = a * b and the
identity at index 0.  Dense tables keep every question exact and simple:
orders come from binary powering, the center from a transpose comparison,
isomorphism from a pruned backtracking search over generator images.  The
practical ceiling is order in the low thousands, which covers everything
the classification needs.

The splitting logic lives here too: a group with a normal index-3 subgroup
and no elements of order 9 always splits as a semidirect product with mu_3,
and the complement is found constructively (g^m for a suitable g of order
3m with m coprime to 3).
"""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import residue_arith


class BadCharacter(ValueError):
    """The twisting character d does not satisfy d**m = 1 mod n."""


class NoSplit(Exception):
    """No complement of order 3 exists over the given normal subgroup."""


class NotAbelian(ValueError):
    """Invariant factors are only defined for abelian groups."""


class CapExceeded(RuntimeError):
    """A generated closure grew past the configured cap."""


# ------------------------------------------------------------------- core


class FiniteGroup:
    """Immutable multiplication-table group with identity id 0."""

    __slots__ = ("order", "table", "_inv", "_orders")

    def __init__(self, table, validate: str | None = "basic"):
        arr = np.array(table, dtype=np.int32, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValueError("table must be a nonempty square matrix")
        arr.setflags(write=False)
        object.__setattr__(self, "order", int(arr.shape[0]))
        object.__setattr__(self, "table", arr)
        object.__setattr__(self, "_inv", None)
        object.__setattr__(self, "_orders", None)
        if validate is not None:
            self._validate(validate)

    def __setattr__(self, *args):
        raise AttributeError("FiniteGroup is immutable")

    # -- validation

    def _validate(self, level: str):
        n, T = self.order, self.table
        if T.min() < 0 or T.max() >= n:
            raise ValueError("table entries out of range")
        ids = np.arange(n, dtype=np.int32)
        if not (np.array_equal(T[0], ids) and np.array_equal(T[:, 0], ids)):
            raise ValueError("index 0 is not a two-sided identity")
        if not (
            np.array_equal(np.sort(T, axis=1), np.broadcast_to(ids, T.shape))
            and np.array_equal(np.sort(T, axis=0), np.broadcast_to(ids[:, None], T.shape))
        ):
            raise ValueError("table rows/columns are not permutations")
        if level == "basic":
            return
        if level == "full":
            rows = range(n)
        elif level == "sampled":
            rng = random.Random(0)
            rows = sorted({rng.randrange(n) for _ in range(min(n, 64))} | set(range(min(n, 16))))
        else:
            raise ValueError(f"unknown validation level {level!r}")
        for a in rows:
            # (a*b)*c against a*(b*c) for all b, c at once
            if not np.array_equal(T[T[a]], T[a][T]):
                raise ValueError(f"associativity fails at row {a}")

    # -- basic operations

    @property
    def identity(self) -> int:
        return 0

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inverses(self) -> np.ndarray:
        if self._inv is None:
            inv = np.argmax(self.table == 0, axis=1).astype(np.int32)
            object.__setattr__(self, "_inv", inv)
        return self._inv

    def inv(self, a: int) -> int:
        return int(self.inverses()[a])

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv(g), -k
        acc, base = 0, g
        while k:
            if k & 1:
                acc = int(self.table[acc, base])
            base = int(self.table[base, base])
            k >>= 1
        return acc

    def element_order(self, g: int) -> int:
        k = self.order
        for p, _ in residue_arith.factorize(self.order):
            while k % p == 0 and self.power(g, k // p) == 0:
                k //= p
        return k

    def orders(self) -> np.ndarray:
        if self._orders is None:
            out = np.fromiter(
                (self.element_order(g) for g in range(self.order)),
                dtype=np.int64,
                count=self.order,
            )
            out.setflags(write=False)
            object.__setattr__(self, "_orders", out)
        return self._orders

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def generate(self, gens) -> list[int]:
        """Closure of the given ids, as a sorted list (always contains 0)."""
        gens = [g % self.order for g in gens]
        seen = np.zeros(self.order, dtype=bool)
        seen[0] = True
        frontier = [0]
        while frontier:
            rows = self.table[np.array(frontier, dtype=np.int32)][:, gens].ravel()
            fresh = rows[~seen[rows]]
            if fresh.size == 0:
                break
            fresh = np.unique(fresh)
            seen[fresh] = True
            frontier = fresh.tolist()
        return np.nonzero(seen)[0].tolist()

    def subgroup_table(self, ids) -> "FiniteGroup":
        """Reindexed table of a subgroup (ids must be closed and contain 0)."""
        ids = sorted(ids)
        if ids[0] != 0:
            raise ValueError("subgroup must contain the identity")
        pos = np.full(self.order, -1, dtype=np.int32)
        pos[ids] = np.arange(len(ids), dtype=np.int32)
        sub = self.table[np.ix_(ids, ids)]
        if (pos[sub] < 0).any():
            raise ValueError("ids are not closed under multiplication")
        return FiniteGroup(pos[sub], validate=None)

    def to_json(self) -> str:
        return json.dumps(
            {"order": self.order, "table": self.table.tolist()},
            sort_keys=True,
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, data) -> "FiniteGroup":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        if not isinstance(data, dict) or "table" not in data:
            raise ValueError('expected an object with "order" and "table"')
        table = data["table"]
        if "order" in data and data["order"] != len(table):
            raise ValueError("declared order does not match the table size")
        level = "full" if len(table) <= 512 else "sampled"
        return cls(table, validate=level)

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.order, self.table.tobytes()))


@dataclass(frozen=True)
class GroupElement:
    """A pointer into a FiniteGroup, with operator sugar for tests and demos."""

    group: FiniteGroup
    id: int

    def __post_init__(self):
        if not 0 <= self.id < self.group.order:
            raise ValueError(f"id {self.id} out of range for order {self.group.order}")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if other.group is not self.group:
            raise ValueError("elements of different groups")
        return GroupElement(self.group, self.group.mul(self.id, other.id))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.group, self.group.inv(self.id))

    def order(self) -> int:
        return self.group.element_order(self.id)


# ------------------------------------------------------------- constructions


def build_cyclic(n: int) -> FiniteGroup:
    """The cyclic group of order n >= 1, id k standing for the k-th power."""
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    ids = np.arange(n, dtype=np.int64)
    return FiniteGroup((ids[:, None] + ids[None, :]) % n, validate=None)


def build_semidirect(n: int, m: int, d: int) -> FiniteGroup:
    """mu_n twisted by mu_m through the character s -> d*s.

    Elements are pairs (r mod m, s mod n) encoded as r*n + s, multiplying by
    (r1, s1) * (r2, s2) = (r1 + r2, s1 * d**r2 + s2).  This realizes the
    presentation x^n = y^m = 1, y^-1 x y = x^d: the pair (r, s) is y^r x^s.
    Requires d**m = 1 mod n (which forces d to be a unit), else BadCharacter.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    d %= n
    if pow(d, m, n) != 1 % n:
        raise BadCharacter(f"d = {d} does not satisfy d^{m} = 1 mod {n}")
    dp = [pow(d, r, n) for r in range(m)]
    s = np.arange(n, dtype=np.int64)
    T = np.empty((m * n, m * n), dtype=np.int32)
    for r1 in range(m):
        base = np.empty((n, m * n), dtype=np.int32)
        for r2 in range(m):
            blk = (s[:, None] * dp[r2] + s[None, :]) % n + ((r1 + r2) % m) * n
            base[:, r2 * n : (r2 + 1) * n] = blk
        T[r1 * n : (r1 + 1) * n] = base
    return FiniteGroup(T, validate=None)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Componentwise product on pairs (g, h) encoded as g*|H| + h."""
    hn = H.order
    T = G.table.astype(np.int64)[:, None, :, None] * hn + H.table[None, :, None, :]
    N = G.order * hn
    return FiniteGroup(T.reshape(N, N), validate=None)


def elementary_abelian_3(k: int) -> FiniteGroup:
    """(mu_3)^k for 0 <= k <= 3."""
    if not 0 <= k <= 3:
        raise ValueError(f"k must be between 0 and 3, got {k}")
    G = build_cyclic(1 if k == 0 else 3)
    for _ in range(k - 1):
        G = direct_product(G, build_cyclic(3))
    return G


def from_mul_function(elements, mul, identity) -> FiniteGroup:
    """Table group from explicit elements and a multiplication callable."""
    elements = list(elements)
    if identity not in elements:
        raise ValueError("identity must be among the elements")
    elements = [identity] + [e for e in elements if e != identity]
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    T = np.empty((n, n), dtype=np.int32)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            T[i, j] = index[mul(a, b)]
    return FiniteGroup(T, validate="basic")


# ---------------------------------------------------------------- invariants


def element_orders(G: FiniteGroup) -> dict[int, int]:
    """Multiset of element orders, as {order: count}."""
    return dict(sorted(Counter(G.orders().tolist()).items()))


def center(G: FiniteGroup) -> list[int]:
    mask = (G.table == G.table.T).all(axis=1)
    return np.nonzero(mask)[0].tolist()


def is_abelian(G: FiniteGroup) -> bool:
    return G.is_abelian()


def derived_subgroup(G: FiniteGroup) -> list[int]:
    """Ids of the commutator subgroup."""
    n = G.order
    inv = G.inverses()
    T = G.table
    col = np.arange(n, dtype=np.int32)[:, None]
    row = np.arange(n, dtype=np.int32)[None, :]
    A = T[np.ix_(inv, inv)]  # A[g,h] = g^-1 h^-1
    B = T[A, col]  # B[g,h] = g^-1 h^-1 g
    C = T[B, row]  # C[g,h] = g^-1 h^-1 g h
    return G.generate(np.unique(C).tolist())


def abelian_invariants(G: FiniteGroup) -> list[int]:
    """Invariant factors d_1 | d_2 | ... of an abelian group (trivial -> [])."""
    if not G.is_abelian():
        raise NotAbelian("invariant factors require an abelian group")
    n = G.order
    if n == 1:
        return []
    ords = G.orders()
    lambdas: dict[int, list[int]] = {}
    for p, e_max in residue_arith.factorize(n):
        counts = []
        for e in range(e_max + 1):
            q = p**e
            counts.append(int(np.count_nonzero(q % ords == 0)))
        exps = []
        for c in counts:
            e = 0
            while p**e < c:
                e += 1
            if p**e != c:
                raise ArithmeticError("inconsistent p-subgroup sizes")  # pragma: no cover
            exps.append(e)
        # number of cyclic summands with exponent >= e
        geq = [exps[e] - exps[e - 1] for e in range(1, e_max + 1)]
        parts = []
        for e in range(1, e_max + 1):
            nxt = geq[e] if e < e_max else 0
            parts.extend([e] * (geq[e - 1] - nxt))
        lambdas[p] = parts  # descending exponents
    rank = max(len(v) for v in lambdas.values())
    factors = []
    for i in range(rank):
        d = 1
        for p, parts in lambdas.items():
            padded = [0] * (rank - len(parts)) + sorted(parts)
            d *= p ** padded[i]
        factors.append(d)
    return [f for f in factors if f > 1]


# ------------------------------------------------------- quotients, subgroups


def _quotient(G: FiniteGroup, normal_ids) -> tuple[FiniteGroup, np.ndarray]:
    """Quotient by a normal subgroup; returns (Q, coset label per element)."""
    n = G.order
    N_arr = np.array(sorted(normal_ids), dtype=np.int32)
    cls = np.full(n, -1, dtype=np.int32)
    reps = []
    for g in range(n):
        if cls[g] == -1:
            cls[G.table[g, N_arr]] = len(reps)
            reps.append(g)
    reps_arr = np.array(reps, dtype=np.int32)
    Qt = np.empty((len(reps), len(reps)), dtype=np.int32)
    for i, gi in enumerate(reps):
        Qt[i] = cls[G.table[gi, reps_arr]]
    return FiniteGroup(Qt, validate=None), cls


def normal_abelian_index3_subgroups(G: FiniteGroup) -> list[tuple[int, ...]]:
    """All normal abelian subgroups of index exactly 3, as sorted id tuples.

    Any index-3 normal subgroup contains the derived subgroup and the cubes,
    so the candidates are exactly the preimages of hyperplanes in the
    elementary 3-group G / <derived, cubes>; only the abelian ones survive.
    """
    n = G.order
    if n % 3 != 0:
        return []
    D = derived_subgroup(G)
    Q, cls = _quotient(G, D)
    cubes = sorted({Q.power(q, 3) for q in range(Q.order)})
    W = Q.generate(cubes)
    E, cls2 = _quotient(Q, W)
    if E.order == 1:
        return []
    # F_3 coordinates on E via a greedy basis.
    basis = []
    span = {0}
    for x in range(1, E.order):
        if x not in span:
            basis.append(x)
            span = set(E.generate(basis))
    coords = {}
    for vec in itertools.product(range(3), repeat=len(basis)):
        e = 0
        for b, v in zip(basis, vec):
            e = E.mul(e, E.power(b, v))
        coords[e] = vec
    if len(coords) != E.order:
        raise ArithmeticError("3-rank basis failed to span")  # pragma: no cover
    r = len(basis)
    elem_vecs = np.array([coords[int(cls2[cls[g]])] for g in range(n)], dtype=np.int32)
    out = []
    seen = set()
    for f in itertools.product(range(3), repeat=r):
        arr = np.array(f, dtype=np.int32)
        nz = np.nonzero(arr)[0]
        if nz.size == 0 or arr[nz[0]] != 1:
            continue  # zero functional, or not normalized (kernel already seen)
        K = np.nonzero(elem_vecs.dot(arr) % 3 == 0)[0]
        key = K.tobytes()
        if key in seen:
            continue  # pragma: no cover
        seen.add(key)
        sub = G.table[np.ix_(K, K)]
        if np.array_equal(sub, sub.T):
            out.append(tuple(K.tolist()))
    return sorted(out)


def split_over(G: FiniteGroup, normal_ids) -> tuple[int, int, int]:
    """An order-3 complement to a normal index-3 subgroup, or NoSplit.

    Follows the constructive argument: some g outside H has order 3m with m
    coprime to 3 (this is exactly where elements of order 9 can obstruct),
    and then g^m generates a complement.  Raises NoSplit when no such g
    exists, e.g. the mu_3 inside mu_9.
    """
    H = set(int(h) for h in normal_ids)
    if 0 not in H or len(H) * 3 != G.order:
        raise ValueError("expected a subgroup of index exactly 3 containing 0")
    H_arr = np.array(sorted(H), dtype=np.int32)
    closed = np.zeros(G.order, dtype=bool)
    closed[H_arr] = True
    if not closed[G.table[np.ix_(H_arr, H_arr)]].all():
        raise ValueError("ids are not closed under multiplication")
    inv = G.inverses()
    for g in range(G.order):
        if not closed[G.table[G.table[g, H_arr], inv[g]]].all():
            raise ValueError("subgroup is not normal")
    for g in range(G.order):
        if closed[g]:
            continue
        k = G.element_order(g)
        if k % 3 == 0 and (k // 3) % 3 != 0:
            f = G.power(g, k // 3)
            return tuple(sorted((0, f, G.mul(f, f))))
    raise NoSplit("every element outside the subgroup has order divisible by 9")


# ------------------------------------------------------------- isomorphism


def _generating_sequence(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    covered = {0}
    while len(covered) < G.order:
        g = min(x for x in range(G.order) if x not in covered)
        gens.append(g)
        covered = set(G.generate(gens))
    return gens


def _closure_map(G: FiniteGroup, H: FiniteGroup, gen_pairs) -> dict[int, int] | None:
    """Extend gens -> images to the generated subgroup, or None on conflict."""
    f = {0: 0}
    frontier = [0]
    TG, TH = G.table, H.table
    while frontier:
        nxt = []
        for x in frontier:
            fx = f[x]
            for g, h in gen_pairs:
                y = int(TG[x, g])
                fy = int(TH[fx, h])
                cur = f.get(y)
                if cur is None:
                    f[y] = fy
                    nxt.append(y)
                elif cur != fy:
                    return None
        frontier = nxt
    return f


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> list[int] | None:
    """An isomorphism G -> H as an image list, or None.

    Deterministic backtracking over images of a greedy generating sequence,
    pruned by order spectrum, center size, derived-subgroup size, abelian
    invariants, and the conjugation relation between the first two
    generators when it lands inside the first one's cyclic subgroup.
    """
    if G.order != H.order:
        return None
    if element_orders(G) != element_orders(H):
        return None
    ga, ha = G.is_abelian(), H.is_abelian()
    if ga != ha:
        return None
    if ga:
        if abelian_invariants(G) != abelian_invariants(H):
            return None
    else:
        if len(center(G)) != len(center(H)):
            return None
        if len(derived_subgroup(G)) != len(derived_subgroup(H)):
            return None

    gens = _generating_sequence(G)
    ords_G, ords_H = G.orders(), H.orders()
    inv_H = H.inverses()

    # Conjugation exponent between the first two generators, when defined:
    # gens[1]^-1 * gens[0] * gens[1] = gens[0]^c.
    conj_c = None
    if len(gens) >= 2 and not ga:
        x, y = gens[0], gens[1]
        z = G.mul(G.mul(G.inv(y), x), y)
        powers = {}
        p, k = 0, 0
        while True:
            if p in powers:
                break
            powers[p] = k
            p, k = G.mul(p, x), k + 1
        if z in powers:
            conj_c = powers[z]

    # The search itself lives in module-level helpers: a self-recursive
    # closure would form a reference cycle pinning both tables until a full
    # garbage collection, which matters when thousands of pairs are compared
    # in one sweep.
    ctx = (G, H, gens, ords_G, ords_H, inv_H, conj_c)
    return _iso_dfs(ctx, 0, [], {0: 0})


def _iso_candidates(ctx, level: int, f: dict[int, int]) -> np.ndarray:
    _G, H, gens, ords_G, ords_H, inv_H, conj_c = ctx
    g = gens[level]
    mask = np.asarray(ords_H == int(ords_G[g]))
    used = np.zeros(H.order, dtype=bool)
    used[list(f.values())] = True
    mask &= ~used
    cand = np.nonzero(mask)[0]
    if level == 1 and conj_c is not None:
        hx = f[gens[0]]
        hx_c = H.power(hx, conj_c)
        w = H.table[H.table[inv_H[cand], hx], cand]
        cand = cand[w == hx_c]
    return cand


def _iso_dfs(ctx, level: int, gen_pairs, f: dict[int, int] | None):
    G, H, gens, ords_G, ords_H, inv_H, conj_c = ctx
    if level == len(gens):
        if len(f) != G.order:
            return None  # pragma: no cover
        arr = np.full(G.order, -1, dtype=np.int64)
        for a, b in f.items():
            arr[a] = b
        if len(set(f.values())) != G.order:
            return None
        if np.array_equal(arr[G.table], H.table[arr[:, None], arr[None, :]]):
            return arr.tolist()
        return None  # pragma: no cover
    g = gens[level]
    if f is None:
        # Deferred from level 0: a single generator pair maps one cyclic
        # subgroup onto another of the same order and can never conflict,
        # so the cheap conjugation filter runs before any closure map is
        # materialised.  Most mismatched images die right here.
        hx = gen_pairs[0][1]
        cand = np.nonzero(np.asarray(ords_H == int(ords_G[g])))[0]
        hx_c = H.power(hx, conj_c)
        w = H.table[H.table[inv_H[cand], hx], cand]
        cand = cand[w == hx_c]
        if cand.size == 0:
            return None
        f = _closure_map(G, H, gen_pairs)
        used = np.zeros(H.order, dtype=bool)
        used[list(f.values())] = True
        cand = cand[~used[cand]]
    else:
        cand = _iso_candidates(ctx, level, f)
    for h in cand:
        pairs = gen_pairs + [(g, int(h))]
        if level == 0 and conj_c is not None and len(gens) == 2:
            res = _iso_dfs(ctx, 1, pairs, None)
        else:
            f2 = _closure_map(G, H, pairs)
            if f2 is None:
                continue
            res = _iso_dfs(ctx, level + 1, pairs, f2)
        if res is not None:
            return res
    return None


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return find_isomorphism(G, H) is not None


# --------------------------------------------------------- generated closures


def closure_table(identity_item, generators, multiply, canonical, cap: int = 512):
    """Multiplication table of the closure of ``generators`` under ``multiply``.

    ``canonical`` maps an item to a hashable key identifying it up to the
    intended equivalence (e.g. a projective class); it must be constant on
    products with equal factors' keys.  Returns (FiniteGroup, representatives)
    with the identity at index 0.  Raises CapExceeded when the closure would
    exceed ``cap`` elements.

    The full table is assembled from generator actions and word composition,
    so only |closure| * |generators| products are ever multiplied out; a
    deterministic sample of table entries is re-verified against direct
    products as a guard.
    """
    reps = [identity_item]
    index = {canonical(identity_item): 0}
    words: list[list[int]] = [[]]
    perms: list[list[int]] = [[] for _ in generators]
    i = 0
    while i < len(reps):
        item = reps[i]
        for gi, g in enumerate(generators):
            y = multiply(item, g)
            key = canonical(y)
            j = index.get(key)
            if j is None:
                if len(reps) >= cap:
                    raise CapExceeded(f"closure exceeded cap of {cap} elements")
                j = len(reps)
                index[key] = j
                reps.append(y)
                words.append(words[i] + [gi])
            perms[gi].append(j)
        i += 1
    size = len(reps)
    perms_np = [np.array(p, dtype=np.int32) for p in perms]
    T = np.empty((size, size), dtype=np.int32)
    base = np.arange(size, dtype=np.int32)
    for j in range(size):
        v = base
        for gi in words[j]:
            v = perms_np[gi][v]
        T[:, j] = v
    group = FiniteGroup(T, validate="basic")
    rng = random.Random(7)
    for _ in range(min(32, size * size)):
        a, b = rng.randrange(size), rng.randrange(size)
        direct = canonical(multiply(reps[a], reps[b]))
        if index[direct] != int(T[a, b]):
            raise ArithmeticError("closure table disagrees with direct product")  # pragma: no cover
    return group, reps
