"""Exact 3x3 matrices over cyclotomic fields and their projective classes.

This is the matrix side of the story: the generators built abstractly in
cyclic_algebra also live inside PGL_3 once the algebra is split, and the
fixed-point geometry of a finite-order projective transformation is read
off the eigenvalue multiplicities of any lift.  Everything is exact; the
multiplicity pattern comes from the degree of gcd(chi, chi') rather than
from root-finding, so no numerical step ever enters.

The scan functions at the bottom machine-check the arithmetic facts the
classification leans on: order-3 units mod p exist exactly for p = 1 mod
3, the eigenvalue-ratio relation among 27th roots of unity collapses onto
triples with equal cubes, and every scalar-free mu_p x mu_p of diagonal
projective matrices contains an element whose fixed locus is a line plus
an isolated point.  Reports are plain lists of CheckEntry rows so the CLI
can serialize them untouched.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .exact_fields import CyclotomicNumber
from .group_kernel import FiniteGroup, closure_table
from .residue_arith import NotACubeRoot

INFINITE = math.inf


class NotFiniteOrder(ValueError):
    """The supplied order hint did not kill the projective class."""


def _coerce_entry(m: int, value) -> CyclotomicNumber:
    if isinstance(value, CyclotomicNumber):
        if value.m != m:
            raise ValueError(f"entry conductor {value.m} does not match matrix conductor {m}")
        return value
    if isinstance(value, (int, Fraction)):
        return CyclotomicNumber.from_rational(m, value)
    raise ValueError(f"cannot use {value!r} as a matrix entry")


class ExactMatrix3:
    """A 3x3 matrix with entries in one cyclotomic field, conductor m."""

    __slots__ = ("m", "rows")

    def __init__(self, m: int, rows):
        if m < 1:
            raise ValueError("conductor must be positive")
        rows = tuple(tuple(row) for row in rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("need a 3x3 array of entries")
        rows = tuple(tuple(_coerce_entry(m, v) for v in row) for row in rows)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, *args):
        raise AttributeError("ExactMatrix3 is immutable")

    @classmethod
    def identity(cls, m: int = 1) -> "ExactMatrix3":
        return cls.diagonal(m, (1, 1, 1))

    @classmethod
    def diagonal(cls, m: int, entries) -> "ExactMatrix3":
        e = list(entries)
        if len(e) != 3:
            raise ValueError("need three diagonal entries")
        return cls(m, [[e[0], 0, 0], [0, e[1], 0], [0, 0, e[2]]])

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix3):
            return NotImplemented
        return self.m == other.m and self.rows == other.rows

    def __hash__(self):
        return hash((self.m, self.rows))

    def __mul__(self, other):
        if not isinstance(other, ExactMatrix3):
            return NotImplemented
        if other.m != self.m:
            raise ValueError("conductor mismatch in matrix product")
        zero = CyclotomicNumber.zero(self.m)
        out = []
        for i in range(3):
            row = []
            for j in range(3):
                acc = zero
                for k in range(3):
                    x = self.rows[i][k]
                    if x.is_zero():
                        continue
                    y = other.rows[k][j]
                    if y.is_zero():
                        continue
                    acc = acc + x * y
                row.append(acc)
            out.append(row)
        return ExactMatrix3(self.m, out)

    def __pow__(self, e: int) -> "ExactMatrix3":
        if e < 0:
            raise ValueError("negative matrix powers are not provided; invert projectively")
        result = ExactMatrix3.identity(self.m)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_scalar(self) -> bool:
        r = self.rows
        if any(not r[i][j].is_zero() for i in range(3) for j in range(3) if i != j):
            return False
        return r[0][0] == r[1][1] and r[1][1] == r[2][2]

    def trace(self) -> CyclotomicNumber:
        r = self.rows
        return r[0][0] + r[1][1] + r[2][2]

    def determinant(self) -> CyclotomicNumber:
        r = self.rows
        return (
            r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
        )

    def adjugate(self) -> "ExactMatrix3":
        r = self.rows

        def cof(i, j):
            rs = [k for k in range(3) if k != i]
            cs = [k for k in range(3) if k != j]
            minor = r[rs[0]][cs[0]] * r[rs[1]][cs[1]] - r[rs[0]][cs[1]] * r[rs[1]][cs[0]]
            return minor if (i + j) % 2 == 0 else -minor

        # adjugate = transposed cofactor matrix
        return ExactMatrix3(self.m, [[cof(j, i) for j in range(3)] for i in range(3)])

    def char_poly_coefficients(self):
        """(trace, sum of principal 2x2 minors, determinant); the
        characteristic polynomial is x^3 - t*x^2 + s*x - d."""
        r = self.rows
        s = (
            (r[0][0] * r[1][1] - r[0][1] * r[1][0])
            + (r[0][0] * r[2][2] - r[0][2] * r[2][0])
            + (r[1][1] * r[2][2] - r[1][2] * r[2][1])
        )
        return self.trace(), s, self.determinant()

    def __repr__(self):
        return f"ExactMatrix3(m={self.m}, rows={self.rows!r})"


def _poly_degree(p) -> int:
    for i in range(len(p) - 1, -1, -1):
        if not p[i].is_zero():
            return i
    return -1


def _poly_remainder(num, den, zero):
    num = list(num)
    dn = _poly_degree(den)
    inv_lead = den[dn].inverse()
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c.is_zero():
            continue
        f = c * inv_lead
        for k in range(dn + 1):
            num[i - dn + k] = num[i - dn + k] - f * den[k]
    return num[:dn] if dn > 0 else [zero]


def _repeated_eigenvalue_count(lift: ExactMatrix3) -> int:
    """deg gcd(chi, chi'): 0 = all eigenvalues distinct, 1 = one double,
    2 = a triple eigenvalue.  Exact, and no roots are ever extracted."""
    m = lift.m
    zero = CyclotomicNumber.zero(m)
    one = CyclotomicNumber.one(m)
    t, s, d = lift.char_poly_coefficients()
    f = [-d, s, -t, one]
    g = [s, -(t + t), CyclotomicNumber.from_rational(m, 3)]
    while _poly_degree(g) >= 0:
        f, g = g, _poly_remainder(f, g, zero)
    return _poly_degree(f)


class ProjectiveMatrix:
    """An invertible ExactMatrix3 up to nonzero scalar multiples.

    The canonical form divides through by the first nonzero entry in
    row-major order; since scalars range over the whole coefficient
    field, that single normalization already decides equality.
    """

    __slots__ = ("representative", "_key")

    def __init__(self, representative: ExactMatrix3):
        if not isinstance(representative, ExactMatrix3):
            raise TypeError("a projective matrix wraps an ExactMatrix3")
        if representative.determinant().is_zero():
            raise ValueError("matrix is singular; no projective class")
        pivot = None
        for i in range(3):
            for j in range(3):
                if not representative.rows[i][j].is_zero():
                    pivot = representative.rows[i][j]
                    break
            if pivot is not None:
                break
        inv = pivot.inverse()
        key = tuple(
            (inv * representative.rows[i][j]).coeffs for i in range(3) for j in range(3)
        )
        object.__setattr__(self, "representative", representative)
        object.__setattr__(self, "_key", (representative.m, key))

    def __setattr__(self, *args):
        raise AttributeError("ProjectiveMatrix is immutable")

    @property
    def m(self) -> int:
        return self.representative.m

    def __eq__(self, other):
        if not isinstance(other, ProjectiveMatrix):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __mul__(self, other):
        if not isinstance(other, ProjectiveMatrix):
            return NotImplemented
        return ProjectiveMatrix(self.representative * other.representative)

    def __pow__(self, e: int) -> "ProjectiveMatrix":
        if e < 0:
            return self.inverse() ** (-e)
        return ProjectiveMatrix(self.representative ** e)

    def inverse(self) -> "ProjectiveMatrix":
        # the adjugate is det(M) * M^-1, which is the same projective class
        return ProjectiveMatrix(self.representative.adjugate())

    def is_identity(self) -> bool:
        return self.representative.is_scalar()

    def __repr__(self):
        return f"ProjectiveMatrix({self.representative!r})"


@dataclass(frozen=True)
class FixedPointProfile:
    """Shape of the fixed locus of a finite-order projective map of the
    plane, read off eigenvalue multiplicities of a lift."""

    kind: str
    description: str = ""


THREE_POINTS = FixedPointProfile("ThreePoints")
POINT_AND_LINE = FixedPointProfile("PointAndLine")
IDENTITY_PROFILE = FixedPointProfile("Identity")


def fixed_point_profile(mat: ProjectiveMatrix, finite_order_hint: int) -> FixedPointProfile:
    """Classify the fixed locus of ``mat`` on the projective plane.

    ``finite_order_hint`` must be an exponent that trivializes the class
    (any multiple of its order); it is verified by binary powering and a
    wrong hint raises NotFiniteOrder.  Distinct eigenvalues of a lift mean
    three isolated fixed points, a double eigenvalue means a fixed line
    plus an isolated point, a scalar lift is the identity.
    """
    if not isinstance(mat, ProjectiveMatrix):
        raise TypeError("fixed_point_profile expects a ProjectiveMatrix")
    if finite_order_hint < 1:
        raise ValueError("the order hint must be a positive integer")
    lift = mat.representative
    if not (lift ** finite_order_hint).is_scalar():
        raise NotFiniteOrder(
            f"the class is not trivialized by exponent {finite_order_hint}"
        )
    repeated = _repeated_eigenvalue_count(lift)
    if repeated == 0:
        return THREE_POINTS
    if repeated == 1:
        return POINT_AND_LINE
    if lift.is_scalar():
        return IDENTITY_PROFILE
    # a verified finite order forces diagonalizability, so a triple
    # eigenvalue can only belong to a scalar lift
    return FixedPointProfile(  # pragma: no cover
        "Degenerate", "triple eigenvalue on a non-scalar lift"
    )


# ------------------------------------------------------- split representation


def split_representation(n: int, d: int, a=1) -> tuple[ProjectiveMatrix, ProjectiveMatrix]:
    """Matrix images of the two algebra generators once the algebra splits.

    xi becomes diag(zeta, zeta^d, zeta^(d^2)) and alpha the cyclic shift
    with ``a`` in its upper right corner, so that xi * alpha = alpha *
    xi^d and alpha^3 = a projectively.  Over the split field the scalar
    constant ``a`` is a free choice; the class group generated is the same
    for every nonzero value.
    """
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    a = Fraction(a)
    if a == 0:
        raise ValueError("a must be nonzero")
    d = d % n
    if math.gcd(d, n) != 1 or pow(d, 3, n) != 1 % n:
        raise NotACubeRoot(f"{d} is not a cube root of unity mod {n}")
    zeta = CyclotomicNumber.zeta(n)
    xi = ExactMatrix3.diagonal(n, (zeta, zeta ** d, zeta ** (d * d % n)))
    alpha = ExactMatrix3(n, [[0, 0, a], [1, 0, 0], [0, 1, 0]])
    return ProjectiveMatrix(xi), ProjectiveMatrix(alpha)


def projective_order(mat: ProjectiveMatrix, cap: int = 512):
    """Least k >= 1 with mat^k trivial, or INFINITE past the cap."""
    p = mat
    for k in range(1, cap + 1):
        if p.is_identity():
            return k
        p = p * mat
    return INFINITE


def generated_projective_group(mats, cap: int = 512) -> tuple[FiniteGroup, list[ProjectiveMatrix]]:
    """Closure of projective matrix classes as a finite group table.

    Returns (group, classes) with classes[i] the projective matrix at
    table index i; the identity sits at index 0.  CapExceeded propagates
    from the closure when the generated group is larger than ``cap``.
    """
    mats = list(mats)
    if not mats:
        raise ValueError("need at least one generator")
    m = mats[0].m
    for g in mats:
        if not isinstance(g, ProjectiveMatrix) or g.m != m:
            raise ValueError("generators must be projective matrices over one conductor")
    identity = ProjectiveMatrix(ExactMatrix3.identity(m))
    group, reps = closure_table(
        identity, mats, lambda u, v: u * v, lambda pm: pm._key, cap=cap
    )
    return group, reps


# ------------------------------------------------------------ scan reports


@dataclass(frozen=True)
class CheckEntry:
    """One row of a verification report."""

    case: str
    verdict: bool
    witness: object = None

    def to_dict(self) -> dict:
        return {"case": self.case, "verdict": self.verdict, "witness": self.witness}


def report_to_json(entries) -> str:
    return json.dumps([e.to_dict() for e in entries], sort_keys=True)


def _primes_up_to(bound: int) -> list[int]:
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(bound ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(2, bound + 1) if sieve[p]]


def scan_order3_units(p_max: int) -> list[CheckEntry]:
    """For each prime p <= p_max, brute-force whether a unit of order 3
    exists mod p and compare with the congruence p = 1 mod 3.

    One entry per prime; the witness records p mod 3 and the smallest
    order-3 unit found (None when there is none).  Every verdict should
    be True: the existence of an order-3 unit is equivalent to p = 1 mod
    3, with p = 3 on the empty side since its unit group has order 2.
    """
    if not 2 <= p_max <= 10_000:
        raise ValueError("p_max must be between 2 and 10000")
    entries = []
    for p in _primes_up_to(p_max):
        unit = None
        for x in range(2, p):
            if pow(x, 3, p) == 1:
                unit = x
                break
        entries.append(
            CheckEntry(
                case=f"p={p}",
                verdict=(unit is not None) == (p % 3 == 1),
                witness={"p_mod_3": p % 3, "order3_unit": unit},
            )
        )
    return entries


def scan_root27_triples() -> list[CheckEntry]:
    """Exhaust all triples of 27th roots of unity and confirm that the
    cyclically scaled ratio relation collapses onto equal cubes.

    For a triple (x1, x2, x3) form the ratios r1 = x2/x1, r2 = x3/x2,
    r3 = x1/x3.  Whenever r1 = u*r2 = u^2*r3 for some cube root of unity
    u, the triple must satisfy x1^3 = x2^3 = x3^3; in particular no triple
    with pairwise distinct cubes admits such a relabeling.  This is the
    arithmetic engine behind excluding order-9 elements: an order-9 class
    would need exactly such a triple with distinct cubes.
    """
    zpow = [CyclotomicNumber.zeta(27, k) for k in range(27)]
    total = 0
    distinct_cubes = 0
    relation_hits = 0
    trivial_scaling_hits = 0
    trivial_scaling_equal = 0
    counterexamples = []
    for e1, e2, e3 in itertools.product(range(27), repeat=3):
        total += 1
        cubes = {3 * e1 % 27, 3 * e2 % 27, 3 * e3 % 27}
        if len(cubes) == 3:
            distinct_cubes += 1
        s = (e2 - e1) % 27
        t = (e3 - e2) % 27
        u = (e1 - e3) % 27
        hit = None
        for v in (0, 1, 2):
            if zpow[s] == zpow[(9 * v + t) % 27] and zpow[s] == zpow[(18 * v + u) % 27]:
                hit = v
                break
        if hit is None:
            continue
        relation_hits += 1
        if hit == 0:
            trivial_scaling_hits += 1
            if len(cubes) == 1:
                trivial_scaling_equal += 1
        if len(cubes) != 1:
            counterexamples.append((e1, e2, e3, hit))
    return [
        CheckEntry("27th-root triples scanned", total == 27 ** 3, total),
        CheckEntry(
            "triples with pairwise distinct cubes",
            distinct_cubes + (total - distinct_cubes) == total,
            {"admissible": distinct_cubes, "flagged_equal_cube": total - distinct_cubes},
        ),
        CheckEntry(
            "scaled ratio relation forces equal cubes",
            not counterexamples,
            {"relation_triples": relation_hits, "with_distinct_cubes": len(counterexamples)},
        ),
        CheckEntry(
            "trivial scaling subcase forces equal cubes",
            trivial_scaling_hits == trivial_scaling_equal,
            {"relation_triples": trivial_scaling_hits},
        ),
        CheckEntry("counterexamples", not counterexamples, counterexamples),
    ]


def scan_diagonal_subgroups(p: int) -> list[CheckEntry]:
    """Scan every scalar-free mu_p x mu_p of diagonal projective matrices
    with p-th-root-of-unity entries for a line-plus-point element.

    Generator pairs run over all non-scalar exponent vectors in (Z/p)^3;
    a pair spans a valid subgroup when it is independent and its span
    misses the scalar diagonal.  For each distinct subgroup the scan
    looks for an element with exactly two equal exponents, whose matrix
    fixes a line and an isolated point.  A second pass ties exponent
    patterns to exact fixed-point profiles on sample matrices, checking
    that a fixed locus beyond three points always comes from a repeated
    eigenvalue.
    """
    if p not in (2, 3, 5, 7, 11, 13):
        raise ValueError("p must be a prime at most 13")
    vectors = [
        v
        for v in itertools.product(range(p), repeat=3)
        if any(v) and not (v[0] == v[1] == v[2])
    ]
    inverse = [0] + [pow(x, p - 2, p) for x in range(1, p)]
    pairs_scanned = 0
    spans: dict[tuple, tuple] = {}
    for i in range(len(vectors)):
        a1, b1, c1 = vectors[i]
        for j in range(i + 1, len(vectors)):
            a2, b2, c2 = vectors[j]
            pairs_scanned += 1
            n1 = (b1 * c2 - c1 * b2) % p
            n2 = (c1 * a2 - a1 * c2) % p
            n3 = (a1 * b2 - b1 * a2) % p
            if n1 == 0 and n2 == 0 and n3 == 0:
                continue  # dependent: the pair generates a cyclic group
            if (n1 + n2 + n3) % p == 0:
                continue  # the span contains the scalar diagonal
            f = inverse[n1 if n1 else (n2 if n2 else n3)]
            key = (n1 * f % p, n2 * f % p, n3 * f % p)
            if key not in spans:
                spans[key] = (vectors[i], vectors[j])

    zeta = CyclotomicNumber.zeta(p)
    missing = []
    scalar_violations = 0
    profile_checks = 0
    profiles_consistent = True
    for key in sorted(spans):
        g, h = spans[key]
        witness = None
        sample_distinct = None
        for x in range(p):
            for y in range(p):
                if x == 0 and y == 0:
                    continue
                e = tuple((x * g[k] + y * h[k]) % p for k in range(3))
                if e[0] == e[1] == e[2]:
                    scalar_violations += 1
                elif e[0] == e[1] or e[0] == e[2] or e[1] == e[2]:
                    if witness is None:
                        witness = e
                elif sample_distinct is None:
                    sample_distinct = e
        if witness is None:
            missing.append(key)
            continue
        for exponents, want in ((witness, POINT_AND_LINE), (sample_distinct, THREE_POINTS)):
            if exponents is None:
                continue  # mod 2 three exponents can never be pairwise distinct
            mat = ProjectiveMatrix(
                ExactMatrix3.diagonal(p, tuple(zeta ** e for e in exponents))
            )
            profile_checks += 1
            if fixed_point_profile(mat, p) != want:
                profiles_consistent = False
    return [
        CheckEntry(f"generator pairs scanned mod {p}", True, pairs_scanned),
        CheckEntry(
            "independent scalar-free diagonal subgroups",
            len(spans) == p * p and scalar_violations == 0,
            {"subgroups": len(spans), "scalar_violations": scalar_violations},
        ),
        CheckEntry(
            "every subgroup has a line-plus-point element",
            not missing,
            {"verified": len(spans) - len(missing), "missing": missing},
        ),
        CheckEntry(
            "fixed locus beyond three points needs a repeated eigenvalue",
            profiles_consistent,
            {"profiles_checked": profile_checks},
        ),
    ]
