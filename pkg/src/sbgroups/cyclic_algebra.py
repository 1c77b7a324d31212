"""Degree-3 cyclic algebras over exact towers, and unit groups mod scalars.

An algebra instance is L + L*alpha + L*alpha^2 where L is a Tower from
exact_fields, sigma a Galois action of order 3 on L, and alpha satisfies
alpha^3 = a for a fixed nonzero sigma-fixed element a.  Scalars move past
alpha by the rule lam * alpha = alpha * sigma(lam); everything else follows
from bilinearity.  The fixed subfield K of sigma is the scalar field: the
projective class of a unit x is its K*-orbit, and the automorphism-group
computations all happen in the group of such classes.

Elements store their coefficients to the right of the alpha powers, so the
component tuple (l0, l1, l2) means l0 + alpha*l1 + alpha^2*l2.  With that
layout multiply(lam, alpha) carries sigma(lam) in its middle component,
which is the defining relation in the form used everywhere below.

Projective classes get a genuinely canonical form: the class of x is the
Q-subspace K*x of the algebra, encoded as the reduced row echelon form of
a basis of that subspace.  Two elements are K*-proportional exactly when
the subspaces agree, so RREF rows serve as an exact hashable key with no
normalization conventions to maintain.

The witness builders at the bottom assemble the three algebra shapes the
rest of the package consumes: a balanced twist acting on a cyclotomic
layer, the same with an extra central cube root glued in through a radical
layer, and the split order-27 configuration with two anticommuting cube
roots.  ``a`` stays a free parameter (default 2): the group-theoretic
facts checked here depend only on the relations and on scalar membership,
never on the algebra being division, and any closure that would secretly
need divisionness surfaces as a ZeroDivisor instead of a wrong answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact_fields import (
    CyclotomicNumber,
    DivisionByZero,
    GaloisAction,
    Tower,
    TowerElement,
    apply_sigma,
    compose_sigma,
    fixed_field_test,
    sigma_order,
    tower_element_from_vector,
)
from .group_kernel import CapExceeded, FiniteGroup, closure_table
from .residue_arith import crt_combine
from . import semidirect

INFINITE = math.inf

DEFAULT_ORDER_CAP = 512


class ZeroDivisor(ArithmeticError):
    """A nonzero element with no inverse: the instance is not division here."""


def _rref(rows: list[list[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    """Reduced row echelon form over the rationals, zero rows dropped."""
    rows = [list(r) for r in rows]
    n_cols = len(rows[0]) if rows else 0
    pivot_row = 0
    for col in range(n_cols):
        pivot = None
        for r in range(pivot_row, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        inv = Fraction(1, 1) / rows[pivot_row][col]
        rows[pivot_row] = [v * inv for v in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return tuple(tuple(r) for r in rows[:pivot_row])


def _fixed_field_basis(tower: Tower, sigma: GaloisAction) -> tuple[TowerElement, ...]:
    """A Q-basis of the sigma-fixed subfield, via the kernel of sigma - id.

    The coordinate codec is always 3*phi wide (the radical slices are
    forced to zero when the tower has none), while the honest dimension is
    tower.degree; only the first ``dim`` unit vectors denote elements.
    """
    dim = tower.degree
    width = 3 * tower.phi

    def unit(i: int) -> TowerElement:
        vec = [Fraction(0)] * width
        vec[i] = Fraction(1)
        return tower_element_from_vector(tower, vec)

    cols = [
        (apply_sigma(unit(i), sigma) - unit(i)).to_rational_vector() for i in range(dim)
    ]
    # Solve sum_i v_i * cols[i] = 0 by eliminating on the transposed system.
    rows = [[cols[i][r] for i in range(dim)] for r in range(width)]
    pivots: dict[int, int] = {}
    pivot_row = 0
    for col in range(dim):
        pivot = None
        for r in range(pivot_row, width):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        inv = Fraction(1, 1) / rows[pivot_row][col]
        rows[pivot_row] = [v * inv for v in rows[pivot_row]]
        for r in range(width):
            if r != pivot_row and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[pivot_row])]
        pivots[col] = pivot_row
        pivot_row += 1
    out = []
    for free in range(dim):
        if free in pivots:
            continue
        vec = [Fraction(0)] * width
        vec[free] = Fraction(1)
        for col, prow in pivots.items():
            vec[col] = -rows[prow][free]
        out.append(tower_element_from_vector(tower, vec))
    if len(out) * 3 != dim:
        raise ValueError("fixed subfield does not have index 3; sigma is not order 3")
    return tuple(out)


class CyclicAlgebra:
    """L + L*alpha + L*alpha^2 with alpha^3 = a and lam*alpha = alpha*sigma(lam)."""

    __slots__ = ("tower", "sigma", "a", "sig_pows", "fixed_field_basis")

    def __init__(self, tower: Tower, sigma: GaloisAction, a=2):
        if sigma_order(tower, sigma) != 3:
            raise ValueError("sigma must have order exactly 3 on the tower")
        if isinstance(a, (int, Fraction)):
            a = tower.rational(a)
        elif isinstance(a, CyclotomicNumber):
            a = tower.from_base(a)
        if not isinstance(a, TowerElement) or a.tower != tower:
            raise ValueError("a must live in the algebra's tower")
        if a.is_zero():
            raise ValueError("a must be nonzero")
        if not fixed_field_test(a, sigma):
            raise ValueError("a must be fixed by sigma")
        identity = GaloisAction(1, 0)
        object.__setattr__(self, "tower", tower)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "a", a)
        object.__setattr__(
            self,
            "sig_pows",
            (identity, sigma, compose_sigma(tower, sigma, sigma)),
        )
        object.__setattr__(self, "fixed_field_basis", _fixed_field_basis(tower, sigma))

    def __setattr__(self, *args):
        raise AttributeError("CyclicAlgebra is immutable")

    def __eq__(self, other):
        if not isinstance(other, CyclicAlgebra):
            return NotImplemented
        return (
            self.tower == other.tower
            and self.sigma == other.sigma
            and self.a == other.a
        )

    def __hash__(self):
        return hash((self.tower, self.sigma, self.a))

    def __repr__(self):
        return f"CyclicAlgebra(tower={self.tower!r}, sigma={self.sigma!r}, a={self.a!r})"

    @property
    def dimension(self) -> int:
        """Dimension over Q: three tower copies."""
        return 3 * self.tower.degree

    def element(self, l0, l1, l2) -> "AlgebraElement":
        comps = []
        for c in (l0, l1, l2):
            if isinstance(c, (int, Fraction)):
                c = self.tower.rational(c)
            elif isinstance(c, CyclotomicNumber):
                c = self.tower.from_base(c)
            comps.append(c)
        return AlgebraElement(self, tuple(comps))

    def zero(self) -> "AlgebraElement":
        z = self.tower.zero()
        return AlgebraElement(self, (z, z, z))

    def one(self) -> "AlgebraElement":
        z = self.tower.zero()
        return AlgebraElement(self, (self.tower.one(), z, z))

    def alpha(self) -> "AlgebraElement":
        z = self.tower.zero()
        return AlgebraElement(self, (z, self.tower.one(), z))

    def embed(self, lam) -> "AlgebraElement":
        """The tower element lam as a degree-0 algebra element."""
        return self.element(lam, 0, 0)


class AlgebraElement:
    """l0 + alpha*l1 + alpha^2*l2 with tower coefficients on the right."""

    __slots__ = ("algebra", "comps")

    def __init__(self, algebra: CyclicAlgebra, comps):
        comps = tuple(comps)
        if len(comps) != 3:
            raise ValueError("need exactly three components")
        for c in comps:
            if not isinstance(c, TowerElement) or c.tower != algebra.tower:
                raise ValueError("components must be elements of the algebra's tower")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "comps", comps)

    def __setattr__(self, *args):
        raise AttributeError("AlgebraElement is immutable")

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def is_scalar(self) -> bool:
        """True when the element lies in the scalar field K = L^sigma."""
        if not (self.comps[1].is_zero() and self.comps[2].is_zero()):
            return False
        return fixed_field_test(self.comps[0], self.algebra.sigma)

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            if other.algebra != self.algebra:
                raise ValueError("algebra mismatch")
            return other
        if isinstance(other, (int, Fraction, CyclotomicNumber, TowerElement)):
            return self.algebra.embed(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgebraElement(
            self.algebra, tuple(a + b for a, b in zip(self.comps, o.comps))
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgebraElement(
            self.algebra, tuple(a - b for a, b in zip(self.comps, o.comps))
        )

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return AlgebraElement(self.algebra, tuple(-a for a in self.comps))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        A = self.algebra
        zero = A.tower.zero()
        z = [zero, zero, zero]
        for i in range(3):
            xi = self.comps[i]
            if xi.is_zero():
                continue
            for j in range(3):
                yj = o.comps[j]
                if yj.is_zero():
                    continue
                # alpha^i * x * alpha^j * y = alpha^(i+j) * sigma^j(x) * y
                term = apply_sigma(xi, A.sig_pows[j]) * yj
                k = i + j
                if k >= 3:
                    k -= 3
                    term = term * A.a
                z[k] = z[k] + term
        return AlgebraElement(A, tuple(z))

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self

    def __pow__(self, e: int):
        if e < 0:
            return invert(self) ** (-e)
        result = self.algebra.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber, TowerElement)):
            other = self.algebra.embed(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra == other.algebra and self.comps == other.comps

    def __hash__(self):
        return hash((self.algebra, self.comps))

    def __bool__(self):
        return not self.is_zero()

    def to_rational_vector(self) -> tuple[Fraction, ...]:
        """Flatten over the Q-basis of the algebra, alpha-degree outermost."""
        out = []
        for c in self.comps:
            out.extend(c.to_rational_vector())
        return tuple(out)

    def __repr__(self):
        return f"AlgebraElement{self.comps!r}"


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Product in the algebra; both factors must share the instance."""
    if not isinstance(x, AlgebraElement):
        raise TypeError("multiply expects algebra elements")
    return x * y


def invert(x: AlgebraElement) -> AlgebraElement:
    """Two-sided inverse of x, found by solving x * y = 1 over the tower.

    Left multiplication by x is tower-linear on the component vector, so
    the inverse is a 3x3 exact linear solve.  A singular system means x is
    a zero divisor, which is reported rather than patched over: it can
    only happen when the instance is split at x.
    """
    if x.is_zero():
        raise DivisionByZero("zero is not invertible")
    A = x.algebra
    x0, x1, x2 = x.comps
    s1, s2 = A.sig_pows[1], A.sig_pows[2]
    a = A.a
    rows = [
        [x0, apply_sigma(x2, s1) * a, apply_sigma(x1, s2) * a],
        [x1, apply_sigma(x0, s1), apply_sigma(x2, s2) * a],
        [x2, apply_sigma(x1, s1), apply_sigma(x0, s2)],
    ]
    rhs = [A.tower.one(), A.tower.zero(), A.tower.zero()]
    for col in range(3):
        pivot = None
        for r in range(col, 3):
            if not rows[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            raise ZeroDivisor("element is a zero divisor in this instance")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        rhs[col], rhs[pivot] = rhs[pivot], rhs[col]
        inv_p = rows[col][col].inverse()
        rows[col] = [inv_p * v for v in rows[col]]
        rhs[col] = inv_p * rhs[col]
        for r in range(3):
            if r != col and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[col])]
                rhs[r] = rhs[r] - f * rhs[col]
    y = AlgebraElement(A, tuple(rhs))
    if (x * y) != A.one() or (y * x) != A.one():
        raise ZeroDivisor("element is a one-sided zero divisor")  # pragma: no cover
    return y


# --------------------------------------------------------- projective classes


def _projective_key(x: AlgebraElement) -> tuple:
    """Canonical key of the class K*x: the RREF of that Q-subspace."""
    if x.is_zero():
        raise DivisionByZero("zero has no projective class")
    A = x.algebra
    rows = []
    for kappa in A.fixed_field_basis:
        scaled = AlgebraElement(A, tuple(kappa * c for c in x.comps))
        rows.append(list(scaled.to_rational_vector()))
    return _rref(rows)


class ProjectiveClass:
    """An element of A*/K*: an algebra element up to nonzero scalar factors."""

    __slots__ = ("representative", "_key")

    def __init__(self, representative: AlgebraElement):
        if not isinstance(representative, AlgebraElement):
            raise TypeError("a projective class wraps an algebra element")
        if representative.is_zero():
            raise DivisionByZero("zero has no projective class")
        object.__setattr__(self, "representative", representative)
        object.__setattr__(self, "_key", _projective_key(representative))

    def __setattr__(self, *args):
        raise AttributeError("ProjectiveClass is immutable")

    @property
    def algebra(self) -> CyclicAlgebra:
        return self.representative.algebra

    def __eq__(self, other):
        if not isinstance(other, ProjectiveClass):
            return NotImplemented
        return self.algebra == other.algebra and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __mul__(self, other):
        if not isinstance(other, ProjectiveClass):
            return NotImplemented
        return ProjectiveClass(self.representative * other.representative)

    def inverse(self) -> "ProjectiveClass":
        return ProjectiveClass(invert(self.representative))

    def is_identity(self) -> bool:
        return self.representative.is_scalar()

    def __repr__(self):
        return f"ProjectiveClass({self.representative!r})"


def order_mod_scalars(x: AlgebraElement, cap: int = DEFAULT_ORDER_CAP):
    """Least k >= 1 with x^k in K, or INFINITE once the cap is passed.

    Powers of a zero divisor can only march toward zero, never into K*,
    so hitting zero raises instead of miscounting.
    """
    p = x
    for k in range(1, cap + 1):
        if p.is_zero():
            raise ZeroDivisor("element is a zero divisor; no order mod scalars")
        if p.is_scalar():
            return k
        p = p * x
    return INFINITE


def generated_group_mod_scalars(
    gens, cap: int = DEFAULT_ORDER_CAP
) -> tuple[FiniteGroup, list[ProjectiveClass]]:
    """Closure of the classes of ``gens`` in A*/K*, as a multiplication table.

    Returns (group, classes) with classes[i] the projective class of table
    index i and the identity at index 0.  Raises CapExceeded when the
    closure grows past ``cap``, and ZeroDivisor if any generator fails to
    invert (the closure of non-units is not a group).
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    A = gens[0].algebra
    for g in gens:
        if not isinstance(g, AlgebraElement) or g.algebra != A:
            raise ValueError("generators must share one algebra instance")
        invert(g)
    group, reps = closure_table(
        A.one(), gens, lambda u, v: u * v, _projective_key, cap=cap
    )
    return group, [ProjectiveClass(r) for r in reps]


# ------------------------------------------------------------------ witnesses


@dataclass(frozen=True)
class BalancedWitness:
    """mu_n : mu_3 realized inside one cyclic algebra: xi spans the cyclic
    part, alpha the twisting complement."""

    algebra: CyclicAlgebra
    xi: AlgebraElement
    alpha: AlgebraElement
    n: int
    d: int

    def classes(self) -> tuple[ProjectiveClass, ProjectiveClass]:
        return ProjectiveClass(self.xi), ProjectiveClass(self.alpha)

    def group(self, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
        return generated_group_mod_scalars([self.xi, self.alpha], cap=cap)[0]


@dataclass(frozen=True)
class Mu3ProductWitness:
    """mu_3 x (mu_n : mu_3) in one algebra: tau is the extra central cube
    root, living in a radical layer so that tau * alpha = omega * alpha * tau."""

    algebra: CyclicAlgebra
    xi: AlgebraElement
    alpha: AlgebraElement
    tau: AlgebraElement
    n: int
    d: int

    def classes(self) -> tuple[ProjectiveClass, ProjectiveClass, ProjectiveClass]:
        return (
            ProjectiveClass(self.xi),
            ProjectiveClass(self.alpha),
            ProjectiveClass(self.tau),
        )

    def group(self, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
        return generated_group_mod_scalars([self.xi, self.alpha, self.tau], cap=cap)[0]


@dataclass(frozen=True)
class HeisenbergWitness:
    """Two cube roots u, v with u*v = omega * v*u; their classes span mu_3^2."""

    algebra: CyclicAlgebra
    u: AlgebraElement
    v: AlgebraElement

    def classes(self) -> tuple[ProjectiveClass, ProjectiveClass]:
        return ProjectiveClass(self.u), ProjectiveClass(self.v)

    def group(self, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
        return generated_group_mod_scalars([self.u, self.v], cap=cap)[0]


def _require_balanced(n: int, d: int):
    if not semidirect.is_balanced(n, d):
        raise ValueError(f"twist {d} is not balanced mod {n}")


def build_balanced_witness(n: int, d: int, a=2) -> BalancedWitness:
    """Algebra elements whose classes generate mu_n : mu_3 with twist d.

    For n > 1 the tower is the n-th cyclotomic field with sigma: zeta ->
    zeta^d; balancedness makes K meet the roots of unity trivially, which
    is what gives xi-hat its full order n.  For n = 1 the cyclotomic layer
    degenerates, so the cubic extension is taken radical instead and the
    witness group is the mu_3 spanned by alpha-hat alone.
    """
    _require_balanced(n, d)
    if n == 1:
        tower = Tower(3, Fraction(2))
        sigma = GaloisAction(1, 1)
        algebra = CyclicAlgebra(tower, sigma, a)
        return BalancedWitness(algebra, algebra.one(), algebra.alpha(), 1, 0)
    tower = Tower(n)
    sigma = GaloisAction(d % n, 0)
    algebra = CyclicAlgebra(tower, sigma, a)
    xi = algebra.embed(tower.zeta())
    return BalancedWitness(algebra, xi, algebra.alpha(), n, d % n)


def build_mu3_product_witness(n: int, d: int, a=2) -> Mu3ProductWitness:
    """Extend the balanced witness by a central cube root tau with
    tau * alpha = omega * alpha * tau.

    The tower has conductor 3n and a cube root of 2; sigma fixes omega,
    acts as d on the order-n part, and twists the radical by omega.  The
    class of tau then commutes with everything mod scalars, and tau-hat
    times xi-hat has order 3n: the largest element order these groups
    reach.
    """
    _require_balanced(n, d)
    if n == 1:
        big_d = 1
    else:
        big_d = int(crt_combine([(d % n, n), (1, 3)]))
    tower = Tower(3 * n, Fraction(2))
    sigma = GaloisAction(big_d, 1)
    algebra = CyclicAlgebra(tower, sigma, a)
    xi = algebra.embed(tower.zeta(3))
    tau = algebra.embed(tower.radical())
    return Mu3ProductWitness(algebra, xi, algebra.alpha(), tau, n, d % n if n > 1 else 0)


def build_heisenberg_witness(a=2, b=3) -> HeisenbergWitness:
    """The split order-27 configuration: u = cube root of b in the tower,
    v = alpha with alpha^3 = a, over the third cyclotomic field.

    u and v commute only up to omega, so their images in A*/K* commute on
    the nose and generate mu_3 x mu_3 while the preimage upstairs is the
    nonabelian group of order 27 and exponent 3.
    """
    tower = Tower(3, Fraction(b))
    sigma = GaloisAction(1, 1)
    algebra = CyclicAlgebra(tower, sigma, a)
    return HeisenbergWitness(algebra, algebra.embed(tower.radical()), algebra.alpha())
