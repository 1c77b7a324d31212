"""Exact arithmetic in Q(zeta_m) and in the radical towers Q(zeta_m)(cbrt(c)).

Every number is a vector of Fractions over an explicit basis, so equality
is decidable and nothing here touches floating point.  A cyclotomic value
lives in Q[x]/Phi_m(x) with basis 1, zeta, ..., zeta^(phi(m)-1); a tower
element adds a cube root t of a fixed rational c that is not a rational
cube, with basis 1, t, t^2 over the cyclotomic layer.

Irreducibility of t^3 - c over Q(zeta_m) comes for free from c being a
rational non-cube: a root would generate a degree-3 subfield of an abelian
extension of Q, forcing that subfield to be normal over Q, while Q(cbrt(c))
style fields never are.

Galois actions are pairs (d, twist): zeta goes to zeta^d, and t goes to
omega^twist * t where omega = zeta^(m/3).  The twist therefore needs 3 | m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import residue_arith


class DivisionByZero(ZeroDivisionError):
    """Division by the zero element of a field layer."""


class MissingOmega(ValueError):
    """A twisted action needs a primitive cube root of unity, so 3 | m."""


# --------------------------------------------------------------- polynomials
# Small helpers on ascending coefficient lists.  Integer lists for the
# cyclotomic polynomials themselves, Fraction lists in the inverse routine.


def _int_poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials, den monic."""
    num = list(num)
    k = len(den) - 1
    out = [0] * (len(num) - k)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + k]
        out[i] = c
        if c:
            for j in range(k + 1):
                num[i + j] -= c * den[j]
    if any(num[:k]):
        raise ArithmeticError("division was not exact")  # pragma: no cover
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, ascending, monic, exact integers."""
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if m == 1:
        return (-1, 1)
    num = [0] * (m + 1)
    num[0], num[m] = -1, 1  # x^m - 1
    den = [1]
    for d in range(1, m):
        if m % d == 0:
            phi_d = list(cyclotomic_polynomial(d))
            new = [0] * (len(den) + len(phi_d) - 1)
            for i, a in enumerate(den):
                if a:
                    for j, b in enumerate(phi_d):
                        new[i + j] += a * b
            den = new
    return tuple(_int_poly_div_exact(num, den))


@lru_cache(maxsize=None)
def _zeta_rows(m: int) -> tuple[tuple[Fraction, ...], ...]:
    """Coefficient vector of zeta_m**e for every e in [0, m)."""
    phi_coeffs = cyclotomic_polynomial(m)
    phi = len(phi_coeffs) - 1
    rows = []
    cur = [Fraction(0)] * phi
    cur[0] = Fraction(1)
    for _ in range(m):
        rows.append(tuple(cur))
        lead = cur[phi - 1]
        nxt = [Fraction(0)] * phi
        for j in range(phi - 1):
            nxt[j + 1] = cur[j]
        if lead:
            for j in range(phi):
                nxt[j] -= lead * phi_coeffs[j]
        cur = nxt
    return tuple(rows)


def euler_phi_of_conductor(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


# ---------------------------------------------------------------- cyclotomic


class CyclotomicNumber:
    """An element of Q(zeta_m), coefficients over 1, zeta, ..., zeta^(phi-1)."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs):
        phi = euler_phi_of_conductor(m)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != phi:
            raise ValueError(f"need {phi} coefficients for conductor {m}, got {len(coeffs)}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *args):
        raise AttributeError("CyclotomicNumber is immutable")

    # ---- constructors

    @classmethod
    def zero(cls, m: int) -> "CyclotomicNumber":
        return cls(m, [0] * euler_phi_of_conductor(m))

    @classmethod
    def one(cls, m: int) -> "CyclotomicNumber":
        return cls.from_rational(m, 1)

    @classmethod
    def from_rational(cls, m: int, q) -> "CyclotomicNumber":
        v = [Fraction(0)] * euler_phi_of_conductor(m)
        v[0] = Fraction(q)
        return cls(m, v)

    @classmethod
    def zeta(cls, m: int, e: int = 1) -> "CyclotomicNumber":
        return cls(m, _zeta_rows(m)[e % m])

    # ---- structure

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # ---- arithmetic

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.m != self.m:
                raise ValueError(f"conductor mismatch: {self.m} vs {other.m}")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.from_rational(self.m, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicNumber(self.m, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicNumber(self.m, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return CyclotomicNumber(self.m, [-a for a in self.coeffs])

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CyclotomicNumber(self.m, [a * q for a in self.coeffs])
        m = self.m
        phi = len(self.coeffs)
        acc = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        acc[i + j] += a * b
        res = list(acc[:phi])
        if phi > 1:
            rows = _zeta_rows(m)
            for k in range(phi, 2 * phi - 1):
                c = acc[k]
                if c:
                    row = rows[k % m]
                    for j in range(phi):
                        if row[j]:
                            res[j] += c * row[j]
        return CyclotomicNumber(m, res)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CyclotomicNumber.one(self.m)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self.m == other.m and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.m, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def galois(self, k: int) -> "CyclotomicNumber":
        """The image under zeta -> zeta^k, defined for gcd(k, m) = 1."""
        if math.gcd(k, self.m) != 1:
            raise ValueError(f"{k} is not invertible mod {self.m}")
        rows = _zeta_rows(self.m)
        phi = len(self.coeffs)
        res = [Fraction(0)] * phi
        for i, a in enumerate(self.coeffs):
            if a:
                row = rows[(i * k) % self.m]
                for j in range(phi):
                    if row[j]:
                        res[j] += a * row[j]
        return CyclotomicNumber(self.m, res)

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise DivisionByZero(f"zero has no inverse in Q(zeta_{self.m})")
        nz = [(i, c) for i, c in enumerate(self.coeffs) if c]
        if len(nz) == 1:
            # a * zeta^i inverts to (1/a) * zeta^(m - i)
            i, a = nz[0]
            row = _zeta_rows(self.m)[(self.m - i) % self.m]
            return CyclotomicNumber(self.m, [v / a for v in row])
        inv = _poly_mod_inverse(list(self.coeffs), [Fraction(c) for c in cyclotomic_polynomial(self.m)])
        phi = len(self.coeffs)
        inv = inv + [Fraction(0)] * (phi - len(inv))
        return CyclotomicNumber(self.m, inv[:phi])

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*z" if c != 1 else "z")
            else:
                terms.append(f"{c}*z^{i}" if c != 1 else f"z^{i}")
        body = " + ".join(terms) if terms else "0"
        return f"Cyclo(m={self.m}: {body})"


def _poly_mod_inverse(a: list[Fraction], modulus: list[Fraction]) -> list[Fraction]:
    """Inverse of a mod the monic polynomial ``modulus`` via extended Euclid."""

    def deg(p):
        for i in range(len(p) - 1, -1, -1):
            if p[i]:
                return i
        return -1

    def trim(p):
        d = deg(p)
        return p[: d + 1] if d >= 0 else []

    def sub_scaled(p, q, c, shift):
        out = list(p) + [Fraction(0)] * max(0, len(q) + shift - len(p))
        for i, v in enumerate(q):
            if v:
                out[i + shift] -= c * v
        return trim(out)

    def divmod_poly(num, den):
        num = list(num)
        dd = deg(den)
        lead = den[dd]
        quo = [Fraction(0)] * max(0, len(num) - dd)
        while deg(num) >= dd:
            dn = deg(num)
            c = num[dn] / lead
            quo[dn - dd] = c
            num = sub_scaled(num, den, c, dn - dd)
        return trim(quo), trim(num)

    old_r, r = trim(list(modulus)), trim(list(a))
    old_s, s = [], [Fraction(1)]
    while r:
        q, rem = divmod_poly(old_r, r)
        old_r, r = r, rem
        # new_s = old_s - q * s
        qs = [Fraction(0)] * (len(q) + len(s) - 1) if q and s else []
        for i, x in enumerate(q):
            if x:
                for j, y in enumerate(s):
                    if y:
                        qs[i + j] += x * y
        new_s = list(old_s) + [Fraction(0)] * max(0, len(qs) - len(old_s))
        for i, v in enumerate(qs):
            new_s[i] -= v
        old_s, s = s, trim(new_s)
    if deg(old_r) != 0:
        raise DivisionByZero("element shares a factor with the modulus")  # pragma: no cover
    c = old_r[0]
    return [v / c for v in old_s]


def omega(m: int) -> CyclotomicNumber:
    """The primitive cube root of unity zeta_m**(m/3).  Requires 3 | m."""
    if m % 3 != 0:
        raise MissingOmega(f"conductor {m} contains no cube root of unity")
    return CyclotomicNumber.zeta(m, m // 3)


# -------------------------------------------------------------------- towers


def _is_rational_cube(q: Fraction) -> bool:
    def icbrt(n: int) -> int | None:
        if n < 0:
            r = icbrt(-n)
            return -r if r is not None else None
        x = round(n ** (1 / 3)) if n < 2**40 else 1 << ((n.bit_length() + 2) // 3)
        # Newton correction, then exact check around the estimate.
        for _ in range(80):
            if x <= 0:
                x = 1
            nx = (2 * x + n // (x * x)) // 3
            if nx == x:
                break
            x = nx
        for c in (x - 1, x, x + 1):
            if c >= 0 and c**3 == n:
                return c
        return None

    return icbrt(q.numerator) is not None and icbrt(q.denominator) is not None


@dataclass(frozen=True)
class Tower:
    """The field Q(zeta_m), optionally extended by a cube root of ``radicand``.

    ``radicand`` is a nonzero rational that is not a cube of a rational, or
    None for the bare cyclotomic layer.  The degree over Q is phi(m) or
    3 * phi(m) accordingly.
    """

    m: int
    radicand: Fraction | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"conductor must be positive, got {self.m}")
        if self.radicand is not None:
            c = Fraction(self.radicand)
            if c == 0:
                raise ValueError("radicand must be nonzero")
            if _is_rational_cube(c):
                raise ValueError(f"radicand {c} is a rational cube; t^3 - c would split")
            object.__setattr__(self, "radicand", c)

    @property
    def phi(self) -> int:
        return euler_phi_of_conductor(self.m)

    @property
    def degree(self) -> int:
        return self.phi * (3 if self.radicand is not None else 1)

    @property
    def has_radical(self) -> bool:
        return self.radicand is not None

    def omega_available(self) -> bool:
        return self.m % 3 == 0

    # element factories, for convenience

    def zero(self) -> "TowerElement":
        z = CyclotomicNumber.zero(self.m)
        return TowerElement(self, (z, z, z))

    def one(self) -> "TowerElement":
        z = CyclotomicNumber.zero(self.m)
        return TowerElement(self, (CyclotomicNumber.one(self.m), z, z))

    def rational(self, q) -> "TowerElement":
        z = CyclotomicNumber.zero(self.m)
        return TowerElement(self, (CyclotomicNumber.from_rational(self.m, q), z, z))

    def zeta(self, e: int = 1) -> "TowerElement":
        z = CyclotomicNumber.zero(self.m)
        return TowerElement(self, (CyclotomicNumber.zeta(self.m, e), z, z))

    def from_base(self, x: CyclotomicNumber) -> "TowerElement":
        if x.m != self.m:
            raise ValueError(f"conductor mismatch: tower has {self.m}, element has {x.m}")
        z = CyclotomicNumber.zero(self.m)
        return TowerElement(self, (x, z, z))

    def radical(self) -> "TowerElement":
        """The generator t with t^3 = radicand."""
        if not self.has_radical:
            raise ValueError("tower has no radical layer")
        z = CyclotomicNumber.zero(self.m)
        return TowerElement(self, (z, CyclotomicNumber.one(self.m), z))

    def omega(self) -> "TowerElement":
        return self.from_base(omega(self.m))


class TowerElement:
    """An element a0 + a1*t + a2*t^2 with cyclotomic coefficients."""

    __slots__ = ("tower", "comps")

    def __init__(self, tower: Tower, comps):
        comps = tuple(comps)
        if len(comps) != 3:
            raise ValueError("need exactly three components")
        for c in comps:
            if not isinstance(c, CyclotomicNumber) or c.m != tower.m:
                raise ValueError("components must be cyclotomic numbers of the tower's conductor")
        if not tower.has_radical and (not comps[1].is_zero() or not comps[2].is_zero()):
            raise ValueError("no radical layer; components at t and t^2 must vanish")
        object.__setattr__(self, "tower", tower)
        object.__setattr__(self, "comps", comps)

    def __setattr__(self, *args):
        raise AttributeError("TowerElement is immutable")

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def is_base(self) -> bool:
        return self.comps[1].is_zero() and self.comps[2].is_zero()

    def base_value(self) -> CyclotomicNumber:
        if not self.is_base():
            raise ValueError("element has radical components")
        return self.comps[0]

    def _coerce(self, other):
        if isinstance(other, TowerElement):
            if other.tower != self.tower:
                raise ValueError("tower mismatch")
            return other
        if isinstance(other, CyclotomicNumber):
            return self.tower.from_base(other)
        if isinstance(other, (int, Fraction)):
            return self.tower.rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return TowerElement(self.tower, tuple(a + b for a, b in zip(self.comps, o.comps)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return TowerElement(self.tower, tuple(a - b for a, b in zip(self.comps, o.comps)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return TowerElement(self.tower, tuple(-a for a in self.comps))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        x0, x1, x2 = self.comps
        y0, y1, y2 = o.comps
        if not self.tower.has_radical:
            return self.tower.from_base(x0 * y0)
        c = self.tower.radicand
        z0 = x0 * y0 + (x1 * y2 + x2 * y1) * c
        z1 = x0 * y1 + x1 * y0 + (x2 * y2) * c
        z2 = x0 * y2 + x1 * y1 + x2 * y0
        return TowerElement(self.tower, (z0, z1, z2))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.tower.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            o = self._coerce(other)
            return self.comps == o.comps
        if not isinstance(other, TowerElement):
            return NotImplemented
        return self.tower == other.tower and self.comps == other.comps

    def __hash__(self):
        return hash((self.tower, self.comps))

    def __bool__(self):
        return not self.is_zero()

    def inverse(self) -> "TowerElement":
        if self.is_zero():
            raise DivisionByZero("zero has no inverse in the tower")
        if not self.tower.has_radical:
            return self.tower.from_base(self.comps[0].inverse())
        m = self.tower.m
        c = CyclotomicNumber.from_rational(m, self.tower.radicand)
        x0, x1, x2 = self.comps
        # Multiplication by self, as a 3x3 matrix over the cyclotomic layer.
        rows = [
            [x0, c * x2, c * x1],
            [x1, x0, c * x2],
            [x2, x1, x0],
        ]
        rhs = [
            CyclotomicNumber.one(m),
            CyclotomicNumber.zero(m),
            CyclotomicNumber.zero(m),
        ]
        # Gaussian elimination with exact pivots.
        for col in range(3):
            pivot = None
            for r in range(col, 3):
                if not rows[r][col].is_zero():
                    pivot = r
                    break
            if pivot is None:
                raise DivisionByZero("element is a zero divisor")  # pragma: no cover
            rows[col], rows[pivot] = rows[pivot], rows[col]
            rhs[col], rhs[pivot] = rhs[pivot], rhs[col]
            inv_p = rows[col][col].inverse()
            rows[col] = [inv_p * v for v in rows[col]]
            rhs[col] = inv_p * rhs[col]
            for r in range(3):
                if r != col and not rows[r][col].is_zero():
                    f = rows[r][col]
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
                    rhs[r] = rhs[r] - f * rhs[col]
        return TowerElement(self.tower, tuple(rhs))

    def to_rational_vector(self) -> tuple[Fraction, ...]:
        """Flatten to Fractions over the Q-basis zeta^i * t^j, j outer."""
        out = []
        for comp in self.comps:
            out.extend(comp.coeffs)
        return tuple(out)

    def __repr__(self):
        return f"TowerElement({self.comps[0]!r} + ({self.comps[1]!r})t + ({self.comps[2]!r})t^2)"


def tower_element_from_vector(tower: Tower, vec) -> TowerElement:
    """Inverse of TowerElement.to_rational_vector."""
    phi = tower.phi
    vec = list(vec)
    if len(vec) != 3 * phi:
        raise ValueError(f"need {3 * phi} rational coordinates, got {len(vec)}")
    comps = tuple(CyclotomicNumber(tower.m, vec[j * phi : (j + 1) * phi]) for j in range(3))
    return TowerElement(tower, comps)


# ------------------------------------------------------------- galois action


@dataclass(frozen=True)
class GaloisAction:
    """zeta -> zeta^d and t -> omega^twist * t, omega = zeta^(m/3)."""

    d: int
    twist: int = 0

    def __post_init__(self):
        if self.twist % 3 != self.twist:
            object.__setattr__(self, "twist", self.twist % 3)


def _validate_action(tower: Tower, sigma: GaloisAction):
    if math.gcd(sigma.d, tower.m) != 1:
        raise ValueError(f"d = {sigma.d} is not a unit mod {tower.m}")
    if sigma.twist % 3 != 0 and tower.m % 3 != 0:
        raise MissingOmega(
            f"twist {sigma.twist} needs omega, but conductor {tower.m} is not divisible by 3"
        )


def apply_sigma(x: TowerElement, sigma: GaloisAction) -> TowerElement:
    """Apply the action to a tower element."""
    tower = x.tower
    _validate_action(tower, sigma)
    m = tower.m
    new = []
    for j, comp in enumerate(x.comps):
        mapped = comp.galois(sigma.d)
        tw = (j * sigma.twist) % 3
        if tw and not mapped.is_zero():
            mapped = mapped * CyclotomicNumber.zeta(m, (m // 3) * tw)
        new.append(mapped)
    return TowerElement(tower, tuple(new))


def compose_sigma(tower: Tower, first: GaloisAction, then: GaloisAction) -> GaloisAction:
    """The action 'then after first' on the given tower."""
    _validate_action(tower, first)
    _validate_action(tower, then)
    d = (then.d * first.d) % tower.m if tower.m > 1 else 1
    # then(first(t)) = then(omega^a t) = omega^(a*d_then + b) t
    twist = (first.twist * then.d + then.twist) % 3
    return GaloisAction(d, twist)


def sigma_inverse(tower: Tower, sigma: GaloisAction) -> GaloisAction:
    _validate_action(tower, sigma)
    if tower.m == 1:
        d_inv = 1
    else:
        d_inv = pow(sigma.d, -1, tower.m)
    twist = (-sigma.twist * d_inv) % 3
    return GaloisAction(d_inv, twist)


def sigma_power(tower: Tower, sigma: GaloisAction, k: int) -> GaloisAction:
    if k < 0:
        return sigma_power(tower, sigma_inverse(tower, sigma), -k)
    out = GaloisAction(1, 0)
    for _ in range(k % sigma_order(tower, sigma) if k else 0):
        out = compose_sigma(tower, out, sigma)
    return out


def sigma_order(tower: Tower, sigma: GaloisAction) -> int:
    """Order of the action as a field automorphism of the tower."""
    _validate_action(tower, sigma)
    d_ord = residue_arith.multiplicative_order(sigma.d % tower.m if tower.m > 1 else 0, tower.m)
    if not tower.has_radical or sigma.twist % 3 == 0:
        return d_ord
    # sigma^k sends t to omega^(twist * (1 + d + ... + d^(k-1))) t.
    k = d_ord
    while True:
        s = sum(pow(sigma.d, i, 3) for i in range(k)) % 3
        if (sigma.twist * s) % 3 == 0:
            return k
        k += d_ord


def fixed_field_test(x: TowerElement, sigma: GaloisAction) -> bool:
    """True when sigma fixes x."""
    return apply_sigma(x, sigma) == x
