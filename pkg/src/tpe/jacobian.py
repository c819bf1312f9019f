"""Divisor-class arithmetic in Mumford representation via Cantor's algorithm.

Only odd-degree (imaginary) models are supported: a reduced class is a pair
(u, v) with u monic of degree <= g, deg v < deg u and u | v^2 - f, and the
identity is (1, 0).  The same code runs over F_p, over Q, and over a
single-generator number field; number-field runs guard against coefficient
blow-up with a configurable digit ceiling.

Everything is pure and immutable; order scans are internally sequential,
but independent torsion decisions can run concurrently.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

from tpe.algebra import NonIntegralError, Poly, PrimeField, is_prime
from tpe.curve import (
    AFFINE,
    CurvePoint,
    HyperellipticCurve,
    INF,
    ReducedPoint,
    has_good_reduction,
    on_curve,
    reduce_point,
)
from tpe.tower import (
    ResidueAssignment,
    TowerElement,
    TowerSpec,
    ZeroDivisorError,
    lift_poly,
    reduce_element,
    splits_completely_mod_p,
)

DEFAULT_HEIGHT_CEILING = 1_000_000  # decimal digits per numerator/denominator


def height_ceiling_from_env() -> int:
    raw = os.environ.get("TPE_HEIGHT_CEILING")
    if raw is None:
        return DEFAULT_HEIGHT_CEILING
    value = int(raw)
    if value < 1:
        raise ValueError("TPE_HEIGHT_CEILING must be positive")
    return value


class HeightLimitExceeded(ArithmeticError):
    """Exact coefficients outgrew the configured digit ceiling."""


@dataclass(frozen=True)
class MumfordDivisor:
    u: Poly
    v: Poly

    def __repr__(self):
        return f"[u = {self.u!r}, v = {self.v!r}]"


class Jacobian:
    """The divisor class group of an odd-model curve over an exact field."""

    def __init__(self, field, f: Poly, genus: int, height_ceiling: int | None = None):
        if f.field != field:
            raise ValueError("curve polynomial domain mismatch")
        if f.degree != 2 * genus + 1:
            raise ValueError("Cantor arithmetic needs an odd-degree model")
        self.field = field
        self.f = f
        self.genus = genus
        self.height_ceiling = height_ceiling

    @classmethod
    def over_prime_field(cls, curve: HyperellipticCurve, p: int) -> "Jacobian":
        if not curve.odd_model:
            raise ValueError("Cantor arithmetic needs an odd-degree model")
        field = PrimeField(p)
        return cls(field, curve.f.map_domain(field), curve.genus)

    @classmethod
    def over_tower(
        cls,
        curve: HyperellipticCurve,
        tower: TowerSpec,
        height_ceiling: int | None = None,
    ) -> "Jacobian":
        if not curve.odd_model:
            raise ValueError("Cantor arithmetic needs an odd-degree model")
        if tower.k > 1:
            raise ValueError("exact arithmetic supports at most one generator")
        if height_ceiling is None:
            height_ceiling = height_ceiling_from_env()
        return cls(tower, lift_poly(curve.f, tower), curve.genus, height_ceiling)

    @classmethod
    def over_q(cls, curve: HyperellipticCurve, height_ceiling: int | None = None):
        return cls.over_tower(curve, TowerSpec(), height_ceiling)

    @property
    def identity(self) -> MumfordDivisor:
        one = Poly.const(self.field, self.field.one)
        return MumfordDivisor(one, Poly(self.field))

    def embed(self, point) -> MumfordDivisor:
        """The class of P minus the point at infinity: (x - a, b) for affine
        P = (a, b), identity for the base point at infinity."""
        if isinstance(point, ReducedPoint):
            if point.kind == INF:
                return self.identity
            if point.kind != AFFINE:
                raise ValueError("even-model infinity cannot be embedded")
            a = self.field.coerce(point.x)
            b = self.field.coerce(point.y)
        elif isinstance(point, CurvePoint):
            if point.kind == INF:
                return self.identity
            if point.kind != AFFINE:
                raise ValueError("even-model infinity cannot be embedded")
            a = self.field.coerce(point.x)
            b = self.field.coerce(point.y)
        else:
            raise TypeError("embed expects a CurvePoint or ReducedPoint")
        u = Poly(self.field, (-a, self.field.one))
        v = Poly.const(self.field, b)
        D = MumfordDivisor(u, v)
        if not self.on_jacobian(D):
            raise ValueError("point does not satisfy y^2 = f(x) in this domain")
        return D

    def on_jacobian(self, D: MumfordDivisor) -> bool:
        if D.u.is_zero or D.u.leading != self.field.one:
            return False
        if not D.v.is_zero and D.v.degree >= D.u.degree:
            return False
        return ((D.v * D.v - self.f) % D.u).is_zero

    def neg(self, D: MumfordDivisor) -> MumfordDivisor:
        return MumfordDivisor(D.u, (-D.v) % D.u)

    def add(self, D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
        """Cantor composition followed by reduction to deg u <= g."""
        field = self.field
        u1, v1 = D1.u, D1.v
        u2, v2 = D2.u, D2.v
        d1, e1, e2 = u1.xgcd(u2)
        d, c1, c2 = d1.xgcd(v1 + v2)
        s1, s2, s3 = c1 * e1, c1 * e2, c2
        u = (u1 * u2).exact_div(d * d)
        mixed = s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + self.f)
        v = mixed.exact_div(d) % u
        while u.degree > self.genus:
            u_next = (self.f - v * v).exact_div(u).monic()
            v = (-v) % u_next
            u = u_next
        result = MumfordDivisor(u.monic(), v)
        self._check_height(result)
        return result

    def mul(self, n: int, D: MumfordDivisor) -> MumfordDivisor:
        """n-fold sum by double-and-add; n must be nonnegative."""
        if n < 0:
            raise ValueError("scalar must be nonnegative")
        acc = self.identity
        base = D
        while n:
            if n & 1:
                acc = self.add(acc, base)
            n >>= 1
            if n:
                base = self.add(base, base)
        return acc

    def _check_height(self, D: MumfordDivisor):
        if self.height_ceiling is None:
            return
        limit_bits = self.height_ceiling * 10 // 3 + 16
        for poly in (D.u, D.v):
            for c in poly.coeffs:
                for q in _fractions_of(c):
                    if (
                        q.numerator.bit_length() > limit_bits
                        or q.denominator.bit_length() > limit_bits
                    ):
                        raise HeightLimitExceeded(
                            f"coefficient exceeds {self.height_ceiling} digits"
                        )


def _fractions_of(c):
    if isinstance(c, Fraction):
        return (c,)
    if isinstance(c, TowerElement):
        return tuple(c.coeffs.values())
    return ()


def class_group_bound(p: int, genus: int) -> int:
    """Integer upper bound for #J(F_p): (sqrt(p) + 1)^(2g), rounded up."""
    s = math.isqrt(p)
    if s * s < p:
        s += 1
    return (p + 2 * s + 1) ** genus


def divisor_order(jac: Jacobian, D: MumfordDivisor) -> int:
    """Exact order of a reduced class over F_p, by incremental addition.

    Some multiple of the order occurs within the Weil bound on #J(F_p), so
    the first n with n*D = 0 is the order itself; exceeding the bound means
    the inputs were inconsistent.
    """
    if not isinstance(jac.field, PrimeField):
        raise TypeError("divisor_order runs over a prime field")
    bound = class_group_bound(jac.field.p, jac.genus)
    # linear scan; swap in baby-step giant-step if curves outgrow desk scale
    acc = D
    for n in range(1, bound + 1):
        if acc == jac.identity:
            return n
        acc = jac.add(acc, D)
    raise RuntimeError("order scan exceeded the class-group bound")


def reduce_divisor(
    D: MumfordDivisor, w: ResidueAssignment, target: Jacobian
) -> MumfordDivisor:
    """Coefficient-wise reduction of a number-field divisor to F_p at w.

    Valid for pointwise-reduced representatives: the support points must be
    w-integral with no collisions under reduction, else coefficients pick up
    denominators divisible by p and the reduction is refused."""
    field = target.field

    def red(poly: Poly) -> Poly:
        return Poly(field, [field.element(reduce_element(c, w)) for c in poly.coeffs])

    out = MumfordDivisor(red(D.u), red(D.v))
    if not target.on_jacobian(out):
        raise ValueError("reduced divisor leaves the reduced Jacobian")
    return out


# ---------------------------------------------------------------------------
# torsion decision


@dataclass(frozen=True)
class CertifiedTorsion:
    order: int


@dataclass(frozen=True)
class NotTorsion:
    pass


@dataclass(frozen=True)
class Undecidable:
    reason: str


TorsionVerdict = CertifiedTorsion | NotTorsion | Undecidable


def torsion_decide(
    point: CurvePoint,
    curve: HyperellipticCurve,
    tower: TowerSpec,
    p: int,
    place: ResidueAssignment,
    height_ceiling: int | None = None,
) -> TorsionVerdict:
    """Decide whether the class of P minus infinity is torsion, with exact order.

    At an odd, completely split prime of good reduction, reduction is
    injective on the torsion subgroup, so a torsion class has the same order
    n as its reduction.  The procedure finds n over F_p by scanning, then
    checks n*D = 0 exactly over the number field: success certifies torsion
    of exact order n, failure refutes torsion outright.  Zero divisors or a
    breached height ceiling yield Undecidable.
    """
    if not curve.odd_model:
        raise ValueError("torsion decision needs an odd-degree model")
    if tower.k > 1:
        raise ValueError("torsion decision supports at most one generator")
    if p == 2 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    if place.p != p:
        raise ValueError("place does not lie over p")
    if not has_good_reduction(curve, p):
        raise ValueError(f"bad reduction at {p}")
    for i, (name, relation) in enumerate(tower.generators):
        if not splits_completely_mod_p(relation, p):
            raise ValueError(f"p = {p} does not split completely ({name})")
        rp = relation.map_domain(PrimeField(p))
        if int(rp(rp.field.element(place.residues[i]))) != 0:
            raise ValueError(f"residue for {name!r} is not a root mod {p}")
    if not on_curve(point, curve):
        raise ValueError("point is not on the curve")

    jac_p = Jacobian.over_prime_field(curve, p)
    try:
        reduced = reduce_point(point, curve, place)
    except NonIntegralError as exc:
        raise ValueError(f"point is not w-integral: {exc}") from exc
    n = divisor_order(jac_p, jac_p.embed(reduced))

    jac_f = Jacobian.over_tower(curve, tower, height_ceiling)
    try:
        D = jac_f.embed(point)
        nD = jac_f.mul(n, D)
    except (ZeroDivisorError, HeightLimitExceeded) as exc:
        return Undecidable(str(exc))
    if nD == jac_f.identity:
        return CertifiedTorsion(n)
    return NotTorsion()
