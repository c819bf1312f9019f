"""Exact arithmetic kernels: integers, rationals, dense polynomials, prime fields.

Rationals are ``fractions.Fraction`` (always reduced, positive denominator),
polynomials are dense coefficient tuples over an explicit coefficient field,
and F_p elements carry their field so the polynomial code is field-generic.
All values are immutable and every operation is pure.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction


class NonIntegralError(ValueError):
    """A denominator is divisible by the reduction prime."""


# ---------------------------------------------------------------------------
# integer utilities


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; valid for every input below 2**64."""
    if n < 0 or n.bit_length() > 64:
        raise ValueError("primality test restricted to 64-bit nonnegative integers")
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
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


def integer_nth_root(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0, by Newton iteration on integers."""
    if n < 0 or k < 1:
        raise ValueError("integer_nth_root needs n >= 0 and k >= 1")
    if n == 0 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def exact_sqrt(n: int):
    """Integer square root of n if n is a perfect square, else None."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def exact_fifth_root(n: int):
    """Integer fifth root of n (any sign) if n is a perfect fifth power."""
    r = integer_nth_root(abs(n), 5)
    if r ** 5 != abs(n):
        return None
    return -r if n < 0 else r


@dataclass(frozen=True)
class PowerProfile:
    tenth_power_free: bool
    perfect_square: bool
    perfect_fifth_power: bool


def integer_power_classification(d: int) -> PowerProfile:
    """Exact square / fifth-power / tenth-power-free classification of d != 0."""
    if d == 0:
        raise ValueError("d must be nonzero")
    a = abs(d)
    square = exact_sqrt(d) is not None
    fifth = exact_fifth_root(d) is not None
    tenth_free = True
    m = 2
    while m ** 10 <= a:
        if a % m ** 10 == 0:
            tenth_free = False
            break
        m += 1
    return PowerProfile(tenth_free, square, fifth)


def legendre_symbol(a, p: int) -> int:
    """Legendre symbol (a/p) for odd prime p, via a^((p-1)/2) mod p."""
    if isinstance(a, FpElt):
        if a.field.p != p:
            raise ValueError("modulus mismatch")
        a = a.value
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def small_divisors(n: int) -> list[int]:
    """Positive divisors of n != 0, by trial division."""
    n = abs(n)
    if n == 0:
        raise ValueError("n must be nonzero")
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


# ---------------------------------------------------------------------------
# coefficient domains


class RationalDomain:
    """The field of exact rationals, used as a Poly coefficient domain."""

    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, value) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        raise TypeError(f"cannot coerce {value!r} into Q")

    def __repr__(self) -> str:
        return "QQ"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalDomain)

    def __hash__(self) -> int:
        return hash("RationalDomain")


QQ = RationalDomain()


class FpElt:
    """An element of F_p; arithmetic via overloaded operators."""

    __slots__ = ("field", "value")

    def __init__(self, field: "PrimeField", value: int):
        self.field = field
        self.value = value % field.p

    def _coerce(self, other):
        if isinstance(other, FpElt):
            if other.field.p != self.field.p:
                raise ValueError("modulus mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElt(self.field, self.value + o.value)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElt(self.field, self.value - o.value)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElt(self.field, o.value - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElt(self.field, self.value * o.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.value == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElt(self.field, self.value * pow(o.value, -1, self.field.p))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return FpElt(self.field, -self.value)

    def __pow__(self, e: int):
        return FpElt(self.field, pow(self.value, e, self.field.p))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.field.p
        return (
            isinstance(other, FpElt)
            and other.field.p == self.field.p
            and other.value == self.value
        )

    def __hash__(self):
        return hash((self.field.p, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value}"


class PrimeField:
    """F_p for an odd prime p, usable as a Poly coefficient domain."""

    __slots__ = ("p", "zero", "one")

    def __init__(self, p: int):
        if p == 2 or not is_prime(p):
            raise ValueError(f"modulus must be an odd prime, got {p}")
        self.p = p
        self.zero = FpElt(self, 0)
        self.one = FpElt(self, 1)

    def coerce(self, value) -> FpElt:
        if isinstance(value, FpElt):
            if value.field.p != self.p:
                raise ValueError("modulus mismatch")
            return value
        if isinstance(value, int):
            return FpElt(self, value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise NonIntegralError(
                    f"denominator {value.denominator} divisible by {self.p}"
                )
            return FpElt(
                self, value.numerator * pow(value.denominator, -1, self.p)
            )
        raise TypeError(f"cannot coerce {value!r} into F_{self.p}")

    def element(self, value: int) -> FpElt:
        return FpElt(self, value)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"F_{self.p}"


# ---------------------------------------------------------------------------
# dense univariate polynomials


class Poly:
    """Dense univariate polynomial; coeffs[i] is the coefficient of x^i.

    The zero polynomial has an empty coefficient tuple and degree -1.
    Coefficients live in an explicit domain (QQ, PrimeField, TowerSpec)
    whose elements support +, -, * and, where the domain is a field, /.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        cs = [field.coerce(c) for c in coeffs]
        while cs and cs[-1] == field.zero:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def over_q(cls, coeffs) -> "Poly":
        return cls(QQ, coeffs)

    @classmethod
    def x(cls, field) -> "Poly":
        return cls(field, (field.zero, field.one))

    @classmethod
    def const(cls, field, c) -> "Poly":
        return cls(field, (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and other.field == self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __add__(self, other):
        other = self._as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(
            self.field, [self.coeff(i) + other.coeff(i) for i in range(n)]
        )

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._as_poly(other))

    def __rsub__(self, other):
        return self._as_poly(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.field.coerce(other)
            return Poly(self.field, [a * c for a in self.coeffs])
        if other.field != self.field:
            raise ValueError("coefficient domain mismatch")
        if self.is_zero or other.is_zero:
            return Poly(self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == self.field.zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        result = Poly.const(self.field, self.field.one)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero:
            return self
        return Poly(self.field, (self.field.zero,) * k + self.coeffs)

    def _as_poly(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.field != self.field:
                raise ValueError("coefficient domain mismatch")
            return other
        return Poly.const(self.field, self.field.coerce(other))

    def __divmod__(self, other):
        other = self._as_poly(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        field = self.field
        lead = other.leading
        monic_div = lead == field.one
        rem = list(self.coeffs)
        dq = len(self.coeffs) - len(other.coeffs)
        if dq < 0:
            return Poly(field), self
        quo = [field.zero] * (dq + 1)
        for i in range(dq, -1, -1):
            top = rem[i + other.degree]
            if top == field.zero:
                continue
            c = top if monic_div else top / lead
            quo[i] = c
            for j, b in enumerate(other.coeffs):
                rem[i + j] = rem[i + j] - c * b
        return Poly(field, quo), Poly(field, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ValueError("division is not exact")
        return q

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        lead = self.leading
        if lead == self.field.one:
            return self
        return Poly(self.field, [c / lead for c in self.coeffs])

    def derivative(self) -> "Poly":
        return Poly(
            self.field,
            [c * i for i, c in enumerate(self.coeffs)][1:],
        )

    def gcd(self, other) -> "Poly":
        """Monic greatest common divisor (Euclid)."""
        a, b = self, self._as_poly(other)
        while not b.is_zero:
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other):
        """(g, s, t) with g = s*self + t*other and g monic (or zero)."""
        field = self.field
        a, b = self, self._as_poly(other)
        s0, s1 = Poly.const(field, field.one), Poly(field)
        t0, t1 = Poly(field), Poly.const(field, field.one)
        while not b.is_zero:
            q, r = divmod(a, b)
            a, b = b, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if a.is_zero:
            return a, s0, t0
        lead = a.leading
        inv = field.one / lead
        return a * inv, s0 * inv, t0 * inv

    def pow_mod(self, e: int, mod: "Poly") -> "Poly":
        """self^e mod `mod`, by square-and-multiply."""
        if e < 0:
            raise ValueError("negative exponent")
        result = Poly.const(self.field, self.field.one) % mod
        base = self % mod
        while e:
            if e & 1:
                result = result * base % mod
            base = base * base % mod
            e >>= 1
        return result

    def __call__(self, x):
        """Evaluate by Horner's rule; x must live in the coefficient domain."""
        x = self.field.coerce(x)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def map_domain(self, field) -> "Poly":
        """Re-coerce all coefficients into another domain."""
        return Poly(field, [field.coerce(c) for c in self.coeffs])

    def __repr__(self):
        return f"Poly({poly_str(self)})"


def poly_str(f: Poly, var: str = "x") -> str:
    """Human-readable rendering, highest degree first."""
    if f.is_zero:
        return "0"
    parts = []
    for i in range(f.degree, -1, -1):
        c = f.coeff(i)
        if c == f.field.zero:
            continue
        cs = str(c)
        neg = cs.startswith("-")
        mag = cs[1:] if neg else cs
        if i == 0:
            term = mag
        else:
            xpow = var if i == 1 else f"{var}^{i}"
            term = xpow if mag == "1" else f"{mag}*{xpow}"
        if not parts:
            parts.append(("-" if neg else "") + term)
        else:
            parts.append(("- " if neg else "+ ") + term)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# resultants and discriminants


def resultant(f: Poly, g: Poly):
    """res(f, g) over the coefficient field, via the Euclidean remainder chain."""
    if f.field != g.field:
        raise ValueError("coefficient domain mismatch")
    field = f.field
    if f.is_zero or g.is_zero:
        return field.zero
    res = field.one
    sign = 1
    a, b = f, g
    while b.degree > 0:
        r = a % b
        if r.is_zero:
            return field.zero
        if (a.degree * b.degree) % 2 == 1:
            sign = -sign
        res = res * b.leading ** (a.degree - r.degree)
        a, b = b, r
    res = res * b.leading ** a.degree
    return res if sign == 1 else -res


def discriminant(f: Poly):
    """disc(f) = (-1)^(n(n-1)/2) * res(f, f') / lc(f), for deg f >= 2."""
    n = f.degree
    if n < 2:
        raise ValueError("discriminant requires degree >= 2")
    d = resultant(f, f.derivative()) / f.leading
    return -d if (n * (n - 1) // 2) % 2 else d


def is_squarefree(f: Poly) -> bool:
    """True iff gcd(f, f') is constant; f must be nonzero."""
    if f.is_zero:
        raise ValueError("zero polynomial")
    if f.degree == 0:
        return True
    return f.gcd(f.derivative()).degree == 0


# ---------------------------------------------------------------------------
# reduction mod p and splitting tests


def reduce_poly_mod_p(f: Poly, p: int) -> Poly:
    """Coefficient-wise reduction of a rational polynomial into F_p[x]."""
    field = PrimeField(p)
    return Poly(field, [field.coerce(c) for c in f.coeffs])


def roots_mod_p(g: Poly) -> list[int]:
    """All roots of g in F_p, by full enumeration; g over a PrimeField."""
    if not isinstance(g.field, PrimeField):
        raise TypeError("roots_mod_p expects a polynomial over F_p")
    if g.degree < 1:
        raise ValueError("roots_mod_p requires degree >= 1")
    p = g.field.p
    cs = [c.value for c in g.coeffs]
    roots = []
    for a in range(p):
        acc = 0
        for c in reversed(cs):
            acc = (acc * a + c) % p
        if acc == 0:
            roots.append(a)
    return roots


def splits_completely_mod_p(g: Poly, p: int) -> bool:
    """True iff g mod p is a product of deg(g) distinct linear factors.

    Tested without factoring: x^p == x (mod g) by square-and-multiply
    (so g | x^p - x) together with gcd(g, g') = 1 (distinct roots).
    """
    if g.degree < 1:
        raise ValueError("splitting test requires degree >= 1")
    gp = reduce_poly_mod_p(g, p)
    if gp.degree != g.degree:
        raise ValueError("leading coefficient divisible by p")
    gp = gp.monic()
    x = Poly.x(gp.field)
    if x.pow_mod(p, gp) != x % gp:
        return False
    return gp.gcd(gp.derivative()).degree == 0


# ---------------------------------------------------------------------------
# cyclotomic polynomials and rational roots


@functools.lru_cache(maxsize=None)
def cyclotomic(n: int) -> Poly:
    """n-th cyclotomic polynomial, by the exact quotient recursion
    Phi_n(x) = (x^n - 1) / prod_{d | n, d < n} Phi_d(x); memoized."""
    if n < 1:
        raise ValueError("n must be positive")
    f = Poly.over_q([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            f = f.exact_div(cyclotomic(d))
    return f


def rational_roots(f: Poly) -> list[Fraction]:
    """All rational roots of f in Q[x], by the rational-root bound."""
    if f.field != QQ:
        raise TypeError("rational_roots expects a polynomial over Q")
    if f.is_zero:
        raise ValueError("zero polynomial")
    roots = []
    cs = list(f.coeffs)
    if cs and cs[0] == 0:
        roots.append(Fraction(0))
        while cs and cs[0] == 0:
            cs.pop(0)
    if len(cs) <= 1:
        return sorted(set(roots))
    lcm_den = 1
    for c in cs:
        lcm_den = lcm_den * c.denominator // math.gcd(lcm_den, c.denominator)
    ics = [int(c * lcm_den) for c in cs]
    a0, an = ics[0], ics[-1]
    g = Poly.over_q(ics)
    for num in small_divisors(a0):
        for den in small_divisors(an):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if g(cand) == 0:
                    roots.append(cand)
    return sorted(set(roots))
