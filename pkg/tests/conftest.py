"""Shared helpers: independent oracles kept deliberately separate from the
implementation paths they check (Sylvester determinants for resultants,
brute-force point counts, enumeration square roots)."""

from __future__ import annotations

import random
from fractions import Fraction

from tpe.algebra import Poly, QQ, legendre_symbol
from tpe.curve import CurvePoint, ReducedPoint
from tpe.jacobian import Jacobian


def qp(*coeffs) -> Poly:
    """Rational polynomial from low-to-high coefficients."""
    return Poly.over_q(coeffs)


def sylvester_resultant(f: Poly, g: Poly) -> Fraction:
    """res(f, g) as the determinant of the Sylvester matrix, by fraction-exact
    Gaussian elimination; independent of the Euclidean-chain implementation."""
    m, n = f.degree, g.degree
    assert m >= 0 and n >= 0
    size = m + n
    if size == 0:
        return Fraction(1)
    rows = []
    fc = [f.coeff(m - i) for i in range(m + 1)]  # high to low
    gc = [g.coeff(n - i) for i in range(n + 1)]
    for i in range(n):
        rows.append([Fraction(0)] * i + fc + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + gc + [Fraction(0)] * (size - n - 1 - i))
    det = Fraction(1)
    for col in range(size):
        pivot = None
        for r in range(col, size):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, size):
            if rows[r][col] != 0:
                factor = rows[r][col] * inv
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return det


def brute_force_count(f: Poly, p: int) -> int:
    """#C(F_p) by enumerating all (x, y) in F_p^2, plus infinity points."""
    cs = []
    for c in f.coeffs:
        assert c.denominator % p != 0
        cs.append(c.numerator * pow(c.denominator, -1, p) % p)
    total = 0
    for x in range(p):
        fx = 0
        for c in reversed(cs):
            fx = (fx * x + c) % p
        for y in range(p):
            if y * y % p == fx:
                total += 1
    if f.degree % 2 == 1:
        total += 1
    else:
        total += 2 if legendre_symbol(cs[-1], p) == 1 else 0
    return total


def sqrt_mod(a: int, p: int):
    """Smallest square root of a mod p, by enumeration; None if non-residue."""
    a %= p
    for y in range((p + 1) // 2 + 1):
        if y * y % p == a:
            return y
    return None


def random_reduced_class(jac: Jacobian, rng: random.Random):
    """A random divisor class: the sum of two random point classes."""
    p = jac.field.p
    cs = [c.value for c in jac.f.coeffs]

    def random_point():
        while True:
            x = rng.randrange(p)
            fx = 0
            for c in reversed(cs):
                fx = (fx * x + c) % p
            y = sqrt_mod(fx, p)
            if y is not None:
                return ReducedPoint("affine", x=x, y=rng.choice([y, (-y) % p]))

    D = jac.embed(random_point())
    return jac.add(D, jac.embed(random_point()))
