"""Exact binary forms on the rational projective line.

A form of degree d in homogeneous coordinates [X : Y] is stored by the
coefficients c_0..c_d of sum c_k X^(d-k) Y^k; the same list read low-to-high
is the dehomogenization in the affine chart coordinate z = Y/X, with the
point at infinity [0 : 1] handled through the leftover power of X.  Zero
forms are legal for any degree (negative degrees force them) and represent
the zero section of the corresponding line bundle.

Places are monic irreducible polynomials in z, plus the place at infinity;
irreducible factorization over the rationals is delegated to sympy, the rest
of the polynomial arithmetic is done directly on Fraction coefficient lists.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy

from .linalg import frac


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def poly_mul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def poly_divmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    inv = Fraction(1) / b[-1]
    while len(a) >= len(b) and any(x != 0 for x in a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        coef = a[-1] * inv
        q[shift] = coef
        for i, x in enumerate(b):
            a[shift + i] -= coef * x
        a.pop()
    return _trim(q), _trim(a)


def poly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if a:
        inv = Fraction(1) / a[-1]
        a = tuple(x * inv for x in a)
    return a


def poly_eval(coeffs, z):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


@dataclass(frozen=True)
class ProjPoint:
    """A rational point [a : b] of the projective line, stored normalized."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        a, b = frac(self.a), frac(self.b)
        if a == 0 and b == 0:
            raise ValueError("[0 : 0] is not a point")
        if a != 0:
            a, b = Fraction(1), b / a
        else:
            a, b = Fraction(0), Fraction(1)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_chart(cls, z):
        return cls(Fraction(1), frac(z))

    @classmethod
    def infinity(cls):
        return cls(Fraction(0), Fraction(1))

    @property
    def is_infinity(self):
        return self.a == 0

    @property
    def chart(self):
        """Affine coordinate z = b/a; None at infinity."""
        return None if self.is_infinity else self.b

    def sort_key(self):
        return (1,) if self.is_infinity else (0, self.b)

    def __repr__(self):
        return "[0 : 1]" if self.is_infinity else f"[1 : {self.b}]"


@dataclass(frozen=True)
class Place:
    """A closed point of the projective line: a monic irreducible polynomial
    in the chart coordinate, or the point at infinity."""

    at_infinity: bool
    coeffs: tuple  # monic, low-to-high; empty when at infinity

    def __post_init__(self):
        if self.at_infinity:
            object.__setattr__(self, "coeffs", ())
        else:
            coeffs = tuple(frac(x) for x in self.coeffs)
            if len(coeffs) < 2 or coeffs[-1] != 1:
                raise ValueError("finite places are monic polynomials of degree >= 1")
            object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def infinity(cls):
        return cls(True, ())

    @classmethod
    def finite(cls, coeffs):
        return cls(False, tuple(coeffs))

    @classmethod
    def rational(cls, z):
        return cls.finite((-frac(z), Fraction(1)))

    @classmethod
    def of_point(cls, point):
        return cls.infinity() if point.is_infinity else cls.rational(point.chart)

    @property
    def degree(self):
        return 1 if self.at_infinity else len(self.coeffs) - 1

    def rational_point(self):
        """The point, when the place has degree one; None otherwise."""
        if self.at_infinity:
            return ProjPoint.infinity()
        if self.degree == 1:
            return ProjPoint.from_chart(-self.coeffs[0])
        return None

    def sort_key(self):
        return (1, ()) if self.at_infinity else (0, (self.degree, self.coeffs))

    def __repr__(self):
        if self.at_infinity:
            return "Place(inf)"
        return f"Place({self.coeffs})"


@dataclass(frozen=True)
class BinaryForm:
    """A homogeneous form of fixed degree on the projective line (possibly zero)."""

    degree: int
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(frac(x) for x in self.coeffs)
        if self.degree < 0:
            if any(x != 0 for x in coeffs):
                raise ValueError("negative-degree forms must be zero")
            coeffs = ()
        elif len(coeffs) != self.degree + 1:
            raise ValueError(
                f"a degree-{self.degree} form needs {self.degree + 1} coefficients"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, degree):
        return cls(degree, (Fraction(0),) * (degree + 1) if degree >= 0 else ())

    @classmethod
    def constant(cls, value):
        return cls(0, (frac(value),))

    @classmethod
    def from_poly(cls, degree, poly_coeffs):
        """Form of the given degree whose dehomogenization is the polynomial."""
        poly = _trim(poly_coeffs)
        if len(poly) > degree + 1:
            raise ValueError("polynomial degree exceeds the form degree")
        return cls(degree, tuple(poly) + (Fraction(0),) * (degree + 1 - len(poly)))

    @property
    def is_zero(self):
        return all(x == 0 for x in self.coeffs)

    @property
    def poly(self):
        """Dehomogenized coefficients (trailing zeros trimmed)."""
        return _trim(self.coeffs)

    @property
    def poly_degree(self):
        return len(self.poly) - 1 if self.poly else None

    def value_at(self, point):
        a, b = point.a, point.b
        total = Fraction(0)
        for k, c in enumerate(self.coeffs):
            if c != 0:
                total += c * a ** (self.degree - k) * b ** k
        return total

    def scale(self, factor):
        return BinaryForm(self.degree, tuple(frac(factor) * c for c in self.coeffs))

    def mul(self, other):
        if self.is_zero or other.is_zero:
            return BinaryForm.zero(self.degree + other.degree)
        return BinaryForm.from_poly(self.degree + other.degree, poly_mul(self.poly, other.poly))

    def power(self, exponent):
        if exponent < 0:
            raise ValueError("negative powers of forms are not forms")
        out = BinaryForm.constant(1)
        for _ in range(exponent):
            out = out.mul(self)
        return out

    def ord_at(self, place):
        """Vanishing order at a place; infinite for the zero form (returns None)."""
        if self.is_zero:
            return None
        if place.at_infinity:
            return self.degree - self.poly_degree
        count = 0
        rem = self.poly
        while True:
            q, r = poly_divmod(rem, place.coeffs)
            if r:
                return count
            count += 1
            rem = q

    def ord_at_point(self, point):
        return self.ord_at(Place.of_point(point))

    def shift(self, place, exponent):
        """Multiply by place^exponent (divide exactly for negative exponents)."""
        if exponent == 0:
            return self
        new_degree = self.degree + exponent * place.degree
        if self.is_zero:
            return BinaryForm.zero(new_degree)
        if place.at_infinity:
            if exponent < 0 and self.degree - self.poly_degree < -exponent:
                raise ValueError("form is not divisible by the place at infinity")
            return BinaryForm.from_poly(new_degree, self.poly)
        poly = self.poly
        if exponent > 0:
            for _ in range(exponent):
                poly = poly_mul(poly, place.coeffs)
        else:
            for _ in range(-exponent):
                q, r = poly_divmod(poly, place.coeffs)
                if r:
                    raise ValueError("form is not divisible by the given place")
                poly = q
        return BinaryForm.from_poly(new_degree, poly)

    def factor(self):
        """Unit and place multiplicities with
        form = unit * X^(mult at infinity) * prod (monic factor homogenized)^mult."""
        if self.is_zero:
            raise ValueError("the zero form has no factorization")
        out = {}
        inf_mult = self.degree - self.poly_degree
        if inf_mult:
            out[Place.infinity()] = inf_mult
        unit, factors = _factor_poly(self.poly)
        for coeffs, mult in factors:
            out[Place.finite(coeffs)] = mult
        return unit, out

    def __repr__(self):
        return f"BinaryForm(deg={self.degree}, {self.coeffs})"


_Z = sympy.Symbol("z")


@lru_cache(maxsize=None)
def _factor_poly_cached(poly):
    expr = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(poly)],
                      _Z, domain="QQ")
    unit, factors = expr.factor_list()
    unit = Fraction(sympy.Integer(unit.p), sympy.Integer(unit.q)) if unit.is_Rational else None
    if unit is None:
        raise RuntimeError("unexpected non-rational unit from factorization")
    out = []
    for fac, mult in factors:
        coeffs = [Fraction(c.p, c.q) for c in reversed(fac.all_coeffs())]
        lead = coeffs[-1]
        if lead != 1:
            unit *= lead ** mult
            coeffs = [c / lead for c in coeffs]
        out.append((tuple(coeffs), int(mult)))
    return unit, tuple(out)


def _factor_poly(poly):
    poly = _trim(poly)
    if not poly:
        raise ValueError("cannot factor the zero polynomial")
    if len(poly) == 1:
        return poly[0], ()
    return _factor_poly_cached(tuple(poly))


def common_zero_places(forms):
    """Places where every listed form vanishes (zero forms vanish everywhere).

    At least one form must be nonzero; returns places of the gcd's squarefree
    support, with the place at infinity included when all orders there are
    positive.
    """
    nonzero = [f for f in forms if not f.is_zero]
    if not nonzero:
        raise ValueError("all forms vanish identically")
    g = None
    for f in nonzero:
        g = f.poly if g is None else poly_gcd(g, f.poly)
        if g == (Fraction(1),):
            break
    places = []
    if g and len(g) > 1:
        _, factors = _factor_poly(g)
        places.extend(Place.finite(c) for c, _ in factors)
    if all(f.degree - f.poly_degree > 0 for f in nonzero):
        places.append(Place.infinity())
    return places
