"""Curve and divisor class lattices of a smooth complete toric fan.

Curve classes are stored as their full intersection pairing vector against
the toric boundary divisors; divisor classes in the anchor basis given by the
boundary divisors away from the fan's first maximal cone.  Effectivity is
membership in the rational cone spanned by the wall curve classes, decided
exactly through the dual (nef) cone.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

from .fan import dual_basis, require_valid, walls
from .linalg import frac, kernel_basis, primitive_vector


def _normalize_scalar(x):
    f = frac(x)
    return int(f) if f.denominator == 1 else f


@dataclass(frozen=True)
class CurveClass:
    """A 1-cycle class, as the vector of its pairings with the boundary divisors."""

    fan: object
    pairings: tuple

    def __post_init__(self):
        vals = tuple(_normalize_scalar(x) for x in self.pairings)
        object.__setattr__(self, "pairings", vals)
        if len(vals) != self.fan.n_rays:
            raise ValueError("pairing vector length does not match the ray count")
        for coord in range(self.fan.dim):
            if sum(frac(d) * self.fan.rays[i][coord] for i, d in enumerate(vals)) != 0:
                raise ValueError(f"pairing vector {vals} is not a curve class "
                                 "(it pairs inconsistently with the ray relations)")

    @property
    def anchor_coords(self):
        anchor = anchor_rays(self.fan)
        return tuple(self.pairings[i] for i in anchor)

    def is_zero(self):
        return all(x == 0 for x in self.pairings)

    def __add__(self, other):
        return CurveClass(self.fan, tuple(a + b for a, b in zip(self.pairings, other.pairings)))

    def __sub__(self, other):
        return CurveClass(self.fan, tuple(a - b for a, b in zip(self.pairings, other.pairings)))

    def __mul__(self, k):
        return CurveClass(self.fan, tuple(k * a for a in self.pairings))

    __rmul__ = __mul__


@dataclass(frozen=True)
class DivisorClass:
    """A divisor class in the anchor basis of the fan's first maximal cone."""

    fan: object
    coords: tuple

    def __post_init__(self):
        vals = tuple(_normalize_scalar(x) for x in self.coords)
        object.__setattr__(self, "coords", vals)
        if len(vals) != len(anchor_rays(self.fan)):
            raise ValueError("coordinate length does not match the Picard rank")

    def pair(self, beta):
        """Intersection number with a curve class."""
        anchor = anchor_rays(self.fan)
        return sum(c * beta.pairings[i] for c, i in zip(self.coords, anchor))

    def __add__(self, other):
        return DivisorClass(self.fan, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __mul__(self, k):
        return DivisorClass(self.fan, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def ray_coefficients(self):
        """A representative as integer coefficients over all boundary divisors."""
        coeffs = [0] * self.fan.n_rays
        for c, i in zip(self.coords, anchor_rays(self.fan)):
            coeffs[i] = c
        return tuple(coeffs)


@lru_cache(maxsize=None)
def anchor_rays(fan):
    """Ray indices outside the first maximal cone; their divisors form a Pic basis."""
    sigma0 = set(fan.max_cones[0])
    return tuple(i for i in range(fan.n_rays) if i not in sigma0)


def picard_rank(fan):
    return fan.n_rays - fan.dim


@lru_cache(maxsize=None)
def divisor_class(fan, rho):
    """The class of the boundary divisor attached to ray ``rho`` in the anchor basis."""
    require_valid(fan)
    anchor = anchor_rays(fan)
    if rho in anchor:
        return DivisorClass(fan, tuple(int(i == rho) for i in anchor))
    sigma0 = fan.max_cones[0]
    pos = sigma0.index(rho)
    m = dual_basis(fan, sigma0)[pos]
    coords = tuple(-sum(mi * ui for mi, ui in zip(m, fan.rays[i])) for i in anchor)
    return DivisorClass(fan, coords)


def divisor_from_ray_coefficients(fan, coeffs):
    """Anchor-basis class of an integer combination of boundary divisors."""
    total = None
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        term = c * divisor_class(fan, i)
        total = term if total is None else total + term
    if total is None:
        return DivisorClass(fan, (0,) * len(anchor_rays(fan)))
    return total


@lru_cache(maxsize=None)
def anticanonical_class(fan):
    return divisor_from_ray_coefficients(fan, (1,) * fan.n_rays)


def beta_a_sigma(fan, a, sigma):
    """The unique curve class pairing as prescribed with the divisors off a cone.

    ``a`` maps ray indices outside the maximal cone ``sigma`` to values
    (sequence indexed by rays, or a dict); rational values are allowed.  The
    pairings on the cone's own rays are forced by the ray relations.
    """
    require_valid(fan)
    sigma = tuple(sorted(sigma))
    if sigma not in fan.max_cones:
        raise ValueError(f"{sigma} is not a maximal cone")
    complement = fan.cone_complement(sigma)
    values = {i: frac(a[i]) for i in complement}
    duals = dual_basis(fan, sigma)
    pairings = [Fraction(0)] * fan.n_rays
    for i in complement:
        pairings[i] = values[i]
    for pos, rho in enumerate(sigma):
        m = duals[pos]
        pairings[rho] = -sum(
            values[i] * sum(mi * ui for mi, ui in zip(m, fan.rays[i])) for i in complement
        )
    return CurveClass(fan, tuple(pairings))


def curve_class_from_anchor(fan, coords):
    """Curve class with the given pairings against the anchor divisors."""
    anchor = anchor_rays(fan)
    if len(coords) != len(anchor):
        raise ValueError("coordinate length does not match the Picard rank")
    a = {i: c for i, c in zip(anchor, coords)}
    return beta_a_sigma(fan, a, fan.max_cones[0])


@lru_cache(maxsize=None)
def wall_curve_classes(fan):
    """One curve class per wall, read off the relation between the adjacent cones.

    The order matches ``fan.walls``; these classes generate the cone of
    effective curve classes.
    """
    require_valid(fan)
    out = []
    for facet, (ci, cj) in walls(fan):
        extra_i = next(iter(set(fan.max_cones[ci]) - set(facet)))
        extra_j = next(iter(set(fan.max_cones[cj]) - set(facet)))
        # u_extra_j = -u_extra_i + sum c_rho u_rho over the wall rays, so the
        # relation u_extra_i + u_extra_j - sum c_rho u_rho = 0 gives the pairings.
        duals = dual_basis(fan, fan.max_cones[ci])
        coords = [sum(m * u for m, u in zip(duals[pos], fan.rays[extra_j]))
                  for pos in range(fan.dim)]
        pairings = [0] * fan.n_rays
        pairings[extra_i] = 1
        pairings[extra_j] = 1
        for pos, rho in enumerate(fan.max_cones[ci]):
            if rho == extra_i:
                continue
            pairings[rho] = _normalize_scalar(-coords[pos])
        out.append(CurveClass(fan, tuple(pairings)))
    return tuple(out)


@lru_cache(maxsize=None)
def _mori_generators_anchor(fan):
    seen = []
    for beta in wall_curve_classes(fan):
        vec = beta.anchor_coords
        if vec not in seen:
            seen.append(vec)
    return tuple(seen)


@lru_cache(maxsize=None)
def nef_extreme_rays(fan):
    """Primitive generators of the nef cone, as anchor-basis divisor classes."""
    require_valid(fan)
    gens = _mori_generators_anchor(fan)
    rank = picard_rank(fan)
    if rank == 0:
        return ()
    candidates = set()
    if rank == 1:
        pool = [(1,), (-1,)]
    else:
        pool = []
        for subset in combinations(gens, rank - 1):
            kern = kernel_basis([list(v) for v in subset])
            if len(kern) != 1:
                continue
            vec = primitive_vector(kern[0])
            pool.extend([vec, tuple(-x for x in vec)])
    for vec in pool:
        if all(sum(frac(a) * frac(b) for a, b in zip(vec, g)) >= 0 for g in gens):
            candidates.add(tuple(_normalize_scalar(x) for x in vec))
    return tuple(DivisorClass(fan, c) for c in sorted(candidates))


def is_effective(beta):
    """Membership of a curve class in the cone spanned by the wall classes."""
    fan = beta.fan
    return all(d.pair(beta) >= 0 for d in nef_extreme_rays(fan))


def is_nef(divisor):
    fan = divisor.fan
    return all(divisor.pair(w) >= 0 for w in wall_curve_classes(fan))


def is_ample(divisor):
    fan = divisor.fan
    return all(divisor.pair(w) > 0 for w in wall_curve_classes(fan))


@lru_cache(maxsize=None)
def is_fano(fan):
    return is_ample(anticanonical_class(fan))


@lru_cache(maxsize=None)
def ample_functional(fan):
    """A canonical ample class; raises when the fan is not projective."""
    basis = nef_hilbert_basis(fan)
    total = None
    for d in basis:
        total = d if total is None else total + d
    if total is None or not is_ample(total):
        raise ValueError("no ample class: the fan is not projective")
    return total


def length(beta):
    """Anticanonical degree of a curve class: the sum of its pairings."""
    return sum(beta.pairings)


def _truncated_cone_lattice_points(generators, is_member, functional, bound):
    """Lattice points x of a cone with functional(x) <= bound.

    ``generators`` span the cone (ints, anchor coordinates), ``is_member``
    decides membership, ``functional`` is linear with integer values on the
    lattice and positive on every generator.
    """
    if bound < 0:
        return []
    rank = len(generators[0]) if generators else 0
    if rank == 0:
        return [()]
    vertices = [tuple(Fraction(0) for _ in range(rank))]
    for g in generators:
        f = functional(g)
        if f <= 0:
            raise ValueError("functional is not positive on a cone generator")
        vertices.append(tuple(Fraction(bound, 1) * frac(x) / f for x in g))
    lo = [min(v[i] for v in vertices) for i in range(rank)]
    hi = [max(v[i] for v in vertices) for i in range(rank)]
    ranges = [range(int(l.__ceil__()), int(h.__floor__()) + 1) for l, h in zip(lo, hi)]
    points = []
    for point in product(*ranges):
        if functional(point) <= bound and is_member(point):
            points.append(tuple(point))
    return points


def effective_classes(fan, bound, functional=None):
    """All effective curve classes with functional value at most ``bound``.

    The functional defaults to the anticanonical degree when that is positive
    on the whole effective cone (the Fano case) and to a fixed ample degree
    otherwise; either way the enumeration is finite and exact.
    """
    require_valid(fan)
    gens = _mori_generators_anchor(fan)
    if not gens:
        return [CurveClass(fan, (0,) * fan.n_rays)] if bound >= 0 else []
    nef = nef_extreme_rays(fan)
    anchor = anchor_rays(fan)

    if functional is None:
        anti = anticanonical_class(fan)
        if all(anti.pair(curve_class_from_anchor(fan, g)) > 0 for g in gens):
            functional = anti
        else:
            functional = ample_functional(fan)
    fun_anchor = [functional.coords[i] for i in range(len(anchor))]

    def fun(vec):
        return sum(a * b for a, b in zip(fun_anchor, vec))

    def member(vec):
        return all(sum(c * v for c, v in zip(d.coords, vec)) >= 0 for d in nef)

    pts = _truncated_cone_lattice_points([list(g) for g in gens], member, fun, bound)
    return [curve_class_from_anchor(fan, p) for p in sorted(pts)]


@lru_cache(maxsize=None)
def nef_hilbert_basis(fan):
    """A minimal generating set of the semigroup of nef divisor classes."""
    require_valid(fan)
    gens = _mori_generators_anchor(fan)
    rank = picard_rank(fan)
    if rank == 0:
        return ()
    extremes = nef_extreme_rays(fan)
    if not extremes:
        raise ValueError("nef cone has no extreme rays (fan not projective?)")

    def fun(vec):
        return sum(sum(g[i] * vec[i] for i in range(rank)) for g in gens)

    def member(vec):
        return all(sum(g[i] * vec[i] for i in range(rank)) >= 0 for g in gens)

    cap = fun([sum(d.coords[i] for d in extremes) for i in range(rank)])
    pts = [p for p in _truncated_cone_lattice_points(
        [list(d.coords) for d in extremes], member, fun, cap) if any(x != 0 for x in p)]
    values = {p: fun(p) for p in pts}
    basis = []
    for p in pts:
        reducible = False
        for q in pts:
            if values[q] >= values[p]:
                continue
            rest = tuple(a - b for a, b in zip(p, q))
            if any(x != 0 for x in rest) and member(rest):
                reducible = True
                break
        if not reducible:
            basis.append(p)
    return tuple(DivisorClass(fan, p) for p in sorted(basis))


def factorizations(fan, beta, bound=None):
    """All splittings of an effective class into two nonzero effective parts.

    Deeper factorizations follow by recursion; the empty answer characterizes
    irreducible classes.  On non-Fano projective fans the search is bounded by
    an ample degree, so it stays finite either way; ``bound`` optionally caps
    the functional value of the candidate summands.
    """
    if not is_effective(beta) or beta.is_zero():
        raise ValueError("factorizations are defined for nonzero effective classes")
    anti = anticanonical_class(fan)
    gens = _mori_generators_anchor(fan)
    if all(anti.pair(curve_class_from_anchor(fan, g)) > 0 for g in gens):
        functional = anti
    else:
        functional = ample_functional(fan)
    total = functional.pair(beta)
    cap = total - 1
    if bound is not None:
        cap = min(cap, bound)
    pairs = []
    seen = set()
    for part in effective_classes(fan, cap, functional=functional):
        if part.is_zero():
            continue
        rest = beta - part
        if rest.is_zero() or not is_effective(rest):
            continue
        key = tuple(sorted([part.anchor_coords, rest.anchor_coords]))
        if key in seen:
            continue
        seen.add(key)
        pairs.append((curve_class_from_anchor(fan, key[0]), curve_class_from_anchor(fan, key[1])))
    pairs.sort(key=lambda pr: (pr[0].anchor_coords, pr[1].anchor_coords))
    return pairs


def is_irreducible(fan, beta):
    return not factorizations(fan, beta)


def relaxed_surjectivity_condition(fan, length_bound=None):
    """Check the surjectivity hypothesis that replaces Fano.

    Every effective, nonzero, non-irreducible class with some pairing equal
    to 1 must pair positively with a second divisor.  Enumeration runs over
    all effective classes up to the given length bound (anticanonical degree
    in the Fano case, a fixed ample degree otherwise).
    """
    if length_bound is None:
        raise ValueError("relaxed-condition query requires a length bound")
    for beta in effective_classes(fan, length_bound):
        if beta.is_zero():
            continue
        positive = [i for i, d in enumerate(beta.pairings) if d > 0]
        if len(positive) == 1 and beta.pairings[positive[0]] == 1:
            if not is_irreducible(fan, beta):
                return False
    return True


def cone_tests(fan, query, *, curve=None, divisor=None, length_bound=None):
    """Dispatch the boolean cone queries by name (CLI surface)."""
    if query == "is_effective":
        return is_effective(curve)
    if query == "is_nef":
        return is_nef(divisor)
    if query == "is_ample":
        return is_ample(divisor)
    if query == "is_fano":
        return is_fano(fan)
    if query == "relaxed_surjectivity_condition":
        return relaxed_surjectivity_condition(fan, length_bound)
    raise ValueError(f"unknown cone query {query!r}")
