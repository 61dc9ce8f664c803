"""Quasimaps from trees of rational curves to a smooth complete toric target.

A quasimap is a tuple of exact binary forms per ray on each component, plus
nodes and markings.  Equivalence of the underlying line-bundle data reduces,
on a tree, to rescaling each component's section tuple by a character-trivial
scalar tuple; all comparisons below work with that model and stay entirely
inside rational arithmetic.
"""

from dataclasses import dataclass
from fractions import Fraction

from .basepoint import INF, OrderVector, degree_at_point, length_at_point
from .classes import CurveClass, anticanonical_class, is_fano
from .fan import dual_basis, primitive_collections, require_valid
from .forms import Place, common_zero_places
from .linalg import integer_kernel_basis


@dataclass(frozen=True)
class Quasimap:
    fan: object
    components: tuple  # per component: tuple of BinaryForm, one per ray
    nodes: tuple = ()  # ((comp, ProjPoint), (comp, ProjPoint)) pairs
    markings: tuple = ()  # (comp, ProjPoint) pairs

    def __post_init__(self):
        comps = tuple(tuple(sec) for sec in self.components)
        object.__setattr__(self, "components", comps)
        nodes = tuple(
            ((int(a), pa), (int(b), pb)) for (a, pa), (b, pb) in self.nodes
        )
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(
            self, "markings", tuple((int(c), p) for c, p in self.markings)
        )

    @property
    def n_components(self):
        return len(self.components)

    def sections(self, comp):
        return self.components[comp]

    def component_degree_vector(self, comp):
        return tuple(f.degree for f in self.components[comp])

    def with_components(self, components):
        return Quasimap(self.fan, tuple(components), self.nodes, self.markings)


@dataclass(frozen=True)
class BasepointPlace:
    component: int
    place: Place
    orders: OrderVector
    degree: CurveClass

    def sort_key(self):
        return (self.component,) + self.place.sort_key()


@dataclass(frozen=True)
class XPoint:
    """A point of the target in a torus chart: chosen cone, chart coordinates,
    and the raw section values it came from."""

    cone: int
    coords: tuple
    cox: tuple


def section_values(q, comp, point):
    return tuple(f.value_at(point) for f in q.sections(comp))


def _chart_coords(fan, cone_index, values):
    cone = fan.max_cones[cone_index]
    duals = dual_basis(fan, cone)
    coords = []
    for m in duals:
        val = Fraction(1)
        for rho in range(fan.n_rays):
            e = sum(mi * ui for mi, ui in zip(m, fan.rays[rho]))
            if e == 0:
                continue
            v = values[rho]
            if v == 0:
                if e > 0:
                    val = Fraction(0)
                    break
                raise ZeroDivisionError("vanishing coordinate with negative exponent")
            val *= Fraction(v) ** e
        coords.append(val)
    return tuple(coords)


def xpoint_from_values(fan, values):
    """Chart representation of a non-degenerate Cox value tuple."""
    zero = {i for i, v in enumerate(values) if v == 0}
    for idx, cone in enumerate(fan.max_cones):
        if zero <= set(cone):
            return XPoint(idx, _chart_coords(fan, idx, values), tuple(values))
    raise ValueError("value tuple is degenerate (a basepoint)")


def x_points_equal(fan, p, r):
    zp = tuple(v == 0 for v in p.cox)
    zr = tuple(v == 0 for v in r.cox)
    if zp != zr:
        return False
    zero = {i for i, z in enumerate(zp) if z}
    for idx, cone in enumerate(fan.max_cones):
        if zero <= set(cone):
            return _chart_coords(fan, idx, p.cox) == _chart_coords(fan, idx, r.cox)
    return False


def evaluate(q, comp, point):
    """Evaluate the quasimap at a non-basepoint: a cone and its chart coordinates."""
    values = section_values(q, comp, point)
    try:
        return xpoint_from_values(q.fan, values)
    except ValueError:
        raise ValueError(f"cannot evaluate at {point}: the point is a basepoint")


def _component_vanishing(q, comp):
    return frozenset(i for i, f in enumerate(q.sections(comp)) if f.is_zero)


def _order_vector_at(q, comp, place):
    orders = []
    for f in q.sections(comp):
        o = f.ord_at(place)
        orders.append(INF if o is None else o)
    return OrderVector(q.fan, tuple(orders))


def basepoints(q):
    """All basepoint places with their order vectors and degrees.

    Conjugate basepoints sharing an irreducible minimal polynomial over the
    rationals are reported as one place; degree bookkeeping weights them by
    the place degree.
    """
    fan = q.fan
    out = []
    for comp in range(q.n_components):
        secs = q.sections(comp)
        places = {}
        for pc in primitive_collections(fan):
            group = [secs[i] for i in sorted(pc)]
            if all(f.is_zero for f in group):
                raise ValueError(
                    f"component {comp} vanishes on the primitive collection {tuple(sorted(pc))}"
                )
            for place in common_zero_places(group):
                places[place] = True
        for place in sorted(places, key=lambda p: p.sort_key()):
            orders = _order_vector_at(q, comp, place)
            beta, _ = degree_at_point(fan, orders)
            out.append(BasepointPlace(comp, place, orders, beta))
    return tuple(sorted(out, key=lambda b: b.sort_key()))


def point_is_basepoint(q, comp, point):
    values = section_values(q, comp, point)
    zero = {i for i, v in enumerate(values) if v == 0}
    return not any(zero <= set(cone) for cone in q.fan.max_cones)


def validate_quasimap(q):
    """Check all quasimap invariants; returns a list of violations."""
    fan = q.fan
    report = []
    try:
        require_valid(fan)
    except ValueError as exc:
        return [str(exc)]
    if q.n_components == 0:
        return ["a quasimap needs at least one component"]
    for comp, secs in enumerate(q.components):
        if len(secs) != fan.n_rays:
            report.append(f"component {comp} does not have one section per ray")
    if report:
        return report

    for comp in range(q.n_components):
        degs = q.component_degree_vector(comp)
        try:
            CurveClass(fan, degs)
        except ValueError:
            report.append(
                f"component {comp} degrees {degs} violate the ray relations"
            )
        vanishing = _component_vanishing(q, comp)
        for pc in primitive_collections(fan):
            if pc <= vanishing:
                report.append(
                    f"component {comp} is degenerate: sections of the primitive "
                    f"collection {tuple(sorted(pc))} all vanish identically"
                )
    if report:
        return report

    # tree shape
    adjacency = {i: set() for i in range(q.n_components)}
    for (a, _), (b, _) in q.nodes:
        if not (0 <= a < q.n_components and 0 <= b < q.n_components):
            report.append("node references a missing component")
            return report
        if a == b:
            report.append("a node cannot join a component to itself")
            return report
        adjacency[a].add(b)
        adjacency[b].add(a)
    if len(q.nodes) != q.n_components - 1:
        report.append("the dual graph is not a tree (wrong node count)")
    else:
        seen = {0}
        stack = [0]
        while stack:
            for nxt in adjacency[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if len(seen) != q.n_components:
            report.append("the dual graph is not connected")
    if report:
        return report

    special = {}
    for (a, pa), (b, pb) in q.nodes:
        special.setdefault(a, []).append(pa)
        special.setdefault(b, []).append(pb)
    for comp, point in q.markings:
        if not 0 <= comp < q.n_components:
            report.append("marking references a missing component")
            return report
        special.setdefault(comp, []).append(point)
    for comp, pts in special.items():
        if len(set(pts)) != len(pts):
            report.append(f"special points on component {comp} are not distinct")

    for comp, point in list(q.markings) + [e for n in q.nodes for e in n]:
        if point_is_basepoint(q, comp, point):
            report.append(f"special point {point} on component {comp} is a basepoint")
    if report:
        return report

    for (a, pa), (b, pb) in q.nodes:
        va = evaluate(q, a, pa)
        vb = evaluate(q, b, pb)
        if not x_points_equal(fan, va, vb):
            report.append(
                f"node between components {a} and {b} does not glue: the two "
                "branches evaluate to different points"
            )
    return report


def degrees(q):
    """Total and per-component curve classes of the quasimap."""
    per_comp = tuple(
        CurveClass(q.fan, q.component_degree_vector(c)) for c in range(q.n_components)
    )
    total = per_comp[0]
    for beta in per_comp[1:]:
        total = total + beta
    return total, per_comp


def extend_at(q, comp, place, beta):
    """Twist one component at one place by minus the given class (local extension)."""
    new = list(q.components)
    secs = list(new[comp])
    for rho, f in enumerate(secs):
        secs[rho] = f.shift(place, -beta.pairings[rho])
    new[comp] = tuple(secs)
    return q.with_components(new)


def regular_extension(q):
    """The basepoint-free quasimap obtained by twisting away every basepoint."""
    out = q
    for bp in basepoints(q):
        out = extend_at(out, bp.component, bp.place, bp.degree)
    return out


def special_point_count(q, comp):
    count = sum(1 for c, _ in q.markings if c == comp)
    for (a, _), (b, _) in q.nodes:
        count += (a == comp) + (b == comp)
    return count


def stability(q, mode="quasimap", ample=None):
    """Stability of the quasimap (all components rational, genus zero).

    In quasimap mode a component with fewer than two special points fails and
    one with exactly two needs nonzero degree.  In map mode the input must be
    basepoint-free and each component needs
    2g-2 + #special + 2 * (ample degree) > 0, with the anticanonical class as
    the polarization on Fano targets.
    """
    fan = q.fan
    _, per_comp = degrees(q)
    if mode == "quasimap":
        for comp in range(q.n_components):
            k = -2 + special_point_count(q, comp)
            if k < 0:
                return False
            if k == 0 and per_comp[comp].is_zero():
                return False
        return True
    if mode == "map":
        if basepoints(q):
            raise ValueError("map-mode stability needs a basepoint-free quasimap")
        if ample is None:
            if not is_fano(fan):
                raise ValueError("non-Fano target: supply an ample class")
            ample = anticanonical_class(fan)
        for comp in range(q.n_components):
            k = -2 + special_point_count(q, comp)
            if k + 2 * ample.pair(per_comp[comp]) <= 0:
                return False
        return True
    raise ValueError(f"unknown stability mode {mode!r}")


def character_lattice_orthogonal_to(fan, rays):
    """Basis of the characters vanishing on the given rays."""
    mat = [list(fan.rays[i]) for i in sorted(rays)]
    if not mat:
        return [tuple(int(i == j) for i in range(fan.dim)) for j in range(fan.dim)]
    return integer_kernel_basis(mat)


def same_morphism_sections(fan, first, second):
    """Whether two basepoint-free section tuples on one rational component
    define the same morphism to the target.

    The tuples must be proportional ray by ray, with the ratio tuple killed by
    every character orthogonal to the identically-vanishing rays.
    """
    zero1 = frozenset(i for i, f in enumerate(first) if f.is_zero)
    zero2 = frozenset(i for i, f in enumerate(second) if f.is_zero)
    if zero1 != zero2:
        return False
    ratios = {}
    for rho, (f, g) in enumerate(zip(first, second)):
        if rho in zero1:
            if f.degree != g.degree:
                return False
            continue
        if f.degree != g.degree:
            return False
        fp, gp = f.poly, g.poly
        if len(fp) != len(gp):
            return False
        lam = gp[-1] / fp[-1]
        if tuple(lam * c for c in fp) != gp:
            return False
        ratios[rho] = lam
    for m in character_lattice_orthogonal_to(fan, zero1):
        prod = Fraction(1)
        for rho, lam in ratios.items():
            e = sum(mi * ui for mi, ui in zip(m, fan.rays[rho]))
            if e:
                prod *= lam ** e
        if prod != 1:
            return False
    return True


def _node_key(node):
    (a, pa), (b, pb) = node
    ka = (a, pa.sort_key())
    kb = (b, pb.sort_key())
    return (ka, kb) if ka <= kb else (kb, ka)


def same_curve(q1, q2):
    if q1.n_components != q2.n_components:
        return False
    if sorted(map(_node_key, q1.nodes)) != sorted(map(_node_key, q2.nodes)):
        return False
    return q1.markings == q2.markings


def equal_quasimaps(q1, q2):
    """Equality of quasimaps on a common curve: equal regular extensions,
    equal basepoint places and equal degrees at every basepoint."""
    if q1.fan != q2.fan:
        raise ValueError("quasimaps to different targets are incomparable")
    if not same_curve(q1, q2):
        raise ValueError("quasimaps on different curves are incomparable")
    bp1 = basepoints(q1)
    bp2 = basepoints(q2)
    if len(bp1) != len(bp2):
        return False
    for a, b in zip(bp1, bp2):
        if a.component != b.component or a.place != b.place:
            return False
        if a.degree.pairings != b.degree.pairings:
            return False
    r1 = regular_extension(q1)
    r2 = regular_extension(q2)
    return all(
        same_morphism_sections(q1.fan, r1.sections(c), r2.sections(c))
        for c in range(q1.n_components)
    )


def basepoint_length(q, bp):
    """Length of the quasimap at a basepoint place."""
    return length_at_point(q.fan, bp.orders)
