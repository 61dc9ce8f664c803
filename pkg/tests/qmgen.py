"""Random generators for fans' quasimaps used across the test suite.

Everything is driven by a seeded random.Random so failures reproduce; the
generators retry until the produced data passes validate_quasimap, which
keeps them honest about the invariants rather than constructing around them.
"""

from fractions import Fraction

from toriq.classes import effective_classes, length
from toriq.forms import BinaryForm, Place, ProjPoint, poly_mul
from toriq.quasimap import (Quasimap, basepoints, extend_at, point_is_basepoint,
                            validate_quasimap)


class GiveUp(Exception):
    pass


def random_effective_class(fan, rng, max_len, allow_zero=False):
    pool = effective_classes(fan, max_len)
    if not allow_zero:
        pool = [c for c in pool if not c.is_zero()]
    if not pool:
        raise GiveUp(f"no effective classes of length <= {max_len}")
    return rng.choice(pool)


def random_form(rng, degree, value=None, at=None, span=2):
    """Random form of the given degree; optionally forces f(at) = value."""
    if degree < 0:
        return BinaryForm.zero(degree)
    if value is None:
        coeffs = [Fraction(rng.randint(-span, span)) for _ in range(degree + 1)]
        if all(c == 0 for c in coeffs):
            coeffs[rng.randrange(degree + 1)] = Fraction(rng.choice([1, -1, 2]))
        return BinaryForm(degree, tuple(coeffs))
    value = Fraction(value)
    c = at.chart
    if degree == 0:
        return BinaryForm.constant(value)
    rest = [Fraction(rng.randint(-span, span)) for _ in range(degree)]
    if value == 0 and all(x == 0 for x in rest):
        rest[rng.randrange(degree)] = Fraction(1)
    # f = value + (z - c) * g
    poly = tuple([value]) if not rest else tuple(
        [value - c * rest[0]]
        + [rest[i] - c * rest[i + 1] for i in range(len(rest) - 1)]
        + [rest[-1]]
    )
    return BinaryForm.from_poly(degree, poly)


def _section_tuple(fan, rng, beta, prescribed=None, attempts=60):
    """Random per-ray sections of the given class; ``prescribed`` optionally
    fixes the value tuple at one point."""
    from toriq.fan import primitive_collections

    for _ in range(attempts):
        forms = []
        ok = True
        for rho in range(fan.n_rays):
            d = beta.pairings[rho]
            if prescribed is None:
                if d < 0:
                    forms.append(BinaryForm.zero(d))
                else:
                    forms.append(random_form(rng, d))
                continue
            point, values = prescribed
            if d < 0:
                if values[rho] != 0:
                    ok = False
                    break
                forms.append(BinaryForm.zero(d))
            else:
                forms.append(random_form(rng, d, value=values[rho], at=point))
        if not ok:
            continue
        vanishing = {i for i, f in enumerate(forms) if f.is_zero}
        if any(set(pc) <= vanishing for pc in primitive_collections(fan)):
            continue
        return tuple(forms)
    raise GiveUp("could not build a section tuple for the requested class")


def random_quasimap(fan, rng, max_components=3, max_total_length=8, markings=2,
                    attempts=80):
    """A random valid quasimap on a small tree; not necessarily stable."""
    for _ in range(attempts):
        try:
            k = rng.randint(1, max_components)
            budget = max_total_length
            classes = []
            for i in range(k):
                cap = max(budget - (k - 1 - i), 1)
                beta = random_effective_class(fan, rng, cap)
                classes.append(beta)
                budget -= length(beta)
                if budget < 0:
                    raise GiveUp("length budget exceeded")
            parents = [None] + [rng.randrange(i) for i in range(1, k)]
            fresh = iter(range(0, 40))

            comps = [None] * k
            comps[0] = _section_tuple(fan, rng, classes[0])
            node_specs = []
            used_points = {0: set()}
            q_partial = None
            for child in range(1, k):
                parent = parents[child]
                for _ in range(20):
                    zc = next(fresh)
                    ppoint = ProjPoint(1, zc)
                    if ppoint not in used_points.get(parent, set()):
                        break
                parent_tuple = comps[parent]
                values = tuple(f.value_at(ppoint) for f in parent_tuple)
                zero = {i for i, v in enumerate(values) if v == 0}
                from toriq.fan import primitive_collections

                if any(set(pc) <= zero for pc in primitive_collections(fan)):
                    raise GiveUp("node lands on a basepoint of the parent")
                cpoint = ProjPoint(1, next(fresh))
                comps[child] = _section_tuple(fan, rng, classes[child],
                                              prescribed=(cpoint, values))
                used_points.setdefault(parent, set()).add(ppoint)
                used_points.setdefault(child, set()).add(cpoint)
                node_specs.append(((parent, ppoint), (child, cpoint)))

            marks = []
            for _ in range(markings):
                comp = rng.randrange(k)
                for _ in range(30):
                    mpoint = ProjPoint(1, next(fresh))
                    if mpoint in used_points.get(comp, set()):
                        continue
                    probe = Quasimap(fan, tuple(comps))
                    if point_is_basepoint(probe, comp, mpoint):
                        continue
                    used_points.setdefault(comp, set()).add(mpoint)
                    marks.append((comp, mpoint))
                    break
                else:
                    raise GiveUp("no room for a marking")

            q = Quasimap(fan, tuple(comps), tuple(node_specs), tuple(marks))
            if validate_quasimap(q):
                continue
            return q
        except GiveUp:
            continue
    raise GiveUp("random_quasimap ran out of attempts")


def random_stable_quasimap(fan, rng, max_total_length=6, attempts=120):
    """A stable quasimap on one component with rational basepoints only."""
    for _ in range(attempts):
        try:
            n_bp = rng.randint(1, 2)
            bp_classes = []
            budget = max_total_length
            for _ in range(n_bp):
                beta = random_effective_class(fan, rng, max(budget - 1, 1))
                bp_classes.append(beta)
                budget -= length(beta)
            if budget < 0:
                continue
            gamma = random_effective_class(fan, rng, max(budget, 0), allow_zero=True)
            bp_points = rng.sample([ProjPoint(1, z) for z in range(5)], n_bp)

            # base map sections vanish at each basepoint enough to absorb the twist
            forms = []
            feasible = True
            for rho in range(fan.n_rays):
                needed = [max(0, -b.pairings[rho]) for b in bp_classes]
                d = gamma.pairings[rho]
                if d < sum(needed):
                    feasible = False
                    break
                poly = (Fraction(1),)
                for point, m in zip(bp_points, needed):
                    for _ in range(m):
                        poly = poly_mul(poly, (-point.chart, Fraction(1)))
                free = d - sum(needed)
                filler = random_form(rng, free)
                forms.append(BinaryForm.from_poly(d, poly_mul(poly, filler.poly)))
            if not feasible:
                continue
            base = Quasimap(fan, (tuple(forms),))
            if validate_quasimap(base) or basepoints(base):
                continue
            q = base
            for point, beta in zip(bp_points, bp_classes):
                q = extend_at(q, 0, Place.of_point(point), -1 * beta)

            marks = []
            for z in range(5, 20):
                if len(marks) == 2:
                    break
                mpoint = ProjPoint(1, z)
                if mpoint in bp_points or point_is_basepoint(q, 0, mpoint):
                    continue
                marks.append((0, mpoint))
            if len(marks) < 2:
                continue
            q = Quasimap(fan, q.components, (), tuple(marks))
            if validate_quasimap(q):
                continue
            bps = basepoints(q)
            if len(bps) != n_bp:
                continue
            if any(bp.place.rational_point() is None for bp in bps):
                continue
            return q
        except GiveUp:
            continue
    raise GiveUp("random_stable_quasimap ran out of attempts")


def random_order_vector(fan, rng, max_order=4, inf_prob=0.25):
    """A random valid order vector (vanishing set contains no primitive collection)."""
    from toriq.basepoint import INF, OrderVector
    from toriq.fan import primitive_collections

    while True:
        orders = tuple(
            INF if rng.random() < inf_prob else rng.randint(0, max_order)
            for _ in range(fan.n_rays)
        )
        vanishing = {i for i, o in enumerate(orders) if o is INF}
        if any(set(pc) <= vanishing for pc in primitive_collections(fan)):
            continue
        return OrderVector(fan, orders)
