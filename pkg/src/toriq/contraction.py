"""Map-to-quasimap contraction, grafting, pruning and the witness search.

A stable map here is a basepoint-free quasimap passing map-mode stability.
Its rational tails are the maximal unmarked subtrees hanging off the marked
hull at a single node; contracting them twists the kept sections at each
attaching point by the tail's total class, which turns every attaching point
into a basepoint of exactly that degree.  Grafting is the inverse surgery,
and the witness search runs it at each basepoint with deterministic tail
sections until the quasimap becomes a stable map again.
"""

from dataclasses import dataclass
from fractions import Fraction

from .classes import (CurveClass, ample_functional, is_fano, length,
                      relaxed_surjectivity_condition)
from .forms import BinaryForm, Place, ProjPoint, poly_mul
from .quasimap import (Quasimap, basepoints, degrees, equal_quasimaps, extend_at,
                       section_values, special_point_count, stability,
                       validate_quasimap, x_points_equal, xpoint_from_values)


@dataclass(frozen=True)
class Tail:
    components: frozenset
    host: int
    host_point: object


@dataclass(frozen=True)
class StableMapTree:
    """A basepoint-free, map-stable quasimap, validated on construction.

    Map stability is checked against the anticanonical polarization on Fano
    targets and the canonical ample class otherwise (with at least one marking
    the outcome does not depend on that choice); pass ``ample`` to force one.
    """

    quasimap: Quasimap
    ample: object = None

    def __post_init__(self):
        q = self.quasimap
        violations = validate_quasimap(q)
        if violations:
            raise ValueError("invalid map data: " + "; ".join(violations))
        if basepoints(q):
            raise ValueError("a stable map cannot have basepoints")
        ample = self.ample
        if ample is None and not is_fano(q.fan):
            ample = ample_functional(q.fan)
        if not stability(q, "map", ample=ample):
            raise ValueError("the map is not stable")

    @property
    def tails(self):
        return rational_tails(self.quasimap)


def _as_quasimap(f):
    return f.quasimap if isinstance(f, StableMapTree) else f


def rational_tails(q):
    """Maximal unmarked subtrees attached to the rest of the curve at one node."""
    marked = {c for c, _ in q.markings}
    if not marked:
        return ()
    adjacency = {i: [] for i in range(q.n_components)}
    for idx, ((a, pa), (b, pb)) in enumerate(q.nodes):
        adjacency[a].append((b, idx))
        adjacency[b].append((a, idx))

    # hull: components on paths between marked components
    hull = set()
    root = next(iter(marked))
    parent = {root: None}
    order = [root]
    stack = [root]
    while stack:
        cur = stack.pop()
        for nxt, _ in adjacency[cur]:
            if nxt not in parent:
                parent[nxt] = cur
                order.append(nxt)
                stack.append(nxt)
    for comp in marked:
        cur = comp
        while cur is not None:
            hull.add(cur)
            cur = parent[cur]

    tails = []
    seen = set()
    for host in sorted(hull):
        for nxt, node_idx in adjacency[host]:
            if nxt in hull or nxt in seen:
                continue
            group = {nxt}
            stack = [nxt]
            while stack:
                cur = stack.pop()
                for other, _ in adjacency[cur]:
                    if other not in hull and other not in group:
                        group.add(other)
                        stack.append(other)
            seen |= group
            (a, pa), (b, pb) = q.nodes[node_idx]
            host_point = pa if a == host else pb
            tails.append(Tail(frozenset(group), host, host_point))
    return tuple(sorted(tails, key=lambda t: (t.host, t.host_point.sort_key())))


def _tail_class(q, tail):
    _, per_comp = degrees(q)
    total = None
    for comp in sorted(tail.components):
        total = per_comp[comp] if total is None else total + per_comp[comp]
    return total


def contraction_condition(f):
    """Per-tail and overall admissibility of the contraction.

    A tail passes when the kept sections' orders at the attaching point
    absorb the twist by the tail's class."""
    q = _as_quasimap(f)
    place_results = []
    for tail in rational_tails(q):
        beta = _tail_class(q, tail)
        place = Place.of_point(tail.host_point)
        ok = True
        for rho, form in enumerate(q.sections(tail.host)):
            o = form.ord_at(place)
            if o is None:
                continue
            if o + beta.pairings[rho] < 0:
                ok = False
                break
        place_results.append((tail, ok))
    return place_results, all(ok for _, ok in place_results)


def _drop_components(q, dropped, twists):
    """Remove components, twisting survivors at given (comp, place, class) spots."""
    keep = [c for c in range(q.n_components) if c not in dropped]
    renum = {old: new for new, old in enumerate(keep)}
    out = q
    for comp, place, beta in twists:
        out = extend_at(out, comp, place, -1 * beta)
    components = tuple(out.components[c] for c in keep)
    nodes = tuple(
        ((renum[a], pa), (renum[b], pb))
        for (a, pa), (b, pb) in out.nodes
        if a in renum and b in renum
    )
    markings = tuple((renum[c], p) for c, p in out.markings)
    return Quasimap(q.fan, components, nodes, markings)


def contract(f):
    """Contract all rational tails, twisting at the attaching points.

    The result is a quasimap of the same total degree whose basepoints at the
    former attaching points carry exactly the tail classes."""
    q = _as_quasimap(f)
    results, overall = contraction_condition(q)
    if not overall:
        raise ValueError("the map does not satisfy the contraction condition")
    dropped = set()
    twists = []
    for tail, _ in results:
        dropped |= tail.components
        twists.append((tail.host, Place.of_point(tail.host_point), _tail_class(q, tail)))
    return _drop_components(q, dropped, twists)


def graft(q, component, place, tail_sections, attach_point):
    """Attach a fresh rational component at a basepoint, extending there only.

    The tail sections must have degrees matching the basepoint class and
    evaluate at the attaching point to the same target point as the extended
    sections at the basepoint."""
    if isinstance(place, ProjPoint):
        place = Place.of_point(place)
    bp = next(
        (b for b in basepoints(q) if b.component == component and b.place == place),
        None,
    )
    if bp is None:
        raise ValueError("the given place is not a basepoint of the quasimap")
    point = place.rational_point()
    if point is None:
        raise ValueError("grafting needs a rational basepoint place")
    beta = bp.degree
    tail_sections = tuple(tail_sections)
    if len(tail_sections) != q.fan.n_rays:
        raise ValueError("one tail section per ray is required")
    for rho, form in enumerate(tail_sections):
        if form.degree != beta.pairings[rho]:
            raise ValueError(
                f"tail section {rho} has degree {form.degree}, expected {beta.pairings[rho]}"
            )
        if beta.pairings[rho] < 0 and not form.is_zero:
            raise ValueError("sections of negative degree must vanish")

    extended = extend_at(q, component, place, beta)
    host_values = section_values(extended, component, point)
    tail_values = tuple(f.value_at(attach_point) for f in tail_sections)
    if tuple(v == 0 for v in host_values) != tuple(v == 0 for v in tail_values):
        raise ValueError("tail sections do not match the extension at the basepoint")
    if not x_points_equal(
        q.fan, xpoint_from_values(q.fan, host_values), xpoint_from_values(q.fan, tail_values)
    ):
        raise ValueError("tail sections do not match the extension at the basepoint")

    new_comp = extended.n_components
    components = extended.components + (tail_sections,)
    nodes = extended.nodes + (((component, point), (new_comp, attach_point)),)
    return Quasimap(q.fan, components, nodes, extended.markings)


def prune(q, component):
    """Contract a single unmarked leaf component, twisting its neighbour.

    Inverse of grafting; fails when the neighbour's orders cannot absorb the
    twist."""
    if any(c == component for c, _ in q.markings):
        raise ValueError("cannot prune a marked component")
    touching = [
        (idx, node) for idx, node in enumerate(q.nodes)
        if component in (node[0][0], node[1][0])
    ]
    if len(touching) != 1:
        raise ValueError("only leaf components can be pruned")
    _, ((a, pa), (b, pb)) = touching[0]
    host, host_point = ((a, pa) if b == component else (b, pb))
    beta = CurveClass(q.fan, q.component_degree_vector(component))
    return _drop_components(q, {component}, [(host, Place.of_point(host_point), beta)])


def _deterministic_tail(values, beta, zero_start):
    """Tail sections with prescribed degrees and attach values at [1:0],
    zeros placed simply and disjointly at successive integers."""
    sections = []
    counter = zero_start
    for rho, value in enumerate(values):
        d = beta.pairings[rho]
        if d < 0:
            sections.append(BinaryForm.zero(d))
            continue
        if d == 0:
            sections.append(BinaryForm.constant(value))
            continue
        if value == 0:
            poly = (Fraction(0), Fraction(1))
            needed = d - 1
        else:
            poly = (Fraction(value),)
            needed = d
        for _ in range(needed):
            counter += 1
            if value == 0:
                poly = poly_mul(poly, (Fraction(-counter), Fraction(1)))
            else:
                poly = poly_mul(poly, (Fraction(1), Fraction(-1, counter)))
        sections.append(BinaryForm.from_poly(d, poly))
    return tuple(sections), counter


def surjectivity_witness(q, length_bound=None):
    """A stable map whose contraction is the given stable quasimap.

    Grafts a deterministic rational tail at each basepoint (simple disjoint
    zeros away from the attaching point) until no basepoints remain; strict
    descent of the basepoint masses guarantees termination on Fano targets
    and on targets passing the relaxed condition."""
    fan = q.fan
    if not stability(q, "quasimap"):
        raise ValueError("the witness search needs a stable quasimap")
    if not is_fano(fan):
        bound = length_bound if length_bound is not None else ample_functional(fan).pair(degrees(q)[0])
        if not relaxed_surjectivity_condition(fan, bound):
            raise ValueError(
                "target is neither Fano nor passes the relaxed surjectivity condition"
            )
    for bp in basepoints(q):
        if bp.place.rational_point() is None:
            raise ValueError(
                "witness search supports rational basepoint places only; "
                f"found a place of degree {bp.place.degree}"
            )

    work = q
    zero_counter = 0

    def measure(qm):
        return sum(length(bp.degree) ** 2 for bp in basepoints(qm))

    current = measure(work)
    while True:
        bps = basepoints(work)
        if not bps:
            break
        bp = bps[0]
        if bp.place.rational_point() is None:
            raise ValueError("witness search hit an irrational basepoint place")
        extended = extend_at(work, bp.component, bp.place, bp.degree)
        values = section_values(extended, bp.component, bp.place.rational_point())
        tail, zero_counter = _deterministic_tail(values, bp.degree, zero_counter)
        work = graft(work, bp.component, bp.place, tail, ProjPoint(1, 0))
        nxt = measure(work)
        if nxt >= current:
            raise RuntimeError(
                "witness search failed to descend; the target violates the "
                "surjectivity hypotheses or this is a bug"
            )
        current = nxt

    # drop degree-0 unmarked bridges left by the surgery (none expected for
    # stable inputs, kept as a guard)
    while True:
        _, per_comp = degrees(work)
        bridge = None
        for comp in range(work.n_components):
            if per_comp[comp].is_zero() and special_point_count(work, comp) == 2 \
                    and not any(c == comp for c, _ in work.markings) \
                    and work.n_components > 1:
                bridge = comp
                break
        if bridge is None:
            break
        touching = [n for n in work.nodes if bridge in (n[0][0], n[1][0])]
        (a, pa), (b, pb) = touching[0]
        (c, pc), (d, pd) = touching[1]
        end1 = (a, pa) if b == bridge else (b, pb)
        end2 = (c, pc) if d == bridge else (d, pd)
        keep = [i for i in range(work.n_components) if i != bridge]
        renum = {old: new for new, old in enumerate(keep)}
        nodes = tuple(
            ((renum[x], px), (renum[y], py))
            for (x, px), (y, py) in work.nodes
            if bridge not in (x, y)
        ) + (((renum[end1[0]], end1[1]), (renum[end2[0]], end2[1])),)
        work = Quasimap(
            work.fan,
            tuple(work.components[i] for i in keep),
            nodes,
            tuple((renum[c2], p) for c2, p in work.markings),
        )

    witness = StableMapTree(work)
    if not equal_quasimaps(contract(witness), q):
        raise RuntimeError("witness verification failed: contraction mismatch")
    return witness
