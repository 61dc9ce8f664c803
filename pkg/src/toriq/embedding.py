"""Toric closed embeddings given by one monomial per target ray.

The data is the exponent multi-index and a nonzero rational coefficient for
each ray of the target fan.  The module computes the induced maps on divisor
and curve classes, decides epicness exactly, builds epic embeddings into
products of projective spaces from nef generating sets, transports quasimaps
along an embedding, and enumerates fibres of that transport.

The chart-cover test below is the workhorse: a source chart is covered by a
target chart when the monomials away from the target cone are invertible on
the source chart and the pulled-back chart characters generate the source
chart's coordinate semigroup.  Covered charts make the embedding a closed
immersion and let us invert it on section data exactly.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

from .basepoint import INF, _scan_degree
from .classes import (CurveClass, DivisorClass, ample_functional, anchor_rays,
                      divisor_class, effective_classes, is_fano, length,
                      nef_hilbert_basis)
from .fan import Fan, dual_basis, primitive_collections, product_fan, projective_space_fan, require_valid
from .forms import BinaryForm, poly_mul
from .linalg import frac, lattice_map_is_surjective, solve_square
from .quasimap import (Quasimap, basepoints, degrees, extend_at, regular_extension,
                       same_curve, same_morphism_sections, validate_quasimap)


@dataclass(frozen=True)
class EmbeddingSpec:
    """Monomial lift data of a toric closed embedding: per target ray a
    coefficient and an exponent vector over the source rays."""

    source: Fan
    target: Fan
    coeffs: tuple
    exponents: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(frac(c) for c in self.coeffs))
        object.__setattr__(
            self, "exponents", tuple(tuple(int(e) for e in exp) for exp in self.exponents)
        )

    def monomial_support(self, tau):
        return frozenset(i for i, e in enumerate(self.exponents[tau]) if e > 0)


def _solve_character(fan, pairings):
    """Integer character m with <m, u_rho> = pairings[rho] for all rays, or None."""
    sigma0 = fan.max_cones[0]
    mat = [list(fan.rays[i]) for i in sigma0]
    sol = solve_square(mat, [pairings[i] for i in sigma0])
    if sol is None:
        return None
    if any(frac(x).denominator != 1 for x in sol):
        return None
    m = tuple(int(x) for x in sol)
    for rho in range(fan.n_rays):
        if sum(mi * ui for mi, ui in zip(m, fan.rays[rho])) != pairings[rho]:
            return None
    return m


def validate_embedding(emb):
    """Check the embedding data; returns the list of violations."""
    report = []
    try:
        require_valid(emb.source)
        require_valid(emb.target)
    except ValueError as exc:
        return [str(exc)]
    n_src = emb.source.n_rays
    if len(emb.coeffs) != emb.target.n_rays or len(emb.exponents) != emb.target.n_rays:
        return ["one coefficient and one exponent vector per target ray is required"]
    for tau, (c, exp) in enumerate(zip(emb.coeffs, emb.exponents)):
        if c == 0:
            report.append(f"coefficient of target ray {tau} vanishes")
        if len(exp) != n_src:
            report.append(f"exponent vector of target ray {tau} has the wrong length")
        elif any(e < 0 for e in exp):
            report.append(f"exponent vector of target ray {tau} has negative entries")
    if report:
        return report

    # degree compatibility: target characters must pull back to source characters
    for k in range(emb.target.dim):
        m_y = tuple(int(i == k) for i in range(emb.target.dim))
        v = [0] * n_src
        for tau in range(emb.target.n_rays):
            w = sum(mi * ui for mi, ui in zip(m_y, emb.target.rays[tau]))
            if w:
                for rho in range(n_src):
                    v[rho] += w * emb.exponents[tau][rho]
        if _solve_character(emb.source, tuple(v)) is None:
            report.append(
                "degree data is incompatible: a target character does not pull "
                "back to a source character"
            )
            break
    if report:
        return report

    # base-locus condition: no common zero of a target primitive collection
    # outside the source unstable locus
    for pc in primitive_collections(emb.target):
        for cone in emb.source.max_cones:
            cone_set = set(cone)
            if not any(not (emb.monomial_support(tau) & cone_set) for tau in sorted(pc)):
                report.append(
                    f"monomials of the target primitive collection {tuple(sorted(pc))} "
                    f"have a common zero on the chart of source cone {cone}"
                )
                break
    return report


def require_valid_embedding(emb):
    violations = validate_embedding(emb)
    if violations:
        raise ValueError("invalid embedding: " + "; ".join(violations))
    return emb


@lru_cache(maxsize=None)
def pullback_matrix(emb):
    """Matrix of the pullback on divisor classes, target anchor basis to source."""
    require_valid_embedding(emb)
    cols = []
    for tau in anchor_rays(emb.target):
        d = pullback_pic(emb, tau)
        cols.append(d.coords)
    rank_src = len(anchor_rays(emb.source))
    return tuple(tuple(col[i] for col in cols) for i in range(rank_src))


def pullback_pic(emb, tau):
    """Pullback of the class of the target boundary divisor at ray ``tau``."""
    total = DivisorClass(emb.source, (0,) * len(anchor_rays(emb.source)))
    for rho, e in enumerate(emb.exponents[tau]):
        if e:
            total = total + e * divisor_class(emb.source, rho)
    return total


def pushforward_curves(emb, beta):
    """Pushforward of a source curve class, by the projection formula."""
    require_valid_embedding(emb)
    pairings = tuple(
        sum(e * d for e, d in zip(emb.exponents[tau], beta.pairings))
        for tau in range(emb.target.n_rays)
    )
    return CurveClass(emb.target, pairings)


def epic_check(emb):
    """Whether the pullback is surjective on Picard lattices (equivalently the
    pushforward is injective on curve classes)."""
    return lattice_map_is_surjective([list(row) for row in pullback_matrix(emb)])


def _nonneg_combination(target, gens, weights):
    """Coefficients c >= 0 with sum c_j gens[j] = target, or None.

    Pairing against the interior covector ``weights`` is additive and positive
    on the usable generators, which caps the search depth."""

    def weight(vec):
        return sum(a * b for a, b in zip(vec, weights))

    target = tuple(target)
    tw = weight(target)
    if tw < 0:
        return None

    def rec(remaining, rw, start):
        if all(x == 0 for x in remaining):
            return []
        for j in range(start, len(gens)):
            gw = weight(gens[j])
            if gw <= 0 or gw > rw:
                continue
            nxt = tuple(a - b for a, b in zip(remaining, gens[j]))
            sub = rec(nxt, rw - gw, j)
            if sub is not None:
                return [j] + sub
        return None

    picks = rec(target, tw, 0)
    if picks is None:
        return None
    coeffs = [0] * len(gens)
    for j in picks:
        coeffs[j] += 1
    return coeffs


@lru_cache(maxsize=None)
def chart_cover(emb):
    """Per source maximal cone, the target charts that cover it.

    Each entry carries the target cone index, the pulled-back chart
    characters with their coefficients, and nonnegative combinations
    expressing each source chart character; empty lists mean the chart test
    fails for that cone.
    """
    require_valid_embedding(emb)
    src, tgt = emb.source, emb.target
    cover = {}
    for si, scone in enumerate(src.max_cones):
        scone_set = set(scone)
        interior = [sum(src.rays[i][k] for i in scone) for k in range(src.dim)]
        duals_x = dual_basis(src, scone)
        entries = []
        for ti, tcone in enumerate(tgt.max_cones):
            if any(emb.monomial_support(tau) & scone_set
                   for tau in tgt.cone_complement(tcone)):
                continue
            duals_y = dual_basis(tgt, tcone)
            chars = []
            coefs = []
            ok = True
            for m_y in duals_y:
                v = [0] * src.n_rays
                coef = Fraction(1)
                for tau in range(tgt.n_rays):
                    w = sum(mi * ui for mi, ui in zip(m_y, tgt.rays[tau]))
                    if w:
                        coef *= emb.coeffs[tau] ** w
                        for rho in range(src.n_rays):
                            v[rho] += w * emb.exponents[tau][rho]
                m_x = _solve_character(src, tuple(v))
                if m_x is None:
                    ok = False
                    break
                if any(sum(mi * ui for mi, ui in zip(m_x, src.rays[i])) < 0 for i in scone):
                    ok = False
                    break
                chars.append(m_x)
                coefs.append(coef)
            if not ok:
                continue
            nonzero = [(j, g) for j, g in enumerate(chars) if any(x != 0 for x in g)]
            combos = []
            for m_i in duals_x:
                combo = _nonneg_combination(
                    m_i, [g for _, g in nonzero], interior
                )
                if combo is None:
                    combos = None
                    break
                full = [0] * len(chars)
                for (j, _), c in zip(nonzero, combo):
                    full[j] = c
                combos.append(tuple(full))
            if combos is None:
                continue
            entries.append(
                {"target_cone": ti, "chars": tuple(chars), "coeffs": tuple(coefs),
                 "combos": tuple(combos)}
            )
        cover[si] = tuple(entries)
    return cover


def covers_all_charts(emb):
    return all(chart_cover(emb)[si] for si in range(len(emb.source.max_cones)))


def polytope_lattice_points(fan, coeffs):
    """Lattice points of {m : <m, u_rho> >= -coeffs[rho]}, sorted."""
    n = fan.dim
    rows = [list(fan.rays[i]) for i in range(fan.n_rays)]
    rhs = [-frac(c) for c in coeffs]
    vertices = []
    for subset in combinations(range(fan.n_rays), n):
        sol = solve_square([rows[i] for i in subset], [rhs[i] for i in subset])
        if sol is None:
            continue
        if all(sum(frac(a) * b for a, b in zip(rows[i], sol)) >= rhs[i]
               for i in range(fan.n_rays)):
            vertices.append(sol)
    if not vertices:
        return []
    lo = [min(v[k] for v in vertices) for k in range(n)]
    hi = [max(v[k] for v in vertices) for k in range(n)]
    points = []
    for pt in product(*[range(int(l.__ceil__()), int(h.__floor__()) + 1)
                        for l, h in zip(lo, hi)]):
        if all(sum(a * b for a, b in zip(rows[i], pt)) >= rhs[i]
               for i in range(fan.n_rays)):
            points.append(pt)
    return sorted(points)


def build_epic_embedding(fan, generators=None):
    """Epic closed embedding into a product of projective spaces.

    Uses the nef Hilbert basis (or the supplied nef generating set of the
    Picard group); when the charts are not covered, a canonical ample class is
    appended, after which coverage is guaranteed.
    """
    require_valid(fan)
    ample = ample_functional(fan)  # raises on non-projective input
    gens = list(generators) if generators is not None else list(nef_hilbert_basis(fan))
    gens = [g if isinstance(g, DivisorClass) else DivisorClass(fan, tuple(g)) for g in gens]

    def assemble(classes):
        factors = []
        coeffs = []
        exponents = []
        for d in classes:
            lift = d.ray_coefficients()
            points = polytope_lattice_points(fan, lift)
            if len(points) < 2:
                raise ValueError(
                    f"nef class {d.coords} has fewer than two sections; cannot "
                    "build a projective-space factor"
                )
            factors.append(projective_space_fan(len(points) - 1))
            for m in points:
                exp = tuple(
                    lift[rho] + sum(mi * ui for mi, ui in zip(m, fan.rays[rho]))
                    for rho in range(fan.n_rays)
                )
                exponents.append(exp)
                coeffs.append(Fraction(1))
        target = product_fan(factors)
        return EmbeddingSpec(fan, target, tuple(coeffs), tuple(exponents))

    emb = assemble(gens)
    require_valid_embedding(emb)
    if not covers_all_charts(emb):
        emb = assemble(gens + [ample])
        require_valid_embedding(emb)
        if not covers_all_charts(emb):
            raise RuntimeError("chart cover failed even with an ample factor; bug")
    if not epic_check(emb):
        raise ValueError("the supplied generators do not generate the Picard group")
    return emb


def apply_ibar(emb, q):
    """Transport a quasimap along the embedding (same curve, monomial sections)."""
    require_valid_embedding(emb)
    if q.fan != emb.source:
        raise ValueError("quasimap target does not match the embedding source")
    new_components = []
    for comp in range(q.n_components):
        secs = q.sections(comp)
        out = []
        for tau in range(emb.target.n_rays):
            exp = emb.exponents[tau]
            degree = sum(e * f.degree for e, f in zip(exp, secs))
            if any(e > 0 and f.is_zero for e, f in zip(exp, secs)):
                out.append(BinaryForm.zero(degree))
                continue
            form = BinaryForm.constant(emb.coeffs[tau])
            for e, f in zip(exp, secs):
                if e:
                    form = form.mul(f.power(e))
            assert form.degree == degree
            out.append(form)
        new_components.append(tuple(out))
    return Quasimap(emb.target, tuple(new_components), q.nodes, q.markings)


def _factored_sections(secs):
    out = []
    for f in secs:
        if f.is_zero:
            out.append(None)
        else:
            out.append(f.factor())
    return out


def _invert_component(emb, secs):
    """Source section tuple whose image is the given basepoint-free target
    tuple on one component, or None when no chart inversion applies."""
    src, tgt = emb.source, emb.target
    factored = _factored_sections(secs)
    all_places = sorted(
        {p for fac in factored if fac for p in fac[1]},
        key=lambda p: p.sort_key(),
    )
    for si in range(len(src.max_cones)):
        scone = src.max_cones[si]
        for entry in chart_cover(emb)[si]:
            tcone = tgt.max_cones[entry["target_cone"]]
            duals_y = dual_basis(tgt, tcone)
            usable = True
            w_orders = []  # per chart character: dict place -> order, or None for zero
            w_units = []
            for j, m_y in enumerate(duals_y):
                exps = [sum(mi * ui for mi, ui in zip(m_y, tgt.rays[tau]))
                        for tau in range(tgt.n_rays)]
                if any(e < 0 and factored[tau] is None for tau, e in enumerate(exps)):
                    usable = False
                    break
                if any(e > 0 and factored[tau] is None for tau, e in enumerate(exps)):
                    w_orders.append(None)
                    w_units.append(None)
                    continue
                orders = {p: 0 for p in all_places}
                unit = Fraction(1)
                for tau, e in enumerate(exps):
                    if e == 0:
                        continue
                    u, places = factored[tau]
                    unit *= u ** e
                    for p, mult in places.items():
                        orders[p] += e * mult
                w_orders.append(orders)
                w_units.append(unit / entry["coeffs"][j])
            if not usable:
                continue

            # exponent data for the candidate source sections
            zeta_orders = {}
            zeta_units = {}
            vanishing = set()
            for pos, rho in enumerate(scone):
                combo = entry["combos"][pos]
                if any(c > 0 and w_orders[j] is None for j, c in enumerate(combo)):
                    vanishing.add(rho)
                    continue
                orders = {p: 0 for p in all_places}
                unit = Fraction(1)
                for j, c in enumerate(combo):
                    if c:
                        unit *= w_units[j] ** c
                        for p, o in w_orders[j].items():
                            orders[p] += c * o
                zeta_orders[rho] = orders
                zeta_units[rho] = unit

            try:
                shifts = {}
                for p in all_places:
                    vec = []
                    for rho in range(src.n_rays):
                        if rho in vanishing:
                            vec.append(INF)
                        elif rho in zeta_orders:
                            vec.append(zeta_orders[rho][p])
                        else:
                            vec.append(0)
                    beta_p, _ = _scan_degree(src, tuple(vec), frozenset(vanishing))
                    shifts[p] = beta_p
            except (ValueError, RuntimeError):
                continue

            sections = [None] * src.n_rays
            ok = True
            for rho in range(src.n_rays):
                if rho in vanishing:
                    continue
                poly = (Fraction(1),)
                degree = 0
                for p in all_places:
                    base = zeta_orders.get(rho, {p: 0 for p in all_places})
                    e = base[p] - shifts[p].pairings[rho]
                    if e < 0 or (isinstance(e, Fraction) and e.denominator != 1):
                        ok = False
                        break
                    e = int(e)
                    if e == 0:
                        continue
                    degree += e * p.degree
                    if not p.at_infinity:
                        for _ in range(e):
                            poly = poly_mul(poly, p.coeffs)
                if not ok:
                    break
                unit = zeta_units.get(rho, Fraction(1))
                sections[rho] = BinaryForm.from_poly(degree, tuple(unit * c for c in poly))
            if not ok:
                continue

            if vanishing:
                duals_x = dual_basis(src, scone)
                w = [-sum(sections[rho].degree * src.rays[rho][k]
                          for rho in range(src.n_rays) if rho not in vanishing)
                     for k in range(src.dim)]
                consistent = True
                for pos, rho in enumerate(scone):
                    coord = sum(mi * wi for mi, wi in zip(duals_x[pos], w))
                    if rho in vanishing:
                        sections[rho] = BinaryForm.zero(coord)
                    elif coord != 0:
                        consistent = False
                        break
                if not consistent:
                    continue
            return tuple(sections)
    return None


def invert_through_charts(emb, extension):
    """Candidate source quasimap mapping to the given basepoint-free quasimap,
    found by chart inversion; None when no chart applies."""
    comps = []
    for comp in range(extension.n_components):
        secs = _invert_component(emb, extension.sections(comp))
        if secs is None:
            return None
        comps.append(secs)
    candidate = Quasimap(emb.source, tuple(comps), extension.nodes, extension.markings)
    if validate_quasimap(candidate):
        return None
    return candidate


def _verify_factoring(emb, candidate, extension):
    if candidate is None:
        return None
    if not same_curve(candidate, extension):
        return None
    if basepoints(candidate):
        return None
    image = apply_ibar(emb, candidate)
    for comp in range(extension.n_components):
        if not same_morphism_sections(
            emb.target, image.sections(comp), extension.sections(comp)
        ):
            return None
    return candidate


def _quasimap_sort_key(q):
    return tuple(
        tuple((f.degree, f.coeffs) for f in q.sections(c)) for c in range(q.n_components)
    )


def fibre_enumeration(emb, q, beta, factored=None, length_cap=None):
    """All source quasimaps of class ``beta`` mapping to ``q`` along the embedding.

    Works place by place: the regular extension must factor through the source
    (by chart inversion, or through caller-supplied candidate data), then each
    basepoint receives an effective source class with the right pushforward,
    the right total and a nonnegative twisted order vector; every surviving
    assignment is materialized by twisting the factored map.
    """
    require_valid_embedding(emb)
    if pushforward_curves(emb, beta).pairings != degrees(q)[0].pairings:
        raise ValueError("the quasimap's degree is not the pushforward of the class")
    extension = regular_extension(q)
    candidate = factored if factored is not None else invert_through_charts(emb, extension)
    f = _verify_factoring(emb, candidate, extension)
    if f is None:
        return ()
    f_total, _ = degrees(f)

    if length_cap is not None:
        cap = length_cap
    elif is_fano(emb.source):
        cap = length(beta)
    else:
        raise ValueError("non-Fano source: supply a length cap for the fibre search")
    pool = [c for c in effective_classes(emb.source, cap) if not c.is_zero()]

    bps = basepoints(q)
    per_place = []
    for bp in bps:
        matches = [c for c in pool
                   if pushforward_curves(emb, c).pairings == bp.degree.pairings]
        if not matches:
            return ()
        per_place.append(matches)

    results = []
    for assignment in product(*per_place):
        total = f_total
        for bp, c in zip(bps, assignment):
            total = total + bp.place.degree * c
        if total.pairings != beta.pairings:
            continue
        ok = True
        for bp, c in zip(bps, assignment):
            for rho, form in enumerate(f.sections(bp.component)):
                o = form.ord_at(bp.place)
                if o is None:
                    continue
                if o + c.pairings[rho] < 0:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        out = f
        for bp, c in zip(bps, assignment):
            out = extend_at(out, bp.component, bp.place, -1 * c)
        results.append(out)
    results.sort(key=_quasimap_sort_key)
    return tuple(results)
