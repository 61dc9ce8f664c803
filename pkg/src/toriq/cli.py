"""Command-line interface.

Exit codes: 0 success, 1 domain error (invalid data, failed checks),
2 usage error.  ``--json`` switches every subcommand to machine-readable
output; the TORIQ_MAX_LENGTH environment variable caps enumeration bounds
where a length bound is needed and none is given.
"""

import argparse
import json
import os
import sys

from . import io as tio
from .basepoint import degree_at_point, length_at_point
from .cases import CASE_NAMES, run_case
from .classes import (anticanonical_class, factorizations, is_fano, length,
                      nef_hilbert_basis, picard_rank, wall_curve_classes)
from .contraction import StableMapTree, contract, contraction_condition, graft, surjectivity_witness
from .embedding import (apply_ibar, build_epic_embedding, epic_check,
                        fibre_enumeration, pushforward_curves, validate_embedding)
from .fan import primitive_collections, validate_fan
from .quasimap import (basepoint_length, basepoints, degrees, regular_extension,
                       stability, validate_quasimap)


class DomainError(Exception):
    pass


def _env_bound():
    raw = os.environ.get("TORIQ_MAX_LENGTH")
    return int(raw) if raw else None


def _emit(args, payload, text_lines):
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        for line in text_lines:
            print(line)


def _class_text(beta):
    return f"pairings {tuple(beta.pairings)} / anchor {tuple(beta.anchor_coords)}"


def _cmd_fan_validate(args):
    fan = tio.load_fan(args.fan)
    violations = validate_fan(fan)
    payload = {"valid": not violations, "violations": violations}
    _emit(args, payload,
          ["valid"] if not violations else [f"invalid: {v}" for v in violations])
    if violations:
        raise DomainError("fan is invalid")


def _cmd_fan_info(args):
    fan = tio.load_fan(args.fan)
    violations = validate_fan(fan)
    if violations:
        _emit(args, {"valid": False, "violations": violations},
              [f"invalid: {v}" for v in violations])
        raise DomainError("fan is invalid")
    mori = [tuple(w.pairings) for w in wall_curve_classes(fan)]
    hilb = [tuple(d.coords) for d in nef_hilbert_basis(fan)]
    pcs = [tuple(sorted(pc)) for pc in primitive_collections(fan)]
    anti = anticanonical_class(fan)
    payload = {
        "dim": fan.dim,
        "rays": [list(r) for r in fan.rays],
        "picard_rank": picard_rank(fan),
        "primitive_collections": pcs,
        "wall_curve_classes": mori,
        "nef_hilbert_basis": hilb,
        "anticanonical_coords": list(anti.coords),
        "fano": is_fano(fan),
    }
    lines = [
        f"dimension {fan.dim}, {fan.n_rays} rays, {len(fan.max_cones)} maximal cones",
        f"Picard rank {picard_rank(fan)}",
        f"primitive collections: {pcs}",
        f"wall curve classes (pairings): {mori}",
        f"nef Hilbert basis (anchor coords): {hilb}",
        f"anticanonical class (anchor coords): {tuple(anti.coords)}",
        f"Fano: {is_fano(fan)}",
    ]
    _emit(args, payload, lines)


def _load_class(fan, text):
    """Accept a curve class as a full pairing vector or as anchor coordinates."""
    from .classes import CurveClass, curve_class_from_anchor, picard_rank

    parts = [p.strip() for p in text.split(",")]
    rank = picard_rank(fan)
    if len(parts) == rank and rank != fan.n_rays:
        return curve_class_from_anchor(fan, tio.parse_pairing_list(text, rank))
    return CurveClass(fan, tio.parse_pairing_list(text, fan.n_rays))


def _cmd_class_length(args):
    fan = tio.load_fan(args.fan)
    beta = _load_class(fan, args.curve_class)
    lam = length(beta)
    _emit(args, {"length": lam}, [f"length {lam}"])


def _cmd_class_factor(args):
    fan = tio.load_fan(args.fan)
    beta = _load_class(fan, args.curve_class)
    bound = args.bound if args.bound is not None else _env_bound()
    pairs = factorizations(fan, beta, bound=bound)
    payload = {"irreducible": not pairs,
               "factorizations": [[list(a.pairings), list(b.pairings)] for a, b in pairs]}
    lines = ["irreducible" if not pairs else "factorizations:"]
    for a, b in pairs:
        lines.append(f"  {_class_text(a)}  +  {_class_text(b)}")
    _emit(args, payload, lines)


def _cmd_class_push(args):
    emb = tio.load_embedding(args.embedding)
    beta = _load_class(emb.source, args.curve_class)
    pushed = pushforward_curves(emb, beta)
    _emit(args, {"pairings": list(pushed.pairings)},
          [f"pushforward: {_class_text(pushed)}"])


def _cmd_basepoint_degree(args):
    fan = tio.load_fan(args.fan)
    orders = tio.parse_order_list(args.orders, fan.n_rays)
    beta, witnesses = degree_at_point(fan, orders)
    ell = length_at_point(fan, orders)
    cones = [list(fan.max_cones[i]) for i in witnesses]
    payload = {"pairings": list(beta.pairings), "witness_cones": cones, "length": ell}
    _emit(args, payload, [
        f"degree at the point: {_class_text(beta)}",
        f"witness cones: {[tuple(c) for c in cones]}",
        f"length: {ell}",
    ])


def _cmd_quasimap_analyze(args):
    q = tio.load_quasimap(args.quasimap)
    violations = validate_quasimap(q)
    if violations:
        _emit(args, {"valid": False, "violations": violations},
              [f"invalid: {v}" for v in violations])
        raise DomainError("quasimap is invalid")
    total, per_comp = degrees(q)
    bps = basepoints(q)
    ext = regular_extension(q)
    qm_stable = stability(q, "quasimap")
    map_stable = None if bps else stability(q, "map")
    payload = {
        "valid": True,
        "degree": list(total.pairings),
        "component_degrees": [list(b.pairings) for b in per_comp],
        "basepoints": [
            {
                "component": bp.component,
                "place": "inf" if bp.place.at_infinity else [str(c) for c in bp.place.coeffs],
                "degree": list(bp.degree.pairings),
                "length": basepoint_length(q, bp),
            }
            for bp in bps
        ],
        "stable_quasimap": qm_stable,
        "stable_map": map_stable,
        "extension_degree": list(degrees(ext)[0].pairings),
    }
    lines = [
        "valid quasimap",
        f"degree: {_class_text(total)}",
        f"component degrees: {[tuple(b.pairings) for b in per_comp]}",
        f"basepoints: {len(bps)}",
    ]
    for bp in bps:
        place = "inf" if bp.place.at_infinity else tuple(bp.place.coeffs)
        lines.append(
            f"  component {bp.component}, place {place}: degree {tuple(bp.degree.pairings)},"
            f" length {basepoint_length(q, bp)}"
        )
    lines.append(f"stable as quasimap: {qm_stable}")
    lines.append("stable as map: n/a (has basepoints)" if bps else f"stable as map: {map_stable}")
    lines.append(f"regular extension degree: {tuple(degrees(ext)[0].pairings)}")
    _emit(args, payload, lines)


def _cmd_embed_build(args):
    fan = tio.load_fan(args.fan)
    emb = build_epic_embedding(fan)
    data = tio.embedding_to_dict(emb)
    if args.output:
        tio.dump(data, args.output)
    _emit(args, data, [
        f"target: product with ray blocks of a {emb.target.dim}-dimensional fan",
        f"monomial exponents: {[tuple(e) for e in emb.exponents]}",
        (f"written to {args.output}" if args.output else "(use -o to save)"),
    ])


def _cmd_embed_check(args):
    emb = tio.load_embedding(args.embedding)
    violations = validate_embedding(emb)
    if violations:
        _emit(args, {"valid": False, "violations": violations},
              [f"invalid: {v}" for v in violations])
        raise DomainError("embedding data is invalid")
    epic = epic_check(emb)
    _emit(args, {"valid": True, "epic": epic}, [f"valid embedding data; epic: {epic}"])


def _cmd_embed_push(args):
    _cmd_class_push(args)


def _cmd_embed_ibar(args):
    emb = tio.load_embedding(args.embedding)
    q = tio.load_quasimap(args.quasimap)
    image = apply_ibar(emb, q)
    data = tio.quasimap_to_dict(image)
    if args.output:
        tio.dump(data, args.output)
    total = degrees(image)[0]
    _emit(args, data, [
        f"image degree: {_class_text(total)}",
        (f"written to {args.output}" if args.output else "(use -o to save)"),
    ])


def _cmd_embed_fibre(args):
    emb = tio.load_embedding(args.embedding)
    q = tio.load_quasimap(args.quasimap)
    beta = _load_class(emb.source, args.curve_class)
    fibre = fibre_enumeration(emb, q, beta, length_cap=args.bound or _env_bound())
    payload = {"count": len(fibre),
               "elements": [tio.quasimap_to_dict(f) for f in fibre]}
    lines = [f"{len(fibre)} preimage(s)"]
    _emit(args, payload, lines)


def _cmd_contract_check(args):
    q = tio.load_quasimap(args.quasimap)
    f = StableMapTree(q)
    results, overall = contraction_condition(f)
    payload = {
        "admissible": overall,
        "tails": [
            {"components": sorted(t.components), "host": t.host, "passes": ok}
            for t, ok in results
        ],
    }
    lines = [f"tails: {len(results)}"]
    for t, ok in results:
        lines.append(f"  tail {sorted(t.components)} at component {t.host}: {'ok' if ok else 'fails'}")
    lines.append(f"contraction condition: {'holds' if overall else 'fails'}")
    _emit(args, payload, lines)
    if not overall:
        raise DomainError("contraction condition fails")


def _cmd_contract_apply(args):
    q = tio.load_quasimap(args.quasimap)
    f = StableMapTree(q)
    contracted = contract(f)
    data = tio.quasimap_to_dict(contracted)
    if args.output:
        tio.dump(data, args.output)
    _emit(args, data, [
        f"contracted quasimap degree: {_class_text(degrees(contracted)[0])}",
        f"basepoints: {len(basepoints(contracted))}",
        (f"written to {args.output}" if args.output else "(use -o to save)"),
    ])


def _cmd_graft(args):
    q = tio.load_quasimap(args.quasimap)
    with open(args.tail) as handle:
        tail_data = json.load(handle)
    sections = tuple(tio.form_from_dict(f) for f in tail_data["sections"])
    attach = tio.point_from_json(tail_data["attach"])
    from .forms import Place

    if args.place.strip().lower() == "inf":
        place = Place.infinity()
    else:
        place = Place.rational(tio.parse_scalar(args.place))
    out = graft(q, args.component, place, sections, attach)
    data = tio.quasimap_to_dict(out)
    if args.output:
        tio.dump(data, args.output)
    _emit(args, data, [
        f"grafted quasimap with {out.n_components} components",
        (f"written to {args.output}" if args.output else "(use -o to save)"),
    ])


def _cmd_witness(args):
    q = tio.load_quasimap(args.quasimap)
    witness = surjectivity_witness(q, length_bound=_env_bound())
    data = tio.quasimap_to_dict(witness.quasimap)
    if args.output:
        tio.dump(data, args.output)
    _emit(args, data, [
        f"witness stable map with {witness.quasimap.n_components} components",
        f"contraction verified equal to the input",
        (f"written to {args.output}" if args.output else "(use -o to save)"),
    ])


def _cmd_reproduce(args):
    report = run_case(args.case)
    payload = {
        "case": report.name,
        "passed": report.passed,
        "checks": [
            {"label": label, "computed": str(computed), "expected": str(expected)}
            for label, computed, expected in report.checks
        ],
    }
    _emit(args, payload, report.lines())
    if not report.passed:
        raise DomainError(f"case {report.name} failed")


def build_parser():
    parser = argparse.ArgumentParser(prog="toriq", description=__doc__)
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    fan = sub.add_parser("fan").add_subparsers(dest="sub", required=True)
    p = fan.add_parser("validate")
    p.add_argument("fan")
    p.set_defaults(func=_cmd_fan_validate)
    p = fan.add_parser("info")
    p.add_argument("fan")
    p.set_defaults(func=_cmd_fan_info)

    cls = sub.add_parser("class").add_subparsers(dest="sub", required=True)
    p = cls.add_parser("length")
    p.add_argument("fan")
    p.add_argument("--class", dest="curve_class", required=True)
    p.set_defaults(func=_cmd_class_length)
    p = cls.add_parser("factor")
    p.add_argument("fan")
    p.add_argument("--class", dest="curve_class", required=True)
    p.add_argument("--bound", type=int)
    p.set_defaults(func=_cmd_class_factor)
    p = cls.add_parser("push")
    p.add_argument("embedding")
    p.add_argument("--class", dest="curve_class", required=True)
    p.set_defaults(func=_cmd_class_push)

    p = sub.add_parser("basepoint-degree")
    p.add_argument("--fan", required=True)
    p.add_argument("--orders", required=True)
    p.set_defaults(func=_cmd_basepoint_degree)

    qm = sub.add_parser("quasimap").add_subparsers(dest="sub", required=True)
    p = qm.add_parser("analyze")
    p.add_argument("quasimap")
    p.set_defaults(func=_cmd_quasimap_analyze)

    emb = sub.add_parser("embed").add_subparsers(dest="sub", required=True)
    p = emb.add_parser("build")
    p.add_argument("fan")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_embed_build)
    p = emb.add_parser("check")
    p.add_argument("embedding")
    p.set_defaults(func=_cmd_embed_check)
    p = emb.add_parser("push")
    p.add_argument("embedding")
    p.add_argument("--class", dest="curve_class", required=True)
    p.set_defaults(func=_cmd_embed_push)
    p = emb.add_parser("ibar")
    p.add_argument("embedding")
    p.add_argument("quasimap")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_embed_ibar)
    p = emb.add_parser("fibre")
    p.add_argument("embedding")
    p.add_argument("quasimap")
    p.add_argument("--class", dest="curve_class", required=True)
    p.add_argument("--bound", type=int)
    p.set_defaults(func=_cmd_embed_fibre)

    con = sub.add_parser("contract").add_subparsers(dest="sub", required=True)
    p = con.add_parser("check")
    p.add_argument("quasimap")
    p.set_defaults(func=_cmd_contract_check)
    p = con.add_parser("apply")
    p.add_argument("quasimap")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_contract_apply)

    p = sub.add_parser("graft")
    p.add_argument("quasimap")
    p.add_argument("--component", type=int, required=True)
    p.add_argument("--place", required=True, help="chart coordinate of the place, or 'inf'")
    p.add_argument("--tail", required=True, help="JSON file with sections and attach point")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_graft)

    p = sub.add_parser("witness")
    p.add_argument("quasimap")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("reproduce")
    p.add_argument("case", choices=CASE_NAMES)
    p.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
