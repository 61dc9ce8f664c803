"""JSON (de)serialization for fans, classes, quasimaps and embeddings.

Integers stay integers; rationals travel as "p/q" strings; the token "inf"
encodes an infinite vanishing order.  Floats are rejected everywhere to keep
the data bit-exact.
"""

import json
import os
from fractions import Fraction

from .basepoint import INF, is_infinite
from .classes import CurveClass, DivisorClass
from .fan import Fan
from .forms import BinaryForm, ProjPoint
from .embedding import EmbeddingSpec
from .quasimap import Quasimap


def parse_scalar(value):
    if isinstance(value, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ValueError("floats are not accepted; use integers or 'p/q' strings")
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"cannot parse scalar {value!r}")


def scalar_to_json(value):
    f = Fraction(value)
    return int(f) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def parse_int(value):
    f = parse_scalar(value)
    if f.denominator != 1:
        raise ValueError(f"expected an integer, got {value!r}")
    return int(f)


def parse_order(value):
    if isinstance(value, str) and value.strip().lower() == "inf":
        return INF
    return parse_int(value)


def order_to_json(value):
    return "inf" if is_infinite(value) else int(value)


def fan_from_dict(data):
    rays = [[parse_int(x) for x in ray] for ray in data["rays"]]
    cones = [[parse_int(i) for i in cone] for cone in data["max_cones"]]
    return Fan(parse_int(data["dim"]), tuple(tuple(r) for r in rays), tuple(tuple(c) for c in cones))


def fan_to_dict(fan):
    return fan.to_dict()


def curve_class_from_dict(fan, data):
    return CurveClass(fan, tuple(parse_scalar(x) for x in data["pairings"]))


def curve_class_to_dict(beta):
    return {"pairings": [scalar_to_json(x) for x in beta.pairings]}


def divisor_class_from_dict(fan, data):
    if parse_int(data.get("anchor_cone", 0)) != 0:
        raise ValueError("divisor classes are anchored at the first maximal cone")
    return DivisorClass(fan, tuple(parse_scalar(x) for x in data["coords"]))


def divisor_class_to_dict(divisor):
    return {"anchor_cone": 0, "coords": [scalar_to_json(x) for x in divisor.coords]}


def point_from_json(data):
    a, b = data
    return ProjPoint(parse_scalar(a), parse_scalar(b))


def point_to_json(point):
    return [scalar_to_json(point.a), scalar_to_json(point.b)]


def form_from_dict(data):
    degree = parse_int(data["degree"])
    coeffs = tuple(parse_scalar(c) for c in data["coeffs"])
    if degree < 0:
        return BinaryForm.zero(degree)
    return BinaryForm(degree, coeffs)


def form_to_dict(form):
    return {"degree": form.degree, "coeffs": [scalar_to_json(c) for c in form.coeffs]}


def _resolve_fan(value, base_dir):
    if isinstance(value, str):
        return load_fan(os.path.join(base_dir, value))
    return fan_from_dict(value)


def quasimap_from_dict(data, base_dir="."):
    fan = _resolve_fan(data["fan"], base_dir)
    components = tuple(
        tuple(form_from_dict(f) for f in comp) for comp in data["components"]
    )
    nodes = tuple(
        ((parse_int(a), point_from_json(pa)), (parse_int(b), point_from_json(pb)))
        for (a, pa), (b, pb) in data.get("nodes", ())
    )
    markings = tuple(
        (parse_int(c), point_from_json(p)) for c, p in data.get("markings", ())
    )
    return Quasimap(fan, components, nodes, markings)


def quasimap_to_dict(q):
    return {
        "fan": fan_to_dict(q.fan),
        "components": [[form_to_dict(f) for f in comp] for comp in q.components],
        "nodes": [
            [[a, point_to_json(pa)], [b, point_to_json(pb)]]
            for (a, pa), (b, pb) in q.nodes
        ],
        "markings": [[c, point_to_json(p)] for c, p in q.markings],
    }


def embedding_from_dict(data, base_dir="."):
    source = _resolve_fan(data["source_fan"], base_dir)
    target = _resolve_fan(data["target_fan"], base_dir)
    coeffs = tuple(parse_scalar(m["coeff"]) for m in data["monomials"])
    exponents = tuple(tuple(parse_int(e) for e in m["exponents"]) for m in data["monomials"])
    return EmbeddingSpec(source, target, coeffs, exponents)


def embedding_to_dict(emb):
    return {
        "source_fan": fan_to_dict(emb.source),
        "target_fan": fan_to_dict(emb.target),
        "monomials": [
            {"coeff": scalar_to_json(c), "exponents": list(exp)}
            for c, exp in zip(emb.coeffs, emb.exponents)
        ],
    }


def _load_json(path):
    with open(path) as handle:
        return json.load(handle, parse_float=_reject_float)


def _reject_float(text):
    raise ValueError(f"float literal {text} rejected; data must be exact")


def load_fan(path):
    return fan_from_dict(_load_json(path))


def load_quasimap(path):
    return quasimap_from_dict(_load_json(path), os.path.dirname(os.path.abspath(path)))


def load_embedding(path):
    return embedding_from_dict(_load_json(path), os.path.dirname(os.path.abspath(path)))


def dump(data, path=None):
    text = json.dumps(data, indent=2)
    if path is None:
        return text
    with open(path, "w") as handle:
        handle.write(text + "\n")
    return text


def parse_pairing_list(text, n):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise ValueError(f"expected {n} comma-separated values, got {len(parts)}")
    return tuple(parse_scalar(p) for p in parts)


def parse_order_list(text, n):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise ValueError(f"expected {n} comma-separated values, got {len(parts)}")
    return tuple(parse_order(p) for p in parts)
