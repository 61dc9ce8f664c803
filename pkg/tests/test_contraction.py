import random

import pytest

from toriq.cases import family_contracted, family_map
from toriq.classes import length
from toriq.contraction import (StableMapTree, _deterministic_tail, contract,
                               contraction_condition, graft, prune,
                               rational_tails, surjectivity_witness)
from toriq.forms import BinaryForm, Place, ProjPoint
from toriq.quasimap import (Quasimap, basepoints, degrees, equal_quasimaps,
                            extend_at, section_values, stability,
                            validate_quasimap)

from qmgen import random_quasimap, random_stable_quasimap


def F(deg, *coeffs):
    return BinaryForm.from_poly(deg, coeffs)


MARKS = ((0, ProjPoint(1, 1)), (0, ProjPoint(1, 2)))


def test_family_condition_only_at_zero():
    from fractions import Fraction

    samples = [Fraction(t) for t in range(6)] + [Fraction(1, 2), Fraction(-3, 7)]
    for t in samples:
        f = family_map(t)
        assert validate_quasimap(f) == []
        assert basepoints(f) == ()
        assert stability(f, "map")
        _, overall = contraction_condition(f)
        assert overall == (t == 0)


def test_family_tail_shape():
    f = family_map(0)
    tail, = rational_tails(f)
    assert tail.components == frozenset({1})
    assert tail.host == 0
    assert tail.host_point == ProjPoint(1, 0)


def test_contract_family():
    contracted = contract(family_map(0))
    assert degrees(contracted)[0].pairings == (2, 2, 2, 0)
    bp, = basepoints(contracted)
    assert bp.degree.pairings == (0, 2, 2, -2)
    assert bp.place == Place.rational(0)
    assert stability(contracted, "quasimap")
    assert equal_quasimaps(contracted, family_contracted())


def test_contract_without_tails_is_identity(p2):
    line = Quasimap(p2, ((F(1, 1), F(1, 0, 1), F(1, 1, 1)),), markings=MARKS)
    _, overall = contraction_condition(line)
    assert overall  # vacuous
    assert contract(line) == line


def test_condition_always_true_on_projective_space(p3):
    # all boundary divisors of the 3-space are nef, so any map with tails passes
    rng = random.Random(19)
    found = 0
    for _ in range(80):
        q = random_quasimap(p3, rng, max_components=2, max_total_length=8)
        if basepoints(q) or not rational_tails(q):
            continue
        found += 1
        _, overall = contraction_condition(q)
        assert overall
    assert found >= 3


def test_contract_rejects_failing_condition():
    with pytest.raises(ValueError):
        contract(family_map(1))


def test_contract_diagonal_with_two_tails(p1xp1):
    # diagonal line with tails of degree (0,1) at 0 and (1,0) at infinity
    # contracts to the first Segre-source quasimap
    diag = (F(1, 1), F(1, 0, 1), F(1, 1), F(1, 0, 1))
    tail_at_0 = (F(0, 1), BinaryForm.zero(0), F(1, 1, 1), F(1, 0, 1))
    tail_at_inf = (F(1, 0, 1), F(1, 1, 1), BinaryForm.zero(0), F(0, 1))
    q = Quasimap(
        p1xp1,
        (diag, tail_at_0, tail_at_inf),
        nodes=(((0, ProjPoint(1, 0)), (1, ProjPoint(1, 0))),
               ((0, ProjPoint.infinity()), (2, ProjPoint(1, 0)))),
        markings=MARKS,
    )
    assert validate_quasimap(q) == []
    assert stability(q, "map")
    _, overall = contraction_condition(q)
    assert overall
    out = contract(q)
    q1 = Quasimap(p1xp1, ((F(2, 1), F(2, 0, 1), F(2, 0, 1), F(2, 0, 0, 1)),),
                  markings=MARKS)
    assert equal_quasimaps(out, q1)


def test_contracted_basepoints_carry_tail_classes(bl0p2):
    f = family_map(0)
    _, per_comp = degrees(f)
    contracted = contract(f)
    bp, = basepoints(contracted)
    assert bp.degree.pairings == per_comp[1].pairings


def graft_with_deterministic_tail(q, bp, zero_start=0):
    extended = extend_at(q, bp.component, bp.place, bp.degree)
    values = section_values(extended, bp.component, bp.place.rational_point())
    tail, _ = _deterministic_tail(values, bp.degree, zero_start)
    return graft(q, bp.component, bp.place, tail, ProjPoint(1, 0))


def test_graft_prune_roundtrip_section_line(p2):
    q = Quasimap(p2, ((BinaryForm.zero(1), BinaryForm.zero(1), F(1, 1)),),
                 markings=MARKS)
    bp, = basepoints(q)
    grafted = graft_with_deterministic_tail(q, bp)
    assert validate_quasimap(grafted) == []
    assert basepoints(grafted) == ()
    assert degrees(grafted)[0].pairings == degrees(q)[0].pairings
    back = prune(grafted, 1)
    assert equal_quasimaps(back, q)


def test_graft_rejects_wrong_degrees(p2):
    q = Quasimap(p2, ((BinaryForm.zero(1), BinaryForm.zero(1), F(1, 1)),),
                 markings=MARKS)
    bp, = basepoints(q)
    with pytest.raises(ValueError):
        graft(q, bp.component, bp.place, (F(0, 1), F(0, 1), F(0, 1)),
              ProjPoint(1, 0))


def test_graft_rejects_value_mismatch(p2):
    q = Quasimap(p2, ((BinaryForm.zero(1), BinaryForm.zero(1), F(1, 1)),),
                 markings=MARKS)
    bp, = basepoints(q)
    # degrees are right but the attach values disagree with the extension
    bad_tail = (F(1, 1, 1), F(1, 2, 1), F(1, 3, 1))
    with pytest.raises(ValueError):
        graft(q, bp.component, bp.place, bad_tail, ProjPoint(1, 0))


def test_prune_requires_unmarked_leaf():
    f = family_map(0)
    with pytest.raises(ValueError):
        prune(f, 0)  # marked component


def test_prune_degree_zero_leaf(p2):
    base = (F(1, 1), F(1, 0, 1), F(1, 1, 1))
    hostq = Quasimap(p2, (base,), markings=MARKS)
    value = section_values(hostq, 0, ProjPoint(1, 3))
    leaf = tuple(F(0, v) for v in value)
    q = Quasimap(p2, (base, leaf),
                 nodes=(((0, ProjPoint(1, 3)), (1, ProjPoint(1, 0))),),
                 markings=MARKS)
    assert validate_quasimap(q) == []
    out = prune(q, 1)
    assert out.components[0] == base


def test_prune_all_tails_matches_contract():
    f = family_map(0)
    pruned = prune(f, 1)
    assert equal_quasimaps(pruned, contract(f))


def test_witness_section_line(p2):
    q = Quasimap(p2, ((BinaryForm.zero(1), BinaryForm.zero(1), F(1, 1)),),
                 markings=MARKS)
    witness = surjectivity_witness(q)
    assert witness.quasimap.n_components == 2
    tail_class = degrees(witness.quasimap)[1][1]
    assert length(tail_class) == 3
    assert equal_quasimaps(contract(witness), q)


def test_witness_on_basepoint_free_input(p2):
    line = Quasimap(p2, ((F(1, 1), F(1, 0, 1), F(1, 1, 1)),), markings=MARKS)
    witness = surjectivity_witness(line)
    assert witness.quasimap == line


def test_witness_random_bl0p2(bl0p2):
    rng = random.Random(41)
    for _ in range(10):
        q = random_stable_quasimap(bl0p2, rng, max_total_length=5)
        witness = surjectivity_witness(q)
        assert stability(witness.quasimap, "map")
        _, overall = contraction_condition(witness)
        assert overall
        assert equal_quasimaps(contract(witness), q)


def test_witness_requires_stability(p2):
    unstable = Quasimap(p2, ((F(0, 1), F(0, 1), F(0, 2)),), markings=MARKS)
    with pytest.raises(ValueError):
        surjectivity_witness(unstable)


def test_witness_rejects_irrational_places(p1xp1):
    # common zero of both factors at z^2 + 1 = 0
    q = Quasimap(
        p1xp1,
        ((F(2, 1, 0, 1), F(2, 2, 0, 2), F(2, 1, 0, 1), F(2, 1, 1, 1)),),
        markings=MARKS,
    )
    bps = basepoints(q)
    assert any(bp.place.degree == 2 for bp in bps)
    with pytest.raises(ValueError):
        surjectivity_witness(q)


def test_stable_map_tree_validation(p2):
    q = Quasimap(p2, ((BinaryForm.zero(1), BinaryForm.zero(1), F(1, 1)),),
                 markings=MARKS)
    with pytest.raises(ValueError):
        StableMapTree(q)  # has a basepoint
