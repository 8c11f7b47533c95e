from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest

from ainfty import io
from ainfty.category import (
    evaluate_mu,
    is_homology_unit,
    verify_ainfty_relations,
    verify_degree_convention,
)
from ainfty.errors import InvalidModel, MissingCoveringArc
from ainfty.filtration import verify_filtration_subadditivity
from ainfty.fixtures import (
    DiskModel,
    covering_arc,
    disk_with_stops_category,
    golden_disk_model,
    linear_quiver_category,
    path_count_oracle,
    shipped_fixtures,
    standard_disk_models,
    stop_removal_testcase,
)
from ainfty.quotient import build_quotient

GOLDEN = json.loads((Path(__file__).parent / "data" / "disk_s2_w1_paths.json").read_text())


def test_quiver_examples():
    A1 = linear_quiver_category(1)
    assert [g.name for g in A1.generators] == ["e0"]
    A2 = linear_quiver_category(2)
    assert [g.name for g in A2.generators] == ["e0", "p01", "e1"]
    A3 = linear_quiver_category(3)
    assert A3.names(evaluate_mu(A3, ["p12", "p01"])) == ["p02"]
    with pytest.raises(ValueError):
        linear_quiver_category(0)


def test_every_fixture_passes_core_checks(fixtures):
    for name, C in fixtures.items():
        assert verify_ainfty_relations(C, 4) == [], name
        assert verify_degree_convention(C) == [], name
        assert verify_filtration_subadditivity(C) == [], name
        for obj, u in C.units.items():
            assert is_homology_unit(C, u, obj), (name, obj)


def test_golden_disk_matches_hand_list():
    m = golden_disk_model()
    assert m.to_dict() == GOLDEN["model"]
    for label, pos in GOLDEN["endpoints"].items():
        arc, end = label[0], int(label[1])
        (_, a, b), = [t for t in m.arcs if t[0] == arc]
        assert m.point_position(*(a, b)[end]) == Fraction(pos)
    C = disk_with_stops_category(m)
    got = sorted([g.name, g.source, g.target, list(g.weights), str(g.action)] for g in C.generators)
    assert got == sorted(GOLDEN["paths"])
    for (left, right), out in GOLDEN["products"]:
        val = evaluate_mu(C, [left, right])
        assert C.names(val) == ([out] if out else [])


def test_disk_degrees_count_crossings():
    C = disk_with_stops_category(golden_disk_model())
    assert all(g.degree == -sum(g.weights) for g in C.generators)


def test_disk_homs_match_path_oracle():
    for name, m in standard_disk_models().items():
        C = disk_with_stops_category(m)
        stops = list(C.stops)
        for x in C.objects:
            for y in C.objects:
                basis = C.hom_basis(x, y)
                assert len(basis) == path_count_oracle(m, x, y), (name, x, y)
                for k in range(-6, 1):
                    n_k = sum(1 for i in basis if C.generators[i].degree == k)
                    assert n_k == path_count_oracle(m, x, y, degree=k)
                for t in range(len(stops)):
                    kept = stops[:t] + stops[t + 1:]
                    free = sum(1 for i in basis if all(C.generators[i].weights[stops.index(s)] == 0 for s in kept))
                    assert free == path_count_oracle(m, x, y, zero_at=kept)


def test_oracle_counts_unit_path():
    m = golden_disk_model()
    for arc, _, _ in m.arcs:
        assert path_count_oracle(m, arc, arc, zero_at=m.stops) >= 1


def test_invalid_models_rejected():
    with pytest.raises(InvalidModel):
        DiskModel(2, (2, 2), (("D", (0, 0), (0, 1)),), 1).validate()
    with pytest.raises(InvalidModel):
        DiskModel(2, (2, 2), (("D", (0, 0), (1, 0)), ("X", (0, 0), (1, 1))), 1).validate()
    with pytest.raises(InvalidModel):
        DiskModel.from_dict({"stops": 2, "arcs": []})


def test_covering_arc():
    m = standard_disk_models()["disk_s3_w1"]
    assert covering_arc(m, "s0") == "D"
    assert covering_arc(m, "s1") == "X"
    bare = DiskModel(2, (2, 2), (("X", (0, 1), (1, 0)),), 1)
    with pytest.raises(MissingCoveringArc):
        stop_removal_testcase(bare, "s0")


def test_stop_removal_bundle():
    case = stop_removal_testcase(standard_disk_models()["disk_s2_w2"], "s0")
    assert case.subcategory == ("D",)
    m = standard_disk_models()["disk_s2_w2"]
    for x in case.full.objects:
        for y in case.full.objects:
            assert len(case.reference.hom_basis(x, y)) == path_count_oracle(m, x, y, zero_at=["s1"])


def test_stop_removal_without_subcategory_is_identity():
    m = standard_disk_models()["disk_s2_w1"]
    case = stop_removal_testcase(m, "s0", with_subcategory=False)
    data = build_quotient(case.stopped, (), 4)
    assert data.category == case.stopped


def test_fixture_generation_is_deterministic():
    a = {k: io.dump_category(v) for k, v in shipped_fixtures().items()}
    b = {k: io.dump_category(v) for k, v in shipped_fixtures().items()}
    assert a == b


def test_model_round_trip():
    for m in standard_disk_models().values():
        assert DiskModel.from_dict(m.to_dict()) == m
