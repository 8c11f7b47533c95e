from __future__ import annotations

import functools

import pytest

from ainfty.category import mu1
from ainfty.errors import DegreeMismatch, NonTerminating, NotASubcomplex
from ainfty.fixtures import (
    TOY_WORD_LENGTH,
    load_toy_delta,
    retraction_toy_quotient,
    solve_weight_dropping_homotopy,
    toy_hom_basis,
)
from ainfty.retraction import (
    MainWeight,
    basic_retraction,
    chain_main_weight,
    check_delta_degrees,
    homotopy_identity_holds,
    in_partially_wrapped,
    iterate_retraction,
    main_weight,
    partially_wrapped_inclusion_report,
    telescoped_homotopy,
    verify_compact_deformation_property,
    verify_retraction_hypotheses,
)


@functools.lru_cache(maxsize=None)
def _toy():
    Q = retraction_toy_quotient().category
    return Q, load_toy_delta(Q)


def test_main_weight_examples():
    Q, _ = _toy()
    assert main_weight(Q, Q.gen("a"), "s") == MainWeight(0, 0)
    assert main_weight(Q, Q.gen("c"), "s") == (1, 0)
    assert main_weight(Q, Q.gen("w:b'|u|a"), "s") == (2, 2)
    assert main_weight(Q, Q.gen("w:b'|e_D|a'"), 0) == (2, 2)
    assert chain_main_weight(Q, 0, "s") is None
    assert chain_main_weight(Q, Q.chain("c", "w:b|a"), "s") == (1, 0)
    assert MainWeight(0, 9) < MainWeight(1, 0)


def test_zero_delta_is_identity():
    Q, _ = _toy()
    for i in toy_hom_basis(Q, 2):
        assert basic_retraction(Q, {}, 1 << i) == 1 << i


def test_zero_delta_violates_descent():
    Q, _ = _toy()
    bad = verify_retraction_hypotheses(Q, {}, [Q.gen("c"), Q.gen("w:b|a")], "s")
    assert [v.location for v in bad] == ["c"]
    assert verify_retraction_hypotheses(Q, {}, [Q.gen("w:b|a"), Q.gen("w:b|e_D|a")], "s") == []


def test_toy_hypotheses():
    Q, delta = _toy()
    check_delta_degrees(Q, delta)
    assert verify_retraction_hypotheses(Q, delta, toy_hom_basis(Q), "s") == []


def test_retraction_is_chain_map():
    Q, delta = _toy()
    for i in toy_hom_basis(Q, TOY_WORD_LENGTH - 1):
        x = 1 << i
        assert mu1(Q, basic_retraction(Q, delta, x)) == basic_retraction(Q, delta, mu1(Q, x))


def test_weight_zero_fixed():
    Q, delta = _toy()
    for i in toy_hom_basis(Q):
        if in_partially_wrapped(Q, 1 << i, "s"):
            assert basic_retraction(Q, delta, 1 << i) == 1 << i
            r = iterate_retraction(Q, delta, 1 << i, "s")
            assert (r.result, r.iterations, r.witness) == (1 << i, 0, 0)


def test_iteration_on_toy():
    Q, delta = _toy()
    worst = 0
    for i in toy_hom_basis(Q, TOY_WORD_LENGTH - 1):
        r = iterate_retraction(Q, delta, 1 << i, "s")
        worst = max(worst, r.iterations)
        assert in_partially_wrapped(Q, r.result, "s")
        assert basic_retraction(Q, delta, r.result) == r.result
        H = telescoped_homotopy(Q, delta, r.iterations)
        assert H(1 << i) == r.witness
        assert (1 << i) ^ r.result == mu1(Q, r.witness) ^ H(mu1(Q, 1 << i))
        assert homotopy_identity_holds(Q, delta, 1 << i, r.iterations)
    assert worst <= 5


def test_toy_c_retracts_to_ba():
    Q, delta = _toy()
    r = iterate_retraction(Q, delta, 1 << Q.gen("c"), "s")
    assert Q.names(r.result) == ["w:b|a"]
    assert r.iterations == 1
    assert Q.names(r.witness) == ["w:b|a'"]
    assert [chain_main_weight(Q, y, "s") for y in r.orbit] == [(1, 0), (0, 1)]


def test_weight_two_input_stabilizes():
    Q, delta = _toy()
    x = 1 << Q.gen("w:b'|a'")
    assert chain_main_weight(Q, x, "s") == (2, 1)
    r = iterate_retraction(Q, delta, x, "s")
    assert r.iterations <= 3
    assert in_partially_wrapped(Q, r.result, "s")
    assert homotopy_identity_holds(Q, delta, x, r.iterations)


def test_compact_deformation():
    Q, delta = _toy()
    report = verify_compact_deformation_property(Q, delta, toy_hom_basis(Q, 4), "s")
    assert report.ok and report.iterations <= 5
    zero = [i for i in toy_hom_basis(Q, 4) if in_partially_wrapped(Q, 1 << i, "s")]
    assert verify_compact_deformation_property(Q, delta, zero, "s").iterations == 0


def test_single_acyclic_pair():
    Q, delta = _toy()
    pair = [Q.gen("c"), Q.gen("w:b|a'")]
    assert mu1(Q, 1 << Q.gen("w:b|a'")) == Q.chain("c", "w:b|a")
    with pytest.raises(NotASubcomplex):
        verify_compact_deformation_property(Q, delta, pair, "s")
    report = verify_compact_deformation_property(Q, delta, pair + [Q.gen("w:b|a")], "s")
    assert report.ok


def test_inclusion_iso_in_stable_window():
    Q, _ = _toy()
    rows = partially_wrapped_inclusion_report(Q, "X", "Y", "s", range(-TOY_WORD_LENGTH, 1))
    stable = {k: r for k, r in rows.items() if r["stable"]}
    assert stable
    assert all(r["iso"] for r in stable.values())
    assert rows[-1]["source"] == rows[-1]["target"] == 1


def test_solver_reproduces_a_valid_delta():
    Q, _ = _toy()
    basis = toy_hom_basis(Q, 3)
    delta = solve_weight_dropping_homotopy(Q, "s", basis)
    check_delta_degrees(Q, delta)
    assert verify_retraction_hypotheses(Q, delta, basis, "s") == []


def test_bad_delta_does_not_terminate():
    Q, delta = _toy()
    c = Q.gen("c")
    # R = id never leaves positive weight
    with pytest.raises(NonTerminating):
        iterate_retraction(Q, {}, 1 << c, "s")
    # these two corrections cancel, so R(c) = c again
    cancel = {c: Q.chain("w:b|a'", "w:b'|a")}
    assert basic_retraction(Q, cancel, 1 << c) == 1 << c
    with pytest.raises(NonTerminating):
        iterate_retraction(Q, cancel, 1 << c, "s")
    assert iterate_retraction(Q, delta, 1 << c, "s").iterations == 1


def test_delta_degree_mismatch():
    Q, _ = _toy()
    with pytest.raises(DegreeMismatch):
        check_delta_degrees(Q, {Q.gen("c"): 1 << Q.gen("w:b|a")})


def test_delta_nonzero_on_weight_zero_is_reported():
    Q, delta = _toy()
    ba = Q.gen("w:b|a")
    bad = dict(delta)
    bad[ba] = 1 << Q.gen("w:b|e_D|a")
    assert any(v.location == "w:b|a" for v in verify_retraction_hypotheses(Q, bad, [ba], "s"))
