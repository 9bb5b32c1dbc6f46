from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from simpres.complexes import tensor_over
from simpres.exactlin import QQ, Matrix
from simpres.fixtures import dual_numbers, regular, split_pair
from simpres.homotopy import (SIGN, HomotopyEquivalence, HomotopyError, LiftedHomotopy, PresimplicialHomotopy,
                              PresimplicialMorphism, calibrate_sign, chain_homotopy_operator, check_homotopy,
                              check_lifted_homotopy, check_morphism, homotopy_identity_residual, identity_equivalence,
                              induced_chain_map, insertion_homotopy, lift_homotopy, reflexive_homotopy,
                              symmetric_homotopy, transitive_homotopy, transport_equivalence, verify_replacement,
                              verify_replacement_cohomology)
from simpres.simplicial import bar_module, coefficient_right_module, constant_cosimplicial_module

P = PresimplicialMorphism


@pytest.fixture(scope="module")
def bar():
    return bar_module(dual_numbers(), 5)


@pytest.fixture(scope="module")
def coeff(bar):
    return coefficient_right_module(regular(bar.algebra.a), bar.algebra)


def test_sign_is_calibrated():
    assert calibrate_sign() == SIGN


def test_identity_and_zero_are_morphisms(bar):
    assert check_morphism(P.identity(bar), 3) == []
    assert check_morphism(P.zero(bar, bar), 3) == []


def test_corrupted_morphism_is_located(bar):
    ident = P.identity(bar)
    bad = P(bar, bar, lambda n: ident.matrix(n).with_entry(0, 1, 1) if n == 2 else ident.matrix(n))
    failures = check_morphism(bad, 3)
    assert failures and {f.degree for f in failures} <= {2, 3}


def test_reflexive_of_identity_is_degeneracy(bar):
    h = reflexive_homotopy(P.identity(bar))
    assert h.component(2, 1) == bar.degeneracy(2, 1)
    assert check_homotopy(h, 3) == []


def test_reflexive_of_zero_is_zero(bar):
    h = reflexive_homotopy(P.zero(bar, bar))
    assert all(h.component(n, i).is_zero() for n in range(3) for i in range(n + 1))


def test_wrong_endpoint_is_caught_in_last_family(bar):
    h = reflexive_homotopy(P.identity(bar))
    wrong = PresimplicialHomotopy(h.start, P.scalar(bar, 2), h.component)
    checks = {f.check for f in check_homotopy(wrong, 2)}
    assert checks == {"δ_{n+1} h_n = g"}


def test_insertion_homotopy_has_distinct_endpoints(bar):
    h = insertion_homotopy(bar, {1: 1})
    assert check_homotopy(h, 3) == []
    assert h.start.matrix(1) != h.end.matrix(1)


def test_insertion_needs_central_element():
    from simpres.fixtures import matrix_algebra
    with pytest.raises(HomotopyError):
        insertion_homotopy(bar_module(matrix_algebra(), 2), {1: 1})


def test_symmetric_is_an_involution(bar):
    h = insertion_homotopy(bar, {1: 1})
    t = symmetric_homotopy(h)
    assert check_homotopy(t, 3) == []
    assert t.start is h.end and t.end is h.start
    assert symmetric_homotopy(t).equals(h, 3)


def test_transitive_collapses(bar):
    h = insertion_homotopy(bar, {1: 1})
    s = transitive_homotopy(h, reflexive_homotopy(h.end))
    assert s.equals(h, 3)
    s2 = transitive_homotopy(reflexive_homotopy(h.start), h)
    assert s2.equals(h, 3)
    roundtrip = transitive_homotopy(h, symmetric_homotopy(h))
    assert check_homotopy(roundtrip, 3) == []


def test_transitive_rejects_mismatched_endpoints(bar):
    h = reflexive_homotopy(P.identity(bar))
    t = reflexive_homotopy(P.scalar(bar, 2))
    with pytest.raises(HomotopyError):
        transitive_homotopy(h, t)


@settings(max_examples=15, deadline=None)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=4), st.fractions(min_value=-5, max_value=5, max_denominator=4))
def test_scalar_homotopies(c, d):
    bar = bar_module(split_pair(), 3)
    f, g = P.scalar(bar, c), P.scalar(bar, d)
    for h in (reflexive_homotopy(f), symmetric_homotopy(reflexive_homotopy(f))):
        assert check_homotopy(h, 2) == []
    assert check_morphism(f.compose(g), 2) == []


def test_induced_map_of_identity(bar, coeff):
    t = tensor_over(coeff, bar)
    F = induced_chain_map(coeff, P.identity(bar), t, t)
    assert all(F.matrix(n) == Matrix.identity(t.dim(n), QQ) for n in range(4))
    Z = induced_chain_map(coeff, P.zero(bar, bar), t, t)
    assert Z.matrix(2).is_zero()


def test_lifted_reflexive_is_tensor_degeneracy(bar, coeff):
    t = tensor_over(coeff, bar)
    hl = lift_homotopy(coeff, reflexive_homotopy(P.identity(bar)), t, t)
    for n in range(3):
        for i in range(n + 1):
            assert hl.component(n, i) == t.degeneracy(n, i)


def test_lifted_identities_and_chain_identity(bar):
    a = bar.algebra.a
    from simpres.algebra import Bimodule
    reg = Bimodule.regular(a)
    twisted = Bimodule(a, reg.left, [reg.right[0], reg.right[1].scaled(2)])
    m = coefficient_right_module(twisted, bar.algebra)
    t = tensor_over(m, bar)
    hl = lift_homotopy(m, insertion_homotopy(bar, {1: 1}), t, t)
    assert check_lifted_homotopy(hl, 3) == []
    assert all(homotopy_identity_residual(hl, n).is_zero() for n in range(4))
    assert not all(homotopy_identity_residual(hl, n, -SIGN).is_zero() for n in range(4))


def test_fault_injected_lift_breaks_chain_identity(bar, coeff):
    t = tensor_over(coeff, bar)
    hl = lift_homotopy(coeff, reflexive_homotopy(P.identity(bar)), t, t)
    good = hl.component(1, 0)
    hl._cache[(1, 0)] = good.with_entry(0, 0, good[0, 0] + 1)
    assert not homotopy_identity_residual(hl, 1).is_zero()
    assert check_lifted_homotopy(hl, 2)


def test_verify_replacement_identity(bar, coeff):
    r = verify_replacement(coeff, identity_equivalence(bar), 3)
    assert r.ok and r.betti_source == [2, 1, 1, 1]


def test_verify_replacement_transport(bar, coeff):
    eq = transport_equivalence(bar, Matrix.from_dense([[1, 0], [1, 2]], QQ))
    assert eq.target is not bar
    r = verify_replacement(coeff, eq, 2)
    assert r.ok, r.failures
    assert r.betti_source == r.betti_target == [2, 1, 1]


def test_verify_replacement_scalar(bar, coeff):
    f, g = P.scalar(bar, 3), P.scalar(bar, Fraction(1, 3))
    ident = P.identity(bar)
    h = PresimplicialHomotopy(g.compose(f), ident, reflexive_homotopy(ident).component)
    t = PresimplicialHomotopy(f.compose(g), ident, reflexive_homotopy(ident).component)
    assert verify_replacement(coeff, HomotopyEquivalence(f, g, h, t), 2).ok


def test_bad_equivalence_is_reported(bar, coeff):
    f = P.scalar(bar, 2)
    ident = P.identity(bar)
    h = PresimplicialHomotopy(f.compose(f), ident, reflexive_homotopy(ident).component)
    r = verify_replacement(coeff, HomotopyEquivalence(f, f, h, h), 1)
    assert not r.ok
    assert any("δ_0 h_0 = f" in x.check for x in r.failures)


def test_cohomology_replacement(bar):
    m = constant_cosimplicial_module(regular(bar.algebra.a), bar.algebra)
    eq = transport_equivalence(bar, Matrix.from_dense([[1, 0], [1, 2]], QQ))
    r = verify_replacement_cohomology(m, eq, 2)
    assert r.ok, r.failures
    assert r.betti_source == [2, 1, 1]


def test_unliftable_homotopy_is_reported_not_raised(bar, coeff):
    from simpres.cli import build_equivalence, load
    from pathlib import Path
    doc = load(str(Path(__file__).resolve().parents[1] / "src/simpres/data/homotopy_fault.json"))
    eq = build_equivalence(doc, "hochschild", 3)
    r = verify_replacement(coefficient_right_module(doc.bimodule, eq.source.algebra), eq, 2)
    assert not r.ok
    assert r.details["equivalence"]
    lifted = r.details["lifted h identities"]
    assert lifted and lifted[0].degree == 1
