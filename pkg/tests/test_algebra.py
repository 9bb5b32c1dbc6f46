import pytest

from simpres.algebra import Algebra, Bimodule, Layout, check_b_symmetric, check_epsilon, opposite, tensor_algebras
from simpres.exactlin import QQ, Matrix
from simpres.fixtures import dual_numbers, ground, matrix_algebra, morphism, split_pair, unit_inclusion


@pytest.mark.parametrize("make", [ground, dual_numbers, split_pair, matrix_algebra])
def test_fixtures_are_associative_and_unital(make, field):
    assert make(field).check() == []


def test_broken_associativity_names_the_triple():
    # basis 1, x, y with x² = y, y² = x, xy = yx = 0
    table = [[{0: 1}, {1: 1}, {2: 1}], [{1: 1}, {2: 1}, {}], [{2: 1}, {}, {1: 1}]]
    problems = Algebra(QQ, table, {0: 1}).check()
    assert "associativity fails on basis triple (1,1,2)" in problems


def test_dual_numbers_products(dual):
    assert dual.multiply([0, 1], [0, 1]) == {}
    assert dual.multiply([1, 1], [1, 1]) == {0: 1, 1: 2}
    assert dual.is_commutative()


def test_matrix_units_multiply(m2):
    e12, e21, e11 = {1: 1}, {2: 1}, {0: 1}
    assert m2.mul(e12, e21) == e11
    assert m2.mul(e21, e12) == {3: 1}
    assert not m2.is_commutative()


def test_opposite_reverses_products(m2):
    op = opposite(m2)
    assert op.check() == []
    assert op.mul({1: 1}, {2: 1}) == m2.mul({2: 1}, {1: 1})


def test_tensor_algebra_layout_leftmost_slowest(dual, split):
    t = tensor_algebras([dual, split])
    assert t.dim == 4
    assert t.check() == []
    # (x ⊗ 1)(1 ⊗ e) = x ⊗ e, index 1·2 + 1
    assert t.mul({2: 1}, {1: 1}) == {3: 1}


def test_layout_roundtrip():
    lay = Layout([2, 3, 4])
    for k in range(lay.size):
        assert lay.encode(lay.decode(k)) == k
    assert lay.decode(5) == (0, 1, 1)


def test_generators_drop_one_unit_element(dual, m2):
    assert dual.generators() == [{1: 1}]
    assert len(m2.generators()) == 3


def test_epsilon_checks(dual, split):
    assert check_epsilon(morphism(dual, dual, [{0: 1}, {1: 1}])) == []
    assert check_epsilon(unit_inclusion(matrix_algebra())) == []
    # x ↦ e is not multiplicative since x² = 0 but e² = e
    eps = morphism(dual, split, [{0: 1}, {1: 1}])
    assert eps.check()
    # image must be central
    bad = morphism(split_pair(), matrix_algebra(), [{0: 1, 3: 1}, {0: 1}])
    assert any("central" in p for p in check_epsilon(bad))


def test_noncommutative_b_is_rejected(m2):
    eps = morphism(m2, m2, [{k: 1} for k in range(4)])
    assert any("not commutative" in p for p in check_epsilon(eps))


def test_regular_bimodule_and_b_symmetry(dual):
    reg = Bimodule.regular(dual)
    assert reg.check() == []
    eps = morphism(dual, dual, [{0: 1}, {1: 1}])
    assert check_b_symmetric(reg, eps) == []


def test_twisted_bimodule_is_not_b_symmetric(dual):
    reg = Bimodule.regular(dual)
    twisted = Bimodule(dual, reg.left, [reg.right[0], reg.right[1].scaled(2)])
    assert twisted.check() == []
    eps = morphism(dual, dual, [{0: 1}, {1: 1}])
    assert check_b_symmetric(twisted, eps)


def test_bimodule_shape_validation(dual):
    with pytest.raises(ValueError):
        Bimodule(dual, [Matrix.identity(2, QQ)], [Matrix.identity(2, QQ)])
