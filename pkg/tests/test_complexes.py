import pytest

from simpres.algebra import Bimodule
from simpres.complexes import (ChainComplex, ComplexError, WellDefinednessError, hom_over, tensor_over,
                               to_chain_complex, to_cochain_complex)
from simpres.exactlin import GF, QQ, Matrix
from simpres.fixtures import dual_numbers, ground, matrix_algebra, morphism, regular, split_pair
from simpres.oracles import classical_hochschild_betti, classical_hochschild_cobetti, secondary_dimension_formula
from simpres.simplicial import (DegreeError, PatchedModule, bar_module, check_simplicial_identities,
                                coefficient_right_module, constant_cosimplicial_module, secondary_bar_module)


def hochschild(a, m=None, top=3):
    bar = bar_module(a, top + 1)
    coeff = coefficient_right_module(m or regular(a), bar.algebra)
    return tensor_over(coeff, bar)


@pytest.mark.parametrize("make,top", [(dual_numbers, 4), (split_pair, 4), (matrix_algebra, 2), (ground, 3)])
def test_homology_matches_oracle(make, top):
    a = make()
    cx = to_chain_complex(hochschild(a, top=top + 1), top + 1)
    assert cx.betti_table(top) == classical_hochschild_betti(a, None, top)


@pytest.mark.parametrize("make,top", [(dual_numbers, 3), (matrix_algebra, 2), (split_pair, 3)])
def test_cohomology_matches_oracle(make, top):
    a = make()
    bar = bar_module(a, top + 1)
    lv = hom_over(bar, constant_cosimplicial_module(regular(a), bar.algebra))
    assert to_cochain_complex(lv, top + 1).betti_table(top) == classical_hochschild_cobetti(a, None, top)


def test_over_prime_field():
    a = dual_numbers(GF(2))
    cx = to_chain_complex(hochschild(a, top=4), 4)
    assert cx.betti_table(3) == classical_hochschild_betti(a, None, 3)


def test_quotient_dimensions_are_classical(dual):
    t = hochschild(dual, top=4)
    assert [t.dim(n) for n in range(5)] == [2 * 2 ** n for n in range(5)]


def test_hom_dimensions_are_classical(m2):
    bar = bar_module(m2, 2)
    lv = hom_over(bar, constant_cosimplicial_module(regular(m2), bar.algebra))
    assert [lv.dim(n) for n in range(3)] == [4, 16, 64]


def test_tensor_levels_are_simplicial(dual):
    assert check_simplicial_identities(hochschild(dual, top=4), 2) == []


def test_generator_and_basis_relations_agree(dual_triple):
    a, b, eps = dual_triple
    sb = secondary_bar_module(a, b, eps, 2)
    coeff = coefficient_right_module(regular(a), sb.algebra)
    gens = tensor_over(coeff, sb, relations="generators")
    full = tensor_over(coeff, sb, relations="basis")
    for n in range(3):
        assert gens.dim(n) == full.dim(n)


def test_secondary_dimensions(dual_triple):
    a, b, eps = dual_triple
    sb = secondary_bar_module(a, b, eps, 2)
    t = tensor_over(coefficient_right_module(regular(a), sb.algebra), sb)
    assert [t.dim(n) for n in range(3)] == [secondary_dimension_formula(a, b, n) for n in range(3)]


def test_secondary_with_trivial_b_is_classical(dual):
    k = ground()
    sb = secondary_bar_module(dual, k, morphism(k, dual, [{0: 1}]), 4)
    t = tensor_over(coefficient_right_module(regular(dual), sb.algebra), sb)
    assert to_chain_complex(t, 4).betti_table(3) == classical_hochschild_betti(dual, None, 3)


def test_broken_face_is_not_well_defined(dual):
    bar = bar_module(dual, 3)
    # x0⊗x1⊗x2 ↦ x1⊗x2 forgets the left action, so relations are not preserved
    lay1, lay0 = bar.layout(1), bar.layout(0)
    cols = {j: {lay0.encode(lay1.decode(j)[1:]): 1} for j in range(bar.dim(1))}
    broken = PatchedModule(bar, faces={(1, 0): Matrix(bar.dim(0), bar.dim(1), QQ, cols)})
    t = tensor_over(coefficient_right_module(regular(dual), bar.algebra), broken)
    with pytest.raises(WellDefinednessError):
        t.face(1, 0)


def test_mismatched_algebras_rejected(dual):
    bar1, bar2 = bar_module(dual, 2), bar_module(dual, 2)
    with pytest.raises(ValueError):
        tensor_over(coefficient_right_module(regular(dual), bar1.algebra), bar2)
    with pytest.raises(ValueError):
        tensor_over(bar1, bar1)


def test_zero_coefficients(dual):
    bar = bar_module(dual, 3)
    t = tensor_over(coefficient_right_module(Bimodule.zero(dual), bar.algebra), bar)
    assert to_chain_complex(t, 3).betti_table(2) == [0, 0, 0]
    lv = hom_over(bar, constant_cosimplicial_module(Bimodule.zero(dual), bar.algebra))
    assert [lv.dim(n) for n in range(3)] == [0, 0, 0]


def test_chain_complex_invariants():
    f = QQ
    d1 = Matrix.from_dense([[1, 1]], f)
    d2 = Matrix.from_dense([[1], [-1]], f)
    cx = ChainComplex([1, 2, 1], {1: d1, 2: d2}, f)
    assert cx.betti_table(1) == [0, 0]
    with pytest.raises(DegreeError):
        cx.betti(2)
    with pytest.raises(ComplexError):
        ChainComplex([1, 2, 1], {1: d1, 2: Matrix.from_dense([[1], [0]], f)}, f)


def test_zero_boundaries_give_level_dims():
    f = QQ
    cx = ChainComplex([2, 3, 1], {1: Matrix.zero(2, 3, f), 2: Matrix.zero(3, 1, f)}, f)
    assert cx.betti_table(1) == [2, 3]
