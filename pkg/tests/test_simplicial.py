import pytest

from simpres.algebra import Bimodule
from simpres.exactlin import QQ, Matrix
from simpres.fixtures import dual_numbers, ground, matrix_algebra, morphism, regular, split_pair
from simpres.simplicial import (DegreeError, PatchedAlgebra, PatchedModule, bar_module, check_cosimplicial_compatibility,
                                check_cosimplicial_identities, check_module_compatibility, check_simplicial_identities,
                                coefficient_right_module, constant_cosimplicial_module, secondary_bar_module,
                                transport_diagonal)


@pytest.mark.parametrize("make", [dual_numbers, split_pair, matrix_algebra])
def test_bar_module_identities(make):
    bar = bar_module(make(), 4)
    assert check_simplicial_identities(bar.algebra, 3) == []
    assert check_simplicial_identities(bar, 3) == []
    assert check_module_compatibility(bar, 3) == []


def test_bar_level_dimensions(dual):
    bar = bar_module(dual, 4)
    assert [bar.dim(n) for n in range(5)] == [4, 8, 16, 32, 64]


def test_bar_faces_multiply_neighbours(dual):
    bar = bar_module(dual, 2)
    lay = bar.layout(1)
    x_x_1 = lay.encode((1, 1, 0))
    # δ_0(x⊗x⊗1) = x²⊗1 = 0, δ_1 = x⊗x
    assert bar.face_column(1, 0, x_x_1) == {}
    assert bar.face_column(1, 1, x_x_1) == {bar.layout(0).encode((1, 1)): 1}


def test_secondary_level_dimensions(dual_triple):
    a, b, eps = dual_triple
    sb = secondary_bar_module(a, b, eps, 3)
    assert [sb.dim(n) for n in range(4)] == [2 ** 2 * 2 ** 1, 2 ** 3 * 2 ** 3, 2 ** 4 * 2 ** 6, 2 ** 5 * 2 ** 10]
    assert sb.dim(2) == 1024


@pytest.mark.parametrize("images", [[{0: 1}, {1: 1}], [{0: 1}, {}]], ids=["eps=id", "eps=aug"])
def test_secondary_identities_low_degree(images):
    a, b = dual_numbers(), dual_numbers()
    sb = secondary_bar_module(a, b, morphism(b, a, images), 3)
    assert check_simplicial_identities(sb.algebra, 2) == []
    assert check_simplicial_identities(sb, 2) == []
    assert check_module_compatibility(sb, 2) == []


def test_secondary_with_split_base():
    a, b = split_pair(), dual_numbers()
    sb = secondary_bar_module(a, b, morphism(b, a, [{0: 1}, {}]), 3)
    assert check_simplicial_identities(sb, 2) == []
    assert check_module_compatibility(sb, 2) == []


def test_secondary_rejects_bad_epsilon():
    a, b = matrix_algebra(), split_pair()
    with pytest.raises(ValueError):
        secondary_bar_module(a, b, morphism(b, a, [{0: 1, 3: 1}, {0: 1}]), 2)


def test_corrupted_face_is_located(dual):
    bar = bar_module(dual, 4)
    bad = bar.face(2, 1).with_entry(0, 0, 7)
    broken = PatchedModule(bar, faces={(2, 1): bad})
    failures = check_simplicial_identities(broken, 3)
    assert failures
    assert all(f.degree >= 1 for f in failures)
    assert any(1 in f.indices for f in failures)


def test_corrupted_degeneracy_breaks_compatibility(dual):
    bar = bar_module(dual, 4)
    bad = bar.degeneracy(1, 0).with_entry(0, 3, 1)
    failures = check_module_compatibility(PatchedModule(bar, degeneracies={(1, 0): bad}), 2)
    assert [f.check for f in failures if f.degree == 1] == ["degeneracy compatible with action"]


def test_corrupted_algebra_face(dual):
    env = bar_module(dual, 3).algebra
    bad = env.face(2, 0).with_entry(1, 0, 1)
    failures = check_simplicial_identities(PatchedAlgebra(env, faces={(2, 0): bad}), 2)
    assert failures


def test_checking_beyond_built_range(dual):
    bar = bar_module(dual, 2)
    with pytest.raises(DegreeError):
        check_module_compatibility(bar, 2)


def test_coefficient_modules(dual):
    bar = bar_module(dual, 3)
    s = coefficient_right_module(regular(dual), bar.algebra)
    assert check_simplicial_identities(s, 2) == []
    assert check_module_compatibility(s, 2) == []
    c = constant_cosimplicial_module(regular(dual), bar.algebra)
    assert check_cosimplicial_identities(c, 2) == []
    assert check_cosimplicial_compatibility(c, 2) == []


def test_secondary_coefficients_need_b_symmetry(dual_triple):
    a, b, eps = dual_triple
    sb = secondary_bar_module(a, b, eps, 2)
    reg = Bimodule.regular(a)
    twisted = Bimodule(a, reg.left, [reg.right[0], reg.right[1].scaled(2)])
    with pytest.raises(ValueError):
        coefficient_right_module(twisted, sb.algebra)
    s = coefficient_right_module(reg, sb.algebra)
    assert check_module_compatibility(s, 1) == []


def test_transported_module_is_simplicial(dual):
    bar = bar_module(dual, 4)
    psi = Matrix.from_dense([[1, 0], [1, 2]], QQ)
    c = transport_diagonal(bar, psi)
    assert check_simplicial_identities(c, 3) == []
    assert check_module_compatibility(c, 3) == []
    assert c.face(1, 0) != bar.face(1, 0)
