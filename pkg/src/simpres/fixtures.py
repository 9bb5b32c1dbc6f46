"""Standard small algebras and triples used by tests, examples and the CLI."""

from __future__ import annotations

from typing import Sequence

from .algebra import Algebra, AlgebraMorphism, Bimodule
from .exactlin import QQ, Field, Matrix


def ground(field: Field = QQ) -> Algebra:
    return Algebra(field, [[{0: 1}]], {0: 1}, ["1"], name="k")


def dual_numbers(field: Field = QQ) -> Algebra:
    """k[x]/(x²) on the basis (1, x)."""
    return Algebra(field, [[{0: 1}, {1: 1}], [{1: 1}, {}]], {0: 1}, ["1", "x"], name="k[x]/(x^2)")


def split_pair(field: Field = QQ) -> Algebra:
    """k × k on the basis (1, e) with e an idempotent."""
    return Algebra(field, [[{0: 1}, {1: 1}], [{1: 1}, {1: 1}]], {0: 1}, ["1", "e"], name="k×k")


def matrix_algebra(field: Field = QQ, size: int = 2) -> Algebra:
    """M_size(k) on matrix units e_ij in row-major order."""
    n = size
    idx = lambda i, j: i * n + j
    table = [[{} for _ in range(n * n)] for _ in range(n * n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                table[idx(i, j)][idx(j, k)] = {idx(i, k): 1}
    unit = {idx(i, i): 1 for i in range(n)}
    labels = [f"e{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return Algebra(field, table, unit, labels, name=f"M{n}(k)")


def morphism(source: Algebra, target: Algebra, images: Sequence[dict]) -> AlgebraMorphism:
    """Linear map sending basis element ``i`` of ``source`` to ``images[i]``."""
    return AlgebraMorphism(source, target, Matrix.from_columns(target.dim, list(images), source.field))


def unit_inclusion(a: Algebra) -> AlgebraMorphism:
    """ε : k → A, 1 ↦ 1."""
    return morphism(ground(a.field), a, [a.unit])


def regular(a: Algebra) -> Bimodule:
    return Bimodule.regular(a)
