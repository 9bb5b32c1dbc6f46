"""Finite-dimensional associative unital algebras given by structure constants.

Basis elements are indices ``0 .. dim-1``; elements are sparse vectors.  Tensor
products flatten basis tuples with the leftmost factor varying slowest, and
every construction in the package uses that same convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exactlin import Field, Matrix, add_scaled, clean, scale


def _as_sparse(x, dim: int, field: Field) -> dict:
    if isinstance(x, Mapping):
        for k in x:
            if not 0 <= k < dim:
                raise ValueError(f"index {k} outside dimension {dim}")
        return clean(x, field)
    if len(x) != dim:
        raise ValueError(f"vector of length {len(x)} for dimension {dim}")
    return clean(dict(enumerate(x)), field)


class Layout:
    """Mixed-radix indexing of tensor basis tuples (leftmost slot slowest)."""

    __slots__ = ("dims", "size", "strides", "_memo")

    _MEMO_LIMIT = 1 << 17

    def __init__(self, dims: Sequence[int]):
        self.dims = tuple(dims)
        size = 1
        strides = []
        for d in reversed(self.dims):
            strides.append(size)
            size *= d
        self.size = size
        self.strides = tuple(reversed(strides))
        self._memo: Optional[dict] = {} if size <= self._MEMO_LIMIT else None

    def encode(self, t: Sequence[int]) -> int:
        k = 0
        for x, d in zip(t, self.dims):
            k = k * d + x
        return k

    def decode(self, k: int) -> Tuple[int, ...]:
        memo = self._memo
        if memo is not None:
            hit = memo.get(k)
            if hit is not None:
                return hit
        out = [0] * len(self.dims)
        r = k
        for pos in range(len(self.dims) - 1, -1, -1):
            r, out[pos] = divmod(r, self.dims[pos])
        t = tuple(out)
        if memo is not None:
            memo[k] = t
        return t


def combine(parts: Sequence[Mapping], dims: Sequence[int], field: Field) -> dict:
    """Tensor product of per-slot sparse vectors, flattened by ``dims``."""
    k = 0
    coef = 1
    for part, d in zip(parts, dims):
        if len(part) != 1:
            if not part:
                return {}
            return _combine_general(parts, dims, field)
        for j, c in part.items():
            k = k * d + j
            if c != 1:
                coef = coef * c
    if coef == 1:
        return {k: 1}
    coef = field.norm(coef)
    return {k: coef} if coef != 0 else {}


def _combine_general(parts, dims, field):
    acc = {0: 1}
    for part, d in zip(parts, dims):
        if len(part) == 1:
            (j, c), = part.items()
            if c == 1:
                acc = {k * d + j: x for k, x in acc.items()}
            else:
                acc = {k * d + j: x * c for k, x in acc.items()}
        else:
            acc = {k * d + j: x * c for k, x in acc.items() for j, c in part.items()}
        if not acc:
            return {}
    return clean(acc, field)


class Algebra:
    """Associative unital algebra from structure constants ``table[i][j] = e_i e_j``."""

    def __init__(self, field: Field, table: Sequence[Sequence[Mapping]], unit: Mapping,
                 labels: Optional[Sequence[str]] = None, name: str = ""):
        self.field = field
        self.dim = len(table)
        self._table = [[clean(v, field) for v in row] for row in table]
        self.unit = clean(unit, field)
        self.labels = list(labels) if labels is not None else [f"e{i}" for i in range(self.dim)]
        self.name = name
        if len(self.labels) != self.dim:
            raise ValueError("label count differs from dimension")

    @classmethod
    def from_dense(cls, field: Field, structure_constants, unit, labels=None, name="") -> "Algebra":
        dim = len(structure_constants)
        table = []
        for i, row in enumerate(structure_constants):
            if len(row) != dim:
                raise ValueError(f"structure constants row {i} has length {len(row)}, expected {dim}")
            table.append([_as_sparse(v, dim, field) for v in row])
        return cls(field, table, _as_sparse(unit, dim, field), labels, name)

    @property
    def structure_constants(self) -> List[List[dict]]:
        return [[self.mul_basis(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def mul_basis(self, i: int, j: int) -> dict:
        return self._table[i][j]

    def multiply(self, x, y) -> dict:
        """Bilinear product of two elements (dense sequences or sparse dicts)."""
        return self.mul(_as_sparse(x, self.dim, self.field), _as_sparse(y, self.dim, self.field))

    def mul(self, x: Mapping, y: Mapping) -> dict:
        """Product of already-clean sparse vectors, without validation."""
        if len(x) == 1 and len(y) == 1:
            (i, a), = x.items()
            (j, b), = y.items()
            if a == 1 and b == 1:
                return self.mul_basis(i, j)
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                add_scaled(out, self.mul_basis(i, j), a * b, self.field)
        return out

    def generators(self) -> List[dict]:
        """Basis elements minus one unit-supporting element; with 1 they generate."""
        drop = min(self.unit) if self.unit else None
        return [{i: 1} for i in range(self.dim) if i != drop]

    def unit_basis_index(self) -> Optional[int]:
        if len(self.unit) == 1:
            (i, c), = self.unit.items()
            if c == 1:
                return i
        return None

    def check(self) -> List[str]:
        """Associativity over basis triples and unit laws; returns violations."""
        out = []
        n, f = self.dim, self.field
        for i in range(n):
            for j in range(n):
                ij = self.mul_basis(i, j)
                for k in range(n):
                    left = self.multiply(ij, {k: 1})
                    right = self.multiply({i: 1}, self.mul_basis(j, k))
                    if left != right:
                        out.append(f"associativity fails on basis triple ({i},{j},{k})")
        for i in range(n):
            if self.multiply(self.unit, {i: 1}) != {i: 1}:
                out.append(f"left unit law fails on basis element {i}")
            if self.multiply({i: 1}, self.unit) != {i: 1}:
                out.append(f"right unit law fails on basis element {i}")
        return out

    def is_commutative(self) -> bool:
        return all(self.mul_basis(i, j) == self.mul_basis(j, i)
                   for i in range(self.dim) for j in range(i + 1, self.dim))

    def same_structure(self, other: "Algebra") -> bool:
        return (self.dim == other.dim and self.unit == other.unit
                and self.structure_constants == other.structure_constants)

    def __repr__(self):
        return f"Algebra({self.name or 'dim'}={self.dim})"


class TensorAlgebra(Algebra):
    """Tensor product of algebras, with products computed slotwise on demand."""

    def __init__(self, factors: Sequence[Algebra], name: str = ""):
        if not factors:
            raise ValueError("tensor product of an empty list")
        self.factors = list(factors)
        self.field = factors[0].field
        self.layout = Layout([a.dim for a in factors])
        self.dim = self.layout.size
        self.name = name
        self.unit = combine([a.unit for a in factors], self.layout.dims, self.field)
        self._cache: Dict[Tuple[int, int], dict] = {}
        self._labels: Optional[List[str]] = None

    @property
    def labels(self) -> List[str]:
        if self._labels is None:
            import itertools
            self._labels = ["⊗".join(t) for t in itertools.product(*[a.labels for a in self.factors])]
        return self._labels

    def mul_basis(self, i: int, j: int) -> dict:
        key = (i, j)
        hit = self._cache.get(key)
        if hit is None:
            ti, tj = self.layout.decode(i), self.layout.decode(j)
            parts = [a.mul_basis(x, y) for a, x, y in zip(self.factors, ti, tj)]
            hit = combine(parts, self.layout.dims, self.field)
            if len(self._cache) < 500_000:
                self._cache[key] = hit
        return hit

    def slot_element(self, slot: int, v: Mapping) -> dict:
        """``1 ⊗ .. ⊗ v ⊗ .. ⊗ 1`` with ``v`` in position ``slot``."""
        parts = [a.unit for a in self.factors]
        parts[slot] = v
        return combine(parts, self.layout.dims, self.field)

    def generators(self) -> List[dict]:
        out = []
        for s, a in enumerate(self.factors):
            for g in a.generators():
                out.append(self.slot_element(s, g))
        return out


def opposite(alg: Algebra) -> Algebra:
    if isinstance(alg, TensorAlgebra):
        return TensorAlgebra([opposite(a) for a in alg.factors], name=alg.name + "^op")
    table = [[alg.mul_basis(j, i) for j in range(alg.dim)] for i in range(alg.dim)]
    return Algebra(alg.field, table, alg.unit, alg.labels, name=(alg.name + "^op") if alg.name else "")


def tensor_algebras(algebras: Sequence[Algebra]) -> Algebra:
    flat: List[Algebra] = []
    for a in algebras:
        if isinstance(a, TensorAlgebra):
            flat.extend(a.factors)
        else:
            flat.append(a)
    return TensorAlgebra(flat)


@dataclass
class AlgebraMorphism:
    source: Algebra
    target: Algebra
    matrix: Matrix

    def __post_init__(self):
        if (self.matrix.rows, self.matrix.cols) != (self.target.dim, self.source.dim):
            raise ValueError("morphism matrix shape does not match source/target dimensions")

    def __call__(self, v: Mapping) -> dict:
        return self.matrix.apply(v)

    def image(self, i: int) -> dict:
        return self.matrix.column(i)

    def check(self) -> List[str]:
        out = []
        s = self.source
        for i in range(s.dim):
            for j in range(s.dim):
                lhs = self(s.mul_basis(i, j))
                rhs = self.target.multiply(self.image(i), self.image(j))
                if lhs != rhs:
                    out.append(f"not multiplicative on basis pair ({i},{j})")
        if self(s.unit) != self.target.unit:
            out.append("does not preserve the unit")
        return out


def check_epsilon(eps: AlgebraMorphism) -> List[str]:
    """Conditions on a triple (A, B, ε): B commutative, ε a unital algebra map into Z(A)."""
    b, a = eps.source, eps.target
    out = []
    for i in range(b.dim):
        for j in range(i + 1, b.dim):
            if b.mul_basis(i, j) != b.mul_basis(j, i):
                out.append(f"B is not commutative: basis pair ({i},{j})")
    out.extend("ε " + msg for msg in eps.check())
    for i in range(b.dim):
        img = eps.image(i)
        for k in range(a.dim):
            if a.multiply(img, {k: 1}) != a.multiply({k: 1}, img):
                out.append(f"ε(b{i}) does not commute with A basis element {k}: image not central")
    return out


class Bimodule:
    """A-bimodule; ``left[i]`` and ``right[i]`` are the actions of basis element ``i``.

    ``left[i] @ m`` is ``e_i·m`` and ``right[i] @ m`` is ``m·e_i``.
    """

    def __init__(self, over: Algebra, left: Sequence[Matrix], right: Sequence[Matrix], name: str = ""):
        self.over = over
        self.field = over.field
        self.dim = left[0].rows if left else 0
        if len(left) != over.dim or len(right) != over.dim:
            raise ValueError("need one action matrix per algebra basis element")
        for m in list(left) + list(right):
            if (m.rows, m.cols) != (self.dim, self.dim):
                raise ValueError("action matrices must be square of the module dimension")
        self.left = list(left)
        self.right = list(right)
        self.name = name

    @classmethod
    def regular(cls, alg: Algebra) -> "Bimodule":
        f = alg.field
        left = [Matrix.from_columns(alg.dim, [alg.mul_basis(i, j) for j in range(alg.dim)], f)
                for i in range(alg.dim)]
        right = [Matrix.from_columns(alg.dim, [alg.mul_basis(j, i) for j in range(alg.dim)], f)
                 for i in range(alg.dim)]
        return cls(alg, left, right, name="regular")

    @classmethod
    def zero(cls, alg: Algebra) -> "Bimodule":
        z = Matrix.zero(0, 0, alg.field)
        return cls(alg, [z] * alg.dim, [z] * alg.dim, name="zero")

    def act_left(self, a: Mapping, m: Mapping) -> dict:
        out: dict = {}
        for i, c in a.items():
            add_scaled(out, self.left[i].apply(m), c, self.field)
        return out

    def act_right(self, m: Mapping, a: Mapping) -> dict:
        out: dict = {}
        for i, c in a.items():
            add_scaled(out, self.right[i].apply(m), c, self.field)
        return out

    def check(self) -> List[str]:
        out = []
        alg, n = self.over, self.over.dim
        ident = Matrix.identity(self.dim, self.field)

        def combo(mats, v):
            acc = Matrix.zero(self.dim, self.dim, self.field)
            for i, c in v.items():
                acc = acc + mats[i].scaled(c)
            return acc

        if combo(self.left, alg.unit) != ident:
            out.append("unit does not act as identity on the left")
        if combo(self.right, alg.unit) != ident:
            out.append("unit does not act as identity on the right")
        for i in range(n):
            for j in range(n):
                prod = alg.mul_basis(i, j)
                if self.left[i] @ self.left[j] != combo(self.left, prod):
                    out.append(f"left action not associative on basis pair ({i},{j})")
                if self.right[j] @ self.right[i] != combo(self.right, prod):
                    out.append(f"right action not associative on basis pair ({i},{j})")
                if self.left[i] @ self.right[j] != self.right[j] @ self.left[i]:
                    out.append(f"left and right actions do not commute on basis pair ({i},{j})")
        return out


def check_b_symmetric(m: Bimodule, eps: AlgebraMorphism) -> List[str]:
    """ε(b)·m = m·ε(b) for every basis b of B and every basis m of M."""
    out = []
    for b in range(eps.source.dim):
        img = eps.image(b)
        for k in range(m.dim):
            if m.act_left(img, {k: 1}) != m.act_right({k: 1}, img):
                out.append(f"not B-symmetric: ε(b{b}) on module basis element {k}")
    return out
