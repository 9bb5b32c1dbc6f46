"""Simplicial algebras, simplicial and cosimplicial modules, and their checkers.

Every level is a tensor product of small factors.  Face, degeneracy and action
maps are evaluated one basis column at a time from slot rules, so identity
checks touch only the columns they need; whole matrices are assembled (and
cached) only on request.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import (Algebra, AlgebraMorphism, Bimodule, Layout, TensorAlgebra, check_b_symmetric,
                      check_epsilon, combine, opposite)
from .exactlin import Field, Matrix, add_scaled, clean, inverse

ENV = "env"
SECONDARY = "secondary"


# levels up to this size keep whole face/degeneracy matrices in memory
_MATRIX_LIMIT = 1 << 16


class DegreeError(ValueError):
    pass


@dataclass(frozen=True)
class Failure:
    check: str
    degree: int
    indices: Tuple[int, ...] = ()
    detail: str = ""

    def __str__(self):
        idx = ",".join(map(str, self.indices))
        s = f"{self.check} at degree {self.degree}"
        if idx:
            s += f" (indices {idx})"
        return s + (f": {self.detail}" if self.detail else "")


def apply_columns(column: Callable[[int], Mapping], v: Mapping, field: Field) -> dict:
    out: dict = {}
    for j, c in v.items():
        add_scaled(out, column(j), c, field)
    return out


class _Graded:
    """Shared machinery: cached matrices assembled from column functions."""

    field: Field
    max_degree: int

    def _check_degree(self, n: int) -> None:
        if n < 0 or n > self.max_degree:
            raise DegreeError(f"degree {n} outside built range 0..{self.max_degree}")

    def dim(self, n: int) -> int:
        raise NotImplementedError

    def face_column(self, n: int, i: int, j: int) -> dict:
        raise NotImplementedError

    def degeneracy_column(self, n: int, i: int, j: int) -> dict:
        raise NotImplementedError

    def face(self, n: int, i: int) -> Matrix:
        """δ_i : level n → level n-1."""
        key = ("face", n, i)
        cache = self.__dict__.setdefault("_mats", {})
        if key not in cache:
            self._check_degree(n)
            if not (n >= 1 and 0 <= i <= n):
                raise IndexError(f"no face δ_{i} on level {n}")
            cols = {j: self.face_column(n, i, j) for j in range(self.dim(n))}
            cache[key] = Matrix._trusted(self.dim(n - 1), self.dim(n), self.field, {j: c for j, c in cols.items() if c})
        return cache[key]

    def degeneracy(self, n: int, i: int) -> Matrix:
        """σ_i : level n → level n+1."""
        key = ("degeneracy", n, i)
        cache = self.__dict__.setdefault("_mats", {})
        if key not in cache:
            self._check_degree(n + 1)
            if not 0 <= i <= n:
                raise IndexError(f"no degeneracy σ_{i} on level {n}")
            cols = {j: self.degeneracy_column(n, i, j) for j in range(self.dim(n))}
            cache[key] = Matrix._trusted(self.dim(n + 1), self.dim(n), self.field, {j: c for j, c in cols.items() if c})
        return cache[key]

    def apply_face(self, n: int, i: int, v: Mapping) -> dict:
        if self.dim(n) <= _MATRIX_LIMIT:
            return self.face(n, i).apply(v)
        return apply_columns(lambda j: self.face_column(n, i, j), v, self.field)

    def apply_degeneracy(self, n: int, i: int, v: Mapping) -> dict:
        if self.dim(n) <= _MATRIX_LIMIT:
            return self.degeneracy(n, i).apply(v)
        return apply_columns(lambda j: self.degeneracy_column(n, i, j), v, self.field)


# -- simplicial algebras -------------------------------------------------------


class SimplicialAlgebra(_Graded):
    kind: str

    def level(self, n: int) -> TensorAlgebra:
        raise NotImplementedError

    def dim(self, n: int) -> int:
        return self.level(n).dim

    def generators(self, n: int) -> List[dict]:
        cache = self.__dict__.setdefault("_gens", {})
        if n not in cache:
            cache[n] = self.level(n).generators()
        return cache[n]


class EnvelopingAlgebra(SimplicialAlgebra):
    """Constant levels A ⊗ A^op with identity faces and degeneracies."""

    kind = ENV

    def __init__(self, a: Algebra, max_degree: int = 6):
        self.a = a
        self.field = a.field
        self.max_degree = max_degree
        self._level = TensorAlgebra([a, opposite(a)], name="A⊗A^op")

    def level(self, n: int) -> TensorAlgebra:
        self._check_degree(n)
        return self._level

    def face_column(self, n, i, j):
        return {j: 1}

    def degeneracy_column(self, n, i, j):
        return {j: 1}

    def split(self, n: int, j: int) -> Tuple[int, int]:
        return divmod(j, self.a.dim)


def env_algebra(a: Algebra, max_degree: int = 6) -> EnvelopingAlgebra:
    return EnvelopingAlgebra(a, max_degree)


class SecondaryAlgebra(SimplicialAlgebra):
    """Levels A ⊗ B^{⊗2n+1} ⊗ A^op, slots ordered a, α_1..α_n, γ, β_1..β_n, b."""

    kind = SECONDARY

    def __init__(self, a: Algebra, b: Algebra, eps: AlgebraMorphism, max_degree: int = 4):
        problems = check_epsilon(eps)
        if problems:
            raise ValueError("invalid ε: " + "; ".join(problems))
        if eps.source is not b or eps.target is not a:
            if eps.source.dim != b.dim or eps.target.dim != a.dim:
                raise ValueError("ε must map B to A")
        self.a, self.b, self.eps = a, b, eps
        self.field = a.field
        self.max_degree = max_degree
        self._aop = opposite(a)
        self._levels: Dict[int, TensorAlgebra] = {}

    def level(self, n: int) -> TensorAlgebra:
        self._check_degree(n)
        if n not in self._levels:
            self._levels[n] = TensorAlgebra([self.a] + [self.b] * (2 * n + 1) + [self._aop])
        return self._levels[n]

    def split(self, n: int, j: int):
        t = self.level(n).layout.decode(j)
        return t[0], t[1:n + 1], t[n + 1], t[n + 2:2 * n + 2], t[2 * n + 2]

    def face_column(self, n, i, j):
        a_alg, b_alg, eps = self.a, self.b, self.eps
        a, al, g, be, b = self.split(n, j)
        if i == 0:
            parts = ([a_alg.mul({a: 1}, eps.image(al[0]))] + [{x: 1} for x in al[1:]]
                     + [b_alg.mul_basis(g, be[0])] + [{x: 1} for x in be[1:]] + [{b: 1}])
        elif i < n:
            parts = ([{a: 1}] + [{x: 1} for x in al[:i - 1]] + [b_alg.mul_basis(al[i - 1], al[i])]
                     + [{x: 1} for x in al[i + 1:]] + [{g: 1}]
                     + [{x: 1} for x in be[:i - 1]] + [b_alg.mul_basis(be[i - 1], be[i])]
                     + [{x: 1} for x in be[i + 1:]] + [{b: 1}])
        else:
            parts = ([{a: 1}] + [{x: 1} for x in al[:n - 1]] + [b_alg.mul_basis(al[n - 1], g)]
                     + [{x: 1} for x in be[:n - 1]] + [a_alg.mul(eps.image(be[n - 1]), {b: 1})])
        return combine(parts, self.level(n - 1).layout.dims, self.field)

    def degeneracy_column(self, n, i, j):
        a, al, g, be, b = self.split(n, j)
        one = self.b.unit
        al_parts = [{x: 1} for x in al]
        be_parts = [{x: 1} for x in be]
        al_parts.insert(i, one)
        be_parts.insert(i, one)
        parts = [{a: 1}] + al_parts + [{g: 1}] + be_parts + [{b: 1}]
        return combine(parts, self.level(n + 1).layout.dims, self.field)


def secondary_algebra(a: Algebra, b: Algebra, eps: AlgebraMorphism, max_degree: int = 4) -> SecondaryAlgebra:
    return SecondaryAlgebra(a, b, eps, max_degree)


# -- simplicial modules --------------------------------------------------------


class SimplicialModule(_Graded):
    """Simplicial left or right module over a simplicial algebra."""

    side: str
    algebra: SimplicialAlgebra

    def act_column(self, n: int, a: int, j: int) -> dict:
        """Action of basis element ``a`` of A_n on basis element ``j`` of level n."""
        raise NotImplementedError

    def act(self, n: int, a: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for ai, c in a.items():
            for j, d in v.items():
                add_scaled(out, self.act_column(n, ai, j), c * d, self.field)
        return out

    def action_matrix(self, n: int, a: Mapping) -> Matrix:
        cols = {j: self.act(n, a, {j: 1}) for j in range(self.dim(n))}
        return Matrix._trusted(self.dim(n), self.dim(n), self.field, {j: c for j, c in cols.items() if c})

    @property
    def max_degree(self) -> int:
        return self.algebra.max_degree


class BarModule(SimplicialModule):
    """Left module A^{⊗n+2} over A ⊗ A^op; faces multiply neighbours, degeneracies insert 1."""

    side = "left"

    def __init__(self, alg: EnvelopingAlgebra):
        self.algebra = alg
        self.a = alg.a
        self.field = alg.field
        self._layouts: Dict[int, Layout] = {}

    def layout(self, n: int) -> Layout:
        if n not in self._layouts:
            self._layouts[n] = Layout([self.a.dim] * (n + 2))
        return self._layouts[n]

    def dim(self, n):
        self._check_degree(n)
        return self.a.dim ** (n + 2)

    def diagonal_slots(self, n: int) -> List[int]:
        return list(range(n + 2))

    def act_column(self, n, a, j):
        x, y = self.algebra.split(n, a)
        t = self.layout(n).decode(j)
        parts = [self.a.mul_basis(x, t[0])] + [{s: 1} for s in t[1:-1]] + [self.a.mul_basis(t[-1], y)]
        return combine(parts, self.layout(n).dims, self.field)

    def face_column(self, n, i, j):
        t = self.layout(n).decode(j)
        parts = [{s: 1} for s in t[:i]] + [self.a.mul_basis(t[i], t[i + 1])] + [{s: 1} for s in t[i + 2:]]
        return combine(parts, self.layout(n - 1).dims, self.field)

    def degeneracy_column(self, n, i, j):
        t = self.layout(n).decode(j)
        parts = [{s: 1} for s in t]
        parts.insert(i + 1, self.a.unit)
        return combine(parts, self.layout(n + 1).dims, self.field)


def bar_module(a: Algebra, max_degree: int = 6) -> BarModule:
    return BarModule(env_algebra(a, max_degree))


def _pairs(size: int) -> List[Tuple[int, int]]:
    return [(p, q) for p in range(size) for q in range(p + 1, size)]


class SecondaryBarModule(SimplicialModule):
    """Left module over A(A,B,ε) indexed by upper-triangular arrays.

    Level n holds arrays of size N = n+2.  Slot order: diagonal entries
    a_0..a_{N-1} (factors of A), then the entries b_{p,q}, p < q, row by row
    (factors of B).
    """

    side = "left"

    def __init__(self, alg: SecondaryAlgebra):
        self.algebra = alg
        self.a, self.b, self.eps = alg.a, alg.b, alg.eps
        self.field = alg.field
        self._layouts: Dict[int, Layout] = {}
        self._face_plans: Dict[Tuple[int, int], list] = {}
        self._degen_plans: Dict[Tuple[int, int], list] = {}

    def layout(self, n: int) -> Layout:
        if n not in self._layouts:
            size = n + 2
            self._layouts[n] = Layout([self.a.dim] * size + [self.b.dim] * (size * (size - 1) // 2))
        return self._layouts[n]

    def dim(self, n):
        self._check_degree(n)
        return self.a.dim ** (n + 2) * self.b.dim ** ((n + 1) * (n + 2) // 2)

    def diagonal_slots(self, n: int) -> List[int]:
        return list(range(n + 2))

    def slot_of(self, n: int, p: int, q: int) -> int:
        size = n + 2
        if p == q:
            return p
        # row-major position of (p, q) among strict upper entries
        return size + p * (2 * size - p - 1) // 2 + (q - p - 1)

    def _act_slots(self, n: int):
        key = ("act", n)
        hit = self._face_plans.get(key)
        if hit is None:
            last = n + 1
            hit = ([self.slot_of(n, 0, q) for q in range(1, n + 1)], self.slot_of(n, 0, last),
                   [self.slot_of(n, p, last) for p in range(1, n + 1)])
            self._face_plans[key] = hit
        return hit

    def _act_plan(self, n, a):
        key = ("act", n, a)
        plan = self._face_plans.get(key)
        if plan is not None:
            return plan
        x, al, g, be, y = self.algebra.split(n, a)
        lay = self.layout(n)
        A, B = self.a, self.b
        row0, corner, col_last = self._act_slots(n)
        touched = [(0, A, x, True)]
        touched += [(k, B, alpha, True) for k, alpha in zip(row0, al)]
        touched.append((corner, B, g, True))
        touched += [(k, B, beta, False) for k, beta in zip(col_last, be)]
        touched.append((n + 1, A, y, False))
        plan = []
        for slot, alg, e, on_left in touched:
            table = [alg.mul_basis(e, t) if on_left else alg.mul_basis(t, e) for t in range(alg.dim)]
            if all(table[t] == {t: 1} for t in range(alg.dim)):
                continue
            st = lay.strides[slot]
            shifts = [[((new - t) * st, c) for new, c in table[t].items()] for t in range(alg.dim)]
            plan.append((st, alg.dim, shifts))
        self._face_plans[key] = plan
        return plan

    def act_column(self, n, a, j):
        # only row 0 and the last column change; shift those digits of j in place
        terms = {j: 1}
        for st, d, shifts in self._act_plan(n, a):
            moves = shifts[(j // st) % d]
            if not moves:
                return {}
            if len(moves) == 1:
                (shift, c), = moves
                if c == 1:
                    terms = {k + shift: v for k, v in terms.items()}
                else:
                    terms = {k + shift: v * c for k, v in terms.items()}
            else:
                terms = {k + shift: v * c for k, v in terms.items() for shift, c in moves}
        if len(terms) == 1:
            return terms
        return clean(terms, self.field)

    def _face_plan(self, n: int, i: int) -> list:
        key = (n, i)
        if key not in self._face_plans:
            size = n + 2
            new = lambda k: k if k <= i else k - 1
            plan: List[tuple] = []
            for p in range(size - 1):
                if p == i:
                    plan.append(("merge", self.slot_of(n, i, i), self.slot_of(n, i, i + 1), self.slot_of(n, i + 1, i + 1)))
                else:
                    old = p if p < i else p + 1
                    plan.append(("copy", self.slot_of(n, old, old)))
            groups: Dict[Tuple[int, int], List[int]] = {}
            for p, q in _pairs(size):
                if (p, q) == (i, i + 1):
                    continue
                groups.setdefault((new(p), new(q)), []).append(self.slot_of(n, p, q))
            for pq in _pairs(size - 1):
                slots = groups[pq]
                plan.append(("copy", slots[0]) if len(slots) == 1 else ("mul", slots))
            self._face_plans[key] = plan
        return self._face_plans[key]

    def face_column(self, n, i, j):
        t = self.layout(n).decode(j)
        A, B = self.a, self.b
        parts = []
        for step in self._face_plan(n, i):
            op = step[0]
            if op == "copy":
                parts.append({t[step[1]]: 1})
            elif op == "mul":
                s = step[1]
                parts.append(B.mul_basis(t[s[0]], t[s[1]]))
            else:
                _, da, sb, db = step
                left = A.mul({t[da]: 1}, self.eps.image(t[sb]))
                parts.append(A.mul(left, {t[db]: 1}))
        return combine(parts, self.layout(n - 1).dims, self.field)

    def _degen_plan(self, n: int, i: int) -> list:
        key = (n, i)
        if key not in self._degen_plans:
            size = n + 3
            old = lambda k: k if k <= i else k - 1
            plan: List[tuple] = []
            for p in range(size):
                plan.append(("unitA",) if p == i + 1 else ("copy", self.slot_of(n, old(p), old(p))))
            for p, q in _pairs(size):
                if i + 1 in (p, q):
                    plan.append(("unitB",))
                else:
                    plan.append(("copy", self.slot_of(n, old(p), old(q))))
            self._degen_plans[key] = plan
        return self._degen_plans[key]

    def degeneracy_column(self, n, i, j):
        t = self.layout(n).decode(j)
        ua, ub = self.a.unit, self.b.unit
        parts = []
        for step in self._degen_plan(n, i):
            if step[0] == "copy":
                parts.append({t[step[1]]: 1})
            elif step[0] == "unitA":
                parts.append(ua)
            else:
                parts.append(ub)
        return combine(parts, self.layout(n + 1).dims, self.field)


def secondary_bar_module(a: Algebra, b: Algebra, eps: AlgebraMorphism, max_degree: int = 4) -> SecondaryBarModule:
    return SecondaryBarModule(secondary_algebra(a, b, eps, max_degree))


def _b_slots_product(alg: SecondaryAlgebra, n: int, j: int) -> dict:
    _, al, g, be, _ = alg.split(n, j)
    acc = {g: 1}
    for x in list(al) + list(be):
        acc = alg.b.mul(acc, {x: 1})
    return acc


class CoefficientModule(SimplicialModule):
    """Constant right module M with identity faces/degeneracies.

    Over A ⊗ A^op: m·(a⊗b) = b m a.  Over A(A,B,ε): m·(a⊗α⊗γ⊗β⊗b) = b m a ε(α_1⋯α_nγβ_1⋯β_n).
    """

    side = "right"

    def __init__(self, m: Bimodule, over: SimplicialAlgebra):
        if over.kind == SECONDARY:
            problems = check_b_symmetric(m, over.eps)
            if problems:
                raise ValueError("coefficient bimodule is not B-symmetric: " + "; ".join(problems))
        self.m = m
        self.algebra = over
        self.field = over.field

    def dim(self, n):
        self._check_degree(n)
        return self.m.dim

    def face_column(self, n, i, j):
        return {j: 1}

    def degeneracy_column(self, n, i, j):
        return {j: 1}

    def act_column(self, n, a, j):
        m = self.m
        if self.algebra.kind == ENV:
            x, y = self.algebra.split(n, a)
            return m.act_left({y: 1}, m.act_right({j: 1}, {x: 1}))
        x, _, _, _, y = self.algebra.split(n, a)
        e = self.algebra.eps(_b_slots_product(self.algebra, n, a))
        return m.act_left({y: 1}, m.act_right(m.act_right({j: 1}, {x: 1}), e))


def coefficient_right_module(m: Bimodule, over: SimplicialAlgebra) -> CoefficientModule:
    return CoefficientModule(m, over)


# -- cosimplicial modules ------------------------------------------------------


class CosimplicialModule:
    """Cosimplicial left module: cofaces d^i : n → n+1 (0 ≤ i ≤ n+1), codegeneracies s^i : n+1 → n."""

    side = "left"
    algebra: SimplicialAlgebra
    field: Field

    def dim(self, n: int) -> int:
        raise NotImplementedError

    def coface_column(self, n: int, i: int, j: int) -> dict:
        raise NotImplementedError

    def codegeneracy_column(self, n: int, i: int, j: int) -> dict:
        raise NotImplementedError

    def act_column(self, n: int, a: int, j: int) -> dict:
        raise NotImplementedError

    def act(self, n: int, a: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for ai, c in a.items():
            for j, d in v.items():
                add_scaled(out, self.act_column(n, ai, j), c * d, self.field)
        return out

    def apply_coface(self, n, i, v):
        return apply_columns(lambda j: self.coface_column(n, i, j), v, self.field)

    def apply_codegeneracy(self, n, i, v):
        return apply_columns(lambda j: self.codegeneracy_column(n, i, j), v, self.field)

    @property
    def max_degree(self) -> int:
        return self.algebra.max_degree


class ConstantCosimplicialModule(CosimplicialModule):
    """Constant levels M, identity cofaces/codegeneracies.

    Over A ⊗ A^op: (a⊗b)·m = a m b.  Over A(A,B,ε): (a⊗α⊗γ⊗β⊗b)·m = a m b ε(α_1⋯α_nγβ_1⋯β_n).
    """

    def __init__(self, m: Bimodule, over: SimplicialAlgebra):
        if over.kind == SECONDARY:
            problems = check_b_symmetric(m, over.eps)
            if problems:
                raise ValueError("coefficient bimodule is not B-symmetric: " + "; ".join(problems))
        self.m = m
        self.algebra = over
        self.field = over.field

    def dim(self, n):
        return self.m.dim

    def coface_column(self, n, i, j):
        return {j: 1}

    def codegeneracy_column(self, n, i, j):
        return {j: 1}

    def act_column(self, n, a, j):
        m = self.m
        if self.algebra.kind == ENV:
            x, y = self.algebra.split(n, a)
            return m.act_right(m.act_left({x: 1}, {j: 1}), {y: 1})
        x, _, _, _, y = self.algebra.split(n, a)
        e = self.algebra.eps(_b_slots_product(self.algebra, n, a))
        return m.act_right(m.act_right(m.act_left({x: 1}, {j: 1}), {y: 1}), e)


def constant_cosimplicial_module(m: Bimodule, over: SimplicialAlgebra) -> ConstantCosimplicialModule:
    return ConstantCosimplicialModule(m, over)


# -- derived modules: patching and transport -----------------------------------


class PatchedModule(SimplicialModule):
    """A module with selected face/degeneracy/action matrices replaced (fault injection)."""

    def __init__(self, base: SimplicialModule, faces=None, degeneracies=None, actions=None):
        self.base = base
        self.algebra = base.algebra
        self.side = base.side
        self.field = base.field
        self.faces: Dict[Tuple[int, int], Matrix] = dict(faces or {})
        self.degeneracies: Dict[Tuple[int, int], Matrix] = dict(degeneracies or {})
        self.actions: Dict[Tuple[int, int], Matrix] = dict(actions or {})

    def dim(self, n):
        return self.base.dim(n)

    def face_column(self, n, i, j):
        m = self.faces.get((n, i))
        return dict(m.column(j)) if m is not None else self.base.face_column(n, i, j)

    def degeneracy_column(self, n, i, j):
        m = self.degeneracies.get((n, i))
        return dict(m.column(j)) if m is not None else self.base.degeneracy_column(n, i, j)

    def act_column(self, n, a, j):
        m = self.actions.get((n, a))
        return dict(m.column(j)) if m is not None else self.base.act_column(n, a, j)


class PatchedAlgebra(SimplicialAlgebra):
    def __init__(self, base: SimplicialAlgebra, faces=None, degeneracies=None):
        self.base = base
        self.kind = base.kind
        self.field = base.field
        self.max_degree = base.max_degree
        self.faces = dict(faces or {})
        self.degeneracies = dict(degeneracies or {})

    def level(self, n):
        return self.base.level(n)

    def split(self, n, j):
        return self.base.split(n, j)

    def face_column(self, n, i, j):
        m = self.faces.get((n, i))
        return dict(m.column(j)) if m is not None else self.base.face_column(n, i, j)

    def degeneracy_column(self, n, i, j):
        m = self.degeneracies.get((n, i))
        return dict(m.column(j)) if m is not None else self.base.degeneracy_column(n, i, j)


class TransportedModule(SimplicialModule):
    """Structure of ``base`` carried along invertible linear maps φ_n.

    Faces become φ δ φ⁻¹, degeneracies φ σ φ⁻¹ and the action a·y = φ(a·φ⁻¹y);
    φ is then an isomorphism of simplicial modules from ``base``.  φ_n acts
    slot by slot through ``slot_maps(n)``: one square matrix per tensor slot.
    """

    def __init__(self, base: SimplicialModule, slot_maps: Callable[[int], Sequence[Matrix]]):
        self.base = base
        self.algebra = base.algebra
        self.side = base.side
        self.field = base.field
        self._slot_maps = slot_maps
        self._cache: Dict[int, Tuple[list, list]] = {}

    def _maps(self, n):
        if n not in self._cache:
            fwd = list(self._slot_maps(n))
            self._cache[n] = (fwd, [inverse(m) for m in fwd])
        return self._cache[n]

    def dim(self, n):
        return self.base.dim(n)

    def _apply_slotwise(self, n: int, mats, v: Mapping) -> dict:
        layout = self.base.layout(n)
        out: dict = {}
        for j, c in v.items():
            t = layout.decode(j)
            add_scaled(out, combine([m.column(s) for m, s in zip(mats, t)], layout.dims, self.field), c, self.field)
        return out

    def phi(self, n: int, v: Mapping) -> dict:
        return self._apply_slotwise(n, self._maps(n)[0], v)

    def phi_inv(self, n: int, v: Mapping) -> dict:
        return self._apply_slotwise(n, self._maps(n)[1], v)

    def phi_matrix(self, n: int, inverse_: bool = False) -> Matrix:
        fn = self.phi_inv if inverse_ else self.phi
        d = self.dim(n)
        return Matrix._trusted(d, d, self.field, {j: c for j in range(d) if (c := fn(n, {j: 1}))})

    def face_column(self, n, i, j):
        return self.phi(n - 1, self.base.apply_face(n, i, self.phi_inv(n, {j: 1})))

    def degeneracy_column(self, n, i, j):
        return self.phi(n + 1, self.base.apply_degeneracy(n, i, self.phi_inv(n, {j: 1})))

    def act_column(self, n, a, j):
        return self.phi(n, self.base.act(n, {a: 1}, self.phi_inv(n, {j: 1})))

    def layout(self, n):
        return self.base.layout(n)


def transport_diagonal(base: SimplicialModule, psi: Matrix) -> TransportedModule:
    """Transport a bar-like module along ψ applied to every A-diagonal slot."""
    ident_cache: Dict[int, Matrix] = {}

    def slot_maps(n):
        dims = base.layout(n).dims
        diag = set(base.diagonal_slots(n))
        out = []
        for s, d in enumerate(dims):
            if s in diag:
                out.append(psi)
            else:
                if d not in ident_cache:
                    ident_cache[d] = Matrix.identity(d, base.field)
                out.append(ident_cache[d])
        return out

    return TransportedModule(base, slot_maps)


# -- checkers --------------------------------------------------------------------


def _identity_instances(n: int, up_to: int):
    """Simplicial identity instances with source level n whose levels stay ≤ up_to + 1."""
    if n >= 2:
        for j in range(n + 1):
            for i in range(j):
                yield "face-face", (i, j)
    if n + 2 <= up_to + 1:
        for j in range(n + 1):
            for i in range(j + 1):
                yield "degeneracy-degeneracy", (i, j)
    for j in range(n + 1):
        for i in range(n + 2):
            if i < j:
                if n >= 1:
                    yield "face-degeneracy (i<j)", (i, j)
            elif i in (j, j + 1):
                yield "face-degeneracy (i=j,j+1)", (i, j)
            else:
                yield "face-degeneracy (i>j+1)", (i, j)


def _compare_instance(obj, n: int, name: str, i: int, j: int, col: int):
    f = obj.field
    e = {col: 1}
    if name == "face-face":
        lhs = obj.apply_face(n - 1, i, obj.face_column(n, j, col))
        rhs = obj.apply_face(n - 1, j - 1, obj.face_column(n, i, col))
    elif name == "degeneracy-degeneracy":
        lhs = obj.apply_degeneracy(n + 1, i, obj.degeneracy_column(n, j, col))
        rhs = obj.apply_degeneracy(n + 1, j + 1, obj.degeneracy_column(n, i, col))
    else:
        lhs = obj.apply_face(n + 1, i, obj.degeneracy_column(n, j, col))
        if name == "face-degeneracy (i<j)":
            rhs = obj.apply_degeneracy(n - 1, j - 1, obj.face_column(n, i, col))
        elif name == "face-degeneracy (i=j,j+1)":
            rhs = e
        else:
            rhs = obj.apply_degeneracy(n - 1, j, obj.face_column(n, i - 1, col))
    return lhs == rhs


def check_simplicial_identities(obj, up_to: int) -> List[Failure]:
    """Every face/degeneracy identity instance as an exact equality, column by column.

    Instances start at a level n ≤ ``up_to`` and only touch levels ≤ ``up_to + 1``.
    Simplicial algebras additionally have every face and degeneracy checked
    to be multiplicative and unital.
    """
    if isinstance(obj, CosimplicialModule):
        return check_cosimplicial_identities(obj, up_to)
    if up_to + 1 > obj.max_degree:
        raise DegreeError(f"checking through degree {up_to} needs level {up_to + 1}, cap is {obj.max_degree}")
    failures: List[Failure] = []
    for n in range(up_to + 1):
        seen = set()
        for name, (i, j) in _identity_instances(n, up_to):
            for col in range(obj.dim(n)):
                if not _compare_instance(obj, n, name, i, j, col):
                    if (name, i, j) not in seen:
                        seen.add((name, i, j))
                        failures.append(Failure(name, n, (i, j), f"first mismatch on basis column {col}"))
                    break
    if isinstance(obj, SimplicialAlgebra):
        failures.extend(check_algebra_maps(obj, up_to))
    return failures


def check_algebra_maps(alg: SimplicialAlgebra, up_to: int) -> List[Failure]:
    """Faces and degeneracies are unital and multiplicative (generator × basis pairs suffice)."""
    failures = []
    f = alg.field
    for n in range(up_to + 1):
        lvl = alg.level(n)
        maps = []
        if n >= 1:
            maps += [("face", i, n - 1, alg.apply_face) for i in range(n + 1)]
        maps += [("degeneracy", i, n + 1, alg.apply_degeneracy) for i in range(n + 1)]
        for kind, i, tgt_n, apply in maps:
            tgt = alg.level(tgt_n)
            if apply(n, i, lvl.unit) != tgt.unit:
                failures.append(Failure(f"{kind} is unital", n, (i,)))
                continue
            bad = False
            for g in alg.generators(n):
                g_img = apply(n, i, g)
                for x in range(lvl.dim):
                    lhs = apply(n, i, lvl.mul(g, {x: 1}))
                    rhs = tgt.mul(g_img, apply(n, i, {x: 1}))
                    if lhs != rhs:
                        failures.append(Failure(f"{kind} is multiplicative", n, (i,), f"basis element {x}"))
                        bad = True
                        break
                if bad:
                    break
    return failures


_EXHAUSTIVE_BUDGET = 300_000


def check_module_compatibility(mod: SimplicialModule, up_to: int) -> List[Failure]:
    """Level actions are unital and associative; faces/degeneracies respect the action.

    Compatibility is checked for generators of A_n against every module basis
    element, which is equivalent to checking all of A_n since the algebra maps
    are multiplicative.  Associativity runs over generator × basis × basis
    triples when that fits a fixed budget, otherwise over generator pairs.
    """
    if up_to + 1 > mod.max_degree:
        raise DegreeError(f"checking through degree {up_to} needs level {up_to + 1}, cap is {mod.max_degree}")
    alg = mod.algebra
    left = mod.side == "left"
    failures: List[Failure] = []

    def act(n, a, v):
        return mod.act(n, a, v)

    for n in range(up_to + 1):
        lvl = alg.level(n)
        gens = alg.generators(n)
        dim = mod.dim(n)
        for j in range(dim):
            if act(n, lvl.unit, {j: 1}) != {j: 1}:
                failures.append(Failure("unit acts as identity", n, (j,)))
                break
        if len(gens) * lvl.dim * dim <= _EXHAUSTIVE_BUDGET:
            others = [{x: 1} for x in range(lvl.dim)]
        else:
            others = gens
        done = False
        for g in gens:
            for x in others:
                prod = lvl.mul(g, x) if left else lvl.mul(x, g)
                for j in range(dim):
                    lhs = act(n, g, act(n, x, {j: 1}))
                    rhs = act(n, prod, {j: 1})
                    if lhs != rhs:
                        failures.append(Failure("action is associative", n, (j,)))
                        done = True
                        break
                if done:
                    break
            if done:
                break

        maps = []
        if n >= 1:
            maps += [("face", i, n - 1, mod.apply_face, alg.apply_face) for i in range(n + 1)]
        maps += [("degeneracy", i, n + 1, mod.apply_degeneracy, alg.apply_degeneracy) for i in range(n + 1)]
        for kind, i, tgt_n, mod_map, alg_map in maps:
            for gi, g in enumerate(gens):
                g_img = alg_map(n, i, g)
                bad = None
                for j in range(dim):
                    e = {j: 1}
                    lhs = mod_map(n, i, act(n, g, e))
                    rhs = act(tgt_n, g_img, mod_map(n, i, e))
                    if lhs != rhs:
                        bad = j
                        break
                if bad is not None:
                    failures.append(Failure(f"{kind} compatible with action", n, (i,),
                                            f"generator {gi}, module basis element {bad}"))
                    break
    return failures


def check_cosimplicial_identities(mod: CosimplicialModule, up_to: int) -> List[Failure]:
    """Cosimplicial identities for d^i: n → n+1 and s^i: n+1 → n, source level n ≤ up_to."""
    failures = []
    for n in range(up_to + 1):
        for col in range(mod.dim(n)):
            e = {col: 1}
            for j in range(n + 2):
                for i in range(j):
                    lhs = mod.apply_coface(n + 1, j, mod.coface_column(n, i, col))
                    rhs = mod.apply_coface(n + 1, i, mod.coface_column(n, j - 1, col))
                    if lhs != rhs:
                        failures.append(Failure("coface-coface", n, (i, j)))
            # s^j d^i on level n+1 ← n: d^i: n → n+1, s^j: n+1 → n
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = mod.apply_codegeneracy(n, j, mod.coface_column(n, i, col))
                    if i < j:
                        rhs = mod.apply_coface(n - 1, i, mod.codegeneracy_column(n - 1, j - 1, col)) if n >= 1 else None
                    elif i in (j, j + 1):
                        rhs = e
                    else:
                        rhs = mod.apply_coface(n - 1, i - 1, mod.codegeneracy_column(n - 1, j, col)) if n >= 1 else None
                    if rhs is not None and lhs != rhs:
                        failures.append(Failure("codegeneracy-coface", n, (i, j)))
    return failures


def check_cosimplicial_compatibility(mod: CosimplicialModule, up_to: int) -> List[Failure]:
    """a·d^i(m) = d^i(δ_i(a)·m) and s^i(σ_i(a)·m) = a·s^i(m), generators of the algebra."""
    alg = mod.algebra
    failures = []
    for n in range(up_to + 1):
        lvl = alg.level(n)
        for j in range(mod.dim(n)):
            if mod.act(n, lvl.unit, {j: 1}) != {j: 1}:
                failures.append(Failure("unit acts as identity", n, (j,)))
                break
        for i in range(n + 2):
            for a in alg.generators(n + 1):
                da = alg.apply_face(n + 1, i, a)
                for j in range(mod.dim(n)):
                    lhs = mod.act(n + 1, a, mod.coface_column(n, i, j))
                    rhs = mod.apply_coface(n, i, mod.act(n, da, {j: 1}))
                    if lhs != rhs:
                        failures.append(Failure("coface compatible with action", n, (i,)))
                        break
        for i in range(n + 1):
            for a in alg.generators(n):
                sa = alg.apply_degeneracy(n, i, a)
                for j in range(mod.dim(n + 1)):
                    lhs = mod.apply_codegeneracy(n, i, mod.act(n + 1, sa, {j: 1}))
                    rhs = mod.act(n, a, mod.codegeneracy_column(n, i, j))
                    if lhs != rhs:
                        failures.append(Failure("codegeneracy compatible with action", n, (i,)))
                        break
    return failures
