"""Tensor and Hom constructions over a simplicial algebra, (co)chain complexes, Betti numbers.

``TensorLevels`` realizes X_n ⊗_{A_n} Y_n as a quotient of X_n ⊗ Y_n by the
balancing relations (x·a)⊗y − x⊗(a·y).  ``HomLevels`` realizes
Hom_{A_n}(X_n, M_n) as the solution space of the equivariance equations.
Ambient tensor coordinates are ``x * dim Y_n + y``; Hom coordinates are
``x * dim M_n + m`` for the coefficient of e_m in f(e_x).
"""

from __future__ import annotations

from typing import Callable, Dict, List, Mapping, Optional, Sequence

from .exactlin import Echelon, Field, Matrix, QuotientSpace, Subspace, add_scaled, kernel_basis, rank, row_reduce
from .simplicial import CosimplicialModule, DegreeError, SimplicialModule

CHAIN = -1
COCHAIN = +1


class WellDefinednessError(RuntimeError):
    """An induced map does not carry relations into relations."""

    def __init__(self, message: str, level: int = -1):
        super().__init__(message)
        self.level = level


def outer(xv: Mapping, yv: Mapping, dim_y: int, field: Field) -> dict:
    out: dict = {}
    for x, a in xv.items():
        base = x * dim_y
        for y, b in yv.items():
            out[base + y] = field.norm(a * b)
    return out


class TensorLevels:
    """The simplicial k-module X ⊗_A Y for a right module X and left module Y.

    ``relations`` selects the spanning family for the balancing relations:
    ``"generators"`` uses an algebra generating set of A_n, ``"basis"`` the full
    basis.  Both span the same subspace.
    """

    def __init__(self, x: SimplicialModule, y: SimplicialModule, relations: str = "generators",
                 verify: bool = True):
        if x.side != "right" or y.side != "left":
            raise ValueError("need a right module tensored with a left module")
        if x.algebra is not y.algebra:
            raise ValueError("modules live over different simplicial algebras")
        if relations not in ("generators", "basis"):
            raise ValueError(f"unknown relation family {relations!r}")
        self.x, self.y = x, y
        self.algebra = x.algebra
        self.field = x.field
        self.relations = relations
        self.verify = verify
        self._quotients: Dict[int, QuotientSpace] = {}
        self._maps: Dict[tuple, Matrix] = {}

    @property
    def max_degree(self) -> int:
        return self.algebra.max_degree

    def ambient_dim(self, n: int) -> int:
        return self.x.dim(n) * self.y.dim(n)

    def relation_vectors(self, n: int):
        """Stream the balancing relations at level n."""
        x, y, f = self.x, self.y, self.field
        dx, dy = x.dim(n), y.dim(n)
        if self.relations == "generators":
            elems = self.algebra.generators(n)
        else:
            elems = [{k: 1} for k in range(self.algebra.dim(n))]
        for a in elems:
            xa = [x.act(n, a, {i: 1}) for i in range(dx)]
            for j in range(dy):
                ay = y.act(n, a, {j: 1})
                for i in range(dx):
                    rel: dict = {}
                    for i2, c in xa[i].items():
                        rel[i2 * dy + j] = c
                    base = i * dy
                    for j2, c in ay.items():
                        k = base + j2
                        v = f.norm(rel.get(k, 0) - c)
                        if v == 0:
                            rel.pop(k, None)
                        else:
                            rel[k] = v
                    if rel:
                        yield rel

    def quotient(self, n: int) -> QuotientSpace:
        if n not in self._quotients:
            if n < 0 or n > self.max_degree:
                raise DegreeError(f"degree {n} outside built range 0..{self.max_degree}")
            ech = Echelon(self.ambient_dim(n), self.field)
            for rel in self.relation_vectors(n):
                ech.add(rel)
            self._quotients[n] = QuotientSpace(ech)
        return self._quotients[n]

    def dim(self, n: int) -> int:
        return self.quotient(n).dim

    def induced(self, n: int, m: int, x_map: Callable[[int], Mapping], y_map: Callable[[int], Mapping],
                target: Optional["TensorLevels"] = None, name: str = "map") -> Matrix:
        """Quotient matrix of x_map ⊗ y_map from level n of self to level m of ``target``.

        With ``verify`` set, every relation basis row at level n must land in
        the relation subspace at level m, otherwise :class:`WellDefinednessError`.
        """
        target = target or self
        src, dst = self.quotient(n), target.quotient(m)
        dy_src = self.y.dim(n)
        dy_dst = target.y.dim(m)
        f = self.field
        xcache: Dict[int, Mapping] = {}
        ycache: Dict[int, Mapping] = {}

        def image(amb: Mapping) -> dict:
            out: dict = {}
            for k, c in amb.items():
                i, j = divmod(k, dy_src)
                xi = xcache.get(i)
                if xi is None:
                    xi = xcache[i] = x_map(i)
                yj = ycache.get(j)
                if yj is None:
                    yj = ycache[j] = y_map(j)
                if xi and yj:
                    add_scaled(out, outer(xi, yj, dy_dst, f), c, f)
            return out

        if self.verify:
            for row in src.relation_rows():
                if dst.project(image(row)):
                    raise WellDefinednessError(f"{name} from level {n} to {m} does not preserve the balancing relations", n)
        cols = {}
        for q in range(src.dim):
            img = dst.project(image({src.lift(q): 1}))
            if img:
                cols[q] = img
        return Matrix._trusted(dst.dim, src.dim, f, cols)

    def face(self, n: int, i: int) -> Matrix:
        key = ("face", n, i)
        if key not in self._maps:
            self._maps[key] = self.induced(
                n, n - 1,
                lambda k: self.x.face_column(n, i, k),
                lambda k: self.y.face_column(n, i, k),
                name=f"D_{i}")
        return self._maps[key]

    def degeneracy(self, n: int, i: int) -> Matrix:
        key = ("degeneracy", n, i)
        if key not in self._maps:
            self._maps[key] = self.induced(
                n, n + 1,
                lambda k: self.x.degeneracy_column(n, i, k),
                lambda k: self.y.degeneracy_column(n, i, k),
                name=f"S_{i}")
        return self._maps[key]

    # column interface shared with the simplicial checkers
    def face_column(self, n, i, j):
        return dict(self.face(n, i).column(j))

    def degeneracy_column(self, n, i, j):
        return dict(self.degeneracy(n, i).column(j))

    def apply_face(self, n, i, v):
        return self.face(n, i).apply(v)

    def apply_degeneracy(self, n, i, v):
        return self.degeneracy(n, i).apply(v)


def tensor_over(x: SimplicialModule, y: SimplicialModule, relations: str = "generators",
                verify: bool = True) -> TensorLevels:
    return TensorLevels(x, y, relations=relations, verify=verify)


class ComplexError(RuntimeError):
    """d∘d ≠ 0: the complex was assembled incorrectly."""


class ChainComplex:
    """Finite stretch of a (co)chain complex.

    ``differentials[n]`` has source degree n and target degree n + direction,
    where direction is -1 for chain complexes and +1 for cochain complexes.
    """

    def __init__(self, dims: Sequence[int], differentials: Mapping[int, Matrix], field: Field,
                 direction: int = CHAIN, check: bool = True):
        self.dims = list(dims)
        self.differentials = dict(differentials)
        self.field = field
        self.direction = direction
        self._ranks: Dict[int, int] = {}
        for n, d in self.differentials.items():
            t = n + direction
            if (d.cols, d.rows) != (self.dims[n], self.dims[t]):
                raise ValueError(f"differential out of degree {n} has the wrong shape")
        if check:
            bad = self.square_zero_failures()
            if bad:
                raise ComplexError(f"d∘d ≠ 0 out of degrees {bad}")

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def square_zero_failures(self) -> List[int]:
        bad = []
        for n, d in self.differentials.items():
            nxt = self.differentials.get(n + self.direction)
            if nxt is not None and not (nxt @ d).is_zero():
                bad.append(n)
        return bad

    def d(self, n: int) -> Matrix:
        """Differential out of degree n (zero map when it leaves the stored range)."""
        if n in self.differentials:
            return self.differentials[n]
        t = n + self.direction
        return Matrix.zero(self.dims[t] if 0 <= t < len(self.dims) else 0, self.dims[n], self.field)

    def rank_out(self, n: int) -> int:
        if n not in self._ranks:
            self._ranks[n] = rank(self.d(n)) if n in self.differentials else 0
        return self._ranks[n]

    def betti(self, n: int) -> int:
        """dim ker(d out of n) − rank(d into n)."""
        if n < 0 or n > self.top:
            raise DegreeError(f"degree {n} outside built range 0..{self.top}")
        src = n - self.direction
        if src > self.top:
            raise DegreeError(f"Betti number in degree {n} needs degree {src}, built through {self.top}")
        tgt = n + self.direction
        if tgt > self.top:
            raise DegreeError(f"Betti number in degree {n} needs degree {tgt}, built through {self.top}")
        incoming = self.rank_out(src) if src >= 0 else 0
        return self.dims[n] - self.rank_out(n) - incoming

    def betti_table(self, up_to: int) -> List[int]:
        return [self.betti(n) for n in range(up_to + 1)]


def alternating_sum(maps: Sequence[Matrix], rows: int, cols: int, field: Field) -> Matrix:
    acc = Matrix.zero(rows, cols, field)
    for i, m in enumerate(maps):
        acc = acc + m if i % 2 == 0 else acc - m
    return acc


def to_chain_complex(t: TensorLevels, top: Optional[int] = None) -> ChainComplex:
    """Levels 0..top with d(n) = Σ_{i=0}^{n} (−1)^i D(n, i); top defaults to every built level."""
    if top is None:
        top = t.max_degree
    dims = [t.dim(n) for n in range(top + 1)]
    diffs = {}
    for n in range(1, top + 1):
        diffs[n] = alternating_sum([t.face(n, i) for i in range(n + 1)], dims[n - 1], dims[n], t.field)
    return ChainComplex(dims, diffs, t.field, CHAIN)


class HomLevels:
    """The cosimplicial k-module Hom_A(X, M) for a left module X and cosimplicial left module M."""

    def __init__(self, x: SimplicialModule, m: CosimplicialModule, relations: str = "generators",
                 verify: bool = True):
        if x.side != "left":
            raise ValueError("Hom needs a left simplicial module")
        if x.algebra is not m.algebra:
            raise ValueError("modules live over different simplicial algebras")
        self.x, self.m = x, m
        self.algebra = x.algebra
        self.field = x.field
        self.relations = relations
        self.verify = verify
        self._spaces: Dict[int, Subspace] = {}
        self._maps: Dict[tuple, Matrix] = {}

    @property
    def max_degree(self) -> int:
        return self.algebra.max_degree

    def ambient_dim(self, n: int) -> int:
        return self.x.dim(n) * self.m.dim(n)

    def constraint_rows(self, n: int):
        """Rows of f(a·e_x) − a·f(e_x) = 0, one per (a, x, m)."""
        x, m, f = self.x, self.m, self.field
        dx, dm = x.dim(n), m.dim(n)
        if self.relations == "generators":
            elems = self.algebra.generators(n)
        else:
            elems = [{k: 1} for k in range(self.algebra.dim(n))]
        for a in elems:
            am = [m.act(n, a, {k: 1}) for k in range(dm)]
            for i in range(dx):
                ax = x.act(n, a, {i: 1})
                for k in range(dm):
                    row: dict = {}
                    for i2, c in ax.items():
                        row[i2 * dm + k] = c
                    for k2 in range(dm):
                        c = am[k2].get(k)
                        if c:
                            idx = i * dm + k2
                            v = f.norm(row.get(idx, 0) - c)
                            if v == 0:
                                row.pop(idx, None)
                            else:
                                row[idx] = v
                    if row:
                        yield row

    def space(self, n: int) -> Subspace:
        if n not in self._spaces:
            if n < 0 or n > self.max_degree:
                raise DegreeError(f"degree {n} outside built range 0..{self.max_degree}")
            rows = list(self.constraint_rows(n))
            amb = self.ambient_dim(n)
            self._spaces[n] = kernel_basis(Matrix(len(rows), amb, self.field,
                                                  _rows_to_columns(rows)))
        return self._spaces[n]

    def dim(self, n: int) -> int:
        return self.space(n).dim

    def induced(self, n: int, m: int, pre: Callable[[int], Mapping], post: Callable[[Mapping], Mapping],
                target: Optional["HomLevels"] = None, name: str = "map") -> Matrix:
        """Matrix of F ↦ post ∘ F ∘ pre from Hom level n of self to Hom level m of ``target``.

        ``pre(x')`` is the image in X_n (of self) of basis element x' of the
        target's X_m; ``post`` maps a vector of M_n (of self) into M_m (of target).
        """
        target = target or self
        src, dst = self.space(n), target.space(m)
        dm_src = self.m.dim(n)
        dm_dst = target.m.dim(m)
        dx_dst = target.x.dim(m)
        f = self.field
        pre_cols = [pre(k) for k in range(dx_dst)]
        post_cache: Dict[int, Mapping] = {}
        cols = {}
        for q, vec in enumerate(src.basis):
            by_x: Dict[int, dict] = {}
            for idx, c in vec.items():
                i, k = divmod(idx, dm_src)
                by_x.setdefault(i, {})[k] = c
            img: dict = {}
            for xp, pc in enumerate(pre_cols):
                val: dict = {}
                for i, c in pc.items():
                    row = by_x.get(i)
                    if row:
                        add_scaled(val, row, c, f)
                if not val:
                    continue
                out: dict = {}
                for k, c in val.items():
                    pk = post_cache.get(k)
                    if pk is None:
                        pk = post_cache[k] = post({k: 1})
                    add_scaled(out, pk, c, f)
                base = xp * dm_dst
                for k, c in out.items():
                    img[base + k] = c
            if self.verify and dst.reduce(img):
                raise WellDefinednessError(f"{name} from Hom level {n} to {m} leaves the equivariant maps", n)
            coords = dst.coordinates(img)
            if coords:
                cols[q] = coords
        return Matrix._trusted(dst.dim, src.dim, f, cols)

    def coface(self, n: int, i: int) -> Matrix:
        """(d^i F) = c^i ∘ F ∘ δ_i : Hom level n → n+1, 0 ≤ i ≤ n+1."""
        key = ("coface", n, i)
        if key not in self._maps:
            self._maps[key] = self.induced(
                n, n + 1,
                lambda k: self.x.face_column(n + 1, i, k),
                lambda v: self.m.apply_coface(n, i, v),
                name=f"d^{i}")
        return self._maps[key]

    def codegeneracy(self, n: int, i: int) -> Matrix:
        """(s^i F) = s^i ∘ F ∘ σ_i : Hom level n+1 → n, 0 ≤ i ≤ n."""
        key = ("codegeneracy", n, i)
        if key not in self._maps:
            self._maps[key] = self.induced(
                n + 1, n,
                lambda k: self.x.degeneracy_column(n, i, k),
                lambda v: self.m.apply_codegeneracy(n, i, v),
                name=f"s^{i}")
        return self._maps[key]


def _rows_to_columns(rows: Sequence[Mapping]) -> Dict[int, dict]:
    cols: Dict[int, dict] = {}
    for r, row in enumerate(rows):
        for c, v in row.items():
            cols.setdefault(c, {})[r] = v
    return cols


def hom_over(x: SimplicialModule, m: CosimplicialModule, relations: str = "generators",
             verify: bool = True) -> HomLevels:
    return HomLevels(x, m, relations=relations, verify=verify)


def to_cochain_complex(h: HomLevels, top: Optional[int] = None) -> ChainComplex:
    """Levels 0..top with d^n = Σ_{i=0}^{n+1} (−1)^i d^i for n < top; top defaults to every built level."""
    if top is None:
        top = h.max_degree
    dims = [h.dim(n) for n in range(top + 1)]
    diffs = {}
    for n in range(top):
        diffs[n] = alternating_sum([h.coface(n, i) for i in range(n + 2)], dims[n + 1], dims[n], h.field)
    return ChainComplex(dims, diffs, h.field, COCHAIN)


def betti(c: ChainComplex, n: int) -> int:
    return c.betti(n)
