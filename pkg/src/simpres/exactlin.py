"""Exact scalars and sparse linear algebra over Q or GF(p).

Field elements are plain Python numbers: ``int`` or ``Fraction`` over Q,
``int`` in ``range(p)`` over GF(p).  A :class:`Field` normalizes values after
arithmetic, so callers can use the ordinary operators and call ``norm``
before storing.  Vectors are sparse ``dict[int, value]`` with zeros omitted.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

Vector = Dict[int, object]


class Field:
    """Abstract exact field.  Subclasses are :class:`Rationals` and :class:`PrimeField`."""

    zero = 0
    one = 1

    def norm(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def parse(self, text) -> object:
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def div(self, x, y):
        return self.norm(x * self.inv(y))

    def pow(self, x, e: int):
        if e < 0:
            return self.pow(self.inv(x), -e)
        return self.norm(x ** e)

    def is_zero(self, x) -> bool:
        return self.norm(x) == 0

    def size(self, x) -> int:
        """Representation size, used to rank pivot candidates."""
        return 1


class Rationals(Field):
    name = "Q"

    def norm(self, x):
        if type(x) is Fraction and x.denominator == 1:
            return x.numerator
        return x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.norm(Fraction(1) / x)

    def div(self, x, y):
        if y == 0:
            raise ZeroDivisionError("division by zero")
        return self.norm(Fraction(x) / y)

    def parse(self, text):
        if isinstance(text, bool):
            raise ValueError(f"not a scalar: {text!r}")
        if isinstance(text, int):
            return text
        if not isinstance(text, str):
            raise ValueError(f"scalars must be strings or integers, got {text!r}")
        s = text.strip()
        if "/" in s:
            num, _, den = s.partition("/")
            n, d = int(num), int(den)
            if d == 0:
                raise ValueError(f"zero denominator in {text!r}")
            return self.norm(Fraction(n, d))
        return int(s)

    def format(self, x) -> str:
        x = self.norm(x)
        if type(x) is Fraction:
            return f"{x.numerator}/{x.denominator}"
        return str(x)

    def size(self, x) -> int:
        if type(x) is Fraction:
            return x.numerator.bit_length() + x.denominator.bit_length()
        return abs(x).bit_length()

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"GF({p})"

    def norm(self, x):
        return x % self.p

    def inv(self, x):
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def pow(self, x, e: int):
        return pow(x % self.p, e, self.p) if e >= 0 else pow(self.inv(x), -e, self.p)

    def parse(self, text):
        if isinstance(text, bool):
            raise ValueError(f"not a scalar: {text!r}")
        if isinstance(text, int):
            return text % self.p
        if not isinstance(text, str):
            raise ValueError(f"scalars must be strings or integers, got {text!r}")
        s = text.strip()
        if "/" in s:
            num, _, den = s.partition("/")
            d = int(den) % self.p
            if d == 0:
                raise ValueError(f"zero denominator in {text!r} over GF({self.p})")
            return self.div(int(num), d)
        return int(s) % self.p

    def format(self, x) -> str:
        return str(x % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


# -- sparse vectors ---------------------------------------------------------


def add_scaled(target: dict, src: Mapping, c, field: Field) -> None:
    """In place ``target += c * src``."""
    for k, v in src.items():
        x = field.norm(target.get(k, 0) + c * v)
        if x == 0:
            target.pop(k, None)
        else:
            target[k] = x


def scale(v: Mapping, c, field: Field) -> dict:
    if field.norm(c) == 0:
        return {}
    out = {}
    for k, x in v.items():
        y = field.norm(c * x)
        if y != 0:
            out[k] = y
    return out


def clean(v: Mapping, field: Field) -> dict:
    out = {}
    for k, x in v.items():
        y = field.norm(x)
        if y != 0:
            out[k] = y
    return out


def dense(v: Mapping, n: int) -> list:
    out = [0] * n
    for k, x in v.items():
        out[k] = x
    return out


def sparse(values: Sequence, field: Field) -> dict:
    return clean(dict(enumerate(values)), field)


# -- matrices ---------------------------------------------------------------


class Matrix:
    """Sparse ``rows x cols`` matrix stored by columns; zeros are never stored."""

    __slots__ = ("rows", "cols", "field", "_cols")

    def __init__(self, rows: int, cols: int, field: Field, columns: Optional[Mapping[int, Mapping]] = None):
        self.rows = rows
        self.cols = cols
        self.field = field
        store: Dict[int, dict] = {}
        if columns:
            for j, col in columns.items():
                if not 0 <= j < cols:
                    raise IndexError(f"column {j} out of range for {rows}x{cols} matrix")
                c = clean(col, field)
                for i in c:
                    if not 0 <= i < rows:
                        raise IndexError(f"row {i} out of range for {rows}x{cols} matrix")
                if c:
                    store[j] = c
        self._cols = store

    @classmethod
    def _trusted(cls, rows, cols, field, store):
        m = cls.__new__(cls)
        m.rows, m.cols, m.field, m._cols = rows, cols, field, store
        return m

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], field: Field, cols: Optional[int] = None) -> "Matrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        columns: Dict[int, dict] = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged matrix")
            for j, x in enumerate(row):
                x = field.norm(x)
                if x != 0:
                    columns.setdefault(j, {})[i] = x
        return cls._trusted(rows, cols, field, columns)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping], field: Field) -> "Matrix":
        return cls(rows, len(columns), field, {j: c for j, c in enumerate(columns) if c})

    @classmethod
    def identity(cls, n: int, field: Field) -> "Matrix":
        return cls._trusted(n, n, field, {j: {j: 1} for j in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int, field: Field) -> "Matrix":
        return cls._trusted(rows, cols, field, {})

    def column(self, j: int) -> dict:
        return self._cols.get(j, {})

    def columns(self) -> Iterator[Tuple[int, dict]]:
        return iter(sorted(self._cols.items()))

    def entries(self) -> Iterator[Tuple[int, int, object]]:
        for j, col in sorted(self._cols.items()):
            for i, x in sorted(col.items()):
                yield i, j, x

    def nnz(self) -> int:
        return sum(len(c) for c in self._cols.values())

    def __getitem__(self, ij):
        i, j = ij
        return self._cols.get(j, {}).get(i, 0)

    def to_dense(self) -> list:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, j, x in self.entries():
            out[i][j] = x
        return out

    def rows_sparse(self) -> List[dict]:
        out: List[dict] = [dict() for _ in range(self.rows)]
        for j, col in self._cols.items():
            for i, x in col.items():
                out[i][j] = x
        return out

    def apply(self, v: Mapping) -> dict:
        out: dict = {}
        for j, c in v.items():
            col = self._cols.get(j)
            if col:
                add_scaled(out, col, c, self.field)
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        store = {}
        for j, col in other._cols.items():
            img = self.apply(col)
            if img:
                store[j] = img
        return Matrix._trusted(self.rows, other.cols, self.field, store)

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, 1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, -1)

    def _combine(self, other, sign):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        store = {j: dict(c) for j, c in self._cols.items()}
        for j, col in other._cols.items():
            tgt = store.setdefault(j, {})
            add_scaled(tgt, col, sign, self.field)
            if not tgt:
                del store[j]
        return Matrix._trusted(self.rows, self.cols, self.field, store)

    def scaled(self, c) -> "Matrix":
        store = {}
        for j, col in self._cols.items():
            s = scale(col, c, self.field)
            if s:
                store[j] = s
        return Matrix._trusted(self.rows, self.cols, self.field, store)

    def __neg__(self):
        return self.scaled(-1)

    def transpose(self) -> "Matrix":
        store: Dict[int, dict] = {}
        for j, col in self._cols.items():
            for i, x in col.items():
                store.setdefault(i, {})[j] = x
        return Matrix._trusted(self.cols, self.rows, self.field, store)

    def is_zero(self) -> bool:
        return not self._cols

    def with_entry(self, i: int, j: int, x) -> "Matrix":
        """Copy with entry ``(i, j)`` replaced; used for fault injection."""
        store = {k: dict(c) for k, c in self._cols.items()}
        col = store.setdefault(j, {})
        x = self.field.norm(x)
        if x == 0:
            col.pop(i, None)
        else:
            col[i] = x
        if not col:
            del store[j]
        return Matrix(self.rows, self.cols, self.field, store)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self._cols == other._cols

    def __hash__(self):
        return hash((self.rows, self.cols, self.nnz()))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, nnz={self.nnz()}, field={self.field!r})"


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product, rows and columns indexed ``i * b.dim + j``."""
    store: Dict[int, dict] = {}
    f = a.field
    for ja, ca in a._cols.items():
        for jb, cb in b._cols.items():
            col = {}
            for ia, xa in ca.items():
                for ib, xb in cb.items():
                    col[ia * b.rows + ib] = f.norm(xa * xb)
            store[ja * b.cols + jb] = col
    return Matrix(a.rows * b.rows, a.cols * b.cols, f, store)


# -- elimination --------------------------------------------------------------


def row_reduce(vectors: Iterable[Mapping], field: Field, reduced: bool = True) -> Tuple[List[int], Dict[int, dict]]:
    """Gaussian elimination on sparse row vectors.

    Pivot rule: the leftmost column still carrying a nonzero entry, and among
    the rows nonzero there the one with the smallest representation size.
    Returns ``(pivots, rows)`` with ``rows[p]`` normalized so its entry at
    pivot ``p`` is 1 and it has no entries left of ``p``.  With ``reduced`` the
    result is in reduced row echelon form.
    """
    active: Dict[int, dict] = {}
    by_col: Dict[int, set] = {}
    for rid, v in enumerate(vectors):
        v = clean(v, field)
        if not v:
            continue
        active[rid] = v
        for c in v:
            by_col.setdefault(c, set()).add(rid)

    heap = list(by_col)
    heapq.heapify(heap)
    done: Dict[int, dict] = {}
    while heap:
        c = heapq.heappop(heap)
        holders = by_col.get(c)
        if not holders:
            by_col.pop(c, None)
            continue
        prid = min(holders, key=lambda r: (field.size(active[r][c]), len(active[r]), r))
        prow = active.pop(prid)
        for k in prow:
            by_col[k].discard(prid)
        inv = field.inv(prow[c])
        prow = scale(prow, inv, field)
        for rid in list(by_col.get(c, ())):
            row = active[rid]
            x = row[c]
            for k, y in prow.items():
                z = field.norm(row.get(k, 0) - x * y)
                if z == 0:
                    if k in row:
                        del row[k]
                        by_col[k].discard(rid)
                else:
                    if k not in row:
                        s = by_col.get(k)
                        if s is None:
                            by_col[k] = s = set()
                            heapq.heappush(heap, k)
                        s.add(rid)
                    row[k] = z
            if not row:
                del active[rid]
        by_col.pop(c, None)
        done[c] = prow
    pivots = sorted(done)
    if reduced:
        _back_substitute(pivots, done, field)
    return pivots, done


def _back_substitute(pivots: List[int], rows: Dict[int, dict], field: Field) -> None:
    pivot_set = set(pivots)
    for p in reversed(pivots):
        row = rows[p]
        while True:
            hits = [k for k in row if k != p and k in pivot_set]
            if not hits:
                break
            for k in hits:
                x = row.get(k)
                if x is not None:
                    add_scaled(row, rows[k], -x, field)


def rank(m: Matrix) -> int:
    pivots, _ = row_reduce((c for _, c in m.columns()), m.field, reduced=False)
    return len(pivots)


class Subspace:
    """Subspace of ``field^ambient_dim`` held as a reduced row echelon basis."""

    def __init__(self, ambient_dim: int, field: Field, pivots: List[int], rows: Dict[int, dict]):
        self.ambient_dim = ambient_dim
        self.field = field
        self.pivots = list(pivots)
        self._rows = rows

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Mapping], field: Field) -> "Subspace":
        vectors = list(vectors)
        for v in vectors:
            for k in v:
                if not 0 <= k < ambient_dim:
                    raise IndexError(f"coordinate {k} outside ambient dimension {ambient_dim}")
        pivots, rows = row_reduce(vectors, field)
        return cls(ambient_dim, field, pivots, rows)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def basis(self) -> List[dict]:
        return [self._rows[p] for p in self.pivots]

    def reduce(self, v: Mapping) -> dict:
        """Remainder of ``v`` after clearing every pivot coordinate."""
        out = clean(v, self.field)
        for p in self.pivots:
            x = out.get(p)
            if x is not None:
                add_scaled(out, self._rows[p], -x, self.field)
        return out

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def coordinates(self, v: Mapping) -> dict:
        """Coordinates of ``v`` (assumed in the subspace) in the echelon basis."""
        out = {}
        for k, p in enumerate(self.pivots):
            x = v.get(p)
            if x:
                out[k] = x
        return out

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel_basis(m: Matrix) -> Subspace:
    """Basis of ``{v : m v = 0}`` in reduced echelon form."""
    pivots, rows = row_reduce(m.rows_sparse(), m.field)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    # column j of the RREF, read off row by row
    by_col: Dict[int, List[Tuple[int, object]]] = {}
    for p in pivots:
        for k, x in rows[p].items():
            if k != p:
                by_col.setdefault(k, []).append((p, x))
    vectors = []
    for j in free:
        v = {j: 1}
        for p, x in by_col.get(j, ()):
            v[p] = m.field.norm(-x)
        vectors.append(v)
    return Subspace.span(m.cols, vectors, m.field)


solve_linear_constraints = kernel_basis


class Echelon:
    """Incremental sparse echelon basis; pivot of each row is its smallest column.

    Built for streaming very many short relation vectors: each insertion is
    reduced against the existing rows, so memory stays proportional to the rank.
    """

    def __init__(self, ambient_dim: int, field: Field):
        self.ambient_dim = ambient_dim
        self.field = field
        self.rows: Dict[int, dict] = {}

    def reduce(self, v: Mapping) -> dict:
        field = self.field
        rows = self.rows
        out = dict(v)
        heap = list(out)
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            x = out.get(c)
            if x is None:
                continue
            row = rows.get(c)
            if row is None:
                continue
            for k, y in row.items():
                old = out.get(k)
                if old is None:
                    out[k] = field.norm(-x * y)
                    heapq.heappush(heap, k)
                else:
                    z = field.norm(old - x * y)
                    if z == 0:
                        del out[k]
                    else:
                        out[k] = z
        return out

    def add(self, v: Mapping) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        self.rows[p] = scale(r, self.field.inv(r[p]), self.field)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


class QuotientSpace:
    """``field^ambient_dim`` modulo a relation subspace.

    Quotient coordinates are the non-pivot ambient coordinates in increasing
    order; ``section`` sends quotient basis vector ``q`` to the ambient basis
    vector at that coordinate.
    """

    def __init__(self, echelon: Echelon):
        self._ech = echelon
        self.ambient_dim = echelon.ambient_dim
        self.field = echelon.field
        self.free = [j for j in range(self.ambient_dim) if j not in echelon.rows]
        self._index = {j: q for q, j in enumerate(self.free)}
        self._relations: Optional[Subspace] = None

    @property
    def dim(self) -> int:
        return len(self.free)

    @property
    def relation_rank(self) -> int:
        return self._ech.rank

    @property
    def relations(self) -> Subspace:
        if self._relations is None:
            ech = self._ech
            self._relations = Subspace.span(self.ambient_dim, ech.rows.values(), self.field)
        return self._relations

    def relation_rows(self) -> Iterator[dict]:
        return iter(self._ech.rows.values())

    def project(self, v: Mapping) -> dict:
        r = self._ech.reduce(clean(v, self.field))
        index = self._index
        return {index[k]: x for k, x in r.items()}

    def lift(self, q: int) -> int:
        """Ambient coordinate representing quotient basis vector ``q``."""
        return self.free[q]

    @property
    def projection(self) -> Matrix:
        store = {}
        for j in range(self.ambient_dim):
            img = self.project({j: 1})
            if img:
                store[j] = img
        return Matrix._trusted(self.dim, self.ambient_dim, self.field, store)

    @property
    def section(self) -> Matrix:
        return Matrix._trusted(self.ambient_dim, self.dim, self.field, {q: {j: 1} for q, j in enumerate(self.free)})

    def __repr__(self):
        return f"QuotientSpace(ambient={self.ambient_dim}, dim={self.dim})"


def quotient_by(ambient_dim: int, relations: Iterable[Mapping], field: Field) -> QuotientSpace:
    ech = Echelon(ambient_dim, field)
    for r in relations:
        for k in r:
            if not 0 <= k < ambient_dim:
                raise IndexError(f"coordinate {k} outside ambient dimension {ambient_dim}")
        ech.add(r)
    return QuotientSpace(ech)


def inverse(m: Matrix) -> Matrix:
    """Exact inverse of a square matrix; raises ``ValueError`` if singular."""
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    # rows of [m | I]; the right half of the RREF is the inverse
    aug = []
    for i, row in enumerate(m.rows_sparse()):
        r = dict(row)
        r[n + i] = 1
        aug.append(r)
    pivots, rows = row_reduce(aug, m.field)
    if pivots[:n] != list(range(n)) or (len(pivots) > n and pivots[n] < n):
        raise ValueError("matrix is singular")
    store: Dict[int, dict] = {}
    for i in range(n):
        for k, x in rows[i].items():
            if k >= n:
                store.setdefault(k - n, {})[i] = x
    return Matrix(n, n, m.field, store)
