"""Independent reference computations.

These build the classical Hochschild complexes directly from structure
constants, with no use of the simplicial machinery, so they can cross-check
it.  Only the exact rank routine is shared.
"""

from __future__ import annotations

import itertools
from typing import List, Optional, Sequence

from .exactlin import QQ, Field, Matrix, rank


def _mul(table, x: dict, y: dict, field: Field) -> dict:
    out: dict = {}
    for i, a in x.items():
        for j, b in y.items():
            for k, c in table[i][j].items():
                out[k] = field.norm(out.get(k, 0) + a * b * c)
    return {k: v for k, v in out.items() if v != 0}


def _act(mats, i: int, v: dict, field: Field) -> dict:
    # mats[i] is a dense matrix (list of rows)
    m = mats[i]
    out: dict = {}
    for j, c in v.items():
        for r in range(len(m)):
            e = m[r][j]
            if e:
                out[r] = field.norm(out.get(r, 0) + e * c)
    return {k: v for k, v in out.items() if v != 0}


class _Raw:
    """Algebra and bimodule reduced to plain tables."""

    def __init__(self, table, left, right, field: Field):
        self.table = table
        self.left = left
        self.right = right
        self.field = field
        self.d = len(table)
        self.dm = len(left[0]) if left else 0

    @classmethod
    def of(cls, alg, bimodule=None):
        table = alg.structure_constants
        if bimodule is None:
            d = len(table)
            left = [[[table[i][j].get(r, 0) for j in range(d)] for r in range(d)] for i in range(d)]
            right = [[[table[j][i].get(r, 0) for j in range(d)] for r in range(d)] for i in range(d)]
        else:
            left = [m.to_dense() for m in bimodule.left]
            right = [m.to_dense() for m in bimodule.right]
        return cls(table, left, right, alg.field)

    def index(self, m: int, word: Sequence[int]) -> int:
        k = m
        for w in word:
            k = k * self.d + w
        return k


def _chain_differential(raw: _Raw, n: int) -> Matrix:
    """b : M ⊗ A^{⊗n} → M ⊗ A^{⊗n-1}."""
    f, d, dm = raw.field, raw.d, raw.dm
    cols = {}
    for m in range(dm):
        for word in itertools.product(range(d), repeat=n):
            out: dict = {}

            def put(mv: dict, w_left: Sequence[int], mid: Optional[dict], w_right: Sequence[int], sign: int):
                # add sign * mv ⊗ w_left ⊗ mid ⊗ w_right, mid a vector in A (or None)
                mids = mid.items() if mid is not None else [(None, 1)]
                for mi, mc in mv.items():
                    for x, xc in mids:
                        w = list(w_left) + ([x] if x is not None else []) + list(w_right)
                        k = raw.index(mi, w)
                        out[k] = f.norm(out.get(k, 0) + sign * mc * xc)

            put(_act(raw.right, word[0], {m: 1}, f), [], None, word[1:], 1)
            for i in range(1, n):
                prod = _mul(raw.table, {word[i - 1]: 1}, {word[i]: 1}, f)
                put({m: 1}, word[:i - 1], prod, word[i + 1:], -1 if i % 2 else 1)
            put(_act(raw.left, word[-1], {m: 1}, f), word[:-1], None, [], -1 if n % 2 else 1)
            col = {k: v for k, v in out.items() if v != 0}
            if col:
                cols[raw.index(m, word)] = col
    return Matrix(dm * d ** (n - 1), dm * d ** n, f, cols)


def classical_hochschild_betti(alg, bimodule=None, max_degree: int = 4) -> List[int]:
    """dim HH_n(A, M) for n = 0..max_degree from the classical bar-style complex."""
    raw = _Raw.of(alg, bimodule)
    ranks = [0] + [rank(_chain_differential(raw, n)) for n in range(1, max_degree + 2)]
    return [raw.dm * raw.d ** n - ranks[n] - ranks[n + 1] for n in range(max_degree + 1)]


def _cochain_differential(raw: _Raw, n: int) -> Matrix:
    """δ : Hom(A^{⊗n}, M) → Hom(A^{⊗n+1}, M), unknown f[word, m] at index(word)·dm + m."""
    f, d, dm = raw.field, raw.d, raw.dm

    def idx(word, m):
        k = 0
        for w in word:
            k = k * d + w
        return k * dm + m

    # column for the basis cochain e_{word0, m0}; build row-wise then transpose
    rows = {}
    for word in itertools.product(range(d), repeat=n + 1):
        for mo in range(dm):
            rows[idx(word, mo)] = {}
    for word in itertools.product(range(d), repeat=n + 1):
        # (δφ)(a_1..a_{n+1}) = a_1 φ(a_2..) + Σ (−1)^i φ(..a_i a_{i+1}..) + (−1)^{n+1} φ(a_1..a_n) a_{n+1}
        terms = []  # (sign, inner word vector as list of (word, coeff), post-action)
        terms.append((1, [(word[1:], 1)], ("left", word[0])))
        for i in range(1, n + 1):
            prod = _mul(raw.table, {word[i - 1]: 1}, {word[i]: 1}, f)
            inner = [(word[:i - 1] + (x,) + word[i + 1:], c) for x, c in prod.items()]
            terms.append((-1 if i % 2 else 1, inner, None))
        terms.append((-1 if (n + 1) % 2 else 1, [(word[:-1], 1)], ("right", word[-1])))
        for sign, inner, post in terms:
            for w, c in inner:
                for m in range(dm):
                    if post is None:
                        img = {m: 1}
                    elif post[0] == "left":
                        img = _act(raw.left, post[1], {m: 1}, f)
                    else:
                        img = _act(raw.right, post[1], {m: 1}, f)
                    src = idx(w, m)
                    for mo, v in img.items():
                        r = rows[idx(word, mo)]
                        r[src] = f.norm(r.get(src, 0) + sign * c * v)
    cols: dict = {}
    for r, row in rows.items():
        for c, v in row.items():
            if v != 0:
                cols.setdefault(c, {})[r] = v
    return Matrix(dm * d ** (n + 1), dm * d ** n, f, cols)


def classical_hochschild_cobetti(alg, bimodule=None, max_degree: int = 3) -> List[int]:
    """dim HH^n(A, M) for n = 0..max_degree from the classical cochain complex."""
    raw = _Raw.of(alg, bimodule)
    ranks = [rank(_cochain_differential(raw, n)) for n in range(max_degree + 1)]
    return [raw.dm * raw.d ** n - ranks[n] - (ranks[n - 1] if n else 0) for n in range(max_degree + 1)]


def _dim(x) -> int:
    return x if isinstance(x, int) else x.dim


def secondary_dimension_formula(a, b, n: int, m=None) -> int:
    """Predicted size of level n of M ⊗ over the secondary bar module: (dim M)(dim A)^n(dim B)^{n(n-1)/2}.

    ``a``, ``b`` and ``m`` may be algebras/bimodules or plain dimensions; M defaults to A.
    """
    da, db = _dim(a), _dim(b)
    dm = da if m is None else _dim(m)
    return dm * da ** n * db ** (n * (n - 1) // 2)


def classical_boundary(alg, bimodule=None, n: int = 1) -> Matrix:
    """The classical b : C_n → C_{n-1} (n ≥ 1)."""
    return _chain_differential(_Raw.of(alg, bimodule), n)


def classical_coboundary(alg, bimodule=None, n: int = 0) -> Matrix:
    """The classical δ : C^n → C^{n+1}."""
    return _cochain_differential(_Raw.of(alg, bimodule), n)
