"""Matrices over GF(2**m) and over the polynomial ring GF(2)[z].

Two matrix flavors back the code constructions.  :class:`FieldMatrix`
holds field elements and supports the product and Gauss-Jordan inversion
needed to build systematic generators.  :class:`PolyMatrix` holds plain
GF(2)[z] polynomials and supports determinant/adjugate computation, which
is the core of the exact decoder: for a K x K submatrix A_I the identity
A_I * adj(A_I) = det(A_I) * I turns decoding into K exact divisions.

Determinants use minor expansion with a memo shared across overlapping
column subsets; at the supported sizes (K <= 12) that is far below a
millisecond and keeps the code free of fraction-field machinery.  Over
characteristic 2 all cofactor signs collapse to +1.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .gf2m import FieldCtx, FieldElem
from .gf2poly import Poly2, _mul_masks, gcd

__all__ = [
    "FieldMatrix",
    "PolyMatrix",
    "Singular",
    "vandermonde",
    "cancel_common_factor",
]


class Singular(ValueError):
    """The matrix has no inverse over its field."""


def vandermonde(ctx: FieldCtx, k: int, n: int) -> "FieldMatrix":
    """K x N Vandermonde matrix with entry (i, j) = z**(i*j), 0-based.

    Row i is the geometric progression of z**i across the N columns; any K
    columns are independent because the N points z**j are pairwise
    distinct, which needs n <= 2**m - 1.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= K <= N, got K={k} N={n}")
    if n > ctx.order:
        raise ValueError(f"N={n} exceeds the {ctx.order} distinct points of GF(2^{ctx.m})")
    return FieldMatrix([[ctx.z_pow(i * j) for j in range(n)] for i in range(k)])


class FieldMatrix:
    """Rectangular matrix of :class:`FieldElem`, immutable by convention."""

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[FieldElem]]):
        grid = tuple(tuple(row) for row in entries)
        if not grid or not grid[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(grid[0])
        ctx = grid[0][0].ctx
        for row in grid:
            if len(row) != width:
                raise ValueError("ragged rows")
            for e in row:
                if not isinstance(e, FieldElem) or e.ctx != ctx:
                    raise ValueError("entries must share one field context")
        self.ctx = ctx
        self.rows = len(grid)
        self.cols = width
        self.entries = grid

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "FieldMatrix":
        return cls([[ctx.one if i == j else ctx.zero for j in range(n)] for i in range(n)])

    def columns(self, idx: Sequence[int]) -> "FieldMatrix":
        """Select columns by 0-based index, in the order given."""
        for j in idx:
            if not 0 <= j < self.cols:
                raise ValueError(f"column index {j} out of range")
        return FieldMatrix([[row[j] for j in idx] for row in self.entries])

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        if self.ctx != other.ctx:
            raise ValueError("field context mismatch")
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = self.ctx.zero
                for t in range(self.cols):
                    acc = acc + self.entries[i][t] * other.entries[t][j]
                row.append(acc)
            out.append(row)
        return FieldMatrix(out)

    def inverse(self) -> "FieldMatrix":
        """Gauss-Jordan inverse; raises :class:`Singular` when rank-deficient."""
        if self.rows != self.cols:
            raise ValueError("only square matrices can be inverted")
        n = self.rows
        aug = [list(self.entries[i]) + [FieldMatrix.identity(self.ctx, n).entries[i][j] for j in range(n)]
               for i in range(n)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if aug[r][col]), None)
            if pivot is None:
                raise Singular(f"no pivot in column {col}")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            inv = aug[col][col].inverse()
            aug[col] = [e * inv for e in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [a + f * b for a, b in zip(aug[r], aug[col])]
        return FieldMatrix([row[n:] for row in aug])

    def to_poly(self) -> "PolyMatrix":
        """Reinterpret the reduced representatives as GF(2)[z] polynomials."""
        return PolyMatrix([[e.value for e in row] for row in self.entries])

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldMatrix):
            return self.ctx == other.ctx and self.entries == other.entries
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx, self.entries))

    def __repr__(self) -> str:
        return f"FieldMatrix({self.rows}x{self.cols}, m={self.ctx.m})"


def _minor_det(grid: tuple[tuple[int, ...], ...],
               rows: tuple[int, ...],
               cols: tuple[int, ...],
               memo: dict) -> int:
    # Determinant (as an int mask) of the submatrix grid[rows][cols] by
    # first-row expansion; signs vanish over GF(2).  memo is shared so the
    # adjugate's K^2 minors and repeated subset queries reuse work.
    if not rows:
        return 1
    key = (rows, cols)
    v = memo.get(key)
    if v is not None:
        return v
    r0, rest = rows[0], rows[1:]
    acc = 0
    for i, c in enumerate(cols):
        e = grid[r0][c]
        if e:
            sub = _minor_det(grid, rest, cols[:i] + cols[i + 1:], memo)
            if sub:
                acc ^= _mul_masks(e, sub)
    memo[key] = acc
    return acc


class PolyMatrix:
    """Rectangular matrix of :class:`Poly2` entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[Poly2]]):
        grid = tuple(tuple(e if isinstance(e, Poly2) else Poly2(e) for e in row) for row in entries)
        if not grid or not grid[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(grid[0])
        for row in grid:
            if len(row) != width:
                raise ValueError("ragged rows")
        self.rows = len(grid)
        self.cols = width
        self.entries = grid

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls([[Poly2(1 if i == j else 0) for j in range(n)] for i in range(n)])

    def scale(self, p: Poly2) -> "PolyMatrix":
        """Entry-wise product with a scalar polynomial."""
        return PolyMatrix([[p * e for e in row] for row in self.entries])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Poly2(0)
                for t in range(self.cols):
                    acc = acc + self.entries[i][t] * other.entries[t][j]
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def _mask_grid(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(e.mask for e in row) for row in self.entries)

    def determinant(self) -> Poly2:
        """Determinant over GF(2)[z]; zero means the columns are dependent."""
        if self.rows != self.cols:
            raise ValueError("determinant needs a square matrix")
        idx = tuple(range(self.rows))
        return Poly2(_minor_det(self._mask_grid(), idx, idx, {}))

    def det_adjugate(self) -> tuple[Poly2, "PolyMatrix"]:
        """Determinant and adjugate, satisfying A @ adj = adj @ A = det * I.

        No common factor is cancelled here: det stays multiplicative
        across products.  Use :func:`cancel_common_factor` when a reduced
        pair is wanted (the decoder does).
        """
        if self.rows != self.cols:
            raise ValueError("adjugate needs a square matrix")
        n = self.rows
        grid = self._mask_grid()
        memo: dict = {}
        idx = tuple(range(n))
        det = _minor_det(grid, idx, idx, memo)
        adj = [[Poly2(_minor_det(grid,
                                 tuple(i for i in idx if i != r),
                                 tuple(j for j in idx if j != c),
                                 memo))
                for r in idx] for c in idx]  # adj[c][r] = minor(r, c): transpose
        return Poly2(det), PolyMatrix(adj)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PolyMatrix):
            return self.entries == other.entries
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"PolyMatrix({self.rows}x{self.cols})"


def cancel_common_factor(det: Poly2, adj: PolyMatrix) -> tuple[Poly2, PolyMatrix]:
    """Divide a (det, adj) pair by the gcd of det and every adj entry.

    The reduced pair still satisfies A @ adj' = det' * I and makes the
    decoder's division lengths (hence its work) as small as possible.
    det must be nonzero.
    """
    if not det:
        raise ValueError("cannot reduce a singular pair")
    g = det
    for row in adj.entries:
        for e in row:
            if e:
                g = gcd(g, e)
            if g.mask == 1:
                return det, adj
    q, r = divmod(det, g)
    assert not r.mask
    out = []
    for row in adj.entries:
        new_row = []
        for e in row:
            eq, er = divmod(e, g)
            assert not er.mask
            new_row.append(eq)
        out.append(new_row)
    return q, PolyMatrix(out)
