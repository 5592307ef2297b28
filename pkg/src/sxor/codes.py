"""Code constructions and generator-matrix handling.

A generator matrix is K x N over GF(2)[z]: row i belongs to source packet
i, column j describes encoded packet j as a combination of shifted sources
(entry z**t means "source shifted t bits").  The per-packet storage
overhead of column j is its largest entry degree, and the encoding cost
alpha counts one XOR per term beyond the first in each column.

Three constructions are provided:

* :func:`build_sxor` - the K x N Vandermonde matrix with entries z**(i*j)
  read as polynomials.  Any K columns are invertible, overhead per packet
  stays at most ceil(log2(N+1)) - 1 bits.
* :func:`build_systematic_sxor` - same code pre-multiplied by the inverse
  of the columns named by x, so those K packets carry the sources
  verbatim.
* :func:`builtin_zd_k3` - the fixed 3 x 6 zigzag-decodable matrix whose
  entries are all monomials, single-bit overhead, zigzag-friendly.

Matrices serialize to a small text format (one header line, one hex-mask
line per row) that round-trips spec and entries losslessly.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union

from itertools import combinations

from .gf2m import FieldCtx, PolyLike, _as_poly, is_primitive
from .gf2poly import Poly2
from .polymat import PolyMatrix, _minor_det, vandermonde

__all__ = [
    "CodeSpec",
    "GenMatrix",
    "Metrics",
    "MatrixFormatError",
    "build_sxor",
    "build_systematic_sxor",
    "builtin_zd_k3",
    "user_matrix",
    "format_matrix",
    "parse_matrix",
    "save_matrix",
    "load_matrix",
]

KINDS = ("user", "sxor", "systematic", "zd3")
KIND_CODES = {name: i for i, name in enumerate(KINDS)}

# Entries of the fixed 3 x 6 zigzag-decodable code, as coefficient masks.
_ZD3_ROWS = ((1, 0, 0, 1, 2, 2),
             (0, 1, 0, 2, 1, 2),
             (0, 0, 1, 2, 2, 1))


class MatrixFormatError(ValueError):
    """Malformed matrix text; carries 1-based line and field positions."""

    def __init__(self, message: str, line: int, col: int = 0):
        super().__init__(f"line {line}" + (f", field {col}" if col else "") + f": {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class CodeSpec:
    """Identity of a code: kind, dimensions and (when used) the field.

    kind is one of ``user``, ``sxor``, ``systematic``, ``zd3``.  x is the
    1-based tuple of systematic packet positions and exists only for the
    systematic kind.  For kinds that do not use a field (zd3, and user
    matrices unless declared otherwise) m may be 0 and g zero.
    """

    kind: str
    k: int
    n: int
    m: int = 0
    g: Poly2 = Poly2(0)
    x: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.k < 1 or self.n < 1:
            raise ValueError("K and N must be positive")
        if self.kind in ("sxor", "systematic"):
            if self.m < 1 or not is_primitive(self.g, self.m):
                raise ValueError(f"{self.g} is not a primitive modulus of degree {self.m}")
            if not self.k <= self.n <= (1 << self.m) - 1:
                raise ValueError(f"need K <= N <= 2^m - 1, got K={self.k} N={self.n} m={self.m}")
        if self.kind == "systematic":
            if self.x is None:
                raise ValueError("systematic codes need x")
            _check_positions(self.x, self.k, self.n)
        elif self.x is not None:
            raise ValueError(f"x is only meaningful for systematic codes, not {self.kind!r}")
        if self.kind == "zd3" and (self.k, self.n, self.m, self.g.mask) != (3, 6, 0, 0):
            raise ValueError("zd3 is fixed at K=3, N=6 with no field")
        if self.kind == "user" and self.m < 0:
            raise ValueError("m must be nonnegative")


def _check_positions(x: Sequence[int], k: int, n: int) -> tuple[int, ...]:
    xs = tuple(x)
    if len(xs) != k:
        raise ValueError(f"x must list {k} packet positions, got {len(xs)}")
    if len(set(xs)) != len(xs):
        raise ValueError("x positions must be distinct")
    for i in xs:
        if not 1 <= i <= n:
            raise ValueError(f"x position {i} outside 1..{n}")
    return xs


class Metrics(NamedTuple):
    """Per-code summary: worst and total column overhead, and XOR cost."""

    l_max: int
    l_sum: int
    alpha: int


class GenMatrix:
    """A K x N generator matrix tied to its :class:`CodeSpec`.

    Rows are sources, columns are encoded packets (packet indices are
    1-based at the API surface).  Instances are hashable so decoder
    kernels can be memoized per (matrix, survivor set).
    """

    __slots__ = ("spec", "entries", "_overheads")

    def __init__(self, spec: CodeSpec, entries: Iterable[Iterable[PolyLike]]):
        grid = tuple(tuple(_as_poly(e) for e in row) for row in entries)
        if len(grid) != spec.k or any(len(row) != spec.n for row in grid):
            raise ValueError(f"entries must form a {spec.k}x{spec.n} grid")
        if spec.kind in ("sxor", "systematic"):
            for row in grid:
                for e in row:
                    if e.mask >> spec.m:
                        raise ValueError(
                            f"entry {e} is not reduced modulo a degree-{spec.m} modulus")
        self.spec = spec
        self.entries = grid
        self._overheads: tuple[int, ...] | None = None

    def column(self, j: int) -> tuple[Poly2, ...]:
        """Entries of packet j's column (j is 1-based)."""
        if not 1 <= j <= self.spec.n:
            raise ValueError(f"packet index {j} outside 1..{self.spec.n}")
        return tuple(row[j - 1] for row in self.entries)

    def column_overheads(self) -> tuple[int, ...]:
        """Extra bits per packet: max entry degree of each column, left to right."""
        if self._overheads is None:
            over = []
            for j in range(self.spec.n):
                degs = [row[j].degree() for row in self.entries if row[j]]
                over.append(max(degs, default=0))
            self._overheads = tuple(over)
        return self._overheads

    def metrics(self) -> Metrics:
        """(l_max, l_sum, alpha) for this matrix.

        alpha charges max(T_j - 1, 0) XORs to column j, where T_j is the
        column's total term count: combining T shifted streams takes T - 1
        XOR passes regardless of packet length.
        """
        over = self.column_overheads()
        alpha = 0
        for j in range(self.spec.n):
            terms = sum(row[j].term_count() for row in self.entries)
            alpha += max(terms - 1, 0)
        return Metrics(max(over), sum(over), alpha)

    def submatrix(self, survivors: Sequence[int]) -> PolyMatrix:
        """K x len(survivors) matrix of the named packet columns (1-based, sorted)."""
        named = tuple(survivors)
        idx = sorted(set(named))
        if len(idx) != len(named):
            raise ValueError("survivor indices must be distinct")
        for j in idx:
            if not 1 <= j <= self.spec.n:
                raise ValueError(f"packet index {j} outside 1..{self.spec.n}")
        return PolyMatrix([[row[j - 1] for j in idx] for row in self.entries])

    def check_suboptimal(self) -> tuple[bool, list[tuple[int, ...]]]:
        """MDS check: (True, []) when every K-subset of packets decodes.

        Returns (False, failing_subsets) otherwise, with each failing
        subset a sorted 1-based tuple whose submatrix determinant is zero.
        """
        k, n = self.spec.k, self.spec.n
        if k > n:
            raise ValueError("more sources than packets can never be MDS")
        grid = tuple(tuple(e.mask for e in row) for row in self.entries)
        rows = tuple(range(k))
        memo: dict = {}
        failing = []
        for comb in combinations(range(n), k):
            if not _minor_det(grid, rows, comb, memo):
                failing.append(tuple(j + 1 for j in comb))
        return (not failing, failing)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GenMatrix):
            return self.spec == other.spec and self.entries == other.entries
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec, self.entries))

    def __repr__(self) -> str:
        return f"GenMatrix({self.spec.kind}, K={self.spec.k}, N={self.spec.n})"


def build_sxor(k: int, n: int, g: PolyLike) -> GenMatrix:
    """Vandermonde shift-and-XOR code: entry (i, j) = z**(i*j) mod g, 0-based.

    Requires K <= N <= 2**m - 1 for m = deg(g), g primitive.  Any K of the
    N packets suffice to decode (the submatrices are Vandermonde minors).
    """
    g = _as_poly(g)
    ctx = FieldCtx(g)
    spec = CodeSpec("sxor", k, n, ctx.m, g)
    v = vandermonde(ctx, k, n)
    return GenMatrix(spec, [[e.value for e in row] for row in v.entries])


def build_systematic_sxor(k: int, n: int, g: PolyLike, x: Sequence[int]) -> GenMatrix:
    """Systematic variant: packets listed in x (1-based) carry the sources.

    The Vandermonde matrix is pre-multiplied by the inverse of its x
    columns, so the x columns of the result form the K x K identity and
    decodability of every K-subset is preserved.
    """
    g = _as_poly(g)
    ctx = FieldCtx(g)
    xs = tuple(x)
    spec = CodeSpec("systematic", k, n, ctx.m, g, xs)
    v = vandermonde(ctx, k, n)
    vx = v.columns([i - 1 for i in xs])
    a = vx.inverse() @ v
    return GenMatrix(spec, [[e.value for e in row] for row in a.entries])


def builtin_zd_k3() -> GenMatrix:
    """The fixed 3 x 6 zigzag-decodable code (monomial entries, overhead 1)."""
    return GenMatrix(CodeSpec("zd3", 3, 6), _ZD3_ROWS)


def user_matrix(entries: Iterable[Iterable[PolyLike]], m: int = 0, g: PolyLike = 0) -> GenMatrix:
    """Wrap arbitrary entries as a user-kind matrix (no reduction enforced)."""
    grid = tuple(tuple(_as_poly(e) for e in row) for row in entries)
    if not grid or not grid[0]:
        raise ValueError("matrix must have at least one row and one column")
    spec = CodeSpec("user", len(grid), len(grid[0]), m, _as_poly(g))
    return GenMatrix(spec, grid)


# -- text serialization ----------------------------------------------------
#
# Header:  sxorgen v1 kind=<kind> K=<int> N=<int> m=<int> g=<hex> [x=<i,j,...>]
# Body:    K lines, each N comma-separated bare hex masks (LSB = constant).
# Fields after "sxorgen v1" may appear in any order; whitespace between
# fields is free-form.  x appears exactly when kind=systematic.

def format_matrix(mat: GenMatrix) -> str:
    s = mat.spec
    head = f"sxorgen v1 kind={s.kind} K={s.k} N={s.n} m={s.m} g=0x{s.g.mask:x}"
    if s.x is not None:
        head += " x=" + ",".join(str(i) for i in s.x)
    lines = [head]
    for row in mat.entries:
        lines.append(",".join(e.to_hex() for e in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> GenMatrix:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise MatrixFormatError("missing header", 1)
    fields = lines[0].split()
    if fields[:2] != ["sxorgen", "v1"]:
        raise MatrixFormatError("expected 'sxorgen v1' header", 1, 1)
    seen: dict[str, str] = {}
    for pos, field in enumerate(fields[2:], start=3):
        key, sep, value = field.partition("=")
        if not sep or not value:
            raise MatrixFormatError(f"expected key=value, got {field!r}", 1, pos)
        if key in seen:
            raise MatrixFormatError(f"duplicate field {key!r}", 1, pos)
        seen[key] = value
    for required in ("kind", "K", "N", "m", "g"):
        if required not in seen:
            raise MatrixFormatError(f"missing field {required!r}", 1)
    extras = set(seen) - {"kind", "K", "N", "m", "g", "x"}
    if extras:
        raise MatrixFormatError(f"unknown fields {sorted(extras)}", 1)
    try:
        k = int(seen["K"], 10)
        n = int(seen["N"], 10)
        m = int(seen["m"], 10)
    except ValueError:
        raise MatrixFormatError("K, N and m must be decimal integers", 1) from None
    try:
        g = Poly2.from_hex(seen["g"])
    except ValueError as exc:
        raise MatrixFormatError(str(exc), 1) from None
    x = None
    if "x" in seen:
        try:
            x = tuple(int(part, 10) for part in seen["x"].split(","))
        except ValueError:
            raise MatrixFormatError("x must be comma-separated integers", 1) from None
    try:
        spec = CodeSpec(seen["kind"], k, n, m, g, x)
    except ValueError as exc:
        raise MatrixFormatError(str(exc), 1) from None

    body = [(i, line) for i, line in enumerate(lines[1:], start=2) if line.strip()]
    if len(body) != k:
        raise MatrixFormatError(f"expected {k} entry rows, found {len(body)}",
                                body[k][0] if len(body) > k else len(lines) + 1)
    grid = []
    for lineno, line in body:
        parts = line.split(",")
        if len(parts) != n:
            raise MatrixFormatError(f"expected {n} entries, found {len(parts)}", lineno)
        row = []
        for col, part in enumerate(parts, start=1):
            try:
                row.append(Poly2.from_hex(part))
            except ValueError as exc:
                raise MatrixFormatError(str(exc), lineno, col) from None
        grid.append(row)
    try:
        mat = GenMatrix(spec, grid)
    except ValueError as exc:
        raise MatrixFormatError(str(exc), 2) from None
    _validate_declared_kind(mat)
    return mat


def _validate_declared_kind(mat: GenMatrix) -> None:
    # A file claiming a constructed kind must actually contain that
    # construction; otherwise decoders would trust a wrong label.
    s = mat.spec
    if s.kind == "sxor":
        expected = build_sxor(s.k, s.n, s.g)
    elif s.kind == "systematic":
        expected = build_systematic_sxor(s.k, s.n, s.g, s.x)
    elif s.kind == "zd3":
        expected = builtin_zd_k3()
    else:
        return
    if mat.entries != expected.entries:
        raise MatrixFormatError(f"entries do not match the declared {s.kind} construction", 2)


PathOrFile = Union[str, os.PathLike, io.TextIOBase]


def save_matrix(mat: GenMatrix, dest: PathOrFile) -> None:
    """Write the text form to a path or text file object."""
    text = format_matrix(mat)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="ascii") as fh:
            fh.write(text)


def load_matrix(src: PathOrFile) -> GenMatrix:
    """Read the text form from a path or text file object."""
    if hasattr(src, "read"):
        return parse_matrix(src.read())
    with open(src, "r", encoding="ascii") as fh:
        return parse_matrix(fh.read())
