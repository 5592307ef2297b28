"""GF(2**m) arithmetic modulo a primitive polynomial.

A :class:`FieldCtx` pins the field: the extension degree m and a primitive
modulus g(z) of degree m.  Primitivity (z generates the full multiplicative
group of 2**m - 1 elements) is what guarantees the Vandermonde points
z^0, z^1, ..., z^(N-1) are pairwise distinct for N <= 2**m - 1, so it is
validated at construction time rather than trusted.

Elements are :class:`FieldElem` wrappers around reduced polynomials
(degree < m).  Arithmetic stays in int-mask form internally; only the
API surface deals in :class:`~sxor.gf2poly.Poly2`.
"""

from __future__ import annotations

from typing import Iterator, Union

from .gf2poly import Poly2, _divmod_masks, _mul_masks

__all__ = ["FieldCtx", "FieldElem", "is_primitive", "default_modulus", "DEFAULT_MODULI"]

# One primitive polynomial per degree, by coefficient mask.  Each entry is
# checked by is_primitive in the test suite, so a typo here cannot survive.
DEFAULT_MODULI: dict[int, int] = {
    1: 0x3,       # z + 1
    2: 0x7,       # z^2 + z + 1
    3: 0xB,       # z^3 + z + 1
    4: 0x13,      # z^4 + z + 1
    5: 0x25,      # z^5 + z^2 + 1
    6: 0x43,      # z^6 + z + 1
    7: 0x83,      # z^7 + z + 1
    8: 0x11D,     # z^8 + z^4 + z^3 + z^2 + 1
    9: 0x211,     # z^9 + z^4 + 1
    10: 0x409,    # z^10 + z^3 + 1
    11: 0x805,    # z^11 + z^2 + 1
    12: 0x1053,   # z^12 + z^6 + z^4 + z + 1
    13: 0x201B,   # z^13 + z^4 + z^3 + z + 1
    14: 0x4443,   # z^14 + z^10 + z^6 + z + 1
    15: 0x8003,   # z^15 + z + 1
    16: 0x1100B,  # z^16 + z^12 + z^3 + z + 1
}

PolyLike = Union[Poly2, int]


def _as_poly(p: PolyLike) -> Poly2:
    return p if isinstance(p, Poly2) else Poly2(p)


def default_modulus(m: int) -> Poly2:
    """Built-in primitive modulus of degree m (1 <= m <= 16)."""
    try:
        return Poly2(DEFAULT_MODULI[m])
    except KeyError:
        raise ValueError(f"no built-in modulus of degree {m}") from None


def is_primitive(g: PolyLike, m: int) -> bool:
    """True when g is a primitive polynomial of degree m.

    The check is direct: g must have degree m and constant term 1 (else z
    is not even invertible), and z must have multiplicative order exactly
    2**m - 1 modulo g.  The order is found by repeated multiplication by
    z, which is a shift and a conditional XOR per step; for the supported
    degrees (m <= 16) that is at most 65535 steps.
    """
    g = _as_poly(g)
    if m < 1 or not g.mask or g.degree() != m or not g.mask & 1:
        return False
    full = (1 << m) - 1
    t = _divmod_masks(2, g.mask)[1]  # z reduced mod g (handles m = 1)
    e = 1
    while t != 1:
        t <<= 1
        if (t >> m) & 1:
            t ^= g.mask
        e += 1
        if e > full:
            return False
    return e == full


def _mulmod(a: int, b: int, g: int, m: int) -> int:
    p = _mul_masks(a, b)
    while p.bit_length() > m:
        p ^= g << (p.bit_length() - 1 - m)
    return p


class FieldCtx:
    """A validated GF(2**m) context.

    Construction raises ValueError unless g is primitive of degree m, so a
    live context is proof the field is well-formed.  Contexts compare and
    hash by (m, g); elements refuse to mix across unequal contexts.
    """

    __slots__ = ("m", "g")

    def __init__(self, g: PolyLike, m: int | None = None):
        g = _as_poly(g)
        if m is None:
            if not g.mask:
                raise ValueError("zero polynomial cannot be a field modulus")
            m = g.degree()
        if not is_primitive(g, m):
            raise ValueError(f"{g} is not a primitive polynomial of degree {m}")
        self.m = m
        self.g = g

    @property
    def order(self) -> int:
        """Size of the multiplicative group, 2**m - 1."""
        return (1 << self.m) - 1

    def elem(self, value: PolyLike) -> "FieldElem":
        """Wrap a polynomial (reduced mod g) as a field element."""
        v = _as_poly(value).mask
        if v.bit_length() > self.m:
            v = _divmod_masks(v, self.g.mask)[1]
        return FieldElem(self, v)

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(self, 0)

    @property
    def one(self) -> "FieldElem":
        return FieldElem(self, 1)

    def z_pow(self, e: int) -> "FieldElem":
        """The element z**e, with e taken mod 2**m - 1 (e may be negative)."""
        e %= self.order
        acc = 1
        base = _divmod_masks(2, self.g.mask)[1]
        while e:
            if e & 1:
                acc = _mulmod(acc, base, self.g.mask, self.m)
            base = _mulmod(base, base, self.g.mask, self.m)
            e >>= 1
        return FieldElem(self, acc)

    def elements(self) -> Iterator["FieldElem"]:
        """All 2**m field elements, in mask order starting from zero."""
        for v in range(1 << self.m):
            yield FieldElem(self, v)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldCtx):
            return self.m == other.m and self.g == other.g
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("FieldCtx", self.m, self.g.mask))

    def __repr__(self) -> str:
        return f"FieldCtx(g=0x{self.g.mask:x}, m={self.m})"


class FieldElem:
    """An element of a :class:`FieldCtx`, stored reduced (degree < m)."""

    __slots__ = ("ctx", "_mask")

    def __init__(self, ctx: FieldCtx, mask: int):
        self.ctx = ctx
        self._mask = mask

    @property
    def value(self) -> Poly2:
        """The reduced polynomial representative."""
        return Poly2(self._mask)

    def _check(self, other: "FieldElem") -> None:
        if self.ctx != other.ctx:
            raise ValueError("field context mismatch")

    def __add__(self, other: "FieldElem") -> "FieldElem":
        if not isinstance(other, FieldElem):
            return NotImplemented
        self._check(other)
        return FieldElem(self.ctx, self._mask ^ other._mask)

    __sub__ = __add__

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        if not isinstance(other, FieldElem):
            return NotImplemented
        self._check(other)
        return FieldElem(self.ctx, _mulmod(self._mask, other._mask, self.ctx.g.mask, self.ctx.m))

    def __pow__(self, n: int) -> "FieldElem":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        acc = FieldElem(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def inverse(self) -> "FieldElem":
        """Multiplicative inverse via a**(2**m - 2); zero is rejected."""
        if not self._mask:
            raise ZeroDivisionError("zero field element has no inverse")
        return self ** ((1 << self.ctx.m) - 2)

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        if not isinstance(other, FieldElem):
            return NotImplemented
        self._check(other)
        return self * other.inverse()

    def __bool__(self) -> bool:
        return bool(self._mask)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElem):
            return self.ctx == other.ctx and self._mask == other._mask
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("FieldElem", self.ctx.m, self.ctx.g.mask, self._mask))

    def __repr__(self) -> str:
        return f"FieldElem({self.value}, m={self.ctx.m})"
