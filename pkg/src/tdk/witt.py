"""Truncated p-typical Witt vectors W_n(R) over finite table rings."""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from . import kernels, polys
from .rings import FiniteRing, RingError

_RINGS: dict = {}


def witt_ring(R: FiniteRing, n: int) -> "WittRing":
    """The (cached) ring W_n(R)."""
    key = (id(R), n)
    W = _RINGS.get(key)
    if W is None or W.R is not R:
        W = _RINGS[key] = WittRing(R, n)
    return W


class WittRing:
    """W_n(R).  Raw elements are tuples of encoded ring elements."""

    def __init__(self, R: FiniteRing, n: int):
        if n < 0:
            raise ValueError("length must be non-negative")
        R._require_tables()
        self.R = R
        self.n = n
        self.p = R.p
        self.zero_raw = (0,) * n
        self.one_raw = (R.one,) + (0,) * (n - 1) if n else ()

    def __repr__(self):
        return f"W_{self.n}({self.R!r})"

    # compiled programs are built on first use

    @cached_property
    def _add(self):
        return kernels.compile_polys(polys.sum_polys(self.p, self.n, self.R.t), 2 * self.n, self.R)

    @cached_property
    def _mul(self):
        return kernels.compile_polys(polys.prod_polys(self.p, self.n, self.R.t), 2 * self.n, self.R)

    @cached_property
    def _neg(self):
        return kernels.compile_polys(polys.neg_polys(self.p, self.n, self.R.t), self.n, self.R)

    @cached_property
    def _frob(self):
        # F: W_n -> W_{n-1}
        return kernels.compile_polys(polys.frob_polys(self.p, self.n - 1, self.R.t), self.n, self.R)

    # -- raw arithmetic -----------------------------------------------------

    def add(self, x: tuple, y: tuple) -> tuple:
        if not any(y):
            return x
        if not any(x):
            return y
        return self._add.eval(x + y)

    def mul(self, x: tuple, y: tuple) -> tuple:
        if not any(x) or not any(y):
            return self.zero_raw
        if x == self.one_raw:
            return y
        if y == self.one_raw:
            return x
        return self._mul.eval(x + y)

    def neg(self, x: tuple) -> tuple:
        return self._neg.eval(x) if any(x) else x

    def sub(self, x: tuple, y: tuple) -> tuple:
        return self.add(x, self.neg(y))

    def from_int(self, c: int) -> tuple:
        result, base = self.zero_raw, self.one_raw
        neg = c < 0
        c = abs(c)
        while c:
            if c & 1:
                result = self.add(result, base)
            c >>= 1
            if c:
                base = self.add(base, base)
        return self.neg(result) if neg else result

    def frob_raw(self, x: tuple) -> tuple:
        """F: W_n(R) -> W_{n-1}(R)."""
        if self.n == 0:
            raise ValueError("Frobenius needs length >= 1")
        return self._frob.eval(x)

    def ghost_raw(self, x: tuple, i: int) -> int:
        R, p = self.R, self.p
        acc = 0
        for j in range(i + 1):
            acc = R.add(acc, R.scale(p ** j, R.pow(x[j], p ** (i - j))))
        return acc

    # -- element-level API --------------------------------------------------

    def __call__(self, coords) -> "WittVector":
        if isinstance(coords, WittVector):
            if coords.W is not self:
                raise RingError("Witt vector belongs to a different ring")
            return coords
        coords = tuple(c if isinstance(c, int) else self.R.parse(c) for c in coords)
        if len(coords) != self.n:
            raise RingError(f"expected {self.n} coordinates, got {len(coords)}")
        for c in coords:
            if not 0 <= c < self.R.size:
                raise RingError(f"{c} does not encode an element")
        return WittVector(self, coords)

    @cached_property
    def zero(self) -> "WittVector":
        return WittVector(self, self.zero_raw)

    @cached_property
    def one(self) -> "WittVector":
        return WittVector(self, self.one_raw)

    def integer(self, c: int) -> "WittVector":
        return WittVector(self, self.from_int(c))

    def teichmuller(self, a: int) -> "WittVector":
        return WittVector(self, (a,) + (0,) * (self.n - 1)) if self.n else self.zero

    @property
    def size(self) -> int:
        return self.R.size ** self.n

    def elements(self):
        for c in itertools.product(range(self.R.size), repeat=self.n):
            yield WittVector(self, c)

    def raw_array(self) -> np.ndarray:
        """All raw elements as rows of an array, in :meth:`elements` order."""
        grids = np.indices((self.R.size,) * self.n).reshape(self.n, -1).T
        return np.ascontiguousarray(grids, dtype=np.int32)

    def random(self, rng) -> "WittVector":
        return WittVector(self, tuple(int(v) for v in rng.integers(0, self.R.size, self.n)))

    def format(self, x) -> list:
        return [self.R.format(c) for c in (x.coords if isinstance(x, WittVector) else x)]


class WittVector:
    """An element of W_n(R)."""

    __slots__ = ("W", "coords")

    def __init__(self, W: WittRing, coords: tuple):
        self.W = W
        self.coords = coords

    def _check(self, other) -> "WittVector":
        if isinstance(other, int):
            return self.W.integer(other)
        if not isinstance(other, WittVector):
            return NotImplemented
        if other.W is not self.W:
            raise RingError(f"mismatched Witt rings {self.W} and {other.W}")
        return other

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return WittVector(self.W, self.W.add(self.coords, o.coords))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return WittVector(self.W, self.W.sub(self.coords, o.coords))

    def __rsub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return WittVector(self.W, self.W.sub(o.coords, self.coords))

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return WittVector(self.W, self.W.mul(self.coords, o.coords))

    __rmul__ = __mul__

    def __neg__(self):
        return WittVector(self.W, self.W.neg(self.coords))

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.W.integer(other)
        return isinstance(other, WittVector) and other.W is self.W and other.coords == self.coords

    def __hash__(self):
        return hash((id(self.W), self.coords))

    def __repr__(self):
        return f"[{', '.join(self.W.format(self))}]"

    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def n(self) -> int:
        return self.W.n

    def frobenius(self) -> "WittVector":
        return frobenius(self)

    def verschiebung(self) -> "WittVector":
        return verschiebung(self)

    def restrict(self, m: int) -> "WittVector":
        return restrict(self, m)

    def ghost(self, i: int) -> int:
        return ghost(self, i)


# -- module-level operations -------------------------------------------------


def witt_add(x: WittVector, y: WittVector) -> WittVector:
    return x + y


def witt_mul(x: WittVector, y: WittVector) -> WittVector:
    return x * y


def frobenius(x: WittVector) -> WittVector:
    """F: W_{n+1}(R) -> W_n(R)."""
    W = x.W
    return WittVector(witt_ring(W.R, W.n - 1), W.frob_raw(x.coords))


def verschiebung(x: WittVector) -> WittVector:
    """V: W_n(R) -> W_{n+1}(R), the shift."""
    return WittVector(witt_ring(x.W.R, x.W.n + 1), (0,) + x.coords)


def teichmuller(R: FiniteRing, a: int, n: int) -> WittVector:
    return witt_ring(R, n).teichmuller(a)


def restrict(x: WittVector, m: int) -> WittVector:
    if m > x.W.n:
        raise ValueError(f"cannot restrict length {x.W.n} to {m}")
    return WittVector(witt_ring(x.W.R, m), x.coords[:m])


def ghost(x: WittVector, i: int) -> int:
    """w_i(x) = sum_j p^j x_j^(p^(i-j)), a ring homomorphism W_n(R) -> R."""
    if i >= x.W.n:
        raise ValueError(f"ghost component {i} needs length > {i}")
    return x.W.ghost_raw(x.coords, i)


def map_witt(x: WittVector, phi, target: FiniteRing) -> WittVector:
    """W_n(phi) for a ring homomorphism phi (applied coordinatewise)."""
    return WittVector(witt_ring(target, x.W.n), tuple(phi(c) for c in x.coords))
