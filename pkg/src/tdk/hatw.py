"""Finitely supported Witt vectors Ŵ(N) over a finite nilpotent algebra N.

N is an F_p-algebra, so Ŵ(N) is an abelian p-group on which F acts
coordinatewise by x ↦ x^p, V is the shift and p = VF.  We materialise the
subgroups

    Γ_K = ⟨ V^k[b] : k < K, b in a fixed F_p-basis of N ⟩,

whose union is Ŵ(N).  If N^D = 0, sums of vectors supported in [0, K) are
supported in [0, K + c) with p^c >= D, so Γ_K is faithfully represented in
W_L(N) for L = K + c + 1.  Elements are written in the generators
g_{k,j} = V^k[b_j] by peeling off one coordinate at a time; the result is a
presentation of W_L(N) as (Z/p^E)^{L·r} / Rel with p^E killing Ŵ(N).
"""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from . import kernels, polys
from .abgroup import PModule
from .rings import NilAlgebra, RingError


def _support_growth(p: int, D: int) -> int:
    c = 0
    while p ** c < D:
        c += 1
    return c


class HatWittGroup:
    """Γ_K inside W_L(N), with coordinates in the generators V^k[b_j]."""

    def __init__(self, N: NilAlgebra, K: int, length: int | None = None):
        if K < 0:
            raise ValueError("support bound must be non-negative")
        self.N = N
        self.p = p = N.p
        self.A = A = N.ambient
        self.K = K
        self.D = max(N.nil_class, 1)
        self.L = max(K + _support_growth(p, self.D) + 1, length or 0)
        self.E = max(N.frob_exp, 1)  # p^E = V^E F^E kills Ŵ(N)
        self.basis = self._fp_basis()
        self.r = len(self.basis)
        self.g = self.L * self.r
        L, D = self.L, self.D
        self._sum = kernels.compile_polys(polys.nil_sum_polys(p, L, A.t, D), 2 * L, A)
        self._neg = kernels.compile_polys(polys.nil_neg_polys(p, L, A.t, D), L, A)

    # -- F_p-linear algebra on N ---------------------------------------------------

    def _fp_basis(self) -> list[int]:
        A, p = self.A, self.p
        basis, span = [], {0}
        for x in self.N.elements:
            if x not in span:
                basis.append(x)
                span = {A.add(s, A.scale(c, x)) for s in span for c in range(p)}
        return basis

    @cached_property
    def _coords_of(self) -> dict:
        A, p = self.A, self.p
        table = {}
        for cs in itertools.product(range(p), repeat=self.r):
            x = 0
            for c, b in zip(cs, self.basis):
                x = A.add(x, A.scale(c, b))
            table[x] = cs
        return table

    # -- Witt arithmetic on nil vectors ------------------------------------------------

    def add(self, x: tuple, y: tuple) -> tuple:
        if not any(x):
            return y
        if not any(y):
            return x
        return tuple(self._sum.eval(x + y))

    def neg(self, x: tuple) -> tuple:
        return tuple(self._neg.eval(x)) if any(x) else x

    def shift(self, x: tuple, k: int = 1) -> tuple:
        return ((0,) * k + x)[:self.L]

    def teich(self, a: int) -> tuple:
        return (a,) + (0,) * (self.L - 1)

    def frob(self, x: tuple) -> tuple:
        return tuple(self.A.pow(a, self.p) for a in x)

    def generator(self, k: int, j: int) -> tuple:
        return self.shift(self.teich(self.basis[j]), k)

    def index(self, k: int, j: int) -> int:
        return k * self.r + j

    # -- coordinates ---------------------------------------------------------------

    def coords(self, x: tuple) -> np.ndarray:
        """Integer coefficients c with x = Σ c_{k,j} V^k[b_j] in W_L(N)."""
        out = np.zeros(self.g, dtype=np.int64)
        for k in range(self.L):
            if not any(x):
                break
            a = x[k]
            if a == 0:
                continue
            cs = self._coords_of.get(a)
            if cs is None:
                raise RingError("coordinate does not lie in N")
            y = (0,) * self.L
            for j, c in enumerate(cs):
                for _ in range(c):
                    y = self.add(y, self.generator(k, j))
                out[self.index(k, j)] += c
            x = self.add(x, self.neg(y))
            if x[k] != 0:  # pragma: no cover - the peeling step is exact
                raise ArithmeticError("peeling failed")
        return out

    def element(self, c) -> tuple:
        """Σ c_{k,j} V^k[b_j] (inverse of :meth:`coords`)."""
        q = self.p ** self.E
        x = (0,) * self.L
        for idx, m in enumerate(np.asarray(c, dtype=np.int64) % q):
            k, j = divmod(idx, self.r)
            g = self.generator(k, j)
            for _ in range(int(m)):
                x = self.add(x, g)
        return x

    @cached_property
    def module(self) -> PModule:
        """W_L(N) as (Z/p^E)^g / Rel with Rel spanned by p·g_{k,j} - coords(V^{k+1}[b_j^p])."""
        cols = []
        for k in range(self.L):
            for j in range(self.r):
                col = -self._shift_coords(self.coords(self.teich(self.A.pow(self.basis[j], self.p))), k + 1)
                col[self.index(k, j)] += self.p
                cols.append(col)
        rel = np.array(cols, dtype=np.int64).T if cols else np.zeros((self.g, 0), dtype=np.int64)
        return PModule(self.p, self.E, self.g, rel)

    def _shift_coords(self, c: np.ndarray, k: int) -> np.ndarray:
        """Coordinates of V^k x from those of x (V is additive)."""
        out = np.zeros_like(c)
        if k < self.L:
            out[k * self.r:] = c[:self.g - k * self.r]
        return out

    def V_coords(self, c: np.ndarray, k: int = 1) -> np.ndarray:
        return self._shift_coords(np.asarray(c, dtype=np.int64), k)

    @cached_property
    def _frob_teich(self) -> list:
        return [self.coords(self.teich(self.A.pow(b, self.p))) for b in self.basis]

    def F_coords(self, c: np.ndarray) -> np.ndarray:
        """Coordinates of F x, using F(V^k[b]) = V^k[b^p] in characteristic p."""
        out = np.zeros(self.g, dtype=np.int64)
        for idx, m in enumerate(np.asarray(c, dtype=np.int64)):
            if m:
                k, j = divmod(idx, self.r)
                out += m * self._shift_coords(self._frob_teich[j], k)
        return out

    def gamma_generators(self, K: int | None = None) -> np.ndarray:
        """Coordinate columns of the generators of Γ_K (K <= self.K + 1)."""
        K = self.K if K is None else K
        if K > self.L:
            raise ValueError("bound exceeds the materialised length")
        cols = np.zeros((self.g, K * self.r), dtype=np.int64)
        for i in range(K * self.r):
            cols[i, i] = 1
        return cols

    def gamma_log_order(self, K: int | None = None) -> int:
        return self.module.span_log_order(self.gamma_generators(K))


def hatW_generate(N: NilAlgebra, K: int) -> HatWittGroup:
    return HatWittGroup(N, K)


__all__ = ["HatWittGroup", "hatW_generate"]
