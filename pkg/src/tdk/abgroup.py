"""Finite abelian groups given by integer relation matrices.

Two tools are provided:

* :func:`smith_invariants` - invariant factors of Z^g / (column span of a
  relation matrix), by a plain Smith normal form over the integers;
* :class:`PModule` - a finite abelian p-group realised as a quotient of
  (Z/p^E)^g, with orders of subgroups and quotients computed by elimination
  over the chain ring Z/p^E (pivoting on entries of minimal p-valuation).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np


# -- integer Smith normal form ---------------------------------------------------------


def smith_invariants(rel, gens: int) -> list[int]:
    """Diagonal of the Smith normal form of a gens x k integer matrix.

    Returns one entry per generator: d_1 | d_2 | ... (0 for free summands).
    """
    A = [list(map(int, row)) for row in rel] if len(rel) else [[] for _ in range(gens)]
    if len(A) != gens:
        raise ValueError(f"relation matrix must have {gens} rows")
    rows, cols = gens, (len(A[0]) if gens else 0)
    diag = []
    r = 0
    for c0 in range(min(rows, cols)):
        # find a nonzero entry of minimal absolute value in the remaining block
        while True:
            best = None
            for i in range(r, rows):
                for j in range(c0, cols):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            A[r], A[i] = A[i], A[r]
            for row in A:
                row[c0], row[j] = row[j], row[c0]
            piv = A[r][c0]
            clean = True
            for i in range(r + 1, rows):
                q = A[i][c0] // piv
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                if A[i][c0]:
                    clean = False
            for j in range(c0 + 1, cols):
                q = A[r][j] // piv
                if q:
                    for row in A:
                        row[j] -= q * row[c0]
                if A[r][j]:
                    clean = False
            if clean:
                # enforce divisibility of the rest by the pivot
                bad = next(((i, j) for i in range(r + 1, rows) for j in range(c0 + 1, cols)
                            if A[i][j] % piv), None)
                if bad is None:
                    break
                A[r] = [a + b for a, b in zip(A[r], A[bad[0]])]
        if best is None:
            break
        diag.append(abs(A[r][c0]))
        r += 1
    diag += [0] * (gens - len(diag))
    return diag


def integer_kernel(A, m: int) -> list[list[int]]:
    """A Z-basis of {x in Z^m : A x = 0} for an integer matrix A (list of rows).

    Column operations bring A to echelon form while recording them in a
    unimodular matrix U; the columns of U beyond the pivots span the kernel.
    """
    A = [list(map(int, row)) for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]

    def col_op(j1, j2, a, b, c, d):
        # (col j1, col j2) <- (a·c1 + b·c2, c·c1 + d·c2), determinant ±1
        for M in (A, U):
            for row in M:
                x, y = row[j1], row[j2]
                row[j1], row[j2] = a * x + b * y, c * x + d * y

    c = 0
    for i in range(len(A)):
        if c >= m:
            break
        for j in range(c + 1, m):
            x, y = A[i][c], A[i][j]
            if y == 0:
                continue
            # extended gcd: g = s x + t y
            old_r, r = x, y
            old_s, s_ = 1, 0
            old_t, t = 0, 1
            while r:
                q = old_r // r
                old_r, r = r, old_r - q * r
                old_s, s_ = s_, old_s - q * s_
                old_t, t = t, old_t - q * t
            g = old_r
            col_op(c, j, old_s, old_t, -y // g, x // g)
        if A[i][c] != 0:
            c += 1
    return [[U[r][j] for r in range(m)] for j in range(c, m)]


@dataclass
class AbGroupPresentation:
    """Z^gens / (column span of ``relations``), with its invariant factors."""

    gens: int
    relations: list  # gens x k integer matrix (list of rows)
    invariant_factors: list = field(default_factory=list)  # nontrivial, d_1 | d_2 | ..., 0 = Z

    @classmethod
    def from_relations(cls, gens: int, relations) -> "AbGroupPresentation":
        diag = smith_invariants(relations, gens)
        return cls(gens, [list(map(int, r)) for r in relations], [d for d in diag if d != 1])

    @classmethod
    def from_factors(cls, factors) -> "AbGroupPresentation":
        factors = sorted(int(f) for f in factors if f != 1)
        rel = [[f if i == j else 0 for j in range(len(factors))] for i, f in enumerate(factors)]
        return cls(len(factors), rel, factors)

    @property
    def order(self) -> int | None:
        """Product of the invariant factors (None for infinite groups)."""
        if any(f == 0 for f in self.invariant_factors):
            return None
        return prod(self.invariant_factors)

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def exponent(self) -> int | None:
        if any(f == 0 for f in self.invariant_factors):
            return None
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def to_json(self) -> dict:
        return {"order": self.order, "factors": list(self.invariant_factors)}


# -- finite abelian p-groups over Z/p^E ------------------------------------------------------


def pivot_valuations(cols: np.ndarray, p: int, E: int) -> list[int]:
    """Valuations v_i of the Smith form of a matrix over Z/p^E (only v_i < E)."""
    q = p ** E
    if q >= 2 ** 31:
        raise OverflowError("modulus too large for the int64 elimination")
    A = np.array(cols, dtype=np.int64) % q
    if A.size == 0:
        return []
    vals = []
    while A.size:
        nz = A != 0
        if not nz.any():
            break
        # valuation of every entry
        V = np.full(A.shape, E, dtype=np.int64)
        rest = A.copy()
        live = nz.copy()
        k = 0
        while live.any():
            hit = live & (rest % p != 0)
            V[hit] = k
            live &= ~hit
            rest[live] //= p
            k += 1
        i, j = np.unravel_index(int(np.argmin(V)), V.shape)
        v = int(V[i, j])
        vals.append(v)
        piv = int(A[i, j])
        unit = piv // p ** v
        uinv = pow(unit, -1, q)
        # eliminate column j from other rows: row_r -= (A[r,j]/p^v) * uinv * row_i
        colfac = (A[:, j] // p ** v) * uinv % q
        A = (A - np.outer(colfac, A[i, :])) % q
        # row i now only matters at column j; drop row i and column j
        A = np.delete(np.delete(A, i, axis=0), j, axis=1)
    return vals


def submodule_log_order(cols, p: int, E: int) -> int:
    """log_p of the order of the submodule of (Z/p^E)^g spanned by the columns."""
    return sum(E - v for v in pivot_valuations(cols, p, E))


class PModule:
    """A finite abelian p-group (Z/p^E)^g / Rel, Rel given by columns."""

    def __init__(self, p: int, E: int, g: int, rel: np.ndarray | None = None):
        self.p, self.E, self.g = p, E, g
        self.rel = np.zeros((g, 0), dtype=np.int64) if rel is None else np.asarray(rel, dtype=np.int64)
        self._rel_log = submodule_log_order(self.rel, p, E)

    @property
    def log_order(self) -> int:
        return self.g * self.E - self._rel_log

    def span_log_order(self, cols) -> int:
        """log_p of the order of the subgroup generated by the given elements."""
        if self.g == 0:
            return 0
        cols = np.asarray(cols, dtype=np.int64).reshape(self.g, -1)
        return submodule_log_order(np.concatenate([cols, self.rel], axis=1), self.p, self.E) - self._rel_log

    def quotient_factors(self, big, small) -> list[int]:
        """Invariant factors of ⟨big, small⟩ / ⟨small⟩ (both column sets).

        For a finite p-group H, log_p |p^j H| determines the number of
        cyclic factors of order >= p^(j+1).
        """
        p = self.p
        if self.g == 0:
            return []
        big = np.asarray(big, dtype=np.int64).reshape(self.g, -1)
        small = np.asarray(small, dtype=np.int64).reshape(self.g, -1)
        base = self.span_log_order(small)
        logs = []
        for j in range(self.E + 1):
            logs.append(self.span_log_order(np.concatenate([big * p ** j, small], axis=1)) - base)
        factors = []
        for j in range(self.E):
            count_ge = logs[j] - logs[j + 1]  # number of factors of order >= p^(j+1)
            count_ge_next = (logs[j + 1] - logs[j + 2]) if j + 2 <= self.E else 0
            factors += [p ** (j + 1)] * (count_ge - count_ge_next)
        return sorted(factors)


__all__ = ["AbGroupPresentation", "PModule", "smith_invariants", "integer_kernel", "pivot_valuations",
           "submodule_log_order"]
