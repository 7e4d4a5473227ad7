"""Small dense matrices over any of the package's element types.

Entries only need ``+``, ``-`` and ``*``; a zero element is carried so that
empty blocks and empty sums are well defined.
"""

from __future__ import annotations

import itertools

from .rings import FiniteRing, NotAUnit, unit_inverse
from .witt import WittRing, WittVector, witt_ring


class Matrix:
    __slots__ = ("rows", "cols", "data", "zero")

    def __init__(self, data, zero, rows: int | None = None, cols: int | None = None):
        data = tuple(tuple(r) for r in data)
        self.rows = len(data) if rows is None else rows
        if cols is None:
            cols = len(data[0]) if data else 0
        self.cols = cols
        if len(data) != self.rows or any(len(r) != self.cols for r in data):
            raise ValueError("ragged matrix data")
        self.data = data
        self.zero = zero

    # -- construction -------------------------------------------------------

    @classmethod
    def filled(cls, rows, cols, fn, zero) -> "Matrix":
        return cls([[fn(i, j) for j in range(cols)] for i in range(rows)], zero, rows, cols)

    @classmethod
    def zeros(cls, rows, cols, zero) -> "Matrix":
        return cls.filled(rows, cols, lambda i, j: zero, zero)

    @classmethod
    def identity(cls, n, zero, one) -> "Matrix":
        return cls.filled(n, n, lambda i, j: one if i == j else zero, zero)

    @classmethod
    def block(cls, A: "Matrix", B: "Matrix", C: "Matrix", D: "Matrix") -> "Matrix":
        if A.rows != B.rows or C.rows != D.rows or A.cols != C.cols or B.cols != D.cols:
            raise ValueError("block shapes do not fit together")
        data = [ra + rb for ra, rb in zip(A.data, B.data)] + [rc + rd for rc, rd in zip(C.data, D.data)]
        return cls(data, A.zero, A.rows + C.rows, A.cols + B.cols)

    @classmethod
    def diagonal_blocks(cls, A: "Matrix", B: "Matrix") -> "Matrix":
        z = A.zero
        return cls.block(A, cls.zeros(A.rows, B.cols, z), cls.zeros(B.rows, A.cols, z), B)

    # -- access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple:
        return self.rows, self.cols

    def __getitem__(self, key):
        if isinstance(key, tuple) and all(isinstance(k, int) for k in key):
            return self.data[key[0]][key[1]]
        rs, cs = key
        rows = range(self.rows)[rs]
        cols = range(self.cols)[cs]
        return Matrix([[self.data[i][j] for j in cols] for i in rows], self.zero, len(rows), len(cols))

    def split(self, d: int) -> tuple:
        """The blocks (A, B, C, D) for the splitting h = d + (h - d)."""
        return self[:d, :d], self[:d, d:], self[d:, :d], self[d:, d:]

    def entries(self):
        for i, row in enumerate(self.data):
            for j, x in enumerate(row):
                yield i, j, x

    def map(self, fn, zero) -> "Matrix":
        return Matrix([[fn(x) for x in row] for row in self.data], zero, self.rows, self.cols)

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.data)) if self.rows else [], self.zero, self.cols, self.rows)

    def tolist(self) -> list:
        return [list(r) for r in self.data]

    # -- arithmetic -----------------------------------------------------------

    def _same_shape(self, o):
        if self.shape != o.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {o.shape}")

    def __add__(self, o: "Matrix") -> "Matrix":
        self._same_shape(o)
        return Matrix([[x + y for x, y in zip(r, s)] for r, s in zip(self.data, o.data)],
                      self.zero, self.rows, self.cols)

    def __sub__(self, o: "Matrix") -> "Matrix":
        self._same_shape(o)
        return Matrix([[x - y for x, y in zip(r, s)] for r, s in zip(self.data, o.data)],
                      self.zero, self.rows, self.cols)

    def __neg__(self) -> "Matrix":
        return self.map(lambda x: -x, self.zero)

    def __matmul__(self, o: "Matrix") -> "Matrix":
        return self.matmul(o, o.zero)

    def matmul(self, o: "Matrix", z) -> "Matrix":
        """Product with an explicit zero for the result's entries."""
        if self.cols != o.rows:
            raise ValueError(f"cannot multiply {self.shape} by {o.shape}")
        cols = list(zip(*o.data)) if o.rows else [()] * o.cols
        out = []
        for row in self.data:
            out_row = []
            for col in cols:
                acc = z
                for x, y in zip(row, col):
                    acc = acc + x * y
                out_row.append(acc)
            out.append(out_row)
        return Matrix(out, z, self.rows, o.cols)

    def scale(self, c) -> "Matrix":
        """Left multiplication of every entry by the scalar ``c``."""
        return self.map(lambda x: c * x, self.zero)

    def __eq__(self, o) -> bool:
        return isinstance(o, Matrix) and self.shape == o.shape and self.data == o.data

    def __hash__(self):
        return hash(self.data)

    def first_difference(self, o: "Matrix"):
        """The first (row, col) where the two matrices differ, or None."""
        self._same_shape(o)
        for i, j, x in self.entries():
            if x != o.data[i][j]:
                return i, j
        return None

    def __repr__(self):
        return "Matrix(" + repr([list(r) for r in self.data]) + ")"


# -- determinants over a finite ring -----------------------------------------


def _perm_sign(perm) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def ring_det(R: FiniteRing, rows) -> int:
    """Determinant of a square matrix of encoded elements of R (Leibniz)."""
    h = len(rows)
    acc = 0
    for perm in itertools.permutations(range(h)):
        term = R.one
        for i, j in enumerate(perm):
            term = R.mul(term, rows[i][j])
            if term == 0:
                break
        if term:
            acc = R.add(acc, term) if _perm_sign(perm) > 0 else R.sub(acc, term)
    return acc


def ring_inverse(R: FiniteRing, rows) -> list:
    """Inverse of an invertible matrix over R by the adjugate; raises NotAUnit."""
    h = len(rows)
    if h == 0:
        return []
    u = unit_inverse(R, ring_det(R, rows))
    out = [[0] * h for _ in range(h)]
    for i in range(h):
        for j in range(h):
            minor = [[rows[r][c] for c in range(h) if c != i] for r in range(h) if r != j]
            cof = ring_det(R, minor) if minor else R.one
            if (i + j) % 2:
                cof = R.neg(cof)
            out[i][j] = R.mul(u, cof)
    return out


# -- matrices over W_n(R) --------------------------------------------------


def witt_matrix(W: WittRing, rows) -> Matrix:
    return Matrix([[x if isinstance(x, WittVector) else W(x) for x in r] for r in rows], W.zero,
                  len(rows), len(rows[0]) if rows else 0)


def witt_identity(W: WittRing, h: int) -> Matrix:
    return Matrix.identity(h, W.zero, W.one)


def ghost_matrix(M: Matrix, i: int) -> list:
    """w_i applied entrywise; the result holds encoded elements of R."""
    return [[x.ghost(i) for x in row] for row in M.data]


def witt_det_w0(M: Matrix) -> int:
    """w_0(det M) = det w_0(M) in R."""
    R = M.zero.W.R
    return ring_det(R, ghost_matrix(M, 0))


def witt_inverse(M: Matrix, max_steps: int = 64) -> Matrix:
    """Inverse in GL_h(W_n(R)): invert w_0(M) over R, then Newton-lift.

    Raises :class:`NotAUnit` when w_0(det M) is not a unit.
    """
    W = M.zero.W
    h = M.rows
    if M.cols != h:
        raise ValueError("only square matrices are invertible")
    if h == 0:
        return M
    inv0 = ring_inverse(W.R, ghost_matrix(M, 0))
    X = Matrix([[W.teichmuller(x) for x in row] for row in inv0], W.zero, h, h)
    one = witt_identity(W, h)
    two = one.scale(W.integer(2))
    for _ in range(max_steps):
        E = M @ X
        if E == one:
            return X
        X = X @ (two - E)
    raise ArithmeticError("Newton iteration did not converge")  # pragma: no cover


def witt_map(M: Matrix, W: WittRing, fn) -> Matrix:
    """Apply ``fn`` to each Witt vector entry, landing in ``W``."""
    return M.map(fn, W.zero)


def witt_restrict(M: Matrix, m: int) -> Matrix:
    W = witt_ring(M.zero.W.R, m)
    return M.map(lambda x: x.restrict(m), W.zero)


def witt_frobenius(M: Matrix) -> Matrix:
    W = witt_ring(M.zero.W.R, M.zero.W.n - 1)
    return M.map(lambda x: x.frobenius(), W.zero)


def witt_verschiebung(M: Matrix) -> Matrix:
    W = witt_ring(M.zero.W.R, M.zero.W.n + 1)
    return M.map(lambda x: x.verschiebung(), W.zero)


__all__ = [
    "Matrix", "NotAUnit", "ring_det", "ring_inverse", "witt_matrix", "witt_identity",
    "ghost_matrix", "witt_det_w0", "witt_inverse", "witt_map", "witt_restrict",
    "witt_frobenius", "witt_verschiebung",
]
