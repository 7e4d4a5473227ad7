"""Truncated displays in matrix form and their morphisms.

A truncated display of level n over R is an invertible block matrix
M = (A B; C D) over W_n(R) with A of size d x d and D of size c x c.  A
morphism to M' = (A' B'; C' D') consists of blocks X, Z, Y over 𝒲_n(R)
and 𝔍 over W_n(R) such that

    M' · (ᶠX 𝔍; p·ᶠZ ᶠY) = (Res X ⱽ𝔍̄; Res Z Res Y) · M,

where 𝔍̄ is 𝔍 restricted to length n-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .cwitt import CWitt, CWittRing, cwitt_ring
from .matrices import (Matrix, ghost_matrix, ring_det, witt_identity, witt_inverse)
from .rings import FiniteRing, NotAUnit, RingError, RingHom
from .witt import WittRing, WittVector, witt_ring


class DisplayError(ValueError):
    """A mathematically invalid display or morphism."""


# -- helpers on matrices of 𝒲_n and W_n entries --------------------------------


def cw_res(X: Matrix) -> Matrix:
    """Res applied entrywise: 𝒲_n -> W_n."""
    C = X.zero.C
    return X.map(lambda x: x.res, C.W.zero)


def cw_frob(X: Matrix) -> Matrix:
    """F applied entrywise: 𝒲_n -> W_n."""
    C = X.zero.C
    return X.map(lambda x: x.frob, C.W.zero)


def kappa_V(J: Matrix) -> Matrix:
    """κ(ⱽ𝔍) entrywise, W_n -> 𝒲_n."""
    W = J.zero.W
    C = cwitt_ring(W.R, W.n)
    return J.map(C.kappa_I, C.zero)


def v_bar(J: Matrix) -> Matrix:
    """ⱽ𝔍̄: restrict to length n-1, then shift back into W_n."""
    W = J.zero.W
    return J.map(lambda x: WittVector(W, (0,) + x.coords[:-1]), W.zero)


def cw_matrix(C: CWittRing, rows, nrows=None, ncols=None) -> Matrix:
    return Matrix([[x if isinstance(x, CWitt) else C.project(x) for x in r] for r in rows],
                  C.zero, nrows, ncols)


def cw_identity(C: CWittRing, h: int) -> Matrix:
    return Matrix.identity(h, C.zero, C.one)


def witt_scalar(M: Matrix, c: int) -> Matrix:
    W = M.zero.W
    return M.scale(W.integer(c))


# -- objects -------------------------------------------------------------------


class TruncatedDisplay:
    """An object of the matrix category of truncated displays of level n."""

    def __init__(self, R: FiniteRing, n: int, d: int, c: int, M: Matrix):
        if n < 1:
            raise RingError("level must be at least 1")
        if d < 0 or c < 0:
            raise RingError("block sizes must be non-negative")
        self.R, self.n, self.d, self.c = R, n, d, c
        self.W = witt_ring(R, n)
        if M.shape != (d + c, d + c):
            raise RingError(f"matrix must be {d + c} x {d + c}")
        for _, _, x in M.entries():
            if not isinstance(x, WittVector) or x.W is not self.W:
                raise RingError(f"matrix entries must lie in {self.W}")
        self.M = M
        if not R.is_unit(ring_det(R, ghost_matrix(M, 0))):
            raise DisplayError("matrix is not invertible: w_0(det M) is not a unit")
        self.Mi = witt_inverse(M)

    @property
    def h(self) -> int:
        return self.d + self.c

    @property
    def blocks(self) -> tuple:
        return self.M.split(self.d)

    @property
    def inverse_blocks(self) -> tuple:
        return self.Mi.split(self.d)

    @cached_property
    def C(self) -> CWittRing:
        return cwitt_ring(self.R, self.n)

    def __eq__(self, o):
        return (isinstance(o, TruncatedDisplay) and o.R is self.R and o.n == self.n
                and o.d == self.d and o.c == self.c and o.M == self.M)

    def __hash__(self):
        return hash((self.n, self.d, self.c, self.M))

    def __repr__(self):
        return f"TruncatedDisplay(n={self.n}, d={self.d}, c={self.c}, M={self.M!r})"


def display_make(R: FiniteRing, n: int, d: int, c: int, M) -> TruncatedDisplay:
    """Validate and build a display; ``M`` is a Matrix or nested coordinate lists."""
    if not isinstance(M, Matrix):
        W = witt_ring(R, n)
        M = Matrix([[x if isinstance(x, WittVector) else W(x) for x in row] for row in M],
                   W.zero, d + c, d + c)
    return TruncatedDisplay(R, n, d, c, M)


def multiplicative_display(R: FiniteRing, n: int) -> TruncatedDisplay:
    W = witt_ring(R, n)
    return TruncatedDisplay(R, n, 1, 0, witt_identity(W, 1))


def etale_display(R: FiniteRing, n: int) -> TruncatedDisplay:
    W = witt_ring(R, n)
    return TruncatedDisplay(R, n, 0, 1, witt_identity(W, 1))


def supersingular_display(R: FiniteRing, n: int) -> TruncatedDisplay:
    """d = c = 1 with M = ((0, 1), (1, 0))."""
    W = witt_ring(R, n)
    return TruncatedDisplay(R, n, 1, 1, Matrix([[W.zero, W.one], [W.one, W.zero]], W.zero))


# -- morphisms -----------------------------------------------------------------


@dataclass
class DisplayMorphism:
    source: TruncatedDisplay
    target: TruncatedDisplay
    X: Matrix  # d' x d over 𝒲_n
    J: Matrix  # d' x c over W_n
    Z: Matrix  # c' x d over 𝒲_n
    Y: Matrix  # c' x c over 𝒲_n

    def __post_init__(self):
        P, Q = self.source, self.target
        want = {"X": (Q.d, P.d), "J": (Q.d, P.c), "Z": (Q.c, P.d), "Y": (Q.c, P.c)}
        for name, shape in want.items():
            if getattr(self, name).shape != shape:
                raise RingError(f"block {name} has shape {getattr(self, name).shape}, expected {shape}")
        if P.R is not Q.R or P.n != Q.n:
            raise RingError("source and target live over different rings or levels")

    def __eq__(self, o):
        return (isinstance(o, DisplayMorphism) and self.source == o.source and self.target == o.target
                and self.X == o.X and self.J == o.J and self.Z == o.Z and self.Y == o.Y)

    def p_map(self) -> Matrix:
        """The induced map P -> P' as the 𝒲_n-matrix (X κ(ⱽ𝔍); Z Y)."""
        return Matrix.block(self.X, kappa_V(self.J), self.Z, self.Y)

    def lhs_rhs(self) -> tuple:
        """Both sides of the morphism relation."""
        P, Q = self.source, self.target
        p = P.R.p
        N = Matrix.block(cw_frob(self.X), self.J, witt_scalar(cw_frob(self.Z), p), cw_frob(self.Y))
        K = Matrix.block(cw_res(self.X), v_bar(self.J), cw_res(self.Z), cw_res(self.Y))
        return Q.M @ N, K @ P.M


@dataclass
class Validation:
    ok: bool
    entry: tuple | None = None
    lhs: object = None
    rhs: object = None
    message: str = ""
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def morphism_validate(alpha: DisplayMorphism) -> Validation:
    lhs, rhs = alpha.lhs_rhs()
    bad = lhs.first_difference(rhs)
    if bad is not None:
        i, j = bad
        return Validation(False, bad, lhs[i, j], rhs[i, j],
                          f"morphism relation fails at entry ({i}, {j})")
    # the P-map determines 𝔍: recover it and compare
    J = reconstruct_J(alpha.source, alpha.target, alpha.p_map())
    if J != alpha.J:  # pragma: no cover - impossible once the relation holds
        return Validation(False, None, message="𝔍 is not recovered from the induced map")
    return Validation(True, details={"p_map": alpha.p_map()})


def reconstruct_J(P: TruncatedDisplay, Q: TruncatedDisplay, p_map: Matrix) -> Matrix:
    """Recover 𝔍 from the induced map (X κ(ⱽ𝔍); Z Y).

    Only the Res-components of the induced map are used: 𝔍 is the upper right
    block of M'^{-1} · Res(p_map) · M.
    """
    K = cw_res(p_map)
    N = Q.Mi @ K @ P.M
    return N[:Q.d, P.d:]


def identity_morphism(P: TruncatedDisplay) -> DisplayMorphism:
    C, W = P.C, P.W
    return DisplayMorphism(P, P, cw_identity(C, P.d), Matrix.zeros(P.d, P.c, W.zero),
                           Matrix.zeros(P.c, P.d, C.zero), cw_identity(C, P.c))


def morphism_compose(a2: DisplayMorphism, a1: DisplayMorphism) -> DisplayMorphism:
    """a2 ∘ a1."""
    if a1.target != a2.source:
        raise RingError("morphisms are not composable")
    X = a2.X @ a1.X + kappa_V(a2.J) @ a1.Z
    J = cw_frob(a2.X) @ a1.J + a2.J @ cw_frob(a1.Y)
    Z = a2.Z @ a1.X + a2.Y @ a1.Z
    Y = a2.Z @ kappa_V(a1.J) + a2.Y @ a1.Y
    return DisplayMorphism(a1.source, a2.target, X, J, Z, Y)


def transport_display(P: TruncatedDisplay, X: Matrix, J: Matrix, Z: Matrix, Y: Matrix):
    """The display P' = K·M·N^{-1} and the isomorphism P -> P' given by the blocks."""
    p = P.R.p
    N = Matrix.block(cw_frob(X), J, witt_scalar(cw_frob(Z), p), cw_frob(Y))
    K = Matrix.block(cw_res(X), v_bar(J), cw_res(Z), cw_res(Y))
    R = P.R
    for name, mat in (("(ᶠX 𝔍; pᶠZ ᶠY)", N), ("(Res X ⱽ𝔍̄; Res Z Res Y)", K)):
        if not R.is_unit(ring_det(R, ghost_matrix(mat, 0))):
            raise DisplayError(f"block matrix {name} is not invertible")
    Mp = K @ P.M @ witt_inverse(N)
    Q = TruncatedDisplay(R, P.n, P.d, P.c, Mp)
    return Q, DisplayMorphism(P, Q, X, J, Z, Y)


# -- random data for experiments -------------------------------------------------


def random_witt_matrix(W: WittRing, rows: int, cols: int, rng) -> Matrix:
    return Matrix.filled(rows, cols, lambda i, j: W.random(rng), W.zero)


def random_cw_matrix(C: CWittRing, rows: int, cols: int, rng) -> Matrix:
    return Matrix.filled(rows, cols, lambda i, j: C.project(C.W1.random(rng)), C.zero)


def random_display(R: FiniteRing, n: int, d: int, c: int, rng, tries: int = 1000) -> TruncatedDisplay:
    W = witt_ring(R, n)
    for _ in range(tries):
        M = random_witt_matrix(W, d + c, d + c, rng)
        if R.is_unit(ring_det(R, ghost_matrix(M, 0))):
            return TruncatedDisplay(R, n, d, c, M)
    raise DisplayError("could not sample an invertible matrix")


def random_isomorphism(P: TruncatedDisplay, rng, tries: int = 1000):
    """A random isomorphism out of P, via :func:`transport_display`."""
    C, W = P.C, P.W
    for _ in range(tries):
        X = random_cw_matrix(C, P.d, P.d, rng)
        Y = random_cw_matrix(C, P.c, P.c, rng)
        Z = random_cw_matrix(C, P.c, P.d, rng)
        J = random_witt_matrix(W, P.d, P.c, rng)
        try:
            return transport_display(P, X, J, Z, Y)
        except DisplayError:
            continue
    raise DisplayError("could not sample an invertible block matrix")


# -- F, Ḟ and V♯ -------------------------------------------------------------------


def F_eval(P: TruncatedDisplay, v: Matrix) -> Matrix:
    """F(t; ℓ) = (A pB; C pD)(ᶠt; ᶠℓ) for a column v over 𝒲_n."""
    if v.shape != (P.h, 1):
        raise RingError(f"vector must have {P.h} entries")
    A, B, C, D = P.blocks
    p = P.R.p
    Mp = Matrix.block(A, witt_scalar(B, p), C, witt_scalar(D, p))
    return Mp @ cw_frob(v)


def Fdot_eval(P: TruncatedDisplay, eta: Matrix, ell: Matrix) -> Matrix:
    """Ḟ(ⱽη; ℓ) = M(η; ᶠℓ); η is a d-column over W_n, ℓ a c-column over 𝒲_n."""
    if eta.shape != (P.d, 1) or ell.shape != (P.c, 1):
        raise RingError("vector shapes do not match the display")
    col = Matrix(eta.data + cw_frob(ell).data, P.W.zero, P.h, 1)
    return P.M @ col


def iota(P: TruncatedDisplay, eta: Matrix, ell: Matrix) -> Matrix:
    """ι(ⱽη; ℓ) = (κ(ⱽη); ℓ) in P."""
    return Matrix(kappa_V(eta).data + ell.data, P.C.zero, P.h, 1)


def vsharp_matrix(P: TruncatedDisplay) -> Matrix:
    """diag(p·1_d, 1_c) · M^{-1}."""
    W = P.W
    pw = W.integer(P.R.p)
    diag = Matrix.filled(P.h, P.h, lambda i, j: (pw if i < P.d else W.one) if i == j else W.zero, W.zero)
    return diag @ P.Mi


# -- nilpotence ------------------------------------------------------------------


def twisted_power(R: FiniteRing, rows, k: int) -> list:
    """Entrywise p^k-th power."""
    e = R.p ** k
    return [[R.pow(x, e) for x in row] for row in rows]


def ring_matmul(R: FiniteRing, A, B) -> list:
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[R.sum(R.mul(A[i][k], B[k][j]) for k in range(inner)) for j in range(cols)]
            for i in range(len(A))]


def default_order_bound(P: TruncatedDisplay) -> int:
    return max(1, 2 * P.c * P.R.t)


class NotNilpotent(Exception):
    """No nilpotence order within the supplied bound."""


def nilpotence_order(P: TruncatedDisplay, bound: int | None = None) -> int:
    """Least e with D̂^{(p^{e-1})}···D̂^{(p)}·D̂ = 0 over R/pR (D̂ = w_0(D̆)).

    Raises :class:`NotNilpotent` if no e <= bound works.
    """
    if P.c == 0:
        return 0
    bound = default_order_bound(P) if bound is None else bound
    R = P.R
    pR = frozenset(R.scale(R.p, x) for x in R.elements())
    Dh = ghost_matrix(P.inverse_blocks[3], 0)
    prod = [[R.one if i == j else 0 for j in range(P.c)] for i in range(P.c)]
    for e in range(1, bound + 1):
        prod = ring_matmul(R, twisted_power(R, Dh, e - 1), prod)
        if all(x in pR for row in prod for x in row):
            return e
    raise NotNilpotent(f"not nilpotent within bound {bound}")


# -- truncation, base change, direct sums ---------------------------------------------


def _truncate_matrix(M: Matrix, m: int) -> Matrix:
    W = witt_ring(M.zero.W.R, m)
    return M.map(lambda x: WittVector(W, x.coords[:m]), W.zero)


def _truncate_cw(M: Matrix, m: int) -> Matrix:
    C = cwitt_ring(M.zero.C.R, m)
    return M.map(lambda x: CWitt(C, x.rep[:m + 1]), C.zero)


def truncate(obj, m: int):
    """Truncation to level m <= n of a display or morphism."""
    if isinstance(obj, TruncatedDisplay):
        if not 1 <= m <= obj.n:
            raise RingError(f"cannot truncate level {obj.n} to {m}")
        if m == obj.n:
            return obj
        return TruncatedDisplay(obj.R, m, obj.d, obj.c, _truncate_matrix(obj.M, m))
    if isinstance(obj, DisplayMorphism):
        if m == obj.source.n:
            return obj
        return DisplayMorphism(truncate(obj.source, m), truncate(obj.target, m),
                               _truncate_cw(obj.X, m), _truncate_matrix(obj.J, m),
                               _truncate_cw(obj.Z, m), _truncate_cw(obj.Y, m))
    raise TypeError("expected a display or a morphism")


def _bc_matrix(M: Matrix, phi: RingHom) -> Matrix:
    W = witt_ring(phi.target, M.zero.W.n)
    return M.map(lambda x: WittVector(W, tuple(phi(a) for a in x.coords)), W.zero)


def _bc_cw(M: Matrix, phi: RingHom) -> Matrix:
    C = cwitt_ring(phi.target, M.zero.C.n)
    return M.map(lambda x: CWitt(C, tuple(phi(a) for a in x.rep)), C.zero)


def base_change(obj, phi: RingHom):
    """Base change of a display or morphism along phi: R -> S."""
    if isinstance(obj, TruncatedDisplay):
        if phi.source is not obj.R:
            raise RingError("homomorphism does not start at the base ring")
        return TruncatedDisplay(phi.target, obj.n, obj.d, obj.c, _bc_matrix(obj.M, phi))
    if isinstance(obj, DisplayMorphism):
        return DisplayMorphism(base_change(obj.source, phi), base_change(obj.target, phi),
                               _bc_cw(obj.X, phi), _bc_matrix(obj.J, phi),
                               _bc_cw(obj.Z, phi), _bc_cw(obj.Y, phi))
    raise TypeError("expected a display or a morphism")


def direct_sum(P1: TruncatedDisplay, P2: TruncatedDisplay) -> TruncatedDisplay:
    """Block-diagonal sum with the ordering (T1 ⊕ T2, L1 ⊕ L2)."""
    if P1.R is not P2.R or P1.n != P2.n:
        raise RingError("direct sums need the same ring and level")
    W = P1.W
    A1, B1, C1, D1 = P1.blocks
    A2, B2, C2, D2 = P2.blocks
    diag = Matrix.diagonal_blocks
    M = Matrix.block(diag(A1, A2), diag(B1, B2), diag(C1, C2), diag(D1, D2))
    return TruncatedDisplay(P1.R, P1.n, P1.d + P2.d, P1.c + P2.c, M)


__all__ = [
    "DisplayError", "TruncatedDisplay", "DisplayMorphism", "Validation", "NotNilpotent",
    "display_make", "multiplicative_display", "etale_display", "supersingular_display",
    "morphism_validate", "reconstruct_J", "identity_morphism", "morphism_compose",
    "transport_display", "random_display", "random_isomorphism", "F_eval", "Fdot_eval", "iota",
    "vsharp_matrix", "nilpotence_order", "truncate", "base_change", "direct_sum",
    "cw_res", "cw_frob", "kappa_V", "v_bar", "cw_matrix", "cw_identity",
]
