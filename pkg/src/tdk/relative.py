"""Relative truncated displays for a square-zero thickening S -> R and lifting.

Objects are invertible matrices over W_n(S); a morphism has blocks X, Z, Y
over 𝒲_n(S) and J over 𝒥_{n+1} = 𝔞̃ ⊕ I_{n+1}(S) satisfying

    M' · (σX σ̇J; pσZ σY) = (X̄ J̄; Z̄ Ȳ) · M.

The lifting solver finds, for two lifts of the same display over R (or for
a lift of a given morphism over R), the morphisms 1 + H whose deviation H
has entries in the kernel of 𝒲_n(S) -> 𝒲_n(R) resp. in W_{n+1}(𝔞).  In
logarithmic coordinates H is a sequence of matrices H(0), ..., H(n) over 𝔞
determined by H(n) through a backward recursion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .cwitt import CWitt, JElement, cwitt_ring, j_zero, kernel_cwitt
from .display import (DisplayMorphism, NotNilpotent, TruncatedDisplay, Validation, base_change,
                      cw_frob, cw_identity, cw_res, nilpotence_order, witt_scalar)
from .matrices import Matrix, ghost_matrix
from .rings import FiniteRing, PdThickening, RingError, RingHom
from .witt import WittVector, witt_ring


class LiftError(ValueError):
    """The data do not satisfy the hypotheses of the lifting problem."""


# -- relative displays -----------------------------------------------------------


class RelDisplay:
    """A relative truncated display for ``th``: a display matrix over W_n(S)."""

    def __init__(self, th: PdThickening, display: TruncatedDisplay):
        if display.R is not th.S:
            raise RingError("relative displays live over the thickening's source ring")
        self.th = th
        self.display = display

    n = property(lambda self: self.display.n)
    d = property(lambda self: self.display.d)
    c = property(lambda self: self.display.c)
    h = property(lambda self: self.display.h)
    M = property(lambda self: self.display.M)
    Mi = property(lambda self: self.display.Mi)
    S = property(lambda self: self.th.S)

    def __eq__(self, o):
        return isinstance(o, RelDisplay) and o.th is self.th and o.display == self.display

    def __hash__(self):
        return hash(self.display)

    def __repr__(self):
        return f"RelDisplay({self.display!r})"


def rel_display_make(th: PdThickening, n: int, d: int, c: int, M) -> RelDisplay:
    from .display import display_make

    return RelDisplay(th, display_make(th.S, n, d, c, M))


def coordinate_lift(th: PdThickening, P: TruncatedDisplay) -> RelDisplay:
    """Lift every Witt coordinate along the thickening's fixed section."""
    if P.R is not th.R:
        raise RingError("display does not live over the thickening's target ring")
    W = witt_ring(th.S, P.n)
    M = P.M.map(lambda x: WittVector(W, tuple(th.lift(a) for a in x.coords)), W.zero)
    return RelDisplay(th, TruncatedDisplay(th.S, P.n, P.d, P.c, M))


# -- relative morphisms ----------------------------------------------------------------


def _kappa_J(J: Matrix, C) -> Matrix:
    return J.map(lambda j: j.kappa(), C.zero)


def _bar_J(J: Matrix, W) -> Matrix:
    return J.map(lambda j: j.bar(), W.zero)


def _sigma_dot_J(J: Matrix, W) -> Matrix:
    return J.map(lambda j: j.eta, W.zero)


@dataclass
class RelMorphism:
    source: RelDisplay
    target: RelDisplay
    X: Matrix  # d' x d over 𝒲_n(S)
    J: Matrix  # d' x c over 𝒥_{n+1}
    Z: Matrix  # c' x d over 𝒲_n(S)
    Y: Matrix  # c' x c over 𝒲_n(S)

    def __post_init__(self):
        P, Q = self.source, self.target
        want = {"X": (Q.d, P.d), "J": (Q.d, P.c), "Z": (Q.c, P.d), "Y": (Q.c, P.c)}
        for name, shape in want.items():
            if getattr(self, name).shape != shape:
                raise RingError(f"block {name} has shape {getattr(self, name).shape}, expected {shape}")
        if P.th is not Q.th or P.n != Q.n:
            raise RingError("source and target belong to different thickenings or levels")

    @property
    def th(self) -> PdThickening:
        return self.source.th

    def __eq__(self, o):
        return (isinstance(o, RelMorphism) and self.source == o.source and self.target == o.target
                and self.X == o.X and self.J == o.J and self.Z == o.Z and self.Y == o.Y)

    def p_map(self) -> Matrix:
        """The induced map P -> P' as the 𝒲_n(S)-matrix (X κ(J); Z Y)."""
        C = cwitt_ring(self.th.S, self.source.n)
        return Matrix.block(self.X, _kappa_J(self.J, C), self.Z, self.Y)

    def lhs_rhs(self) -> tuple:
        P, Q = self.source, self.target
        W = P.display.W
        p = P.th.p
        N = Matrix.block(cw_frob(self.X), _sigma_dot_J(self.J, W),
                         witt_scalar(cw_frob(self.Z), p), cw_frob(self.Y))
        K = Matrix.block(cw_res(self.X), _bar_J(self.J, W), cw_res(self.Z), cw_res(self.Y))
        return Q.M @ N, K @ P.M


def rel_morphism_validate(alpha: RelMorphism) -> Validation:
    lhs, rhs = alpha.lhs_rhs()
    bad = lhs.first_difference(rhs)
    if bad is not None:
        i, j = bad
        return Validation(False, bad, lhs[i, j], rhs[i, j], f"relation fails at entry ({i}, {j})")
    return Validation(True, details={"p_map": alpha.p_map()})


def rel_reconstruct_J(P: RelDisplay, Q: RelDisplay, p_map: Matrix) -> Matrix:
    """Recover J from the induced map (X κ(J); Z Y) of a valid morphism.

    κ(J) gives J̄; the relation then gives σ̇(J) as the upper right block of
    M'^{-1} (X̄ J̄; Z̄ Ȳ) M, and J = (first coordinate of J̄)~ + ⱽσ̇(J).
    """
    K = cw_res(p_map)
    N = Q.Mi @ K @ P.M
    sd = N[:Q.d, P.d:]
    Jbar = K[:Q.d, P.d:]
    return Matrix.filled(Q.d, P.c, lambda i, j: JElement(P.th, Jbar[i, j].coords[0], sd[i, j]),
                         j_zero(P.th, P.n))


def rel_identity(P: RelDisplay) -> RelMorphism:
    C = cwitt_ring(P.S, P.n)
    jz = j_zero(P.th, P.n)
    return RelMorphism(P, P, cw_identity(C, P.d), Matrix.zeros(P.d, P.c, jz),
                       Matrix.zeros(P.c, P.d, C.zero), cw_identity(C, P.c))


def rel_compose(a2: RelMorphism, a1: RelMorphism) -> RelMorphism:
    """a2 ∘ a1 = (X'X + κ(J')Z, X'J + J'Y, Z'X + Y'Z, Z'κ(J) + Y'Y)."""
    if a1.target != a2.source:
        raise RingError("morphisms are not composable")
    th, n = a1.th, a1.source.n
    C = cwitt_ring(th.S, n)
    jz = j_zero(th, n)
    X = a2.X @ a1.X + _kappa_J(a2.J, C) @ a1.Z
    J = a2.X.matmul(a1.J, jz) + a2.J.matmul(a1.Y, jz)
    Z = a2.Z @ a1.X + a2.Y @ a1.Z
    Y = a2.Z @ _kappa_J(a1.J, C) + a2.Y @ a1.Y
    return RelMorphism(a1.source, a2.target, X, J, Z, Y)


def rel_truncate(obj, m: int):
    """Truncation to level m of a relative display or morphism."""
    from .display import truncate

    if isinstance(obj, RelDisplay):
        return RelDisplay(obj.th, truncate(obj.display, m))
    if isinstance(obj, RelMorphism):
        th = obj.th
        C = cwitt_ring(th.S, m)
        W = witt_ring(th.S, m)
        cw = lambda X: X.map(lambda x: CWitt(C, x.rep[:m + 1]), C.zero)
        J = obj.J.map(lambda j: JElement(th, j.a, WittVector(W, j.eta.coords[:m])), j_zero(th, m))
        return RelMorphism(rel_truncate(obj.source, m), rel_truncate(obj.target, m),
                           cw(obj.X), J, cw(obj.Z), cw(obj.Y))
    raise TypeError("expected a relative display or morphism")


# -- change of category ------------------------------------------------------------------


def absolute_to_relative(obj, th: PdThickening):
    """A display or morphism over S viewed relative to S -> R (J = ⱽ𝔍)."""
    if isinstance(obj, TruncatedDisplay):
        return RelDisplay(th, obj)
    if isinstance(obj, DisplayMorphism):
        jz = j_zero(th, obj.source.n)
        J = obj.J.map(lambda x: JElement(th, 0, x), jz)
        return RelMorphism(RelDisplay(th, obj.source), RelDisplay(th, obj.target), obj.X, J, obj.Z, obj.Y)
    raise TypeError("expected a display or morphism over S")


def reduce_to_R(obj):
    """A relative display or morphism reduced along S -> R."""
    if isinstance(obj, RelDisplay):
        return base_change(obj.display, obj.th.surjection)
    if isinstance(obj, RelMorphism):
        th = obj.th
        phi = th.surjection
        n = obj.source.n
        C = cwitt_ring(th.R, n)
        W = witt_ring(th.R, n)
        cw = lambda X: X.map(lambda x: CWitt(C, tuple(phi(a) for a in x.rep)), C.zero)
        J = obj.J.map(lambda j: WittVector(W, tuple(phi(a) for a in j.eta.coords)), W.zero)
        return DisplayMorphism(reduce_to_R(obj.source), reduce_to_R(obj.target),
                               cw(obj.X), J, cw(obj.Z), cw(obj.Y))
    raise TypeError("expected a relative display or morphism")


def lift_absolute_morphism(th: PdThickening, alpha: DisplayMorphism, P: RelDisplay,
                           Q: RelDisplay) -> RelMorphism:
    """An entrywise lift of a morphism over R (not yet satisfying the relation)."""
    S, n = th.S, alpha.source.n
    C = cwitt_ring(S, n)
    W = witt_ring(S, n)
    cw = lambda X: X.map(lambda x: CWitt(C, tuple(th.lift(a) for a in x.rep)), C.zero)
    J = alpha.J.map(lambda x: JElement(th, 0, WittVector(W, tuple(th.lift(a) for a in x.coords))),
                    j_zero(th, n))
    return RelMorphism(P, Q, cw(alpha.X), J, cw(alpha.Z), cw(alpha.Y))


# -- vectorised ring arithmetic for the solver ----------------------------------------------


class _Tables:
    """Dense arithmetic of S for the array-based recursion."""

    def __init__(self, S: FiniteRing, n: int):
        self.S = S
        self.p = S.p
        self.add = S.add_table
        self.mul = S.mul_table
        self.neg = S.neg_table
        elems = np.arange(S.size)
        self.scale = [elems]  # scale[k][x] = p^k x
        for _ in range(2 * n + 2):
            self.scale.append(self.add[self.scale[-1], self.scale[-1]] if self.p == 2 else
                              self._times_p(self.scale[-1]))
        maxe = S.p ** max(n - 1, 0)
        pw = np.empty((S.size, maxe + 1), dtype=np.int64)
        pw[:, 0] = S.one
        for e in range(1, maxe + 1):
            pw[:, e] = self.mul[pw[:, e - 1], elems]
        self.pow = pw

    def _times_p(self, x):
        acc = np.zeros_like(x)
        for _ in range(self.p):
            acc = self.add[acc, x]
        return acc

    def matmul(self, A, B):
        shape = np.broadcast_shapes(A.shape[:-2], B.shape[:-2]) + (A.shape[-2], B.shape[-1])
        out = np.zeros(shape, dtype=np.int64)
        for k in range(A.shape[-1]):
            out = self.add[out, self.mul[A[..., :, k][..., :, None], B[..., k, :][..., None, :]]]
        return out

    def ghost(self, coords, i):
        """w_i on an array whose last axis holds Witt coordinates."""
        p = self.p
        acc = np.zeros(coords.shape[:-1], dtype=np.int64)
        for j in range(i + 1):
            acc = self.add[acc, self.scale[j][self.pow[coords[..., j], p ** (i - j)]]]
        return acc


def _witt_array(M: Matrix) -> np.ndarray:
    """Witt matrix -> integer array (rows, cols, n)."""
    n = M.zero.W.n
    return np.array([[x.coords for x in row] for row in M.data], dtype=np.int64).reshape(M.rows, M.cols, n)


def _scaling_exponents(dT: int, dS: int, rows: int, cols: int, top: bool) -> np.ndarray:
    """Powers of p multiplying the blocks of H(i+1) in the recursion.

    For i <= n-2 the blocks X, J, Z, Y are scaled by p, 1, p^2, p; for
    i = n-1 by 1, 1, p, 1.
    """
    E = np.zeros((rows, cols), dtype=np.int64)
    for r in range(rows):
        for c in range(cols):
            tr, tc = r < dT, c < dS
            if tr and tc:
                E[r, c] = 0 if top else 1
            elif tr:
                E[r, c] = 0
            elif tc:
                E[r, c] = 1 if top else 2
            else:
                E[r, c] = 0 if top else 1
    return E


def _solve_core(T: _Tables, n: int, dT: int, dS: int, delta, wMp, wMi, seed):
    """Backward recursion H(i) = (δ(i) + w_i(M')·G(i+1))·w_i(M̆).

    ``delta`` has shape (..., n, rows, cols); ``wMp`` (..., n, rows, rows);
    ``wMi`` (..., n, cols, cols); ``seed`` (..., rows, cols).  Returns the
    list H(0), ..., H(n).
    """
    rows, cols = seed.shape[-2:]
    H = [None] * (n + 1)
    H[n] = seed
    for i in range(n - 1, -1, -1):
        E = _scaling_exponents(dT, dS, rows, cols, top=(i == n - 1))
        G = H[i + 1].copy()
        for k in (1, 2):
            mask = E == k
            if mask.any():
                G[..., mask] = T.scale[k][G[..., mask]]
        inner = T.add[delta[..., i, :, :], T.matmul(wMp[..., i, :, :], G)]
        H[i] = T.matmul(inner, wMi[..., i, :, :])
    return H


# -- the lifting solver -----------------------------------------------------------------------


@dataclass
class LiftSolution:
    source: RelDisplay
    target: RelDisplay
    H: list  # H(0..n) as integer arrays over S
    morphism: RelMorphism
    constraints: dict = field(default_factory=dict)

    @property
    def seed(self):
        return self.H[-1]


def seed_shapes(P: RelDisplay, Q: RelDisplay) -> dict:
    return {"X_n": (Q.d, P.d), "J_n": (Q.d, P.c), "Z_n": (Q.c, P.d), "Y_n": (Q.c, P.c)}


def random_seed(P: RelDisplay, Q: RelDisplay, seed: int) -> np.ndarray:
    """A random H(n): X, Y, Z entries in pS ∩ 𝔞, J entries in 𝔞."""
    th = P.th
    rng = np.random.default_rng(seed)
    pa = sorted(th.pS_cap_a)
    aa = sorted(th.kernel)
    H = np.zeros((Q.h, P.h), dtype=np.int64)
    for r in range(Q.h):
        for c in range(P.h):
            pool = aa if (r < Q.d and c >= P.d) else pa
            H[r, c] = pool[int(rng.integers(len(pool)))]
    return H


def seed_from_blocks(P: RelDisplay, Q: RelDisplay, blocks: dict) -> np.ndarray:
    """Assemble H(n) from the blocks X_n, J_n, Z_n, Y_n (missing blocks are 0)."""
    H = np.zeros((Q.h, P.h), dtype=np.int64)
    spans = {"X_n": (0, 0), "J_n": (0, P.d), "Z_n": (Q.d, 0), "Y_n": (Q.d, P.d)}
    for name, (r0, c0) in spans.items():
        shape = seed_shapes(P, Q)[name]
        block = blocks.get(name)
        if block is None:
            continue
        if len(block) != shape[0] or any(len(row) != shape[1] for row in block):
            raise LiftError(f"seed block {name} must have shape {shape}")
        for r, row in enumerate(block):
            for c, x in enumerate(row):
                H[r0 + r, c0 + c] = x if isinstance(x, int) else P.S.parse(x)
    return H


def check_seed(P: RelDisplay, Q: RelDisplay, H: np.ndarray):
    th = P.th
    for r in range(Q.h):
        for c in range(P.h):
            x = int(H[r, c])
            if r < Q.d and c >= P.d:
                if x not in th.kernel:
                    raise LiftError(f"seed entry ({r}, {c}) of J_n is not in 𝔞")
            elif x not in th.pS_cap_a:
                raise LiftError(f"seed entry ({r}, {c}) is not in pS ∩ 𝔞")


def _defect(alpha0: RelMorphism) -> np.ndarray:
    """Coordinates of M'·σ(α₀) - ᾱ₀·M, an element of W_n(𝔞)^{h' x h}."""
    lhs, rhs = alpha0.lhs_rhs()
    diff = lhs - rhs
    arr = _witt_array(diff)
    th = alpha0.th
    bad = [(i, j) for i, j, x in diff.entries() if any(not th.in_kernel(a) for a in x.coords)]
    if bad:
        raise LiftError(f"the data do not reduce compatibly over R (entry {bad[0]})")
    return np.moveaxis(arr, 2, 0)  # (n, rows, cols)


def _assemble(alpha0: RelMorphism, H: list) -> RelMorphism:
    P, Q = alpha0.source, alpha0.target
    th, n = P.th, P.n
    S = th.S
    W = witt_ring(S, n)

    def cw_entry(r, c, base):
        coords = tuple(int(H[i][r, c]) for i in range(n))
        return base + kernel_cwitt(th, coords, int(H[n][r, c]))

    X = Matrix.filled(Q.d, P.d, lambda r, c: cw_entry(r, c, alpha0.X[r, c]), alpha0.X.zero)
    Z = Matrix.filled(Q.c, P.d, lambda r, c: cw_entry(Q.d + r, c, alpha0.Z[r, c]), alpha0.Z.zero)
    Y = Matrix.filled(Q.c, P.c, lambda r, c: cw_entry(Q.d + r, P.d + c, alpha0.Y[r, c]), alpha0.Y.zero)

    def j_entry(r, c):
        cc = P.d + c
        log = JElement(th, int(H[0][r, cc]), WittVector(W, tuple(int(H[i][r, cc]) for i in range(1, n + 1))))
        return alpha0.J[r, c] + log

    J = Matrix.filled(Q.d, P.c, j_entry, alpha0.J.zero)
    return RelMorphism(P, Q, X, J, Z, Y)


def lift_solve(P: RelDisplay, Q: RelDisplay, seed=None, alpha_bar: DisplayMorphism | None = None) -> LiftSolution:
    """Solve for the morphism P -> Q lifting ``alpha_bar`` (default: the identity).

    ``seed`` is H(n): an integer array, a dict of blocks, an ``int`` (random
    seed for :func:`random_seed`) or None (zero).
    """
    if P.th is not Q.th or P.n != Q.n:
        raise LiftError("displays belong to different thickenings or levels")
    th, n = P.th, P.n
    if alpha_bar is None:
        if reduce_to_R(P) != reduce_to_R(Q):
            raise LiftError("the two displays do not have the same reduction over R")
        alpha0 = rel_identity(P)
        alpha0 = RelMorphism(P, Q, alpha0.X, alpha0.J, alpha0.Z, alpha0.Y)
    else:
        if alpha_bar.source != reduce_to_R(P) or alpha_bar.target != reduce_to_R(Q):
            raise LiftError("morphism does not go between the reductions")
        alpha0 = lift_absolute_morphism(th, alpha_bar, P, Q)
    if seed is None:
        H_n = np.zeros((Q.h, P.h), dtype=np.int64)
    elif isinstance(seed, (int, np.integer)):
        H_n = random_seed(P, Q, int(seed))
    elif isinstance(seed, dict):
        H_n = seed_from_blocks(P, Q, seed)
    else:
        H_n = np.asarray(seed, dtype=np.int64).reshape(Q.h, P.h)
    check_seed(P, Q, H_n)
    T = _Tables(th.S, n)
    delta = _defect(alpha0)
    wMp = np.array([ghost_matrix(Q.M, i) for i in range(n)], dtype=np.int64).reshape(n, Q.h, Q.h)
    wMi = np.array([ghost_matrix(P.Mi, i) for i in range(n)], dtype=np.int64).reshape(n, P.h, P.h)
    H = _solve_core(T, n, Q.d, P.d, delta, wMp, wMi, H_n)
    alpha = _assemble(alpha0, H)
    return LiftSolution(P, Q, [np.asarray(h) for h in H], alpha,
                        {"X_n, Y_n, Z_n": "in pS ∩ 𝔞", "J_n": "in 𝔞"})


def all_seeds(P: RelDisplay, Q: RelDisplay):
    """Every admissible H(n)."""
    th = P.th
    pa = sorted(th.pS_cap_a)
    aa = sorted(th.kernel)
    pools = [aa if (r < Q.d and c >= P.d) else pa for r in range(Q.h) for c in range(P.h)]
    for vals in itertools.product(*pools):
        yield np.array(vals, dtype=np.int64).reshape(Q.h, P.h)


# -- uniqueness of truncations -----------------------------------------------------------------


@dataclass
class UniquenessReport:
    ok: bool
    level: int
    first_difference: int | None
    message: str = ""

    def __bool__(self):
        return self.ok


def uniqueness_level(n: int, m: int, e: int) -> int:
    if not n > m * (e + 1) + 1:
        raise LiftError(f"need n > m(e+1)+1, got n = {n}, m = {m}, e = {e}")
    return n - m * (e + 1) - 1


def truncation_uniqueness_check(sol1: LiftSolution, sol2: LiftSolution, e: int, m: int) -> UniquenessReport:
    """H₁(i) = H₂(i) for i <= n - m(e+1) - 1, and the truncated morphisms agree."""
    n = sol1.source.n
    level = uniqueness_level(n, m, e)
    if sol1.source != sol2.source or sol1.target != sol2.target:
        raise LiftError("solutions belong to different lifting problems")
    first = next((i for i in range(n + 1) if not np.array_equal(sol1.H[i], sol2.H[i])), None)
    ok = first is None or first > level
    if ok and level >= 1:
        ok = rel_truncate(sol1.morphism, level) == rel_truncate(sol2.morphism, level)
    msg = "agree" if ok else f"H differs at index {first} <= {level}"
    return UniquenessReport(ok, level, first, msg)


# -- Δ matrices ----------------------------------------------------------------------------------


def delta_matrices(Pp: RelDisplay, P: RelDisplay, i: int) -> tuple:
    """(Δ'_i, Δ̆_i) as integer arrays over S."""
    n = P.n
    if not 0 <= i < n:
        raise ValueError(f"index {i} out of range for level {n}")
    S = P.S
    T = _Tables(S, n)
    wA = np.array(ghost_matrix(Pp.M, i), dtype=np.int64).reshape(Pp.h, Pp.h)
    wI = np.array(ghost_matrix(P.Mi, i), dtype=np.int64).reshape(P.h, P.h)
    Dp = wA.copy()
    Dp[:, Pp.d:] = T.scale[1][Dp[:, Pp.d:]]
    Db = wI.copy()
    Db[:P.d, :] = T.scale[1][Db[:P.d, :]]
    return Dp, Db


def _in_pkS(S: FiniteRing, arr, k: int) -> bool:
    pk = {S.scale(S.p ** k, x) for x in S.elements()}
    return all(int(x) in pk for x in np.ravel(arr))


def delta_product_check(P: RelDisplay, e: int, k_max: int | None = None) -> dict:
    """Every window of k(e+1) consecutive Δ̆ factors lies in p^k S.

    Returns a report with one entry per (k, start index).
    """
    n = P.n
    T = _Tables(P.S, n)
    Db = [delta_matrices(P, P, i)[1] for i in range(n)]
    results = []
    k = 1
    while k * (e + 1) <= n and (k_max is None or k <= k_max):
        width = k * (e + 1)
        for i in range(0, n - width + 1):
            prod = Db[i]
            for j in range(i + 1, i + width):
                prod = T.matmul(Db[j], prod)
            results.append({"k": k, "start": i, "ok": _in_pkS(P.S, prod, k)})
        k += 1
    return {"ok": all(r["ok"] for r in results), "windows": results}


# -- crystals ----------------------------------------------------------------------------------------


@dataclass
class CrystalModule:
    S: FiniteRing
    rank: int
    basis: list
    lift: RelDisplay
    reduction: RingHom

    def reduce_basis(self) -> list:
        """Images of the basis in R ⊗ P̄: the standard basis again."""
        return list(self.basis)


def _check_crystal_hypotheses(P: TruncatedDisplay, th: PdThickening, e: int):
    if th.R is not P.R:
        raise LiftError("thickening does not end at the display's ring")
    try:
        order = nilpotence_order(P, bound=e)
    except NotNilpotent:
        raise LiftError(f"display is not nilpotent of order <= {e}") from None
    uniqueness_level(P.n, th.m, e)
    return order


def crystal_eval(P: TruncatedDisplay, th: PdThickening, e: int, lift: RelDisplay | None = None) -> CrystalModule:
    """𝔻_P(S) = S ⊗ P̃ for a relative lift P̃ (default: the coordinate lift)."""
    _check_crystal_hypotheses(P, th, e)
    lift = coordinate_lift(th, P) if lift is None else lift
    if reduce_to_R(lift) != P:
        raise LiftError("the given lift does not reduce to the display")
    basis = [f"t{i}" for i in range(P.d)] + [f"l{j}" for j in range(P.c)]
    return CrystalModule(th.S, P.h, basis, lift, th.surjection)


def crystal_comparison(P: TruncatedDisplay, th: PdThickening, e: int, lift1: RelDisplay,
                       lift2: RelDisplay, seed=None) -> np.ndarray:
    """The matrix over S of 𝔻 computed via lift1 -> 𝔻 computed via lift2.

    It is S ⊗ (the P-map of the lifted identity), using w_0 ∘ Res: 𝒲_n(S) -> S.
    """
    _check_crystal_hypotheses(P, th, e)
    sol = lift_solve(lift1, lift2, seed)
    pm = sol.morphism.p_map()
    return np.array([[x.res_raw[0] for x in row] for row in pm.data], dtype=np.int64).reshape(P.h, P.h)


# -- Hodge filtration lifts ------------------------------------------------------------------------------


def hodge_lift_display(Prel: RelDisplay, Phi) -> TruncatedDisplay:
    """The display over S whose Hodge filtration is moved by Φ ∈ 𝔞^{d x c}.

    Replacing the inclusion of L by i - φ with φ(ℓ) = Φ̃ t changes the basis
    of P by ℓ = ℓ' + Φ̃ t, so the matrix becomes (1 Φ̃; 0 1)·M with Φ̃ the
    vectors (Φ_jk, 0, ..., 0).
    """
    th = Prel.th
    d, c, n = Prel.d, Prel.c, Prel.n
    Phi = np.asarray(Phi, dtype=np.int64).reshape(d, c)
    for x in Phi.ravel():
        if int(x) not in th.kernel:
            raise LiftError(f"{th.S.format(int(x))} does not lie in 𝔞")
    W = witt_ring(th.S, n)
    U = Matrix.filled(d + c, d + c, lambda i, j: (W.one if i == j else
                                                    WittVector(W, (int(Phi[i, j - d]),) + (0,) * (n - 1))
                                                    if (i < d <= j) else W.zero), W.zero)
    return TruncatedDisplay(th.S, n, d, c, U @ Prel.M)


def hodge_lifts(Prel: RelDisplay) -> list:
    """All Φ ∈ 𝔞^{d x c} with the displays they produce."""
    th = Prel.th
    aa = sorted(th.kernel)
    out = []
    for vals in itertools.product(aa, repeat=Prel.d * Prel.c):
        Phi = np.array(vals, dtype=np.int64).reshape(Prel.d, Prel.c)
        out.append((Phi, hodge_lift_display(Prel, Phi)))
    return out


def hodge_class(Pref: RelDisplay, target: RelDisplay, seed=None) -> np.ndarray:
    """The 𝔞-part J(0) of the lifted identity Pref -> target (the Hodge invariant)."""
    sol = lift_solve(Pref, target, seed)
    return sol.H[0][:Pref.d, Pref.d:]


def enumerate_matrix_lifts(th: PdThickening, P: TruncatedDisplay):
    """All matrices over W_n(S) reducing to P's matrix, as an array (N, h, h, n)."""
    n, h = P.n, P.h
    base = np.array([[th.lift(a) for a in x.coords] for row in P.M.data for x in row],
                    dtype=np.int64).reshape(h, h, n)
    aa = np.array(sorted(th.kernel), dtype=np.int64)
    k = h * h * n
    idx = np.indices((len(aa),) * k).reshape(k, -1).T
    offs = aa[idx].reshape(-1, h, h, n)
    return th.S.add_table[base[None], offs]


def hodge_classes_batch(Pref: RelDisplay, lifts: np.ndarray, seed=None) -> np.ndarray:
    """Hodge invariants J(0) of many lifts at once (array (N, d, c)).

    Uses the same recursion as :func:`lift_solve`, vectorised over the
    first axis of ``lifts``.
    """
    th, n, d, h = Pref.th, Pref.n, Pref.d, Pref.h
    S = th.S
    T = _Tables(S, n)
    W = witt_ring(S, n)
    N = lifts.shape[0]
    base = _witt_array(Pref.M)
    flat_t = lifts.reshape(-1, n).astype(np.int32)
    flat_b = np.broadcast_to(base, lifts.shape).reshape(-1, n).astype(np.int32)
    neg_b = W._neg.eval_many(flat_b)
    diff = W._add.eval_many(np.concatenate([flat_t, neg_b], axis=1)).reshape(N, h, h, n)
    for a in np.unique(diff):
        if int(a) not in th.kernel:
            raise LiftError("some matrix does not reduce to the display")
    delta = np.moveaxis(diff.astype(np.int64), 3, 1)  # (N, n, h, h)
    wMp = np.stack([T.ghost(lifts, i) for i in range(n)], axis=1)  # (N, n, h, h)
    wMi = np.array([ghost_matrix(Pref.Mi, i) for i in range(n)], dtype=np.int64).reshape(n, h, h)
    if seed is None:
        seed = np.zeros((h, h), dtype=np.int64)
    seed = np.broadcast_to(np.asarray(seed, dtype=np.int64), (N, h, h))
    H = _solve_core(T, n, d, d, delta, wMp, wMi[None], seed)
    return H[0][:, :d, d:]


def lift_display_from_array(th: PdThickening, P: TruncatedDisplay, arr: np.ndarray) -> RelDisplay:
    W = witt_ring(th.S, P.n)
    M = Matrix([[WittVector(W, tuple(int(v) for v in arr[i, j])) for j in range(P.h)] for i in range(P.h)],
               W.zero, P.h, P.h)
    return RelDisplay(th, TruncatedDisplay(th.S, P.n, P.d, P.c, M))


def relative_to_absolute(alpha: RelMorphism) -> DisplayMorphism:
    """A relative morphism with vanishing 𝔞̃-parts is a morphism over S."""
    for _, _, j in alpha.J.entries():
        if j.a != 0:
            raise LiftError("morphism has a nonzero 𝔞̃-part; it is not a morphism over S")
    W = alpha.source.display.W
    J = alpha.J.map(lambda j: j.eta, W.zero)
    return DisplayMorphism(alpha.source.display, alpha.target.display, alpha.X, J, alpha.Z, alpha.Y)


__all__ = [
    "LiftError", "RelDisplay", "RelMorphism", "LiftSolution", "UniquenessReport", "CrystalModule",
    "rel_display_make", "coordinate_lift", "rel_morphism_validate", "rel_reconstruct_J",
    "rel_identity", "rel_compose", "rel_truncate", "absolute_to_relative", "reduce_to_R",
    "lift_absolute_morphism", "lift_solve", "random_seed", "seed_from_blocks", "all_seeds",
    "uniqueness_level", "truncation_uniqueness_check", "delta_matrices", "delta_product_check",
    "crystal_eval", "crystal_comparison", "hodge_lift_display", "hodge_lifts", "hodge_class",
    "enumerate_matrix_lifts", "hodge_classes_batch", "lift_display_from_array",
    "relative_to_absolute",
]
