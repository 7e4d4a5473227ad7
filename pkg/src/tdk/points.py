"""The points functor FG_n(𝒫)(N) = coker(Ḟ - 1: Q̂_N -> P̂_N) and BT_m(𝒫)(N).

For a display 𝒫 = (A B; C D) of level n over F_p with normal decomposition
P = T ⊕ L and a nilpotent algebra N with x^{p^n} = 0,

    P̂_N = Ŵ(N) ⊗ P,   Q̂_N = ⱽŴ(N) ⊗ T ⊕ Ŵ(N) ⊗ L,

and Ḟ - 1 sends (ⱽx ⊗ t_i) to x·M e_i - ⱽx e_i and (y ⊗ ℓ_i) to
ᶠy·M e_{d+i} - y e_{d+i}.  Over F_p the ring W_n(F_p) = Z/p^n acts on Ŵ(N)
through the integers, so every map is linear in the coordinates of
:class:`HatWittGroup`.  The cokernel is computed on the subgroups
Γ_K ⊂ Ŵ(N) of growing support bound K until its order is the same for two
consecutive bounds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .abgroup import AbGroupPresentation
from .display import TruncatedDisplay
from .hatw import HatWittGroup
from .rings import NilAlgebra, RingError, RingHom


class PointsError(ValueError):
    """Hypotheses of the points functor fail."""


class NoStabilization(RuntimeError):
    """The cokernel order did not stabilise within the maximal support bound."""


def witt_to_int(x) -> int:
    """The integer mod p^n corresponding to x in W_n(F_p)."""
    W = x.W
    q = W.p ** W.n
    for m in range(q):
        if W.from_int(m) == x.coords:
            return m
    raise PointsError("Witt vector is not over a prime field")  # pragma: no cover


def _check(P: TruncatedDisplay, N: NilAlgebra):
    if P.R.desc != N.base.desc or P.R.desc.get("kind") != "zmod" or P.R.desc.get("t") != 1:
        raise PointsError("the display and the nil algebra must live over the same prime field F_p")
    if N.frob_exp > P.n:
        raise PointsError(f"x^(p^{P.n}) = 0 fails in N (Frobenius exponent {N.frob_exp} exceeds level {P.n})")


@dataclass
class HatModules:
    """Generators of Q̂ and P̂ on the support bound K and the images under Ḟ - 1."""

    group: HatWittGroup
    h: int
    K: int
    q_gens: int
    p_gens: np.ndarray  # columns of generators of P̂_K (in h·g coordinates)
    images: np.ndarray  # columns (Ḟ - 1)(generators of Q̂_K)

    @property
    def ambient(self):
        return self.group.module


def _block_module(G: HatWittGroup, h: int):
    """The module (W_L(N))^h: relations repeated blockwise."""
    from .abgroup import PModule

    mod = G.module
    rel = np.zeros((h * G.g, h * mod.rel.shape[1]), dtype=np.int64)
    for s in range(h):
        rel[s * G.g:(s + 1) * G.g, s * mod.rel.shape[1]:(s + 1) * mod.rel.shape[1]] = mod.rel
    return PModule(G.p, G.E, h * G.g, rel)


def _fdot_minus_one(G: HatWittGroup, Mint: list, d: int, slot: int, x: np.ndarray) -> np.ndarray:
    """(Ḟ - 1) of the Q̂-element with coordinates x in ``slot`` (ⱽx ⊗ t for T-slots, x ⊗ ℓ for L-slots)."""
    h, g = len(Mint), G.g
    img = np.zeros(h * g, dtype=np.int64)
    if slot < d:
        src = x  # Ḟ(ⱽx ⊗ t) = x · M e_slot
        one = G.V_coords(x)  # ι(ⱽx ⊗ t) = ⱽx e_slot
    else:
        src = G.F_coords(x)  # Ḟ(y ⊗ ℓ) = ᶠy · M e_slot
        one = x
    for r in range(h):
        img[r * g:(r + 1) * g] += Mint[r][slot] * src
    img[slot * g:(slot + 1) * g] -= one
    return img


def _display_ints(P: TruncatedDisplay) -> list:
    return [[witt_to_int(P.M[i, j]) for j in range(P.h)] for i in range(P.h)]


def hat_modules(P: TruncatedDisplay, N: NilAlgebra, K: int, length: int | None = None) -> HatModules:
    """Q̂_K, P̂_K and Ḟ - 1 on the generators, for the support bound K (inside W_L(N), L >= length)."""
    _check(P, N)
    G = HatWittGroup(N, K, length)
    h, d, g = P.h, P.d, G.g
    Mint = _display_ints(P)
    gam = G.gamma_generators(K)
    p_gens = np.zeros((h * g, h * gam.shape[1]), dtype=np.int64)
    for s in range(h):
        p_gens[s * g:(s + 1) * g, s * gam.shape[1]:(s + 1) * gam.shape[1]] = gam
    images = [_fdot_minus_one(G, Mint, d, slot, gam[:, col]) for slot in range(h) for col in range(gam.shape[1])]
    images = np.array(images, dtype=np.int64).T if images else np.zeros((h * g, 0), dtype=np.int64)
    return HatModules(G, h, K, h * gam.shape[1], p_gens, images)


@dataclass
class PointsResult:
    display: TruncatedDisplay
    N: NilAlgebra
    bound: int
    group: AbGroupPresentation
    orders: dict = field(default_factory=dict)  # support bound -> order
    injective: bool = True

    @property
    def order(self) -> int:
        return self.group.order


def _cokernel(hm: HatModules) -> tuple:
    """(invariant factors of the cokernel, Ḟ - 1 injective on Q̂_K)."""
    mod = _block_module(hm.group, hm.h)
    G = hm.group
    # |Q̂_K| = |Γ_K|^h (ⱽ is injective on Ŵ(N)); compare with the image order
    q_log = hm.h * G.gamma_log_order(hm.K)
    im_log = mod.span_log_order(hm.images)
    factors = mod.quotient_factors(hm.p_gens, hm.images)
    return factors, im_log == q_log


def fg_points(P: TruncatedDisplay, N: NilAlgebra, start: int = 1, max_bound: int = 8) -> PointsResult:
    """FG_n(𝒫)(N), escalating the support bound until the order repeats."""
    _check(P, N)
    orders, prev = {}, None
    injective = True
    for K in range(start, max_bound + 1):
        factors, inj = _cokernel(hat_modules(P, N, K))
        injective &= inj
        if not inj:
            raise PointsError(f"Ḟ - 1 is not injective on the support bound {K}")
        grp = AbGroupPresentation.from_factors(factors)
        orders[K] = grp.order
        if prev is not None and prev.invariant_factors == grp.invariant_factors:
            return PointsResult(P, N, K, grp, orders, injective)
        prev = grp
    raise NoStabilization(f"cokernel did not stabilise up to support bound {max_bound}: {orders}")


@dataclass
class PointsMap:
    """The homomorphism FG_n(𝒫)(N) -> FG_n(𝒫)(N') induced by an algebra map N -> N'."""

    source: AbGroupPresentation
    target: AbGroupPresentation
    image: AbGroupPresentation
    well_defined: bool  # relations of W_L(N) map into relations of W_L(N')
    commutes: bool  # W_L(φ) ∘ (Ḟ - 1) = (Ḟ - 1) ∘ W_L(φ) on the generators of Q̂
    bounds: tuple


def fg_map(P: TruncatedDisplay, N: NilAlgebra, N2: NilAlgebra, images: dict, max_bound: int = 8) -> PointsMap:
    """Functoriality in N: the map induced by the algebra map given on generators.

    W_L(φ) acts coordinatewise, hence V^k[b] ↦ V^k[φ(b)].  Both groups are
    materialised at a common length L large enough for the images of Γ_K
    to lie in Γ'_{K'}.
    """
    from .hatw import _support_growth

    _check(P, N)
    _check(P, N2)
    try:
        phi = RingHom.from_images(N.ambient, N2.ambient, images)
    except RingError as exc:
        raise PointsError(f"not an algebra map: {exc}") from None
    if any(phi(x) not in N2.element_set for x in N.elements):
        raise PointsError("the map does not send N into N'")
    src, dst = fg_points(P, N, max_bound=max_bound), fg_points(P, N2, max_bound=max_bound)
    p = P.R.p
    K = src.bound
    K2 = max(dst.bound, K + _support_growth(p, max(N2.nil_class, 1)))
    L = max(K + _support_growth(p, max(N.nil_class, 1)), K2 + _support_growth(p, max(N2.nil_class, 1))) + 1
    hm, hm2 = hat_modules(P, N, K, L), hat_modules(P, N2, K2, L)
    G, G2 = hm.group, hm2.group
    if G.L != G2.L:  # pragma: no cover - both are materialised at length L
        raise ArithmeticError("lengths differ")
    # W_L(φ) on the generators V^k[b_j]
    fmat = np.zeros((G2.g, G.g), dtype=np.int64)
    for k in range(G.L):
        for j, b in enumerate(G.basis):
            fmat[:, G.index(k, j)] = G2.V_coords(G2.coords(G2.teich(phi(b))), k)
    mod2 = G2.module
    in_rel = lambda cols: mod2.span_log_order(cols) == 0
    well_defined = in_rel(fmat @ G.module.rel % G2.p ** G2.E) if G.module.rel.size else True
    h, d = P.h, P.d
    Mint = _display_ints(P)
    gam = G.gamma_generators(K)
    commutes = True
    for slot in range(h):
        for col in range(gam.shape[1]):
            x = gam[:, col]
            lhs = np.concatenate([fmat @ blk for blk in np.split(_fdot_minus_one(G, Mint, d, slot, x), h)])
            rhs = _fdot_minus_one(G2, Mint, d, slot, fmat @ x)
            commutes &= in_rel(np.stack(np.split(lhs - rhs, h), axis=1))
    big = np.kron(np.eye(h, dtype=np.int64), fmat) @ hm.p_gens
    image = _block_module(G2, h).quotient_factors(big, hm2.images)
    return PointsMap(src.group, dst.group, AbGroupPresentation.from_factors(image), bool(well_defined),
                     bool(commutes), (K, K2))


def torsion_subgroup(G: AbGroupPresentation, p: int, m: int) -> AbGroupPresentation:
    """The p^m-torsion of a finite abelian p-group given by its invariant factors."""
    out = []
    for f in G.invariant_factors:
        if f == 0:
            raise PointsError("infinite group")
        out.append(min(f, p ** m))
    return AbGroupPresentation.from_factors(out)


def bt_points(P: TruncatedDisplay, m: int, N: NilAlgebra, **kw) -> AbGroupPresentation:
    """BT_m(𝒫)(N) = FG_n(𝒫)(N)[p^m]."""
    if m < 0:
        raise ValueError("m must be non-negative")
    res = fg_points(P, N, **kw)
    return torsion_subgroup(res.group, P.R.p, m)


def mu_oracle(N: NilAlgebra, m: int) -> AbGroupPresentation:
    """{u in 1 + N : u^{p^m} = 1} under multiplication, by enumeration."""
    A, p = N.ambient, N.p
    units = [A.add(A.one, x) for x in N.elements]
    group = [u for u in units if A.pow(u, p ** m) == A.one]
    return group_structure(group, A.mul, A.one, p)


def group_structure(elements, op, identity, p: int) -> AbGroupPresentation:
    """Invariant factors of a finite abelian p-group from its element orders.

    The number of cyclic factors of order >= p^(j+1) is log_p(|p^j G| / |p^(j+1) G|).
    """
    elements = list(elements)

    def power(x, k):
        y = identity
        for _ in range(k):
            y = op(y, x)
        return y

    sizes = []
    j = 0
    while True:
        img = {power(x, p ** j) for x in elements}
        sizes.append(len(img))
        if len(img) == 1:
            break
        j += 1
    logs = [round(np.log(s) / np.log(p)) for s in sizes]
    if any(p ** l != s for l, s in zip(logs, sizes)):
        raise ValueError("not a p-group")
    factors = []
    for j in range(len(logs) - 1):
        ge = logs[j] - logs[j + 1]
        ge_next = logs[j + 1] - logs[j + 2] if j + 2 < len(logs) else 0
        factors += [p ** (j + 1)] * (ge - ge_next)
    return AbGroupPresentation.from_factors(factors)


def hat_witt_oracle_order(N: NilAlgebra, L: int) -> int:
    """|W_L(N)| = |N|^L (for checking the presentation)."""
    return N.size ** L


__all__ = ["PointsError", "NoStabilization", "HatModules", "PointsResult", "hat_modules", "fg_points",
           "bt_points", "fg_map", "PointsMap", "mu_oracle", "torsion_subgroup", "group_structure", "witt_to_int"]
