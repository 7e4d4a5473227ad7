"""Čech complexes of W_n, 𝒲_n and descended modules along finite coverings.

Tensor powers are modelled as products: for the product covering R -> R^k,

    S^{⊗(q+1)} = R^{X_q},  X_q = {0, ..., k-1}^{q+1},

and the coface δ_i forgets the i-th index.  For a Galois extension
F_p -> S = F_{p^d} with group G = ⟨φ⟩,

    S^{⊗(q+1)} ≅ Maps(G^q, S),  a_0 ⊗ ... ⊗ a_q ↦ (g_j) ↦ a_0 g_1(a_1) ... g_q(a_q)

(g_j acting on a_j), and δ_0 f(h_1, ..., h_{q+1}) = h_1(f(h_1^{-1}h_2, ..., h_1^{-1}h_{q+1}))
while δ_i (i >= 1) forgets h_i.  All functors used here commute with
finite products, so the chain groups are products of one finite group and
the differentials are block matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .abgroup import AbGroupPresentation, PModule, integer_kernel
from .cwitt import cwitt_ring, cwitt_elements
from .rings import FiniteRing, RingError, fp_poly_quot, p_torsion, zmod
from .witt import witt_ring


class DescentError(ValueError):
    """The covering or the request is not supported."""


# -- finite abelian groups with explicit bases -----------------------------------------------


class BasedGroup:
    """A finite abelian p-group with a basis b_1..b_s of orders e_1..e_s.

    ``dlog`` maps every element to its coefficient vector.
    """

    def __init__(self, elements, add, zero, p: int):
        self.elements = list(elements)
        self.add = add
        self.zero = zero
        self.p = p
        self.basis, self.orders = self._find_basis()
        self.dlog = self._discrete_log()

    def _order(self, x) -> int:
        k, y = 1, x
        while y != self.zero:
            y = self.add(y, x)
            k += 1
        return k

    def _extend(self, span: dict, g, o: int) -> dict:
        """Span of the old generators and g, where g has order o and meets the old span trivially."""
        new = {}
        for x, c in span.items():
            y = x
            for k in range(o):
                new[y] = c + (k,)
                y = self.add(y, g)
        return new

    def _span(self, gens) -> dict:
        span = {self.zero: ()}
        for g in gens:
            span = self._extend(span, g, self._order(g))
        return span

    def _find_basis(self):
        """Split off cyclic summands of maximal order, one at a time.

        If x has maximal order k modulo the span S of the basis so far, then
        k·x = k·s for some s in S, and x - s generates a complement of order k.
        """
        span = {self.zero: ()}
        basis, orders = [], []
        while len(span) < len(self.elements):
            best, best_k, best_s = None, 0, None
            for x in self.elements:
                if x in span:
                    continue
                y, k = x, 1
                while y not in span:
                    y = self.add(y, x)
                    k += 1
                if k > best_k:
                    best, best_k, best_s = x, k, y
            coeffs = span[best_s]
            corr = self.zero
            for b, e, c in zip(basis, orders, coeffs):
                if c % best_k:  # pragma: no cover - excluded by maximality
                    raise ArithmeticError("no basis found")
                for _ in range((-(c // best_k)) % e):
                    corr = self.add(corr, b)
            x = self.add(best, corr)
            basis.append(x)
            orders.append(best_k)
            span = self._extend(span, x, best_k)
        self._span_cache = span
        return basis, orders

    def _discrete_log(self) -> dict:
        return {x: np.array(c, dtype=np.int64) for x, c in self._span_cache.items()}

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return len(self.elements)

    def hom_matrix(self, fn, target: "BasedGroup") -> np.ndarray:
        """Matrix (target.rank x rank) of a homomorphism given on elements."""
        cols = [target.dlog[fn(b)] for b in self.basis]
        return np.array(cols, dtype=np.int64).T.reshape(target.rank, self.rank)

    def presentation(self) -> AbGroupPresentation:
        return AbGroupPresentation.from_factors(self.orders)


# -- coverings ------------------------------------------------------------------------


def _irreducible_field(p: int, d: int) -> FiniteRing:
    """F_{p^d} as F_p[a]/(f) for the first monic f that gives a field."""
    if d == 1:
        return zmod(p)
    for coeffs in itertools.product(range(p), repeat=d):
        if coeffs[0] == 0:
            continue
        terms = [f"a^{d}"] + [f"{c}*a^{i}" for i, c in enumerate(coeffs) if c]
        try:
            F = fp_poly_quot(p, ["a"], ["+".join(terms)])
        except RingError:
            continue
        if F.size == p ** d and all(F.is_unit(x) for x in F.elements() if x):
            return F
    raise DescentError(f"no field of order {p}^{d} found")  # pragma: no cover


@dataclass
class Covering:
    """A covering R -> S with S^{⊗(q+1)} modelled as a product of copies of ``component``."""

    kind: str  # "product" | "field_ext"
    base: FiniteRing
    component: FiniteRing
    k: int = 1  # number of factors (product) or degree (field_ext)
    frob_exp_gen: int = 1  # field_ext: G generated by x -> x^p

    def index_set(self, q: int) -> list:
        if self.kind == "product":
            return list(itertools.product(range(self.k), repeat=q + 1))
        return list(itertools.product(range(self.k), repeat=q))

    def automorphism(self, g: int):
        """The ring automorphism φ^g of the component."""
        if self.kind == "product" or g % self.k == 0:
            return lambda a: a
        C, e = self.component, self.base.p ** (g % self.k)
        return lambda a: C.pow(a, e)

    def coface(self, q: int, i: int):
        """δ_i: S^{⊗(q+1)} -> S^{⊗(q+2)} as (source index, automorphism) per target index."""
        tgt = self.index_set(q + 1)
        pos = {x: n for n, x in enumerate(self.index_set(q))}
        out = []
        for y in tgt:
            if self.kind == "product":
                x = y[:i] + y[i + 1:]
                out.append((pos[x], 0))
            elif i == 0:
                h1 = y[0]
                x = tuple((h - h1) % self.k for h in y[1:])
                out.append((pos[x], h1))
            else:
                x = y[:i - 1] + y[i:]
                out.append((pos[x], 0))
        return out

    def augmentation(self):
        """R -> S = S^{⊗1} as a function into the component, copied to every index."""
        if self.kind == "product":
            return lambda r: r
        C = self.component
        return lambda r: C.from_int(r)


def covering_make(base: FiniteRing, spec: dict) -> Covering:
    kind = spec.get("kind")
    if kind == "product":
        k = int(spec.get("k", 2))
        if k < 1:
            raise DescentError("product coverings need k >= 1")
        return Covering("product", base, base, k)
    if kind == "field_ext":
        if base.desc.get("kind") != "zmod" or base.desc.get("t") != 1:
            raise DescentError("field extensions are supported over prime fields F_p")
        d = int(spec.get("deg", 2))
        if d < 1:
            raise DescentError("degree must be positive")
        return Covering("field_ext", base, _irreducible_field(base.p, d), d)
    raise DescentError(f"unknown covering kind {kind!r}")


# -- the component groups ----------------------------------------------------------------------


def _witt_group(R: FiniteRing, n: int) -> tuple:
    W = witt_ring(R, n)
    elems = [tuple(c) for c in itertools.product(range(R.size), repeat=n)]
    G = BasedGroup(elems, W.add, W.zero_raw, R.p)
    act = lambda sigma: (lambda x: tuple(sigma(a) for a in x))
    return G, act


def _cwitt_group(R: FiniteRing, n: int) -> tuple:
    C = cwitt_ring(R, n)
    reps = {x.pair: x.rep for x in cwitt_elements(R, n)}
    W1 = C.W1

    def pair_of(rep):
        return (rep[:n], W1.frob_raw(rep) if any(rep) else C.W.zero_raw)

    def add(a, b):
        return pair_of(W1.add(reps[a], reps[b]))

    G = BasedGroup(list(reps), add, C.zero.pair, R.p)

    def act(sigma):
        return lambda x: pair_of(tuple(sigma(a) for a in reps[x]))

    return G, act


def _ptors_group(R: FiniteRing, n: int) -> tuple:
    elems = p_torsion(R)
    G = BasedGroup(elems, R.add, 0, R.p)
    return G, (lambda sigma: sigma)


_VARIANTS = {"W": _witt_group, "cW": _cwitt_group, "ptors": _ptors_group}


# -- complexes ----------------------------------------------------------------------------------


@dataclass
class CechComplex:
    covering: Covering
    n: int
    variant: str  # "W" | "cW" | "module" | "ptors"
    max_degree: int
    group: BasedGroup  # the component group
    rank: int  # module rank (1 unless variant == "module")
    sizes: list  # number of component copies in degree q
    differentials: list  # integer matrices d^q: C^q -> C^{q+1}
    augmentation: np.ndarray  # base group -> C^0
    base_group: BasedGroup

    @property
    def p(self) -> int:
        return self.group.p

    @cached_property
    def E(self) -> int:
        e, top = 0, max(self.group.orders + [1])
        while self.p ** e < top:
            e += 1
        return max(e, 1)

    def chain_relations(self, q: int) -> np.ndarray:
        orders = self.group.orders * (self.sizes[q] * self.rank)
        return np.diag(np.array(orders, dtype=np.int64)) if orders else np.zeros((0, 0), dtype=np.int64)

    def chain_order(self, q: int) -> int:
        return self.group.order ** (self.sizes[q] * self.rank)

    def chain_group(self, q: int) -> AbGroupPresentation:
        return AbGroupPresentation.from_factors(self.group.orders * (self.sizes[q] * self.rank))

    def module(self, q: int) -> PModule:
        rel = self.chain_relations(q)
        return PModule(self.p, self.E, rel.shape[0], rel)

    def dd_zero(self) -> bool:
        for q in range(len(self.differentials) - 1):
            prod = self.differentials[q + 1] @ self.differentials[q]
            rel = self.chain_relations(q + 2)
            orders = np.diag(rel) if rel.size else np.zeros(0, dtype=np.int64)
            if prod.size and np.any(prod % orders[:, None] != 0):
                return False
        return True


def cech_complex(covering: Covering, n: int, variant: str = "cW", max_degree: int = 3,
                 rank: int = 1) -> CechComplex:
    """Chain groups C^q = F(S^{⊗(q+1)}) for q = 0..max_degree with d = Σ (-1)^i δ_i.

    ``variant`` is "W" (W_n), "cW" (𝒲_n), "ptors" (the p-torsion S[p]) or
    "module" (the free 𝒲_n(S)-module of the given rank with the trivial
    descent datum).
    """
    if max_degree < 1:
        raise DescentError("max_degree must be at least 1")
    base_variant = "cW" if variant == "module" else variant
    if base_variant not in _VARIANTS:
        raise DescentError(f"unknown variant {variant!r}")
    if variant != "module" and rank != 1:
        raise DescentError("rank is only meaningful for the module variant")
    sizes = [len(covering.index_set(q)) for q in range(max_degree + 1)]
    if sizes[-1] * rank > 4096:
        raise DescentError("tensor powers too large to enumerate")
    G, act = _VARIANTS[base_variant](covering.component, n)
    s = G.rank
    auts = {g: G.hom_matrix(act(covering.automorphism(g)), G) for g in range(max(covering.k, 1))}
    diffs = []
    for q in range(max_degree):
        rows, cols = sizes[q + 1] * s * rank, sizes[q] * s * rank
        D = np.zeros((rows, cols), dtype=np.int64)
        for i in range(q + 2):
            sign = -1 if i % 2 else 1
            for y, (x, g) in enumerate(covering.coface(q, i)):
                for c in range(rank):
                    r0 = (y * rank + c) * s
                    c0 = (x * rank + c) * s
                    D[r0:r0 + s, c0:c0 + s] += sign * auts[g]
        diffs.append(D)
    Gb, _ = _VARIANTS[base_variant](covering.base, n)
    emb = covering.augmentation()
    if base_variant == "W":
        incl = lambda x: tuple(emb(a) for a in x)
    elif base_variant == "cW":
        Cb = cwitt_ring(covering.base, n)
        Cc = cwitt_ring(covering.component, n)
        reps = {x.pair: x.rep for x in cwitt_elements(covering.base, n)}

        def incl(x):
            rep = tuple(emb(a) for a in reps[x])
            W1 = Cc.W1
            return (rep[:n], W1.frob_raw(rep) if any(rep) else Cc.W.zero_raw)
    else:
        incl = emb
    one = Gb.hom_matrix(incl, G)
    aug = np.zeros((sizes[0] * s * rank, Gb.rank * rank), dtype=np.int64)
    for x in range(sizes[0]):
        for c in range(rank):
            aug[(x * rank + c) * s:(x * rank + c + 1) * s, c * Gb.rank:(c + 1) * Gb.rank] = one
    return CechComplex(covering, n, variant, max_degree, G, rank, sizes, diffs, aug, Gb)


def _kernel_generators(C: CechComplex, q: int) -> np.ndarray:
    """Generators (columns) of ker d^q inside Z^{gens of C^q}."""
    D = C.differentials[q]
    rel_next = np.diag(C.chain_relations(q + 1)) if C.chain_relations(q + 1).size else np.zeros(0, dtype=np.int64)
    m = D.shape[1]
    big = np.concatenate([D, np.diag(rel_next)], axis=1) if D.shape[0] else D
    if big.shape[0] == 0:
        return np.eye(m, dtype=np.int64)
    K = integer_kernel(big.tolist(), big.shape[1])
    if not K:
        return np.zeros((m, 0), dtype=np.int64)
    return np.array([v[:m] for v in K], dtype=object).T.astype(np.int64) if m else np.zeros((0, 0), dtype=np.int64)


def homology(C: CechComplex, q: int) -> AbGroupPresentation:
    """H^q = ker d^q / im d^{q-1} (with H^0 = ker d^0)."""
    if not 0 <= q <= C.max_degree - 1:
        raise DescentError(f"homology needs 0 <= q <= {C.max_degree - 1}")
    mod = C.module(q)
    ker = _kernel_generators(C, q) % (C.p ** C.E)
    im = C.differentials[q - 1] if q > 0 else np.zeros((mod.g, 0), dtype=np.int64)
    return AbGroupPresentation.from_factors(mod.quotient_factors(ker, im))


@dataclass
class AcyclicityReport:
    ok: bool
    dd_zero: bool
    h0: AbGroupPresentation
    h0_expected: AbGroupPresentation
    h0_is_augmentation: bool
    higher: dict = field(default_factory=dict)  # q -> AbGroupPresentation

    def to_json(self) -> dict:
        return {"ok": self.ok, "dd_zero": self.dd_zero, "H0": self.h0.to_json(),
                "H0_expected": self.h0_expected.to_json(), "H0_is_augmentation": self.h0_is_augmentation,
                "higher": {str(q): g.to_json() for q, g in self.higher.items()}}


def acyclicity_check(C: CechComplex) -> AcyclicityReport:
    """H^q = 0 for 1 <= q <= max_degree - 1 and H^0 = the augmentation image ≅ F(R)^rank."""
    dd = C.dd_zero()
    h0 = homology(C, 0)
    expected = AbGroupPresentation.from_factors(C.base_group.orders * C.rank)
    mod = C.module(0)
    aug_log = mod.span_log_order(C.augmentation)
    ker = _kernel_generators(C, 0) % (C.p ** C.E)
    # the augmentation lands in the kernel and has the same order
    lands = mod.span_log_order(np.concatenate([ker, C.augmentation], axis=1)) == mod.span_log_order(ker)
    is_aug = lands and C.p ** aug_log == h0.order == expected.order
    higher = {q: homology(C, q) for q in range(1, C.max_degree)}
    ok = dd and is_aug and h0.invariant_factors == expected.invariant_factors and all(
        g.is_trivial() for g in higher.values())
    return AcyclicityReport(ok, dd, h0, expected, is_aug, higher)


@dataclass
class ExactSequenceReport:
    ok: bool
    levels: list  # per degree: dict with orders and checks

    def to_json(self) -> dict:
        return {"ok": self.ok, "levels": self.levels}


def exact_sequence_check(covering: Covering, n: int, max_degree: int = 3) -> ExactSequenceReport:
    """0 -> C(S/R)[p] -> CW_{n+1} -> C𝒲_n -> 0, degree by degree.

    The maps are s ↦ V^n[s] and the projection W_{n+1} -> 𝒲_n; both are
    chain maps (checked on the differentials), the first is injective, the
    second surjective, their composite vanishes and orders multiply.
    """
    Cp = cech_complex(covering, n, "ptors", max_degree)
    CW = cech_complex(covering, n + 1, "W", max_degree)
    Cc = cech_complex(covering, n, "cW", max_degree)
    R = covering.component
    Gp, GW, Gc = Cp.group, CW.group, Cc.group
    W1 = witt_ring(R, n + 1)
    incl = Gp.hom_matrix(lambda s: (0,) * n + (s,), GW)
    proj = GW.hom_matrix(lambda x: (x[:n], W1.frob_raw(x) if any(x) else (0,) * n), Gc)

    def blockdiag(M, copies):
        r, c = M.shape
        out = np.zeros((r * copies, c * copies), dtype=np.int64)
        for i in range(copies):
            out[i * r:(i + 1) * r, i * c:(i + 1) * c] = M
        return out

    levels, ok = [], True
    for q in range(max_degree + 1):
        I = blockdiag(incl, Cp.sizes[q])
        P = blockdiag(proj, CW.sizes[q])
        mW, mc = CW.module(q), Cc.module(q)
        inj = mW.span_log_order(I) == sum(int(round(np.log(o) / np.log(R.p))) for o in Gp.orders) * Cp.sizes[q]
        surj = mc.span_log_order(P) == mc.log_order
        zero = mc.span_log_order(P @ I) == 0
        orders = Cp.chain_order(q) * Cc.chain_order(q) == CW.chain_order(q)
        chain = True
        if q < max_degree:
            # P∘d_W = d_c∘P and I∘d_p = d_W∘I (as maps into the finite groups)
            m1 = Cc.module(q + 1)
            m2 = CW.module(q + 1)
            chain = (m1.span_log_order(blockdiag(proj, CW.sizes[q + 1]) @ CW.differentials[q]
                                       - Cc.differentials[q] @ P) == 0
                     and m2.span_log_order(blockdiag(incl, Cp.sizes[q + 1]) @ Cp.differentials[q]
                                           - CW.differentials[q] @ I) == 0)
        good = bool(inj and surj and zero and orders and chain)
        ok &= good
        levels.append({"degree": q, "order_ptors": Cp.chain_order(q), "order_W": CW.chain_order(q),
                       "order_cW": Cc.chain_order(q), "injective": bool(inj), "surjective": bool(surj),
                       "composite_zero": bool(zero), "orders_multiply": bool(orders), "chain_maps": bool(chain)})
    return ExactSequenceReport(bool(ok), levels)


__all__ = ["DescentError", "BasedGroup", "Covering", "covering_make", "CechComplex", "cech_complex",
           "homology", "acyclicity_check", "AcyclicityReport", "exact_sequence_check",
           "ExactSequenceReport"]
