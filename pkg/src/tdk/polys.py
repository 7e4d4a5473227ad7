"""Sparse integer polynomials and the universal p-typical Witt polynomials.

Polynomials are dicts mapping exponent tuples to nonzero integer
coefficients.  The structure polynomials are produced by the ghost
recursion, either exactly over the integers or modulo ``p**t`` (enough for
evaluation in any ring of characteristic dividing ``p**t``).
"""

from __future__ import annotations

import threading
from functools import lru_cache

Poly = dict  # {exponent tuple: int}

_lock = threading.Lock()


def _clean(f: Poly, modulus: int | None) -> Poly:
    if modulus is None:
        return {e: c for e, c in f.items() if c}
    out = {}
    for e, c in f.items():
        c %= modulus
        if c:
            out[e] = c
    return out


def p_add(f: Poly, g: Poly, modulus: int | None = None) -> Poly:
    h = dict(f)
    for e, c in g.items():
        h[e] = h.get(e, 0) + c
    return _clean(h, modulus)


def p_scale(f: Poly, k: int, modulus: int | None = None) -> Poly:
    return _clean({e: c * k for e, c in f.items()}, modulus)


def p_mul(f: Poly, g: Poly, modulus: int | None = None, max_deg: int | None = None) -> Poly:
    """Product; with ``max_deg`` set, monomials of total degree >= max_deg are dropped."""
    if len(f) > len(g):
        f, g = g, f
    h: Poly = {}
    get = h.get
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            if max_deg is not None and sum(e) >= max_deg:
                continue
            h[e] = get(e, 0) + c1 * c2
    return _clean(h, modulus)


def p_truncate(f: Poly, max_deg: int | None) -> Poly:
    if max_deg is None:
        return f
    return {e: c for e, c in f.items() if sum(e) < max_deg}


def p_pow(f: Poly, k: int, nvars: int, modulus: int | None = None, max_deg: int | None = None) -> Poly:
    result: Poly = p_truncate({(0,) * nvars: 1}, max_deg)
    base = f
    while k:
        if k & 1:
            result = p_mul(result, base, modulus, max_deg)
        k >>= 1
        if k:
            base = p_mul(base, base, modulus, max_deg)
    return result


def p_divexact(f: Poly, d: int) -> Poly:
    out = {}
    for e, c in f.items():
        q, r = divmod(c, d)
        if r:
            raise ArithmeticError(f"coefficient {c} not divisible by {d}")
        out[e] = q
    return out


def var(i: int, nvars: int) -> Poly:
    e = [0] * nvars
    e[i] = 1
    return {tuple(e): 1}


def const(c: int, nvars: int) -> Poly:
    return {(0,) * nvars: c} if c else {}


def evaluate(f: Poly, point) -> int:
    """Evaluate over the integers (used by the self-tests)."""
    total = 0
    for e, c in f.items():
        term = c
        for x, k in zip(point, e):
            if k:
                term *= x ** k
        total += term
    return total


def ghost_poly(p: int, i: int, offset: int, nvars: int) -> Poly:
    """w_i(X) = sum_j p^j X_j^{p^{i-j}} on variables offset..offset+i."""
    g: Poly = {}
    for j in range(i + 1):
        e = [0] * nvars
        e[offset + j] = p ** (i - j)
        g[tuple(e)] = p ** j
    return g


def _recursion(p: int, n: int, t: int | None, target_ghost, nvars: int, max_deg: int | None = None):
    """Solve w_k(Phi) = target_ghost(k) for Phi_0..Phi_{n-1}.

    With ``t`` set, Phi_k is returned modulo p^t; intermediate work for
    index k happens modulo p^(t+k), which is exact enough because
    p^i * (f mod p^t)^(p^(k-i)) is determined modulo p^(t+k).

    With ``max_deg`` set, everything is computed modulo the monomials of total
    degree >= max_deg.  That quotient of Z[X] is torsion free, so the exact
    divisions remain valid; the result is the truncation of the true
    polynomials, which agrees with them on inputs from an ideal whose
    max_deg-fold products vanish.
    """
    phis: list[Poly] = []
    for k in range(n):
        mod = None if t is None else p ** (t + k)
        num = _clean(p_truncate(dict(target_ghost(k)), max_deg), mod)
        for i, phi in enumerate(phis):
            term = p_scale(p_pow(phi, p ** (k - i), nvars, mod, max_deg), p ** i, mod)
            num = p_add(num, p_scale(term, -1), mod)
        phi_k = p_divexact(num, p ** k)
        if t is not None:
            phi_k = _clean(phi_k, p ** t)
        phis.append(phi_k)
    return phis


@lru_cache(maxsize=None)
def _sum_polys(p: int, n: int, t: int | None):
    nv = 2 * n
    return tuple(_recursion(
        p, n, t, lambda k: p_add(ghost_poly(p, k, 0, nv), ghost_poly(p, k, n, nv)), nv))


@lru_cache(maxsize=None)
def _prod_polys(p: int, n: int, t: int | None):
    nv = 2 * n
    return tuple(_recursion(
        p, n, t, lambda k: p_mul(ghost_poly(p, k, 0, nv), ghost_poly(p, k, n, nv)), nv))


@lru_cache(maxsize=None)
def _neg_polys(p: int, n: int, t: int | None):
    return tuple(_recursion(p, n, t, lambda k: p_scale(ghost_poly(p, k, 0, n), -1), n))


@lru_cache(maxsize=None)
def _frob_polys(p: int, n: int, t: int | None):
    # F: W_{n+1} -> W_n, w_k(F x) = w_{k+1}(x)
    nv = n + 1
    return tuple(_recursion(p, n, t, lambda k: ghost_poly(p, k + 1, 0, nv), nv))


@lru_cache(maxsize=None)
def _nil_sum_polys(p: int, n: int, t: int | None, max_deg: int):
    nv = 2 * n
    return tuple(_recursion(
        p, n, t, lambda k: p_add(ghost_poly(p, k, 0, nv), ghost_poly(p, k, n, nv)), nv, max_deg))


@lru_cache(maxsize=None)
def _nil_neg_polys(p: int, n: int, t: int | None, max_deg: int):
    return tuple(_recursion(p, n, t, lambda k: p_scale(ghost_poly(p, k, 0, n), -1), n, max_deg))


def _locked(fn, *args):
    # lru_cache is thread-safe for reads; concurrent first computations
    # would produce identical entries anyway, the lock just avoids the waste.
    with _lock:
        return fn(*args)


def sum_polys(p: int, n: int, t: int | None = None):
    """Witt addition polynomials S_0..S_{n-1} in X_0..X_{n-1}, Y_0..Y_{n-1}."""
    return _locked(_sum_polys, p, n, t)


def prod_polys(p: int, n: int, t: int | None = None):
    """Witt multiplication polynomials P_0..P_{n-1}."""
    return _locked(_prod_polys, p, n, t)


def neg_polys(p: int, n: int, t: int | None = None):
    """Witt negation polynomials N_0..N_{n-1} in X_0..X_{n-1}."""
    return _locked(_neg_polys, p, n, t)


def frob_polys(p: int, n: int, t: int | None = None):
    """Frobenius W_{n+1} -> W_n, polynomials in X_0..X_n."""
    return _locked(_frob_polys, p, n, t)


def nil_sum_polys(p: int, n: int, t: int | None, max_deg: int):
    """Witt addition truncated below total degree ``max_deg`` (for nilpotent inputs)."""
    return _locked(_nil_sum_polys, p, n, t, max_deg)


def nil_neg_polys(p: int, n: int, t: int | None, max_deg: int):
    """Witt negation truncated below total degree ``max_deg``."""
    return _locked(_nil_neg_polys, p, n, t, max_deg)
