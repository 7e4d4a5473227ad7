"""The ring 𝒲_n(R), the module I_{n+1} and, over a thickening, 𝒥_{n+1}.

𝒲_n(R) is the image of (Res, F): W_{n+1}(R) -> W_n(R) x W_n(R).  An element
is stored with a W_{n+1} representative; equality compares the image pair.
"""

from __future__ import annotations

import itertools

from .rings import FiniteRing, PdThickening, RingError, p_torsion
from .witt import WittRing, WittVector, witt_ring

_RINGS: dict = {}


def cwitt_ring(R: FiniteRing, n: int) -> "CWittRing":
    key = (id(R), n)
    C = _RINGS.get(key)
    if C is None or C.R is not R:
        C = _RINGS[key] = CWittRing(R, n)
    return C


class CWittRing:
    """𝒲_n(R) for n >= 1."""

    def __init__(self, R: FiniteRing, n: int):
        if n < 1:
            raise ValueError("𝒲_n needs n >= 1")
        self.R = R
        self.n = n
        self.p = R.p
        self.W = witt_ring(R, n)
        self.W1 = witt_ring(R, n + 1)
        self.zero = CWitt(self, self.W1.zero_raw)
        self.one = CWitt(self, self.W1.one_raw)

    def __repr__(self):
        return f"𝒲_{self.n}({self.R!r})"

    def project(self, x) -> "CWitt":
        """The class of x in W_{n+1}(R)."""
        if isinstance(x, WittVector):
            if x.W is not self.W1:
                raise RingError(f"expected an element of {self.W1}")
            x = x.coords
        return CWitt(self, tuple(x))

    __call__ = project

    def integer(self, c: int) -> "CWitt":
        return CWitt(self, self.W1.from_int(c))

    def teichmuller(self, a: int) -> "CWitt":
        return CWitt(self, (a,) + (0,) * self.n)

    def kappa_I(self, eta: WittVector) -> "CWitt":
        """κ(ⱽη) for η in W_n(R)."""
        return CWitt(self, (0,) + tuple(eta.coords))

    def image(self) -> set:
        """All pairs (res, frob) in 𝒲_n(R), by enumerating W_{n+1}(R)."""
        W1, n = self.W1, self.n
        pts = W1.raw_array()
        frobs = W1._frob.eval_many(pts)
        return {(tuple(int(v) for v in r[:n]), tuple(int(v) for v in f)) for r, f in zip(pts, frobs)}

    def contains_pair(self, res, frob) -> bool:
        return (tuple(res), tuple(frob)) in self.image()


class CWitt:
    """An element of 𝒲_n(R) given by a representative in W_{n+1}(R)."""

    __slots__ = ("C", "rep", "res_raw", "frob_raw")

    def __init__(self, C: CWittRing, rep: tuple):
        self.C = C
        self.rep = rep
        self.res_raw = rep[:C.n]
        self.frob_raw = C.W1.frob_raw(rep) if any(rep) else C.W.zero_raw

    @property
    def pair(self) -> tuple:
        return self.res_raw, self.frob_raw

    @property
    def res(self) -> WittVector:
        return WittVector(self.C.W, self.res_raw)

    @property
    def frob(self) -> WittVector:
        return WittVector(self.C.W, self.frob_raw)

    @property
    def representative(self) -> WittVector:
        return WittVector(self.C.W1, self.rep)

    def _other(self, o):
        if isinstance(o, int):
            return self.C.integer(o)
        if not isinstance(o, CWitt):
            return NotImplemented
        if o.C is not self.C:
            raise RingError(f"mismatched rings {self.C} and {o.C}")
        return o

    def __add__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return CWitt(self.C, self.C.W1.add(self.rep, o.rep))

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return CWitt(self.C, self.C.W1.sub(self.rep, o.rep))

    def __rsub__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return CWitt(self.C, self.C.W1.sub(o.rep, self.rep))

    def __mul__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return CWitt(self.C, self.C.W1.mul(self.rep, o.rep))

    __rmul__ = __mul__

    def __neg__(self):
        return CWitt(self.C, self.C.W1.neg(self.rep))

    def __eq__(self, o):
        if isinstance(o, int):
            o = self.C.integer(o)
        return isinstance(o, CWitt) and o.C is self.C and o.pair == self.pair

    def __hash__(self):
        return hash((id(self.C), self.pair))

    def __repr__(self):
        W = self.C.W
        return f"<{', '.join(W.format(self.res_raw))} | {', '.join(W.format(self.frob_raw))}>"

    def is_zero(self) -> bool:
        return not any(self.res_raw) and not any(self.frob_raw)


def cwitt_project(x: WittVector) -> CWitt:
    """W_{n+1}(R) -> 𝒲_n(R)."""
    return cwitt_ring(x.W.R, x.W.n - 1).project(x)


def kernel_of_projection(R: FiniteRing, n: int) -> list[WittVector]:
    """{ⱽⁿ[s] : ps = 0}, the kernel of W_{n+1}(R) -> 𝒲_n(R)."""
    W1 = witt_ring(R, n + 1)
    return [WittVector(W1, (0,) * n + (s,)) for s in p_torsion(R)]


def kernel_by_enumeration(R: FiniteRing, n: int) -> list[WittVector]:
    """The same kernel found by projecting every element of W_{n+1}(R)."""
    W1 = witt_ring(R, n + 1)
    pts = W1.raw_array()
    frobs = W1._frob.eval_many(pts)
    hits = (pts[:, :n] == 0).all(axis=1) & (frobs == 0).all(axis=1)
    return [WittVector(W1, tuple(int(v) for v in row)) for row in pts[hits]]


# -- I_{n+1} ---------------------------------------------------------------


class IElement:
    """ⱽη in I_{n+1}(R) ⊂ W_{n+1}(R), stored by η in W_n(R)."""

    __slots__ = ("eta",)

    def __init__(self, eta: WittVector):
        self.eta = eta

    def sigma_dot(self) -> WittVector:
        return self.eta

    def kappa(self) -> CWitt:
        return cwitt_ring(self.eta.W.R, self.eta.W.n).kappa_I(self.eta)

    def representative(self) -> WittVector:
        return WittVector(witt_ring(self.eta.W.R, self.eta.W.n + 1), (0,) + self.eta.coords)

    def act(self, xi: CWitt) -> "IElement":
        """ξ·ⱽη = ⱽ(ᶠξ·η)."""
        return IElement(xi.frob * self.eta)

    def __add__(self, o: "IElement") -> "IElement":
        return IElement(self.eta + o.eta)

    def __neg__(self):
        return IElement(-self.eta)

    def __eq__(self, o):
        return isinstance(o, IElement) and o.eta == self.eta

    def __hash__(self):
        return hash(self.eta)

    def __repr__(self):
        return f"V{self.eta!r}"


# -- 𝒥_{n+1} over a square-zero thickening -----------------------------------


class JElement:
    """ã + ⱽη in 𝒥_{n+1} = 𝔞̃ ⊕ I_{n+1}(S).

    ``a`` is an element of the kernel 𝔞 (an encoded element of S) and ``eta``
    a Witt vector of length n over S.  As a Witt vector of length n+1 the
    element is (a, η_0, ..., η_{n-1}).
    """

    __slots__ = ("th", "a", "eta")

    def __init__(self, th: PdThickening, a: int, eta: WittVector):
        if not th.in_kernel(a):
            raise RingError(f"{th.S.format(a)} does not lie in the kernel ideal")
        self.th = th
        self.a = a
        self.eta = eta

    @property
    def n(self) -> int:
        return self.eta.W.n

    def sigma_dot(self) -> WittVector:
        return self.eta

    def representative(self) -> WittVector:
        return WittVector(witt_ring(self.th.S, self.n + 1), (self.a,) + self.eta.coords)

    def kappa(self) -> CWitt:
        return cwitt_ring(self.th.S, self.n).project(self.representative())

    def bar(self) -> WittVector:
        """Res κ(J) = (a, η_0, ..., η_{n-2}) in W_n(S)."""
        return WittVector(witt_ring(self.th.S, self.n), ((self.a,) + self.eta.coords)[:self.n])

    def act(self, xi: CWitt) -> "JElement":
        """ξ·(ã + ⱽη) = (w_0(ξ)a)~ + ⱽ(ᶠξ·η)."""
        S = self.th.S
        return JElement(self.th, S.mul(xi.res_raw[0], self.a), xi.frob * self.eta)

    def __mul__(self, xi):
        if isinstance(xi, CWitt):
            return self.act(xi)
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, o: "JElement") -> "JElement":
        return JElement(self.th, self.th.S.add(self.a, o.a), self.eta + o.eta)

    def __sub__(self, o: "JElement") -> "JElement":
        return JElement(self.th, self.th.S.sub(self.a, o.a), self.eta - o.eta)

    def __neg__(self):
        return JElement(self.th, self.th.S.neg(self.a), -self.eta)

    def __eq__(self, o):
        return isinstance(o, JElement) and o.a == self.a and o.eta == self.eta

    def __hash__(self):
        return hash((self.a, self.eta))

    def __repr__(self):
        return f"({self.th.S.format(self.a)})~ + V{self.eta!r}"

    def is_zero(self) -> bool:
        return self.a == 0 and self.eta.is_zero()


def j_make(th: PdThickening, a, eta) -> JElement:
    S = th.S
    a = S.parse(a) if not isinstance(a, int) else a
    if not isinstance(eta, WittVector):
        eta = witt_ring(S, len(eta))(eta)
    return JElement(th, a, eta)


def j_zero(th: PdThickening, n: int) -> JElement:
    return JElement(th, 0, witt_ring(th.S, n).zero)


def j_sigma_dot(j: JElement) -> WittVector:
    return j.sigma_dot()


def j_kappa(j: JElement) -> CWitt:
    return j.kappa()


# -- the kernel of W(S) -> W(R) in logarithmic coordinates -------------------


def log_vector(th: PdThickening, coords) -> WittVector:
    """The element of W_k(𝔞) with logarithmic coordinates ``coords``.

    For a square-zero kernel with trivial divided powers these are the Witt
    coordinates themselves.
    """
    for a in coords:
        if not th.in_kernel(a):
            raise RingError(f"{th.S.format(a)} does not lie in the kernel ideal")
    return WittVector(witt_ring(th.S, len(coords)), tuple(coords))


def kernel_cwitt(th: PdThickening, a, x_n: int) -> CWitt:
    """⟨a_0, ..., a_{n-1}, x_n⟩ in ker(𝒲_n(S) -> 𝒲_n(R)).

    Its Res-component is [a_0, ..., a_{n-1}] and its F-component
    [p a_1, ..., p a_{n-1}, x_n]; x_n must lie in pS ∩ 𝔞.
    """
    S = th.S
    if x_n not in th.pS_cap_a:
        raise RingError(f"{S.format(x_n)} is not in pS ∩ 𝔞")
    a = tuple(a)
    for v in a:
        if not th.in_kernel(v):
            raise RingError(f"{S.format(v)} does not lie in the kernel ideal")
    C = cwitt_ring(S, len(a))
    return CWitt(C, a + (th.p_preimage(x_n),))


def cwitt_elements(R: FiniteRing, n: int):
    """Enumerate 𝒲_n(R) once per element (one representative per class)."""
    C = cwitt_ring(R, n)
    seen = set()
    for rep in itertools.product(range(R.size), repeat=n + 1):
        x = CWitt(C, rep)
        if x.pair not in seen:
            seen.add(x.pair)
            yield x
