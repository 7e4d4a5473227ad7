"""Finite commutative rings in which p is nilpotent.

A ring is stored by its additive group, a direct sum of cyclic groups
``Z/m_0 + ... + Z/m_{k-1}``, together with integer structure constants for
the product of basis vectors.  Elements are encoded canonically as a single
mixed-radix integer, so equality of elements is equality of integers.  Small
rings additionally carry dense addition and multiplication tables which the
Witt-vector kernels consume directly.
"""

from __future__ import annotations

import ast
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

#: rings with more elements than this have no dense tables
TABLE_LIMIT = 1024


class RingError(ValueError):
    """Malformed or unsupported ring description."""


class NotAUnit(ArithmeticError):
    """Raised by :func:`unit_inverse` for zero divisors and other non-units."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


class FiniteRing:
    """A finite commutative unital ring with p nilpotent.

    ``basis`` names the additive generators (used for printing); ``mult`` is
    the ``k x k x k`` array with ``e_i * e_j = sum_l mult[i, j, l] e_l``.
    """

    def __init__(self, p, moduli, mult, one, basis, desc, gens=None, factors=None):
        if not is_prime(p):
            raise RingError(f"p = {p} is not prime")
        self.p = p
        self.moduli = tuple(int(m) for m in moduli)
        self.k = len(self.moduli)
        self.mult = np.asarray(mult, dtype=np.int64).reshape(self.k, self.k, self.k)
        self.basis = list(basis)
        self.desc = desc
        self.gens = dict(gens or {})
        self.factors = factors
        self._radix = [1]
        for m in self.moduli:
            self._radix.append(self._radix[-1] * m)
        self.size = self._radix[-1]
        self.zero = 0
        self.one = self.encode(one)
        for m in self.moduli:
            q = m
            while q % p == 0:
                q //= p
            if q != 1:
                raise RingError(f"additive order {m} is not a power of p = {p}")
        self.t = self._char_exponent()

    # -- encoding -----------------------------------------------------------

    def encode(self, coords) -> int:
        return sum((int(c) % m) * r for c, m, r in zip(coords, self.moduli, self._radix))

    def decode(self, x: int) -> tuple:
        return tuple((x // r) % m for m, r in zip(self.moduli, self._radix))

    @cached_property
    def _coords(self) -> np.ndarray:
        idx = np.arange(self.size, dtype=np.int64)
        radix = np.array(self._radix[:-1], dtype=np.int64)
        mod = np.array(self.moduli, dtype=np.int64)
        return (idx[:, None] // radix[None, :]) % mod[None, :]

    def _encode_array(self, coords: np.ndarray) -> np.ndarray:
        coords = coords % np.array(self.moduli, dtype=np.int64)
        return coords @ np.array(self._radix[:-1], dtype=np.int64)

    # -- dense tables -------------------------------------------------------

    @property
    def tabulated(self) -> bool:
        return self.size <= TABLE_LIMIT

    @cached_property
    def add_table(self) -> np.ndarray:
        self._require_tables()
        c = self._coords
        s = c[:, None, :] + c[None, :, :]
        return self._encode_array(s).astype(np.int32)

    @cached_property
    def mul_table(self) -> np.ndarray:
        self._require_tables()
        c = self._coords
        out = np.empty((self.size, self.size), dtype=np.int32)
        for a in range(self.size):
            # a * e_j = sum_i a_i mult[i, j, :]
            row = np.tensordot(c[a], self.mult, axes=(0, 0))  # k x k
            out[a] = self._encode_array(c @ row)
        return out

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self._encode_array(-self._coords).astype(np.int32)

    def _require_tables(self):
        if not self.tabulated:
            raise RingError(f"ring of size {self.size} is too large to tabulate")

    # -- arithmetic on encoded elements -------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.tabulated:
            return int(self.add_table[a, b])
        return self.encode(x + y for x, y in zip(self.decode(a), self.decode(b)))

    def neg(self, a: int) -> int:
        if self.tabulated:
            return int(self.neg_table[a])
        return self.encode(-x for x in self.decode(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.tabulated:
            return int(self.mul_table[a, b])
        ca = np.array(self.decode(a), dtype=np.int64)
        cb = np.array(self.decode(b), dtype=np.int64)
        return self.encode(np.einsum("i,j,ijl->l", ca, cb, self.mult))

    def from_int(self, c: int) -> int:
        return self.encode(c * x for x in self.decode(self.one))

    def scale(self, c: int, a: int) -> int:
        return self.encode(c * x for x in self.decode(a))

    def pow(self, a: int, e: int) -> int:
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def sum(self, xs) -> int:
        acc = 0
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def _char_exponent(self) -> int:
        t, x = 0, self.one
        while x != 0:
            x = self.scale(self.p, x)
            t += 1
            if t > 64:
                raise RingError("p is not nilpotent")
        return t

    # -- enumeration & helpers ----------------------------------------------

    def elements(self) -> range:
        return range(self.size)

    def element(self, x) -> "RingElement":
        if isinstance(x, RingElement):
            if x.ring is not self:
                raise RingError("element belongs to a different ring")
            return x
        if isinstance(x, int):
            return RingElement(self, x)
        return RingElement(self, self.parse(x))

    def is_unit(self, a: int) -> bool:
        try:
            unit_inverse(self, a)
        except NotAUnit:
            return False
        return True

    def format(self, a: int) -> str:
        if self.factors is not None:
            parts, off = [], 0
            coords = self.decode(a)
            for f in self.factors:
                parts.append(f.format(f.encode(coords[off:off + f.k])))
                off += f.k
            return "(" + ",".join(parts) + ")"
        terms = []
        for c, name in zip(self.decode(a), self.basis):
            if c == 0:
                continue
            if name == "1":
                terms.append(str(c))
            elif c == 1:
                terms.append(name)
            else:
                terms.append(f"{c}*{name}")
        return "+".join(terms) if terms else "0"

    def parse(self, s) -> int:
        """Parse an element from its string form, an integer or a coordinate list."""
        if isinstance(s, bool):
            raise RingError(f"cannot parse {s!r} as a ring element")
        if isinstance(s, int):
            return self.from_int(s)
        if isinstance(s, (list, tuple)):
            if len(s) != self.k:
                raise RingError(f"expected {self.k} coordinates, got {len(s)}")
            return self.encode(s)
        if not isinstance(s, str):
            raise RingError(f"cannot parse {s!r} as a ring element")
        try:
            tree = ast.parse(s.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise RingError(f"malformed element {s!r}") from exc
        return self._eval_ast(tree.body, s)

    def _eval_ast(self, node, src) -> int:
        if isinstance(node, ast.Tuple):
            if self.factors is None or len(node.elts) != len(self.factors):
                raise RingError(f"tuple element {src!r} does not match ring")
            coords = []
            for f, sub in zip(self.factors, node.elts):
                coords.extend(f.decode(f._eval_ast(sub, src)))
            return self.encode(coords)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return self.from_int(node.value)
        if isinstance(node, ast.Name):
            if node.id not in self.gens:
                raise RingError(f"unknown generator {node.id!r} in {src!r}")
            return self.gens[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self._eval_ast(node.operand, src)
            return self.neg(v) if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                        and node.right.value >= 0):
                    raise RingError(f"bad exponent in {src!r}")
                return self.pow(self._eval_ast(node.left, src), node.right.value)
            a = self._eval_ast(node.left, src)
            b = self._eval_ast(node.right, src)
            if isinstance(node.op, ast.Add):
                return self.add(a, b)
            if isinstance(node.op, ast.Sub):
                return self.sub(a, b)
            if isinstance(node.op, ast.Mult):
                return self.mul(a, b)
        raise RingError(f"unsupported syntax in element {src!r}")

    def __repr__(self):
        return f"FiniteRing({describe(self.desc)}, size={self.size})"

    def __eq__(self, other):
        return isinstance(other, FiniteRing) and self.desc == other.desc

    def __hash__(self):
        return hash(repr(self.desc))


@dataclass(frozen=True)
class RingElement:
    """User-facing wrapper around an encoded element."""

    ring: FiniteRing = field(compare=False)
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.ring.size:
            raise RingError(f"{self.value} does not encode an element")

    def _coerce(self, other):
        if isinstance(other, RingElement):
            return other.value
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else RingElement(self.ring, self.ring.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else RingElement(self.ring, self.ring.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else RingElement(self.ring, self.ring.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else RingElement(self.ring, self.ring.mul(self.value, o))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.value))

    def __pow__(self, e: int):
        return RingElement(self.ring, self.ring.pow(self.value, e))

    def __str__(self):
        return self.ring.format(self.value)

    def __repr__(self):
        return f"<{self.ring.format(self.value)}>"


# -- constructors ----------------------------------------------------------


def zmod(p: int, t: int = 1) -> FiniteRing:
    if t < 1:
        raise RingError("t must be positive")
    return FiniteRing(p, [p ** t], [[[1]]], [1], ["1"], {"kind": "zmod", "p": p, "t": t})


def _parse_poly(s: str, names):
    import sympy

    symbols = {v: sympy.Symbol(v) for v in names}
    try:
        return sympy.sympify(s.replace("^", "**"), locals=symbols)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise RingError(f"malformed relation {s!r}") from exc


def fp_poly_quot(p: int, variables, rels) -> FiniteRing:
    """F_p[variables]/(rels), which must be finite over F_p."""
    import sympy

    if not is_prime(p):
        raise RingError(f"p = {p} is not prime")
    variables = list(variables)
    if len(set(variables)) != len(variables) or not variables:
        raise RingError("variables must be distinct and non-empty")
    syms = [sympy.Symbol(v) for v in variables]
    polys = [_parse_poly(r, variables) for r in rels]
    G = sympy.groebner(polys, *syms, modulus=p, order="grevlex") if polys else None
    if G is None or list(G.exprs) == []:
        raise RingError("relations do not define a finite ring")
    if any(g == 1 for g in G.exprs):
        raise RingError("relations generate the unit ideal")
    leads = [sympy.Poly(g, *syms, modulus=p).monoms(order="grevlex")[0] for g in G.exprs]
    bounds = []
    for i in range(len(syms)):
        pure = [lm[i] for lm in leads if all(e == 0 for j, e in enumerate(lm) if j != i)]
        if not pure:
            raise RingError(f"quotient is infinite in variable {variables[i]}")
        bounds.append(min(pure))
    monos = [m for m in itertools.product(*(range(b) for b in bounds))
             if not any(all(a >= b for a, b in zip(m, lm)) for lm in leads)]
    monos.sort(key=lambda m: (sum(m), tuple(-x for x in m)))
    index = {m: i for i, m in enumerate(monos)}
    k = len(monos)
    mult = np.zeros((k, k, k), dtype=np.int64)
    for i, a in enumerate(monos):
        for j, b in enumerate(monos):
            prod = sympy.Mul(*[s ** (x + y) for s, x, y in zip(syms, a, b)])
            _, rem = sympy.reduced(prod, list(G.exprs), *syms, modulus=p, order="grevlex")
            for mono, c in sympy.Poly(rem, *syms, modulus=p).terms():
                mult[i, j, index[mono]] = int(c) % p
    names = [_mono_name(m, variables) for m in monos]
    one = [0] * k
    one[index[(0,) * len(syms)]] = 1
    ring = FiniteRing(p, [p] * k, mult, one, names,
                      {"kind": "fp_poly_quot", "p": p, "vars": variables, "rels": list(rels)})
    for v, s in zip(variables, syms):
        e = tuple(1 if x == s else 0 for x in syms)
        if e in index:
            ring.gens[v] = ring.encode([1 if i == index[e] else 0 for i in range(k)])
        else:
            # the variable itself reduces to a combination of standard monomials
            _, rem = sympy.reduced(s, list(G.exprs), *syms, modulus=p, order="grevlex")
            coords = [0] * k
            for mono, c in sympy.Poly(rem, *syms, modulus=p).terms():
                coords[index[mono]] = int(c) % p
            ring.gens[v] = ring.encode(coords)
    return ring


def _mono_name(m, names) -> str:
    parts = []
    for e, v in zip(m, names):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) if parts else "1"


def square_zero_ext(base: FiniteRing, gens) -> FiniteRing:
    """base + base*e_1 + ... + base*e_g with all products e_i e_j = 0."""
    gens = list(gens)
    if not gens or len(set(gens)) != len(gens):
        raise RingError("square-zero extension needs distinct generator names")
    if set(gens) & set(base.gens):
        raise RingError("generator names clash with the base ring")
    kb, g = base.k, len(gens)
    k = kb * (g + 1)
    mult = np.zeros((k, k, k), dtype=np.int64)
    for a in range(g + 1):
        for b in range(g + 1):
            if a and b:
                continue
            c = a or b
            mult[a * kb:(a + 1) * kb, b * kb:(b + 1) * kb, c * kb:(c + 1) * kb] = base.mult
    one = list(base.decode(base.one)) + [0] * (kb * g)
    names = list(base.basis)
    for e in gens:
        names += [e if b == "1" else f"{b}*{e}" for b in base.basis]
    ring = FiniteRing(base.p, list(base.moduli) * (g + 1), mult, one, names,
                      {"kind": "square_zero_ext", "base": base.desc, "gens": gens})
    for name, x in base.gens.items():
        ring.gens[name] = ring.encode(list(base.decode(x)) + [0] * (kb * g))
    for a, e in enumerate(gens, start=1):
        coords = [0] * k
        coords[a * kb:(a + 1) * kb] = base.decode(base.one)
        ring.gens[e] = ring.encode(coords)
    return ring


def product(factors) -> FiniteRing:
    factors = list(factors)
    if not factors:
        raise RingError("product needs at least one factor")
    p = factors[0].p
    if any(f.p != p for f in factors):
        raise RingError("factors have different primes")
    k = sum(f.k for f in factors)
    mult = np.zeros((k, k, k), dtype=np.int64)
    one, moduli, names, off = [], [], [], 0
    for i, f in enumerate(factors):
        mult[off:off + f.k, off:off + f.k, off:off + f.k] = f.mult
        one += list(f.decode(f.one))
        moduli += f.moduli
        names += [f"{b}@{i}" for b in f.basis]
        off += f.k
    return FiniteRing(p, moduli, mult, one, names,
                      {"kind": "product", "factors": [f.desc for f in factors]}, factors=factors)


def tensor_over_fp(A: FiniteRing, B: FiniteRing) -> FiniteRing:
    """A (x)_{F_p} B for F_p-algebras (all moduli equal to p)."""
    p = A.p
    if B.p != p or any(m != p for m in A.moduli + B.moduli):
        raise RingError("tensor products are only supported over F_p")
    ka, kb = A.k, B.k
    mult = np.einsum("ijk,abc->iajbkc", A.mult, B.mult).reshape(ka * kb, ka * kb, ka * kb) % p
    one = np.outer(A.decode(A.one), B.decode(B.one)).reshape(-1)
    names = [f"{a}|{b}" for a in A.basis for b in B.basis]
    return FiniteRing(p, [p] * (ka * kb), mult, one, names,
                      {"kind": "tensor", "factors": [A.desc, B.desc]})


def tensor_inclusion(A: FiniteRing, B: FiniteRing, T: FiniteRing, side: int) -> "RingHom":
    """a -> a (x) 1 (side 0) or b -> 1 (x) b (side 1) into T = A (x) B."""
    src = A if side == 0 else B
    oa, ob = np.array(A.decode(A.one)), np.array(B.decode(B.one))

    def fn(x):
        v = np.array(src.decode(x))
        coords = np.outer(v, ob) if side == 0 else np.outer(oa, v)
        return T.encode(coords.reshape(-1))

    return RingHom.from_function(src, T, fn)


def ring_make(spec) -> FiniteRing:
    """Build a ring from its JSON-style descriptor."""
    if isinstance(spec, FiniteRing):
        return spec
    if not isinstance(spec, dict) or "kind" not in spec:
        raise RingError(f"malformed ring descriptor {spec!r}")
    kind = spec["kind"]
    try:
        if kind == "zmod":
            return zmod(int(spec["p"]), int(spec.get("t", 1)))
        if kind == "fp_poly_quot":
            return fp_poly_quot(int(spec["p"]), spec["vars"], spec.get("rels", []))
        if kind == "square_zero_ext":
            return square_zero_ext(ring_make(spec["base"]), spec["gens"])
        if kind == "product":
            return product(ring_make(f) for f in spec["factors"])
        if kind == "tensor":
            a, b = (ring_make(f) for f in spec["factors"])
            return tensor_over_fp(a, b)
    except KeyError as exc:
        raise RingError(f"ring descriptor missing field {exc}") from exc
    raise RingError(f"unknown ring kind {kind!r}")


def describe(desc) -> str:
    kind = desc["kind"]
    if kind == "zmod":
        return f"Z/{desc['p']}^{desc['t']}" if desc["t"] > 1 else f"F_{desc['p']}"
    if kind == "fp_poly_quot":
        return f"F_{desc['p']}[{','.join(desc['vars'])}]/({','.join(desc['rels'])})"
    if kind == "square_zero_ext":
        return f"{describe(desc['base'])}[{','.join(desc['gens'])}]"
    if kind == "product":
        return " x ".join(describe(f) for f in desc["factors"])
    if kind == "tensor":
        return " (x) ".join(describe(f) for f in desc["factors"])
    return kind


# -- elementwise operations ------------------------------------------------


def unit_inverse(R: FiniteRing, a) -> int:
    """Inverse of ``a`` in ``R``; raises :class:`NotAUnit` if there is none."""
    a = a.value if isinstance(a, RingElement) else a
    if a == R.one:
        return R.one
    if R.tabulated:
        hits = np.flatnonzero(R.mul_table[a] == R.one)
        if hits.size == 0:
            raise NotAUnit(f"{R.format(a)} is not a unit")
        return int(hits[0])
    # u is a unit iff its image in the reduced ring is; invert by the
    # geometric series of the nilpotent part is not available generically,
    # so fall back to powering: a^(|R^*| - 1) with |R^*| dividing the group
    # exponent of the finite unit group
    for e in range(1, R.size + 1):
        if R.pow(a, e) == R.one:
            return R.pow(a, e - 1)
    raise NotAUnit(f"{R.format(a)} is not a unit")


def p_torsion(R: FiniteRing) -> list[int]:
    """All s in R with p*s = 0."""
    if not R.tabulated:
        raise RingError("p_torsion needs an enumerable ring")
    return [s for s in R.elements() if R.scale(R.p, s) == 0]


def ideal_span(R: FiniteRing, gens) -> frozenset:
    """The ideal generated by ``gens``, by closure under R-multiples and sums."""
    span = {0}
    for g in gens:
        multiples = {R.mul(g, r) for r in R.elements()}
        span = {R.add(a, b) for a in span for b in multiples}
    return frozenset(span)


# -- homomorphisms ---------------------------------------------------------


class RingHom:
    """A ring homomorphism given by its full table of images."""

    def __init__(self, source: FiniteRing, target: FiniteRing, images, check: bool = True):
        self.source = source
        self.target = target
        self.images = np.asarray(images, dtype=np.int64)
        if self.images.shape != (source.size,):
            raise RingError("image table has the wrong length")
        if check:
            self.verify()

    @classmethod
    def from_function(cls, source, target, fn, check=True):
        return cls(source, target, [fn(x) for x in source.elements()], check)

    @classmethod
    def from_images(cls, source: FiniteRing, target: FiniteRing, images: dict, check=True):
        """Extend generator images; ``source`` must not be a product ring."""
        if source.factors is not None:
            raise RingError("homs out of product rings need an explicit table")
        gen_img = {}
        for name, val in images.items():
            if name not in source.gens:
                raise RingError(f"unknown generator {name!r}")
            gen_img[name] = target.parse(val) if not isinstance(val, int) else val
        missing = set(source.gens) - set(gen_img)
        if missing:
            raise RingError(f"missing images for generators {sorted(missing)}")
        basis_img = [_basis_expr(b, gen_img, target) for b in source.basis]

        def fn(x):
            acc = 0
            for c, img in zip(source.decode(x), basis_img):
                acc = target.add(acc, target.scale(c, img))
            return acc

        return cls.from_function(source, target, fn, check)

    @classmethod
    def identity(cls, R):
        return cls(R, R, np.arange(R.size), check=False)

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def compose(self, other: "RingHom") -> "RingHom":
        """self after other."""
        return RingHom(other.source, self.target, self.images[other.images], check=False)

    def verify(self):
        S, T, f = self.source, self.target, self.images
        if f[0] != 0 or f[S.one] != T.one:
            raise RingError("map does not preserve 0 and 1")
        if S.tabulated and T.tabulated and S.size <= 256:
            if not np.array_equal(f[S.add_table], T.add_table[np.ix_(f, f)]):
                raise RingError("map is not additive")
            if not np.array_equal(f[S.mul_table], T.mul_table[np.ix_(f, f)]):
                raise RingError("map is not multiplicative")
        else:
            rng = np.random.default_rng(0)
            for a, b in rng.integers(0, S.size, size=(500, 2)):
                a, b = int(a), int(b)
                if f[S.add(a, b)] != T.add(int(f[a]), int(f[b])):
                    raise RingError("map is not additive")
                if f[S.mul(a, b)] != T.mul(int(f[a]), int(f[b])):
                    raise RingError("map is not multiplicative")

    def kernel(self) -> frozenset:
        return frozenset(int(x) for x in np.flatnonzero(self.images == 0))

    def is_surjective(self) -> bool:
        return len(set(self.images.tolist())) == self.target.size


def _basis_expr(name: str, gen_img: dict, target: FiniteRing) -> int:
    # basis names are products of generator powers such as "x^2*e"
    acc = target.one
    if name == "1":
        return acc
    for part in name.split("*"):
        base, _, exp = part.partition("^")
        acc = target.mul(acc, target.pow(gen_img[base], int(exp) if exp else 1))
    return acc


# -- nilpotent algebras and thickenings --------------------------------------


class NilAlgebra:
    """A nilpotent non-unital algebra N, stored inside its unitisation.

    ``ambient`` is ``base[gens]/(rels)`` and ``N`` is the ideal generated by
    the generators; ``base`` must satisfy pR = 0.
    """

    def __init__(self, ambient: FiniteRing, gen_names, base: FiniteRing, desc=None):
        self.ambient = ambient
        self.base = base
        self.p = ambient.p
        self.gen_names = list(gen_names)
        self.gens = [ambient.gens[g] for g in self.gen_names]
        self.desc = desc
        if ambient.scale(ambient.p, ambient.one) != 0:
            raise RingError("nil algebras need a base ring with pR = 0")
        self.elements = sorted(ideal_span(ambient, self.gens)) if self.gens else [0]
        self.element_set = frozenset(self.elements)
        self.nil_class = self._nil_class()
        self.frob_exp = self._frob_exp()

    @property
    def size(self) -> int:
        return len(self.elements)

    def _nil_class(self) -> int:
        # least k with N^k = 0, via products of spanning elements
        k, layer = 1, set(self.elements)
        while any(x != 0 for x in layer):
            layer = {self.ambient.mul(a, g) for a in layer for g in self.elements}
            k += 1
            if k > 64:
                raise RingError("algebra is not nilpotent")
        return k

    def _frob_exp(self) -> int:
        A, n = self.ambient, 0
        while any(A.pow(x, self.p ** n) != 0 for x in self.elements):
            n += 1
        return n

    def base_embedding(self) -> RingHom:
        """R -> unitisation, defined on the F_p-span of 1 (base must be prime field)."""
        return RingHom.from_function(self.base, self.ambient,
                                     lambda x: self.ambient.from_int(self.base.decode(x)[0]))


def nil_algebra(spec) -> NilAlgebra:
    """From {"base": {...}, "gens": [...], "rels": [...]}; base must be F_p."""
    base = ring_make(spec["base"])
    if base.desc["kind"] != "zmod" or base.desc["t"] != 1:
        raise RingError("nil algebras are supported over prime fields")
    gens = list(spec["gens"])
    if not gens:
        ambient = base
    else:
        ambient = fp_poly_quot(base.p, gens, spec.get("rels", []))
    N = NilAlgebra(ambient, gens, base, desc=dict(spec))
    declared = spec.get("frob_exp")
    if declared is not None and int(declared) < N.frob_exp:
        raise RingError(f"declared frob_exp {declared} but x^(p^{declared}) != 0 for some x")
    # the augmentation must kill all generators: check that 1 is not in N
    if ambient.one in N.element_set:
        raise RingError("generators do not span a proper nilpotent ideal")
    return N


@dataclass
class PdThickening:
    """A surjection S -> R with square-zero kernel (trivial divided powers)."""

    S: FiniteRing
    R: FiniteRing
    surjection: RingHom
    kernel_gens: list
    kernel: frozenset
    m: int
    section: list = field(default_factory=list)

    @property
    def p(self):
        return self.S.p

    def lift(self, r: int) -> int:
        """A fixed set-theoretic section R -> S."""
        return self.section[r]

    def reduce(self, s: int) -> int:
        return self.surjection(s)

    def in_kernel(self, s: int) -> bool:
        return s in self.kernel

    @cached_property
    def pS_cap_a(self) -> frozenset:
        pS = {self.S.scale(self.p, s) for s in self.S.elements()}
        return frozenset(pS & self.kernel)

    def p_preimage(self, x: int) -> int:
        """Some s in S with p*s = x (x must lie in pS)."""
        for s in self.S.elements():
            if self.S.scale(self.p, s) == x:
                return s
        raise RingError(f"{self.S.format(x)} is not divisible by p")


def thickening_make(S: FiniteRing, kernel_gens, R: FiniteRing, surjection: RingHom | None = None,
                    images: dict | None = None) -> PdThickening:
    """Validate a square-zero pd-thickening S -> R with kernel (kernel_gens)."""
    gens = [S.parse(g) if not isinstance(g, int) else g for g in kernel_gens]
    for a in gens:
        for b in gens:
            if S.mul(a, b) != 0:
                raise RingError("kernel is not square-zero; only trivial divided powers are supported")
    ideal = ideal_span(S, gens)
    if S.one in ideal:
        raise RingError("kernel ideal is not proper")
    if surjection is None:
        if images is not None:
            surjection = RingHom.from_images(S, R, images)
        else:
            surjection = _find_quotient_map(S, R, ideal)
    if surjection.source is not S or surjection.target is not R:
        raise RingError("surjection has the wrong source or target")
    if not surjection.is_surjective():
        raise RingError("map S -> R is not surjective")
    if surjection.kernel() != ideal:
        raise RingError("kernel of S -> R differs from the ideal generated by the given elements")
    m = 0
    while any(S.scale(S.p ** m, a) != 0 for a in gens):
        m += 1
    section = [0] * R.size
    seen = [False] * R.size
    for s in S.elements():
        r = surjection(s)
        if not seen[r]:
            seen[r] = True
            section[r] = s
    section[R.one] = S.one
    return PdThickening(S, R, surjection, gens, ideal, m, section)


def _find_quotient_map(S: FiniteRing, R: FiniteRing, ideal: frozenset) -> RingHom:
    """Search generator images for a surjection S -> R killing ``ideal``."""
    if S.factors is not None:
        raise RingError("give the surjection explicitly for product rings")
    names = sorted(S.gens)
    for imgs in itertools.product(R.elements(), repeat=len(names)):
        try:
            f = RingHom.from_images(S, R, dict(zip(names, imgs)))
        except RingError:
            continue
        if f.is_surjective() and f.kernel() == ideal:
            return f
    raise RingError("no surjection S -> R with the given kernel exists")
