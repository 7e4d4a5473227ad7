import numpy as np
import pytest

import oracles
from conftest import F2, F2E, F3, F4, Z4
from tdk.display import (DisplayError, DisplayMorphism, F_eval, Fdot_eval, NotNilpotent, base_change, direct_sum,
                         display_make, etale_display, identity_morphism, iota, morphism_compose, morphism_validate,
                         multiplicative_display, nilpotence_order, random_display, random_isomorphism,
                         reconstruct_J, supersingular_display, transport_display, truncate, vsharp_matrix)
from tdk.matrices import Matrix
from tdk.rings import RingError, RingHom
from tdk.witt import witt_ring


def chain(P, rng, k=3):
    out = []
    for _ in range(k):
        P, a = random_isomorphism(P, rng)
        out.append(a)
    return out


@pytest.mark.parametrize("R", [F2, F3, Z4, F2E], ids=["F2", "F3", "Z4", "F2E"])
def test_category_laws(R, rng):
    P = random_display(R, 2, 1, 1, rng)
    a1, a2, a3 = chain(P, rng)
    for a in (a1, a2, a3):
        assert morphism_validate(a)
        assert morphism_compose(a, identity_morphism(a.source)) == a
        assert morphism_compose(identity_morphism(a.target), a) == a
    left = morphism_compose(a3, morphism_compose(a2, a1))
    right = morphism_compose(morphism_compose(a3, a2), a1)
    assert left == right
    assert morphism_validate(left)


def test_composition_requires_matching_ends(rng):
    P = supersingular_display(F3, 2)
    _, a = random_isomorphism(P, rng)
    with pytest.raises(RingError):
        morphism_compose(a, a)


@pytest.mark.parametrize("R", [F2, Z4], ids=["F2", "Z4"])
def test_faithfulness(R, rng):
    P = random_display(R, 2, 1, 2, rng)
    for a in chain(P, rng, 4):
        assert reconstruct_J(a.source, a.target, a.p_map()) == a.J


def test_corrupted_morphism_is_rejected(rng):
    P = supersingular_display(F3, 2)
    _, a = random_isomorphism(P, rng)
    C = P.C
    bad = DisplayMorphism(a.source, a.target, a.X + Matrix([[C.one]], C.zero), a.J, a.Z, a.Y)
    v = morphism_validate(bad)
    assert not v and v.entry is not None and v.lhs != v.rhs


def test_invertibility_is_checked():
    with pytest.raises(DisplayError):
        display_make(F2, 1, 1, 1, [[[0], [0]], [[0], [0]]])
    with pytest.raises(ValueError):
        display_make(F2, 1, 1, 0, [[[1], [0]], [[0], [1]]])


def test_standard_displays():
    assert nilpotence_order(multiplicative_display(F2, 2)) == 0
    assert nilpotence_order(supersingular_display(F2, 2)) == 1
    with pytest.raises(NotNilpotent):
        nilpotence_order(etale_display(F3, 2))


@pytest.mark.parametrize("R", [F2, F3], ids=["F2", "F3"])
def test_nilpotence_against_iteration(R, rng):
    for d, c in ((0, 2), (1, 1), (0, 3), (1, 2)):
        for _ in range(15):
            P = random_display(R, 2, d, c, rng)
            try:
                ours = nilpotence_order(P, bound=8)
            except NotNilpotent:
                ours = None
            assert ours == oracles.nilpotence_by_iteration(P, 8)


def test_nilpotent_of_order_two():
    # M^{-1} is the cyclic permutation with D̂ = ((0,0),(1,0))
    W = witt_ring(F2, 2)
    o, z = W.one, W.zero
    Mi = Matrix([[z, z, o], [o, z, z], [z, o, z]], z)
    P = display_make(F2, 2, 1, 2, Mi.transpose())
    assert nilpotence_order(P) == oracles.nilpotence_by_iteration(P) == 2
    # with d = 0 the block D̂ is all of M^{-1}, hence never nilpotent
    with pytest.raises(NotNilpotent):
        nilpotence_order(display_make(F2, 2, 0, 2, Matrix([[z, o], [o, z]], z)))


def test_truncation_commutes_with_composition(rng):
    P = random_display(Z4, 3, 1, 1, rng)
    a1, a2 = chain(P, rng, 2)
    for m in (1, 2):
        t = truncate(morphism_compose(a2, a1), m)
        assert t == morphism_compose(truncate(a2, m), truncate(a1, m))
        assert morphism_validate(t)
    with pytest.raises(RingError):
        truncate(P, 4)


def test_base_change_preserves_morphisms(rng):
    phi = RingHom.from_images(F2, F4, {})
    P = random_display(F2, 2, 1, 1, rng)
    a1, a2 = chain(P, rng, 2)
    b = base_change(morphism_compose(a2, a1), phi)
    assert morphism_validate(b)
    assert b == morphism_compose(base_change(a2, phi), base_change(a1, phi))
    assert base_change(identity_morphism(P), phi) == identity_morphism(base_change(P, phi))


def test_operators_and_vsharp(rng):
    P = random_display(Z4, 2, 1, 1, rng)
    C, W = P.C, P.W
    eta = Matrix([[W.one]], W.zero)
    ell = Matrix([[C.one]], C.zero)
    # F(ι(ⱽη; ℓ)) = p·Ḟ(ⱽη; ℓ) on the Res side
    Fi = F_eval(P, iota(P, eta, ell))
    pFd = Fdot_eval(P, eta, ell).scale(W.integer(P.R.p))
    assert Fi.map(lambda x: x, Fi.zero) == pFd
    # V♯ ∘ (A pB; C pD) = p
    Vs = vsharp_matrix(P)
    A, B, Cb, D = P.blocks
    p = W.integer(2)
    Mp = Matrix.block(A, B.scale(p), Cb, D.scale(p))
    assert Vs @ Mp == Matrix.identity(2, W.zero, W.one).scale(p)


def test_transport_and_direct_sum(rng):
    P = supersingular_display(F3, 2)
    Q = multiplicative_display(F3, 2)
    E = direct_sum(P, Q)
    assert (E.d, E.c) == (2, 1)
    assert nilpotence_order(E) == 1
    Ep, a = random_isomorphism(E, rng)
    Eq, b = transport_display(E, a.X, a.J, a.Z, a.Y)
    assert Eq == Ep and morphism_validate(b)
