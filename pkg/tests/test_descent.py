import numpy as np
import pytest

import oracles
from conftest import F2, F2X2, F3, F4, Z4
from tdk.descent import (BasedGroup, DescentError, acyclicity_check, cech_complex, covering_make,
                         exact_sequence_check, homology)
from tdk.witt import witt_ring


def test_based_group_basis_and_logs():
    W = witt_ring(Z4, 2)
    elems = [tuple(c) for c in np.ndindex(4, 4)]
    G = BasedGroup(elems, W.add, W.zero_raw, 2)
    assert np.prod(G.orders) == 16 == G.order
    assert sorted(G.orders) == oracles.invariant_factors_of_elements(elems, W.add, W.zero_raw, 2)
    for x in elems:
        y = G.zero
        for b, c in zip(G.basis, G.dlog[x]):
            for _ in range(int(c)):
                y = W.add(y, b)
        assert y == x


@pytest.mark.parametrize("spec,S", [({"kind": "product", "k": 2}, F2X2), ({"kind": "field_ext", "deg": 2}, F4)],
                         ids=["F2xF2", "F4"])
@pytest.mark.parametrize("n", [1, 2])
def test_homology_matches_tensor_power_complex(spec, S, n):
    cov = covering_make(F2, spec)
    ref = oracles.TensorCech(S, n, 2)
    h0, h1 = ref.homology_orders(1)
    emb = (lambda a: S.from_int(a)) if spec["kind"] == "field_ext" else (lambda a: S.from_int(a))
    assert ref.h0_is_base(F2, emb)
    for variant in ("W", "cW"):
        C = cech_complex(cov, n, variant, 3)
        assert homology(C, 0).order == h0
        assert homology(C, 1).order == h1 == 1
        rep = acyclicity_check(C)
        assert rep.ok, rep.to_json()


@pytest.mark.parametrize("base,spec", [(F3, {"kind": "product", "k": 2}), (F3, {"kind": "field_ext", "deg": 2}),
                                       (Z4, {"kind": "product", "k": 3}), (F2, {"kind": "field_ext", "deg": 3})],
                         ids=["F3xF3", "F9", "Z4^3", "F8"])
def test_acyclicity_other_coverings(base, spec):
    cov = covering_make(base, spec)
    variants = ("W", "cW", "ptors") if spec["kind"] == "product" or base.size < 3 else ("W", "cW")
    for variant in variants:
        rep = acyclicity_check(cech_complex(cov, 1, variant, 3))
        assert rep.ok, (variant, rep.to_json())


def test_module_variant():
    cov = covering_make(F2, {"kind": "product", "k": 2})
    rep = acyclicity_check(cech_complex(cov, 1, "module", 3, rank=2))
    assert rep.ok and rep.h0.invariant_factors == [2, 2]  # 𝒲_1(F_2)^2


@pytest.mark.parametrize("spec", [{"kind": "product", "k": 2}, {"kind": "field_ext", "deg": 2}])
def test_exact_sequence(spec):
    rep = exact_sequence_check(covering_make(F2, spec), 2, 3)
    assert rep.ok
    assert len(rep.levels) == 4


def test_chain_groups_have_the_tensor_power_orders():
    cov = covering_make(F2, {"kind": "field_ext", "deg": 2})
    C = cech_complex(cov, 2, "W", 2)
    # |W_2(F4^{⊗(q+1)})| = |F4^{⊗(q+1)}|^2
    assert [C.chain_order(q) for q in range(3)] == [16, 16 ** 2, 256 ** 2]
    assert C.dd_zero()


def test_errors():
    with pytest.raises(DescentError):
        covering_make(F2, {"kind": "fpqc"})
    with pytest.raises(DescentError):
        covering_make(Z4, {"kind": "field_ext", "deg": 2})
    cov = covering_make(F2, {"kind": "product", "k": 2})
    with pytest.raises(DescentError):
        cech_complex(cov, 1, "nope")
    with pytest.raises(DescentError):
        cech_complex(cov, 1, "W", 0)
    with pytest.raises(DescentError):
        homology(cech_complex(cov, 1, "W", 2), 2)
