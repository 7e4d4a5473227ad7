import pytest

import oracles
from conftest import F2, F3
from tdk.display import direct_sum, etale_display, multiplicative_display, supersingular_display
from tdk.hatw import HatWittGroup
from tdk.points import PointsError, bt_points, fg_map, fg_points, hat_modules, mu_oracle, torsion_subgroup
from tdk.rings import nil_algebra


def nil(R, gens, rels):
    return nil_algebra({"base": R.desc, "gens": gens, "rels": rels})


CASES = [(F2, ["x"], ["x^2"], 2), (F2, ["x"], ["x^3"], 2), (F2, ["x"], ["x^4"], 2),
         (F3, ["x"], ["x^2"], 1), (F3, ["x"], ["x^3"], 1), (F2, ["x", "y"], ["x^2", "y^2"], 2)]


@pytest.mark.parametrize("R,gens,rels,n", CASES, ids=lambda v: str(v))
def test_multiplicative_points_are_one_plus_N(R, gens, rels, n):
    N = nil(R, gens, rels)
    res = fg_points(multiplicative_display(N.base, n), N)
    assert res.injective
    assert res.order == oracles.one_plus_torsion_order(N, None)
    assert res.group.invariant_factors == mu_oracle(N, 10).invariant_factors


@pytest.mark.parametrize("R,gens,rels,n", CASES, ids=lambda v: str(v))
def test_etale_points_vanish(R, gens, rels, n):
    N = nil(R, gens, rels)
    assert fg_points(etale_display(N.base, n), N).order == 1


def test_bt_points_of_multiplicative():
    N = nil(F2, ["x"], ["x^4"])
    G = bt_points(multiplicative_display(N.base, 2), 1, N)
    assert G.order == 4 == oracles.one_plus_torsion_order(N, 1) == mu_oracle(N, 1).order


def test_bt_points_needs_frobenius_bound():
    N = nil(F2, ["x"], ["x^8"])
    with pytest.raises(PointsError):
        bt_points(multiplicative_display(N.base, 2), 1, N)


def test_points_of_direct_sums_multiply():
    N = nil(F2, ["x"], ["x^3"])
    R = N.base
    a = fg_points(multiplicative_display(R, 2), N).order
    b = fg_points(supersingular_display(R, 2), N).order
    assert fg_points(direct_sum(multiplicative_display(R, 2), supersingular_display(R, 2)), N).order == a * b


def test_stabilisation_record():
    N = nil(F2, ["x"], ["x^4"])
    res = fg_points(supersingular_display(N.base, 2), N)
    ks = sorted(res.orders)
    assert res.orders[ks[-1]] == res.orders[ks[-2]]


def test_hat_witt_presentation_has_the_right_order():
    N = nil(F2, ["x"], ["x^3"])
    G = HatWittGroup(N, 2)
    assert G.module.log_order == G.L * 2  # |W_L(N)| = |N|^L = 4^L


def test_fdot_minus_one_is_injective():
    N = nil(F3, ["x"], ["x^3"])
    for P in (multiplicative_display(N.base, 1), supersingular_display(N.base, 1), etale_display(N.base, 1)):
        hm = hat_modules(P, N, 2)
        assert hm.images.shape[1] == hm.p_gens.shape[1]


@pytest.mark.parametrize("P_fn", [multiplicative_display, supersingular_display], ids=["mult", "ss"])
def test_functoriality_in_N(P_fn):
    A = nil(F2, ["x"], ["x^4"])
    B = nil(F2, ["x"], ["x^2"])
    P = P_fn(A.base, 2)
    m = fg_map(P, A, B, {"x": "x"})
    assert m.well_defined and m.commutes
    assert m.image.order == m.target.order  # x -> x is onto
    z = fg_map(P, A, B, {"x": "0"})
    assert z.image.order == 1


def test_functoriality_rejects_non_maps():
    A = nil(F2, ["x"], ["x^2"])
    B = nil(F2, ["x"], ["x^2"])
    with pytest.raises(PointsError):
        fg_map(multiplicative_display(A.base, 2), A, B, {"x": "1"})


def test_torsion_subgroup():
    from tdk.abgroup import AbGroupPresentation

    G = AbGroupPresentation.from_factors([2, 8])
    assert torsion_subgroup(G, 2, 2).invariant_factors == [2, 4]
    assert torsion_subgroup(G, 2, 0).order == 1
