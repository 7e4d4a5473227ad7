import numpy as np
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from tdk.abgroup import AbGroupPresentation, PModule, integer_kernel, smith_invariants

small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(0, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-12, 12), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_smith_matches_sympy(rows):
    g = len(rows)
    ours = smith_invariants(rows, g)
    if not rows[0]:
        assert ours == [0] * g
        return
    from sympy.matrices.normalforms import smith_normal_form

    snf = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    ref = [abs(int(snf[i, i])) for i in range(min(snf.shape))] + [0] * (g - min(snf.shape))
    assert ours == ref


@settings(max_examples=100, deadline=None)
@given(small_matrices)
def test_integer_kernel(rows):
    m = len(rows[0])
    basis = integer_kernel(rows, m)
    A = np.array(rows, dtype=np.int64).reshape(len(rows), m)
    for v in basis:
        assert not np.any(A @ np.array(v, dtype=np.int64))
    rank = sympy.Matrix(rows).rank() if m else 0
    assert len(basis) == m - rank


def test_presentations():
    G = AbGroupPresentation.from_relations(2, [[2, 0], [0, 4]])
    assert G.invariant_factors == [2, 4] and G.order == 8 and G.exponent == 4
    assert AbGroupPresentation.from_relations(1, [[1]]).is_trivial()
    assert AbGroupPresentation.from_relations(2, [[2], [0]]).order is None
    assert G.to_json() == {"order": 8, "factors": [2, 4]}


def test_pmodule_quotients():
    # (Z/8)^2 modulo nothing; quotient of the whole by <(2, 0), (0, 4)>
    M = PModule(2, 3, 2, np.zeros((2, 0), dtype=np.int64))
    assert M.log_order == 6
    sub = np.array([[2, 0], [0, 4]])
    assert M.span_log_order(sub) == 3
    assert sorted(M.quotient_factors(np.eye(2, dtype=np.int64), sub)) == [2, 4]
