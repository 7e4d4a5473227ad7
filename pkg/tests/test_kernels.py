import importlib.util

import numpy as np
import pytest

from conftest import F3, F4, Z4
from tdk import kernels, polys
from tdk.matrices import Matrix, ring_det, ring_inverse, witt_identity, witt_inverse
from tdk.rings import NotAUnit
from tdk.witt import witt_ring

HAVE_C = importlib.util.find_spec("tdk._ckernels") is not None


@pytest.mark.skipif(not HAVE_C, reason="compiled kernels not built")
@pytest.mark.parametrize("R", [F3, Z4, F4], ids=["F3", "Z4", "F4"])
def test_backends_agree(R):
    rng = np.random.default_rng(1)
    n = 3
    fs = polys.prod_polys(R.p, n, R.t)
    py = kernels.compile_polys(fs, 2 * n, R, backend="python")
    cy = kernels.compile_polys(fs, 2 * n, R, backend="cython")
    pts = rng.integers(0, R.size, size=(300, 2 * n)).astype(np.int32)
    assert np.array_equal(py.eval_many(pts), cy.eval_many(pts))
    assert py.eval(pts[0].tolist()) == tuple(cy.eval(pts[0].tolist()))


def test_backend_flag():
    assert kernels.BACKEND in ("python", "cython")


def test_ring_det_and_inverse():
    R = Z4
    A = [[R.from_int(1), R.from_int(2)], [R.from_int(3), R.from_int(3)]]
    assert ring_det(R, A) == R.from_int(1)
    Ai = ring_inverse(R, A)
    prod = [[R.sum(R.mul(A[i][k], Ai[k][j]) for k in range(2)) for j in range(2)] for i in range(2)]
    assert prod == [[R.one, 0], [0, R.one]]
    with pytest.raises(NotAUnit):
        ring_inverse(R, [[R.from_int(2)]])


def test_witt_matrix_inverse(rng):
    W = witt_ring(Z4, 3)
    for _ in range(10):
        M = Matrix.filled(2, 2, lambda i, j: W.random(rng), W.zero)
        if not Z4.is_unit(ring_det(Z4, [[x.coords[0] for x in r] for r in M.data])):
            continue
        Mi = witt_inverse(M)
        assert M @ Mi == witt_identity(W, 2) == Mi @ M


def test_matrix_blocks():
    W = witt_ring(F3, 1)
    M = Matrix.filled(3, 3, lambda i, j: W.integer(3 * i + j), W.zero)
    A, B, C, D = M.split(1)
    assert Matrix.block(A, B, C, D) == M
    assert M.transpose().transpose() == M
    assert M.first_difference(M) is None
    assert (M - M).first_difference(M) == (0, 1)
