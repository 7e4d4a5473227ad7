"""Shared rings and thickenings.

Witt rings are cached per ring object, so every test uses the same ring
instances from here.
"""

import pytest

from tdk.rings import fp_poly_quot, product, thickening_make, zmod

F2 = zmod(2)
F3 = zmod(3)
Z4 = zmod(2, 2)
Z9 = zmod(3, 2)
F4 = fp_poly_quot(2, ["a"], ["a^2+a+1"])
F9 = fp_poly_quot(3, ["b"], ["b^2+1"])
F2E = fp_poly_quot(2, ["e"], ["e^2"])
F3E = fp_poly_quot(3, ["e"], ["e^2"])
F2X2 = product([F2, F2])

TH_EPS = thickening_make(F2E, ["e"], F2)
TH_EPS3 = thickening_make(F3E, ["e"], F3)
TH_Z4 = thickening_make(Z4, ["2"], F2)
TH_Z9 = thickening_make(Z9, ["3"], F3)


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20240601)


def random_matrix_lift(th, P, rng):
    """A relative display over th.S whose matrix reduces to P's matrix."""
    import numpy as np

    from tdk.relative import lift_display_from_array

    n, h = P.n, P.h
    base = np.array([[th.lift(a) for a in x.coords] for row in P.M.data for x in row]).reshape(h, h, n)
    aa = sorted(th.kernel)
    off = np.array(aa)[rng.integers(len(aa), size=(h, h, n))]
    return lift_display_from_array(th, P, th.S.add_table[base, off])
