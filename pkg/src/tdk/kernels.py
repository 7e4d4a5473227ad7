"""Backend selection for the polynomial kernels.

The compiled extension is used when it imports; setting the environment
variable ``TDK_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_PolyProgram = _pykernels.PolyProgram

if not os.environ.get("TDK_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        _PolyProgram = _ckernels.PolyProgram
        BACKEND = "cython"


def compile_polys(polys, nvars: int, ring, backend: str | None = None):
    """Compile integer polynomials for evaluation over ``ring``.

    Coefficients are reduced into the ring, zero terms are dropped.
    """
    cls = _PolyProgram
    if backend == "python":
        cls = _pykernels.PolyProgram
    elif backend == "cython":
        from . import _ckernels

        cls = _ckernels.PolyProgram
    char = ring.p ** ring.t
    coef, term_ptr, fac_var, fac_exp, poly_ptr = [], [0], [], [], [0]
    maxexp = 1
    for f in polys:
        for e, c in sorted(f.items()):
            c %= char
            if not c:
                continue
            coef.append(ring.from_int(c))
            for v, k in enumerate(e):
                if k:
                    fac_var.append(v)
                    fac_exp.append(k)
                    maxexp = max(maxexp, k)
            term_ptr.append(len(fac_var))
        poly_ptr.append(len(coef))
    return cls(np.array(coef, dtype=np.int32), np.array(term_ptr, dtype=np.int32),
               np.array(fac_var, dtype=np.int32), np.array(fac_exp, dtype=np.int32),
               np.array(poly_ptr, dtype=np.int32), ring.add_table, ring.mul_table,
               power_table(ring, maxexp))


def power_table(ring, maxexp: int) -> np.ndarray:
    tab = np.empty((ring.size, maxexp + 1), dtype=np.int32)
    tab[:, 0] = ring.one
    mul = ring.mul_table
    idx = np.arange(ring.size)
    for e in range(1, maxexp + 1):
        tab[:, e] = mul[tab[:, e - 1], idx]
    return tab
