"""Pure-Python evaluation of integer polynomial systems over table rings.

Mirrors ``tdk._ckernels`` exactly; selected at import when the extension
is missing or ``TDK_PURE_PYTHON`` is set.
"""

import numpy as np


class PolyProgram:
    """A system of polynomials compiled against one ring's tables.

    ``coef[t]`` is the ring element of term t's coefficient, the factors of
    term t are ``(fac_var[j], fac_exp[j])`` for ``term_ptr[t] <= j <
    term_ptr[t+1]`` and poly i owns terms ``poly_ptr[i] .. poly_ptr[i+1]``.
    """

    def __init__(self, coef, term_ptr, fac_var, fac_exp, poly_ptr, add, mul, powtab):
        self.npolys = len(poly_ptr) - 1
        self._add = np.asarray(add).tolist()
        self._mul = np.asarray(mul).tolist()
        self._pow = np.asarray(powtab).tolist()
        coef = list(map(int, coef))
        term_ptr = list(map(int, term_ptr))
        fac_var = list(map(int, fac_var))
        fac_exp = list(map(int, fac_exp))
        poly_ptr = list(map(int, poly_ptr))
        self._polys = []
        for i in range(self.npolys):
            terms = []
            for t in range(poly_ptr[i], poly_ptr[i + 1]):
                facs = [(fac_var[j], fac_exp[j]) for j in range(term_ptr[t], term_ptr[t + 1])]
                terms.append((coef[t], facs))
            self._polys.append(terms)

    def eval(self, point):
        add, mul, pw = self._add, self._mul, self._pow
        out = []
        for terms in self._polys:
            acc = 0
            for c, facs in terms:
                v = c
                for var, e in facs:
                    v = mul[v][pw[point[var]][e]]
                    if v == 0:
                        break
                if v:
                    acc = add[acc][v]
            out.append(acc)
        return tuple(out)

    def eval_many(self, points):
        points = np.asarray(points)
        out = np.empty((points.shape[0], self.npolys), dtype=np.int32)
        for r in range(points.shape[0]):
            out[r] = self.eval(points[r].tolist())
        return out
