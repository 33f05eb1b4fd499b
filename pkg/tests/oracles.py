"""Independent oracles the production code is checked against.

``linear_refine`` implements the textbook linear subdivision sums directly
(out_{2j} = sum_o a_{-2o} f_{j+o}, out_{2j+1} = sum_o a_{1-2o} f_{j+o})
on plain arrays, with the same boundary conventions as the package: it
never touches the geodesic-mean code path.
"""

import numpy as np


def _coefficient(coefficients, offset, index):
    i = index - offset
    if 0 <= i < len(coefficients):
        return coefficients[i]
    return 0.0


def _fetch(data, i, boundary):
    n = len(data)
    if boundary == "periodic":
        return data[i % n]
    return data[min(max(i, 0), n - 1)]


def linear_refine_once(coefficients, offset, data, boundary="periodic"):
    """One linear refinement step of (L, d) array ``data``."""
    data = np.atleast_2d(np.asarray(data, dtype=float))
    n = len(data)
    lo = offset
    hi = offset + len(coefficients) - 1
    out = []
    last_odd = n if boundary == "periodic" else n - 1
    for j in range(n):
        for parity in (0, 1):
            if parity == 1 and j >= last_odd:
                continue
            acc = np.zeros(data.shape[1])
            # a_{parity - 2o} must lie in [lo, hi]
            o_min = -((hi - parity) // 2)
            o_max = (parity - lo) // 2
            for o in range(o_min, o_max + 1):
                w = _coefficient(coefficients, offset, parity - 2 * o)
                if w != 0.0:
                    acc = acc + w * _fetch(data, j + o, boundary)
            out.append(acc)
    return np.array(out)


def linear_refine(coefficients, offset, data, levels, boundary="periodic"):
    data = np.atleast_2d(np.asarray(data, dtype=float))
    for _ in range(levels):
        data = linear_refine_once(coefficients, offset, data, boundary)
    return data


def weighted_mean(rows, weights):
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    weights = np.asarray(weights, dtype=float)
    return (weights[:, None] * rows).sum(axis=0)


def spd_distance_eig(a, b):
    """Affine-invariant distance via the (non-symmetric) eigensolver.

    The eigenvalues of inv(A) @ B equal those of the whitened product, so
    sqrt(sum(log(lam)^2)) gives the distance via a route independent of
    the production kernels.
    """
    lam = np.linalg.eigvals(np.linalg.solve(a, b))
    return float(np.sqrt(np.sum(np.log(lam.real) ** 2)))
