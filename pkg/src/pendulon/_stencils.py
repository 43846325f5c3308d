"""Fourth-order finite-difference stencils on uniform grids.

Interior points use centered 5-point formulas; the two points nearest each
boundary fall back to biased stencils of the same order. Weights are generated
from the Vandermonde system rather than hardcoded tables.
"""
from __future__ import annotations

from math import factorial

import numpy as np
import scipy.sparse as sp


def fd_weights(offsets, deriv):
    """Weights w such that sum_j w[j] f(x + offsets[j] h) = h^deriv f^(deriv)(x).

    Exact for polynomials up to degree len(offsets)-1.
    """
    offsets = np.asarray(offsets, dtype=float)
    n = len(offsets)
    if deriv >= n:
        raise ValueError("not enough points for requested derivative")
    A = np.vander(offsets, n, increasing=True).T  # A[i, j] = offsets[j]**i
    b = np.zeros(n)
    b[deriv] = factorial(deriv)
    return np.linalg.solve(A, b)


# offsets used near the left boundary (mirrored on the right)
_EDGE_OFFSETS = {
    1: [np.arange(0, 5), np.arange(-1, 4)],
    2: [np.arange(0, 6), np.arange(-1, 5)],
}


def _stencil_rows(n, deriv):
    """Yield (row_index, offsets, weights) covering the whole grid."""
    if deriv == 1:
        center_off = np.arange(-2, 3)
    elif deriv == 2:
        center_off = np.arange(-2, 3)
    else:
        raise ValueError("only first and second derivatives supported")
    center_w = fd_weights(center_off, deriv)
    edge_off = _EDGE_OFFSETS[deriv]
    edge_w = [fd_weights(o, deriv) for o in edge_off]

    for i in range(n):
        if i < 2:
            off = edge_off[i]
            w = edge_w[i]
        elif i >= n - 2:
            k = n - 1 - i
            off = -edge_off[k][::-1]
            w = edge_w[k][::-1] * ((-1.0) ** deriv)
        else:
            off, w = center_off, center_w
        yield i, i + off, w


def derivative(f, h, deriv):
    """d^deriv f / dx^deriv sampled on the same grid (4th-order accurate).

    Matches derivative_matrix(n, h, deriv) @ f to rounding, including the
    accumulation order on interior rows.
    """
    f = np.asarray(f, dtype=float)
    n = f.shape[0]
    if n < 6:
        raise ValueError("grid too short for 4th-order stencils")
    if deriv not in (1, 2):
        raise ValueError("only first and second derivatives supported")
    out = np.empty_like(f)
    w = fd_weights(np.arange(-2, 3), deriv) / h**deriv
    out[2:-2] = (w[0] * f[:-4] + w[1] * f[1:-3] + w[2] * f[2:-2]
                 + w[3] * f[3:-1] + w[4] * f[4:])
    for i, idx, ww in _stencil_rows(n, deriv):
        if 2 <= i < n - 2:
            continue
        out[i] = (ww / h**deriv) @ f[idx]
    return out


def derivative_matrix(n, h, deriv):
    """Sparse matrix D with (D f) = derivative(f, h, deriv)."""
    rows, cols, vals = [], [], []
    for i, idx, w in _stencil_rows(n, deriv):
        rows.extend([i] * len(idx))
        cols.extend(idx)
        vals.extend(w / h**deriv)
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
