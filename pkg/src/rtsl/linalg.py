"""Small dense numerical core: 2x2 matrix helpers and the dense symmetric
eigensolver used as an independent oracle for the tridiagonal routines."""

from __future__ import annotations

import math

import numpy as np

DENSE_LIMIT = 2000


def mat2(a, b, c, d):
    """Row-major 2x2 float matrix."""
    return np.array([[a, b], [c, d]], dtype=float)


def mat2_inverse(m):
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if det == 0.0:
        raise ValueError("singular 2x2 matrix")
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=float) / det


def sl2_norm(m):
    """Operator norm (largest singular value) of a real 2x2 matrix.

    Closed form from the Gram matrix; valid for any determinant, exact
    for the unit-determinant transfer matrices where the singular values
    are (s, 1/s).
    """
    a, b = float(m[0, 0]), float(m[0, 1])
    c, d = float(m[1, 0]), float(m[1, 1])
    t = a * a + b * b + c * c + d * d
    det = a * d - b * c
    s = math.sqrt(max(t * t - 4.0 * det * det, 0.0))
    return math.sqrt(0.5 * (t + s))


def symmetric_eigenvalues_dense(a, tol=1e-12):
    """All eigenvalues of a dense symmetric matrix, sorted ascending.

    Backed by LAPACK (numpy.linalg.eigvalsh), which resolves eigenvalues
    to machine precision; `tol` documents the accuracy callers rely on.
    Input must be symmetric within 1e-12 (scaled) and at most
    DENSE_LIMIT on a side.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    if n > DENSE_LIMIT:
        raise ValueError("dense limit exceeded")
    scale = max(1.0, float(np.abs(a).max()) if n else 1.0)
    if float(np.abs(a - a.T).max()) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    return np.sort(np.linalg.eigvalsh(a))
