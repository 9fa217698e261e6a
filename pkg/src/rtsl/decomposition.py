"""Orthogonal decomposition of the tree Laplacian into half-line blocks.

Each block is spanned by spherical functions living on single
generations: a weight vector w (zero-sum, unit norm) over the children
of an anchor vertex, spread evenly over all descendants.  Applying the
Laplacian to such a function only moves it one generation up or down
with coefficients sqrt(b), which is exactly a truncated Jacobi row.
Multiplicities count the independent weight vectors per anchor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jacobi import TruncatedJacobi, tridiag_eigenvalues
from .linalg import symmetric_eigenvalues_dense
from .tree import TreeFunction, adjacency_matrix, apply_laplacian


@dataclass(frozen=True)
class MultiplicityTable:
    beta: tuple

    def __getitem__(self, n):
        return self.beta[n]

    def __len__(self):
        return len(self.beta)

    def block_dimension_sum(self, depth):
        """Total dimension when block N is truncated to size depth-N+1."""
        return sum(b * (depth - n + 1) for n, b in enumerate(self.beta))


def multiplicities(tree):
    """Number of independent blocks born at each generation."""
    beta = [1]
    for n in range(1, tree.depth + 1):
        # one block per anchor per nontrivial weight vector
        beta.append((tree.branching[n - 1] - 1) * tree.generation_sizes[n - 1])
    return MultiplicityTable(tuple(beta))


def helmert_row(b, r):
    """Row r of the canonical zero-sum orthonormal family on R^b.

    (1, ..., 1, -r, 0, ..., 0) / sqrt(r (r+1)) with r leading ones;
    rows 1..b-1 complete the constant vector to an orthonormal basis.
    """
    b = int(b)
    r = int(r)
    if not 1 <= r <= b - 1:
        raise ValueError("weight row index out of range")
    w = np.zeros(b)
    w[:r] = 1.0
    w[r] = -float(r)
    return w / np.sqrt(r * (r + 1.0))


def _copy_address(tree, N, k):
    """Split copy index k into (anchor index, weight row); validates range."""
    beta = multiplicities(tree)
    if not 0 <= N <= tree.depth:
        raise ValueError("generation out of range")
    if not 1 <= k <= beta[N]:
        raise ValueError("copy index out of range")
    if N == 0:
        return None, None
    b = tree.branching[N - 1]
    anchor, offset = divmod(k - 1, b - 1)
    return anchor, offset + 1


def max_weight(tree, N, k):
    """Largest |entry| of the copy's weight vector (1 for the radial copy)."""
    anchor, r = _copy_address(tree, N, k)
    if anchor is None:
        return 1.0
    return float(np.sqrt(r / (r + 1.0)))


@dataclass(frozen=True)
class SphericalBasisFunction:
    N: int
    k: int
    j: int
    generation: int
    anchor: int | None
    weights: np.ndarray | None
    values: np.ndarray
    sup: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float).copy()
            w.flags.writeable = False
            object.__setattr__(self, "weights", w)

    def as_tree_function(self, tree):
        arrs = [np.zeros(g) for g in tree.generation_sizes]
        arrs[self.generation] = self.values
        return TreeFunction(tuple(arrs))


def spherical_basis(tree, N, k):
    """All radial levels j = 0 .. depth-N of one decomposition copy.

    Radial copy (N = 0): constant g_j^{-1/2} on generation j.  Otherwise
    level j spreads weight w_c over the M_j descendants of each child c
    of the anchor, scaled by M_j^{-1/2} to keep unit norm, where M_j is
    the number of generation-(N+j) descendants per child.
    """
    anchor, r = _copy_address(tree, N, k)
    out = []
    if anchor is None:
        for j in range(tree.depth + 1):
            g = tree.generation_sizes[j]
            amp = 1.0 / np.sqrt(g)
            out.append(
                SphericalBasisFunction(0, k, j, j, None, None, np.full(g, amp), amp)
            )
        return out
    b = tree.branching[N - 1]
    w = helmert_row(b, r)
    for j in range(tree.depth - N + 1):
        gen = N + j
        m = tree.generation_sizes[gen] // tree.generation_sizes[N]  # descendants per child
        values = np.zeros(tree.generation_sizes[gen])
        scale = 1.0 / np.sqrt(m)
        for c in range(b):
            child = anchor * b + c
            values[child * m : (child + 1) * m] = w[c] * scale
        out.append(
            SphericalBasisFunction(
                N, k, j, gen, anchor, w, values, float(np.max(np.abs(w))) * scale
            )
        )
    return out


def lift(tree, N, k, u):
    """Linear combination sum_j u_j phi_{N,k,j} as a TreeFunction."""
    u = np.asarray(u)
    if u.ndim != 1:
        raise ValueError("need a one-dimensional coefficient vector")
    if u.size > tree.depth - N + 1:
        raise ValueError("length overflow")
    basis = spherical_basis(tree, N, k)
    dtype = np.result_type(float, u.dtype)
    arrs = [np.zeros(g, dtype=dtype) for g in tree.generation_sizes]
    for j in range(u.size):
        arrs[N + j] = u[j] * basis[j].values
    return TreeFunction(tuple(arrs))


def lift_generation_sups(tree, N, k, u):
    """Per-generation sup norms of lift(tree, N, k, u), in closed form.

    Levels have disjoint supports, so the sup over generation N+j is
    |u_j| times the level's sup norm; computed in log space so deep
    trees (astronomical generation sizes) cost nothing.
    """
    u = np.asarray(u, dtype=float)
    if u.size > tree.depth - N + 1:
        raise ValueError("length overflow")
    top = max_weight(tree, N, k)
    sups = np.empty(u.size)
    log_m = 0.0
    for j in range(u.size):
        sups[j] = abs(u[j]) * top * np.exp(-0.5 * log_m)
        if N + j < tree.depth:
            log_m += np.log(float(tree.branching[N + j]))
    return sups


def verify_block_action(tree, N, k, tol=1e-10):
    """Check that the Laplacian acts on one copy as a truncated Jacobi row.

    Delta phi_j must equal sqrt(b_{N+j}) phi_{j+1} + sqrt(b_{N+j-1}) phi_{j-1}
    with out-of-range terms dropped; reports the worst residual and the
    recovered off-diagonal couplings.
    """
    basis = spherical_basis(tree, N, k)
    last = len(basis) - 1
    residuals = []
    offdiag = []
    failures = []
    for j, phi in enumerate(basis):
        lap = apply_laplacian(tree, phi.as_tree_function(tree))
        expect = [np.zeros(g) for g in tree.generation_sizes]
        if j + 1 <= last:
            expect[N + j + 1] = np.sqrt(tree.branching[N + j]) * basis[j + 1].values
        if j - 1 >= 0:
            expect[N + j - 1] = np.sqrt(tree.branching[N + j - 1]) * basis[j - 1].values
        diff = TreeFunction(tuple(a - b for a, b in zip(lap.values, expect)))
        res = diff.norm()
        residuals.append(res)
        if res > tol:
            failures.append((N, k, j))
        if j + 1 <= last:
            offdiag.append(float(np.dot(basis[j + 1].values, lap.values[N + j + 1])))
    return {
        "N": N,
        "k": k,
        "max_residual": max(residuals),
        "residuals": residuals,
        "offdiag": np.array(offdiag),
        "expected_offdiag": np.sqrt(
            np.array(tree.branching[N : tree.depth], dtype=float)
        ),
        "passed": not failures,
        "failures": failures,
        "tol": tol,
    }


def block_matrix(tree, N):
    """Truncated Jacobi block born at generation N (size depth-N+1)."""
    off = np.sqrt(np.array(tree.branching[N : tree.depth], dtype=float))
    return TruncatedJacobi(off)


def spectral_multiset_check(tree, tol=1e-8):
    """Dense tree spectrum versus the multiset of block spectra.

    The dense side uses the generic symmetric eigensolver, the block
    side Sturm bisection on each truncated Jacobi block repeated with
    its multiplicity; both sorted and paired off.
    """
    dense = symmetric_eigenvalues_dense(adjacency_matrix(tree))
    beta = multiplicities(tree)
    parts = []
    for N in range(tree.depth + 1):
        evs = tridiag_eigenvalues(block_matrix(tree, N))
        parts.append(np.tile(evs, beta[N]))
    blocks = np.sort(np.concatenate(parts))
    if blocks.size != dense.size:
        raise RuntimeError("dimension identity violated")
    disc = float(np.max(np.abs(dense - blocks)))
    return {
        "vertex_count": int(dense.size),
        "max_discrepancy": disc,
        "passed": disc <= tol,
        "tol": tol,
    }
