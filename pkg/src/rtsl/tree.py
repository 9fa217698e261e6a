"""Finite-depth radial rooted trees and their adjacency Laplacian.

Vertices are addressed as (generation n, index i) with breadth-first
indexing: vertex (n, i) has parent (n-1, i // b_{n-1}) and children
(n+1, i*b_n + c) for c in [0, b_n).  Generation sizes are Python ints,
so deep trees (astronomical vertex counts) are fine as long as no
per-vertex array is materialized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DENSE_LIMIT
from .randomness import sample_sequence


@dataclass(frozen=True)
class RadialTree:
    branching: tuple
    depth: int
    generation_sizes: tuple

    @property
    def vertex_count(self):
        return sum(self.generation_sizes)

    def parent(self, n, i):
        if n < 1 or not 0 <= i < self.generation_sizes[n]:
            raise ValueError("vertex out of range")
        return (n - 1, i // self.branching[n - 1])

    def children(self, n, i):
        if not 0 <= i < self.generation_sizes[n]:
            raise ValueError("vertex out of range")
        if n >= self.depth:
            return []
        b = self.branching[n]
        return [(n + 1, i * b + c) for c in range(b)]


def build_tree(branching, depth):
    depth = int(depth)
    if depth < 1:
        raise ValueError("depth must be at least 1")
    vals = [int(b) for b in np.asarray(branching).ravel()]
    if len(vals) < depth:
        raise ValueError("branching list shorter than depth")
    vals = vals[:depth]
    if any(b < 2 for b in vals):
        raise ValueError("branching numbers must be at least 2")
    sizes = [1]
    for b in vals:
        sizes.append(sizes[-1] * b)
    return RadialTree(tuple(vals), depth, tuple(sizes))


def random_tree(dist, depth, seed):
    """Tree with i.i.d. branching numbers drawn from dist."""
    seq = sample_sequence(dist, depth, seed)
    return build_tree(seq.values, depth)


@dataclass(frozen=True)
class TreeFunction:
    """One value array per generation; complex allowed."""

    values: tuple

    def __post_init__(self):
        arrs = []
        for a in self.values:
            a = np.asarray(a)
            a = a.copy()
            a.flags.writeable = False
            arrs.append(a)
        object.__setattr__(self, "values", tuple(arrs))

    @classmethod
    def zeros(cls, tree, dtype=float):
        return cls(tuple(np.zeros(g, dtype=dtype) for g in tree.generation_sizes))

    def value(self, n, i):
        return self.values[n][i]

    def norm(self):
        return float(np.sqrt(sum(float(np.sum(np.abs(a) ** 2)) for a in self.values)))

    def inner(self, other):
        return sum(np.vdot(a, b) for a, b in zip(self.values, other.values))


def _check_function(tree, f):
    if len(f.values) != tree.depth + 1:
        raise ValueError("tree function does not match tree")
    for g, a in zip(tree.generation_sizes, f.values):
        if a.shape != (g,):
            raise ValueError("tree function does not match tree")


def apply_laplacian(tree, f):
    """Sum of neighbor values: parent contribution plus child sums."""
    _check_function(tree, f)
    dtype = np.result_type(float, *[a.dtype for a in f.values])
    out = [np.zeros(g, dtype=dtype) for g in tree.generation_sizes]
    for n in range(tree.depth + 1):
        if n >= 1:
            out[n] += np.repeat(f.values[n - 1], tree.branching[n - 1])
        if n < tree.depth:
            b = tree.branching[n]
            out[n] += f.values[n + 1].reshape(tree.generation_sizes[n], b).sum(axis=1)
    return TreeFunction(tuple(out))


def adjacency_matrix(tree):
    """Dense 0/1 adjacency in BFS vertex order (small trees only)."""
    count = tree.vertex_count
    if count > DENSE_LIMIT:
        raise ValueError("dense limit exceeded")
    a = np.zeros((count, count))
    offsets = np.concatenate([[0], np.cumsum(tree.generation_sizes)]).astype(np.int64)
    for n in range(tree.depth):
        g = tree.generation_sizes[n]
        b = tree.branching[n]
        parents = offsets[n] + np.repeat(np.arange(g, dtype=np.int64), b)
        kids = offsets[n + 1] + np.arange(g * b, dtype=np.int64)
        a[parents, kids] = 1.0
        a[kids, parents] = 1.0
    return a
