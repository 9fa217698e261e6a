"""Branching-number laws, seeded i.i.d. sequences, and the left shift.

All randomness in the package flows through `substream`: independent
generators are derived from (seed, stream indices) with SeedSequence, so
any partition of samples across workers reproduces the same draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Recorded in run metadata so outputs are attributable to a generator.
PRNG_ID = "numpy-pcg64/seedsequence(entropy=seed, spawn_key=stream)"


def substream(seed, *stream):
    """Independent generator for (seed, stream tuple).

    Streams with different tuples (including different lengths) are
    statistically independent and stable across runs and platforms.
    """
    key = tuple(int(s) for s in stream)
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=key)
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class BranchingDistribution:
    """Finitely supported probability law on integer branching values.

    atoms: tuple of (value, weight) pairs, values distinct integers in
    [2, d], weights positive and summing to 1.  Single-atom laws are
    allowed for deterministic oracles but flagged as degenerate.
    """

    atoms: tuple
    d: int = 0

    def __post_init__(self):
        atoms = tuple((int(v), float(w)) for v, w in self.atoms)
        atoms = tuple(sorted(atoms))
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise ValueError("distribution needs at least one atom")
        values = [v for v, _ in atoms]
        if len(set(values)) != len(values):
            raise ValueError("duplicate branching values")
        if self.d == 0:
            object.__setattr__(self, "d", max(values))
        for v, w in atoms:
            if v < 2 or v > self.d:
                raise ValueError(f"branching values must be integers in [2, {self.d}], got {v}")
            if w <= 0:
                raise ValueError(f"weight for value {v} must be positive, got {w}")
        total = sum(w for _, w in atoms)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1 within 1e-12, got {total!r}")

    @classmethod
    def uniform(cls, values):
        values = sorted(int(v) for v in values)
        w = 1.0 / len(values)
        return cls(tuple((v, w) for v in values))

    @classmethod
    def point_mass(cls, value):
        return cls(((int(value), 1.0),))

    @property
    def values(self):
        return np.array([v for v, _ in self.atoms], dtype=np.int64)

    @property
    def weights(self):
        return np.array([w for _, w in self.atoms], dtype=float)

    @property
    def degenerate(self):
        return len(self.atoms) == 1

    @property
    def d_max(self):
        """Largest support point; the asymptotic spectral edge is 2*sqrt(d_max)."""
        return self.atoms[-1][0]


def parse_dist(text):
    """Parse a "2:0.5,3:0.5" literal into a BranchingDistribution.

    Weights are normalized when their sum is within 1e-6 of 1 and
    rejected otherwise.
    """
    pairs = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            raise ValueError(f"empty entry in distribution literal {text!r}")
        try:
            vtext, wtext = part.split(":")
            value = int(vtext)
            weight = float(wtext)
        except ValueError:
            raise ValueError(f"bad distribution entry {part!r}; expected value:weight") from None
        pairs.append((value, weight))
    total = sum(w for _, w in pairs)
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"weights sum to {total!r}; must be within 1e-6 of 1")
    return BranchingDistribution(tuple((v, w / total) for v, w in pairs))


@dataclass(frozen=True, eq=False)
class BranchingSequence:
    """A finite realization (omega_0 ... omega_{L-1}) of branching numbers.

    origin records how many left shifts produced this sequence from its
    ancestor; indexing is always 0-based relative to the current start.
    """

    values: np.ndarray
    origin: int = 0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.int64).copy()
        if vals.ndim != 1:
            raise ValueError("sequence values must be one-dimensional")
        if vals.size and vals.min() < 2:
            raise ValueError("branching numbers must be at least 2")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "origin", int(self.origin))

    def __len__(self):
        return int(self.values.size)

    def __getitem__(self, i):
        return int(self.values[i])

    def __eq__(self, other):
        if not isinstance(other, BranchingSequence):
            return NotImplemented
        return self.origin == other.origin and np.array_equal(self.values, other.values)

    __hash__ = None

    def as_array(self):
        return self.values


def draw_values(dist, rng, size):
    """Draw `size` i.i.d. branching values from `dist` using `rng`.

    Inverse-CDF on a single uniform block, so drawing a sequence in one
    call or in chunks from the same generator yields identical values.
    """
    u = rng.random(int(size))
    cum = np.cumsum(dist.weights)
    cum[-1] = 1.0  # guard against cumsum rounding below max(u)
    idx = np.searchsorted(cum, u, side="right")
    return dist.values[idx]


def sample_sequence(dist, length, seed, stream=0):
    """Seeded i.i.d. sequence of `length` branching values.

    Pure function of (dist, length, seed, stream); stream selects an
    independent sub-stream of the same seed.
    """
    length = int(length)
    if length < 1:
        raise ValueError("empty sequence")
    key = stream if isinstance(stream, tuple) else (stream,)
    rng = substream(seed, *key)
    return BranchingSequence(draw_values(dist, rng, length))


def shift(omega, k):
    """Left shift: drop the first k entries and advance the origin by k."""
    k = int(k)
    if k < 0:
        raise ValueError("shift count must be nonnegative")
    if k > len(omega):
        raise ValueError("shift past end")
    if isinstance(omega, BranchingSequence):
        return BranchingSequence(omega.values[k:], origin=omega.origin + k)
    return BranchingSequence(np.asarray(omega)[k:], origin=k)


def sequence_values(omega):
    """Raw value array of a BranchingSequence, or pass an array through."""
    if isinstance(omega, BranchingSequence):
        return omega.values
    return np.asarray(omega)
