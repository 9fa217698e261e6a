"""Monte Carlo Lyapunov exponents for the transfer cocycle.

One long renormalized product per sample; the estimate is the mean of
(1/n) log-norm across samples with a plain standard error.  Sample s of
grid point g draws from the dedicated sub-stream (seed; g, s), so
results are bit-identical however the samples are scheduled.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cocycle import _cocycle_step
from .randomness import draw_values, sequence_values as _seq_values, substream

# samples per vectorized block; fixed so results never depend on worker count
_BLOCK = 64
# branching values drawn per generator call (chunked draws match one-shot draws)
_CHUNK = 1 << 14


def thread_count():
    """Worker cap from RTSL_THREADS, defaulting to hardware parallelism."""
    raw = os.environ.get("RTSL_THREADS", "")
    try:
        t = int(raw)
    except ValueError:
        t = 0
    return t if t >= 1 else (os.cpu_count() or 1)


@dataclass(frozen=True)
class LyapunovEstimate:
    energy: float
    n: int
    samples: int
    mean: float
    std_err: float
    seed: int
    per_sample: np.ndarray

    def __post_init__(self):
        per = np.asarray(self.per_sample, dtype=float)
        per.flags.writeable = False
        object.__setattr__(self, "per_sample", per)


def _block_log_norms(dist, energy, n, seed, stream_prefix, s_lo, s_hi):
    """Final cocycle log-norms for samples s_lo..s_hi-1, one column each."""
    count = s_hi - s_lo
    rngs = [substream(seed, *stream_prefix, s) for s in range(s_lo, s_hi)]
    e = float(energy)
    b00 = np.ones(count)
    b01 = np.zeros(count)
    b10 = np.zeros(count)
    b11 = np.ones(count)
    logs = np.zeros(count)
    drawn = 0
    while drawn < n + 1:
        take = min(_CHUNK, n + 1 - drawn)
        buf = np.empty((take, count))
        for c, rng in enumerate(rngs):
            buf[:, c] = draw_values(dist, rng, take)
        start = 1 if drawn == 0 else 0  # entry w_0 is not a factor
        for t in range(start, take):
            b00, b01, b10, b11, s = _cocycle_step(e, buf[t], b00, b01, b10, b11)
            logs += np.log(s)
        drawn += take
    return logs


def estimate_lyapunov(dist, energy, n, samples, seed, stream_prefix=()):
    """Estimate the exponent at one energy.

    Pure function of (dist, energy, n, samples, seed, stream_prefix);
    the thread pool only schedules fixed 64-sample blocks, so the result
    is bit-identical at any RTSL_THREADS setting.
    """
    n = int(n)
    if n < 100:
        raise ValueError("need n >= 100")
    samples = int(samples)
    if samples < 1:
        raise ValueError("need samples >= 1")
    blocks = [(lo, min(lo + _BLOCK, samples)) for lo in range(0, samples, _BLOCK)]
    workers = min(thread_count(), len(blocks))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(
                    lambda blk: _block_log_norms(dist, energy, n, seed, stream_prefix, *blk),
                    blocks,
                )
            )
    else:
        parts = [_block_log_norms(dist, energy, n, seed, stream_prefix, *blk) for blk in blocks]
    per = np.concatenate(parts) / n
    mean = float(per.mean())
    std_err = float(per.std(ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    return LyapunovEstimate(float(energy), n, samples, mean, std_err, int(seed), per)


def lyapunov_curve(dist, energy_grid, n, samples, seed):
    """One estimate per grid energy, sorted ascending, independent streams.

    The sub-stream index is the position in the sorted grid, so the same
    set of energies gives the same numbers in any input order.
    """
    grid = [float(x) for x in np.asarray(energy_grid, dtype=float).ravel()]
    if not grid:
        raise ValueError("empty energy grid")
    order = np.argsort(grid, kind="stable")
    return [
        estimate_lyapunov(dist, grid[i], n, samples, seed, stream_prefix=(g,))
        for g, i in enumerate(order)
    ]


def zero_energy_exact(omega, n_even):
    """Averaged zero-energy log-norm, in closed form.

    At zero energy the product telescopes pairwise into a diagonal
    matrix, so (1/n) log-norm equals |sum of xi_i| / n with
    xi_i = (1/2) log(w_{2i-1} / w_{2i}) — no matrix arithmetic at all.
    """
    n = int(n_even)
    if n <= 0 or n % 2 != 0:
        raise ValueError("n_even must be a positive even count")
    vals = _seq_values(omega)
    if vals.size <= n:
        raise ValueError("sequence too short")
    odd = vals[1:n:2].astype(float)
    even = vals[2 : n + 1 : 2].astype(float)
    xi = 0.5 * np.log(odd / even)
    return float(abs(xi.sum())) / n


def punctured_energy_grid(d, l, per_side=25):
    """Symmetric grid on [-2*sqrt(d), 2*sqrt(d)] minus the gap (-1/l, 1/l)."""
    hi = 2.0 * np.sqrt(float(d))
    lo = 1.0 / float(l)
    if not lo < hi:
        raise ValueError("punctured interval is empty")
    per_side = int(per_side)
    if per_side < 1:
        raise ValueError("need at least one point per side")
    right = np.linspace(lo, hi, per_side)
    return np.concatenate([-right[::-1], right])
