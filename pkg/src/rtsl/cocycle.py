"""Transfer-matrix cocycles over branching sequences.

A single factor for branching value w is
    [[E/sqrt(w), -1/sqrt(w)], [sqrt(w), 0]]
(unit determinant).  The n-step product consumes w_1 ... w_n (w_0 only
enters through the initial state (u_1, sqrt(w_0) u_0)), and is
renormalized by its operator norm every step so products of length 10^6
never overflow; the removed scales accumulate in log_norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jacobi import char_poly_seq
from .linalg import mat2_inverse, sl2_norm
from .randomness import sequence_values as _seq_values


def atom_transfer_matrix(value, energy):
    """Single transfer factor for one branching value."""
    root = np.sqrt(float(value))
    return np.array([[float(energy) / root, -1.0 / root], [root, 0.0]])


def transfer_matrix(omega, energy):
    """Transfer factor of a sequence: built from entry 1, not entry 0."""
    vals = _seq_values(omega)
    if vals.size < 2:
        raise ValueError("sequence too short")
    return atom_transfer_matrix(vals[1], energy)


def _cocycle_step(energy, w, b00, b01, b10, b11):
    """Multiply the normalized product by the factor for value(s) w.

    Elementwise, so the scalar product and the vectorized Monte Carlo
    engine share this code path and agree to rounding.  Returns the
    updated unit-norm entries and the removed scale s.
    """
    root = np.sqrt(w)
    inv = 1.0 / root
    eo = energy * inv
    n00 = eo * b00 - inv * b10
    n01 = eo * b01 - inv * b11
    n10 = root * b00
    n11 = root * b01
    t = n00 * n00 + n01 * n01 + n10 * n10 + n11 * n11
    dt = n00 * n11 - n01 * n10
    # operator norm of a 2x2 from the Gram invariants, no eigensolver
    s = np.sqrt(0.5 * (t + np.sqrt(np.maximum(t * t - 4.0 * dt * dt, 0.0))))
    return n00 / s, n01 / s, n10 / s, n11 / s, s


@dataclass(frozen=True)
class CocycleProduct:
    """Renormalized n-step transfer product.

    The true product equals exp(log_norm) * matrix with ||matrix|| = 1,
    so log_norm is exactly the log of the product's operator norm.
    det(matrix) itself underflows once log_norm passes ~350, so the
    determinant of the true product is reconstructed from log_det, the
    per-factor determinant logs accumulated step by step.
    """

    energy: float
    steps: int
    log_norm: float
    matrix: np.ndarray
    log_det: float

    @property
    def reconstructed_det(self):
        return float(np.exp(self.log_det))


def cocycle_product(omega, energy, n):
    """Product of the first n transfer factors (entries w_1 ... w_n)."""
    n = int(n)
    if n < 0:
        raise ValueError("need n >= 0")
    vals = _seq_values(omega)
    if vals.size < n + 1:
        raise ValueError("sequence too short")
    e = float(energy)
    b00 = np.float64(1.0)
    b01 = np.float64(0.0)
    b10 = np.float64(0.0)
    b11 = np.float64(1.0)
    log_norm = 0.0
    log_det = 0.0
    for i in range(1, n + 1):
        w = np.float64(vals[i])
        b00, b01, b10, b11, s = _cocycle_step(e, w, b00, b01, b10, b11)
        log_norm += float(np.log(s))
        root = np.sqrt(w)
        log_det += float(np.log((1.0 / root) * root))
    matrix = np.array([[b00, b01], [b10, b11]], dtype=float)
    matrix.flags.writeable = False
    return CocycleProduct(e, n, log_norm, matrix, log_det)


def solve_recursion(omega, energy, n):
    """Solution u_0 ... u_{n+1} of the three-term recursion, u_0 = 1.

    Row 0 forces u_1 = E/sqrt(w_0); row m then gives
    u_{m+1} = (E u_m - sqrt(w_{m-1}) u_{m-1}) / sqrt(w_m).
    Equivalent to the cocycle: (u_{n+1}, sqrt(w_n) u_n) equals the n-step
    product applied to (u_1, sqrt(w_0) u_0).
    """
    n = int(n)
    if n < 0:
        raise ValueError("need n >= 0")
    vals = _seq_values(omega)
    if vals.size < n + 1:
        raise ValueError("sequence too short")
    e = float(energy)
    roots = np.sqrt(vals[: n + 1].astype(float))
    u = np.empty(n + 2)
    u[0] = 1.0
    u[1] = e / roots[0]
    for m in range(1, n + 1):
        u[m + 1] = (e * u[m] - roots[m - 1] * u[m - 1]) / roots[m]
    return u


def cocycle_from_char_poly(omega, energy, n):
    """Closed-form n-step product from characteristic-minor sequences.

    With D_k the minors of the window starting at w_1 and D'_k those of
    the once-shifted window (first entry w_2):

        M_n = (prod_{i=1}^{n} w_i)^{-1/2} *
              [[D_n,            -D'_{n-1}],
               [w_n * D_{n-1},  -w_n * D'_{n-2}]]

    Unnormalized, so usable only at modest n (the prefactor underflows
    for long products); serves as the polynomial-route cross-check of
    cocycle_product.
    """
    n = int(n)
    if n < 1:
        raise ValueError("need n >= 1")
    vals = _seq_values(omega)
    if vals.size < n + 1:
        raise ValueError("sequence too short")
    lead = char_poly_seq(vals, energy, n)
    shifted = char_poly_seq(vals[1:], energy, n - 1) if n >= 2 else None

    def sh(k):
        if k == -1:
            return 0.0
        if k == 0:
            return 1.0
        return shifted.minor(k)

    wn = float(vals[n])
    m = np.array(
        [
            [lead.minor(n), -sh(n - 1)],
            [wn * lead.minor(n - 1), -wn * sh(n - 2)],
        ]
    )
    return m / np.prod(np.sqrt(vals[1 : n + 1].astype(float)))


def furstenberg_witness(alpha, beta, energy, n):
    """n-th power of (M_alpha M_beta^{-1}); checked against diag((beta/alpha)^{n/2}, (alpha/beta)^{n/2}).

    The mixed factor is exactly diagonal and energy-independent, so its
    powers grow like (max/min)^{n/2}: a non-compactness witness.  Raises
    if the numerical power deviates from the closed form.
    """
    a = float(alpha)
    b = float(beta)
    if a == b:
        raise ValueError("need two distinct branching values")
    n = int(n)
    if n < 0:
        raise ValueError("need n >= 0")
    g = atom_transfer_matrix(a, energy) @ mat2_inverse(atom_transfer_matrix(b, energy))
    power = np.eye(2)
    for _ in range(n):
        power = g @ power
    expected = np.array([[(b / a) ** (n / 2.0), 0.0], [0.0, (a / b) ** (n / 2.0)]])
    scale = sl2_norm(expected)
    off = max(abs(power[0, 1]), abs(power[1, 0]))
    if off > 1e-9 * scale:
        raise RuntimeError(f"off-diagonal residual {off:.3e} exceeds 1e-9 of scale {scale:.3e}")
    diag_err = max(abs(power[0, 0] - expected[0, 0]), abs(power[1, 1] - expected[1, 1]))
    if diag_err > 1e-9 * scale:
        raise RuntimeError(f"diagonal deviates from closed form by {diag_err:.3e}")
    return power


def _direction_class(v, tol=1e-9):
    """Classify a direction as e1, e2, or neither (angle tolerance)."""
    nrm = float(np.hypot(v[0], v[1]))
    if nrm == 0.0:
        raise ValueError("zero vector has no direction")
    if abs(v[1]) <= tol * nrm:
        return "e1"
    if abs(v[0]) <= tol * nrm:
        return "e2"
    return "other"


def _real_eigendirections(m, tol=1e-9):
    vals, vecs = np.linalg.eig(m)
    out = []
    for i in range(2):
        if abs(vals[i].imag) > tol * max(1.0, abs(vals[i])):
            continue
        v = vecs[:, i].real
        nrm = np.linalg.norm(v)
        if nrm > 0:
            out.append(v / nrm)
    return out


def invariant_direction_check(dist, energy):
    """Probe the coordinate directions for invariance under every atom factor.

    For each atom value: where do span{e1} and span{e2} go, is either
    one (or the unordered pair) preserved, and does any direction stay
    fixed by all atom matrices at once?  For nonzero energy nothing is
    preserved; at zero energy the two spans swap.
    """
    if dist.degenerate:
        raise ValueError("need a non-degenerate distribution")
    e = float(energy)
    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.0, 1.0])
    images = {}
    e1_stays = True
    e2_stays = True
    pair_stays = True
    swaps = True
    mats = {}
    for value in [int(v) for v in dist.values]:
        m = atom_transfer_matrix(value, e)
        mats[value] = m
        c1 = _direction_class(m @ e1)
        c2 = _direction_class(m @ e2)
        c2_back = _direction_class(mat2_inverse(m) @ e2)
        images[value] = {"e1_image": c1, "e2_image": c2, "inv_e2_image": c2_back}
        e1_stays &= c1 == "e1"
        e2_stays &= c2 == "e2"
        pair_stays &= c1 in ("e1", "e2") and c2 in ("e1", "e2")
        swaps &= c1 == "e2" and c2 == "e1"
    # a direction fixed by the whole family must be an eigendirection of
    # every member; candidates from the first matrix suffice
    first = next(iter(mats.values()))
    common = []
    for cand in _real_eigendirections(first):
        ok = True
        for m in mats.values():
            img = m @ cand
            cross = img[0] * cand[1] - img[1] * cand[0]
            if abs(cross) > 1e-9 * np.linalg.norm(img):
                ok = False
                break
        if ok:
            common.append(cand)
    return {
        "energy": e,
        "atoms": tuple(int(v) for v in dist.values),
        "images": images,
        "span_e1_invariant": bool(e1_stays),
        "span_e2_invariant": bool(e2_stays),
        "pair_invariant": bool(pair_stays),
        "pair_swapped": bool(swaps),
        "common_fixed_directions": common,
    }
