"""Independent oracles for the test suite.

Everything here recomputes expected values by brute force (dense grids,
exhaustive enumeration, direct norm evaluation) without touching the
library's FFT/refinement path, so solver and oracle errors cannot cancel.
"""

from __future__ import annotations

import math
from functools import reduce

import numpy as np


def brute_stabilizer_order(weights, x, zero_tol=1e-9, grid_mult=4):
    """Count the circle elements fixing x on a discretized circle.

    Samples theta = 2 pi t / N with N = grid_mult * lcm(|k_j|), counts the
    angles fixing every coordinate above zero_tol, and divides by the size
    of the action's kernel counted on the same grid.  Returns math.inf when
    every weighted coordinate vanishes.
    """
    weights = [int(w) for w in weights]
    x = np.asarray(x, dtype=np.complex128)
    nz = [abs(w) for w in weights if w != 0]
    n = grid_mult * reduce(lambda a, b: a * b // math.gcd(a, b), nz)
    thetas = 2.0 * np.pi * np.arange(n) / n
    fix_count = 0
    kernel_count = 0
    for th in thetas:
        g = np.exp(1j * th * np.asarray(weights))
        in_kernel = all(abs(g[j] - 1.0) < 1e-9 for j, w in enumerate(weights) if w != 0)
        kernel_count += in_kernel
        support = [j for j, w in enumerate(weights) if w != 0 and abs(x[j]) > zero_tol]
        if not support:
            return math.inf
        fix_count += all(abs(g[j] * x[j] - x[j]) < 1e-9 * (1 + abs(x[j])) for j in support)
    assert fix_count % kernel_count == 0
    return fix_count // kernel_count


def subset_chi(weights):
    """Maximal brute-force stabilizer order over all nonempty coordinate-subset
    indicator points of the nonzero-weight coordinates."""
    weights = [int(w) for w in weights]
    idx = [j for j, w in enumerate(weights) if w != 0]
    best = 1
    for mask in range(1, 2 ** len(idx)):
        x = np.zeros(len(weights), dtype=np.complex128)
        for b, j in enumerate(idx):
            if (mask >> b) & 1:
                x[j] = 1.0
        best = max(best, brute_stabilizer_order(weights, x))
    return best


def dense_alignment_max(weights, x, z, n=1_000_000):
    """max_theta <x, g_theta z> on a dense grid, via direct exponentials."""
    weights = np.asarray(weights, dtype=np.float64)
    x = np.asarray(x, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    coeffs = np.conj(x) * z
    thetas = 2.0 * np.pi * np.arange(n) / n
    best = -np.inf
    chunk = 1 << 18
    for start in range(0, n, chunk):
        th = thetas[start:start + chunk]
        vals = (np.exp(1j * np.outer(th, weights)) @ coeffs).real
        best = max(best, float(vals.max()))
    return best


def dense_orbit_distance(weights, x, z, n=4096):
    """min_theta ||x - g_theta z|| by direct norm evaluation on a grid.

    Never uses inner products or the polarization identity, so it is an
    independent check of the solver's quotient distance (from above: the
    grid minimum can only overshoot the true minimum).
    """
    weights = np.asarray(weights, dtype=np.float64)
    x = np.asarray(x, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    thetas = 2.0 * np.pi * np.arange(n) / n
    rotated = np.exp(1j * np.outer(thetas, weights)) * z
    return float(np.linalg.norm(rotated - x, axis=1).min())


def enum_bispectrum_triples(entries):
    """Exhaustive enumeration of admissible bispectrum triples."""
    mult = {int(k): int(p) for k, p in entries}
    out = []
    for k1 in sorted(mult):
        for k2 in sorted(mult):
            if k1 + k2 not in mult:
                continue
            for q1 in range(mult[k1]):
                for q2 in range(mult[k2]):
                    for q3 in range(mult[k1 + k2]):
                        out.append(((k1, q1), (k2, q2), (k1 + k2, q3)))
    return out


def random_circle_point(rng, dim, scale=1.0):
    return scale * (rng.standard_normal(dim) + 1j * rng.standard_normal(dim))


def random_weights(rng, dim, max_abs=8):
    while True:
        w = rng.integers(-max_abs, max_abs + 1, size=dim)
        if np.any(w != 0):
            return tuple(int(v) for v in w)
