"""Empirical bilipschitz analysis of invariant embeddings.

Every estimator here is embedding-agnostic: it takes a callable
point -> feature vector together with the acting group, samples orbit pairs,
and compares feature-space displacement against the quotient distance.  The
quotient distances in every denominator come from a deliberately more
expensive solver configuration than any embedding under test, so shared
error cannot cancel silently.  Reported extremes are observed bounds, never
certified ones: the empirical alpha is an upper bound on the true lower
Lipschitz constant and the empirical beta a lower bound on the true upper
one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .actions import FiniteGroupAction, WeightedCircleAction, to_complex, to_real
from .maxfilter import (
    DEFAULT_CONFIG,
    HI_RES_CONFIG,
    CircleSolverConfig,
    MaxFilterResult,
    TrigPolynomial,
    max_filter,
    maximize_trig,
    quotient_distance,
)

__all__ = [
    "StabilityReport",
    "DegenerateDirectionResult",
    "VoronoiProbe",
    "estimate_bilipschitz",
    "local_lower_probe",
    "ratio_trace",
    "find_degenerate_direction",
    "cosine_family_maxima",
    "voronoi_multiplicity_probe",
    "log_log_slope",
]

DEFAULT_DIST_FLOOR_REL = 1e-9


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """Observed ratio extremes of |f(x)-f(y)| / d([x],[y]) over sampled pairs."""

    alpha_hat: float
    beta_hat: float
    num_pairs: int
    worst_pair: tuple
    ratio_histogram: tuple
    scale_trace: tuple | None = None

    def to_dict(self) -> dict:
        x, y, r = self.worst_pair
        return {
            "alpha_hat": self.alpha_hat,
            "beta_hat": self.beta_hat,
            "num_pairs": self.num_pairs,
            "worst_pair": {"x": _point_to_list(x), "y": _point_to_list(y), "ratio": r},
            "ratio_histogram": [list(b) for b in self.ratio_histogram],
            "scale_trace": None if self.scale_trace is None else [list(b) for b in self.scale_trace],
        }


@dataclass(frozen=True, eq=False)
class DegenerateDirectionResult:
    """Unit direction in the normal space orthogonal to x on which the
    numerical differential of the embedding (nearly) vanishes."""

    direction: np.ndarray
    residual: float
    fd_error: float
    ratio_trace: tuple


@dataclass(frozen=True)
class VoronoiProbe:
    """Argmax multiplicity under grid refinement: 'unique' when one witness
    survives every refinement level, 'multiple' when several do, 'flat' when
    the alignment objective is constant to tolerance."""

    multiplicity: int
    classification: str
    per_level: tuple


def _point_to_list(p) -> list:
    p = np.asarray(p)
    if np.iscomplexobj(p):
        return to_real(p).tolist()
    return p.astype(np.float64).tolist()


def _sample_point(action, rng, scale: float):
    v = scale * rng.standard_normal(action.dim_real)
    return to_complex(v) if isinstance(action, WeightedCircleAction) else v


def _pair_floor(x, y, dist_floor_rel: float) -> float:
    return dist_floor_rel * (float(np.linalg.norm(x)) + float(np.linalg.norm(y)))


def estimate_bilipschitz(
    f,
    action,
    num_pairs: int,
    seed: int = 0,
    scale: float = 1.0,
    dist_floor_rel: float = DEFAULT_DIST_FLOOR_REL,
    hi_res: CircleSolverConfig = HI_RES_CONFIG,
    num_buckets: int = 20,
) -> StabilityReport:
    """Sample Gaussian pairs and record the extremes of the embedding ratio.

    Pairs whose quotient distance falls below dist_floor_rel * (|x| + |y|)
    are excluded (the ratio there is 0/0 up to solver noise).  Deterministic
    per seed.
    """
    if num_pairs < 1:
        raise ValueError("num_pairs must be >= 1")
    rng = np.random.default_rng(seed)
    ratios = []
    worst = None
    for _ in range(num_pairs):
        x = _sample_point(action, rng, scale)
        y = _sample_point(action, rng, scale)
        d = quotient_distance(action, x, y, hi_res)
        if d <= _pair_floor(x, y, dist_floor_rel):
            continue
        r = float(np.linalg.norm(np.asarray(f(x)) - np.asarray(f(y)))) / d
        ratios.append(r)
        if worst is None or r < worst[2]:
            worst = (x, y, r)
    if not ratios:
        raise ValueError("degenerate sampler: every pair fell below the distance floor")
    ratios = np.asarray(ratios)
    alpha, beta = float(ratios.min()), float(ratios.max())
    return StabilityReport(
        alpha_hat=alpha,
        beta_hat=beta,
        num_pairs=len(ratios),
        worst_pair=worst,
        ratio_histogram=_histogram(ratios, alpha, beta, num_buckets),
    )


def _histogram(ratios: np.ndarray, lo: float, hi: float, num_buckets: int) -> tuple:
    if hi - lo <= 1e-12 * max(abs(lo), abs(hi), 1.0):
        return ((lo, hi, int(ratios.size)),)
    counts, edges = np.histogram(ratios, bins=num_buckets, range=(lo, hi))
    return tuple(
        (float(edges[i]), float(edges[i + 1]), int(c)) for i, c in enumerate(counts)
    )


def local_lower_probe(
    f,
    action,
    x,
    scales,
    pairs_per_scale: int = 100,
    seed: int = 0,
    dist_floor_rel: float = DEFAULT_DIST_FLOOR_REL,
    hi_res: CircleSolverConfig = HI_RES_CONFIG,
) -> tuple:
    """Minimal embedding ratio over pairs drawn inside shrinking balls at x.

    A locally lower Lipschitz embedding keeps the trace bounded away from
    zero as the scale shrinks; a failing one trends to zero with it.
    Returns ((scale, min_ratio), ...) in the given scale order.
    """
    x = action.check_point(x)
    rng = np.random.default_rng(seed)
    dim = action.dim_real
    trace = []
    for t in scales:
        if t <= 0:
            raise ValueError("scales must be positive")
        best = None
        for _ in range(pairs_per_scale):
            p = x + _ball_point(rng, dim, t, np.iscomplexobj(x))
            q = x + _ball_point(rng, dim, t, np.iscomplexobj(x))
            d = quotient_distance(action, p, q, hi_res)
            if d <= _pair_floor(p, q, dist_floor_rel):
                continue
            r = float(np.linalg.norm(np.asarray(f(p)) - np.asarray(f(q)))) / d
            if best is None or r < best:
                best = r
        if best is None:
            raise ValueError(f"every pair at scale {t} fell below the distance floor")
        trace.append((float(t), best))
    return tuple(trace)


def _ball_point(rng, dim: int, radius: float, as_complex: bool):
    v = rng.standard_normal(dim)
    v *= radius * rng.uniform() ** (1.0 / dim) / np.linalg.norm(v)
    return to_complex(v) if as_complex else v


def ratio_trace(
    f,
    action,
    pairs,
    hi_res: CircleSolverConfig = HI_RES_CONFIG,
    dist_floor_rel: float = DEFAULT_DIST_FLOOR_REL,
) -> tuple:
    """Embedding ratio along an explicit family of (x, y, label) pairs;
    sub-floor pairs are skipped."""
    out = []
    for x, y, label in pairs:
        d = quotient_distance(action, x, y, hi_res)
        if d <= _pair_floor(x, y, dist_floor_rel):
            continue
        r = float(np.linalg.norm(np.asarray(f(x)) - np.asarray(f(y)))) / d
        out.append((float(label), r))
    return tuple(out)


def _as_real_fn(f, as_complex: bool):
    if as_complex:
        return lambda r: np.asarray(f(to_complex(r)), dtype=np.float64)
    return lambda r: np.asarray(f(r), dtype=np.float64)


def _jacobian(f_real, r: np.ndarray, h: float) -> np.ndarray:
    cols = []
    for i in range(r.size):
        e = np.zeros(r.size)
        e[i] = h
        cols.append((f_real(r + e) - f_real(r - e)) / (2.0 * h))
    return np.stack(cols, axis=1)


def find_degenerate_direction(
    f,
    action,
    x,
    fd_step: float | None = None,
    trace_scales=(1e-1, 1e-2, 1e-3, 1e-4),
    hi_res: CircleSolverConfig = HI_RES_CONFIG,
) -> DegenerateDirectionResult:
    """Direction in N_x intersected with x-perp where Df(x) is closest to zero.

    Builds the Jacobian by central differences (step halved once to report a
    convergence error), restricts it to the orthogonal complement of the
    orbit tangent span and of x itself, and returns the right singular
    vector of least singular value.  The residual is reported, never
    asserted zero: at a nonprincipal point a differentiable invariant must
    have such a kernel direction, at principal points nothing is guaranteed.

    Raises when the Jacobian is non-finite (the map is not differentiable
    at x, which max filter banks legitimately are not at orbit collisions).
    """
    x = action.check_point(x)
    as_complex = isinstance(action, WeightedCircleAction)
    xr = to_real(x) if as_complex else np.asarray(x, dtype=np.float64)
    if fd_step is None:
        fd_step = 1e-5 * (1.0 + float(np.linalg.norm(xr)))
    f_real = _as_real_fn(f, as_complex)
    jac = _jacobian(f_real, xr, fd_step)
    jac_half = _jacobian(f_real, xr, fd_step / 2.0)
    if not (np.isfinite(jac).all() and np.isfinite(jac_half).all()):
        raise ValueError("Jacobian is non-finite: embedding not differentiable at x")
    fd_error = float(np.abs(jac - jac_half).max())

    removed = [xr]
    if as_complex:
        removed.insert(0, to_real(action.tangent_at(x)))
    m = np.stack(removed, axis=1)
    u, s, _ = np.linalg.svd(m, full_matrices=True)
    rank = int((s > 1e-12 * (s.max() if s.size else 1.0)).sum())
    basis = u[:, rank:]
    if basis.shape[1] == 0:
        raise ValueError("N_x intersected with x-perp is trivial at this point")

    _, sv, vt = np.linalg.svd(jac_half @ basis)
    coeffs = vt[-1]
    residual = float(sv[-1]) if sv.size else 0.0
    v_real = basis @ coeffs
    v = to_complex(v_real) if as_complex else v_real

    pairs = [(x + t * v, x, t) for t in trace_scales]
    trace = ratio_trace(f, action, pairs, hi_res)
    return DegenerateDirectionResult(v, residual, fd_error, trace)


def cosine_family_maxima(k_values, config: CircleSolverConfig | None = None) -> list:
    """Maxima of the family f_k(theta) = k cos(theta) - cos(2 theta).

    For k < 4 the maximum is k^2/8 + 1, attained at +-arccos(k/4); at k = 4
    the two argmax branches merge into a single flat maximum of 3 at 0.
    Returns (k, max_value, witnesses) per k.
    """
    if config is None:
        config = CircleSolverConfig(oversample=16, refine_iters=60)
    out = []
    for k in k_values:
        poly = TrigPolynomial.from_terms([(1, complex(k)), (2, -1.0 + 0j)])
        res = maximize_trig(poly, config)
        out.append((float(k), res.value, res.witnesses))
    return out


def voronoi_multiplicity_probe(
    action,
    x,
    z,
    config: CircleSolverConfig = DEFAULT_CONFIG,
    refinement_factors=(1, 2, 4),
) -> VoronoiProbe:
    """Classify the argmax structure of <x, g z>: a stable single witness is
    numerical evidence that z sits in the open Voronoi region of a unique
    orbit representative; stable multiple witnesses are evidence against."""
    results: list = []
    for factor in refinement_factors:
        if isinstance(action, WeightedCircleAction):
            results.append(max_filter(action, x, z, config.scaled(factor)))
        else:
            results.append(max_filter(action, x, z))
    if any(r.flat for r in results):
        label = "flat"
    elif all(r.multiplicity == 1 for r in results):
        label = "unique"
    else:
        label = "multiple"
    return VoronoiProbe(results[-1].multiplicity, label, tuple(r.multiplicity for r in results))


def log_log_slope(trace) -> float:
    """Least-squares slope of log(value) against log(scale)."""
    pts = [(t, v) for t, v in trace if t > 0 and v > 0]
    if len(pts) < 2:
        raise ValueError("need at least two positive trace points")
    lt = np.log([t for t, _ in pts])
    lv = np.log([v for _, v in pts])
    return float(np.polyfit(lt, lv, 1)[0])
