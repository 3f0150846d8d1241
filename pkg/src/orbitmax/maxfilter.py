"""Max filtering: the maximal alignment <<[x],[z]>> between two orbits and the
quotient distance it induces.

For a finite group the maximum is an exact enumeration.  For a weighted
circle action the alignment objective is the trigonometric polynomial
f(theta) = Re sum_w c_w e^(i w theta) with c_w = sum_{k_j = w} conj(x_j) z_j;
it is sampled on a uniform grid via one inverse FFT of the zero-padded
coefficient array, and every surviving grid-local maximum is polished by a
bracketed golden-section (or Newton) refinement.  All refined near-ties are
reported as argmax witnesses, since their multiplicity is what decides
Voronoi-cell membership downstream.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .actions import DimensionMismatch, FiniteGroupAction, WeightedCircleAction

__all__ = [
    "TrigPolynomial",
    "CircleSolverConfig",
    "MaxFilterResult",
    "DEFAULT_CONFIG",
    "HI_RES_CONFIG",
    "alignment_polynomial",
    "maximize_trig",
    "cluster_witnesses",
    "max_filter_circle",
    "max_filter_finite",
    "max_filter",
    "quotient_distance",
]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0

# Cap on the reported multiplicity when the objective is flat: every grid
# point ties and the cluster count would just echo the grid size.
FLAT_MULTIPLICITY_CAP = 64


@dataclass(frozen=True, eq=False)
class TrigPolynomial:
    """f(theta) = Re sum_m c_m e^(i w_m theta) with distinct integer frequencies."""

    freqs: tuple
    coeffs: np.ndarray

    def __post_init__(self):
        freqs = tuple(int(w) for w in self.freqs)
        if len(set(freqs)) != len(freqs):
            raise ValueError("frequencies must be distinct")
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if coeffs.shape != (len(freqs),):
            raise ValueError("one coefficient per frequency required")
        coeffs.setflags(write=False)
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "coeffs", coeffs)
        # Plain-python term list: the scalar evaluations inside the
        # refinement loop are much faster off the numpy path.
        object.__setattr__(
            self, "_terms", tuple((w, complex(c)) for w, c in zip(freqs, coeffs))
        )

    @classmethod
    def from_terms(cls, terms) -> "TrigPolynomial":
        terms = list(terms)
        return cls(tuple(w for w, _ in terms), np.array([c for _, c in terms]))

    @property
    def max_freq(self) -> int:
        return max((abs(w) for w in self.freqs), default=0)

    def evaluate(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=np.float64)
        total = np.zeros(theta.shape, dtype=np.complex128)
        for w, c in self._terms:
            total += c * np.exp(1j * w * theta)
        return total.real

    def evaluate_scalar(self, theta: float) -> float:
        return sum(c * cmath.exp(1j * w * theta) for w, c in self._terms).real

    def derivative_scalar(self, theta: float) -> float:
        return sum(1j * w * c * cmath.exp(1j * w * theta) for w, c in self._terms).real

    def second_derivative_scalar(self, theta: float) -> float:
        return sum(-(w * w) * c * cmath.exp(1j * w * theta) for w, c in self._terms).real

    def curvature_bound(self) -> float:
        """Upper bound on |f''|, used to budget how far a refined maximum can
        climb above its grid sample."""
        return float(sum(w * w * abs(c) for w, c in self._terms))


@dataclass(frozen=True)
class CircleSolverConfig:
    """Grid size and refinement policy for the circle solver.

    The grid has N = oversample * (2 K + 1) points (never fewer than 8),
    where K is the polynomial's maximal frequency: 2K + 1 samples already
    determine the polynomial, and the oversampling plus refinement controls
    the location error of the maximum.  Golden-section refinement shrinks
    the bracketing interval by phi^(-refine_iters); the Newton mode uses the
    closed-form derivative instead.
    """

    oversample: int = 8
    refine_iters: int = 40
    refine_method: str = "golden"

    def __post_init__(self):
        if self.oversample < 1:
            raise ValueError("oversample must be >= 1")
        if self.refine_iters < 0:
            raise ValueError("refine_iters must be >= 0")
        if self.refine_method not in ("golden", "newton"):
            raise ValueError(f"unknown refine_method {self.refine_method!r}")

    def grid_size(self, max_freq: int) -> int:
        return max(8, self.oversample * (2 * max_freq + 1))

    def scaled(self, factor: int) -> "CircleSolverConfig":
        return CircleSolverConfig(self.oversample * factor, self.refine_iters, self.refine_method)


DEFAULT_CONFIG = CircleSolverConfig()
# Ground-truth configuration used wherever a quotient distance serves as the
# denominator of an empirical ratio.
HI_RES_CONFIG = CircleSolverConfig(oversample=64, refine_iters=60)


@dataclass(frozen=True, eq=False)
class MaxFilterResult:
    """Maximal alignment value plus all argmax witnesses within cluster_tol.

    Witnesses are angles in [-pi, pi) for circle actions and element indices
    for finite actions; multiplicity counts witness clusters.  ``flat``
    marks a degenerate objective (constant to within cluster_tol), where the
    multiplicity is capped and not meaningful.
    """

    value: float
    witnesses: tuple
    multiplicity: int
    flat: bool = False


def _wrap_angle(theta: float) -> float:
    return (theta + math.pi) % (2.0 * math.pi) - math.pi


def alignment_polynomial(action: WeightedCircleAction, x, z) -> TrigPolynomial:
    """The objective theta -> <x, g_theta z> as a trigonometric polynomial.

    Grouping coordinates by weight gives c_w = sum_{j: k_j = w} conj(x_j) z_j
    and <x, g_theta z> = Re sum_w c_w e^(i w theta) exactly.  One term per
    distinct weight of the action is kept even when its coefficient is zero.
    """
    x = action.check_point(x)
    z = action.check_point(z)
    groups: dict = {}
    for w, xj, zj in zip(action.weights, x, z):
        groups[w] = groups.get(w, 0.0) + np.conj(xj) * zj
    freqs = sorted(groups)
    return TrigPolynomial(tuple(freqs), np.array([groups[w] for w in freqs]))


def _golden_max(f, a: float, b: float, iters: int, seed_point=None):
    """Golden-section search for a maximum of f on [a, b].

    Returns the best point actually evaluated; if ``seed_point`` is given as
    (theta, value) it participates, so the result never falls below the grid
    sample that opened the bracket.
    """
    h = b - a
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    fc, fd = f(c), f(d)
    best = (c, fc) if fc >= fd else (d, fd)
    if seed_point is not None and seed_point[1] > best[1]:
        best = seed_point
    for _ in range(max(0, iters - 2)):
        if fc >= fd:
            b, d, fd = d, c, fc
            h *= _INV_PHI
            c = a + _INV_PHI2 * h
            fc = f(c)
            if fc > best[1]:
                best = (c, fc)
        else:
            a, c, fc = c, d, fd
            h *= _INV_PHI
            d = a + _INV_PHI * h
            fd = f(d)
            if fd > best[1]:
                best = (d, fd)
    return best


def _newton_max(poly: TrigPolynomial, a: float, b: float, center: float, iters: int):
    """Safeguarded Newton iteration on f' within [a, b], started at the grid
    point; falls back to the midpoint step when curvature has the wrong sign."""
    t = center
    best = (t, poly.evaluate_scalar(t))
    lo, hi = a, b
    for _ in range(iters):
        d1 = poly.derivative_scalar(t)
        d2 = poly.second_derivative_scalar(t)
        if d2 < 0.0 and math.isfinite(d1 / d2):
            step = -d1 / d2
            t_new = t + step
        else:
            t_new = 0.5 * (lo + hi)
        if not (lo <= t_new <= hi):
            t_new = 0.5 * (lo + hi)
        # Keep a shrinking safeguard bracket around the current iterate.
        if t_new < t:
            hi = t
        elif t_new > t:
            lo = t
        if abs(t_new - t) < 1e-16:
            break
        t = t_new
        v = poly.evaluate_scalar(t)
        if v > best[1]:
            best = (t, v)
    return best


def cluster_witnesses(candidates, cluster_tol: float, merge_radius: float) -> MaxFilterResult:
    """Cluster refined maxima into argmax witnesses.

    ``candidates`` are (angle, value) pairs.  Entries within ``cluster_tol``
    of the best value are kept and merged whenever their angles differ by at
    most ``merge_radius`` (circularly); each cluster contributes its
    best-valued angle.  Multiplicity is the cluster count, which is what the
    Voronoi-membership probes consume.
    """
    if cluster_tol <= 0:
        raise ValueError("cluster_tol must be positive")
    cand = sorted(candidates, key=lambda tv: tv[1], reverse=True)
    if not cand:
        raise ValueError("no candidates to cluster")
    value = cand[0][1]
    near = sorted((_wrap_angle(t), v) for t, v in cand if v >= value - cluster_tol)
    clusters: list = []
    for t, v in near:
        if clusters and t - clusters[-1][-1][0] <= merge_radius:
            clusters[-1].append((t, v))
        else:
            clusters.append([(t, v)])
    # Circular wrap: the first and last clusters may be one.
    if len(clusters) > 1:
        gap = (near[0][0] + 2.0 * math.pi) - clusters[-1][-1][0]
        if gap <= merge_radius:
            clusters[0] = clusters.pop() + clusters[0]
    witnesses = tuple(sorted(max(cl, key=lambda tv: tv[1])[0] for cl in clusters))
    return MaxFilterResult(value, witnesses, len(clusters))


def maximize_trig(
    poly: TrigPolynomial,
    config: CircleSolverConfig = DEFAULT_CONFIG,
    cluster_tol: float | None = None,
    merge_radius: float | None = None,
) -> MaxFilterResult:
    """Global maximum of a trigonometric polynomial over the circle.

    Samples f at the N angles 2 pi t / N through a single inverse FFT,
    refines every grid-local maximum that could still contend for the top
    (a curvature bound prunes the rest), and clusters the refined near-ties
    into witnesses.  cluster_tol defaults to 1e-6 * (1 + |value|) and the
    merge radius to one grid step.
    """
    k = poly.max_freq
    n = config.grid_size(k)
    spectrum = np.zeros(n, dtype=np.complex128)
    for w, c in zip(poly.freqs, poly.coeffs):
        spectrum[w % n] += c
    vals = (np.fft.ifft(spectrum) * n).real
    vmax = float(vals.max())
    ctol = cluster_tol if cluster_tol is not None else 1e-6 * (1.0 + abs(vmax))
    mrad = merge_radius if merge_radius is not None else 2.0 * math.pi / n

    if vmax - float(vals.min()) <= ctol:
        theta = _wrap_angle(2.0 * math.pi * int(vals.argmax()) / n)
        return MaxFilterResult(vmax, (theta,), min(n, FLAT_MULTIPLICITY_CAP), flat=True)

    local = (vals > np.roll(vals, 1)) & (vals >= np.roll(vals, -1))
    margin = poly.curvature_bound() * (2.0 * math.pi / n) ** 2 + ctol
    keep = np.nonzero(local & (vals >= vmax - 2.0 * margin))[0]

    step = 2.0 * math.pi / n
    candidates = []
    for t in keep:
        theta_t = step * float(t)
        seed = (theta_t, float(vals[t]))
        if config.refine_iters == 0:
            candidates.append(seed)
        elif config.refine_method == "newton":
            candidates.append(_newton_max(poly, theta_t - step, theta_t + step, theta_t, config.refine_iters))
        else:
            candidates.append(
                _golden_max(poly.evaluate_scalar, theta_t - step, theta_t + step, config.refine_iters, seed)
            )
    best = max(v for _, v in candidates)
    if cluster_tol is None:
        ctol = 1e-6 * (1.0 + abs(best))
    return cluster_witnesses(candidates, ctol, mrad)


def max_filter_circle(
    action: WeightedCircleAction,
    x,
    z,
    config: CircleSolverConfig = DEFAULT_CONFIG,
    cluster_tol: float | None = None,
) -> MaxFilterResult:
    """<<[x],[z]>> for a weighted circle action, with argmax angles."""
    return maximize_trig(alignment_polynomial(action, x, z), config, cluster_tol)


def max_filter_finite(
    action: FiniteGroupAction, x, z, cluster_tol: float | None = None
) -> MaxFilterResult:
    """<<[x],[z]>> for a finite action: exact maximum of <x, Q z> over the
    element list, witnesses as element indices."""
    x = action.check_point(x)
    z = action.check_point(z)
    vals = (action.elements @ z) @ x
    value = float(vals.max())
    ctol = cluster_tol if cluster_tol is not None else 1e-6 * (1.0 + abs(value))
    witnesses = tuple(int(i) for i in np.nonzero(vals >= value - ctol)[0])
    flat = bool(value - float(vals.min()) <= ctol) and action.order > 1
    return MaxFilterResult(value, witnesses, len(witnesses), flat=flat)


def max_filter(action, x, z, config: CircleSolverConfig | None = None, cluster_tol=None) -> MaxFilterResult:
    """Dispatch to the circle or finite solver based on the action type."""
    if isinstance(action, WeightedCircleAction):
        return max_filter_circle(action, x, z, config or DEFAULT_CONFIG, cluster_tol)
    if isinstance(action, FiniteGroupAction):
        return max_filter_finite(action, x, z, cluster_tol)
    raise TypeError(f"unsupported action type {type(action).__name__}")


def quotient_distance(action, x, z, config: CircleSolverConfig | None = None) -> float:
    """Distance between the orbits [x] and [z].

    d([x],[z])^2 = |x|^2 + |z|^2 - 2 <<[x],[z]>>, with the square clamped at
    zero because refinement error can push same-orbit pairs slightly
    negative.  The identity cancels catastrophically when the orbits nearly
    coincide (the computed value saturates near sqrt(eps) times the scale),
    so the direct norm |x - g z| at the argmax witness, which is the same
    quantity without the cancellation, is evaluated as well and the smaller
    of the two upper bounds is returned.
    """
    x = action.check_point(x)
    z = action.check_point(z)
    res = max_filter(action, x, z, config)
    if isinstance(action, FiniteGroupAction):
        # Witnesses are exact argmaxes here, so the direct norm is the
        # distance itself, with no cancellation at all.
        return min(float(np.linalg.norm(x - action.apply(w, z))) for w in res.witnesses)
    nx2 = float(np.abs(np.vdot(x, x)))
    nz2 = float(np.abs(np.vdot(z, z)))
    d = math.sqrt(max(0.0, nx2 + nz2 - 2.0 * res.value))
    for w in res.witnesses:
        d = min(d, float(np.linalg.norm(x - action.apply(w, z))))
    return d
