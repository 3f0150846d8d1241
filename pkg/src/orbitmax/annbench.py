"""Nearest-neighbor benchmark over the rotational alignment distance.

Synthetic coefficient datasets stand in for steerable-basis expansions of
projection images; ground truth is a brute-force scan of quotient distances
at a high-resolution solver configuration, and the embedded search is an
exact Euclidean scan (a 1-approximate black box), so the only approximation
factor under test is the one the embedding itself introduces.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .actions import WeightedCircleAction, to_complex, to_real
from .bispectrum import FrequencyProfile
from .maxfilter import HI_RES_CONFIG, CircleSolverConfig, quotient_distance
from .stability import DEFAULT_DIST_FLOOR_REL, _pair_floor

__all__ = [
    "CoefficientDataset",
    "AnnReport",
    "synth_dataset",
    "save_dataset",
    "load_dataset",
    "true_nearest",
    "embed_dataset",
    "embedded_nearest",
    "evaluate_lambda",
]


@dataclass(frozen=True, eq=False)
class CoefficientDataset:
    """Coefficient vectors over a frequency profile, plus the generator
    parameters that reproduce them."""

    profile: FrequencyProfile
    points: tuple
    provenance: dict

    def __post_init__(self):
        pts = tuple(self.profile.check_coefficients(p) for p in self.points)
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return len(self.points)


@dataclass(frozen=True, eq=False)
class AnnReport:
    """Per-query approximation factors and the transfer bound they must obey.

    achieved_lambda = d(query, returned) / d(query, true nearest); queries
    whose true distance falls below the floor score 1 by convention.
    alpha_hat and beta_hat are the ratio extremes over every (query, point)
    pair of the same run, so bound = beta_hat / alpha_hat is exactly the
    observed-constant instantiation of the embedding transfer argument.
    """

    queries: tuple
    max_achieved_lambda: float
    mean_achieved_lambda: float
    alpha_hat: float
    beta_hat: float
    bound: float

    def to_dict(self) -> dict:
        return {
            "queries": [dict(q) for q in self.queries],
            "max_achieved_lambda": self.max_achieved_lambda,
            "mean_achieved_lambda": self.mean_achieved_lambda,
            "alpha_hat": self.alpha_hat,
            "beta_hat": self.beta_hat,
            "bound": self.bound,
        }


def synth_dataset(profile: FrequencyProfile, m: int, decay: float, seed: int) -> CoefficientDataset:
    """m coefficient vectors with complex Gaussian entries damped by
    (1 + |k|)^(-decay) per frequency.  Deterministic per seed."""
    if m < 1:
        raise ValueError("dataset size must be >= 1")
    if decay < 0:
        raise ValueError("decay must be >= 0")
    rng = np.random.default_rng(seed)
    scales = np.concatenate([
        np.full(p, (1.0 + abs(k)) ** (-decay)) for k, p in profile.entries
    ])
    points = []
    for _ in range(m):
        v = to_complex(rng.standard_normal(2 * profile.dim))
        points.append(scales * v)
    return CoefficientDataset(
        profile, tuple(points), {"m": m, "decay": float(decay), "seed": int(seed)}
    )


def save_dataset(dataset: CoefficientDataset, path) -> None:
    """JSON-lines: a header object, then one interleaved-real row per point."""
    header = {
        "profile": [list(e) for e in dataset.profile.entries],
        "m": dataset.size,
        "decay": dataset.provenance.get("decay"),
        "seed": dataset.provenance.get("seed"),
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for p in dataset.points:
            fh.write(json.dumps(to_real(p).tolist()) + "\n")


def load_dataset(path) -> CoefficientDataset:
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: missing dataset header line")
    header = json.loads(lines[0])
    profile = FrequencyProfile(tuple(tuple(e) for e in header["profile"]))
    points = []
    for i, ln in enumerate(lines[1:], start=2):
        row = json.loads(ln)
        try:
            points.append(profile.check_coefficients(to_complex(row)))
        except ValueError as exc:
            raise ValueError(f"{path}: line {i}: {exc}") from exc
    if "m" in header and header["m"] != len(points):
        raise ValueError(
            f"{path}: header declares {header['m']} points, found {len(points)}"
        )
    provenance = {k: header.get(k) for k in ("m", "decay", "seed")}
    return CoefficientDataset(profile, tuple(points), provenance)


def true_nearest(
    query,
    dataset: CoefficientDataset,
    config: CircleSolverConfig = HI_RES_CONFIG,
) -> tuple:
    """Brute-force nearest orbit under the alignment distance; ties go to the
    smallest index."""
    if dataset.size == 0:
        raise ValueError("dataset is empty")
    action = dataset.profile.induced_action()
    best_i, best_d = 0, math.inf
    for i, p in enumerate(dataset.points):
        d = quotient_distance(action, query, p, config)
        if d < best_d:
            best_i, best_d = i, d
    return best_i, best_d


def embed_dataset(embedding, dataset: CoefficientDataset) -> np.ndarray:
    return np.array([embedding(p) for p in dataset.points]).reshape(dataset.size, -1)


def embedded_nearest(embedding, query, embedded_points: np.ndarray) -> tuple:
    """Exact Euclidean nearest neighbor in feature space (argmin keeps the
    smallest index on ties)."""
    if embedded_points.shape[0] == 0:
        raise ValueError("dataset is empty")
    dists = np.linalg.norm(embedded_points - np.asarray(embedding(query)), axis=1)
    i = int(dists.argmin())
    return i, float(dists[i])


def _check_compatible(embedding, dataset: CoefficientDataset) -> None:
    induced = dataset.profile.induced_action()
    action = embedding.action
    if isinstance(action, WeightedCircleAction) and action.weights != induced.weights:
        raise ValueError(
            f"embedding acts with weights {action.weights}, dataset profile induces {induced.weights}"
        )


def evaluate_lambda(
    embedding,
    dataset: CoefficientDataset,
    queries,
    config: CircleSolverConfig = HI_RES_CONFIG,
    dist_floor_rel: float = DEFAULT_DIST_FLOOR_REL,
) -> AnnReport:
    """Measure the approximation factor of embedded nearest-neighbor search.

    For every query the full quotient-distance row is computed anyway for
    ground truth, so the same run's ratio extremes alpha_hat/beta_hat come
    for free and the report can check the transfer bound with observed
    constants rather than assumed ones.
    """
    queries = list(queries)
    if not queries:
        raise ValueError("need at least one query")
    _check_compatible(embedding, dataset)
    action = dataset.profile.induced_action()
    embedded = embed_dataset(embedding, dataset)

    records = []
    ratios = []
    lambdas = []
    for q in queries:
        q = dataset.profile.check_coefficients(q)
        fq = np.asarray(embedding(q))
        dists = np.array([quotient_distance(action, q, p, config) for p in dataset.points])
        true_i = int(dists.argmin())
        emb_dists = np.linalg.norm(embedded - fq, axis=1)
        ret_i = int(emb_dists.argmin())
        for i, p in enumerate(dataset.points):
            if dists[i] > _pair_floor(q, p, dist_floor_rel):
                ratios.append(emb_dists[i] / dists[i])
        true_d, ret_d = float(dists[true_i]), float(dists[ret_i])
        if true_d <= _pair_floor(q, dataset.points[true_i], dist_floor_rel):
            lam = 1.0
        else:
            lam = ret_d / true_d
        lambdas.append(lam)
        records.append(
            {
                "true_index": true_i,
                "true_distance": true_d,
                "returned_index": ret_i,
                "returned_distance": ret_d,
                "achieved_lambda": lam,
            }
        )
    if not ratios:
        raise ValueError("every (query, point) pair fell below the distance floor")
    alpha, beta = float(min(ratios)), float(max(ratios))
    return AnnReport(
        queries=tuple(tuple(r.items()) for r in records),
        max_achieved_lambda=float(max(lambdas)),
        mean_achieved_lambda=float(np.mean(lambdas)),
        alpha_hat=alpha,
        beta_hat=beta,
        bound=beta / alpha,
    )
