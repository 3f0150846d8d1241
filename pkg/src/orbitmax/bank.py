"""Max filter banks: template lists defining the embedding
Phi([x]) = (<<[x],[z_1]>>, ..., <<[x],[z_n]>>), their recommended sizes, and
the split form that passes a fixed subspace through untouched."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .actions import (
    FiniteGroupAction,
    FixedSplit,
    WeightedCircleAction,
    action_from_spec,
    action_to_spec,
    cohomogeneity,
    fixed_split,
    to_complex,
    to_real,
    voronoi_complexity,
)
from .maxfilter import DEFAULT_CONFIG, CircleSolverConfig, max_filter

__all__ = [
    "TemplateCounts",
    "MaxFilterBank",
    "SplitBank",
    "recommended_template_count",
    "generate_templates",
    "make_bank",
    "embed",
    "embed_batch",
    "split_bank",
    "split_embed",
    "bank_to_spec",
    "bank_from_spec",
    "save_bank",
    "load_bank",
]


class TemplateCounts(NamedTuple):
    """Template counts making a generic bank bilipschitz (2 chi (c-1) + 1,
    the smallest n exceeding 2 chi (c-1)) respectively injective (2 c)."""

    bilipschitz: int
    injectivity: int


def recommended_template_count(action) -> TemplateCounts:
    chi = voronoi_complexity(action)
    c = cohomogeneity(action)
    return TemplateCounts(2 * chi * (c - 1) + 1, 2 * c)


def generate_templates(action, n: int, seed: int) -> list:
    """n i.i.d. standard Gaussian draws on the real form of the space.

    Gaussian draws are generic with probability one, which is all the
    bilipschitz guarantees ask of templates; an exact-zero draw is redrawn.
    Deterministic for a fixed seed.
    """
    if n < 1:
        raise ValueError("at least one template is required")
    rng = np.random.default_rng(seed)
    dim = action.dim_real
    out = []
    for _ in range(n):
        v = rng.standard_normal(dim)
        while not v.any():
            v = rng.standard_normal(dim)
        out.append(to_complex(v) if isinstance(action, WeightedCircleAction) else v)
    return out


@dataclass(frozen=True, eq=False)
class MaxFilterBank:
    """Immutable template list plus the solver configuration used to embed."""

    action: object
    templates: tuple
    config: CircleSolverConfig = DEFAULT_CONFIG
    seed: int | None = None

    def __post_init__(self):
        templates = tuple(self.action.check_point(z) for z in self.templates)
        if not templates:
            raise ValueError("a bank needs at least one template")
        object.__setattr__(self, "templates", templates)

    @property
    def size(self) -> int:
        return len(self.templates)

    @property
    def template_frobenius(self) -> float:
        return math.sqrt(sum(float(np.abs(np.vdot(z, z))) for z in self.templates))


def make_bank(
    action,
    n: int | None = None,
    seed: int = 0,
    config: CircleSolverConfig = DEFAULT_CONFIG,
) -> MaxFilterBank:
    """Bank with generated templates; n defaults to the bilipschitz count."""
    if n is None:
        n = recommended_template_count(action).bilipschitz
    return MaxFilterBank(action, tuple(generate_templates(action, n, seed)), config, seed)


def embed(bank: MaxFilterBank, x) -> np.ndarray:
    """Phi([x]): one max filter value per template."""
    x = bank.action.check_point(x)
    return np.array(
        [max_filter(bank.action, x, z, bank.config).value for z in bank.templates]
    )


def embed_batch(bank: MaxFilterBank, points) -> np.ndarray:
    """Embed many points; rows follow the input order.

    Purely a loop over :func:`embed` -- every evaluation is independent, so
    callers may shard this across workers freely.
    """
    return np.array([embed(bank, x) for x in points]).reshape(-1, bank.size)


@dataclass(frozen=True, eq=False)
class SplitBank:
    """Embedding (alpha * P_F x, beta * Phi([P_V x])) of Remark-style form:
    the subspace F fixed by the whole group passes through linearly, the
    reduced bank embeds the complement."""

    split: FixedSplit
    reduced_bank: MaxFilterBank
    alpha: float
    beta: float

    def __post_init__(self):
        if not (0.0 < self.alpha <= self.beta):
            raise ValueError("scales must satisfy 0 < alpha <= beta")

    @property
    def dim_out(self) -> int:
        return self.split.dim_fixed_real + self.reduced_bank.size


def split_bank(
    action: WeightedCircleAction,
    templates,
    alpha: float,
    beta: float,
    config: CircleSolverConfig = DEFAULT_CONFIG,
) -> SplitBank:
    """Build a split bank from full-space templates (restricted internally)."""
    split = fixed_split(action)
    reduced_templates = tuple(split.restrict(action.check_point(z)) for z in templates)
    return SplitBank(split, MaxFilterBank(split.reduced, reduced_templates, config), alpha, beta)


def split_embed(sb: SplitBank, x) -> np.ndarray:
    return np.concatenate([
        sb.alpha * sb.split.fixed_part(x),
        sb.beta * embed(sb.reduced_bank, sb.split.restrict(x)),
    ])


def _template_to_list(action, z) -> list:
    if isinstance(action, WeightedCircleAction):
        return to_real(z).tolist()
    return np.asarray(z, dtype=np.float64).tolist()


def bank_to_spec(bank: MaxFilterBank) -> dict:
    """JSON-ready bank description; floats serialize at full precision so the
    round trip is exact."""
    return {
        "action": action_to_spec(bank.action),
        "templates": [_template_to_list(bank.action, z) for z in bank.templates],
        "config": {
            "oversample": bank.config.oversample,
            "refine_iters": bank.config.refine_iters,
            "refine_method": bank.config.refine_method,
        },
        "seed": bank.seed,
        "template_frobenius": bank.template_frobenius,
    }


def bank_from_spec(spec: dict) -> MaxFilterBank:
    action = action_from_spec(spec["action"])
    if isinstance(action, WeightedCircleAction):
        templates = tuple(to_complex(t) for t in spec["templates"])
    else:
        templates = tuple(np.asarray(t, dtype=np.float64) for t in spec["templates"])
    cfg = spec.get("config", {})
    config = CircleSolverConfig(
        cfg.get("oversample", DEFAULT_CONFIG.oversample),
        cfg.get("refine_iters", DEFAULT_CONFIG.refine_iters),
        cfg.get("refine_method", DEFAULT_CONFIG.refine_method),
    )
    bank = MaxFilterBank(action, templates, config, spec.get("seed"))
    stored = spec.get("template_frobenius")
    if stored is not None and abs(stored - bank.template_frobenius) > 1e-12 * (1.0 + stored):
        raise ValueError("stored template_frobenius disagrees with the templates")
    return bank


def save_bank(bank: MaxFilterBank, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(bank_to_spec(bank), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_bank(path) -> MaxFilterBank:
    with open(path, encoding="utf-8") as fh:
        return bank_from_spec(json.load(fh))
