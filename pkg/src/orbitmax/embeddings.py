"""Embedding backends under one calling convention.

Every backend is a callable point -> real feature vector with the acting
group attached, so the stability estimators and the nearest-neighbor
benchmark can compute quotient distances for any of them.  Complex-valued
backends (the bispectra) are flattened to interleaved reals here, and only
here, so Euclidean norms agree across backends.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .actions import to_real
from .bank import MaxFilterBank, embed
from .bispectrum import FrequencyProfile, bispectrum, build_index, scaled_bispectrum

__all__ = ["BankEmbedding", "BispectrumEmbedding"]


@dataclass(frozen=True, eq=False)
class BankEmbedding:
    """Max filter bank as an embedding callable."""

    bank: MaxFilterBank

    @property
    def action(self):
        return self.bank.action

    @property
    def dim_out(self) -> int:
        return self.bank.size

    def __call__(self, x) -> np.ndarray:
        return embed(self.bank, x)


@dataclass(frozen=True, eq=False)
class BispectrumEmbedding:
    """Bispectrum (optionally cube-root-scaled) as an embedding callable."""

    profile: FrequencyProfile
    scaled: bool = False

    def __post_init__(self):
        object.__setattr__(self, "_index", build_index(self.profile))

    @property
    def action(self):
        return self.profile.induced_action()

    @property
    def dim_out(self) -> int:
        return 2 * len(self._index)

    def __call__(self, a) -> np.ndarray:
        fn = scaled_bispectrum if self.scaled else bispectrum
        return to_real(fn(self._index, a))
