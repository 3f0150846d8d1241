"""Bispectrum invariants for weighted circle actions on coefficient spaces.

The bispectrum collects the cubic monomials a_{k1,q1} a_{k2,q2}
conj(a_{k1+k2,q3}); each is invariant under a -> {z^k a_{k,q}} because the
phases cancel.  The cube-root-scaled variant divides every coefficient by
|a|^(2/3) first.  Both serve as the comparison baseline whose stability
failure modes :mod:`orbitmax.stability` demonstrates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .actions import DimensionMismatch, WeightedCircleAction

__all__ = [
    "FrequencyProfile",
    "BispectrumIndex",
    "build_index",
    "index_size",
    "bispectrum",
    "scaled_bispectrum",
    "cube_root_normalize",
]


@dataclass(frozen=True)
class FrequencyProfile:
    """Frequency layout of a coefficient space: (frequency, multiplicity) pairs.

    A coefficient vector holds the entries a_{k,q} in listing order, q major
    within each frequency block.  The induced symmetry group is the weighted
    circle action with each frequency repeated by its multiplicity.
    """

    entries: tuple

    def __post_init__(self):
        entries = tuple((int(k), int(p)) for k, p in self.entries)
        if not entries:
            raise ValueError("profile needs at least one frequency")
        freqs = [k for k, _ in entries]
        if len(set(freqs)) != len(freqs):
            raise ValueError("frequencies must be distinct")
        if any(p < 1 for _, p in entries):
            raise ValueError("multiplicities must be positive")
        object.__setattr__(self, "entries", entries)
        offsets = {}
        pos = 0
        for k, p in entries:
            offsets[k] = pos
            pos += p
        object.__setattr__(self, "_offsets", offsets)
        object.__setattr__(self, "_dim", pos)

    @property
    def dim(self) -> int:
        return self._dim

    def multiplicity(self, k: int) -> int:
        return dict(self.entries).get(k, 0)

    def offset(self, k: int) -> int:
        return self._offsets[k]

    def induced_action(self) -> WeightedCircleAction:
        return WeightedCircleAction(tuple(k for k, p in self.entries for _ in range(p)))

    def check_coefficients(self, a) -> np.ndarray:
        a = np.atleast_1d(np.asarray(a, dtype=np.complex128))
        if a.shape != (self.dim,):
            raise DimensionMismatch(f"coefficient vector has shape {a.shape}, profile dim is {self.dim}")
        return a

    def weight_action(self, z: complex, a) -> np.ndarray:
        """The action a_{k,q} -> z^k a_{k,q} for |z| = 1."""
        a = self.check_coefficients(a)
        out = a.copy()
        for k, p in self.entries:
            o = self.offset(k)
            out[o:o + p] *= z ** k
        return out


@dataclass(frozen=True, eq=False)
class BispectrumIndex:
    """Stable lexicographic enumeration of the admissible triples
    ((k1,q1),(k2,q2),(k1+k2,q3)); ordered pairs (k1,k2) are both listed."""

    profile: FrequencyProfile
    triples: tuple
    i1: np.ndarray
    i2: np.ndarray
    i3: np.ndarray

    def __len__(self) -> int:
        return len(self.triples)


def build_index(profile: FrequencyProfile) -> BispectrumIndex:
    mult = dict(profile.entries)
    triples = []
    flat = []
    for k1 in sorted(mult):
        for k2 in sorted(mult):
            k3 = k1 + k2
            if k3 not in mult:
                continue
            for q1 in range(mult[k1]):
                for q2 in range(mult[k2]):
                    for q3 in range(mult[k3]):
                        triples.append(((k1, q1), (k2, q2), (k3, q3)))
                        flat.append((
                            profile.offset(k1) + q1,
                            profile.offset(k2) + q2,
                            profile.offset(k3) + q3,
                        ))
    arr = np.asarray(flat, dtype=np.intp).reshape(-1, 3)
    return BispectrumIndex(profile, tuple(triples), arr[:, 0], arr[:, 1], arr[:, 2])


def index_size(profile: FrequencyProfile) -> int:
    """Number of admissible triples: sum over frequency pairs of
    p_{k1} p_{k2} p_{k1+k2}."""
    mult = dict(profile.entries)
    return sum(
        p1 * p2 * mult[k1 + k2]
        for k1, p1 in mult.items()
        for k2, p2 in mult.items()
        if (k1 + k2) in mult
    )


def _resolve_index(profile_or_index) -> BispectrumIndex:
    if isinstance(profile_or_index, BispectrumIndex):
        return profile_or_index
    if isinstance(profile_or_index, FrequencyProfile):
        return build_index(profile_or_index)
    raise TypeError("expected a FrequencyProfile or a BispectrumIndex")


def bispectrum(profile_or_index, a) -> np.ndarray:
    """Complex bispectrum vector of the coefficient vector a.

    Passing a prebuilt :class:`BispectrumIndex` avoids re-enumerating the
    triples in hot loops.  The output stays complex; flattening to
    interleaved reals is the comparison layer's job, so norms match there.
    """
    index = _resolve_index(profile_or_index)
    a = index.profile.check_coefficients(a)
    return a[index.i1] * a[index.i2] * np.conj(a[index.i3])


def cube_root_normalize(a) -> np.ndarray:
    """Componentwise a / |a|^(2/3), continuously extended by 0 at 0."""
    a = np.asarray(a, dtype=np.complex128)
    mag = np.abs(a)
    out = np.zeros_like(a)
    nz = mag > 0
    out[nz] = a[nz] * mag[nz] ** (-2.0 / 3.0)
    return out


def scaled_bispectrum(profile_or_index, a) -> np.ndarray:
    """Bispectrum after cube-root normalization of each coefficient.

    The composite is homogeneous of degree 1 under positive scaling and
    still invariant under the weighted circle action.
    """
    index = _resolve_index(profile_or_index)
    a = index.profile.check_coefficients(a)
    return bispectrum(index, cube_root_normalize(a))
