import numpy as np
import pytest

from orbitmax import (
    DimensionMismatch,
    FrequencyProfile,
    bispectrum,
    build_index,
    cube_root_normalize,
    index_size,
    scaled_bispectrum,
)

from helpers import enum_bispectrum_triples


def test_profile_validation():
    profile = FrequencyProfile(((0, 1), (1, 2)))
    assert profile.dim == 3
    assert profile.multiplicity(1) == 2
    assert profile.multiplicity(5) == 0
    assert profile.induced_action().weights == (0, 1, 1)
    with pytest.raises(ValueError):
        FrequencyProfile(((1, 1), (1, 2)))
    with pytest.raises(ValueError):
        FrequencyProfile(((1, 0),))
    with pytest.raises(ValueError):
        FrequencyProfile(())


def test_index_enumeration_matches_brute_force():
    cases = [
        ((0, 1), (1, 1)),
        ((1, 1),),
        ((-1, 1), (0, 1), (1, 1)),
        ((1, 1), (2, 1)),
        ((-2, 2), (0, 1), (1, 3), (3, 1)),
    ]
    for entries in cases:
        idx = build_index(FrequencyProfile(entries))
        assert idx.triples == tuple(enum_bispectrum_triples(entries))
        assert index_size(FrequencyProfile(entries)) == len(idx)


def test_index_size_examples():
    assert index_size(FrequencyProfile(((0, 1), (1, 1)))) == 3
    assert index_size(FrequencyProfile(((1, 1),))) == 0
    # exhaustive enumeration for the symmetric ladder {-1, 0, 1}
    entries = ((-1, 1), (0, 1), (1, 1))
    assert len(enum_bispectrum_triples(entries)) == 7
    assert index_size(FrequencyProfile(entries)) == 7


def test_index_size_matches_enumeration_randomly():
    rng = np.random.default_rng(12)
    for _ in range(30):
        freqs = rng.choice(np.arange(-5, 6), size=rng.integers(1, 5), replace=False)
        entries = tuple((int(k), int(rng.integers(1, 4))) for k in freqs)
        assert index_size(FrequencyProfile(entries)) == len(enum_bispectrum_triples(entries))


def test_bispectrum_entries_example():
    profile = FrequencyProfile(((0, 1), (1, 1)))
    idx = build_index(profile)
    assert idx.triples == (
        ((0, 0), (0, 0), (0, 0)),
        ((0, 0), (1, 0), (1, 0)),
        ((1, 0), (0, 0), (1, 0)),
    )
    out = bispectrum(profile, [1, 2])
    assert np.allclose(out, [1, 4, 4])
    assert np.allclose(bispectrum(profile, [0, 0]), 0.0)
    with pytest.raises(DimensionMismatch):
        bispectrum(profile, [1, 2, 3])


def test_bispectrum_invariance():
    rng = np.random.default_rng(3)
    profile = FrequencyProfile(((-2, 1), (0, 2), (1, 2), (3, 1)))
    a = rng.standard_normal(profile.dim) + 1j * rng.standard_normal(profile.dim)
    base = bispectrum(profile, a)
    scale = np.abs(base).max()
    for phi in rng.uniform(-np.pi, np.pi, size=64):
        rotated = profile.weight_action(np.exp(1j * phi), a)
        assert np.abs(bispectrum(profile, rotated) - base).max() <= 1e-10 * (1 + scale)


def test_bispectrum_invariance_witness_example():
    profile = FrequencyProfile(((0, 1), (1, 1)))
    base = bispectrum(profile, [1, 2])
    rotated = bispectrum(profile, [1, 2 * np.exp(0.3j)])
    assert np.abs(rotated - base).max() < 1e-12


def test_cube_root_normalize():
    a = np.array([8.0 + 0j, 0.0 + 0j, -1.0 + 0j])
    out = cube_root_normalize(a)
    assert np.allclose(out, [2.0, 0.0, -1.0])
    # modulus becomes the cube root of the original
    rng = np.random.default_rng(5)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    assert np.allclose(np.abs(cube_root_normalize(v)), np.abs(v) ** (1 / 3))


def test_scaled_bispectrum_examples():
    profile = FrequencyProfile(((0, 1), (1, 1)))
    # unit moduli: scaling is a no-op
    a = np.exp(1j * np.array([0.2, -1.0]))
    assert np.allclose(scaled_bispectrum(profile, a), bispectrum(profile, a))
    assert np.allclose(scaled_bispectrum(profile, [0, 0]), 0.0)
    assert np.allclose(scaled_bispectrum(profile, [8, 1]), [8, 2, 2])


def test_scaled_bispectrum_equivariance_and_invariance():
    rng = np.random.default_rng(9)
    profile = FrequencyProfile(((0, 1), (1, 2), (2, 1)))
    a = rng.standard_normal(profile.dim) + 1j * rng.standard_normal(profile.dim)
    base = scaled_bispectrum(profile, a)
    for t in (0.5, 2.0, 7.25):
        assert np.allclose(scaled_bispectrum(profile, t * a), t * base, rtol=1e-10)
    for phi in rng.uniform(-np.pi, np.pi, size=16):
        rotated = profile.weight_action(np.exp(1j * phi), a)
        assert np.allclose(scaled_bispectrum(profile, rotated), base, atol=1e-10 * (1 + np.abs(base).max()))


def test_empty_index_profile():
    profile = FrequencyProfile(((1, 1), (-1, 1)))
    assert index_size(profile) == 0
    assert bispectrum(profile, [1, 2]).shape == (0,)
