"""Group-invariant max filter embeddings of orbit spaces.

The package models weighted circle actions on C^d and finite orthogonal
groups, evaluates the maximal orbit alignment <<[x],[z]>> and the quotient
distance it induces, builds template banks sized by the bilipschitz and
injectivity rules, implements the bispectrum baseline, and provides
empirical stability estimators plus a nearest-neighbor benchmark over the
alignment distance.
"""

from .actions import (
    DimensionMismatch,
    FiniteGroupAction,
    FixedSplit,
    WeightedCircleAction,
    action_from_spec,
    action_to_spec,
    cohomogeneity,
    fixed_split,
    is_regular,
    stabilizer_order,
    to_complex,
    to_real,
    voronoi_complexity,
)
from .annbench import (
    AnnReport,
    CoefficientDataset,
    embed_dataset,
    embedded_nearest,
    evaluate_lambda,
    load_dataset,
    save_dataset,
    synth_dataset,
    true_nearest,
)
from .bank import (
    MaxFilterBank,
    SplitBank,
    TemplateCounts,
    bank_from_spec,
    bank_to_spec,
    embed,
    embed_batch,
    generate_templates,
    load_bank,
    make_bank,
    recommended_template_count,
    save_bank,
    split_bank,
    split_embed,
)
from .bispectrum import (
    BispectrumIndex,
    FrequencyProfile,
    bispectrum,
    build_index,
    cube_root_normalize,
    index_size,
    scaled_bispectrum,
)
from .embeddings import BankEmbedding, BispectrumEmbedding
from .maxfilter import (
    DEFAULT_CONFIG,
    HI_RES_CONFIG,
    CircleSolverConfig,
    MaxFilterResult,
    TrigPolynomial,
    alignment_polynomial,
    cluster_witnesses,
    max_filter,
    max_filter_circle,
    max_filter_finite,
    maximize_trig,
    quotient_distance,
)
from .stability import (
    DegenerateDirectionResult,
    StabilityReport,
    VoronoiProbe,
    cosine_family_maxima,
    estimate_bilipschitz,
    find_degenerate_direction,
    local_lower_probe,
    log_log_slope,
    ratio_trace,
    voronoi_multiplicity_probe,
)

__version__ = "0.1.0"
