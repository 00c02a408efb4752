"""Sound-texture and MFCC features with k-means pseudo-labeling.

Turns a manifest of WAV clips into supervisory signals for image-model
pretraining: 502-dim sound-texture summary vectors or MFCC matrices,
clustered into pseudo-label classes.
"""

__version__ = "0.1.0"

from .cluster import (
    ClusterModel,
    FeatureSet,
    Standardizer,
    USING_COMPILED_KERNELS,
    kmeans_fit,
    kmeans_fit_labels,
    kmeans_predict,
    standardize,
)
from .dsp import (
    EnvelopeSet,
    FilterBank,
    Waveform,
    analytic_signal,
    make_cochlear_bank,
    make_modulation_bank,
    resample_waveform,
    subband_envelopes,
)
from .errors import (
    CorruptionError,
    DataError,
    FormatError,
    ParameterError,
    PipelineError,
    SoundtexError,
)
from .mfcc import MfccMatrix, flatten, mfcc_matrix
from .store import ManifestEntry, read_features, read_labels, read_manifest, read_model, write_features, write_labels, write_model
from .texture import (
    CorrelationIndex,
    TextureVector,
    crossband_correlations,
    loudness,
    marginal_stats,
    modulation_energies,
    texture_vector,
)

__all__ = [
    "ClusterModel",
    "CorrelationIndex",
    "CorruptionError",
    "DataError",
    "EnvelopeSet",
    "FeatureSet",
    "FilterBank",
    "FormatError",
    "ManifestEntry",
    "MfccMatrix",
    "ParameterError",
    "PipelineError",
    "SoundtexError",
    "Standardizer",
    "TextureVector",
    "USING_COMPILED_KERNELS",
    "Waveform",
    "analytic_signal",
    "crossband_correlations",
    "flatten",
    "kmeans_fit",
    "kmeans_fit_labels",
    "kmeans_predict",
    "loudness",
    "make_cochlear_bank",
    "make_modulation_bank",
    "marginal_stats",
    "mfcc_matrix",
    "modulation_energies",
    "read_features",
    "read_labels",
    "read_manifest",
    "read_model",
    "resample_waveform",
    "standardize",
    "subband_envelopes",
    "texture_vector",
    "write_features",
    "write_labels",
    "write_model",
]
