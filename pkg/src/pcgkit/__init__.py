"""Heart-sound (PCG) classification toolkit.

Pipeline: ingest -> windows -> features -> nnet -> evaluate, with a
deterministic synthetic generator (synth) for desk-scale experiments and a
CLI (cli) wrapping it all.
"""

from .errors import (
    CorruptHeader,
    EmptySequence,
    InvalidConfig,
    InvalidCutoff,
    InvalidFactor,
    InvalidFraction,
    LengthMismatch,
    NoSidelobe,
    PcgError,
    RateMismatch,
    SingleClassDataset,
    UnsupportedFormat,
    WindowTooLong,
)
from .evaluate import (
    Confusion,
    GridCell,
    Metrics,
    TrialResult,
    confusion,
    emit_results,
    extract_dataset,
    metrics,
    run_grid,
    run_trial,
    split,
)
from .features import (
    FEATURE_NAMES,
    FeatureSequence,
    FeatureVector,
    extract_sequence,
    frame_features,
    frame_kurtosis,
    frame_mean,
    frame_median,
    frame_mode,
    frame_quantile_range,
    frame_shannon_energy,
    frame_shannon_entropy,
    frame_skewness,
    frame_variance,
    frame_zcr,
    normalize_sequence,
    read_features,
    write_features,
)
from .ingest import (
    AudioRecord,
    FirFilter,
    Label,
    apply_filter,
    decimate,
    design_lowpass,
    fix_length,
    preprocess,
    read_csv_record,
    read_wav,
    write_csv_record,
    write_wav,
)
from .nnet import (
    BiLSTMModel,
    LstmDirectionParams,
    TrainConfig,
    TrainHistory,
    backward,
    cell_step,
    forward,
    init_model,
    load_model,
    loss,
    predict,
    save_model,
    sgdm_step,
    train,
)
from .synth import SynthConfig, generate, generate_dataset, generate_with_intervals
from .windows import (
    Frame,
    WindowShape,
    WindowSpec,
    WindowSpectrum,
    frame_matrix,
    frame_signal,
    mainlobe_width,
    make_window,
    peak_sidelobe_db,
    window_spectrum,
)

__version__ = "0.1.0"
