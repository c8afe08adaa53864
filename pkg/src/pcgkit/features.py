"""Per-frame statistical features and sequence normalization.

Ten features are computed inside each windowed frame: mean, median, mode,
variance, skewness, kurtosis, Shannon energy, Shannon entropy,
zero-crossing rate, and interquartile range.  A signal becomes a T x 10
feature sequence (one row per frame) which is z-scored per column before
classification.

Conventions, fixed once and used everywhere:
  * quantiles interpolate linearly at position (count - 1) * q;
  * mode and entropy share one histogram rule: equal-width bins over the
    frame's [min, max], ties resolved toward the lowest bin;
  * logarithms are natural, with 0 * log 0 = 0;
  * moments are population moments (divisor L+1), and skewness/kurtosis of
    a constant frame are 0 by guard.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .ingest import Label
from .windows import Frame, WindowShape, WindowSpec

FEATURE_NAMES = (
    "mean",
    "median",
    "mode",
    "variance",
    "skewness",
    "kurtosis",
    "shannon_energy",
    "shannon_entropy",
    "zcr",
    "quantile_range",
)

DEFAULT_BINS = 10


class FeatureVector(NamedTuple):
    """The ten per-frame statistics, in the fixed column order."""

    mean: float
    median: float
    mode: float
    variance: float
    skewness: float
    kurtosis: float
    shannon_energy: float
    shannon_entropy: float
    zcr: float
    quantile_range: float


@dataclass
class FeatureSequence:
    """T x 10 matrix of per-frame features plus its extraction config."""

    values: np.ndarray
    signal_id: str
    label: Label
    window: WindowSpec
    hop: int
    bins: int
    normalized: bool = False

    @property
    def num_frames(self) -> int:
        return self.values.shape[0]


# ---------------------------------------------------------------------------
# Single-frame features
# ---------------------------------------------------------------------------

def frame_mean(frame: np.ndarray) -> float:
    return float(np.mean(frame))


def frame_median(frame: np.ndarray) -> float:
    return float(np.quantile(frame, 0.5))


def _histogram(frame: np.ndarray, bins: int) -> tuple[np.ndarray, np.ndarray]:
    counts, edges = np.histogram(frame, bins=bins, range=(frame.min(), frame.max()))
    centers = 0.5 * (edges[:-1] + edges[1:])
    return counts, centers


def frame_mode(frame: np.ndarray, bins: int = DEFAULT_BINS) -> float:
    """Center of the most populated histogram bin (lowest bin wins ties)."""
    frame = np.asarray(frame, dtype=np.float64)
    if frame.min() == frame.max():
        return float(frame[0])
    counts, centers = _histogram(frame, bins)
    return float(centers[np.argmax(counts)])


def _is_constant(frame: np.ndarray) -> bool:
    return frame.min() == frame.max()


def frame_variance(frame: np.ndarray) -> float:
    frame = np.asarray(frame, dtype=np.float64)
    if _is_constant(frame):
        return 0.0  # exact, regardless of accumulation noise in the mean
    return float(np.var(frame))


def frame_skewness(frame: np.ndarray) -> float:
    frame = np.asarray(frame, dtype=np.float64)
    if _is_constant(frame):
        return 0.0
    mu = frame.mean()
    sigma = frame.std()
    return float(np.mean((frame - mu) ** 3) / sigma ** 3)


def frame_kurtosis(frame: np.ndarray) -> float:
    frame = np.asarray(frame, dtype=np.float64)
    if _is_constant(frame):
        return 0.0
    mu = frame.mean()
    sigma = frame.std()
    return float(np.mean((frame - mu) ** 4) / sigma ** 4 - 3.0)


def frame_shannon_energy(frame: np.ndarray) -> float:
    """Sum of |y|^2 * ln|y|^2 over the frame, with 0 * ln 0 = 0."""
    y2 = np.asarray(frame, dtype=np.float64) ** 2
    out = np.zeros_like(y2)
    nz = y2 > 0.0
    out[nz] = y2[nz] * np.log(y2[nz])
    return float(out.sum())


def frame_shannon_entropy(frame: np.ndarray, bins: int = DEFAULT_BINS) -> float:
    """Sum of p * ln p over occupied histogram bins (<= 0)."""
    frame = np.asarray(frame, dtype=np.float64)
    if frame.min() == frame.max():
        return 0.0
    counts, _ = _histogram(frame, bins)
    p = counts[counts > 0] / frame.size
    return float(np.sum(p * np.log(p)))


def frame_zcr(frame: np.ndarray) -> float:
    """Sign-change rate: sum of |sign(y[l]) - sign(y[l-1])| over 2L+1.

    sign(x) is +1 for x >= 0 and -1 otherwise; the sum runs over the L
    in-frame sample pairs, so the value stays in [0, 2L/(2L+1)).
    """
    frame = np.asarray(frame, dtype=np.float64)
    if frame.size < 2:
        raise ValueError("zero-crossing rate needs at least 2 samples")
    s = np.where(frame >= 0.0, 1.0, -1.0)
    L = frame.size - 1
    return float(np.abs(np.diff(s)).sum() / (2 * L + 1))


def frame_quantile_range(frame: np.ndarray) -> float:
    q25, q75 = np.quantile(frame, [0.25, 0.75])
    return float(q75 - q25)


def frame_features(frame: np.ndarray, bins: int = DEFAULT_BINS) -> FeatureVector:
    """All ten statistics of one frame."""
    frame = np.asarray(frame, dtype=np.float64)
    return FeatureVector(
        mean=frame_mean(frame),
        median=frame_median(frame),
        mode=frame_mode(frame, bins),
        variance=frame_variance(frame),
        skewness=frame_skewness(frame),
        kurtosis=frame_kurtosis(frame),
        shannon_energy=frame_shannon_energy(frame),
        shannon_entropy=frame_shannon_entropy(frame, bins),
        zcr=frame_zcr(frame),
        quantile_range=frame_quantile_range(frame),
    )


# ---------------------------------------------------------------------------
# Sequence extraction
# ---------------------------------------------------------------------------

def _mode_entropy_columns(frames: np.ndarray,
                          bins: int) -> tuple[np.ndarray, np.ndarray]:
    # Per-frame histograms; loop is fine at desk scale and keeps the shared
    # binning rule in one place.
    T = frames.shape[0]
    mode = np.empty(T)
    entropy = np.empty(T)
    for t in range(T):
        mode[t] = frame_mode(frames[t], bins)
        entropy[t] = frame_shannon_entropy(frames[t], bins)
    return mode, entropy


def feature_matrix(frames: np.ndarray, bins: int = DEFAULT_BINS) -> np.ndarray:
    """Feature rows for a (T, L+1) frame matrix, columns in FEATURE_NAMES order."""
    frames = np.asarray(frames, dtype=np.float64)
    if frames.ndim != 2 or frames.shape[0] < 1:
        raise ValueError("need a non-empty (num_frames, frame_length) matrix")
    n = frames.shape[1]

    constant = frames.min(axis=1) == frames.max(axis=1)
    mu = frames.mean(axis=1)
    centered = frames - mu[:, None]
    var = np.mean(centered ** 2, axis=1)
    var[constant] = 0.0
    sigma = np.sqrt(var)
    ok = ~constant & (sigma > 0.0)
    skew = np.zeros_like(mu)
    kurt = np.zeros_like(mu)
    skew[ok] = np.mean(centered[ok] ** 3, axis=1) / sigma[ok] ** 3
    kurt[ok] = np.mean(centered[ok] ** 4, axis=1) / sigma[ok] ** 4 - 3.0

    y2 = frames ** 2
    logy2 = np.zeros_like(y2)
    nz = y2 > 0.0
    logy2[nz] = np.log(y2[nz])
    energy = (y2 * logy2).sum(axis=1)

    signs = np.where(frames >= 0.0, 1.0, -1.0)
    zcr = np.abs(np.diff(signs, axis=1)).sum(axis=1) / (2 * (n - 1) + 1)

    median, q25, q75 = np.quantile(frames, [0.5, 0.25, 0.75], axis=1)
    mode, entropy = _mode_entropy_columns(frames, bins)

    return np.column_stack(
        [mu, median, mode, var, skew, kurt, energy, entropy, zcr, q75 - q25])


def extract_sequence(frames: list[Frame] | np.ndarray,
                     bins: int = DEFAULT_BINS,
                     signal_id: str = "",
                     label: Label = Label.UNLABELED,
                     window: WindowSpec | None = None,
                     hop: int = 1) -> FeatureSequence:
    """Compute the T x 10 feature sequence for a list of frames."""
    if isinstance(frames, np.ndarray):
        matrix = frames
    else:
        if len(frames) < 1:
            raise ValueError("need at least one frame")
        matrix = np.stack([f.values for f in frames])
    if window is None:
        window = WindowSpec(WindowShape.RECTANGULAR, (matrix.shape[1] - 1) // 2)
    return FeatureSequence(
        values=feature_matrix(matrix, bins),
        signal_id=signal_id,
        label=label,
        window=window,
        hop=hop,
        bins=bins,
    )


def normalize_sequence(seq: FeatureSequence) -> FeatureSequence:
    """Z-score each column over the sequence's own frames.

    Columns with zero spread become all zeros.  Applying this twice gives
    the same result as applying it once.
    """
    if seq.num_frames < 2:
        raise ValueError("normalization needs at least 2 frames")
    mu = seq.values.mean(axis=0)
    sigma = seq.values.std(axis=0)
    out = np.zeros_like(seq.values)
    ok = sigma > 0.0
    out[:, ok] = (seq.values[:, ok] - mu[ok]) / sigma[ok]
    return replace(seq, values=out, normalized=True)


# ---------------------------------------------------------------------------
# Feature files: CSV matrix + JSON sidecar with the extraction config
# ---------------------------------------------------------------------------

def _meta_path(path: Path) -> Path:
    return path.with_suffix(".meta.json")


def write_features(seq: FeatureSequence, path: str | Path) -> None:
    """Write the feature matrix as CSV and its config as a .meta.json sidecar."""
    path = Path(path)
    np.savetxt(path, seq.values, fmt="%.17g", delimiter=",")
    meta = {
        "signal_id": seq.signal_id,
        "label": seq.label.value,
        "window_shape": seq.window.shape.value,
        "L": seq.window.L,
        "alpha": seq.window.alpha,
        "hop": seq.hop,
        "bins": seq.bins,
        "normalized": seq.normalized,
        "columns": list(FEATURE_NAMES),
    }
    _meta_path(path).write_text(json.dumps(meta, indent=2) + "\n")


def read_features(path: str | Path) -> FeatureSequence:
    """Read a feature CSV and its sidecar back into a FeatureSequence."""
    path = Path(path)
    values = np.loadtxt(path, delimiter=",", ndmin=2)
    meta = json.loads(_meta_path(path).read_text())
    window = WindowSpec(
        shape=WindowShape(meta["window_shape"]),
        half_length=meta["L"] // 2,
        alpha=meta["alpha"],
    )
    return FeatureSequence(
        values=values,
        signal_id=meta["signal_id"],
        label=Label(meta["label"]),
        window=window,
        hop=meta["hop"],
        bins=meta["bins"],
        normalized=meta["normalized"],
    )
