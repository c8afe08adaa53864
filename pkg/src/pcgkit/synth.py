"""Deterministic synthetic heart-sound generator for desk-scale testing.

Each cardiac cycle holds a strong low-frequency S1 burst at the cycle
start, a quiet systolic gap, a weaker higher-frequency S2 burst at 35% of
the cycle, and a quiet diastolic gap.  Pathological records add
band-limited murmur energy inside the systolic gap, which is exactly the
cue the feature/classifier pipeline is supposed to pick up.  The output is
reproducible bit for bit from the seed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidConfig
from .ingest import AudioRecord, Label
from .rng import mix_seed

S1_DURATION_S = 0.12
S2_DURATION_S = 0.10
S2_CYCLE_FRACTION = 0.35
S1_PEAK = 0.8
S2_PEAK = 0.5
MURMUR_BAND_HZ = (60.0, 240.0)
TONES_PER_BURST = 8


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    duration_s: float = 10.0
    rate_hz: int = 2000
    heart_rate_bpm: tuple[float, float] = (55.0, 95.0)
    murmur_gain: float = 0.3
    s1_band_hz: tuple[float, float] = (10.0, 200.0)
    s2_band_hz: tuple[float, float] = (20.0, 250.0)
    noise_floor: float = 0.01

    def __post_init__(self):
        nyquist = self.rate_hz / 2
        for name, band in (("s1_band_hz", self.s1_band_hz),
                           ("s2_band_hz", self.s2_band_hz)):
            lo, hi = band
            if not (0 < lo < hi < nyquist):
                raise InvalidConfig(f"{name}={band} outside (0, {nyquist})")
        lo_bpm, hi_bpm = self.heart_rate_bpm
        if not (0 < lo_bpm <= hi_bpm):
            raise InvalidConfig(f"bad heart rate range {self.heart_rate_bpm}")
        if self.duration_s < 2 * 60.0 / lo_bpm:
            raise InvalidConfig(
                f"duration {self.duration_s}s holds fewer than 2 cycles "
                f"at {lo_bpm} bpm")
        if self.murmur_gain < 0 or self.noise_floor < 0:
            raise InvalidConfig("murmur_gain and noise_floor must be >= 0")


def _tone_burst(rng: np.random.Generator, num: int, rate: int,
                band: tuple[float, float], peak: float) -> np.ndarray:
    """Gaussian-enveloped sum of random tones confined inside the band."""
    t = np.arange(num) / rate
    lo, hi = band
    margin = 0.1 * (hi - lo)
    freqs = rng.uniform(lo + margin, hi - margin, TONES_PER_BURST)
    phases = rng.uniform(0.0, 2.0 * np.pi, TONES_PER_BURST)
    amps = rng.uniform(0.5, 1.0, TONES_PER_BURST)
    sig = (amps[:, None] * np.sin(2.0 * np.pi * freqs[:, None] * t
                                  + phases[:, None])).sum(axis=0)
    center = 0.5 * num / rate
    sigma = (num / rate) / 6.0
    sig *= np.exp(-0.5 * ((t - center) / sigma) ** 2)
    return peak * sig / np.abs(sig).max()


def _murmur(rng: np.random.Generator, num: int, rate: int,
            rms: float) -> np.ndarray:
    """Band-limited murmur noise with the requested RMS, tapered at the ends."""
    t = np.arange(num) / rate
    lo, hi = MURMUR_BAND_HZ
    freqs = rng.uniform(lo, hi, TONES_PER_BURST)
    phases = rng.uniform(0.0, 2.0 * np.pi, TONES_PER_BURST)
    amps = rng.uniform(0.5, 1.0, TONES_PER_BURST)
    sig = (amps[:, None] * np.sin(2.0 * np.pi * freqs[:, None] * t
                                  + phases[:, None])).sum(axis=0)
    ramp = max(1, num // 10)
    taper = np.ones(num)
    edge = 0.5 - 0.5 * np.cos(np.pi * np.arange(ramp) / ramp)
    taper[:ramp] = edge
    taper[-ramp:] = edge[::-1]
    sig *= taper
    return rms * sig / np.sqrt(np.mean(sig ** 2))


def generate_with_intervals(
        config: SynthConfig,
        label: Label) -> tuple[AudioRecord, dict[str, list[tuple[int, int]]]]:
    """Generate one record plus the sample intervals of its cycle parts."""
    if label not in (Label.HEALTHY, Label.PATHOLOGICAL):
        raise InvalidConfig("label must be HEALTHY or PATHOLOGICAL")
    rng = np.random.default_rng(config.seed)
    rate = config.rate_hz
    n = int(round(config.duration_s * rate))
    samples = np.zeros(n)

    bpm = rng.uniform(*config.heart_rate_bpm)
    cycle = int(round(rate * 60.0 / bpm))
    s1_n = int(round(S1_DURATION_S * rate))
    s2_n = int(round(S2_DURATION_S * rate))

    intervals: dict[str, list[tuple[int, int]]] = {
        "s1": [], "systole": [], "s2": [], "diastole": []}
    pos = 0
    while pos + cycle <= n:
        s1_a, s1_b = pos, pos + s1_n
        s2_a = pos + int(round(S2_CYCLE_FRACTION * cycle))
        s2_b = s2_a + s2_n
        samples[s1_a:s1_b] += _tone_burst(rng, s1_n, rate,
                                          config.s1_band_hz, S1_PEAK)
        samples[s2_a:s2_b] += _tone_burst(rng, s2_n, rate,
                                          config.s2_band_hz, S2_PEAK)
        if label is Label.PATHOLOGICAL and config.murmur_gain > 0:
            samples[s1_b:s2_a] += _murmur(rng, s2_a - s1_b, rate,
                                          config.murmur_gain)
        intervals["s1"].append((s1_a, s1_b))
        intervals["systole"].append((s1_b, s2_a))
        intervals["s2"].append((s2_a, s2_b))
        intervals["diastole"].append((s2_b, pos + cycle))
        pos += cycle

    samples += rng.normal(0.0, config.noise_floor, n)
    record = AudioRecord(id=f"synth_{label.value}_{config.seed:x}",
                         samples=samples, sample_rate_hz=rate, label=label)
    return record, intervals


def generate(config: SynthConfig, label: Label) -> AudioRecord:
    """Generate one synthetic record (see generate_with_intervals)."""
    record, _ = generate_with_intervals(config, label)
    return record


def generate_dataset(n_healthy: int, n_pathological: int, base_seed: int = 0,
                     config: SynthConfig = SynthConfig()) -> list[AudioRecord]:
    """A balanced-or-not labeled corpus with per-record derived seeds."""
    if n_healthy < 1 or n_pathological < 1:
        raise InvalidConfig("need at least one record per class")
    records = []
    for i in range(n_healthy):
        cfg = replace(config, seed=mix_seed(base_seed, 0, i))
        rec = generate(cfg, Label.HEALTHY)
        rec.id = f"healthy_{i:03d}"
        records.append(rec)
    for i in range(n_pathological):
        cfg = replace(config, seed=mix_seed(base_seed, 1, i))
        rec = generate(cfg, Label.PATHOLOGICAL)
        rec.id = f"pathological_{i:03d}"
        records.append(rec)
    return records
