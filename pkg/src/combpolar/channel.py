"""Channel impairments: in-band-calibrated AWGN, band-limited periodic
interference, and the receiver comb filter.

All transforms operate on a whole frame of complex baseband samples in the
frequency domain of that frame, so they are linear, zero-phase and
deterministic given the generator passed in.  Power ratios (SNR, SIR) are
measured within a caller-supplied band via periodogram integration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelProfile:
    """Noise/interference levels and the interference tone grid.

    sir_db = None disables interference.  Tone k is centered at
    tone_offset_hz + k * fundamental_hz for every k that lands inside the
    sampled band.  tone_model "noise" fills each tone with band-limited
    noise of width tone_bandwidth_hz; "sinusoid" puts a random-phase
    complex exponential at each center instead.
    """

    snr_db: float
    sir_db: float | None = None
    fundamental_hz: float = 50.0
    tone_bandwidth_hz: float = 20.0
    tone_offset_hz: float = 25.0
    tone_model: str = "noise"

    def __post_init__(self):
        if self.tone_model not in ("noise", "sinusoid"):
            raise ValueError(f"unknown tone model {self.tone_model!r}")
        if self.sir_db is not None and self.tone_bandwidth_hz >= self.fundamental_hz:
            raise ValueError(
                f"tone bandwidth {self.tone_bandwidth_hz} Hz must be smaller "
                f"than the fundamental {self.fundamental_hz} Hz"
            )


@dataclass(frozen=True)
class CombFilterSpec:
    """Zero-phase notch mask: bins within notch_bw/2 of any center are zeroed."""

    notch_centers_hz: tuple
    notch_bw_hz: float

    def __post_init__(self):
        if len(self.notch_centers_hz) == 0:
            raise ValueError("notch center list must be non-empty")
        if self.notch_bw_hz <= 0:
            raise ValueError("notch bandwidth must be positive")


def tone_centers(fundamental_hz: float, offset_hz: float, f_max: float) -> np.ndarray:
    """All tone centers offset + k*fundamental inside [-f_max, f_max]."""
    k_lo = int(np.ceil((-f_max - offset_hz) / fundamental_hz))
    k_hi = int(np.floor((f_max - offset_hz) / fundamental_hz))
    return offset_hz + fundamental_hz * np.arange(k_lo, k_hi + 1)


def _band_mask(n: int, sample_rate: float, band) -> np.ndarray:
    lo, hi = band
    if hi <= lo:
        raise ValueError(f"empty band ({lo}, {hi})")
    freqs = np.fft.fftfreq(n, d=1.0 / sample_rate)
    return (freqs >= lo) & (freqs <= hi)


def band_power(samples: np.ndarray, sample_rate: float, band) -> float:
    """Mean per-sample power of the component inside `band` (periodogram sum)."""
    samples = np.asarray(samples)
    n = len(samples)
    spec = np.fft.fft(samples)
    mask = _band_mask(n, sample_rate, band)
    return float(np.sum(np.abs(spec[mask]) ** 2) / n**2)


def add_awgn(samples: np.ndarray, sample_rate: float, snr_db: float, band, rng):
    """Add circular complex white noise at the requested in-band SNR.

    The noise level is calibrated against the measured in-band power of
    `samples`, so that E[in-band noise power] makes the ratio equal snr_db.
    Returns (noisy samples, per-sample complex noise variance used).
    """
    samples = np.asarray(samples)
    n = len(samples)
    mask = _band_mask(n, sample_rate, band)
    if np.isinf(snr_db):
        return samples.astype(np.complex128), 0.0
    p_sig = band_power(samples, sample_rate, band)
    band_fraction = np.count_nonzero(mask) / n
    sigma2 = p_sig / (10 ** (snr_db / 10) * band_fraction)
    noise = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    noise *= np.sqrt(sigma2 / 2)
    return samples + noise, sigma2


def _tone_mask(n: int, sample_rate: float, centers, halfwidth: float) -> np.ndarray:
    freqs = np.fft.fftfreq(n, d=1.0 / sample_rate)
    mask = np.zeros(n, dtype=bool)
    for c in np.atleast_1d(centers):
        mask |= np.abs(freqs - c) <= halfwidth
    return mask


def add_periodic_interference(
    samples: np.ndarray, sample_rate: float, profile: ChannelProfile, band, rng
):
    """Add band-limited noise tones on the periodic grid at the requested SIR.

    Interference is white complex noise masked to the tone bands in the
    frequency domain, scaled so the in-band signal/interference power ratio
    equals profile.sir_db.  Returns (impaired samples, interference alone).
    """
    samples = np.asarray(samples)
    n = len(samples)
    if profile.sir_db is None or np.isinf(profile.sir_db):
        return samples.astype(np.complex128), np.zeros(n, dtype=np.complex128)
    centers = tone_centers(
        profile.fundamental_hz, profile.tone_offset_hz, sample_rate / 2
    )
    if profile.tone_model == "sinusoid":
        t = np.arange(n) / sample_rate
        phases = rng.uniform(0.0, 2 * np.pi, len(centers))
        shaped = np.exp(1j * (2 * np.pi * np.outer(centers, t) + phases[:, None])).sum(axis=0)
    else:
        mask = _tone_mask(n, sample_rate, centers, profile.tone_bandwidth_hz / 2)
        white = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        shaped = np.fft.ifft(np.fft.fft(white) * mask)
    p_sig = band_power(samples, sample_rate, band)
    p_intf = band_power(shaped, sample_rate, band)
    if p_intf == 0.0:
        raise ValueError("no interference tone falls inside the sampled band")
    shaped *= np.sqrt(p_sig / (10 ** (profile.sir_db / 10) * p_intf))
    return samples + shaped, shaped


def comb_filter(samples: np.ndarray, sample_rate: float, spec: CombFilterSpec) -> np.ndarray:
    """Zero-phase frequency-domain comb: notch bins zeroed, all else unit gain."""
    samples = np.asarray(samples)
    n = len(samples)
    mask = _tone_mask(n, sample_rate, spec.notch_centers_hz, spec.notch_bw_hz / 2)
    return np.fft.ifft(np.fft.fft(samples) * ~mask)
