"""Fourier and Hilbert-envelope spectra, and bearing fault frequencies."""
from dataclasses import dataclass, field
from typing import Dict

import numpy as np
from scipy.signal import hilbert

from .exceptions import DomainError

__all__ = [
    "Spectrum",
    "BearingSpec",
    "magnitude_spectrum",
    "envelope",
    "envelope_spectrum",
    "smooth",
    "fault_frequencies",
    "MFS_MOTOR_ORDERS",
]

# Fault-frequency orders (multiples of shaft speed) of the MFS motor bearing.
MFS_MOTOR_ORDERS = {"FTF": 0.384, "BPFO": 3.066, "BPFI": 4.932, "BSF": 2.03}


@dataclass
class Spectrum:
    freqs: np.ndarray
    mags: np.ndarray

    def smoothed(self, width=5):
        return smooth(self.mags, width)

    def bin_of(self, freq):
        return int(np.argmin(np.abs(self.freqs - freq)))

    def peak(self, fmin=0.0, fmax=None):
        """Frequency and magnitude of the largest bin in ``[fmin, fmax]``."""
        sel = self.freqs >= fmin
        if fmax is not None:
            sel &= self.freqs <= fmax
        idx = np.flatnonzero(sel)
        i = idx[np.argmax(self.mags[idx])]
        return float(self.freqs[i]), float(self.mags[i])


@dataclass(frozen=True)
class BearingSpec:
    shaft_freq: float
    orders: Dict[str, float] = field(default_factory=lambda: dict(MFS_MOTOR_ORDERS))

    def __post_init__(self):
        if not self.shaft_freq > 0:
            raise DomainError(f"shaft_freq must be positive, got {self.shaft_freq!r}")
        bad = [k for k, v in self.orders.items() if not v > 0]
        if bad:
            raise DomainError(f"orders must be positive: {', '.join(bad)}")

    @classmethod
    def from_rpm(cls, rpm, orders=None):
        return cls(rpm / 60.0, dict(orders) if orders else dict(MFS_MOTOR_ORDERS))


def magnitude_spectrum(y, fs, nfft=None):
    """One-sided amplitude spectrum.

    Bins are scaled by ``2/N`` so that a unit sine on a bin reads 1; DC and
    (for even ``N``) Nyquist are scaled by ``1/N``. ``nfft`` zero-pads.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size < 2:
        raise DomainError("spectrum needs a 1-D signal with at least 2 samples")
    if not fs > 0:
        raise DomainError(f"fs must be positive, got {fs!r}")
    n = y.size if nfft is None else int(nfft)
    mags = np.abs(np.fft.rfft(y, n)) * (2.0 / y.size)
    mags[0] /= 2.0
    if n % 2 == 0:
        mags[-1] /= 2.0
    return Spectrum(freqs=np.fft.rfftfreq(n, 1.0 / fs), mags=mags)


def envelope(y):
    """Modulus of the analytic signal."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size < 4:
        raise DomainError("envelope needs a 1-D signal with at least 4 samples")
    return np.abs(hilbert(y))


def envelope_spectrum(y, fs, nfft=None):
    """Amplitude spectrum of the mean-removed Hilbert envelope."""
    env = envelope(y)
    return magnitude_spectrum(env - env.mean(), fs, nfft)


def smooth(mags, width=5):
    """Centered moving average; the window shrinks at the edges."""
    mags = np.asarray(mags, dtype=float)
    if width < 1:
        raise DomainError("smoothing width must be >= 1")
    kernel = np.ones(int(width))
    return np.convolve(mags, kernel, "same") / np.convolve(np.ones_like(mags), kernel, "same")


def fault_frequencies(spec):
    """Characteristic fault frequencies in Hz, ``order * shaft_freq``."""
    return {name: order * spec.shaft_freq for name, order in spec.orders.items()}
