"""Loading, scaling and complex-plane embedding of scalar force records,
plus the spectral and embedding-dimension diagnostics used to pick the
method parameters."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import ConstantSignal, InsufficientLength, WindowTooShort

#: Kennel distance-ratio threshold for the false-nearest-neighbour test.
FNN_RATIO_THRESHOLD = 15.0


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled scalar force record.

    Parameters
    ----------
    samples : ndarray
        Force values (percent body weight or arbitrary units), no NaNs.
    dt : float
        Seconds per sample (0.01 s for the stepping-in-place recordings).
    """

    samples: np.ndarray
    dt: float
    subject_id: str = ""
    dataset_id: str = ""

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a non-empty 1-D array")
        if np.any(np.isnan(samples)):
            raise ValueError("samples contain NaN")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class EmbeddedSignal:
    """Analytic-signal embedding scaled into the unit disk.

    ``values[t] = amplitude[t] * exp(1j * phase[t])`` with phase in
    [0, 2*pi) and max amplitude 1 (up to rounding).
    """

    values: np.ndarray
    amplitude: np.ndarray
    phase: np.ndarray
    dt: float

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class SpectrumReport:
    """Periodogram scaled to maximum power 1 and its dominant frequency."""

    frequencies: np.ndarray
    power: np.ndarray
    dominant_frequency: float


def scale_force(ts: TimeSeries) -> np.ndarray:
    """Non-dimensionalize a force record to [-1, 1].

    Returns ``(x - mean(x)) / max|x - mean(x)|``; at least one sample
    attains magnitude 1.

    Raises
    ------
    ConstantSignal
        If the record has zero deviation from its mean.
    """
    x = ts.samples
    centered = x - np.mean(x)
    scale = np.max(np.abs(centered))
    if scale == 0.0:
        raise ConstantSignal("force record is constant")
    return centered / scale


def analytic_signal(x: np.ndarray) -> np.ndarray:
    """Discrete analytic signal x + i*x~ via the FFT.

    The transform x~ carries Fourier coefficients -i*x_k on positive
    frequencies, realized by doubling positive-frequency coefficients and
    zeroing negative ones (DC and Nyquist kept as-is).
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    Xf = np.fft.fft(x)
    h = np.zeros(n)
    if n % 2 == 0:
        h[0] = h[n // 2] = 1.0
        h[1 : n // 2] = 2.0
    else:
        h[0] = 1.0
        h[1 : (n + 1) // 2] = 2.0
    return np.fft.ifft(Xf * h)


def hilbert_embed(x: np.ndarray, window: tuple[int, int], dt: float = 1.0) -> EmbeddedSignal:
    """Embed ``x[window[0] : window[1] + 1]`` into the unit disk.

    The analytic signal of the window is centered on its mean and scaled
    by the maximum deviation so that the trajectory fills the unit disk.
    No padding or detrending is applied; the first/last few percent of
    samples carry the edge effects of the finite transform.

    Parameters
    ----------
    x : ndarray
        Full scalar record.
    window : (int, int)
        Inclusive sample-index interval.
    dt : float
        Seconds per sample, carried through to the result.

    Raises
    ------
    WindowTooShort
        Fewer than 4 samples in the window.
    ConstantSignal
        Window is constant.
    """
    x = np.asarray(x, dtype=float)
    t0, t1 = window
    if t0 < 0 or t1 >= x.size:
        raise WindowTooShort(f"window [{t0}, {t1}] outside record of length {x.size}")
    n = t1 - t0 + 1
    if n < 4:
        raise WindowTooShort(f"window has {n} samples, need >= 4")
    Xh = analytic_signal(x[t0 : t1 + 1])
    centered = Xh - np.mean(Xh)
    scale = np.max(np.abs(centered))
    if scale == 0.0:
        raise ConstantSignal("window is constant")
    values = centered / scale
    amplitude = np.abs(values)
    phase = np.mod(np.angle(values), 2.0 * np.pi)
    return EmbeddedSignal(values=values, amplitude=amplitude, phase=phase, dt=dt)


def periodogram(x: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Unscaled rectangular-window periodogram.

    Returns (frequencies in Hz, |X_k|^2 / n) over the non-negative
    frequencies, halved at DC/Nyquist to satisfy Parseval on the one-sided
    form only implicitly; Parseval holds for the two-sided sum checked in
    the tests.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    Xf = np.fft.rfft(x)
    freqs = np.fft.rfftfreq(n, d=dt)
    power = np.abs(Xf) ** 2 / n
    return freqs, power


def power_spectrum(ts: TimeSeries) -> SpectrumReport:
    """Periodogram scaled to maximum power 1.

    The dominant frequency is the argmax over the nonzero frequencies.
    """
    if len(ts) < 2:
        raise ValueError("need at least 2 samples")
    freqs, power = periodogram(ts.samples, ts.dt)
    scaled = power / np.max(power)
    nonzero = freqs > 0
    dom = freqs[nonzero][np.argmax(scaled[nonzero])]
    return SpectrumReport(frequencies=freqs, power=scaled, dominant_frequency=float(dom))


def delay_embed(x: np.ndarray, delay: int, dim: int) -> np.ndarray:
    """Time-delay embedding: row i is (x[i], x[i+delay], ..., x[i+(dim-1)*delay]).

    Raises
    ------
    InsufficientLength
        If ``len(x) <= (dim - 1) * delay``.
    """
    x = np.asarray(x, dtype=float)
    if dim < 1 or delay < 1:
        raise ValueError("dim and delay must be >= 1")
    n = x.size - (dim - 1) * delay
    if n < 1:
        raise InsufficientLength(
            f"length {x.size} too short for dim={dim}, delay={delay}"
        )
    return np.column_stack([x[j * delay : j * delay + n] for j in range(dim)])


def fnn_fraction(
    x: np.ndarray,
    delay: int,
    dims: list[int],
    ratio_threshold: float = FNN_RATIO_THRESHOLD,
) -> list[float]:
    """False-nearest-neighbour fraction for each embedding dimension.

    For every point of the dim-dimensional embedding the nearest neighbour
    (Euclidean metric, excluding self and temporal neighbours within one
    delay) is lifted to dim+1; the pair is false when the added-coordinate
    distance exceeds ``ratio_threshold`` times the dim-dimensional distance.
    """
    x = np.asarray(x, dtype=float)
    fractions = []
    for dim in dims:
        emb_lo = delay_embed(x, delay, dim)
        emb_hi = delay_embed(x, delay, dim + 1)
        n = emb_hi.shape[0]
        if n < 2:
            raise InsufficientLength("too few points for FNN in dim "
                                     f"{dim + 1}")
        pts = emb_lo[:n]
        tree = cKDTree(pts)
        # enough neighbours to skip self and the temporal exclusion zone
        k_query = min(n, 2 * delay + 3)
        dists, idxs = tree.query(pts, k=k_query)
        false = 0
        counted = 0
        for i in range(n):
            j_found = -1
            d_found = 0.0
            for d, j in zip(dists[i], idxs[i]):
                if j != i and abs(j - i) > delay:
                    j_found = j
                    d_found = d
                    break
            if j_found < 0 or d_found == 0.0:
                continue
            added = abs(emb_hi[i, dim] - emb_hi[j_found, dim])
            counted += 1
            if added / d_found > ratio_threshold:
                false += 1
        fractions.append(false / counted if counted else 0.0)
    return fractions


def quarter_period_delay(f_dominant: float, dt: float) -> int:
    """Delay (in samples) equal to a quarter of the dominant period."""
    return max(1, round(1.0 / (4.0 * f_dominant * dt)))
