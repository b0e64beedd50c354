"""Sampled band functions on a periodic window and their spectral transforms.

Functions live on a uniform grid over one period [0, T).  All synthesis
frequencies are required to sit on the frequency grid (1/T)Z, which keeps
Plancherel identities exact (up to rounding) and makes disjoint-spectrum
orthogonality literal: off-grid modulation is refused, never rounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sequences import Sequence

__all__ = [
    "Grid",
    "SpectralProfile",
    "BandFunction",
    "synthesize",
    "spectral_support",
    "poisson_transform",
    "bernstein_ratio",
    "plancherel_polya_ratio",
    "split_uniformly_discrete",
    "random_band_function",
]

LEAKAGE_TOL = 1e-8
FREQ_SNAP_TOL = 1e-9


@dataclass(frozen=True)
class Grid:
    """Uniform sampling of one period: S points spaced T/S apart."""

    period: float
    samples: int

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError("period must be positive")
        if self.samples < 2:
            raise ValueError("need at least two samples")

    @property
    def spacing(self) -> float:
        return self.period / self.samples

    def points(self) -> np.ndarray:
        return np.arange(self.samples) * self.spacing

    def frequencies(self) -> np.ndarray:
        """Signed bin frequencies k/T in FFT order."""
        return np.fft.fftfreq(self.samples, d=self.spacing)

    def bin_of(self, freq) -> int:
        """Index of an on-grid frequency; raises if freq is off the grid."""
        k = freq * self.period
        r = round(k)
        if abs(k - r) > FREQ_SNAP_TOL * max(1.0, abs(k)):
            raise ValueError(f"frequency {freq} is not on the grid (1/T)Z")
        if not -self.samples // 2 <= r < self.samples // 2:
            raise ValueError(f"frequency {freq} exceeds the Nyquist range")
        return int(r)

    def check_nyquist(self, max_abs_freq) -> None:
        if 2 * max_abs_freq >= self.samples / self.period:
            raise ValueError(
                f"Nyquist violation: S/T = {self.samples / self.period} "
                f"must strictly exceed twice the top frequency {max_abs_freq}"
            )


@dataclass(frozen=True)
class SpectralProfile:
    """Union of equal-length frequency intervals anchored at a sequence."""

    base_sequence: Sequence
    interval_length: float = 1.0

    def __post_init__(self):
        if self.interval_length <= 0:
            raise ValueError("interval length must be positive")
        vals = self.base_sequence.values
        for a, b in zip(vals, vals[1:]):
            if b - a <= self.interval_length:
                raise ValueError(
                    f"profile intervals overlap: gap {b - a} <= "
                    f"length {self.interval_length}"
                )

    def intervals(self) -> tuple:
        return tuple(
            (v, v + self.interval_length) for v in self.base_sequence.values
        )

    @property
    def max_abs_frequency(self) -> float:
        vals = self.base_sequence.values
        if not vals:
            return 0.0
        return max(abs(vals[0]), abs(vals[-1] + self.interval_length))


def _support_intervals(support) -> tuple:
    if support is None:
        return ()
    if isinstance(support, SpectralProfile):
        return support.intervals()
    lo, hi = support
    return ((lo, hi),)


def _inside_mask(grid: Grid, support) -> np.ndarray:
    freqs = grid.frequencies()
    mask = np.zeros(grid.samples, dtype=bool)
    for lo, hi in _support_intervals(support):
        pad = FREQ_SNAP_TOL * max(1.0, abs(lo), abs(hi))
        mask |= (freqs >= lo - pad) & (freqs <= hi + pad)
    return mask


@dataclass(frozen=True, eq=False)
class BandFunction:
    """Complex samples over one period plus a declared spectral support.

    Construction verifies the declared support: relative spectral mass in
    bins outside it must stay below LEAKAGE_TOL.
    """

    grid: Grid
    values: np.ndarray
    declared_support: object = None  # SpectralProfile | (lo, hi) | None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.samples,):
            raise ValueError("values must have one entry per grid point")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.declared_support is not None:
            leak = self.leakage()
            if leak > LEAKAGE_TOL:
                raise ValueError(
                    f"spectral mass {leak:.3e} outside the declared support "
                    f"exceeds the tolerance {LEAKAGE_TOL}"
                )

    @classmethod
    def from_spectrum(cls, grid: Grid, coeffs: np.ndarray, support=None):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != (grid.samples,):
            raise ValueError("need one coefficient per bin")
        return cls(grid, np.fft.ifft(coeffs) * grid.samples, support)

    def spectrum(self) -> np.ndarray:
        """Discrete Fourier coefficients c_k with f = sum c_k e^{2 pi i k x / T}."""
        return np.fft.fft(self.values) / self.grid.samples

    def leakage(self) -> float:
        c = self.spectrum()
        mass = np.abs(c) ** 2
        total = mass.sum()
        if total == 0:
            return 0.0
        outside = mass[~_inside_mask(self.grid, self.declared_support)].sum()
        return float(outside / total)

    @property
    def norm_sq(self) -> float:
        """Squared L2 norm over one period."""
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.spacing)

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_sq)

    def derivative(self) -> "BandFunction":
        c = self.spectrum() * (2j * np.pi * self.grid.frequencies())
        return BandFunction.from_spectrum(self.grid, c, None)

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"{float(self.grid.period)!r},{self.grid.samples}\n")
            for v in self.values:
                fh.write(f"{float(v.real)!r},{float(v.imag)!r}\n")

    @classmethod
    def from_csv(cls, path, declared_support=None) -> "BandFunction":
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().split(",")
            grid = Grid(float(header[0]), int(header[1]))
            vals = np.array(
                [complex(float(r), float(i)) for r, i in
                 (line.split(",") for line in fh if line.strip())]
            )
        return cls(grid, vals, declared_support)


def synthesize(coefficient_blocks, seq: Sequence, grid: Grid) -> BandFunction:
    """Sum of unit-band pieces modulated to the sequence frequencies.

    Block n lists coefficients for frequencies lambda_n + j/T with j/T in
    [0, 1]; each lambda_n must lie on the grid (1/T)Z and the shifted band
    must respect Nyquist.  The result declares the union of the unit
    intervals as its support.
    """
    blocks = [np.asarray(b, dtype=complex) for b in coefficient_blocks]
    if len(blocks) != len(seq):
        raise ValueError("need exactly one coefficient block per frequency")
    profile = SpectralProfile(seq, 1.0)
    grid.check_nyquist(profile.max_abs_frequency)
    T, S = grid.period, grid.samples
    max_len = math.floor(T + FREQ_SNAP_TOL) + 1
    c = np.zeros(S, dtype=complex)
    for lam, block in zip(seq.values, blocks):
        if block.ndim != 1:
            raise ValueError("coefficient blocks must be one-dimensional")
        if len(block) > max_len:
            raise ValueError(
                f"block of {len(block)} coefficients addresses frequencies "
                f"outside [0, 1] on a period-{T} grid"
            )
        k0 = grid.bin_of(lam)
        c[(k0 + np.arange(len(block))) % S] += block
    return BandFunction.from_spectrum(grid, c, profile)


def spectral_support(f: BandFunction, tol: float = LEAKAGE_TOL) -> set:
    """Frequencies of the bins holding a relative mass above tol."""
    c = f.spectrum()
    mass = np.abs(c) ** 2
    total = mass.sum()
    if total == 0:
        return set()
    freqs = f.grid.frequencies()
    return {float(freqs[k]) for k in np.flatnonzero(mass / total > tol)}


def poisson_transform(g: BandFunction) -> BandFunction:
    """Fourier multiplier e^{-|xi|}: the harmonic extension to height one.

    The declared support is unchanged.  Bins outside it carry only float
    noise on a valid input, but the multiplier can amplify their share of
    the total mass; they are zeroed so the output satisfies the same
    support declaration it inherits.
    """
    c = g.spectrum() * np.exp(-np.abs(g.grid.frequencies()))
    if g.declared_support is not None:
        c = np.where(_inside_mask(g.grid, g.declared_support), c, 0)
    return BandFunction.from_spectrum(g.grid, c, g.declared_support)


def _require_unit_band(f: BandFunction) -> None:
    for lo, hi in _support_intervals(f.declared_support):
        if lo < -FREQ_SNAP_TOL or hi > 1 + FREQ_SNAP_TOL:
            raise ValueError(
                f"declared support interval ({lo}, {hi}) leaves [0, 1]"
            )


def bernstein_ratio(f: BandFunction) -> float:
    """Derivative-to-function L2 ratio, computed spectrally.

    For declared support inside [0, 1] the exact bound is 2*pi, attained at
    the pure frequency 1.
    """
    _require_unit_band(f)
    c = f.spectrum()
    denom = np.sum(np.abs(c) ** 2)
    if denom == 0:
        raise ValueError("derivative ratio undefined for the zero function")
    num = np.sum(np.abs(2j * np.pi * f.grid.frequencies() * c) ** 2)
    return float(np.sqrt(num / denom))


def plancherel_polya_ratio(h: BandFunction, points, delta) -> float:
    """Sample-energy to norm ratio over a separated point set.

    Points are evaluated by exact trigonometric interpolation from the
    nonzero coefficients (the samples are values of a trigonometric
    polynomial, so no other interpolation is needed).  Over the full integer
    grid {0, ..., T-1} with support in [0, 1) the ratio is the Parseval
    identity and equals 1.
    """
    if delta <= 0:
        raise ValueError("separation delta must be positive")
    _require_unit_band(h)
    pts = np.sort(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise ValueError("need at least one sample point")
    if pts.size > 1 and np.min(np.diff(pts)) < delta - 1e-12:
        raise ValueError(
            f"points are not uniformly discrete at separation {delta}"
        )
    norm_sq = h.norm_sq
    if norm_sq == 0:
        raise ValueError("sampling ratio undefined for the zero function")
    c = h.spectrum()
    active = np.abs(c) > 1e-15 * np.abs(c).max()
    freqs = h.grid.frequencies()[active]
    vals = np.exp(2j * np.pi * np.outer(pts, freqs)) @ c[active]
    return float(np.sum(np.abs(vals) ** 2) / norm_sq)


def split_uniformly_discrete(values, delta) -> list[list]:
    """Greedy split of a point set into delta-separated parts.

    Each sorted point goes to the first part whose last element is at least
    delta behind it.  If every point has at most N others within delta, at
    most N + 1 parts appear.
    """
    if delta <= 0:
        raise ValueError("separation delta must be positive")
    parts: list[list] = []
    for v in sorted(values):
        for part in parts:
            if v - part[-1] >= delta:
                part.append(v)
                break
        else:
            parts.append([v])
    return parts


def random_band_function(
    grid: Grid, rng, band=(0.0, 1.0), *, include_right: bool = True
) -> BandFunction:
    """Standard complex Gaussian coefficients on the grid bins of a band."""
    T = grid.period
    lo, hi = band
    k_lo = math.ceil(lo * T - FREQ_SNAP_TOL)
    k_hi = math.floor(hi * T + FREQ_SNAP_TOL)
    if not include_right and abs(k_hi - hi * T) <= FREQ_SNAP_TOL:
        k_hi -= 1
    if k_hi < k_lo:
        raise ValueError("band holds no grid frequencies")
    grid.check_nyquist(max(abs(lo), abs(hi)))
    bins = np.arange(k_lo, k_hi + 1)
    c = np.zeros(grid.samples, dtype=complex)
    c[bins % grid.samples] = rng.standard_normal(bins.size) + 1j * rng.standard_normal(
        bins.size
    )
    return BandFunction.from_spectrum(grid, c, (lo, hi))
