"""Concentration operators: Gram matrices, extremal eigenvalues, inequality probes.

The central device is the compression of multiplication by the indicator of
a set E to a finite span of exponentials.  Its entries are Gram integrals
over E, computed in closed form per interval (never by sampled quadrature,
which is kept only as a cross-check oracle in the tests), so eigenvalues are
limited by linear-algebra conditioning alone.  The smallest eigenvalue is the
best concentration constant on the truncated model space, and 1/lambda_min
the constant of the norm inequality it certifies.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .sequences import Sequence, TailSchedule
from .sets import ThickSet
from .synthesis import BandFunction, Grid, SpectralProfile, synthesize

__all__ = [
    "HermitianForm",
    "ConcentrationEstimate",
    "LemmaTerms",
    "SplitCheck",
    "interval_phase_integral",
    "gram_matrix",
    "nazarov_constant",
    "ls_constant",
    "hermitian_eigensystem",
    "lemma_main_report",
    "theorem_split_check",
]

HERMITIAN_TOL = 1e-12
EIG_RESIDUAL_TOL = 1e-10
DEGENERACY_FLOOR = 1e-13
MAX_DENSE_DIM = 2000


def interval_phase_integral(a, b, d) -> complex:
    """Closed form of the oscillatory integral of e^{2 pi i d x} over [a, b].

    Written as e^{i pi d (a+b)} * sin(pi d (b-a)) / (pi d) with both phases
    range-reduced, so the result is exactly zero whenever d*(b-a) is an
    integer (full-period oscillations), which keeps full-window compressions
    exactly diagonal.
    """
    if d == 0:
        return complex(b - a)
    half = d * (b - a)
    k = round(half)
    s = math.sin(math.pi * (half - k))
    if k % 2:
        s = -s
    phase = d * (a + b)
    phase -= 2 * round(phase / 2)
    return cmath.exp(1j * math.pi * phase) * (s / (math.pi * d))


@dataclass(frozen=True, eq=False)
class HermitianForm:
    """Dense Hermitian matrix with a provenance record.

    Hermitian symmetry is validated to HERMITIAN_TOL entrywise on
    construction; builders assemble one triangle and mirror it, so the check
    guards against assembly bugs rather than rounding.
    """

    dimension: int
    entries: np.ndarray
    provenance: dict

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (self.dimension, self.dimension):
            raise ValueError("entries must be a square matrix of the declared size")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValueError("matrix is not Hermitian within tolerance")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def to_text(self, path) -> None:
        """Dimension header then row-major 're im' pairs, one per line."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{self.dimension}\n")
            for row in self.entries:
                for z in row:
                    fh.write(f"{float(z.real)!r} {float(z.imag)!r}\n")

    @classmethod
    def from_text(cls, path, provenance=None) -> "HermitianForm":
        with open(path, "r", encoding="utf-8") as fh:
            d = int(fh.readline())
            flat = []
            for line in fh:
                if line.strip():
                    re, im = line.split()
                    flat.append(complex(float(re), float(im)))
        m = np.array(flat, dtype=complex).reshape(d, d)
        return cls(d, m, provenance or {"kind": "file"})


@dataclass(frozen=True)
class ConcentrationEstimate:
    """Extremal eigenvalue of a concentration form and its constant.

    ``degenerate`` marks a smallest eigenvalue below the floor where the
    reciprocal would be numerically meaningless; the constant is then inf
    rather than a huge finite number.
    """

    lambda_min: float
    constant_C: float
    residual: float
    discretization: dict
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "lambda_min": self.lambda_min,
            "constant_C": self.constant_C if math.isfinite(self.constant_C) else "inf",
            "residual": self.residual,
            "degenerate": self.degenerate,
            "discretization": self.discretization,
        }


def hermitian_eigensystem(form: HermitianForm):
    """Full dense Hermitian decomposition with a residual contract.

    Returns (eigenvalues ascending, eigenvectors, residual of the smallest
    pair).  Raises NumericalError when the residual exceeds
    EIG_RESIDUAL_TOL times the spectral norm.
    """
    if form.dimension > MAX_DENSE_DIM:
        raise ValueError(
            f"dimension {form.dimension} exceeds the dense solver cap "
            f"{MAX_DENSE_DIM}"
        )
    vals, vecs = np.linalg.eigh(form.entries)
    v0 = vecs[:, 0]
    residual = float(np.linalg.norm(form.entries @ v0 - vals[0] * v0))
    scale = float(np.max(np.abs(vals))) if form.dimension else 0.0
    if scale > 0 and residual > EIG_RESIDUAL_TOL * scale:
        raise NumericalError(
            f"eigensolver residual {residual:.3e} exceeds "
            f"{EIG_RESIDUAL_TOL} * ||G|| = {EIG_RESIDUAL_TOL * scale:.3e}"
        )
    return vals, vecs, residual


def _torus_intervals(E: ThickSet) -> tuple:
    for a, b in E.intervals:
        if a < -1e-12 or b > 1 + 1e-12:
            raise ValueError("set must lie inside the unit torus [0, 1]")
    if E.measure <= 0:
        raise ValueError("set must have positive measure")
    return E.intervals


def gram_matrix(E: ThickSet, seq: Sequence) -> HermitianForm:
    """Gram matrix of the exponentials of a frequency list restricted to E.

    Entry (n, m) is the integral of e^{2 pi i (lambda_n - lambda_m) x} over
    E inside the unit torus, assembled from the per-interval closed form.
    """
    intervals = _torus_intervals(E)
    freqs = [float(v) for v in seq.values]
    n = len(freqs)
    if n == 0:
        raise ValueError("need at least one frequency")
    m = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            d = freqs[i] - freqs[j]
            z = sum(
                (interval_phase_integral(a, b, d) for a, b in intervals),
                complex(0),
            )
            m[i, j] = z
            m[j, i] = z.conjugate()
    return HermitianForm(
        n,
        m,
        {
            "kind": "gram",
            "frequencies": freqs,
            "set": E.to_dict(),
        },
    )


def _estimate(form: HermitianForm, discretization: dict) -> ConcentrationEstimate:
    vals, _, residual = hermitian_eigensystem(form)
    lam = float(vals[0])
    if lam < -1e-12:
        raise NumericalError(
            f"compression eigenvalue {lam} is negative beyond tolerance"
        )
    lam = max(lam, 0.0)
    degenerate = lam < DEGENERACY_FLOOR
    constant = math.inf if degenerate else 1.0 / lam
    return ConcentrationEstimate(lam, constant, residual, discretization, degenerate)


def nazarov_constant(E: ThickSet, seq: Sequence) -> ConcentrationEstimate:
    """Best constant of the torus concentration inequality for a finite
    frequency list: the smallest Gram eigenvalue and its reciprocal."""
    form = gram_matrix(E, seq)
    return _estimate(
        form,
        {
            "model": "torus_gram",
            "dimension": form.dimension,
            "set_measure": float(E.measure),
        },
    )


def _profile_bins(profile, grid: Grid) -> np.ndarray:
    T = grid.period
    bins: list[int] = []
    if isinstance(profile, SpectralProfile):
        pieces = profile.intervals()
    else:
        pieces = (tuple(profile),)
    for lo, hi in pieces:
        k_lo = math.ceil(lo * T - 1e-9)
        k_hi = math.floor(hi * T + 1e-9)
        bins.extend(range(k_lo, k_hi + 1))
    out = np.array(sorted(set(bins)), dtype=np.int64)
    if out.size == 0:
        raise ValueError("profile holds no grid frequencies")
    return out


def ls_constant(E: ThickSet, profile, grid: Grid) -> ConcentrationEstimate:
    """Concentration constant of a thick set against a spectral profile.

    Builds the compression of multiplication by the indicator of E to the
    span of grid exponentials with frequencies in the profile; entries are
    the closed-form Gram integrals over E, normalized so a full window gives
    the identity.  Returns the smallest eigenvalue and C = 1/lambda_min, the
    best constant of the norm inequality on the truncated model space.
    """
    w0, w1 = E.window
    T = grid.period
    if abs(float(w0)) > 1e-9 or abs(float(w1) - T) > 1e-9 * max(1.0, T):
        raise ValueError("set window must coincide with the grid window [0, T]")
    if E.measure <= 0:
        raise ValueError("set must have positive measure")
    bins = _profile_bins(profile, grid)
    grid.check_nyquist(float(np.max(np.abs(bins))) / T)
    n = bins.size
    if n > MAX_DENSE_DIM:
        raise ValueError(f"profile spans {n} bins, above the dense solver cap")
    m = np.zeros((n, n), dtype=complex)
    intervals = [(float(a), float(b)) for a, b in E.intervals]
    for i in range(n):
        for j in range(i, n):
            d = (bins[i] - bins[j]) / T
            z = sum(
                (interval_phase_integral(a, b, d) for a, b in intervals),
                complex(0),
            ) / T
            m[i, j] = z
            m[j, i] = z.conjugate()
    form = HermitianForm(
        n,
        m,
        {
            "kind": "ls_compression",
            "bins": [int(k) for k in bins],
            "grid": {"period": T, "samples": grid.samples},
            "set": E.to_dict(),
        },
    )
    return _estimate(
        form,
        {
            "model": "ls_compression",
            "dimension": n,
            "set_measure": float(E.measure),
            "grid": {"period": T, "samples": grid.samples},
        },
    )


def _cell_weights(grid: Grid, intervals) -> np.ndarray:
    """Lebesgue measure of each grid cell [x_j, x_{j+1}) inside the intervals."""
    edges = np.arange(grid.samples + 1) * grid.spacing
    w = np.zeros(grid.samples)
    for a, b in intervals:
        w += np.clip(
            np.minimum(float(b), edges[1:]) - np.maximum(float(a), edges[:-1]),
            0.0,
            None,
        )
    return w


def _clip_intervals(intervals, lo, hi):
    out = []
    for a, b in intervals:
        a2, b2 = max(float(a), lo), min(float(b), hi)
        if b2 > a2:
            out.append((a2, b2))
    return out


def _window_trace(E: ThickSet, grid: Grid):
    w0, w1 = float(E.window[0]), float(E.window[1])
    if abs(w0) > 1e-9 or abs(w1 - grid.period) > 1e-9 * max(1.0, grid.period):
        raise ValueError("set window must coincide with the grid window [0, T]")
    return [(float(a), float(b)) for a, b in E.intervals]


@dataclass(frozen=True)
class LemmaTerms:
    """Quadrature record of the local concentration inequality's three terms."""

    lhs: float
    term_density: float
    term_sobolev: float

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "term_density": self.term_density,
            "term_sobolev": self.term_sobolev,
        }


def lemma_main_report(
    f_list, seq_tail: Sequence, E: ThickSet, interval, L: int
) -> LemmaTerms:
    """Measure the three terms of the local concentration inequality.

    lhs           integral over I intersect E of |sum f_n e^{2 pi i lambda_n x}|^2
    term_density  integral over I of sum |f_n|^2
    term_sobolev  integral over I of sum (|f_n|^2 + |f_n'|^2)

    The interval I must have length exactly 1/L.  Integrals use cell-measure
    weights on the sampling grid (exact for integrands constant on I).
    """
    if L < 1:
        raise ValueError("L must be a positive integer")
    if len(f_list) != len(seq_tail):
        raise ValueError("need one band function per tail frequency")
    i0, i1 = float(interval[0]), float(interval[1])
    if abs((i1 - i0) - 1.0 / L) > 1e-12:
        raise ValueError(f"interval length {i1 - i0} differs from 1/L = {1.0 / L}")
    if not f_list:
        return LemmaTerms(0.0, 0.0, 0.0)
    grid = f_list[0].grid
    for f in f_list:
        if f.grid != grid:
            raise ValueError("band functions must share one grid")
    e_trace = _window_trace(E, grid)
    x = grid.points()
    F = np.zeros(grid.samples, dtype=complex)
    sq = np.zeros(grid.samples)
    sob = np.zeros(grid.samples)
    for f, lam in zip(f_list, seq_tail.values):
        grid.bin_of(lam)  # refuse off-grid modulation
        fv = f.values
        F += fv * np.exp(2j * np.pi * float(lam) * x)
        sq += np.abs(fv) ** 2
        sob += np.abs(f.derivative().values) ** 2
    w_i = _cell_weights(grid, [(i0, i1)])
    w_ie = _cell_weights(grid, _clip_intervals(e_trace, i0, i1))
    return LemmaTerms(
        float(np.sum(w_ie * np.abs(F) ** 2)),
        float(np.sum(w_i * sq)),
        float(np.sum(w_i * (sq + sob))),
    )


@dataclass(frozen=True)
class SplitCheck:
    """Concentration ratio of a synthesized function and its head/tail split."""

    ratio: float
    ratio_head: float
    ratio_tail: float

    def to_dict(self) -> dict:
        return {
            "ratio": self.ratio,
            "ratio_head": self.ratio_head,
            "ratio_tail": self.ratio_tail,
        }


def theorem_split_check(
    coefficient_blocks,
    seq: Sequence,
    schedule: TailSchedule,
    L: int,
    E: ThickSet,
    grid: Grid,
) -> SplitCheck:
    """Synthesize, split at the scheduled tail start, and measure concentration.

    Requires strictly positive frequencies.  Returns the ratio of the norm of
    the synthesized function restricted to E over its full norm, along with
    the head and tail norm fractions (their squares sum to one since the
    spectra are disjoint).
    """
    if not seq.positive:
        raise ValueError("hypothesis violation: frequencies must be positive")
    M = schedule.value(L)
    blocks = list(coefficient_blocks)
    F = synthesize(blocks, seq, grid)
    if F.norm_sq == 0:
        raise ValueError("concentration ratio undefined for the zero function")
    head = synthesize(blocks[: M - 1], seq[: M - 1], grid)
    tail = synthesize(blocks[M - 1:], seq[M - 1:], grid)
    w_e = _cell_weights(grid, _window_trace(E, grid))
    restricted = float(np.sum(w_e * np.abs(F.values) ** 2))
    return SplitCheck(
        math.sqrt(restricted / F.norm_sq),
        math.sqrt(head.norm_sq / F.norm_sq),
        math.sqrt(tail.norm_sq / F.norm_sq),
    )
