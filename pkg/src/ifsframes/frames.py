"""Frame-inequality diagnostics on cylinder subspaces.

For a no-overlap system the level-n cylinder indicators are orthogonal in
L2 of the invariant measure, each with mass N^-n.  Against a candidate
atomic measure with atoms (freq_j, weight_j) the quadratic form

    sum_j weight_j |(f dmu)^(freq_j)|^2

restricted to that N^n-dimensional subspace is a Gram matrix, and the
extreme eigenvalues scaled by N^n are exact frame bounds on the subspace.
Sweeps of those bounds over level and truncation are the verification
surface of this toolkit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, SizeLimitError, UsageError
from .ifs import (
    AffineIfs,
    TruncationBudget,
    ft_invariant,
    level_anchors,
    require_no_overlap,
)
from .measures import AtomicMeasure, DensityMeasure, FiniteSum, Measure, make_atomic

HERMITIAN_RESIDUAL_TOL = 1e-12
PSD_SLACK = 1e-10
GRAM_DIM_LIMIT = 4096
ATOM_WEIGHT_FLOOR = 1e-20
_ATOM_CHUNK = 8192


@dataclass(frozen=True)
class CylinderFunction:
    """Coefficient vector over the level-n cylinder indicators of a system."""

    system: AffineIfs
    level: int
    coefficients: np.ndarray

    def __post_init__(self):
        m = self.system.branching**self.level
        if self.coefficients.size != m:
            raise UsageError(f"level {self.level} needs {m} coefficients")

    @property
    def norm_sq(self) -> float:
        """Squared L2 norm against the invariant measure."""
        return float(np.sum(np.abs(self.coefficients) ** 2)) / self.system.branching**self.level

    def transform(self, t, budget: TruncationBudget | None = None):
        """Fourier transform of (f dmu) at frequencies t, vectorized."""
        require_no_overlap(self.system)
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        n = self.level
        R = self.system.scale
        anchors = level_anchors(self.system, n)
        base = ft_invariant(self.system, t_arr / R**n, budget)
        phases = np.exp(-2j * math.pi * np.outer(anchors, t_arr))
        vals = (self.coefficients @ phases) * base / self.system.branching**n
        return complex(vals[0]) if np.ndim(t) == 0 else vals


def constant_one(system: AffineIfs) -> CylinderFunction:
    """The constant function 1 as a level-0 cylinder function."""
    return CylinderFunction(system, 0, np.ones(1, dtype=complex))


@dataclass(frozen=True)
class HermitianMatrix:
    """Dense Hermitian matrix plus its conjugate-symmetry residual."""

    values: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    @property
    def hermitian_residual(self) -> float:
        diff = self.values - self.values.conj().T
        denom = max(1.0, float(np.max(np.abs(self.values))))
        return float(np.max(np.abs(diff))) / denom


@dataclass(frozen=True)
class FrameReport:
    """Frame bounds of one (level, truncation) cell of a sweep."""

    level: int
    measure_ref: str
    lower: float
    upper: float
    lambda_truncation: float
    psd_residual: float
    hermitian_residual: float

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "measure_ref": self.measure_ref,
            "A": self.lower,
            "B": self.upper,
            "lambda_truncation": self.lambda_truncation,
            "residuals": {"psd": self.psd_residual, "hermitian": self.hermitian_residual},
        }


def gram_matrix(
    system: AffineIfs,
    level: int,
    nu: AtomicMeasure,
    budget: TruncationBudget | None = None,
) -> HermitianMatrix:
    """Gram matrix of the candidate-measure quadratic form on level-n cylinders.

    Entry (w, w') is sum_j weight_j ft_cyl(w, freq_j) conj(ft_cyl(w', freq_j)),
    assembled as V V* so the result is positive semidefinite by construction.
    Atoms lighter than 1e-20 are skipped; dimensions above 4096 are refused.
    """
    require_no_overlap(system)
    if not isinstance(nu, AtomicMeasure):
        raise UsageError("gram_matrix takes an atomic candidate measure; discretize first")
    m = system.branching**level
    if m > GRAM_DIM_LIMIT:
        raise SizeLimitError(f"cylinder dimension {m} exceeds limit {GRAM_DIM_LIMIT}")
    keep = nu.weights >= ATOM_WEIGHT_FLOOR
    freqs = nu.points[keep]
    weights = nu.weights[keep]
    anchors = level_anchors(system, level)
    R, N = system.scale, system.branching
    G = np.zeros((m, m), dtype=complex)
    chunk = max(16, min(_ATOM_CHUNK, 4_000_000 // m))
    for start in range(0, freqs.size, chunk):
        f = freqs[start : start + chunk]
        w = weights[start : start + chunk]
        col = np.sqrt(w) * ft_invariant(system, f / R**level, budget) / N**level
        V = np.exp(-2j * math.pi * np.outer(anchors, f)) * col[None, :]
        G += V @ V.conj().T
    return HermitianMatrix(G)


def hermitian_extremes(matrix: HermitianMatrix, rel_tol: float = 1e-10) -> tuple[float, float]:
    """Extreme eigenvalues of a Hermitian matrix with a residual certificate.

    Rejects inputs whose conjugate-symmetry residual exceeds 1e-12.  The
    returned pair satisfies ||M v - lambda v|| <= rel_tol ||M|| for the
    corresponding extreme eigenvectors (checked; violation is an error).
    """
    if matrix.hermitian_residual > HERMITIAN_RESIDUAL_TOL:
        raise DomainError(
            f"matrix is not Hermitian (residual {matrix.hermitian_residual:.3e})"
        )
    M = 0.5 * (matrix.values + matrix.values.conj().T)
    eigvals, eigvecs = np.linalg.eigh(M)
    lo, hi = float(eigvals[0]), float(eigvals[-1])
    norm = max(abs(lo), abs(hi), 1e-300)
    for lam, vec in ((lo, eigvecs[:, 0]), (hi, eigvecs[:, -1])):
        res = float(np.linalg.norm(M @ vec - lam * vec))
        if res > max(rel_tol * norm, 1e-300):
            raise DomainError(f"eigenpair residual {res:.3e} exceeds certificate")
    return lo, hi


def frame_bounds(
    system: AffineIfs,
    level: int,
    nu: AtomicMeasure,
    budget: TruncationBudget | None = None,
    measure_ref: str = "",
    eig_rel_tol: float = 1e-10,
) -> FrameReport:
    """Exact frame bounds of the candidate measure on the level-n subspace.

    A = N^n lambda_min(G) and B = N^n lambda_max(G); the N^n factor converts
    eigenvalues of the coefficient form to the L2(mu) normalization.  A tiny
    negative lambda_min within the PSD slack is clipped to zero and recorded
    as the psd residual.
    """
    G = gram_matrix(system, level, nu, budget)
    lo, hi = hermitian_extremes(G, eig_rel_tol)
    scale = float(system.branching**level)
    lower_raw = scale * lo
    psd_residual = max(0.0, -lower_raw)
    if lower_raw < -PSD_SLACK * max(1.0, scale * hi):
        raise DomainError(f"Gram matrix is not PSD within slack: {lower_raw:.3e}")
    lam = float(np.max(np.abs(nu.points))) if nu.size else 0.0
    return FrameReport(
        level=level,
        measure_ref=measure_ref,
        lower=max(lower_raw, 0.0),
        upper=scale * hi,
        lambda_truncation=lam,
        psd_residual=psd_residual,
        hermitian_residual=G.hermitian_residual,
    )


def weighted_frame(nu: AtomicMeasure) -> list[tuple[float, float]]:
    """(weight, frequency) pairs of the weighted exponential family of nu.

    Weights are square roots of the atom masses; zero-weight entries are
    dropped.  The original measure is recovered by squaring the weights.
    """
    out = []
    for p, w in zip(nu.points, nu.weights):
        if w > 0:
            out.append((math.sqrt(w), float(p)))
    return out


# ---------------------------------------------------------------------------
# the no-frame-measure probe


def _sinc_sq(u: np.ndarray) -> np.ndarray:
    out = np.ones_like(u)
    big = np.abs(u) >= 1e-8
    ub = u[big]
    out[big] = np.sin(math.pi * ub) ** 2 / (math.pi * ub) ** 2
    return out


def counterexample_probe(nu: Measure, T: float) -> float:
    """Integral of sin^2(pi(T+t)) / (pi(T+t))^2 against nu.

    This is the candidate-measure energy of the unit-norm witness family
    that forces the lower frame bound of the Lebesgue-plus-point-mass
    measure to zero as T grows.  Exact for atomic nu; densities use
    bin-midpoint quadrature.  The removable singularity evaluates to 1.
    """
    if isinstance(nu, AtomicMeasure):
        return float(np.sum(nu.weights * _sinc_sq(T + nu.points)))
    if isinstance(nu, DensityMeasure):
        if nu.bins == 0:
            return 0.0
        mids = nu.support_start + nu.bin_width * (np.arange(nu.bins) + 0.5)
        return float(np.sum(nu.bin_masses * _sinc_sq(T + mids)))
    if isinstance(nu, FiniteSum):
        return float(sum(counterexample_probe(c, T) for c in nu.components))
    raise UsageError(f"not a measure: {type(nu)!r}")


@dataclass(frozen=True)
class DecayCertificate:
    """Probe values along a grid of modulation parameters."""

    rows: tuple[tuple[float, float], ...]

    @property
    def is_decreasing(self) -> bool:
        vals = [v for _, v in self.rows]
        return all(b < a for a, b in zip(vals, vals[1:]))

    def to_rows(self) -> list[tuple[float, float]]:
        return list(self.rows)


def lower_bound_decay_certificate(nu: Measure, T_grid: Sequence[float]) -> DecayCertificate:
    """Tabulate the probe along T_grid.

    A decreasing table certifies that the infimum of the witness energies
    tends to zero, i.e. that nu is not a frame measure for the
    Lebesgue-plus-point-mass example.
    """
    rows = tuple((float(T), counterexample_probe(nu, float(T))) for T in T_grid)
    return DecayCertificate(rows)
