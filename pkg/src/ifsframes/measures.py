"""Finite measures on the real line.

Three representations cover everything this toolkit needs:

* ``AtomicMeasure``: a finite weighted point set, sorted by position.
* ``DensityMeasure``: a piecewise-constant density on a uniform grid,
  stored as mass per bin.
* ``FiniteSum``: a finite mixture of the above (e.g. a restricted
  Lebesgue measure plus a point mass).

All values are immutable after construction and every operation here is a
pure function, so measures can be shared freely across threads.

Densities follow the bin-mass model: a bin is the half-open cell
``[start + k*w, start + (k+1)*w)`` carrying a stated mass.  Convolution of
two densities refines both to the finest exactly-representable common grid
and convolves the bin-mass vectors there, which keeps the constructions in
this toolkit exact for the dyadic/integer data they are applied to.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, UsageError

# Points closer than this (relative to magnitude) are treated as the same
# atom; the catalog has integer or dyadic atoms, so this only absorbs float
# noise.
MERGE_REL_TOL = 1e-12

# Atoms lighter than this are dropped by weight-threshold constructors.
WEIGHT_FLOOR = 1e-20

# Largest exact grid refinement attempted before convolution falls back to
# mass-preserving rebinning.
_MAX_REFINE = 4096


@dataclass(frozen=True)
class AtomicMeasure:
    """Weighted point set with strictly increasing points and weights >= 0."""

    points: np.ndarray
    weights: np.ndarray

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    @property
    def size(self) -> int:
        return int(self.points.size)

    def support_hull(self) -> tuple[float, float]:
        if self.points.size == 0:
            return (0.0, 0.0)
        return (float(self.points[0]), float(self.points[-1]))

    def translate(self, s: float) -> "AtomicMeasure":
        return AtomicMeasure(self.points + s, self.weights.copy())


@dataclass(frozen=True)
class DensityMeasure:
    """Piecewise-constant density on a uniform grid, stored as bin masses."""

    support_start: float
    bin_width: float
    bin_masses: np.ndarray

    @property
    def mass(self) -> float:
        return float(np.sum(self.bin_masses))

    @property
    def bins(self) -> int:
        return int(self.bin_masses.size)

    def support_hull(self) -> tuple[float, float]:
        return (self.support_start, self.support_start + self.bins * self.bin_width)

    def edges(self) -> np.ndarray:
        return self.support_start + self.bin_width * np.arange(self.bins + 1)

    def translate(self, s: float) -> "DensityMeasure":
        return DensityMeasure(self.support_start + s, self.bin_width, self.bin_masses.copy())


@dataclass(frozen=True)
class FiniteSum:
    """Finite mixture of atomic and density components."""

    components: tuple

    @property
    def mass(self) -> float:
        return float(sum(c.mass for c in self.components))

    def support_hull(self) -> tuple[float, float]:
        hulls = [c.support_hull() for c in self.components]
        return (min(h[0] for h in hulls), max(h[1] for h in hulls))

    def translate(self, s: float) -> "FiniteSum":
        return FiniteSum(tuple(c.translate(s) for c in self.components))


Measure = Union[AtomicMeasure, DensityMeasure, FiniteSum]


# ---------------------------------------------------------------------------
# constructors


def make_atomic(points: Sequence[float], weights: Sequence[float]) -> AtomicMeasure:
    """Build an atomic measure, merging near-duplicate points by weight sum.

    Raises ``UsageError`` on length mismatch and ``DomainError`` on negative
    weights.  The empty measure is legal and has mass 0.
    """
    pts = np.asarray(points, dtype=float)
    wts = np.asarray(weights, dtype=float)
    if pts.shape != wts.shape or pts.ndim != 1:
        raise UsageError("points and weights must be 1-d sequences of equal length")
    if np.any(wts < 0):
        raise DomainError("atomic weights must be nonnegative")
    if pts.size == 0:
        return AtomicMeasure(pts, wts)
    order = np.argsort(pts, kind="stable")
    pts = pts[order]
    wts = wts[order]
    out_p = [pts[0]]
    out_w = [wts[0]]
    for p, w in zip(pts[1:], wts[1:]):
        tol = MERGE_REL_TOL * max(1.0, abs(p), abs(out_p[-1]))
        if p - out_p[-1] <= tol:
            out_w[-1] += w
        else:
            out_p.append(p)
            out_w.append(w)
    return AtomicMeasure(np.array(out_p), np.array(out_w))


def make_density(start: float, bin_width: float, masses: Sequence[float]) -> DensityMeasure:
    if bin_width <= 0:
        raise DomainError("bin width must be positive")
    m = np.asarray(masses, dtype=float)
    if m.ndim != 1:
        raise UsageError("bin masses must be a 1-d sequence")
    if np.any(m < 0):
        raise DomainError("bin masses must be nonnegative")
    return DensityMeasure(float(start), float(bin_width), m)


def lebesgue_on(a: float, b: float, bins: int = 1) -> DensityMeasure:
    """Lebesgue measure restricted to [a, b), split over `bins` equal cells."""
    if b <= a:
        raise DomainError("interval must have positive length")
    if bins < 1:
        raise UsageError("need at least one bin")
    w = (b - a) / bins
    return DensityMeasure(float(a), w, np.full(bins, w))


def dirac(point: float, weight: float = 1.0) -> AtomicMeasure:
    return make_atomic([point], [weight])


def integer_lattice(lo: int, hi: int, weight: float = 1.0) -> AtomicMeasure:
    """Counting-type measure `weight * sum of point masses` on Z ∩ [lo, hi]."""
    pts = np.arange(lo, hi + 1, dtype=float)
    return AtomicMeasure(pts, np.full(pts.size, float(weight)))


# ---------------------------------------------------------------------------
# mass and windows


def mass(nu: Measure) -> float:
    return nu.mass


def support_hull(nu: Measure) -> tuple[float, float]:
    return nu.support_hull()


def translate(nu: Measure, s: float) -> Measure:
    return nu.translate(s)


def window_mass(nu: Measure, x: float, R: float, include_left: bool = True) -> float:
    """Mass of the window [x, x+R); with include_left=False, of (x, x+R].

    Exact for atomic measures (binary search on the sorted points) and for
    densities (partial bins prorated by overlap).
    """
    if R <= 0:
        raise DomainError("window length must be positive")
    if isinstance(nu, AtomicMeasure):
        side_lo = "left" if include_left else "right"
        side_hi = "left" if include_left else "right"
        lo = np.searchsorted(nu.points, x, side=side_lo)
        hi = np.searchsorted(nu.points, x + R, side=side_hi)
        return float(np.sum(nu.weights[lo:hi]))
    if isinstance(nu, DensityMeasure):
        if nu.bins == 0:
            return 0.0
        edges = nu.edges()
        left = np.maximum(edges[:-1], x)
        right = np.minimum(edges[1:], x + R)
        overlap = np.clip(right - left, 0.0, None)
        return float(np.sum(nu.bin_masses * (overlap / nu.bin_width)))
    if isinstance(nu, FiniteSum):
        return float(sum(window_mass(c, x, R, include_left) for c in nu.components))
    raise UsageError(f"not a measure: {type(nu)!r}")


# ---------------------------------------------------------------------------
# convolution


def _common_refine(w1: float, w2: float) -> float | None:
    """Finest width h with w1 and w2 integer multiples of h, or None."""
    ratio = w1 / w2
    frac = Fraction(ratio).limit_denominator(_MAX_REFINE)
    if frac.numerator <= 0:
        return None
    approx = frac.numerator / frac.denominator
    if abs(approx - ratio) > 1e-9 * ratio:
        return None
    h = w1 / frac.numerator
    if w1 / h > _MAX_REFINE or w2 / h > _MAX_REFINE:
        return None
    return h


def _refine_masses(d: DensityMeasure, h: float) -> np.ndarray:
    m = int(round(d.bin_width / h))
    return np.repeat(d.bin_masses / m, m)


def _convolve_atomic(a: AtomicMeasure, b: AtomicMeasure) -> AtomicMeasure:
    if a.size == 0 or b.size == 0:
        return make_atomic([], [])
    pts = np.add.outer(a.points, b.points).ravel()
    wts = np.outer(a.weights, b.weights).ravel()
    return make_atomic(pts, wts)


def _convolve_atomic_density(a: AtomicMeasure, d: DensityMeasure) -> DensityMeasure:
    if a.size == 0 or d.bins == 0:
        return DensityMeasure(d.support_start, d.bin_width, np.zeros(0))
    base = a.points[0]
    offsets = a.points - base
    # Exact path: all atom offsets sit on a refinement of the density grid.
    h = None
    for m in range(1, 65):
        cand = d.bin_width / m
        steps = offsets / cand
        if np.all(np.abs(steps - np.round(steps)) <= 1e-9 * np.maximum(1.0, np.abs(steps))):
            h = cand
            break
    if h is not None:
        sub = int(round(d.bin_width / h))
        shifts = np.round(offsets / h).astype(int)
        masses_fine = _refine_masses(d, h)
        n_out = shifts[-1] + masses_fine.size
        out = np.zeros(int(n_out))
        for s, w in zip(shifts, a.weights):
            out[s : s + masses_fine.size] += w * masses_fine
        return DensityMeasure(base + d.support_start, h, out)
    # Fallback: rebin each shifted copy onto the base grid.  Bin masses are
    # exact; the in-bin profile is flattened.
    w = d.bin_width
    lo = base + d.support_start
    hi = a.points[-1] + d.support_start + d.bins * w
    n_out = int(np.ceil((hi - lo) / w - 1e-12))
    out = np.zeros(n_out)
    for k in range(n_out):
        cell = lo + k * w
        out[k] = sum(
            wt * window_mass(d, cell - p, w) for p, wt in zip(a.points, a.weights)
        )
    return DensityMeasure(lo, w, out)


def _convolve_density(d1: DensityMeasure, d2: DensityMeasure) -> DensityMeasure:
    if d1.bins == 0 or d2.bins == 0:
        return DensityMeasure(d1.support_start + d2.support_start, d1.bin_width, np.zeros(0))
    h = _common_refine(d1.bin_width, d2.bin_width)
    if h is None:
        h = min(d1.bin_width, d2.bin_width) / 64
        m1 = _rebin(d1, h)
        m2 = _rebin(d2, h)
    else:
        m1 = _refine_masses(d1, h)
        m2 = _refine_masses(d2, h)
    masses = np.convolve(m1, m2)
    return DensityMeasure(d1.support_start + d2.support_start, h, masses)


def _rebin(d: DensityMeasure, h: float) -> np.ndarray:
    n = int(np.ceil(d.bins * d.bin_width / h - 1e-12))
    return np.array([window_mass(d, d.support_start + k * h, h) for k in range(n)])


def _components(nu: Measure) -> tuple:
    return nu.components if isinstance(nu, FiniteSum) else (nu,)


def _wrap(components: list) -> Measure:
    atoms = [c for c in components if isinstance(c, AtomicMeasure)]
    dens = [c for c in components if isinstance(c, DensityMeasure)]
    merged: list = []
    if atoms:
        merged.append(
            make_atomic(
                np.concatenate([a.points for a in atoms]),
                np.concatenate([a.weights for a in atoms]),
            )
        )
    merged.extend(dens)
    if len(merged) == 1:
        return merged[0]
    return FiniteSum(tuple(merged))


def convolve(nu: Measure, rho: Measure) -> Measure:
    """Convolution of two finite measures.

    atomic*atomic stays atomic, atomic*density shifts and sums the density,
    density*density convolves bin masses on the finest common grid.  The
    total mass of the result is mass(nu) * mass(rho).
    """
    out = []
    for c1 in _components(nu):
        for c2 in _components(rho):
            if isinstance(c1, AtomicMeasure) and isinstance(c2, AtomicMeasure):
                out.append(_convolve_atomic(c1, c2))
            elif isinstance(c1, AtomicMeasure) and isinstance(c2, DensityMeasure):
                out.append(_convolve_atomic_density(c1, c2))
            elif isinstance(c1, DensityMeasure) and isinstance(c2, AtomicMeasure):
                out.append(_convolve_atomic_density(c2, c1))
            else:
                out.append(_convolve_density(c1, c2))
    return _wrap(out)


def merge_densities(parts: Sequence[DensityMeasure]) -> DensityMeasure:
    """Sum of density measures on one common grid (refined if needed)."""
    parts = [p for p in parts if p.bins > 0]
    if not parts:
        return DensityMeasure(0.0, 1.0, np.zeros(0))
    h = parts[0].bin_width
    for p in parts[1:]:
        cand = _common_refine(h, p.bin_width)
        h = cand if cand is not None else min(h, p.bin_width) / 64
    start = min(p.support_start for p in parts)
    # Starts must sit on the common grid for the exact path.
    aligned = all(
        abs((p.support_start - start) / h - round((p.support_start - start) / h)) < 1e-9
        for p in parts
    )
    end = max(p.support_start + p.bins * p.bin_width for p in parts)
    n = int(np.ceil((end - start) / h - 1e-12))
    out = np.zeros(n)
    for p in parts:
        if aligned and _common_refine(p.bin_width, h) is not None:
            fine = _refine_masses(p, h)
            k0 = int(round((p.support_start - start) / h))
            out[k0 : k0 + fine.size] += fine
        else:
            for k in range(n):
                out[k] += window_mass(p, start + k * h, h)
    return DensityMeasure(start, h, out)


# ---------------------------------------------------------------------------
# discretization and mollification


def _cell_index(p: float, r: float) -> int:
    q = p / r
    k = int(np.floor(q))
    # Snap points a hair below a cell boundary up, so grids built from
    # multiples of r discretize idempotently despite rounding.
    if q - k > 1.0 - 1e-9:
        k += 1
    return k


def discretize(nu: Measure, r: float, point_rule="left") -> AtomicMeasure:
    """Collapse each grid cell r*[k, k+1) to a single atom carrying its mass.

    ``point_rule`` is "left" (atom at r*k), "center" (atom at r*(k+1/2)), or
    a sequence of offsets in [0, r) cycled over k.  Total mass is preserved
    exactly; empty cells produce no atom.
    """
    if r <= 0:
        raise DomainError("cell size must be positive")
    offsets = None
    if not isinstance(point_rule, str):
        offsets = [float(o) for o in point_rule]
        if not offsets:
            raise UsageError("custom point rule needs at least one offset")
        for o in offsets:
            if not (0 <= o < r):
                raise DomainError("custom offsets must lie in [0, r)")
    elif point_rule not in ("left", "center"):
        raise UsageError(f"unknown point rule {point_rule!r}")

    cells: dict[int, float] = {}
    for comp in _components(nu):
        if isinstance(comp, AtomicMeasure):
            for p, w in zip(comp.points, comp.weights):
                k = _cell_index(p, r)
                cells[k] = cells.get(k, 0.0) + w
        else:
            lo, hi = comp.support_hull()
            k_lo = int(np.floor(lo / r)) - 1
            k_hi = int(np.ceil(hi / r)) + 1
            for k in range(k_lo, k_hi + 1):
                m = window_mass(comp, k * r, r)
                if m > 0:
                    cells[k] = cells.get(k, 0.0) + m

    ks = sorted(k for k, m in cells.items() if m > 0)
    if point_rule == "left":
        pts = [k * r for k in ks]
    elif point_rule == "center":
        pts = [(k + 0.5) * r for k in ks]
    else:
        pts = [k * r + offsets[k % len(offsets)] for k in ks]
    return make_atomic(pts, [cells[k] for k in ks])


def mollify(nu: Measure, kernel_width: float) -> DensityMeasure:
    """Convolve with the uniform probability density on [0, kernel_width).

    The kernel is carried on two half-width bins, so atomic inputs on a
    half-width-commensurate grid come out exact.  Mass is preserved.
    """
    if kernel_width <= 0:
        raise DomainError("kernel width must be positive")
    kernel = DensityMeasure(0.0, kernel_width / 2, np.array([0.5, 0.5]))
    res = convolve(nu, kernel)
    if isinstance(res, DensityMeasure):
        return res
    if isinstance(res, FiniteSum):
        return merge_densities([c for c in res.components if isinstance(c, DensityMeasure)])
    raise UsageError("mollification of a purely atomic measure should yield a density")


# ---------------------------------------------------------------------------
# serialization


def measure_to_dict(nu: Measure) -> dict:
    if isinstance(nu, AtomicMeasure):
        return {
            "type": "atomic",
            "atoms": [[float(p), float(w)] for p, w in zip(nu.points, nu.weights)],
        }
    if isinstance(nu, DensityMeasure):
        return {
            "type": "density",
            "start": float(nu.support_start),
            "bin_width": float(nu.bin_width),
            "masses": [float(m) for m in nu.bin_masses],
        }
    if isinstance(nu, FiniteSum):
        return {"type": "sum", "components": [measure_to_dict(c) for c in nu.components]}
    raise UsageError(f"not a measure: {type(nu)!r}")


def measure_from_dict(obj: dict) -> Measure:
    kind = obj.get("type")
    if kind == "atomic":
        atoms = obj.get("atoms", [])
        return make_atomic([a[0] for a in atoms], [a[1] for a in atoms])
    if kind == "density":
        return make_density(obj["start"], obj["bin_width"], obj["masses"])
    if kind == "sum":
        return FiniteSum(tuple(measure_from_dict(c) for c in obj["components"]))
    raise UsageError(f"unknown measure type {kind!r}")


def dumps(nu: Measure) -> str:
    return json.dumps(measure_to_dict(nu), sort_keys=True)


def loads(text: str) -> Measure:
    return measure_from_dict(json.loads(text))
