"""Affine iterated function systems on the line.

A system is a pair (R, B): an integer scale R >= 2 and a finite integer
digit set B of size N.  The maps x -> (x + b)/R contract onto a compact
attractor, and the equal-weight invariant measure assigns mass N^-n to
every level-n cylinder when the digits are pairwise distinct mod R (the
no-overlap regime this toolkit supports for cylinder work).

The Fourier transform of the invariant measure is evaluated through its
infinite-product form

    ft(t) = prod_{k>=1} (1/N) sum_b exp(-2 pi i t b / R^k)

truncated at a depth chosen from a certified tail bound, so every value
carries an absolute-error guarantee.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, OverlapError
from .measures import AtomicMeasure, make_atomic

Word = tuple[int, ...]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AffineIfs:
    """Validated scale/digit pair with precomputed congruence flag."""

    scale: int
    digits: tuple[int, ...]
    distinct_mod_scale: bool

    @property
    def branching(self) -> int:
        return len(self.digits)

    def hull(self) -> tuple[float, float]:
        """Smallest interval containing the attractor."""
        return (min(self.digits) / (self.scale - 1), max(self.digits) / (self.scale - 1))

    def max_abs_digit(self) -> int:
        return max(abs(b) for b in self.digits)

    def descriptor(self) -> dict:
        return {"R": self.scale, "B": list(self.digits)}


def new_ifs(scale: int, digits: Sequence[int]) -> AffineIfs:
    """Validate and build an affine IFS.

    Raises ``DomainError`` for scale <= 1, an empty digit set, non-integer
    or duplicate digits, or more digits than the scale admits.
    """
    if int(scale) != scale or scale <= 1:
        raise DomainError("scale must be an integer >= 2")
    ds = [int(b) for b in digits]
    if not ds:
        raise DomainError("digit set must be nonempty")
    if any(int(b) != b for b in digits):
        raise DomainError("digits must be integers")
    if len(set(ds)) != len(ds):
        raise DomainError("digits must be pairwise distinct")
    if len(ds) > scale:
        raise DomainError("cannot have more digits than the scale")
    ds = tuple(sorted(ds))
    distinct = len({b % scale for b in ds}) == len(ds)
    return AffineIfs(int(scale), ds, distinct)


def require_no_overlap(ifs: AffineIfs) -> None:
    if not ifs.distinct_mod_scale:
        raise OverlapError(
            f"digits {ifs.digits} are not pairwise distinct mod {ifs.scale}; "
            "cylinder and frame operations need the no-overlap regime"
        )


def check_word(ifs: AffineIfs, word: Word) -> None:
    for b in word:
        if b not in ifs.digits:
            raise DomainError(f"digit {b} not in digit set {ifs.digits}")


# ---------------------------------------------------------------------------
# encoding and cylinders


def encode(ifs: AffineIfs, word: Sequence[int], depth: int | None = None) -> float:
    """Partial radix expansion sum_{k<=depth} b_k R^-k of a digit word.

    With depth beyond the word length the tail is zero-padded, which is
    only meaningful when 0 is a digit.
    """
    word = tuple(word)
    check_word(ifs, word)
    if depth is None:
        depth = len(word)
    if depth < len(word):
        raise DomainError("depth must cover the whole word")
    if depth > len(word) and 0 not in ifs.digits:
        raise DomainError("zero-padding needs 0 in the digit set")
    R = ifs.scale
    return math.fsum(b * R ** -(k + 1) for k, b in enumerate(word))


def level_words(ifs: AffineIfs, n: int) -> Iterable[Word]:
    """All level-n words, lexicographic in digit order, most significant first."""
    return itertools.product(ifs.digits, repeat=n)


def level_anchors(ifs: AffineIfs, n: int) -> np.ndarray:
    """Anchor points a_w = sum_k b_k R^-k for all level-n words in canonical order."""
    a = np.zeros(1)
    digits = np.array(ifs.digits, dtype=float)
    for k in range(1, n + 1):
        a = (a[:, None] + (digits / ifs.scale**k)[None, :]).ravel()
    return a


def word_anchor(ifs: AffineIfs, word: Word) -> float:
    return math.fsum(b * ifs.scale ** -(k + 1) for k, b in enumerate(word))


def cylinder_interval(ifs: AffineIfs, word: Word) -> tuple[float, float, Fraction]:
    """Hull interval and exact mass of the cylinder addressed by `word`.

    Requires the no-overlap regime; the mass is exactly N^-n.
    """
    require_no_overlap(ifs)
    check_word(ifs, word)
    n = len(word)
    a = word_anchor(ifs, word)
    lo, hi = ifs.hull()
    scale = ifs.scale ** -n
    return (a + scale * lo, a + scale * hi, Fraction(1, ifs.branching**n))


# ---------------------------------------------------------------------------
# Fourier transform of the invariant measure


@dataclass(frozen=True)
class TruncationBudget:
    """Absolute error target for the truncated infinite product."""

    tol: float = 1e-12

    def __post_init__(self):
        if self.tol <= 0:
            raise DomainError("tolerance must be positive")

    def depth_for(self, ifs: AffineIfs, t_abs_max: float) -> int:
        """Smallest depth K whose certified tail error is below tol.

        The one-step bound |(1/N) sum_b e^{-2 pi i s b} - 1| <= 2 pi max|b| |s|
        makes the tail beyond K at most exp(2 pi max|b| |t| R^-K / (R-1)) - 1.
        """
        a = _TWO_PI * ifs.max_abs_digit() * abs(t_abs_max)
        if a == 0:
            return 1
        budget = (ifs.scale - 1) * math.log1p(self.tol)
        k = math.ceil(math.log(a / budget) / math.log(ifs.scale))
        return max(1, k + 1)


DEFAULT_BUDGET = TruncationBudget()


def _symbol(ifs: AffineIfs, s: np.ndarray) -> np.ndarray:
    """One product factor (1/N) sum_b exp(-2 pi i s b)."""
    acc = np.zeros(s.shape, dtype=complex)
    for b in ifs.digits:
        acc += np.exp(-2j * math.pi * s * b)
    return acc / ifs.branching


def ft_invariant(ifs: AffineIfs, t, budget: TruncationBudget | None = None):
    """Fourier transform of the invariant measure at frequency t.

    Accepts a scalar or an array; evaluation is vectorized over t.  The
    absolute error is below budget.tol (certified by the tail bound), and
    ft(0) is exactly 1.
    """
    if budget is None:
        budget = DEFAULT_BUDGET
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)
    out = np.ones(t_arr.shape, dtype=complex)
    t_max = float(np.max(np.abs(t_arr))) if t_arr.size else 0.0
    if t_max > 0:
        depth = budget.depth_for(ifs, t_max)
        for k in range(1, depth + 1):
            out *= _symbol(ifs, t_arr / ifs.scale**k)
    return complex(out[0]) if scalar else out


def ft_cylinder(ifs: AffineIfs, word: Word, t, budget: TruncationBudget | None = None):
    """Fourier transform of the measure restricted to the cylinder of `word`.

    Closed form N^-n exp(-2 pi i t a_w) ft(t / R^n); the absolute error is
    at most N^-n times the budget tolerance.
    """
    require_no_overlap(ifs)
    check_word(ifs, word)
    n = len(word)
    a = word_anchor(ifs, word)
    t_arr = np.asarray(t, dtype=float)
    phase = np.exp(-2j * math.pi * t_arr * a)
    val = phase * ft_invariant(ifs, t_arr / ifs.scale**n, budget) / ifs.branching**n
    return complex(val) if np.ndim(t) == 0 else val


# ---------------------------------------------------------------------------
# digit-set complements and dual weights


def find_complement(ifs: AffineIfs, c_max: int) -> list[tuple[int, ...]]:
    """All digit sets C in {0..c_max} with B + C a complete residue system.

    Each returned C has size R/N, hits every residue class mod R exactly
    once through b + c, and is itself distinct mod R.  Results come in
    lexicographic order; the list is empty when N does not divide R or no
    complement exists within range.
    """
    R, B = ifs.scale, ifs.digits
    if R % ifs.branching != 0:
        return []
    size = R // ifs.branching
    results: list[tuple[int, ...]] = []

    def extend(prefix: list[int], used: set[int], start: int) -> None:
        if len(prefix) == size:
            results.append(tuple(prefix))
            return
        for c in range(start, c_max + 1):
            residues = {(b + c) % R for b in B}
            if len(residues) == len(B) and not (residues & used):
                extend(prefix + [c], used | residues, c + 1)

    extend([], set(), 0)
    return results


def dual_weights(
    complement_ifs: AffineIfs,
    frequencies: Sequence[float],
    budget: TruncationBudget | None = None,
    weight_floor: float = 1e-20,
) -> AtomicMeasure:
    """Atomic measure with weight |ft_C(freq)|^2 at each frequency.

    Frequencies whose weight falls below `weight_floor` (the transform's
    zero set, numerically) are dropped.
    """
    freqs = np.asarray(frequencies, dtype=float)
    vals = ft_invariant(complement_ifs, freqs, budget)
    weights = np.abs(np.atleast_1d(vals)) ** 2
    keep = weights >= weight_floor
    return make_atomic(freqs[keep], weights[keep])


# ---------------------------------------------------------------------------
# sampling


def sample_invariant(ifs: AffineIfs, depth: int, count: int, seed: int) -> np.ndarray:
    """Draw `count` points of the invariant measure by encoding i.i.d. digits.

    Uses numpy's PCG64 generator under the given 64-bit seed, so runs are
    reproducible.  Each point is a depth-truncated radix expansion, hence
    within R^-depth * diam(hull) of an exact attractor point.
    """
    if depth < 1 or count < 1:
        raise DomainError("depth and count must be at least 1")
    rng = np.random.default_rng(seed)
    digits = np.array(ifs.digits, dtype=float)
    weights = ifs.scale ** -(np.arange(1, depth + 1, dtype=float))
    out = np.zeros(count)
    step = 200_000
    for start in range(0, count, step):
        stop = min(start + step, count)
        idx = rng.integers(0, ifs.branching, size=(stop - start, depth))
        out[start:stop] = digits[idx] @ weights
    return out
