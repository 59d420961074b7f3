"""Window-mass extremes, density scans, dimension estimates, sampling sets."""

import math

import numpy as np
import pytest

import ifsframes as F
from ifsframes import DomainError, UsageError
from ifsframes.beurling import (
    default_radii,
    dimension,
    lambda_set,
    lower_density,
    sup_window_mass,
    upper_density,
)
from ifsframes.measures import window_mass


def brute_force_sup(nu, R, grid_step):
    lo, hi = nu.support_hull()
    xs = np.arange(lo - R, hi + grid_step, grid_step)
    return max(window_mass(nu, float(x), R) for x in xs)


# ---------------------------------------------------------------------------
# sup window mass


def test_sup_counting_measure_oracle():
    nu = F.integer_lattice(0, 100)
    # brute force over integer offsets
    assert sup_window_mass(nu, 10.0) == 10.0
    assert sup_window_mass(nu, 10.0) == brute_force_sup(nu, 10.0, 0.25)


def test_sup_separated_atoms():
    nu = F.make_atomic([0.0, 5.0], [1.0, 1.0])
    assert sup_window_mass(nu, 2.0) == 1.0


def test_sup_lebesgue_half_window():
    assert sup_window_mass(F.lebesgue_on(0.0, 1.0, 8), 0.5) == pytest.approx(0.5)


def test_sup_exceeds_any_sampled_position():
    rng = np.random.default_rng(2)
    nu = F.make_atomic(rng.uniform(-10, 10, 50), rng.uniform(0, 1, 50))
    for R in (0.5, 2.0, 7.3):
        exact = sup_window_mass(nu, R)
        assert exact >= brute_force_sup(nu, R, 0.01) - 1e-12


def test_sup_mixture():
    mixed = F.FiniteSum((F.lebesgue_on(0.0, 1.0), F.dirac(1.0)))
    # window ending just past the point mass catches mass 1 of density plus 1
    assert sup_window_mass(mixed, 1.0) == pytest.approx(2.0)


def test_scan_sup_monotone_in_radius(dual_weights_by_lambda):
    nu = dual_weights_by_lambda(4096)
    radii = default_radii(4, 24)
    sups = [sup_window_mass(nu, float(R)) for R in radii]
    assert all(b >= a - 1e-12 for a, b in zip(sups, sups[1:]))


# ---------------------------------------------------------------------------
# upper density scans


def test_upper_density_counting_alpha_one():
    nu = F.integer_lattice(-10**4, 10**4)
    scan = upper_density(nu, 1.0, default_radii())
    assert abs(scan.estimate - 1.0) <= 0.01


def test_upper_density_counting_alpha_two_vanishes():
    nu = F.integer_lattice(-10**4, 10**4)
    scan = upper_density(nu, 2.0, default_radii())
    assert scan.estimate < 0.01
    assert scan.ratios[-1] < scan.ratios[0]


def test_upper_density_counting_alpha_half_grows():
    nu = F.integer_lattice(-10**4, 10**4)
    scan = upper_density(nu, 0.5, default_radii())
    assert scan.ratios[-1] > 5.0 * scan.ratios[0]


def test_upper_density_usage_errors():
    nu = F.integer_lattice(0, 10)
    with pytest.raises(UsageError):
        upper_density(nu, 1.0, [1.0, 2.0, 3.0])
    with pytest.raises(UsageError):
        upper_density(nu, 1.0, [3.0, 2.0, 4.0, 5.0])


# ---------------------------------------------------------------------------
# lower density


def test_lower_density_counting_oracle():
    nu = F.integer_lattice(-10**4, 10**4)
    radii = [2.0 ** (k / 2.0) for k in range(8, 21)]
    val = lower_density(nu, radii, (-5000.0, 5000.0))
    # integer-count oracle: a half-open window of length R holds at least
    # floor(R) integers, so the minimum ratio on the grid is floor(R)/R
    oracle = min(math.floor(R) / R for R in radii)
    assert val == pytest.approx(oracle, abs=1e-9)
    assert abs(val - 1.0) <= 0.05


def test_lower_density_of_singular_weighted_lattice(dual_weights_by_lambda):
    nu = dual_weights_by_lambda(10**4)
    radii = [2.0 ** (k / 2.0) for k in range(8, 21)]
    val = lower_density(nu, radii, (-5000.0, 5000.0))
    assert val < 0.05


def test_lower_density_gap_gives_zero():
    nu = F.make_atomic([0.0, 100.0], [1.0, 1.0])
    assert lower_density(nu, [10.0], (0.0, 100.0)) == 0.0


def test_lower_density_hull_guard():
    nu = F.integer_lattice(0, 10)
    with pytest.raises(UsageError):
        lower_density(nu, [100.0], (0.0, 10.0))


# ---------------------------------------------------------------------------
# dimension


def test_dimension_counting_measure():
    est = dimension(F.integer_lattice(-10**4, 10**4))
    assert abs(est.slope - 1.0) <= 0.05
    # bracket and fit agree within the fit tolerance
    assert est.alpha_lo - 0.05 <= est.slope <= est.alpha_hi + 0.05
    assert not est.degenerate


def test_dimension_weighted_lattice_half(cantor4c):
    lam = 4**7
    nu = F.dual_weights(cantor4c, np.arange(-lam, lam + 1, dtype=float))
    est = dimension(nu)
    assert 0.4 <= est.slope <= 0.6
    assert est.slope <= math.log(2) / math.log(4) + 0.1


def test_dimension_single_atom_degenerate():
    est = dimension(F.dirac(3.0))
    assert est.degenerate
    assert est.slope == 0.0


def test_dimension_usage_guards():
    nu = F.integer_lattice(-100, 100)
    with pytest.raises(UsageError):
        dimension(nu, [1.0 * k for k in range(1, 11)])
    with pytest.raises(UsageError):
        dimension(nu, np.linspace(1.0, 50.0, 20))


def test_dimension_window_shape_robustness(dual_weights_by_lambda):
    # alternative estimator with windows (x - R/2, x + R/2], swept the same
    # way; slopes from both shapes must agree
    nu = dual_weights_by_lambda(4096)
    radii = default_radii(4, 24)

    def centered_sup(R):
        pts = nu.points
        candidates = np.unique(np.concatenate([pts, pts - R, pts + R]))
        vals = [window_mass(nu, float(c) - R / 2.0, R, include_left=False) for c in candidates]
        return max(vals)

    sups_centered = np.array([centered_sup(float(R)) for R in radii])
    i0, i1 = radii.size // 4, (3 * radii.size) // 4 + 1
    slope_centered = np.polyfit(np.log(radii[i0:i1]), np.log(sups_centered[i0:i1]), 1)[0]
    est = dimension(nu, radii)
    assert abs(est.slope - slope_centered) <= 0.05


def test_dimension_ambient_ceiling(cantor4c, dual_weights_by_lambda):
    # no candidate in the catalog can out-grow the ambient dimension 1
    catalog = [
        F.integer_lattice(-10**4, 10**4),
        dual_weights_by_lambda(4096),
        F.dual_weights(F.new_ifs(9, [0, 3]), np.arange(-16384.0, 16385.0)),
    ]
    for nu in catalog:
        assert dimension(nu).slope <= 1.05


def test_dimension_ifs_ceiling(cantor4c):
    # weighted-lattice measures built from a complete digit split respect
    # dim <= log(base branching)/log(scale)
    cases = [
        (cantor4c, F.get_system("cantor4"), 4**6),
        (F.new_ifs(9, [0, 1, 2]), F.new_ifs(9, [0, 3, 6]), 3**9),
    ]
    for comp, base, lam in cases:
        nu = F.dual_weights(comp, np.arange(-lam, lam + 1, dtype=float))
        est = dimension(nu)
        ceiling = math.log(base.branching) / math.log(base.scale)
        assert est.slope <= ceiling + 0.1


def test_dimension_invariance_under_convolution(dual_weights_by_lambda):
    nu = dual_weights_by_lambda(4096)
    base = dimension(nu).slope
    smoothed = F.convolve(nu, F.lebesgue_on(0.0, 1.0))
    assert abs(dimension(smoothed).slope - base) <= 0.1


def test_dimension_invariance_under_discretization(dual_weights_by_lambda):
    nu = dual_weights_by_lambda(4096)
    base = dimension(nu).slope
    for r in (0.5, 1.0, 2.0):
        coarse = F.discretize(nu, r, "left")
        assert abs(dimension(coarse).slope - base) <= 0.1


# ---------------------------------------------------------------------------
# sampling sets


def test_lambda_set_lattice():
    nu = F.integer_lattice(-5, 5)
    pts = lambda_set(nu, 1.0, 0.5)
    assert pts == [float(k) for k in range(-5, 6)]


def test_lambda_set_thin_density_empty():
    assert lambda_set(F.lebesgue_on(0.0, 1.0, 4), 0.25, 0.3) == []


def test_lambda_set_excludes_zero_set(cantor4c):
    nu = F.dual_weights(cantor4c, np.arange(-1000.0, 1001.0))
    pts = set(lambda_set(nu, 1.0, 0.1))
    zero_set = []
    m = 1
    while m <= 1000:
        k = 0
        while m * (4 * k + 2) <= 1000:
            zero_set.append(m * (4 * k + 2))
            k += 1
        m *= 4
    # weight-table oracle: the zero set carries no weight, so no cell there
    # can pass the threshold
    for z in zero_set:
        assert float(z) not in pts
    with pytest.raises(DomainError):
        lambda_set(nu, -1.0, 0.1)
