"""Digit splits, projection, and the reconstruction integral."""

import math

import numpy as np
import pytest

import ifsframes as F
from ifsframes import DomainError
from ifsframes.frames import CylinderFunction, constant_one
from ifsframes.ifs import ft_invariant
from ifsframes.reconstruct import fourier_reconstruct, make_split_system, project_p


def test_split_validation(cantor4, cantor4c):
    split = make_split_system(cantor4, cantor4c)
    assert split.combined.digits == (0, 1, 2, 3)
    assert split.split_map[3] == (2, 1)
    with pytest.raises(DomainError):
        make_split_system(cantor4, cantor4)  # 0+2 = 2+0 collision
    with pytest.raises(DomainError):
        make_split_system(cantor4, F.get_system("lebesgue"))  # scale mismatch


def test_project_digit_split(canonical_split):
    # 0.75 has combined digits (3,0,0,...), and 3 splits into base digit 2
    assert project_p(canonical_split, 0.75) == pytest.approx(0.5, abs=1e-12)
    assert project_p(canonical_split, 0.0) == 0.0
    with pytest.raises(DomainError):
        project_p(canonical_split, 1.2)


def test_project_norm_preservation_monte_carlo(canonical_split, cantor4):
    # uniform samples of [0,1] under the combined system; the projected
    # indicator of the base cylinder (2,) must keep its squared norm 1/2
    rng = np.random.default_rng(3)
    zs = rng.uniform(0.0, 1.0, 10**5)
    lo, hi, _ = F.cylinder_interval(cantor4, (2,))
    vals = np.array([project_p(canonical_split, z, depth=20) for z in zs])
    inside = ((vals >= lo - 1e-9) & (vals <= hi + 1e-9)).astype(float)
    sigma = inside.std() / math.sqrt(inside.size)
    assert abs(inside.mean() - 0.5) <= 3 * sigma


def test_transform_factorization(canonical_split):
    rng = np.random.default_rng(37)
    ts = rng.uniform(-200, 200, 64)
    lhs = ft_invariant(canonical_split.base, ts) * ft_invariant(canonical_split.complement, ts)
    rhs = ft_invariant(canonical_split.combined, ts)
    assert np.max(np.abs(lhs - rhs)) <= 2e-12


def test_combined_transform_is_unit_interval(canonical_split):
    rng = np.random.default_rng(41)
    ts = rng.uniform(-100, 100, 32)
    ts = ts[np.abs(ts) > 1e-3]
    vals = ft_invariant(canonical_split.combined, ts)
    expected = (1.0 - np.exp(-2j * math.pi * ts)) / (2j * math.pi * ts)
    assert np.max(np.abs(vals - expected)) <= 1e-12


def test_reconstruct_constant_function(canonical_split):
    f = constant_one(canonical_split.base)
    for t in (0.5, 1.0 / 3.0):
        res = fourier_reconstruct(canonical_split, f, t, 200.0, 1.0 / 64.0)
        assert abs(res.value - 1.0) <= 0.05
        assert res.richardson_residual < 1e-3


def test_reconstruct_linearity(canonical_split):
    base = canonical_split.base
    f = CylinderFunction(base, 1, np.array([1.0, 0.0], dtype=complex))
    g = CylinderFunction(base, 1, np.array([0.0, 1.0], dtype=complex))
    combo = CylinderFunction(base, 1, np.array([2.0, -0.5j], dtype=complex))
    t, X, h = 0.5, 50.0, 1.0 / 32.0
    vf = fourier_reconstruct(canonical_split, f, t, X, h).value
    vg = fourier_reconstruct(canonical_split, g, t, X, h).value
    vc = fourier_reconstruct(canonical_split, combo, t, X, h).value
    assert abs(vc - (2.0 * vf - 0.5j * vg)) <= 1e-10


def test_reconstruct_cutoff_convergence(canonical_split):
    f = constant_one(canonical_split.base)
    for t in (1.0 / 3.0, 0.5):
        vals = {
            X: fourier_reconstruct(canonical_split, f, t, float(X), 1.0 / 64.0).value
            for X in (50, 100, 200, 400)
        }
        diffs = [
            abs(vals[100] - vals[50]),
            abs(vals[200] - vals[100]),
            abs(vals[400] - vals[200]),
        ]
        assert diffs[0] > diffs[1] > diffs[2]


def test_reconstruct_guards(canonical_split):
    f = constant_one(canonical_split.base)
    with pytest.raises(DomainError):
        fourier_reconstruct(canonical_split, f, 5.0, 50.0, 0.1)  # t outside hull
    with pytest.raises(DomainError):
        fourier_reconstruct(canonical_split, f, 0.5, -1.0, 0.1)
    res = fourier_reconstruct(canonical_split, f, 0.0, 10.0, 0.25)
    assert res.boundary_flagged  # hull endpoint


def test_reconstruct_report_fields(canonical_split):
    f = constant_one(canonical_split.base)
    res = fourier_reconstruct(canonical_split, f, 0.5, 50.0, 0.125)
    d = res.to_dict()
    for key in ("t", "value_re", "value_im", "cutoff", "step", "richardson_residual"):
        assert key in d
