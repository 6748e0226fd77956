import cmath
import math

import numpy as np
import pytest

from oracles import harmonic_decaying
from pt_spectral.errors import MaxStepsError, PropagationError, SectorError
from pt_spectral.integrator import (BoundaryFrame, RaySpec, match_data, matching_point, origin_data,
                                    propagate_inward, propagate_trace, seed_radius, shoot, wkb_seed,
                                    wronskian_along)
from pt_spectral.potential import PotentialSpec, rotate_frame


def _true(o):
    s = cmath.exp(o.log_scale)
    return o.value * s, o.derivative * s


@pytest.mark.parametrize("lam", [0.0, 1.0, 2.5, 1 + 1j, -2 + 0.5j])
def test_harmonic_origin_values_match_parabolic_cylinder(lam):
    f, df = _true(origin_data(PotentialSpec(2, (0.0,)), lam, 0))
    F, DF = harmonic_decaying(lam, 0)
    scale = abs(F) + abs(DF)
    assert abs(f - F) / scale < 1e-8
    assert abs(df - DF) / scale < 1e-8


def test_origin_value_independent_of_radius():
    spec = PotentialSpec(4, (1.0, -0.5, 0.3))
    vals = [_true(origin_data(spec, 2 - 1j, 0, RaySpec(radius=R))) for R in (6.0, 8.0, 12.0)]
    for f, df in vals[1:]:
        assert abs(f / vals[0][0] - 1) < 1e-7
        assert abs(df / vals[0][1] - 1) < 1e-7


def test_auto_radius_meets_decay_target():
    spec = PotentialSpec(3, (0.5, -1.0))
    R = seed_radius(spec, 3.0)
    from pt_spectral.potential import F_eval
    assert F_eval(R, spec, 3.0).real >= 25.0
    assert seed_radius(spec, 3.0, RaySpec(radius=9.0)) == 9.0


def test_leading_order_seed_close_to_full_seed():
    spec = PotentialSpec(3, (0.0, 0.0))
    errs, offs = [], []
    for z0 in (8.0, 16.0):
        full = wkb_seed(spec, 1.0, z0)
        lead = wkb_seed(spec, 1.0, z0, order=0)
        errs.append(abs(lead.log_derivative() / full.log_derivative() - 1))
        offs.append(abs(lead.log_scale - full.log_scale))
    # log-derivative error is O(z^{-5/2}); the normalization offset is the first
    # omitted exponent term, O(z^{-1/2})
    assert errs[1] / errs[0] == pytest.approx(2 ** -2.5, rel=0.15)
    assert offs[1] / offs[0] == pytest.approx(2 ** -0.5, rel=0.1)


def test_leading_order_seed_converges_at_large_radius():
    spec = PotentialSpec(3, (0.0, 0.0))
    ref = _true(origin_data(spec, 1.0, 0))
    errs = []
    for R in (8.0, 16.0, 32.0):
        fr = wkb_seed(spec, 1.0, R, order=0)
        out = _true(propagate_inward(fr, spec, 1.0, RaySpec()))
        errs.append(abs(out[1] / out[0] - ref[1] / ref[0]))
    # the shape of the solution converges quickly even though its scale does not
    assert errs[2] < errs[1] < errs[0]
    assert errs[2] < 1e-4


def test_sector_and_ray_validation():
    spec = PotentialSpec(3)
    with pytest.raises(SectorError):
        wkb_seed(spec, 0.0, cmath.exp(1j * 3 * math.pi / 5 + 0.01j) * 5)
    with pytest.raises(SectorError):
        RaySpec(angle=4.0)
    with pytest.raises(ValueError):
        RaySpec(radius=-1.0)
    with pytest.raises(ValueError):
        RaySpec(rel_tol=0.0)


def test_step_limit_reported_with_sector_index():
    spec = PotentialSpec(3)
    with pytest.raises(MaxStepsError) as info:
        origin_data(spec, 0.0, 1, RaySpec(max_steps=5))
    assert info.value.k == 1
    assert isinstance(info.value, PropagationError)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_wronskian_constant_along_ray(m):
    rng = np.random.default_rng(m)
    spec = PotentialSpec(m, rng.uniform(-2, 2, m - 1))
    for lam in (-30.0, -30 + 2j, -10.0):
        frames = [BoundaryFrame(1, 0, 0, 2.0), BoundaryFrame(0, 1, 0, 2.0)]
        W = wronskian_along(propagate_trace(frames, spec, lam, RaySpec()))
        assert len(W) > 10
        assert np.abs(W - 1).max() < 1e-8


def test_rotated_frame_satisfies_same_equation():
    # f_1 reached through its own ray must agree with f_1 carried to a real point
    spec = PotentialSpec(3, (0.4, -0.7))
    lam = 2.0 + 0.3j
    o = origin_data(spec, lam, 1)
    d = match_data(spec, lam, 1, 0.0)
    assert abs(o.value * cmath.exp(o.log_scale - d.log_scale) / d.value - 1) < 1e-8


def test_matching_point_real_and_between_turning_points():
    spec = PotentialSpec(3, (0.0, 0.0))
    x = matching_point(spec, 125.0)
    assert x == pytest.approx(2.5)
    assert matching_point(PotentialSpec(2, (1.0,)), 50.0) == 0.0


def test_shoot_returns_radius_and_steps():
    v, w, L, R, n = shoot(rotate_frame(PotentialSpec(3), 1), 1.0)
    assert R > 1 and n > 10
    assert math.isfinite(abs(v)) and math.isfinite(L.real)
