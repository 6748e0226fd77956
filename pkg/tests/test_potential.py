import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import K_mpmath, taylor_b
from pt_spectral.errors import (BranchCutError, DivergenceError, InvalidSpecError,
                                SeriesCapacityError)
from pt_spectral.potential import (MAX_SERIES_TERMS, PotentialSpec, K_const, F_eval,
                                   asymptotic_eigenvalue, asymptotic_eigenvalue_via_K,
                                   asymptotic_series, expand_b, harmonic_eigenvalues, omega, qpoly,
                                   r_and_nu, rotate_frame)


def test_spec_defaults_and_validation():
    assert PotentialSpec(3).a == (0.0, 0.0)
    with pytest.raises(InvalidSpecError):
        PotentialSpec(1)
    with pytest.raises(InvalidSpecError):
        PotentialSpec(3, (1.0,))
    with pytest.raises(InvalidSpecError):
        PotentialSpec(3, (1.0, math.nan))
    with pytest.raises(InvalidSpecError):
        PotentialSpec(2.5, (0.0,))


def test_P_evaluates_polynomial():
    spec = PotentialSpec(4, (1.0, -2.0, 3.0))
    z = 0.7 - 0.2j
    assert spec.P(z) == pytest.approx(z ** 3 - 2 * z ** 2 + 3 * z)


def test_qpoly_layout():
    q = qpoly(PotentialSpec(3, (2.0, -1.0)), 0.5j)
    assert list(q) == [1, 2, -1, 0.5j]


def test_rotation_composes_and_inverts():
    spec = PotentialSpec(5, (0.3, -1.0, 2.0, 0.1))
    back = rotate_frame(rotate_frame(spec, 1), -1)
    assert np.allclose(back.coeffs, spec.a, atol=1e-15)
    assert back.lambda_factor == pytest.approx(1.0)
    r = rotate_frame(spec, 2)
    w = omega(5)
    assert np.allclose(r.coeffs, [c * w ** (-2 * j) for j, c in enumerate(spec.a, start=1)])
    assert r.lambda_factor == pytest.approx(w ** (-10))


def test_expand_b_known_values():
    s = expand_b(PotentialSpec(3, (2.0, 0.0)), 0.0, 4)
    assert np.allclose(s.b, [1.0, -0.5, 0.5, -0.625])
    assert s[1] == pytest.approx(1.0)
    assert s.r == pytest.approx(-0.75)


def test_r_and_nu_even_m():
    r, nu = r_and_nu(PotentialSpec(2, (0.0,)), 3.0)
    assert nu == pytest.approx(1.5)
    assert r == pytest.approx(-2.0)
    r, nu = r_and_nu(PotentialSpec(5, (1.0, 2.0, 3.0, 4.0)), 7.0)
    assert (r, nu) == (-1.25, 0)


@settings(max_examples=25, deadline=None)
@given(m=st.integers(2, 6), seed=st.integers(0, 10 ** 6))
def test_expand_b_matches_taylor(m, seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(-3, 3, m - 1)
    lam = complex(*rng.uniform(-5, 5, 2))
    ours = expand_b(PotentialSpec(m, a), lam, 8).b
    ref = taylor_b(a, lam, 8)
    assert np.allclose(ours, ref, rtol=1e-12, atol=1e-12)


def test_expand_b_capacity():
    with pytest.raises(SeriesCapacityError):
        expand_b(PotentialSpec(3), 0.0, MAX_SERIES_TERMS + 1)
    with pytest.raises(SeriesCapacityError):
        expand_b(PotentialSpec(3), 0.0, 0)


def test_riccati_series_reproduces_b():
    spec = PotentialSpec(4, (0.5, -1.0, 2.0))
    lam = 1.5 - 0.5j
    c = asymptotic_series(spec, lam, 20)
    b = expand_b(spec, lam, 4).b
    # c_{2j} = -b_j for 2j < m + 2, and c_{m+2} = r_m
    assert np.allclose(c[[2, 4]], -b[:2])
    assert c[6] == pytest.approx(r_and_nu(spec, lam)[0])
    assert np.allclose(c[1::2][:3], 0)


def test_F_eval_and_branch_cut():
    spec = PotentialSpec(3, (0.0, 0.0))
    assert F_eval(4.0, spec) == pytest.approx(0.4 * 4 ** 2.5)
    spec = PotentialSpec(4, (2.0, 0.0, 0.0))
    # b = (1, -1/2) for a_1 = 2, so F = z^3/3 + z^2/2 - z/2
    z = 2.0
    assert F_eval(z, spec) == pytest.approx(z ** 3 / 3 + z ** 2 / 2 - z / 2)
    with pytest.raises(BranchCutError):
        F_eval(-1.0, spec)
    with pytest.raises(BranchCutError):
        F_eval(0.0, spec)


def test_F_derivative_matches_sqrt_expansion():
    # F' = z^{m/2} (1 + sum b_j z^{-j}) up to the terms kept
    spec = PotentialSpec(5, (0.4, -0.3, 0.2, 0.1))
    z = 30.0 * cmath.exp(0.2j)
    h = 1e-5
    dF = (F_eval(z + h, spec, 1.0) - F_eval(z - h, spec, 1.0)) / (2 * h)
    b = expand_b(spec, 1.0, 3).b
    approx = z ** 2.5 * (1 + b[0] / z + b[1] / z ** 2 + b[2] / z ** 3)
    assert abs(dF - approx) / abs(approx) < 1e-6


@pytest.mark.parametrize("m", range(3, 9))
def test_K_gamma_quadrature_and_mpmath(m):
    g = K_const(m, "gamma")
    q = K_const(m, "quadrature")
    assert abs(g - q) / g < 1e-10
    assert abs(g - K_mpmath(m)) / g < 1e-12


def test_K_diverges_for_m2():
    with pytest.raises(DivergenceError):
        K_const(2)
    with pytest.raises(ValueError):
        K_const(3, "simpson")


@pytest.mark.parametrize("m", [3, 4, 5, 6, 8])
def test_asymptotic_forms_agree(m):
    for k in (1, 5, 20):
        assert asymptotic_eigenvalue(m, k) == pytest.approx(asymptotic_eigenvalue_via_K(m, k), rel=1e-12)


def test_asymptotic_eigenvalue_errors():
    with pytest.raises(DivergenceError):
        asymptotic_eigenvalue(2, 1)
    with pytest.raises(ValueError):
        asymptotic_eigenvalue(3, 0)


def test_harmonic_formula():
    assert np.allclose(harmonic_eigenvalues(2.0, 3), [2.0, 4.0, 6.0])
