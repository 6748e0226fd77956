import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pt_spectral.criteria import (ABOVE, BOUNDARY, NOT_APPLICABLE, PROVED_POSITIVE_REAL,
                                  PROVED_REAL_GIVEN_REAL, STRICTLY_BELOW, UNKNOWN,
                                  check_exactly_solvable, check_extensions, check_main,
                                  cubic_to_spec, ground_state_log_derivative, hypothesis_report,
                                  qes_quartic)
from pt_spectral.errors import InvalidSpecError
from pt_spectral.potential import PotentialSpec
from pt_spectral.spectral import find_eigenvalues


@pytest.mark.parametrize("beta", [-2.0, 0.0, 3.5])
@pytest.mark.parametrize("gamma", [0.0, 1.0, 4.0])
def test_cubic_family_witness(beta, gamma):
    assert check_main(PotentialSpec(3, (beta, -gamma))) == 1


def test_main_examples():
    assert check_main(PotentialSpec(4, (0.0, -1.0, 0.0))) == 1
    assert check_main(PotentialSpec(4, (0.0, 0.0, 0.0))) == 1
    assert check_main(PotentialSpec(5, (1.0, 1.0, -1.0, -1.0))) == 2
    assert check_main(PotentialSpec(3, (1.0, -2.0))) == 1
    # (1 - 2) a_2 < 0 for a_2 > 0, and j = 2 exceeds m/2
    assert check_main(PotentialSpec(3, (0.0, 1.0))) is None


def test_even_m_allows_j_equal_half_m():
    # k = 1 needs j >= 1 with a_1 > 0; k = 3 needs j <= 3 for a_3 < 0; j = 2 = m/2 works
    spec = PotentialSpec(4, (1.0, 1.0, -1.0))
    assert check_main(spec) == 2


def _independent_witness_check(a, j):
    for k in range(1, len(a) + 1):
        if (j - k) * a[k - 1] < 0:
            return False
    return True


coeff = st.floats(-3, 3, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(m=st.integers(2, 8), data=st.data())
def test_witness_reverification_and_minimality(m, data):
    a = data.draw(st.lists(coeff, min_size=m - 1, max_size=m - 1))
    j = check_main(PotentialSpec(m, a))
    if j is None:
        assert not any(_independent_witness_check(a, i) for i in range(1, m // 2 + 1))
    else:
        assert 1 <= j <= m / 2
        assert _independent_witness_check(a, j)
        assert not any(_independent_witness_check(a, i) for i in range(1, j))


@settings(max_examples=200, deadline=None)
@given(m=st.integers(2, 8), data=st.data())
def test_monotone_under_shrinking(m, data):
    a = data.draw(st.lists(coeff, min_size=m - 1, max_size=m - 1))
    t = data.draw(st.lists(st.floats(0, 1), min_size=m - 1, max_size=m - 1))
    j = check_main(PotentialSpec(m, a))
    if j is not None:
        shrunk = [x * s for x, s in zip(a, t)]
        j2 = check_main(PotentialSpec(m, shrunk))
        assert j2 is not None and j2 <= j


def test_negative_alpha_bounds():
    r = check_extensions(4, -1.0, 0.0, -1.0)
    assert r.regime == "negative-alpha"
    assert r.reality_bound == pytest.approx(math.sqrt(2.0))
    t = math.tan(math.pi / 5) ** 2
    assert r.positivity_bound == pytest.approx(4 * math.sqrt(2) * math.sqrt(1 - t) / (3 - t))
    for m in range(4, 12):
        # the reality condition implies the positivity-given-real one
        r = check_extensions(m, -2.0, 0.0, -0.5)
        assert r.reality_bound < r.positivity_bound


def test_extension_verdict_bands():
    rb = math.sqrt(2.0)
    assert check_extensions(4, -1.0, rb - 1e-9, -1.0).verdict == PROVED_POSITIVE_REAL
    pb = check_extensions(4, -1.0, 0.0, -1.0).positivity_bound
    assert check_extensions(4, -1.0, 0.5 * (rb + pb), -1.0).verdict == PROVED_REAL_GIVEN_REAL
    assert check_extensions(4, -1.0, pb + 1.0, -1.0).verdict == UNKNOWN
    assert check_extensions(4, 1.0, 0.0, 1.0).regime == NOT_APPLICABLE
    assert check_extensions(7, 1.0, 0.0, -1.0).regime == NOT_APPLICABLE


def test_positive_alpha_bounds():
    r5 = check_extensions(5, 1.0, 0.0, -1.0)
    assert r5.reality_bound == pytest.approx(math.sqrt(math.tan(math.radians(72)) ** 2 - 3))
    assert r5.positivity_bound == math.inf
    r4 = check_extensions(4, 2.0, 100.0, -3.0)
    assert r4.reality_bound == math.inf and r4.verdict == PROVED_POSITIVE_REAL
    r6 = check_extensions(6, 1.0, 0.0, -1.0)
    assert r6.reality_bound == 0.0
    assert r6.verdict == PROVED_POSITIVE_REAL
    assert check_extensions(6, 1.0, 1e-3, -1.0).verdict == PROVED_REAL_GIVEN_REAL
    assert 0 < r6.positivity_bound < math.inf


def test_exactly_solvable_verdicts():
    r = check_exactly_solvable(4, 2.0)
    assert r.verdict == BOUNDARY and r.ground_state == 0.0
    assert "exp" in r.ground_state_function
    assert check_exactly_solvable(6, 2.9).verdict == STRICTLY_BELOW
    assert check_exactly_solvable(6, 3.5).verdict == ABOVE
    assert check_exactly_solvable(5, 1.0).verdict == NOT_APPLICABLE
    assert check_exactly_solvable(2, 0.5).verdict == NOT_APPLICABLE


def test_ground_state_log_derivative_solves_riccati():
    # y = v0'/v0 satisfies y' + y^2 = z^m + alpha z^{m/2 - 1} with alpha = m/2 and lam = 0
    for m in (4, 6, 8):
        z, h = 1.3 + 0.2j, 1e-6
        y = ground_state_log_derivative(m, z)
        dy = (ground_state_log_derivative(m, z + h) - ground_state_log_derivative(m, z - h)) / (2 * h)
        assert abs(dy + y * y - (z ** m + m / 2 * z ** (m / 2 - 1))) < 1e-7


def test_qes_examples():
    r = qes_quartic(0.0, 0.0, 0.0)
    assert r.spec.a == (0.0, 0.0, 0.0) and r.witness == 1
    r = qes_quartic(1.0, 2.0, 1.0)
    assert r.spec.a == (2.0, -3.0, -2.0)
    assert r.verdict == PROVED_POSITIVE_REAL
    assert qes_quartic(0.0, 1.0, 1.0).verdict == UNKNOWN
    # J may be any real number
    assert qes_quartic(1.0, 1.0, -0.5).verdict == PROVED_POSITIVE_REAL


def test_cubic_bridge():
    spec, factor = cubic_to_spec(1.0, 0.5, -2.0)
    assert spec.a == (0.5, 2.0) and factor == 1.0
    spec, factor = cubic_to_spec(32.0, 1.0, 1.0)
    c = 0.5
    assert spec.a == pytest.approx((c ** 4, -(c ** 3)))
    assert factor == pytest.approx(4.0)
    with pytest.raises(InvalidSpecError):
        cubic_to_spec(0.0, 1.0, 1.0)


def test_cubic_bridge_scales_spectrum():
    # -u'' + 8 i z^3 u: z = x / 8^{1/5} maps it to the unit cubic with E = 8^{2/5} lam
    spec, factor = cubic_to_spec(8.0, 0.0, 0.0)
    lam0 = find_eigenvalues(PotentialSpec(3), 1)[0].lam.real
    lam = find_eigenvalues(spec, 1)[0].lam.real
    assert lam * factor == pytest.approx(8.0 ** 0.4 * lam0, rel=1e-9)


def test_hypothesis_report_fields():
    rep = hypothesis_report(PotentialSpec(3, (1.0, -2.0)))
    assert rep.main_witness == 1 and rep.overall == PROVED_POSITIVE_REAL and rep.exit_code == 0
    rep = hypothesis_report(PotentialSpec(3, (-1.0, 2.0)))
    assert rep.overall == UNKNOWN and rep.exit_code == 20
    rep = hypothesis_report(PotentialSpec(4, (-1.0, 1.5, -1.0)))
    assert rep.main_witness is None
    assert rep.extension_reality_bound == pytest.approx(math.sqrt(2.0))
    assert rep.overall == PROVED_REAL_GIVEN_REAL and rep.exit_code == 10
    rep = hypothesis_report(PotentialSpec(4, (0.0, 0.0, 2.0)))
    assert rep.exactly_solvable == BOUNDARY and rep.overall == UNKNOWN
    rep = hypothesis_report(PotentialSpec(6, (0.0, 0.0, 0.0, 2.9, 0.0)))
    assert rep.exactly_solvable == STRICTLY_BELOW and rep.overall == PROVED_POSITIVE_REAL
    rep = hypothesis_report(PotentialSpec(5, (0.0, 1.0, 0.5, -1.0)))
    assert rep.small_m_bounds is not None and rep.overall == PROVED_POSITIVE_REAL


def soundness_corpus(seed=7, uniform=24, constructed=8):
    """Uniform coefficients in [-3, 3] plus specs built to satisfy a random witness."""
    rng = np.random.default_rng(seed)
    specs = []
    for _ in range(uniform):
        m = int(rng.integers(2, 7))
        specs.append(PotentialSpec(m, tuple(rng.uniform(-3, 3, m - 1))))
    for _ in range(constructed):
        m = int(rng.integers(3, 7))
        j = int(rng.integers(1, m // 2 + 1))
        mag = rng.uniform(0, 3, m - 1)
        specs.append(PotentialSpec(m, tuple(float(np.sign(j - k) * x) for k, x in enumerate(mag, 1))))
    return specs


def test_verdicts_sound_against_solver():
    checked = 0
    for spec in soundness_corpus():
        if hypothesis_report(spec).overall != PROVED_POSITIVE_REAL:
            continue
        eigs = find_eigenvalues(spec, 6)
        assert eigs.complete, spec
        assert all(e.is_real and e.lam.real > 0 for e in eigs), (spec, eigs.values)
        checked += 1
    assert checked >= 8
