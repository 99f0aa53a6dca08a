import math

import pytest
from hypothesis import given, settings, strategies as st

from mzifisher.errors import DomainError
from mzifisher.moments import (
    Coherent,
    ComplexAmplitude,
    SqueezeParam,
    SqueezedCoherent,
    SqueezedVacuum,
    Vacuum,
    coherent,
    moments_of,
    normalize_phase,
    squeezed_coherent,
    squeezed_vacuum,
    upsilon,
    upsilon_minus,
    upsilon_plus,
    vacuum,
)
from mzifisher.oracle import adequate_nmax, build_state, numeric_moments

FIELDS = ("mean_a", "mean_a2", "mean_n", "var_n", "cov_na")

mags = st.floats(0.0, 2.0)
factors = st.floats(0.0, 1.0)
phases = st.floats(0.0, 2 * math.pi)


def close(a, b, rel):
    return abs(a - b) <= rel * max(abs(b), 1.0)


def test_phase_normalization():
    assert normalize_phase(-0.5) == pytest.approx(2 * math.pi - 0.5)
    assert normalize_phase(2 * math.pi) == 0.0
    assert normalize_phase(-1e-20) == 0.0
    assert ComplexAmplitude(1.0, 7.0).phase == pytest.approx(7.0 - 2 * math.pi)


def test_negative_inputs_rejected():
    with pytest.raises(DomainError):
        ComplexAmplitude(-1.0, 0.0)
    with pytest.raises(DomainError):
        SqueezeParam(-0.1, 0.0)
    with pytest.raises(DomainError):
        ComplexAmplitude(float("nan"), 0.0)


def test_zero_amplitudes_collapse_to_vacuum():
    assert isinstance(coherent(0.0, 1.0), Vacuum)
    assert isinstance(squeezed_vacuum(0.0, 1.0), Vacuum)
    assert isinstance(squeezed_coherent(0.0, 0.0, 0.3, 0.0), SqueezedVacuum)
    assert isinstance(squeezed_coherent(1.0, 0.0, 0.0, 0.0), Coherent)
    assert isinstance(squeezed_coherent(1.0, 0.0, 0.3, 0.0), SqueezedCoherent)


def test_vacuum_moments_vanish():
    m = moments_of(vacuum())
    assert all(getattr(m, f) == 0 for f in FIELDS)


def test_coherent_moments():
    m = moments_of(coherent(10.0, 0.0))
    assert m.mean_a == pytest.approx(10.0)
    assert m.mean_n == pytest.approx(100.0)
    assert m.var_n == pytest.approx(100.0)
    assert abs(m.cov_na) < 1e-12


def test_squeezed_vacuum_moments():
    m = moments_of(squeezed_vacuum(1.2, 0.0))
    assert m.mean_n == pytest.approx(math.sinh(1.2) ** 2, rel=1e-14)
    assert m.var_n == pytest.approx(math.sinh(2.4) ** 2 / 2, rel=1e-14)
    assert m.mean_a == 0
    assert m.mean_a2 == pytest.approx(-math.sinh(1.2) * math.cosh(1.2), rel=1e-14)
    # rounded reference values
    assert m.mean_n == pytest.approx(2.278472, abs=1e-4)
    assert m.var_n == pytest.approx(14.939831, abs=1e-6)
    assert m.mean_a2.real == pytest.approx(-2.733157, abs=1e-4)


def test_squeezed_vacuum_matches_fock_space():
    port = squeezed_vacuum(1.2, 0.0)
    nm = numeric_moments(build_state(port, adequate_nmax(port)))
    am = moments_of(port)
    for f in FIELDS:
        assert close(getattr(nm, f), getattr(am, f), 1e-8), f


def test_upsilon_examples():
    g = ComplexAmplitude(10.0, 0.0)
    assert upsilon(g, SqueezeParam(1.2, 0.0), +1) == pytest.approx(100 * math.exp(2.4))
    assert upsilon(g, SqueezeParam(1.2, math.pi), +1) == pytest.approx(100 * math.exp(-2.4))
    assert upsilon_plus(g, SqueezeParam(0.0, 1.0)) == pytest.approx(100.0)
    assert upsilon_minus(g, SqueezeParam(0.0, 1.0)) == pytest.approx(100.0)


@given(mags, phases, factors, phases)
def test_upsilon_product_bound(m, p, s, q):
    g, chi = ComplexAmplitude(m, p), SqueezeParam(s, q)
    prod = upsilon_plus(g, chi) * upsilon_minus(g, chi)
    assert prod >= m ** 4 * (1 - 1e-12) - 1e-12
    if abs(math.sin(2 * p - q)) < 1e-9:
        assert prod == pytest.approx(m ** 4, rel=1e-8, abs=1e-12)


@given(mags, phases)
def test_unsqueezed_ports_are_poissonian(m, p):
    mm = moments_of(coherent(m, p))
    assert mm.var_n == pytest.approx(abs(mm.mean_a) ** 2, rel=1e-12, abs=1e-12)
    assert abs(mm.cov_na) < 1e-12
    assert abs(mm.mean_a2 - mm.mean_a ** 2) < 1e-12 * max(1.0, m * m)


@given(mags, phases, factors, phases)
def test_moment_invariants(m, p, s, q):
    mm = moments_of(squeezed_coherent(m, p, s, q))
    assert mm.var_n >= 0
    assert mm.thermal_excess >= -1e-12
    a = ComplexAmplitude(m, p)
    assert mm.var_n == pytest.approx(
        upsilon_minus(a, SqueezeParam(s, q)) + math.sinh(2 * s) ** 2 / 2, rel=1e-12, abs=1e-12
    )


@settings(max_examples=100, deadline=None)
@given(mags, phases, factors, phases)
def test_moments_agree_with_fock_space(m, p, s, q):
    port = squeezed_coherent(m, p, s, q)
    nm = numeric_moments(build_state(port, adequate_nmax(port)))
    am = moments_of(port)
    for f in FIELDS:
        assert close(getattr(nm, f), getattr(am, f), 1e-6), f


def test_squeezed_coherent_covariance_form():
    port = squeezed_coherent(1.0, 0.0, 0.6, 0.0)
    nm = numeric_moments(build_state(port, 60))
    expected = math.sinh(0.6) ** 2 - math.sinh(0.6) * math.cosh(0.6)
    assert abs(nm.cov_na - expected) < 1e-8
