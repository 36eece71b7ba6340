import math
import warnings

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from klgamma.bessel import (
    bessel_i,
    bessel_i_scaled,
    bessel_k,
    bessel_k_scaled,
    bessel_k_via_connection,
    kiv_array,
)
from klgamma.errors import (
    AccuracyWarning,
    BesselOverflowError,
    ConnectionDegenerateError,
    DomainError,
    EnvelopeError,
)

from conftest import rel

K0_1 = 0.42102443824070833
K_HALF_1 = 0.46106850444789470  # sqrt(pi/2) / e


def test_i_small_argument():
    assert rel(bessel_i(0, 1e-12), 1.0) <= 1e-15


def test_i_half():
    assert rel(bessel_i(0.5, 1.0), math.sqrt(2 / math.pi) * math.sinh(1.0)) <= 1e-14
    assert rel(bessel_i(0.5, 1.0), 0.93767488824548765) <= 1e-14


def test_k_values():
    assert rel(bessel_k(0.5, 1.0), K_HALF_1) <= 1e-14
    assert rel(bessel_k(0, 1.0), K0_1) <= 1e-14
    assert rel(bessel_k(0.3, 2.0), 0.11603697434811926) <= 1e-13


def test_k_imaginary_order():
    v = bessel_k(2j, 1.0)
    assert abs(v.imag) <= 1e-12 * abs(v)
    assert rel(v.real, 0.080616997622365979) <= 1e-12
    assert abs(v) <= K0_1


def test_connection_examples():
    assert rel(bessel_k_via_connection(0.5, 1.0), K_HALF_1) <= 1e-10
    assert rel(bessel_k_via_connection(0.3, 2.0), bessel_k(0.3, 2.0)) <= 1e-9
    with pytest.raises(ConnectionDegenerateError):
        bessel_k_via_connection(1.0, 1.0)


@pytest.mark.parametrize(
    "w,x",
    [(complex(1.3, 0.7), 0.2), (complex(-2.4, 3.0), 5.0), (complex(0.5, -1.0), 35.0), (complex(4.0, 2.0), 80.0), (17.25, 3.0)],
)
def test_complex_order_oracle(w, x):
    assert rel(bessel_k(w, x), complex(mp.besselk(w, x))) <= 1e-12
    assert rel(bessel_i(w, x), complex(mp.besseli(w, x))) <= 1e-12


@pytest.mark.parametrize("nu,x", [(0.1, 0.05), (3.0, 1.0), (25.0, 2.0), (60.0, 30.0), (150.0, 0.5), (7.5, 150.0)])
def test_kiv_oracle(nu, x):
    ref = float(mp.besselk(1j * nu, x).real)
    got = float(kiv_array(nu, x))
    # values far below the e^{-pi nu/2} scale are only relative-to-scale accurate
    assert abs(got - ref) <= 1e-11 * max(abs(ref), math.exp(-0.5 * math.pi * nu - x))


def test_kiv_array_shapes_and_scaling():
    x = np.array([[0.5, 1.0], [2.0, 4.0]])
    v = kiv_array(1.5, x)
    assert v.shape == x.shape
    sx = kiv_array(1.5, x, scale="x")
    assert np.allclose(sx, v * np.exp(x), rtol=1e-13)
    with pytest.raises(DomainError):
        kiv_array(1.5, x, scale="bogus")


def test_scaled_large_x():
    x = 1e8
    assert rel(bessel_k_scaled(0.5, x), math.sqrt(math.pi / (2 * x))) <= 1e-14
    assert rel(bessel_i_scaled(0.5, x), 1 / math.sqrt(2 * math.pi * x)) <= 1e-12


def test_errors():
    with pytest.raises(DomainError):
        bessel_k(0.5, 0.0)
    with pytest.raises(DomainError):
        bessel_i(0.5, -1.0)
    with pytest.raises(BesselOverflowError):
        bessel_i(0.0, 800.0)
    with pytest.raises(EnvelopeError):
        bessel_k(250.0, 1.0)


def test_small_x_warning():
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        bessel_k(0.5, 1e-8)
    assert any(issubclass(w.category, AccuracyWarning) for w in rec)


# -- properties ------------------------------------------------------------------

orders = st.builds(complex, st.floats(-6, 6), st.floats(-6, 6))
args = st.floats(0.01, 60)


@given(orders, args)
def test_k_even_in_order(w, x):
    assert rel(bessel_k(w, x), bessel_k(-w, x)) <= 1e-11


@given(st.floats(0, 40), st.floats(0.01, 50))
def test_k_imaginary_order_is_real(s, x):
    v = bessel_k(1j * s, x)
    assert abs(v.imag) <= 1e-12 * max(abs(v), 1e-300)


@pytest.mark.parametrize("s", [0.5, 1, 2, 5, 10])
@pytest.mark.parametrize("x", [0.1, 1, 5, 20])
def test_bound_by_k0(s, x):
    assert abs(bessel_k(1j * s, x)) <= bessel_k(0, x).real * (1 + 1e-10)


@pytest.mark.parametrize("s", [0.0, 0.5, 1.0])
def test_large_x_law(s):
    for x in (50.0, 100.0):
        ratio = bessel_k(1j * s, x).real * math.exp(x) * math.sqrt(2 * x / math.pi)
        assert abs(ratio - 1) <= 0.02


@pytest.mark.parametrize("s", [2.0, 5.0])
def test_large_x_law_second_term(s):
    # the first correction -(4 s^2 + 1)/(8x) exceeds 2% at x = 50 here
    for x in (50.0, 100.0, 400.0):
        ratio = bessel_k(1j * s, x).real * math.exp(x) * math.sqrt(2 * x / math.pi)
        c1 = -(4 * s * s + 1) / (8 * x)
        c2 = (4 * s * s + 1) * (4 * s * s + 9) / (128 * x * x)
        assert abs(ratio - 1 - c1) <= 2 * c2


@given(st.floats(-3, 3), st.floats(-1, 1), st.floats(0.1, 10))
def test_connection_consistency(re, im, x):
    w = complex(re, im)
    assume(abs(math.sin(math.pi * re)) > 1e-2 or abs(im) > 1e-2)
    assert rel(bessel_k_via_connection(w, x), bessel_k(w, x)) <= 1e-9


@pytest.mark.parametrize("nu", [complex(-0.3, 0.0), complex(-0.1, 1.0), complex(-0.8, -0.5)])
def test_i_small_x_slope(nu):
    # Re nu < -eps < 0: |I_{-nu}(x)| vanishes like x^{-Re nu}
    x = np.array([1e-4, 1e-2])
    v = np.array([abs(bessel_i(-nu, xi)) for xi in x])
    slope = np.diff(np.log(v))[0] / np.diff(np.log(x))[0]
    eps = -nu.real / 2
    assert slope >= eps
