import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from relaysec import DomainError
from relaysec.distributions import hypoexp_coeffs, max_pdf_terms

rates = st.floats(0.01, 100)


def test_hypoexp_example():
    c = hypoexp_coeffs(1.0, 2.0)
    assert (c.b1, c.b2) == (2.0, -2.0)


@given(rates, rates)
def test_hypoexp_identities(l1, l2):
    c = hypoexp_coeffs(l1, l2)
    assert c.b1 / c.lambda1 + c.b2 / c.lambda2 == pytest.approx(1.0, rel=1e-6)
    assert c.b1 + c.b2 == pytest.approx(0.0, abs=1e-6 * abs(c.b1))


def test_hypoexp_normalised_by_quadrature():
    c = hypoexp_coeffs(0.7, 2.3)
    total, _ = integrate.quad(c.pdf, 0, np.inf, epsabs=1e-13)
    assert total == pytest.approx(1.0, abs=1e-10)


def test_hypoexp_matches_convolution():
    l1, l2 = 0.5, 1.7
    c = hypoexp_coeffs(l1, l2)
    for x in (0.1, 1.0, 4.0):
        conv, _ = integrate.quad(lambda u: l1 * np.exp(-l1 * u) * l2 * np.exp(-l2 * (x - u)), 0, x)
        assert c.pdf(x) == pytest.approx(conv, rel=1e-10)


def test_equal_rates_approximate_erlang():
    c = hypoexp_coeffs(1.0, 1.0)
    t = np.linspace(0, 10, 201)
    np.testing.assert_allclose(c.pdf(t), t * np.exp(-t), atol=1e-5)


def test_hypoexp_rejects_nonpositive():
    with pytest.raises(DomainError):
        hypoexp_coeffs(0.0, 1.0)


def test_single_weight_is_exponential():
    m = max_pdf_terms([2.5])
    assert m.terms == ((1, 2.5, 1),)
    y = np.array([0.0, 0.3, 2.0])
    np.testing.assert_allclose(m.pdf(y), 2.5 * np.exp(-2.5 * y))


def test_two_weight_cdf():
    m = max_pdf_terms([1.0, 2.0])
    y = np.linspace(0, 5, 11)
    np.testing.assert_allclose(m.cdf(y), (1 - np.exp(-y)) * (1 - np.exp(-2 * y)), atol=1e-15)


def test_three_weight_pdf_integrates_to_one():
    m = max_pdf_terms([1.0, 2.0, 3.0])
    total, _ = integrate.quad(lambda y: m.pdf(y), 0, np.inf, epsabs=1e-13)
    assert total == pytest.approx(1.0, abs=1e-10)


@given(st.lists(st.floats(0.05, 20), min_size=1, max_size=6))
def test_term_count_and_product_cdf(weights):
    m = max_pdf_terms(weights)
    assert len(m.terms) == 2 ** len(weights) - 1
    y = np.linspace(0, 10 / min(weights), 20)
    expected = np.prod([1 - np.exp(-w * y) for w in weights], axis=0)
    np.testing.assert_allclose(m.cdf(y), expected, atol=1e-10)


def test_empty_weights_marker():
    m = max_pdf_terms([])
    assert m.point_mass_at_zero and m.terms == ()
    assert m.cdf(0.0) == 1.0
    with pytest.raises(DomainError):
        m.pdf(1.0)
