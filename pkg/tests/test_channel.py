import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relaysec import DomainError, LinkParams, SecrecyConfig, TrialSnapshot
from relaysec.channel import db_to_mean, rho_from_rate, secrecy_rate


@pytest.mark.parametrize("db, expected", [(0, 1.0), (3, 10**0.3), (20, 100.0)])
def test_db_to_mean(db, expected):
    assert db_to_mean(db) == pytest.approx(expected, rel=1e-15)


def test_db_to_mean_three_db_value():
    assert db_to_mean(3) == pytest.approx(1.9953, abs=5e-5)


@given(st.floats(min_value=1e-30, max_value=1e30))
def test_db_round_trip(x):
    assert db_to_mean(10 * math.log10(x)) == pytest.approx(x, rel=1e-12)


@pytest.mark.parametrize("rate, rho", [(1, 4.0), (0, 1.0), (2, 16.0)])
def test_rho_from_rate(rate, rho):
    assert rho_from_rate(rate) == rho


def test_rho_rejects_negative_rate():
    with pytest.raises(DomainError):
        rho_from_rate(-0.1)


@given(st.floats(0, 20), st.floats(0, 20))
def test_rho_strictly_increasing(a, b):
    if a + 1e-9 < b:
        assert rho_from_rate(a) < rho_from_rate(b)
    if a <= b:
        assert rho_from_rate(a) <= rho_from_rate(b)


@pytest.mark.parametrize("gm, ge, expected", [(5, 5, 0.0), (3, 0, 1.0), (0, 10, 0.0)])
def test_secrecy_rate_examples(gm, ge, expected):
    assert secrecy_rate(gm, ge) == expected


def test_secrecy_rate_accepts_snapshot():
    snap = TrialSnapshot(1.0, 0.0, (), (), (), 3.0, 0.0)
    assert secrecy_rate(snap) == 1.0


snr = st.floats(0, 1e6)


@given(snr, snr, snr)
def test_secrecy_rate_monotone(gm, ge, d):
    assert secrecy_rate(gm, ge) >= 0
    assert secrecy_rate(gm + d, ge) >= secrecy_rate(gm, ge)
    assert secrecy_rate(gm, ge + d) <= secrecy_rate(gm, ge)


def test_secrecy_rate_vectorised():
    r = secrecy_rate(np.array([3.0, 0.0]), np.array([0.0, 10.0]))
    np.testing.assert_array_equal(r, [1.0, 0.0])


def test_link_params_validation():
    with pytest.raises(DomainError):
        LinkParams(0.0, 1.0)
    with pytest.raises(DomainError):
        LinkParams(1.0, math.inf)
    with pytest.raises(DomainError):
        LinkParams(1.0, 1.0, (1.0,), (1.0, 2.0), (1.0,))
    assert LinkParams(1.0, 1.0).n_relays == 0


def test_link_params_from_db_uses_reciprocal_means():
    links = LinkParams.from_db(3, 2, [10], [20], [0])
    assert links.beta_sd == pytest.approx(1 / 10**0.3)
    assert links.beta_kd == (pytest.approx(0.01),)
    assert links.alpha_ke == (1.0,)


def test_secrecy_config():
    cfg = SecrecyConfig(1.5, 2.0)
    assert cfg.rho == 2.0 ** 3
    assert SecrecyConfig.from_db(1, 3).gamma_th == pytest.approx(10**0.3)
    with pytest.raises(DomainError):
        SecrecyConfig(1.0, -1.0)
