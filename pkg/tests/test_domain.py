import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stripembed.domain import StripDomain, embedding_norm, lambda_closed_form
from stripembed.errors import DomainError
from stripembed.ptrig import pi_p_closed_form

PI_INTERVAL = ((0.0, math.pi),)

widths = st.floats(0.1, 20.0)
ps = st.floats(1.1, 8.0)


def test_headline_constant():
    c = embedding_norm(2, StripDomain(1, PI_INTERVAL))
    assert c.lambda_ == pytest.approx(1.0, abs=1e-15)
    assert abs(c.norm - 1 / math.sqrt(2)) <= 1e-14


@pytest.mark.parametrize("k", [0, 1, 2])
def test_norm_independent_of_free_axes(k):
    assert embedding_norm(2, StripDomain(k, PI_INTERVAL)).norm == pytest.approx(2 ** -0.5, abs=1e-15)


def test_known_lambdas():
    assert lambda_closed_form(2, StripDomain(0, ((0, 1), (0, 1)))) == pytest.approx(2 * math.pi ** 2, rel=1e-15)
    assert lambda_closed_form(3, StripDomain(0, ((0, 1),))) == pytest.approx(
        2 * pi_p_closed_form(3) ** 3, rel=1e-15)
    assert lambda_closed_form(3, StripDomain(0, ((0, 1),))) == pytest.approx(28.289, abs=1e-3)


def test_p15_regression(oracles):
    c = embedding_norm(1.5, StripDomain(1, ((0, 2),)), verify=True)
    assert c.norm == pytest.approx(oracles["norm_p1.5_k1_0_2"], rel=1e-14)


def test_domain_validation():
    for bad in [(-1, PI_INTERVAL), (1.5, PI_INTERVAL), (1, ((1, 0),)), (1, ())]:
        with pytest.raises(DomainError):
            StripDomain(*bad)
    d = StripDomain(2, ((0, 1), (2, 5)))
    assert d.n == 4 and d.widths == (1.0, 3.0)
    assert d.truncated(3).intervals == ((-3.0, 3.0), (-3.0, 3.0), (0.0, 1.0), (2.0, 5.0))
    with pytest.raises(DomainError):
        d.truncated(0)


@given(ps, st.lists(widths, min_size=1, max_size=3), st.floats(0.1, 10.0))
def test_scaling_law(p, ws, c):
    d = StripDomain(1, tuple((0.0, w) for w in ws))
    dc = StripDomain(1, tuple((0.0, c * w) for w in ws))
    assert lambda_closed_form(p, dc) == pytest.approx(c ** -p * lambda_closed_form(p, d), rel=1e-12)


@given(ps, st.lists(widths, min_size=1, max_size=2), st.lists(widths, min_size=1, max_size=2))
def test_additivity(p, w1, w2):
    iv1 = tuple((0.0, w) for w in w1)
    iv2 = tuple((1.0, 1.0 + w) for w in w2)
    lam = lambda iv: lambda_closed_form(p, StripDomain(0, iv))  # noqa: E731
    assert lam(iv1 + iv2) == pytest.approx(lam(iv1) + lam(iv2), rel=1e-14)


@given(ps, widths, st.floats(0.01, 5.0), st.integers(0, 3))
def test_monotone_in_width(p, w, dw, k):
    small = embedding_norm(p, StripDomain(k, ((0.0, w), (0.0, 1.0))))
    large = embedding_norm(p, StripDomain(k, ((0.0, w + dw), (0.0, 1.0))))
    assert large.lambda_ < small.lambda_
    assert large.norm > small.norm
    assert 0 < small.norm < 1


@given(widths)
def test_classical_p2(L):
    assert lambda_closed_form(2, StripDomain(1, ((0.0, L),))) == pytest.approx((math.pi / L) ** 2, rel=1e-14)
