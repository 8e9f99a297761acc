import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mafiasim import ConfigurationError, Overrides, Parameters, StockState
from mafiasim.model import (
    avoidance_probability,
    bandit_appropriations,
    bandit_income,
    banditry_attractiveness,
    derivatives,
    evaluate_auxiliaries,
    indices,
    mafia_control,
    peasant_income,
    potential_bandits,
    protection_market,
    theft_success,
)

BASE = Parameters()
TABLE_BASE = StockState(P=107, B=3, M=0, ihat_P=9.98, ihat_B=0.28)
TABLE_LOW = StockState(P=100, B=10, M=0, ihat_P=1.0, ihat_B=0.1)

frac = st.floats(0, 1)
pos = st.floats(1e-6, 1e4)
nonneg = st.floats(0, 1e4)


def test_parameter_validation():
    with pytest.raises(ConfigurationError):
        Parameters(lambda_A=1.5)
    with pytest.raises(ConfigurationError):
        Parameters(tau=0)
    with pytest.raises(ConfigurationError):
        Parameters(c_M=0)
    with pytest.raises(ConfigurationError):
        BASE.with_value("nope", 1)
    assert BASE.with_value("lambda_A", 0).lambda_A == 0.0


def test_state_check():
    TABLE_BASE.check(110)
    with pytest.raises(ConfigurationError):
        StockState(P=100, B=3, M=0, ihat_P=1, ihat_B=1).check(110)
    with pytest.raises(ConfigurationError):
        StockState(P=111, B=-1, M=0, ihat_P=1, ihat_B=1).check(110)


# -- single-symbol operations ---------------------------------------------------

def test_avoidance_probability():
    assert avoidance_probability(0, 107, 3) == 1.0
    assert avoidance_probability(3, 107, 3) == pytest.approx(float(Fraction(107, 116)))
    assert avoidance_probability(3, 107, 3) == pytest.approx(0.922414, abs=1e-6)
    assert avoidance_probability(10, 100, 3) == pytest.approx(1 / 1.3)
    assert avoidance_probability(5, 0, 3) == 0.0


def test_theft_success():
    assert theft_success(0.9, 0) == pytest.approx(0.1)
    assert theft_success(0, 0) == 1.0
    assert theft_success(1, 0.5) == 0.0


def test_bandit_appropriations():
    # 0.1 * (1 - 107/116) * 1070 = 0.1 * 9/116 * 1070
    assert bandit_appropriations(0.1, 0.922414, 1070) == pytest.approx(8.30172, abs=1e-4)
    assert bandit_appropriations(0.1, float(Fraction(107, 116)), 1070) == pytest.approx(0.1 * 9 / 116 * 1070)
    assert bandit_appropriations(0, 0.5, 1000) == 0
    assert bandit_appropriations(1, 0, 1000) == 1000


def test_bandit_income():
    assert bandit_income(100, 0.5, 0.2, 10) == pytest.approx((10, 90, 9))
    T_B, I_B, i_B = bandit_income(8.30172, 0, 0.2, 3)
    assert (T_B, I_B) == (0, 8.30172)
    assert i_B == pytest.approx(2.76724)
    assert bandit_income(50, 1, 0, 5) == (0, 50, 10)
    assert bandit_income(50, 1, 0.2, 0)[2] == 0.0


def test_peasant_income():
    T_P, I_P, i_P = peasant_income(1070, 8.30172, 123.0, 0, 107)
    assert T_P == 0
    assert I_P == pytest.approx(1061.698, abs=1e-3)
    assert i_P == pytest.approx(9.92241, abs=1e-5)
    assert peasant_income(1000, 0, 20, 5, 100) == (100, 900, 9)
    assert peasant_income(0, 0, 10, 0, 0) == (0, 0, 0)


def test_banditry_attractiveness():
    assert banditry_attractiveness(0.28, 9.98) == pytest.approx(0.28 / 10.26)
    assert banditry_attractiveness(0.28, 9.98) == pytest.approx(0.0272904, abs=1e-7)
    assert banditry_attractiveness(0, 5) == 0
    assert banditry_attractiveness(4, 4) == 0.5
    assert banditry_attractiveness(3, 0) == 1.0
    assert banditry_attractiveness(0, 0) == 0.0


def test_potential_bandits():
    assert potential_bandits(107, 3, 0.0272904) == pytest.approx(3.00194, abs=1e-5)
    assert potential_bandits(100, 10, 0.1 / 1.1) == pytest.approx(10.0)
    assert potential_bandits(50, 50, 0.9, Overrides(potential_bandits_zero=True)) == 0


def test_protection_market():
    W, L, l, p_M, D_M = protection_market(8.30172, 1061.698, 9.98, 0.28, 10)
    assert (W, L, l) == (8.30172, 1061.698, 8.30172)
    assert p_M == pytest.approx(19.98)
    assert D_M == pytest.approx(8.30172 / 19.98)
    assert D_M == pytest.approx(0.415502, abs=1e-6)

    W, L, l, p_M, D_M = protection_market(100, 40, 5, 8, 10)
    assert (W, L, l, p_M) == (100, 40, 40, 18)
    assert D_M == pytest.approx(40 / 18)

    assert protection_market(100, 500, 5, 2, 10, Overrides(demand_zero=True))[4] == 0
    # looted below subsistence: budget floored at zero
    assert protection_market(100, -30, 5, 2, 10)[1:3] == (0, 0)


def test_mafia_control():
    m_B, lam = mafia_control(2, 20, 0, 0.2)
    assert m_B == pytest.approx(4) and lam == pytest.approx(0.5)
    assert mafia_control(10, 20, 0, 0.2)[1] == 1.0
    assert mafia_control(0, 0, 0, 0.2) == (0, 0)
    assert mafia_control(1, 0, 0, 0.2) == (0, 1.0)
    assert mafia_control(1, 10, 1.0, 0.2) == (0, 1.0)


def test_indices():
    law, integ = indices(107, 3, 0, 1061.698, 1070)
    assert law == pytest.approx(3 / 110)
    assert integ == pytest.approx(1061.698 / 1070)
    assert indices(110, 0, 0, 1100, 1100) == (0, 1)
    assert indices(0, 110, 0, 0, 0) == (1, 1)


# -- composition ------------------------------------------------------------------

def test_evaluate_auxiliaries_table_base():
    aux = evaluate_auxiliaries(TABLE_BASE, BASE)
    assert aux.Y == pytest.approx(1070)
    assert aux.F == pytest.approx(0.922414, abs=1e-6)
    assert aux.pi == pytest.approx(0.1)
    assert aux.R_B == pytest.approx(8.30172, abs=1e-5)
    assert aux.lambda_M == 0
    assert aux.D_M == pytest.approx(0.415502, abs=1e-6)


def test_evaluate_auxiliaries_no_crime():
    s = StockState(P=110, B=0, M=0, ihat_P=10, ihat_B=2)
    aux = evaluate_auxiliaries(s, Parameters(lambda_A=0.3, a_P=4))
    assert (aux.R_B, aux.i_B, aux.W, aux.l, aux.D_M) == (0, 0, 0, 0, 0)


def test_evaluate_auxiliaries_table_low():
    aux = evaluate_auxiliaries(TABLE_LOW, Parameters(a_P=1))
    assert aux.Y == pytest.approx(100)
    assert aux.F == pytest.approx(0.769231, abs=1e-6)
    assert aux.pi == pytest.approx(0.1)
    assert aux.R_B == pytest.approx(2.30769, abs=1e-5)


def test_evaluate_auxiliaries_matches_parts():
    s = StockState.from_stocks(110, B=20, M=2, ihat_P=5, ihat_B=8)
    p = Parameters(lambda_A=0.3)
    aux = evaluate_auxiliaries(s, p)
    m_B, lam = mafia_control(2, 20, 0.3, 0.2)
    pi = theft_success(0.3, lam)
    F = avoidance_probability(20, 88, 3)
    R_B = bandit_appropriations(pi, F, 880)
    assert (aux.m_B, aux.lambda_M, aux.pi, aux.F, aux.R_B) == (m_B, lam, pi, F, R_B)
    assert aux.p_M == 18
    assert aux.T_P == 36


def test_derivatives():
    # ihat_B / (ihat_B + ihat_P) = 1/11 so B_star = 110/11 = 10
    s = StockState.from_stocks(110, B=4, M=0, ihat_P=10, ihat_B=1)
    d = derivatives(s, BASE)
    assert evaluate_auxiliaries(s, BASE).B_star == pytest.approx(10)
    assert d.dB == pytest.approx(2.0)

    s = StockState.from_stocks(110, B=20, M=5, ihat_P=5, ihat_B=5)
    d = derivatives(s, Parameters(tau_M=5), Overrides(demand_zero=True))
    assert d.dM == pytest.approx(-1.0)


# -- properties --------------------------------------------------------------------

@given(st.floats(0, 1e3), pos, st.floats(1e-3, 10), st.floats(1e-3, 1e3))
def test_avoidance_decreasing(B, P, theta, dB):
    f0 = avoidance_probability(B, P, theta)
    f1 = avoidance_probability(B + dB, P, theta)
    assert 0 < f0 <= 1
    assert f1 <= f0
    # strict where the step is resolvable in floating point
    if theta * dB / P > 1e-9 and theta * B / P < 1e9:
        assert f1 < f0


@given(frac, frac, frac)
def test_theft_success_bounded_and_decreasing(a, m, extra):
    pi = theft_success(a, m)
    assert 0 <= pi <= 1
    assert theft_success(min(1, a + extra), m) <= pi
    assert theft_success(a, min(1, m + extra)) <= pi


@given(frac, frac, nonneg, nonneg)
def test_appropriations_bounded_and_increasing_in_output(pi, F, Y, dY):
    R = bandit_appropriations(pi, F, Y)
    assert 0 <= R <= Y * (1 + 1e-12)
    assert bandit_appropriations(pi, F, Y + dY) >= R


@given(nonneg, frac, frac, nonneg)
def test_tribute_bound(R_B, lam, t_M, B):
    T_B, I_B, _ = bandit_income(R_B, lam, t_M, B)
    assert 0 <= T_B <= t_M * R_B * (1 + 1e-12)
    assert T_B <= R_B
    assert I_B == pytest.approx(R_B - T_B)


@given(nonneg, nonneg)
def test_attractiveness_bounded(ib, ip):
    a = banditry_attractiveness(ib, ip)
    assert 0 <= a <= 1


@given(nonneg, nonneg, frac, frac)
def test_mafia_control_bounded(M, B, la, tm):
    m_B, lam = mafia_control(M, B, la, tm)
    assert 0 <= lam <= 1
    assert m_B == pytest.approx((1 - la) * tm * B)


@given(st.floats(0, 110), st.floats(0, 1), st.floats(0, 50), st.floats(0, 50),
       frac, st.floats(0.1, 20), st.booleans(), st.booleans())
def test_auxiliaries_bounded(B, m_share, ip, ib, la, a_P, dz, bz):
    M = (110 - B) * m_share
    s = StockState.from_stocks(110, B, M, ip, ib)
    aux = evaluate_auxiliaries(s, Parameters(a_P=a_P, lambda_A=la), Overrides(dz, bz))
    for name in ("F", "pi", "lambda_M", "attractiveness", "lawlessness", "integrity"):
        assert 0 <= getattr(aux, name) <= 1, name
    assert aux.R_B <= aux.Y + 1e-9
    assert aux.l <= aux.L
    assert aux.T_B <= aux.R_B
    assert 0 <= aux.B_star <= s.P + s.B + 1e-9
    d = derivatives(s, BASE, Overrides(dz, bz))
    assert all(math.isfinite(v) for v in (d.dB, d.dM, d.dihat_P, d.dihat_B))


@given(st.floats(0.5, 100), st.floats(0, 10), frac, frac, st.floats(0, 1))
def test_public_enforcement_substitutes(B, M, la, extra, lam_M):
    la2 = min(1.0, la + extra)
    assert theft_success(la2, lam_M) <= theft_success(la, lam_M)
    assert mafia_control(M, B, la2, 0.2)[0] <= mafia_control(M, B, la, 0.2)[0]
    F = avoidance_probability(B, 110 - B, 3)
    assert bandit_appropriations(theft_success(la2, lam_M), F, 1000) <= \
        bandit_appropriations(theft_success(la, lam_M), F, 1000)


@given(st.floats(0, 100), st.floats(0, 10), st.floats(0, 20), st.floats(0, 20))
def test_derivative_signs(B, M, ip, ib):
    s = StockState.from_stocks(110, B, M, ip, ib)
    aux = evaluate_auxiliaries(s, BASE)
    d = derivatives(s, BASE)
    # gaps below ~1e-300 underflow to -0.0 after dividing by the delay
    if B - aux.B_star > 1e-300:
        assert d.dB < 0
    if M - aux.D_M > 1e-300:
        assert d.dM < 0


def test_zero_cases():
    s = StockState.from_stocks(110, 0, 0, 5, 3)
    aux = evaluate_auxiliaries(s, Parameters(lambda_A=0))
    assert aux.F == 1 and aux.R_B == 0 and aux.W == 0 and aux.D_M == 0
    s = StockState.from_stocks(110, 10, 0, 5, 0)
    aux = evaluate_auxiliaries(s, BASE)
    assert aux.attractiveness == 0 and aux.B_star == 0
