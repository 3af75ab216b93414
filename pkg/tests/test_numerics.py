import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ifpt import Bracket, find_root_midpoint, std_normal_cdf, std_normal_pdf, survival, survival_inv
from ifpt.errors import DomainError, MaxIterations, NoSignChange

# frozen oracle values (mpmath, 30 digits)
PHI_AT_1 = 0.24197072451914335
PSI_AT_MINUS_1 = 0.84134474606854295
Z_975 = 1.9599639845400542
CUBIC_ROOT = 1.5213797068045676  # root of x^3 - x - 2, mpmath findroot


def test_pdf_at_zero():
    assert std_normal_pdf(0.0) == pytest.approx(1.0 / math.sqrt(2 * math.pi), abs=0)


def test_pdf_at_one_matches_oracle():
    assert std_normal_pdf(1.0) == pytest.approx(PHI_AT_1, abs=1e-16)


@given(st.floats(-30, 30))
def test_pdf_symmetry(x):
    assert std_normal_pdf(x) == std_normal_pdf(-x)
    assert std_normal_pdf(x) > 0


def test_cdf_at_zero():
    assert std_normal_cdf(0.0) == 0.5


def test_cdf_inverse_of_975():
    assert std_normal_cdf(Z_975) == pytest.approx(0.975, abs=1e-14)


def test_cdf_accuracy_against_mpmath():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 30
    for x in np.linspace(-8, 8, 33):
        exact = float(0.5 * mp.erfc(-mp.mpf(x) / mp.sqrt(2)))
        assert abs(std_normal_cdf(x) - exact) <= 1e-14


@given(st.floats(-10, 10))
def test_cdf_reflection(x):
    assert std_normal_cdf(x) == pytest.approx(1.0 - std_normal_cdf(-x), abs=1e-15)


def test_cdf_plus_survival_is_one_on_grid():
    for x in np.arange(-8.0, 8.0 + 1e-9, 0.01):
        assert abs(std_normal_cdf(x) + survival(x) - 1.0) <= 1e-15


def test_monotonicity_on_grid():
    xs = np.linspace(-8, 8, 1601)
    cdf = np.array([std_normal_cdf(x) for x in xs])
    surv = np.array([survival(x) for x in xs])
    assert np.all(np.diff(cdf) > 0)
    assert np.all(np.diff(surv) < 0)


def test_survival_at_zero_and_tail():
    assert survival(0.0) == 0.5
    assert survival(8.0) < 1e-15
    assert survival(-1.0) == pytest.approx(PSI_AT_MINUS_1, abs=1e-16)


def test_survival_no_cancellation_deep_tail():
    # literal 1 - Phi would return 0 long before x = 38
    assert survival(30.0) > 0.0


def test_survival_inv_examples():
    assert survival_inv(0.5) == pytest.approx(0.0, abs=1e-12)
    assert survival_inv(0.025) == pytest.approx(Z_975, abs=1e-9)


@given(st.floats(-6, 6))
def test_survival_inv_round_trip(x):
    assert survival_inv(survival(x)) == pytest.approx(x, abs=1e-9)


def test_survival_inv_residual_contract():
    for p in (1e-30, 1e-12, 0.3, 0.9, 1 - 1e-12):
        x = survival_inv(p)
        assert abs(survival(x) - p) <= 1e-12


def test_survival_inv_monotone_in_p():
    ps = np.linspace(0.01, 0.99, 99)
    xs = [survival_inv(p) for p in ps]
    assert np.all(np.diff(xs) < 0)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_survival_inv_domain(p):
    with pytest.raises(DomainError):
        survival_inv(p)


def test_root_linear():
    root = find_root_midpoint(lambda x: x - 2, Bracket(0, 5), tol=1e-10)
    assert root == pytest.approx(2.0, abs=1e-10)


def test_root_through_survival():
    root = find_root_midpoint(lambda x: survival(x) - 0.5, Bracket(-1, 1), tol=1e-12)
    assert root == pytest.approx(0.0, abs=1e-12)


def test_root_cubic_matches_scan_oracle():
    root = find_root_midpoint(lambda x: x**3 - x - 2, Bracket(1, 2), tol=1e-10)
    assert root == pytest.approx(CUBIC_ROOT, abs=1e-9)


def test_root_no_sign_change():
    with pytest.raises(NoSignChange):
        find_root_midpoint(lambda x: x * x + 1, Bracket(-1, 1), tol=1e-8)


def test_root_max_iterations():
    with pytest.raises(MaxIterations):
        find_root_midpoint(lambda x: x, Bracket(-1e300, 1e300), tol=1e-300, max_iter=5)


def test_bracket_invariant():
    with pytest.raises(DomainError):
        Bracket(1.0, 1.0)


@given(st.floats(0.1, 3.0), st.floats(-2.0, 2.0))
def test_root_final_interval_property(scale, shift):
    # returned point beats both final bracket ends on |f|
    f = lambda x: math.tanh(scale * (x - shift))
    root = find_root_midpoint(f, Bracket(shift - 3, shift + 3.7), tol=1e-9)
    assert abs(root - shift) <= 1e-9
    assert abs(f(root)) <= min(abs(f(root - 1e-9)), abs(f(root + 1e-9))) + 1e-12
