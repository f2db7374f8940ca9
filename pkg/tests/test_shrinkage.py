import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from altlms.exceptions import InvalidArgument
from altlms.shrinkage import (L0, L1, LOGSUM, OpCount, ShrinkageSpec, csign, l_matrix,
                              penalty_value, shrinkage_cost, shrinkage_potential, subgradient)

SPL1 = ShrinkageSpec.l1()
SPLS = ShrinkageSpec.logsum(10)
SPL0 = ShrinkageSpec.l0(10)
ALL = [SPL1, SPLS, SPL0]

finite = st.floats(-5, 5, allow_nan=False)
cvec = st.lists(st.tuples(finite, finite), min_size=1, max_size=8).map(
    lambda v: np.array([complex(a, b) for a, b in v]))


@pytest.mark.parametrize("z,expected", [(3 - 2j, 1 - 1j), (0, 0), (-0.001 + 0j, -1)])
def test_csign_examples(z, expected):
    assert csign(z) == expected


def test_penalty_examples():
    assert penalty_value(SPL1, np.zeros(3)) == 0
    assert penalty_value(SPLS, [10]) == pytest.approx(np.log(2))
    assert penalty_value(SPL0, [1, 0, 0]) == pytest.approx(0.9999546, abs=1e-7)


def test_subgradient_examples():
    np.testing.assert_array_equal(subgradient(SPL1, [1 + 1j, -2]), [1 + 1j, -1])
    assert subgradient(SPL0, [0.05])[0] == pytest.approx(5.0)
    assert subgradient(SPL0, [0.2])[0] == 0
    # boundary |a| = 1/beta is active
    assert subgradient(SPL0, [0.1])[0] == pytest.approx(0.0, abs=1e-12)
    assert subgradient(SPL0, [0.1 + 0j]).dtype == complex


def test_logsum_uses_global_norm():
    a = np.array([1 + 0j, -2j])
    np.testing.assert_allclose(subgradient(SPLS, a), csign(a) / (1 + 10 * 3))


def test_logsum_exact_flag_matches_finite_difference():
    a = np.array([0.3 - 0.7j, -1.2 + 0.4j])
    h = 1e-6
    g = subgradient(SPLS, a, exact=True)
    for m in range(2):
        e = np.zeros(2)
        e[m] = h
        d_re = (penalty_value(SPLS, a + e) - penalty_value(SPLS, a - e)) / (2 * h)
        d_im = (penalty_value(SPLS, a + 1j * e) - penalty_value(SPLS, a - 1j * e)) / (2 * h)
        assert g[m] == pytest.approx(0.5 * (d_re + 1j * d_im), rel=1e-6)


def test_potential_gradient_l1_l0():
    r = np.random.default_rng(0)
    a = (r.uniform(0.02, 0.06, 5) * r.choice([-1, 1], 5)
         + 1j * r.uniform(0.02, 0.06, 5) * r.choice([-1, 1], 5))
    h = 1e-6
    for spec in (SPL1, SPL0):
        g = subgradient(spec, a)
        for m in range(5):
            e = np.zeros(5)
            e[m] = h
            d_re = (shrinkage_potential(spec, a + e) - shrinkage_potential(spec, a - e)) / (2 * h)
            d_im = (shrinkage_potential(spec, a + 1j * e)
                    - shrinkage_potential(spec, a - 1j * e)) / (2 * h)
            assert g[m] == pytest.approx(0.5 * (d_re + 1j * d_im), rel=1e-6)


def test_logsum_has_no_potential():
    with pytest.raises(InvalidArgument):
        shrinkage_potential(SPLS, [1.0])


@given(cvec)
def test_penalty_non_negative_and_zero_only_at_zero(a):
    for spec in ALL:
        v = penalty_value(spec, a)
        assert v >= 0
        if np.any(a != 0):
            assert v > 0
        else:
            assert v == 0


@given(cvec, st.floats(0.01, 100))
def test_l1_scaling(a, c):
    assert penalty_value(SPL1, c * a) == pytest.approx(c * penalty_value(SPL1, a), rel=1e-12)


@given(cvec)
@settings(max_examples=50)
def test_l_matrix_hermitian_psd(a):
    for spec in ALL:
        L = l_matrix(spec, a)
        np.testing.assert_allclose(L, L.conj().T, atol=1e-12)
        if spec.kind != L0:
            assert np.linalg.eigvalsh(L).min() > -1e-9


@given(cvec)
@settings(max_examples=50)
def test_l0_l_matrix_is_outer_product_of_subgradient(a):
    g = subgradient(SPL0, a)
    np.testing.assert_allclose(l_matrix(SPL0, a), np.outer(g, g.conj()), atol=1e-9)


def test_l_matrix_examples():
    np.testing.assert_array_equal(l_matrix(SPL1, np.zeros(3)), np.zeros((3, 3)))
    np.testing.assert_array_equal(l_matrix(SPL1, [0.5, 2.0, 1.0]), np.ones((3, 3)))
    assert l_matrix(SPL0, [0.05])[0, 0] == pytest.approx(25.0)


@pytest.mark.parametrize("spec,m,expected", [
    (SPL1, 16, (32, 64, 32)), (SPLS, 1, (4, 7, 3)), (SPL0, 10, (30, 60, 20))])
def test_costs(spec, m, expected):
    assert shrinkage_cost(spec, m) == OpCount(*expected)


def test_opcount_str():
    assert str(OpCount(32, 32, 0)) == "adds=32 mults=32 divs=0"


@pytest.mark.parametrize("kwargs", [
    dict(kind="l2"), dict(kind=LOGSUM), dict(kind=L0, beta=-1), dict(kind=L1, beta=3.0)])
def test_bad_specs(kwargs):
    with pytest.raises(InvalidArgument):
        ShrinkageSpec(**kwargs)


def test_parse_aliases():
    assert ShrinkageSpec.parse("log-sum") == SPLS
    assert ShrinkageSpec.parse("L0approx", beta=10) == SPL0
    assert str(SPL0) == "l0(beta=10)"
