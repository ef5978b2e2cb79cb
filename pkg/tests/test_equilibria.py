import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entangled_pd import DomainError, NoEquilibrium, PayoffParams
from entangled_pd.equilibria import (
    HALF_XY, best_response_pure, boundary_mixed_equilibria, boundary_threshold,
    classical_equilibrium, closed_form_equilibria, counter_strategy_maximal,
    improving_deviation_witness, interior_mixed_equilibrium, maximal_transform,
    mixed_deviation_gains, pure_deviation_gains, pure_equilibrium_family,
    pure_existence_threshold, response_matrix, verify_mixed_equilibrium,
    verify_pure_equilibrium,
)
from entangled_pd.payoff import mixed_payoff_matrix, pure_payoff

import oracles

PD = PayoffParams(5, 3, 1, 0)
PARAM_SETS = [(5, 3, 1, 0), (5, 4, 2, 0), (7, 5, 3, 0), (5, 4, 3, 0)]
vec4 = st.lists(st.floats(-1, 1), min_size=4, max_size=4).filter(
    lambda v: np.linalg.norm(v) > 1e-3).map(lambda v: np.array(v) / np.linalg.norm(v))


@given(vec4, st.floats(0, np.pi / 2))
@settings(max_examples=100)
def test_response_matrix_reproduces_payoff(xB, theta):
    M = response_matrix(xB, theta, PD)
    rng = np.random.default_rng(0)
    for xa in oracles.sphere(rng, 5):
        assert np.isclose(xa @ M @ xa, pure_payoff(xa, xB, theta, PD), atol=1e-10)


def test_eigenvalue_dominates_sampling():
    rng = np.random.default_rng(5)
    for k in range(20):
        xB = oracles.sphere(rng, 1)[0]
        theta = rng.uniform(0, np.pi / 2)
        br = best_response_pure(xB, theta, PD)
        sampled = pure_payoff(oracles.sphere(rng, 10_000), xB, theta, PD)
        assert br.value >= sampled.max() - 1e-12
        assert np.isclose(pure_payoff(br.argmax, xB, theta, PD), br.value, atol=1e-10)
        assert br.value - sampled.max() < 0.1


@given(vec4)
def test_maximal_transform_orthogonal(xB):
    T = maximal_transform(xB)
    assert np.allclose(T @ T.T, np.eye(4), atol=1e-12)


@given(vec4, vec4)
def test_payoff_in_transformed_coordinates(xA, xB):
    # at theta = pi/2, Alice's payoff is r a'^2 + p b'^2 + t g'^2 + s d'^2
    a, b, g, d = maximal_transform(xB) @ xA
    want = PD.r * a * a + PD.p * b * b + PD.t * g * g + PD.s * d * d
    assert np.isclose(pure_payoff(xA, xB, np.pi / 2, PD), want, atol=1e-10)


def test_no_pure_equilibrium_at_maximal_entanglement():
    rng = np.random.default_rng(8)
    for xa, xb in zip(oracles.sphere(rng, 100), oracles.sphere(rng, 100)):
        assert max(pure_deviation_gains(xa, xb, np.pi / 2, PD)) > 1e-6
        who, reply, gain = improving_deviation_witness(xa, xb, np.pi / 2, PD)
        assert gain > 1e-6 and who in "AB"


@pytest.mark.parametrize("tps", PARAM_SETS)
def test_pure_family_threshold_is_sharp(tps):
    params = PayoffParams(*tps)
    bound = pure_existence_threshold(params)
    for s2 in np.linspace(0, 1, 101):
        theta = np.arcsin(np.sqrt(s2))
        phi = 0.37
        xA = np.array([0, np.cos(phi), np.sin(phi), 0])
        xB = np.array([0, np.sin(phi), np.cos(phi), 0])
        ok = verify_pure_equilibrium(xA, xB, theta, params)
        assert ok == (s2 <= bound + 1e-12), s2
        if s2 > bound + 1e-12:
            with pytest.raises(NoEquilibrium):
                pure_equilibrium_family(phi, theta, params)


def test_classical_equilibrium():
    for phi_a, phi_b in [(0, 0), (0.4, 1.3), (2.0, -1.0)]:
        c = classical_equilibrium(PD, 0.0, phi_a, phi_b)
        assert c.verify() and c.is_consistent()
        assert c.payoffs == (1.0, 1.0)
    with pytest.raises(DomainError):
        classical_equilibrium(PD, 0.2)


@pytest.mark.parametrize("tps", PARAM_SETS)
def test_closed_form_candidates_verify(tps):
    params = PayoffParams(*tps)
    for theta in np.linspace(0, np.pi / 2, 50):
        for cand in closed_form_equilibria(theta, params):
            assert cand.is_consistent(), cand.label
            assert cand.verify(), (cand.label, theta)


def test_interior_equalizes_opponent():
    for theta in np.linspace(0, np.pi / 2, 30):
        cand = interior_mixed_equilibrium(theta, PD)
        if cand is None:
            continue
        A = mixed_payoff_matrix(theta, PD)
        q = cand.strategies[0]
        assert np.ptp(A @ q) < 1e-10
        assert np.isclose(q.sum(), 1) and q.min() >= 0


def test_interior_uniform_at_maximal_entanglement():
    cand = interior_mixed_equilibrium(np.pi / 2, PD)
    assert cand is not None
    assert np.allclose(cand.strategies[0], 0.25)
    assert cand.payoffs == pytest.approx((2.25, 2.25))


def test_interior_absent_without_entanglement():
    assert interior_mixed_equilibrium(0.0, PD) is None


def test_boundary_branch_switch():
    bound = boundary_threshold(PD)
    assert bound == pytest.approx(2 / 3)
    below = boundary_mixed_equilibria(np.arcsin(np.sqrt(0.5)), PD)
    above = boundary_mixed_equilibria(np.arcsin(np.sqrt(0.9)), PD)
    assert [c.label for c in below] == ["boundary-xy-xy"]
    assert [c.label for c in above] == ["boundary-iz-xy"]
    at = boundary_mixed_equilibria(np.arcsin(np.sqrt(bound)), PD)
    assert len(at) == 2 and all(c.verify() for c in at)


def test_boundary_pair_at_maximal_entanglement():
    (c,) = boundary_mixed_equilibria(np.pi / 2, PD)
    assert c.payoffs == pytest.approx((2.5, 2.5))
    assert c.verify()


def test_lt_regime_branches():
    params = PayoffParams(5, 4, 2, 0)
    labels = [c.label for c in boundary_mixed_equilibria(np.pi / 2, params)]
    assert labels == ["boundary-xy-xy", "boundary-iz-iz"]
    assert [c.label for c in boundary_mixed_equilibria(0.1, params)] == ["boundary-xy-xy"]


def test_degenerate_regime_returns_nothing():
    assert boundary_mixed_equilibria(0.5, PayoffParams(5, 3, 2, 0)) == []


def test_counter_strategy_reaches_t():
    rng = np.random.default_rng(2)
    for xb in oracles.sphere(rng, 50):
        xa = counter_strategy_maximal(xb)
        assert np.isclose(np.linalg.norm(xa), 1)
        assert pure_payoff(xa, xb, np.pi / 2, PD) == pytest.approx(5.0, abs=1e-9)


def test_mixed_gains_detect_non_equilibrium():
    ga, gb = mixed_deviation_gains([1, 0, 0, 0], [1, 0, 0, 0], 0.0, PD)
    assert ga == pytest.approx(2.0) and gb == pytest.approx(2.0)
    assert not verify_mixed_equilibrium([1, 0, 0, 0], [1, 0, 0, 0], 0.0, PD)
    assert verify_mixed_equilibrium(HALF_XY, HALF_XY, 0.0, PD)


def test_mixed_best_reply_is_vertex():
    # no random mixed strategy beats the best Pauli reply
    rng = np.random.default_rng(4)
    A = mixed_payoff_matrix(0.8, PD)
    for q in oracles.simplex(rng, 50):
        best = (A @ q).max()
        assert (oracles.simplex(rng, 200) @ A @ q).max() <= best + 1e-12
