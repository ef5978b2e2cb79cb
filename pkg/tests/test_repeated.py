import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from entangled_pd import DomainError, PayoffParams
from entangled_pd import repeated as rep
from entangled_pd.payoff import barred, state_payoff_table

import oracles

PD = PayoffParams(5, 3, 1, 0)
PD2 = PayoffParams(5, 4, 2, 0)


# ------------------------------------------------------------ accounting

@given(st.lists(st.floats(-10, 10), min_size=1, max_size=60), st.floats(0.01, 0.99))
def test_discounted_total_matches_direct_sum(stream, delta):
    assert np.isclose(rep.discounted_total(stream, delta), oracles.direct_sum(stream, delta))


def test_conventions_differ_by_one_period():
    x = [1.0, 2.0, 3.0]
    immediate = rep.discounted_total(x, 0.5)
    delayed = rep.discounted_total(x, 0.5, convention="delayed")
    assert immediate == pytest.approx(1 + 1 + 0.75)
    assert delayed == pytest.approx(0.5 * immediate)


def test_review_schedule():
    sched = rep.Schedule(periods=(2, 1, 3), review_cost=lambda tau: tau)
    x = [1.0, 1.0, 1.0]
    # exponents 2, 3, 6 by the delayed convention; f(tau) = tau scales each reward
    want = 2 * 0.9 ** 2 + 1 * 0.9 ** 3 + 3 * 0.9 ** 6
    assert rep.discounted_total(x, 0.9, sched, "delayed") == pytest.approx(want)
    assert rep.discounted_total(x, 0.9, sched, "immediate") == pytest.approx(want / 0.9 ** 2)
    with pytest.raises(DomainError):
        rep.Schedule(periods=(1,), review_cost=lambda tau: 2.0)
    with pytest.raises(DomainError):
        rep.Schedule(periods=(0,))


def test_geometric_and_truncation():
    assert rep.geometric_total(3.0, 0.6) == pytest.approx(7.5)
    h = rep.truncation_horizon(0.9, 5.0)
    assert 0.9 ** h * 5 / 0.1 < rep.TAIL_TOL
    assert 0.9 ** (h - 2) * 5 / 0.1 >= rep.TAIL_TOL


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.5])
def test_delta_domain(bad):
    with pytest.raises(DomainError):
        rep.discounted_total([1.0], bad)


# ------------------------------------------------------------ Trigger 1

def test_delta_inf_endpoints():
    assert rep.trigger1_delta_inf(0.0, PD) == pytest.approx(0.5)
    assert rep.trigger1_delta_inf(np.pi / 2, PD) == pytest.approx(2 / 3)
    grid = np.linspace(0, np.pi / 2, 101)
    vals = [rep.trigger1_delta_inf(th, PD) for th in grid]
    assert np.all(np.diff(vals) >= -1e-15)


def test_trigger1_gap_flips_at_delta_inf():
    for theta in np.linspace(0, np.pi / 2, 7):
        d0 = rep.trigger1_delta_inf(theta, PD2)
        for d in (d0 - 1e-3, d0 + 1e-3):
            gap = rep.geometric_total(PD2.r, d) - rep.trigger1_deviation_value(theta, d, PD2)
            assert (gap > 0) == (d > d0)


def test_trigger1_punishment_condition():
    assert rep.trigger1_punishment_ok(0.3, PD2)
    assert rep.trigger1_punishment_ok(0.0, PD)
    assert not rep.trigger1_punishment_ok(np.pi / 2, PD)
    assert not rep.trigger1_is_equilibrium(np.pi / 2, 0.99, PD)
    assert rep.trigger1_is_equilibrium(0.0, 0.6, PD)
    assert not rep.trigger1_is_equilibrium(0.0, 0.4, PD)


# ------------------------------------------------------------ Trigger 2

def test_trigger2_values_match_direct_series():
    theta, delta = 0.6, 0.8
    b = barred(PD2, theta)
    n = 4000
    locked = oracles.direct_sum([b.p_bar] * n, delta)
    # punishment: each round half chance of locking into p_bar forever
    punish = sum((0.5 * delta) ** k * (0.5 * PD2.p + 0.5 * locked) for k in range(n))
    v = rep.trigger2_values(theta, delta, PD2)
    assert v.v_locked == pytest.approx(locked)
    assert v.v_punish == pytest.approx(punish)
    assert v.v_coop == pytest.approx(PD2.r / (1 - delta))
    assert v.v_dev1 == pytest.approx(PD2.t + delta * punish)


def test_trigger2_precondition():
    for theta in np.linspace(0, np.pi / 2, 9):
        for delta in np.linspace(0.05, 0.95, 10):
            assert not rep.trigger2_is_equilibrium(theta, delta, PD)
    assert rep.trigger2_is_equilibrium(0.0, 0.9, PD2)


def test_region_boundary_monotone_and_bracketed():
    grid = np.linspace(0, np.pi / 2, 9)
    bnd = rep.trigger_region_boundary("trigger2", PD2, grid)
    vals = [d for _, d in bnd]
    assert all(v is not None for v in vals)
    assert np.all(np.diff(vals) >= -1e-9)
    for (th, d) in bnd:
        assert rep.trigger2_is_equilibrium(th, d + 1e-8, PD2)
        assert not rep.trigger2_is_equilibrium(th, d - 1e-8, PD2)
    assert rep.trigger_region_boundary("trigger2", PD, [0.3]) == [(0.3, None)]


# ------------------------------------------------------------ automata

def _code(auto):
    return rep.STATE_CODES[auto.state], -1 if auto.locked_op is None else auto.locked_op


def test_vectorized_transition_matches_scalar_exhaustively():
    for variant in ("trigger1", "trigger2"):
        autos = [rep.TriggerAutomaton(variant), rep.TriggerAutomaton(variant, rep.PUNISH)]
        if variant == "trigger2":
            autos += [rep.TriggerAutomaton(variant, rep.LOCKED, op) for op in (rep.OP_X, rep.OP_Y)]
        for auto, own, other in itertools.product(autos, range(4), range(4)):
            s, l = _code(auto)
            ns, nl = rep.transition_codes(variant, np.array([s]), np.array([l]),
                                          np.array([own]), np.array([other]))
            assert (int(ns[0]), int(nl[0])) == _code(rep.transition(auto, (own, other)))


def test_transition_examples():
    t2 = rep.TriggerAutomaton("trigger2")
    assert rep.transition(t2, ("I", "I")) == t2
    p = rep.transition(t2, ("I", "Y"))
    assert p.state == rep.PUNISH
    locked = rep.transition(p, ("X", "Y"))
    assert locked.state == rep.LOCKED and locked.locked_op == rep.OP_X
    assert rep.transition(locked, ("X", "Y")) == locked
    assert rep.transition(locked, ("X", "X")).state == rep.PUNISH
    assert rep.transition(p, ("X", "X")).state == rep.PUNISH
    t1 = rep.transition(rep.TriggerAutomaton("trigger1", rep.PUNISH), ("X", "Y"))
    assert t1.state == rep.PUNISH


def test_automaton_validation():
    with pytest.raises(DomainError):
        rep.TriggerAutomaton("trigger3")
    with pytest.raises(DomainError):
        rep.TriggerAutomaton("trigger1", rep.LOCKED, rep.OP_X)
    with pytest.raises(DomainError):
        rep.TriggerAutomaton("trigger2", rep.LOCKED, rep.OP_Z)


def test_make_player():
    assert rep.make_player("trigger2").automaton.variant == "trigger2"
    assert rep.make_player("always-I").automaton is None
    dev = rep.make_player("deviate-at(3,Y)", "trigger2")
    assert dev.overrides == {3: rep.OP_Y} and dev.automaton.variant == "trigger2"
    with pytest.raises(DomainError, match="valid"):
        rep.make_player("tit-for-tat")


# ------------------------------------------------------------ simulation

def test_mutual_cooperation_total():
    res = rep.simulate(rep.make_player("trigger1"), rep.make_player("trigger1"), 0.0, 0.6,
                       PD, horizon=200, seed=0)
    assert res.total_a == pytest.approx(7.5)
    assert res.recomputed_totals() == pytest.approx((res.total_a, res.total_b))


def test_simulation_reproducible():
    def run(seed):
        return rep.simulate(rep.make_player("deviate-at(2,X)", "trigger2"),
                            rep.make_player("trigger2"), 0.7, 0.8, PD2, 30, seed)
    a, b, c = run(5), run(5), run(6)
    assert a.to_jsonl() == b.to_jsonl()
    assert a.to_jsonl() != c.to_jsonl()
    x = rep.simulate_batch("trigger2", 0.7, 0.8, PD2, 100, 9, rep.PUNISH)
    y = rep.simulate_batch("trigger2", 0.7, 0.8, PD2, 100, 9, rep.PUNISH)
    assert np.array_equal(x, y)


def test_scalar_and_batch_agree_in_distribution():
    a = rep.make_player("deviate-at(0,Y)", "trigger1")
    b = rep.make_player("trigger1")
    theta, delta = np.pi / 4, 0.7
    scalar = [rep.simulate(rep.make_player("deviate-at(0,Y)", "trigger1"),
                           rep.make_player("trigger1"), theta, delta, PD, 60, seed).total_a
              for seed in range(400)]
    batch, _ = rep.simulate_players_batch(a, b, theta, delta, PD, 60, 20_000, 1)
    se = np.sqrt(np.var(scalar) / 400 + np.var(batch) / 20_000)
    assert abs(np.mean(scalar) - batch.mean()) < 4 * se


def test_trigger1_forced_deviation_matches_closed_form():
    for theta in (0.0, np.pi / 4):
        x = rep.simulate_batch("trigger1", theta, 0.7, PD, 100_000, 3, deviation=rep.OP_Y)
        want = rep.trigger1_deviation_value(theta, 0.7, PD)
        assert state_payoff_table(theta, PD)[rep.OP_Y, rep.OP_I] == pytest.approx(PD.t)
        se = x.std(ddof=1) / np.sqrt(x.size)
        assert abs(x.mean() - want) <= 3 * se + 1e-7


def test_analytic_total_cases():
    a = rep.make_player("deviate-at(0,Y)", "trigger1")
    b = rep.make_player("trigger1")
    assert rep.analytic_total(a, b, 0.0, 0.6, PD) == pytest.approx(
        rep.trigger1_deviation_value(0.0, 0.6, PD))
    assert rep.analytic_total(rep.make_player("always-I"), b, 0.0, 0.6, PD) == pytest.approx(7.5)
    assert rep.analytic_total(a, rep.make_player("trigger2"), 0.0, 0.6, PD) is None


def test_collapse_continue_runs_and_starts_from_cc():
    res = rep.simulate(rep.make_player("trigger1"), rep.make_player("trigger1"), 0.9, 0.5, PD,
                       10, 0, mode="collapse-continue")
    assert [h.outcome for h in res.history] == ["CC"] * 10
    with pytest.raises(DomainError):
        rep.simulate(rep.make_player("trigger1"), rep.make_player("trigger1"), 0.9, 0.5, PD,
                     10, 0, mode="bogus")


def test_batch_rejects_locked_trigger1():
    with pytest.raises(DomainError):
        rep.simulate_batch("trigger1", 0.1, 0.5, PD, 10, 0, rep.LOCKED)


def test_best_deviation_taxonomy():
    assert rep.best_deviation(0.0, PD2, rep.COOPERATE) in (rep.OP_X, rep.OP_Y)
    assert rep.best_deviation(0.0, PD2, rep.PUNISH) in (rep.OP_I, rep.OP_Z)
    assert rep.best_deviation(np.pi / 2, PD2, rep.LOCKED) in (rep.OP_I, rep.OP_Z)
