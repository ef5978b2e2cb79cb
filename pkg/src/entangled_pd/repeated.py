"""Infinitely repeated entangled prisoner's dilemma.

Discounted accounting, trigger-strategy closed forms, trigger automata and
a seeded simulator. Operators are coded 0..3 for (I, X, Y, Z).
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DomainError
from .payoff import PayoffParams, barred, payoff_operator, state_payoff_table
from .quantum import (
    BASIS,
    CC,
    OPERATORS,
    PAULI_POINTS,
    basis_state,
    check_theta,
    game_operator,
)

OP_I, OP_X, OP_Y, OP_Z = range(4)
COMPLEMENT = {OP_X: OP_Y, OP_Y: OP_X}

COOPERATE, PUNISH, LOCKED = "cooperate", "punish", "locked"
STATE_CODES = {COOPERATE: 0, PUNISH: 1, LOCKED: 2}

MODES = ("stage-reset", "collapse-continue")
CONVENTIONS = ("immediate", "delayed")
TAIL_TOL = 1e-8


def check_delta(delta: float) -> float:
    delta = float(delta)
    if not (0.0 < delta < 1.0):
        raise DomainError(f"discount factor {delta!r} outside (0, 1)")
    return delta


def op_index(op) -> int:
    if isinstance(op, (int, np.integer)) and 0 <= op < 4:
        return int(op)
    if isinstance(op, str) and op.upper() in OPERATORS:
        return OPERATORS.index(op.upper())
    raise DomainError(f"unknown operator {op!r}; expected one of I, X, Y, Z")


# ------------------------------------------------------------ accounting

@dataclass(frozen=True)
class Schedule:
    """Review periods tau_i and the per-period reward scaling f(tau)."""

    periods: tuple = ()
    review_cost: Callable[[int], float] | Mapping[int, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "periods", tuple(int(x) for x in self.periods))
        if any(x < 1 for x in self.periods):
            raise DomainError(f"review periods must be positive integers, got {self.periods}")
        if abs(self.cost(1) - 1.0) > 1e-12:
            raise DomainError("review cost must satisfy f(1) = 1")

    def cost(self, tau: int) -> float:
        f = self.review_cost
        if f is None:
            return 1.0
        if callable(f):
            return float(f(tau))
        return float(f[tau])

    def period(self, i: int) -> int:
        return self.periods[i] if self.periods else 1


def discount_exponents(n: int, schedule: Schedule | None = None,
                       convention: str = "immediate") -> np.ndarray:
    """Exponent of delta for each of the first n rewards.

    "delayed" uses t_i = tau_1 + ... + tau_i. "immediate" shifts every
    exponent by -tau_1 so the first reward is undiscounted.
    """
    if convention not in CONVENTIONS:
        raise DomainError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    schedule = schedule or Schedule()
    taus = np.array([schedule.period(i) for i in range(n)], dtype=float)
    t_i = np.cumsum(taus)
    if convention == "immediate" and n:
        t_i = t_i - taus[0]
    return t_i


def discounted_total(stage_payoffs: Sequence[float], delta: float,
                     schedule: Schedule | None = None, convention: str = "immediate") -> float:
    delta = check_delta(delta)
    x = np.asarray(stage_payoffs, dtype=float)
    if x.size == 0:
        return 0.0
    schedule = schedule or Schedule()
    if schedule.periods and len(schedule.periods) < x.size:
        raise DomainError("schedule shorter than the payoff stream")
    scale = np.array([schedule.cost(schedule.period(i)) for i in range(x.size)])
    return float(np.sum(delta ** discount_exponents(x.size, schedule, convention) * scale * x))


def geometric_total(x: float, delta: float) -> float:
    """x + delta x + delta^2 x + ... = x / (1 - delta)."""
    return x / (1.0 - check_delta(delta))


def truncation_horizon(delta: float, max_payoff: float, tol: float = TAIL_TOL) -> int:
    """Smallest H with delta^H * max_payoff / (1 - delta) < tol."""
    delta = check_delta(delta)
    if max_payoff <= 0:
        return 1
    h = math.log(tol * (1 - delta) / max_payoff) / math.log(delta)
    return max(1, math.ceil(h) + 1)


# ------------------------------------------------------------ Trigger 1

def trigger1_delta_inf(theta: float, params: PayoffParams) -> float:
    theta = check_theta(theta)
    t, r, p, _ = params.as_tuple()
    c2, s2 = np.cos(theta) ** 2, np.sin(theta) ** 2
    return (t - r) / (t - 0.5 * (p + p * c2 + r * s2))


def trigger1_punishment_ok(theta: float, params: PayoffParams) -> bool:
    """Whether half-X / half-Y play is itself a stage equilibrium."""
    t, r, p, s = params.as_tuple()
    if t + s < r + p:
        return True
    if t + s > r + p:
        return np.sin(check_theta(theta)) ** 2 < 2 * (p - s) / (t - r + p - s)
    return False


def trigger1_is_equilibrium(theta: float, delta: float, params: PayoffParams) -> bool:
    delta = check_delta(delta)
    return bool(delta > trigger1_delta_inf(theta, params) and trigger1_punishment_ok(theta, params))


def trigger1_deviation_value(theta: float, delta: float, params: PayoffParams) -> float:
    """Deviate with Y against I once, then face half-X / half-Y forever."""
    delta = check_delta(delta)
    b = barred(params, theta)
    per_round = 0.5 * (params.p + b.p_bar)
    return params.t + delta / (1 - delta) * per_round


# ------------------------------------------------------------ Trigger 2

@dataclass(frozen=True)
class Trigger2Values:
    v_coop: float
    v_dev1: float
    v_punish: float
    v_dev2: float
    v_locked: float
    v_dev3: float

    def gaps(self) -> tuple[float, float, float]:
        return (self.v_coop - self.v_dev1, self.v_punish - self.v_dev2,
                self.v_locked - self.v_dev3)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def trigger2_values(theta: float, delta: float, params: PayoffParams) -> Trigger2Values:
    delta = check_delta(delta)
    b = barred(params, theta)
    t, r, p, s = params.as_tuple()
    locked_stage = b.p_bar  # p cos^2 + r sin^2
    v_locked = locked_stage / (1 - delta)
    v_punish = 0.5 / (1 - delta / 2) * (p + locked_stage / (1 - delta))
    return Trigger2Values(
        v_coop=r / (1 - delta),
        v_dev1=t + (delta / 2) / (1 - delta / 2) * (p + locked_stage / (1 - delta)),
        v_punish=v_punish,
        # I or Z against half-X / half-Y earns (s + s_bar) / 2
        v_dev2=0.5 * (s + b.s_bar) + delta * v_punish,
        v_locked=v_locked,
        v_dev3=b.s_bar + delta * v_punish,
    )


def trigger2_is_equilibrium(theta: float, delta: float, params: PayoffParams) -> bool:
    t, r, p, _ = params.as_tuple()
    if not r > (t + p) / 2:
        return False
    return all(g > 0 for g in trigger2_values(theta, delta, params).gaps())


def trigger_region_boundary(variant: str, params: PayoffParams, theta_grid,
                            tol: float = 1e-9, scan: int = 2000) -> list[tuple[float, float | None]]:
    """For each theta, the smallest delta above which the trigger is an equilibrium.

    None where no delta < 1 works. The condition is scanned on a grid
    (refined towards delta = 1) and the last failure is bisected to `tol`.
    """
    if variant in ("trigger1", "1", 1):
        ok = trigger1_is_equilibrium
    elif variant in ("trigger2", "2", 2):
        ok = trigger2_is_equilibrium
    else:
        raise DomainError(f"unknown trigger variant {variant!r}")
    grid = np.unique(np.concatenate([
        np.linspace(0, 1, scan + 1)[1:-1],
        1 - np.logspace(-3, -9, 13),
    ]))
    out = []
    for theta in theta_grid:
        flags = np.array([ok(theta, d, params) for d in grid])
        if not flags[-1]:
            out.append((float(theta), None))
            continue
        bad = np.nonzero(~flags)[0]
        if bad.size == 0:
            lo, hi = 0.0, grid[0]
            if ok(theta, tol, params):
                out.append((float(theta), 0.0))
                continue
            lo = tol
        else:
            lo, hi = grid[bad[-1]], grid[bad[-1] + 1]
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if ok(theta, mid, params):
                hi = mid
            else:
                lo = mid
        out.append((float(theta), float(hi)))
    return out


# ------------------------------------------------------------ automata

@dataclass(frozen=True)
class TriggerAutomaton:
    variant: str  # "trigger1" | "trigger2"
    state: str = COOPERATE
    locked_op: int | None = None

    def __post_init__(self):
        if self.variant not in ("trigger1", "trigger2"):
            raise DomainError(f"unknown trigger variant {self.variant!r}")
        if self.state not in STATE_CODES:
            raise DomainError(f"unknown automaton state {self.state!r}")
        if self.state == LOCKED:
            if self.variant == "trigger1":
                raise DomainError("Trigger 1 has no locked state")
            if self.locked_op not in (OP_X, OP_Y):
                raise DomainError("locked state must hold X or Y")


def _coin(rng) -> int:
    return OP_X if rng.random() < 0.5 else OP_Y


def initial_action(auto: TriggerAutomaton, rng) -> int:
    if auto.state == COOPERATE:
        return OP_I
    if auto.state == LOCKED:
        return auto.locked_op
    return _coin(rng)


def transition(auto: TriggerAutomaton, observed: tuple[int, int]) -> TriggerAutomaton:
    """Next automaton state after seeing (own operator, partner operator)."""
    own, other = (op_index(o) for o in observed)
    if auto.state == COOPERATE and own == OP_I and other == OP_I:
        return auto
    if auto.variant == "trigger2":
        if auto.state == PUNISH and own in COMPLEMENT and COMPLEMENT[own] == other:
            return TriggerAutomaton("trigger2", LOCKED, own)
        if auto.state == LOCKED and own == auto.locked_op and other == COMPLEMENT[own]:
            return auto
    return TriggerAutomaton(auto.variant, PUNISH)


def step_automaton(auto: TriggerAutomaton, observed: tuple[int, int], rng
                   ) -> tuple[TriggerAutomaton, int]:
    nxt = transition(auto, observed)
    return nxt, initial_action(nxt, rng)


# vectorized mirror of `transition`; kept in lockstep by an exhaustive test
def transition_codes(variant: str, state: np.ndarray, locked: np.ndarray,
                     own: np.ndarray, other: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    coop = state == 0
    stay_coop = coop & (own == OP_I) & (other == OP_I)
    new_state = np.full_like(state, 1)
    new_locked = np.full_like(locked, -1)
    new_state[stay_coop] = 0
    if variant == "trigger2":
        complementary = ((own == OP_X) & (other == OP_Y)) | ((own == OP_Y) & (other == OP_X))
        lock = (state == 1) & complementary
        keep = (state == 2) & complementary & (own == locked)
        to_locked = lock | keep
        new_state[to_locked] = 2
        new_locked[to_locked] = own[to_locked]
    return new_state, new_locked


def actions_from_codes(state: np.ndarray, locked: np.ndarray, coins: np.ndarray) -> np.ndarray:
    ops = np.where(coins, OP_Y, OP_X)
    ops = np.where(state == 0, OP_I, ops)
    return np.where(state == 2, locked, ops)


# ------------------------------------------------------------ players

@dataclass
class Player:
    """A trigger automaton (or unconditional I) with optional scripted overrides."""

    name: str
    automaton: TriggerAutomaton | None = None
    overrides: dict = field(default_factory=dict)

    def intended(self, rng) -> int:
        return OP_I if self.automaton is None else initial_action(self.automaton, rng)

    def observe(self, own: int, other: int, rng) -> int:
        if self.automaton is None:
            return OP_I
        self.automaton, op = step_automaton(self.automaton, (own, other), rng)
        return op


def make_player(spec: str, opponent_variant: str | None = None) -> Player:
    """Build a player from a name: trigger1, trigger2, always-I, deviate-at(k,op)."""
    name = spec.strip()
    if name in ("trigger1", "trigger2"):
        return Player(name, TriggerAutomaton(name))
    if name.lower() in ("always-i", "always_i"):
        return Player("always-I")
    m = re.fullmatch(r"deviate-at[(:]\s*(\d+)\s*[,:]\s*([IXYZixyz])\s*\)?", name)
    if m:
        base = opponent_variant if opponent_variant in ("trigger1", "trigger2") else "trigger1"
        return Player(name, TriggerAutomaton(base), {int(m.group(1)): op_index(m.group(2))})
    raise DomainError(
        f"unknown strategy {spec!r}; valid: trigger1, trigger2, always-I, deviate-at(k,op)"
    )


# ------------------------------------------------------------ simulation

@dataclass
class RoundRecord:
    round: int
    op_a: str
    op_b: str
    outcome: str
    payoff_a: float
    payoff_b: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class RepeatedGameResult:
    payoffs_a: np.ndarray
    payoffs_b: np.ndarray
    total_a: float
    total_b: float
    history: list
    seed: int
    delta: float
    convention: str = "immediate"
    mode: str = "stage-reset"

    def recomputed_totals(self) -> tuple[float, float]:
        pa = [h.payoff_a for h in self.history]
        pb = [h.payoff_b for h in self.history]
        return (discounted_total(pa, self.delta, convention=self.convention),
                discounted_total(pb, self.delta, convention=self.convention))

    def to_jsonl(self) -> str:
        return "".join(json.dumps(h.as_dict(), sort_keys=True) + "\n" for h in self.history)


def simulate(player_a: Player, player_b: Player, theta: float, delta: float,
             params: PayoffParams, horizon: int, seed: int, mode: str = "stage-reset",
             convention: str = "immediate") -> RepeatedGameResult:
    """Play `horizon` rounds; stage payoffs are expectations of the evolved state.

    In stage-reset mode every round starts from |CC>. In collapse-continue
    mode the sampled measurement outcome seeds the next round.
    """
    theta = check_theta(theta)
    delta = check_delta(delta)
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    if horizon < 1:
        raise DomainError("horizon must be at least 1")
    rng = np.random.default_rng(seed)
    ops_cache = {(i, j): game_operator(PAULI_POINTS[i], PAULI_POINTS[j], theta)
                 for i in range(4) for j in range(4)}
    diag_a, diag_b = payoff_operator(params, "A"), payoff_operator(params, "B")

    psi = CC.copy()
    op_a, op_b = player_a.intended(rng), player_b.intended(rng)
    history = []
    for k in range(horizon):
        op_a = player_a.overrides.get(k, op_a)
        op_b = player_b.overrides.get(k, op_b)
        start = CC if mode == "stage-reset" else psi
        out_state = ops_cache[op_a, op_b] @ start
        probs = np.abs(out_state) ** 2
        probs = probs / probs.sum()
        outcome = int(rng.choice(4, p=probs))
        history.append(RoundRecord(k, OPERATORS[op_a], OPERATORS[op_b], BASIS[outcome],
                                   float(probs @ diag_a), float(probs @ diag_b)))
        if mode == "collapse-continue":
            psi = basis_state(BASIS[outcome])
        next_a = player_a.observe(op_a, op_b, rng)
        next_b = player_b.observe(op_b, op_a, rng)
        op_a, op_b = next_a, next_b

    pa = np.array([h.payoff_a for h in history])
    pb = np.array([h.payoff_b for h in history])
    return RepeatedGameResult(
        payoffs_a=pa, payoffs_b=pb,
        total_a=discounted_total(pa, delta, convention=convention),
        total_b=discounted_total(pb, delta, convention=convention),
        history=history, seed=seed, delta=delta, convention=convention, mode=mode,
    )


def _start_codes(start: str, n: int):
    if start == COOPERATE:
        return (np.zeros(n, int), np.full(n, -1)), (np.zeros(n, int), np.full(n, -1))
    if start == PUNISH:
        return (np.ones(n, int), np.full(n, -1)), (np.ones(n, int), np.full(n, -1))
    if start == LOCKED:
        return (np.full(n, 2), np.full(n, OP_X)), (np.full(n, 2), np.full(n, OP_Y))
    raise DomainError(f"unknown start state {start!r}")


def simulate_batch(variant: str, theta: float, delta: float, params: PayoffParams,
                   episodes: int, seed: int, start: str = COOPERATE,
                   deviation: int | None = None, deviation_round: int = 0,
                   horizon: int | None = None) -> np.ndarray:
    """Alice's discounted totals over many stage-reset episodes of two trigger players.

    Both players start in `start` (locked means Alice holds X, Bob holds Y).
    If `deviation` is given, Alice plays it at `deviation_round` and then
    follows her automaton again.
    """
    theta, delta = check_theta(theta), check_delta(delta)
    if variant not in ("trigger1", "trigger2"):
        raise DomainError(f"unknown trigger variant {variant!r}")
    if variant == "trigger1" and start == LOCKED:
        raise DomainError("Trigger 1 has no locked state")
    table = state_payoff_table(theta, params, "A")
    if horizon is None:
        horizon = deviation_round + truncation_horizon(delta, float(np.abs(table).max()))
    rng = np.random.default_rng(seed)
    (sa, la), (sb, lb) = _start_codes(start, episodes)
    total = np.zeros(episodes)
    weight = 1.0
    for k in range(horizon):
        op_a = actions_from_codes(sa, la, rng.random(episodes) < 0.5)
        op_b = actions_from_codes(sb, lb, rng.random(episodes) < 0.5)
        if deviation is not None and k == deviation_round:
            op_a = np.full(episodes, op_index(deviation))
        total += weight * table[op_a, op_b]
        weight *= delta
        sa, la = transition_codes(variant, sa, la, op_a, op_b)
        sb, lb = transition_codes(variant, sb, lb, op_b, op_a)
    return total


def _player_codes(player: Player, n: int):
    auto = player.automaton
    if auto is None:
        return "always-I", np.zeros(n, int), np.full(n, -1)
    state = np.full(n, STATE_CODES[auto.state])
    locked = np.full(n, -1 if auto.locked_op is None else auto.locked_op)
    return auto.variant, state, locked


def simulate_players_batch(player_a: Player, player_b: Player, theta: float, delta: float,
                           params: PayoffParams, horizon: int, episodes: int, seed: int
                           ) -> tuple[np.ndarray, np.ndarray]:
    """Discounted totals of both players over independent stage-reset episodes."""
    theta, delta = check_theta(theta), check_delta(delta)
    if horizon < 1:
        raise DomainError("horizon must be at least 1")
    table_a = state_payoff_table(theta, params, "A")
    table_b = state_payoff_table(theta, params, "B")
    rng = np.random.default_rng(seed)
    var_a, sa, la = _player_codes(player_a, episodes)
    var_b, sb, lb = _player_codes(player_b, episodes)
    tot_a, tot_b = np.zeros(episodes), np.zeros(episodes)
    weight = 1.0
    for k in range(horizon):
        op_a = actions_from_codes(sa, la, rng.random(episodes) < 0.5)
        op_b = actions_from_codes(sb, lb, rng.random(episodes) < 0.5)
        if k in player_a.overrides:
            op_a = np.full(episodes, player_a.overrides[k])
        if k in player_b.overrides:
            op_b = np.full(episodes, player_b.overrides[k])
        tot_a += weight * table_a[op_a, op_b]
        tot_b += weight * table_b[op_a, op_b]
        weight *= delta
        if var_a != "always-I":
            sa, la = transition_codes(var_a, sa, la, op_a, op_b)
        if var_b != "always-I":
            sb, lb = transition_codes(var_b, sb, lb, op_b, op_a)
    return tot_a, tot_b


def best_deviation(theta: float, params: PayoffParams, situation: str) -> int:
    """Alice's most profitable one-shot deviation in a Trigger-2 situation.

    cooperate: anything but I against I. punish: I or Z against half-X /
    half-Y. locked (Alice on X, Bob on Y): I or Z against Y.
    """
    table = state_payoff_table(theta, params, "A")
    if situation == COOPERATE:
        cands = {op: table[op, OP_I] for op in (OP_X, OP_Y, OP_Z)}
    elif situation == PUNISH:
        cands = {op: 0.5 * (table[op, OP_X] + table[op, OP_Y]) for op in (OP_I, OP_Z)}
    elif situation == LOCKED:
        cands = {op: table[op, OP_Y] for op in (OP_I, OP_Z)}
    else:
        raise DomainError(f"unknown situation {situation!r}")
    return max(cands, key=lambda op: (cands[op], -op))


def trigger2_monte_carlo(theta: float, delta: float, params: PayoffParams, episodes: int,
                         seed: int) -> dict[str, tuple[float, float]]:
    """Forced-history estimates (mean, standard error) of the six Trigger-2 values."""
    seeds = np.random.SeedSequence(seed).generate_state(6)
    plan = {
        "v_coop": (COOPERATE, None),
        "v_dev1": (COOPERATE, best_deviation(theta, params, COOPERATE)),
        "v_punish": (PUNISH, None),
        "v_dev2": (PUNISH, best_deviation(theta, params, PUNISH)),
        "v_locked": (LOCKED, None),
        "v_dev3": (LOCKED, best_deviation(theta, params, LOCKED)),
    }
    out = {}
    for (name, (start, dev)), sd in zip(plan.items(), seeds):
        x = simulate_batch("trigger2", theta, delta, params, episodes, int(sd), start, dev)
        out[name] = (float(x.mean()), float(x.std(ddof=1) / np.sqrt(episodes)))
    return out


def analytic_total(player_a: Player, player_b: Player, theta: float, delta: float,
                   params: PayoffParams) -> float | None:
    """Alice's expected discounted total where a closed form applies, else None.

    Covers mutual cooperation and a single scripted deviation by Alice
    against a trigger opponent.
    """
    delta = check_delta(delta)
    r = params.r
    if player_b.overrides or (player_b.automaton is None and player_a.overrides):
        return None
    if not player_a.overrides:
        return geometric_total(r, delta)
    if len(player_a.overrides) != 1 or player_b.automaton is None:
        return None
    if player_a.automaton is None or player_a.automaton.variant != player_b.automaton.variant:
        return None
    (k, op), = player_a.overrides.items()
    if op == OP_I:
        return geometric_total(r, delta)
    stage = state_payoff_table(theta, params, "A")[op, OP_I]
    if player_b.automaton.variant == "trigger1":
        tail = trigger1_deviation_value(theta, delta, params) - params.t
    else:
        tail = delta * trigger2_values(theta, delta, params).v_punish
    return r * (1 - delta ** k) / (1 - delta) + delta ** k * (stage + tail)
