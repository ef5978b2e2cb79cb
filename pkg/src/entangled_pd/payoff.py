"""Stage-game payoffs: state expectation, closed-form pure payoff, bilinear mixed payoff."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quantum import CC, check_theta, evolve_operators, outcome_distribution

PLAYERS = ("A", "B")
SIMPLEX_TOL = 1e-12


@dataclass(frozen=True)
class PayoffParams:
    """Classical prisoner's dilemma payoffs with t > r > p > s >= 0."""

    t: float
    r: float
    p: float
    s: float

    def __post_init__(self):
        for name in ("t", "r", "p", "s"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise DomainError(f"payoff {name}={v!r} is not finite")
            object.__setattr__(self, name, float(v))
        if not (self.t > self.r > self.p > self.s >= 0):
            raise DomainError(
                f"payoffs must satisfy t > r > p > s >= 0, got "
                f"t={self.t:g}, r={self.r:g}, p={self.p:g}, s={self.s:g}"
            )

    @classmethod
    def from_string(cls, text: str) -> "PayoffParams":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise DomainError(f"expected 't,r,p,s', got {text!r}")
        try:
            values = [float(p) for p in parts]
        except ValueError as exc:
            raise DomainError(f"non-numeric payoff in {text!r}") from exc
        return cls(*values)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.t, self.r, self.p, self.s)

    @property
    def total(self) -> float:
        return self.t + self.r + self.p + self.s


@dataclass(frozen=True)
class BarredParams:
    t_bar: float
    r_bar: float
    p_bar: float
    s_bar: float


def _check_player(player: str) -> str:
    if player not in PLAYERS:
        raise DomainError(f"player must be 'A' or 'B', got {player!r}")
    return player


def as_mixed_strategy(probs, tol: float = SIMPLEX_TOL) -> np.ndarray:
    q = np.asarray(probs, dtype=float)
    if q.shape != (4,):
        raise DomainError(f"mixed strategy must have 4 probabilities, got shape {q.shape}")
    if q.min() < -tol or abs(q.sum() - 1.0) > tol:
        raise DomainError(f"not a probability vector over (I, X, Y, Z): {q.tolist()}")
    return q


def payoff_operator(params: PayoffParams, player: str = "A") -> np.ndarray:
    """Diagonal of the payoff observable over (CC, CD, DC, DD)."""
    t, r, p, s = params.as_tuple()
    if _check_player(player) == "A":
        return np.array([r, s, t, p])
    return np.array([r, t, s, p])


def expected_payoff(state, params: PayoffParams, player: str = "A") -> float:
    return float(outcome_distribution(state) @ payoff_operator(params, player))


def _payoff_a(xA, xB, theta, params):
    # |amplitude|^2 of each basis outcome, polynomial in the strategy
    # coordinates; broadcasts over leading axes and is valid off the sphere
    # (needed for polarization).
    aA, bA, gA, dA = np.moveaxis(np.asarray(xA, dtype=float), -1, 0)
    aB, bB, gB, dB = np.moveaxis(np.asarray(xB, dtype=float), -1, 0)
    sn, cs2 = np.sin(theta), np.cos(theta) ** 2
    t, r, p, s = params.as_tuple()
    cc = (aA * aB - dA * dB + sn * (bA * gB + gA * bB)) ** 2 + cs2 * (aA * dB + dA * aB) ** 2
    dd = (bA * bB - gA * gB + sn * (aA * dB + dA * aB)) ** 2 + cs2 * (bA * gB + gA * bB) ** 2
    dc = (gA * aB + bA * dB + sn * (-aA * bB + dA * gB)) ** 2 + cs2 * (bA * aB - gA * dB) ** 2
    cd = (gB * aA + bB * dA + sn * (-aB * bA + dB * gA)) ** 2 + cs2 * (bB * aA - gB * dA) ** 2
    return r * cc + p * dd + t * dc + s * cd


def pure_payoff(xA, xB, theta: float, params: PayoffParams, player: str = "A",
                check: bool = True):
    """Closed-form payoff of `player` when Alice plays xA and Bob plays xB.

    Inputs may carry leading batch axes; the last axis holds (alpha, beta,
    gamma, delta). With ``check=False`` normalization is not enforced.
    """
    theta = check_theta(theta)
    if check:
        for x in (xA, xB):
            n2 = np.sum(np.asarray(x, dtype=float) ** 2, axis=-1)
            if np.any(np.abs(n2 - 1.0) > 1e-12):
                raise DomainError("pure strategy not normalized")
    if _check_player(player) == "A":
        out = _payoff_a(xA, xB, theta, params)
    else:
        out = _payoff_a(xB, xA, theta, params)
    return float(out) if np.ndim(out) == 0 else out


def barred(params: PayoffParams, theta: float) -> BarredParams:
    theta = check_theta(theta)
    c2, s2 = np.cos(theta) ** 2, np.sin(theta) ** 2
    t, r, p, s = params.as_tuple()
    return BarredParams(
        t_bar=t * c2 + s * s2,
        r_bar=r * c2 + p * s2,
        p_bar=p * c2 + r * s2,
        s_bar=s * c2 + t * s2,
    )


def mixed_payoff_matrix(theta: float, params: PayoffParams) -> np.ndarray:
    """Alice's payoff for each Pauli pair; rows are Alice's operator, columns Bob's, order (I, X, Y, Z)."""
    b = barred(params, theta)
    t, r, p, s = params.as_tuple()
    return np.array([
        [r, b.s_bar, s, b.r_bar],
        [b.t_bar, p, b.p_bar, t],
        [t, b.p_bar, p, b.t_bar],
        [b.r_bar, s, b.s_bar, r],
    ])


def mixed_payoff(pA, pB, theta: float, params: PayoffParams, player: str = "A") -> float:
    pA, pB = as_mixed_strategy(pA), as_mixed_strategy(pB)
    A = mixed_payoff_matrix(theta, params)
    if _check_player(player) == "A":
        return float(pA @ A @ pB)
    return float(pB @ A @ pA)


def state_payoff_table(theta: float, params: PayoffParams, player: str = "A") -> np.ndarray:
    """4x4 stage payoffs for the Pauli pairs computed by evolving |CC>.

    Independent of `mixed_payoff_matrix`; the repeated-game simulator uses
    this table.
    """
    diag = payoff_operator(params, player)
    table = np.empty((4, 4))
    for i in range(4):
        for j in range(4):
            table[i, j] = outcome_distribution(evolve_operators(CC, i, j, theta)) @ diag
    return table


__all__ = [
    "PLAYERS", "PayoffParams", "BarredParams", "as_mixed_strategy",
    "payoff_operator", "expected_payoff", "pure_payoff", "barred",
    "mixed_payoff_matrix", "mixed_payoff", "state_payoff_table",
]
