"""Closed-form equilibria of the stage game and brute-force best-response checks."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NoEquilibrium
from .payoff import (
    PayoffParams,
    as_mixed_strategy,
    barred,
    mixed_payoff_matrix,
    pure_payoff,
)
from .quantum import as_pure_strategy, check_theta

VERIFY_TOL = 1e-9
DENOM_TOL = 1e-12
HALF_XY = np.array([0.0, 0.5, 0.5, 0.0])
HALF_IZ = np.array([0.5, 0.0, 0.0, 0.5])


@dataclass
class BestResponse:
    value: float
    argmax: np.ndarray


@dataclass
class EquilibriumCandidate:
    kind: str  # "pure" | "mixed"
    strategies: tuple
    payoffs: tuple
    theta: float
    params: PayoffParams
    label: str = ""
    notes: dict = field(default_factory=dict)

    def recomputed_payoffs(self) -> tuple[float, float]:
        a, b = self.strategies
        if self.kind == "pure":
            return (pure_payoff(a, b, self.theta, self.params, "A"),
                    pure_payoff(a, b, self.theta, self.params, "B"))
        A = mixed_payoff_matrix(self.theta, self.params)
        return (float(a @ A @ b), float(b @ A @ a))

    def is_consistent(self, tol: float = 1e-10) -> bool:
        return bool(np.allclose(self.recomputed_payoffs(), self.payoffs, atol=tol, rtol=0))

    def verify(self, tol: float = VERIFY_TOL) -> bool:
        a, b = self.strategies
        if self.kind == "pure":
            return verify_pure_equilibrium(a, b, self.theta, self.params, tol)
        return verify_mixed_equilibrium(a, b, self.theta, self.params, tol)


# ---------------------------------------------------------------- pure play

def response_matrix(xB, theta: float, params: PayoffParams) -> np.ndarray:
    """Symmetric M with pure_payoff(xA, xB) = xA^T M xA, built by polarization.

    Accepts a batch of opponent strategies (..., 4) and returns (..., 4, 4).
    """
    xB = np.asarray(xB, dtype=float)
    eye = np.eye(4)
    batch = xB.shape[:-1]
    M = np.empty(batch + (4, 4))
    diag = [pure_payoff(np.broadcast_to(eye[i], xB.shape), xB, theta, params, check=False)
            for i in range(4)]
    for i in range(4):
        M[..., i, i] = diag[i]
    for i in range(4):
        for j in range(i + 1, 4):
            both = pure_payoff(np.broadcast_to(eye[i] + eye[j], xB.shape), xB, theta, params,
                               check=False)
            M[..., i, j] = M[..., j, i] = 0.5 * (both - diag[i] - diag[j])
    return M


def best_response_pure(xB, theta: float, params: PayoffParams) -> BestResponse:
    """Alice's best pure reply to Bob's xB: top eigenpair of the response matrix.

    Bob's best reply to Alice's x is the same call with x in Bob's slot, since
    the game is symmetric under exchanging the players.
    """
    xB = as_pure_strategy(xB)
    check_theta(theta)
    w, v = np.linalg.eigh(response_matrix(xB, theta, params))
    arg = v[:, -1]
    # fix the sign so repeated calls agree
    k = int(np.argmax(np.abs(arg)))
    if arg[k] < 0:
        arg = -arg
    return BestResponse(value=float(w[-1]), argmax=arg)


def best_response_values(xB, theta: float, params: PayoffParams) -> np.ndarray:
    """Vectorized best-response value over a batch of opponent strategies."""
    return np.linalg.eigvalsh(response_matrix(xB, theta, params))[..., -1]


def pure_deviation_gains(xA, xB, theta: float, params: PayoffParams) -> tuple[float, float]:
    xA, xB = as_pure_strategy(xA), as_pure_strategy(xB)
    gain_a = best_response_pure(xB, theta, params).value - pure_payoff(xA, xB, theta, params, "A")
    gain_b = best_response_pure(xA, theta, params).value - pure_payoff(xA, xB, theta, params, "B")
    return float(gain_a), float(gain_b)


def verify_pure_equilibrium(xA, xB, theta: float, params: PayoffParams,
                            tol: float = VERIFY_TOL) -> bool:
    return max(pure_deviation_gains(xA, xB, theta, params)) <= tol


def maximal_transform(xB) -> np.ndarray:
    """Orthogonal matrix T(xB) with (alpha', beta', gamma', delta') = T xA.

    At maximal entanglement Alice's payoff is r a'^2 + p b'^2 + t g'^2.
    """
    a, b, g, d = as_pure_strategy(xB)
    return np.array([
        [a, g, b, -d],
        [d, b, -g, a],
        [-b, d, a, g],
        [g, -a, d, b],
    ])


def counter_strategy_maximal(xB) -> np.ndarray:
    """Alice's reply with gamma' = 1, worth t against any xB at theta = pi/2."""
    return maximal_transform(xB).T @ np.array([0.0, 0.0, 1.0, 0.0])


def pure_existence_threshold(params: PayoffParams) -> float:
    t, r, p, _ = params.as_tuple()
    return p / (t - r + p)


def classical_equilibrium(params: PayoffParams, theta: float = 0.0,
                          phi_a: float = 0.0, phi_b: float = 0.0) -> EquilibriumCandidate:
    """Mutual defection without entanglement: each player on the X-Y circle."""
    if theta != 0:
        raise DomainError(f"classical equilibrium requires theta = 0, got {theta!r}")
    xA = np.array([0.0, np.cos(phi_a), np.sin(phi_a), 0.0])
    xB = np.array([0.0, np.cos(phi_b), np.sin(phi_b), 0.0])
    return EquilibriumCandidate(
        kind="pure", strategies=(xA, xB), payoffs=(params.p, params.p), theta=0.0,
        params=params, label="classical-defect",
    )


def pure_equilibrium_family(phi: float, theta: float, params: PayoffParams) -> EquilibriumCandidate:
    theta = check_theta(theta)
    s2 = np.sin(theta) ** 2
    bound = pure_existence_threshold(params)
    if s2 > bound + 1e-12:
        raise NoEquilibrium(
            f"no pure equilibrium: sin^2(theta) = {s2:.6g} exceeds p/(t-r+p) = {bound:.6g}"
        )
    xA = np.array([0.0, np.cos(phi), np.sin(phi), 0.0])
    xB = np.array([0.0, np.sin(phi), np.cos(phi), 0.0])
    value = params.r * s2 + params.p * np.cos(theta) ** 2
    return EquilibriumCandidate(
        kind="pure", strategies=(xA, xB), payoffs=(value, value), theta=theta,
        params=params, label="pure-family", notes={"phi": phi},
    )


def improving_deviation_witness(xA, xB, theta: float, params: PayoffParams):
    """Return (player, best reply, gain) for the player who gains more by deviating."""
    xA, xB = as_pure_strategy(xA), as_pure_strategy(xB)
    br_a = best_response_pure(xB, theta, params)
    br_b = best_response_pure(xA, theta, params)
    gain_a = br_a.value - pure_payoff(xA, xB, theta, params, "A")
    gain_b = br_b.value - pure_payoff(xA, xB, theta, params, "B")
    if gain_a >= gain_b:
        return "A", br_a.argmax, float(gain_a)
    return "B", br_b.argmax, float(gain_b)


# --------------------------------------------------------------- mixed play

def mixed_deviation_gains(pA, pB, theta: float, params: PayoffParams) -> tuple[float, float]:
    """Largest gain from a pure-operator deviation, for Alice and for Bob.

    A best mixed reply to a fixed opponent is attained at a simplex vertex,
    so checking the four operators is exhaustive.
    """
    pA, pB = as_mixed_strategy(pA), as_mixed_strategy(pB)
    A = mixed_payoff_matrix(theta, params)
    gain_a = (A @ pB).max() - pA @ A @ pB
    gain_b = (A @ pA).max() - pB @ A @ pA
    return float(gain_a), float(gain_b)


def verify_mixed_equilibrium(pA, pB, theta: float, params: PayoffParams,
                             tol: float = VERIFY_TOL) -> bool:
    return max(mixed_deviation_gains(pA, pB, theta, params)) <= tol


def _mixed_candidate(pA, pB, theta, params, label, **notes) -> EquilibriumCandidate:
    A = mixed_payoff_matrix(theta, params)
    return EquilibriumCandidate(
        kind="mixed", strategies=(np.asarray(pA, float), np.asarray(pB, float)),
        payoffs=(float(pA @ A @ pB), float(pB @ A @ pA)), theta=theta, params=params,
        label=label, notes=notes,
    )


def interior_mixed_equilibrium(theta: float, params: PayoffParams):
    """Symmetric equilibrium that leaves the opponent indifferent, or None.

    Returns None when the equalizing vector leaves the simplex or the
    defining denominator vanishes.
    """
    theta = check_theta(theta)
    b = barred(params, theta)
    t, r, p, s = params.as_tuple()
    den = t + b.t_bar - r - b.r_bar - p - b.p_bar + s + b.s_bar
    if abs(den) < DENOM_TOL:
        return None
    p_iz = 0.5 * (s + b.s_bar - p - b.p_bar) / den
    p_xy = 0.5 * (t + b.t_bar - r - b.r_bar) / den
    star = np.array([p_iz, p_xy, p_xy, p_iz])
    if star.min() < 0 or star.max() > 1:
        return None
    return _mixed_candidate(star, star, theta, params, "interior")


def boundary_threshold(params: PayoffParams) -> float:
    """sin^2(theta) where the boundary equilibrium switches branch."""
    t, r, p, s = params.as_tuple()
    if t + s > r + p:
        return 2 * (p - s) / (t - r + p - s)
    return 2 * (t - r) / (t - r + p - s)


def boundary_mixed_equilibria(theta: float, params: PayoffParams) -> list[EquilibriumCandidate]:
    """Half-half equilibria on the simplex boundary, per regime of t + s vs r + p.

    At the exact branch threshold both branches are returned (both verify).
    """
    theta = check_theta(theta)
    t, r, p, s = params.as_tuple()
    s2 = np.sin(theta) ** 2
    out = []
    if t + s == r + p:
        return out
    bound = boundary_threshold(params)
    if t + s > r + p:
        if s2 <= bound:
            out.append(_mixed_candidate(HALF_XY, HALF_XY, theta, params, "boundary-xy-xy",
                                        threshold=bound))
        if s2 >= bound:
            out.append(_mixed_candidate(HALF_IZ, HALF_XY, theta, params, "boundary-iz-xy",
                                        threshold=bound))
    else:
        out.append(_mixed_candidate(HALF_XY, HALF_XY, theta, params, "boundary-xy-xy",
                                    threshold=bound))
        if s2 >= bound:
            out.append(_mixed_candidate(HALF_IZ, HALF_IZ, theta, params, "boundary-iz-iz",
                                        threshold=bound))
    return out


def closed_form_equilibria(theta: float, params: PayoffParams,
                           pure_only: bool = False) -> list[EquilibriumCandidate]:
    """Every closed-form equilibrium that exists at theta."""
    out = []
    if theta == 0:
        out.append(classical_equilibrium(params))
    else:
        try:
            out.append(pure_equilibrium_family(0.0, theta, params))
        except NoEquilibrium:
            pass
    if pure_only:
        return out
    interior = interior_mixed_equilibrium(theta, params)
    if interior is not None:
        out.append(interior)
    out.extend(boundary_mixed_equilibria(theta, params))
    return out
