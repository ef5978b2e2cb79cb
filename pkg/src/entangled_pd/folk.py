"""Mini-max values, feasible and individually rational payoff sets, folk-theorem checks."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .equilibria import best_response_pure, best_response_values
from .errors import DomainError, NoPunishment
from .payoff import PayoffParams, as_mixed_strategy, mixed_payoff_matrix, pure_payoff
from .quantum import check_theta

MEMBER_SLACK = 1e-9
HULL_SLACK = 1e-9


@dataclass
class MinimaxSolution:
    value: float
    strategy: np.ndarray  # the minimizing opponent strategy
    response: np.ndarray  # a best response of the punished player
    meta: dict = field(default_factory=dict)


# ----------------------------------------------------------- mixed mini-max

def _min_max_vertices(A: np.ndarray, tol: float = 1e-12):
    """min over q in the simplex of max_i (A q)_i, by enumerating LP bases.

    Variables (q, v); an optimal vertex has n of the 2n inequalities
    A q <= v, q >= 0 active together with sum(q) = 1.
    """
    m, n = A.shape
    G = np.vstack([np.hstack([A, -np.ones((m, 1))]), np.hstack([-np.eye(n), np.zeros((n, 1))])])
    best = None
    for active in itertools.combinations(range(m + n), n):
        K = np.vstack([G[list(active)], np.append(np.ones(n), 0.0)])
        rhs = np.append(np.zeros(n), 1.0)
        if abs(np.linalg.det(K)) < 1e-14:
            continue
        z = np.linalg.solve(K, rhs)
        if np.all(G @ z <= tol):
            if best is None or z[-1] < best[-1] - tol:
                best = z
    q = np.clip(best[:-1], 0, None)
    q /= q.sum()
    return float((A @ q).max()), q


def solve_matrix_game(A: np.ndarray) -> dict:
    """Value and optimal strategies of the zero-sum game where rows maximize A."""
    A = np.asarray(A, dtype=float)
    v_col, q = _min_max_vertices(A)
    neg, p = _min_max_vertices(-A.T)
    return {"value": v_col, "col_strategy": q, "row_strategy": p, "dual_value": -neg}


def minimax_mixed(theta: float, params: PayoffParams) -> MinimaxSolution:
    """Alice's mini-max value when both sides randomize over Pauli operators."""
    A = mixed_payoff_matrix(check_theta(theta), params)
    game = solve_matrix_game(A)
    q = game["col_strategy"]
    response = np.zeros(4)
    response[int(np.argmax(A @ q))] = 1.0
    return MinimaxSolution(
        value=game["value"], strategy=q, response=response,
        meta={"certificate": game["row_strategy"], "dual_value": game["dual_value"]},
    )


def duality_gap(theta: float, params: PayoffParams, solution: MinimaxSolution) -> float:
    A = mixed_payoff_matrix(theta, params)
    primal = (A @ solution.strategy).max()
    dual = (solution.meta["certificate"] @ A).min()
    return float(primal - dual)


# ------------------------------------------------------------ pure mini-max

_PSI = 1.533751168755204288118041  # real root of x^4 = x + 4


def sphere_lattice(n: int) -> np.ndarray:
    """n quasi-uniform unit 4-vectors (super-Fibonacci spiral)."""
    i = np.arange(n) + 0.5
    s = i / n
    r, R = np.sqrt(s), np.sqrt(1 - s)
    a = 2 * np.pi * i / np.sqrt(2)
    b = 2 * np.pi * i / _PSI
    return np.stack([r * np.sin(a), r * np.cos(a), R * np.sin(b), R * np.cos(b)], axis=-1)


def minimax_pure(theta: float, params: PayoffParams, grid: int = 10_000,
                 refine_tol: float = 1e-10, starts: int = 8) -> MinimaxSolution:
    """inf over Bob's pure strategy of Alice's best pure reply.

    The inner sup is exact (top eigenvalue). The outer inf is searched on a
    lattice of `grid` points and refined from the best `starts` of them, so
    the value is an upper bound on the true infimum.
    """
    theta = check_theta(theta)
    pts = sphere_lattice(grid)
    vals = best_response_values(pts, theta, params)

    def objective(y):
        n = np.linalg.norm(y)
        if n == 0:
            return np.inf
        return float(best_response_values(y / n, theta, params))

    best_x = pts[int(np.argmin(vals))]
    best_v = float(vals.min())
    for k in np.argsort(vals, kind="stable")[:starts]:
        res = minimize(objective, pts[k], method="Nelder-Mead",
                       options={"xatol": refine_tol, "fatol": refine_tol, "maxiter": 4000})
        if res.fun < best_v:
            best_v, best_x = float(res.fun), res.x / np.linalg.norm(res.x)
    br = best_response_pure(best_x, theta, params)
    return MinimaxSolution(
        value=best_v, strategy=best_x, response=br.argmax,
        meta={"grid": grid, "grid_value": float(vals.min()), "upper_bound": True},
    )


# ------------------------------------------------------------ payoff sets

def convex_hull(points) -> np.ndarray:
    """Counterclockwise hull vertices (monotone chain), collinear points dropped."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    pts = np.unique(np.round(pts, 12), axis=0)
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 1e-12:
            lower.pop()
        lower.append(p)
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 1e-12:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def polygon_area(vertices) -> float:
    v = np.asarray(vertices, dtype=float)
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def clip_halfplane(vertices, axis: int, bound: float) -> np.ndarray:
    """Keep the part of a convex polygon with coordinate `axis` >= bound."""
    v = np.asarray(vertices, dtype=float)
    out = []
    for k in range(len(v)):
        a, b = v[k], v[(k + 1) % len(v)]
        ina, inb = a[axis] >= bound, b[axis] >= bound
        if ina:
            out.append(a)
        if ina != inb:
            w = (bound - a[axis]) / (b[axis] - a[axis])
            out.append(a + w * (b - a))
    return np.array(out).reshape(-1, 2)


@dataclass
class FeasibleSet:
    vertices: np.ndarray  # (k, 2), counterclockwise
    theta: float
    sampling: str

    def contains(self, point, slack: float = HULL_SLACK) -> bool:
        v = self.vertices
        x = np.asarray(point, dtype=float)
        if len(v) == 1:
            return bool(np.linalg.norm(x - v[0]) <= slack)
        if len(v) == 2:
            d = v[1] - v[0]
            w = np.clip(np.dot(x - v[0], d) / np.dot(d, d), 0, 1)
            return bool(np.linalg.norm(v[0] + w * d - x) <= slack)
        for k in range(len(v)):
            a, b = v[k], v[(k + 1) % len(v)]
            edge = b - a
            cross = edge[0] * (x[1] - a[1]) - edge[1] * (x[0] - a[0])
            if cross < -slack * np.linalg.norm(edge):
                return False
        return True

    @property
    def area(self) -> float:
        return polygon_area(self.vertices)


def pauli_profiles(theta: float, params: PayoffParams) -> np.ndarray:
    """(Alice, Bob) payoff for each of the 16 Pauli operator pairs."""
    A = mixed_payoff_matrix(theta, params)
    return np.array([(A[i, j], A[j, i]) for i in range(4) for j in range(4)])


def pure_profiles(theta: float, params: PayoffParams, n: int, seed: int = 0) -> np.ndarray:
    """Profiles of n Haar-random pure strategy pairs (uniform on S^3 x S^3)."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((2, n, 4))
    x /= np.linalg.norm(x, axis=-1, keepdims=True)
    return np.stack([pure_payoff(x[0], x[1], theta, params, "A"),
                     pure_payoff(x[0], x[1], theta, params, "B")], axis=-1)


def feasible_set(theta: float, params: PayoffParams, sampling: str = "pauli-16",
                 n: int | None = None, seed: int = 0) -> FeasibleSet:
    theta = check_theta(theta)
    if sampling == "pauli-16":
        pts = pauli_profiles(theta, params)
    elif sampling == "pure-montecarlo":
        if n is None or n < 4:
            raise DomainError("pure-montecarlo sampling needs n >= 4 samples")
        pts = pure_profiles(theta, params, n, seed)
    else:
        raise DomainError(f"unknown sampling {sampling!r}; use 'pauli-16' or 'pure-montecarlo'")
    return FeasibleSet(convex_hull(pts), theta, sampling)


@dataclass
class IndividuallyRationalSet:
    hull: FeasibleSet
    cutoffs: tuple[float, float]

    def contains(self, point, slack: float = MEMBER_SLACK) -> bool:
        x = np.asarray(point, dtype=float)
        return (self.hull.contains(x, slack)
                and x[0] > self.cutoffs[0] + slack and x[1] > self.cutoffs[1] + slack)

    def region(self) -> np.ndarray:
        """Closure of the set as a convex polygon."""
        poly = clip_halfplane(self.hull.vertices, 0, self.cutoffs[0])
        if len(poly):
            poly = clip_halfplane(poly, 1, self.cutoffs[1])
        return poly

    def is_empty(self) -> bool:
        return polygon_area(self.region()) <= 1e-12


def individually_rational_set(theta: float, params: PayoffParams) -> IndividuallyRationalSet:
    nu = minimax_mixed(theta, params).value
    return IndividuallyRationalSet(feasible_set(theta, params), (nu, nu))


# ------------------------------------------------------------ theorems

def pure_spe_bound(params: PayoffParams) -> float:
    t, r, _, s = params.as_tuple()
    return (max(r, (t + s) / 2) - s) / (t - s)


def pure_spe_exists(theta: float, params: PayoffParams) -> bool:
    return bool(np.sin(check_theta(theta)) ** 2 < pure_spe_bound(params))


@dataclass(frozen=True)
class AntiFolkReport:
    threshold_holds: bool
    vstar_contains_rr: bool
    pareto_dominated: bool

    def as_tuple(self) -> tuple[bool, bool, bool]:
        return (self.threshold_holds, self.vstar_contains_rr, self.pareto_dominated)


def anti_folk_check(params: PayoffParams) -> AntiFolkReport:
    """Three indicators for mutual cooperation at maximal entanglement.

    They are reported separately because the threshold r >= (t+s)/2 and
    membership of (r, r) above the mixed mini-max cutoff can disagree.
    """
    t, r, _, s = params.as_tuple()
    vstar = individually_rational_set(np.pi / 2, params)
    return AntiFolkReport(
        threshold_holds=r >= (t + s) / 2,
        vstar_contains_rr=vstar.contains((r, r)),
        pareto_dominated=r < (t + s) / 2,
    )


def mutual_minimax_profile(theta: float, params: PayoffParams) -> tuple[np.ndarray, np.ndarray]:
    """Each player holds the other to the mixed mini-max value."""
    q = minimax_mixed(theta, params).strategy
    return q.copy(), q.copy()


def profile_payoffs(profile, theta: float, params: PayoffParams) -> tuple[float, float]:
    pA, pB = (as_mixed_strategy(x) for x in profile)
    A = mixed_payoff_matrix(theta, params)
    return float(pA @ A @ pB), float(pB @ A @ pA)


def punishment_horizon(target, theta: float, params: PayoffParams, punishment=None) -> int:
    """Smallest T with d_i < T (payoff_i(target) - payoff_i(punishment)) for both players.

    d_i is the best one-shot gain from deviating against the target; the
    punishment defaults to mutual mini-max play.
    """
    theta = check_theta(theta)
    if punishment is None:
        punishment = mutual_minimax_profile(theta, params)
    pA, pB = (as_mixed_strategy(x) for x in target)
    A = mixed_payoff_matrix(theta, params)
    goal = profile_payoffs((pA, pB), theta, params)
    punished = profile_payoffs(punishment, theta, params)
    d = ((A @ pB).max() - goal[0], (A @ pA).max() - goal[1])
    T = 1
    for d_i, g, m in zip(d, goal, punished):
        gap = g - m
        if gap <= 1e-12:
            raise NoPunishment(
                f"target payoff {g:.6g} does not exceed punishment payoff {m:.6g}"
            )
        T = max(T, math.floor(d_i / gap + 1e-9) + 1)
    return T
