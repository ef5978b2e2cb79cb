"""Two-qubit linear algebra for the entangled prisoner's dilemma.

Basis order is fixed to (CC, CD, DC, DD) with |C> = |0>, |D> = |1>; the
first tensor factor belongs to Alice.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError

BASIS = ("CC", "CD", "DC", "DD")
OPERATORS = ("I", "X", "Y", "Z")

NORM_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, X, Y, Z)

YY = np.kron(Y, Y)

#: unit 4-vectors on S^3 for the four Pauli strategies (I, iX, iY, iZ)
PAULI_POINTS = np.eye(4)

CC = np.array([1, 0, 0, 0], dtype=complex)


def check_theta(theta: float) -> float:
    theta = float(theta)
    if not (0.0 <= theta <= np.pi / 2 + 1e-12):
        raise DomainError(f"entanglement angle {theta!r} outside [0, pi/2]")
    return theta


def as_pure_strategy(x, tol: float = NORM_TOL) -> np.ndarray:
    """Validate a pure strategy (alpha, beta, gamma, delta) on the unit 3-sphere."""
    x = np.asarray(x, dtype=float)
    if x.shape != (4,):
        raise DomainError(f"pure strategy must have 4 components, got shape {x.shape}")
    norm2 = float(x @ x)
    if abs(norm2 - 1.0) > tol:
        raise DomainError(f"pure strategy not normalized: |x|^2 = {norm2!r}")
    return x


def as_state(state, tol: float = NORM_TOL) -> np.ndarray:
    psi = np.asarray(state, dtype=complex)
    if psi.shape != (4,):
        raise DomainError(f"two-qubit state must have 4 amplitudes, got shape {psi.shape}")
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > tol:
        raise DomainError(f"state not normalized: |psi|^2 = {norm2!r}")
    return psi


def basis_state(label: str) -> np.ndarray:
    if label not in BASIS:
        raise DomainError(f"unknown basis label {label!r}; expected one of {BASIS}")
    psi = np.zeros(4, dtype=complex)
    psi[BASIS.index(label)] = 1.0
    return psi


def entangler(theta: float) -> np.ndarray:
    """exp(i theta/2 Y(x)Y) = cos(theta/2) I + i sin(theta/2) Y(x)Y."""
    theta = check_theta(theta)
    return np.cos(theta / 2) * np.eye(4, dtype=complex) + 1j * np.sin(theta / 2) * YY


def strategy_unitary(x) -> np.ndarray:
    """alpha I + i (beta X + gamma Y + delta Z)."""
    a, b, g, d = as_pure_strategy(x)
    return a * I2 + 1j * (b * X + g * Y + d * Z)


def is_unitary(u: np.ndarray, tol: float = NORM_TOL) -> bool:
    u = np.asarray(u)
    return bool(np.allclose(u @ u.conj().T, np.eye(u.shape[0]), atol=tol, rtol=0))


def game_operator(xA, xB, theta: float) -> np.ndarray:
    """J^dagger (U_A (x) U_B) J as a 4x4 matrix."""
    j = entangler(theta)
    return j.conj().T @ np.kron(strategy_unitary(xA), strategy_unitary(xB)) @ j


def evolve(state, xA, xB, theta: float) -> np.ndarray:
    psi = as_state(state)
    return game_operator(xA, xB, theta) @ psi


def evolve_operators(state, op_a: int, op_b: int, theta: float) -> np.ndarray:
    """`evolve` for Pauli strategies given by index into OPERATORS."""
    return evolve(state, PAULI_POINTS[op_a], PAULI_POINTS[op_b], theta)


def outcome_distribution(state) -> np.ndarray:
    psi = as_state(state)
    return np.abs(psi) ** 2
