"""Entangled quantum prisoner's dilemma and its infinite repetition."""
from .errors import DomainError, NoEquilibrium, NoPunishment
from .payoff import PayoffParams

__all__ = ["DomainError", "NoEquilibrium", "NoPunishment", "PayoffParams"]
__version__ = "0.1.0"
