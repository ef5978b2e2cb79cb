class DomainError(ValueError):
    """An input falls outside the domain an operation is defined on."""


class NoEquilibrium(Exception):
    """The requested closed-form equilibrium does not exist for these inputs."""


class NoPunishment(Exception):
    """The target profile cannot be enforced by mini-max punishment."""
