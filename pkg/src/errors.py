"""
Exception hierarchy shared by the engine, the families and the CLI.
"""


class EngineError(Exception):
    """Base class for every error raised by the engine."""


class ContractViolation(EngineError, ValueError):
    pass


class PresentationMismatch(ContractViolation):
    pass


class RelationViolation(ContractViolation):
    pass


class UsageError(ContractViolation):
    pass


class RewritingError(EngineError, RuntimeError):
    pass


class WindowExceeded(EngineError, RuntimeError):
    """A computation needs vertices outside the safe part of the window."""


class InjectiveInput(EngineError, ValueError):
    pass
