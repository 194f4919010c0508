"""Exception hierarchy for SigmaLab.

Everything derives from ValueError so callers that guard input with
``except ValueError`` keep working.
"""


class SigmaLabError(ValueError):
    """Base class for all domain errors."""


class PermutationError(SigmaLabError):
    pass


class GroupError(SigmaLabError):
    pass


class NotNormalError(GroupError):
    pass


class OrderCapExceeded(GroupError):
    def __init__(self, order: int, cap: int):
        super().__init__(f"group order {order} exceeds the materialization cap {cap}")
        self.order = order
        self.cap = cap


class SigmaError(SigmaLabError):
    pass


class CatalogError(SigmaLabError):
    pass


class ConfigError(SigmaLabError):
    pass
