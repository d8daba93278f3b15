"""Exception hierarchy shared by every oraclebench module."""


class OracleBenchError(Exception):
    """Base class for all errors raised by oraclebench."""


class DomainError(OracleBenchError, ValueError):
    """A value lies outside the range its register or function admits."""


class LayoutError(OracleBenchError, ValueError):
    """Unknown, overlapping or mismatched registers."""


class NotAPermutationError(OracleBenchError, ValueError):
    """A function table that had to be a bijection is not one."""


class OracleKindError(OracleBenchError, TypeError):
    """An oracle was applied through an entry point for a different kind."""


class ContractViolation(OracleBenchError, RuntimeError):
    """A precondition on the quantum state itself does not hold."""


class PromiseViolation(OracleBenchError, ValueError):
    """Images of the subset are neither identical nor disjoint."""


class AutomorphicGraphError(OracleBenchError, ValueError):
    """A graph has a non-trivial automorphism where none is allowed."""


class UnknownIdentityError(OracleBenchError, KeyError):
    """No construction identity is registered under the requested name."""
