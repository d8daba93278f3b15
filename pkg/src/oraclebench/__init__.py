"""Statevector simulation of quantum oracles: conversions, query counts and promise circuits."""

__version__ = "0.1.0"

from .errors import (
    AutomorphicGraphError,
    ContractViolation,
    DomainError,
    LayoutError,
    NotAPermutationError,
    OracleBenchError,
    OracleKindError,
    PromiseViolation,
    UnknownIdentityError,
)
from .oracles import CountedOracle, FunctionTable, OracleKind, Permutation, query_count
from .statevector import RegisterLayout, StateVector, Tolerance
