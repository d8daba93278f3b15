"""Oracle conversions as composed circuits, and a checker against the direct oracles.

Each ``build_*`` function applies a composite circuit to ``state`` and spends
queries on the oracles it is handed.  Passing ``reverse=True`` runs the same
circuit backwards gate by gate (each oracle call becomes an inverse call).
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, UnknownIdentityError
from .oracles import (
    CountedOracle,
    FunctionTable,
    OracleKind,
    Permutation,
    apply_bit_phase,
    apply_bit_standard,
    apply_minimal,
    apply_oracle,
    apply_phase,
    apply_standard,
)
from .statevector import (
    RegisterLayout,
    StateVector,
    apply_adder,
    apply_adder_inverse,
    apply_hadamard_layer,
    apply_parity_reflection,
    apply_qft,
    apply_swap,
    prepare_basis,
    prepare_product,
)

EXHAUSTIVE_CAP_TWO_REGISTER = 3
RANDOM_STATES = 100
MAX_IDENTITY_QUBITS = 6
PERMUTATION_TOL = 1e-12
QFT_TOL = 1e-10


def build_phase_from_standard(s_f: CountedOracle, state, x_reg, b_reg, reverse=False):
    """(I x F) S_f (I x F^-1), which equals P_f."""
    apply_qft(state, b_reg, inverse=True)
    apply_standard(s_f, state, x_reg, b_reg, inverse=reverse)
    return apply_qft(state, b_reg)


def build_standard_from_phase(p_f: CountedOracle, state, x_reg, b_reg, reverse=False):
    """(I x F^-1) P_f (I x F), which equals S_f."""
    apply_qft(state, b_reg)
    apply_phase(p_f, state, x_reg, b_reg, inverse=reverse)
    return apply_qft(state, b_reg, inverse=True)


def build_inverse_by_reflection(oracle: CountedOracle, state, x_reg, b_reg, reverse=False):
    """(I x R) O (I x R) for O a standard or Fourier phase oracle; equals O^-1."""
    if oracle.kind not in (OracleKind.STANDARD, OracleKind.FOURIER_PHASE):
        raise DomainError(f"reflection identity needs a standard or Fourier phase oracle, got {oracle.kind.value}")
    apply_parity_reflection(state, b_reg)
    apply_oracle(oracle, state, x_reg, b_reg, inverse=reverse)
    return apply_parity_reflection(state, b_reg)


def build_standard_from_minimal(m_f: CountedOracle, state, x_reg, b_reg, reverse=False):
    """(M_f^-1 x I) A (M_f x I), which equals S_f: one forward and one inverse query."""
    if not reverse:
        apply_minimal(m_f, state, x_reg)
        apply_adder(state, x_reg, b_reg)
        return apply_minimal(m_f, state, x_reg, inverse=True)
    apply_minimal(m_f, state, x_reg)
    apply_adder_inverse(state, x_reg, b_reg)
    return apply_minimal(m_f, state, x_reg, inverse=True)


def build_minimal_from_standard_pair(s_f: CountedOracle, s_finv: CountedOracle, state, x_reg, b_reg,
                                     reverse=False):
    """(S_{f^-1})^-1 X S_f.  Acts as M_f x I when ``b_reg`` starts in |0>.

    For b != 0 the circuit sends |x>|b> to |b + f(x)>|x - f^-1(b + f(x))>,
    so the M_f x I reading only holds on the clean-ancilla subspace.
    """
    if not reverse:
        apply_standard(s_f, state, x_reg, b_reg)
        apply_swap(state, x_reg, b_reg)
        return apply_standard(s_finv, state, x_reg, b_reg, inverse=True)
    apply_standard(s_finv, state, x_reg, b_reg)
    apply_swap(state, x_reg, b_reg)
    return apply_standard(s_f, state, x_reg, b_reg, inverse=True)


def build_bitwise_equivalences(oracle: CountedOracle, state, x_reg, b_reg, direction="to_phase", reverse=False):
    """Hadamard-layer conjugation between the bit-string standard and phase oracles.

    ``to_phase``: (I x H^n) S^bit (I x H^n) = P^bit, ``to_standard`` the dual.
    H^n is its own inverse, so both directions have the same shape.
    """
    if direction == "to_phase":
        apply = apply_bit_standard
    elif direction == "to_standard":
        apply = apply_bit_phase
    else:
        raise ValueError(f"direction must be 'to_phase' or 'to_standard', got {direction!r}")
    apply_hadamard_layer(state, b_reg)
    apply(oracle, state, x_reg, b_reg, inverse=reverse)
    return apply_hadamard_layer(state, b_reg)


# ---------------------------------------------------------------------------
# verification


@dataclass
class IdentityCheckResult:
    identity_name: str
    n: int
    mode: str
    max_deviation: float
    tolerance: float
    queries_used: dict = field(default_factory=dict)
    passed: bool = False

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


@dataclass
class _Identity:
    """One identity: how to run the composite, how to run the target directly."""

    name: str
    tolerance: float
    oracle_kinds: dict  # label -> (kind, use inverse function?)
    composite: Callable
    direct: Callable
    target_kind: OracleKind
    clean_ancilla: bool = False
    expected_queries: dict = field(default_factory=dict)


def _direct(inverse=False):
    def run(oracle, state, x, b):
        return apply_oracle(oracle, state, x, b, inverse=inverse)
    return run


def _direct_minimal(oracle, state, x, b):
    return apply_minimal(oracle, state, x)


IDENTITIES = {
    ident.name: ident
    for ident in [
        _Identity(
            "phase_from_standard", QFT_TOL,
            {"S_f": (OracleKind.STANDARD, False)},
            lambda o, s, x, b, reverse=False: build_phase_from_standard(o["S_f"], s, x, b, reverse),
            _direct(), OracleKind.FOURIER_PHASE,
            expected_queries={"S_f": 1},
        ),
        _Identity(
            "standard_from_phase", QFT_TOL,
            {"P_f": (OracleKind.FOURIER_PHASE, False)},
            lambda o, s, x, b, reverse=False: build_standard_from_phase(o["P_f"], s, x, b, reverse),
            _direct(), OracleKind.STANDARD,
            expected_queries={"P_f": 1},
        ),
        _Identity(
            "standard_inverse_by_reflection", PERMUTATION_TOL,
            {"S_f": (OracleKind.STANDARD, False)},
            lambda o, s, x, b, reverse=False: build_inverse_by_reflection(o["S_f"], s, x, b, reverse),
            _direct(inverse=True), OracleKind.STANDARD,
            expected_queries={"S_f": 1},
        ),
        _Identity(
            "phase_inverse_by_reflection", PERMUTATION_TOL,
            {"P_f": (OracleKind.FOURIER_PHASE, False)},
            lambda o, s, x, b, reverse=False: build_inverse_by_reflection(o["P_f"], s, x, b, reverse),
            _direct(inverse=True), OracleKind.FOURIER_PHASE,
            expected_queries={"P_f": 1},
        ),
        _Identity(
            "standard_from_minimal", PERMUTATION_TOL,
            {"M_f": (OracleKind.MINIMAL, False)},
            lambda o, s, x, b, reverse=False: build_standard_from_minimal(o["M_f"], s, x, b, reverse),
            _direct(), OracleKind.STANDARD,
            expected_queries={"M_f": 1, "M_f^-1": 1},
        ),
        _Identity(
            "minimal_from_standard_pair", PERMUTATION_TOL,
            {"S_f": (OracleKind.STANDARD, False), "S_finv": (OracleKind.STANDARD, True)},
            lambda o, s, x, b, reverse=False: build_minimal_from_standard_pair(o["S_f"], o["S_finv"], s, x, b, reverse),
            _direct_minimal, OracleKind.MINIMAL, clean_ancilla=True,
            expected_queries={"S_f": 1, "S_finv^-1": 1},
        ),
        _Identity(
            "bit_phase_from_bit_standard", PERMUTATION_TOL,
            {"Sbit_f": (OracleKind.BIT_STANDARD, False)},
            lambda o, s, x, b, reverse=False: build_bitwise_equivalences(o["Sbit_f"], s, x, b, "to_phase", reverse),
            _direct(), OracleKind.BIT_PHASE,
            expected_queries={"Sbit_f": 1},
        ),
        _Identity(
            "bit_standard_from_bit_phase", PERMUTATION_TOL,
            {"Pbit_f": (OracleKind.BIT_PHASE, False)},
            lambda o, s, x, b, reverse=False: build_bitwise_equivalences(o["Pbit_f"], s, x, b, "to_standard", reverse),
            _direct(), OracleKind.BIT_STANDARD,
            expected_queries={"Pbit_f": 1},
        ),
    ]
}

IDENTITY_NAMES = tuple(IDENTITIES)


def _oracles_for(ident: _Identity, function: FunctionTable) -> dict:
    out = {}
    for label, (kind, use_inverse) in ident.oracle_kinds.items():
        table = function
        if use_inverse:
            table = Permutation(function.n, function.images).inverse()
        out[label] = CountedOracle(kind, table, name=label)
    return out


def _query_snapshot(oracles: dict) -> dict:
    used = {}
    for label, oracle in oracles.items():
        if oracle.forward_queries:
            used[label] = oracle.forward_queries
        if oracle.inverse_queries:
            used[label + "^-1"] = oracle.inverse_queries
    return used


def _input_states(ident, n, mode, rng):
    """Yield input states over registers ``x`` and ``b``."""
    layout = RegisterLayout((("x", n), ("b", n)))
    size = 1 << n
    if mode == "exhaustive":
        b_values = [0] if ident.clean_ancilla else range(size)
        for x in range(size):
            for b in b_values:
                yield prepare_basis(layout, {"x": x, "b": b})
        return
    for _ in range(RANDOM_STATES):
        if ident.clean_ancilla:
            vec = rng.normal(size=size) + 1j * rng.normal(size=size)
            yield prepare_product(layout, {"x": vec / np.linalg.norm(vec)})
        else:
            vec = rng.normal(size=size * size) + 1j * rng.normal(size=size * size)
            yield StateVector(layout, vec / np.linalg.norm(vec))


def _faulty(function: FunctionTable) -> FunctionTable:
    images = function.images.copy()
    images[[0, 1]] = images[[1, 0]]
    return type(function)(function.n, images)


def verify_identity(name: str, n: int, perm: FunctionTable | None = None, seed: int | None = None,
                    mode: str | None = None, inject_fault: bool = False) -> IdentityCheckResult:
    """Run the composite and the direct oracle on the same inputs and compare.

    ``perm`` defaults to a random permutation drawn from ``seed``.  ``mode``
    defaults to ``exhaustive`` up to n = 3 and ``random`` above.  The
    ``minimal_from_standard_pair`` identity is checked on inputs with the
    second register in |0>, the only place it holds.  ``inject_fault`` gives
    the direct side a perturbed function (used to exercise the failure path).
    """
    if name not in IDENTITIES:
        raise UnknownIdentityError(f"unknown identity {name!r}; known: {', '.join(IDENTITY_NAMES)}")
    if not 1 <= n <= MAX_IDENTITY_QUBITS:
        raise DomainError(f"n = {n} outside 1..{MAX_IDENTITY_QUBITS}")
    ident = IDENTITIES[name]
    rng = np.random.default_rng(seed)
    if perm is None:
        perm = Permutation.random(n, rng)
    if perm.n != n:
        raise DomainError(f"permutation acts on {perm.n} qubits, expected {n}")
    if mode is None:
        mode = "exhaustive" if n <= EXHAUSTIVE_CAP_TWO_REGISTER else "random"
    if mode not in ("exhaustive", "random"):
        raise ValueError(f"mode must be 'exhaustive' or 'random', got {mode!r}")

    oracles = _oracles_for(ident, perm)
    target = CountedOracle(ident.target_kind, _faulty(perm) if inject_fault else perm, name="target")
    worst = 0.0
    applications = 0
    per_application = None
    for state in _input_states(ident, n, mode, rng):
        expected = ident.direct(target, state.copy(), "x", "b")
        before = _query_snapshot(oracles)
        got = ident.composite(oracles, state, "x", "b")
        used = {k: v - before.get(k, 0) for k, v in _query_snapshot(oracles).items()}
        used = {k: v for k, v in used.items() if v}
        if per_application is None:
            per_application = used
        elif used != per_application:
            raise AssertionError(f"{name}: query usage changed between applications: {per_application} vs {used}")
        applications += 1
        worst = max(worst, float(np.max(np.abs(got.amplitudes - expected.amplitudes))))
    return IdentityCheckResult(
        identity_name=name,
        n=n,
        mode=mode,
        max_deviation=worst,
        tolerance=ident.tolerance,
        queries_used=per_application or {},
        passed=worst <= ident.tolerance,
    )


def expected_queries(name: str) -> dict:
    return dict(IDENTITIES[name].expected_queries)


def run_composite(name: str, perm: FunctionTable, state: StateVector, x_reg="x", b_reg="b", reverse=False):
    """Apply identity ``name``'s composite circuit; returns ``(state, oracles)``."""
    if name not in IDENTITIES:
        raise UnknownIdentityError(f"unknown identity {name!r}")
    ident = IDENTITIES[name]
    oracles = _oracles_for(ident, perm)
    return ident.composite(oracles, state, x_reg, b_reg, reverse=reverse), oracles
