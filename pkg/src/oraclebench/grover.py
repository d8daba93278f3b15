"""Inverting a permutation with Grover search over standard-oracle queries.

Registers: ``first`` holds the target y, ``second`` the search variable x,
``third`` is scratch for f(x) and ``fourth`` is the one-qubit flag.  The
marking oracle computes f(x) into ``third``, compares it with ``first``,
flags equality in ``fourth`` and uncomputes ``third``.  It therefore costs
two standard-oracle queries per call.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Iterable

import numpy as np

from .errors import ContractViolation, DomainError
from .oracles import CountedOracle, OracleKind, Permutation, apply_standard, apply_standard_inverse
from .statevector import (
    DEFAULT_TOLERANCE,
    RegisterLayout,
    StateVector,
    apply_diffusion,
    apply_equality_comparator,
    apply_hadamard,
    apply_hadamard_layer,
    measure_probability,
    prepare_basis,
    sample_measurement,
)

MAX_GROVER_QUBITS = 8
REGISTERS = ("first", "second", "third", "fourth")


@dataclass
class InversionRun:
    n: int
    y: int
    iterations: int
    sf_queries: int
    success_probability: float
    measured_x: int | None = None
    seed: int | None = None

    def to_dict(self):
        return asdict(self)


def grover_layout(n: int) -> RegisterLayout:
    return RegisterLayout((("first", n), ("second", n), ("third", n), ("fourth", 1)))


def iteration_count(n: int) -> int:
    """floor(pi/4 * sqrt(N)), at least 1."""
    return max(1, math.floor(math.pi / 4 * math.sqrt(1 << n)))


def closed_form_success(n: int, iterations: int) -> float:
    """sin^2((2k+1) theta) with sin(theta) = N^-1/2, single marked item."""
    theta = math.asin(1 / math.sqrt(1 << n))
    return math.sin((2 * iterations + 1) * theta) ** 2


def apply_marking_oracle(oracle: CountedOracle, state: StateVector, regs=REGISTERS, tol=DEFAULT_TOLERANCE):
    """Flip the ``fourth`` qubit where second = f^-1(first), using S_f and S_f^-1."""
    first, second, third, fourth = regs
    leak = 1.0 - measure_probability(state, third, 0)
    if leak > tol.abs_eps:
        raise ContractViolation(f"scratch register {third!r} must be |0>; weight elsewhere is {leak:.3g}")
    apply_standard(oracle, state, second, third)
    apply_equality_comparator(state, first, third, (fourth, 0))
    apply_standard_inverse(oracle, state, second, third)
    return state


def grover_invert(perm: Permutation, y: int, mode: str = "exact", seed: int | None = None,
                  iterations: int | None = None) -> InversionRun:
    """Search for f^-1(y); ``mode`` is ``"exact"`` or ``"sampled"``."""
    n = perm.n
    if not 0 <= y < perm.size:
        raise DomainError(f"y = {y} out of range for n = {n}")
    if mode not in ("exact", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    if n > MAX_GROVER_QUBITS:
        raise DomainError(f"n = {n} exceeds the simulation cap of {MAX_GROVER_QUBITS}")
    k = iteration_count(n) if iterations is None else int(iterations)
    oracle = CountedOracle(OracleKind.STANDARD, perm, name="S_f")

    state = prepare_basis(grover_layout(n), {"first": y, "fourth": 1})
    apply_hadamard_layer(state, "second")
    apply_hadamard(state, "fourth", 0)  # |1> -> |->, so the flag flip becomes a phase flip
    for _ in range(k):
        apply_marking_oracle(oracle, state)
        apply_diffusion(state, "second")

    target = perm.preimage(y)
    run = InversionRun(
        n=n,
        y=y,
        iterations=k,
        sf_queries=oracle.queries,
        success_probability=measure_probability(state, "second", target),
        seed=seed,
    )
    if mode == "sampled":
        run.measured_x, _ = sample_measurement(state, "second", seed)
    return run


@dataclass
class ScalingRow:
    n: int
    N: int
    iterations: int
    sf_queries: int
    mean_success_probability: float

    def within_bound(self) -> bool:
        return self.sf_queries <= 2 * math.ceil(math.pi / 4 * math.sqrt(self.N))


CSV_HEADER = ("n", "N", "iterations", "sf_queries", "mean_success_probability")


def query_scaling_table(n_range: Iterable[int], perms_per_n: int = 1, seed: int = 0) -> list[ScalingRow]:
    """One row per n, averaging success over seeded random (permutation, y) pairs.

    Instance ``j`` at size ``n`` draws from ``default_rng((seed, n, j))``.
    """
    rows = []
    for n in n_range:
        if not 1 <= n <= MAX_GROVER_QUBITS:
            raise DomainError(f"n = {n} outside 1..{MAX_GROVER_QUBITS}")
        probs = []
        queries = set()
        k = iteration_count(n)
        for j in range(perms_per_n):
            rng = np.random.default_rng((seed, n, j))
            perm = Permutation.random(n, rng)
            y = int(rng.integers(0, 1 << n))
            run = grover_invert(perm, y)
            probs.append(run.success_probability)
            queries.add(run.sf_queries)
        if len(queries) != 1:
            raise AssertionError(f"query count varied across instances at n={n}: {sorted(queries)}")
        rows.append(ScalingRow(n, 1 << n, k, queries.pop(), float(np.mean(probs))))
    return rows
