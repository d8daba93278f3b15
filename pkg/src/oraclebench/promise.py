"""Deciding whether alpha(S) and beta(S) are identical or disjoint.

The circuit prepares two copies of |S>, sends them through the minimal
oracles for alpha and beta, and interferes them with an ancilla-controlled
swap.  The ancilla starts in |1>, so outcome 0 is the antisymmetric branch.
It can only occur when the two images differ.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, LayoutError, PromiseViolation
from .oracles import CountedOracle, OracleKind, Permutation, apply_minimal, apply_standard
from .statevector import (
    RegisterLayout,
    StateVector,
    apply_controlled_swap,
    apply_hadamard,
    measure_probability,
    prepare_product,
    sample_measurement,
    uniform_vector,
)

IDENTICAL = "identical"
DISJOINT = "disjoint"
VERDICT_DISJOINT = "disjoint"
VERDICT_IDENTICAL = "identical-with-confidence"
MAX_PROMISE_QUBITS = 10
_KET_ONE = np.array([0.0, 1.0], dtype=np.complex128)


class PromiseInstance:
    def __init__(self, alpha: Permutation, beta: Permutation, subset):
        if alpha.n != beta.n:
            raise DomainError("alpha and beta act on different sizes")
        subset = sorted(set(int(s) for s in subset))
        if not subset:
            raise DomainError("subset must be non-empty")
        if subset[0] < 0 or subset[-1] >= alpha.size:
            raise DomainError(f"subset element out of range for n = {alpha.n}")
        self.n = alpha.n
        self.alpha = alpha
        self.beta = beta
        self.subset = tuple(subset)
        self.subset_state = uniform_vector(self.n, subset)
        image_a = set(alpha.images[list(subset)].tolist())
        image_b = set(beta.images[list(subset)].tolist())
        if image_a == image_b:
            self.case = IDENTICAL
        elif image_a.isdisjoint(image_b):
            self.case = DISJOINT
        else:
            raise PromiseViolation(
                f"images share {len(image_a & image_b)} of {len(subset)} elements: neither identical nor disjoint"
            )

    def __repr__(self):
        return f"PromiseInstance(n={self.n}, |S|={len(self.subset)}, case={self.case})"


def random_subset(n: int, size: int, rng) -> list[int]:
    if not 1 <= size <= 1 << n:
        raise DomainError(f"subset size {size} outside 1..{1 << n}")
    return sorted(int(v) for v in rng.choice(1 << n, size=size, replace=False))


def _derangement(items, rng):
    """Uniform fixed-point-free rearrangement of ``items`` (rejection sampling)."""
    items = list(items)
    if len(items) == 1:
        raise DomainError("a single element has no fixed-point-free rearrangement")
    while True:
        shuffled = list(rng.permutation(items))
        if all(a != b for a, b in zip(items, shuffled)):
            return [int(v) for v in shuffled]


def identical_instance(n: int, subset_size: int, seed, fixed_point_free: bool = False) -> PromiseInstance:
    """beta = alpha . sigma with sigma permuting S onto itself."""
    rng = np.random.default_rng(seed)
    alpha = Permutation.random(n, rng)
    subset = random_subset(n, subset_size, rng)
    sigma = np.arange(1 << n)
    if fixed_point_free:
        sigma[subset] = _derangement(subset, rng)
    else:
        sigma[subset] = rng.permutation(subset)
    beta = alpha.compose(Permutation(n, sigma))
    return PromiseInstance(alpha, beta, subset)


def disjoint_instance(n: int, subset_size: int, seed) -> PromiseInstance:
    """beta = tau . alpha with tau swapping alpha(S) with a disjoint set."""
    if not 1 <= subset_size <= (1 << n) // 2:
        raise DomainError(f"disjoint images need 1 <= |S| <= {(1 << n) // 2}, got {subset_size}")
    rng = np.random.default_rng(seed)
    alpha = Permutation.random(n, rng)
    subset = random_subset(n, subset_size, rng)
    image = alpha.images[subset]
    outside = np.setdiff1d(np.arange(1 << n), image)
    targets = rng.choice(outside, size=subset_size, replace=False)
    tau = np.arange(1 << n)
    tau[image] = targets
    tau[targets] = image
    beta = Permutation(n, tau).compose(alpha)
    return PromiseInstance(alpha, beta, subset)


def make_instance(n: int, subset_size: int, case: str, seed, fixed_point_free: bool = False) -> PromiseInstance:
    if case == IDENTICAL:
        return identical_instance(n, subset_size, seed, fixed_point_free)
    if case == DISJOINT:
        return disjoint_instance(n, subset_size, seed)
    raise DomainError(f"case must be {IDENTICAL!r} or {DISJOINT!r}, got {case!r}")


# ---------------------------------------------------------------------------
# the circuit


def _figure1_state(instance: PromiseInstance, m_alpha: CountedOracle, m_beta: CountedOracle) -> StateVector:
    n = instance.n
    layout = RegisterLayout((("a", n), ("b", n), ("anc", 1)))
    s_vec = instance.subset_state
    state = prepare_product(layout, {"a": s_vec, "b": s_vec, "anc": _KET_ONE})
    apply_hadamard(state, "anc", 0)
    apply_minimal(m_alpha, state, "a")
    apply_minimal(m_beta, state, "b")
    apply_controlled_swap(state, ("anc", 0), "a", "b")
    return apply_hadamard(state, "anc", 0)


def _oracles(instance):
    return (CountedOracle(OracleKind.MINIMAL, instance.alpha, name="M_alpha"),
            CountedOracle(OracleKind.MINIMAL, instance.beta, name="M_beta"))


def run_figure1_exact(instance: PromiseInstance, oracles=None) -> tuple[float, float]:
    """Exact ancilla outcome probabilities ``(p_zero, p_one)``."""
    m_alpha, m_beta = oracles or _oracles(instance)
    state = _figure1_state(instance, m_alpha, m_beta)
    return measure_probability(state, "anc", 0), measure_probability(state, "anc", 1)


@dataclass
class TrialSummary:
    trials: int
    zero_count: int
    verdict: str
    error_bound: float

    @classmethod
    def from_outcomes(cls, outcomes) -> TrialSummary:
        outcomes = list(outcomes)
        if not outcomes:
            raise DomainError("need at least one trial")
        zeros = sum(1 for o in outcomes if o == 0)
        if zeros:
            return cls(len(outcomes), zeros, VERDICT_DISJOINT, 0.0)
        return cls(len(outcomes), 0, VERDICT_IDENTICAL, 2.0 ** -len(outcomes))


def run_figure1_sampled(instance: PromiseInstance, trials: int, seed: int, oracles=None) -> TrialSummary:
    """``trials`` independent runs; trial ``i`` measures with seed ``seed + i``."""
    if trials < 1:
        raise DomainError(f"need at least one trial, got {trials}")
    m_alpha, m_beta = oracles or _oracles(instance)
    outcomes = []
    for i in range(trials):
        state = _figure1_state(instance, m_alpha, m_beta)
        outcome, _ = sample_measurement(state, "anc", seed + i)
        outcomes.append(outcome)
    return TrialSummary.from_outcomes(outcomes)


def naive_standard_overlap(instance: PromiseInstance) -> float:
    """|<out_alpha|out_beta>| for out_f = S_f(|S>|0>)."""
    n = instance.n
    layout = RegisterLayout((("x", n), ("b", n)))
    outputs = []
    for perm in (instance.alpha, instance.beta):
        state = prepare_product(layout, {"x": uniform_vector(n, instance.subset)})
        apply_standard(CountedOracle(OracleKind.STANDARD, perm), state, "x", "b")
        outputs.append(state)
    return abs(outputs[0].inner(outputs[1]))


def agreement_fraction(instance: PromiseInstance) -> Fraction:
    """#{x in S : alpha(x) = beta(x)} / |S|, exactly."""
    agree = sum(1 for x in instance.subset if instance.alpha(x) == instance.beta(x))
    return Fraction(agree, len(instance.subset))


def swap_test_probabilities(overlap: complex) -> tuple[float, float]:
    """Ancilla statistics for states with inner product ``overlap`` (ancilla starts in |1>)."""
    p_zero = (1.0 - abs(overlap) ** 2) / 2.0
    return p_zero, 1.0 - p_zero


def run_figure1_swaptest_on_states(state_a, state_b) -> tuple[float, float]:
    """Simulate the comparison subcircuit on two arbitrary register states."""
    vec_a = np.asarray(getattr(state_a, "amplitudes", state_a), dtype=np.complex128).reshape(-1)
    vec_b = np.asarray(getattr(state_b, "amplitudes", state_b), dtype=np.complex128).reshape(-1)
    if vec_a.size != vec_b.size:
        raise LayoutError(f"states differ in size: {vec_a.size} vs {vec_b.size}")
    width = vec_a.size.bit_length() - 1
    if vec_a.size != 1 << width:
        raise LayoutError(f"state size {vec_a.size} is not a power of two")
    layout = RegisterLayout((("a", width), ("b", width), ("anc", 1)))
    state = prepare_product(layout, {"a": vec_a, "b": vec_b, "anc": _KET_ONE})
    apply_hadamard(state, "anc", 0)
    apply_controlled_swap(state, ("anc", 0), "a", "b")
    apply_hadamard(state, "anc", 0)
    return measure_probability(state, "anc", 0), measure_probability(state, "anc", 1)


def promise_report(instance: PromiseInstance, trials: int, seed: int) -> dict:
    """Exact and sampled results for one instance, as a JSON-ready dict."""
    p_zero, p_one = run_figure1_exact(instance)
    m_alpha, m_beta = _oracles(instance)
    summary = run_figure1_sampled(instance, trials, seed, oracles=(m_alpha, m_beta))
    return {
        "n": instance.n,
        "subset_size": len(instance.subset),
        "case": instance.case,
        "K": summary.trials,
        "zero_count": summary.zero_count,
        "verdict": summary.verdict,
        "error_bound": summary.error_bound,
        "queries_alpha": m_alpha.queries,
        "queries_beta": m_beta.queries,
        "p_zero": p_zero,
        "p_one": p_one,
        "seed": seed,
    }


def summary_json(summary: TrialSummary) -> str:
    return json.dumps(asdict(summary), sort_keys=True)
