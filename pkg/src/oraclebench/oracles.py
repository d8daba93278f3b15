"""Function tables and the five oracle families, with query counting.

Two different "plus" operations appear here and are never mixed:

* ``mod-add``: addition modulo ``2**n`` (standard and Fourier phase oracles);
* ``xor``: bitwise sum modulo 2 (the bit-string oracles).

Every ``apply_*`` call on a :class:`CountedOracle` is one query, whatever the
direction and whatever the state looks like.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, LayoutError, NotAPermutationError, OracleKindError
from .statevector import StateVector, apply_diagonal, execute_plan, plan_permutation

MAX_TABLE_QUBITS = 12


class FunctionTable:
    """A function f: Z_N -> Z_N with N = 2**n, stored as its table of images."""

    def __init__(self, n: int, images):
        n = int(n)
        if not 1 <= n <= MAX_TABLE_QUBITS:
            raise DomainError(f"n must be in 1..{MAX_TABLE_QUBITS}, got {n}")
        images = np.array(images, dtype=np.int64).reshape(-1)
        size = 1 << n
        if images.size != size:
            raise DomainError(f"table for n={n} needs {size} images, got {images.size}")
        if images.size and (images.min() < 0 or images.max() >= size):
            raise DomainError(f"images must lie in 0..{size - 1}")
        images.setflags(write=False)
        self.n = n
        self.images = images

    @property
    def size(self) -> int:
        return 1 << self.n

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def __eq__(self, other):
        return isinstance(other, FunctionTable) and self.n == other.n and np.array_equal(self.images, other.images)

    def __hash__(self):
        return hash((self.n, self.images.tobytes()))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, images={self.images.tolist()})"

    def is_bijection(self) -> bool:
        return np.unique(self.images).size == self.size


class Permutation(FunctionTable):
    """A bijection on Z_N."""

    def __init__(self, n: int, images):
        super().__init__(n, images)
        if not self.is_bijection():
            raise NotAPermutationError(f"images {self.images.tolist()} are not a bijection on Z_{self.size}")
        inv = np.empty(self.size, dtype=np.int64)
        inv[self.images] = np.arange(self.size)
        inv.setflags(write=False)
        self._inverse_images = inv

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(n, np.arange(1 << n))

    @classmethod
    def random(cls, n: int, rng) -> Permutation:
        """Uniformly random permutation by Fisher-Yates shuffle."""
        rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        images = np.arange(1 << n)
        for i in range(images.size - 1, 0, -1):
            j = int(rng.integers(0, i + 1))
            images[i], images[j] = images[j], images[i]
        return cls(n, images)

    def inverse(self) -> Permutation:
        return Permutation(self.n, self._inverse_images)

    def preimage(self, y: int) -> int:
        return int(self._inverse_images[y])

    def compose(self, other: Permutation) -> Permutation:
        """``self after other``: x -> self(other(x))."""
        if other.n != self.n:
            raise DomainError("cannot compose permutations of different size")
        return Permutation(self.n, self.images[other.images])


def as_permutation(table: FunctionTable) -> Permutation:
    if isinstance(table, Permutation):
        return table
    return Permutation(table.n, table.images)


def load_permutation(path) -> Permutation:
    """Read ``n`` on line 1 and the ``2**n`` images on line 2."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if len(lines) != 2:
        raise DomainError(f"{path}: expected 2 non-empty lines, found {len(lines)}")
    try:
        n = int(lines[0].strip())
        images = [int(tok) for tok in lines[1].split()]
    except ValueError as exc:
        raise DomainError(f"{path}: {exc}") from None
    return Permutation(n, images)


def save_permutation(perm: Permutation, path) -> None:
    Path(path).write_text(f"{perm.n}\n{' '.join(str(int(v)) for v in perm.images)}\n")


class OracleKind(enum.Enum):
    STANDARD = "standard"
    FOURIER_PHASE = "fourier_phase"
    MINIMAL = "minimal"
    BIT_STANDARD = "bit_standard"
    BIT_PHASE = "bit_phase"


class Direction(enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


@dataclass
class CountedOracle:
    """An oracle for ``function`` plus a monotone invocation counter."""

    kind: OracleKind
    function: FunctionTable
    name: str = "f"
    forward_queries: int = field(default=0, init=False)
    inverse_queries: int = field(default=0, init=False)
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.function, FunctionTable):
            raise TypeError("function must be a FunctionTable")
        if self.kind is OracleKind.MINIMAL:
            self.function = as_permutation(self.function)

    @property
    def n(self) -> int:
        return self.function.n

    @property
    def queries(self) -> int:
        return self.forward_queries + self.inverse_queries

    def reset(self) -> None:
        self.forward_queries = 0
        self.inverse_queries = 0

    def _cached(self, key, build):
        """Memoize per-layout index/phase tables; the function table never changes."""
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def _record(self, direction: Direction) -> None:
        if direction is Direction.FORWARD:
            self.forward_queries += 1
        else:
            self.inverse_queries += 1


def query_count(oracle: CountedOracle) -> int:
    return oracle.queries


def _expect(oracle: CountedOracle, kind: OracleKind):
    if oracle.kind is not kind:
        raise OracleKindError(f"oracle {oracle.name!r} is {oracle.kind.value}, not {kind.value}")


def _check_registers(oracle: CountedOracle, state: StateVector, *regs: str):
    for reg in regs:
        if state.layout.width(reg) != oracle.n:
            raise LayoutError(f"register {reg!r} has width {state.layout.width(reg)}, oracle needs {oracle.n}")
    if len(set(regs)) != len(regs):
        raise LayoutError(f"oracle registers must be distinct, got {list(regs)}")


def _pairs(size):
    return np.divmod(np.arange(size * size, dtype=np.int64), size)


def _direction(inverse: bool) -> Direction:
    return Direction.INVERSE if inverse else Direction.FORWARD


def apply_standard(oracle: CountedOracle, state: StateVector, x_reg: str, b_reg: str, inverse: bool = False):
    """|x>|b> -> |x>|b mod-add f(x)> (or mod-subtract when ``inverse``)."""
    _expect(oracle, OracleKind.STANDARD)
    _check_registers(oracle, state, x_reg, b_reg)

    def build():
        size = oracle.function.size
        x, b = _pairs(size)
        fx = oracle.function.images[x]
        new_b = (b - fx) % size if inverse else (b + fx) % size
        return plan_permutation(state.layout, [x_reg, b_reg], x * size + new_b)

    plan = oracle._cached(("standard", state.layout, x_reg, b_reg, inverse), build)
    oracle._record(_direction(inverse))
    return execute_plan(state, plan)


def apply_standard_inverse(oracle: CountedOracle, state: StateVector, x_reg: str, b_reg: str):
    return apply_standard(oracle, state, x_reg, b_reg, inverse=True)


def apply_phase(oracle: CountedOracle, state: StateVector, x_reg: str, b_reg: str, inverse: bool = False):
    """|x>|b> -> exp(2 pi i f(x) b / N)|x>|b>."""
    _expect(oracle, OracleKind.FOURIER_PHASE)
    _check_registers(oracle, state, x_reg, b_reg)

    def build():
        size = oracle.function.size
        x, b = _pairs(size)
        # reduce mod N before exponentiating so phases stay exact roots of unity
        turns = (oracle.function.images[x] * b) % size
        sign = -1.0 if inverse else 1.0
        return np.exp(sign * 2j * np.pi * turns / size)

    phases = oracle._cached(("phase", inverse), build)
    oracle._record(_direction(inverse))
    return apply_diagonal(state, [x_reg, b_reg], phases)


def apply_phase_inverse(oracle: CountedOracle, state: StateVector, x_reg: str, b_reg: str):
    return apply_phase(oracle, state, x_reg, b_reg, inverse=True)


def apply_minimal(oracle: CountedOracle, state: StateVector, x_reg: str, inverse: bool = False):
    """|x> -> |f(x)>; the inverse direction applies f^-1."""
    _expect(oracle, OracleKind.MINIMAL)
    _check_registers(oracle, state, x_reg)

    def build():
        perm = oracle.function
        mapping = perm.inverse().images if inverse else perm.images
        return plan_permutation(state.layout, [x_reg], mapping)

    plan = oracle._cached(("minimal", state.layout, x_reg, inverse), build)
    oracle._record(_direction(inverse))
    return execute_plan(state, plan)


def apply_minimal_inverse(oracle: CountedOracle, state: StateVector, x_reg: str):
    return apply_minimal(oracle, state, x_reg, inverse=True)


def apply_bit_standard(oracle: CountedOracle, state: StateVector, x_reg: str, b_reg: str, inverse: bool = False):
    """|x>|b> -> |x>|b xor f(x)>.  Self-inverse; ``inverse`` only affects counting."""
    _expect(oracle, OracleKind.BIT_STANDARD)
    _check_registers(oracle, state, x_reg, b_reg)

    def build():
        size = oracle.function.size
        x, b = _pairs(size)
        return plan_permutation(state.layout, [x_reg, b_reg], x * size + (b ^ oracle.function.images[x]))

    plan = oracle._cached(("bit_standard", state.layout, x_reg, b_reg), build)
    oracle._record(_direction(inverse))
    return execute_plan(state, plan)


def _parity(values: np.ndarray) -> np.ndarray:
    values = values.copy()
    parity = np.zeros_like(values)
    while values.any():
        parity ^= values & 1
        values >>= 1
    return parity


def apply_bit_phase(oracle: CountedOracle, state: StateVector, x_reg: str, b_reg: str, inverse: bool = False):
    """|x>|b> -> (-1)^(f(x).b)|x>|b>, inner product mod 2.  Self-inverse."""
    _expect(oracle, OracleKind.BIT_PHASE)
    _check_registers(oracle, state, x_reg, b_reg)

    def build():
        size = oracle.function.size
        x, b = _pairs(size)
        return 1.0 - 2.0 * _parity(oracle.function.images[x] & b)

    signs = oracle._cached(("bit_phase",), build)
    oracle._record(_direction(inverse))
    return apply_diagonal(state, [x_reg, b_reg], signs)


_APPLY = {
    OracleKind.STANDARD: apply_standard,
    OracleKind.FOURIER_PHASE: apply_phase,
    OracleKind.MINIMAL: apply_minimal,
    OracleKind.BIT_STANDARD: apply_bit_standard,
    OracleKind.BIT_PHASE: apply_bit_phase,
}


def apply_oracle(oracle: CountedOracle, state: StateVector, *regs: str, inverse: bool = False):
    """Dispatch on ``oracle.kind``."""
    return _APPLY[oracle.kind](oracle, state, *regs, inverse=inverse)
