"""Dense statevector simulation over named multi-qubit registers.

Basis encoding is big-endian: the register listed first in a layout holds the
most significant bits of the flat amplitude index, and inside a register
qubit 0 is the most significant bit.  So for layout ``[("a", 2), ("b", 2)]``
the ket ``|1>|0>`` lives at index ``1 * 4 + 0 = 4``.

Gates mutate ``state.amplitudes`` in place (or rebind it to a fresh array of
the same shape) and return the state so calls can be chained.  Large states
(the 25-qubit Grover run is 512 MiB) make copying per gate too expensive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

import numpy as np

from .errors import ContractViolation, DomainError, LayoutError

_SQRT1_2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class Tolerance:
    abs_eps: float = 1e-10
    exact_eps: float = 1e-12

    def __post_init__(self):
        if not (0 < self.exact_eps <= self.abs_eps < 1e-3):
            raise ValueError(
                f"need 0 < exact_eps <= abs_eps < 1e-3, got {self.exact_eps}, {self.abs_eps}"
            )


DEFAULT_TOLERANCE = Tolerance()


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered named registers packed contiguously into one qubit array."""

    registers: tuple[tuple[str, int], ...]
    _offsets: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        regs = tuple((str(name), int(width)) for name, width in self.registers)
        if not regs:
            raise LayoutError("layout needs at least one register")
        offsets = {}
        position = 0
        for name, width in regs:
            if name in offsets:
                raise LayoutError(f"duplicate register name {name!r}")
            if width < 1:
                raise LayoutError(f"register {name!r} has width {width} < 1")
            offsets[name] = position
            position += width
        object.__setattr__(self, "registers", regs)
        object.__setattr__(self, "_offsets", offsets)

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.registers)

    @cached_property
    def widths(self) -> tuple[int, ...]:
        return tuple(width for _, width in self.registers)

    @cached_property
    def num_qubits(self) -> int:
        return sum(self.widths)

    @cached_property
    def dims(self) -> tuple[int, ...]:
        return tuple(1 << w for w in self.widths)

    @cached_property
    def _axes(self) -> dict:
        return {name: i for i, name in enumerate(self.names)}

    def axis(self, name: str) -> int:
        try:
            return self._axes[name]
        except (KeyError, TypeError):
            raise LayoutError(f"unknown register {name!r}; layout has {list(self.names)}") from None

    def width(self, name: str) -> int:
        return self.registers[self.axis(name)][1]

    def dim(self, name: str) -> int:
        return 1 << self.width(name)

    def offset(self, name: str) -> int:
        self.axis(name)
        return self._offsets[name]

    def qubit(self, name: str, index: int) -> int:
        """Global qubit number (0 = most significant) of ``name``'s qubit ``index``."""
        width = self.width(name)
        if not 0 <= index < width:
            raise DomainError(f"qubit index {index} out of range for register {name!r} of width {width}")
        return self.offset(name) + index

    def encode(self, values: Mapping[str, int]) -> int:
        """Flat basis index for register contents; missing registers read as 0."""
        for name in values:
            self.axis(name)
        index = 0
        for name, width in self.registers:
            value = int(values.get(name, 0))
            if not 0 <= value < (1 << width):
                raise DomainError(f"value {value} does not fit register {name!r} of width {width}")
            index = (index << width) | value
        return index

    def decode(self, index: int) -> dict[str, int]:
        out = {}
        for name, width in reversed(self.registers):
            out[name] = index & ((1 << width) - 1)
            index >>= width
        return dict(reversed(list(out.items())))


class StateVector:
    """Complex amplitudes of length ``2**layout.num_qubits``."""

    def __init__(self, layout: RegisterLayout, amplitudes=None):
        if not isinstance(layout, RegisterLayout):
            layout = RegisterLayout(tuple(layout))
        self.layout = layout
        size = 1 << layout.num_qubits
        if amplitudes is None:
            amplitudes = np.zeros(size, dtype=np.complex128)
            amplitudes[0] = 1.0
        amplitudes = np.ascontiguousarray(amplitudes, dtype=np.complex128).reshape(-1)
        if amplitudes.size != size:
            raise LayoutError(f"expected {size} amplitudes for {layout.num_qubits} qubits, got {amplitudes.size}")
        self.amplitudes = amplitudes

    def __repr__(self):
        return f"StateVector({self.layout.registers}, norm={self.norm():.12g})"

    def tensor(self) -> np.ndarray:
        """View with one axis per register."""
        return self.amplitudes.reshape(self.layout.dims)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> StateVector:
        return StateVector(self.layout, self.amplitudes.copy())

    def amplitude(self, **values: int) -> complex:
        return complex(self.amplitudes[self.layout.encode(values)])

    def inner(self, other: StateVector) -> complex:
        """<self|other>."""
        if self.layout.dims != other.layout.dims:
            raise LayoutError("inner product between states of different shape")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def prepare_basis(layout, values: Mapping[str, int]) -> StateVector:
    state = StateVector(layout)
    state.amplitudes[0] = 0.0
    state.amplitudes[state.layout.encode(values)] = 1.0
    return state


def prepare_product(layout, register_states: Mapping[str, np.ndarray]) -> StateVector:
    """Tensor product of per-register vectors; unlisted registers are ``|0>``."""
    if not isinstance(layout, RegisterLayout):
        layout = RegisterLayout(tuple(layout))
    for name in register_states:
        layout.axis(name)
    amps = np.ones(1, dtype=np.complex128)
    for name, width in layout.registers:
        if name in register_states:
            vec = np.asarray(register_states[name], dtype=np.complex128).reshape(-1)
            if vec.size != 1 << width:
                raise LayoutError(f"register {name!r} needs {1 << width} amplitudes, got {vec.size}")
        else:
            vec = np.zeros(1 << width, dtype=np.complex128)
            vec[0] = 1.0
        amps = np.multiply.outer(amps, vec).reshape(-1)
    return StateVector(layout, amps)


def uniform_vector(n: int, support: Sequence[int] | None = None) -> np.ndarray:
    """Normalized equal superposition over ``support`` (default: all of Z_N)."""
    size = 1 << n
    vec = np.zeros(size, dtype=np.complex128)
    if support is None:
        vec[:] = 1.0 / np.sqrt(size)
        return vec
    support = np.asarray(sorted(set(int(s) for s in support)), dtype=np.int64)
    if support.size == 0:
        raise DomainError("support must be non-empty")
    if support[0] < 0 or support[-1] >= size:
        raise DomainError(f"support element out of range for {n} qubits")
    vec[support] = 1.0 / np.sqrt(support.size)
    return vec


def random_state(layout, rng: np.random.Generator) -> StateVector:
    if not isinstance(layout, RegisterLayout):
        layout = RegisterLayout(tuple(layout))
    size = 1 << layout.num_qubits
    amps = rng.normal(size=size) + 1j * rng.normal(size=size)
    amps /= np.linalg.norm(amps)
    return StateVector(layout, amps)


# ---------------------------------------------------------------------------
# generic register-level primitives


def _distinct(layout: RegisterLayout, names: Sequence[str]):
    for name in names:
        layout.axis(name)
    if len(set(names)) != len(names):
        raise LayoutError(f"registers must be distinct, got {list(names)}")


def _to_layout_order(layout, names, mapping):
    """Re-express a mapping over ``names`` as one over the same registers in layout order."""
    order = sorted(range(len(names)), key=lambda i: layout.axis(names[i]))
    if order == list(range(len(names))):
        return list(names), mapping
    dims = tuple(layout.dim(r) for r in names)
    sorted_dims = tuple(dims[i] for i in order)
    old = np.unravel_index(np.arange(mapping.size), dims)
    new = np.unravel_index(mapping, dims)
    old_sorted = np.ravel_multi_index(tuple(old[i] for i in order), sorted_dims)
    new_sorted = np.ravel_multi_index(tuple(new[i] for i in order), sorted_dims)
    remapped = np.empty_like(mapping)
    remapped[old_sorted] = new_sorted
    return [names[i] for i in order], remapped


@dataclass(frozen=True)
class PermutationPlan:
    """Precomputed gather for one basis permutation on one layout."""

    layout: RegisterLayout
    axes: tuple[int, ...]
    kind: str  # "sparse", "contiguous" or "general"
    src: np.ndarray
    dst_index: tuple = ()
    src_index: tuple = ()
    pre: int = 1
    post: int = 1


def plan_permutation(layout: RegisterLayout, names: Sequence[str], mapping) -> PermutationPlan:
    """Validate ``mapping`` (``|i> -> |mapping[i]>`` over ``names``) and pick a strategy."""
    _distinct(layout, names)
    mapping = np.asarray(mapping, dtype=np.int64).reshape(-1)
    size = math.prod(layout.dim(r) for r in names)
    if mapping.size != size:
        raise LayoutError(f"mapping has {mapping.size} entries, registers span {size}")
    if np.unique(mapping).size != size or mapping.min() < 0 or mapping.max() >= size:
        raise LayoutError("mapping is not a permutation of the joint basis")
    names, mapping = _to_layout_order(layout, names, mapping)
    sub_dims = tuple(layout.dim(r) for r in names)
    axes = tuple(layout.axis(r) for r in names)
    src = np.empty(size, dtype=np.int64)
    src[mapping] = np.arange(size, dtype=np.int64)
    moving = np.flatnonzero(src != np.arange(size))
    if moving.size <= size // 4:
        return PermutationPlan(layout, axes, "sparse", src,
                               np.unravel_index(moving, sub_dims), np.unravel_index(src[moving], sub_dims))
    if axes == tuple(range(axes[0], axes[0] + len(axes))):
        pre = math.prod(layout.dims[: axes[0]])
        post = math.prod(layout.dims[axes[-1] + 1:])
        return PermutationPlan(layout, axes, "contiguous", src, pre=pre, post=post)
    return PermutationPlan(layout, axes, "general", src, src_index=np.unravel_index(src.reshape(sub_dims), sub_dims))


def execute_plan(state: StateVector, plan: PermutationPlan) -> StateVector:
    layout = state.layout
    if layout != plan.layout:
        raise LayoutError("permutation plan was built for a different layout")
    axes = list(plan.axes)
    lead = list(range(len(axes)))
    if plan.kind == "sparse":
        # mostly fixed points: move only what changes, in place
        moved = np.moveaxis(state.tensor(), axes, lead)
        moved[plan.dst_index] = moved[plan.src_index]
        return state
    out = np.empty_like(state.amplitudes)
    if plan.kind == "contiguous":
        shape = (plan.pre, plan.src.size, plan.post)
        np.take(state.amplitudes.reshape(shape), plan.src, axis=1, out=out.reshape(shape))
    else:
        moved = np.moveaxis(state.tensor(), axes, lead)
        np.moveaxis(out.reshape(layout.dims), axes, lead)[...] = moved[plan.src_index]
    state.amplitudes = out
    return state


def permute_basis(state: StateVector, names: Sequence[str], mapping: np.ndarray) -> StateVector:
    """Apply the basis permutation ``|i> -> |mapping[i]>`` on the joint registers ``names``.

    ``i`` is the flat index over ``names`` in the order given (first name most
    significant).  Other registers are spectators.
    """
    return execute_plan(state, plan_permutation(state.layout, names, mapping))


def apply_diagonal(state: StateVector, names: Sequence[str], phases: np.ndarray) -> StateVector:
    """Multiply each amplitude by ``phases[i]``, ``i`` the joint index over ``names``."""
    layout = state.layout
    _distinct(layout, names)
    sub_dims = tuple(layout.dim(r) for r in names)
    phases = np.asarray(phases, dtype=np.complex128).reshape(sub_dims)
    axes = [layout.axis(r) for r in names]
    moved = np.moveaxis(state.tensor(), axes, list(range(len(axes))))
    moved *= phases.reshape(sub_dims + (1,) * (moved.ndim - len(axes)))
    return state


def apply_register_unitary(state: StateVector, name: str, matrix: np.ndarray) -> StateVector:
    """Dense ``matrix`` acting on one register: new[k] = sum_j matrix[k, j] old[j]."""
    layout = state.layout
    ax = layout.axis(name)
    dim = layout.dim(name)
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.shape != (dim, dim):
        raise LayoutError(f"register {name!r} needs a {dim}x{dim} matrix, got {matrix.shape}")
    moved = np.moveaxis(state.tensor(), ax, 0)
    result = np.tensordot(matrix, moved, axes=(1, 0))
    out = np.empty_like(state.amplitudes)
    np.moveaxis(out.reshape(layout.dims), ax, 0)[...] = result
    state.amplitudes = out
    return state


# ---------------------------------------------------------------------------
# named gates


def apply_hadamard(state: StateVector, register: str, qubit: int) -> StateVector:
    q = state.layout.qubit(register, qubit)
    view = state.amplitudes.reshape(1 << q, 2, -1)
    zero = view[:, 0].copy()
    one = view[:, 1]
    view[:, 0] += one
    view[:, 0] *= _SQRT1_2
    zero -= one
    zero *= _SQRT1_2
    view[:, 1] = zero
    return state


def apply_hadamard_layer(state: StateVector, register: str) -> StateVector:
    for i in range(state.layout.width(register)):
        apply_hadamard(state, register, i)
    return state


def qft_matrix(n: int, inverse: bool = False) -> np.ndarray:
    size = 1 << n
    jk = np.outer(np.arange(size), np.arange(size)) % size
    sign = -1.0 if inverse else 1.0
    return np.exp(sign * 2j * np.pi * jk / size) / np.sqrt(size)


def apply_qft(state: StateVector, register: str, inverse: bool = False) -> StateVector:
    """Exact DFT on ``register``: |j> -> N^-1/2 sum_k exp(2 pi i jk/N) |k>."""
    return apply_register_unitary(state, register, qft_matrix(state.layout.width(register), inverse))


@lru_cache(maxsize=256)
def _parity_plan(layout, register):
    size = layout.dim(register)
    return plan_permutation(layout, [register], (-np.arange(size)) % size)


def apply_parity_reflection(state: StateVector, register: str) -> StateVector:
    """|j> -> |-j mod N>."""
    return execute_plan(state, _parity_plan(state.layout, register))


def _same_width(layout, a, b):
    if layout.width(a) != layout.width(b):
        raise LayoutError(f"registers {a!r} and {b!r} differ in width")
    if a == b:
        raise LayoutError(f"register {a!r} given twice")


def _flag_register(layout, flag, forbidden):
    register, qubit = flag
    layout.qubit(register, qubit)
    if register in forbidden:
        raise LayoutError(f"control/flag qubit must lie outside {list(forbidden)}")
    return register, layout.width(register) - 1 - qubit


@lru_cache(maxsize=256)
def _swap_plan(layout, reg_a, reg_b):
    _same_width(layout, reg_a, reg_b)
    size = layout.dim(reg_a)
    a, b = np.divmod(np.arange(size * size), size)
    return plan_permutation(layout, [reg_a, reg_b], b * size + a)


def apply_swap(state: StateVector, reg_a: str, reg_b: str) -> StateVector:
    return execute_plan(state, _swap_plan(state.layout, reg_a, reg_b))


@lru_cache(maxsize=256)
def _controlled_swap_plan(layout, control, reg_a, reg_b):
    _same_width(layout, reg_a, reg_b)
    creg, bit = _flag_register(layout, control, (reg_a, reg_b))
    size = layout.dim(reg_a)
    cdim = layout.dim(creg)
    c, a, b = np.unravel_index(np.arange(cdim * size * size), (cdim, size, size))
    on = ((c >> bit) & 1).astype(bool)
    new_a = np.where(on, b, a)
    new_b = np.where(on, a, b)
    return plan_permutation(layout, [creg, reg_a, reg_b], (c * size + new_a) * size + new_b)


def apply_controlled_swap(state: StateVector, control: tuple[str, int], reg_a: str, reg_b: str) -> StateVector:
    return execute_plan(state, _controlled_swap_plan(state.layout, tuple(control), reg_a, reg_b))


@lru_cache(maxsize=256)
def _comparator_plan(layout, reg_a, reg_b, flag):
    _same_width(layout, reg_a, reg_b)
    freg, bit = _flag_register(layout, flag, (reg_a, reg_b))
    size = layout.dim(reg_a)
    fdim = layout.dim(freg)
    a, b, f = np.unravel_index(np.arange(size * size * fdim), (size, size, fdim))
    f = np.where(a == b, f ^ (1 << bit), f)
    return plan_permutation(layout, [reg_a, reg_b, freg], (a * size + b) * fdim + f)


def apply_equality_comparator(state: StateVector, reg_a: str, reg_b: str, flag: tuple[str, int]) -> StateVector:
    """Flip ``flag`` exactly where the contents of ``reg_a`` and ``reg_b`` agree."""
    return execute_plan(state, _comparator_plan(state.layout, reg_a, reg_b, tuple(flag)))


@lru_cache(maxsize=256)
def _adder_plan(layout, src, dst, sign):
    _same_width(layout, src, dst)
    size = layout.dim(src)
    a, b = np.divmod(np.arange(size * size), size)
    return plan_permutation(layout, [src, dst], a * size + (b + sign * a) % size)


def apply_adder(state: StateVector, src: str, dst: str) -> StateVector:
    """|a>|b> -> |a>|(a + b) mod N>."""
    return execute_plan(state, _adder_plan(state.layout, src, dst, 1))


def apply_adder_inverse(state: StateVector, src: str, dst: str) -> StateVector:
    return execute_plan(state, _adder_plan(state.layout, src, dst, -1))


def apply_diffusion(state: StateVector, register: str) -> StateVector:
    """Inversion about the mean, 2|u><u| - I with u uniform over ``register``."""
    moved = np.moveaxis(state.tensor(), state.layout.axis(register), 0)
    mean = moved.mean(axis=0, keepdims=True)
    moved *= -1.0
    moved += 2.0 * mean
    return state


# ---------------------------------------------------------------------------
# measurement


def register_probabilities(state: StateVector, register: str) -> np.ndarray:
    layout = state.layout
    ax = layout.axis(register)
    probs = np.abs(state.tensor()) ** 2
    other = tuple(i for i in range(probs.ndim) if i != ax)
    return probs.sum(axis=other) if other else probs


def measure_probability(state: StateVector, register: str, value: int) -> float:
    size = state.layout.dim(register)
    if not 0 <= value < size:
        raise DomainError(f"value {value} out of range for register {register!r} of size {size}")
    ax = state.layout.axis(register)
    sliced = np.take(state.tensor(), value, axis=ax)
    return float(np.vdot(sliced, sliced).real)


def _generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_measurement(state: StateVector, register: str, seed, tol: Tolerance = DEFAULT_TOLERANCE):
    """Projectively measure ``register``; returns ``(value, collapsed)``.

    ``seed`` is an int or a ``numpy.random.Generator``.  The input state is
    left untouched; ``collapsed`` is a renormalized copy.
    """
    norm2 = float(np.vdot(state.amplitudes, state.amplitudes).real)
    if norm2 == 0.0:
        raise ContractViolation("cannot measure a zero-norm state")
    if abs(norm2 - 1.0) > tol.abs_eps:
        raise ContractViolation(f"cannot measure an unnormalized state (norm^2 = {norm2!r})")
    cumulative = np.cumsum(register_probabilities(state, register))
    rng = _generator(seed)
    value = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
    value = min(value, cumulative.size - 1)
    collapsed = state.copy()
    ax = state.layout.axis(register)
    moved = np.moveaxis(collapsed.tensor(), ax, 0)
    keep = moved[value].copy()
    moved[...] = 0.0
    moved[value] = keep / np.sqrt(np.vdot(keep, keep).real)
    return value, collapsed
