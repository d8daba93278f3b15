"""Brute-force reference operators used as test oracles.

Everything here is built from explicit loops over basis states with plain
Python integers, so it shares no code with the package's permutation and
gate machinery.  Big-endian: the first register is the most significant.
"""
import cmath
import math

import numpy as np


def split(index, widths):
    values = []
    for w in reversed(widths):
        values.append(index % (1 << w))
        index //= 1 << w
    return tuple(reversed(values))


def join(values, widths):
    index = 0
    for v, w in zip(values, widths):
        index = index * (1 << w) + v
    return index


def basis_map(widths, fn):
    """Matrix of |v> -> phase * |v'> where ``fn(v) = (v', phase)``."""
    dim = 1 << sum(widths)
    mat = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        new_values, phase = fn(split(col, widths))
        mat[join(new_values, widths), col] += phase
    return mat


def dft(n, inverse=False):
    size = 1 << n
    sign = -1 if inverse else 1
    return np.array([[cmath.exp(sign * 2j * math.pi * j * k / size) / math.sqrt(size)
                      for j in range(size)] for k in range(size)])


def on_register(widths, reg, matrix):
    """``matrix`` acting on register number ``reg``, identity elsewhere."""
    full = np.eye(1)
    for i, w in enumerate(widths):
        full = np.kron(full, matrix if i == reg else np.eye(1 << w))
    return full


def hadamard_on_qubit(width, qubit):
    """H on qubit ``qubit`` (0 = most significant) of a ``width``-qubit register."""
    h = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    full = np.eye(1)
    for q in range(width):
        full = np.kron(full, h if q == qubit else np.eye(2))
    return full


def bit(value, qubit, width):
    return (value >> (width - 1 - qubit)) & 1


def popcount(v):
    return bin(v).count("1")


def random_vector(dim, rng):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


# oracle matrices on (x, b), each register n qubits

def standard(f, n, inverse=False):
    size = 1 << n
    sign = -1 if inverse else 1
    return basis_map((n, n), lambda v: ((v[0], (v[1] + sign * f[v[0]]) % size), 1))


def fourier_phase(f, n, inverse=False):
    size = 1 << n
    sign = -1 if inverse else 1
    return basis_map((n, n), lambda v: (v, cmath.exp(sign * 2j * math.pi * f[v[0]] * v[1] / size)))


def minimal(f, n):
    return basis_map((n,), lambda v: ((f[v[0]],), 1))


def bit_standard(f, n):
    return basis_map((n, n), lambda v: ((v[0], v[1] ^ f[v[0]]), 1))


def bit_phase(f, n):
    return basis_map((n, n), lambda v: (v, (-1) ** popcount(f[v[0]] & v[1])))


# asymmetric 6-vertex graphs, validated by exhaustive automorphism search;
# no two are isomorphic
ASYMMETRIC_6 = [
    [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (2, 5)],
    [(0, 2), (1, 2), (1, 4), (1, 5), (2, 3), (2, 4), (3, 4)],
    [(0, 1), (0, 5), (1, 2), (1, 3), (2, 3), (3, 4), (3, 5)],
    [(0, 1), (0, 5), (1, 2), (1, 4), (1, 5), (2, 4), (3, 5), (4, 5)],
    [(0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 4), (2, 5), (3, 4)],
    [(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (2, 4), (2, 5), (3, 5), (4, 5)],
]


def write_graph(path, vertex_count, edges):
    lines = [f"{vertex_count} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    path.write_text("\n".join(lines) + "\n")
    return path
