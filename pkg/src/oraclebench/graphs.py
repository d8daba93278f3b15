"""Small-graph version of the isomorphism test for asymmetric graphs.

For an asymmetric graph G, rho -> rho(G) is injective on permutations, so
the equal-weight superposition over all relabelings of G has exactly V!
terms.  Two such superpositions are equal when the graphs are isomorphic
and orthogonal otherwise, which the swap-test comparison detects.
States are kept sparse (encoding -> amplitude) since their support is tiny
compared with the 2**(V(V-1)/2) basis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from pathlib import Path

import numpy as np

from .errors import AutomorphicGraphError, DomainError
from .promise import TrialSummary, swap_test_probabilities

MAX_AUTOMORPHISM_VERTICES = 8
MAX_SUPERPOSITION_VERTICES = 7


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset

    def __init__(self, vertex_count: int, edges=()):
        vertex_count = int(vertex_count)
        if vertex_count < 1:
            raise DomainError("a graph needs at least one vertex")
        canonical = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise DomainError(f"edge ({u}, {v}) references a vertex outside 0..{vertex_count - 1}")
            canonical.add((min(u, v), max(u, v)))
        object.__setattr__(self, "vertex_count", vertex_count)
        object.__setattr__(self, "edges", frozenset(canonical))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def relabel(self, rho) -> Graph:
        """rho(G): vertex v becomes rho[v]."""
        return Graph(self.vertex_count, ((rho[u], rho[v]) for u, v in self.edges))

    def encode(self) -> str:
        """Upper-triangular adjacency bits, row-major: (0,1), (0,2), ..., (V-2,V-1)."""
        return "".join("1" if pair in self.edges else "0"
                       for pair in combinations(range(self.vertex_count), 2))


def load_graph(path) -> Graph:
    """Parse ``V E`` then ``E`` lines of ``u v``; duplicates and bad vertices are errors."""
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise DomainError(f"{path}: empty graph file")
    try:
        header = [int(tok) for tok in lines[0]]
        body = [[int(tok) for tok in ln] for ln in lines[1:]]
    except ValueError as exc:
        raise DomainError(f"{path}: {exc}") from None
    if len(header) != 2:
        raise DomainError(f"{path}: header must be 'V E'")
    vertex_count, edge_count = header
    if len(body) != edge_count:
        raise DomainError(f"{path}: header promises {edge_count} edges, found {len(body)}")
    seen = set()
    for row in body:
        if len(row) != 2:
            raise DomainError(f"{path}: edge line {row} must have two vertices")
        key = (min(row), max(row))
        if key in seen:
            raise DomainError(f"{path}: duplicate edge {key}")
        seen.add(key)
    try:
        return Graph(vertex_count, body)
    except DomainError as exc:
        raise DomainError(f"{path}: {exc}") from None


def automorphisms(g: Graph) -> list[tuple[int, ...]]:
    if g.vertex_count > MAX_AUTOMORPHISM_VERTICES:
        raise DomainError(f"brute-force automorphism search is capped at {MAX_AUTOMORPHISM_VERTICES} vertices")
    return [rho for rho in permutations(range(g.vertex_count)) if g.relabel(rho).edges == g.edges]


def check_non_automorphic(g: Graph) -> bool:
    """True iff the identity is the only automorphism (exhaustive over V! relabelings)."""
    return len(automorphisms(g)) == 1


SparseState = dict  # encoding -> complex amplitude


def build_permuted_superposition(g: Graph) -> SparseState:
    """sum over rho of |rho(G)>, normalized; one key per relabeling."""
    if g.vertex_count > MAX_SUPERPOSITION_VERTICES:
        raise DomainError(f"superpositions are capped at {MAX_SUPERPOSITION_VERTICES} vertices")
    if not check_non_automorphic(g):
        raise AutomorphicGraphError(f"graph {g.sorted_edges()} on {g.vertex_count} vertices has non-trivial automorphisms")
    amplitude = 1.0 / math.sqrt(math.factorial(g.vertex_count))
    state = {}
    for rho in permutations(range(g.vertex_count)):
        state[g.relabel(rho).encode()] = amplitude
    return state


def sparse_inner(a: SparseState, b: SparseState) -> complex:
    """<a|b>."""
    if len(a) > len(b):
        return sparse_inner(b, a).conjugate()
    return complex(sum(np.conj(amp) * b[key] for key, amp in a.items() if key in b))


def sparse_norm(a: SparseState) -> float:
    return math.sqrt(sum(abs(amp) ** 2 for amp in a.values()))


def superposition_overlap(psi1: SparseState, psi2: SparseState) -> Fraction:
    """Exact <psi1|psi2> for two relabeling superpositions of the same vertex count.

    Both are uniform over V! keys, so the overlap is the shared-key fraction.
    """
    if len(psi1) != len(psi2):
        raise DomainError("superpositions over different vertex counts")
    return Fraction(len(psi1.keys() & psi2.keys()), len(psi1))


@dataclass
class GraphComparison:
    overlap: float
    p_zero: float
    p_one: float
    summary: TrialSummary

    @property
    def verdict(self) -> str:
        return "non-isomorphic" if self.summary.zero_count else "isomorphic"


def compare_graphs(g1: Graph, g2: Graph, trials: int, seed: int) -> GraphComparison:
    """Swap-test the two relabeling superpositions ``trials`` times (trial i uses seed + i)."""
    if g1.vertex_count != g2.vertex_count:
        raise DomainError(f"vertex counts differ: {g1.vertex_count} vs {g2.vertex_count}")
    if trials < 1:
        raise DomainError(f"need at least one trial, got {trials}")
    psi1 = build_permuted_superposition(g1)
    psi2 = build_permuted_superposition(g2)
    overlap = float(superposition_overlap(psi1, psi2))
    p_zero, p_one = swap_test_probabilities(overlap)
    outcomes = [0 if np.random.default_rng(seed + i).random() < p_zero else 1 for i in range(trials)]
    return GraphComparison(overlap, p_zero, p_one, TrialSummary.from_outcomes(outcomes))
