import math
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import reference as ref
from oraclebench.errors import AutomorphicGraphError, DomainError
from oraclebench.graphs import (
    Graph,
    automorphisms,
    build_permuted_superposition,
    check_non_automorphic,
    compare_graphs,
    load_graph,
    sparse_inner,
    sparse_norm,
    superposition_overlap,
)

K3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
ASYM = [Graph(6, edges) for edges in ref.ASYMMETRIC_6]


def isomorphic(g, h):
    return any(g.relabel(rho).edges == h.edges for rho in permutations(range(g.vertex_count)))


def test_fixture_graphs_are_asymmetric_and_pairwise_distinct():
    for g in ASYM:
        assert len(automorphisms(g)) == 1
    for i, g in enumerate(ASYM):
        for h in ASYM[i + 1:]:
            assert not isomorphic(g, h)


def test_non_automorphic_examples():
    assert len(automorphisms(K3)) == 6
    assert not check_non_automorphic(K3)
    assert check_non_automorphic(Graph(1))
    assert check_non_automorphic(ASYM[0])


def test_graph_validation():
    with pytest.raises(DomainError):
        Graph(3, [(1, 1)])
    with pytest.raises(DomainError):
        Graph(3, [(0, 3)])
    with pytest.raises(DomainError):
        Graph(0)
    assert Graph(3, [(2, 0)]).edges == Graph(3, [(0, 2)]).edges
    assert Graph(4, [(0, 1), (2, 3)]).encode() == "100001"


def test_superposition_examples():
    psi = build_permuted_superposition(ASYM[0])
    assert len(psi) == 720
    assert all(amp == pytest.approx(1 / math.sqrt(720), abs=1e-15) for amp in psi.values())
    assert sparse_norm(psi) == pytest.approx(1.0, abs=1e-12)
    single = build_permuted_superposition(Graph(1))
    assert single == {"": 1.0}
    with pytest.raises(AutomorphicGraphError):
        build_permuted_superposition(K3)


@settings(max_examples=15, deadline=None)
@given(index=st.integers(0, len(ASYM) - 1), rho=st.permutations(range(6)))
def test_superposition_is_relabeling_invariant(index, rho):
    g = ASYM[index]
    assert build_permuted_superposition(g.relabel(rho)) == build_permuted_superposition(g)


def test_overlap_is_exactly_zero_or_one():
    states = [build_permuted_superposition(g) for g in ASYM]
    for i, a in enumerate(states):
        for j, b in enumerate(states):
            assert superposition_overlap(a, b) == (1 if i == j else 0)
            assert abs(sparse_inner(a, b) - (1 if i == j else 0)) < 1e-12


def test_compare_relabeled_graph():
    rho = tuple(np.random.default_rng(3).permutation(6).tolist())
    result = compare_graphs(ASYM[0], ASYM[0].relabel(rho), 20, seed=1)
    assert result.overlap == 1.0 and result.p_zero == 0.0
    assert result.summary.zero_count == 0
    assert result.verdict == "isomorphic"
    assert result.summary.error_bound == 2.0 ** -20
    assert compare_graphs(ASYM[1], ASYM[1], 5, seed=0).overlap == 1.0


def test_compare_non_isomorphic_graphs():
    result = compare_graphs(ASYM[0], ASYM[1], 20, seed=2)
    assert result.overlap == 0.0
    assert abs(result.p_zero - 0.5) < 1e-12
    assert result.summary.zero_count > 0 and result.verdict == "non-isomorphic"


def test_compare_errors():
    with pytest.raises(DomainError):
        compare_graphs(ASYM[0], Graph(5, [(0, 1)]), 5, 0)
    with pytest.raises(AutomorphicGraphError):
        compare_graphs(K3, K3, 5, 0)


def test_load_graph(tmp_path):
    g = load_graph(ref.write_graph(tmp_path / "g.txt", 6, ref.ASYMMETRIC_6[0]))
    assert g == ASYM[0]
    bad = {
        "dup.txt": "3 2\n0 1\n1 0\n",
        "count.txt": "3 2\n0 1\n",
        "loop.txt": "3 1\n1 1\n",
        "range.txt": "3 1\n0 5\n",
        "text.txt": "3 1\n0 a\n",
        "empty.txt": "",
    }
    for name, text in bad.items():
        path = tmp_path / name
        path.write_text(text)
        with pytest.raises(DomainError, match=name):
            load_graph(path)
