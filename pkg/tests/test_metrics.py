import random
from fractions import Fraction

import networkx as nx
import pytest

from isospine.arith import make_field_context, primes_between
from isospine.classgrp import class_number
from isospine.graph import IsogenyMultigraph, build_full_graph, spine
from isospine.metrics import (
    center_survey_row,
    distances,
    eccentricity_profile,
    mean_component_diameter,
)
from isospine.nullmodel import tree_size


def to_networkx(G):
    H = nx.DiGraph()
    H.add_nodes_from(range(len(G)))
    H.add_edges_from((a, b) for (a, b) in G.edges if a != b)
    return H


def toy_graph(p, n, edges):
    F = make_field_context(p)
    both = {}
    for a, b in edges:
        both[(a, b)] = 1
        both[(b, a)] = 1
    return IsogenyMultigraph(p, 2, [F(i) for i in range(n)], both)


def test_distances_examples():
    G = build_full_graph(7, 2)
    assert distances(G, 0) == {0: 0}
    G = build_full_graph(29, 2)
    d = distances(G, G.find(0))
    assert d[G.find(2)] == 1 and d[G.find(25)] == 2
    T = toy_graph(101, 4, [(0, 1), (2, 3)])
    assert distances(T, 0) == {0: 0, 1: 1, 2: None, 3: None}
    with pytest.raises(ValueError):
        distances(T, 7)


def test_distances_match_networkx():
    for p in (101, 103, 389, 421):
        G = build_full_graph(p, 2)
        H = to_networkx(G)
        for v in random.Random(p).sample(range(len(G)), 5):
            ours = {w: d for w, d in distances(G, v).items() if d is not None}
            assert ours == nx.single_source_shortest_path_length(H, v)


def test_eccentricities_match_networkx():
    for p in primes_between(5, 400):
        G = build_full_graph(p, 2)
        rep = eccentricity_profile(G)
        ecc = nx.eccentricity(to_networkx(G))
        assert rep.eccentricities == [ecc[v] for v in range(len(G))]
        assert rep.radius == min(ecc.values()) and rep.diameter == max(ecc.values())
        assert rep.center == sorted(v for v in ecc if ecc[v] == rep.radius)
        assert rep.radius <= rep.diameter <= 2 * rep.radius
        assert tree_size(rep.radius) >= len(G)


def test_profile_examples():
    rep = eccentricity_profile(build_full_graph(7, 2))
    assert (rep.radius, rep.center, rep.center_fp_count) == (0, [0], 1)
    rep = eccentricity_profile(spine(build_full_graph(29, 2)))
    assert rep.diameter == 2
    rep = eccentricity_profile(spine(build_full_graph(59, 2)))
    assert rep.component_diameters == [4]


def test_profile_of_disconnected_graph_keeps_component_values():
    T = toy_graph(101, 5, [(0, 1), (2, 3), (3, 4)])
    rep = eccentricity_profile(T)
    assert rep.component_diameters == [1, 2]
    assert rep.strongly_connected_components
    assert rep.radius == 1 and rep.diameter == 2


def test_profile_without_strong_connectivity():
    F = make_field_context(101)
    G = IsogenyMultigraph(101, 2, [F(0), F(1)], {(0, 1): 1})
    rep = eccentricity_profile(G)
    assert rep.radius is None and rep.diameter is None and rep.center == []
    assert not rep.strongly_connected_components


def test_empty_graph_rejected():
    with pytest.raises(ValueError):
        eccentricity_profile(IsogenyMultigraph(101, 2, [], {}))
    with pytest.raises(ValueError):
        mean_component_diameter(IsogenyMultigraph(101, 2, [], {}))


def test_center_survey_rows():
    assert tuple(center_survey_row(7)) == (7, 1, 1, 0, 0, 1, 1)
    rep = eccentricity_profile(build_full_graph(11, 2))
    G = build_full_graph(11, 2)
    assert G.find(1728 % 11) in rep.center
    row = center_survey_row(23)
    assert row.n_vertices == 3
    assert row.center_fp_count <= row.center_size <= row.n_vertices


def test_mean_component_diameter():
    assert mean_component_diameter(spine(build_full_graph(29, 2))) == 2
    assert mean_component_diameter(spine(build_full_graph(59, 2))) == 4
    T = toy_graph(101, 6, [(0, 1), (2, 3), (4, 5)])
    assert mean_component_diameter(T) == 1
    T = toy_graph(101, 5, [(0, 1), (2, 3), (3, 4)])
    assert mean_component_diameter(T) == Fraction(3, 2)


def test_frobenius_preserves_distances_from_fp_vertices():
    rng = random.Random(5)
    for p in rng.sample(primes_between(5, 500), 12):
        G = build_full_graph(p, 2)
        for v in [i for i in range(len(G)) if G.is_fp_vertex(i)][:4]:
            d = distances(G, v)
            for w in range(len(G)):
                assert d[w] == d[G.index[G.vertices[w].conjugate()]]


def test_spine_vertex_counts():
    for p in primes_between(17, 700):
        n = len(spine(build_full_graph(p, 2)))
        if p % 4 == 1:
            assert n == class_number(-4 * p) // 2
        elif p % 8 == 3:
            assert n == 2 * class_number(-p)
        else:
            assert n == class_number(-p)
