"""Distances, eccentricities, radius, diameter and center of isogeny multigraphs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .graph import IsogenyMultigraph, build_full_graph

__all__ = [
    "MetricsReport",
    "CenterRow",
    "distances",
    "out_neighbors",
    "eccentricity_profile",
    "center_survey_row",
    "mean_component_diameter",
]


def out_neighbors(G: IsogenyMultigraph) -> list[list[int]]:
    """Out-neighbors of each vertex, loops dropped (they never shorten a path)."""
    out = [set() for _ in range(len(G))]
    for a, b in G.edges:
        if a != b:
            out[a].add(b)
    return [sorted(s) for s in out]


def distances(G: IsogenyMultigraph, v: int) -> dict[int, Optional[int]]:
    """Breadth-first distances from vertex index v; None marks unreachable vertices."""
    if not 0 <= v < len(G):
        raise ValueError(f"unknown vertex index {v}")
    nbrs = out_neighbors(G)
    dist: dict[int, Optional[int]] = {i: None for i in range(len(G))}
    dist[v] = 0
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if dist[w] is None:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


@dataclass
class MetricsReport:
    eccentricities: list[int]
    radius: Optional[int]
    diameter: Optional[int]
    center: list[int]
    component_diameters: list[int]
    center_fp_count: int
    strongly_connected_components: bool

    @property
    def center_size(self) -> int:
        return len(self.center)


def _ball_growth(nbrs: list[list[int]]) -> tuple[list[int], list[int]]:
    """Eccentricity and final reachable set (as a bitmask) of every vertex.

    Round k holds the ball of radius k around each vertex; the ball of radius
    k+1 is the union of the radius-k balls of the out-neighbors.
    """
    n = len(nbrs)
    balls = [1 << i for i in range(n)]
    ecc = [0] * n
    active = set(range(n))
    k = 0
    while active:
        k += 1
        grown = list(balls)
        for v in active:
            acc = balls[v]
            for w in nbrs[v]:
                acc |= balls[w]
            grown[v] = acc
        still = set()
        for v in active:
            if grown[v] != balls[v]:
                ecc[v] = k
                still.add(v)
        balls = grown
        active = still
    return ecc, balls


def eccentricity_profile(G: IsogenyMultigraph) -> MetricsReport:
    """Out-eccentricities over reachable vertices, and the derived radius, diameter and center.

    Radius, diameter and center are only reported when every component is
    strongly connected; component diameters are always reported.
    """
    if len(G) == 0:
        raise ValueError("empty graph")
    nbrs = out_neighbors(G)
    ecc, reach = _ball_growth(nbrs)
    comps = G.components()
    strong = True
    for comp in comps:
        mask = 0
        for v in comp:
            mask |= 1 << v
        if any(reach[v] != mask for v in comp):
            strong = False
            break
    comp_diams = [max(ecc[v] for v in comp) for comp in comps]
    if strong:
        radius: Optional[int] = min(ecc)
        diameter: Optional[int] = max(ecc)
        center = [v for v in range(len(G)) if ecc[v] == radius]
    else:
        radius = diameter = None
        center = []
    fp_count = sum(1 for v in center if G.is_fp_vertex(v))
    return MetricsReport(ecc, radius, diameter, center, comp_diams, fp_count, strong)


class CenterRow(NamedTuple):
    p: int
    n_vertices: int
    n_fp_vertices: int
    radius: Optional[int]
    diameter: Optional[int]
    center_size: int
    center_fp_count: int


def center_survey_row(p: int, ell: int = 2, full: Optional[IsogenyMultigraph] = None) -> CenterRow:
    """Center statistics of the full supersingular graph at p."""
    G = full if full is not None else build_full_graph(p, ell)
    rep = eccentricity_profile(G)
    n_fp = sum(1 for i in range(len(G)) if G.is_fp_vertex(i))
    return CenterRow(p, len(G), n_fp, rep.radius, rep.diameter, rep.center_size, rep.center_fp_count)


def mean_component_diameter(sp: IsogenyMultigraph) -> Fraction:
    """Mean of the component diameters, as an exact rational."""
    if len(sp) == 0:
        raise ValueError("empty graph")
    diams = eccentricity_profile(sp).component_diameters
    return Fraction(sum(diams), len(diams))
