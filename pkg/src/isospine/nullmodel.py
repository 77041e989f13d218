"""Comparison models for center sizes: floored Gaussian eccentricities and the
margin against a complete binary-branching tree."""

from __future__ import annotations

from dataclasses import dataclass
from math import log

import numpy as np

from .curves import expected_supersingular_count

__all__ = [
    "ModelParams",
    "model_vertex_count",
    "sample_eccentricities",
    "sample_center_size",
    "tree_margin",
    "tree_size",
]


@dataclass(frozen=True)
class ModelParams:
    """mean = mean_coeff * ln(p); one independent draw per vertex."""

    mean_coeff: float = 1.8
    sigma: float = 0.38
    seed: int = 0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def model_vertex_count(p: int) -> tuple[int, bool]:
    """(vertex count, extension flag): (p-1)/12 for p = 1 mod 12, else the supersingular count."""
    if p % 12 == 1:
        return (p - 1) // 12, False
    return expected_supersingular_count(p), True


def sample_eccentricities(p: int, params: ModelParams = ModelParams(), n_vertices: int | None = None) -> np.ndarray:
    """Floored Normal(mean_coeff * ln p, sigma) draws, one per vertex, seeded by seed ^ p."""
    n = model_vertex_count(p)[0] if n_vertices is None else n_vertices
    if n < 1:
        raise ValueError("vertex count must be at least 1")
    rng = np.random.default_rng(params.seed ^ p)
    return np.floor(rng.normal(params.mean_coeff * log(p), params.sigma, size=n)).astype(np.int64)


def sample_center_size(p: int, params: ModelParams = ModelParams(), n_vertices: int | None = None) -> int:
    """Number of vertices whose floored sampled eccentricity equals the minimum."""
    ecc = sample_eccentricities(p, params, n_vertices)
    return int(np.count_nonzero(ecc == ecc.min()))


def tree_size(r: int) -> int:
    """Vertices within distance r of the root of the 3-regular tree."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    return 1 + 3 * (2**r - 1)


def tree_margin(n_vertices: int, r: int) -> int:
    return tree_size(r) - n_vertices
