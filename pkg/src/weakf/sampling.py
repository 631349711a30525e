"""Deterministic sampling of points and test vectors.

Residuals of pointwise tensor identities are measured against a fixed test
set at each sampled point: a g-orthonormalized coordinate basis, any
distinguished vectors supplied by the caller (the Reeb frame of a pack),
and 16 seeded random unit pairs. Everything is derived from explicit seeds
so two runs with the same configuration produce identical numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

N_RANDOM_PAIRS = 16
N_RANDOM_TRIPLES = 8


def point_rng(seed, index, tag=0):
    """Independent generator for sample point ``index`` of a run."""
    return np.random.default_rng([int(seed), int(index), int(tag)])


def orthonormal_basis(g0):
    """Gram-Schmidt of the coordinate frame with respect to ``g0`` (rows)."""
    m = g0.shape[0]
    rows = []
    for k in range(m):
        v = np.zeros(m)
        v[k] = 1.0
        for u in rows:
            v = v - (u @ g0 @ v) * u
        nrm = math.sqrt(v @ g0 @ v)
        rows.append(v / nrm)
    return np.array(rows)


def random_unit(g0, rng):
    v = rng.standard_normal(g0.shape[0])
    return v / math.sqrt(v @ g0 @ v)


@dataclass(frozen=True)
class TestVectors:
    """Stacked test vectors at a point (rows), with index bookkeeping."""

    vectors: np.ndarray      # (nv, m): basis rows, distinguished, random units
    n_basis: int
    n_distinguished: int
    triples: np.ndarray      # (nt, 3, m) extra random triples for 3-forms

    @property
    def basis(self):
        return self.vectors[: self.n_basis]


def build_test_vectors(g0, rng, distinguished=None):
    """Basis + distinguished vectors + 2 * N_RANDOM_PAIRS random units."""
    basis = orthonormal_basis(g0)
    rows = [basis]
    nd = 0
    if distinguished is not None and len(distinguished):
        d = np.asarray(distinguished, dtype=float)
        rows.append(d)
        nd = d.shape[0]
    rand = np.array([random_unit(g0, rng) for _ in range(2 * N_RANDOM_PAIRS)])
    rows.append(rand)
    triples = np.array(
        [
            [random_unit(g0, rng) for _ in range(3)]
            for _ in range(N_RANDOM_TRIPLES)
        ]
    )
    return TestVectors(
        vectors=np.vstack(rows),
        n_basis=basis.shape[0],
        n_distinguished=nd,
        triples=triples,
    )


def sup_gnorm(res, g0):
    """Max g-norm over the trailing test axes of ``res[k, ...]``."""
    q = np.einsum("k...,kl,l...->...", res, g0, res)
    return float(np.sqrt(max(q.max(), 0.0)))


def sup_abs(res):
    return float(np.abs(res).max())
