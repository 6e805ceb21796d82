"""Simplicial (co)homology of the (N-1)-simplex, specialized to k <= 2.

Chain bases are the sorted (k+1)-subsets of {1..N} in lexicographic order, so
the 1-chain basis lines up index-for-index with codes.EdgeBasis.  Boundary
matrices are exact integer matrices; d_k d_{k+1} = 0 is asserted, not
approximated.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .codes import StabilizerCode
from .tolerances import TOL

__all__ = [
    "ChainComplex",
    "SubspacePair",
    "boundary_matrix",
    "chain_complex",
    "decompose",
    "butterfly_matrix",
    "build_homological_code",
    "verify_correctability_homological",
    "rowspaces_equal",
]


def boundary_matrix(N: int, k: int) -> np.ndarray:
    """d_k: C_k -> C_{k-1} of the simplex on {1..N}; C_{-1} is identified with R.

    d e_{i1..i(k+1)} = sum_m (-1)^m e_{omit i_m}.
    """
    if N < 3:
        raise ValueError(f"need N >= 3, got {N}")
    if k not in (0, 1, 2):
        raise ValueError(f"only k in {{0,1,2}} supported, got {k}")
    sources = list(combinations(range(1, N + 1), k + 1))
    if k == 0:
        return np.ones((1, N), dtype=int)
    targets = {c: i for i, c in enumerate(combinations(range(1, N + 1), k))}
    D = np.zeros((len(targets), len(sources)), dtype=int)
    for col, simplex in enumerate(sources):
        for m in range(k + 1):
            face = simplex[:m] + simplex[m + 1 :]
            D[targets[face], col] += (-1) ** m
    return D


@dataclass(frozen=True)
class ChainComplex:
    N: int
    boundary: dict[int, np.ndarray]

    def __post_init__(self):
        for k in (0, 1):
            prod = self.boundary[k] @ self.boundary[k + 1]
            assert not prod.any(), f"d_{k} d_{k+1} != 0"


def chain_complex(N: int) -> ChainComplex:
    return ChainComplex(N, {k: boundary_matrix(N, k) for k in (0, 1, 2)})


@dataclass(frozen=True)
class SubspacePair:
    """Orthonormal row-bases of R_k = Im d_k^T and L_k = Im d_{k+1} inside C_k."""

    R: np.ndarray
    L: np.ndarray


def _rowspace_basis(M: np.ndarray) -> np.ndarray:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    _, svals, vt = np.linalg.svd(M, full_matrices=False)
    return vt[: int(np.sum(svals > TOL.rank))]


def decompose(N: int, k: int) -> SubspacePair:
    """Split C_k into the coboundary image R_k and boundary image L_k."""
    if k not in (0, 1):
        raise ValueError(f"decompose supports k in {{0,1}}, got {k}")
    R = _rowspace_basis(boundary_matrix(N, k))
    L = _rowspace_basis(boundary_matrix(N, k + 1).T)
    expect_r, expect_l = comb(N - 1, k), comb(N - 1, k + 1)
    if R.shape[0] != expect_r or L.shape[0] != expect_l:
        raise ValueError(
            f"rank deficiency: dim R_{k}={R.shape[0]} (expected {expect_r}), "
            f"dim L_{k}={L.shape[0]} (expected {expect_l})"
        )
    return SubspacePair(R, L)


def butterfly_matrix(N: int) -> np.ndarray:
    """(N-1) x N basis of the Q subspace: all-ones row, then e_1 + e_j rows.

    Chosen so that deleting any single column leaves an invertible minor.
    """
    if N < 4:
        raise ValueError(f"need N >= 4, got {N}")
    M = np.zeros((N - 1, N), dtype=int)
    M[0, :] = 1
    for i in range(1, N - 1):
        M[i, 0] = 1
        M[i, i] = 1
    return M


def build_homological_code(N: int, *, n_q_rows: int | None = None) -> StabilizerCode:
    """Code from the chain complex: X rows from Im d_2, P rows from d_1^T Q.

    X rows are the boundaries of the triangles through vertex N -- a different
    spanning set of the loop space than the graph construction's vertex-1
    triangles, so span comparisons between the two are non-trivial.  P rows
    carry a global minus sign relative to d_1^T (with the omit-one-vertex sign
    convention, d_1^T e_j is the negated star of vertex j); the sign makes the
    rows equal the graph code's w vectors exactly.

    n_q_rows deliberately truncates the butterfly rows (used by negative
    tests); default uses all N-2 non-constant rows.
    """
    if N < 4:
        raise ValueError(f"need N >= 4, got {N}")
    d1 = boundary_matrix(N, 1)
    d2 = boundary_matrix(N, 2)
    triangles = list(combinations(range(1, N + 1), 3))
    cols = [i for i, t in enumerate(triangles) if N in t]
    x_rows = d2[:, cols].T.astype(float)
    q = butterfly_matrix(N)[1:]
    if n_q_rows is not None:
        q = q[:n_q_rows]
    p_rows = -(d1.T @ q.T).T.astype(float)
    return StabilizerCode(d1.shape[1], x_rows, p_rows, name=f"homological-{N}")


def rowspaces_equal(A: np.ndarray, B: np.ndarray, tol: float = TOL.rank) -> bool:
    """Mutual containment of row spaces, by projection residual both ways."""
    QA = _rowspace_basis(A)
    QB = _rowspace_basis(B)
    res_b = np.max(np.abs(B - (B @ QA.T) @ QA), initial=0.0)
    res_a = np.max(np.abs(A - (A @ QB.T) @ QB), initial=0.0)
    return bool(res_a <= tol and res_b <= tol)


def verify_correctability_homological(
    N: int, vertex: int, *, n_q_rows: int | None = None
) -> bool:
    """check_correctable on the homological code, erasing edges away from vertex."""
    from .codes import check_correctable, edge_basis, erasure_for_vertex

    code = build_homological_code(N, n_q_rows=n_q_rows)
    basis = edge_basis(N)
    return check_correctable(code, erasure_for_vertex(code, basis, vertex))
