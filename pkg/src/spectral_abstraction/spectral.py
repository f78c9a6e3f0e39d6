"""Laplacian eigen-analysis.

Everything downstream of this module consumes spectra through one
deterministic convention:

* eigenvalues ascending, eigenvectors column-orthonormal;
* within a numerically degenerate eigenvalue group, the eigenvector
  basis is rebuilt canonically (see below) so it depends only on the
  eigenspace itself, never on solver internals;
* the first entry of each eigenvector whose magnitude exceeds 1e-12 is
  made positive.

The canonical basis for a degenerate group is produced by projecting a
fixed sequence of probe vectors (scaled Vandermonde columns, then
standard basis vectors as a fallback) onto the eigenspace and running
Gram-Schmidt in probe order. Any orthonormal basis spans the same
space, so this choice is free, and it makes repeated runs, permuted
inputs and different LAPACK builds agree about which vector is "the"
Fiedler vector when lambda_2 is repeated.

For the key quadratic form identity: with L = D - A,

    x^T L x = sum_{(i,j) in E} w_ij (x_i - x_j)^2

so Rayleigh quotients of combinatorial Laplacians are nonnegative and
vanish exactly on vectors that are constant on every connected
component.

Dense symmetric solvers are exact enough up to a couple thousand nodes;
beyond DENSE_SOLVER_MAX_N a shift-invert Lanczos solver extracts the
few smallest pairs instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .errors import (
    ConvergenceFailureError,
    DimensionOutOfRangeError,
    DisconnectedGraphError,
    NotSymmetricError,
    TooFewNodesError,
    ZeroVectorError,
)
from .graphs import Graph, LaplacianKind, LaplacianMatrix, laplacian

DENSE_SOLVER_MAX_N = 2048
CONNECTIVITY_TOL = 1e-9

_SYMMETRY_TOL = 1e-12
_SIGN_TOL = 1e-12
_DEGENERACY_TOL = 1e-10
_ORTHONORMALITY_TOL = 1e-9
_RESIDUAL_TOL = 1e-8
_PSD_TOL = 1e-10
_PROBE_POWERS = 12
# standard-basis fallback probes guarantee a residual of at least
# sqrt((d - j) / n) >= 1/sqrt(n) inside the unspanned remainder, so this
# acceptance floor is always reachable and caps the rounding amplification
# of the Gram-Schmidt normalization near 1e-13
_PROBE_ACCEPT_TOL = 1e-3


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenpairs of a Laplacian, possibly truncated to the smallest few.

    eigenvalues has shape (m,), ascending; eigenvectors has shape
    (n, m) with eigenvectors[:, k] belonging to eigenvalues[k]. A full
    decomposition has m == n.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source_kind: LaplacianKind

    def __post_init__(self) -> None:
        self.eigenvalues.flags.writeable = False
        self.eigenvectors.flags.writeable = False

    @property
    def n(self) -> int:
        return self.eigenvectors.shape[0]

    @property
    def n_pairs(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def is_complete(self) -> bool:
        return self.n_pairs == self.n


@dataclass(frozen=True, eq=False)
class Embedding:
    """Spectral coordinates: column j is eigenvector j+2 (1-based) of the source."""

    coordinates: np.ndarray
    dim: int

    def __post_init__(self) -> None:
        self.coordinates.flags.writeable = False

    @property
    def n(self) -> int:
        return self.coordinates.shape[0]


def _probe_vectors(n: int):
    """Deterministic dense probe sequence used to canonicalize eigenspaces.

    Scaled Vandermonde columns ((i+1)/n)^t are dense and generic, which
    keeps the canonical basis from aligning with sparse coordinate
    patterns; standard basis vectors follow as a completeness fallback.
    """
    base = (np.arange(1, n + 1)) / n
    for t in range(1, _PROBE_POWERS + 1):
        x = base**t
        yield x / np.linalg.norm(x)
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        yield e


def _canonical_subspace_basis(V: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(V) that depends only on the subspace."""
    n, d = V.shape
    basis: list[np.ndarray] = []
    for probe in _probe_vectors(n):
        cand = V @ (V.T @ probe)
        # classical Gram-Schmidt, run twice for numerical orthogonality
        for _ in range(2):
            for b in basis:
                cand = cand - (b @ cand) * b
        nrm = np.linalg.norm(cand)
        if nrm > _PROBE_ACCEPT_TOL:
            basis.append(cand / nrm)
            if len(basis) == d:
                return _polish_basis(V, np.column_stack(basis))
    # pathological: probes failed to span the space; keep the solver basis
    return V


def _polish_basis(V: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Strip the rounding noise the probe loop accumulates outside span(V).

    Normalizing residuals whose norm sits near the acceptance floor
    amplifies out-of-subspace rounding, and later Gram-Schmidt steps
    re-inject it; one re-projection followed by a re-orthonormalization
    at norms near one removes it without changing the chosen directions.
    """
    B = V @ (V.T @ B)
    for j in range(B.shape[1]):
        col = B[:, j]
        for _ in range(2):
            for i in range(j):
                col = col - (B[:, i] @ col) * B[:, i]
        B[:, j] = col / np.linalg.norm(col)
    return B


def _degenerate_groups(vals: np.ndarray) -> list[tuple[int, int]]:
    groups: list[tuple[int, int]] = []
    start = 0
    for i in range(1, vals.shape[0]):
        if vals[i] - vals[i - 1] > _DEGENERACY_TOL * max(1.0, abs(vals[i])):
            groups.append((start, i))
            start = i
    groups.append((start, vals.shape[0]))
    return groups


def _apply_sign_convention(vecs: np.ndarray) -> np.ndarray:
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        significant = np.nonzero(np.abs(col) > _SIGN_TOL)[0]
        if significant.size and col[significant[0]] < 0:
            vecs[:, k] = -col
    return vecs


def _canonicalize(vals: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    for lo, hi in _degenerate_groups(vals):
        if hi - lo > 1:
            vecs[:, lo:hi] = _canonical_subspace_basis(vecs[:, lo:hi])
    return _apply_sign_convention(vecs)


def _validate_spectrum(M: np.ndarray, vals: np.ndarray, vecs: np.ndarray) -> None:
    if vals.size and vals[0] < -_PSD_TOL:
        raise ConvergenceFailureError(
            f"spectrum violates positive semidefiniteness: lambda_1 = {vals[0]}"
        )
    gram = vecs.T @ vecs
    gram_err = np.abs(gram - np.eye(vals.shape[0])).max() if vals.size else 0.0
    if gram_err >= _ORTHONORMALITY_TOL:
        raise ConvergenceFailureError(f"eigenvectors lost orthonormality ({gram_err:.2e})")
    residual = M @ vecs - vecs * vals
    for k in range(vals.shape[0]):
        bound = _RESIDUAL_TOL * max(1.0, abs(vals[k]))
        err = np.linalg.norm(residual[:, k])
        if err >= bound:
            raise ConvergenceFailureError(
                f"residual for eigenpair {k} is {err:.2e}, bound {bound:.2e}"
            )


def _check_symmetric(M: np.ndarray) -> None:
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSymmetricError(f"expected a square matrix, got shape {M.shape}")
    asym = np.abs(M - M.T).max() if M.size else 0.0
    if asym > _SYMMETRY_TOL:
        raise NotSymmetricError(f"matrix asymmetry {asym:.2e} exceeds {_SYMMETRY_TOL}")


def eigendecompose(L: LaplacianMatrix) -> Spectrum:
    """Full deterministic eigendecomposition of a Laplacian.

    Uses the dense symmetric solver, then sorts ascending, rebuilds
    degenerate eigenspaces canonically, applies the sign convention and
    verifies orthonormality, residuals and positive semidefiniteness.
    """
    M = np.asarray(L.matrix, dtype=np.float64)
    _check_symmetric(M)
    try:
        vals, vecs = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailureError(f"dense eigensolver failed: {exc}") from exc
    order = np.argsort(vals, kind="stable")
    vals = np.ascontiguousarray(vals[order])
    vecs = np.ascontiguousarray(vecs[:, order])
    vecs = _canonicalize(vals, vecs)
    _validate_spectrum(M, vals, vecs)
    return Spectrum(eigenvalues=vals, eigenvectors=vecs, source_kind=L.kind)


def partial_eigendecompose(L: LaplacianMatrix, count: int) -> Spectrum:
    """Smallest `count` eigenpairs via shift-invert Lanczos.

    Intended for matrices too large for the dense path; falls back to
    the dense solver whenever that is at least as cheap. The Lanczos
    start vector is fixed, so results are reproducible.
    """
    n = L.n
    if count < 1:
        raise DimensionOutOfRangeError("count must be at least 1")
    if count >= n - 1 or n <= DENSE_SOLVER_MAX_N:
        full = eigendecompose(L)
        return Spectrum(
            eigenvalues=full.eigenvalues[:count].copy(),
            eigenvectors=full.eigenvectors[:, :count].copy(),
            source_kind=L.kind,
        )
    M = np.asarray(L.matrix, dtype=np.float64)
    _check_symmetric(M)
    sparse = scipy.sparse.csc_matrix(M)
    v0 = np.linspace(1.0, 2.0, n)
    try:
        vals, vecs = scipy.sparse.linalg.eigsh(
            sparse, k=count, sigma=-1e-2, which="LM", v0=v0, tol=0
        )
    except scipy.sparse.linalg.ArpackNoConvergence as exc:
        raise ConvergenceFailureError(f"Lanczos solver failed: {exc}") from exc
    order = np.argsort(vals, kind="stable")
    vals = np.ascontiguousarray(vals[order])
    vecs = np.ascontiguousarray(vecs[:, order])
    vecs = _canonicalize(vals, vecs)
    _validate_spectrum(M, vals, vecs)
    return Spectrum(eigenvalues=vals, eigenvectors=vecs, source_kind=L.kind)


def graph_spectrum(
    g: Graph,
    kind: LaplacianKind = LaplacianKind.COMBINATORIAL,
    count: int | None = None,
) -> Spectrum:
    """Spectrum of a graph Laplacian, choosing dense or partial solver.

    With count=None the decomposition is always full (dense). With a
    count, graphs above DENSE_SOLVER_MAX_N nodes use the partial solver
    for just the smallest `count` pairs.
    """
    L = laplacian(g, kind)
    if count is None or g.n <= DENSE_SOLVER_MAX_N:
        s = eigendecompose(L)
        if count is not None and count < s.n_pairs:
            return Spectrum(
                eigenvalues=s.eigenvalues[:count].copy(),
                eigenvectors=s.eigenvectors[:, :count].copy(),
                source_kind=kind,
            )
        return s
    return partial_eigendecompose(L, count)


def rayleigh_quotient(L: LaplacianMatrix, x: np.ndarray) -> float:
    """(x^T L x) / (x^T x) for a nonzero vector x.

    For combinatorial Laplacians this equals the edge sum
    sum w_ij (x_i - x_j)^2 divided by x^T x.
    """
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.shape[0] != L.n:
        raise DimensionOutOfRangeError(
            f"vector has length {x.shape[0]}, matrix is {L.n} x {L.n}"
        )
    denom = float(x @ x)
    if denom == 0.0:
        raise ZeroVectorError("Rayleigh quotient of the zero vector is undefined")
    return float(x @ (L.matrix @ x)) / denom


def algebraic_connectivity(s: Spectrum) -> float:
    """Second-smallest eigenvalue, lambda_2."""
    if s.n < 2 or s.n_pairs < 2:
        raise TooFewNodesError("algebraic connectivity needs at least two eigenpairs")
    return float(s.eigenvalues[1])


def fiedler_vector(s: Spectrum) -> np.ndarray:
    """Eigenvector for lambda_2 of a connected graph.

    Raises DisconnectedGraphError when lambda_2 <= 1e-9, since the
    second eigenvector of a disconnected Laplacian carries component
    structure rather than a cut direction. Unit norm; for combinatorial
    Laplacians its entries sum to zero because it is orthogonal to the
    constant eigenvector.
    """
    if algebraic_connectivity(s) <= CONNECTIVITY_TOL:
        raise DisconnectedGraphError(
            "graph is disconnected (lambda_2 is numerically zero)"
        )
    return np.array(s.eigenvectors[:, 1])


def spectral_embedding(s: Spectrum, k: int) -> Embedding:
    """Embed nodes into R^k using eigenvectors 2..k+1 (skipping the first).

    Requires 1 <= k <= n-1 and a spectrum holding at least k+1 pairs.
    """
    if not 1 <= k <= s.n - 1:
        raise DimensionOutOfRangeError(f"embedding dimension {k} outside 1..{s.n - 1}")
    if s.n_pairs < k + 1:
        raise DimensionOutOfRangeError(
            f"spectrum holds {s.n_pairs} pairs, embedding dimension {k} needs {k + 1}"
        )
    return Embedding(coordinates=np.array(s.eigenvectors[:, 1 : k + 1]), dim=k)
