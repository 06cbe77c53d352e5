"""Linear-subspace arithmetic: orthonormal bases, projectors, principal angles.

Subspaces of R^n are stored by an orthonormal basis (n x d matrix), never by
their projector, so that angle computations reduce to an SVD of a small
d_U x d_V cross-Gram matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Relative singular-value cutoff used for rank decisions.
RANK_RTOL = 1e-10
# A principal cosine >= 1 - COS_ONE_TOL counts as an intersection direction.
COS_ONE_TOL = 1e-8


class ContainedSubspaceError(ValueError):
    """One subspace contains the other; no angle exists past the intersection."""


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of R^n given by an orthonormal basis.

    The basis is an n x d array with orthonormal columns; d may be 0 (the
    zero subspace). Instances are immutable.
    """

    basis: np.ndarray

    def __post_init__(self):
        basis = np.atleast_2d(np.asarray(self.basis, dtype=float))
        if basis.ndim != 2:
            raise ValueError("basis must be a 2-d array")
        if basis.shape[0] == 0:
            raise ValueError("ambient dimension must be positive")
        if basis.shape[1] > basis.shape[0]:
            raise ValueError("subspace dimension exceeds ambient dimension")
        basis = basis.copy()
        basis.flags.writeable = False
        object.__setattr__(self, "basis", basis)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        """Orthogonal projector basis @ basis.T onto the subspace."""
        return self.basis @ self.basis.T

    def project(self, x):
        return project(self, x)

    def complement(self) -> "Subspace":
        return complement(self)

    def validate(self, tol=1e-12):
        """Check basis orthonormality entrywise; raises on violation."""
        gram = self.basis.T @ self.basis
        err = np.max(np.abs(gram - np.eye(self.dim))) if self.dim else 0.0
        if err > tol:
            raise ValueError(f"basis not orthonormal: max deviation {err:.3e}")

    @staticmethod
    def zero(n: int) -> "Subspace":
        if n <= 0:
            raise ValueError("ambient dimension must be positive")
        return Subspace(np.zeros((n, 0)))

    @staticmethod
    def full(n: int) -> "Subspace":
        if n <= 0:
            raise ValueError("ambient dimension must be positive")
        return Subspace(np.eye(n))

    @staticmethod
    def from_coordinates(n: int, indices) -> "Subspace":
        """Span of the standard basis vectors e_i for i in `indices`."""
        indices = np.asarray(indices, dtype=int)
        basis = np.zeros((n, indices.size))
        basis[indices, np.arange(indices.size)] = 1.0
        return Subspace(basis)


@dataclass(frozen=True)
class AngleSet:
    """Principal-angle cosines between two subspaces.

    cosines is nonincreasing with values in [0, 1]; friedrichs_index is the
    1-based position d+1 of the Friedrichs angle, where d = dim(U & V) is the
    number of cosines within COS_ONE_TOL of 1.
    """

    cosines: np.ndarray
    friedrichs_index: int

    def __post_init__(self):
        cos = np.asarray(self.cosines, dtype=float).copy()
        cos.flags.writeable = False
        object.__setattr__(self, "cosines", cos)

    @property
    def intersection_dim(self) -> int:
        return self.friedrichs_index - 1


def orthonormalize(vectors, ambient_dim=None) -> Subspace:
    """Orthonormal basis for the span of `vectors` (a sequence of n-vectors).

    Rank-deficient input collapses: directions with singular value below
    RANK_RTOL times the largest are dropped. An empty sequence requires
    `ambient_dim` and yields the zero subspace.
    """
    vectors = [np.asarray(v, dtype=float).ravel() for v in vectors]
    if not vectors:
        if ambient_dim is None:
            raise ValueError("empty input needs an explicit ambient dimension")
        return Subspace.zero(ambient_dim)
    n = vectors[0].size
    if n == 0:
        raise ValueError("ambient dimension must be positive")
    if any(v.size != n for v in vectors):
        raise ValueError("vectors must share one ambient dimension")
    if ambient_dim is not None and ambient_dim != n:
        raise ValueError(f"vectors live in R^{n}, not R^{ambient_dim}")
    mat = np.column_stack(vectors)
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return Subspace.zero(n)
    rank = int(np.sum(s > RANK_RTOL * s[0]))
    return Subspace(u[:, :rank])


def project(subspace: Subspace, x) -> np.ndarray:
    """Orthogonal projection of x onto the subspace."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != subspace.ambient_dim:
        raise ValueError(
            f"vector of size {x.size} cannot be projected in R^{subspace.ambient_dim}"
        )
    if subspace.dim == 0:
        return np.zeros_like(x)
    return subspace.basis @ (subspace.basis.T @ x)


def principal_angles(u_space: Subspace, v_space: Subspace) -> AngleSet:
    """Principal-angle cosines via SVD of the cross-Gram matrix.

    Cosines are the singular values of U.T @ V (clamped to [0, 1]), sorted
    nonincreasing; their count is min(dim U, dim V). Either subspace being
    zero-dimensional yields an empty AngleSet.
    """
    if u_space.ambient_dim != v_space.ambient_dim:
        raise ValueError("subspaces have different ambient dimensions")
    if u_space.dim > v_space.dim:
        u_space, v_space = v_space, u_space
    if u_space.dim == 0:
        return AngleSet(np.zeros(0), 1)
    gram = u_space.basis.T @ v_space.basis
    cos = np.clip(np.linalg.svd(gram, compute_uv=False), 0.0, 1.0)
    d = int(np.sum(cos >= 1.0 - COS_ONE_TOL))
    return AngleSet(cos, d + 1)


def friedrichs_angle(u_space: Subspace, v_space: Subspace) -> float:
    """Friedrichs angle in (0, pi/2]: the first principal angle past U & V.

    Raises ContainedSubspaceError when one subspace contains the other
    (every principal cosine equals 1), since the angle would otherwise be
    silently reported as 0 and mask bugs.
    """
    angles = principal_angles(u_space, v_space)
    d = angles.intersection_dim
    if angles.cosines.size == 0 or d >= angles.cosines.size:
        raise ContainedSubspaceError(
            "one subspace is contained in the other; Friedrichs angle undefined"
        )
    return float(np.arccos(angles.cosines[d]))


def intersect(u_space: Subspace, v_space: Subspace) -> Subspace:
    """Intersection subspace, from cross-Gram singular directions with cosine ~ 1."""
    if u_space.ambient_dim != v_space.ambient_dim:
        raise ValueError("subspaces have different ambient dimensions")
    n = u_space.ambient_dim
    if u_space.dim == 0 or v_space.dim == 0:
        return Subspace.zero(n)
    swapped = u_space.dim > v_space.dim
    if swapped:
        u_space, v_space = v_space, u_space
    gram = u_space.basis.T @ v_space.basis
    left, cos, _ = np.linalg.svd(gram)
    keep = np.clip(cos, 0.0, 1.0) >= 1.0 - COS_ONE_TOL
    if not np.any(keep):
        return Subspace.zero(n)
    directions = u_space.basis @ left[:, keep]
    # Columns are orthonormal up to roundoff; re-orthonormalize to keep the
    # Subspace invariant tight.
    return orthonormalize(directions.T)


def complement(subspace: Subspace) -> Subspace:
    """Orthogonal complement."""
    n = subspace.ambient_dim
    if subspace.dim == 0:
        return Subspace.full(n)
    if subspace.dim == n:
        return Subspace.zero(n)
    u, _, _ = np.linalg.svd(subspace.basis, full_matrices=True)
    return Subspace(u[:, subspace.dim:])


def projector_distance(u_space: Subspace, v_space: Subspace) -> float:
    """Frobenius distance between the two orthogonal projectors.

    Uses ||P_U - P_V||_F^2 = dim U + dim V - 2 ||U.T V||_F^2, so no n x n
    matrix is formed.
    """
    if u_space.ambient_dim != v_space.ambient_dim:
        raise ValueError("subspaces have different ambient dimensions")
    cross = u_space.basis.T @ v_space.basis
    sq = u_space.dim + v_space.dim - 2.0 * float(np.sum(cross * cross))
    return float(np.sqrt(max(sq, 0.0)))
