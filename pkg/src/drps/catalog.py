"""Catalog of partly smooth convex functions with exact proximity operators.

Every function here is partly smooth relative to an affine or linear
manifold, and exposes, besides evaluation and prox:

* ``model_subspace(x)``    tangent subspace T_x of the active manifold,
* ``model_gradient(x)``    projection of the subdifferential onto T_x,
* ``riemannian_hessian(x)`` curvature of the function along the manifold
  (zero for every polyhedral instance),
* ``ri_margin(x, u)``      signed margin of u inside the relative interior
  of the subdifferential at x (+inf / -inf sentinels for the subspace and
  "not even a subgradient" cases),
* ``model_pattern(x)``     a hashable activity signature; equal patterns
  produce bit-identical model-subspace bases, which makes identification
  monitoring cheap.

Active-set detection uses tight relative thresholds: iterates of the
splitting scheme land exactly on the limiting pattern once identification
occurs for polyhedral pairs, so loose thresholds would only invite false
positives.
"""

from __future__ import annotations

import numpy as np

from .subspaces import Subspace

# |x_i| <= ZERO_RTOL * (1 + ||x||) counts as a zero entry; the same relative
# rule decides l-inf saturation and box-face activity.
ZERO_RTOL = 1e-10
# Tolerance for "this vector is a subgradient" equality checks in ri_margin.
SUBGRAD_ATOL = 1e-9
INF = float("inf")


def soft_threshold(x, t):
    """Componentwise soft threshold; t may be a scalar or a vector."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def l1_ball_projection(x, radius=1.0):
    """Euclidean projection onto {v : ||v||_1 <= radius}, by sort and threshold."""
    x = np.asarray(x, dtype=float).ravel()
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if radius == 0:
        return np.zeros_like(x)
    a = np.abs(x)
    if a.sum() <= radius:
        return x.copy()
    u = np.sort(a)[::-1]
    cssv = np.cumsum(u)
    j = np.arange(1, u.size + 1)
    rho = int(np.max(np.nonzero(u * j > cssv - radius)[0]))
    tau = (cssv[rho] - radius) / (rho + 1.0)
    return np.sign(x) * np.maximum(a - tau, 0.0)


def _as_vector(x, n, what="x"):
    x = np.asarray(x, dtype=float).ravel()
    if x.size != n:
        raise ValueError(f"{what} has size {x.size}, expected {n}")
    return x


def _support_mask(x):
    return np.abs(x) > ZERO_RTOL * (1.0 + np.linalg.norm(x))


class PartlySmoothFunction:
    """Shared plumbing for the catalog; subclasses fill in the behavior."""

    def __init__(self, n: int):
        if n <= 0:
            raise ValueError("ambient dimension must be positive")
        self.n = int(n)

    # -- interface ---------------------------------------------------------
    def value(self, x) -> float:
        raise NotImplementedError

    def prox(self, gamma: float, x) -> np.ndarray:
        if gamma <= 0:
            raise ValueError("prox parameter gamma must be positive")
        x = _as_vector(x, self.n)
        return self._prox(gamma, x)

    def model_pattern(self, x) -> tuple:
        raise NotImplementedError

    def model_subspace(self, x) -> Subspace:
        return self.subspace_from_pattern(self.model_pattern(x))

    def subspace_from_pattern(self, pattern) -> Subspace:
        raise NotImplementedError

    def pattern_dim(self, pattern) -> int:
        return self.subspace_from_pattern(pattern).dim

    def model_gradient(self, x) -> np.ndarray:
        raise NotImplementedError

    def riemannian_hessian(self, x) -> np.ndarray:
        """Symmetric PSD map supported on the model subspace; zero unless curved."""
        return np.zeros((self.n, self.n))

    def ri_margin(self, x, u) -> float:
        raise NotImplementedError

    def _prox(self, gamma, x):
        raise NotImplementedError


class Zero(PartlySmoothFunction):
    """The zero function; prox is the identity and T_x is all of R^n."""

    def value(self, x):
        _as_vector(x, self.n)
        return 0.0

    def _prox(self, gamma, x):
        return x.copy()

    def model_pattern(self, x):
        return ()

    def subspace_from_pattern(self, pattern):
        return Subspace.full(self.n)

    def model_gradient(self, x):
        return np.zeros(self.n)

    def ri_margin(self, x, u):
        u = _as_vector(u, self.n, "u")
        return INF if np.max(np.abs(u), initial=0.0) <= SUBGRAD_ATOL else -INF


class L1(PartlySmoothFunction):
    """Weighted l1 norm sum_i w_i |x_i|; polyhedral.

    T_x keeps the coordinates in supp(x); the model gradient is w*sign(x)
    there; prox is the componentwise soft threshold at gamma*w.
    """

    def __init__(self, n, weights=None):
        super().__init__(n)
        if weights is None:
            self.weights = np.ones(self.n)
        else:
            self.weights = _as_vector(weights, self.n, "weights").copy()
            if np.any(self.weights <= 0):
                raise ValueError("l1 weights must be positive")

    def value(self, x):
        return float(np.sum(self.weights * np.abs(_as_vector(x, self.n))))

    def _prox(self, gamma, x):
        return soft_threshold(x, gamma * self.weights)

    def model_pattern(self, x):
        x = _as_vector(x, self.n)
        return tuple(np.nonzero(_support_mask(x))[0].tolist())

    def subspace_from_pattern(self, pattern):
        return Subspace.from_coordinates(self.n, list(pattern))

    def model_gradient(self, x):
        x = _as_vector(x, self.n)
        g = np.zeros(self.n)
        supp = _support_mask(x)
        g[supp] = self.weights[supp] * np.sign(x[supp])
        return g

    def ri_margin(self, x, u):
        x = _as_vector(x, self.n)
        u = _as_vector(u, self.n, "u")
        supp = _support_mask(x)
        if np.any(np.abs(u[supp] - self.weights[supp] * np.sign(x[supp])) > SUBGRAD_ATOL):
            return -INF
        off = ~supp
        if not np.any(off):
            return INF
        return float(np.min(self.weights[off] - np.abs(u[off])))


class GroupL12(PartlySmoothFunction):
    """Group-sparsity norm sum_b ||x_b||_2 over a block partition; not polyhedral.

    On an active block the manifold is curved in value but linear in geometry:
    T_x keeps all coordinates of active blocks, the model gradient is
    x_b/||x_b||, and the Riemannian Hessian on block b is
    (I - x_b x_b^T/||x_b||^2)/||x_b||.
    """

    def __init__(self, n, blocks):
        super().__init__(n)
        self.blocks = [np.asarray(b, dtype=int) for b in blocks]
        seen = np.concatenate(self.blocks) if self.blocks else np.zeros(0, int)
        if sorted(seen.tolist()) != list(range(self.n)):
            raise ValueError("blocks must partition range(n)")

    def _active(self, x):
        norms = np.array([np.linalg.norm(x[b]) for b in self.blocks])
        return norms > ZERO_RTOL * (1.0 + np.linalg.norm(x)), norms

    def value(self, x):
        x = _as_vector(x, self.n)
        return float(sum(np.linalg.norm(x[b]) for b in self.blocks))

    def _prox(self, gamma, x):
        p = np.zeros_like(x)
        for b in self.blocks:
            nb = np.linalg.norm(x[b])
            if nb > gamma:
                p[b] = (1.0 - gamma / nb) * x[b]
        return p

    def model_pattern(self, x):
        x = _as_vector(x, self.n)
        active, _ = self._active(x)
        return tuple(np.nonzero(active)[0].tolist())

    def subspace_from_pattern(self, pattern):
        if not pattern:
            return Subspace.zero(self.n)
        coords = np.concatenate([self.blocks[i] for i in pattern])
        return Subspace.from_coordinates(self.n, np.sort(coords))

    def model_gradient(self, x):
        x = _as_vector(x, self.n)
        active, norms = self._active(x)
        g = np.zeros(self.n)
        for i in np.nonzero(active)[0]:
            b = self.blocks[i]
            g[b] = x[b] / norms[i]
        return g

    def riemannian_hessian(self, x):
        x = _as_vector(x, self.n)
        active, norms = self._active(x)
        h = np.zeros((self.n, self.n))
        for i in np.nonzero(active)[0]:
            b = self.blocks[i]
            unit = x[b] / norms[i]
            h[np.ix_(b, b)] = (np.eye(b.size) - np.outer(unit, unit)) / norms[i]
        return h

    def ri_margin(self, x, u):
        x = _as_vector(x, self.n)
        u = _as_vector(u, self.n, "u")
        active, norms = self._active(x)
        margin = INF
        for i, b in enumerate(self.blocks):
            if active[i]:
                if np.linalg.norm(u[b] - x[b] / norms[i]) > SUBGRAD_ATOL:
                    return -INF
            else:
                margin = min(margin, 1.0 - float(np.linalg.norm(u[b])))
        return margin


class LInf(PartlySmoothFunction):
    """The max norm ||x||_inf; polyhedral.

    With I the saturation set, T_x = span{sign(x_I) on I} + free off-I
    coordinates, and the model gradient puts sign(x_i)/|I| on I. The prox
    goes through the Moreau identity with the exact sort-and-threshold
    l1-ball projection.
    """

    def value(self, x):
        return float(np.max(np.abs(_as_vector(x, self.n)), initial=0.0))

    def _prox(self, gamma, x):
        return x - gamma * l1_ball_projection(x / gamma, 1.0)

    def _saturation(self, x):
        top = np.max(np.abs(x), initial=0.0)
        if top <= ZERO_RTOL:
            return np.zeros(self.n, dtype=bool), True
        return np.abs(x) >= top - ZERO_RTOL * (1.0 + top), False

    def model_pattern(self, x):
        x = _as_vector(x, self.n)
        sat, is_zero = self._saturation(x)
        if is_zero:
            return ("zero",)
        idx = np.nonzero(sat)[0]
        signs = np.sign(x[idx]).astype(int)
        # T_x only sees the sign vector up to a global flip; canonicalize so
        # that equal subspaces compare equal as patterns.
        if signs[0] < 0:
            signs = -signs
        return (tuple(idx.tolist()), tuple(signs.tolist()))

    def subspace_from_pattern(self, pattern):
        if pattern == ("zero",):
            return Subspace.zero(self.n)
        idx, signs = pattern
        idx = np.asarray(idx, dtype=int)
        free = np.setdiff1d(np.arange(self.n), idx)
        basis = np.zeros((self.n, 1 + free.size))
        basis[idx, 0] = np.asarray(signs, dtype=float) / np.sqrt(idx.size)
        basis[free, np.arange(1, 1 + free.size)] = 1.0
        return Subspace(basis)

    def model_gradient(self, x):
        x = _as_vector(x, self.n)
        sat, is_zero = self._saturation(x)
        g = np.zeros(self.n)
        if is_zero:
            return g
        idx = np.nonzero(sat)[0]
        g[idx] = np.sign(x[idx]) / idx.size
        return g

    def ri_margin(self, x, u):
        x = _as_vector(x, self.n)
        u = _as_vector(u, self.n, "u")
        sat, is_zero = self._saturation(x)
        if is_zero:
            # subdifferential at 0 is the full l1 ball
            return 1.0 - float(np.sum(np.abs(u)))
        if np.any(np.abs(u[~sat]) > SUBGRAD_ATOL):
            return -INF
        coeff = u[sat] * np.sign(x[sat])
        if abs(float(np.sum(coeff)) - 1.0) > SUBGRAD_ATOL:
            return -INF
        return float(np.min(coeff))


class TV1D(PartlySmoothFunction):
    """Anisotropic 1-D total variation weight * sum_i |x_{i+1} - x_i|; polyhedral.

    T_x is the span of normalized indicators of the constant runs of x
    (kernel of the non-jump difference rows); prox is the exact taut-string
    solution of the denoising problem with parameter gamma * weight.
    """

    def __init__(self, n, weight=1.0):
        super().__init__(n)
        if weight <= 0:
            raise ValueError("tv weight must be positive")
        self.weight = float(weight)

    def value(self, x):
        x = _as_vector(x, self.n)
        return self.weight * float(np.sum(np.abs(np.diff(x))))

    def _prox(self, gamma, x):
        from . import tv

        return tv.denoise(x, gamma * self.weight)

    def _jumps(self, x):
        d = np.diff(x)
        return np.abs(d) > ZERO_RTOL * (1.0 + np.linalg.norm(d)), d

    def model_pattern(self, x):
        x = _as_vector(x, self.n)
        jumps, _ = self._jumps(x)
        return tuple(np.nonzero(jumps)[0].tolist())

    def _runs(self, pattern):
        bounds = [0] + [j + 1 for j in pattern] + [self.n]
        return [(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]

    def subspace_from_pattern(self, pattern):
        runs = self._runs(pattern)
        basis = np.zeros((self.n, len(runs)))
        for col, (a, b) in enumerate(runs):
            basis[a:b, col] = 1.0 / np.sqrt(b - a)
        return Subspace(basis)

    def model_gradient(self, x):
        x = _as_vector(x, self.n)
        jumps, d = self._jumps(x)
        s = np.where(jumps, np.sign(d), 0.0)
        g = self.weight * (np.concatenate(([0.0], s)) - np.concatenate((s, [0.0])))
        e = np.empty(self.n)
        for a, b in self._runs(self.model_pattern(x)):
            e[a:b] = g[a:b].mean()
        return e

    def ri_margin(self, x, u):
        x = _as_vector(x, self.n)
        u = _as_vector(u, self.n, "u")
        # invert u = D^T s by the telescoping recursion s_j = s_{j-1} - u_j
        s = -np.cumsum(u[:-1])
        if abs((s[-1] if s.size else 0.0) - u[-1]) > 1e-8 * (1.0 + np.linalg.norm(u)):
            return -INF  # u is not in the image of D^T
        jumps, d = self._jumps(x)
        tol = SUBGRAD_ATOL * (1.0 + self.weight)
        if np.any(np.abs(s[jumps] - self.weight * np.sign(d[jumps])) > tol):
            return -INF
        if np.all(jumps):
            return INF
        return float(np.min(self.weight - np.abs(s[~jumps])))


class AffineIndicator(PartlySmoothFunction):
    """Indicator of the affine set {x : A x = y}; polyhedral.

    The pseudo-inverse, kernel and row-space bases are precomputed once by
    SVD; prox is the exact affine projection x - pinv(A) (A x - y).
    """

    def __init__(self, A, y):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        super().__init__(A.shape[1])
        y = np.asarray(y, dtype=float).ravel()
        if y.size != A.shape[0]:
            raise ValueError("y has the wrong number of rows for A")
        self.A = A
        self.y = y
        u, s, vt = np.linalg.svd(A, full_matrices=True)
        rank = int(np.sum(s > 1e-10 * s[0])) if s.size and s[0] > 0 else 0
        self._pinv = vt[:rank].T @ (u[:, :rank].T / s[:rank, None])
        self._kernel = Subspace(vt[rank:].T) if rank < self.n else Subspace.zero(self.n)
        self._rowspace = vt[:rank].T
        particular = self._pinv @ y
        if np.linalg.norm(A @ particular - y) > 1e-8 * max(1.0, np.linalg.norm(y)):
            raise ValueError("constraint is infeasible: y is not in the range of A")

    def value(self, x):
        x = _as_vector(x, self.n)
        ok = np.linalg.norm(self.A @ x - self.y) <= 1e-8 * max(1.0, np.linalg.norm(self.y))
        return 0.0 if ok else INF

    def _prox(self, gamma, x):
        return x - self._pinv @ (self.A @ x - self.y)

    def model_pattern(self, x):
        return ()

    def subspace_from_pattern(self, pattern):
        return self._kernel

    def model_gradient(self, x):
        return np.zeros(self.n)

    def ri_margin(self, x, u):
        # the subdifferential is the row space of A, whose relative interior
        # is itself: membership is all that can be measured
        u = _as_vector(u, self.n, "u")
        resid = u - self._rowspace @ (self._rowspace.T @ u)
        return INF if np.linalg.norm(resid) <= 1e-8 * (1.0 + np.linalg.norm(u)) else -INF


class BoxIndicator(PartlySmoothFunction):
    """Indicator of the sup-norm ball {x : ||x - center||_inf <= radius}; polyhedral."""

    def __init__(self, center, radius):
        center = np.asarray(center, dtype=float).ravel()
        super().__init__(center.size)
        if radius <= 0:
            raise ValueError("box radius must be positive")
        self.center = center
        self.radius = float(radius)

    def value(self, x):
        x = _as_vector(x, self.n)
        inside = np.max(np.abs(x - self.center), initial=0.0)
        return 0.0 if inside <= self.radius * (1.0 + 1e-12) + 1e-12 else INF

    def _prox(self, gamma, x):
        return np.clip(x, self.center - self.radius, self.center + self.radius)

    def _active(self, v):
        return np.abs(v - self.center) >= self.radius - ZERO_RTOL * (1.0 + self.radius)

    def model_pattern(self, x):
        v = _as_vector(x, self.n)
        return tuple(np.nonzero(self._active(v))[0].tolist())

    def subspace_from_pattern(self, pattern):
        free = np.setdiff1d(np.arange(self.n), np.asarray(pattern, dtype=int))
        return Subspace.from_coordinates(self.n, free)

    def model_gradient(self, x):
        return np.zeros(self.n)

    def ri_margin(self, x, u):
        v = _as_vector(x, self.n)
        u = _as_vector(u, self.n, "u")
        active = self._active(v)
        if np.any(np.abs(u[~active]) > SUBGRAD_ATOL):
            return -INF
        if not np.any(active):
            return INF if np.max(np.abs(u), initial=0.0) <= SUBGRAD_ATOL else -INF
        return float(np.min(u[active] * np.sign(v[active] - self.center[active])))


class L1Fidelity(PartlySmoothFunction):
    """The data-fit term ||target - x||_1; polyhedral.

    Behaves like L1 applied to target - x with the sign of the model
    gradient flipped; prox is target - soft_threshold(target - x, gamma).
    """

    def __init__(self, target):
        target = np.asarray(target, dtype=float).ravel()
        super().__init__(target.size)
        self.target = target

    def value(self, x):
        return float(np.sum(np.abs(self.target - _as_vector(x, self.n))))

    def _prox(self, gamma, x):
        return self.target - soft_threshold(self.target - x, gamma)

    def model_pattern(self, x):
        r = self.target - _as_vector(x, self.n)
        return tuple(np.nonzero(_support_mask(r))[0].tolist())

    def subspace_from_pattern(self, pattern):
        return Subspace.from_coordinates(self.n, list(pattern))

    def model_gradient(self, x):
        r = self.target - _as_vector(x, self.n)
        g = np.zeros(self.n)
        supp = _support_mask(r)
        g[supp] = -np.sign(r[supp])
        return g

    def ri_margin(self, x, u):
        r = self.target - _as_vector(x, self.n)
        u = _as_vector(u, self.n, "u")
        supp = _support_mask(r)
        if np.any(np.abs(u[supp] + np.sign(r[supp])) > SUBGRAD_ATOL):
            return -INF
        if np.all(supp):
            return INF
        return float(np.min(1.0 - np.abs(u[~supp])))


class SeparableBlocks(PartlySmoothFunction):
    """Sum of partly smooth functions acting on disjoint index blocks.

    Covers both image-row/column stackings and the m-fold product-space
    lift; every behavior is computed blockwise and scattered back.
    """

    def __init__(self, n, components):
        super().__init__(n)
        self.components = [(np.asarray(idx, dtype=int), fn) for idx, fn in components]
        seen = np.concatenate([idx for idx, _ in self.components])
        if sorted(seen.tolist()) != list(range(self.n)):
            raise ValueError("component indices must partition range(n)")
        for idx, fn in self.components:
            if fn.n != idx.size:
                raise ValueError("component dimension does not match its index block")

    def value(self, x):
        x = _as_vector(x, self.n)
        return float(sum(fn.value(x[idx]) for idx, fn in self.components))

    def _prox(self, gamma, x):
        p = np.empty_like(x)
        for idx, fn in self.components:
            p[idx] = fn.prox(gamma, x[idx])
        return p

    def model_pattern(self, x):
        x = _as_vector(x, self.n)
        return tuple(fn.model_pattern(x[idx]) for idx, fn in self.components)

    def subspace_from_pattern(self, pattern):
        cols = []
        for (idx, fn), sub_pattern in zip(self.components, pattern):
            block = fn.subspace_from_pattern(sub_pattern)
            lifted = np.zeros((self.n, block.dim))
            lifted[idx, :] = block.basis
            cols.append(lifted)
        basis = np.hstack(cols) if cols else np.zeros((self.n, 0))
        return Subspace(basis)

    def model_gradient(self, x):
        x = _as_vector(x, self.n)
        g = np.empty(self.n)
        for idx, fn in self.components:
            g[idx] = fn.model_gradient(x[idx])
        return g

    def riemannian_hessian(self, x):
        x = _as_vector(x, self.n)
        h = np.zeros((self.n, self.n))
        for idx, fn in self.components:
            h[np.ix_(idx, idx)] = fn.riemannian_hessian(x[idx])
        return h

    def ri_margin(self, x, u):
        x = _as_vector(x, self.n)
        u = _as_vector(u, self.n, "u")
        return min(fn.ri_margin(x[idx], u[idx]) for idx, fn in self.components)


class DiagonalIndicator(PartlySmoothFunction):
    """Indicator of the consensus subspace {(x, ..., x)} in (R^block)^copies.

    Prox replicates the blockwise mean; the subdifferential is the
    orthogonal complement (block sums equal to zero).
    """

    def __init__(self, copies, block):
        if copies < 2:
            raise ValueError("need at least two copies")
        super().__init__(copies * block)
        self.copies = int(copies)
        self.block = int(block)
        self._basis = Subspace(
            np.tile(np.eye(self.block), (self.copies, 1)) / np.sqrt(self.copies)
        )

    def _blocks(self, x):
        return x.reshape(self.copies, self.block)

    def value(self, x):
        b = self._blocks(_as_vector(x, self.n))
        spread = np.max(np.abs(b - b.mean(axis=0)), initial=0.0)
        return 0.0 if spread <= 1e-8 * (1.0 + np.linalg.norm(x)) else INF

    def _prox(self, gamma, x):
        mean = self._blocks(x).mean(axis=0)
        return np.tile(mean, self.copies)

    def model_pattern(self, x):
        return ()

    def subspace_from_pattern(self, pattern):
        return self._basis

    def model_gradient(self, x):
        return np.zeros(self.n)

    def ri_margin(self, x, u):
        u = _as_vector(u, self.n, "u")
        block_sum = self._blocks(u).sum(axis=0)
        ok = np.linalg.norm(block_sum) <= 1e-8 * (1.0 + np.linalg.norm(u))
        return INF if ok else -INF


def check_prox_identity(fn: PartlySmoothFunction, gamma: float, x) -> float:
    """Residual of p = proj_{p + T_p}(x) - gamma * e_p at p = prox(gamma, x).

    Exact (up to roundoff) for every catalog instance, since all their
    active manifolds are affine or linear.
    """
    x = _as_vector(x, fn.n)
    p = fn.prox(gamma, x)
    t_p = fn.model_subspace(p)
    target = p + t_p.project(x - p) - gamma * fn.model_gradient(p)
    return float(np.linalg.norm(p - target))
