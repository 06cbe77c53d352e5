"""Exact 1-D total-variation denoising by the taut-string direct method.

Solves min_x 0.5*||x - y||^2 + lam * sum_i |x[i+1] - x[i]| in one forward
pass with backtracking (O(n) amortized), tracking the lower/upper taut-string
candidates until a jump is forced.
"""

from __future__ import annotations

import numpy as np


def denoise(y, lam: float) -> np.ndarray:
    """Exact minimizer of the 1-D TV proximity problem with parameter lam >= 0."""
    y = np.asarray(y, dtype=float).ravel()
    n = y.size
    if lam < 0.0:
        raise ValueError("tv parameter must be nonnegative")
    if n <= 1 or lam == 0.0:
        return y.copy()

    x = np.empty(n)
    data = y.tolist()  # scalar access is much faster on a plain list
    k = k0 = kminus = kplus = 0
    vmin = data[0] - lam
    vmax = data[0] + lam
    umin = lam
    umax = -lam
    while True:
        while k == n - 1:
            if umin < 0.0:
                # lower string is too high: a negative jump ends the segment
                while k0 <= kminus:
                    x[k0] = vmin
                    k0 += 1
                k = kminus = k0
                vmin = data[k]
                umin = lam
                umax = vmin + lam - vmax
            elif umax > 0.0:
                while k0 <= kplus:
                    x[k0] = vmax
                    k0 += 1
                k = kplus = k0
                vmax = data[k]
                umax = -lam
                umin = vmax - lam - vmin
            else:
                vmin += umin / (k - k0 + 1)
                while k0 <= k:
                    x[k0] = vmin
                    k0 += 1
                return x
        umin += data[k + 1] - vmin
        if umin < -lam:
            while k0 <= kminus:
                x[k0] = vmin
                k0 += 1
            k = kminus = kplus = k0
            vmin = data[k]
            vmax = vmin + 2.0 * lam
            umin = lam
            umax = -lam
        else:
            umax += data[k + 1] - vmax
            if umax > lam:
                while k0 <= kplus:
                    x[k0] = vmax
                    k0 += 1
                k = kminus = kplus = k0
                vmax = data[k]
                vmin = vmax - 2.0 * lam
                umin = lam
                umax = -lam
            else:
                k += 1
                if umin >= lam:
                    kminus = k
                    vmin += (umin - lam) / (k - k0 + 1)
                    umin = lam
                if umax <= -lam:
                    kplus = k
                    vmax += (umax + lam) / (k - k0 + 1)
                    umax = -lam
