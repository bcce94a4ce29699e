"""Finite-difference stencils and small linear-algebra helpers shared by the
geometry modules."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

#: Default stencil order for derivatives along sampled curves (7-point central).
DEFAULT_ORDER = 6


class StencilError(ValueError):
    """Raised when there are too few samples for the requested stencil."""


@lru_cache(maxsize=None)
def fd_weights(offsets: tuple[int, ...], deriv: int = 1) -> np.ndarray:
    """Weights w such that sum(w[k] * f(x + offsets[k] * h)) / h**deriv
    approximates the ``deriv``-th derivative of f at x."""
    z = np.asarray(offsets, dtype=float)
    m = len(z)
    if deriv >= m:
        raise StencilError(f"need more than {deriv} points for derivative {deriv}")
    vander = np.vander(z, m, increasing=True).T
    rhs = np.zeros(m)
    rhs[deriv] = float(np.prod(np.arange(1, deriv + 1)))
    return np.linalg.solve(vander, rhs)


def diff(values: np.ndarray, h: float, order: int = DEFAULT_ORDER) -> np.ndarray:
    """First derivative along axis 0 of uniformly sampled data.

    Central stencils of the given (even) order in the interior, one-sided
    stencils of the same width near the ends so the output has the input's
    shape.
    """
    values = np.asarray(values, dtype=float)
    width = order + 1
    half = order // 2
    n = values.shape[0]
    if n < width:
        raise StencilError(f"{n} samples, stencil needs {width}")
    out = np.empty_like(values)
    central = fd_weights(tuple(range(-half, half + 1)))
    acc = np.zeros_like(values[half : n - half])
    for k, w in enumerate(central):
        acc += w * values[k : n - 2 * half + k]
    out[half : n - half] = acc
    for i in range(half):
        left = fd_weights(tuple(range(-i, width - i)))
        out[i] = np.tensordot(left, values[:width], axes=1)
        right = fd_weights(tuple(range(-(width - 1 - i), i + 1)))
        out[n - 1 - i] = np.tensordot(right, values[n - width :], axes=1)
    return out / h


def second_diff(values: np.ndarray, h: float, order: int = 4) -> np.ndarray:
    """Second derivative along axis 0 with central stencils (interior only
    is accurate; edges use one-sided stencils)."""
    values = np.asarray(values, dtype=float)
    half = order // 2
    width = 2 * half + 1
    n = values.shape[0]
    if n < width + 1:
        raise StencilError(f"{n} samples, stencil needs {width + 1}")
    out = np.empty_like(values)
    central = fd_weights(tuple(range(-half, half + 1)), 2)
    acc = np.zeros_like(values[half : n - half])
    for k, w in enumerate(central):
        acc += w * values[k : n - 2 * half + k]
    out[half : n - half] = acc
    for i in range(half):
        left = fd_weights(tuple(range(-i, width + 1 - i)), 2)
        out[i] = np.tensordot(left, values[: width + 1], axes=1)
        right = fd_weights(tuple(range(-(width - i), i + 1)), 2)
        out[n - 1 - i] = np.tensordot(right, values[n - width - 1 :], axes=1)
    return out / h**2


def interior_mask(n: int, fraction: float = 0.9) -> np.ndarray:
    """Boolean mask selecting the central ``fraction`` of ``n`` samples."""
    cut = int(np.ceil(n * (1.0 - fraction) / 2.0))
    mask = np.zeros(n, dtype=bool)
    mask[cut : n - cut] = True
    return mask
