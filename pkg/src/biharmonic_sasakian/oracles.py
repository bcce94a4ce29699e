"""Brute-force differential geometry in local charts.

Everything here is computed from the model metric alone: Christoffel symbols
by finite differences of the chart metric (Koszul formula), the Riemann tensor
by finite differences of those Christoffels. It shares no code with the closed
forms in :mod:`models` and serves as their independent check.
"""

from __future__ import annotations

import numpy as np

from .models import SpaceFormModel
from .numerics import fd_weights


def _grad(f, x: np.ndarray, h: float) -> np.ndarray:
    """Array of partial derivatives ∂_k f(x), stacked on a new leading axis."""
    w = fd_weights((-2, -1, 0, 1, 2))
    out = []
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        acc = sum(w[j] * f(x + o * e) for j, o in enumerate((-2, -1, 0, 1, 2)) if w[j] != 0)
        out.append(acc / h)
    return np.stack(out)


class ChartGeometry:
    """Metric, Christoffels and curvature of ``model`` in a chart centred at p0."""

    def __init__(self, model: SpaceFormModel, p0, h_metric: float = 1e-4, h_gamma: float = 1e-3):
        self.model = model
        self.param = model.chart(p0)
        self.p0, self.jac0 = self.param(np.zeros(model.dim))
        self.h_metric = h_metric
        self.h_gamma = h_gamma

    def metric_matrix(self, x) -> np.ndarray:
        p, J = self.param(x)
        cols = [J[:, i] for i in range(J.shape[1])]
        m = len(cols)
        G = np.empty((m, m))
        for i in range(m):
            for j in range(i, m):
                G[i, j] = G[j, i] = self.model.metric(p, cols[i], cols[j])
        return G

    def christoffel(self, x) -> np.ndarray:
        """Γ[m, i, j] = Γ^m_ij at chart point x."""
        x = np.asarray(x, dtype=float)
        G = self.metric_matrix(x)
        dG = _grad(self.metric_matrix, x, self.h_metric)  # dG[k, i, j] = ∂_k G_ij
        lower = np.einsum("ijl->lij", dG) + np.einsum("jil->lij", dG) - dG
        return 0.5 * np.einsum("ml,lij->mij", np.linalg.inv(G), lower)

    def riemann(self) -> np.ndarray:
        """R[l, i, j, k] with R(∂_i, ∂_j)∂_k = R[l, i, j, k] ∂_l at the centre."""
        x0 = np.zeros(self.model.dim)
        Gam = self.christoffel(x0)
        dGam = _grad(self.christoffel, x0, self.h_gamma)  # dGam[a, l, j, k] = ∂_a Γ^l_jk
        R = (
            np.einsum("iljk->lijk", dGam)
            - np.einsum("jlik->lijk", dGam)
            + np.einsum("lim,mjk->lijk", Gam, Gam)
            - np.einsum("ljm,mik->lijk", Gam, Gam)
        )
        return R

    # -- conversions between ambient vectors and chart coefficients ----------
    def to_chart(self, X) -> np.ndarray:
        coef, *_ = np.linalg.lstsq(self.jac0, np.asarray(X, dtype=float), rcond=None)
        return coef

    def to_ambient(self, coef) -> np.ndarray:
        return self.jac0 @ coef

    def curvature(self, X, Y, Z) -> np.ndarray:
        R = self.riemann()
        x, y, z = self.to_chart(X), self.to_chart(Y), self.to_chart(Z)
        return self.to_ambient(np.einsum("lijk,i,j,k->l", R, x, y, z))

    def levi_civita(self, X, Y) -> np.ndarray:
        """∇_X Y at p0 for Y extended with constant chart coefficients."""
        Gam = self.christoffel(np.zeros(self.model.dim))
        return self.to_ambient(np.einsum("mij,i,j->m", Gam, self.to_chart(X), self.to_chart(Y)))

    def d_eta(self, X, Y) -> float:
        """dη(X, Y) = (∂_i η_j - ∂_j η_i) X^i Y^j / 2 at the centre."""

        def eta_coeffs(x):
            p, J = self.param(x)
            return np.array([self.model.eta(p, J[:, i]) for i in range(J.shape[1])])

        d = _grad(eta_coeffs, np.zeros(self.model.dim), self.h_metric)  # d[i, j] = ∂_i η_j
        x, y = self.to_chart(X), self.to_chart(Y)
        return 0.5 * float(x @ (d - d.T) @ y)


def numerical_sectional_curvature(model: SpaceFormModel, p, X, Y) -> float:
    """Sectional curvature of span(X, Y) at p from the brute-force Riemann tensor."""
    geo = ChartGeometry(model, p)
    p0 = geo.p0
    R = geo.curvature(X, Y, Y)
    g = lambda A, B: float(model.metric(p0, A, B))  # noqa: E731
    return g(R, X) / (g(X, X) * g(Y, Y) - g(X, Y) ** 2)
