"""Concrete Sasakian space forms.

Three models are provided, all evaluated pointwise on numpy arrays whose last
axis holds coordinates (leading axes broadcast):

* ``UnitSphere``: S^{2n+1} in C^{n+1} = R^{2n+2} with xi = J p, c = 1.
* ``DeformedSphere``: the D-homothetic deformation of the unit sphere with
  parameter a > 0, so that c = 4/a - 3.
* ``FlatSasakian``: R^{2n+1} with eta = (dz - sum y_i dx_i)/2, c = -3.

Conventions: dη(X, Y) = (X η(Y) - Y η(X) - η([X, Y]))/2 so that
g(X, φY) = dη(X, Y); the Sasakian identities ∇_X ξ = -φX and
(∇_X φ)Y = g(X, Y)ξ - η(Y)X hold; R(X, Y) = [∇_X, ∇_Y] - ∇_[X,Y].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

ModelKind = str  # "UnitSphere" | "DeformedSphere" | "FlatSasakian"
KINDS = ("UnitSphere", "DeformedSphere", "FlatSasakian")


class ModelError(ValueError):
    """Invalid model descriptor or mismatched arguments."""


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...i->...", a, b)


def complex_structure(v: np.ndarray) -> np.ndarray:
    """Multiplication by i on C^{m} = R^{2m}, coordinates ordered (x1, y1, x2, y2, ...)."""
    v = np.asarray(v, dtype=float)
    out = np.empty_like(v)
    out[..., 0::2] = -v[..., 1::2]
    out[..., 1::2] = v[..., 0::2]
    return out


@dataclass(frozen=True)
class SpaceFormModel:
    """Base class. Subclasses supply the structure tensors and connection."""

    n: int

    kind: ModelKind = field(init=False, default="")

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ModelError(f"n must be a positive integer, got {self.n!r}")

    # -- descriptors -------------------------------------------------------
    @property
    def c(self) -> float:
        raise NotImplementedError

    @property
    def dim(self) -> int:
        """Dimension 2n+1 of the manifold."""
        return 2 * self.n + 1

    @property
    def ambient_dim(self) -> int:
        raise NotImplementedError

    def descriptor(self) -> dict:
        return {"kind": self.kind, "n": self.n, "c": self.c}

    # -- structure ---------------------------------------------------------
    def metric(self, p, X, Y) -> np.ndarray:
        raise NotImplementedError

    def xi(self, p) -> np.ndarray:
        raise NotImplementedError

    def eta(self, p, X) -> np.ndarray:
        raise NotImplementedError

    def phi(self, p, X) -> np.ndarray:
        raise NotImplementedError

    def christoffel(self, p, X, Y) -> np.ndarray:
        """Γ(X, Y) with ∇_X Y = D_X Y + Γ(X, Y) for fields Y tangent along a curve
        (D is the ordinary coordinate derivative)."""
        raise NotImplementedError

    def connection_matrix(self, p, X) -> np.ndarray:
        """Matrix C with Γ(X, Y) = C @ Y at a single point p."""
        raise NotImplementedError

    def metric_matrix(self, p) -> np.ndarray:
        """Matrix G with g(X, Y) = X @ G @ Y for tangent X, Y at a single point p."""
        raise NotImplementedError

    def xi_flow(self, p, t) -> np.ndarray:
        raise NotImplementedError

    @property
    def xi_period(self) -> float | None:
        """Period of the ξ-flow, or None if the orbits are not closed."""
        return None

    def project(self, p, X) -> np.ndarray:
        """Projection of an ambient vector onto T_p N."""
        return np.asarray(X, dtype=float)

    def normalize_point(self, p) -> np.ndarray:
        return np.asarray(p, dtype=float)

    def random_point(self, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def random_tangent(self, p, rng: np.random.Generator) -> np.ndarray:
        return self.project(p, rng.standard_normal(self.ambient_dim))

    def chart(self, p0) -> Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]:
        """Local parametrisation x -> (point, Jacobian) with x in R^{2n+1},
        point(0) = p0 and Jacobian columns spanning T N."""
        raise NotImplementedError

    # -- derived operations ------------------------------------------------
    def norm(self, p, X) -> np.ndarray:
        return np.sqrt(np.maximum(self.metric(p, X, X), 0.0))

    def curvature(self, p, X, Y, Z) -> np.ndarray:
        """R(X, Y)Z of a Sasakian space form with constant φ-sectional curvature c."""
        g = lambda A, B: self.metric(p, A, B)[..., None]  # noqa: E731
        e = lambda A: self.eta(p, A)[..., None]  # noqa: E731
        xi = self.xi(p)
        phiX, phiY, phiZ = self.phi(p, X), self.phi(p, Y), self.phi(p, Z)
        c = self.c
        first = (c + 3.0) / 4.0 * (g(Y, Z) * X - g(X, Z) * Y)
        second = (c - 1.0) / 4.0 * (
            e(X) * e(Z) * Y
            - e(Y) * e(Z) * X
            + g(X, Z) * e(Y) * xi
            - g(Y, Z) * e(X) * xi
            + g(X, phiZ) * phiY
            - g(Y, phiZ) * phiX
            + 2.0 * g(X, phiY) * phiZ
        )
        return first + second

    def sectional_curvature(self, p, X, Y) -> np.ndarray:
        num = self.metric(p, self.curvature(p, X, Y, Y), X)
        den = self.metric(p, X, X) * self.metric(p, Y, Y) - self.metric(p, X, Y) ** 2
        return num / den

    def covariant_derivative(self, p, T, V, h: float, order: int | None = None):
        """∇_T V for fields sampled uniformly (spacing h) along a curve with points p
        and velocity T."""
        from .numerics import DEFAULT_ORDER, diff

        dV = diff(V, h, order or DEFAULT_ORDER)
        return self.project(p, dV + self.christoffel(p, T, V))

    def orthonormalize(self, p, vectors: list[np.ndarray]) -> list[np.ndarray]:
        """Gram-Schmidt in the model metric (pointwise, along leading axes)."""
        out: list[np.ndarray] = []
        for v in vectors:
            w = self.project(p, v)
            for e in out:
                w = w - self.metric(p, w, e)[..., None] * e
            w = w / self.norm(p, w)[..., None]
            out.append(w)
        return out

    def random_contact_unit(self, p, rng, avoid: tuple = ()) -> np.ndarray:
        """Random unit vector in the contact distribution at p, g-orthogonal to
        the vectors in ``avoid``."""
        basis = self.orthonormalize(p, [self.xi(p), *avoid])
        while True:
            v = self.random_tangent(p, rng)
            for e in basis:
                v = v - self.metric(p, v, e) * e
            nv = self.norm(p, v)
            if nv > 1e-6:  # redraw near-degenerate samples (e.g. v parallel to p)
                return self.project(p, v) / nv


@dataclass(frozen=True)
class _SphereModel(SpaceFormModel):
    """S^{2n+1} with the D-homothetically deformed standard structure (a=1 is
    the round unit sphere)."""

    a: float = 1.0

    def __post_init__(self):
        super().__post_init__()
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ModelError(f"deformation parameter a must be positive, got {self.a!r}")

    @property
    def c(self) -> float:
        return 4.0 / self.a - 3.0

    @property
    def ambient_dim(self) -> int:
        return 2 * self.n + 2

    def descriptor(self) -> dict:
        d = super().descriptor()
        if self.kind == "DeformedSphere":
            d = {"kind": self.kind, "n": self.n, "a": self.a, "c": self.c}
        return d

    # undeformed pieces
    def _eta0(self, p, X):
        return _dot(X, complex_structure(p))

    def _phi0(self, p, X):
        return -complex_structure(X) - self._eta0(p, X)[..., None] * p

    def metric(self, p, X, Y):
        a = self.a
        return a * _dot(X, Y) + a * (a - 1.0) * self._eta0(p, X) * self._eta0(p, Y)

    def xi(self, p):
        return complex_structure(p) / self.a

    def eta(self, p, X):
        return self.a * self._eta0(p, X)

    def phi(self, p, X):
        return self._phi0(p, X)

    def christoffel(self, p, X, Y):
        base = _dot(X, Y)[..., None] * p
        if self.a == 1.0:
            return base
        k = self.a - 1.0
        return base - k * (
            self._eta0(p, Y)[..., None] * self._phi0(p, X)
            + self._eta0(p, X)[..., None] * self._phi0(p, Y)
        )

    def _J(self) -> np.ndarray:
        return complex_structure(np.eye(self.ambient_dim)).T

    def metric_matrix(self, p):
        j = complex_structure(p)
        return self.a * np.eye(self.ambient_dim) + self.a * (self.a - 1.0) * np.outer(j, j)

    def connection_matrix(self, p, X):
        C = np.outer(p, X)
        if self.a != 1.0:
            j = complex_structure(p)
            phi0_mat = -self._J() - np.outer(p, j)
            C -= (self.a - 1.0) * (np.outer(phi0_mat @ X, j) + (j @ X) * phi0_mat)
        return C

    def xi_flow(self, p, t):
        p = np.asarray(p, dtype=float)
        t = np.asarray(t, dtype=float)[..., None] / self.a
        return np.cos(t) * p + np.sin(t) * complex_structure(p)

    @property
    def xi_period(self) -> float:
        return 2.0 * math.pi * self.a

    def project(self, p, X):
        X = np.asarray(X, dtype=float)
        return X - _dot(X, p)[..., None] * p

    def normalize_point(self, p):
        p = np.asarray(p, dtype=float)
        return p / np.linalg.norm(p, axis=-1, keepdims=True)

    def random_point(self, rng):
        return self.normalize_point(rng.standard_normal(self.ambient_dim))

    def chart(self, p0):
        p0 = self.normalize_point(p0)
        # orthonormal basis of the Euclidean tangent space at p0
        q, _ = np.linalg.qr(np.column_stack([p0, np.eye(self.ambient_dim)]))
        basis = q[:, 1 : self.ambient_dim]

        def param(x):
            x = np.asarray(x, dtype=float)
            v = p0 + basis @ x
            r = np.linalg.norm(v)
            pt = v / r
            jac = (basis - np.outer(pt, pt @ basis)) / r
            return pt, jac

        return param


@dataclass(frozen=True)
class UnitSphere(_SphereModel):
    def __post_init__(self):
        object.__setattr__(self, "kind", "UnitSphere")
        super().__post_init__()
        if self.a != 1.0:
            raise ModelError("UnitSphere has no deformation parameter")


@dataclass(frozen=True)
class DeformedSphere(_SphereModel):
    def __post_init__(self):
        object.__setattr__(self, "kind", "DeformedSphere")
        super().__post_init__()


@dataclass(frozen=True)
class FlatSasakian(SpaceFormModel):
    """R^{2n+1}, coordinates ordered (x_1..x_n, y_1..y_n, z)."""

    def __post_init__(self):
        object.__setattr__(self, "kind", "FlatSasakian")
        super().__post_init__()

    @property
    def c(self) -> float:
        return -3.0

    @property
    def ambient_dim(self) -> int:
        return 2 * self.n + 1

    def _covector(self, p):
        p = np.asarray(p, dtype=float)
        n = self.n
        e = np.zeros(p.shape)
        e[..., :n] = -0.5 * p[..., n : 2 * n]
        e[..., 2 * n] = 0.5
        return e

    def metric_matrix(self, p) -> np.ndarray:
        e = self._covector(p)
        G = e[..., :, None] * e[..., None, :]
        idx = np.arange(2 * self.n)
        G[..., idx, idx] += 0.25
        return G

    def metric_derivatives(self, p) -> np.ndarray:
        """dG[..., k, i, j] = ∂_k G_ij (only the y-derivatives are nonzero)."""
        p = np.asarray(p, dtype=float)
        n, m = self.n, self.ambient_dim
        e = self._covector(p)
        dG = np.zeros(p.shape[:-1] + (m, m, m))
        for k in range(n):
            d = np.zeros(m)
            d[k] = -0.5
            dG[..., n + k, :, :] = d[:, None] * e[..., None, :] + e[..., :, None] * d[None, :]
        return dG

    def christoffel_symbols(self, p) -> np.ndarray:
        """Γ[..., m, i, j] = Γ^m_ij from the analytic metric derivatives."""
        G = self.metric_matrix(p)
        dG = self.metric_derivatives(p)
        Ginv = np.linalg.inv(G)
        # lower[l, i, j] = ∂_i G_jl + ∂_j G_il - ∂_l G_ij
        lower = np.einsum("...ijl->...lij", dG) + np.einsum("...jil->...lij", dG) - dG
        return 0.5 * np.einsum("...ml,...lij->...mij", Ginv, lower)

    def metric(self, p, X, Y):
        return np.einsum("...i,...ij,...j->...", X, self.metric_matrix(p), Y)

    def xi(self, p):
        p = np.asarray(p, dtype=float)
        out = np.zeros(p.shape)
        out[..., -1] = 2.0
        return out

    def eta(self, p, X):
        return _dot(self._covector(p), X)

    def phi(self, p, X):
        X = np.asarray(X, dtype=float)
        p = np.asarray(p, dtype=float)
        n = self.n
        out = np.zeros(np.broadcast_shapes(X.shape, p.shape))
        out[..., :n] = X[..., n : 2 * n]
        out[..., n : 2 * n] = -X[..., :n]
        out[..., 2 * n] = _dot(p[..., n : 2 * n], X[..., n : 2 * n])
        return out

    def christoffel(self, p, X, Y):
        return np.einsum("...mij,...i,...j->...m", self.christoffel_symbols(p), X, Y)

    def connection_matrix(self, p, X):
        return np.einsum("mij,i->mj", self.christoffel_symbols(p), X)

    def xi_flow(self, p, t):
        p = np.array(p, dtype=float)
        t = np.asarray(t, dtype=float)
        out = np.broadcast_to(p, np.broadcast_shapes(p.shape, t.shape + (p.shape[-1],))).copy()
        out[..., -1] += 2.0 * t
        return out

    def random_point(self, rng):
        return rng.uniform(-1.0, 1.0, self.ambient_dim)

    def chart(self, p0):
        p0 = np.asarray(p0, dtype=float)
        eye = np.eye(self.ambient_dim)

        def param(x):
            return p0 + np.asarray(x, dtype=float), eye

        return param


def model_from_descriptor(desc: dict) -> SpaceFormModel:
    """Build a model from a JSON descriptor ``{kind, n, a?, c?}``.

    A DeformedSphere may be specified by ``a`` or by ``c`` (a = 4/(c+3)). A
    supplied ``c`` must agree with the kind.
    """
    if not isinstance(desc, dict):
        raise ModelError("model descriptor must be a JSON object")
    kind = desc.get("kind")
    if kind not in KINDS:
        raise ModelError(f"unknown model kind {kind!r}; expected one of {KINDS}")
    n = desc.get("n", 2)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ModelError(f"n must be a positive integer, got {n!r}")
    if kind == "UnitSphere":
        model: SpaceFormModel = UnitSphere(n)
    elif kind == "FlatSasakian":
        model = FlatSasakian(n)
    else:
        a = desc.get("a")
        if a is None:
            c = desc.get("c")
            if c is None:
                raise ModelError("DeformedSphere needs a or c")
            if not c > -3:
                raise ModelError(f"DeformedSphere needs c > -3, got {c!r}")
            a = 4.0 / (float(c) + 3.0)
        if isinstance(a, bool) or not isinstance(a, (int, float)) or not a > 0:
            raise ModelError(f"deformation parameter a must be positive, got {a!r}")
        model = DeformedSphere(n, float(a))
    c = desc.get("c")
    if c is not None and abs(float(c) - model.c) > 1e-9 * max(1.0, abs(model.c)):
        raise ModelError(f"descriptor c={c} disagrees with model c={model.c}")
    return model


def deformed_sphere_for(c: float, n: int = 2) -> SpaceFormModel:
    """Sphere model of φ-sectional curvature c > -3 (round sphere when c = 1)."""
    if not c > -3:
        raise ModelError(f"sphere models need c > -3, got {c}")
    if c == 1.0:
        return UnitSphere(n)
    return DeformedSphere(n, 4.0 / (c + 3.0))
