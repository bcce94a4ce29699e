"""Sampled curves, arc-length reparametrisation, the numerical Frenet
apparatus, Legendre residuals and φ-torsions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .models import SpaceFormModel
from .numerics import diff, fd_weights, interior_mask

DEFAULT_STEP = 2e-2
DEFAULT_TOL_ORDER = 1e-5
INTERIOR_FRACTION = 0.9


class DegenerateCurveError(ValueError):
    """Velocity vanishes somewhere on the curve."""


class PreconditionError(ValueError):
    """Input curve violates an operation's precondition (unit speed, Legendre, ...)."""


@dataclass(frozen=True, eq=False)
class ParamCurve:
    """A curve sampled on a uniform parameter grid ``s``.

    ``position`` (optional) evaluates the curve at arbitrary parameters; curves
    produced by ODE integration only carry samples.
    """

    model: SpaceFormModel
    s: np.ndarray
    points: np.ndarray
    position: Callable[[np.ndarray], np.ndarray] | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.points.shape != (self.s.size, self.model.ambient_dim):
            raise ValueError(
                f"points shape {self.points.shape} does not match "
                f"({self.s.size}, {self.model.ambient_dim})"
            )
        if self.model.kind != "FlatSasakian":
            err = np.abs(np.linalg.norm(self.points, axis=1) - 1.0).max()
            if err > 1e-10:
                raise ValueError(f"curve leaves the sphere (norm error {err:.2e})")

    @property
    def step(self) -> float:
        return float(self.s[1] - self.s[0])

    @property
    def sample_count(self) -> int:
        return int(self.s.size)

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.s[0]), float(self.s[-1])

    def velocity(self) -> np.ndarray:
        return self.model.project(self.points, diff(self.points, self.step))

    def speed(self) -> np.ndarray:
        return self.model.norm(self.points, self.velocity())

    def interior(self) -> np.ndarray:
        return interior_mask(self.sample_count, INTERIOR_FRACTION)

    def length(self) -> float:
        """Length by composite Simpson/trapezoid over the samples."""
        from scipy.integrate import simpson

        return float(simpson(self.speed(), x=self.s))


def sample_curve(
    model: SpaceFormModel,
    position: Callable[[np.ndarray], np.ndarray],
    s0: float,
    s1: float,
    step: float = DEFAULT_STEP,
    meta: dict | None = None,
) -> ParamCurve:
    count = int(round((s1 - s0) / step)) + 1
    s = s0 + step * np.arange(count)
    return ParamCurve(model, s, np.asarray(position(s), dtype=float), position, dict(meta or {}))


# --- arc length -----------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _speed_function(model: SpaceFormModel, position, h: float = 1e-3):
    offsets = (-3, -2, -1, 1, 2, 3)
    weights = fd_weights((-3, -2, -1, 0, 1, 2, 3))
    weights = np.delete(weights, 3)

    def speed(t):
        t = np.asarray(t, dtype=float)
        vel = sum(w * position(t + o * h) for w, o in zip(weights, offsets)) / h
        return model.norm(position(t), vel)

    return speed


def _segment_lengths(speed, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = speed(nodes.ravel()).reshape(nodes.shape)
    return half * (vals @ _GL_WEIGHTS)


def reparametrize_arclength(curve: ParamCurve, step: float | None = None) -> ParamCurve:
    """Resample ``curve`` by arc length, keeping the starting parameter.

    Requires ``curve.position``. Lengths are integrated with 8-point
    Gauss-Legendre per sample interval; the inverse map is refined by Newton
    iterations.
    """
    if curve.position is None:
        raise PreconditionError("arc-length reparametrisation needs a position callable")
    model, position = curve.model, curve.position
    speed = _speed_function(model, position)
    t = curve.s
    if speed(t).min() < 1e-10:
        raise DegenerateCurveError("velocity vanishes on the domain")
    cum = np.concatenate([[0.0], np.cumsum(_segment_lengths(speed, t[:-1], t[1:]))])
    t0 = float(t[0])

    def inverse(s):
        s = np.atleast_1d(np.asarray(s, dtype=float)) - t0
        tau = np.interp(s, cum, t)
        for _ in range(4):
            k = np.clip(np.searchsorted(t, tau) - 1, 0, t.size - 2)
            length = cum[k] + _segment_lengths(speed, t[k], tau)
            tau = tau - (length - s) / speed(tau)
        return tau

    def new_position(s):
        s_arr = np.asarray(s, dtype=float)
        return position(inverse(s_arr.ravel())).reshape(s_arr.shape + (model.ambient_dim,))

    step = step or curve.step
    total = cum[-1]
    count = int(np.floor(total / step + 1e-9)) + 1
    s_new = t0 + step * np.arange(count)
    points = new_position(s_new)
    meta = dict(curve.meta, reparametrized=True)
    return ParamCurve(model, s_new, model.normalize_point(points), new_position, meta)


# --- Frenet apparatus -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class FrenetData:
    """Frenet frame E_1..E_r and curvatures κ_1..κ_{r-1} sampled along a curve.

    ``frames`` has shape (r, N, D) and ``curvatures`` (r-1, N). Synthetic
    instances (constant profiles, no frame) carry ``torsions`` directly.
    """

    model: SpaceFormModel | None
    s: np.ndarray
    order: int
    curvatures: np.ndarray
    frames: np.ndarray | None = None
    points: np.ndarray | None = None
    torsions: np.ndarray | None = None
    frenet_residual: float = 0.0
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        if self.torsions is None and self.frames is not None:
            object.__setattr__(self, "torsions", _torsion_matrix(self.model, self.points, self.frames))

    @classmethod
    def synthetic(cls, kappas, torsions: dict[tuple[int, int], float] | None = None, samples: int = 11):
        """Constant-profile data: kappas = (κ_1, ..., κ_{r-1}); torsions keyed by
        1-based (i, j) with i < j."""
        kappas = np.asarray(kappas, dtype=float)
        r = kappas.size + 1
        tau = np.zeros((r, r, samples))
        for (i, j), v in (torsions or {}).items():
            tau[i - 1, j - 1] = v
            tau[j - 1, i - 1] = -v
        curv = np.repeat(kappas[:, None], samples, axis=1) if kappas.size else np.zeros((0, samples))
        return cls(None, np.linspace(0.0, 1.0, samples), r, curv, torsions=tau)

    def interior(self) -> np.ndarray:
        if self.frames is None:
            return np.ones(self.s.size, dtype=bool)
        return interior_mask(self.s.size, INTERIOR_FRACTION)

    def kappa(self, i: int) -> np.ndarray:
        """κ_i along the curve (1-based); zeros beyond the osculating order."""
        if 1 <= i <= self.order - 1:
            return self.curvatures[i - 1]
        return np.zeros(self.s.size)

    def frame(self, i: int) -> np.ndarray | None:
        """E_i (1-based) or None beyond the order."""
        if self.frames is None or not 1 <= i <= self.order:
            return None
        return self.frames[i - 1]

    def tau(self, i: int, j: int) -> np.ndarray:
        """φ-torsion τ_ij = g(E_i, φE_j) (1-based); zeros if an index exceeds r."""
        if max(i, j) > self.order:
            return np.zeros(self.s.size)
        return self.torsions[i - 1, j - 1]

    def eta_components(self) -> np.ndarray:
        """η(E_i) sampled along the curve, shape (r, N)."""
        if self.frames is None:
            raise ValueError("synthetic Frenet data has no frame")
        return np.stack([self.model.eta(self.points, E) for E in self.frames])

    def mean_kappas(self) -> np.ndarray:
        m = self.interior()
        return self.curvatures[:, m].mean(axis=1) if self.order > 1 else np.zeros(0)


def _torsion_matrix(model, points, frames) -> np.ndarray:
    r = frames.shape[0]
    phis = [model.phi(points, E) for E in frames]
    tau = np.zeros((r, r, points.shape[0]))
    for i in range(r):
        for j in range(r):
            if i != j:
                tau[i, j] = model.metric(points, frames[i], phis[j])
    return tau


def phi_torsions(fd: FrenetData) -> np.ndarray:
    """Matrix τ_ij = g(E_i, φE_j) = -g(φE_i, E_j), shape (r, r, N)."""
    return fd.torsions


def frenet(curve: ParamCurve, tol_order: float = DEFAULT_TOL_ORDER) -> FrenetData:
    """Frenet frame by Gram-Schmidt on iterated covariant derivatives.

    The osculating order r is the first index where the orthogonal residual of
    the next derivative stays below ``tol_order`` over the interior samples.
    """
    model, P, h = curve.model, curve.points, curve.step
    mask = curve.interior()
    T = curve.velocity()
    speed = model.norm(P, T)
    if np.abs(speed[mask] - 1.0).max() > 1e-6:
        raise PreconditionError(
            f"curve is not unit speed (max deviation {np.abs(speed[mask] - 1).max():.2e})"
        )
    frames = [T]
    derivs = []
    kappas: list[np.ndarray] = []
    warnings: list[str] = []
    for k in range(1, model.dim):
        D = model.covariant_derivative(P, T, frames[-1], h)
        derivs.append(D)
        W = D + kappas[-1][:, None] * frames[-2] if kappas else D.copy()
        for e in frames:
            W = W - model.metric(P, W, e)[:, None] * e
        kap = model.norm(P, W)
        hi, lo = kap[mask].max(), kap[mask].min()
        if hi < tol_order:
            break
        if lo < tol_order:
            warnings.append(
                f"order ambiguity: kappa_{k} ranges over [{lo:.2e}, {hi:.2e}] around tol {tol_order:.0e}"
            )
            break
        kappas.append(kap)
        frames.append(W / kap[:, None])
    r = len(frames)
    if len(derivs) < r:
        derivs.append(model.covariant_derivative(P, T, frames[-1], h))
    residual = 0.0
    for i in range(r):
        expected = np.zeros_like(T)
        if i > 0:
            expected -= kappas[i - 1][:, None] * frames[i - 1]
        if i < r - 1:
            expected += kappas[i][:, None] * frames[i + 1]
        residual = max(residual, float(model.norm(P, derivs[i] - expected)[mask].max()))
    curv = np.stack(kappas) if kappas else np.zeros((0, P.shape[0]))
    return FrenetData(
        model,
        curve.s,
        r,
        curv,
        frames=np.stack(frames),
        points=P,
        frenet_residual=residual,
        warnings=tuple(warnings),
    )


def legendre_residual(curve: ParamCurve) -> float:
    """max_s |η(γ'(s))|."""
    return float(np.abs(curve.model.eta(curve.points, curve.velocity())).max())


def alpha0_from_torsions(tau12: float, tau14: float) -> float:
    """Constant angle with φT = cos α0 E_2 + sin α0 E_4, folded into (0, 2π)."""
    return float(np.mod(np.arctan2(-tau14, -tau12), 2.0 * np.pi))


# --- export ---------------------------------------------------------------


def curve_record(curve: ParamCurve) -> dict:
    return {
        "model": curve.model.descriptor(),
        "meta": curve.meta,
        "s": curve.s,
        "points": curve.points,
    }


def frenet_table(fd: FrenetData) -> tuple[list[str], list[list[float]]]:
    """Columns s, κ_i(s), τ_ij(s) for CSV export."""
    header = ["s"] + [f"kappa_{i}" for i in range(1, fd.order)]
    cols = [fd.s] + [fd.kappa(i) for i in range(1, fd.order)]
    for i in range(1, fd.order + 1):
        for j in range(i + 1, fd.order + 1):
            header.append(f"tau_{i}{j}")
            cols.append(fd.tau(i, j))
    rows = np.column_stack(cols).tolist()
    return header, rows
