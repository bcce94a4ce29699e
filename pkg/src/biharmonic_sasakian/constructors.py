"""Explicit proper-biharmonic curves, Frenet-ODE integration, and flow
cylinders F(t, p) = φ_t(p) over Legendre curves."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .curves import DEFAULT_STEP, ParamCurve, frenet, sample_curve
from .models import SpaceFormModel, UnitSphere, complex_structure
from .numerics import diff, interior_mask, second_diff

ODE_STEP = 1e-3


class DimensionError(ValueError):
    pass


class ParameterError(ValueError):
    pass


class FrameSynthesisError(ValueError):
    pass


def _axis(n: int, k: int, imaginary: bool = False) -> np.ndarray:
    """Real (x_k) or imaginary (y_k) unit vector of C^{n+1}, k 1-based."""
    v = np.zeros(2 * n + 2)
    v[2 * (k - 1) + int(imaginary)] = 1.0
    return v


# --- explicit families in S^{2n+1} --------------------------------------------


@dataclass(frozen=True)
class AdmissibleFrame:
    """Orthonormal e_1..e_4 in R^{2n+2} with gram_I[i, j] = <e_i, J e_j>."""

    vectors: np.ndarray
    A: float
    B: float

    @property
    def gram_I(self) -> np.ndarray:
        return self.vectors @ complex_structure(self.vectors).T

    def constraint_residuals(self) -> dict[str, float]:
        G = self.gram_I
        return {
            "cross_terms": float(max(abs(G[0, 2]), abs(G[0, 3]), abs(G[1, 2]), abs(G[1, 3]))),
            "legendre": float(abs(self.A * G[0, 1] + self.B * G[2, 3])),
            "orthonormality": float(np.abs(self.vectors @ self.vectors.T - np.eye(4)).max()),
        }


def canonical_admissible_frame(n: int, A: float, B: float, sigma: int = 1) -> AdmissibleFrame:
    """Frame with <e1,Je3> = <e1,Je4> = <e2,Je3> = <e2,Je4> = 0 and
    A<e1,Je2> + B<e3,Je4> = 0, using only three complex coordinates.

    The pair carrying the larger coefficient gets a partially real 2-plane;
    the other pair is a complex line (<., J.> = ±1).
    """
    if n < 2:
        raise DimensionError(f"the frame needs C^3, i.e. n >= 2 (got n={n})")
    if A < 0 or B < 0 or A == B == 0:
        raise ParameterError("need A, B >= 0, not both zero")
    sigma = 1 if sigma >= 0 else -1

    def pair_with(mu, k_real, k_next):
        # e, f with <e, J f> = mu: f = -mu y_k + sqrt(1-mu^2) x_{k+1}
        e = _axis(n, k_real)
        f = -mu * _axis(n, k_real, True) + math.sqrt(max(0.0, 1.0 - mu * mu)) * _axis(n, k_next)
        return e, f

    if B <= A:
        e3, e4 = _axis(n, 3), sigma * _axis(n, 3, True)  # <e3, J e4> = -sigma
        e1, e2 = pair_with(sigma * B / A, 1, 2)
    else:
        e1, e2 = _axis(n, 1), sigma * _axis(n, 1, True)  # <e1, J e2> = -sigma
        e3, e4 = pair_with(sigma * A / B, 2, 3)
    return AdmissibleFrame(np.stack([e1, e2, e3, e4]), float(A), float(B))


def circle_curve(n: int = 2, length: float | None = None, step: float = DEFAULT_STEP) -> ParamCurve:
    """γ(s) = (cos(√2 s) e1 + sin(√2 s) e2 + e3)/√2 in S^{2n+1}."""
    if n < 2:
        raise DimensionError("proper-biharmonic Legendre circles need n >= 2")
    e1, e2, e3 = _axis(n, 1), _axis(n, 2), _axis(n, 3)
    r2 = math.sqrt(2.0)

    def position(s):
        s = np.asarray(s, dtype=float)[..., None]
        return (np.cos(r2 * s) * e1 + np.sin(r2 * s) * e2 + e3) / r2

    length = 2.0 * math.pi / r2 if length is None else length
    return sample_curve(UnitSphere(n), position, 0.0, length, step, {"family": "theorem6-circle", "n": n})


def helix_curve(
    n: int = 2, kappa1: float = 0.6, length: float = 2.0 * math.pi, step: float = DEFAULT_STEP, sigma: int = 1
) -> ParamCurve:
    """γ(s) = (cos(As)e1 + sin(As)e2 + cos(Bs)e3 + sin(Bs)e4)/√2 with
    A = √(1+κ₁), B = √(1-κ₁)."""
    if not 0.0 < kappa1 < 1.0:
        raise ParameterError(f"kappa1 must lie in (0, 1), got {kappa1}")
    A, B = math.sqrt(1.0 + kappa1), math.sqrt(1.0 - kappa1)
    frame = canonical_admissible_frame(n, A, B, sigma)
    e1, e2, e3, e4 = frame.vectors

    def position(s):
        s = np.asarray(s, dtype=float)[..., None]
        return (np.cos(A * s) * e1 + np.sin(A * s) * e2 + np.cos(B * s) * e3 + np.sin(B * s) * e4) / math.sqrt(2.0)

    meta = {"family": "theorem6-helix", "n": n, "kappa1": kappa1, "A": A, "B": B}
    return sample_curve(UnitSphere(n), position, 0.0, length, step, meta)


def legendre_circle(n: int = 2, kappa1: float = 0.5, length: float | None = None, step: float = DEFAULT_STEP) -> ParamCurve:
    """Legendre small circle of geodesic curvature κ₁ in the round S^{2n+1}."""
    if n < 2:
        raise DimensionError("Legendre circles with E2 ⟂ φT need n >= 2")
    if kappa1 <= 0:
        raise ParameterError("kappa1 must be positive")
    radius = 1.0 / math.sqrt(1.0 + kappa1 * kappa1)
    height = math.sqrt(1.0 - radius * radius)
    e1, e2, e3 = _axis(n, 1), _axis(n, 2), _axis(n, 3)

    def position(s):
        s = np.asarray(s, dtype=float)[..., None] / radius
        return radius * (np.cos(s) * e1 + np.sin(s) * e2) + height * e3

    length = 2.0 * math.pi * radius if length is None else length
    return sample_curve(UnitSphere(n), position, 0.0, length, step, {"family": "circle", "n": n, "kappa1": kappa1})


def legendre_geodesic(n: int = 2, length: float = 2.0 * math.pi, step: float = DEFAULT_STEP) -> ParamCurve:
    """Legendre great circle cos(s) e1 + sin(s) e2 with <e1, J e2> = 0."""
    e1, e2 = _axis(n, 1), _axis(n, 2)

    def position(s):
        s = np.asarray(s, dtype=float)[..., None]
        return np.cos(s) * e1 + np.sin(s) * e2

    return sample_curve(UnitSphere(n), position, 0.0, length, step, {"family": "geodesic", "n": n})


# --- frame synthesis and Frenet ODE ------------------------------------------

FRAME_CASES = ("circle", "helix-II", "III", "IV")


def case4_kappas(kappa1: float, alpha0: float) -> tuple[float, float]:
    """(κ₂, κ₃) for which a Legendre order-4 frame with
    φT = cos α0 E2 + sin α0 E4 closes: κ₃ cos α0 = -κ₂ sin α0 and
    (κ₂ cos α0 - κ₃ sin α0)² = 1 + κ₁² sin² α0."""
    ca, sa = math.cos(alpha0), math.sin(alpha0)
    k2 = abs(ca) * math.sqrt(1.0 + kappa1**2 * sa**2)
    k3 = -k2 * math.tan(alpha0)
    return k2, k3


def synthesize_frame(
    model: SpaceFormModel,
    p,
    case: str,
    kappas: Sequence[float],
    *,
    alpha0: float | None = None,
    sigma: int = 1,
    rng: np.random.Generator | None = None,
    T=None,
) -> np.ndarray:
    """Initial Frenet frame (r, D) at p for a Legendre curve of the given case.

    ``circle``: r=2, E2 ⟂ φT. ``helix-II``: r=3 with E2, E3 ⟂ φT (n >= 3).
    ``III``: E2 = σφT, E3 = σξ (then κ₂ = 1). ``IV``: r=4 with
    φT = cos α0 E2 + sin α0 E4 built from {T, φT, ξ, Y, φY}.
    """
    rng = rng or np.random.default_rng(0)
    p = np.asarray(p, dtype=float)
    T = model.random_contact_unit(p, rng) if T is None else np.asarray(T, dtype=float)
    if abs(model.eta(p, T)) > 1e-10 or abs(model.norm(p, T) - 1.0) > 1e-10:
        raise FrameSynthesisError("T must be a unit contact vector")
    phiT = model.phi(p, T)
    if case == "circle":
        return np.stack([T, model.random_contact_unit(p, rng, (T, phiT))])
    if case == "helix-II":
        if model.n < 3:
            raise FrameSynthesisError("Case II helices need n >= 3")
        E2 = model.random_contact_unit(p, rng, (T, phiT))
        E3 = model.random_contact_unit(p, rng, (T, phiT, E2, model.phi(p, E2)))
        return np.stack([T, E2, E3])
    if case == "III":
        s = 1.0 if sigma >= 0 else -1.0
        if len(kappas) >= 2 and abs(kappas[1] - 1.0) > 1e-12:
            raise FrameSynthesisError("E2 = ±φT forces κ₂ = 1")
        return np.stack([T, s * phiT, s * model.xi(p)])
    if case == "IV":
        if alpha0 is None or len(kappas) < 3:
            raise FrameSynthesisError("Case IV needs alpha0 and (κ₁, κ₂, κ₃)")
        k1, k2, k3 = kappas[:3]
        ca, sa = math.cos(alpha0), math.sin(alpha0)
        lead = k2 * ca - k3 * sa
        if abs(k3 * ca + k2 * sa) > 1e-9 or abs(lead**2 - 1.0 - (k1 * sa) ** 2) > 1e-9:
            raise FrameSynthesisError(
                "curvatures incompatible with φT = cos α0 E2 + sin α0 E4 "
                "(need κ₃cos α0 = -κ₂sin α0 and (κ₂cos α0 - κ₃sin α0)² = 1 + κ₁²sin² α0)"
            )
        Y = model.random_contact_unit(p, rng, (T, phiT))
        phiY = model.phi(p, Y)
        E2 = ca * phiT + sa * Y
        E4 = sa * phiT - ca * Y
        E3 = (k1 * sa * phiY + model.xi(p)) / lead
        return np.stack([T, E2, E3, E4])
    raise FrameSynthesisError(f"unknown case {case!r}; expected one of {FRAME_CASES}")


KappaProfile = Sequence[float | Callable[[float], float]]


def _kappa_values(kappas: KappaProfile, s: float) -> list[float]:
    return [k(s) if callable(k) else float(k) for k in kappas]


def integrate_frenet_ode(
    model: SpaceFormModel,
    p0,
    frame,
    kappas: KappaProfile,
    length: float,
    *,
    step: float = ODE_STEP,
    sample_step: float = DEFAULT_STEP,
    meta: dict | None = None,
) -> ParamCurve:
    """Integrate γ' = E1, ∇_T E_i = -κ_{i-1}E_{i-1} + κ_i E_{i+1} with classical
    RK4, re-orthonormalising the frame after every step.

    ``kappas`` holds κ₁..κ_{r-1} as constants or callables of s. Samples are
    emitted every ``sample_step``.
    """
    p = model.normalize_point(np.asarray(p0, dtype=float))
    E = np.array(frame, dtype=float)
    r = E.shape[0]
    if len(kappas) != r - 1:
        raise ParameterError(f"frame of order {r} needs {r - 1} curvatures, got {len(kappas)}")
    gram = np.array([[model.metric(p, a, b) for b in E] for a in E])
    if np.abs(gram - np.eye(r)).max() > 1e-8:
        raise FrameSynthesisError("initial frame is not orthonormal")
    if abs(model.eta(p, E[0])) > 1e-10:
        raise FrameSynthesisError("initial tangent is not Legendre")
    stride = int(round(sample_step / step))
    if stride < 1 or abs(stride * step - sample_step) > 1e-12:
        raise ParameterError("sample_step must be a multiple of the ODE step")
    nsteps = int(round(length / step))
    nsteps -= nsteps % stride

    def rhs(s, p, E):
        k = np.array(_kappa_values(kappas, s))
        K = np.diag(k, 1) - np.diag(k, -1)  # Frenet matrix
        dE = K @ E - E @ model.connection_matrix(p, E[0]).T
        return E[0], dE

    def reorthonormalize(p, E):
        E = np.array([model.project(p, e) for e in E])
        L = np.linalg.cholesky(E @ model.metric_matrix(p) @ E.T)
        return np.linalg.solve(L, E)

    pts = [p.copy()]
    s = 0.0
    for i in range(nsteps):
        k1p, k1E = rhs(s, p, E)
        k2p, k2E = rhs(s + step / 2, p + step / 2 * k1p, E + step / 2 * k1E)
        k3p, k3E = rhs(s + step / 2, p + step / 2 * k2p, E + step / 2 * k2E)
        k4p, k4E = rhs(s + step, p + step * k3p, E + step * k3E)
        p = model.normalize_point(p + step / 6 * (k1p + 2 * k2p + 2 * k3p + k4p))
        E = reorthonormalize(p, E + step / 6 * (k1E + 2 * k2E + 2 * k3E + k4E))
        s = (i + 1) * step
        if (i + 1) % stride == 0:
            pts.append(p.copy())
    svals = sample_step * np.arange(len(pts))
    info = {"family": "frenet-ode", "kappas": [k if not callable(k) else "profile" for k in kappas]}
    info.update(meta or {})
    return ParamCurve(model, svals, np.array(pts), None, info)


def case_curve(
    model: SpaceFormModel,
    case: str,
    kappas: KappaProfile,
    length: float = 2.0 * math.pi,
    *,
    alpha0: float | None = None,
    sigma: int = 1,
    seed: int = 0,
    step: float = ODE_STEP,
    sample_step: float = DEFAULT_STEP,
) -> ParamCurve:
    """Frame synthesis at a random point followed by Frenet integration."""
    rng = np.random.default_rng(seed)
    p0 = model.random_point(rng)
    k0 = _kappa_values(kappas, 0.0)
    frame = synthesize_frame(model, p0, case, k0, alpha0=alpha0, sigma=sigma, rng=rng)
    meta = {"case": case, "model": model.descriptor()}
    if alpha0 is not None:
        meta["alpha0"] = alpha0
    return integrate_frenet_ode(model, p0, frame, kappas, length, step=step, sample_step=sample_step, meta=meta)


RANDOM_CASES = ("circle", "III", "IV")


def _random_profile(rng: np.random.Generator) -> Callable[[float], float]:
    k0 = rng.uniform(0.3, 1.5)
    k1 = rng.uniform(0.0, 0.3) * k0
    w, psi = rng.uniform(0.5, 2.0), rng.uniform(0.0, 2.0 * math.pi)
    return lambda s: k0 + k1 * math.sin(w * s + psi)


def random_legendre_curve(
    model: SpaceFormModel, seed: int, length: float = 3.0, case: str | None = None, sample_step: float = DEFAULT_STEP
) -> ParamCurve:
    """ODE-generated Legendre curve with random data, generally not biharmonic.

    ``circle``: r = 2 with κ₁(s) = k0 + k1 sin(ωs + ψ) and E2 ⟂ φT.
    ``III``: E2 = ±φT, E3 = ±ξ, the same kind of κ₁(s) and κ₂ = 1.
    ``IV``: r = 4, constant κ₁, random α0 and (κ₂, κ₃) from :func:`case4_kappas`.
    """
    rng = np.random.default_rng(seed)
    case = case or RANDOM_CASES[int(rng.integers(len(RANDOM_CASES)))]
    sigma = int(rng.choice([-1, 1]))
    if case == "circle":
        return case_curve(model, case, [_random_profile(rng)], length, seed=seed, sample_step=sample_step)
    if case == "III":
        return case_curve(model, case, [_random_profile(rng), 1.0], length, sigma=sigma, seed=seed, sample_step=sample_step)
    if case == "IV":
        k1 = rng.uniform(0.3, 1.5)
        alpha0 = rng.uniform(0.15, math.pi / 2 - 0.15) + (math.pi / 2) * int(rng.integers(4))
        k2, k3 = case4_kappas(k1, alpha0)
        return case_curve(model, case, [k1, k2, k3], length, alpha0=alpha0, seed=seed, sample_step=sample_step)
    raise ParameterError(f"unknown random case {case!r}; expected one of {RANDOM_CASES}")


# --- flow cylinders ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CylinderPatch:
    """Grid F(t_j, s_k) = φ_{t_j}(γ(s_k)), points of shape (nt, ns, D)."""

    model: SpaceFormModel
    t: np.ndarray
    s: np.ndarray
    points: np.ndarray
    base: ParamCurve

    @property
    def ht(self) -> float:
        return float(self.t[1] - self.t[0])

    @property
    def hs(self) -> float:
        return float(self.s[1] - self.s[0])

    def partials(self) -> tuple[np.ndarray, np.ndarray]:
        Ft = diff(self.points, self.ht, 4)
        Fs = np.swapaxes(diff(np.swapaxes(self.points, 0, 1), self.hs, 4), 0, 1)
        return Ft, Fs

    def interior(self) -> np.ndarray:
        mt = interior_mask(self.t.size, 0.9)
        ms = interior_mask(self.s.size, 0.9)
        return mt[:, None] & ms[None, :]

    def metric_components(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(g(F_t, F_t), g(F_t, F_s), g(F_s, F_s)) over the grid."""
        Ft, Fs = self.partials()
        P, g = self.points, self.model.metric
        return g(P, Ft, Ft), g(P, Ft, Fs), g(P, Fs, Fs)

    def product_metric_residual(self) -> float:
        gtt, gts, gss = self.metric_components()
        m = self.interior()
        return float(max(np.abs(gtt - 1)[m].max(), np.abs(gts)[m].max(), np.abs(gss - 1)[m].max()))

    def xi_alignment_residual(self) -> float:
        Ft, _ = self.partials()
        m = self.interior()
        return float(np.abs(Ft - self.model.xi(self.points))[m].max())

    def tension(self) -> np.ndarray:
        """τ(F) = ∇_{∂t}F_t + ∇_{∂s}F_s for the product metric dt² + ds²."""
        Ft, Fs = self.partials()
        P, m = self.points, self.model
        Ftt = second_diff(P, self.ht, 4)
        Fss = np.swapaxes(second_diff(np.swapaxes(P, 0, 1), self.hs, 4), 0, 1)
        return m.project(P, Ftt + Fss + m.christoffel(P, Ft, Ft) + m.christoffel(P, Fs, Fs))


def flow_cylinder(
    model: SpaceFormModel,
    curve: ParamCurve,
    t_range: tuple[float, float] = (0.0, 1.0),
    nt: int = 64,
    ns: int = 256,
) -> CylinderPatch:
    """Sample F(t, s) = φ_t(γ(s)) on an nt × ns grid.

    The base is resampled with its position callable when available,
    otherwise strided from its samples.
    """
    if curve.model != model:
        raise ValueError("curve lives in a different model")
    if curve.position is not None:
        s = np.linspace(*curve.domain, ns)
        base_pts = curve.position(s)
    else:
        idx = np.linspace(0, curve.sample_count - 1, ns).round().astype(int)
        s, base_pts = curve.s[idx], curve.points[idx]
        if np.ptp(np.diff(s)) > 1e-12:
            raise ValueError("cannot stride base samples uniformly; pass ns dividing the sample count")
    t = np.linspace(t_range[0], t_range[1], nt)
    grid = model.xi_flow(base_pts[None, :, :], t[:, None])
    return CylinderPatch(model, t, s, grid, curve)


def cylinder_bitension_check(patch: CylinderPatch, base_report=None, tol: float = 5e-3) -> dict:
    """Compare ‖τ(F)‖ on the patch with κ₁ of the base curve and carry the
    base verdict over to the cylinder."""
    from .bitension import Verdict, verdict

    base = patch.base
    fd = frenet(base)
    kappa1 = np.interp(patch.s, base.s, fd.kappa(1)) if fd.order > 1 else np.zeros(patch.s.size)
    tau = patch.model.norm(patch.points, patch.tension())
    m = patch.interior()
    mismatch = np.abs(tau - kappa1[None, :])[m]
    report = base_report or verdict(base)
    match = bool(mismatch.max() < tol)
    cyl = report.verdict if match else Verdict.INDETERMINATE
    return {
        "tension_norm_max": float(tau[m].max()),
        "tension_norm_min": float(tau[m].min()),
        "tension_vs_kappa1_max": float(mismatch.max()),
        "product_metric_residual": patch.product_metric_residual(),
        "base_verdict": report.verdict.value,
        "cylinder_verdict": cyl.value,
        "consistent": match,
        "tol": tol,
    }
