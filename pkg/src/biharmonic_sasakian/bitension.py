"""Tension and bitension fields along Legendre curves.

Two evaluators are provided for τ₂(γ):

* ``bitension_direct``: ∇_T³T - R(T, ∇_T T)T from the model connection and
  the closed-form curvature operator.
* ``bitension_frenet``: the expansion in the Frenet frame
  (-3κ₁κ₁')E₁ + (κ₁'' - κ₁³ - κ₁κ₂² + (c+3)κ₁/4)E₂ + (2κ₁'κ₂ + κ₁κ₂')E₃
  + κ₁κ₂κ₃E₄ + 3(c-1)κ₁/4 g(E₂, φT)φT.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .curves import FrenetData, ParamCurve, PreconditionError, frenet, legendre_residual
from .numerics import diff

LEGENDRE_GATE = 1e-6

# tolerance ladder: closed-form connections vs the calibrated deformed one
TOL_BY_KIND = {"UnitSphere": 1e-5, "FlatSasakian": 1e-5, "DeformedSphere": 1e-4}


class Verdict(str, enum.Enum):
    HARMONIC = "Harmonic"
    PROPER_BIHARMONIC = "ProperBiharmonic"
    NOT_BIHARMONIC = "NotBiharmonic"
    INDETERMINATE = "Indeterminate"


def default_tolerance(kind: str) -> float:
    return TOL_BY_KIND[kind]


def tension(curve: ParamCurve) -> np.ndarray:
    """τ(γ) = ∇_T T sampled along the curve."""
    T = curve.velocity()
    return curve.model.covariant_derivative(curve.points, T, T, curve.step)


def _check_legendre(curve: ParamCurve):
    res = legendre_residual(curve)
    if res > LEGENDRE_GATE:
        raise PreconditionError(f"curve is not Legendre (|η(T)| up to {res:.2e})")


def bitension_direct(curve: ParamCurve) -> np.ndarray:
    """∇_T³T - R(T, ∇_T T)T by three nested covariant derivatives."""
    _check_legendre(curve)
    m, P, h = curve.model, curve.points, curve.step
    T = curve.velocity()
    V1 = m.covariant_derivative(P, T, T, h)
    V2 = m.covariant_derivative(P, T, V1, h)
    V3 = m.covariant_derivative(P, T, V2, h)
    return V3 - m.curvature(P, T, V1, T)


def frenet_coefficients(fd: FrenetData, c: float) -> dict[str, np.ndarray]:
    """Scalar coefficients of E1..E4 and of φT in the five-term expansion.

    Works on synthetic data (no frames); g(E2, φT) = -τ12.
    """
    h = float(fd.s[1] - fd.s[0])
    k1, k2, k3 = fd.kappa(1), fd.kappa(2), fd.kappa(3)
    dk1 = diff(k1, h)
    ddk1 = diff(dk1, h)
    dk2 = diff(k2, h)
    r = fd.order
    zero = np.zeros(fd.s.size)
    return {
        "E1": -3.0 * k1 * dk1,
        "E2": ddk1 - k1**3 - k1 * k2**2 + (c + 3.0) * k1 / 4.0 if r >= 2 else zero,
        "E3": 2.0 * dk1 * k2 + k1 * dk2 if r >= 3 else zero,
        "E4": k1 * k2 * k3 if r >= 4 else zero,
        "phiT": 3.0 * (c - 1.0) * k1 / 4.0 * (-fd.tau(1, 2)) if r >= 2 else zero,
    }


def bitension_frenet(fd: FrenetData, c: float) -> np.ndarray:
    """Five-term Frenet expansion; curvatures beyond the order count as zero."""
    if fd.frames is None:
        raise ValueError("bitension_frenet needs Frenet frames")
    coef = frenet_coefficients(fd, c)
    T = fd.frames[0]
    out = coef["E1"][:, None] * T
    for i in (2, 3, 4):
        E = fd.frame(i)
        if E is not None:
            out = out + coef[f"E{i}"][:, None] * E
    if fd.order >= 2:
        out = out + coef["phiT"][:, None] * fd.model.phi(fd.points, T)
    return out


@dataclass(frozen=True)
class BiharmonicReport:
    tension_norm_max: float
    bitension_direct_max: float
    bitension_frenet_max: float
    evaluator_gap_max: float
    legendre_residual: float
    verdict: Verdict
    tol: float
    order: int
    per_sample: dict = field(repr=False, default_factory=dict)

    def summary(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "tension_norm_max": self.tension_norm_max,
            "bitension_direct_max": self.bitension_direct_max,
            "bitension_frenet_max": self.bitension_frenet_max,
            "evaluator_gap_max": self.evaluator_gap_max,
            "legendre_residual": self.legendre_residual,
            "osculating_order": self.order,
            "tol": self.tol,
        }

    def table(self) -> tuple[list[str], list[list[float]]]:
        header = ["s", "tension", "bitension_direct", "bitension_frenet"]
        cols = [self.per_sample[k] for k in header]
        return header, np.column_stack(cols).tolist()


def classify_residuals(tension_max: float, direct_max: float, frenet_max: float, tol: float) -> Verdict:
    if tension_max < tol:
        return Verdict.HARMONIC
    if direct_max < tol and frenet_max < tol:
        return Verdict.PROPER_BIHARMONIC if tension_max >= 10 * tol else Verdict.INDETERMINATE
    if direct_max > 10 * tol and frenet_max > 10 * tol:
        return Verdict.NOT_BIHARMONIC
    return Verdict.INDETERMINATE


def verdict(curve: ParamCurve, tol: float | None = None, fd: FrenetData | None = None) -> BiharmonicReport:
    """Biharmonicity verdict from residual maxima over the interior samples."""
    tol = default_tolerance(curve.model.kind) if tol is None else tol
    mask = curve.interior()
    m, P = curve.model, curve.points
    fd = fd or frenet(curve)
    tau = m.norm(P, tension(curve))
    direct = bitension_direct(curve)
    via_frenet = bitension_frenet(fd, m.c)
    nd, nf = m.norm(P, direct), m.norm(P, via_frenet)
    gap = m.norm(P, direct - via_frenet)
    t_max, d_max, f_max = (float(x[mask].max()) for x in (tau, nd, nf))
    return BiharmonicReport(
        tension_norm_max=t_max,
        bitension_direct_max=d_max,
        bitension_frenet_max=f_max,
        evaluator_gap_max=float(gap[mask].max()),
        legendre_residual=legendre_residual(curve),
        verdict=classify_residuals(t_max, d_max, f_max, tol),
        tol=tol,
        order=fd.order,
        per_sample={
            "s": curve.s[mask],
            "tension": tau[mask],
            "bitension_direct": nd[mask],
            "bitension_frenet": nf[mask],
        },
    )
