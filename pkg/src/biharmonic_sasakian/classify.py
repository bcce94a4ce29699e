"""Decision procedures for proper-biharmonic Legendre curves.

Given c and the Frenet invariants of a Legendre curve, pick the case from the
behaviour of g(E2, φT) = -τ₁₂ and test the constraint system of that case:

* I   (c = 1): circle with κ₁ = 1 or helix with κ₁² + κ₂² = 1, n >= 2.
* II  (c != 1, E2 ⟂ φT): only geodesics if c <= -3; otherwise circle with
  κ₁² = (c+3)/4 (n >= 2) or helix with κ₁² + κ₂² = (c+3)/4 (n >= 3).
* III (c != 1, E2 ∥ φT): only geodesics if c < 1; otherwise helix with
  κ₁² = c - 1 and κ₂ = 1.
* IV  (c != 1, other constant): r >= 4, φT = cos α0 E2 + sin α0 E4 and the
  α0 system checked by :func:`case4_constraints`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .curves import FrenetData, alpha0_from_torsions

TAU_CONST_TOL = 1e-5
DEFAULT_TOL = 1e-5


class Case(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    MIXED = "Mixed"


class CurveClass(str, enum.Enum):
    GEODESIC_ONLY = "GeodesicOnly"
    PROPER_BIHARMONIC = "ProperBiharmonic"
    NOT_PROPER_BIHARMONIC = "NotProperBiharmonic"

    @property
    def is_proper(self) -> bool:
        return self is CurveClass.PROPER_BIHARMONIC


@dataclass(frozen=True)
class Constraint:
    """``measured`` compared with ``target`` under ``relation`` ("==", ">" or "<")."""

    name: str
    target: float
    measured: float
    relation: str = "=="

    @property
    def residual(self) -> float:
        if self.relation == "==":
            return abs(self.measured - self.target)
        if self.relation == ">":
            return max(0.0, self.target - self.measured)
        return max(0.0, self.measured - self.target)

    def satisfied(self, tol: float) -> bool:
        if self.relation == "==":
            return self.residual < tol
        if self.relation == ">":
            return self.measured > self.target
        return self.measured < self.target

    def render(self) -> str:
        rel = "" if self.relation == "==" else f"{self.relation} "
        return f"{self.name}: {rel}{self.target:.12g} vs {self.measured:.12g} ({self.residual:.3e})"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "relation": self.relation,
            "target": self.target,
            "measured": self.measured,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class ClassificationVerdict:
    case: Case
    verdict: CurveClass
    constraints: tuple[Constraint, ...]
    required_ambient_n: int | None
    flags: tuple[str, ...] = ()
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "case": self.case.value,
            "verdict": self.verdict.value,
            "required_ambient_n": self.required_ambient_n,
            "constraints": [c.to_dict() for c in self.constraints],
            "flags": list(self.flags),
            "details": self.details,
        }

    def render(self) -> str:
        lines = [f"case {self.case.value}: {self.verdict.value}"]
        if self.required_ambient_n is not None:
            lines.append(f"  requires n >= {self.required_ambient_n}")
        lines += ["  " + c.render() for c in self.constraints]
        lines += [f"  note: {f}" for f in self.flags]
        return "\n".join(lines)


def _is_one(c: float) -> bool:
    return abs(c - 1.0) < 1e-12


def _finish(case, constraints, tol, required_n=None, flags=(), details=None) -> ClassificationVerdict:
    ok = all(k.satisfied(tol) for k in constraints)
    verdict = CurveClass.PROPER_BIHARMONIC if ok else CurveClass.NOT_PROPER_BIHARMONIC
    return ClassificationVerdict(case, verdict, tuple(constraints), required_n, tuple(flags), details or {})


def _constancy(fd: FrenetData, mask, upto: int) -> list[Constraint]:
    return [Constraint(f"std(kappa_{i})", 0.0, float(fd.kappa(i)[mask].std())) for i in range(1, upto + 1)]


def case4_constraints(c: float, k1: float, k2: float, k3: float, alpha0: float) -> list[Constraint]:
    """The two equalities and two inequalities on (κ₁, κ₂, κ₃, α0)."""
    ca, s2a = math.cos(alpha0), math.sin(2.0 * alpha0)
    return [
        Constraint("kappa1^2+kappa2^2", (c + 3.0) / 4.0 + 3.0 * (c - 1.0) / 4.0 * ca**2, k1**2 + k2**2),
        Constraint("kappa2*kappa3", -3.0 * (c - 1.0) / 8.0 * s2a, k2 * k3),
        Constraint("c+3+3(c-1)cos^2(alpha0)", 0.0, c + 3.0 + 3.0 * (c - 1.0) * ca**2, ">"),
        Constraint("3(c-1)sin(2alpha0)", 0.0, 3.0 * (c - 1.0) * s2a, "<"),
    ]


def classify(c: float, fd: FrenetData, tol: float = DEFAULT_TOL) -> ClassificationVerdict:
    """Case and verdict for a Legendre Frenet curve with data ``fd`` in N(c)."""
    mask = fd.interior()
    r = fd.order
    kbar = [float(fd.kappa(i)[mask].mean()) for i in range(1, 4)]
    g12 = -fd.tau(1, 2)[mask]  # g(E2, φT)
    details = {"order": r, "kappa_mean": kbar[: max(r - 1, 0)], "c": c}

    if r == 1:
        case = Case.I if _is_one(c) else Case.II
        return ClassificationVerdict(
            case, CurveClass.NOT_PROPER_BIHARMONIC, (), None, ("geodesic: harmonic, not proper-biharmonic",), details
        )

    g_mean, g_std = float(g12.mean()), float(g12.std())
    details.update({"g(E2,phiT)_mean": g_mean, "g(E2,phiT)_std": g_std})
    kappa_ok = Constraint("order", 4.0, float(r), "<")  # r in {2, 3}

    if _is_one(c):
        cons = [kappa_ok] + _constancy(fd, mask, r - 1)
        if r == 2:
            cons.append(Constraint("kappa1", 1.0, kbar[0]))
        elif r == 3:
            cons.append(Constraint("kappa1^2+kappa2^2", 1.0, kbar[0] ** 2 + kbar[1] ** 2))
        return _finish(Case.I, cons, tol, 2, details=details)

    if g_std >= TAU_CONST_TOL:
        member = np.where(np.abs(g12) < TAU_CONST_TOL, "II", np.where(np.abs(np.abs(g12) - 1) < TAU_CONST_TOL, "III", "IV"))
        details["sample_cases"] = {k: int((member == k).sum()) for k in ("II", "III", "IV")}
        flag = "g(E2, phiT) is not constant; a proper-biharmonic curve needs constant tau_12"
        cons = [Constraint("std(tau_12)", 0.0, g_std)]
        return ClassificationVerdict(Case.MIXED, CurveClass.NOT_PROPER_BIHARMONIC, tuple(cons), None, (flag,), details)

    if abs(g_mean) < TAU_CONST_TOL:
        if c <= -3.0:
            return ClassificationVerdict(
                Case.II, CurveClass.GEODESIC_ONLY, (Constraint("c", -3.0, c, ">"),), None,
                ("only geodesics are biharmonic for c <= -3",), details,
            )
        cons = [kappa_ok] + _constancy(fd, mask, r - 1)
        if r == 2:
            cons.append(Constraint("kappa1^2", (c + 3.0) / 4.0, kbar[0] ** 2))
            return _finish(Case.II, cons, tol, 2, details=details)
        cons.append(Constraint("kappa1^2+kappa2^2", (c + 3.0) / 4.0, kbar[0] ** 2 + kbar[1] ** 2))
        return _finish(Case.II, cons, tol, 3, details=details)

    if abs(abs(g_mean) - 1.0) < TAU_CONST_TOL:
        if c < 1.0:
            return ClassificationVerdict(
                Case.III, CurveClass.GEODESIC_ONLY, (Constraint("c", 1.0, c, ">"),), None,
                ("only geodesics are biharmonic for c < 1",), details,
            )
        cons = [
            Constraint("order", 3.0, float(r)),
            *_constancy(fd, mask, min(r - 1, 2)),
            Constraint("kappa1^2", c - 1.0, kbar[0] ** 2),
            Constraint("kappa2", 1.0, kbar[1]),
        ]
        return _finish(Case.III, cons, tol, None, details=details)

    if c <= -3.0:
        return ClassificationVerdict(
            Case.IV, CurveClass.GEODESIC_ONLY, (Constraint("c", -3.0, c, ">"),), None,
            ("only geodesics are biharmonic for c <= -3",), details,
        )
    if r < 4:
        cons = (Constraint("order", 4.0, float(r), ">"),)
        return ClassificationVerdict(Case.IV, CurveClass.NOT_PROPER_BIHARMONIC, cons, 2, ("case IV needs r >= 4",), details)
    t12, t13, t14 = (float(fd.tau(1, j)[mask].mean()) for j in (2, 3, 4))
    alpha0 = alpha0_from_torsions(t12, t14)
    details["alpha0"] = alpha0
    phiT_res = _phiT_relation_residual(fd, mask, alpha0, t12, t13, t14)
    cons = [
        *_constancy(fd, mask, 3),
        Constraint("std(tau_14)", 0.0, float(fd.tau(1, 4)[mask].std())),
        Constraint("phiT - (cos a0 E2 + sin a0 E4)", 0.0, phiT_res),
        *case4_constraints(c, *kbar, alpha0),
    ]
    flags = (f"order {r} > 4 is not enumerated; only r = 4 profiles are known",) if r > 4 else ()
    return _finish(Case.IV, cons, tol, 2, flags=flags, details=details)


def _phiT_relation_residual(fd, mask, alpha0, t12, t13, t14) -> float:
    """max_s ‖φT - cos α0 E2 - sin α0 E4‖; from torsions alone when no frame."""
    if fd.frames is None:
        return max(abs(t13), math.sqrt(max(0.0, 1.0 - t12**2 - t14**2)))
    m, P = fd.model, fd.points
    d = m.phi(P, fd.frames[0]) - math.cos(alpha0) * fd.frames[1] - math.sin(alpha0) * fd.frames[3]
    return float(m.norm(P, d)[mask].max())


# --- the r = 4 profile -------------------------------------------------------


def order4_kappa_squares(c: float) -> tuple[float, float, float]:
    """(κ₁², κ₂², κ₃²) of the r = 4 profile, without any domain check."""
    return (
        (c + 3.0) / 4.0,
        6.0 * (c - 1.0) * (5.0 - c) / (4.0 * (c + 3.0)),
        3.0 * (c - 1.0) * (3.0 * c - 7.0) / (4.0 * (c + 3.0)),
    )


@dataclass(frozen=True)
class Order4Branch:
    sign: str  # "upper" or "lower" in the ∓/± table
    alpha0: float
    torsions: dict[tuple[int, int], float]

    def to_dict(self) -> dict:
        return {
            "sign": self.sign,
            "alpha0": self.alpha0,
            "torsions": {f"tau_{i}{j}": v for (i, j), v in sorted(self.torsions.items())},
        }


@dataclass(frozen=True)
class Order4Profile:
    c: float
    kappas: tuple[float, float, float] | None
    branches: tuple[Order4Branch, ...]
    reason: str = ""

    @property
    def feasible(self) -> bool:
        return self.kappas is not None

    def branch(self, sign: str) -> Order4Branch:
        for b in self.branches:
            if b.sign == sign:
                return b
        raise KeyError(sign)

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "feasible": self.feasible,
            "reason": self.reason,
            "kappas": list(self.kappas) if self.kappas else None,
            "branches": [b.to_dict() for b in self.branches],
        }


def order4_profile(c: float) -> Order4Profile:
    """Curvatures and both sign branches of φ-torsions for r = 4, c in (7/3, 5)."""
    if not 7.0 / 3.0 < c < 5.0:
        return Order4Profile(c, None, (), "c ∉ (7/3,5)")
    kappas = tuple(math.sqrt(v) for v in order4_kappa_squares(c))
    t12 = math.sqrt(2.0 * (5.0 - c) / (c + 3.0))
    t14 = math.sqrt((3.0 * c - 7.0) / (c + 3.0))
    t23 = (3.0 * c - 7.0) / math.sqrt(3.0 * (c - 1.0) * (c + 3.0))
    t34 = math.sqrt(2.0 * (5.0 - c) * (3.0 * c - 7.0) / (3.0 * (c - 1.0) * (c + 3.0)))
    branches = []
    for sign, s in (("upper", 1.0), ("lower", -1.0)):
        tau = {(1, 2): -s * t12, (1, 3): 0.0, (1, 4): s * t14, (2, 3): -s * t23, (2, 4): 0.0, (3, 4): s * t34}
        branches.append(Order4Branch(sign, alpha0_from_torsions(tau[1, 2], tau[1, 4]), tau))
    return Order4Profile(c, kappas, tuple(branches))
