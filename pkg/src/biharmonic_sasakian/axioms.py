"""Randomised check of the contact metric and Sasakian structure axioms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import SpaceFormModel
from .oracles import ChartGeometry

ALGEBRAIC_TOL = 1e-8
STENCIL_TOL = 1e-5


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    max_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.max_residual < self.tol)


@dataclass(frozen=True)
class AxiomReport:
    model: dict
    samples: int
    seed: int
    checks: tuple[AxiomCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "samples": self.samples,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "max_residual": c.max_residual, "tol": c.tol, "passed": c.passed}
                for c in self.checks
            ],
        }


def axiom_suite(model: SpaceFormModel, samples: int = 100, seed: int = 0) -> AxiomReport:
    """φ² = -I + η⊗ξ, η(ξ) = 1, φξ = 0, η = g(·, ξ), g(φX, φY) = g(X, Y) - η(X)η(Y)
    at random (p, X, Y); dη(X, Y) = g(X, φY) with dη from chart finite differences."""
    rng = np.random.default_rng(seed)
    m = model
    P = np.stack([m.random_point(rng) for _ in range(samples)])
    X = np.stack([m.random_tangent(p, rng) for p in P])
    Y = np.stack([m.random_tangent(p, rng) for p in P])
    xi = m.xi(P)
    eX, eY = m.eta(P, X), m.eta(P, Y)
    phiX, phiY = m.phi(P, X), m.phi(P, Y)

    def worst(v):
        v = np.abs(np.asarray(v))
        return float(v.reshape(v.shape[0], -1).max(axis=1).max())

    checks = [
        AxiomCheck("phi^2 = -I + eta (x) xi", worst(m.phi(P, phiX) + X - eX[:, None] * xi), ALGEBRAIC_TOL),
        AxiomCheck("eta(xi) = 1", worst(m.eta(P, xi) - 1.0), ALGEBRAIC_TOL),
        AxiomCheck("phi xi = 0", worst(m.phi(P, xi)), ALGEBRAIC_TOL),
        AxiomCheck("eta(X) = g(X, xi)", worst(eX - m.metric(P, X, xi)), ALGEBRAIC_TOL),
        AxiomCheck(
            "g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)",
            worst(m.metric(P, phiX, phiY) - m.metric(P, X, Y) + eX * eY),
            ALGEBRAIC_TOL,
        ),
    ]
    deta = np.array([ChartGeometry(m, p).d_eta(x, y) for p, x, y in zip(P, X, Y)])
    checks.append(AxiomCheck("d eta(X, Y) = g(X, phi Y)", worst(deta - m.metric(P, X, phiY)), STENCIL_TOL))
    return AxiomReport(m.descriptor(), samples, seed, tuple(checks))
