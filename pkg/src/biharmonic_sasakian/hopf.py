"""Biharmonic Hopf cylinders over Takagi Type A1/A2 hypersurfaces of CP^n.

With t = tan²u the principal curvatures give

    ‖B̄‖² = (c+3)/4 · [(2n-2)/t + (1-t)²/t]                      (A1)
    ‖B̄‖² = (c+3)/4 · [2p·t + 2q/t + (1-t)²/t]                    (A2)

and the CMC condition ‖B̄‖² = K, K = (c(n+1)+3n-5)/2, becomes a quadratic in
t. Its roots are compared with the published closed forms; a root counts as
proper-biharmonic only when the mean curvature H̄ does not vanish there.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from scipy.optimize import brentq

MINIMAL_TOL = 1e-9
CMC_TOL = 1e-9
TYPES = ("A1", "A2")
OTHER_TYPES = ("B", "C", "D", "E")


class SingularSpectrumError(ValueError):
    pass


class HopfVerdict(str, enum.Enum):
    PROPER_BIHARMONIC = "ProperBiharmonic"
    MINIMAL = "Minimal"
    MINIMAL_ONLY = "MinimalOnly"
    NOT_PROPER_BIHARMONIC = "NotProperBiharmonic"
    UNVERIFIED = "Unverified"


def _check_type(kind: str, n: int, p: int | None, q: int | None) -> tuple[int, int | None, int | None]:
    if kind not in TYPES:
        raise ValueError(f"unknown Takagi type {kind!r}; expected one of {TYPES}")
    if kind == "A2":
        if p is None or q is None or p <= 0 or q <= 0:
            raise ValueError("Type A2 needs positive integers p, q")
        if n is None:
            n = p + q + 1
        if p + q != n - 1:
            raise ValueError(f"Type A2 needs p + q = n - 1 (got p={p}, q={q}, n={n})")
    if n is None or n < 2:
        raise ValueError("need n > 1")
    return int(n), p, q


@dataclass(frozen=True)
class TakagiHypersurface:
    kind: str
    u: float
    n: int
    c: float
    p: int | None = None
    q: int | None = None

    def __post_init__(self):
        n, p, q = _check_type(self.kind, self.n, self.p, self.q)
        object.__setattr__(self, "n", n)
        if not self.c > -3.0:
            raise ValueError("need c > -3")
        if not 0.0 < self.u < math.pi / 2:
            raise SingularSpectrumError(f"u must lie strictly inside (0, pi/2), got {self.u}")

    @property
    def r(self) -> float:
        """Radius with 1/r² = (c+3)/4."""
        return 2.0 / math.sqrt(self.c + 3.0)

    @classmethod
    def from_tan2u(cls, kind, t, n, c, p=None, q=None) -> "TakagiHypersurface":
        return cls(kind, math.atan(math.sqrt(t)), n, c, p, q)


@dataclass(frozen=True)
class HopfSpectrum:
    curvatures: tuple[tuple[float, int], ...]
    norm_B_sq: float
    mean_curvature: float
    dim: int


def spectrum(h: TakagiHypersurface) -> HopfSpectrum:
    """Principal curvatures with multiplicities, ‖B̄‖² and signed H̄."""
    u, r = h.u, h.r
    cot = math.cos(u) / math.sin(u)
    a = 2.0 * math.cos(2.0 * u) / (r * math.sin(2.0 * u))
    if h.kind == "A1":
        curv = ((cot / r, 2 * h.n - 2), (a, 1))
    else:
        curv = ((-math.tan(u) / r, 2 * h.p), (cot / r, 2 * h.q), (a, 1))
    dim = 2 * h.n - 1
    assert sum(m for _, m in curv) == dim
    return HopfSpectrum(
        curv,
        sum(m * lam**2 for lam, m in curv),
        sum(m * lam for lam, m in curv) / dim,
        dim,
    )


def cmc_rhs(c: float, n: int) -> float:
    return (c * (n + 1) + 3 * n - 5) / 2.0


@dataclass(frozen=True)
class CMCResult:
    satisfied: bool
    residual: float
    rhs: float


def cmc_criterion(c: float, n: int, norm_B_sq: float, tol: float = CMC_TOL) -> CMCResult:
    """‖B̄‖² = (c(n+1)+3n-5)/2; unsatisfiable when the right side is <= 0."""
    rhs = cmc_rhs(c, n)
    res = abs(norm_B_sq - rhs)
    return CMCResult(bool(rhs > 0 and res < tol), res, rhs)


# --- the quadratic in t = tan²u ----------------------------------------------


def norm_B_sq_of_tan2u(kind: str, t: float, c: float, n: int, p=None, q=None) -> float:
    """‖B̄‖² as a rational function of t = tan²u."""
    n, p, q = _check_type(kind, n, p, q)
    w = (c + 3.0) / 4.0
    if kind == "A1":
        return w * ((2 * n - 2) / t + (1.0 - t) ** 2 / t)
    return w * (2 * p * t + 2 * q / t + (1.0 - t) ** 2 / t)


def mean_curvature_of_tan2u(kind: str, t: float, c: float, n: int, p=None, q=None) -> float:
    """Signed H̄ as a function of t = tan²u; uses (2/r)cot 2u = (1 - t)/(r√t)."""
    n, p, q = _check_type(kind, n, p, q)
    s = math.sqrt(t)
    if kind == "A1":
        total = (2 * n - 2) / s + (1.0 - t) / s
    else:
        total = -2 * p * s + 2 * q / s + (1.0 - t) / s
    return math.sqrt((c + 3.0) / 4.0) * total / (2 * n - 1)


def quadratic_coefficients(kind: str, c: float, n: int, p=None, q=None) -> tuple[float, float, float]:
    """(A, B, C) with A t² + B t + C = 0 equivalent to the CMC condition."""
    n, p, q = _check_type(kind, n, p, q)
    w = (c + 3.0) / 4.0
    lead, const = (1, 2 * n - 1) if kind == "A1" else (2 * p + 1, 2 * q + 1)
    return w * lead, -(c * (n + 2) + 3 * n - 2) / 2.0, w * const


def discriminant(kind: str, c: float, n: int, p=None, q=None) -> float:
    """Discriminant of the published root formula (radicand)."""
    n, p, q = _check_type(kind, n, p, q)
    if kind == "A1":
        return c * c * (n * n + 2 * n + 5) + 2 * c * (3 * n * n - 2 * n - 1) + 9 * n * n - 30 * n + 13
    d2 = (p - q) ** 2
    return c * c * (d2 + 4 * n + 4) + 2 * c * (3 * d2 + 4 * n - 4) + 9 * d2 - 12 * n + 4


def quadratic_roots(A: float, B: float, C: float) -> tuple[float, ...]:
    """Real roots, ascending, by the cancellation-free formula."""
    disc = B * B - 4.0 * A * C
    if disc < 0:
        return ()
    sq = math.sqrt(disc)
    qq = -0.5 * (B + math.copysign(sq, B))
    roots = {qq / A, C / qq} if qq != 0 else {0.0}
    return tuple(sorted(roots))


def closed_form_roots(kind: str, c: float, n: int, p=None, q=None) -> tuple[float, ...]:
    """Published tan²u expressions, '-' branch first; empty if the radicand is negative."""
    n, p, q = _check_type(kind, n, p, q)
    D = discriminant(kind, c, n, p, q)
    if D < 0:
        return ()
    k = 1 if kind == "A1" else 2 * p + 1
    base = n / k + (2 * c - 2) / ((c + 3) * k)
    rad = math.sqrt(D) / ((c + 3) * k)
    return (base - rad, base + rad)


def existence_threshold(kind: str, n: int | None = None, p=None, q=None) -> float:
    """Smallest c for which real positive roots exist (closed form)."""
    n, p, q = _check_type(kind, n, p, q)
    if kind == "A1":
        return (-3 * n * n + 2 * n + 1 + 8 * math.sqrt(2 * n - 1)) / (n * n + 2 * n + 5)
    d2 = (p - q) ** 2
    return (-3 * d2 - 4 * n + 4 + 8 * math.sqrt((2 * p + 1) * (2 * q + 1))) / (d2 + 4 * n + 4)


def numeric_threshold(kind: str, n: int | None = None, p=None, q=None) -> float:
    """Larger zero of the quadratic discriminant in c, found by brentq."""
    n, p, q = _check_type(kind, n, p, q)

    def disc(c):
        A, B, C = quadratic_coefficients(kind, c, n, p, q)
        return B * B - 4 * A * C

    # disc is a convex quadratic in c; bracket between its vertex and a point where it is positive
    lo = _disc_vertex(kind, n, p, q)
    hi = 2.0
    while disc(hi) <= 0:
        hi *= 2.0
    if disc(lo) >= 0:
        return lo
    return brentq(disc, lo, hi, xtol=1e-15)


def _disc_vertex(kind, n, p, q) -> float:
    # disc(c) = a c² + b c + e, recovered from three samples
    f = [discriminant(kind, x, n, p, q) for x in (-1.0, 0.0, 1.0)]
    a = (f[0] + f[2] - 2 * f[1]) / 2.0
    b = (f[2] - f[0]) / 2.0
    return -b / (2.0 * a)


# --- solving ---------------------------------------------------------------


@dataclass(frozen=True)
class HopfRoot:
    index: int
    tan2u: float
    u: float
    norm_B_sq: float
    H: float
    verdict: HopfVerdict
    cmc_residual: float
    closed_form: float | None = None
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "root_index": self.index,
            "tan2u": self.tan2u,
            "u": self.u,
            "normB2": self.norm_B_sq,
            "H": self.H,
            "verdict": self.verdict.value,
            "cmc_residual": self.cmc_residual,
            "closed_form": self.closed_form,
            "note": self.note,
        }


@dataclass(frozen=True)
class HopfSolution:
    kind: str
    c: float
    n: int
    p: int | None
    q: int | None
    roots: tuple[HopfRoot, ...]
    threshold: float
    reason: str = ""
    closed_form_rel_err: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def proper_roots(self) -> tuple[HopfRoot, ...]:
        return tuple(r for r in self.roots if r.verdict is HopfVerdict.PROPER_BIHARMONIC)

    def to_dict(self) -> dict:
        return {
            "type": self.kind,
            "c": self.c,
            "n": self.n,
            "p": self.p,
            "q": self.q,
            "threshold": self.threshold,
            "reason": self.reason,
            "closed_form_rel_err": self.closed_form_rel_err,
            "roots": [r.to_dict() for r in self.roots],
        }


def _label(kind, t, n, c, p, q) -> tuple[float, float, float, float, HopfVerdict]:
    h = TakagiHypersurface.from_tan2u(kind, t, n, c, p, q)
    sp = spectrum(h)
    res = cmc_criterion(c, n, sp.norm_B_sq).residual
    v = HopfVerdict.PROPER_BIHARMONIC if abs(sp.mean_curvature) > MINIMAL_TOL else HopfVerdict.MINIMAL
    return h.u, sp.norm_B_sq, sp.mean_curvature, res, v


def solve_biharmonic_u(kind: str, c: float, n: int | None = None, p=None, q=None) -> HopfSolution:
    """All tan²u roots of the CMC condition, labelled ProperBiharmonic or Minimal."""
    n, p, q = _check_type(kind, n, p, q)
    thr = existence_threshold(kind, n, p, q)
    empty = lambda why: HopfSolution(kind, c, n, p, q, (), thr, why)  # noqa: E731
    if c <= -3.0:
        return empty("c <= -3: no proper-biharmonic CMC Hopf cylinders")
    if cmc_rhs(c, n) <= 0:
        return empty("c <= (5-3n)/(n+1): CMC criterion unsatisfiable")
    if c < thr - 1e-12:
        return empty(f"c below the existence threshold {thr:.12g}")

    direct = [t for t in quadratic_roots(*quadratic_coefficients(kind, c, n, p, q)) if t > 0]
    closed = [t for t in closed_form_roots(kind, c, n, p, q) if t > 0]
    match = [min(closed, key=lambda x: abs(x - t)) if closed else None for t in direct]
    rel = max((abs(t - m) / t for t, m in zip(direct, match) if m is not None), default=None)

    roots = []
    for i, t in enumerate(direct):
        u, nb, H, res, v = _label(kind, t, n, c, p, q)
        note = ""
        if abs(c - 1.0) < 1e-12:
            if v is HopfVerdict.MINIMAL:
                note = "minimal (H = 0); excluded" + (" since p = q" if kind == "A2" and p == q else "")
        roots.append(HopfRoot(i, t, u, nb, H, v, res, match[i], note))
    reason = "" if any(r.verdict is HopfVerdict.PROPER_BIHARMONIC for r in roots) else "no root with H != 0"
    return HopfSolution(kind, c, n, p, q, tuple(roots), thr, reason, rel)


@dataclass(frozen=True)
class Hopf3Result:
    verdict: HopfVerdict
    residual: float | None
    reason: str


def hopf3_criterion(c: float, kappa_bar: float, tol: float = CMC_TOL) -> Hopf3Result:
    """Hopf cylinders in dimension 3: proper-biharmonic iff c > 1 and κ̄² = c - 1."""
    if c <= 1.0:
        return Hopf3Result(HopfVerdict.MINIMAL_ONLY, None, "c <= 1: biharmonic only when minimal")
    res = abs(kappa_bar**2 - (c - 1.0))
    if res < tol:
        return Hopf3Result(HopfVerdict.PROPER_BIHARMONIC, res, "kappa_bar^2 = c - 1")
    return Hopf3Result(HopfVerdict.NOT_PROPER_BIHARMONIC, res, "kappa_bar^2 != c - 1")


def other_type_verdict(kind: str) -> dict:
    """Types B-E carry no principal-curvature data here; report, don't verify."""
    if kind not in OTHER_TYPES:
        raise ValueError(f"expected one of {OTHER_TYPES}")
    return {
        "type": kind,
        "verdict": HopfVerdict.UNVERIFIED.value,
        "note": "non-existence of proper-biharmonic Hopf cylinders is asserted in the literature; not verified here",
    }


# --- scans -----------------------------------------------------------------

SCAN_COLUMNS = ("type", "c", "n", "p", "q", "root_index", "tan2u", "u", "normB2", "H", "verdict")


def scan_rows(kind: str, c: float, n: int, p=None, q=None) -> list[dict]:
    """CSV rows for one parameter point; a row with empty root fields if none."""
    sol = solve_biharmonic_u(kind, c, n, p, q)
    base = {"type": kind, "c": c, "n": sol.n, "p": p, "q": q}
    if not sol.roots:
        return [{**base, "root_index": None, "tan2u": None, "u": None, "normB2": None, "H": None, "verdict": "None"}]
    return [
        {**base, **{k: v for k, v in r.to_dict().items() if k in SCAN_COLUMNS}} for r in sol.roots
    ]


def scan_grid(types, n_values, c_values) -> list[tuple]:
    """Parameter tuples (kind, c, n, p, q) in a deterministic order."""
    out = []
    for kind in types:
        for n in n_values:
            pq = [(None, None)] if kind == "A1" else [(p, n - 1 - p) for p in range(1, n - 1)]
            for p, q in pq:
                for c in c_values:
                    out.append((kind, float(c), int(n), p, q))
    return out
