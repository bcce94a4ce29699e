import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from biharmonic_sasakian.hopf import (
    HopfVerdict,
    SingularSpectrumError,
    TakagiHypersurface,
    closed_form_roots,
    cmc_criterion,
    cmc_rhs,
    discriminant,
    existence_threshold,
    hopf3_criterion,
    mean_curvature_of_tan2u,
    norm_B_sq_of_tan2u,
    numeric_threshold,
    other_type_verdict,
    quadratic_coefficients,
    quadratic_roots,
    scan_grid,
    scan_rows,
    solve_biharmonic_u,
    spectrum,
)


def _vector_excess(kind, u, c, n, p=None, q=None):
    """‖B̄‖² - rhs straight from the principal curvatures, vectorised over u."""
    r = 2.0 / math.sqrt(c + 3.0)
    cot, tan = np.cos(u) / np.sin(u), np.tan(u)
    a = 2.0 * np.cos(2 * u) / (r * np.sin(2 * u))
    if kind == "A1":
        nb = (2 * n - 2) * (cot / r) ** 2 + a**2
    else:
        nb = 2 * p * (tan / r) ** 2 + 2 * q * (cot / r) ** 2 + a**2
    return nb - cmc_rhs(c, n)


def _draw(rng):
    kind = "A1" if rng.random() < 0.5 else "A2"
    if kind == "A1":
        n, p, q = int(rng.integers(2, 9)), None, None
    else:
        n = int(rng.integers(3, 9))
        p = int(rng.integers(1, n - 1))
        q = n - 1 - p
    c = existence_threshold(kind, n, p, q) + rng.uniform(1e-3, 10.0)
    return kind, c, n, p, q


# --- hypersurface and spectrum ---------------------------------------------------


def test_radius():
    for c in (-2.5, 0.0, 1.0, 7.0):
        h = TakagiHypersurface("A1", 0.4, 2, c)
        assert h.r > 0 and abs(h.r**2 * (c + 3) / 4 - 1) < 1e-14


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="A2", u=0.3, n=4, c=1.0, p=1, q=1),
        dict(kind="A2", u=0.3, n=3, c=1.0, p=0, q=2),
        dict(kind="A1", u=0.3, n=1, c=1.0),
        dict(kind="A1", u=0.3, n=2, c=-3.0),
        dict(kind="B", u=0.3, n=2, c=1.0),
    ],
)
def test_invalid_hypersurfaces(kwargs):
    with pytest.raises(ValueError):
        TakagiHypersurface(**kwargs)


@pytest.mark.parametrize("u", [0.0, math.pi / 2, -0.1])
def test_singular_spectrum(u):
    with pytest.raises(SingularSpectrumError):
        TakagiHypersurface("A1", u, 2, 1.0)


def test_spectrum_a1_example():
    sp = spectrum(TakagiHypersurface("A1", math.pi / 4, 2, 1.0))
    (l2, m2), (a, ma) = sp.curvatures
    assert (l2, m2, ma) == (pytest.approx(1.0), 2, 1)
    assert a == pytest.approx(0.0, abs=1e-15)
    assert sp.norm_B_sq == pytest.approx(2.0, abs=1e-14)
    assert sp.mean_curvature == pytest.approx(2 / 3, abs=1e-14)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_a1_minimal_at_2n_minus_1(n):
    h = TakagiHypersurface.from_tan2u("A1", 2 * n - 1, n, 1.0)
    assert abs(spectrum(h).mean_curvature) < 1e-12
    # oracle: numeric zero of (2n-2)cot u + 2cot 2u
    u0 = brentq(lambda u: (2 * n - 2) / math.tan(u) + 2 / math.tan(2 * u), 0.5, math.pi / 2 - 1e-6)
    assert math.tan(u0) ** 2 == pytest.approx(2 * n - 1, rel=1e-10)


@given(p=st.integers(1, 6), c=st.floats(-2.9, 20.0))
def test_a2_symmetric_minimal(p, c):
    # exact in t = tan²u = 1; float π/4 is off by an ulp, so the trig form is 1e-16
    assert mean_curvature_of_tan2u("A2", 1.0, c, 2 * p + 1, p, p) == 0.0
    sp = spectrum(TakagiHypersurface("A2", math.pi / 4, 2 * p + 1, c, p, p))
    assert abs(sp.mean_curvature) < 1e-15


@given(
    kind=st.sampled_from(["A1", "A2"]),
    u=st.floats(0.01, math.pi / 2 - 0.01),
    c=st.floats(-2.9, 20.0),
    n=st.integers(3, 9),
    data=st.data(),
)
def test_spectrum_bookkeeping(kind, u, c, n, data):
    p = q = None
    if kind == "A2":
        p = data.draw(st.integers(1, n - 2))
        q = n - 1 - p
    sp = spectrum(TakagiHypersurface(kind, u, n, c, p, q))
    assert sum(m for _, m in sp.curvatures) == 2 * n - 1 == sp.dim
    nb = sum(m * lam**2 for lam, m in sp.curvatures)
    assert abs(sp.norm_B_sq - nb) <= 1e-12 * max(1.0, nb)
    assert abs(sp.mean_curvature - sum(m * lam for lam, m in sp.curvatures) / (2 * n - 1)) <= 1e-12 * max(1.0, nb)
    # the rational form in t = tan²u agrees with the trigonometric one
    t = math.tan(u) ** 2
    assert norm_B_sq_of_tan2u(kind, t, c, n, p, q) == pytest.approx(sp.norm_B_sq, rel=1e-10)
    assert mean_curvature_of_tan2u(kind, t, c, n, p, q) == pytest.approx(sp.mean_curvature, rel=1e-9, abs=1e-12)


# --- CMC criterion ----------------------------------------------------------------


def test_cmc_examples():
    assert cmc_criterion(1.0, 2, 2.0).satisfied
    for n in range(2, 7):
        res = cmc_criterion(-3.0, n, 1.0)
        assert res.rhs == -4.0 and not res.satisfied
        c0 = (5 - 3 * n) / (n + 1)
        assert cmc_rhs(c0, n) == pytest.approx(0.0, abs=1e-14)
        assert not cmc_criterion(c0, n, 0.0).satisfied


# --- roots --------------------------------------------------------------------------


def test_a1_c1_n2_roots():
    sol = solve_biharmonic_u("A1", 1.0, 2)
    by_t = {round(r.tan2u, 12): r for r in sol.roots}
    assert set(by_t) == {1.0, 3.0}
    assert by_t[1.0].verdict is HopfVerdict.PROPER_BIHARMONIC
    assert by_t[3.0].verdict is HopfVerdict.MINIMAL and "excluded" in by_t[3.0].note
    assert norm_B_sq_of_tan2u("A1", 1.0, 1.0, 2) == 2.0 == cmc_rhs(1.0, 2)


@pytest.mark.parametrize("n", range(2, 8))
def test_a1_c1_discriminant(n):
    assert discriminant("A1", 1.0, n) == pytest.approx(16 * (n - 1) ** 2, abs=1e-12)
    assert sorted(closed_form_roots("A1", 1.0, n)) == pytest.approx([1.0, 2 * n - 1], abs=1e-12)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_a2_c1_symmetric(p):
    sol = solve_biharmonic_u("A2", 1.0, p=p, q=p)
    assert sol.n == 2 * p + 1
    assert sol.proper_roots == ()
    assert all(r.tan2u == pytest.approx(1.0, abs=1e-7) for r in sol.roots)
    assert all(abs(r.H) < 1e-9 and "p = q" in r.note for r in sol.roots)


def test_a2_c1_asymmetric():
    sol = solve_biharmonic_u("A2", 1.0, p=1, q=2)
    ts = sorted(r.tan2u for r in sol.roots)
    assert ts == pytest.approx([1.0, 5 / 3], abs=1e-12)
    proper = [r for r in sol.roots if r.verdict is HopfVerdict.PROPER_BIHARMONIC]
    assert [round(r.tan2u, 12) for r in proper] == [1.0]


def test_c1_sphere_identification():
    r = [x for x in solve_biharmonic_u("A1", 1.0, 3).roots if abs(x.tan2u - 1) < 1e-12][0]
    assert math.cos(r.u) == pytest.approx(1 / math.sqrt(2), abs=1e-14)
    assert math.sin(r.u) == pytest.approx(1 / math.sqrt(2), abs=1e-14)


def test_quadratic_roots_stable():
    assert quadratic_roots(1.0, -3.0, 2.0) == pytest.approx((1.0, 2.0))
    small = quadratic_roots(1.0, -1e8, 1.0)
    assert min(small) == pytest.approx(1e-8, rel=1e-12)
    assert quadratic_roots(1.0, 0.0, 1.0) == ()


def _published_roots(kind, c, n, p=None, q=None):
    """Root formulas typed in directly as an oracle."""
    if kind == "A1":
        d = c * c * (n * n + 2 * n + 5) + 2 * c * (3 * n * n - 2 * n - 1) + 9 * n * n - 30 * n + 13
        if d < 0:
            return []
        base = n + (2 * c - 2) / (c + 3)
        return [base - math.sqrt(d) / (c + 3), base + math.sqrt(d) / (c + 3)]
    k, d2 = 2 * p + 1, (p - q) ** 2
    d = c * c * (d2 + 4 * n + 4) + 2 * c * (3 * d2 + 4 * n - 4) + 9 * d2 - 12 * n + 4
    if d < 0:
        return []
    base = n / k + (2 * c - 2) / ((c + 3) * k)
    return [base - math.sqrt(d) / ((c + 3) * k), base + math.sqrt(d) / ((c + 3) * k)]


@pytest.mark.parametrize("seed", range(200))
def test_random_draws(seed):
    rng = np.random.default_rng(seed)
    kind, c, n, p, q = _draw(rng)
    sol = solve_biharmonic_u(kind, c, n, p, q)
    assert len(sol.roots) == 2
    assert sol.closed_form_rel_err is not None and sol.closed_form_rel_err < 1e-12
    oracle = sorted(t for t in _published_roots(kind, c, n, p, q) if t > 0)
    assert sorted(r.tan2u for r in sol.roots) == pytest.approx(oracle, rel=1e-12)
    for r in sol.roots:
        sp = spectrum(TakagiHypersurface.from_tan2u(kind, r.tan2u, n, c, p, q))
        assert cmc_criterion(c, n, sp.norm_B_sq, tol=1e-8 * max(1.0, sp.norm_B_sq)).residual < 1e-8 * max(
            1.0, sp.norm_B_sq
        )


@pytest.mark.parametrize("seed", range(200))
def test_brute_force_grid(seed):
    rng = np.random.default_rng(1000 + seed)
    kind, c, n, p, q = _draw(rng)
    sol = solve_biharmonic_u(kind, c, n, p, q)
    roots = np.array([r.tan2u for r in sol.roots])
    u = np.linspace(0, math.pi / 2, 100_002)[1:-1]
    f = _vector_excess(kind, u, c, n, p, q)
    t = np.tan(u) ** 2
    # grid points satisfying the criterion sit next to a root
    near = t[np.abs(f) < 1e-8]
    for tt in near:
        assert np.abs(roots - tt).min() < 1e-6 * max(1.0, tt)
    # every sign change brackets a returned root, refined independently
    idx = np.nonzero(np.sign(f[:-1]) != np.sign(f[1:]))[0]
    found = [brentq(lambda x: _vector_excess(kind, x, c, n, p, q), u[i], u[i + 1], xtol=1e-15) for i in idx]
    if discriminant(kind, c, n, p, q) > 1e-6:
        assert len(found) == len(roots)
    for u0 in found:
        t0 = math.tan(u0) ** 2
        assert np.abs(roots - t0).min() < 1e-6 * max(1.0, t0)


# --- thresholds and non-existence --------------------------------------------------------


def test_threshold_a1_n2():
    assert existence_threshold("A1", 2) == pytest.approx((-7 + 8 * math.sqrt(3)) / 13, abs=1e-15)
    assert existence_threshold("A1", 2) == pytest.approx(0.5274, abs=1e-4)


@pytest.mark.parametrize("p", [1, 2, 4])
def test_threshold_a2_symmetric(p):
    thr = existence_threshold("A2", p=p, q=p)
    assert thr == pytest.approx(1.0, abs=1e-14)
    assert abs(thr - numeric_threshold("A2", p=p, q=p)) < 1e-9


@pytest.mark.parametrize("n", range(2, 11))
def test_threshold_a1_range(n):
    thr = existence_threshold("A1", n)
    assert math.isfinite(thr) and thr < 1
    assert abs(thr - numeric_threshold("A1", n)) < 1e-9
    assert abs(discriminant("A1", thr, n)) < 1e-9


@pytest.mark.parametrize("pq", [(1, 2), (2, 1), (1, 4), (3, 5)])
def test_threshold_a2(pq):
    p, q = pq
    thr = existence_threshold("A2", p=p, q=q)
    assert abs(thr - numeric_threshold("A2", p=p, q=q)) < 1e-9
    assert solve_biharmonic_u("A2", thr - 1e-3, p=p, q=q).roots == ()
    assert len(solve_biharmonic_u("A2", thr + 1e-3, p=p, q=q).roots) == 2


@pytest.mark.parametrize("n", range(2, 7))
def test_non_existence(n):
    c0 = (5 - 3 * n) / (n + 1)
    for c in (c0, c0 - 0.3, -3.0, -2.999):
        assert cmc_rhs(c, n) <= 0 + 1e-15
        assert not cmc_criterion(c, n, 1.0).satisfied
        assert solve_biharmonic_u("A1", c, n).roots == ()
        if n >= 3:
            assert solve_biharmonic_u("A2", c, n, 1, n - 2).roots == ()


def test_quadratic_coefficients_reproduce_norm():
    kind, c, n = "A1", 2.3, 4
    A, B, C = quadratic_coefficients(kind, c, n)
    # A t² + B t + C is proportional to t (‖B̄‖² - rhs)
    ratios = []
    for t in (0.3, 1.7, 5.0):
        lhs = A * t * t + B * t + C
        ratios.append(lhs / (t * (norm_B_sq_of_tan2u(kind, t, c, n) - cmc_rhs(c, n))))
    assert np.ptp(ratios) < 1e-12 * abs(ratios[0])


# --- dimension three and other types -----------------------------------------------------


def test_hopf3():
    assert hopf3_criterion(5.0, 2.0).verdict is HopfVerdict.PROPER_BIHARMONIC
    assert hopf3_criterion(5.0, 1.0).verdict is HopfVerdict.NOT_PROPER_BIHARMONIC
    for c in (1.0, 0.0, -2.0):
        for k in (0.0, 0.5, 2.0):
            assert hopf3_criterion(c, k).verdict is HopfVerdict.MINIMAL_ONLY


@given(c=st.floats(1.0001, 50.0))
def test_hopf3_accepts_exact_curvature(c):
    assert hopf3_criterion(c, math.sqrt(c - 1)).verdict is HopfVerdict.PROPER_BIHARMONIC


def test_other_types():
    for k in "BCDE":
        assert other_type_verdict(k)["verdict"] == "Unverified"
    with pytest.raises(ValueError):
        other_type_verdict("A1")


# --- scans -------------------------------------------------------------------------------


def test_scan_grid_order():
    grid = scan_grid(["A1", "A2"], [2, 4], [0.0, 1.0])
    assert grid[0] == ("A1", 0.0, 2, None, None)
    assert ("A2", 1.0, 4, 2, 1) in grid
    assert not any(k == "A2" and n == 2 for k, _, n, _, _ in grid)


def test_scan_rows():
    rows = scan_rows("A1", 1.0, 2)
    assert [r["verdict"] for r in rows] == ["ProperBiharmonic", "Minimal"] or [r["verdict"] for r in rows] == [
        "Minimal",
        "ProperBiharmonic",
    ]
    empty = scan_rows("A1", -2.0, 2)
    assert len(empty) == 1 and empty[0]["tan2u"] is None and empty[0]["verdict"] == "None"
