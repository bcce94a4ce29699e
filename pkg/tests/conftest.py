import math

import numpy as np
import pytest

from biharmonic_sasakian.constructors import case_curve, circle_curve, helix_curve, legendre_circle, legendre_geodesic
from biharmonic_sasakian.models import DeformedSphere, FlatSasakian, UnitSphere, deformed_sphere_for

ALL_MODELS = [UnitSphere(2), DeformedSphere(2, 0.5), DeformedSphere(2, 2.0), FlatSasakian(2)]


def model_id(m):
    return f"{m.kind}(c={m.c:g})"


@pytest.fixture(params=ALL_MODELS, ids=model_id)
def model(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def explicit_circle():
    return circle_curve(2)


@pytest.fixture(scope="session")
def helix06():
    return helix_curve(2, 0.6)


@pytest.fixture(scope="session")
def small_circle():
    return legendre_circle(2, 0.5)


@pytest.fixture(scope="session")
def geodesic():
    return legendre_geodesic(2)


@pytest.fixture(scope="session")
def case3_c5():
    return case_curve(deformed_sphere_for(5.0), "III", [2.0, 1.0], length=4.0)


@pytest.fixture(scope="session")
def case3_c5_perturbed():
    return case_curve(deformed_sphere_for(5.0), "III", [2.1, 1.0], length=4.0)


@pytest.fixture(scope="session")
def order4_c3():
    from biharmonic_sasakian.classify import order4_profile

    prof = order4_profile(3.0)
    return {
        b.sign: case_curve(deformed_sphere_for(3.0), "IV", list(prof.kappas), length=4.0, alpha0=b.alpha0)
        for b in prof.branches
    }




def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
