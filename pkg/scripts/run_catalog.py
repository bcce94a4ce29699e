"""Build the reference curve catalog, verify each member and print a verdict table.

    python scripts/run_catalog.py [--out catalog.json]
"""
import argparse
import math

from biharmonic_sasakian.bitension import verdict
from biharmonic_sasakian.classify import classify, order4_profile
from biharmonic_sasakian.constructors import case_curve, circle_curve, helix_curve, legendre_geodesic
from biharmonic_sasakian.curves import frenet
from biharmonic_sasakian.io import write_json
from biharmonic_sasakian.models import deformed_sphere_for


def catalog(length: float):
    yield "geodesic S^5", 1.0, legendre_geodesic(2)
    yield "circle S^5", 1.0, circle_curve(2)
    for k in (0.2, 0.4, 0.6, 0.8):
        yield f"helix S^5 kappa1={k}", 1.0, helix_curve(2, k)
    for c in (-1.0, 2.0, 5.0):
        m = deformed_sphere_for(c)
        yield f"circle c={c:g}", c, case_curve(m, "circle", [math.sqrt((c + 3) / 4)], length=length)
        if c > 1:
            yield f"case III c={c:g}", c, case_curve(m, "III", [math.sqrt(c - 1), 1.0], length=length)
    c = 3.0
    prof = order4_profile(c)
    for b in prof.branches:
        m = deformed_sphere_for(c)
        yield f"order4 c=3 {b.sign}", c, case_curve(m, "IV", list(prof.kappas), length=length, alpha0=b.alpha0)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--length", type=float, default=2.0, help="arc length of integrated curves")
    ap.add_argument("--out", help="write the table as JSON here")
    args = ap.parse_args(argv)

    rows = []
    print(f"{'curve':28s} {'case':>6s} {'class':>22s} {'verdict':>16s} {'direct':>10s} {'frenet':>10s}")
    for name, c, curve in catalog(args.length):
        fd = frenet(curve)
        cv = classify(c, fd)
        rep = verdict(curve, fd=fd)
        rows.append({"curve": name, "c": c, "case": cv.case.value, "classification": cv.verdict.value,
                     "verdict": rep.verdict.value, "direct_max": rep.bitension_direct_max,
                     "frenet_max": rep.bitension_frenet_max})
        print(f"{name:28s} {cv.case.value:>6s} {cv.verdict.value:>22s} {rep.verdict.value:>16s} "
              f"{rep.bitension_direct_max:10.2e} {rep.bitension_frenet_max:10.2e}")
    if args.out:
        write_json(args.out, rows)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
