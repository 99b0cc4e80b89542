"""Independent reference values for the unit tests (mpmath / shapely, no project code).

Run: python3 tests/oracles/compute_oracles.py
"""

import math

import mpmath as mp
from shapely.geometry import LineString, Polygon

mp.mp.dps = 30


def runs(poly, x, theta, far=100.0):
    """In-body parameter intervals along the ray x + t(cos, sin)."""
    u = (math.cos(theta), math.sin(theta))
    seg = LineString([x, (x[0] + far * u[0], x[1] + far * u[1])])
    inter = poly.intersection(seg)
    parts = [inter] if inter.geom_type == "LineString" else list(getattr(inter, "geoms", []))
    out = []
    for g in parts:
        if g.geom_type != "LineString" or g.length == 0:
            continue
        ts = sorted(math.hypot(p[0] - x[0], p[1] - x[1]) for p in g.coords)
        out.append((ts[0], ts[-1]))
    return sorted(out)


def renorm_2d(poly, x, alpha, breaks):
    """Finite part in the plane from ray runs: alpha=0 sums log out - log in, else (out^a - in^a)/a."""

    def ray(theta):
        s = 0.0
        for t0, t1 in runs(poly, x, float(theta)):
            if alpha == 0:
                s += math.log(t1) - (math.log(t0) if t0 > 1e-12 else 0.0)
            else:
                s += (t1 ** alpha - (t0 ** alpha if t0 > 1e-12 else 0.0)) / alpha
        return s

    return mp.quad(ray, breaks)


def vertex_breaks(verts, x):
    angs = sorted(math.atan2(v[1] - x[1], v[0] - x[0]) % (2 * math.pi) for v in verts)
    return [angs[-1] - 2 * math.pi] + angs


def main():
    disc_x = (0.3, 0.2)
    r2 = disc_x[0] ** 2 + disc_x[1] ** 2

    def rho(t):
        d = disc_x[0] * mp.cos(t) + disc_x[1] * mp.sin(t)
        return -d + mp.sqrt(1 - r2 + d * d)

    print("disc renormalized alpha=-1 at (0.3,0.2):", mp.nstr(-mp.quad(lambda t: 1 / rho(t), [0, 2 * mp.pi]), 17))
    print("disc renormalized alpha=0 at (0.3,0.2):", mp.nstr(mp.quad(lambda t: mp.log(rho(t)), [0, 2 * mp.pi]), 17))

    h, x = mp.mpf("0.5"), (mp.mpf("0.2"), mp.mpf("0.1"))
    P = h / (2 * mp.pi) * mp.quad(lambda a, b: ((a - x[0]) ** 2 + (b - x[1]) ** 2 + h * h) ** (-1.5), [-1, 1], [-1, 1])
    print("square Poisson h=0.5 at (0.2,0.1):", mp.nstr(P, 17))

    t = mp.mpf("0.05")
    W = 1
    for xi in x:
        W *= (mp.erf((1 - xi) / (2 * mp.sqrt(t))) + mp.erf((1 + xi) / (2 * mp.sqrt(t)))) / 2
    print("square heat t=0.05 at (0.2,0.1):", mp.nstr(W, 17))

    print("square Riesz alpha=1 at 0:", mp.nstr(8 * mp.log(1 + mp.sqrt(2)), 17))

    tri = [(0.0, 0.0), (4.0, 0.0), (1.0, 1.0)]
    poly = Polygon(tri)
    xt = (1.5, 0.3)
    print("triangle renormalized alpha=0 at (1.5,0.3):", mp.nstr(renorm_2d(poly, xt, 0, vertex_breaks(tri, xt)), 15))
    print("triangle renormalized alpha=-1 at (1.5,0.3):", mp.nstr(renorm_2d(poly, xt, -1, vertex_breaks(tri, xt)), 15))

    # Planar dumbbell profile: two unit squares' worth of discs replaced by the 12-vertex profile.
    e = 0.2
    db = [(-3, -1), (-1, -1), (-1, -e), (1, -e), (1, -1), (3, -1), (3, 1), (1, 1), (1, e), (-1, e), (-1, 1), (-3, 1)]
    xd = (1.9, 0.0)
    print("dumbbell(0.2) renormalized alpha=-1 at (1.9,0):",
          mp.nstr(renorm_2d(Polygon(db), xd, -1, vertex_breaks(db, xd)), 15))

    s3 = 4 * mp.pi
    print("3D unit ball Riesz alpha=1 at 0:", mp.nstr(s3, 17))
    print("3D ball radius 2 renormalized alpha=-1 at 0:", mp.nstr(-s3 / 2, 17))

    # E(R) closed form root for m=2, alpha=-1, kappa=pi, delta=inf, D=6, R0=1.
    def f(R):
        D, R0 = 6, 1
        phi = mp.acos(R / D)
        return mp.sin(phi) + (R / D) * (mp.pi - phi) - (R / R0) * mp.pi

    print("closed-form root D=6 R0=1 m=2:", mp.nstr(mp.findroot(f, 0.35), 17))


if __name__ == "__main__":
    main()
