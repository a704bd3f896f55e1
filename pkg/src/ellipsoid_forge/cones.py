"""Support cones, grazes, shadow boundaries, and cone-level predicates.

The sampling strategy throughout: reduce to 2-planes through a distinguished
axis (apex-to-center, illumination axis, or apex-to-apex line) and locate the
in-plane tangency by sign change of g = <x - p, nu(p)> along the section
boundary. For a smooth strictly convex section viewed from an in-plane
exterior point, the visible arc is connected, so g changes sign exactly once
per side and brentq is safe.
"""

import json

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import (
    ApexInsideBody,
    CoincidentApexes,
    DegenerateCone,
    LineMissesBody,
    NonSmoothBody,
    NotEllipsoidal,
    RayNotInterior,
)
from .fitting import ELLIPSE, fit_planar_conic
from .numeric import angle_between, normalize, unit_frame
from .projective import Hyperplane, Line


class CurveSample:
    """Ordered point cloud sampled from a closed curve, with residuals."""

    def __init__(self, points, residuals, meta):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[0] < 3:
            raise ValueError("curve sample needs at least 3 points")
        steps = np.linalg.norm(np.diff(points, axis=0), axis=1)
        if steps.min() <= 0.0:
            raise ValueError("consecutive sample points must be distinct")
        self.points = points
        self.residuals = np.asarray(residuals, dtype=float)
        self.meta = dict(meta)

    def __len__(self):
        return self.points.shape[0]

    @property
    def max_residual(self):
        return float(self.residuals.max())


class SupportCone:
    """Cone generated from an exterior apex over a body, held by samples."""

    def __init__(self, apex, body, contact):
        self.apex = np.asarray(apex, dtype=float)
        self.body = body
        self.contact = contact
        diffs = contact.points - self.apex
        self.generator_dirs = diffs / np.linalg.norm(diffs, axis=1)[:, None]

    @property
    def mean_generator(self):
        return normalize(self.generator_dirs.mean(axis=0))


def _require_smooth(body):
    if not body.is_smooth:
        raise NonSmoothBody(
            "tangency sweeps need a smooth body; got kind %r" % body.kind)


def _sweep_angles(m, seed):
    # tiny seeded phase so axis-aligned coordinate flats are never hit exactly
    rng = np.random.default_rng(seed)
    phi0 = rng.uniform(0.0, 2.0 * np.pi / max(m, 1))
    return phi0 + 2.0 * np.pi * np.arange(m) / m


def _ray_boundary(body, base, d):
    if np.linalg.norm(base - body.center) <= 1e-13 * (1.0 + body.diameter()):
        return body.boundary_from_center(d)
    return body.boundary_point(base, d)


def _plane_tangent_point(body, apex, base, e, v, lo, hi):
    """Tangent point of the section in the 2-plane span(e,v) through base.

    The section boundary is gamma(phi) = boundary point from base along
    cos(phi) e + sin(phi) v; the root of <apex - gamma, nu(gamma)> in
    (lo, hi) is the in-plane (equivalently full) tangency.
    """
    def g(phi):
        p = _ray_boundary(body, base, np.cos(phi) * e + np.sin(phi) * v)
        return float((apex - p) @ body.normal_at(p))

    phi = brentq(g, lo, hi, xtol=1e-14, rtol=8.9e-16)
    return _ray_boundary(body, base, np.cos(phi) * e + np.sin(phi) * v)


def graze(body, apex, m=200, seed=0):
    """Contact curve of the support cone: points of bd L whose tangent
    hyperplane passes through the apex. Ordered by sweep angle about the
    apex-center axis."""
    _require_smooth(body)
    apex = np.asarray(apex, dtype=float)
    if body.gauge(apex) <= 1.0 + 1e-9:
        raise ApexInsideBody("apex gauge %.9f" % body.gauge(apex))
    c = body.center
    e = normalize(apex - c)
    frame = unit_frame(e)
    w1, w2 = frame[:, 0], frame[:, 1]
    angles = _sweep_angles(m, seed)
    pts = np.empty((m, body.dim))
    res = np.empty(m)
    for j, th in enumerate(angles):
        v = np.cos(th) * w1 + np.sin(th) * w2
        # g(0) > 0 and g(pi) < 0: the ray from the center toward the apex
        # exits through a point whose normal has positive axis component
        p = _plane_tangent_point(body, apex, c, e, v, 0.0, np.pi)
        pts[j] = p
        res[j] = abs(float((apex - p) @ body.normal_at(p))) / np.linalg.norm(apex - p)
    meta = {
        "curve": "graze",
        "body": body.body_id(),
        "apex": [float(t) for t in apex],
        "m": int(m),
        "seed": int(seed),
        "axis_point": [float(t) for t in c],
        "axis_dir": [float(t) for t in e],
        "frame": [[float(t) for t in w1], [float(t) for t in w2]],
        "angles": [float(t) for t in angles],
    }
    return CurveSample(pts, res, meta)


def support_cone(body, apex, m=200, seed=0):
    return SupportCone(apex, body, graze(body, apex, m=m, seed=seed))


def shadow_boundary(body, direction, m=200, seed=0):
    """Contact curve of the circumscribed cylinder: boundary points whose
    outer normal is orthogonal to the illumination direction."""
    _require_smooth(body)
    u = normalize(direction)
    c = body.center
    frame = unit_frame(u)
    w1, w2 = frame[:, 0], frame[:, 1]
    angles = _sweep_angles(m, seed)
    pts = np.empty((m, body.dim))
    res = np.empty(m)
    for j, th in enumerate(angles):
        v = np.cos(th) * w1 + np.sin(th) * w2

        def g(phi):
            p = _ray_boundary(body, c, np.cos(phi) * u + np.sin(phi) * v)
            return float(u @ body.normal_at(p))

        phi = brentq(g, 0.0, np.pi, xtol=1e-14, rtol=8.9e-16)
        p = _ray_boundary(body, c, np.cos(phi) * u + np.sin(phi) * v)
        pts[j] = p
        res[j] = abs(float(u @ body.normal_at(p)))
    meta = {
        "curve": "shadow",
        "body": body.body_id(),
        "direction": [float(t) for t in u],
        "m": int(m),
        "seed": int(seed),
        "axis_point": [float(t) for t in c],
        "axis_dir": [float(t) for t in u],
        "frame": [[float(t) for t in w1], [float(t) for t in w2]],
        "angles": [float(t) for t in angles],
    }
    return CurveSample(pts, res, meta)


def _line_deep_point(body, line):
    """Gauge-minimizing point of a line, snapped to the body center when the
    line passes through it (keeps reflection symmetries bit-exact)."""
    t_c = float((body.center - line.point) @ line.direction)
    if np.linalg.norm(line.at(t_c) - body.center) <= 1e-9 * body.diameter():
        if body.gauge(line.at(t_c)) < 1.0 - 1e-9:
            return line.at(t_c)
    span = float(np.linalg.norm(line.point - body.center)) + body.radius_bound()
    g = lambda t: body.gauge(line.at(t))
    r = minimize_scalar(g, bounds=(-span, span), method="bounded",
                        options={"xatol": 1e-12 * (1.0 + span)})
    if float(r.fun) >= 1.0 - 1e-9:
        raise LineMissesBody("minimum gauge along the line is %.9f" % float(r.fun))
    return line.at(float(r.x))


def cone_intersection(body, x, y, m=200, seed=0):
    """Sampled intersection curve of the two support-cone boundaries from
    apexes x and y. Requires the apex line to cross the body interior so that
    every sweep plane through it sections the body."""
    _require_smooth(body)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    diam = body.diameter()
    if np.linalg.norm(x - y) <= 1e-9 * diam:
        raise CoincidentApexes("apexes are %.3e apart" % np.linalg.norm(x - y))
    for apex in (x, y):
        if body.gauge(apex) <= 1.0 + 1e-9:
            raise ApexInsideBody("apex gauge %.9f" % body.gauge(apex))
    e = normalize(y - x)
    base = _line_deep_point(body, Line(x, e))
    frame = unit_frame(e)
    w1, w2 = frame[:, 0], frame[:, 1]
    angles = _sweep_angles(m, seed)
    pts = np.empty((m, body.dim))
    res = np.empty(m)
    for j, th in enumerate(angles):
        v = np.cos(th) * w1 + np.sin(th) * w2
        # apex y lies on the +e side of base, apex x on the -e side
        py = _plane_tangent_point(body, y, base, e, v, 0.0, np.pi)
        px = _plane_tangent_point(body, x, base, e, v, 0.0, np.pi)
        # intersect the two tangent rays inside the sweep plane
        chart = np.vstack([e, v])
        x2, y2 = chart @ (x - base), chart @ (y - base)
        px2, py2 = chart @ (px - base), chart @ (py - base)
        a_mat = np.column_stack([px2 - x2, -(py2 - y2)])
        det = np.linalg.det(a_mat)
        scale = max(np.linalg.norm(px2 - x2), np.linalg.norm(py2 - y2))
        if abs(det) <= 1e-12 * scale * scale:
            raise DegenerateCone("tangent rays are parallel in sweep plane %d" % j)
        t, s = np.linalg.solve(a_mat, y2 - x2)
        if t <= 0.0 or s <= 0.0:
            raise DegenerateCone("tangent rays meet behind an apex (plane %d)" % j)
        q2 = x2 + t * (px2 - x2)
        q = base + q2[0] * e + q2[1] * v
        tx = abs(float((x - px) @ body.normal_at(px))) / np.linalg.norm(x - px)
        ty = abs(float((y - py) @ body.normal_at(py))) / np.linalg.norm(y - py)
        pts[j] = q
        res[j] = max(tx, ty)
    meta = {
        "curve": "cone-intersection",
        "body": body.body_id(),
        "apexes": [[float(t) for t in x], [float(t) for t in y]],
        "m": int(m),
        "seed": int(seed),
        "axis_point": [float(t) for t in base],
        "axis_dir": [float(t) for t in e],
        "frame": [[float(t) for t in w1], [float(t) for t in w2]],
        "angles": [float(t) for t in angles],
    }
    return CurveSample(pts, res, meta)


def _bounded_section_points(cone, normal, dist=1.0, min_cos=0.05):
    g = cone.generator_dirs
    proj = g @ normal
    if proj.min() <= min_cos:
        return None
    t = dist / proj
    return cone.apex + t[:, None] * g


def is_ellipsoidal_cone(cone, tol=1e-6, seed=0):
    """Fit a conic to a bounded hyper-section of the cone; the verdict must
    not depend on the section, so 3 tilted sections are re-tested and the
    worst residual is reported."""
    if cone.apex.shape[0] != 3:
        raise NotImplementedError("cone sectioning is implemented for dimension 3")
    w = cone.mean_generator
    pts = _bounded_section_points(cone, w)
    if pts is None:
        raise DegenerateCone("no bounded section orthogonal to the mean generator")
    plane = Hyperplane.from_point_normal(cone.apex + w, w)
    base_fit = fit_planar_conic(pts, plane)
    rng = np.random.default_rng(seed)
    all_ellipse = base_fit.classification == ELLIPSE and base_fit.rms_residual < tol
    worst = base_fit.rms_residual
    alt_rms = []
    for _ in range(3):
        tilt = 0.3
        for _attempt in range(6):
            xi = rng.standard_normal(3)
            xi -= (xi @ w) * w
            nrm = np.linalg.norm(xi)
            if nrm < 1e-12:
                continue
            w_alt = normalize(w + tilt * xi / nrm)
            pts_alt = _bounded_section_points(cone, w_alt)
            if pts_alt is not None:
                break
            tilt *= 0.5
        else:
            raise DegenerateCone("no bounded tilted section found")
        plane_alt = Hyperplane.from_point_normal(cone.apex + w_alt, w_alt)
        fit_alt = fit_planar_conic(pts_alt, plane_alt)
        alt_rms.append(fit_alt.rms_residual)
        worst = max(worst, fit_alt.rms_residual)
        if fit_alt.classification != ELLIPSE or fit_alt.rms_residual >= tol:
            all_ellipse = False
    base_fit.detail["alt_rms"] = alt_rms
    base_fit.detail["max_rms"] = worst
    base_fit.detail["ellipsoidal"] = bool(all_ellipse)
    base_fit.detail["tol"] = tol
    return base_fit


def _conic_matrix(coeffs):
    a, b, c, d, e, f = coeffs
    return np.array([
        [a, b / 2.0, d / 2.0],
        [b / 2.0, c, e / 2.0],
        [d / 2.0, e / 2.0, f],
    ])


def centered_section(cone, ray, tol=1e-6, seed=0):
    """Hyperplane whose section of the cone is an ellipse centered on the ray.

    Construction: in a bounded reference section, take the polar line of the
    ray's trace with respect to the section conic, span it with the apex, and
    return the parallel hyperplane through the trace. A polar line at
    infinity (ray through the conic center) degenerates to the plane parallel
    to the reference section.
    """
    fit = is_ellipsoidal_cone(cone, tol=tol, seed=seed)
    if not fit.detail["ellipsoidal"]:
        raise NotEllipsoidal("max section rms %.3e" % fit.detail["max_rms"])
    apex = cone.apex
    if np.linalg.norm(np.cross(ray.direction, ray.point - apex)) > 1e-9 * (
            1.0 + np.linalg.norm(ray.point - apex)):
        raise RayNotInterior("ray does not pass through the apex")
    w = cone.mean_generator
    d = ray.direction if ray.direction @ w > 0 else -ray.direction
    if d @ w <= 1e-9:
        raise RayNotInterior("ray direction is orthogonal to the cone opening")
    p = apex + d / (d @ w)  # trace on the reference section plane
    mu, scale = fit.detail["mu"], fit.detail["scale"]
    origin, basis = fit.detail["chart_origin"], fit.detail["chart_basis"]
    p_hat = (basis.T @ (p - origin) - mu) / scale
    conic = _conic_matrix(fit.model)
    value_p = float(np.array([*p_hat, 1.0]) @ conic @ np.array([*p_hat, 1.0]))
    center_hat = (np.asarray(fit.detail["center"]) - mu) / scale
    value_c = float(np.array([*center_hat, 1.0]) @ conic @ np.array([*center_hat, 1.0]))
    if not (value_p * value_c > 0.0 and abs(value_p) > 1e-9 * abs(value_c)):
        raise RayNotInterior("ray trace is not interior to the section conic")
    line = conic @ np.array([p_hat[0], p_hat[1], 1.0])
    l2 = np.hypot(line[0], line[1])
    if l2 <= 1e-9 * abs(line[2]):
        # polar of the conic center: section is already centered on the ray
        return Hyperplane.from_point_normal(p, w)
    foot_hat = -line[2] * line[:2] / (l2 * l2)
    dir_hat = np.array([-line[1], line[0]]) / l2
    z1_hat, z2_hat = foot_hat, foot_hat + dir_hat
    z1 = origin + basis @ (mu + scale * z1_hat)
    z2 = origin + basis @ (mu + scale * z2_hat)
    n_gamma = normalize(np.cross(z1 - apex, z2 - apex))
    return Hyperplane.from_point_normal(p, n_gamma)


def is_symmetric_cone(cone, axis, k=64, tol=1e-7, seed=0):
    """Does the axis bisect every 2-plane angular section through it?

    Returns (verdict, max bisector residual in radians).
    """
    body = cone.body
    _require_smooth(body)
    apex = cone.apex
    if np.linalg.norm(np.cross(axis.direction, axis.point - apex)) > 1e-9 * (
            1.0 + np.linalg.norm(axis.point - apex)):
        raise RayNotInterior("axis does not pass through the apex")
    a = axis.direction
    if a @ cone.mean_generator < 0:
        a = -a
    span = float(np.linalg.norm(apex - body.center)) + body.radius_bound()
    g = lambda t: body.gauge(apex + t * a)
    r = minimize_scalar(g, bounds=(0.0, span), method="bounded",
                        options={"xatol": 1e-12 * (1.0 + span)})
    if float(r.fun) >= 1.0 - 1e-9:
        raise RayNotInterior("axis ray misses the body interior")
    base = apex + float(r.x) * a
    frame = unit_frame(a)
    w1, w2 = frame[:, 0], frame[:, 1]
    worst = 0.0
    for th in _sweep_angles(k, seed):
        v = np.cos(th) * w1 + np.sin(th) * w2
        # apex sits on the -a side of base: g changes sign on each half-turn
        p_plus = _plane_tangent_point(body, apex, base, a, v, 0.0, np.pi)
        p_minus = _plane_tangent_point(body, apex, base, a, v, np.pi, 2.0 * np.pi)
        d_plus = normalize(p_plus - apex)
        d_minus = normalize(p_minus - apex)
        worst = max(worst, abs(angle_between(d_plus, a) - angle_between(d_minus, a)))
    return worst <= tol, worst


def write_curve_csv(sample, path):
    """CSV export (x1..xn, residual) with a JSON sidecar for the meta."""
    n = sample.points.shape[1]
    header = ",".join("x%d" % (i + 1) for i in range(n)) + ",residual"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for p, r in zip(sample.points, sample.residuals):
            fh.write(",".join(repr(float(t)) for t in p) + "," + repr(float(r)) + "\n")
    with open(path + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(sample.meta, fh, indent=2)
        fh.write("\n")
