"""Convex bodies exposed through support, gauge, and boundary oracles.

Concrete kinds: ellipsoid, p-ball, polytope, affine image. Higher modules are
kind-agnostic: everything downstream consumes the oracle interface only.
Gauges are Minkowski functionals about each body's designated center, which
makes the center ray boundary solve closed form (1-homogeneity).
"""

import hashlib
import io

import numpy as np
from scipy.optimize import brentq, linprog, minimize_scalar

from .errors import BodySpecError, LineMissesBody, NonSmoothBody
from .numeric import normalize, sphere_directions
from .projective import Line


class ConvexBody:
    """Oracle interface; subclasses fill in the kind-specific pieces."""

    kind = None
    is_smooth = False

    @property
    def dim(self):
        raise NotImplementedError

    @property
    def center(self):
        """A designated interior point; gauges are taken about it."""
        raise NotImplementedError

    def support(self, u):
        """h(u) = sup over the body of <x, u>; u need not be unit."""
        raise NotImplementedError

    def support_point(self, u):
        """An argmax of <x, u> over the body."""
        raise NotImplementedError

    def gauge(self, x):
        """Minkowski functional about the center: 1 on the boundary."""
        raise NotImplementedError

    def normal_at(self, x):
        """Outer unit normal at a boundary point (smooth kinds only)."""
        raise NonSmoothBody("%s has no normal oracle" % self.kind)

    def contains(self, x, tol=1e-10):
        return self.gauge(x) <= 1.0 + tol

    def radius_bound(self):
        """Radius of a ball about the center certainly containing the body."""
        if not hasattr(self, "_radius_bound"):
            dirs = sphere_directions(self.dim, 64, seed=0)
            c = self.center
            r = max(self.support(u) - float(np.dot(c, u)) for u in dirs)
            self._radius_bound = 1.5 * r + 1e-12
        return self._radius_bound

    def diameter(self):
        """Deterministic scale estimate: max sampled width."""
        if not hasattr(self, "_diameter"):
            dirs = sphere_directions(self.dim, 64, seed=0)
            self._diameter = max(
                self.support(u) + self.support(-u) for u in dirs
            )
        return self._diameter

    def boundary_from_center(self, d):
        """Boundary point along the ray center + t*d, t > 0. Closed form."""
        g = self.gauge(self.center + d)
        return self.center + np.asarray(d, dtype=float) / g

    def boundary_point(self, z, d):
        """Boundary point along z + t*d, t > 0, for interior z."""
        z = np.asarray(z, dtype=float)
        d = normalize(d)
        if self.gauge(z) >= 1.0 - 1e-12:
            raise ValueError("ray base point is not interior")
        # body is inside ball(center, R): the exit time is below t_hi
        t_hi = float(np.linalg.norm(z - self.center)) + self.radius_bound()
        f = lambda t: self.gauge(z + t * d) - 1.0
        t = brentq(f, 0.0, t_hi, xtol=1e-15 * t_hi, rtol=8.9e-16)
        return z + t * d

    def body_id(self):
        digest = hashlib.blake2b(
            serialize_body(self).encode(), digest_size=4
        ).hexdigest()
        return "%s:%s" % (self.kind, digest)


class Ellipsoid(ConvexBody):
    """{x : (x-c)^T Q (x-c) <= 1} with Q symmetric positive definite."""

    kind = "ellipsoid"
    is_smooth = True

    def __init__(self, center, shape):
        c = np.asarray(center, dtype=float)
        q = np.asarray(shape, dtype=float)
        if q.shape != (c.shape[0], c.shape[0]):
            raise ValueError("shape matrix size does not match the center")
        if np.abs(q - q.T).max() > 1e-12 * np.abs(q).max():
            raise ValueError("shape matrix must be symmetric")
        q = 0.5 * (q + q.T)
        eig = np.linalg.eigvalsh(q)
        if eig[0] <= 0.0:
            raise ValueError("shape matrix must be positive definite")
        self._c = c
        self._q = q
        self._qinv = np.linalg.inv(q)

    @classmethod
    def ball(cls, radius, center=None, dim=3):
        if center is None:
            center = np.zeros(dim)
        center = np.asarray(center, dtype=float)
        n = center.shape[0]
        return cls(center, np.eye(n) / radius**2)

    @classmethod
    def from_semi_axes(cls, semi_axes, center=None):
        a = np.asarray(semi_axes, dtype=float)
        if center is None:
            center = np.zeros(a.shape[0])
        return cls(center, np.diag(1.0 / a**2))

    @property
    def dim(self):
        return self._c.shape[0]

    @property
    def center(self):
        return self._c

    @property
    def shape_matrix(self):
        return self._q

    def support(self, u):
        u = np.asarray(u, dtype=float)
        return float(self._c @ u + np.sqrt(u @ self._qinv @ u))

    def support_point(self, u):
        u = np.asarray(u, dtype=float)
        w = self._qinv @ u
        return self._c + w / np.sqrt(u @ w)

    def gauge(self, x):
        v = np.asarray(x, dtype=float) - self._c
        return float(np.sqrt(v @ self._q @ v))

    def normal_at(self, x):
        return normalize(self._q @ (np.asarray(x, dtype=float) - self._c))

    def boundary_point(self, z, d):
        # quadratic in t: (v + t d)^T Q (v + t d) = 1
        v = np.asarray(z, dtype=float) - self._c
        d = normalize(d)
        a = d @ self._q @ d
        b = d @ self._q @ v
        c0 = v @ self._q @ v - 1.0
        disc = b * b - a * c0
        if c0 >= -1e-14 or disc <= 0.0:
            raise ValueError("ray base point is not interior")
        t = (-b + np.sqrt(disc)) / a
        return z + t * d


class PBall(ConvexBody):
    """{x : sum |x_i/a_i|^p <= 1}, origin-centered, p in (1, inf)."""

    kind = "pball"
    is_smooth = True

    def __init__(self, exponent, semi_axes):
        p = float(exponent)
        if not p > 1.0 or not np.isfinite(p):
            raise ValueError("exponent must satisfy 1 < p < inf")
        a = np.asarray(semi_axes, dtype=float)
        if np.any(a <= 0.0):
            raise ValueError("semi-axes must be positive")
        self._p = p
        self._q = p / (p - 1.0)
        self._a = a

    @property
    def dim(self):
        return self._a.shape[0]

    @property
    def center(self):
        return np.zeros(self.dim)

    @property
    def exponent(self):
        return self._p

    @property
    def semi_axes(self):
        return self._a

    def support(self, u):
        w = self._a * np.asarray(u, dtype=float)
        return float(np.linalg.norm(w, ord=self._q))

    def support_point(self, u):
        w = self._a * np.asarray(u, dtype=float)
        nq = np.linalg.norm(w, ord=self._q)
        if nq == 0.0:
            raise ValueError("zero direction")
        y = np.sign(w) * np.abs(w / nq) ** (self._q - 1.0)
        return self._a * y

    def gauge(self, x):
        return float(np.linalg.norm(np.asarray(x, dtype=float) / self._a, ord=self._p))

    def normal_at(self, x):
        v = np.asarray(x, dtype=float) / self._a
        g = np.sign(v) * np.abs(v) ** (self._p - 1.0) / self._a
        return normalize(g)


class Polytope(ConvexBody):
    """Convex hull of a finite vertex list; support-oracle only (not smooth)."""

    kind = "polytope"
    is_smooth = False

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] < v.shape[1] + 1:
            raise ValueError("polytope needs at least n+1 vertices")
        self._v = v
        self._c = v.mean(axis=0)

    @property
    def dim(self):
        return self._v.shape[1]

    @property
    def center(self):
        return self._c

    @property
    def vertices(self):
        return self._v

    def support(self, u):
        return float((self._v @ np.asarray(u, dtype=float)).max())

    def support_point(self, u):
        scores = self._v @ np.asarray(u, dtype=float)
        return self._v[int(np.argmax(scores))].copy()

    def gauge(self, x):
        # min sum(mu) subject to (V - c)^T mu = x - c, mu >= 0
        rhs = np.asarray(x, dtype=float) - self._c
        gen = (self._v - self._c).T
        k = self._v.shape[0]
        res = linprog(np.ones(k), A_eq=gen, b_eq=rhs,
                      bounds=[(0.0, None)] * k, method="highs")
        if not res.success:
            raise ValueError("gauge LP failed: %s" % res.message)
        return float(res.fun)


class AffineImage(ConvexBody):
    """A K + b for an invertible matrix A and an inner body K."""

    kind = "affine_image"

    def __init__(self, a, b, inner):
        a = np.asarray(a, dtype=float)
        n = inner.dim
        if a.shape != (n, n):
            raise ValueError("matrix size does not match the inner body")
        s = np.linalg.svd(a, compute_uv=False)
        if s[-1] <= 1e-12 * s[0]:
            raise ValueError("affine image matrix is numerically singular")
        self._a = a
        self._b = np.asarray(b, dtype=float)
        self._inner = inner
        self._ainv = np.linalg.inv(a)
        self.is_smooth = inner.is_smooth

    @property
    def dim(self):
        return self._inner.dim

    @property
    def center(self):
        return self._a @ self._inner.center + self._b

    @property
    def matrix(self):
        return self._a

    @property
    def offset(self):
        return self._b

    @property
    def inner(self):
        return self._inner

    def support(self, u):
        u = np.asarray(u, dtype=float)
        return float(self._b @ u) + self._inner.support(self._a.T @ u)

    def support_point(self, u):
        u = np.asarray(u, dtype=float)
        return self._a @ self._inner.support_point(self._a.T @ u) + self._b

    def gauge(self, x):
        return self._inner.gauge(self._ainv @ (np.asarray(x, dtype=float) - self._b))

    def normal_at(self, x):
        x_in = self._ainv @ (np.asarray(x, dtype=float) - self._b)
        return normalize(self._ainv.T @ self._inner.normal_at(x_in))


def line_boundary_points(body, line):
    """The two intersections of a line with bd K, ordered by the parameter.

    Raises LineMissesBody when the line never reaches the interior (the gauge
    minimum along the line stays >= 1).
    """
    if not isinstance(line, Line):
        raise TypeError("expected a Line")
    p, d = line.point, line.direction
    span = float(np.linalg.norm(p - body.center)) + body.radius_bound()
    if isinstance(body, Ellipsoid):
        q, c = body.shape_matrix, body.center
        v = p - c
        a = d @ q @ d
        b = d @ q @ v
        c0 = v @ q @ v - 1.0
        disc = b * b - a * c0
        if disc <= 1e-14 * a:
            raise LineMissesBody("line misses the ellipsoid interior")
        root = np.sqrt(disc)
        t1, t2 = (-b - root) / a, (-b + root) / a
        return line.at(t1), line.at(t2)
    g = lambda t: body.gauge(line.at(t))
    res = minimize_scalar(g, bounds=(-span, span), method="bounded",
                          options={"xatol": 1e-12 * (1.0 + span)})
    t0, g0 = float(res.x), float(res.fun)
    if g0 >= 1.0 - 1e-12:
        raise LineMissesBody("gauge minimum along the line is %.6f" % g0)
    f = lambda t: g(t) - 1.0
    ta = brentq(f, -span, t0, xtol=1e-15 * span, rtol=8.9e-16)
    tb = brentq(f, t0, span, xtol=1e-15 * span, rtol=8.9e-16)
    return line.at(ta), line.at(tb)


def o_symmetry_residual(body, center=None, m=512, seed=0):
    """max_u |h(u) - h(-u) - 2<c,u>| / diameter over sampled directions."""
    if center is None:
        center = np.zeros(body.dim)
    center = np.asarray(center, dtype=float)
    dirs = sphere_directions(body.dim, m, seed=seed)
    worst = 0.0
    for u in dirs:
        r = abs(body.support(u) - body.support(-u) - 2.0 * float(center @ u))
        worst = max(worst, r)
    return worst / body.diameter()


def is_o_symmetric(body, center=None, tol=1e-7, m=512, seed=0):
    """Centrally symmetric about center, via the support identity
    h(u) - h(-u) = 2<c,u> sampled over m quasi-uniform directions."""
    return o_symmetry_residual(body, center, m=m, seed=seed) <= tol


# ---------------------------------------------------------------------------
# body spec files: structured text, bit-exact parse -> serialize -> parse
# ---------------------------------------------------------------------------

_HEADER = "ellipsoid-forge-body v1"


def _fmt(values):
    return " ".join(repr(float(v)) for v in np.atleast_1d(values))


def _serialize_into(body, out, indent):
    pad = " " * indent
    out.write("%skind %s\n" % (pad, body.kind))
    out.write("%sdim %d\n" % (pad, body.dim))
    if isinstance(body, Ellipsoid):
        out.write("%scenter %s\n" % (pad, _fmt(body.center)))
        for row in body.shape_matrix:
            out.write("%sshape-row %s\n" % (pad, _fmt(row)))
    elif isinstance(body, PBall):
        out.write("%sexponent %s\n" % (pad, repr(float(body.exponent))))
        out.write("%ssemi-axes %s\n" % (pad, _fmt(body.semi_axes)))
    elif isinstance(body, Polytope):
        for v in body.vertices:
            out.write("%svertex %s\n" % (pad, _fmt(v)))
    elif isinstance(body, AffineImage):
        for row in body.matrix:
            out.write("%smatrix-row %s\n" % (pad, _fmt(row)))
        out.write("%soffset %s\n" % (pad, _fmt(body.offset)))
        out.write("%sinner {\n" % pad)
        _serialize_into(body.inner, out, indent + 2)
        out.write("%s}\n" % pad)
    else:
        raise ValueError("unknown body kind %r" % body.kind)


def serialize_body(body):
    out = io.StringIO()
    out.write(_HEADER + "\n")
    _serialize_into(body, out, 0)
    return out.getvalue()


def _parse_floats(text, lineno):
    try:
        return np.array([float(tok) for tok in text.split()])
    except ValueError:
        raise BodySpecError("cannot parse numbers from %r" % text, lineno)


def _parse_block(lines, i):
    """Parse one body starting at lines[i]; returns (body, next_index)."""
    fields = {}
    rows = {"shape-row": [], "vertex": [], "matrix-row": []}
    inner = None
    while i < len(lines):
        lineno, raw = lines[i]
        text = raw.strip()
        if text == "}":
            break
        if not text or text.startswith("#"):
            i += 1
            continue
        key, _, rest = text.partition(" ")
        if key == "inner":
            if rest.strip() != "{":
                raise BodySpecError("expected 'inner {'", lineno)
            inner, i = _parse_block(lines, i + 1)
            if i >= len(lines) or lines[i][1].strip() != "}":
                raise BodySpecError("unterminated inner block", lineno)
            i += 1
            continue
        if key in rows:
            rows[key].append(_parse_floats(rest, lineno))
        elif key in ("kind", "dim", "center", "exponent", "semi-axes", "offset"):
            if key in fields:
                raise BodySpecError("duplicate field %r" % key, lineno)
            fields[key] = (rest, lineno)
        else:
            raise BodySpecError("unknown field %r" % key, lineno)
        i += 1
    if "kind" not in fields:
        raise BodySpecError("missing 'kind' field", lines[i - 1][0] if i else 1)
    kind, kind_line = fields["kind"]
    kind = kind.strip()
    if "dim" not in fields:
        raise BodySpecError("missing 'dim' field", kind_line)
    try:
        dim = int(fields["dim"][0])
    except ValueError:
        raise BodySpecError("dim must be an integer", fields["dim"][1])

    def need(key):
        if key not in fields:
            raise BodySpecError("kind %s needs field %r" % (kind, key), kind_line)
        return fields[key]

    if kind == "ellipsoid":
        center = _parse_floats(*need("center"))
        if len(rows["shape-row"]) != dim:
            raise BodySpecError("ellipsoid needs %d shape-row lines" % dim, kind_line)
        body = Ellipsoid(center, np.vstack(rows["shape-row"]))
    elif kind == "pball":
        p = _parse_floats(*need("exponent"))
        axes = _parse_floats(*need("semi-axes"))
        body = PBall(float(p[0]), axes)
    elif kind == "polytope":
        if not rows["vertex"]:
            raise BodySpecError("polytope needs vertex lines", kind_line)
        body = Polytope(np.vstack(rows["vertex"]))
    elif kind == "affine_image":
        if inner is None:
            raise BodySpecError("affine_image needs an inner block", kind_line)
        if len(rows["matrix-row"]) != dim:
            raise BodySpecError("affine_image needs %d matrix-row lines" % dim,
                                kind_line)
        body = AffineImage(np.vstack(rows["matrix-row"]),
                           _parse_floats(*need("offset")), inner)
    else:
        raise BodySpecError("unknown body kind %r" % kind, kind_line)
    if body.dim != dim:
        raise BodySpecError("declared dim %d does not match parameters" % dim,
                            kind_line)
    return body, i


def parse_body(text):
    """Parse one body spec document (see serialize_body for the format)."""
    raw_lines = text.splitlines()
    if not raw_lines or raw_lines[0].strip() != _HEADER:
        raise BodySpecError("missing header %r" % _HEADER, 1)
    lines = [(i + 1, raw) for i, raw in enumerate(raw_lines[1:], start=1)]
    body, i = _parse_block(lines, 0)
    while i < len(lines):
        if lines[i][1].strip() not in ("", "}"):
            raise BodySpecError("trailing content", lines[i][0])
        i += 1
    return body


def load_body(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_body(fh.read())


def save_body(body, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_body(body))
