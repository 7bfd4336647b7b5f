"""Small numeric kit: unit vectors, frames, spherical primitives.

Everything works on plain numpy arrays; directors are represented by unit
3-vectors whose sign is *not* meaningful (see `field`), while lifted values
are unit 3-vectors whose sign is meaningful.
"""

import numpy as np

UNIT_TOL = 1e-9


def normalize(v):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    if np.any(n < 1e-14):
        raise ValueError("cannot normalize a (near-)zero vector")
    return v / n


def is_unit(v, tol=UNIT_TOL):
    return abs(np.linalg.norm(v) - 1.0) <= tol


def director_distance(a, b):
    """Sign-free distance between two directors: min over the sign choice."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    return min(np.linalg.norm(a - b), np.linalg.norm(a + b))


def directors_equal(a, b, tol=1e-9):
    return director_distance(a, b) <= tol


def orthonormal_frame(n):
    """Return (u, v) so that (u, v, n) is right-handed and orthonormal."""
    n = normalize(n)
    # pick the coordinate axis least aligned with n as a helper
    helper = np.eye(3)[int(np.argmin(np.abs(n)))]
    u = normalize(np.cross(helper, n))
    v = np.cross(n, u)
    return u, v


def rotation_about(axis, angle):
    """Rotation matrix about a unit axis (Rodrigues)."""
    axis = normalize(axis)
    x, y, z = axis
    c, s = np.cos(angle), np.sin(angle)
    k = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return np.eye(3) * c + s * k + (1 - c) * np.outer(axis, axis)


def slerp(a, b, t):
    """Spherical interpolation between unit vectors a, b (not antipodal).

    t may be a scalar or an array; result has shape t.shape + (3,).
    """
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    dot = float(np.clip(np.dot(a, b), -1.0, 1.0))
    ang = np.arccos(dot)
    t = np.asarray(t, float)
    if ang < 1e-12:
        return np.multiply.outer(np.ones_like(t), a)
    if ang > np.pi - 1e-9:
        raise ValueError("slerp endpoints are antipodal")
    sa = np.sin((1.0 - t) * ang) / np.sin(ang)
    sb = np.sin(t * ang) / np.sin(ang)
    return np.multiply.outer(sa, a) + np.multiply.outer(sb, b)


def angle_in_frame(vec, u, v):
    """Angle of the (u,v)-plane component of vec, in (-pi, pi]."""
    return float(np.arctan2(np.dot(vec, v), np.dot(vec, u)))


def vec_from_angle(theta, u, v):
    theta = np.asarray(theta, float)
    return np.multiply.outer(np.cos(theta), u) + np.multiply.outer(np.sin(theta), v)


def unwrap_angles(raw, start=None, period=2 * np.pi):
    """Unwrap a sequence of angles into a continuous real-valued sequence.

    Each step is taken modulo `period` into (-period/2, period/2]. With
    period=pi this is the director-angle unwrap; with 2*pi the vector one.
    """
    raw = np.asarray(raw, float)
    out = np.empty_like(raw)
    out[0] = raw[0] if start is None else start
    for i in range(1, len(raw)):
        step = (raw[i] - raw[i - 1]) % period
        if step > period / 2:
            step -= period
        out[i] = out[i - 1] + step
    return out


def signed_solid_angle(a, b, c):
    """Signed solid angle of the spherical triangle (a, b, c) on the unit
    sphere (Van Oosterom & Strackee). Sign is positive when (a, b, c) is
    counterclockwise seen from outside."""
    det = float(np.dot(a, np.cross(b, c)))
    denom = 1.0 + float(np.dot(a, b)) + float(np.dot(b, c)) + float(np.dot(c, a))
    return 2.0 * np.arctan2(det, denom)


def triangle_solid_angles(values, triangles):
    """Vectorised signed solid angles for an (M,3) index array over an
    (N,3) value array."""
    a = values[triangles[:, 0]]
    b = values[triangles[:, 1]]
    c = values[triangles[:, 2]]
    det = np.einsum("ij,ij->i", a, np.cross(b, c))
    denom = (
        1.0
        + np.einsum("ij,ij->i", a, b)
        + np.einsum("ij,ij->i", b, c)
        + np.einsum("ij,ij->i", c, a)
    )
    return 2.0 * np.arctan2(det, denom)


def icosphere(level):
    """Subdivided icosahedron on the unit sphere: (vertices, triangles),
    outward-wound. 20 * 4**level triangles."""
    phi = (1 + np.sqrt(5)) / 2
    verts = [
        (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
        (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
        (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
    ]
    verts = [normalize(v) for v in verts]
    tris = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    for _ in range(level):
        cache = {}
        new = []

        def mid(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                cache[key] = len(verts)
                verts.append(normalize(verts[i] + verts[j]))
            return cache[key]

        for a, b, c in tris:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
        tris = new
    return np.asarray(verts), np.asarray(tris, int)


def point_in_polygon(pt, poly):
    """Even-odd test for a 2D point against a simple polygon (K,2)."""
    x, y = pt
    inside = False
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        if (y0 > y) != (y1 > y):
            xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            if x < xc:
                inside = not inside
    return inside


def point_segment_distance(p, a, b):
    p, a, b = (np.asarray(v, float) for v in (p, a, b))
    ab = b - a
    denom = float(np.dot(ab, ab))
    if denom < 1e-30:
        return float(np.linalg.norm(p - a))
    t = float(np.clip(np.dot(p - a, ab) / denom, 0.0, 1.0))
    return float(np.linalg.norm(p - (a + t * ab)))


def mean_value_interpolate(query, boundary_pts, boundary_vals, eps=1e-12):
    """Mean-value-coordinate interpolation of scalar boundary values.

    boundary_pts: (K,2) closed polyline (no repeated last point).
    boundary_vals: (K,) values at those points. Works for convex and
    nonconvex simple polygons; exact on the boundary.
    """
    q = np.asarray(query, float)
    pts = np.asarray(boundary_pts, float)
    vals = np.asarray(boundary_vals, float)
    d = pts - q
    r = np.linalg.norm(d, axis=1)
    k = int(np.argmin(r))
    if r[k] < eps:
        return float(vals[k])
    nxt = np.roll(np.arange(len(pts)), -1)
    # tan(alpha_i / 2) for the angle at q between spokes i and i+1
    cross = d[:, 0] * d[nxt, 1] - d[:, 1] * d[nxt, 0]
    dot = np.einsum("ij,ij->i", d, d[nxt])
    # on-edge query: the two spokes are anti-parallel
    on_edge = np.where((np.abs(cross) < eps * r * r[nxt]) & (dot < 0))[0]
    if len(on_edge):
        i = int(on_edge[0])
        t = r[i] / (r[i] + r[nxt[i]])
        return float((1 - t) * vals[i] + t * vals[nxt[i]])
    tan_half = cross / (r * r[nxt] + dot)
    w = (np.roll(tan_half, 1) + tan_half) / r
    return float(np.dot(w, vals) / np.sum(w))
