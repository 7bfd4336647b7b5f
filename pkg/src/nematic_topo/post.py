"""The periodic post-display domain.

One rectangular post of width w, depth d, height h stands on the bottom
plate of a cell of unit horizontal period, below a top plate at height H.
Boundary conditions are tangent on the bottom plate and the post, periodic
in both horizontal directions, and either normal (N) or tangent (T) on the
top plate.

The eight post vertices are truncated exactly like polyhedron vertices; the
prism surface of the fundamental cell carries the auxiliary cells

    tau0:<s1><s2><s3>   prism vertices, s in {-,+}
    tau1:1-/1+/2-/2+    horizontal prism edges (class representatives)
    tau1:3--            the vertical prism edge
    tau2:1-/2-/...      prism faces (x = -1/2, y = -1/2, and translates)

with opposite faces identified by the horizontal translations.
"""

import dataclasses

import numpy as np

from .complex import ComplexBuilder, PatchMesh
from .errors import GeometryError
from .geometry import normalize

MODES = ("N", "T")


@dataclasses.dataclass
class PrismEdge:
    cell_id: str
    p_a: np.ndarray
    p_b: np.ndarray

    def chart(self, t):
        t = np.asarray(t, float)
        return np.multiply.outer(1.0 - t, self.p_a) + np.multiply.outer(t, self.p_b)

    @property
    def direction(self):
        return normalize(self.p_b - self.p_a)


@dataclasses.dataclass
class PrismFace:
    """A vertical prism face, chart (s, t) -> origin + s*axis_u + t*axis_v.

    axis_u runs along the horizontal direction inside the face, axis_v up
    the plates; the stored triangle winding matches the outward normal of
    the fundamental cell."""

    cell_id: str
    origin: np.ndarray
    axis_u: np.ndarray
    axis_v: np.ndarray
    normal: np.ndarray

    def chart(self, s, t):
        s = np.asarray(s, float)
        t = np.asarray(t, float)
        return (
            self.origin
            + np.multiply.outer(s, self.axis_u)
            + np.multiply.outer(t, self.axis_v)
        )


class PolylinePath:
    """Chart over a polyline, parameterized by arclength fraction."""

    def __init__(self, points):
        self.points = np.asarray(points, float)
        seg = np.linalg.norm(np.diff(self.points, axis=0), axis=1)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        if cum[-1] <= 0:
            raise GeometryError("degenerate path")
        self.fractions = cum / cum[-1]

    def chart(self, t):
        t = np.atleast_1d(np.asarray(t, float))
        out = np.empty((len(t), 3))
        for k, tk in enumerate(t):
            tk = min(max(tk, 0.0), 1.0)
            i = int(np.searchsorted(self.fractions, tk, side="right") - 1)
            i = min(i, len(self.points) - 2)
            f0, f1 = self.fractions[i], self.fractions[i + 1]
            lam = 0.0 if f1 == f0 else (tk - f0) / (f1 - f0)
            out[k] = (1 - lam) * self.points[i] + lam * self.points[i + 1]
        return out if out.shape[0] > 1 else out[0]


class PostDomain:
    def __init__(self, w, d, h, H, mode, eps, complex_, prism_edges, prism_faces,
                 p0, anchor_edge, gamma_minus):
        self.w, self.d, self.h, self.H = w, d, h, H
        self.mode = mode
        self.eps = eps
        self.complex = complex_
        self.prism_edges = prism_edges
        self.prism_faces = prism_faces
        self.p0 = p0
        self.anchor_edge = anchor_edge
        self.gamma_minus = gamma_minus
        # identifications: translate of each '+' cell onto its '-' partner
        self.face_pairs = {"tau2:1+": "tau2:1-", "tau2:2+": "tau2:2-"}
        self.edge_classes = {
            "tau1:1-": ["tau1:1-", "tau1:1-@2"],
            "tau1:1+": ["tau1:1+", "tau1:1+@2"],
            "tau1:2-": ["tau1:2-", "tau1:2-@1"],
            "tau1:2+": ["tau1:2+", "tau1:2+@1"],
            "tau1:3--": ["tau1:3--", "tau1:3+-", "tau1:3-+", "tau1:3++"],
        }

    def cell(self, cell_id):
        if cell_id in self.prism_edges:
            return self.prism_edges[cell_id]
        if cell_id in self.prism_faces:
            return self.prism_faces[cell_id]
        return self.complex.cell(cell_id)

    def translate(self, alpha):
        t = np.zeros(3)
        t[alpha - 1] = 1.0
        return t

    def grid_mesh(self, face_id, n_u, n_v):
        """Triangulated regular grid over a prism face, wound with the
        outward (cell-exterior) normal."""
        face = self.prism_faces[face_id]
        su = np.linspace(0.0, 1.0, n_u + 1)
        tv = np.linspace(0.0, 1.0, n_v + 1)
        pts = np.zeros(((n_u + 1) * (n_v + 1), 3))
        for j, t in enumerate(tv):
            pts[j * (n_u + 1): (j + 1) * (n_u + 1)] = face.chart(su, t)

        def idx(i, j):
            return j * (n_u + 1) + i
        tris = []
        for j in range(n_v):
            for i in range(n_u):
                a, b = idx(i, j), idx(i + 1, j)
                c, e = idx(i + 1, j + 1), idx(i, j + 1)
                tris += [(a, b, c), (a, c, e)]
        tris = np.asarray(tris, int)
        # wind for the outward normal
        p0, p1, p2 = pts[tris[0]]
        if float(np.dot(np.cross(p1 - p0, p2 - p0), face.normal)) < 0:
            tris[:, [1, 2]] = tris[:, [2, 1]]
        mesh = PatchMesh(pts, tris, [], [])
        mesh.grid_shape = (n_u + 1, n_v + 1)
        mesh.grid_index = idx
        return mesh


def _oriented(corners, normal):
    """Return the corner cycle wound ccw about `normal` (reverse if not)."""
    pts = np.asarray([c[1] for c in corners], float)
    n = np.zeros(3)
    for k in range(len(pts)):
        n += np.cross(pts[k], pts[(k + 1) % len(pts)])
    if float(np.dot(n, normal)) < 0:
        return list(reversed(corners))
    return list(corners)


def build_post_domain(w, d, h, H, mode, eps, grid=None):
    """Construct the post domain and its truncated complex.

    The basepoint sits at the middle of the post-base edge on the y = -d/2
    side; the bottom-plate alignment path runs from there to the prism
    corner (-1/2, -1/2, 0), detouring around truncation caps if needed.
    """
    if not (0 < w < 1 and 0 < d < 1):
        raise GeometryError("post footprint must satisfy 0 < w, d < 1")
    if not (0 < h < H):
        raise GeometryError("post height must satisfy 0 < h < H")
    if mode not in MODES:
        raise GeometryError(f"mode must be one of {MODES}")
    limit = 0.49 * min(w, d, h, (1 - w) / 2, (1 - d) / 2, H - h)
    if not (0 < eps < limit):
        raise GeometryError(f"eps must lie in (0, {limit:.4g}) for this geometry")

    hw, hd = w / 2.0, d / 2.0
    builder = ComplexBuilder()
    vid = {}
    for sx in (-1, 1):
        for sy in (-1, 1):
            tag = f"{'+' if sx > 0 else '-'}{'+' if sy > 0 else '-'}"
            vid[("b", sx, sy)] = f"b{tag}"
            vid[("t", sx, sy)] = f"t{tag}"
            builder.add_vertex(f"b{tag}", (sx * hw, sy * hd, 0.0), eps)
            builder.add_vertex(f"t{tag}", (sx * hw, sy * hd, h), eps)

    def pos(v):
        return builder.vpos[v]

    # post edges: base + vertical + top
    edges = {
        "bx+": ("b+-", "b++"), "bx-": ("b--", "b-+"),
        "by+": ("b-+", "b++"), "by-": ("b--", "b+-"),
        "tx+": ("t+-", "t++"), "tx-": ("t--", "t-+"),
        "ty+": ("t-+", "t++"), "ty-": ("t--", "t+-"),
        "v++": ("b++", "t++"), "v+-": ("b+-", "t+-"),
        "v-+": ("b-+", "t-+"), "v--": ("b--", "t--"),
    }
    for eid, (a, b) in edges.items():
        builder.add_edge(eid, a, b)

    edge_lookup = {}
    for eid, (a, b) in edges.items():
        edge_lookup[(a, b)] = eid
        edge_lookup[(b, a)] = eid

    def loop_entries(corner_vids):
        out = []
        m = len(corner_vids)
        for k in range(m):
            a, b = corner_vids[k], corner_vids[(k + 1) % m]
            out.append((a, pos(a), edge_lookup[(a, b)], True))
        return out

    def face(fid, normal, corner_vids):
        cycle = _oriented([(v, pos(v)) for v in corner_vids], normal)
        builder.add_face(fid, normal, [loop_entries([v for v, _ in cycle])])

    face("tf:wall:x+", (-1, 0, 0), ["b+-", "b++", "t++", "t+-"])
    face("tf:wall:x-", (1, 0, 0), ["b--", "b-+", "t-+", "t--"])
    face("tf:wall:y+", (0, -1, 0), ["b-+", "b++", "t++", "t-+"])
    face("tf:wall:y-", (0, 1, 0), ["b--", "b+-", "t+-", "t--"])
    face("tf:post:top", (0, 0, -1), ["t--", "t+-", "t++", "t-+"])

    # bottom plate: outer prism loop (plain corners) + footprint hole
    q = {
        (-1, -1): np.array([-0.5, -0.5, 0.0]),
        (1, -1): np.array([0.5, -0.5, 0.0]),
        (1, 1): np.array([0.5, 0.5, 0.0]),
        (-1, 1): np.array([-0.5, 0.5, 0.0]),
    }
    outer = [
        (None, q[(-1, -1)], "prism:b0", False),
        (None, q[(-1, 1)], "prism:b1", False),
        (None, q[(1, 1)], "prism:b2", False),
        (None, q[(1, -1)], "prism:b3", False),
    ]  # cw in xy = ccw about the plate's outward normal -z
    inner_cycle = _oriented(
        [(v, pos(v)) for v in ["b--", "b+-", "b++", "b-+"]], (0, 0, 1)
    )  # hole loop: opposite handedness to the outer loop
    inner = loop_entries([v for v, _ in inner_cycle])
    builder.add_face("tf:plate", (0, 0, -1), [outer, inner])

    # top plate: no truncated corners
    qt = {k: v + np.array([0, 0, H]) for k, v in q.items()}
    top_outer = [
        (None, qt[(-1, -1)], "prism:t0", False),
        (None, qt[(1, -1)], "prism:t1", False),
        (None, qt[(1, 1)], "prism:t2", False),
        (None, qt[(-1, 1)], "prism:t3", False),
    ]  # ccw in xy = ccw about +z
    builder.add_face("tf:topplate", (0, 0, 1), [top_outer])

    cx = builder.build()

    # prism cells
    prism_edges = {}

    def add_prism_edge(cell_id, a, b):
        prism_edges[cell_id] = PrismEdge(cell_id, np.asarray(a, float), np.asarray(b, float))

    add_prism_edge("tau1:1-", (-0.5, -0.5, 0.0), (0.5, -0.5, 0.0))
    add_prism_edge("tau1:1-@2", (-0.5, 0.5, 0.0), (0.5, 0.5, 0.0))
    add_prism_edge("tau1:1+", (-0.5, -0.5, H), (0.5, -0.5, H))
    add_prism_edge("tau1:1+@2", (-0.5, 0.5, H), (0.5, 0.5, H))
    add_prism_edge("tau1:2-", (-0.5, -0.5, 0.0), (-0.5, 0.5, 0.0))
    add_prism_edge("tau1:2-@1", (0.5, -0.5, 0.0), (0.5, 0.5, 0.0))
    add_prism_edge("tau1:2+", (-0.5, -0.5, H), (-0.5, 0.5, H))
    add_prism_edge("tau1:2+@1", (0.5, -0.5, H), (0.5, 0.5, H))
    add_prism_edge("tau1:3--", (-0.5, -0.5, 0.0), (-0.5, -0.5, H))
    add_prism_edge("tau1:3+-", (0.5, -0.5, 0.0), (0.5, -0.5, H))
    add_prism_edge("tau1:3-+", (-0.5, 0.5, 0.0), (-0.5, 0.5, H))
    add_prism_edge("tau1:3++", (0.5, 0.5, 0.0), (0.5, 0.5, H))

    prism_faces = {}
    prism_faces["tau2:1-"] = PrismFace(
        "tau2:1-",
        origin=np.array([-0.5, -0.5, 0.0]),
        axis_u=np.array([0.0, 1.0, 0.0]),
        axis_v=np.array([0.0, 0.0, H]),
        normal=np.array([-1.0, 0.0, 0.0]),
    )
    prism_faces["tau2:1+"] = PrismFace(
        "tau2:1+",
        origin=np.array([0.5, -0.5, 0.0]),
        axis_u=np.array([0.0, 1.0, 0.0]),
        axis_v=np.array([0.0, 0.0, H]),
        normal=np.array([1.0, 0.0, 0.0]),
    )
    prism_faces["tau2:2-"] = PrismFace(
        "tau2:2-",
        origin=np.array([-0.5, -0.5, 0.0]),
        axis_u=np.array([1.0, 0.0, 0.0]),
        axis_v=np.array([0.0, 0.0, H]),
        normal=np.array([0.0, -1.0, 0.0]),
    )
    prism_faces["tau2:2+"] = PrismFace(
        "tau2:2+",
        origin=np.array([-0.5, 0.5, 0.0]),
        axis_u=np.array([1.0, 0.0, 0.0]),
        axis_v=np.array([0.0, 0.0, H]),
        normal=np.array([0.0, 1.0, 0.0]),
    )

    p0 = np.array([0.0, -hd, 0.0])
    gamma = _route_gamma_minus(p0, np.array([-0.5, -0.5, 0.0]), builder, eps, hw, hd)

    return PostDomain(
        w, d, h, H, mode, eps, cx, prism_edges, prism_faces,
        p0=p0, anchor_edge="te:by-", gamma_minus=PolylinePath(gamma),
    )


def _route_gamma_minus(p0, q1, builder, eps, hw, hd, margin=1.3):
    """Straight plate path from the basepoint to the prism corner, with
    circular detours around any truncation cap it grazes. Must stay outside
    the post footprint."""
    base_corners = [v for v in builder.vpos if v.startswith("b")]
    pts = [p0 + (q1 - p0) * t for t in np.linspace(0, 1, 257)]
    out = []
    for p in pts:
        moved = p.copy()
        for v in base_corners:
            c = builder.vpos[v]
            r = np.linalg.norm((moved - c)[:2])
            if r < eps * margin:
                if r < 1e-12:
                    away = normalize(np.array([-(c[0] >= 0) or 1, -1.0, 0.0]))
                else:
                    away = (moved - c) / r
                moved = c + away * eps * margin
                moved[2] = 0.0
        if abs(moved[0]) < hw and abs(moved[1]) < hd:
            moved[1] = -hd - (eps * 0.5)  # push out of the footprint
        out.append(moved)
    # cull consecutive duplicates introduced by the projection
    cleaned = [out[0]]
    for p in out[1:]:
        if np.linalg.norm(p - cleaned[-1]) > 1e-12:
            cleaned.append(p)
    if np.linalg.norm(cleaned[-1] - q1) > 1e-9:
        cleaned.append(q1)
    for p in cleaned:
        for v in base_corners:
            if np.linalg.norm(p - builder.vpos[v]) < eps:
                raise GeometryError("gamma- routing failed to clear a cap")
    return np.asarray(cleaned)
