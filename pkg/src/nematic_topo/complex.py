"""Polyhedral domains and their truncated cell complexes.

A polyhedron with tangent boundary data forces the director field to be
discontinuous at vertices, so a small ball is removed around each vertex.
The resulting boundary surface decomposes into

* truncated edges  (``te:*``)  — straight edge segments, director constant,
* cleaved edges    (``ce:*``)  — circular arcs where a face meets a
  truncation sphere,
* truncated faces  (``tf:*``)  — face polygons minus corner disks,
* cleaved faces    (``cf:*``)  — spherical polygons on truncation spheres.

Cell ids are deterministic functions of the input indexing so that invariant
chains are comparable across runs.
"""

import dataclasses

import numpy as np

from .errors import (
    BallMeetsForeignCell,
    BallsOverlap,
    DegeneratePatch,
    GeometryError,
)
from .geometry import (
    normalize,
    orthonormal_frame,
    point_in_polygon,
    point_segment_distance,
    triangle_solid_angles,
)

DEFAULT_EPS_FACTOR = 0.2
DEFAULT_PLANAR_FACTOR = 1e-9


# ---------------------------------------------------------------------------
# polyhedron input
# ---------------------------------------------------------------------------


class Polyhedron:
    """Closed polyhedral surface given by vertices and oriented face loops.

    Face loops must wind counterclockwise as seen from outside (outward
    normal by the right-hand rule). Edges are derived from the loops.
    """

    def __init__(self, vertices, faces):
        self.vertices = np.asarray(vertices, dtype=float)
        self.faces = [tuple(int(i) for i in loop) for loop in faces]
        self.edges = []
        seen = {}
        for loop in self.faces:
            for k in range(len(loop)):
                a, b = loop[k], loop[(k + 1) % len(loop)]
                key = (min(a, b), max(a, b))
                if key not in seen:
                    seen[key] = len(self.edges)
                    self.edges.append(key)
        self.edge_index = seen

    def edge_vector(self, ei):
        a, b = self.edges[ei]
        return self.vertices[b] - self.vertices[a]

    def face_normal(self, fi):
        """Newell normal of a face loop, normalized."""
        loop = self.faces[fi]
        pts = self.vertices[list(loop)]
        n = np.zeros(3)
        for k in range(len(pts)):
            p, q = pts[k], pts[(k + 1) % len(pts)]
            n += np.cross(p, q)
        norm = np.linalg.norm(n)
        if norm < 1e-14:
            raise GeometryError(f"face {fi} has a degenerate normal")
        return n / norm

    def bbox_diagonal(self):
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return float(np.linalg.norm(hi - lo))


@dataclasses.dataclass
class ValidationReport:
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


def validate_polyhedron(p, tol_planar=None):
    """Check the closed-2-manifold, Euler, planarity and normal invariants.

    Violations are data, not exceptions: callers decide what to do.
    """
    violations = []
    if tol_planar is None:
        tol_planar = DEFAULT_PLANAR_FACTOR * p.bbox_diagonal()

    directed = {}
    for fi, loop in enumerate(p.faces):
        if len(set(loop)) != len(loop):
            violations.append(f"face {fi}: repeated vertex in loop")
        for k in range(len(loop)):
            a, b = loop[k], loop[(k + 1) % len(loop)]
            if (a, b) in directed:
                violations.append(
                    f"edge ({a},{b}): appears twice with same orientation "
                    f"(faces {directed[(a, b)]} and {fi})"
                )
            directed[(a, b)] = fi
    for (a, b) in list(directed):
        if (b, a) not in directed:
            violations.append(f"edge ({a},{b}): missing opposite orientation")

    v, e, f = len(p.vertices), len(p.edges), len(p.faces)
    if v - e + f != 2:
        violations.append(f"Euler characteristic V-E+F = {v - e + f}, expected 2")

    for fi, loop in enumerate(p.faces):
        pts = p.vertices[list(loop)]
        c = pts.mean(axis=0)
        # best-fit plane via SVD; residual = max distance to it
        _, _, vt = np.linalg.svd(pts - c)
        n = vt[-1]
        dist = np.abs((pts - c) @ n).max()
        if dist > tol_planar:
            violations.append(f"face {fi}: planarity residual {dist:.3e} > {tol_planar:.3e}")
        try:
            p.face_normal(fi)
        except GeometryError as exc:
            violations.append(str(exc))

    return ValidationReport(ok=not violations, violations=violations)


class TruncationSpec:
    """Per-vertex truncation radii. A scalar applies to every vertex."""

    def __init__(self, eps):
        self.eps = eps

    def radius(self, vi):
        if np.isscalar(self.eps):
            return float(self.eps)
        return float(self.eps[vi])

    @staticmethod
    def default_for(p):
        eps = np.full(len(p.vertices), np.inf)
        for a, b in p.edges:
            length = np.linalg.norm(p.vertices[b] - p.vertices[a])
            eps[a] = min(eps[a], length)
            eps[b] = min(eps[b], length)
        return TruncationSpec(eps * DEFAULT_EPS_FACTOR)


# ---------------------------------------------------------------------------
# cells
# ---------------------------------------------------------------------------


@dataclasses.dataclass
class FaceCircle:
    """The circle of directors parallel to a face: frame (u, v, normal)."""

    normal: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def angle_of(self, vec):
        return float(np.arctan2(np.dot(vec, self.v), np.dot(vec, self.u)))

    def vec_at(self, theta):
        theta = np.asarray(theta, float)
        return np.multiply.outer(np.cos(theta), self.u) + np.multiply.outer(
            np.sin(theta), self.v
        )

    def off_plane(self, vecs):
        """Max |component along the normal| over the given vectors."""
        return float(np.abs(np.asarray(vecs) @ self.normal).max())


@dataclasses.dataclass
class TruncatedEdgeCell:
    cell_id: str
    vid_a: object
    vid_b: object
    p_a: np.ndarray  # trimmed endpoint on the a side
    p_b: np.ndarray
    direction: np.ndarray  # unit vector a -> b (canonical chart direction)

    def chart(self, t):
        t = np.asarray(t, float)
        return np.multiply.outer(1.0 - t, self.p_a) + np.multiply.outer(t, self.p_b)


@dataclasses.dataclass
class CleavedEdgeCell:
    """Arc on the sphere around `vertex`, lying in the plane of `owner_face`.

    chart(0) sits on `edge_start`, chart(1) on `edge_end`; the canonical
    direction agrees with the owner face's boundary loop.
    """

    cell_id: str
    vertex: object
    owner_face: str
    center: np.ndarray
    radius: float
    start_dir: np.ndarray  # unit, from the vertex, at t=0
    sweep: float  # total angle swept; rotation is about -normal
    normal: np.ndarray  # owner face plane normal
    edge_start: str  # truncated edge cell id carrying chart(0)
    edge_end: str

    def dir_at(self, t):
        t = np.asarray(t, float)
        c, s = np.cos(self.sweep * t), np.sin(self.sweep * t)
        w = np.cross(-self.normal, self.start_dir)
        return np.multiply.outer(c, self.start_dir) + np.multiply.outer(s, w)

    def chart(self, t):
        return self.center + self.radius * self.dir_at(t)


@dataclasses.dataclass
class CleavedFaceCell:
    """Spherical polygon around `vertex`; `loop` lists (arc_id, sign) in the
    boundary order induced by the outward orientation of the truncated
    surface (sign -1 means the arc is traversed against its chart)."""

    cell_id: str
    vertex: object
    center: np.ndarray
    radius: float
    loop: list
    corner_dirs: list  # unit directions of the loop's corner points
    corner_edges: list  # truncated edge id at each corner


@dataclasses.dataclass
class TangentFaceCell:
    """A face of the original boundary carrying the tangency condition."""

    cell_id: str
    circle: FaceCircle
    origin: np.ndarray
    boundary_loops: list  # list of loops; each loop = list of (cell_id, sign)
    polygon2d: list  # list of loops of 2D coords (outer first), for probes
    arc_ids: list  # cleaved edges of this face, in canonical order

    def to_plane(self, points):
        rel = np.asarray(points, float) - self.origin
        return np.stack([rel @ self.circle.u, rel @ self.circle.v], axis=-1)

    def from_plane(self, xy):
        xy = np.asarray(xy, float)
        return (
            self.origin
            + np.multiply.outer(xy[..., 0], self.circle.u)
            + np.multiply.outer(xy[..., 1], self.circle.v)
        )


# ---------------------------------------------------------------------------
# generic builder: shared by polyhedra and the post domain
# ---------------------------------------------------------------------------


def _ccw_angle(u_from, u_to, normal):
    """Counterclockwise angle from u_from to u_to about `normal`, in (0, 2pi)."""
    s = float(np.dot(np.cross(u_from, u_to), normal))
    c = float(np.dot(u_from, u_to))
    ang = np.arctan2(s, c)
    if ang <= 1e-12:
        ang += 2 * np.pi
    return ang


class ComplexBuilder:
    """Assembles the truncated cell complex from an abstract description.

    Vertices, edges and faces are registered with stable string ids; the
    builder derives truncated edges, arcs, cleaved faces and the directed
    boundary structure.
    """

    def __init__(self):
        self.vpos = {}
        self.veps = {}
        self.edges = {}  # eid -> (vid_a, vid_b)
        self.faces = {}  # fid -> dict(normal=..., loops=[...])

    def add_vertex(self, vid, pos, eps):
        self.vpos[vid] = np.asarray(pos, float)
        self.veps[vid] = float(eps)

    def add_edge(self, eid, vid_a, vid_b):
        self.edges[eid] = (vid_a, vid_b)

    def add_face(self, fid, normal, loops):
        """loops: list of loops; each loop is a list of entries
        (vertex_id_or_None, corner_position, outgoing_cell_id, out_is_edge).

        Entries traverse the loop in the face's boundary orientation (ccw
        about the outward normal for the outer loop, cw for holes). If
        vertex_id is None the corner is not truncated (no arc there).
        outgoing_cell_id names the 1-cell from this corner to the next; it is
        a truncated edge id when out_is_edge, otherwise an opaque reference
        (prism edges on the post domain).
        """
        self.faces[fid] = {"normal": normalize(normal), "loops": loops}

    def build(self):
        cx = TangentComplex()
        cx.vertex_pos = dict(self.vpos)
        cx.vertex_eps = dict(self.veps)
        cx.edge_faces = {}

        for eid in sorted(self.edges):
            a, b = self.edges[eid]
            pa, pb = self.vpos[a], self.vpos[b]
            u = normalize(pb - pa)
            length = float(np.linalg.norm(pb - pa))
            ea, eb = self.veps[a], self.veps[b]
            if ea + eb >= length:
                raise BallsOverlap(f"truncation balls meet along edge {eid}")
            cell = TruncatedEdgeCell(
                cell_id=f"te:{eid}",
                vid_a=a,
                vid_b=b,
                p_a=pa + ea * u,
                p_b=pb - eb * u,
                direction=u,
            )
            cx.truncated_edges[cell.cell_id] = cell

        # arcs + face boundary cycles
        arc_by_start = {}  # (vid, te_id) -> arc id, arc starting on that edge
        for fid in sorted(self.faces):
            rec = self.faces[fid]
            n = rec["normal"]
            u, v = orthonormal_frame(n)
            circle = FaceCircle(normal=n, u=u, v=v)
            all_loops = []
            poly2d = []
            origin = None
            arc_ids = []
            for loop in rec["loops"]:
                m = len(loop)
                cycle = []
                coords = []
                for k in range(m):
                    vid, pos, out_cell, out_is_edge = loop[k]
                    pos = np.asarray(pos, float)
                    if origin is None:
                        origin = pos
                    coords.append(pos)
                    if vid is not None:
                        prev_entry = loop[(k - 1) % m]
                        in_cell, in_is_edge = prev_entry[2], prev_entry[3]
                        if not (in_is_edge and out_is_edge):
                            raise GeometryError(
                                f"truncated corner {vid} of face {fid} must "
                                "join two truncated edges"
                            )
                        prev_pos = np.asarray(prev_entry[1], float)
                        next_pos = np.asarray(loop[(k + 1) % m][1], float)
                        u_prev = normalize(prev_pos - pos)
                        u_next = normalize(next_pos - pos)
                        interior = _ccw_angle(u_next, u_prev, n)
                        arc = CleavedEdgeCell(
                            cell_id=f"ce:{vid}:{fid}",
                            vertex=vid,
                            owner_face=fid,
                            center=pos,
                            radius=self.veps[vid],
                            start_dir=u_prev,
                            sweep=interior,
                            normal=n,
                            edge_start=f"te:{in_cell}",
                            edge_end=f"te:{out_cell}",
                        )
                        cx.cleaved_edges[arc.cell_id] = arc
                        arc_ids.append(arc.cell_id)
                        arc_by_start[(vid, arc.edge_start)] = arc.cell_id
                        cycle.append((arc.cell_id, 1))
                    if out_is_edge:
                        te_id = f"te:{out_cell}"
                        te = cx.truncated_edges[te_id]
                        next_vid = loop[(k + 1) % m][0]
                        sign = 1 if te.vid_a == vid else -1
                        if vid is None:
                            sign = 1 if te.vid_b == next_vid else -1
                        cx.edge_faces.setdefault(te_id, set()).add(fid)
                        cycle.append((te_id, sign))
                    else:
                        cycle.append((out_cell, 1))
                all_loops.append(cycle)
                coords = np.asarray(coords)
                rel = coords - origin
                poly2d.append(np.stack([rel @ u, rel @ v], axis=-1))
            cx.faces[fid] = TangentFaceCell(
                cell_id=fid,
                circle=circle,
                origin=origin,
                boundary_loops=all_loops,
                polygon2d=poly2d,
                arc_ids=arc_ids,
            )

        # cleaved face per truncated vertex: chain arcs end-edge -> start-edge
        for vid in sorted(self.vpos, key=str):
            arcs_here = sorted(
                (a for a in cx.cleaved_edges.values() if a.vertex == vid),
                key=lambda a: a.cell_id,
            )
            if not arcs_here:
                continue
            first = arcs_here[0]
            ordered = [first]
            while True:
                nxt_id = arc_by_start.get((vid, ordered[-1].edge_end))
                if nxt_id is None:
                    raise GeometryError(f"open arc cycle at vertex {vid}")
                if nxt_id == first.cell_id:
                    break
                ordered.append(cx.cleaved_edges[nxt_id])
                if len(ordered) > len(arcs_here):
                    raise GeometryError(f"arc cycle at vertex {vid} does not close")
            # canonical walk is +radial; the boundary of the truncated
            # surface induces the opposite orientation on the sphere patch
            loop = [(a.cell_id, -1) for a in reversed(ordered)]
            corner_dirs = []
            corner_edges = []
            for a in reversed(ordered):
                corner_dirs.append(a.dir_at(1.0))
                corner_edges.append(a.edge_end)
            cell = CleavedFaceCell(
                cell_id=f"cf:{vid}",
                vertex=vid,
                center=self.vpos[vid],
                radius=self.veps[vid],
                loop=loop,
                corner_dirs=corner_dirs,
                corner_edges=corner_edges,
            )
            cx.cleaved_faces[cell.cell_id] = cell
        return cx


class TangentComplex:
    """Cell complex interface consumed by every invariant computation."""

    def __init__(self):
        self.vertex_pos = {}
        self.vertex_eps = {}
        self.truncated_edges = {}
        self.cleaved_edges = {}
        self.cleaved_faces = {}
        self.faces = {}

    # deterministic orderings -------------------------------------------------
    def edge_ids(self):
        return sorted(self.truncated_edges)

    def arc_ids(self):
        return sorted(self.cleaved_edges)

    def patch_ids(self):
        return sorted(self.cleaved_faces)

    def face_ids(self):
        return sorted(self.faces)

    def anchor_edge(self):
        return self.edge_ids()[0]

    def cell(self, cell_id):
        for table in (
            self.truncated_edges,
            self.cleaved_edges,
            self.cleaved_faces,
            self.faces,
        ):
            if cell_id in table:
                return table[cell_id]
        raise KeyError(cell_id)

    def counts(self):
        return {
            "truncated_edges": len(self.truncated_edges),
            "cleaved_edges": len(self.cleaved_edges),
            "cleaved_faces": len(self.cleaved_faces),
            "truncated_faces": len(self.faces),
            "vertices": sum(len(c.loop) for c in self.cleaved_faces.values()),
        }


# ---------------------------------------------------------------------------
# truncation of a polyhedron
# ---------------------------------------------------------------------------


def _check_foreign_cells(p, eps_of):
    for vi in range(len(p.vertices)):
        pos = p.vertices[vi]
        eps = eps_of(vi)
        for ei, (a, b) in enumerate(p.edges):
            if vi in (a, b):
                continue
            if point_segment_distance(pos, p.vertices[a], p.vertices[b]) <= eps:
                raise BallMeetsForeignCell(
                    f"ball at vertex {vi} reaches edge {ei}"
                )
        for fi, loop in enumerate(p.faces):
            if vi in loop:
                continue
            n = p.face_normal(fi)
            origin = p.vertices[loop[0]]
            u, v = orthonormal_frame(n)
            rel = p.vertices[list(loop)] - origin
            poly = np.stack([rel @ u, rel @ v], axis=-1)
            d_plane = float(np.dot(pos - origin, n))
            proj = pos - d_plane * n
            pq = np.array([np.dot(proj - origin, u), np.dot(proj - origin, v)])
            if point_in_polygon(pq, poly):
                dist = abs(d_plane)
            else:
                dist = min(
                    point_segment_distance(
                        pos, p.vertices[loop[k]], p.vertices[loop[(k + 1) % len(loop)]]
                    )
                    for k in range(len(loop))
                )
            if dist <= eps:
                raise BallMeetsForeignCell(
                    f"ball at vertex {vi} reaches face {fi}"
                )


def build_truncated(p, spec=None, tol_planar=None):
    """Truncate a valid polyhedron into its boundary cell complex."""
    report = validate_polyhedron(p, tol_planar=tol_planar)
    if not report.ok:
        raise GeometryError("invalid polyhedron: " + "; ".join(report.violations))
    if spec is None:
        spec = TruncationSpec.default_for(p)

    def eps_of(vi):
        return spec.radius(vi)

    # pairwise disjoint balls
    for i in range(len(p.vertices)):
        for j in range(i + 1, len(p.vertices)):
            dist = float(np.linalg.norm(p.vertices[i] - p.vertices[j]))
            if eps_of(i) + eps_of(j) >= dist:
                raise BallsOverlap(f"balls at vertices {i} and {j} overlap")
    _check_foreign_cells(p, eps_of)

    builder = ComplexBuilder()
    for vi in range(len(p.vertices)):
        builder.add_vertex(f"v{vi}", p.vertices[vi], eps_of(vi))
    for ei, (a, b) in enumerate(p.edges):
        builder.add_edge(f"e{ei}", f"v{a}", f"v{b}")
    for fi, loop in enumerate(p.faces):
        n = p.face_normal(fi)
        entries = []
        for k in range(len(loop)):
            a, b = loop[k], loop[(k + 1) % len(loop)]
            ei = p.edge_index[(min(a, b), max(a, b))]
            entries.append((f"v{a}", p.vertices[a], f"e{ei}", True))
        builder.add_face(f"tf:f{fi}", n, [entries])
    cx = builder.build()
    cx.polyhedron = p
    return cx


# ---------------------------------------------------------------------------
# cleaved face meshes
# ---------------------------------------------------------------------------


class PatchMesh:
    """Oriented triangle mesh of a spherical polygon (or planar rectangle).

    `dirs` are the positions mapped to the unit sphere around the patch
    center (for spherical patches). Boundary vertices lie exactly on the
    arcs; `boundary` lists vertex indices around the rim in the patch's own
    orientation, with `boundary_tags` naming the (arc, parameter) of each.
    """

    def __init__(self, points, triangles, boundary, boundary_tags, center=None, radius=None):
        self.points = np.asarray(points, float)
        self.triangles = np.asarray(triangles, int)
        self.boundary = list(boundary)
        self.boundary_tags = list(boundary_tags)
        self.center = center
        self.radius = radius
        if center is not None:
            self.dirs = (self.points - center) / radius
        else:
            self.dirs = None

    def signed_area(self):
        """Spherical area measured in the patch's own orientation."""
        if self.dirs is None:
            raise GeometryError("signed_area requires a spherical patch")
        return float(-np.sum(triangle_solid_angles(self.dirs, self.triangles)))

    def edge_adjacency(self):
        if not hasattr(self, "_edge_cache"):
            t = self.triangles
            pairs = np.vstack([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
            pairs.sort(axis=1)
            self._edge_cache = np.unique(pairs, axis=0)
        return self._edge_cache


def patch_area(cx, face_id):
    """Exact spherical area of a cleaved face via Gauss-Bonnet.

    All boundary arcs are great-circle (geodesic) segments, so the area is
    the angle excess: sum of interior corner angles minus (n-2)*pi.
    """
    cell = cx.cleaved_faces[face_id]
    n = len(cell.loop)
    total = 0.0
    for k in range(n):
        arc_id, sign = cell.loop[k]
        arc_prev_id, sign_prev = cell.loop[(k - 1) % n]
        arc = cx.cleaved_edges[arc_id]
        prev = cx.cleaved_edges[arc_prev_id]

        def tangent(a, t, direction):
            w = np.cross(-a.normal, a.start_dir)
            d = -np.sin(a.sweep * t) * a.start_dir + np.cos(a.sweep * t) * w
            return normalize(direction * a.sweep * d)

        corner = arc.dir_at(0.0 if sign == 1 else 1.0)
        out_t = tangent(arc, 0.0 if sign == 1 else 1.0, sign)
        in_t = tangent(prev, 1.0 if sign_prev == 1 else 0.0, sign_prev)
        interior = _ccw_angle(out_t, -in_t, -corner)
        total += interior
    return total - (n - 2) * np.pi


def _pick_fan_center(arcs, candidates):
    """Pick a fan center for a spherical polygon: prefer a center whose fan
    triangles over the (quarter-turn-split) rim are single-signed, i.e. a
    genuine star center. Large patches (more than a hemisphere, as at the
    top corners of a post) need the center on the far side."""

    def rim_points(n_per=4):
        pts = []
        for arc, sign in arcs:
            ts = np.linspace(0.0, 1.0, n_per, endpoint=False)
            if sign == -1:
                ts = 1.0 - ts
            pts.extend(arc.dir_at(ts))
        return np.asarray(pts)

    rim = rim_points()
    best = None
    for cand in candidates:
        signs = []
        for i in range(len(rim)):
            a, b = rim[i], rim[(i + 1) % len(rim)]
            det = float(np.dot(cand, np.cross(a, b)))
            signs.append(det)
        signs = np.asarray(signs)
        if np.all(signs < 1e-12):
            return cand
        if best is None:
            best = cand
    return best


def triangulate_cleaved_face(cx, face_id, level):
    """Fan-and-subdivide mesh of a cleaved face.

    Level 0 is a fan from the spherical centroid with one triangle per arc;
    each level quadruples the triangle count. Boundary midpoints are placed
    exactly on the arcs, interior midpoints reprojected to the sphere.
    """
    cell = cx.cleaved_faces[face_id]
    area = patch_area(cx, face_id)
    if area >= 4 * np.pi - 0.2:
        raise DegeneratePatch(
            f"{face_id}: patch subtends {area:.3f} sr (nearly the full sphere)"
        )

    arcs = [(cx.cleaved_edges[a], s) for a, s in cell.loop]
    corners = [a.dir_at(0.0 if s == 1 else 1.0) for a, s in arcs]
    csum = normalize(np.asarray(corners).sum(axis=0) + 1e-12 * np.ones(3))
    centroid = _pick_fan_center(arcs, [csum, -csum])

    dirs = [centroid]
    n_arc = len(arcs)
    tris = []
    rim_arc = {}  # undirected boundary mesh edge -> arc position k in `arcs`
    chart_t = {}  # boundary vertex -> {k: chart parameter on arcs[k]}

    def chart_of(k, t):
        arc, sign = arcs[k]
        return arc.dir_at(t)

    # rim vertices: corners, plus interior arc points so no chord spans
    # more than a quarter turn (a single chord misrepresents reflex arcs)
    rim = []  # (vertex index, arc k, chart t), in patch traversal order
    for k in range(n_arc):
        arc, sign = arcs[k]
        n_sub = max(1, int(np.ceil(arc.sweep / (0.5 * np.pi + 1e-9))))
        for j in range(n_sub):
            t_patch = j / n_sub
            t_chart = t_patch if sign == 1 else 1.0 - t_patch
            idx = len(dirs)
            dirs.append(chart_of(k, t_chart))
            chart_t.setdefault(idx, {})[k] = t_chart
            if j == 0 and k > 0:
                # corner: also belongs to the previous arc
                kp = k - 1
                arc_p, sign_p = arcs[kp]
                chart_t[idx][kp] = 1.0 if sign_p == 1 else 0.0
            rim.append((idx, k))
    # close the loop: first rim vertex is also the end of the last arc
    k_last = n_arc - 1
    arc_l, sign_l = arcs[k_last]
    chart_t[rim[0][0]][k_last] = 1.0 if sign_l == 1 else 0.0

    m = len(rim)
    for j in range(m):
        a, k_a = rim[j]
        b, _ = rim[(j + 1) % m]
        tris.append((0, a, b))
        rim_arc[(min(a, b), max(a, b))] = k_a

    # orientation: patch triangles must wind with the surface's outward
    # normal, which points toward the truncation center (-radial). The fan
    # over geodesic arcs tiles the polygon with signs, so its total signed
    # solid angle must equal minus the Gauss-Bonnet area exactly.
    fan_total = sum(
        float(
            2.0
            * np.arctan2(
                np.dot(dirs[0], np.cross(dirs[a], dirs[b])),
                1.0
                + np.dot(dirs[0], dirs[a])
                + np.dot(dirs[a], dirs[b])
                + np.dot(dirs[b], dirs[0]),
            )
        )
        for _, a, b in tris
    )
    if abs(fan_total + area) > 1e-6:
        raise GeometryError(
            f"{face_id}: boundary loop orientation unexpected "
            f"(fan {fan_total:.4f} vs area {area:.4f})"
        )

    for _ in range(level):
        new_tris = []
        midpoint = {}

        def mid(i, j):
            key = (min(i, j), max(i, j))
            if key in midpoint:
                return midpoint[key]
            idx = len(dirs)
            if key in rim_arc:
                k = rim_arc[key]
                t_m = 0.5 * (chart_t[i][k] + chart_t[j][k])
                dirs.append(chart_of(k, t_m))
                chart_t[idx] = {k: t_m}
                rim_arc[(min(i, idx), max(i, idx))] = k
                rim_arc[(min(j, idx), max(j, idx))] = k
            else:
                dirs.append(normalize(dirs[i] + dirs[j]))
            midpoint[key] = idx
            return idx

        for (a, b, c) in tris:
            m_ab, m_bc, m_ca = mid(a, b), mid(b, c), mid(c, a)
            new_tris += [
                (a, m_ab, m_ca),
                (m_ab, b, m_bc),
                (m_ca, m_bc, c),
                (m_ab, m_bc, m_ca),
            ]
        tris = new_tris

    dirs = np.asarray(dirs)
    tris = np.asarray(tris, int)
    points = cell.center + cell.radius * dirs

    boundary, boundary_tags = _trace_boundary(tris, arcs, chart_t)
    return PatchMesh(points, tris, boundary, boundary_tags, center=cell.center, radius=cell.radius)


def _trace_boundary(tris, arcs, chart_t):
    """Walk the mesh boundary in triangle-winding order and tag each vertex
    with its (arc_id, chart parameter); corner vertices are tagged with the
    truncated edge they sit on."""
    count = {}
    forward = set()
    for t in tris:
        for i in range(3):
            a, b = int(t[i]), int(t[(i + 1) % 3])
            key = (min(a, b), max(a, b))
            count[key] = count.get(key, 0) + 1
            forward.add((a, b))
    nxt = {}
    for (a, b), c in count.items():
        if c == 1:
            if (a, b) in forward:
                nxt[a] = b
            else:
                nxt[b] = a
    start = min(nxt)
    boundary = [start]
    while True:
        n = nxt[boundary[-1]]
        if n == start:
            break
        boundary.append(n)

    tags = []
    for idx in boundary:
        owners = chart_t[idx]
        if len(owners) > 1:
            # corner shared by two arcs: tag with the truncated edge there
            k = min(owners)
            arc, sign = arcs[k]
            t = owners[k]
            eid = arc.edge_start if t < 0.5 else arc.edge_end
            tags.append(("corner", eid))
        else:
            (k, t), = owners.items()
            arc, sign = arcs[k]
            tags.append((arc.cell_id, t))
    return boundary, tags


# ---------------------------------------------------------------------------
# canonical fixture polyhedra
# ---------------------------------------------------------------------------


def cube(side=1.0, center=(0.0, 0.0, 0.0)):
    s = side / 2.0
    c = np.asarray(center, float)
    verts = np.array(
        [
            [-s, -s, -s],
            [s, -s, -s],
            [s, s, -s],
            [-s, s, -s],
            [-s, -s, s],
            [s, -s, s],
            [s, s, s],
            [-s, s, s],
        ]
    ) + c
    faces = [
        (0, 3, 2, 1),  # bottom, outward -z
        (4, 5, 6, 7),  # top, outward +z
        (0, 1, 5, 4),  # front y=-s, outward -y
        (2, 3, 7, 6),  # back y=+s, outward +y
        (1, 2, 6, 5),  # right x=+s, outward +x
        (0, 4, 7, 3),  # left x=-s, outward -x
    ]
    return Polyhedron(verts, faces)


def tetrahedron(scale=1.0):
    verts = np.array(
        [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float
    ) * scale / np.sqrt(3.0)
    faces = [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)]
    return Polyhedron(verts, faces)


def l_prism(leg=1.0, height=1.0):
    """L-shaped prism: an L cross-section extruded vertically. Has one
    reflex vertical edge, exercising wedge angles above pi."""
    a = leg
    base = [(0, 0), (2 * a, 0), (2 * a, a), (a, a), (a, 2 * a), (0, 2 * a)]
    lo = [(x, y, 0.0) for x, y in base]
    hi = [(x, y, height) for x, y in base]
    verts = np.array(lo + hi)
    n = len(base)
    faces = [tuple(reversed(range(n)))]  # bottom, outward -z
    faces.append(tuple(range(n, 2 * n)))  # top, outward +z
    for k in range(n):
        a0, b0 = k, (k + 1) % n
        faces.append((a0, b0, b0 + n, a0 + n))
    return Polyhedron(verts, faces)
