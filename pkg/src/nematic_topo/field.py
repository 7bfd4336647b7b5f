"""Director fields on the boundary 2-skeleton, and their sampling.

A director is a line through the origin: we store a representative unit
vector but all comparisons are sign-free. Fields are evaluated per cell
(`eval_cell`), which keeps generator modifications local to cells and makes
shared-boundary sampling bit-reproducible.
"""

import dataclasses

import numpy as np

from .complex import PatchMesh, triangulate_cleaved_face
from .errors import EvaluationFailure, ResolutionExceeded
from .geometry import director_distance, normalize

TOL_TANGENT = 1e-6
THETA_MAX = np.pi / 3
MAX_DEPTH = 12


@dataclasses.dataclass
class Resolution:
    """Sampling parameters used across a whole computation.

    `edge_samples` is the initial 1-cell sampling density. Initial samples
    must already track the field within pi - theta_max per step: a director
    step near pi aliases to a small step and no refinement can recover it.
    """

    theta_max: float = THETA_MAX
    level: int = 3
    max_depth: int = MAX_DEPTH
    grid: int = 16  # base grid for rectangular (prism) faces
    edge_samples: int = 48
    tol_tangent: float = TOL_TANGENT

    def doubled(self):
        return Resolution(
            theta_max=self.theta_max,
            level=self.level + 1,
            max_depth=self.max_depth + 1,
            grid=self.grid * 2,
            edge_samples=self.edge_samples * 2,
            tol_tangent=self.tol_tangent,
        )


class DirectorField:
    """A director field on the cells of a complex.

    evaluate(cell_id, points) -> (n, 3) array of representative unit
    vectors. The representative sign carries no meaning; consumers must be
    sign-free. `metadata` records tangency claims and provenance.
    """

    def __init__(self, fn, name="field", params=None, tangent_faces=None,
                 top_mode=None, periodic=False, cell_overrides=None):
        self._fn = fn
        self._overrides = dict(cell_overrides or {})
        self.name = name
        self.params = dict(params or {})
        self.tangent_faces = set(tangent_faces or [])
        self.top_mode = top_mode
        self.periodic = periodic

    def evaluate(self, cell_id, points):
        points = np.atleast_2d(np.asarray(points, float))
        fn = self._overrides.get(cell_id, self._fn)
        vals = np.atleast_2d(np.asarray(fn(cell_id, points), float))
        if vals.shape != points.shape:
            raise EvaluationFailure(
                f"{self.name}: evaluator returned shape {vals.shape} for "
                f"{points.shape} points on {cell_id}"
            )
        norms = np.linalg.norm(vals, axis=1)
        if np.any(~np.isfinite(vals)) or np.any(np.abs(norms - 1) > 1e-6):
            raise EvaluationFailure(f"{self.name}: non-unit value on {cell_id}")
        return vals / norms[:, None]

    def with_override(self, cell_id, fn, name=None):
        """New field replacing the evaluator on one cell."""
        ov = dict(self._overrides)
        ov[cell_id] = fn
        out = DirectorField(
            self._fn,
            name=name or self.name,
            params=self.params,
            tangent_faces=self.tangent_faces,
            top_mode=self.top_mode,
            periodic=self.periodic,
            cell_overrides=ov,
        )
        return out


@dataclasses.dataclass
class SampledDirectorPath:
    """Directors sampled along a 1-cell chart at increasing parameters."""

    cell_id: str
    params: np.ndarray
    points: np.ndarray
    values: np.ndarray  # representative unit vectors

    def max_step_angle(self):
        dots = np.abs(np.einsum("ij,ij->i", self.values[:-1], self.values[1:]))
        return float(np.arccos(np.clip(dots.min(), -1.0, 1.0)))


@dataclasses.dataclass
class SampledDirectorPatch:
    """Directors at the vertices of an oriented patch mesh."""

    cell_id: str
    mesh: PatchMesh
    values: np.ndarray

    def max_step_angle(self):
        edges = np.asarray(self.mesh.edge_adjacency())
        dots = np.abs(
            np.einsum("ij,ij->i", self.values[edges[:, 0]], self.values[edges[:, 1]])
        )
        return float(np.arccos(np.clip(dots.min(), -1.0, 1.0)))


def _director_angle(a, b):
    d = abs(float(np.dot(a, b)))
    return float(np.arccos(np.clip(d, -1.0, 1.0)))


def sample_edge(field, cx, cell_id, n0=9, res=None):
    """Adaptively sample a 1-cell until consecutive directors are within
    theta_max. Each interval's midpoint is probed as part of the check, so
    a half-turn hiding between two samples (which sign-free endpoints alone
    cannot see) still triggers refinement. Bisection keeps all parameters
    dyadic, so shared points are sampled identically wherever the cell
    appears."""
    res = res or Resolution()
    cell = cx.cell(cell_id)
    n0 = max(2, int(n0))
    params = list(np.linspace(0.0, 1.0, n0))
    pts = cell.chart(np.asarray(params))
    vals = field.evaluate(cell_id, pts)
    values = [vals[i] for i in range(len(params))]
    points = [pts[i] for i in range(len(params))]

    depth = 0
    while True:
        mids_t = [0.5 * (params[i] + params[i + 1]) for i in range(len(params) - 1)]
        mids_p = cell.chart(np.asarray(mids_t))
        mids_v = field.evaluate(cell_id, mids_p)
        splits = [
            i
            for i in range(len(params) - 1)
            if _director_angle(values[i], mids_v[i])
            + _director_angle(mids_v[i], values[i + 1])
            > res.theta_max
        ]
        if not splits:
            break
        depth += 1
        if depth > res.max_depth:
            raise ResolutionExceeded(
                f"{cell_id}: angle bound not met at depth {res.max_depth}"
            )
        for i in reversed(splits):
            params.insert(i + 1, mids_t[i])
            points.insert(i + 1, mids_p[i])
            values.insert(i + 1, mids_v[i])
    return SampledDirectorPath(
        cell_id=cell_id,
        params=np.asarray(params),
        points=np.asarray(points),
        values=np.asarray(values),
    )


def sample_patch(field, cx, face_id, res=None, mesh_builder=None):
    """Sample a cleaved face on its triangle mesh, refining the mesh level
    until every mesh edge meets the angle bound."""
    res = res or Resolution()
    build = mesh_builder or (lambda lvl: triangulate_cleaved_face(cx, face_id, lvl))
    level = res.level
    for _ in range(6):
        mesh = build(level)
        values = field.evaluate(face_id, mesh.points)
        patch = SampledDirectorPatch(cell_id=face_id, mesh=mesh, values=values)
        if patch.max_step_angle() <= res.theta_max:
            return patch
        level += 1
    raise ResolutionExceeded(f"{face_id}: angle bound not met at level {level - 1}")


@dataclasses.dataclass
class TangencyReport:
    ok: bool
    violations: list  # (face_id, worst_point, angle)

    def __bool__(self):
        return self.ok


def _face_probe_points(cx, face_id, n=14):
    """Probe grid over a tangent face: boundary-offset polygon samples plus
    interior grid points, excluding truncation disks."""
    from .geometry import point_in_polygon

    face = cx.faces[face_id]
    pts = []
    outer = face.polygon2d[0]
    lo = outer.min(axis=0)
    hi = outer.max(axis=0)
    for x in np.linspace(lo[0], hi[0], n):
        for y in np.linspace(lo[1], hi[1], n):
            q = np.array([x, y])
            if not point_in_polygon(q, outer):
                continue
            if any(point_in_polygon(q, hole) for hole in face.polygon2d[1:]):
                continue
            pts.append(q)
    pts3 = face.from_plane(np.asarray(pts)) if pts else np.zeros((0, 3))
    keep = []
    for p in pts3:
        ok = True
        for vid, pos in cx.vertex_pos.items():
            if np.linalg.norm(p - pos) <= cx.vertex_eps[vid] * 1.05:
                ok = False
                break
        if ok:
            keep.append(p)
    return np.asarray(keep)


def check_tangency(field, cx, res=None, face_ids=None):
    """Check that the field lies in each tangent face's plane and that it is
    parallel to each truncated edge (the forced corollary)."""
    res = res or Resolution()
    violations = []
    ids = face_ids if face_ids is not None else sorted(field.tangent_faces or cx.faces)
    for fid in ids:
        if fid not in cx.faces:
            continue
        face = cx.faces[fid]
        probes = _face_probe_points(cx, fid)
        if len(probes) == 0:
            continue
        vals = field.evaluate(fid, probes)
        off = np.abs(vals @ face.circle.normal)
        worst = int(np.argmax(off))
        if off[worst] > res.tol_tangent:
            violations.append((fid, probes[worst], float(np.arcsin(min(1.0, off[worst])))))
        # arcs of this face must stay in the face plane too
        for arc_id in face.arc_ids:
            path = sample_edge(field, cx, arc_id, res=res)
            off = np.abs(path.values @ face.circle.normal)
            worst = int(np.argmax(off))
            if off[worst] > res.tol_tangent:
                violations.append(
                    (arc_id, path.points[worst], float(np.arcsin(min(1.0, off[worst]))))
                )
    checked = set(ids)
    for te_id in cx.edge_ids():
        # parallelism is forced only where both adjacent tangent faces are
        # part of the checked tangency claim
        if not getattr(cx, "edge_faces", {}).get(te_id, set()) <= checked:
            continue
        te = cx.truncated_edges[te_id]
        pts = te.chart(np.linspace(0, 1, 5))
        vals = field.evaluate(te_id, pts)
        for k in range(len(pts)):
            dist = director_distance(vals[k], te.direction)
            if dist > 10 * res.tol_tangent:
                violations.append((te_id, pts[k], float(dist)))
                break
    return TangencyReport(ok=not violations, violations=violations)


def constant_field(direction, name="uniform", **kw):
    d = normalize(direction)

    def fn(cell_id, pts):
        return np.tile(d, (len(pts), 1))

    return DirectorField(fn, name=name, params={"dir": list(d)}, **kw)
