"""Integer invariants of director-field pairs.

Two engines do all the counting:

* circle windings — a closed director loop in a face circle has an integer
  winding in half-turn units, computed by angle unwrapping and cross-checked
  by counting signed crossings of a generic level;
* sphere degrees — a closed oriented triangulated map to the unit sphere
  has an integer degree, computed as total signed solid angle / 4*pi and
  cross-checked by counting signed preimages of a generic direction.

On top sit the chains: per cleaved edge the winding of the comparison loop
of the two fields, and (when those all vanish) per cleaved face the degree
of the comparison sphere glued from both lifted fields and an edge
homotopy.
"""

import dataclasses

import numpy as np

from .errors import (
    DegreeMethodsDisagree,
    EvaluationFailure,
    InconsistentLift,
    NotClosed,
    OffCircle,
    PreconditionError,
    ResolutionTooCoarse,
)
from .field import Resolution, sample_edge, sample_patch
from .geometry import (
    director_distance,
    normalize,
    triangle_solid_angles,
    unwrap_angles,
)
from .lift import AMBIGUOUS_DOT, LiftSeed, _chain_signs

INT_GUARD = 0.25

UNIT_HALF_TURNS = "half-turns"
UNIT_FULL_TURNS = "full-turns"
UNIT_DEGREE = "degree"


@dataclasses.dataclass
class InvariantChain:
    """Formal integer combination of cells. Zero coefficients are absent."""

    unit: str
    coefficients: dict
    sign_ambiguous: bool = False
    sublattice: tuple = None

    @classmethod
    def build(cls, unit, coeffs, sign_ambiguous=False, sublattice=None):
        clean = {k: int(v) for k, v in sorted(coeffs.items()) if int(v) != 0}
        return cls(unit, clean, sign_ambiguous, sublattice)

    def is_zero(self):
        return not self.coefficients

    def __getitem__(self, cell_id):
        return self.coefficients.get(cell_id, 0)

    def negated(self):
        return InvariantChain.build(
            self.unit,
            {k: -v for k, v in self.coefficients.items()},
            self.sign_ambiguous,
            self.sublattice,
        )

    def added(self, other):
        if other.unit != self.unit:
            raise ValueError("cannot add chains with different units")
        keys = set(self.coefficients) | set(other.coefficients)
        return InvariantChain.build(
            self.unit,
            {k: self[k] + other[k] for k in keys},
            self.sign_ambiguous or other.sign_ambiguous,
            self.sublattice,
        )

    def to_json(self):
        return {
            "unit": self.unit,
            "coefficients": dict(self.coefficients),
            "sign_ambiguous": bool(self.sign_ambiguous),
            "sublattice": list(self.sublattice) if self.sublattice else None,
        }


def _round_guarded(x, what):
    r = round(x)
    if abs(x - r) >= INT_GUARD:
        raise ResolutionTooCoarse(f"{what}: {x:.4f} is not within {INT_GUARD} of an integer")
    return int(r)


# ---------------------------------------------------------------------------
# winding engine
# ---------------------------------------------------------------------------


def _director_steps(raw):
    """Minimal signed angle steps between consecutive director angles."""
    d = np.diff(raw)
    steps = (d + np.pi / 2) % np.pi - np.pi / 2
    if np.any(np.abs(np.abs(steps) - np.pi / 2) < 1e-9):
        raise ResolutionTooCoarse("director loop has a near-orthogonal step")
    return steps


def winding_half_turns(values, circle, tol_tangent=1e-6, closed_tol=1e-7):
    """Winding of a closed director loop inside a face circle, in half-turn
    units. The loop must start and end at the same director."""
    values = np.asarray(values, float)
    if circle.off_plane(values) > tol_tangent:
        raise OffCircle(
            f"loop leaves the face circle by {circle.off_plane(values):.2e}"
        )
    if director_distance(values[0], values[-1]) > closed_tol:
        raise NotClosed("loop endpoints differ as directors")
    raw = np.arctan2(values @ circle.v, values @ circle.u)
    steps = _director_steps(raw)
    return _round_guarded(float(np.sum(steps)) / np.pi, "winding")


def winding_crossing_oracle(values, circle, seed=0):
    """Signed crossings of a generic circle point by the director loop.

    Independent of the unwrap: each segment is tested for whether its
    minimal rotation crosses the test level (mod pi)."""
    values = np.asarray(values, float)
    raw = np.arctan2(values @ circle.v, values @ circle.u)
    steps = _director_steps(raw)
    rng = np.random.default_rng(1234 + seed)
    for _ in range(64):
        psi = float(rng.uniform(0.05, np.pi - 0.05))
        margin = min(
            float(np.min(np.abs(((raw - psi) + np.pi / 2) % np.pi - np.pi / 2))),
            1.0,
        )
        if margin < 1e-6:
            continue
        total = 0
        for a, d in zip(raw[:-1], steps):
            total += int(np.floor((a + d - psi) / np.pi) - np.floor((a - psi) / np.pi))
        return total
    raise ResolutionTooCoarse("no generic test level found for crossing count")


# ---------------------------------------------------------------------------
# degree engine
# ---------------------------------------------------------------------------


def check_closed_oriented(triangles):
    """Every undirected edge must appear in exactly two triangles with
    opposite directions."""
    t = np.asarray(triangles, dtype=np.int64)
    directed = np.vstack([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    n = int(directed.max()) + 1
    codes = directed[:, 0] * n + directed[:, 1]
    if len(np.unique(codes)) != len(codes):
        raise NotClosed("a directed mesh edge appears twice")
    lo = directed.min(axis=1)
    hi = directed.max(axis=1)
    und, counts = np.unique(lo * n + hi, return_counts=True)
    if np.any(counts != 2):
        bad = und[counts != 2][0]
        raise NotClosed(
            f"mesh edge ({bad // n}, {bad % n}) is not matched with opposite "
            "orientation"
        )


def _preimage_degree(values, triangles, omegas, seed=0):
    rng = np.random.default_rng(9876 + seed)
    live = np.abs(omegas) > 1e-12
    a = values[triangles[live, 0]]
    b = values[triangles[live, 1]]
    c = values[triangles[live, 2]]
    ab = np.cross(a, b)
    bc = np.cross(b, c)
    ca = np.cross(c, a)
    mid = a + b + c
    for _ in range(128):
        w = normalize(rng.normal(size=3))
        s1 = ab @ w
        s2 = bc @ w
        s3 = ca @ w
        near = (np.abs(s1) < 1e-10) | (np.abs(s2) < 1e-10) | (np.abs(s3) < 1e-10)
        if np.any(near):
            continue
        same_side = mid @ w > 0  # exclude the antipodal cone
        hit = ((s1 > 0) & (s2 > 0) & (s3 > 0)) | ((s1 < 0) & (s2 < 0) & (s3 < 0))
        if np.any(hit & (np.abs(mid @ w) < 1e-10)):
            continue
        pos = (s1 > 0) & (s2 > 0) & (s3 > 0) & same_side
        neg = (s1 < 0) & (s2 < 0) & (s3 < 0) & same_side
        return int(np.sum(pos)) - int(np.sum(neg))
    raise ResolutionTooCoarse("no generic preimage direction found")


def sphere_degree(values, triangles, require_closed=True, seed=0):
    """Degree of a closed oriented triangulated map to the unit sphere.

    Primary method: total signed solid angle / 4*pi. Always cross-checked
    against the signed preimage count of a generic direction; disagreement
    is a hard error."""
    values = np.asarray(values, float)
    triangles = np.asarray(triangles, int)
    if require_closed:
        check_closed_oriented(triangles)
    omegas = triangle_solid_angles(values, triangles)
    by_area = _round_guarded(float(np.sum(omegas)) / (4 * np.pi), "sphere degree")
    by_count = _preimage_degree(values, triangles, omegas, seed=seed)
    if by_area != by_count:
        raise DegreeMethodsDisagree(
            f"area method {by_area} vs preimage method {by_count}"
        )
    return by_area


# ---------------------------------------------------------------------------
# global lift of one field over the boundary 2-skeleton
# ---------------------------------------------------------------------------


class BoundaryLift:
    """Lifted data of one field over a tangent complex.

    Yields the constant lifted vector on every truncated edge (the edge
    orientations), lifted arc paths in their face circles, and lifted patch
    meshes, all consistent with one seed choice at the anchor edge."""

    def __init__(self, field, cx, res=None, seed=None, patches=None):
        self.field = field
        self.cx = cx
        self.res = res or Resolution()
        self.seed = seed or LiftSeed()
        anchor = self.seed.anchor_edge or cx.anchor_edge()
        self.anchor = anchor

        self.edge_vec = {}
        self.arc_paths = {}
        self.arc_lifts = {}
        self.patch_values = {}
        self.patch_meshes = {}

        self._lift_skeleton()
        self._lift_patches(patches)

    # -- 1-skeleton --------------------------------------------------------
    def _edge_direction_check(self, te_id):
        te = self.cx.truncated_edges[te_id]
        pts = te.chart(np.array([0.0, 0.5, 1.0]))
        vals = self.field.evaluate(te_id, pts)
        for v in vals:
            if director_distance(v, te.direction) > 1e-5:
                raise EvaluationFailure(
                    f"{self.field.name}: value on {te_id} is not parallel to the edge"
                )

    def _lift_skeleton(self):
        cx = self.cx
        for te_id in cx.edge_ids():
            self._edge_direction_check(te_id)

        arcs_at_edge = {te_id: [] for te_id in cx.edge_ids()}
        for arc_id in cx.arc_ids():
            arc = cx.cleaved_edges[arc_id]
            arcs_at_edge[arc.edge_start].append((arc_id, 0))
            arcs_at_edge[arc.edge_end].append((arc_id, 1))

        anchor_cell = cx.truncated_edges[self.anchor]
        self.edge_vec[self.anchor] = self.seed.sign * anchor_cell.direction
        queue = [self.anchor]
        pending = set(cx.arc_ids())
        while queue:
            te_id = queue.pop(0)
            for arc_id, end in sorted(arcs_at_edge[te_id]):
                if arc_id not in pending:
                    continue
                pending.discard(arc_id)
                arc = self.cx.cleaved_edges[arc_id]
                path = sample_edge(
                    self.field, cx, arc_id, n0=self.res.edge_samples, res=self.res
                )
                vals = path.values
                if end == 1:
                    vals = vals[::-1]
                start_edge = arc.edge_start if end == 0 else arc.edge_end
                other_edge = arc.edge_end if end == 0 else arc.edge_start
                start_vec = self.edge_vec[start_edge]
                d = float(np.dot(start_vec, vals[0]))
                if abs(d) < AMBIGUOUS_DOT:
                    raise InconsistentLift(f"{arc_id}: ambiguous start sign")
                lifted = _chain_signs(vals, vals[0] if d > 0 else -vals[0])
                if end == 1:
                    lifted = lifted[::-1]
                self.arc_paths[arc_id] = path
                self.arc_lifts[arc_id] = lifted
                end_vec = lifted[-1] if end == 0 else lifted[0]
                te_other = self.cx.truncated_edges[other_edge]
                proposal = (
                    te_other.direction
                    if float(np.dot(end_vec, te_other.direction)) > 0
                    else -te_other.direction
                )
                if director_distance(end_vec, te_other.direction) > 1e-5:
                    raise EvaluationFailure(
                        f"{arc_id}: endpoint not parallel to {other_edge}"
                    )
                if other_edge in self.edge_vec:
                    if float(np.dot(proposal, self.edge_vec[other_edge])) < 0:
                        raise InconsistentLift(
                            f"{self.field.name}: lift sign flips around a cycle "
                            f"through {arc_id}"
                        )
                else:
                    self.edge_vec[other_edge] = proposal
                    queue.append(other_edge)
        if pending or len(self.edge_vec) != len(cx.truncated_edges):
            raise InconsistentLift("boundary 1-skeleton is not connected")

    # -- patches -----------------------------------------------------------
    def _lift_patches(self, patches):
        from .lift import lift_patch

        from .field import SampledDirectorPatch

        for cf_id in self.cx.patch_ids():
            if patches and cf_id in patches:
                patch = patches[cf_id]
                vals = self.field.evaluate(cf_id, patch.points)
                dpatch = SampledDirectorPatch(cell_id=cf_id, mesh=patch, values=vals)
                if dpatch.max_step_angle() > self.res.theta_max:
                    raise ResolutionTooCoarse(
                        f"{cf_id}: shared mesh does not resolve {self.field.name}"
                    )
            else:
                dpatch = sample_patch(self.field, self.cx, cf_id, res=self.res)
            mesh = dpatch.mesh
            seed_idx = None
            seed_vec = None
            for pos, tag in enumerate(mesh.boundary_tags):
                if tag[0] == "corner":
                    seed_idx = mesh.boundary[pos]
                    seed_vec = self.edge_vec[tag[1]]
                    break
            lifted = lift_patch(dpatch, seed_idx, seed_vec)
            # the patch values must agree with the arc values along the rim
            # (a mismatch means the field is discontinuous across an arc)
            by_arc = {}
            for pos, tag in enumerate(mesh.boundary_tags):
                if tag[0] == "corner":
                    idx = mesh.boundary[pos]
                    if float(np.dot(lifted.values[idx], self.edge_vec[tag[1]])) < 0:
                        raise InconsistentLift(
                            f"{self.field.name}: patch {cf_id} disagrees with "
                            f"the edge orientation on {tag[1]}"
                        )
                else:
                    by_arc.setdefault(tag[0], []).append((tag[1], mesh.boundary[pos]))
            for arc_id, entries in sorted(by_arc.items()):
                ts = np.array([t for t, _ in entries])
                idxs = [i for _, i in entries]
                pts = self.cx.cleaved_edges[arc_id].chart(ts)
                arc_vals = self.field.evaluate(arc_id, pts)
                gap = np.array(
                    [director_distance(arc_vals[k], dpatch.values[idxs[k]])
                     for k in range(len(idxs))]
                )
                # genuine discontinuities are O(1); interpolated fills may
                # deviate by their sampling error, well below this gate
                if float(gap.max()) > 8e-2:
                    raise EvaluationFailure(
                        f"{self.field.name}: discontinuous across {arc_id} "
                        f"(gap {gap.max():.2e}); no continuous representative"
                    )
            self.patch_meshes[cf_id] = mesh
            self.patch_values[cf_id] = lifted.values

    # -- derived -----------------------------------------------------------
    def arc_angle_span(self, arc_id):
        """Lifted angle change along an arc, in its owner face circle."""
        arc = self.cx.cleaved_edges[arc_id]
        circle = self.cx.faces[arc.owner_face].circle
        vals = self.arc_lifts[arc_id]
        raw = np.arctan2(vals @ circle.v, vals @ circle.u)
        ang = unwrap_angles(raw)
        return float(ang[-1] - ang[0])

    def boundary_degree_total(self, seed=0):
        """Degree of the lifted field over the closed truncated boundary.

        Truncated faces map into great circles and contribute exactly zero,
        so only cleaved patches are summed."""
        total = 0.0
        tris_all = []
        vals_all = []
        offset = 0
        for cf_id in self.cx.patch_ids():
            mesh = self.patch_meshes[cf_id]
            vals = self.patch_values[cf_id]
            tris_all.append(mesh.triangles + offset)
            vals_all.append(vals)
            offset += len(vals)
        values = np.vstack(vals_all)
        triangles = np.vstack(tris_all)
        omegas = triangle_solid_angles(values, triangles)
        by_area = _round_guarded(float(np.sum(omegas)) / (4 * np.pi), "boundary degree")
        return by_area


def joint_patch_meshes(fields, cx, res):
    """Per cleaved face, the coarsest mesh level that resolves every field
    in the pair; comparison cylinders must share one mesh per face."""
    from .complex import triangulate_cleaved_face
    from .field import SampledDirectorPatch

    meshes = {}
    for cf_id in cx.patch_ids():
        level = res.level
        for _ in range(7):
            mesh = triangulate_cleaved_face(cx, cf_id, level)
            ok = True
            for f in fields:
                patch = SampledDirectorPatch(
                    cell_id=cf_id, mesh=mesh, values=f.evaluate(cf_id, mesh.points)
                )
                if patch.max_step_angle() > res.theta_max:
                    ok = False
                    break
            if ok:
                meshes[cf_id] = mesh
                break
            level += 1
        else:
            raise ResolutionTooCoarse(f"{cf_id}: no joint mesh resolves both fields")
    return meshes


def build_pair_lifts(f0, f1, cx, res=None, seed=None):
    """Lift both fields over the same patch meshes (so comparison cylinders
    glue exactly), with the same anchor seed."""
    res = res or Resolution()
    seed = seed or LiftSeed()
    meshes = joint_patch_meshes((f0, f1), cx, res)
    lift0 = BoundaryLift(f0, cx, res=res, seed=seed, patches=meshes)
    lift1 = BoundaryLift(f1, cx, res=res, seed=seed, patches=meshes)
    return lift0, lift1


# ---------------------------------------------------------------------------
# edge-level invariants
# ---------------------------------------------------------------------------


def edge_invariant(f0, f1, arc_id, cx, res=None):
    """Winding, in half-turns, of the comparison loop along one cleaved
    edge: f0 traversed forward, f1 backward, inside the owner face circle."""
    res = res or Resolution()
    arc = cx.cleaved_edges[arc_id]
    circle = cx.faces[arc.owner_face].circle
    p0 = sample_edge(f0, cx, arc_id, n0=res.edge_samples, res=res)
    p1 = sample_edge(f1, cx, arc_id, n0=res.edge_samples, res=res)
    loop = np.vstack([p0.values, p1.values[::-1], p0.values[:1]])
    return winding_half_turns(loop, circle, tol_tangent=10 * res.tol_tangent)


def edge_chain(lift0, lift1, cx=None):
    """First obstruction chain: per cleaved edge, the winding difference of
    the two lifted fields (equal to the comparison-loop winding)."""
    cx = cx or lift0.cx
    coeffs = {}
    for arc_id in cx.arc_ids():
        span0 = lift0.arc_angle_span(arc_id)
        span1 = lift1.arc_angle_span(arc_id)
        coeffs[arc_id] = _round_guarded((span0 - span1) / np.pi, f"edge chain[{arc_id}]")
    return InvariantChain.build(UNIT_HALF_TURNS, coeffs)


def face_sum_residuals(chain, cx):
    """Per truncated face, the sum of edge-chain coefficients over its
    cleaved edges (oriented with the face boundary). Zero for continuous
    tangent data."""
    out = {}
    for fid in cx.face_ids():
        face = cx.faces[fid]
        total = 0
        for loop in face.boundary_loops:
            for cell_id, sign in loop:
                if cell_id.startswith("ce:"):
                    total += sign * chain[cell_id]
        out[fid] = total
    return out


def patch_parity_residuals(chain, cx):
    """Per cleaved face, the mod-2 sum of its arcs' coefficients. A valid
    pair of liftable fields always gives zero: an odd total means one of
    the two data sets has no continuous sphere lift over that patch."""
    out = {}
    for cf_id in cx.patch_ids():
        cell = cx.cleaved_faces[cf_id]
        out[cf_id] = sum(chain[arc_id] for arc_id, _ in cell.loop) % 2
    return out


def boundary_degree(field, cx, res=None, seed=None):
    """Degree of the lifted field over the whole truncated boundary; zero is
    necessary for the data to extend to a continuous bulk field."""
    lift = BoundaryLift(field, cx, res=res, seed=seed)
    return lift.boundary_degree_total()


# ---------------------------------------------------------------------------
# edge homotopies and face-level invariants
# ---------------------------------------------------------------------------


@dataclasses.dataclass
class EdgeHomotopy:
    """Angle-linear interpolation between two lifted fields on every cleaved
    edge, constant on truncated edges.

    For each arc, theta0/theta1 are continuous lifted angle functions in the
    owner face circle with equal values at both ends (guaranteed by a zero
    edge chain). Optional wiggles add full turns that vanish at u=0,1 and at
    the arc ends; the face invariants must not depend on them."""

    arcs: dict  # arc_id -> (params0, angles0, params1, angles1)
    wiggles: dict  # arc_id -> integer number of inserted full turns

    def angle(self, arc_id, t, u):
        params0, ang0, params1, ang1 = self.arcs[arc_id]
        t = np.asarray(t, float)
        a0 = np.interp(t, params0, ang0)
        a1 = np.interp(t, params1, ang1)
        out = (1.0 - u) * a0 + u * a1
        k = self.wiggles.get(arc_id, 0)
        if k:
            out = out + 2 * np.pi * k * np.sin(np.pi * u) ** 2 * np.sin(np.pi * t) ** 2
        return out


def build_edge_homotopy(lift0, lift1, cx=None, wiggles=None):
    """Tangent homotopy data on the 1-skeleton; requires a zero edge chain."""
    cx = cx or lift0.cx
    chain = edge_chain(lift0, lift1, cx)
    if not chain.is_zero():
        raise PreconditionError("edge homotopy requires a zero edge chain")
    for te_id in cx.edge_ids():
        if float(np.dot(lift0.edge_vec[te_id], lift1.edge_vec[te_id])) < 0:
            raise InconsistentLift(
                f"edge orientations disagree on {te_id} despite a zero edge chain"
            )
    arcs = {}
    for arc_id in cx.arc_ids():
        arc = cx.cleaved_edges[arc_id]
        circle = cx.faces[arc.owner_face].circle
        runs = []
        for lift in (lift0, lift1):
            vals = lift.arc_lifts[arc_id]
            raw = np.arctan2(vals @ circle.v, vals @ circle.u)
            runs.append((lift.arc_paths[arc_id].params, unwrap_angles(raw)))
        (t0, a0), (t1, a1) = runs
        # both start at the same edge orientation: align the 2*pi branch
        shift = 2 * np.pi * round((a0[0] - a1[0]) / (2 * np.pi))
        a1 = a1 + shift
        if abs(a0[0] - a1[0]) > 1e-6 or abs(a0[-1] - a1[-1]) > 1e-6:
            raise InconsistentLift(f"{arc_id}: homotopy ends do not match")
        arcs[arc_id] = (t0, a0, t1, a1)
    return EdgeHomotopy(arcs=arcs, wiggles=dict(wiggles or {}))


def _column_value(lift0, cx, homotopy, tag, u):
    kind, info = tag
    if kind == "corner":
        return lift0.edge_vec[info]
    arc = cx.cleaved_edges[kind]
    circle = cx.faces[arc.owner_face].circle
    theta = homotopy.angle(kind, info, u)
    return np.cos(theta) * circle.u + np.sin(theta) * circle.v


def _interval_subdivision(cx, homotopy, tag_a, tag_b, subdiv):
    """Sub-tags strictly between two consecutive boundary positions, placed
    on the arc they share (none if either endpoint is untagged)."""
    if subdiv <= 1:
        return []
    arc_id = tag_a[0] if tag_a[0] != "corner" else tag_b[0]
    if arc_id == "corner":
        return []
    arc = cx.cleaved_edges[arc_id]
    t_a = tag_a[1] if tag_a[0] != "corner" else None
    t_b = tag_b[1] if tag_b[0] != "corner" else None
    if t_a is None:
        # tag_a is the corner where this arc begins (in traversal order)
        t_b2 = t_b
        t_a = 0.0 if abs(t_b2) < abs(t_b2 - 1.0) else 1.0
    if t_b is None:
        t_b = 0.0 if abs(t_a) < abs(t_a - 1.0) else 1.0
    return [
        (arc_id, t_a + (t_b - t_a) * j / subdiv) for j in range(1, subdiv)
    ]


def face_invariant(lift0, lift1, homotopy, face_id, cx=None, n_rows=None, seed=0):
    """Degree of the comparison sphere over one cleaved face: bottom patch
    (field 0), reversed top patch (field 1), and homotopy strips closing
    the cylinder. Wiggled homotopies vary faster along the arcs than the
    patch boundary sampling, so their strip columns are densified and
    stitched to the patch rims with sliver fans."""
    cx = cx or lift0.cx
    mesh = lift0.patch_meshes[face_id]
    bottom = lift0.patch_values[face_id]
    top = lift1.patch_values[face_id]
    arcs_here = [a for a, _ in cx.cleaved_faces[face_id].loop]
    max_wiggle = max((abs(homotopy.wiggles.get(a, 0)) for a in arcs_here), default=0)
    if n_rows is None:
        spread = 1.0
        for arc_id in arcs_here:
            p0, a0, p1, a1 = homotopy.arcs[arc_id]
            common = np.linspace(0, 1, 33)
            d = np.abs(np.interp(common, p0, a0) - np.interp(common, p1, a1))
            spread = max(spread, float(d.max()))
            spread += 2 * np.pi * abs(homotopy.wiggles.get(arc_id, 0))
        n_rows = max(4, int(np.ceil(spread / (np.pi / 4))))
    subdiv = max(1, 6 * max_wiggle)

    n = len(bottom)
    boundary = list(mesh.boundary)
    tags = list(mesh.boundary_tags)
    m = len(boundary)
    k = n_rows

    values = [np.asarray(bottom), np.asarray(top)]
    flat = []

    def push(v):
        flat.append(np.asarray(v, float))
        return 2 * n + len(flat) - 1

    # coarse columns: interior rows only (r = 1..k-1); row 0 and k are the
    # patch vertices themselves
    coarse = {}
    for pos in range(m):
        col = [boundary[pos]]
        for r in range(1, k):
            col.append(push(_column_value(lift0, cx, homotopy, tags[pos], r / k)))
        col.append(boundary[pos] + n)
        coarse[pos] = col

    # dense sub-columns per boundary interval, full height
    sub = {}
    for pos in range(m):
        nxt = (pos + 1) % m
        cols = []
        for tag in _interval_subdivision(cx, homotopy, tags[pos], tags[nxt], subdiv):
            col = [push(_column_value(lift0, cx, homotopy, tag, r / k))
                   for r in range(k + 1)]
            cols.append(col)
        sub[pos] = cols

    tris = [mesh.triangles.copy()]
    top_tris = mesh.triangles.copy() + n
    top_tris[:, [1, 2]] = top_tris[:, [2, 1]]
    tris.append(top_tris)

    side = []
    for pos in range(m):
        nxt = (pos + 1) % m
        chain = [coarse[pos]] + sub[pos] + [coarse[nxt]]
        for a_col, b_col in zip(chain[:-1], chain[1:]):
            for r in range(k):
                side.append((b_col[r], a_col[r], a_col[r + 1]))
                side.append((b_col[r], a_col[r + 1], b_col[r + 1]))
        if sub[pos]:
            # stitch the dense bottom/top chains to the patch rim edges
            a0, b0 = boundary[pos], boundary[nxt]
            ring = [a0] + [c[0] for c in sub[pos]] + [b0]
            for i in range(1, len(ring) - 1):
                side.append((a0, ring[i], ring[i + 1]))
            a1 = boundary[pos] + n
            ring = [a1] + [c[k] for c in sub[pos]] + [boundary[nxt] + n]
            for i in range(1, len(ring) - 1):
                side.append((a1, ring[i + 1], ring[i]))
    tris.append(np.asarray(side, int))
    all_vals = np.vstack(values + [np.asarray(flat)]) if flat else np.vstack(values)
    return sphere_degree(all_vals, np.vstack(tris), seed=seed)


def face_chain(lift0, lift1, cx=None, homotopy=None, wiggles=None):
    """Second obstruction chain: per cleaved face, the comparison-sphere
    degree. Defined up to one overall sign (the lift seed)."""
    cx = cx or lift0.cx
    if homotopy is None:
        homotopy = build_edge_homotopy(lift0, lift1, cx, wiggles=wiggles)
    coeffs = {}
    for idx, cf_id in enumerate(cx.patch_ids()):
        coeffs[cf_id] = face_invariant(lift0, lift1, homotopy, cf_id, cx, seed=idx)
    return InvariantChain.build(UNIT_DEGREE, coeffs, sign_ambiguous=True)
