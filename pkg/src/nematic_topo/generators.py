"""Fixture fields: generators that realize prescribed invariant values.

Every generator returns a `DirectorField` whose evaluator is routed per
cell, so modifications stay local and shared boundaries agree exactly.
The constructions:

* `uniform`        constant director;
* `tangent_base`   a canonical tangent field on any valid polyhedron,
                   built face-by-face from boundary angle data;
* `cube_bend`      the analytic escape field on the canonical cube;
* `edge_twist`     half-turn band across one truncated face, shifting the
                   edge chain by +n / -n on two of its cleaved edges;
* `face_bubble`    localized lifted-degree bumps on two cleaved faces;
* `post_base`      valid post-domain fields for both top-plate modes;
* `cell_rotor`     pi rotation across the unit cell (antiperiodic lift);
* `prism_bubble`   degree bumps on the periodic prism faces.
"""

import numpy as np

from .complex import TangentComplex
from .errors import GeometryError, InconsistentLift
from .field import DirectorField
from .geometry import (
    mean_value_interpolate,
    normalize,
    orthonormal_frame,
    rotation_about,
    slerp,
)
from .lift import _chain_signs


def smoothstep(t):
    t = np.clip(t, 0.0, 1.0)
    return t * t * (3.0 - 2.0 * t)


def uniform(direction, **kw):
    d = normalize(direction)

    def fn(cell_id, pts):
        return np.tile(d, (len(pts), 1))

    kw.setdefault("name", "uniform")
    kw.setdefault("params", {"dir": [float(x) for x in d]})
    return DirectorField(fn, **kw)


def cube_bend(**kw):
    """Tangent field on the canonical unit cube centered at the origin:
    each component vanishes on its pair of faces, singular only at the
    eight corners."""

    def fn(cell_id, pts):
        v = np.cos(np.pi * np.asarray(pts, float))
        n = np.linalg.norm(v, axis=1, keepdims=True)
        if np.any(n < 1e-12):
            raise GeometryError("cube_bend evaluated at a corner singularity")
        return v / n

    kw.setdefault("name", "cube_bend")
    return DirectorField(fn, **kw)


# ---------------------------------------------------------------------------
# canonical tangent base on a polyhedron
# ---------------------------------------------------------------------------


def _wrap_half(x):
    """Wrap an angle difference into (-pi/2, pi/2]."""
    out = (x + np.pi / 2) % np.pi - np.pi / 2
    if out <= -np.pi / 2 + 1e-12:
        out += np.pi
    return out


class _FaceAngleField:
    """Real-valued angle field on one truncated face.

    Boundary data: constant edge angles away from corners, linear sweeps of
    the designed per-corner rotation inside a zone smaller than the corner's
    truncation radius. The interior is mean-value interpolation, so the
    restriction to each cleaved arc rotates by exactly the designed amount.
    """

    def __init__(self, cx, fid, sweeps):
        face = cx.faces[fid]
        self.face = face
        seq = [c for c, _ in face.boundary_loops[0]]
        while not seq[0].startswith("te:"):
            seq = seq[1:] + seq[:1]
        te_ids = [c for c in seq if c.startswith("te:")]
        ce_ids = [c for c in seq if c.startswith("ce:")]
        if len(te_ids) != len(ce_ids):
            raise GeometryError(f"{fid}: loop does not alternate edges and arcs")
        k = len(te_ids)

        # accumulated angle A_i on edge i; corner i+1 carries sweep of ce_i
        raw = []
        for te_id in te_ids:
            te = cx.truncated_edges[te_id]
            raw.append(
                float(
                    np.arctan2(
                        np.dot(te.direction, face.circle.v),
                        np.dot(te.direction, face.circle.u),
                    )
                )
            )
        A = [raw[0]]
        for i in range(k):
            A.append(A[i] + sweeps[ce_ids[i]])
        if abs(A[-1] - A[0]) > 1e-9:
            raise GeometryError(f"{fid}: boundary angle walk does not close")
        for i in range(1, k):
            if abs(_wrap_half(A[i] - raw[i])) > 1e-9:
                raise GeometryError(f"{fid}: sweep data inconsistent with edge angles")

        # polygon corners: corner i sits between edge i-1 and edge i and is
        # the vertex of arc ce_{i-1}
        corner_xy = []
        corner_r0 = []
        for i in range(k):
            arc = cx.cleaved_edges[ce_ids[i - 1]]
            corner_xy.append(face.to_plane(arc.center))
            corner_r0.append(0.45 * arc.radius)

        pts, vals = [], []
        for i in range(k):
            a_xy = corner_xy[i]
            b_xy = corner_xy[(i + 1) % k]
            length = float(np.linalg.norm(b_xy - a_xy))
            r_start = min(corner_r0[i], 0.3 * length)
            r_end = min(corner_r0[(i + 1) % k], 0.3 * length)
            sweep_in = sweeps[ce_ids[i - 1]]
            sweep_out = sweeps[ce_ids[i]]
            s_vals = sorted(
                set(
                    [float(s) for s in np.linspace(0.0, r_start / length, 7)]
                    + [float(s) for s in np.linspace(1.0 - r_end / length, 1.0, 7)]
                    + [float(s) for s in np.linspace(0.0, 1.0, 5)]
                )
            )
            for s in s_vals:
                x = s * length
                theta = A[i]
                if x < r_start:
                    theta = A[i] - sweep_in / 2.0 * (1.0 - x / r_start)
                elif x > length - r_end:
                    theta = A[i] + sweep_out / 2.0 * (1.0 - (length - x) / r_end)
                pts.append(a_xy + s * (b_xy - a_xy))
                vals.append(theta)
        clean_p, clean_v = [], []
        for p, v in zip(pts, vals):
            if clean_p and np.linalg.norm(p - clean_p[-1]) < 1e-12:
                continue
            clean_p.append(p)
            clean_v.append(v)
        if np.linalg.norm(clean_p[0] - clean_p[-1]) < 1e-12:
            clean_p.pop()
            clean_v.pop()
        self.boundary_pts = np.asarray(clean_p)
        self.boundary_vals = np.asarray(clean_v)

    def angle_at(self, xy):
        return mean_value_interpolate(xy, self.boundary_pts, self.boundary_vals)

    def directors(self, pts3):
        face = self.face
        xy = face.to_plane(np.atleast_2d(pts3))
        thetas = np.array([self.angle_at(q) for q in xy])
        return (
            np.multiply.outer(np.cos(thetas), face.circle.u)
            + np.multiply.outer(np.sin(thetas), face.circle.v)
        )


class PatchFill:
    """Continuous filling of a cleaved patch from its boundary directors.

    The dense boundary loop is lifted (it must close), a value pole is
    chosen, and interior points are filled by sliding along geodesics from
    the pole: star-shaped interpolation in both domain and target.
    """

    def __init__(self, cell, boundary_dirs, boundary_vals, label="", pole_hint=None):
        self.center = cell.center
        self.radius = cell.radius
        dirs = np.asarray(boundary_dirs)
        lifted = _chain_signs(np.asarray(boundary_vals), boundary_vals[0])
        closure = float(np.dot(lifted[-1], lifted[0]))
        if closure < 0:
            raise InconsistentLift(
                f"{label}: patch boundary loop has no continuous lift"
            )
        candidates = []
        if pole_hint is not None:
            candidates.append(normalize(pole_hint))
        candidates.append(normalize(dirs.sum(axis=0)))
        picked = None
        for g in candidates:
            e1, e2 = orthonormal_frame(g)
            tang = dirs - np.outer(dirs @ g, g)
            if float(np.linalg.norm(tang, axis=1).min()) < 1e-6:
                continue
            bear = np.unwrap(np.arctan2(tang @ e2, tang @ e1))
            span = bear[-1] - bear[0]
            if abs(abs(span) - 2 * np.pi) > 0.5 or np.any(np.abs(np.diff(bear)) > 2.0):
                continue
            picked = (g, e1, e2, bear, span)
            break
        if picked is None:
            raise GeometryError(f"{label}: patch is not star-shaped from any pole")
        g, e1, e2, bear, span = picked
        if span < 0:
            dirs = dirs[::-1]
            lifted = lifted[::-1]
            tang = dirs - np.outer(dirs @ g, g)
            bear = np.unwrap(np.arctan2(tang @ e2, tang @ e1))
        self.g = g
        self.e1, self.e2 = e1, e2
        # close the loop: queries between the last and first sample bracket
        # against the wrapped copy of the first
        self.bear = np.append(bear, bear[0] + 2 * np.pi)
        self.dirs = np.vstack([dirs, dirs[:1]])
        self.rho = np.arccos(np.clip(self.dirs @ g, -1, 1))
        self.lifted = np.vstack([lifted, lifted[:1]])
        cands = [normalize(lifted.mean(axis=0) + 1e-9)]
        cands += [np.array(c, float) for c in [(0, 0, 1), (1, 0, 0), (0, 1, 0)]]
        cands += [lifted[i] for i in range(0, len(lifted), 4)]
        margins = [float(np.min(lifted @ c)) for c in cands]
        best = int(np.argmax(margins))
        if margins[best] <= -0.95:
            raise GeometryError(f"{label}: no usable value pole for the patch fill")
        self.pole = np.asarray(cands[best], float)

    def eval_points(self, pts3):
        pts3 = np.atleast_2d(pts3)
        u = (pts3 - self.center) / self.radius
        out = np.zeros_like(u)
        b0 = self.bear[0]
        for k, q in enumerate(u):
            q = normalize(q)
            t = q - float(np.dot(q, self.g)) * self.g
            tn = np.linalg.norm(t)
            if tn < 1e-9:
                out[k] = self.pole
                continue
            beta = float(np.arctan2(np.dot(t, self.e2), np.dot(t, self.e1)))
            beta = b0 + (beta - b0) % (2 * np.pi)
            i = int(np.searchsorted(self.bear, beta) - 1)
            i = min(max(i, 0), len(self.bear) - 2)
            den = self.bear[i + 1] - self.bear[i]
            lam = 0.0 if den <= 0 else (beta - self.bear[i]) / den
            rho_b = (1 - lam) * self.rho[i] + lam * self.rho[i + 1]
            rho_q = float(np.arccos(np.clip(np.dot(q, self.g), -1, 1)))
            r = min(rho_q / max(rho_b, 1e-12), 1.0)
            target = normalize((1 - lam) * self.lifted[i] + lam * self.lifted[i + 1])
            out[k] = slerp(self.pole, target, r)
        return out


def patch_interior_pole(cx, cf_id):
    """Area-weighted centroid direction of a cleaved patch: a direction
    genuinely inside the spherical polygon even at reflex vertices."""
    from .complex import triangulate_cleaved_face
    from .geometry import triangle_solid_angles

    mesh = triangulate_cleaved_face(cx, cf_id, 2)
    om = -triangle_solid_angles(mesh.dirs, mesh.triangles)  # patch orientation
    mids = mesh.dirs[mesh.triangles].mean(axis=1)
    return normalize((om[:, None] * mids).sum(axis=0))


def _sample_patch_boundary(cx, cf_id, evaluators, n_per_arc=64, max_step=0.05):
    """Dense director samples around a patch's boundary loop, refined until
    consecutive directors are within `max_step` so that interpolating the
    loop stays close to the true field."""
    cell = cx.cleaved_faces[cf_id]
    dirs = []
    vals = []
    for arc_id, sign in cell.loop:
        arc = cx.cleaved_edges[arc_id]
        ts = list(np.linspace(0.0, 1.0, n_per_arc))
        pts = arc.chart(np.asarray(ts))
        v = [row for row in evaluators(arc_id, pts)]
        pts = [row for row in pts]
        for _ in range(8):
            splits = [
                i
                for i in range(len(ts) - 1)
                if np.arccos(min(1.0, abs(float(np.dot(v[i], v[i + 1]))))) > max_step
            ]
            if not splits:
                break
            for i in reversed(splits):
                tm = 0.5 * (ts[i] + ts[i + 1])
                pm = arc.chart(tm)
                vm = evaluators(arc_id, pm)[0]
                ts.insert(i + 1, tm)
                pts.insert(i + 1, pm)
                v.insert(i + 1, vm)
        if sign == -1:
            ts = ts[::-1]
            pts = pts[::-1]
            v = v[::-1]
        # drop the final sample of each arc: the next arc starts there
        dirs.extend([(p - cell.center) / cell.radius for p in pts[:-1]])
        vals.extend(v[:-1])
    return np.asarray(dirs), np.asarray(vals)


def tangent_base(cx, name="tangent_base", **kw):
    """Canonical tangent field on a truncated polyhedron.

    Per face, the director angle interpolates constant edge directions with
    per-corner sweeps; sweep sizes are chosen so every face has zero total
    winding and every patch boundary loop lifts. Patches are filled from
    their boundary loops."""
    sweeps, _ = _solve_sweeps(cx)
    face_fields = {fid: _FaceAngleField(cx, fid, sweeps) for fid in cx.face_ids()}

    arc_owner = {aid: cx.cleaved_edges[aid].owner_face for aid in cx.arc_ids()}

    def cell_eval(cell_id, pts):
        if cell_id.startswith("tf:"):
            return face_fields[cell_id].directors(pts)
        if cell_id.startswith("ce:"):
            return face_fields[arc_owner[cell_id]].directors(pts)
        if cell_id.startswith("te:"):
            te = cx.truncated_edges[cell_id]
            return np.tile(te.direction, (len(np.atleast_2d(pts)), 1))
        raise KeyError(cell_id)

    fills = {}
    for cf_id in cx.patch_ids():
        dirs, vals = _sample_patch_boundary(cx, cf_id, cell_eval)
        fills[cf_id] = PatchFill(
            cx.cleaved_faces[cf_id], dirs, vals, label=cf_id,
            pole_hint=patch_interior_pole(cx, cf_id),
        )

    def fn(cell_id, pts):
        if cell_id.startswith("cf:"):
            return fills[cell_id].eval_points(pts)
        return cell_eval(cell_id, pts)

    kw.setdefault("tangent_faces", set(cx.face_ids()))
    out = DirectorField(fn, name=name, params={}, **kw)
    # the patch fills may wrap; rebalance so the total lifted degree over
    # the boundary is zero (the necessary bulk-extension condition)
    return _restore_total_degree(out, cx, cx.patch_ids())


def _solve_sweeps(cx):
    """Choose per-arc sweep angles: minimal per corner, adjusted by half
    turns so each face closes with zero winding and each patch boundary
    loop lifts."""
    # base data per face: loop of edges and arcs with minimal steps
    arc_meta = {}  # arc_id -> (fid, base_angle, delta0)
    face_arcs = {}
    for fid in cx.face_ids():
        face = cx.faces[fid]
        loop = face.boundary_loops[0]
        cells = [c for c, _ in loop]
        arcs = [c for c in cells if c.startswith("ce:")]
        face_arcs[fid] = arcs
        angle = None
        deltas = {}
        k = len(loop)
        raw_of = {}
        for cid, sign in loop:
            if cid.startswith("te:"):
                te = cx.truncated_edges[cid]
                raw_of[cid] = float(
                    np.arctan2(
                        np.dot(te.direction, face.circle.v),
                        np.dot(te.direction, face.circle.u),
                    )
                )
        # accumulate around the loop: te, arc, te, arc, ...
        seq = [c for c, _ in loop]
        # rotate so the loop starts at a truncated edge
        while not seq[0].startswith("te:"):
            seq = seq[1:] + seq[:1]
        angle = raw_of[seq[0]]
        running = {seq[0]: angle}
        for idx, cid in enumerate(seq):
            if not cid.startswith("ce:"):
                continue
            nxt = seq[(idx + 1) % len(seq)]
            d0 = _wrap_half(raw_of[nxt] - angle)
            arc_meta[cid] = [fid, angle, d0]
            angle = angle + d0
        k_f = (angle - raw_of[seq[0]]) / np.pi
        k_int = int(round(k_f))
        if abs(k_f - k_int) > 1e-9:
            raise GeometryError(f"{fid}: boundary walk does not close mod pi")
        # distribute the compensation over the first |k| arcs
        for j in range(abs(k_int)):
            arc_meta[arcs[j % len(arcs)]][2] += -np.pi * np.sign(k_int)

    def patch_closes(vertex_cell):
        samples = []
        for arc_id, sign in vertex_cell.loop:
            fid, base, delta = arc_meta[arc_id]
            circle = cx.faces[fid].circle
            ts = np.linspace(0.0, 1.0, 24, endpoint=False)
            if sign == -1:
                ts = 1.0 - ts
            ang = base + delta * ts
            samples.extend(
                np.multiply.outer(np.cos(ang), circle.u)
                + np.multiply.outer(np.sin(ang), circle.v)
            )
        samples = np.asarray(samples)
        lifted = _chain_signs(samples, samples[0])
        return float(np.dot(lifted[-1], lifted[0])) > 0

    def bad_patches():
        return [
            cf_id
            for cf_id in cx.patch_ids()
            if not patch_closes(cx.cleaved_faces[cf_id])
        ]

    bad = bad_patches()
    if len(bad) % 2 == 1:
        raise GeometryError("odd number of non-liftable patches; inconsistent data")
    # pair off bad patches through faces: adding +pi/-pi to two arcs of one
    # face flips exactly the two incident patches
    guard = 0
    while bad:
        guard += 1
        if guard > 64:
            raise GeometryError("patch parity adjustment did not converge")
        v1 = bad[0]
        target = set(bad[1:])
        # BFS over (vertex -> vertex) moves through shared faces
        prev = {v1: None}
        queue = [v1]
        found = None
        while queue and found is None:
            cur = queue.pop(0)
            cur_vertex = cx.cleaved_faces[cur].vertex
            for fid in cx.face_ids():
                arcs = face_arcs[fid]
                verts = {f"cf:{cx.cleaved_edges[a].vertex}" for a in arcs}
                if f"cf:{cur_vertex}" not in verts:
                    continue
                for other in sorted(verts):
                    if other in prev:
                        continue
                    prev[other] = (cur, fid)
                    if other in target:
                        found = other
                        queue = []
                        break
                    queue.append(other)
        if found is None:
            raise GeometryError("patch parity graph is disconnected")
        # walk back, applying one +pi/-pi swap per step
        node = found
        while prev[node] is not None:
            cur, fid = prev[node]
            arcs = face_arcs[fid]
            a_node = next(
                a for a in arcs if f"cf:{cx.cleaved_edges[a].vertex}" == node
            )
            a_cur = next(
                a for a in arcs if f"cf:{cx.cleaved_edges[a].vertex}" == cur
            )
            arc_meta[a_node][2] += np.pi
            arc_meta[a_cur][2] -= np.pi
            node = cur
        bad = bad_patches()

    sweeps = {aid: arc_meta[aid][2] for aid in cx.arc_ids()}
    return sweeps, arc_meta


# ---------------------------------------------------------------------------
# pair fixtures: twists and bubbles
# ---------------------------------------------------------------------------


def edge_twist(base, cx, face_id, arc1, arc2, n, band_frac=0.35, name=None):
    """Rotate the field inside one truncated face by n half-turns across a
    band between two of its cleaved edges.

    The comparison chain of (base, result) is +n on arc1 and -n on arc2.
    The band rotates about the face normal, so tangency is preserved; the
    two affected corner patches are refilled from their new boundaries.
    For odd n the patch loops acquire a half-turn and no continuous filling
    exists: the result is then deliberately discontinuous across one arc of
    each patch and is rejected by validity checks downstream.
    """
    face = cx.faces[face_id]
    a1 = cx.cleaved_edges[arc1]
    a2 = cx.cleaved_edges[arc2]
    if a1.owner_face != face_id or a2.owner_face != face_id:
        raise GeometryError("both cleaved edges must belong to the named face")
    if a1.vertex == a2.vertex:
        raise GeometryError("the two cleaved edges must sit at different corners")
    # corridor between the two corners, pushed into the face along the
    # wedge bisectors so it exits through the arcs and clears the edges
    q1 = a1.center + 0.45 * a1.radius * a1.dir_at(0.5)
    q2 = a2.center + 0.45 * a2.radius * a2.dir_at(0.5)
    nrm = face.circle.normal
    axis = normalize(np.cross(nrm, q2 - q1))
    h = band_frac * 0.45 * min(a1.radius, a2.radius)

    def band(points):
        xi = (np.atleast_2d(points) - q1) @ axis
        return smoothstep((xi + h) / (2 * h))

    # other cells of this face must not see the transition
    for cid in face.arc_ids:
        if cid in (arc1, arc2):
            continue
        arc = cx.cleaved_edges[cid]
        b = band(arc.chart(np.linspace(0, 1, 33)))
        if np.any((b > 1e-9) & (b < 1 - 1e-9)):
            raise GeometryError(
                f"twist band between {arc1} and {arc2} clips {cid}; "
                "choose different corners or a narrower band"
            )
    for loop in face.boundary_loops:
        for cid, _ in loop:
            if not cid.startswith("te:"):
                continue
            te = cx.truncated_edges[cid]
            b = band(te.chart(np.linspace(0, 1, 33)))
            if np.any((b > 1e-9) & (b < 1 - 1e-9)):
                raise GeometryError(
                    f"twist band between {arc1} and {arc2} crosses {cid}"
                )

    # orient the band so the comparison chain of (base, twisted) is +n on
    # arc1: the coefficient is minus the twist's angle gain along the arc
    b_arc1 = band(a1.chart(np.array([0.0, 1.0])))
    sigma = -1.0 if (b_arc1[1] - b_arc1[0]) > 0 else 1.0

    def rotated(cell_id, pts):
        pts = np.atleast_2d(pts)
        vals = base.evaluate(cell_id, pts)
        ang = sigma * n * np.pi * band(pts)
        out = np.empty_like(vals)
        for k in range(len(pts)):
            out[k] = rotation_about(nrm, float(ang[k])) @ vals[k]
        return out

    overrides = {face_id: rotated, arc1: rotated, arc2: rotated}

    for arc_id in (arc1, arc2):
        cell = cx.cleaved_faces[f"cf:{cx.cleaved_edges[arc_id].vertex}"]

        def arc_eval(cid, pts, _arc=arc_id):
            if cid == _arc:
                return rotated(cid, pts)
            return base.evaluate(cid, pts)

        dirs, vals = _sample_patch_boundary(cx, cell.cell_id, arc_eval)
        try:
            fill = PatchFill(
                cell, dirs, vals, label=cell.cell_id,
                pole_hint=patch_interior_pole(cx, cell.cell_id),
            )
            overrides[cell.cell_id] = (
                lambda cid, pts, _f=fill: _f.eval_points(pts)
            )
        except InconsistentLift:
            # odd twist: no continuous filling exists; rotate the patch by
            # the band formula, leaving a documented seam on its far arcs
            overrides[cell.cell_id] = rotated

    out = base
    for cid, fn in overrides.items():
        out = out.with_override(cid, fn)
    out.name = name or f"edge_twist({base.name},{arc1},{arc2},{n})"
    out.params = {"base": base.name, "arc1": arc1, "arc2": arc2, "n": int(n)}
    if n % 2 == 0:
        untouched = [
            cf for cf in cx.patch_ids()
            if cf not in (f"cf:{a1.vertex}", f"cf:{a2.vertex}")
        ]
        out = _restore_total_degree(out, cx, untouched)
    return out


def _restore_total_degree(field, cx, patch_ids):
    """A constructed field's patch fills may wrap; compensate with a degree
    bump on one of the given patches so the total lifted degree over the
    boundary returns to zero."""
    from .field import Resolution
    from .invariant import boundary_degree

    res = Resolution()
    total = boundary_degree(field, cx, res=res)
    if total == 0:
        return field
    for patch_id in patch_ids:
        for k in (-total, total):
            try:
                cand = field.with_override(
                    patch_id, _patch_bubble_override(field, cx, patch_id, k)
                )
                if boundary_degree(cand, cx, res=res) == 0:
                    cand.name = field.name
                    cand.params = field.params
                    return cand
            except GeometryError:
                continue
    raise GeometryError("could not rebalance the field's total degree")


def _blister(v_center, e1, e2, n, rho, phi):
    """Degree bump: sweep the colatitude from the center value to its
    antipode while the azimuth winds n times."""
    a = np.pi * (1.0 - np.clip(rho, 0.0, 1.0))
    return (
        np.multiply.outer(np.cos(a), v_center)
        + (np.sin(a) * np.cos(n * phi))[:, None] * e1
        + (np.sin(a) * np.sin(n * phi))[:, None] * e2
    )


def _patch_bubble_override(base, cx, cf_id, n):
    """Override one cleaved face with a flattened neighborhood around its
    interior pole carrying a degree-n blister."""
    cell = cx.cleaved_faces[cf_id]
    g = patch_interior_pole(cx, cf_id)
    # clearance: geodesic distance from the pole to the boundary arcs
    clear = np.inf
    for arc_id, _ in cell.loop:
        arc = cx.cleaved_edges[arc_id]
        d = arc.dir_at(np.linspace(0, 1, 65))
        clear = min(clear, float(np.arccos(np.clip(d @ g, -1, 1)).min()))
    rho_flat = 0.55 * clear
    v_c = base.evaluate(cf_id, cell.center + cell.radius * g)[0]
    # the flatten blend is degree-neutral only while the base stays well
    # away from the antipode of the site value: shrink until it does
    from .complex import triangulate_cleaved_face

    probe = triangulate_cleaved_face(cx, cf_id, 4)
    rho_all = np.arccos(np.clip(probe.dirs @ g, -1, 1))
    vals_all = base.evaluate(cf_id, probe.points)
    margins = np.abs(vals_all @ v_c)
    for _ in range(8):
        sel = rho_all < rho_flat
        if np.any(sel) and float(margins[sel].min()) > 0.2:
            break
        rho_flat *= 0.6
    else:
        raise GeometryError(f"{cf_id}: no flat enough site for a degree bump")
    rho_bump = 0.75 * rho_flat
    e1, e2 = orthonormal_frame(v_c)
    g1, g2 = orthonormal_frame(g)

    def fn(cell_id, pts):
        pts = np.atleast_2d(pts)
        u = (pts - cell.center) / cell.radius
        rho = np.arccos(np.clip(u @ g, -1, 1))
        vals = base.evaluate(cell_id, pts)
        out = np.empty_like(vals)
        t = u - np.outer(u @ g, g)
        phi = np.arctan2(t @ g2, t @ g1)
        for k in range(len(pts)):
            if rho[k] >= rho_flat:
                out[k] = vals[k]
                continue
            if rho[k] >= rho_bump:
                w = smoothstep((rho_flat - rho[k]) / (rho_flat - rho_bump))
                v = vals[k] if float(np.dot(vals[k], v_c)) > 0 else -vals[k]
                out[k] = normalize((1 - w) * v + w * v_c)
            else:
                out[k] = _blister(
                    v_c, e1, e2, n, np.array([rho[k] / rho_bump]), np.array([phi[k]])
                )[0]
        return out

    return fn


def face_bubble(base, cx, patch1, patch2, n, name=None):
    """Insert a lifted-degree +n bump on one cleaved face and -n on
    another; the edge chain is untouched and the total boundary degree is
    preserved. With the default seed, the face chain of (base, result) is
    +n on patch1 and -n on patch2."""
    out = base.with_override(patch1, _patch_bubble_override(base, cx, patch1, -n))
    out = out.with_override(patch2, _patch_bubble_override(base, cx, patch2, n))
    out.name = name or f"face_bubble({base.name},{patch1},{patch2},{n})"
    out.params = {"base": base.name, "patch1": patch1, "patch2": patch2, "n": int(n)}
    return out


# ---------------------------------------------------------------------------
# post-domain fields
# ---------------------------------------------------------------------------


def _post_profiles(post):
    w, d, h, H = post.w, post.d, post.h, post.H
    sw = np.sin(np.pi * w / 2) ** 2
    sd = np.sin(np.pi * d / 2) ** 2

    def p(x):
        return np.sin(np.pi * x) ** 2 - sw

    def s(y):
        return np.sin(np.pi * y) ** 2 - sd

    def chi(z):
        return smoothstep((np.asarray(z, float) - h) / (H - h))

    return p, s, chi


def post_base(post, mode=None, **kw):
    """Valid post-domain field: a horizontal bend around the post footprint
    that escapes to vertical along the post's vertical edges (forced by the
    wall tangencies). Mode N escapes to vertical at the top plate; mode T
    relaxes to a uniform horizontal field there. Singular only at the eight
    post vertices."""
    mode = mode or post.mode
    p, s, chi = _post_profiles(post)
    w, d, h, H, eps = post.w, post.d, post.h, post.H, post.eps
    rho0 = 0.45 * min(w, d, 1 - w, 1 - d)
    eps0 = 0.95 * eps
    corners = np.array(
        [[w / 2, d / 2], [w / 2, -d / 2], [-w / 2, d / 2], [-w / 2, -d / 2]]
    )

    def fn(cell_id, pts):
        pts = np.atleast_2d(pts)
        x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
        c = chi(z)
        if mode == "T":
            a = p(x) + c * (1.0 - p(x))
            b = s(y) * (1.0 - c)
        else:
            a = p(x)
            b = s(y)
        rho = np.min(
            np.hypot(x[:, None] - corners[None, :, 0], y[:, None] - corners[None, :, 1]),
            axis=1,
        )
        radial = smoothstep((rho0 - rho) / (0.5 * rho0))
        bump = radial * smoothstep(z / eps0) * smoothstep((h - z) / eps0)
        # escape cone above each top post corner: the horizontal bend is
        # ill-conditioned along the columns over the corners until the
        # far-field blend takes over
        psi = np.arctan2(z - h, rho)
        cone = (
            radial
            * smoothstep((psi - 0.35) / 0.35)
            * smoothstep((h + 0.6 * (H - h) - z) / (0.2 * (H - h)))
        )
        if mode == "N":
            theta = (np.pi / 2) * np.maximum.reduce([c, bump, cone])
        else:
            theta = (np.pi / 2) * np.maximum(bump, cone)
        ct, st = np.cos(theta), np.sin(theta)
        out = np.empty((len(pts), 3))
        poleward = ct < 1e-9
        out[poleward] = [0.0, 0.0, 1.0]
        rest = ~poleward
        nn = np.hypot(a[rest], b[rest])
        if np.any(nn < 1e-12):
            raise GeometryError(f"post_base({mode}) evaluated on a singular column")
        out[rest, 0] = ct[rest] * a[rest] / nn
        out[rest, 1] = ct[rest] * b[rest] / nn
        out[rest, 2] = st[rest]
        return out

    faces = {"tf:plate", "tf:wall:x+", "tf:wall:x-", "tf:wall:y+",
             "tf:wall:y-", "tf:post:top"}
    if mode == "T":
        faces.add("tf:topplate")
    return DirectorField(
        fn, name=f"post_base_{mode}", params={"mode": mode},
        tangent_faces=faces, top_mode=mode, periodic=True, **kw,
    )


def cell_rotor(base, post, alpha, **kw):
    """Rotate a post field by pi across the unit cell in direction alpha.

    The rotation angle is flat over the post and its truncation caps, so
    tangency there survives; the director field stays periodic while its
    lift becomes antiperiodic (the periodicity class flips)."""
    half = {1: post.w / 2, 2: post.d / 2}[alpha]
    x_lo = half + 2.5 * post.eps
    if x_lo >= 0.48:
        raise GeometryError("no room for the rotor ramp outside the footprint")

    def u(x):
        x = np.asarray(x, float)
        return 0.5 * np.sign(x) * smoothstep((np.abs(x) - x_lo) / (0.5 - x_lo))

    def fn(cell_id, pts):
        pts = np.atleast_2d(pts)
        vals = base.evaluate(cell_id, pts)
        ang = np.pi * u(pts[:, alpha - 1])
        c, s = np.cos(ang), np.sin(ang)
        out = np.empty_like(vals)
        out[:, 0] = c * vals[:, 0] - s * vals[:, 1]
        out[:, 1] = s * vals[:, 0] + c * vals[:, 1]
        out[:, 2] = vals[:, 2]
        return out

    f = DirectorField(
        fn, name=f"cell_rotor({base.name},{alpha})",
        params={"base": base.name, "alpha": alpha},
        tangent_faces=set(base.tangent_faces), top_mode=base.top_mode,
        periodic=True, **kw,
    )
    return f


def prism_bubble(base, post, n1, n2, z_frac=0.5, **kw):
    """Insert lifted-degree bumps of n1 and n2 on the two independent
    vertical prism faces. The field is flattened around each site first, so
    the inserted degree is exact; edge data is untouched."""
    h, H = post.h, post.H
    z0 = z_frac * h
    # the bump must stay clear of the face edges yet be wide enough that
    # default grid spacings track its colatitude sweep without aliasing
    r_b = 0.4 * min(z0, H - z0, 0.5)
    sites = {
        1: (np.array([-0.5, 0.0, z0]), n1),
        2: (np.array([0.0, -0.5, z0]), n2),
    }

    centers = {}
    frames = {}
    for alpha, (site, _) in sites.items():
        v_c = base.evaluate(f"tau2:{alpha}-", site)[0]
        if abs(v_c[2]) > 0.3:
            raise GeometryError("bubble site value must be nearly horizontal")
        centers[alpha] = v_c
        e1, e2 = orthonormal_frame(v_c)
        frames[alpha] = (e1, e2)

    def fn(cell_id, pts):
        pts = np.atleast_2d(pts)
        vals = base.evaluate(cell_id, pts)
        for alpha, (site, k) in sites.items():
            if k == 0:
                continue
            axis = alpha - 1
            on_face = np.abs(np.abs(pts[:, axis]) - 0.5) < 1e-9
            if not np.any(on_face):
                continue
            rel = pts[:, [1 - axis, 2]] - site[[1 - axis, 2]]
            rho = np.hypot(rel[:, 0], rel[:, 1])
            inside = on_face & (rho < 2 * r_b)
            if not np.any(inside):
                continue
            v_c = centers[alpha]
            e1, e2 = frames[alpha]
            # the two faces' in-face coordinates have opposite handedness
            # about the outward normal; compensate so the face chain of
            # (base, result) is n1 on tau2:1- and n2 on tau2:2-
            k_eff = k if alpha == 1 else -k
            idx = np.where(inside)[0]
            for i in idx:
                rr = rho[i] / r_b
                if rr >= 1.0:
                    wgt = smoothstep(2.0 - rr)
                    v = vals[i] if float(np.dot(vals[i], v_c)) > 0 else -vals[i]
                    vals[i] = normalize((1 - wgt) * v + wgt * v_c)
                else:
                    phi = float(np.arctan2(rel[i, 1], rel[i, 0]))
                    vals[i] = _blister(
                        v_c, e1, e2, k_eff, np.array([rr]), np.array([phi])
                    )[0]
        return vals

    f = DirectorField(
        fn, name=f"prism_bubble({base.name},{n1},{n2})",
        params={"base": base.name, "n1": int(n1), "n2": int(n2)},
        tangent_faces=set(base.tangent_faces), top_mode=base.top_mode,
        periodic=True, **kw,
    )
    return f


def plate_twist(base, post, alpha, n, center=0.35, width=0.06, **kw):
    """Rotate a post field about the vertical axis by n half-turns across a
    horizontal band at x_alpha ~ center. The band avoids the post, so the
    post-vertex data is untouched; every prism edge running in direction
    alpha gains n half-turns of comparison winding. Odd n also flips the
    periodicity class in that direction."""
    half = {1: post.w / 2, 2: post.d / 2}[alpha]
    lo, hi = center - width, center + width
    margin = half + 1.2 * post.eps  # past the post walls and their caps
    clear_of_post = hi < -margin or lo > margin
    inside_cell = -0.5 + 1e-6 < lo and hi < 0.5 - 1e-6
    if not (clear_of_post and inside_cell):
        raise GeometryError("twist band must sit between the footprint and the seam")

    def fn(cell_id, pts):
        pts = np.atleast_2d(pts)
        vals = base.evaluate(cell_id, pts)
        xa = pts[:, alpha - 1]
        ang = n * np.pi * smoothstep((xa - lo) / (hi - lo))
        c, s = np.cos(ang), np.sin(ang)
        out = np.empty_like(vals)
        out[:, 0] = c * vals[:, 0] - s * vals[:, 1]
        out[:, 1] = s * vals[:, 0] + c * vals[:, 1]
        out[:, 2] = vals[:, 2]
        return out

    return DirectorField(
        fn, name=f"plate_twist({base.name},{alpha},{n})",
        params={"base": base.name, "alpha": alpha, "n": int(n)},
        tangent_faces=set(base.tangent_faces), top_mode=base.top_mode,
        periodic=True, **kw,
    )


# ---------------------------------------------------------------------------
# registry for JSON field documents
# ---------------------------------------------------------------------------


def make_generator(domain, spec):
    """Build a field from a {generator, params} document. `domain` is a
    TangentComplex for polyhedral runs or a PostDomain for post runs."""
    from .post import PostDomain

    name = spec.get("generator")
    params = dict(spec.get("params", {}))
    is_post = isinstance(domain, PostDomain)
    cx = domain.complex if is_post else domain

    def sub(key):
        return make_generator(domain, params[key])

    if name == "uniform":
        f = uniform(params["dir"])
        if not is_post:
            f.tangent_faces = set(cx.face_ids())
        return f
    if name == "tangent_base":
        if is_post:
            raise GeometryError("tangent_base applies to polyhedral domains")
        return tangent_base(cx)
    if name == "cube_bend":
        f = cube_bend()
        f.tangent_faces = set(cx.face_ids())
        return f
    if name == "edge_twist":
        return edge_twist(
            sub("base"), cx, params["face"], params["arc1"], params["arc2"],
            int(params["n"]),
        )
    if name == "face_bubble":
        return face_bubble(
            sub("base"), cx, params["patch1"], params["patch2"], int(params["n"])
        )
    if name == "post_base":
        if not is_post:
            raise GeometryError("post_base requires a post domain")
        return post_base(domain, mode=params.get("mode"))
    if name == "cell_rotor":
        return cell_rotor(sub("base"), domain, int(params["alpha"]))
    if name == "prism_bubble":
        return prism_bubble(
            sub("base"), domain, int(params["n1"]), int(params["n2"])
        )
    if name == "plate_twist":
        return plate_twist(
            sub("base"), domain, int(params["alpha"]), int(params["n"]),
            center=float(params.get("center", 0.35)),
            width=float(params.get("width", 0.06)),
        )
    raise KeyError(f"unknown generator {name!r}")
