import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nematic_topo.errors import ResolutionExceeded
from nematic_topo.field import (
    DirectorField,
    Resolution,
    check_tangency,
    constant_field,
    sample_edge,
    sample_patch,
)
from nematic_topo.geometry import director_distance, directors_equal, normalize


def unit_vectors(draw):
    v = draw(
        st.tuples(
            st.floats(-1, 1, allow_nan=False),
            st.floats(-1, 1, allow_nan=False),
            st.floats(-1, 1, allow_nan=False),
        ).filter(lambda t: 0.1 < np.linalg.norm(t) < 1.8)
    )
    return normalize(np.array(v))


unit_vec = st.builds(lambda: None).flatmap(lambda _: st.just(None))


@st.composite
def units(draw):
    return unit_vectors(draw)


@given(units())
@settings(max_examples=50, deadline=None)
def test_sign_free_equality_ignores_sign(v):
    assert directors_equal(v, -v, tol=0.0)
    assert director_distance(v, -v) == 0.0


@given(units(), units())
@settings(max_examples=50, deadline=None)
def test_sign_free_distance_is_symmetric(a, b):
    assert abs(director_distance(a, b) - director_distance(b, a)) < 1e-12


def field_from_angle(angle_fn):
    """Planar director field on the x-axis parameterized by arclength."""

    def fn(cell_id, pts):
        t = np.atleast_2d(pts)[:, 0]
        th = angle_fn(t)
        return np.stack([np.cos(th), np.sin(th), np.zeros_like(th)], axis=1)

    return DirectorField(fn, name="angle")


class LineCell:
    def chart(self, t):
        t = np.asarray(t, float)
        return np.stack([t, np.zeros_like(t), np.zeros_like(t)], axis=-1)


class LineComplex:
    def cell(self, cell_id):
        return LineCell()


def test_constant_needs_no_refinement():
    f = field_from_angle(lambda t: 0 * t)
    path = sample_edge(f, LineComplex(), "edge", n0=2)
    assert len(path.params) == 2


def test_half_turn_refines_to_at_least_four_intervals():
    # oracle: simulate the bisection rule on the analytic angle directly
    def simulate(n0, theta_max):
        ts = list(np.linspace(0, 1, n0))
        while True:
            splits = [
                i
                for i in range(len(ts) - 1)
                if np.pi * (ts[i + 1] - ts[i]) > theta_max
            ]
            if not splits:
                return len(ts) - 1
            for i in reversed(splits):
                ts.insert(i + 1, 0.5 * (ts[i] + ts[i + 1]))

    expected = simulate(2, np.pi / 3)
    assert expected >= 4
    f = field_from_angle(lambda t: np.pi * t)
    path = sample_edge(f, LineComplex(), "edge", n0=2, res=Resolution())
    assert len(path.params) - 1 == expected
    assert path.max_step_angle() <= np.pi / 3 + 1e-12


def test_step_field_exhausts_refinement():
    f = field_from_angle(lambda t: np.where(t < 0.5, 0.0, np.pi / 2))
    with pytest.raises(ResolutionExceeded):
        sample_edge(f, LineComplex(), "edge", n0=2, res=Resolution(max_depth=8))


def test_shared_samples_are_bit_identical(cube_cx, cube_base):
    """A cleaved edge sampled standalone agrees exactly with the same
    points sampled through the patch boundary."""
    from nematic_topo.complex import triangulate_cleaved_face

    cf = cube_cx.patch_ids()[0]
    mesh = triangulate_cleaved_face(cube_cx, cf, 3)
    for pos, (kind, t) in enumerate(mesh.boundary_tags):
        if kind == "corner":
            continue
        pt_patch = mesh.points[mesh.boundary[pos]]
        arc = cube_cx.cleaved_edges[kind]
        pt_arc = arc.chart(t)
        assert np.array_equal(pt_patch, pt_arc)
        v_arc = cube_base.evaluate(kind, pt_arc)[0]
        v_arc2 = cube_base.evaluate(kind, pt_patch)[0]
        assert np.array_equal(v_arc, v_arc2)


def test_sample_patch_constant(cube_cx):
    f = constant_field([1, 0, 0])
    patch = sample_patch(f, cube_cx, cube_cx.patch_ids()[0], res=Resolution(level=1))
    assert np.allclose(patch.values, patch.values[0])


def test_sample_patch_step_fails(cube_cx):
    def fn(cell_id, pts):
        pts = np.atleast_2d(pts)
        out = np.zeros((len(pts), 3))
        sel = pts[:, 0] > -0.45
        out[sel] = [1, 0, 0]
        out[~sel] = [0, 1, 0]
        return out

    f = DirectorField(fn, name="step")
    with pytest.raises(ResolutionExceeded):
        sample_patch(f, cube_cx, cube_cx.patch_ids()[0], res=Resolution(level=2))


def test_tangency_of_constant_fields(cube_cx):
    f = constant_field([0, 0, 1])
    rep = check_tangency(f, cube_cx, face_ids=["tf:f0"])  # normal -z face
    assert not rep.ok
    f = constant_field([1, 0, 0])
    rep = check_tangency(f, cube_cx, face_ids=["tf:f0", "tf:f2", "tf:f3"])
    assert rep.ok


def test_tilted_field_reports_angle(cube_cx):
    tilt = 1e-3
    d = normalize([np.cos(tilt), 0, np.sin(tilt)])
    f = constant_field(d)
    rep = check_tangency(f, cube_cx, face_ids=["tf:f0"])
    assert not rep.ok
    _, _, angle = rep.violations[0]
    assert abs(angle - tilt) < 1e-6


@pytest.mark.parametrize("which", ["cube", "tetra", "lprism"])
def test_generator_tangency(which, cube_cx, cube_base, tetra_cx, tetra_base,
                            lprism_cx, lprism_base):
    cx, f = {
        "cube": (cube_cx, cube_base),
        "tetra": (tetra_cx, tetra_base),
        "lprism": (lprism_cx, lprism_base),
    }[which]
    assert check_tangency(f, cx).ok


def test_refinement_monotonicity(cube_cx, cube_base):
    res = Resolution()
    finer = res.doubled()
    arc = cube_cx.arc_ids()[0]
    p1 = sample_edge(cube_base, cube_cx, arc, res=res)
    p2 = sample_edge(cube_base, cube_cx, arc, n0=2 * len(p1.params), res=finer)
    assert p2.max_step_angle() <= res.theta_max
