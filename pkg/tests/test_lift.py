import numpy as np
import pytest

from nematic_topo.complex import triangulate_cleaved_face
from nematic_topo.errors import AmbiguousStep, InconsistentLift
from nematic_topo.field import SampledDirectorPatch, SampledDirectorPath
from nematic_topo.generators import cell_rotor, post_base
from nematic_topo.geometry import director_distance, normalize
from nematic_topo.lift import lift_loop_closes, lift_patch, lift_path, periodicity_class


def director_path(angles):
    th = np.asarray(angles, float)
    vals = np.stack([np.cos(th), np.sin(th), np.zeros_like(th)], axis=1)
    n = len(th)
    return SampledDirectorPath(
        cell_id="p", params=np.linspace(0, 1, n), points=np.zeros((n, 3)), values=vals
    )


def test_constant_path_lifts_constant():
    p = director_path(np.zeros(8))
    out = lift_path(p, np.array([1.0, 0, 0]))
    assert np.allclose(out.values, [1, 0, 0])


def test_half_turn_ends_antipodal():
    p = director_path(np.linspace(0, np.pi, 16))
    out = lift_path(p, np.array([1.0, 0, 0]))
    assert np.allclose(out.values[-1], [-1, 0, 0], atol=1e-12)


def test_round_trip_and_seed_flip():
    rng = np.random.default_rng(3)
    th = np.cumsum(rng.uniform(-0.4, 0.4, 40))
    p = director_path(th)
    up = lift_path(p, p.values[0])
    down = lift_path(p, -p.values[0])
    assert np.allclose(up.values, -down.values)
    for k in range(len(th)):
        assert director_distance(up.values[k], p.values[k]) < 1e-12


def test_resampling_preserves_endpoints():
    th = np.linspace(0, 2.2, 24)
    p1 = director_path(th)
    p2 = director_path(np.linspace(0, 2.2, 95))
    u1 = lift_path(p1, p1.values[0])
    u2 = lift_path(p2, p2.values[0])
    assert np.allclose(u1.values[-1], u2.values[-1], atol=1e-12)


def test_orthogonal_step_is_ambiguous():
    p = director_path([0.0, np.pi / 2 - 1e-9])
    with pytest.raises(AmbiguousStep):
        lift_path(p, p.values[0])


def test_patch_lift_constant(cube_cx):
    mesh = triangulate_cleaved_face(cube_cx, cube_cx.patch_ids()[0], 2)
    vals = np.tile([1.0, 0, 0], (len(mesh.points), 1))
    patch = SampledDirectorPatch(cell_id="c", mesh=mesh, values=vals)
    out = lift_patch(patch, 0, np.array([1.0, 0, 0]))
    assert np.allclose(out.values, [1, 0, 0])


def test_patch_with_antipodal_boundary_monodromy_fails(cube_cx):
    # director angle = half the azimuth: traversing the boundary once
    # rotates the director by a half turn -> no continuous lift
    mesh = triangulate_cleaved_face(cube_cx, cube_cx.patch_ids()[0], 3)
    center = normalize(mesh.dirs.sum(axis=0))
    u, v = np.eye(3)[0], np.cross(center, np.eye(3)[0])
    v = normalize(v)
    u = np.cross(v, center)
    vals = []
    for d in mesh.dirs:
        t = d - np.dot(d, center) * center
        az = np.arctan2(np.dot(t, v), np.dot(t, u))
        th = az / 2.0
        vals.append(np.cos(th) * u + np.sin(th) * v)
    patch = SampledDirectorPatch(cell_id="c", mesh=mesh, values=np.asarray(vals))
    with pytest.raises((InconsistentLift, AmbiguousStep)):
        lift_patch(patch, 0, patch.values[0])


def test_loop_closure_detector():
    closed = np.stack(
        [np.cos(np.linspace(0, 2 * np.pi, 60)),
         np.sin(np.linspace(0, 2 * np.pi, 60)),
         np.zeros(60)], axis=1
    )
    assert lift_loop_closes(closed)
    anti = np.stack(
        [np.cos(np.linspace(0, np.pi, 60)),
         np.sin(np.linspace(0, np.pi, 60)),
         np.zeros(60)], axis=1
    )
    assert not lift_loop_closes(anti)


def test_periodicity_classes(post, post_T):
    assert periodicity_class(post_T, post, 1) == 0
    assert periodicity_class(post_T, post, 2) == 0
    r1 = cell_rotor(post_T, post, 1)
    assert periodicity_class(r1, post, 1) == 1
    assert periodicity_class(r1, post, 2) == 0
    r12 = cell_rotor(r1, post, 2)
    assert periodicity_class(r12, post, 1) == 1
    assert periodicity_class(r12, post, 2) == 1
