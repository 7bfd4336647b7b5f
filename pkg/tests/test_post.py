import numpy as np
import pytest

from nematic_topo.errors import GeometryError
from nematic_topo.field import Resolution, check_tangency
from nematic_topo.generators import (
    cell_rotor,
    plate_twist,
    post_base,
    prism_bubble,
)
from nematic_topo.geometry import director_distance
from nematic_topo.invariant import boundary_degree
from nematic_topo.post import build_post_domain
from nematic_topo.postinvariant import PostPairLift, filling_difference_degree


def test_post_complex_counts(post):
    c = post.complex.counts()
    assert c["cleaved_faces"] == 8
    assert c["cleaved_edges"] == 24
    assert c["truncated_edges"] == 12
    assert c["truncated_faces"] == 7  # 4 walls + post top + both plates


def test_prism_cell_classes(post):
    # one vertical edge class, four horizontal classes, two face classes
    assert len(post.edge_classes["tau1:3--"]) == 4
    horiz = [k for k in post.edge_classes if k != "tau1:3--"]
    assert sorted(horiz) == ["tau1:1+", "tau1:1-", "tau1:2+", "tau1:2-"]
    assert post.face_pairs == {"tau2:1+": "tau2:1-", "tau2:2+": "tau2:2-"}


def test_dimension_validation():
    with pytest.raises(GeometryError):
        build_post_domain(0.3, 0.3, 1.0, 1.0, "N", 0.05)  # h = H
    with pytest.raises(GeometryError):
        build_post_domain(1.2, 0.3, 0.5, 1.0, "N", 0.05)
    with pytest.raises(GeometryError):
        build_post_domain(0.3, 0.3, 0.5, 1.0, "X", 0.05)
    with pytest.raises(GeometryError):
        build_post_domain(0.3, 0.3, 0.5, 1.0, "N", 0.2)  # caps too large


def test_modes_share_geometry(post):
    other = build_post_domain(0.3, 0.3, 0.5, 1.0, "N", 0.05)
    assert other.complex.counts() == post.complex.counts()
    assert other.mode != post.mode


def test_gamma_minus_routing(post):
    pts = post.gamma_minus.points
    assert np.allclose(pts[:, 2], 0.0)
    assert np.allclose(pts[0], post.p0)
    assert np.allclose(pts[-1], [-0.5, -0.5, 0.0])
    for p in pts:
        assert not (abs(p[0]) < post.w / 2 and abs(p[1]) < post.d / 2)
        for vid, pos in post.complex.vertex_pos.items():
            assert np.linalg.norm(p - pos) >= post.eps


def test_post_bases_are_valid(post, post_T, post_N, post_res):
    for f in (post_T, post_N):
        assert check_tangency(f, post.complex, res=post_res,
                              face_ids=sorted(f.tangent_faces)).ok
        assert boundary_degree(f, post.complex, res=post_res) == 0


def test_identical_pairs_have_zero_chains(post, post_T, post_N, post_res):
    for f in (post_T, post_N):
        pair = PostPairLift(f, f, post, res=post_res)
        assert pair.prism_edge_chain().is_zero()
        assert pair.post_edge_chain().is_zero()
        assert pair.prism_face_chain().is_zero()
        assert pair.alignment.gamma_correction == 0


def test_plate_twist_shifts_prism_edges(post, post_T, post_res):
    tw = plate_twist(post_T, post, 1, 2)
    pair = PostPairLift(post_T, tw, post, res=post_res)
    dk1 = pair.prism_edge_chain()
    assert dk1["tau1:1-"] != 0
    assert dk1["tau1:1-"] % 2 == 0
    # mode T: top and bottom coefficients congruent mod 2
    assert (dk1["tau1:1+"] - dk1["tau1:1-"]) % 2 == 0
    assert dk1["tau1:2-"] == 0 and dk1["tau1:2+"] == 0


def test_plate_twist_mode_N_top_zero(post, post_N, post_res):
    tw = plate_twist(post_N, post, 1, 2)
    pair = PostPairLift(post_N, tw, post, res=post_res)
    dk1 = pair.prism_edge_chain()
    assert dk1["tau1:1+"] == 0 and dk1["tau1:2+"] == 0
    assert dk1["tau1:1-"] != 0


def test_gamma_correction_sees_inserted_twist(post, post_T, post_res):
    # a band between the basepoint and the prism corner crosses gamma-
    tw = plate_twist(post_T, post, 1, 2, center=-0.3)
    pair = PostPairLift(post_T, tw, post, res=post_res)
    assert abs(pair.alignment.gamma_correction) == 2


def test_prism_bubble_chain(post, post_T, post_res):
    fb = prism_bubble(post_T, post, 1, -1)
    pair = PostPairLift(post_T, fb, post, res=post_res)
    assert pair.prism_edge_chain().is_zero()
    assert pair.post_edge_chain().is_zero()
    dk2 = pair.prism_face_chain()
    assert dk2.coefficients == {"tau2:1-": 1, "tau2:2-": -1}
    assert dk2.sublattice == (0, 0)


def test_prism_bubble_is_periodic(post, post_T):
    fb = prism_bubble(post_T, post, 2, -2)
    face = post.prism_faces["tau2:1-"]
    pts = np.array([face.chart(s, t) for s in np.linspace(0, 1, 9)
                    for t in np.linspace(0.1, 0.9, 9)])
    here = fb.evaluate("tau2:1-", pts)
    there = fb.evaluate("tau2:1+", pts + post.translate(1))
    assert max(director_distance(here[k], there[k]) for k in range(len(pts))) < 1e-9


def test_rotor_pair_sublattice(post, post_T, post_res):
    rot = cell_rotor(cell_rotor(post_T, post, 1), post, 2)
    fb = prism_bubble(rot, post, 2, -2)
    pair = PostPairLift(rot, fb, post, res=post_res)
    assert pair.s == {1: 1, 2: 1}
    dk2 = pair.prism_face_chain()
    assert dk2.coefficients == {"tau2:1-": 2, "tau2:2-": -2}
    assert dk2.sublattice == (2, -2)


def test_vertical_filling_freedom(post, post_T, post_res):
    """Two fillings of the vertical-edge square differ by an integer and
    shift the prism face chain along the periodicity sublattice."""
    rot = cell_rotor(cell_rotor(post_T, post, 1), post, 2)
    fb = prism_bubble(rot, post, 2, -2)
    pair = PostPairLift(rot, fb, post, res=post_res)
    base_chain = pair.prism_face_chain(n_rows=16)
    V0 = pair.vertical_filling(16)
    for k in (-2, -1, 1, 2):
        Vk = pair.vertical_filling(16, twists=k)
        d31 = filling_difference_degree(Vk, V0)
        shifted = pair.prism_face_chain(n_rows=16, twists=k)
        s1, s2 = pair.s[1], pair.s[2]
        want = (d31 * (1 - (-1) ** s2), -d31 * (1 - (-1) ** s1))
        got = (
            shifted["tau2:1-"] - base_chain["tau2:1-"],
            shifted["tau2:2-"] - base_chain["tau2:2-"],
        )
        assert got == want


def test_filling_freedom_invisible_when_periodic(post, post_T, post_res):
    pair = PostPairLift(post_T, prism_bubble(post_T, post, 1, -1), post, res=post_res)
    assert pair.s == {1: 0, 2: 0}
    a = pair.prism_face_chain(n_rows=16)
    b = pair.prism_face_chain(n_rows=16, twists=1)
    assert a.coefficients == b.coefficients


def test_periodicity_class_translate_invariant(post, post_T, post_res):
    from nematic_topo.lift import periodicity_class
    from nematic_topo.postinvariant import translate_class_along
    from nematic_topo.generators import cell_rotor

    rot = cell_rotor(post_T, post, 1)
    for field, want in ((post_T, 0), (rot, 1)):
        assert periodicity_class(field, post, 1, res=post_res) == want
        for z in (0.2, 0.45, 0.7):
            assert translate_class_along(field, post, 1, z, res=post_res) == want


def test_operation_wrappers(post, post_T, post_res):
    from nematic_topo.postinvariant import align_basepoints, prism_edge_chain

    al = align_basepoints(post_T, post_T, post, res=post_res)
    assert al.gamma_correction == 0
    assert prism_edge_chain(post_T, post_T, post, res=post_res).is_zero()


def test_periodicity_mismatch_is_odd_winding(post, post_T, post_res):
    """A periodicity-class mismatch means the bottom-edge comparison loop
    is noncontractible: the lifted spans differ by an odd number of half
    turns."""
    from nematic_topo.field import sample_edge
    from nematic_topo.generators import cell_rotor
    from nematic_topo.lift import _chain_signs
    from nematic_topo.postinvariant import _horizontal_angles

    rot = cell_rotor(post_T, post, 1)
    spans = []
    for field in (post_T, rot):
        path = sample_edge(field, post, "tau1:1-", n0=65, res=post_res)
        lifted = _chain_signs(path.values, path.values[0])
        ang = _horizontal_angles(lifted)
        spans.append(float(ang[-1] - ang[0]))
    diff = round((spans[0] - spans[1]) / np.pi)
    assert diff % 2 == 1
