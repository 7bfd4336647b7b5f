"""Acceptance suite: one test per exit criterion, each printing a pass line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Tolerances are exact integer equality throughout, with the degree
and winding engines' built-in 0.25 rounding guards and mandatory
two-method agreement.
"""

import itertools
import os

import numpy as np
import pytest

from nematic_topo.classify import (
    VERDICT_D1,
    VERDICT_D2,
    VERDICT_HOMOTOPIC,
    catalog,
    classify_pair,
    classify_post_pair,
)
from nematic_topo.complex import FaceCircle
from nematic_topo.field import Resolution
from nematic_topo.generators import (
    cell_rotor,
    edge_twist,
    face_bubble,
    plate_twist,
    post_base,
    prism_bubble,
)
from nematic_topo.geometry import icosphere, normalize
from nematic_topo.invariant import (
    boundary_degree,
    build_pair_lifts,
    edge_chain,
    face_chain,
    face_sum_residuals,
    sphere_degree,
    winding_crossing_oracle,
    winding_half_turns,
)
from nematic_topo.lift import LiftSeed
from nematic_topo.postinvariant import PostPairLift, filling_difference_degree


def announce(criterion, text):
    print(f"\n[acceptance {criterion}] PASS: {text}")


# -- criterion 1: degree engine ---------------------------------------------


def test_criterion_1_degree_engine():
    V, T = icosphere(3)
    th = np.arccos(np.clip(V[:, 2], -1, 1))
    ph = np.arctan2(V[:, 1], V[:, 0])

    cases = [(np.tile([0.0, 0, 1], (len(V), 1)), 0), (V, 1), (-V, -1)]
    for k in (-3, -2, -1, 1, 2, 3):
        W = np.stack(
            [np.sin(th) * np.cos(k * ph), np.sin(th) * np.sin(k * ph), np.cos(th)],
            axis=1,
        )
        cases.append((W, k))
    for W, want in cases:
        assert sphere_degree(W, T) == want  # raises if methods disagree

    rng = np.random.default_rng(2024)
    for i in range(20):
        # well-conditioned random maps: near-singular ones stretch image
        # triangles past what a level-3 mesh can represent
        M = rng.normal(size=(3, 3))
        while np.linalg.cond(M) > 4.0:
            M = rng.normal(size=(3, 3))
        b = rng.normal(size=3) * 0.35
        sphere_degree(normalize(V @ M.T + b), T, seed=i)
        assert sphere_degree(normalize(V @ M.T), T, seed=50 + i) == int(
            np.sign(np.linalg.det(M))
        )
    announce(1, "area-sum and preimage-count agree on all 29 maps; analytic "
                "degrees -3..3 matched exactly")


# -- criterion 2: winding engine --------------------------------------------


def test_criterion_2_winding_engine():
    circle = FaceCircle(
        normal=np.array([0.0, 0, 1]), u=np.array([1.0, 0, 0]), v=np.array([0.0, 1, 0])
    )

    def loop(th):
        return np.stack([np.cos(th), np.sin(th), np.zeros_like(th)], axis=1)

    rng = np.random.default_rng(77)
    for trial in range(100):
        k = int(rng.integers(-4, 5))
        n = int(rng.integers(50, 120))
        bumps = rng.uniform(-1, 1, n)
        bumps -= bumps.mean()
        th = np.concatenate([[0.0], np.cumsum(bumps * 0.3 + k * np.pi / n)])
        th += rng.uniform(0, np.pi)
        w = winding_half_turns(loop(th), circle)
        assert w == k == winding_crossing_oracle(loop(th), circle, seed=trial)

    base = np.concatenate([[0.0], np.cumsum(rng.uniform(-0.3, 0.3, 60))])
    bump = np.sin(np.linspace(0, np.pi, 61)) ** 2

    def comparison(a, b):
        return winding_half_turns(loop(np.concatenate([a, b[::-1], a[:1]])), circle)

    for trial in range(12):
        m1, m2 = rng.integers(-2, 3, size=2)
        f0 = base
        f1 = base + np.pi * m1 * bump
        f2 = base + np.pi * m2 * bump
        assert comparison(f0, f1) == -comparison(f1, f0)
        assert comparison(f0, f1) + comparison(f1, f2) == comparison(f0, f2)
    announce(2, "100 random loops match the signed-crossing oracle exactly; "
                "antisymmetry and additivity exact on 12 triples")


# -- criterion 3: sum rules on three shapes ----------------------------------


@pytest.fixture(scope="module")
def shape_fixtures(cube_cx, cube_base, tetra_cx, tetra_base, lprism_cx, lprism_base):
    out = {}
    for name, cx, base in (
        ("cube", cube_cx, cube_base),
        ("tetrahedron", tetra_cx, tetra_base),
        ("l_prism", lprism_cx, lprism_base),
    ):
        fid = cx.face_ids()[0]
        arcs = cx.faces[fid].arc_ids
        twist = edge_twist(base, cx, fid, arcs[0], arcs[1], 2)
        pids = cx.patch_ids()
        bubble = face_bubble(base, cx, pids[0], pids[-1], 1)
        out[name] = (cx, base, twist, bubble, arcs)
    return out


def test_criterion_3_sum_rules(shape_fixtures, res):
    for name, (cx, base, twist, bubble, arcs) in shape_fixtures.items():
        for field in (base, twist, bubble):
            assert boundary_degree(field, cx, res=res) == 0
        for other in (twist, bubble):
            l0, l1 = build_pair_lifts(base, other, cx, res=res)
            d1 = edge_chain(l0, l1)
            residuals = face_sum_residuals(d1, cx)
            assert all(v == 0 for v in residuals.values())
            if d1.is_zero():
                d2 = face_chain(l0, l1)
                assert sum(d2.coefficients.values()) == 0
    announce(3, "per-face residuals, global face-chain sums, and boundary "
                "degrees all exactly 0 on cube, tetrahedron, and L-prism")


# -- criterion 4: homotopy-choice independence --------------------------------


def test_criterion_4_homotopy_choice_independence(cube_cx, cube_base, res):
    rng = np.random.default_rng(5)
    pids = cube_cx.patch_ids()
    arc_ids = cube_cx.arc_ids()
    for trial in range(10):
        p1, p2 = rng.choice(len(pids), size=2, replace=False)
        n = int(rng.integers(1, 3))
        pair = face_bubble(cube_base, cube_cx, pids[p1], pids[p2], n)
        l0, l1 = build_pair_lifts(cube_base, pair, cube_cx, res=res)
        plain = face_chain(l0, l1)
        wiggle_on = {arc_ids[int(i)]: int(rng.integers(1, 3))
                     for i in rng.choice(len(arc_ids), size=4, replace=False)}
        wiggled = face_chain(l0, l1, wiggles=wiggle_on)
        assert plain.coefficients == wiggled.coefficients
        assert plain.coefficients[pids[p1]] == n
        assert plain.coefficients[pids[p2]] == -n
    announce(4, "face chains identical for angle-linear and wiggled edge "
                "homotopies on 10 randomized bubble pairs")


# -- criterion 5: polyhedral decision correctness -----------------------------


def test_criterion_5_decision_correctness(cube_cx, cube_base, res):
    assert classify_pair(cube_base, cube_base, cube_cx, res=res).verdict \
        == VERDICT_HOMOTOPIC

    fid = "tf:f0"
    arcs = cube_cx.faces[fid].arc_ids
    for n in (2, 4):
        tw = edge_twist(cube_base, cube_cx, fid, arcs[0], arcs[2], n)
        rep = classify_pair(cube_base, tw, cube_cx, res=res)
        assert rep.verdict == VERDICT_D1
        assert rep.chains["edge_chain"].coefficients == {arcs[0]: n, arcs[2]: -n}

    for n in (1, 2):
        bb = face_bubble(cube_base, cube_cx, "cf:v0", "cf:v6", n)
        rep = classify_pair(cube_base, bb, cube_cx, res=res)
        assert rep.verdict == VERDICT_D2
        assert rep.chains["edge_chain"].is_zero()
        assert rep.chains["face_chain"].coefficients == {"cf:v0": n, "cf:v6": -n}

    tw = edge_twist(cube_base, cube_cx, fid, arcs[0], arcs[2], 2)
    bb = face_bubble(cube_base, cube_cx, "cf:v0", "cf:v6", 1)
    for other, want in ((tw, VERDICT_D1), (bb, VERDICT_D2)):
        flip = classify_pair(cube_base, other, cube_cx, res=res,
                             seed=LiftSeed(sign=-1))
        assert flip.verdict == want
        fine = classify_pair(cube_base, other, cube_cx, res=res.doubled())
        assert fine.verdict == want
    announce(5, "verdicts and chain coefficients exact for identity, twist, "
                "and bubble pairs; stable under seed flip and doubling")


# -- criterion 6: post-domain case separation ---------------------------------


def test_criterion_6_post_case_separation(post, post_T, post_res):
    rot = cell_rotor(cell_rotor(post_T, post, 1), post, 2)
    engineered = prism_bubble(rot, post, 2, -2)

    t_rep = classify_post_pair(rot, engineered, post, res=post_res, mode="T")
    n_rep = classify_post_pair(rot, engineered, post, res=post_res, mode="N")
    assert t_rep.s_classes == {1: 1, 2: 1}
    assert t_rep.chains["prism_face_chain"].coefficients == \
        {"tau2:1-": 2, "tau2:2-": -2}
    assert t_rep.verdict == VERDICT_HOMOTOPIC
    assert n_rep.verdict == VERDICT_D2

    pair = PostPairLift(rot, engineered, post, res=post_res)
    base_chain = pair.prism_face_chain(n_rows=16)
    V0 = pair.vertical_filling(16)
    s1, s2 = pair.s[1], pair.s[2]
    for k in (-2, -1, 1, 2):
        Vk = pair.vertical_filling(16, twists=k)
        d31 = filling_difference_degree(Vk, V0)
        shifted = pair.prism_face_chain(n_rows=16, twists=k)
        assert (
            shifted["tau2:1-"] - base_chain["tau2:1-"],
            shifted["tau2:2-"] - base_chain["tau2:2-"],
        ) == (d31 * (1 - (-1) ** s2), -d31 * (1 - (-1) ** s1))
    announce(6, "engineered (2,-2) pair with s=(1,1) is Homotopic in mode T "
                "and DistinguishedByD2 in mode N; filling shifts match the "
                "sublattice formula for all five twist values")


# -- criterion 7: top-edge structure ------------------------------------------


def test_criterion_7_top_edge_structure(post, post_T, post_N, post_res):
    fixtures_N = [
        (post_N, plate_twist(post_N, post, 1, 2)),
        (post_N, plate_twist(post_N, post, 2, 2)),
        (post_N, prism_bubble(post_N, post, 1, -1)),
    ]
    for f0, f1 in fixtures_N:
        pair = PostPairLift(f0, f1, post, res=post_res)
        dk1 = pair.prism_edge_chain()
        assert dk1["tau1:1+"] == 0 and dk1["tau1:2+"] == 0

    fixtures_T = [
        (post_T, plate_twist(post_T, post, 1, 2)),
        (post_T, plate_twist(post_T, post, 2, 2)),
        (post_T, prism_bubble(post_T, post, 1, -1)),
    ]
    for f0, f1 in fixtures_T:
        pair = PostPairLift(f0, f1, post, res=post_res)
        dk1 = pair.prism_edge_chain()
        for alpha in (1, 2):
            assert (dk1[f"tau1:{alpha}+"] - dk1[f"tau1:{alpha}-"]) % 2 == 0
    announce(7, "mode N top-edge coefficients vanish on all fixtures; mode T "
                "top/bottom coefficients congruent mod 2")


# -- criterion 8: catalog coherence -------------------------------------------


@pytest.fixture(scope="module")
def post_fixture_set(post, post_T):
    a = post_T
    d = cell_rotor(cell_rotor(post_T, post, 1), post, 2)
    return [
        a,
        prism_bubble(a, post, 1, -1),
        prism_bubble(a, post, 2, -2),
        d,
        prism_bubble(d, post, 2, -2),
        prism_bubble(d, post, 1, -1),
    ]


def test_criterion_8_catalog_coherence(post, post_fixture_set):
    os.environ.setdefault("NEMATIC_TOPO_THREADS", "4")
    res = Resolution(grid=24)
    atlas = catalog(post_fixture_set, post, res=res, mode="T")
    # rotor pairs differing by a sublattice bubble merge in mode T
    assert atlas["classes"] == [[0], [1], [2], [3, 4], [5]]
    assert not atlas["excluded"]

    flipped = catalog(post_fixture_set, post, res=res, mode="T",
                      seed=LiftSeed(anchor_edge=post.anchor_edge, sign=-1))
    assert flipped["classes"] == atlas["classes"]

    order = [3, 0, 5, 2, 4, 1]
    permuted = catalog([post_fixture_set[i] for i in order], post, res=res, mode="T")
    relabeled = sorted(sorted(order[i] for i in cls) for cls in permuted["classes"])
    assert relabeled == atlas["classes"]

    doubled = catalog(post_fixture_set, post, res=res.doubled(), mode="T")
    assert doubled["classes"] == atlas["classes"]
    announce(8, "6-fixture partition {0}{1}{2}{3,4}{5} is a transitive "
                "equivalence, stable under seed flip, input permutation, "
                "and resolution doubling")
