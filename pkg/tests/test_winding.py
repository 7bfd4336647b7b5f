import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nematic_topo.complex import FaceCircle
from nematic_topo.errors import NotClosed, OffCircle, ResolutionTooCoarse
from nematic_topo.invariant import winding_crossing_oracle, winding_half_turns

CIRCLE = FaceCircle(
    normal=np.array([0.0, 0.0, 1.0]),
    u=np.array([1.0, 0.0, 0.0]),
    v=np.array([0.0, 1.0, 0.0]),
)


def loop_from_angles(th):
    th = np.asarray(th, float)
    return np.stack([np.cos(th), np.sin(th), np.zeros_like(th)], axis=1)


def test_constant_loop():
    vals = loop_from_angles(np.full(12, 0.3))
    assert winding_half_turns(vals, CIRCLE) == 0
    assert winding_crossing_oracle(vals, CIRCLE) == 0


def test_one_half_turn():
    vals = loop_from_angles(np.linspace(0, np.pi, 40))
    assert winding_half_turns(vals, CIRCLE) == 1


def test_minus_two_half_turns():
    vals = loop_from_angles(np.linspace(0, -2 * np.pi, 80))
    assert winding_half_turns(vals, CIRCLE) == -2


@st.composite
def closed_walks(draw):
    k = draw(st.integers(min_value=-4, max_value=4))
    n = draw(st.integers(min_value=40, max_value=90))
    seed = draw(st.integers(min_value=0, max_value=2**31 - 1))
    rng = np.random.default_rng(seed)
    bumps = rng.uniform(-1, 1, n)
    bumps -= bumps.mean()  # closed after removing drift
    th = np.concatenate([[0.0], np.cumsum(bumps * 0.3 + k * np.pi / n)])
    th += rng.uniform(0, np.pi)
    return k, th


@given(closed_walks())
@settings(max_examples=60, deadline=None)
def test_random_loops_match_crossing_oracle(data):
    k, th = data
    vals = loop_from_angles(th)
    w = winding_half_turns(vals, CIRCLE)
    assert w == k
    assert winding_crossing_oracle(vals, CIRCLE) == k


def test_antisymmetry_and_additivity():
    rng = np.random.default_rng(7)
    base = np.concatenate([[0.0], np.cumsum(rng.uniform(-0.3, 0.3, 50))])

    def comparison(a, b):
        loop = np.concatenate([a, b[::-1], a[:1]])
        return winding_half_turns(loop_from_angles(loop), CIRCLE)

    # three paths sharing endpoints sign-free: add whole half-turns
    f0 = base
    f1 = base + np.pi * np.sin(np.linspace(0, np.pi, 51)) ** 2
    f2 = base - 2 * np.pi * np.sin(np.linspace(0, np.pi, 51) / 2) ** 2 * np.sin(
        np.linspace(0, np.pi, 51)
    )
    d01 = comparison(f0, f1)
    d10 = comparison(f1, f0)
    assert d01 == -d10
    d12 = comparison(f1, f2)
    d02 = comparison(f0, f2)
    assert d01 + d12 == d02


def test_not_closed_rejected():
    vals = loop_from_angles(np.linspace(0, 1.1, 30))
    with pytest.raises(NotClosed):
        winding_half_turns(vals, CIRCLE)


def test_off_circle_rejected():
    vals = loop_from_angles(np.linspace(0, np.pi, 30))
    vals[:, 2] = 0.05
    vals /= np.linalg.norm(vals, axis=1, keepdims=True)
    with pytest.raises(OffCircle):
        winding_half_turns(vals, CIRCLE)


def test_orthogonal_step_rejected():
    vals = loop_from_angles([0.0, np.pi / 2, 0.0])
    with pytest.raises(ResolutionTooCoarse):
        winding_half_turns(vals, CIRCLE)
