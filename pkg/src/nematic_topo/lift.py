"""Lifting director data to sphere-valued data by sign propagation.

A director path with consecutive angles below pi/2 lifts uniquely once a
representative sign is chosen at one sample. Patches lift along a spanning
tree of the mesh; every non-tree adjacency must agree in sign, otherwise
the data has no continuous sphere-valued representative.
"""

import dataclasses

import numpy as np

from .errors import AmbiguousStep, InconsistentLift
from .geometry import director_distance, normalize

AMBIGUOUS_DOT = 1e-6


@dataclasses.dataclass
class LiftSeed:
    """Anchor for the global two-valued lift: a truncated edge plus the sign
    of the representative taken along its canonical direction."""

    anchor_edge: str = None
    sign: int = 1


@dataclasses.dataclass
class SampledVectorPath:
    cell_id: str
    params: np.ndarray
    points: np.ndarray
    values: np.ndarray  # unit vectors, consecutive dots > 0


@dataclasses.dataclass
class SampledVectorPatch:
    cell_id: str
    mesh: object
    values: np.ndarray


def _chain_signs(values, first):
    """Sign-propagate along an ordered list of directors; returns vectors."""
    out = np.empty_like(values)
    out[0] = first
    for i in range(1, len(values)):
        d = float(np.dot(out[i - 1], values[i]))
        if abs(d) < AMBIGUOUS_DOT:
            raise AmbiguousStep(
                f"consecutive directors nearly orthogonal (|dot|={abs(d):.2e})"
            )
        out[i] = values[i] if d > 0 else -values[i]
    return out


def lift_path(path, seed_value):
    """Lift a sampled director path given the vector value at its first
    sample. seed_value must project to the first director."""
    seed = normalize(seed_value)
    if director_distance(seed, path.values[0]) > 1e-7:
        raise ValueError("seed does not project to the first sample")
    start = path.values[0] if float(np.dot(seed, path.values[0])) > 0 else -path.values[0]
    lifted = _chain_signs(path.values, start)
    return SampledVectorPath(
        cell_id=path.cell_id, params=path.params, points=path.points, values=lifted
    )


def lift_patch(patch, seed_index, seed_value):
    """Lift a sampled director patch from a seed vertex by wavefront sign
    propagation over mesh adjacency; every mesh edge is then checked for
    sign consistency (a flip around a cycle means no lift exists)."""
    values = np.asarray(patch.values)
    n = len(values)
    edges = np.asarray(patch.mesh.edge_adjacency())
    both = np.vstack([edges, edges[:, ::-1]])

    seed = normalize(seed_value)
    if director_distance(seed, values[seed_index]) > 1e-7:
        raise ValueError("seed does not project to the seed vertex director")
    sign = np.zeros(n)
    sign[seed_index] = 1.0 if float(np.dot(seed, values[seed_index])) > 0 else -1.0
    dots = np.einsum("ij,ij->i", values[both[:, 0]], values[both[:, 1]])
    if np.any(np.abs(dots) < AMBIGUOUS_DOT):
        raise AmbiguousStep(f"{patch.cell_id}: near-orthogonal mesh edge")
    rel = np.sign(dots)
    for _ in range(n):
        src_known = (sign[both[:, 0]] != 0) & (sign[both[:, 1]] == 0)
        if not np.any(src_known):
            break
        targets = both[src_known, 1]
        props = sign[both[src_known, 0]] * rel[src_known]
        # first proposal per target wins; duplicates are re-checked below
        order = np.argsort(targets, kind="stable")
        targets = targets[order]
        props = props[order]
        first = np.concatenate([[True], targets[1:] != targets[:-1]])
        sign[targets[first]] = props[first]
    if np.any(sign == 0):
        raise InconsistentLift(f"{patch.cell_id}: mesh is not connected")
    ok = sign[both[:, 1]] == sign[both[:, 0]] * rel
    if not np.all(ok):
        raise InconsistentLift(f"{patch.cell_id}: sign flips around a mesh cycle")
    lifted = values * sign[:, None]
    return SampledVectorPatch(cell_id=patch.cell_id, mesh=patch.mesh, values=lifted)


def lift_loop_closes(values):
    """Lift an ordered closed director loop (first == last sample sign-free)
    and report whether the lift closes (True) or ends antipodal (False)."""
    lifted = _chain_signs(values, values[0])
    d = float(np.dot(lifted[-1], lifted[0]))
    if abs(d) < AMBIGUOUS_DOT:
        raise AmbiguousStep("loop closure ambiguous")
    return d > 0


def periodicity_class(field, post, alpha, res=None):
    """Lift the field along the bottom prism edge in direction alpha and
    compare the endpoint lift with the start: 0 = periodic, 1 = antiperiodic.
    """
    from .field import Resolution, sample_edge

    res = res or Resolution()
    cell_id = f"tau1:{alpha}-"
    path = sample_edge(field, post, cell_id, n0=2 * res.grid + 1, res=res)
    start = path.values[0]
    if director_distance(start, path.values[-1]) > 1e-6:
        raise InconsistentLift(
            f"{field.name}: not periodic along {cell_id} "
            f"(mismatch {director_distance(start, path.values[-1]):.2e})"
        )
    lifted = _chain_signs(path.values, start)
    d = float(np.dot(lifted[-1], lifted[0]))
    if abs(d) < AMBIGUOUS_DOT:
        raise AmbiguousStep(f"{cell_id}: periodicity class ambiguous")
    return 0 if d > 0 else 1
