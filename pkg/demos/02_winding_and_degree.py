"""The two integer engines.

Every invariant in the library reduces to one of two computations:
a winding number of a closed director loop inside a face circle (counted
in half-turns, because directors return to themselves after pi), or the
degree of a closed triangulated map to the unit sphere.

Both engines carry an independent cross-check: windings are recounted by
signed crossings of a generic level, degrees by signed preimages of a
generic direction, and a disagreement is a hard error rather than data.
"""

import numpy as np

from nematic_topo import sphere_degree, winding_crossing_oracle, winding_half_turns
from nematic_topo.complex import FaceCircle
from nematic_topo.geometry import icosphere

circle = FaceCircle(normal=np.array([0.0, 0, 1]),
                    u=np.array([1.0, 0, 0]), v=np.array([0.0, 1, 0]))

for k in (0, 1, -2, 3):
    th = np.linspace(0.2, 0.2 + k * np.pi, 80)
    loop = np.stack([np.cos(th), np.sin(th), np.zeros_like(th)], axis=1)
    w = winding_half_turns(loop, circle)
    o = winding_crossing_oracle(loop, circle)
    print(f"director loop of {k} half-turns: winding {w}, crossing oracle {o}")

V, T = icosphere(3)
print(f"\nicosphere level 3: {len(T)} triangles")
print(f"identity map degree      = {sphere_degree(V, T)}")
print(f"antipodal map degree     = {sphere_degree(-V, T)}")

th = np.arccos(np.clip(V[:, 2], -1, 1))
ph = np.arctan2(V[:, 1], V[:, 0])
for k in (2, -3):
    W = np.stack([np.sin(th) * np.cos(k * ph),
                  np.sin(th) * np.sin(k * ph), np.cos(th)], axis=1)
    print(f"longitude-{k:+d} map degree  = {sphere_degree(W, T)}")
