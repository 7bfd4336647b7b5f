"""Deciding homotopy on a polyhedron.

Two tangent director fields on a truncated polyhedron are homotopic exactly
when two integer chains vanish: the edge chain (per cleaved edge, the
half-turn winding of the comparison loop) and the face chain (per cleaved
face, the degree of the comparison sphere glued from both lifted fields).

The fixture generators realize prescribed values: `edge_twist` shifts the
edge chain by +n/-n on two cleaved edges of one face, `face_bubble` shifts
the face chain by +n/-n on two cleaved faces while leaving edges alone.
"""

from nematic_topo import TruncationSpec, build_truncated, classify_pair, cube
from nematic_topo.generators import edge_twist, face_bubble, tangent_base

cx = build_truncated(cube(), TruncationSpec(0.1))
base = tangent_base(cx)

print("base vs itself:")
report = classify_pair(base, base, cx)
print(f"  verdict = {report.verdict}")

arcs = cx.faces["tf:f0"].arc_ids
twisted = edge_twist(base, cx, "tf:f0", arcs[0], arcs[2], 2)
print("\nbase vs a 2-half-turn edge twist:")
report = classify_pair(base, twisted, cx)
print(f"  verdict = {report.verdict}")
print(f"  edge chain = {report.chains['edge_chain'].coefficients}")
print(f"  per-face sum-rule residuals = "
      f"{sorted(report.residuals['face_sums'].values())}")

bubbled = face_bubble(base, cx, "cf:v0", "cf:v6", 1)
print("\nbase vs a +1/-1 face bubble pair:")
report = classify_pair(base, bubbled, cx)
print(f"  verdict = {report.verdict}")
print(f"  edge chain = {report.chains['edge_chain'].coefficients}  (empty = zero)")
print(f"  face chain = {report.chains['face_chain'].coefficients}")
print(f"  total of face coefficients = "
      f"{sum(report.chains['face_chain'].coefficients.values())}  (always 0)")
