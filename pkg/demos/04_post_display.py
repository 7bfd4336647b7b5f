"""The periodic post-display geometry.

A rectangular post stands on the bottom plate of a cell with unit
horizontal period; boundary conditions are tangent on the plate and post,
periodic horizontally, and either normal (N) or tangent (T) on the top
plate. Besides the polyhedral chains at the eight post vertices, two new
phenomena appear:

* a periodicity class per horizontal direction: the lift of a periodic
  director field is either periodic or antiperiodic across the cell;
* the prism face chain is only defined up to a sublattice generated by the
  periodicity classes, because the homotopy filling on the vertical prism
  edge can be rewrapped. Mode T quotients by that sublattice; mode N
  compares exactly.
"""

from nematic_topo import build_post_domain, classify_post_pair, periodicity_class
from nematic_topo.field import Resolution
from nematic_topo.generators import cell_rotor, post_base, prism_bubble

post = build_post_domain(w=0.3, d=0.3, h=0.5, H=1.0, mode="T", eps=0.05)
res = Resolution(grid=32)

base = post_base(post, "T")
print("tangent-top base field:")
print(f"  periodicity classes s = ({periodicity_class(base, post, 1)}, "
      f"{periodicity_class(base, post, 2)})")

rotor = cell_rotor(cell_rotor(base, post, 1), post, 2)
print("after composing half-turn rotors in both directions:")
print(f"  s = ({periodicity_class(rotor, post, 1)}, "
      f"{periodicity_class(rotor, post, 2)})")

report = classify_post_pair(base, rotor, post, res=res)
print(f"\nbase vs rotor: {report.verdict}")

engineered = prism_bubble(rotor, post, 2, -2)
print("\nrotor vs rotor + (2,-2) prism bubbles, decided under both modes:")
for mode in ("T", "N"):
    report = classify_post_pair(rotor, engineered, post, res=res, mode=mode)
    chain = report.chains.get("prism_face_chain")
    print(f"  mode {mode}: {report.verdict}"
          + (f", prism face chain {chain.coefficients}, "
             f"sublattice {chain.sublattice}" if chain else ""))
