"""Exception taxonomy for the library.

Geometry and sampling failures are raised; data-integrity findings
(tangency violations, sum-rule residuals) are returned as values, not
raised, so callers can report them.
"""


class NematicTopoError(Exception):
    """Base class for all library errors."""


class GeometryError(NematicTopoError):
    """Invalid geometric input (bad polyhedron, bad dimensions)."""


class BallsOverlap(GeometryError):
    """Two truncation balls intersect."""


class BallMeetsForeignCell(GeometryError):
    """A truncation ball reaches a cell not incident to its vertex."""


class DegeneratePatch(GeometryError):
    """A cleaved patch subtends a hemisphere or more; truncation too coarse."""


class EvaluationFailure(NematicTopoError):
    """A field evaluator returned an unusable value at a probe point."""


class ResolutionExceeded(NematicTopoError):
    """Adaptive refinement hit max depth without meeting the angle bound."""


class ResolutionTooCoarse(NematicTopoError):
    """A computed invariant failed its integer rounding guard."""


class AmbiguousStep(NematicTopoError):
    """Two consecutive directors are within tolerance of orthogonal; the
    sign choice would be a coin flip, so we refuse."""


class InconsistentLift(NematicTopoError):
    """Sign propagation around a cycle flipped: the data is under-resolved
    or has no continuous sphere-valued representative."""


class NotClosed(NematicTopoError):
    """A loop or mesh expected to be closed is not."""


class OffCircle(NematicTopoError):
    """A loop expected to lie in a face circle leaves it."""


class DegreeMethodsDisagree(NematicTopoError):
    """The signed-area method and the preimage-count method returned
    different integers for the same sphere map."""


class PreconditionError(NematicTopoError):
    """An operation was called before its chain-level precondition held
    (e.g. a face comparison with a nonzero edge chain)."""


class PeriodicityMismatch(NematicTopoError):
    """The two fields have different lift periodicity classes."""


class SchemaError(NematicTopoError):
    """A JSON document did not match the expected schema."""
