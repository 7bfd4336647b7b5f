"""Decision procedures: are two boundary director fields homotopic?

For a polyhedral domain the answer is yes exactly when the edge chain and
the face chain both vanish. For the post domain the decision runs through
the periodicity classes, the post-vertex chains, the prism edge chain, and
the prism face chain — compared against zero in mode N, against the
periodicity sublattice in mode T.

Invalid inputs (tangency violations, non-liftable data, sum-rule residues)
are never classified; they are reported as such.
"""

import dataclasses
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import (
    AmbiguousStep,
    DegreeMethodsDisagree,
    EvaluationFailure,
    GeometryError,
    InconsistentLift,
    NotClosed,
    OffCircle,
    PeriodicityMismatch,
    PreconditionError,
    ResolutionExceeded,
    ResolutionTooCoarse,
)
from .field import Resolution, check_tangency
from .geometry import director_distance
from .invariant import (
    BoundaryLift,
    build_pair_lifts,
    edge_chain,
    face_chain,
    face_sum_residuals,
    patch_parity_residuals,
)
from .lift import LiftSeed
from .postinvariant import PostPairLift

VERDICT_HOMOTOPIC = "Homotopic"
VERDICT_D1 = "DistinguishedByD1"
VERDICT_D2 = "DistinguishedByD2"
VERDICT_PERIODICITY = "DistinguishedByPeriodicity"
VERDICT_INVALID = "InvalidInput"

_INPUT_ERRORS = (
    AmbiguousStep,
    DegreeMethodsDisagree,
    EvaluationFailure,
    GeometryError,
    InconsistentLift,
    NotClosed,
    OffCircle,
    PreconditionError,
    ResolutionExceeded,
    ResolutionTooCoarse,
)


@dataclasses.dataclass
class ClassificationReport:
    verdict: str
    chains: dict
    residuals: dict
    s_classes: dict
    resolution: Resolution
    seed_sign: int
    diagnostics: dict

    def to_json(self):
        return {
            "version": 1,
            "kind": "classification_report",
            "verdict": self.verdict,
            "chains": {k: c.to_json() for k, c in sorted(self.chains.items())},
            "residuals": {k: dict(sorted(v.items())) if isinstance(v, dict) else v
                          for k, v in sorted(self.residuals.items())},
            "s_classes": {str(k): v for k, v in sorted(self.s_classes.items())},
            "resolution": {
                "theta_max": self.resolution.theta_max,
                "level": self.resolution.level,
                "grid": self.resolution.grid,
                "max_depth": self.resolution.max_depth,
                "edge_samples": self.resolution.edge_samples,
            },
            "seed_sign": self.seed_sign,
            "diagnostics": dict(sorted(self.diagnostics.items())),
        }


def _invalid(reason, res, seed, **extra):
    return ClassificationReport(
        verdict=VERDICT_INVALID,
        chains={},
        residuals={},
        s_classes={},
        resolution=res,
        seed_sign=seed.sign,
        diagnostics={"reason": reason, **extra},
    )


def classify_pair(f0, f1, cx, res=None, seed=None):
    """Polyhedral decision: homotopic iff both the edge chain and the face
    chain vanish."""
    res = res or Resolution()
    seed = seed or LiftSeed()
    diagnostics = {}
    try:
        for f in (f0, f1):
            rep = check_tangency(f, cx, res=res)
            if not rep.ok:
                return _invalid(
                    f"{f.name}: tangency violation", res, seed,
                    violations=[(c, float(a)) for c, _, a in rep.violations[:8]],
                )
        lift0, lift1 = build_pair_lifts(f0, f1, cx, res=res, seed=seed)
        bd = [lift.boundary_degree_total() for lift in (lift0, lift1)]
        diagnostics["boundary_degrees"] = bd
        if any(bd):
            return _invalid(
                "nonzero lifted boundary degree: no continuous bulk "
                f"extension exists ({bd})", res, seed,
            )
        d1 = edge_chain(lift0, lift1, cx)
        residuals = {
            "face_sums": face_sum_residuals(d1, cx),
            "patch_parity": patch_parity_residuals(d1, cx),
        }
        if any(residuals["face_sums"].values()):
            return _invalid("edge chain violates the per-face sum rule", res, seed)
        if any(residuals["patch_parity"].values()):
            return _invalid(
                "edge chain has odd patch parity: one input has no "
                "continuous representative", res, seed,
            )
        chains = {"edge_chain": d1}
        if not d1.is_zero():
            return ClassificationReport(
                VERDICT_D1, chains, residuals, {}, res, seed.sign, diagnostics
            )
        d2 = face_chain(lift0, lift1, cx)
        chains["face_chain"] = d2
        total = sum(d2.coefficients.values())
        diagnostics["face_chain_total"] = total
        if total != 0:
            return _invalid("face chain violates the global sum rule", res, seed)
        verdict = VERDICT_HOMOTOPIC if d2.is_zero() else VERDICT_D2
        return ClassificationReport(
            verdict, chains, residuals, {}, res, seed.sign, diagnostics
        )
    except _INPUT_ERRORS as exc:
        return _invalid(f"{type(exc).__name__}: {exc}", res, seed)


def _post_field_valid(field, post, res):
    """Tangency on the field's own tangency claim, top-plate condition per
    its own metadata, and periodicity of the director data."""
    rep = check_tangency(field, post.complex, res=res,
                         face_ids=sorted(field.tangent_faces))
    if not rep.ok:
        return f"{field.name}: tangency violation on {rep.violations[0][0]}"
    if field.top_mode == "N":
        face = post.complex.faces["tf:topplate"]
        probes = face.from_plane(
            np.stack(np.meshgrid(np.linspace(-0.45, 0.45, 7),
                                 np.linspace(-0.45, 0.45, 7)), -1).reshape(-1, 2)
        )
        vals = field.evaluate("tf:topplate", probes)
        worst = max(director_distance(v, np.array([0.0, 0.0, 1.0])) for v in vals)
        if worst > 10 * res.tol_tangent:
            return f"{field.name}: top plate is not vertical (gap {worst:.2e})"
    if not field.periodic:
        return f"{field.name}: field does not claim periodicity"
    for alpha in (1, 2):
        face_id = f"tau2:{alpha}-"
        face = post.prism_faces[face_id]
        ss = np.linspace(0.05, 0.95, 6)
        tt = np.linspace(0.05, 0.95, 6)
        pts = np.array([face.chart(s, t) for s in ss for t in tt])
        here = field.evaluate(face_id, pts)
        there = field.evaluate(f"tau2:{alpha}+", pts + post.translate(alpha))
        gap = max(director_distance(here[k], there[k]) for k in range(len(pts)))
        if gap > 1e-5:
            return f"{field.name}: not periodic in direction {alpha} (gap {gap:.2e})"
    return None


def classify_post_pair(f0, f1, post, res=None, seed=None, mode=None):
    """Decision on the post domain. The requested mode (default: the
    domain's) selects the final comparison: exact equality of the prism
    face chain in mode N, membership in the periodicity sublattice in
    mode T."""
    res = res or Resolution(grid=32)
    seed = seed or LiftSeed(anchor_edge=post.anchor_edge)
    mode = mode or post.mode
    diagnostics = {}
    try:
        for f in (f0, f1):
            msg = _post_field_valid(f, post, res)
            if msg:
                return _invalid(msg, res, seed)
        try:
            pair = PostPairLift(f0, f1, post, res=res, seed=seed)
        except PeriodicityMismatch as exc:
            return ClassificationReport(
                VERDICT_PERIODICITY, {}, {}, {}, res, seed.sign,
                {"reason": str(exc)},
            )
        s_classes = dict(pair.s)
        diagnostics["top_bc_matches_mode"] = pair.top_bc_matches_mode
        diagnostics["gamma_correction"] = pair.alignment.gamma_correction
        diagnostics["alignment_top_mode"] = pair.alignment.top_mode

        d1_post = pair.post_edge_chain()
        residuals = {
            "post_face_sums": face_sum_residuals(d1_post, post.complex),
            "post_patch_parity": patch_parity_residuals(d1_post, post.complex),
        }
        if any(residuals["post_face_sums"].values()):
            return _invalid("post edge chain violates a sum rule", res, seed)
        if any(residuals["post_patch_parity"].values()):
            return _invalid("post edge chain has odd patch parity", res, seed)
        chains = {"post_edge_chain": d1_post}
        if not d1_post.is_zero():
            return ClassificationReport(
                VERDICT_D1, chains, residuals, s_classes, res, seed.sign, diagnostics
            )
        d2_post = pair.post_face_chain()
        chains["post_face_chain"] = d2_post
        if not d2_post.is_zero():
            return ClassificationReport(
                VERDICT_D2, chains, residuals, s_classes, res, seed.sign, diagnostics
            )
        dk1 = pair.prism_edge_chain()
        chains["prism_edge_chain"] = dk1
        if not dk1.is_zero():
            return ClassificationReport(
                VERDICT_D1, chains, residuals, s_classes, res, seed.sign, diagnostics
            )
        if pair.alignment.gamma_plus_class:
            diagnostics["gamma_plus_class"] = 1
            diagnostics["note"] = (
                "the comparison loop along the vertical prism edge is a "
                "half turn: a 1-cell obstruction under the normal top plate"
            )
            return ClassificationReport(
                VERDICT_D1, chains, residuals, s_classes, res, seed.sign, diagnostics
            )
        dk2 = pair.prism_face_chain()
        chains["prism_face_chain"] = dk2
        if mode == "N":
            ok = dk2.is_zero()
        else:
            ok = _in_sublattice(dk2)
        verdict = VERDICT_HOMOTOPIC if ok else VERDICT_D2
        return ClassificationReport(
            verdict, chains, residuals, s_classes, res, seed.sign, diagnostics
        )
    except _INPUT_ERRORS as exc:
        return _invalid(f"{type(exc).__name__}: {exc}", res, seed)


def _in_sublattice(chain):
    a = chain["tau2:1-"]
    b = chain["tau2:2-"]
    g1, g2 = chain.sublattice
    if g1 == 0 and g2 == 0:
        return a == 0 and b == 0
    if g1 != 0:
        if a % g1 != 0:
            return False
        return b == (a // g1) * g2
    if a != 0:
        return False
    return b % g2 == 0


def _max_threads():
    raw = os.environ.get("NEMATIC_TOPO_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def catalog(fields, domain, res=None, seed=None, mode=None):
    """Partition fields into homotopy classes by pairwise classification.

    Invalid fields are excluded with their reason. The partition is audited
    for transitivity; a violation is an internal error, not a verdict.
    Class signatures are the chains relative to the first valid field in
    name order."""
    from .post import PostDomain

    is_post = isinstance(domain, PostDomain)

    def compare(i, j):
        if is_post:
            return classify_post_pair(fields[i], fields[j], domain,
                                      res=res, seed=seed, mode=mode)
        return classify_pair(fields[i], fields[j], domain, res=res, seed=seed)

    n = len(fields)
    valid = []
    excluded = {}
    for i in range(n):
        rep = compare(i, i)
        if rep.verdict == VERDICT_HOMOTOPIC:
            valid.append(i)
        else:
            excluded[i] = rep.diagnostics.get("reason", rep.verdict)

    pairs = [(i, j) for ai, i in enumerate(valid) for j in valid[ai + 1:]]
    results = {}
    workers = _max_threads()
    if workers > 1 and pairs:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for (i, j), rep in zip(pairs, pool.map(lambda p: compare(*p), pairs)):
                results[(i, j)] = rep
    else:
        for i, j in pairs:
            results[(i, j)] = compare(i, j)

    # union-find over Homotopic verdicts
    parent = {i: i for i in valid}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for (i, j), rep in results.items():
        if rep.verdict == VERDICT_HOMOTOPIC:
            parent[find(i)] = find(j)

    # transitivity audit: within a class every pair must be Homotopic,
    # across classes none may be
    for (i, j), rep in results.items():
        same = find(i) == find(j)
        if same != (rep.verdict == VERDICT_HOMOTOPIC):
            raise RuntimeError(
                f"transitivity audit failed on pair ({i}, {j}): {rep.verdict}"
            )

    classes = {}
    for i in valid:
        classes.setdefault(find(i), []).append(i)

    reference = min(valid, key=lambda i: (fields[i].name, i)) if valid else None
    signatures = {}
    for root, members in classes.items():
        rep_member = min(members, key=lambda i: (fields[i].name, i))
        if reference is None or rep_member == reference:
            signatures[root] = {}
        else:
            a, b = sorted((reference, rep_member))
            rep = results.get((a, b))
            if rep is None:
                rep = compare(a, b)
            signatures[root] = {k: c.to_json() for k, c in rep.chains.items()}

    return {
        "classes": [sorted(members) for members in
                    sorted(classes.values(), key=lambda ms: min(ms))],
        "excluded": {int(k): v for k, v in excluded.items()},
        "signatures": [signatures[find(ms[0])] for ms in
                       sorted(classes.values(), key=lambda m: min(m))],
        "reference": reference,
    }
