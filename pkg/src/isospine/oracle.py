"""Congruence-based predictions of spine structure and diameters, and a verifier
that compares them with computed graphs."""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass, field
from math import isqrt
from typing import Optional

from .arith import is_prime
from .classgrp import class_number, prime_form_order
from .graph import (
    FpIsogenyGraph,
    IsogenyMultigraph,
    SpineAnalysis,
    build_fp_graph,
    build_full_graph,
    omega_analysis,
    spine,
)
from .metrics import eccentricity_profile

__all__ = [
    "P3_EXCEPTIONS",
    "AnomalyPrediction",
    "StructurePrediction",
    "DiameterPrediction",
    "ConformanceReport",
    "predict_fp_anomalies",
    "brute_force_fp_loops",
    "predict_spine_structure",
    "predict_spine_diameters",
    "loop_js",
    "rim_lengths",
    "verify",
]

P3_EXCEPTIONS = frozenset({5, 7, 11, 13, 17, 19, 23, 29, 31, 41, 47, 59, 61, 71, 79, 89, 101, 139, 151, 199, 271})

# new-edge counts for ell = 3, keyed by p mod 840, split by fold count
_ELL3_TABLE: dict[int, dict[int, tuple[int, ...]]] = {
    0: {
        0: (1, 13, 37, 43, 67, 73, 97, 109, 121, 157, 163, 169, 187, 193, 253, 277, 283, 289, 307,
            313, 337, 361, 373, 397, 403, 421, 433, 457, 493, 517, 523, 529, 541, 547, 577, 589,
            613, 643, 667, 673, 697, 709, 733, 757, 781, 787, 793, 817),
        1: (61, 103, 127, 181, 211, 223, 229, 241, 247, 331, 349, 367, 379, 409, 463, 481, 487,
            499, 571, 583, 601, 607, 649, 661, 703, 727, 739, 769, 823, 829),
        2: (19, 79, 139, 151, 319, 451, 619, 631, 691, 751, 799, 811),
        3: (31, 199, 271, 391, 439, 559),
    },
    1: {
        0: (17, 29, 53, 113, 137, 149, 173, 197, 221, 233, 257, 281, 293, 317, 353, 377, 389, 401,
            437, 449, 473, 533, 557, 569, 593, 617, 641, 653, 677, 701, 713, 737, 773, 797, 809, 821),
        1: (41, 89, 101, 209, 269, 341, 461, 509, 521, 629, 689, 761),
    },
    2: {
        0: (83, 107, 227, 323, 347, 443, 467, 563, 587, 683, 803, 827),
        1: (11, 23, 47, 143, 167, 179, 263, 383, 407, 491, 503, 527, 611, 647, 659, 743, 767, 779),
        2: (59, 71, 131, 191, 239, 251, 299, 359, 419, 431, 599, 731),
        3: (311, 479, 551, 671, 719, 839),
    },
}

_ELL3_LOOKUP: dict[int, tuple[int, int]] = {
    residue: (folds, count)
    for folds, by_count in _ELL3_TABLE.items()
    for count, residues in by_count.items()
    for residue in residues
}


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _ell3_fold_count(p: int) -> int:
    if p % 12 == 11:
        return 2
    if p % 12 == 5:
        return 1
    return 0


# ---------------------------------------------------------------------------
# loops and multi-edges in G_ell(F_p)


@dataclass(frozen=True)
class AnomalyPrediction:
    ell: int
    p: int
    loops: bool
    multi_edges: bool


def predict_fp_anomalies(ell: int, p: int) -> AnomalyPrediction:
    """Loops need p = 3 mod 4 and 4*ell - p square; multi-edges need p = 1 mod 4 and 2*ell - p square."""
    if not (is_prime(ell) and is_prime(p)):
        raise ValueError("ell and p must be prime")
    if p <= ell:
        raise ValueError("p must exceed ell")
    loops = p % 4 == 3 and _is_square(4 * ell - p)
    multi = (ell, p) == (2, 3) or (p % 4 == 1 and class_number(-4 * p) >= 2 and _is_square(2 * ell - p))
    return AnomalyPrediction(ell, p, loops, multi)


def brute_force_fp_loops(ell: int, p: int) -> bool:
    """Whether the F_p-endomorphism ring of some supersingular curve has an element of norm ell.

    Elements (a + b*sqrt(-p))/2 with b != 0 and a^2 + p*b^2 = 4*ell; when
    p = 1 mod 4 only a, b both even are allowed (the order is Z[sqrt(-p)]).
    """
    for b in range(1, isqrt(4 * ell // p) + 1):
        rest = 4 * ell - p * b * b
        if not _is_square(rest):
            continue
        a = isqrt(rest)
        if p % 4 == 3 and (a - b) % 2 == 0:
            return True
        if a % 2 == 0 and b % 2 == 0:
            return True
    return False


# ---------------------------------------------------------------------------
# spine structure


def loop_js(p: int, ell: int) -> list[int]:
    """j-invariants (mod p) carrying a loop in G_ell(F_p-bar), by congruence."""
    out = set()
    if ell == 2:
        if p % 4 == 3:
            out.add(1728 % p)
        if p % 8 in (5, 7):
            out.add(8000 % p)
        if p % 7 in (3, 5, 6):
            out.add(-3375 % p)
    elif ell == 3:
        if p % 3 == 2:
            out.update((0, 54000 % p))
        if p % 8 in (5, 7):
            out.add(8000 % p)
        # CM by -11: supersingular exactly when 11 is a nonresidue class of p
        if p % 11 in (2, 6, 7, 8, 10):
            out.add(-32768 % p)
    else:
        raise ValueError(f"unsupported ell {ell}")
    return sorted(out)


def _cycle_components(disc: int, ell: int) -> int:
    """Number of connected components among h(disc) vertices joined by the class of a prime above ell."""
    h = class_number(disc)
    order = prime_form_order(ell, disc)
    return h if order is None else h // order


@dataclass
class StructurePrediction:
    p: int
    ell: int
    routed: bool = False
    case: str = ""
    fold_count: Optional[int] = None
    fold_contains: list[int] = field(default_factory=list)
    stack_count: Optional[int] = None
    vertex_attachment_js: list[int] = field(default_factory=list)
    new_edge_count: Optional[int] = None
    new_edges_disjoint: Optional[bool] = None
    attaching: Optional[bool] = None
    attaching_indeterminate: bool = False
    attach_to_folded: Optional[bool] = None
    loop_js: list[int] = field(default_factory=list)
    spine_vertex_count: Optional[int] = None
    fp_vertex_count: Optional[int] = None
    component_diameters: Optional[dict[int, int]] = None

    def to_dict(self) -> dict:
        return asdict(self)


def predict_spine_structure(p: int, ell: int) -> StructurePrediction:
    """Predicted Omega behavior of G_ell(F_p) from congruences of p (p >= 17)."""
    if ell not in (2, 3):
        raise ValueError(f"unsupported ell {ell}")
    if not is_prime(p) or p < 5:
        raise ValueError(f"p must be prime >= 5, got {p}")
    pred = StructurePrediction(p=p, ell=ell)
    if (ell == 2 and p < 17) or (ell == 3 and (p in P3_EXCEPTIONS or p < 17)):
        pred.routed = True
        pred.case = "small prime: routed to computation"
        return pred
    pred.loop_js = loop_js(p, ell)
    if ell == 2:
        _predict_ell2(p, pred)
    else:
        _predict_ell3(p, pred)
    return pred


def _predict_ell2(p: int, pred: StructurePrediction) -> None:
    m = p % 120
    new_edge = p % 15 in (11, 14)
    pred.new_edge_count = 1 if new_edge else 0
    pred.attaching = new_edge
    if p % 4 == 1:
        h4 = class_number(-4 * p)
        n = h4 // 2
        pred.fp_vertex_count = h4
        pred.spine_vertex_count = n
        folds = 1 if p % 8 == 5 else 0
        pred.fold_count = folds
        pred.fold_contains = [8000 % p] if folds else []
        pred.stack_count = (h4 // 2 - folds) // 2
        if p == 29:
            pred.case = "p=29"
            pred.attach_to_folded = True
            pred.component_diameters = {2: 1}
        elif m in (29, 101):
            pred.case = "29,101 mod 120"
            pred.attach_to_folded = False
            pred.component_diameters = _shape(n, {0: 1, 3: 1}, 5)
        elif m in (41, 89):
            pred.case = "41,89 mod 120"
            pred.attach_to_folded = False
            pred.component_diameters = _shape(n, {3: 1}, 4)
        elif m in (13, 37, 53, 61, 77, 109):
            pred.case = "13,37,53,61,77,109 mod 120"
            pred.component_diameters = _shape(n, {0: 1}, 1)
        else:
            pred.case = "1,17,49,73,97,113 mod 120"
            pred.component_diameters = _shape(n, {}, 0)
    elif p % 8 == 3:
        h = class_number(-p)
        n = 2 * h
        pred.fp_vertex_count = 4 * h
        pred.spine_vertex_count = n
        pred.fold_count = 1
        pred.fold_contains = sorted({1728 % p, 287496 % p})
        pred.stack_count = (h - 1) // 2
        if p == 59:
            pred.case = "p=59"
            pred.attach_to_folded = True
            pred.component_diameters = {4: 1}
        elif m in (11, 59):
            pred.case = "11,59 mod 120"
            pred.attach_to_folded = False
            # a folded pair, the 8-vertex double tripod, then tripods of four
            rest = n - 2 - 8
            pred.component_diameters = _merge({1: 1, 5: 1}, {2: rest // 4})
        else:
            pred.case = "19,43,67,83,91,107 mod 120"
            pred.component_diameters = _merge({1: 1}, {2: (n - 2) // 4})
    else:
        h = class_number(-p)
        r = prime_form_order(2, -p)
        pred.fp_vertex_count = 2 * h
        pred.spine_vertex_count = h
        pred.fold_count = 1
        pred.fold_contains = sorted({1728 % p, 8000 % p})
        pred.stack_count = (h // r - 1) // 2
        if m in (71, 119):
            pred.case = "71,119 mod 120"
            pred.attaching = None
            pred.attaching_indeterminate = True
        else:
            pred.case = "7,23,31,47,79,103 mod 120"


def _shape(n: int, special: dict[int, int], used: int) -> dict[int, int]:
    """Special components plus the remaining vertices joined in pairs."""
    return _merge(special, {1: (n - used) // 2})


def _merge(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    c = Counter(a)
    c.update(b)
    return {k: v for k, v in sorted(c.items()) if v}


def _predict_ell3(p: int, pred: StructurePrediction) -> None:
    folds, count = _ELL3_LOOKUP.get(p % 840, (None, None))
    expected_folds = _ell3_fold_count(p)
    if folds is None or folds != expected_folds:
        raise ValueError(f"p={p} is not covered by the ell=3 tables")
    pred.case = f"{folds} fold(s), {count} new edge(s) mod 840"
    pred.fold_count = folds
    pred.fold_contains = [0] if folds == 1 else []
    pred.vertex_attachment_js = [1728 % p] if folds == 2 else []
    pred.new_edge_count = count
    pred.new_edges_disjoint = True if count >= 2 else None
    if p % 4 == 1:
        comps = _cycle_components(-4 * p, 3)
        pred.fp_vertex_count = class_number(-4 * p)
    else:
        comps = _cycle_components(-p, 3) + _cycle_components(-4 * p, 3)
        pred.fp_vertex_count = class_number(-p) + class_number(-4 * p)
    pred.stack_count = (comps - folds) // 2


# ---------------------------------------------------------------------------
# spine diameters


@dataclass
class DiameterPrediction:
    p: int
    component_diameters: Optional[dict[int, int]] = None
    spine_diameter: Optional[int] = None
    rim_length: Optional[int] = None
    indeterminate: bool = False


def predict_spine_diameters(p: int, ell: int = 2) -> DiameterPrediction:
    """Expected spine component diameters for ell = 2 and p >= 17."""
    if ell != 2:
        raise ValueError("diameter predictions are only available for ell = 2")
    if p < 17 or not is_prime(p):
        raise ValueError("p must be a prime >= 17")
    out = DiameterPrediction(p)
    if p % 8 == 7:
        r = prime_form_order(2, -p)
        out.rim_length = r
        if p % 120 in (71, 119):
            out.indeterminate = True
        else:
            out.spine_diameter = (r + 3) // 2
        return out
    out.component_diameters = predict_spine_structure(p, 2).component_diameters
    return out


def rim_lengths(fp: FpIsogenyGraph) -> list[int]:
    """Number of surface vertices in each component of G_2(F_p), p = 3 mod 4."""
    out = []
    for comp in fp.components():
        out.append(sum(1 for v in comp if fp.vertices[v].surface))
    return out


# ---------------------------------------------------------------------------
# verification


@dataclass
class ConformanceReport:
    p: int
    ell: int
    verdict: str
    indeterminate: bool = False
    resolution: Optional[str] = None
    diff: dict = field(default_factory=dict)
    description: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def status(self) -> str:
        """PASS / FAIL / INDETERMINATE-RESOLVED / ROUTED."""
        if self.verdict == "PASS" and self.indeterminate:
            return "INDETERMINATE-RESOLVED"
        return self.verdict

    def line(self) -> str:
        text = f"p={self.p} ell={self.ell} {self.status}"
        if self.resolution:
            text += f": {self.resolution}"
        if self.diff:
            text += " " + "; ".join(f"{k}: predicted {v['predicted']} computed {v['computed']}" for k, v in self.diff.items())
        if self.description:
            text += f" ({self.description})"
        return text


def _spine_shape(sp: IsogenyMultigraph) -> dict[int, int]:
    return dict(sorted(Counter(eccentricity_profile(sp).component_diameters).items()))


def _describe(analysis: SpineAnalysis) -> str:
    return (
        f"folds={analysis.fold_count} stacks={analysis.stack_count} "
        f"vertex_attachments={[j for j, _ in analysis.vertex_attachments]} "
        f"new_edges={[(e.j1, e.j2, e.attaching) for e in analysis.new_edges]}"
    )


def _resolution(analysis: SpineAnalysis) -> str:
    att = analysis.attaching_edges
    if att:
        return "attaching at " + ", ".join(f"{e.j1}-{e.j2}" for e in att)
    if analysis.new_edges:
        return "new edge, not attaching"
    return "no new edge"


def verify(
    p: int,
    ell: int,
    analysis: Optional[SpineAnalysis] = None,
) -> ConformanceReport:
    """Compare predict_spine_structure(p, ell) with the computed spine."""
    pred = predict_spine_structure(p, ell)
    if analysis is None:
        full = build_full_graph(p, ell)
        analysis = omega_analysis(build_fp_graph(p, ell), spine(full), ell)
    sp = analysis.spine_graph
    if pred.routed:
        return ConformanceReport(p, ell, "ROUTED", description=_describe(analysis))

    computed: dict = {}
    expected: dict = {}

    def check(name, want, got):
        expected[name] = want
        computed[name] = got

    check("fold_count", pred.fold_count, analysis.fold_count)
    fold_js = set(analysis.fold_js)
    check("stack_count", pred.stack_count, analysis.stack_count)
    check("unclassified_components", 0, len(analysis.unclassified))
    check("loop_js", pred.loop_js, sorted(j for j in (sp.j_value(i) for i in sp.loops())))
    check("vertex_attachment_js", pred.vertex_attachment_js, sorted(j for j, _ in analysis.vertex_attachments))
    check("new_edge_count", pred.new_edge_count, len(analysis.new_edges))
    check("fold_contains", pred.fold_contains, sorted(set(pred.fold_contains) & fold_js))
    if pred.spine_vertex_count is not None:
        check("spine_vertex_count", pred.spine_vertex_count, len(sp))
    if pred.fp_vertex_count is not None:
        check("fp_vertex_count", pred.fp_vertex_count, sum(len(c) for c in analysis.components))
    if pred.new_edges_disjoint is not None:
        ends = [j for e in analysis.new_edges for j in (e.j1, e.j2)]
        check("new_edges_disjoint", pred.new_edges_disjoint, len(ends) == len(set(ends)))
    if pred.attaching is not None:
        check("attaching", pred.attaching, bool(analysis.attaching_edges))
    if pred.attach_to_folded is not None and analysis.attaching_edges:
        fold_image = _folded_image_js(analysis)
        e = analysis.attaching_edges[0]
        check("attach_to_folded", pred.attach_to_folded, e.j1 in fold_image or e.j2 in fold_image)
    if pred.component_diameters is not None:
        check("component_diameters", pred.component_diameters, _spine_shape(sp))

    diff = {k: {"predicted": expected[k], "computed": computed[k]} for k in expected if expected[k] != computed[k]}
    report = ConformanceReport(p, ell, "FAIL" if diff else "PASS", diff=diff)
    if pred.attaching_indeterminate:
        report.indeterminate = True
        report.resolution = _resolution(analysis)
    return report


def _folded_image_js(analysis: SpineAnalysis) -> set[int]:
    """j-invariants of the Gamma-image of folded components."""
    image = analysis.gamma_image
    comps = image.components()
    fold_js = set(analysis.fold_js)
    out = set()
    for comp in comps:
        js = {image.j_value(i) for i in comp}
        if js & fold_js:
            out |= js
    return out
