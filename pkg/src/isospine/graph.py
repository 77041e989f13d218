"""The three isogeny graphs: G_ell(F_p), G_ell(F_p-bar) and the spine, plus the
analysis of how F_p components collapse onto the spine."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .arith import (
    PrimeFieldElement,
    make_field_context,
    roots_with_multiplicity,
)
from .curves import (
    InvariantTriple,
    WeierstrassCurve,
    fp_isomorphic,
    invariants,
    rational_ell_kernels,
    smallest_supersingular_j,
    supersingular_j_list,
    twists_from_j,
    velu_isogeny,
)
from .modpoly import neighbors, phi_in_y

__all__ = [
    "IsogenyMultigraph",
    "FpVertex",
    "FpIsogenyGraph",
    "NewEdge",
    "SpineAnalysis",
    "build_full_graph",
    "build_fp_graph",
    "build_spine_direct",
    "spine",
    "omega_analysis",
]


def _check_args(p: int, ell: int) -> None:
    make_field_context(p)
    if ell not in (2, 3):
        raise ValueError(f"ell must be 2 or 3, got {ell}")
    if ell == p:
        raise ValueError("ell must differ from p")


def _components(n: int, adjacency: Sequence[Iterable[int]]) -> list[list[int]]:
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [s], deque([s])
        while queue:
            v = queue.popleft()
            for w in adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        out.append(sorted(comp))
    return out


# ---------------------------------------------------------------------------
# j-labelled multigraphs


class IsogenyMultigraph:
    """Directed multigraph on j-invariants with integer edge multiplicities."""

    def __init__(self, p: int, ell: int, vertices: Sequence, edges: dict[tuple[int, int], int]):
        order = sorted(range(len(vertices)), key=lambda i: vertices[i].sort_key())
        remap = {old: new for new, old in enumerate(order)}
        self.p = p
        self.ell = ell
        self.vertices = [vertices[i] for i in order]
        self.edges = {(remap[a], remap[b]): m for (a, b), m in edges.items() if m > 0}
        self.index = {v: i for i, v in enumerate(self.vertices)}

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"IsogenyMultigraph(p={self.p}, ell={self.ell}, n={len(self)})"

    @property
    def nonresidue(self) -> int:
        return make_field_context(self.p).nonresidue

    def label(self, i: int) -> str:
        return self.vertices[i].label()

    def j_value(self, i: int) -> Optional[int]:
        """Integer j of an F_p vertex, None for vertices outside F_p."""
        v = self.vertices[i]
        if isinstance(v, PrimeFieldElement):
            return v.value
        return v.a if v.b == 0 else None

    def is_fp_vertex(self, i: int) -> bool:
        return self.j_value(i) is not None

    def find(self, j) -> int:
        """Index of the vertex labelled j (an int or a field element)."""
        for i, v in enumerate(self.vertices):
            if v == j:
                return i
        raise KeyError(j)

    def multiplicity(self, a: int, b: int) -> int:
        return self.edges.get((a, b), 0)

    def undirected_multiplicity(self, a: int, b: int) -> int:
        return min(self.multiplicity(a, b), self.multiplicity(b, a))

    def out_multiplicity(self, a: int) -> int:
        return sum(m for (s, _), m in self.edges.items() if s == a)

    @cached_property
    def adjacency(self) -> list[list[int]]:
        """Neighbors of each vertex ignoring loops, direction and multiplicity."""
        adj = [set() for _ in self.vertices]
        for a, b in self.edges:
            if a != b:
                adj[a].add(b)
        return [sorted(s) for s in adj]

    def is_symmetric(self) -> bool:
        return all((b, a) in self.edges for (a, b) in self.edges)

    def loops(self) -> list[int]:
        return sorted(a for (a, b) in self.edges if a == b)

    def components(self) -> list[list[int]]:
        return _components(len(self), self.adjacency)

    def induced(self, keep: Iterable[int]) -> "IsogenyMultigraph":
        keep = sorted(set(keep))
        pos = {old: new for new, old in enumerate(keep)}
        edges = {(pos[a], pos[b]): m for (a, b), m in self.edges.items() if a in pos and b in pos}
        return IsogenyMultigraph(self.p, self.ell, [self.vertices[i] for i in keep], edges)

    def undirected_edges(self) -> list[tuple[int, int, int]]:
        """(a, b, multiplicity) for a <= b; multiplicity = min of the two directions."""
        out = []
        for (a, b), m in sorted(self.edges.items()):
            if a <= b:
                out.append((a, b, min(m, self.multiplicity(b, a))))
        return out

    def same_as(self, other: "IsogenyMultigraph") -> bool:
        if [v.sort_key() for v in self.vertices] != [v.sort_key() for v in other.vertices]:
            return False
        return self.edges == other.edges

    def to_text(self) -> str:
        lines = [f"# isogeny graph p={self.p} ell={self.ell} nonresidue={self.nonresidue} (s^2 = nonresidue)"]
        for i in range(len(self)):
            lines.append(f"v {i} {self.label(i)}")
        for (a, b), m in sorted(self.edges.items()):
            lines.append(f"e {a} {b} {m}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        lines = ["digraph G {", f'  label="p={self.p} ell={self.ell} s^2={self.nonresidue}";']
        for i in range(len(self)):
            lines.append(f'  {i} [label="{self.label(i)}"];')
        for (a, b), m in sorted(self.edges.items()):
            lines.append(f'  {a} -> {b} [label="{m}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_full_graph(p: int, ell: int) -> IsogenyMultigraph:
    """All supersingular j in F_p^2, found by breadth-first search from the smallest one in F_p."""
    _check_args(p, ell)
    F = make_field_context(p)
    K = F.extension()
    seed = K.lift(smallest_supersingular_j(p))
    index = {seed: 0}
    labels = [seed]
    parent: dict = {seed: None}
    edges: dict[tuple[int, int], int] = {}
    queue = deque([seed])
    while queue:
        v = queue.popleft()
        for w, m in neighbors(v, ell, K, known_root=parent[v]):
            if w not in index:
                index[w] = len(labels)
                labels.append(w)
                parent[w] = v
                queue.append(w)
            edges[(index[v], index[w])] = m
    return IsogenyMultigraph(p, ell, labels, edges)


def spine(full: IsogenyMultigraph, p: Optional[int] = None) -> IsogenyMultigraph:
    """Subgraph induced by the F_p-labelled vertices."""
    if p is not None and p != full.p:
        raise ValueError("graph was built for a different prime")
    return full.induced(i for i in range(len(full)) if full.is_fp_vertex(i))


def build_spine_direct(p: int, ell: int) -> IsogenyMultigraph:
    """The spine from F_p roots of Phi_ell(j, Y) over the supersingular j in F_p."""
    _check_args(p, ell)
    F = make_field_context(p)
    K = F.extension()
    js = [K.lift(j) for j in supersingular_j_list(p)]
    pos = {j: i for i, j in enumerate(js)}
    edges = {}
    for j in js:
        for r, m in roots_with_multiplicity(phi_in_y(ell, F(j.a))):
            target = pos.get(K.lift(r))
            if target is None:
                raise RuntimeError(f"F_p neighbor {r} of supersingular {j} is not supersingular")
            edges[(pos[j], target)] = m
    return IsogenyMultigraph(p, ell, js, edges)


# ---------------------------------------------------------------------------
# G_ell(F_p)


@dataclass
class FpVertex:
    j: PrimeFieldElement
    twist: int
    curve: WeierstrassCurve
    triple: InvariantTriple
    surface: Optional[bool] = None

    def label(self) -> str:
        return f"{self.j.value}" + ("" if self.twist == 0 else "'")


class FpIsogenyGraph:
    """F_p-isomorphism classes of supersingular curves joined by F_p-rational isogenies.

    `kernel_targets[v]` lists the codomain vertex of every rational kernel out
    of v; undirected edges pair each isogeny with its dual.
    """

    def __init__(self, p: int, ell: int, vertices: list[FpVertex], kernel_targets: list[list[int]]):
        self.p = p
        self.ell = ell
        self.vertices = vertices
        self.kernel_targets = kernel_targets
        self.by_j: dict[int, list[int]] = {}
        for i, v in enumerate(vertices):
            self.by_j.setdefault(v.j.value, []).append(i)

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"FpIsogenyGraph(p={self.p}, ell={self.ell}, n={len(self)})"

    def directed_multiplicity(self, a: int, b: int) -> int:
        return self.kernel_targets[a].count(b)

    @cached_property
    def edges(self) -> dict[tuple[int, int], int]:
        """Undirected edge multiset {(a, b): m} with a <= b."""
        out: dict[tuple[int, int], int] = {}
        for a, targets in enumerate(self.kernel_targets):
            for b, m in Counter(targets).items():
                if a <= b:
                    out[(a, b)] = m
        return out

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj = [set() for _ in self.vertices]
        for a, targets in enumerate(self.kernel_targets):
            for b in targets:
                if a != b:
                    adj[a].add(b)
                    adj[b].add(a)
        return [sorted(s) for s in adj]

    def components(self) -> list[list[int]]:
        return _components(len(self), self.adjacency)

    def partner(self, i: int) -> Optional[int]:
        """The other F_p-class with the same j, if any."""
        for k in self.by_j[self.vertices[i].j.value]:
            if k != i:
                return k
        return None

    def loops(self) -> list[int]:
        return [a for a, ts in enumerate(self.kernel_targets) if a in ts]

    def has_directed_multi_edges(self) -> bool:
        """Two kernels out of one vertex landing on the same other vertex."""
        return any(m > 1 for a, ts in enumerate(self.kernel_targets) for b, m in Counter(ts).items() if b != a)

    def j_labels(self) -> list[int]:
        return sorted(self.by_j)

    def to_text(self) -> str:
        F = make_field_context(self.p)
        lines = [f"# F_p isogeny graph p={self.p} ell={self.ell} nonresidue={F.nonresidue}"]
        for i, v in enumerate(self.vertices):
            tag = "" if v.surface is None else (" surface" if v.surface else " floor")
            lines.append(f"v {i} {v.j.value} {v.triple.c4.value} {v.triple.c6.value}{tag}")
        for (a, b), m in sorted(self.edges.items()):
            lines.append(f"e {a} {b} {m}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        lines = ["graph G {", f'  label="F_p graph p={self.p} ell={self.ell}";']
        for i, v in enumerate(self.vertices):
            tag = "" if v.surface is None else ("\\nsurface" if v.surface else "\\nfloor")
            lines.append(f'  {i} [label="{v.triple.label()}{tag}"];')
        for (a, b), m in sorted(self.edges.items()):
            lines.append(f'  {a} -- {b} [label="{m}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _has_full_two_torsion(E: WeierstrassCurve) -> bool:
    return sum(m for _, m in roots_with_multiplicity(E.rhs())) == 3


def build_fp_graph(p: int, ell: int) -> FpIsogenyGraph:
    """Both twist classes of every supersingular j in F_p, joined by rational ell-isogenies.

    For p = 3 mod 4 a vertex is tagged as surface when its curve has full
    rational 2-torsion, and floor otherwise.
    """
    _check_args(p, ell)
    vertices: list[FpVertex] = []
    for j in supersingular_j_list(p):
        E, Et = twists_from_j(j)
        vertices.append(FpVertex(j, 0, E, invariants(E)))
        if not fp_isomorphic(E, Et):
            vertices.append(FpVertex(j, 1, Et, invariants(Et)))
    if p % 4 == 3:
        for v in vertices:
            v.surface = _has_full_two_torsion(v.curve)
    by_j: dict[int, list[int]] = {}
    for i, v in enumerate(vertices):
        by_j.setdefault(v.j.value, []).append(i)
    targets: list[list[int]] = []
    for v in vertices:
        out = []
        for K in rational_ell_kernels(v.curve, ell):
            E2 = velu_isogeny(v.curve, K)
            j2 = invariants(E2).j.value
            match = [i for i in by_j.get(j2, []) if fp_isomorphic(E2, vertices[i].curve)]
            if len(match) != 1:
                raise RuntimeError(f"codomain of {v.curve} along {K.kernel_poly} matched {len(match)} classes")
            out.append(match[0])
        targets.append(sorted(out))
    return FpIsogenyGraph(p, ell, vertices, targets)


# ---------------------------------------------------------------------------
# Gamma / Theta analysis


@dataclass(frozen=True)
class NewEdge:
    j1: int
    j2: int
    multiplicity: int
    attaching: bool


@dataclass
class SpineAnalysis:
    p: int
    ell: int
    components: list[list[int]]
    stacked_pairs: list[tuple[int, int]]
    folded: list[int]
    fold_js: list[int]
    vertex_attachments: list[tuple[int, tuple[int, int]]]
    new_edges: list[NewEdge]
    gamma_image: IsogenyMultigraph
    spine_graph: IsogenyMultigraph
    unclassified: list[int] = field(default_factory=list)

    @property
    def fold_count(self) -> int:
        return len(self.folded)

    @property
    def stack_count(self) -> int:
        return len(self.stacked_pairs)

    @property
    def attaching_edges(self) -> list[NewEdge]:
        return [e for e in self.new_edges if e.attaching]

    def new_loop_js(self) -> list[int]:
        """j's carrying a loop in the spine but not in the Gamma-image."""
        # the image shares the spine's vertex order
        sp = self.spine_graph
        return [sp.j_value(i) for i in sp.loops() if self.gamma_image.multiplicity(i, i) == 0]


def omega_analysis(fp: FpIsogenyGraph, sp: IsogenyMultigraph, ell: Optional[int] = None) -> SpineAnalysis:
    """Classify stacking, folding and attachments, and list the edges Theta adds.

    The Gamma-image carries directed multiplicities: from j to j' it is the
    largest number of rational kernels from a single class of j landing on
    classes of j'.  An undirected pair counts min over both directions, in
    the image and in the spine alike; a pair j != j' whose spine count
    exceeds its image count is a new edge.
    """
    ell = fp.ell if ell is None else ell
    if ell != fp.ell or ell != sp.ell or fp.p != sp.p:
        raise ValueError("graphs were built for different (p, ell)")
    sp_js = {sp.j_value(i): i for i in range(len(sp))}
    if sorted(sp_js) != fp.j_labels():
        raise ValueError("F_p graph and spine have different j-invariants")

    comps = fp.components()
    comp_of = {}
    for c, members in enumerate(comps):
        for v in members:
            comp_of[v] = c

    def signature(c: int):
        js = Counter(fp.vertices[v].j.value for v in comps[c])
        es = Counter()
        for v in comps[c]:
            for w in fp.kernel_targets[v]:
                es[(fp.vertices[v].j.value, fp.vertices[w].j.value)] += 1
        return tuple(sorted(js.items())), tuple(sorted(es.items()))

    folded = []
    fold_js = set()
    for c, members in enumerate(comps):
        jc = Counter(fp.vertices[v].j.value for v in members)
        doubled = [j for j, k in jc.items() if k > 1]
        if doubled:
            folded.append(c)
            fold_js.update(doubled)

    stacked = []
    paired = set(folded)
    for c, members in enumerate(comps):
        if c in paired:
            continue
        partners = {comp_of[q] for v in members if (q := fp.partner(v)) is not None}
        for d in sorted(partners):
            if d != c and d not in paired and signature(c) == signature(d):
                stacked.append((c, d))
                paired.update((c, d))
                break
    unclassified = [c for c in range(len(comps)) if c not in paired]

    stacked_partner = {}
    for c, d in stacked:
        stacked_partner[c] = d
        stacked_partner[d] = c
    attachments = []
    for j, members in sorted(fp.by_j.items()):
        cs = sorted({comp_of[v] for v in members})
        if len(cs) == 2 and stacked_partner.get(cs[0]) != cs[1]:
            attachments.append((j, (cs[0], cs[1])))

    # Gamma-image with directed multiplicities on j labels
    gdir: dict[tuple[int, int], int] = {}
    for v, targets in enumerate(fp.kernel_targets):
        jv = fp.vertices[v].j.value
        for jw, m in Counter(fp.vertices[w].j.value for w in targets).items():
            key = (sp_js[jv], sp_js[jw])
            gdir[key] = max(gdir.get(key, 0), m)
    image = IsogenyMultigraph(sp.p, ell, list(sp.vertices), gdir)

    image_comp = {}
    for c, members in enumerate(image.components()):
        for v in members:
            image_comp[v] = c

    new_edges = []
    for a, b, m_spine in sp.undirected_edges():
        if a == b:
            continue
        m_image = image.undirected_multiplicity(a, b)
        if m_spine > m_image:
            new_edges.append(
                NewEdge(
                    sp.j_value(a),
                    sp.j_value(b),
                    m_spine - m_image,
                    image_comp[a] != image_comp[b],
                )
            )
    return SpineAnalysis(
        p=fp.p,
        ell=ell,
        components=comps,
        stacked_pairs=stacked,
        folded=folded,
        fold_js=sorted(fold_js),
        vertex_attachments=attachments,
        new_edges=new_edges,
        gamma_image=image,
        spine_graph=sp,
        unclassified=unclassified,
    )
