"""Finite-type Dynkin diagrams: parsing, Cartan matrices, the diagram
involution, tree paths, and canonical relabeling of induced subdiagrams.

Numbering is Bourbaki within each factor; product diagrams ("A2xG2")
number nodes consecutively across factors.  The per-family edge tables
are in the README.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property


class DiagramError(ValueError):
    """Malformed diagram string, rank out of bounds, or invalid node id."""


# Rank bounds keep the seven families non-overlapping: the low-rank
# coincidences (B1=A1, C2=B2, D2=A1xA1, D3=A3) are spelled only one way.
_RANK_MIN = {"A": 1, "B": 2, "C": 3, "D": 4, "E": 6, "F": 4, "G": 2}
_RANK_MAX = {"E": 8, "F": 4, "G": 2}

_FACTOR_RE = re.compile(r"^([A-Za-z])([0-9]+)$")


@dataclass(frozen=True)
class SimpleFactor:
    family: str
    rank: int

    def __post_init__(self):
        fam = self.family
        if fam not in _RANK_MIN:
            raise DiagramError(f"unknown family {fam!r}")
        lo, hi = _RANK_MIN[fam], _RANK_MAX.get(fam)
        if self.rank < lo or (hi is not None and self.rank > hi):
            bound = f"{lo}..{hi}" if hi is not None else f">= {lo}"
            raise DiagramError(
                f"rank out of bounds for family {fam}: "
                f"got {fam}{self.rank}, allowed rank {bound}"
            )

    def __str__(self):
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class Edge:
    """Bond between two nodes; `short` is the endpoint the arrow points to
    (the shorter root) and is None for single bonds."""

    a: int
    b: int
    mult: int = 1
    short: int | None = None


def _factor_edges(factor: SimpleFactor, off: int) -> list[Edge]:
    """Bourbaki edge list for one factor, nodes off+1 .. off+rank."""
    fam, r = factor.family, factor.rank
    path = [Edge(off + i, off + i + 1) for i in range(1, r)]
    if fam == "A":
        return path
    if fam == "B":
        # alpha_r short
        return path[:-1] + [Edge(off + r - 1, off + r, 2, off + r)]
    if fam == "C":
        # alpha_r long
        return path[:-1] + [Edge(off + r - 1, off + r, 2, off + r - 1)]
    if fam == "D":
        trunk = [Edge(off + i, off + i + 1) for i in range(1, r - 2)]
        return trunk + [Edge(off + r - 2, off + r - 1), Edge(off + r - 2, off + r)]
    if fam == "E":
        chain = [1, 3, 4, 5, 6, 7, 8][: r - 1]
        es = [Edge(off + chain[i], off + chain[i + 1]) for i in range(len(chain) - 1)]
        return es + [Edge(off + 2, off + 4)]
    if fam == "F":
        # alpha_1, alpha_2 long; alpha_3, alpha_4 short
        return [Edge(off + 1, off + 2), Edge(off + 2, off + 3, 2, off + 3),
                Edge(off + 3, off + 4)]
    if fam == "G":
        # alpha_1 short
        return [Edge(off + 1, off + 2, 3, off + 1)]
    raise DiagramError(f"unknown family {fam!r}")


@dataclass(frozen=True)
class DynkinDiagram:
    factors: tuple[SimpleFactor, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise DiagramError("diagram needs at least one factor")

    @cached_property
    def n(self) -> int:
        return sum(f.rank for f in self.factors)

    @cached_property
    def factor_spans(self) -> tuple[tuple[int, int], ...]:
        """Inclusive (first, last) global node ids per factor."""
        spans, off = [], 0
        for f in self.factors:
            spans.append((off + 1, off + f.rank))
            off += f.rank
        return tuple(spans)

    @cached_property
    def node_factor(self) -> dict[int, int]:
        out = {}
        for k, (lo, hi) in enumerate(self.factor_spans):
            for v in range(lo, hi + 1):
                out[v] = k
        return out

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        out = []
        for f, (lo, _) in zip(self.factors, self.factor_spans):
            out.extend(_factor_edges(f, lo - 1))
        return tuple(out)

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for e in self.edges:
            adj[e.a].append(e.b)
            adj[e.b].append(e.a)
        return {v: tuple(sorted(ws)) for v, ws in adj.items()}

    @cached_property
    def type_string(self) -> str:
        return "x".join(str(f) for f in self.factors)

    def check_node(self, v) -> None:
        if not isinstance(v, int) or not 1 <= v <= self.n:
            raise DiagramError(
                f"node {v} out of range ({self.type_string} has nodes 1..{self.n})")

    def __str__(self):
        return self.type_string


@dataclass(frozen=True)
class Marking:
    """Subset of node ids, kept sorted ascending."""

    nodes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(set(self.nodes))))

    @classmethod
    def of(cls, nodes) -> "Marking":
        if isinstance(nodes, Marking):
            return nodes
        return cls(tuple(nodes))

    @classmethod
    def parse(cls, text: str) -> "Marking":
        """Parse "2,4"-style node lists; "" and "-" denote the empty marking.

        >>> Marking.parse("2,4").nodes
        (2, 4)
        """
        text = text.strip()
        if text in ("", "-"):
            return cls(())
        vals = []
        for tok in text.split(","):
            tok = tok.strip()
            if not re.fullmatch(r"[0-9]+", tok):
                raise DiagramError(f"bad marking token {tok!r} (expected integer)")
            vals.append(int(tok))
        if any(vals[i] >= vals[i + 1] for i in range(len(vals) - 1)):
            raise DiagramError(f"marking must list ascending node ids: {text!r}")
        return cls(tuple(vals))

    def validate_on(self, d: DynkinDiagram) -> "Marking":
        for v in self.nodes:
            d.check_node(v)
        return self

    def union(self, other) -> "Marking":
        return Marking(self.nodes + tuple(Marking.of(other).nodes))

    def minus(self, other) -> "Marking":
        drop = set(Marking.of(other).nodes)
        return Marking(tuple(v for v in self.nodes if v not in drop))

    def intersect(self, other) -> "Marking":
        keep = set(Marking.of(other).nodes)
        return Marking(tuple(v for v in self.nodes if v in keep))

    def issubset(self, other) -> bool:
        return set(self.nodes) <= set(Marking.of(other).nodes)

    def render(self) -> str:
        return ",".join(str(v) for v in self.nodes) if self.nodes else "-"

    def as_list(self) -> list[int]:
        return list(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, v):
        return v in self.nodes

    def __bool__(self):
        return bool(self.nodes)


def parse_diagram_spec(text: str) -> DynkinDiagram:
    """Parse a type string like "A3" or "B2xG2" (case-insensitive).

    >>> parse_diagram_spec("a2xg2").type_string
    'A2xG2'
    """
    if not isinstance(text, str) or not text.strip():
        raise DiagramError("empty diagram string")
    factors = []
    for piece in re.split(r"[xX]", text.strip()):
        m = _FACTOR_RE.match(piece)
        if not m:
            raise DiagramError(
                f"syntax error in diagram string at {piece!r} "
                f"(expected FACTOR ('x' FACTOR)*, e.g. 'A3' or 'B2xG2')")
        factors.append(SimpleFactor(m.group(1).upper(), int(m.group(2))))
    return DynkinDiagram(tuple(factors))


def cartan_matrix(d: DynkinDiagram) -> list[list[int]]:
    """Cartan matrix with entry [i][j] = 2(a_i, a_j)/(a_j, a_j);
    block-diagonal across factors."""
    n = d.n
    mat = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for e in d.edges:
        if e.mult == 1:
            mat[e.a - 1][e.b - 1] = mat[e.b - 1][e.a - 1] = -1
        else:
            long = e.a if e.short == e.b else e.b
            mat[long - 1][e.short - 1] = -e.mult
            mat[e.short - 1][long - 1] = -1
    return mat


def diagram_involution_table(d: DynkinDiagram) -> dict[int, int]:
    """The diagram involution: reversal on A factors, fork swap on odd-rank
    D factors, the order-2 symmetry on E6, identity elsewhere."""
    out = {}
    for f, (lo, hi) in zip(d.factors, d.factor_spans):
        for v in range(lo, hi + 1):
            out[v] = v
        if f.family == "A":
            for i in range(f.rank):
                out[lo + i] = hi - i
        elif f.family == "D" and f.rank % 2 == 1:
            out[hi - 1], out[hi] = hi, hi - 1
        elif f.family == "E" and f.rank == 6:
            out[lo], out[lo + 5] = lo + 5, lo
            out[lo + 2], out[lo + 4] = lo + 4, lo + 2
    return out


def tree_path(d: DynkinDiagram, a: int, b: int) -> list[int] | None:
    """Unique simple path from a to b (inclusive), or None if the nodes lie
    in different factors.

    >>> tree_path(parse_diagram_spec("A4"), 1, 4)
    [1, 2, 3, 4]
    """
    d.check_node(a)
    d.check_node(b)
    if d.node_factor[a] != d.node_factor[b]:
        return None
    if a == b:
        return [a]
    parent: dict[int, int | None] = {a: None}
    dq = deque([a])
    while dq:
        v = dq.popleft()
        if v == b:
            break
        for w in d.adjacency[v]:
            if w not in parent:
                parent[w] = v
                dq.append(w)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    return path[::-1]


def induced_components(d: DynkinDiagram, nodes) -> list[list[int]]:
    """Connected components of the induced subgraph, each sorted, ordered by
    smallest member."""
    node_set = set(Marking.of(nodes).validate_on(d))
    seen: set[int] = set()
    comps = []
    for v in sorted(node_set):
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in d.adjacency[u]:
                if w in node_set and w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _walk_chain(adj: dict[int, list[int]], start: int, avoid: int | None = None) -> list[int]:
    out, prev, cur = [start], avoid, start
    while True:
        nxt = [v for v in adj[cur] if v != prev]
        if not nxt:
            return out
        if len(nxt) > 1:
            raise DiagramError("induced subgraph is not of finite type")
        prev, cur = cur, nxt[0]
        out.append(cur)


def _classify_component(d: DynkinDiagram, comp: list[int]):
    """Classify one connected induced subgraph.

    Returns (SimpleFactor, orderings) where each ordering lists the old node
    ids in standard Bourbaki position (index k holds the node relabeled k+1);
    several orderings when the target diagram has symmetries.
    """
    comp_set = set(comp)
    edges = [e for e in d.edges if e.a in comp_set and e.b in comp_set]
    adj: dict[int, list[int]] = {v: [] for v in comp}
    for e in edges:
        adj[e.a].append(e.b)
        adj[e.b].append(e.a)
    k = len(comp)
    if k == 1:
        return SimpleFactor("A", 1), [list(comp)]

    deg = {v: len(adj[v]) for v in comp}
    if max(deg.values()) > 3:
        raise DiagramError("induced subgraph is not of finite type")

    multi = [e for e in edges if e.mult >= 2]
    if multi:
        if len(multi) > 1 or max(deg.values()) > 2:
            raise DiagramError("induced subgraph is not of finite type")
        e = multi[0]
        short = e.short
        long = e.a if short == e.b else e.b
        if e.mult == 3:
            return SimpleFactor("G", 2), [[short, long]]
        long_arm = _walk_chain(adj, long, avoid=short)
        short_arm = _walk_chain(adj, short, avoid=long)
        if len(short_arm) == 1:
            return SimpleFactor("B", k), [long_arm[::-1] + short_arm]
        if len(long_arm) == 1:
            return SimpleFactor("C", k), [short_arm[::-1] + long_arm]
        if len(long_arm) == 2 and len(short_arm) == 2:
            return SimpleFactor("F", 4), [long_arm[::-1] + short_arm]
        raise DiagramError("induced subgraph is not of finite type")

    branch = [v for v in comp if deg[v] == 3]
    if not branch:
        end = min(v for v in comp if deg[v] == 1)
        order = _walk_chain(adj, end)
        return SimpleFactor("A", k), [order, order[::-1]]
    if len(branch) > 1:
        raise DiagramError("induced subgraph is not of finite type")
    b = branch[0]
    arms = sorted((_walk_chain(adj, nb, avoid=b) for nb in adj[b]), key=len)
    lens = tuple(len(a) for a in arms)
    if lens[0] == 1 and lens[1] == 1:
        # D_k: trunk reversed, branch node, then the two fork nodes
        trunks = [i for i, a in enumerate(arms) if len(a) == lens[2]]
        orderings = []
        for t in trunks:
            forks = [arms[i] for i in range(3) if i != t]
            for f1, f2 in (forks, forks[::-1]):
                orderings.append(arms[t][::-1] + [b] + [f1[0], f2[0]])
        return SimpleFactor("D", k), orderings
    if lens == (1, 2, 2):
        a1, p, q = arms
        orderings = [[x[1], a1[0], x[0], b, y[0], y[1]] for x, y in ((p, q), (q, p))]
        return SimpleFactor("E", 6), orderings
    if lens in ((1, 2, 3), (1, 2, 4)):
        a1, a2, a3 = arms
        return SimpleFactor("E", k), [[a2[1], a1[0], a2[0], b] + a3]
    raise DiagramError("induced subgraph is not of finite type")


def _verify_ordering(d: DynkinDiagram, factor: SimpleFactor, ordering: list[int]) -> None:
    new_id = {old: pos + 1 for pos, old in enumerate(ordering)}
    comp_set = set(ordering)
    got = {}
    for e in d.edges:
        if e.a in comp_set and e.b in comp_set:
            a, b = sorted((new_id[e.a], new_id[e.b]))
            got[(a, b)] = (e.mult, new_id[e.short] if e.short else None)
    want = {}
    for e in _factor_edges(factor, 0):
        a, b = sorted((e.a, e.b))
        want[(a, b)] = (e.mult, e.short)
    if got != want:
        raise DiagramError(
            f"internal error: relabeling onto {factor} does not match its edge table")


def relabel_to_standard(d: DynkinDiagram, nodes, marking=()):
    """Canonical finite-type diagram on an induced node set.

    Returns (DynkinDiagram, old->new id map); (None, {}) for the empty set.
    Factors appear in order of smallest old node id.  Among the valid
    Bourbaki labelings of each component, picks the one whose relabeled
    marking is lexicographically smallest (ties: smallest old-id sequence).
    """
    node_list = sorted(set(Marking.of(nodes)))
    if not node_list:
        return None, {}
    mark_set = set(Marking.of(marking))
    factors, mapping, off = [], {}, 0

    def key(ordering):
        marks = tuple(sorted(pos + 1 for pos, v in enumerate(ordering) if v in mark_set))
        return (marks, tuple(ordering))

    for comp in induced_components(d, node_list):
        factor, orderings = _classify_component(d, comp)
        best = min(orderings, key=key)
        _verify_ordering(d, factor, best)
        for pos, old in enumerate(best):
            mapping[old] = off + pos + 1
        factors.append(factor)
        off += factor.rank
    return DynkinDiagram(tuple(factors)), mapping
