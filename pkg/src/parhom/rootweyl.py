"""Root systems and finite Weyl groups as permutations of the root list.

Roots are integer coordinate vectors in the simple-root basis, positives
listed first (graded by height, then lexicographic) with negatives after
in matching order.  A Weyl element is stored as the permutation row it
induces on that list; its canonical hash key is the tuple of images of
the simple roots, which already determines the element.

Enumeration and set products run behind a guard limit (default 10**6
elements, env PARHOM_WEYL_LIMIT) so desk-scale runs stay desk-scale.
"""

from __future__ import annotations

import math
import os
from functools import lru_cache

import numpy as np

from .dynkin import DynkinDiagram, Marking, cartan_matrix, relabel_to_standard

DEFAULT_WEYL_LIMIT = 10 ** 6
LIMIT_ENV = "PARHOM_WEYL_LIMIT"

_EXCEPTIONAL_ORDER = {
    ("E", 6): 51840,
    ("E", 7): 2903040,
    ("E", 8): 696729600,
    ("F", 4): 1152,
    ("G", 2): 12,
}


class GuardLimitError(RuntimeError):
    """Raised when a Weyl enumeration or product would exceed the guard."""

    def __init__(self, estimated: int, limit: int):
        super().__init__(
            f"estimated Weyl element count {estimated} exceeds guard limit "
            f"{limit}; raise --weyl-limit or {LIMIT_ENV}")
        self.estimated = estimated
        self.limit = limit


def resolve_weyl_limit(explicit=None) -> int:
    if explicit is not None:
        return int(explicit)
    env = os.environ.get(LIMIT_ENV)
    return int(env) if env else DEFAULT_WEYL_LIMIT


def classical_weyl_order(family: str, rank: int) -> int:
    if family == "A":
        return math.factorial(rank + 1)
    if family in ("B", "C"):
        return 2 ** rank * math.factorial(rank)
    if family == "D":
        return 2 ** (rank - 1) * math.factorial(rank)
    return _EXCEPTIONAL_ORDER[(family, rank)]


def weyl_order(d: DynkinDiagram) -> int:
    out = 1
    for f in d.factors:
        out *= classical_weyl_order(f.family, f.rank)
    return out


def weyl_order_estimate(d: DynkinDiagram, generators) -> int:
    """Order of the reflection subgroup generated by the given nodes, read
    off the classification of the induced subdiagram."""
    gens = Marking.of(generators).validate_on(d)
    if not gens:
        return 1
    sub, _ = relabel_to_standard(d, gens)
    return weyl_order(sub)


def _reflect(coords, i, cart, n):
    pairing = sum(coords[j] * cart[j][i] for j in range(n))
    out = list(coords)
    out[i] -= pairing
    return tuple(out)


def _positive_root_closure(cart, n):
    simples = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    found = set(simples)
    frontier = list(simples)
    while frontier:
        new = []
        for c in frontier:
            for i in range(n):
                img = _reflect(c, i, cart, n)
                if img not in found and all(x >= 0 for x in img):
                    found.add(img)
                    new.append(img)
        frontier = new
    return sorted(found, key=lambda c: (sum(c), c))


class RootSystem:
    """Positive roots plus simple-reflection action tables for a diagram."""

    def __init__(self, diagram: DynkinDiagram):
        self.diagram = diagram
        n = diagram.n
        cart = cartan_matrix(diagram)
        pos = _positive_root_closure(cart, n)
        self.positive_roots = tuple(pos)
        m = len(pos)
        self.num_positive = m
        roots = pos + [tuple(-x for x in c) for c in pos]
        self.roots = tuple(roots)
        self.root_index = {c: i for i, c in enumerate(roots)}

        size = 2 * m
        dtype = np.int16 if size < 2 ** 15 else np.int32
        perms = np.empty((n, size), dtype=dtype)
        for i in range(n):
            for r, c in enumerate(roots):
                perms[i, r] = self.root_index[_reflect(c, i, cart, n)]
        self.simple_perm = perms
        self.identity_row = np.arange(size, dtype=dtype)
        unit = lambda j: tuple(1 if t == j else 0 for t in range(n))
        self.simple_cols = np.array([self.root_index[unit(j)] for j in range(n)])
        self.pos_support = np.array([[x != 0 for x in c] for c in pos], dtype=bool)
        self._outside_levi: dict[tuple[int, ...], np.ndarray] = {}

    def key_bytes(self, rows: np.ndarray) -> list[bytes]:
        """One hashable key per row: the images of the simple roots."""
        sub = np.ascontiguousarray(rows[:, self.simple_cols])
        step = sub.shape[1] * sub.itemsize
        buf = sub.tobytes()
        return [buf[i * step:(i + 1) * step] for i in range(sub.shape[0])]

    def canonical_order(self, rows: np.ndarray) -> np.ndarray:
        """Indices sorting rows by their key columns, lexicographically."""
        sub = rows[:, self.simple_cols]
        return np.lexsort(sub.T[::-1])

    def outside_levi_indices(self, generators: tuple[int, ...]) -> np.ndarray:
        """Positive-root indices whose support leaves the given node set."""
        key = tuple(sorted(generators))
        cached = self._outside_levi.get(key)
        if cached is None:
            inside = np.zeros(self.diagram.n, dtype=bool)
            for v in key:
                inside[v - 1] = True
            cached = np.nonzero(self.pos_support[:, ~inside].any(axis=1))[0]
            self._outside_levi[key] = cached
        return cached

    def __repr__(self):
        return f"RootSystem({self.diagram.type_string}, |pos|={self.num_positive})"


@lru_cache(maxsize=None)
def generate_roots(d: DynkinDiagram) -> RootSystem:
    return RootSystem(d)


class WeylElement:
    """One Weyl group element; `row` is its permutation of the root list."""

    __slots__ = ("rs", "row", "_length")

    def __init__(self, rs: RootSystem, row):
        self.rs = rs
        self.row = np.asarray(row, dtype=rs.identity_row.dtype)
        self._length = None

    @classmethod
    def identity(cls, rs: RootSystem) -> "WeylElement":
        return cls(rs, rs.identity_row)

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.row[self.rs.simple_cols])

    @property
    def length(self) -> int:
        if self._length is None:
            m = self.rs.num_positive
            self._length = int((self.row[:m] >= m).sum())
        return self._length

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        if self.rs is not other.rs:
            raise ValueError("elements belong to different root systems")
        return WeylElement(self.rs, self.row[other.row])

    def inverse(self) -> "WeylElement":
        inv = np.empty_like(self.row)
        inv[self.row] = self.rs.identity_row
        return WeylElement(self.rs, inv)

    def apply_root(self, index: int) -> int:
        return int(self.row[index])

    def is_identity(self) -> bool:
        return bool((self.row == self.rs.identity_row).all())

    def __eq__(self, other):
        return (isinstance(other, WeylElement) and self.rs is other.rs
                and self.key == other.key)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"WeylElement(len={self.length}, key={self.key})"


def reflection_closure(rs: RootSystem, rows: np.ndarray, gen_nodes,
                       side: str = "left", limit: int | None = None) -> np.ndarray:
    """Close a set of permutation rows under multiplication by the given
    simple reflections (side="left": s*w, side="right": w*s).

    Deterministic: the result is returned in canonical key order.  Raises
    GuardLimitError if the closure grows past `limit`.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    rows = np.asarray(rows)
    if rows.ndim == 1:
        rows = rows[None, :]
    seen: set[bytes] = set()
    keep = []
    for idx, kb in enumerate(rs.key_bytes(rows)):
        if kb not in seen:
            seen.add(kb)
            keep.append(idx)
    rows = rows[keep]
    gens = [rs.simple_perm[g - 1] for g in Marking.of(gen_nodes)]
    blocks = [rows]
    total = len(rows)
    if limit is not None and total > limit:
        raise GuardLimitError(total, limit)
    frontier = rows
    while len(frontier) and gens:
        if side == "left":
            cand = np.concatenate([g[frontier] for g in gens])
        else:
            cand = np.concatenate([frontier[:, g] for g in gens])
        fresh = []
        for idx, kb in enumerate(rs.key_bytes(cand)):
            if kb not in seen:
                seen.add(kb)
                fresh.append(idx)
        if not fresh:
            break
        frontier = cand[fresh]
        total += len(frontier)
        if limit is not None and total > limit:
            raise GuardLimitError(total, limit)
        blocks.append(frontier)
    out = np.concatenate(blocks) if len(blocks) > 1 else blocks[0]
    return out[rs.canonical_order(out)]


class WeylSubset:
    """A finite set of Weyl elements, rows kept in canonical key order;
    remembers its generating node set when it is a parabolic subgroup."""

    def __init__(self, rs: RootSystem, rows: np.ndarray,
                 generators_marking: Marking | None = None):
        self.rs = rs
        self.rows = rows
        self.generators_marking = (
            Marking.of(generators_marking) if generators_marking is not None else None)
        self._keys: frozenset[bytes] | None = None

    def key_set(self) -> frozenset[bytes]:
        if self._keys is None:
            self._keys = frozenset(self.rs.key_bytes(self.rows))
        return self._keys

    def elements(self):
        for row in self.rows:
            yield WeylElement(self.rs, row)

    def __len__(self):
        return len(self.rows)

    def __contains__(self, w: WeylElement):
        return self.rs.key_bytes(w.row[None, :])[0] in self.key_set()

    def __eq__(self, other):
        return (isinstance(other, WeylSubset) and self.rs is other.rs
                and self.key_set() == other.key_set())

    def __repr__(self):
        gen = f", W_I gens={self.generators_marking.render()}" if self.generators_marking else ""
        return f"WeylSubset(|{self.rs.diagram.type_string}| size={len(self)}{gen})"


def enumerate_weyl(rs: RootSystem, generators, weyl_limit=None) -> WeylSubset:
    """The subgroup generated by the simple reflections of the given nodes,
    by breadth-first closure from the identity."""
    gens = Marking.of(generators).validate_on(rs.diagram)
    limit = resolve_weyl_limit(weyl_limit)
    est = weyl_order_estimate(rs.diagram, gens)
    if est > limit:
        raise GuardLimitError(est, limit)
    rows = reflection_closure(rs, rs.identity_row[None, :], gens, "left")
    return WeylSubset(rs, rows, generators_marking=gens)


def longest_element(rs: RootSystem) -> WeylElement:
    """The unique element of length |pos roots|; found by greedily extending
    with any simple reflection that still increases length."""
    m = rs.num_positive
    row = rs.identity_row.copy()
    cols = rs.simple_cols
    while True:
        pos = np.nonzero(row[cols] < m)[0]
        if not len(pos):
            return WeylElement(rs, row)
        row = row[rs.simple_perm[pos[0]]]


def involution_via_w0(rs: RootSystem) -> dict[int, int]:
    """Node permutation i -> j with a_j = -(w0 applied to a_i)."""
    w0 = longest_element(rs)
    m = rs.num_positive
    col_of = {int(c): i for i, c in enumerate(rs.simple_cols)}
    out = {}
    for i, c in enumerate(rs.simple_cols):
        img = int(w0.row[c])
        if img < m:
            raise RuntimeError("longest element does not negate a simple root")
        out[i + 1] = col_of[img - m] + 1
    return out


def min_coset_length(w: WeylElement, generators, rs: RootSystem | None = None) -> int:
    """Length of the minimal-length representative of the coset w * W_I,
    counted as the inversions of w outside the W_I root subsystem."""
    rs = rs or w.rs
    gens = Marking.of(generators).validate_on(rs.diagram)
    outside = rs.outside_levi_indices(tuple(gens))
    if not len(outside):
        return 0
    return int((w.row[outside] >= rs.num_positive).sum())


def product_set(a: WeylSubset, b: WeylSubset, weyl_limit=None) -> WeylSubset:
    """{x*y : x in a, y in b} as a set.

    When either side is a parabolic subgroup the product is computed by
    reflection closure of the other side; otherwise pairwise.
    """
    if a.rs is not b.rs:
        raise ValueError("product of subsets over different root systems")
    rs = a.rs
    limit = resolve_weyl_limit(weyl_limit)
    if b.generators_marking is not None:
        rows = reflection_closure(rs, a.rows, b.generators_marking, "right", limit=limit)
        return WeylSubset(rs, rows)
    if a.generators_marking is not None:
        rows = reflection_closure(rs, b.rows, a.generators_marking, "left", limit=limit)
        return WeylSubset(rs, rows)
    seen: set[bytes] = set()
    blocks = []
    total = 0
    for row in a.rows:
        block = row[b.rows]
        fresh = []
        for i, kb in enumerate(rs.key_bytes(block)):
            if kb not in seen:
                seen.add(kb)
                fresh.append(i)
        if fresh:
            total += len(fresh)
            if total > limit:
                raise GuardLimitError(total, limit)
            blocks.append(block[fresh])
    if not blocks:
        return WeylSubset(rs, a.rows[:0])
    rows = np.concatenate(blocks)
    return WeylSubset(rs, rows[rs.canonical_order(rows)])
