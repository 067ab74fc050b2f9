"""Decision procedures on marked diagram pairs: separation and reduction,
cycle-connectivity, minimal chain length via Weyl reachability, boundary
codimension class, and the exception tables.

Subgroup convention used throughout: the Weyl subgroup attached to a
marking is generated by the reflections of the UNMARKED nodes (the Levi
part).  Markings list the nodes removed from the Levi, so conflating the
two conventions silently inverts every result.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from .dynkin import DynkinDiagram, Marking, diagram_involution_table, tree_path
from .geometry import ParabolicPair, dim_flag
from .rootweyl import (GuardLimitError, generate_roots, reflection_closure,
                       resolve_weyl_limit, weyl_order)


class ConsistencyError(RuntimeError):
    """A cross-checked identity failed; indicates an implementation bug or
    a wrong theory encoding, never bad user input."""


class NonUniqueReductionError(ConsistencyError):
    """Brute force found no unique inclusion-minimal separating subset."""


def levi_generators(d: DynkinDiagram, marking) -> Marking:
    """Unmarked nodes: the simple reflections generating the Levi's Weyl
    subgroup for this marking."""
    marked = set(Marking.of(marking).validate_on(d))
    return Marking.of(v for v in range(1, d.n + 1) if v not in marked)


def is_separating(pair: ParabolicPair, chi) -> bool:
    """True iff every same-factor path from a p-marked node to a q-marked
    node passes through chi.  On a forest this is equivalent to the
    connected-subdiagram form of the condition, since a connected subgraph
    of a tree contains the unique path between any two of its nodes."""
    d = pair.diagram
    chi_set = set(Marking.of(chi).validate_on(d))
    for p in pair.psi_p:
        for q in pair.psi_q:
            path = tree_path(d, p, q)
            if path is not None and not any(v in chi_set for v in path):
                return False
    return True


@dataclass(frozen=True)
class ReductionResult:
    reduced_marking: Marking
    is_already_reduced: bool
    forced_witnesses: dict[int, list[int]]


def reduction(pair: ParabolicPair) -> ReductionResult:
    """The smallest subset of psi_q separating psi_p from psi_q: exactly the
    q-nodes that are the first q-marked node on some path from a p-node."""
    d = pair.diagram
    q_set = set(pair.psi_q)
    kept, witnesses = [], {}
    for q in pair.psi_q:
        for p in pair.psi_p:
            path = tree_path(d, p, q)
            if path is None:
                continue
            first_hit = next(v for v in path if v in q_set)
            if first_hit == q:
                kept.append(q)
                witnesses[q] = path
                break
    reduced = Marking.of(kept)
    return ReductionResult(reduced, reduced == pair.psi_q, witnesses)


def brute_force_reduction(pair: ParabolicPair) -> Marking:
    """Independent oracle: enumerate every subset of psi_q, keep the
    separating ones, and return the unique inclusion-minimal one.  The
    minimum is unique iff the intersection of all separating subsets is
    itself separating; anything else is a theory-encoding bug."""
    qs = list(pair.psi_q)
    if len(qs) > 20:
        raise ValueError(f"brute force limited to |psi_q| <= 20, got {len(qs)}")
    d = pair.diagram
    paths = []
    for p in pair.psi_p:
        for q in qs:
            path = tree_path(d, p, q)
            if path is not None:
                paths.append(frozenset(path))

    def separating(subset: frozenset[int]) -> bool:
        return all(path & subset for path in paths)

    meet = set(qs)
    found_any = False
    for size in range(len(qs) + 1):
        for combo in combinations(qs, size):
            sub = frozenset(combo)
            if separating(sub):
                found_any = True
                meet &= sub
    if not found_any or not separating(frozenset(meet)):
        raise NonUniqueReductionError(
            f"no unique minimal separating subset of {pair.psi_q.render()} "
            f"for psi_p={pair.psi_p.render()} on {d.type_string}")
    return Marking.of(meet)


def is_cycle_connected(pair: ParabolicPair) -> bool:
    """Connectivity criterion: no proper parabolic contains both, i.e. the
    two marked sets are disjoint."""
    return not pair.intersection_marking


def connectivity_quotient(pair: ParabolicPair) -> Marking:
    """Marking of the parabolic generated by both: the intersection of the
    marked sets.  Empty means the quotient is a point (connected case)."""
    return pair.intersection_marking


@dataclass
class ChainAnalysis:
    """Reachability of chain images in the Weyl model.

    Level sets S_0 = W_P, S_j = W_P * (W_Q * S_{j-1}), in the Levi
    convention above.  `connected` is None only when the scan was truncated
    by max_k before stabilizing (`complete` False).
    """

    connected: bool | None
    minimal_n: int | None
    reachable_sizes: list[int]
    reachable_dims: list[int]
    quotient_marking: Marking
    complete: bool


def chain_analysis(pair: ParabolicPair, max_k: int = 32,
                   weyl_limit=None) -> ChainAnalysis:
    if max_k < 1:
        raise ValueError("max_k must be positive")
    d = pair.diagram
    order = weyl_order(d)
    limit = resolve_weyl_limit(weyl_limit)
    if order > limit:
        raise GuardLimitError(order, limit)
    rs = generate_roots(d)
    p_gens = levi_generators(d, pair.psi_p)
    q_gens = levi_generators(d, pair.psi_q)
    outside = rs.outside_levi_indices(tuple(p_gens))
    m = rs.num_positive

    def max_cell_dim(rows) -> int:
        if not len(outside):
            return 0
        return int((rows[:, outside] >= m).sum(axis=1).max())

    rows = reflection_closure(rs, rs.identity_row[None, :], p_gens, "left")
    sizes = [len(rows)]
    dims = [max_cell_dim(rows)]
    minimal_n = None
    complete = False
    for j in range(1, max_k + 1):
        grown = reflection_closure(rs, rows, q_gens, "left")
        grown = reflection_closure(rs, grown, p_gens, "left")
        sizes.append(len(grown))
        dims.append(max_cell_dim(grown))
        if len(grown) == order:
            minimal_n = j
            complete = True
            rows = grown
            break
        if len(grown) == len(rows):
            complete = True
            rows = grown
            break
        rows = grown

    connected = (len(rows) == order) if complete else None
    result = ChainAnalysis(
        connected=connected,
        minimal_n=minimal_n,
        reachable_sizes=sizes,
        reachable_dims=dims,
        quotient_marking=pair.intersection_marking,
        complete=complete,
    )
    if complete:
        if connected != is_cycle_connected(pair):
            raise ConsistencyError(
                f"reachability disagrees with the marking criterion on "
                f"{d.type_string} psi_p={pair.psi_p.render()} psi_q={pair.psi_q.render()}")
        saturated_dim = dims[-1] == dim_flag(d, pair.psi_p)
        if saturated_dim != connected:
            raise ConsistencyError(
                f"top-cell dimension check disagrees with saturation on "
                f"{d.type_string} psi_p={pair.psi_p.render()} psi_q={pair.psi_q.render()}")
    return result


class BoundaryClass(Enum):
    AFFINE_CELL = "AffineCell"
    CODIM_AT_LEAST_TWO = "CodimAtLeastTwo"
    CODIM_ONE = "CodimOne"


def boundary_codim_class(d: DynkinDiagram, psi_p) -> BoundaryClass:
    """Classify the complement of the open orbit by how the marking meets
    its involution image: fixed marking gives one affine cell, disjoint
    image gives codimension >= 2, partial overlap codimension one."""
    psi_p = Marking.of(psi_p).validate_on(d)
    iota = diagram_involution_table(d)
    image = Marking.of(iota[v] for v in psi_p)
    if image == psi_p:
        return BoundaryClass.AFFINE_CELL
    if not set(image) & set(psi_p):
        return BoundaryClass.CODIM_AT_LEAST_TWO
    return BoundaryClass.CODIM_ONE


class LargerAutomorphismCase(Enum):
    ODD_SYMPLECTIC_PROJECTIVE = "OddSymplecticProjective"
    SPINOR_ODD_ORTHOGONAL = "SpinorOddOrthogonal"
    G2_QUADRIC = "G2Quadric"


@dataclass(frozen=True)
class ExceptionFlags:
    mok_zhang_exception: bool
    larger_automorphism_case: LargerAutomorphismCase | None


def _local_markings(d: DynkinDiagram, pair_p: Marking, pair_q: Marking):
    """Per factor: (family, rank, local psi_p, local psi_q) with node ids
    shifted to 1..rank."""
    for f, (lo, hi) in zip(d.factors, d.factor_spans):
        local_p = tuple(v - lo + 1 for v in pair_p if lo <= v <= hi)
        local_q = tuple(v - lo + 1 for v in pair_q if lo <= v <= hi)
        yield f.family, f.rank, local_p, local_q


def _mok_zhang_factor(family: str, rank: int, p: tuple[int, ...], q: tuple[int, ...]) -> bool:
    if family == "B":
        # only 2 <= i <= rank; the i = 1 instantiation is surfaced as a
        # note instead of being flagged (index i-1 would leave the table)
        return (len(p) == 1 and 2 <= p[0] <= rank
                and q == tuple(sorted({p[0] - 1, rank})))
    if family == "C":
        return p == (rank,) and q == (rank - 1,)
    if family == "F":
        return p == (1,) and q == (3,)
    if family == "G":
        return p == (2,) and q == (1,)
    return False


def exception_flags(pair: ParabolicPair) -> ExceptionFlags:
    """Table lookups for the two exception lists.

    The tangency-rigidity table is matched on (type, psi_p, psi_q) per
    factor; the larger-automorphism table is matched on the reduction of P
    mod Q (first matching factor wins on product diagrams).
    """
    d = pair.diagram
    mz = any(_mok_zhang_factor(fam, rank, p, q)
             for fam, rank, p, q in _local_markings(d, pair.psi_p, pair.psi_q))

    p_reduced = reduction(pair.swapped()).reduced_marking
    case = None
    for fam, rank, p, _ in _local_markings(d, p_reduced, Marking.of(())):
        if fam == "C" and p == (1,):
            case = LargerAutomorphismCase.ODD_SYMPLECTIC_PROJECTIVE
        elif fam == "B" and p == (rank,):
            case = LargerAutomorphismCase.SPINOR_ODD_ORTHOGONAL
        elif fam == "G" and p == (1,):
            case = LargerAutomorphismCase.G2_QUADRIC
        if case is not None:
            break
    return ExceptionFlags(mok_zhang_exception=mz, larger_automorphism_case=case)


def exception_notes(pair: ParabolicPair) -> list[str]:
    """Degenerate table indices worth surfacing instead of guessing."""
    notes = []
    for fam, rank, p, q in _local_markings(pair.diagram, pair.psi_p, pair.psi_q):
        if fam == "B" and p == (1,) and q == (rank,):
            notes.append(
                f"B{rank} tangency-table entry with i=1 has no node i-1; "
                "pair left unflagged (see README)")
    return notes
