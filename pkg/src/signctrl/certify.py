"""Dedicated-node certification of topological controllability.

A nonempty set ``alpha`` of state nodes has a *dedicated node* when some
node ``j`` outside ``alpha`` is adjacent to exactly one member ``i`` of
``alpha``. A graph is certified when every nonempty state subset has one.
Certification is sufficient for controllability over the whole sign-pattern
family, not necessary: a graph that is not certified may still be
controllable, and only a rank-deficient realization refutes it.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, NamedTuple

from .graph import Edge, Graph, _check_subset, check_accessibility, check_cap


class DedicatedWitness(NamedTuple):
    holder: int
    dedicated: int


class Status(str, enum.Enum):
    CERTIFIED = "certified"
    NOT_CERTIFIED = "not_certified"
    NUMERICALLY_REFUTED = "numerically_refuted"

    @property
    def exit_code(self) -> int:
        return {"certified": 0, "not_certified": 1, "numerically_refuted": 2}[self.value]


@dataclass(frozen=True)
class AssumptionReport:
    accessible: dict[int, bool]
    l_matrix: Any = None  # numeric.LMatrixResult when checked
    diagonal_feasible: dict[int, bool] | None = None

    @property
    def inaccessible(self) -> tuple[int, ...]:
        return tuple(i for i, ok in self.accessible.items() if not ok)

    @property
    def all_accessible(self) -> bool:
        return all(self.accessible.values())


@dataclass(frozen=True)
class Verdict:
    """Outcome of a certification route.

    ``failing_subset`` is set by the exhaustive route; the pipeline route
    reports ``discarded_edges`` / ``uncovered_nodes`` instead. A numerically
    refuted verdict carries the rank-deficient ``realization``.
    """

    status: Status
    route: str
    failing_subset: tuple[int, ...] | None = None
    discarded_edges: tuple[Edge, ...] = ()
    uncovered_nodes: tuple[int, ...] = ()
    assumptions: AssumptionReport | None = None
    realization: Any = None
    notes: tuple[str, ...] = field(default=())

    @property
    def certified(self) -> bool:
        return self.status is Status.CERTIFIED

    def describe(self) -> str:
        if self.status is Status.CERTIFIED:
            return "certified topologically controllable by the dedicated-node condition"
        if self.status is Status.NUMERICALLY_REFUTED:
            return "not topologically controllable: a sign-consistent realization is rank deficient"
        return "not certified by the dedicated-node condition (inconclusive, not a proof of uncontrollability)"


def _dedicated_bits(masks: dict[int, int], members: Sequence[int]) -> int:
    """Bit set of nodes outside ``members`` adjacent to exactly one member."""
    once = twice = inside = 0
    for i in members:
        nb = masks[i]
        twice |= once & nb
        once |= nb
        inside |= 1 << i
    return once & ~twice & ~inside


def _witness(g: Graph, members: Sequence[int], bits: int) -> DedicatedWitness | None:
    if not bits:
        return None
    for i in members:
        hit = g.masks[i] & bits
        if hit:
            return DedicatedWitness(i, (hit & -hit).bit_length() - 1)
    raise AssertionError("dedicated node without a holder")


def find_dedicated_node(g: Graph, alpha: Iterable[int]) -> DedicatedWitness | None:
    """Lexicographically smallest (holder, dedicated) pair for ``alpha``, if any."""
    members = _check_subset(g, alpha)
    return _witness(g, members, _dedicated_bits(g.masks, members))


def find_dedicated_node_fast(g: Graph, alpha: Iterable[int]) -> DedicatedWitness | None:
    """Cheap sufficient test: a member whose whole outside neighbourhood is private.

    Looks for ``i`` whose neighbours outside ``alpha`` are nonempty and shared
    with no other member. ``None`` is inconclusive.
    """
    members = _check_subset(g, alpha)
    masks = g.masks
    inside = sum(1 << i for i in members)
    outside = [masks[i] & ~inside for i in members]
    for idx, i in enumerate(members):
        own = outside[idx]
        if not own:
            continue
        rest = 0
        for jdx, other in enumerate(outside):
            if jdx != idx:
                rest |= other
        if not own & rest:
            return DedicatedWitness(i, (own & -own).bit_length() - 1)
    return None


def iter_subsets(nodes: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Nonempty subsets by ascending size, lexicographic within a size."""
    ordered = sorted(nodes)
    for k in range(1, len(ordered) + 1):
        yield from combinations(ordered, k)


def first_blocking_subset(g: Graph | dict[int, int], nodes: Sequence[int],
                          cap: int | None = None,
                          touching: Iterable[int] | None = None) -> tuple[int, ...] | None:
    """First subset of ``nodes`` (enumeration order) without a dedicated node.

    ``g`` may be a graph or a precomputed neighbourhood-mask table. With
    ``touching`` given, only subsets meeting that node set are examined.
    """
    check_cap(len(nodes), "subset enumeration", cap)
    masks = g.masks if isinstance(g, Graph) else g
    need = set(touching) if touching is not None else None
    for alpha in iter_subsets(nodes):
        if need is not None and need.isdisjoint(alpha):
            continue
        if not _dedicated_bits(masks, alpha):
            return alpha
    return None


def certify_bruteforce(g: Graph, max_n: int | None = None) -> Verdict:
    """Check every nonempty state subset for a dedicated node.

    Exponential in the number of state nodes; refuses graphs above the
    enumeration cap.
    """
    check_cap(len(g.states), "state-node set", max_n,
              hint="use the decomposition/merging pipeline for larger networks")
    report = AssumptionReport(accessible=check_accessibility(g))
    blocking = first_blocking_subset(g, sorted(g.states), cap=max_n)
    if blocking is None:
        return Verdict(Status.CERTIFIED, "bruteforce", assumptions=report)
    return Verdict(Status.NOT_CERTIFIED, "bruteforce", failing_subset=blocking, assumptions=report)
