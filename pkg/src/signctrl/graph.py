"""Signed network model and its graph representation.

Node ids are 1-based: state nodes are ``1..n`` and input node ``k`` (1-based)
is the vertex ``n + k``. Every state node carries a self-loop, so a state
node's neighbourhood contains the node itself besides its adjacent state
nodes and its input node (if any).
"""

from __future__ import annotations

import enum
import os
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property

from .errors import CapExceededError, NetworkError

Edge = tuple[int, int]

DEFAULT_MAX_N = 20
MAX_N_ENV = "SIGNCTRL_MAX_N"


def enumeration_cap() -> int:
    """Subset-enumeration cap, overridable through ``SIGNCTRL_MAX_N``."""
    raw = os.environ.get(MAX_N_ENV)
    if raw is None:
        return DEFAULT_MAX_N
    try:
        cap = int(raw)
    except ValueError:
        raise CapExceededError(f"{MAX_N_ENV}={raw!r} is not an integer") from None
    if cap < 1:
        raise CapExceededError(f"{MAX_N_ENV} must be positive, got {cap}")
    return cap


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    @classmethod
    def of(cls, value: float) -> "Sign":
        return cls.POSITIVE if value > 0 else cls.NEGATIVE if value < 0 else cls.ZERO

    @classmethod
    def parse(cls, token) -> "Sign":
        if isinstance(token, Sign):
            return token
        table = {"+": cls.POSITIVE, "-": cls.NEGATIVE, "0": cls.ZERO,
                 1: cls.POSITIVE, -1: cls.NEGATIVE, 0: cls.ZERO}
        try:
            return table[token]
        except (KeyError, TypeError):
            raise NetworkError(f"invalid sign {token!r}; expected '+', '-' or '0'") from None

    @property
    def symbol(self) -> str:
        return {1: "+", -1: "-", 0: "0"}[int(self)]


def canonical(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class SignedNetwork:
    """Sign pattern of ``[L, B]``: signed undirected state edges plus inputs.

    ``input_assignment[k - 1]`` is the state node driven by input ``k``.
    Zero signs are accepted and mean "no edge".
    """

    n: int
    state_edge_signs: Mapping[Edge, Sign]
    input_assignment: tuple[int, ...]
    diagonal_signs: tuple[Sign, ...] | None = None
    nominal_weights: Mapping[Edge, float] | None = None
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise NetworkError(f"state-node count must be a positive integer, got {self.n!r}")
        signs: dict[Edge, Sign] = {}
        for (i, j), s in self.state_edge_signs.items():
            self._check_state(i, "edge endpoint")
            self._check_state(j, "edge endpoint")
            if i == j:
                raise NetworkError(f"edge ({i},{j}) is a self pair; diagonal signs are declared separately")
            key = canonical(i, j)
            if key in signs:
                raise NetworkError(f"duplicate edge {key}")
            signs[key] = Sign.parse(s)
        object.__setattr__(self, "state_edge_signs", dict(sorted(signs.items())))

        inputs = tuple(self.input_assignment)
        for k, s in enumerate(inputs, start=1):
            self._check_state(s, f"input {k} target")
        if len(set(inputs)) != len(inputs):
            raise NetworkError(f"input assignment {inputs} is not injective")
        object.__setattr__(self, "input_assignment", inputs)

        if self.diagonal_signs is not None:
            diag = tuple(Sign.parse(s) for s in self.diagonal_signs)
            if len(diag) != self.n:
                raise NetworkError(f"expected {self.n} diagonal signs, got {len(diag)}")
            if Sign.ZERO in diag:
                raise NetworkError("diagonal signs must be nonzero")
            object.__setattr__(self, "diagonal_signs", diag)

        if self.nominal_weights is not None:
            weights: dict[Edge, float] = {}
            for (i, j), w in self.nominal_weights.items():
                key = canonical(i, j)
                if Sign.of(w) != signs.get(key, Sign.ZERO):
                    raise NetworkError(f"nominal weight {w} on {key} disagrees with its sign")
                weights[key] = float(w)
            missing = [e for e, s in signs.items() if s and e not in weights]
            if missing:
                raise NetworkError(f"nominal weights missing for edges {missing}")
            object.__setattr__(self, "nominal_weights", dict(sorted(weights.items())))

        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.n + self.m:
                raise NetworkError(f"expected {self.n + self.m} labels, got {len(labels)}")
            if len(set(labels)) != len(labels):
                raise NetworkError("labels must be unique")
            object.__setattr__(self, "labels", labels)

    def _check_state(self, i, what):
        if not isinstance(i, int) or not 1 <= i <= self.n:
            raise NetworkError(f"{what} {i!r} is not a state node in 1..{self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, inputs: Iterable[int], **kw) -> "SignedNetwork":
        """Build from ``(i, j, sign)`` triples; a float sign doubles as a nominal weight."""
        signs = {}
        weights = {}
        for i, j, s in edges:
            if isinstance(s, float):
                signs[(i, j)] = Sign.of(s)
                weights[canonical(i, j)] = s
            else:
                signs[(i, j)] = Sign.parse(s)
        if weights and "nominal_weights" not in kw:
            kw["nominal_weights"] = weights
        return cls(n, signs, tuple(inputs), **kw)

    @property
    def m(self) -> int:
        return len(self.input_assignment)

    @property
    def edges(self) -> list[Edge]:
        """State edges with a nonzero sign, sorted."""
        return [e for e, s in self.state_edge_signs.items() if s != Sign.ZERO]

    def input_node(self, k: int) -> int:
        return self.n + k

    def label(self, node: int) -> str:
        return self.labels[node - 1] if self.labels else str(node)


@dataclass(frozen=True)
class Graph:
    """Directed graph G(T) of a network, or of a subnetwork of it.

    State-state edges are undirected (stored canonically), every state node
    has a self-loop, and each driven state node has one edge to its input
    node. Input nodes have no outgoing edges.
    """

    states: frozenset[int]
    inputs: frozenset[int]
    state_edges: frozenset[Edge]
    input_edges: frozenset[Edge]  # (state, input) pairs
    n: int = field(default=0, compare=False)

    @property
    def vertices(self) -> frozenset[int]:
        return self.states | self.inputs

    @property
    def self_loops(self) -> frozenset[int]:
        return self.states

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {i: {i} for i in self.states}
        for i, j in self.state_edges:
            adj[i].add(j)
            adj[j].add(i)
        for s, u in self.input_edges:
            adj[s].add(u)
        return {i: frozenset(v) for i, v in adj.items()}

    @cached_property
    def masks(self) -> dict[int, int]:
        """Neighbourhood of each state node as a bit set indexed by node id."""
        out = {}
        for i, nb in self.adjacency.items():
            bits = 0
            for j in nb:
                bits |= 1 << j
            out[i] = bits
        return out

    @cached_property
    def input_of(self) -> dict[int, int]:
        return {s: u for s, u in self.input_edges}

    def state_neighbors(self, i: int) -> frozenset[int]:
        """Adjacent state nodes of ``i``, excluding ``i`` itself."""
        return frozenset(j for j in self.adjacency[i] if j in self.states and j != i)

    def degree(self, i: int) -> int:
        return len(self.state_neighbors(i))


def build_graph(net: SignedNetwork) -> Graph:
    states = frozenset(range(1, net.n + 1))
    inputs = frozenset(net.input_node(k) for k in range(1, net.m + 1))
    input_edges = frozenset((s, net.input_node(k)) for k, s in enumerate(net.input_assignment, start=1))
    return Graph(states, inputs, frozenset(net.edges), input_edges, n=net.n)


def subgraph(g: Graph, states: Iterable[int], state_edges: Iterable[Edge] | None = None) -> Graph:
    """Restrict ``g`` to ``states`` and their inputs.

    With ``state_edges`` given, only those edges are kept (they must lie in g
    and inside ``states``); otherwise the induced subgraph is returned.
    """
    keep = frozenset(states)
    if not keep <= g.states:
        raise NetworkError(f"nodes {sorted(keep - g.states)} are not state nodes of the graph")
    if state_edges is None:
        edges = frozenset(e for e in g.state_edges if e[0] in keep and e[1] in keep)
    else:
        edges = frozenset(canonical(*e) for e in state_edges)
        stray = [e for e in edges if e not in g.state_edges or not (e[0] in keep and e[1] in keep)]
        if stray:
            raise NetworkError(f"edges {sorted(stray)} are not edges of the induced subgraph")
    input_edges = frozenset((s, u) for s, u in g.input_edges if s in keep)
    return Graph(keep, frozenset(u for _, u in input_edges), edges, input_edges, n=g.n)


def neighbors(g: Graph, i: int) -> frozenset[int]:
    """N_i: ``i`` itself plus its adjacent state and input nodes."""
    if i in g.inputs:
        raise NetworkError(f"node {i} is an input node; neighbourhoods are defined for state nodes only")
    if i not in g.states:
        raise NetworkError(f"node {i} is not in the graph")
    return g.adjacency[i]


def _check_subset(g: Graph, alpha: Iterable[int]) -> tuple[int, ...]:
    members = tuple(sorted(set(alpha)))
    if not members:
        raise NetworkError("subset must be nonempty")
    stray = [i for i in members if i not in g.states]
    if stray:
        raise NetworkError(f"subset members {stray} are not state nodes")
    return members


def neighborhood_of_set(g: Graph, alpha: Iterable[int]) -> frozenset[int]:
    """N(alpha): union of the member neighbourhoods."""
    members = _check_subset(g, alpha)
    out: set[int] = set()
    for i in members:
        out |= g.adjacency[i]
    return frozenset(out)


def check_accessibility(g: Graph) -> dict[int, bool]:
    """For every state node, whether some input node is reachable from it."""
    seen = set(g.input_of)
    queue = deque(sorted(seen))
    while queue:
        i = queue.popleft()
        for j in g.state_neighbors(i):
            if j not in seen:
                seen.add(j)
                queue.append(j)
    return {i: i in seen for i in sorted(g.states)}


def mask_of(nodes: Iterable[int]) -> int:
    bits = 0
    for i in nodes:
        bits |= 1 << i
    return bits


def nodes_of(bits: int) -> tuple[int, ...]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return tuple(out)


def check_cap(size: int, what: str, cap: int | None = None, hint: str = "") -> int:
    cap = enumeration_cap() if cap is None else cap
    if size > cap:
        raise CapExceededError(
            f"{what} has {size} elements, above the enumeration cap of {cap}"
            f"{'; ' + hint if hint else ''} (the cap is set by {MAX_N_ENV})"
        )
    return cap
