"""Input-rooted path decomposition.

Each input's state node grows a family of induced paths level by level; when
no path in the current level can be extended, one longest path is kept and
its nodes become unavailable to later roots.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .errors import CapExceededError
from .graph import Edge, Graph, SignedNetwork, build_graph, canonical, subgraph

DEFAULT_MAX_PATHS = 10**6
ORDERS = ("degree", "input")


@dataclass(frozen=True, order=True)
class Path:
    root_input: int
    nodes: tuple[int, ...]

    @property
    def root(self) -> int:
        return self.nodes[0]

    @property
    def terminal(self) -> int:
        return self.nodes[-1]

    @property
    def length(self) -> int:
        return len(self.nodes) - 1

    @property
    def edges(self) -> list[Edge]:
        return [canonical(a, b) for a, b in zip(self.nodes, self.nodes[1:])]

    def extend(self, node: int) -> "Path":
        return Path(self.root_input, self.nodes + (node,))

    def as_graph(self, g: Graph) -> Graph:
        """The path with its root input as a subgraph of ``g``."""
        return subgraph(g, self.nodes, self.edges)

    def render(self, label=str) -> str:
        return " -> ".join([label(self.root_input)] + [label(x) for x in self.nodes])


@dataclass(frozen=True)
class PathSearchState:
    claimed: frozenset[int]
    roots: frozenset[int]


def children_of(g: Graph, path: Path, state: PathSearchState) -> list[int]:
    """Admissible extensions of ``path`` at its terminal node, ascending.

    A neighbour of the terminal qualifies when it is not adjacent to any
    earlier node of the path (keeps the path induced), is not itself a root,
    is not claimed by a finished path, and is not on the path already.
    """
    ancestors = path.nodes[:-1]
    on_path = set(path.nodes)
    out = []
    for c in sorted(g.state_neighbors(path.terminal)):
        if c in on_path or c in state.roots or c in state.claimed:
            continue
        if any(a in g.adjacency[c] for a in ancestors):
            continue
        out.append(c)
    return out


def update_paths(g: Graph, paths: Iterable[Path], state: PathSearchState) -> list[Path]:
    """All one-node extensions of ``paths``, in sorted order."""
    return sorted(p.extend(c) for p in paths for c in children_of(g, p, state))


def root_order(g: Graph, net: SignedNetwork, order: str = "degree") -> list[int]:
    """Input indices in processing order.

    ``"input"`` is ascending input index. ``"degree"`` serves roots with fewer
    state neighbours first (ties by input index), so sparsely connected roots
    are not starved by hub roots processed before them.
    """
    ks = list(range(1, net.m + 1))
    if order == "input":
        return ks
    if order == "degree":
        return sorted(ks, key=lambda k: (g.degree(net.input_assignment[k - 1]), k))
    raise ValueError(f"unknown root order {order!r}; expected one of {ORDERS}")


def grow_from(g: Graph, start: Path, state: PathSearchState, max_paths: int = DEFAULT_MAX_PATHS) -> list[Path]:
    """Grow ``start`` level by level; return the last nonempty level."""
    level = [start]
    while True:
        nxt = update_paths(g, level, state)
        if not nxt:
            return level
        if len(nxt) > max_paths:
            raise CapExceededError(
                f"path search from node {start.root} produced {len(nxt)} paths at length "
                f"{nxt[0].length}, above the cap of {max_paths}"
            )
        level = nxt


def path_search(net: SignedNetwork, order: str = "degree", max_paths: int = DEFAULT_MAX_PATHS,
                graph: Graph | None = None) -> list[Path]:
    """Decompose the network into one induced path per input.

    Returns the paths indexed by input (path ``k - 1`` is rooted at input
    ``k``). Among longest candidates the lexicographically largest node
    sequence is kept, i.e. the last one generated in ascending child order.
    A root with no admissible child yields a length-0 path.
    """
    g = build_graph(net) if graph is None else graph
    roots = frozenset(net.input_assignment)
    claimed: frozenset[int] = frozenset()
    found: dict[int, Path] = {}
    for k in root_order(g, net, order):
        start = Path(net.input_node(k), (net.input_assignment[k - 1],))
        state = PathSearchState(claimed, roots)
        best = max(grow_from(g, start, state, max_paths), key=lambda p: p.nodes)
        found[k] = best
        claimed = claimed | frozenset(best.nodes)
    return [found[k] for k in range(1, net.m + 1)]


def uncovered(net: SignedNetwork, paths: Iterable[Path]) -> tuple[int, ...]:
    covered = {x for p in paths for x in p.nodes}
    return tuple(i for i in range(1, net.n + 1) if i not in covered)
