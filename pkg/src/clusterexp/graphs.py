"""Labeled simple graphs, bicolored classes and enriched trees.

Graphs live on vertex set {0..n-1} and are stored as an edge bitmask over
the n(n-1)/2 unordered pairs, which makes edge tests O(1) and gives every
enumeration a reproducible lexicographic order.  The first ``white_count``
vertices are "white" (root / fixed) vertices, the rest are "black"
(integrated) vertices.

Exhaustive class filtering is capped at n = 7 (2^21 edge subsets); trees
are generated by Prufer sequences up to n = 12; enriched trees are capped
at n = 8.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

MAX_EXHAUSTIVE_N = 7
MAX_TREE_N = 12
MAX_ENRICHED_N = 8


class EnumerationTooLarge(ValueError):
    """Raised when an enumeration request exceeds the configured caps."""

    def __init__(self, what, requested, cap, count_bound):
        self.count_bound = count_bound
        super().__init__(
            f"enumeration too large: {what} with n={requested} exceeds cap "
            f"{cap} (would require visiting about {count_bound} structures)"
        )


class GraphClass(Enum):
    ALL = "all"
    CONNECTED = "connected"
    BICONNECTED = "biconnected"
    TREE = "tree"
    ROOTED_TREE = "rooted_tree"
    BLACK_TO_WHITE_CONNECTED = "black_to_white_connected"
    ARTICULATION_FREE = "articulation_free"


def pair_list(n: int) -> list[tuple[int, int]]:
    """Unordered vertex pairs of {0..n-1} in lexicographic order."""
    return list(itertools.combinations(range(n), 2))


@dataclass(frozen=True)
class Graph:
    """Labeled simple graph as an edge set with an optional white prefix."""

    n_vertices: int
    edges: frozenset[tuple[int, int]]
    white_count: int = 0

    def __post_init__(self):
        for i, j in self.edges:
            if not (0 <= i < j < self.n_vertices):
                raise ValueError(f"bad edge ({i},{j}) for n={self.n_vertices}")
        if not (0 <= self.white_count <= self.n_vertices):
            raise ValueError("white_count out of range")

    @classmethod
    def from_mask(cls, n: int, mask: int, white_count: int = 0) -> "Graph":
        pairs = pair_list(n)
        edges = frozenset(p for k, p in enumerate(pairs) if mask >> k & 1)
        return cls(n, edges, white_count)

    @property
    def edge_mask(self) -> int:
        pairs = pair_list(self.n_vertices)
        index = {p: k for k, p in enumerate(pairs)}
        m = 0
        for e in self.edges:
            m |= 1 << index[e]
        return m

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def whites(self) -> range:
        return range(self.white_count)

    @property
    def blacks(self) -> range:
        return range(self.white_count, self.n_vertices)

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n_vertices)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def has_edge(self, i: int, j: int) -> bool:
        if i > j:
            i, j = j, i
        return (i, j) in self.edges

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """New graph with vertex i renamed perm[i]."""
        edges = frozenset(tuple(sorted((perm[i], perm[j]))) for i, j in self.edges)
        return Graph(self.n_vertices, edges, self.white_count)

    def dump_line(self) -> str:
        """One-line text form: ``n k <edge list as i-j pairs> whites=<w>``."""
        es = " ".join(f"{i}-{j}" for i, j in sorted(self.edges))
        body = f"{self.n_vertices} {self.n_edges}"
        if es:
            body += " " + es
        return body + f" whites={self.white_count}"


def _components(n: int, adj: list[set[int]], skip: int = -1) -> list[set[int]]:
    seen = [False] * n
    if 0 <= skip < n:
        seen[skip] = True
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        stack, comp = [s], set()
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.add(v)
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        comps.append(comp)
    return comps


def is_connected(g: Graph) -> bool:
    if g.n_vertices == 0:
        return True
    return len(_components(g.n_vertices, g.adjacency())) == 1


def cutpoints(g: Graph) -> set[int]:
    """Vertices whose removal increases the number of components."""
    adj = g.adjacency()
    base = len(_components(g.n_vertices, adj))
    cuts = set()
    for v in range(g.n_vertices):
        adj_v = [a - {v} for a in adj]
        # removing v drops one vertex; count components among the rest
        rest = len(_components(g.n_vertices, adj_v, skip=v))
        if rest > base:
            cuts.add(v)
    return cuts


def is_biconnected(g: Graph) -> bool:
    """Connected with no cutpoint; the single edge on 2 vertices counts."""
    if g.n_vertices < 2:
        return False
    return is_connected(g) and not cutpoints(g)


def blocks(g: Graph) -> list[Graph]:
    """Maximal 2-connected subgraphs (blocks), by the standard DFS stack."""
    adj = g.adjacency()
    n = g.n_vertices
    disc = [-1] * n
    low = [0] * n
    timer = itertools.count()
    edge_stack: list[tuple[int, int]] = []
    out: list[Graph] = []

    def pop_block(i, j):
        blk = []
        while edge_stack:
            e = edge_stack.pop()
            blk.append(e)
            if e == (i, j) or e == (j, i):
                break
        verts = sorted({v for e in blk for v in e})
        edges = frozenset(tuple(sorted(e)) for e in blk)
        out.append(Graph(g.n_vertices, edges, g.white_count))
        return verts

    def dfs(root):
        stack = [(root, -1, iter(sorted(adj[root])))]
        disc[root] = low[root] = next(timer)
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for u in it:
                if u == parent:
                    continue
                if disc[u] == -1:
                    disc[u] = low[u] = next(timer)
                    edge_stack.append((v, u))
                    stack.append((u, v, iter(sorted(adj[u]))))
                    advanced = True
                    break
                elif disc[u] < disc[v]:
                    edge_stack.append((v, u))
                    low[v] = min(low[v], disc[u])
            if not advanced:
                stack.pop()
                if stack:
                    pv = stack[-1][0]
                    low[pv] = min(low[pv], low[v])
                    if low[v] >= disc[pv]:
                        pop_block(pv, v)

    for r in range(n):
        if disc[r] == -1 and adj[r]:
            dfs(r)
    return out


def classify(g: Graph) -> dict:
    """Connectivity, cutpoints and block decomposition of ``g``."""
    return {
        "connected": is_connected(g),
        "cutpoints": cutpoints(g),
        "blocks": blocks(g),
    }


def _check_cap(what: str, n: int, cap: int, count_bound: int):
    if n > cap:
        raise EnumerationTooLarge(what, n, cap, count_bound)


def _is_tree(g: Graph) -> bool:
    return g.n_edges == g.n_vertices - 1 and is_connected(g)


def prufer_trees(n: int) -> Iterator[Graph]:
    """All labeled trees on n vertices via Prufer sequences (n <= 12)."""
    _check_cap("trees", n, MAX_TREE_N, n ** max(n - 2, 0))
    if n == 1:
        yield Graph(1, frozenset())
        return
    if n == 2:
        yield Graph(2, frozenset({(0, 1)}))
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for v in seq:
            degree[v] += 1
        edges = []
        avail = [v for v in range(n) if degree[v] == 1]
        deg = degree[:]
        heapq.heapify(avail)
        for v in seq:
            leaf = heapq.heappop(avail)
            edges.append(tuple(sorted((leaf, v))))
            deg[v] -= 1
            if deg[v] == 1:
                heapq.heappush(avail, v)
        u, w = heapq.heappop(avail), heapq.heappop(avail)
        edges.append(tuple(sorted((u, w))))
        yield Graph(n, frozenset(edges))


def _simple_paths_to_whites(g: Graph, start: int) -> list[tuple[int, ...]]:
    """Simple paths from ``start`` whose only white vertex is the endpoint."""
    adj = g.adjacency()
    white = set(g.whites)
    paths = []

    def extend(path, seen):
        v = path[-1]
        for u in sorted(adj[v]):
            if u in seen:
                continue
            if u in white:
                paths.append(path + (u,))
            else:
                extend(path + (u,), seen | {u})

    extend((start,), {start})
    return paths


def _black_has_two_independent_paths(g: Graph, b: int) -> bool:
    paths = _simple_paths_to_whites(g, b)
    for p1, p2 in itertools.combinations(paths, 2):
        if p1[-1] == p2[-1]:
            continue
        if set(p1[1:]) & set(p2[1:]):
            continue
        return True
    return False


def is_articulation_free(g: Graph) -> bool:
    """Connected, and every black vertex reaches two distinct white
    vertices by two paths that share no vertex besides the black one."""
    if g.white_count < 1:
        return False
    if not is_connected(g):
        return False
    return all(_black_has_two_independent_paths(g, b) for b in g.blacks)


def _black_to_white_connected(g: Graph) -> bool:
    adj = g.adjacency()
    comps = _components(g.n_vertices, adj)
    white = set(g.whites)
    for comp in comps:
        if comp & white:
            continue
        if any(v >= g.white_count for v in comp):
            return False
    return True


def _class_filter(g: Graph, cls: GraphClass) -> bool:
    if cls is GraphClass.ALL:
        return True
    if cls is GraphClass.CONNECTED:
        return is_connected(g)
    if cls is GraphClass.BICONNECTED:
        return is_biconnected(g)
    if cls is GraphClass.TREE or cls is GraphClass.ROOTED_TREE:
        return _is_tree(g)
    if cls is GraphClass.BLACK_TO_WHITE_CONNECTED:
        return _black_to_white_connected(g)
    if cls is GraphClass.ARTICULATION_FREE:
        return is_articulation_free(g)
    raise ValueError(f"unknown class {cls}")


def enumerate_graphs(n: int, cls: GraphClass) -> Iterator[Graph]:
    """Stream every graph of the class on {0..n-1}, lexicographic by edge
    bitmask.  Trees fall back to Prufer generation for 7 < n <= 12."""
    if n < 1:
        raise ValueError("need n >= 1")
    if cls is GraphClass.TREE and n > MAX_EXHAUSTIVE_N:
        yield from prufer_trees(n)
        return
    m = n * (n - 1) // 2
    _check_cap("graphs", n, MAX_EXHAUSTIVE_N, 2 ** m)
    for mask in range(2 ** m):
        g = Graph.from_mask(n, mask)
        if _class_filter(g, cls):
            yield g


def enumerate_bicolored(n_white: int, n_black: int, cls: GraphClass) -> Iterator[Graph]:
    """Stream graphs with ``n_white`` white then ``n_black`` black vertices."""
    if n_white < 1:
        raise ValueError("need at least one white vertex")
    n = n_white + n_black
    m = n * (n - 1) // 2
    _check_cap("bicolored graphs", n, MAX_EXHAUSTIVE_N, 2 ** m)
    for mask in range(2 ** m):
        g = Graph.from_mask(n, mask, white_count=n_white)
        if _class_filter(g, cls):
            yield g


def nodal_vertices(g: Graph) -> set[int]:
    """Vertices v through which every path between some pair of white
    vertices (both != v) is forced to pass."""
    if g.white_count < 2:
        raise ValueError("need at least 2 white vertices")
    adj = g.adjacency()
    comps = _components(g.n_vertices, adj)
    comp_of = {}
    for k, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = k
    nodal = set()
    for v in range(g.n_vertices):
        adj_v = [a - {v} for a in adj]
        sub = _components(g.n_vertices, adj_v, skip=v)
        sub_of = {}
        for k, comp in enumerate(sub):
            for u in comp:
                sub_of[u] = k
        for w1, w2 in itertools.combinations(g.whites, 2):
            if v in (w1, w2):
                continue
            if comp_of[w1] != comp_of[w2]:
                continue
            if sub_of[w1] != sub_of[w2]:
                nodal.add(v)
                break
    return nodal


def set_partitions(items: Sequence[int]) -> Iterator[tuple[frozenset[int], ...]]:
    """All partitions of ``items`` into nonempty blocks; the empty sequence
    has exactly one partition, the empty one."""
    items = list(items)
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        # first joins an existing block, or starts its own
        for k in range(len(part)):
            yield part[:k] + (part[k] | {first},) + part[k + 1:]
        yield part + (frozenset({first}),)


@dataclass(frozen=True)
class EnrichedTree:
    """Rooted tree on {0..n} with the children of every vertex partitioned
    into cliques (sibling groups)."""

    tree: Graph
    child_partitions: tuple[tuple[frozenset[int], ...], ...]

    @property
    def n_children_total(self) -> int:
        return self.tree.n_vertices - 1

    def cliques(self) -> Iterator[frozenset[int]]:
        for part in self.child_partitions:
            yield from part


def _children_lists(tree: Graph, root: int = 0) -> list[list[int]]:
    adj = tree.adjacency()
    children = [[] for _ in range(tree.n_vertices)]
    seen = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for u in sorted(adj[v]):
            if u not in seen:
                seen.add(u)
                children[v].append(u)
                stack.append(u)
    return children


def enumerate_enriched_trees(n: int) -> Iterator[EnrichedTree]:
    """Stream the enriched rooted trees on vertex set {0..n}, i.e. pairs of
    a tree rooted at 0 and a partition of each vertex's children."""
    if n < 0:
        raise ValueError("need n >= 0")
    _check_cap("enriched trees", n, MAX_ENRICHED_N, (n + 1) ** max(n - 1, 0))
    for tree in prufer_trees(n + 1):
        children = _children_lists(tree, root=0)
        per_vertex = [list(set_partitions(ch)) for ch in children]
        for combo in itertools.product(*per_vertex):
            yield EnrichedTree(tree, tuple(combo))
