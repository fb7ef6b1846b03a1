"""
Families Module
Directed paths, directed cycles, symmetric digraphs and the exhaustive enumerators
for oriented trees T(n) and unicyclic digraphs U(n).
Enumerators are lazy streams in a fixed order: Pruefer sequences (trees) or edge subsets
of K_n (unicyclic graphs) in lexicographic order, then orientation masks counting up,
where bit i of the mask reverses edge i.
"""
import heapq
from dataclasses import dataclass
from itertools import combinations, product

import networkx as nx
import numpy as np

import config
from src.digraph import Digraph, canonical_form
from src.errors import InputError

DIRECTED_PATH = "directed_path"
DIRECTED_CYCLE = "directed_cycle"
ORIENTED_TREES = "oriented_trees"
UNICYCLIC = "unicyclic"
SYMMETRIC_OF_GRAPH = "symmetric_of_graph"
FAMILIES = (DIRECTED_PATH, DIRECTED_CYCLE, ORIENTED_TREES, UNICYCLIC, SYMMETRIC_OF_GRAPH)


@dataclass(frozen=True)
class FamilySpec:
    """
    A digraph family at one order
    Args:
        family: One of FAMILIES
        n: Order
        dedupe: Keep one representative per isomorphism class
        directed_cycle_only: (unicyclic) keep only digraphs whose cycle is consistently directed
        force: Skip the order guard of the exhaustive enumerators
    """
    family: str
    n: int
    dedupe: bool = False
    directed_cycle_only: bool = False
    force: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        if not isinstance(self.n, int) or self.n < 0:
            raise InputError(f"family order must be a nonnegative integer, got {self.n!r}")

    @property
    def label(self):
        if self.family == UNICYCLIC and self.directed_cycle_only:
            return "unicyclic_directed_cycle"
        return self.family


def directed_path(n):
    """P_n: arcs (i, i+1) for 0 <= i < n-1"""
    if n < 1:
        raise InputError(f"directed path needs at least one vertex, got n={n}")
    return Digraph(n, [(i, i + 1) for i in range(n - 1)])


def directed_cycle(n, allow_two=False):
    """
    C_n: arcs (i, (i+1) mod n)
    Args:
        n: Order, at least 3
        allow_two: Accept n = 2, which gives the symmetric pair 0 <-> 1
    """
    if n < 2 or (n == 2 and not allow_two):
        raise InputError(f"directed cycle needs at least 3 vertices, got n={n}")
    return Digraph(n, [(i, (i + 1) % n) for i in range(n)])


def _check_edges(edges, n):
    seen = set()
    checked = []
    for edge in edges:
        u, v = (int(x) for x in edge)
        if u == v:
            raise InputError(f"loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"edge {{{u}, {v}}} has an endpoint outside [0, {n})")
        key = frozenset((u, v))
        if key in seen:
            raise InputError(f"duplicate edge {{{u}, {v}}}")
        seen.add(key)
        checked.append((min(u, v), max(u, v)))
    return checked


def symmetric_digraph(edges, n):
    """Symmetric digraph of a simple graph: each edge {u, v} becomes arcs (u, v) and (v, u)"""
    edges = _check_edges(edges, n)
    return Digraph(n, [arc for u, v in edges for arc in ((u, v), (v, u))])


def path_edges(n):
    """Undirected path 0 - 1 - ... - n-1"""
    return [(i, i + 1) for i in range(n - 1)]


def labeled_tree_from_pruefer(seq, n):
    """
    Decode a Pruefer sequence
    Args:
        seq: Length n-2 sequence over [0, n)
        n: Number of vertices (>= 1)
    Returns:
        list: n-1 edges (u, v) with u < v, in decoding order
    """
    if not isinstance(n, int) or n < 1:
        raise InputError(f"a tree needs at least one vertex, got n={n!r}")
    seq = list(seq)
    if len(seq) != max(n - 2, 0):
        raise InputError(f"Pruefer sequence for n={n} must have length {max(n - 2, 0)}, got {len(seq)}")
    for x in seq:
        if not isinstance(x, (int, np.integer)) or not (0 <= x < n):
            raise InputError(f"Pruefer entry {x!r} outside [0, {n})")
    if n == 1:
        return []

    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [u for u in range(n) if degree[u] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = sorted(leaves)
    edges.append((u, v))
    return edges


def pruefer_sequence(edges, n):
    """
    Encode a labeled tree
    Returns:
        list: The Pruefer sequence (inverse of labeled_tree_from_pruefer)
    """
    edges = _check_edges(edges, n) if n > 0 else list(edges)
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(edges)
    if n < 1 or not nx.is_tree(graph):
        raise InputError(f"edges {edges} do not form a tree on {n} vertices")

    neighbours = {u: set(graph.neighbors(u)) for u in range(n)}
    leaves = [u for u in range(n) if len(neighbours[u]) == 1]
    heapq.heapify(leaves)
    seq = []
    for _ in range(n - 2):
        leaf = heapq.heappop(leaves)
        parent = neighbours[leaf].pop()
        neighbours[parent].discard(leaf)
        seq.append(parent)
        if len(neighbours[parent]) == 1:
            heapq.heappush(leaves, parent)
    return seq


def labeled_trees(n):
    """Edge lists of all n^(n-2) labeled trees, Pruefer sequences in lexicographic order"""
    for seq in product(range(n), repeat=max(n - 2, 0)):
        yield labeled_tree_from_pruefer(seq, n)


def labeled_unicyclic_graphs(n):
    """Edge lists of all connected simple graphs with n vertices and n edges (exactly one cycle)"""
    all_edges = list(combinations(range(n), 2))
    for subset in combinations(all_edges, n):
        graph = nx.Graph()
        graph.add_nodes_from(range(n))
        graph.add_edges_from(subset)
        if nx.is_connected(graph):
            yield list(subset)


def orientation_arrays(edges):
    """
    Every orientation of an edge list as index arrays
    Args:
        edges: k undirected edges (u, v)
    Returns:
        tuple: (tails, heads, bits), each (2^k, k); bits[i, j] = 1 means edge j is reversed
    """
    edges = np.asarray(edges, dtype=int).reshape(-1, 2)
    k = edges.shape[0]
    masks = np.arange(2 ** k)[:, None]
    bits = (masks >> np.arange(k)[None, :]) & 1
    tails = np.where(bits == 1, edges[:, 1], edges[:, 0])
    heads = np.where(bits == 1, edges[:, 0], edges[:, 1])
    return tails, heads, bits


def consistent_cycle_mask(edges, bits):
    """
    Which orientations turn the unique cycle of a unicyclic graph into a directed cycle
    Args:
        edges: Edge list of a unicyclic graph
        bits: Orientation bits from orientation_arrays
    Returns:
        np.ndarray: boolean, one entry per orientation
    """
    graph = nx.Graph()
    graph.add_edges_from(edges)
    position = {frozenset(edge): j for j, edge in enumerate(edges)}
    forward = []
    for a, b in nx.find_cycle(graph):
        j = position[frozenset((a, b))]
        stored_forward = edges[j][0] == a
        forward.append((bits[:, j] == 0) == stored_forward)
    forward = np.stack(forward, axis=1)
    return forward.all(axis=1) | (~forward).all(axis=1)


def orientations(edges, n):
    """Stream of all 2^|edges| oriented digraphs of an edge list, mask order"""
    tails, heads, _ = orientation_arrays(edges)
    for row in range(tails.shape[0]):
        yield Digraph(n, list(zip(tails[row].tolist(), heads[row].tolist())))


def check_order(n, low, high, force, what):
    if not isinstance(n, int) or n < low:
        raise InputError(f"{what} need n >= {low}, got n={n!r}")
    if n > high and not force:
        raise InputError(f"{what} are enumerated up to n={high}; n={n} needs --force")


def _deduplicated(stream):
    seen = set()
    for D in stream:
        key = canonical_form(D)
        if key not in seen:
            seen.add(key)
            yield D


def enumerate_oriented_trees(n, dedupe=False, force=False):
    """
    T(n): all labeled oriented trees on n vertices
    Yields n^(n-2) * 2^(n-1) digraphs, or one per isomorphism class with dedupe.
    Raises:
        InputError: n outside 1..config.TREE_MAX_ORDER (unless force)
    """
    check_order(n, 1, config.TREE_MAX_ORDER, force, "oriented trees")

    def stream():
        for edges in labeled_trees(n):
            yield from orientations(edges, n)

    return _deduplicated(stream()) if dedupe else stream()


def enumerate_unicyclic(n, dedupe=False, directed_cycle_only=False, force=False):
    """
    U(n): oriented digraphs with n arcs whose underlying graph is connected with one cycle
    The cycle need not be consistently directed unless directed_cycle_only is set.
    Raises:
        InputError: n outside config.UNICYCLIC_MIN_ORDER..config.UNICYCLIC_MAX_ORDER (unless force)
    """
    check_order(n, config.UNICYCLIC_MIN_ORDER, config.UNICYCLIC_MAX_ORDER, force, "unicyclic digraphs")

    def stream():
        for edges in labeled_unicyclic_graphs(n):
            tails, heads, bits = orientation_arrays(edges)
            keep = consistent_cycle_mask(edges, bits) if directed_cycle_only else np.ones(len(tails), bool)
            for row in np.flatnonzero(keep):
                yield Digraph(n, list(zip(tails[row].tolist(), heads[row].tolist())))

    return _deduplicated(stream()) if dedupe else stream()


def family_members(spec):
    """
    Every digraph of a FamilySpec
    symmetric_of_graph yields the symmetric digraph of the undirected path on n vertices.
    """
    if spec.family == DIRECTED_PATH:
        return iter([directed_path(spec.n)])
    if spec.family == DIRECTED_CYCLE:
        return iter([directed_cycle(spec.n)])
    if spec.family == ORIENTED_TREES:
        return enumerate_oriented_trees(spec.n, dedupe=spec.dedupe, force=spec.force)
    if spec.family == UNICYCLIC:
        return enumerate_unicyclic(spec.n, dedupe=spec.dedupe,
                                   directed_cycle_only=spec.directed_cycle_only, force=spec.force)
    if spec.n < 1:
        raise InputError("symmetric digraph of a path needs at least one vertex")
    return iter([symmetric_digraph(path_edges(spec.n), spec.n)])
