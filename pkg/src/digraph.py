"""
Digraph Module
Combinatorial digraph model: degree queries, structural predicates and deletions
"""
from dataclasses import dataclass, field
from itertools import permutations, product
from numbers import Integral

import networkx as nx

from src.errors import InputError


@dataclass(frozen=True)
class VertexDegrees:
    """Out- and in-degree of every vertex (d+ and d-)"""
    out_degree: tuple
    in_degree: tuple

    def total(self, u):
        return self.out_degree[u] + self.in_degree[u]


@dataclass(frozen=True)
class Digraph:
    """
    Simple digraph on vertices 0..n-1
    Loops and parallel arcs are rejected; a symmetric pair (u, v), (v, u) is allowed.
    Values are immutable; every operation below returns a new Digraph.
    """
    n: int
    arcs: frozenset = frozenset()
    _out: tuple = field(default=(), init=False, repr=False, compare=False)
    _in: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 0:
            raise InputError(f"vertex count must be a nonnegative integer, got {self.n!r}")
        arc_list = [(int(u), int(v)) for u, v in self.arcs]
        arc_set = frozenset(arc_list)
        if len(arc_set) != len(arc_list):
            raise InputError("duplicate arc")
        out_deg = [0] * self.n
        in_deg = [0] * self.n
        for u, v in arc_set:
            if u == v:
                raise InputError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"arc ({u}, {v}) has an endpoint outside [0, {self.n})")
            out_deg[u] += 1
            in_deg[v] += 1
        object.__setattr__(self, 'arcs', arc_set)
        object.__setattr__(self, '_out', tuple(out_deg))
        object.__setattr__(self, '_in', tuple(in_deg))

    @property
    def m(self):
        """Number of arcs"""
        return len(self.arcs)

    def arcs_sorted(self):
        return sorted(self.arcs)

    def __str__(self):
        return f"Digraph(n={self.n}, arcs={self.arcs_sorted()})"


def _check_vertex(D, u):
    if not isinstance(u, Integral) or not (0 <= u < D.n):
        raise InputError(f"vertex {u!r} out of range for a digraph on {D.n} vertices")


def arcs_sorted(D):
    """Arcs in lexicographic order"""
    return D.arcs_sorted()


def out_degree(D, u):
    """d+(u) = |{w : (u, w) is an arc}|"""
    _check_vertex(D, u)
    return D._out[u]


def in_degree(D, u):
    """d-(u) = |{w : (w, u) is an arc}|"""
    _check_vertex(D, u)
    return D._in[u]


def total_degree(D, u):
    _check_vertex(D, u)
    return D._out[u] + D._in[u]


def degrees(D):
    """All out/in degrees at once"""
    return VertexDegrees(out_degree=D._out, in_degree=D._in)


def out_neighbours(D, u):
    _check_vertex(D, u)
    return sorted(w for x, w in D.arcs if x == u)


def in_neighbours(D, u):
    _check_vertex(D, u)
    return sorted(w for w, x in D.arcs if x == u)


def is_leaf(D, u):
    """Leaf vertex: d+(u) + d-(u) = 1"""
    return total_degree(D, u) == 1


def is_nonleaf(D, u):
    """Nonleaf vertex: d+(u) + d-(u) >= 2 (isolated vertices are neither)"""
    return total_degree(D, u) >= 2


def delete_arc(D, u, v):
    """
    Remove one arc, keeping the vertex set
    Args:
        D: Digraph
        u, v: Tail and head of the arc to remove
    Returns:
        Digraph: D - uv
    """
    if (u, v) not in D.arcs:
        raise InputError(f"arc ({u}, {v}) is not in the digraph")
    return Digraph(D.n, D.arcs - {(u, v)})


def add_arc(D, u, v):
    """Insert an arc (u, v); loops and duplicates are input errors"""
    _check_vertex(D, u)
    _check_vertex(D, v)
    if (u, v) in D.arcs:
        raise InputError(f"arc ({u}, {v}) is already in the digraph")
    return Digraph(D.n, D.arcs | {(u, v)})


def delete_vertex(D, u):
    """
    Remove vertex u with all incident arcs
    Remaining vertices are relabelled to 0..n-2, preserving their relative order.
    """
    _check_vertex(D, u)

    def shift(w):
        return w if w < u else w - 1

    arcs = [(shift(a), shift(b)) for a, b in D.arcs if a != u and b != u]
    return Digraph(D.n - 1, arcs)


def relabel(D, perm):
    """
    Rename vertex i to perm[i]
    Args:
        D: Digraph
        perm: Sequence that is a permutation of range(D.n)
    """
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(D.n)):
        raise InputError(f"{perm} is not a permutation of range({D.n})")
    return Digraph(D.n, [(perm[u], perm[v]) for u, v in D.arcs])


def disjoint_union(D1, D2):
    """D1 followed by D2 with D2's vertices shifted by D1.n"""
    shifted = [(u + D1.n, v + D1.n) for u, v in D2.arcs]
    return Digraph(D1.n + D2.n, list(D1.arcs) + shifted)


def add_isolated_vertices(D, k=1):
    if k < 0:
        raise InputError("cannot add a negative number of vertices")
    return Digraph(D.n + k, D.arcs)


def is_oriented(D):
    """True iff no symmetric pair (u, v), (v, u) is present"""
    return all((v, u) not in D.arcs for u, v in D.arcs)


def underlying_edges(D):
    """Edges of the underlying simple graph; a symmetric pair collapses to one edge"""
    return {frozenset(arc) for arc in D.arcs}


def to_networkx(D):
    """networkx.DiGraph with nodes 0..n-1"""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(D.n))
    graph.add_edges_from(D.arcs)
    return graph


def underlying_graph_components(D):
    """
    Weak components: connected components of the graph obtained by forgetting directions
    Returns:
        list: Sorted vertex lists, ordered by smallest vertex
    """
    graph = nx.Graph()
    graph.add_nodes_from(range(D.n))
    graph.add_edges_from(D.arcs)
    return sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])


def is_weakly_connected(D):
    return D.n > 0 and len(underlying_graph_components(D)) == 1


def _refined_colours(D):
    """
    Isomorphism-invariant vertex colouring
    Starts from (d+, d-) and refines by the multisets of out- and in-neighbour colours
    until the number of colour classes stops growing.
    """
    out_nb = [[] for _ in range(D.n)]
    in_nb = [[] for _ in range(D.n)]
    for u, v in D.arcs:
        out_nb[u].append(v)
        in_nb[v].append(u)

    signatures = [(D._out[u], D._in[u]) for u in range(D.n)]
    ranks = {sig: i for i, sig in enumerate(sorted(set(signatures)))}
    colours = [ranks[sig] for sig in signatures]
    while True:
        signatures = [
            (colours[u],
             tuple(sorted(colours[w] for w in out_nb[u])),
             tuple(sorted(colours[w] for w in in_nb[u])))
            for u in range(D.n)
        ]
        ranks = {sig: i for i, sig in enumerate(sorted(set(signatures)))}
        refined = [ranks[sig] for sig in signatures]
        if len(ranks) == len(set(colours)):
            return refined
        colours = refined


def canonical_form(D):
    """
    Canonical labelling by exhaustive permutation inside refined colour classes
    Returns:
        tuple: (n, sorted arc tuple) - equal for two digraphs iff they are isomorphic
    """
    if D.n == 0:
        return (0, ())
    colours = _refined_colours(D)
    classes = {}
    for u, c in enumerate(colours):
        classes.setdefault(c, []).append(u)
    ordered = [classes[c] for c in sorted(classes)]
    offsets = []
    position = 0
    for members in ordered:
        offsets.append(position)
        position += len(members)

    best = None
    arcs = list(D.arcs)
    for choice in product(*(permutations(members) for members in ordered)):
        label = [0] * D.n
        for offset, members in zip(offsets, choice):
            for i, u in enumerate(members):
                label[u] = offset + i
        candidate = tuple(sorted((label[u], label[v]) for u, v in arcs))
        if best is None or candidate < best:
            best = candidate
    return (D.n, best)


def canonical_digraph(D):
    """The representative of D's isomorphism class produced by canonical_form"""
    n, arcs = canonical_form(D)
    return Digraph(n, arcs)


def is_isomorphic(D1, D2):
    """
    True iff a vertex bijection maps arcs onto arcs
    Degree sequences are compared first; the full check is networkx VF2 matching.
    """
    if D1.n != D2.n or D1.m != D2.m:
        return False
    if sorted(zip(D1._out, D1._in)) != sorted(zip(D2._out, D2._in)):
        return False
    return nx.is_isomorphic(to_networkx(D1), to_networkx(D2))
