r"""Multigraphs, spanning forests, and integral cycle bases.

Graphs here are finite connected multigraphs with oriented edges (loops
and parallel edges allowed).  Orientation is bookkeeping only: every
quantity built downstream (Kirchhoff polynomials, momentum polynomials,
heights) is orientation independent, and the tests check that.

The designated spanning tree used by :func:`cycle_basis` and by the
momentum lift is the greedy tree in lexicographic edge-id order, so two
runs over the same graph always agree.
"""

import itertools
import warnings


class Multigraph:
    """Oriented multigraph.

    Parameters
    ----------
    vertices : iterable of str
        Vertex ids, unique.
    edges : iterable of (id, tail, head)
        Edge id plus endpoint vertex ids; ``tail == head`` gives a loop.
    """

    __slots__ = ("vertices", "edges", "_edge_by_id")

    def __init__(self, vertices, edges):
        vertices = tuple(str(v) for v in vertices)
        if not vertices:
            raise ValueError("a graph needs at least one vertex")
        if len(set(vertices)) != len(vertices):
            raise ValueError("duplicate vertex ids")
        vset = set(vertices)
        norm = []
        seen = set()
        for e in edges:
            eid, tail, head = e
            eid, tail, head = str(eid), str(tail), str(head)
            if eid in seen:
                raise ValueError(f"duplicate edge id {eid!r}")
            seen.add(eid)
            if tail not in vset or head not in vset:
                raise ValueError(f"edge {eid!r} has unknown endpoint {tail!r} or {head!r}")
            norm.append((eid, tail, head))
        self.vertices = vertices
        self.edges = tuple(norm)
        self._edge_by_id = {eid: (tail, head) for eid, tail, head in self.edges}

    # -- simple accessors -------------------------------------------------

    def edge_ids(self):
        """Edge ids in lexicographic order (the canonical variable order)."""
        return tuple(sorted(self._edge_by_id))

    def endpoints(self, edge_id):
        try:
            return self._edge_by_id[edge_id]
        except KeyError:
            raise ValueError(f"no edge {edge_id!r} in this graph") from None

    def is_loop(self, edge_id):
        t, h = self.endpoints(edge_id)
        return t == h

    def reversed_edge(self, edge_id):
        """Copy of the graph with one edge's orientation flipped."""
        flipped = [
            (eid, head, tail) if eid == edge_id else (eid, tail, head)
            for eid, tail, head in self.edges
        ]
        return Multigraph(self.vertices, flipped)

    # -- connectivity -----------------------------------------------------

    def components(self, edge_subset=None):
        """Vertex sets of connected components, using only ``edge_subset``
        (all edges when None).  Deterministic: sorted by smallest member."""
        uf = _UnionFind(self.vertices)
        for eid, tail, head in self.edges:
            if edge_subset is None or eid in edge_subset:
                uf.union(tail, head)
        groups = {}
        for v in self.vertices:
            groups.setdefault(uf.find(v), set()).add(v)
        return sorted((frozenset(g) for g in groups.values()), key=min)

    def is_connected(self, edge_subset=None):
        return len(self.components(edge_subset)) == 1

    def __repr__(self):
        return f"Multigraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"


class _UnionFind:
    __slots__ = ("parent", "rank")

    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in items}

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


class CycleVector:
    """Integer 1-chain supported on a graph's edges, stored sparsely."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = {e: int(c) for e, c in coeffs.items() if c != 0}

    def coefficient(self, edge_id):
        return self.coeffs.get(edge_id, 0)

    def support(self):
        return frozenset(self.coeffs)

    def boundary(self, graph):
        """Vertex-indexed boundary (head gets +c, tail gets -c per edge)."""
        out = {v: 0 for v in graph.vertices}
        for e, c in self.coeffs.items():
            tail, head = graph.endpoints(e)
            out[head] += c
            out[tail] -= c
        return out

    def is_cycle(self, graph):
        return all(c == 0 for c in self.boundary(graph).values())

    def __eq__(self, other):
        return isinstance(other, CycleVector) and self.coeffs == other.coeffs

    def __repr__(self):
        inner = " ".join(f"{c:+d}*{e}" for e, c in sorted(self.coeffs.items()))
        return f"CycleVector({inner or '0'})"


class CycleBasis:
    """Integral basis of the cycle lattice H_1(G; Z).

    ``cycles[i]`` is the fundamental cycle of the i-th non-tree edge in
    lexicographic order, with coefficient +1 on that edge.
    """

    __slots__ = ("graph", "tree", "cycles", "nontree_edges")

    def __init__(self, graph, tree, cycles, nontree_edges):
        self.graph = graph
        self.tree = tree
        self.cycles = list(cycles)
        self.nontree_edges = tuple(nontree_edges)

    def __len__(self):
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    def matrix(self):
        """Dense coefficient table: rows are cycles, columns are the
        graph's edges in lexicographic id order."""
        edge_order = self.graph.edge_ids()
        return [[c.coefficient(e) for e in edge_order] for c in self.cycles]


def designated_tree(graph):
    """Edge ids of the canonical spanning tree (greedy, lex edge order).

    Raises ValueError if the graph is disconnected.
    """
    uf = _UnionFind(graph.vertices)
    tree = []
    for eid in graph.edge_ids():
        tail, head = graph.endpoints(eid)
        if tail != head and uf.union(tail, head):
            tree.append(eid)
    if len(tree) != len(graph.vertices) - 1:
        raise ValueError("graph is disconnected; no spanning tree exists")
    return frozenset(tree)


def first_betti(graph):
    """Number of independent cycles, |E| - |V| + 1 (connected graphs)."""
    if not graph.is_connected():
        raise ValueError("first Betti number requires a connected graph")
    return len(graph.edges) - len(graph.vertices) + 1


def cycle_basis(graph):
    """Fundamental-cycle basis for the designated spanning tree.

    Each non-tree edge e (in lexicographic id order) contributes one
    cycle: coefficient +1 on e, closed up through the tree.  A loop is
    its own fundamental cycle (the unit vector on itself).

    Raises ValueError on disconnected input.
    """
    tree = designated_tree(graph)
    adj = {v: [] for v in graph.vertices}
    for eid in tree:
        tail, head = graph.endpoints(eid)
        adj[tail].append((head, eid, +1))
        adj[head].append((tail, eid, -1))

    def tree_path(a, b):
        # Signed edges of the unique a -> b tree path (+1 = along orientation).
        if a == b:
            return []
        prev = {a: None}
        stack = [a]
        while stack:
            u = stack.pop()
            if u == b:
                break
            for w, eid, sgn in adj[u]:
                if w not in prev:
                    prev[w] = (u, eid, sgn)
                    stack.append(w)
        path = []
        v = b
        while prev[v] is not None:
            u, eid, sgn = prev[v]
            path.append((eid, sgn))
            v = u
        path.reverse()
        return path

    cycles = []
    nontree = [e for e in graph.edge_ids() if e not in tree]
    for eid in nontree:
        tail, head = graph.endpoints(eid)
        coeffs = {eid: 1}
        for f, sgn in tree_path(head, tail):
            coeffs[f] = coeffs.get(f, 0) + sgn
        cycles.append(CycleVector(coeffs))
    return CycleBasis(graph, tree, cycles, nontree)


def boundary_matrix(graph):
    """Vertex-by-edge incidence matrix with +1 at the head, -1 at the tail.

    Rows follow sorted vertex ids, columns sorted edge ids; loop columns
    are zero.  Entries are plain ints.
    """
    vorder = sorted(graph.vertices)
    vindex = {v: i for i, v in enumerate(vorder)}
    eorder = graph.edge_ids()
    mat = [[0] * len(eorder) for _ in vorder]
    for j, eid in enumerate(eorder):
        tail, head = graph.endpoints(eid)
        if tail == head:
            continue
        mat[vindex[head]][j] += 1
        mat[vindex[tail]][j] -= 1
    return mat


def spanning_trees(graph):
    """All spanning trees, as sorted tuples of edge ids.

    Brute-force over edge subsets of size |V|-1, so intended for the
    small graphs this package works with.  On disconnected input a
    warning is emitted and the list is empty.
    """
    if not graph.is_connected():
        warnings.warn("graph is disconnected; it has no spanning trees", stacklevel=2)
        return []
    nv = len(graph.vertices)
    candidates = [e for e in graph.edge_ids() if not graph.is_loop(e)]
    out = []
    for subset in itertools.combinations(candidates, nv - 1):
        uf = _UnionFind(graph.vertices)
        if all(uf.union(*graph.endpoints(e)) for e in subset):
            out.append(subset)
    return out


def spanning_2forests(graph):
    """All spanning 2-forests, with their vertex bipartitions.

    Returns a list of ``(edges, (part0, part1))`` where ``edges`` is a
    sorted tuple of edge ids, the parts are frozensets of vertex ids
    covering all vertices, and ``part0`` contains the smallest vertex id.
    Forests have |V|-2 edges and exactly two components.
    """
    if not graph.is_connected():
        warnings.warn("graph is disconnected; 2-forest enumeration assumes connected input",
                      stacklevel=2)
        return []
    nv = len(graph.vertices)
    if nv < 2:
        return []
    candidates = [e for e in graph.edge_ids() if not graph.is_loop(e)]
    out = []
    vmin = min(graph.vertices)
    for subset in itertools.combinations(candidates, nv - 2):
        uf = _UnionFind(graph.vertices)
        if not all(uf.union(*graph.endpoints(e)) for e in subset):
            continue
        comps = graph.components(edge_subset=frozenset(subset))
        if len(comps) != 2:
            continue
        part0, part1 = comps
        if vmin not in part0:
            part0, part1 = part1, part0
        out.append((subset, (part0, part1)))
    return out
