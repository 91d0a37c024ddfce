"""Graph corpora and the cross-method agreement runner.

Three sources of graphs:

* :func:`exhaustive_small_graphs` — every connected multigraph with at
  most ``max_edges`` edges, up to isomorphism (loops and parallel edges
  included);
* :func:`random_connected_multigraph` — seeded random graphs built from
  a random spanning tree plus extra edges;
* the bundled JSON corpus under ``data/corpus/`` (see
  :func:`bundled_corpus`), whose files may carry ``golden`` strings of
  expected canonical polynomials.

:func:`corpus_run` sweeps a directory of graph bundles, checks the two
first-polynomial routes against each other (and the two second-polynomial
routes when momenta are present), compares against any golden strings,
and returns a deterministic machine-readable report.
"""

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .graphs import Multigraph
from .jsonio import (SchemaError, graph_bundle_from_json, graph_bundle_to_json,
                     load_json)
from .symanzik import (MinkowskiSpace, MomentumAssignment,
                       first_symanzik_det, first_symanzik_trees,
                       second_symanzik_bordered, second_symanzik_forests)


# ---------------------------------------------------------------------------
# Exhaustive enumeration up to isomorphism

def _canonical_key(n_vertices, pairs):
    """Isomorphism key: lexicographic minimum over vertex relabelings of
    the sorted edge multiset."""
    best = None
    for perm in itertools.permutations(range(n_vertices)):
        relabeled = sorted(tuple(sorted((perm[a], perm[b]))) for a, b in pairs)
        key = tuple(relabeled)
        if best is None or key < best:
            best = key
    return n_vertices, best


def _is_connected_pairs(n_vertices, pairs):
    if n_vertices == 1:
        return True
    adj = {i: set() for i in range(n_vertices)}
    for a, b in pairs:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n_vertices


def _pairs_to_graph(n_vertices, pairs):
    vertices = [f"v{i + 1}" for i in range(n_vertices)]
    edges = [(f"e{k + 1}", f"v{a + 1}", f"v{b + 1}")
             for k, (a, b) in enumerate(pairs)]
    return Multigraph(vertices, edges)


def exhaustive_small_graphs(max_edges=4):
    """All connected multigraphs with at most ``max_edges`` edges, one
    representative per isomorphism class, deterministic order."""
    if max_edges < 0:
        raise ValueError("max_edges must be non-negative")
    seen = set()
    out = [_pairs_to_graph(1, [])]  # the edgeless one-vertex graph
    for ne in range(1, max_edges + 1):
        for nv in range(1, ne + 2):
            if ne < nv - 1:
                continue  # too few edges to connect nv vertices
            slots = list(itertools.combinations_with_replacement(range(nv), 2))
            for combo in itertools.combinations_with_replacement(slots, ne):
                touched = {v for pair in combo for v in pair}
                if len(touched) != nv:
                    continue
                if not _is_connected_pairs(nv, combo):
                    continue
                key = _canonical_key(nv, combo)
                if key in seen:
                    continue
                seen.add(key)
                out.append(_pairs_to_graph(nv, list(combo)))
    return out


# ---------------------------------------------------------------------------
# Random graphs and momenta

def random_connected_multigraph(rng, max_edges=7, max_vertices=6):
    """Seeded random connected multigraph: a random spanning tree plus
    uniformly random extra edges (loops allowed), random orientations."""
    ne = rng.randint(1, max_edges)
    nv = rng.randint(1, min(ne + 1, max_vertices))
    vertices = [f"v{i + 1}" for i in range(nv)]
    pairs = []
    for i in range(1, nv):
        pairs.append((rng.randrange(i), i))
    while len(pairs) < ne:
        pairs.append((rng.randrange(nv), rng.randrange(nv)))
    edges = []
    for k, (a, b) in enumerate(pairs):
        if rng.random() < 0.5:
            a, b = b, a
        edges.append((f"e{k + 1}", f"v{a + 1}", f"v{b + 1}"))
    return Multigraph(vertices, edges)


def random_conserved_momenta(rng, graph, space, magnitude=5):
    """Random exact rational momenta on the vertices, summing to zero."""
    vertices = sorted(graph.vertices)
    momenta = {}
    totals = [Fraction(0)] * space.dim
    for v in vertices[:-1]:
        vec = []
        for i in range(space.dim):
            x = Fraction(rng.randint(-magnitude, magnitude),
                         rng.choice((1, 1, 2, 3)))
            totals[i] += x
            vec.append(x)
        momenta[v] = tuple(vec)
    momenta[vertices[-1]] = tuple(-t for t in totals)
    return MomentumAssignment(space, momenta)


def random_positive_lengths(rng, graph, low=0.1, high=4.0):
    """Random positive edge lengths for numeric ratio checks."""
    return {e: rng.uniform(low, high) for e in graph.edge_ids()}


# ---------------------------------------------------------------------------
# Per-bundle agreement checks

def check_bundle(bundle):
    """Cross-method checks for one graph bundle.

    Returns ``(checks, failures)`` where ``checks`` maps check names to
    "pass"/"fail"/"skipped" and ``failures`` lists human-readable
    mismatch details.
    """
    checks = {}
    failures = []
    graph = bundle.graph

    by_det = first_symanzik_det(graph)
    by_trees = first_symanzik_trees(graph)
    if by_det == by_trees:
        checks["first_det_vs_trees"] = "pass"
    else:
        checks["first_det_vs_trees"] = "fail"
        failures.append(f"first polynomial mismatch: det={by_det} trees={by_trees}")

    momenta = bundle.momentum_assignment()
    if momenta is None:
        checks["second_bordered_vs_forests"] = "skipped"
    else:
        by_bordered = second_symanzik_bordered(graph, momenta)
        by_forests = second_symanzik_forests(graph, momenta)
        if by_bordered == by_forests:
            checks["second_bordered_vs_forests"] = "pass"
        else:
            checks["second_bordered_vs_forests"] = "fail"
            failures.append(
                f"second polynomial mismatch: bordered={by_bordered} "
                f"forests={by_forests}")

    golden = bundle.raw.get("golden", {})
    if isinstance(golden, dict) and golden:
        if "first" in golden:
            got = str(by_det)
            if got == golden["first"]:
                checks["golden_first"] = "pass"
            else:
                checks["golden_first"] = "fail"
                failures.append(
                    f"golden first mismatch: got {got!r}, expected "
                    f"{golden['first']!r}")
        if "second" in golden:
            if momenta is None:
                checks["golden_second"] = "fail"
                failures.append("golden second present but the bundle has no momenta")
            else:
                got = str(second_symanzik_bordered(graph, momenta))
                if got == golden["second"]:
                    checks["golden_second"] = "pass"
                else:
                    checks["golden_second"] = "fail"
                    failures.append(
                        f"golden second mismatch: got {got!r}, expected "
                        f"{golden['second']!r}")
    return checks, failures


def _worker_count(threads=None):
    if threads is None:
        env = os.environ.get("TROPICAL_HEIGHTS_THREADS", "").strip()
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise ValueError(
                    f"TROPICAL_HEIGHTS_THREADS must be an integer, got {env!r}"
                ) from None
    if threads is None:
        threads = min(8, os.cpu_count() or 1)
    if threads < 1:
        raise ValueError("thread count must be at least 1")
    return threads


def corpus_run(directory, threads=None):
    """Run the agreement checks on every ``*.json`` bundle in a directory.

    Failures are collected, never fail-fast; the report is deterministic
    (rows sorted by file name, no timing data).  Returns a dict with
    ``graphs`` rows and a ``summary``.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise SchemaError(f"corpus directory not found: {directory}")
    files = sorted(p for p in directory.iterdir()
                   if p.is_file() and p.suffix == ".json")

    def run_one(path):
        row = {"name": path.stem}
        try:
            bundle = graph_bundle_from_json(load_json(path))
            row["vertices"] = len(bundle.graph.vertices)
            row["edges"] = len(bundle.graph.edges)
            checks, failures = check_bundle(bundle)
            row["checks"] = checks
            row["status"] = "fail" if failures else "pass"
            if failures:
                row["detail"] = "; ".join(failures)
        except (SchemaError, ValueError) as exc:
            row["status"] = "error"
            row["detail"] = str(exc)
        return row

    if files:
        with ThreadPoolExecutor(max_workers=_worker_count(threads)) as pool:
            rows = list(pool.map(run_one, files))
    else:
        rows = []
    rows.sort(key=lambda r: r["name"])
    passed = sum(1 for r in rows if r["status"] == "pass")
    report = {
        "directory": str(directory),
        "graphs": rows,
        "summary": {"total": len(rows), "passed": passed,
                    "failed": len(rows) - passed},
    }
    return report


# ---------------------------------------------------------------------------
# Bundled corpus

def _bundle(name, vertices, edges, markings=None, space=None, golden=None):
    graph = Multigraph([v for v, _g in vertices] if isinstance(vertices[0], tuple)
                       else vertices, edges)
    genus = None
    if vertices and isinstance(vertices[0], tuple):
        genus = {v: g for v, g in vertices if g}
    from .curves import Marking
    marks = []
    if markings:
        marks = [Marking(mid, v, tuple(Fraction(x) for x in p))
                 for mid, v, p in markings]
    extra = {"golden": golden} if golden else None
    return name, graph_bundle_to_json(graph, genus=genus, markings=marks,
                                      space=space, extra=extra)


def bundled_corpus():
    """The twelve bundled graph bundles as (name, json-data) pairs.

    Golden strings are frozen from hand-computable cases: trees have
    first polynomial 1, cycles sum their edge variables, block products
    multiply, and the two-vertex banana pairings follow from the
    single separating forest.
    """
    e1 = MinkowskiSpace.euclidean(1)
    e2 = MinkowskiSpace.euclidean(2)
    l4 = MinkowskiSpace.lorentzian(4)
    items = [
        _bundle("single_edge", ["v1", "v2"],
                [("e1", "v1", "v2")],
                golden={"first": "1"}),
        _bundle("loop", ["v1"],
                [("e1", "v1", "v1")],
                golden={"first": "Y_e1"}),
        _bundle("banana2", ["v1", "v2"],
                [("e1", "v1", "v2"), ("e2", "v2", "v1")],
                markings=[("l1", "v1", (3,)), ("l2", "v2", (-3,))], space=e1,
                golden={"first": "Y_e1 + Y_e2", "second": "9*Y_e1*Y_e2"}),
        _bundle("banana3", ["v1", "v2"],
                [("e1", "v1", "v2"), ("e2", "v1", "v2"), ("e3", "v2", "v1")],
                markings=[("l1", "v1", (2,)), ("l2", "v2", (-2,))], space=e1,
                golden={"first": "Y_e1*Y_e2 + Y_e1*Y_e3 + Y_e2*Y_e3",
                        "second": "4*Y_e1*Y_e2*Y_e3"}),
        _bundle("triangle", ["v1", "v2", "v3"],
                [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1")],
                markings=[("l1", "v1", (1, 0)), ("l2", "v2", (0, 1)),
                          ("l3", "v3", (-1, -1))], space=e2,
                golden={"first": "Y_e1 + Y_e2 + Y_e3"}),
        _bundle("square", ["v1", "v2", "v3", "v4"],
                [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v4"),
                 ("e4", "v4", "v1")],
                golden={"first": "Y_e1 + Y_e2 + Y_e3 + Y_e4"}),
        _bundle("k4", ["v1", "v2", "v3", "v4"],
                [("e1", "v1", "v2"), ("e2", "v1", "v3"), ("e3", "v1", "v4"),
                 ("e4", "v2", "v3"), ("e5", "v2", "v4"), ("e6", "v3", "v4")]),
        _bundle("triangle_loop", ["v1", "v2", "v3"],
                [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1"),
                 ("e4", "v1", "v1")],
                golden={"first": "Y_e1*Y_e4 + Y_e2*Y_e4 + Y_e3*Y_e4"}),
        _bundle("dumbbell", ["v1", "v2"],
                [("e1", "v1", "v1"), ("e2", "v1", "v2"), ("e3", "v2", "v2")],
                golden={"first": "Y_e1*Y_e3"}),
        _bundle("k23", ["a1", "a2", "b1", "b2", "b3"],
                [("e1", "a1", "b1"), ("e2", "a1", "b2"), ("e3", "a1", "b3"),
                 ("e4", "a2", "b1"), ("e5", "a2", "b2"), ("e6", "a2", "b3")],
                markings=[("l1", "a1", (1, 1)), ("l2", "a2", (-1, 1)),
                          ("l3", "b2", (0, -2))], space=e2),
        _bundle("house", ["v1", "v2", "v3", "v4", "v5"],
                [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v4"),
                 ("e4", "v4", "v5"), ("e5", "v5", "v1"), ("e6", "v2", "v5")]),
        _bundle("bowtie", [("c", 0), ("a1", 1), ("a2", 0), ("b1", 0), ("b2", 0)],
                [("e1", "c", "a1"), ("e2", "a1", "a2"), ("e3", "a2", "c"),
                 ("e4", "c", "b1"), ("e5", "b1", "b2"), ("e6", "b2", "c")],
                markings=[("l1", "a1", (1, 0, 0, 1)), ("l2", "a2", (-1, 0, 0, -1)),
                          ("l3", "b1", (0, 1, 1, 0)), ("l4", "b2", (0, -1, -1, 0))],
                space=l4,
                golden={"first": "Y_e1*Y_e4 + Y_e1*Y_e5 + Y_e1*Y_e6 + "
                                 "Y_e2*Y_e4 + Y_e2*Y_e5 + Y_e2*Y_e6 + "
                                 "Y_e3*Y_e4 + Y_e3*Y_e5 + Y_e3*Y_e6"}),
    ]
    return items


def corpus_data_dir():
    """Path of the bundled corpus directory inside the package."""
    return Path(resources.files("tropical_heights") / "data" / "corpus")


def write_bundled_corpus(directory=None):
    """Write the bundled corpus JSON files; returns the paths written."""
    from .jsonio import dump_json
    directory = Path(directory) if directory is not None else corpus_data_dir()
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, data in bundled_corpus():
        path = directory / f"{name}.json"
        dump_json(data, path)
        paths.append(path)
    return paths
