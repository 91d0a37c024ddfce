r"""Kirchhoff and momentum polynomials of a multigraph.

For a connected multigraph G with edge variables Y_e, this module
computes the two graph polynomials that control the tropical limit of
the height pairing:

* the Kirchhoff polynomial ``psi = sum over spanning trees T of
  prod_{e not in T} Y_e``, equal to ``det M`` for the cycle Gram matrix
  ``M = sum_e Y_e c_e c_e^T`` built from any integral cycle basis;
* the momentum polynomial ``phi = sum over spanning 2-forests F of
  q(F) prod_{e not in F} Y_e`` with ``q(F) = -<p(F_1), p(F_2)>`` in the
  chosen inner product, equal to a bordered determinant in M, a lift
  omega of the external momenta, and the edge pairing.

Both polynomials come with two independent algorithms each (forest
enumeration vs. exact determinant), and the ratio ``phi/psi`` has a
third, purely numeric oracle through the weighted graph Laplacian.
All polynomial arithmetic is exact over the rationals.
"""

from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .graphs import cycle_basis, designated_tree, boundary_matrix, spanning_trees, \
    spanning_2forests, first_betti
from .polynomials import MultiPoly, RingMatrix, det_fraction_free, Rational


def _as_fraction_vector(vec, dim):
    vec = tuple(Fraction(x) if not isinstance(x, Fraction) else x for x in vec)
    if len(vec) != dim:
        raise ValueError(f"momentum vector {vec} has length {len(vec)}, expected {dim}")
    return vec


class MinkowskiSpace:
    """Momentum space with a fixed rational symmetric pairing.

    Parameters
    ----------
    matrix : sequence of sequences
        Symmetric D x D Gram matrix of the pairing, rational entries.
    """

    __slots__ = ("dim", "matrix")

    def __init__(self, matrix):
        rows = [tuple(Fraction(x) for x in r) for r in matrix]
        d = len(rows)
        if any(len(r) != d for r in rows):
            raise ValueError("pairing matrix must be square")
        for i in range(d):
            for j in range(d):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("pairing matrix must be symmetric")
        self.dim = d
        self.matrix = tuple(rows)

    @classmethod
    def euclidean(cls, dim):
        return cls([[1 if i == j else 0 for j in range(dim)] for i in range(dim)])

    @classmethod
    def lorentzian(cls, dim):
        """Mostly-minus signature (+, -, ..., -)."""
        return cls([[(1 if i == 0 else -1) if i == j else 0 for j in range(dim)]
                    for i in range(dim)])

    def pair(self, u, v):
        """<u, v> under the pairing; exact when inputs are rational."""
        if len(u) != self.dim or len(v) != self.dim:
            raise ValueError("vector dimension does not match the pairing")
        acc = 0
        for i, row in enumerate(self.matrix):
            ui = u[i]
            if ui == 0:
                continue
            acc += ui * sum(q * v[j] for j, q in enumerate(row) if q != 0)
        return acc

    def zero(self):
        return (Fraction(0),) * self.dim

    def numeric(self):
        return np.array([[float(x) for x in r] for r in self.matrix])

    def __repr__(self):
        return f"MinkowskiSpace(dim={self.dim})"


class MomentumAssignment:
    """External momenta attached to the vertices of a graph.

    Momenta are rational D-vectors; vertices not listed carry zero.
    Conservation (the momenta sum to zero) is required, since only
    conserved assignments admit a lift to the edges.
    """

    __slots__ = ("space", "momenta")

    def __init__(self, space, momenta, require_conserved=True):
        self.space = space
        self.momenta = {
            str(v): _as_fraction_vector(p, space.dim) for v, p in momenta.items()
        }
        if require_conserved and not self.is_conserved():
            raise ValueError(
                f"conservation law violated: momenta must sum to zero, got {self.total()}"
            )

    def vector(self, v):
        return self.momenta.get(v, self.space.zero())

    def total(self):
        out = [Fraction(0)] * self.space.dim
        for p in self.momenta.values():
            for i, x in enumerate(p):
                out[i] += x
        return tuple(out)

    def is_conserved(self):
        return all(x == 0 for x in self.total())

    def partial_sum(self, vertices):
        out = [Fraction(0)] * self.space.dim
        for v in vertices:
            for i, x in enumerate(self.vector(v)):
                out[i] += x
        return tuple(out)

    def __repr__(self):
        return f"MomentumAssignment(D={self.space.dim}, vertices={sorted(self.momenta)})"


class EdgeQuadratic(NamedTuple):
    """Coefficients of one edge in each basis cycle (one int per cycle)."""

    edge_id: str
    coeffs: tuple


def edge_quadratics(basis):
    """Per-edge cycle coefficients c_{e,i} for a given cycle basis.

    One entry per edge of the underlying graph, in lexicographic edge-id
    order; ``coeffs[i]`` is the coefficient of the edge in basis cycle i.
    """
    graph = basis.graph
    return [
        EdgeQuadratic(e, tuple(c.coefficient(e) for c in basis.cycles))
        for e in graph.edge_ids()
    ]


def _poly_vars(graph):
    return graph.edge_ids()

def _edge_variable(graph, eid):
    return MultiPoly.variable(_poly_vars(graph), eid)


def cycle_gram_matrix(graph, basis=None):
    """RingMatrix ``M = sum_e Y_e c_e c_e^T`` over the cycle basis.

    Returns None for trees (h = 0), where the matrix is empty and its
    determinant is 1 by convention.
    """
    if basis is None:
        basis = cycle_basis(graph)
    h = len(basis)
    if h == 0:
        return None
    variables = _poly_vars(graph)
    quads = edge_quadratics(basis)
    rows = [[MultiPoly.zero(variables) for _ in range(h)] for _ in range(h)]
    for q in quads:
        y = MultiPoly.variable(variables, q.edge_id)
        for i in range(h):
            ci = q.coeffs[i]
            if ci == 0:
                continue
            for j in range(i, h):
                cj = q.coeffs[j]
                if cj == 0:
                    continue
                rows[i][j] = rows[i][j] + (ci * cj) * y
    for i in range(h):
        for j in range(i):
            rows[i][j] = rows[j][i]
    return RingMatrix(rows)


def first_symanzik_det(graph, basis=None):
    """Kirchhoff polynomial as det of the cycle Gram matrix (exact)."""
    m = cycle_gram_matrix(graph, basis)
    if m is None:
        return MultiPoly.constant(_poly_vars(graph), 1)
    return det_fraction_free(m)


def first_symanzik_trees(graph):
    """Kirchhoff polynomial by direct spanning-tree enumeration."""
    variables = _poly_vars(graph)
    trees = spanning_trees(graph)
    if not trees:
        raise ValueError("graph has no spanning tree (disconnected input)")
    psi = MultiPoly.zero(variables)
    all_edges = set(variables)
    for t in trees:
        term = MultiPoly.constant(variables, 1)
        for e in sorted(all_edges - set(t)):
            term = term * MultiPoly.variable(variables, e)
        psi = psi + term
    return psi


class MomentumLift:
    """Edge-indexed lift omega of a conserved vertex assignment.

    ``boundary(omega) = p`` in the sign convention where an edge adds
    its vector at the head and subtracts it at the tail.
    """

    __slots__ = ("graph", "space", "edge_vectors")

    def __init__(self, graph, space, edge_vectors):
        self.graph = graph
        self.space = space
        self.edge_vectors = {
            e: _as_fraction_vector(v, space.dim) for e, v in edge_vectors.items()
        }
        for e in graph.edge_ids():
            self.edge_vectors.setdefault(e, space.zero())

    def vector(self, edge_id):
        return self.edge_vectors[edge_id]

    def boundary(self):
        out = {v: [Fraction(0)] * self.space.dim for v in self.graph.vertices}
        for e, vec in self.edge_vectors.items():
            tail, head = self.graph.endpoints(e)
            for i, x in enumerate(vec):
                out[head][i] += x
                out[tail][i] -= x
        return {v: tuple(x) for v, x in out.items()}

    def __repr__(self):
        nz = sorted(e for e, v in self.edge_vectors.items() if any(v))
        return f"MomentumLift(support={nz})"


def momentum_lift(graph, momenta):
    """Tree-supported lift of a conserved vertex assignment (exact).

    Solves ``boundary(omega) = p`` with omega supported on the designated
    spanning tree by leaf elimination; the tree-supported solution is
    unique, so the result is deterministic.
    """
    if not momenta.is_conserved():
        raise ValueError("momenta must sum to zero to admit a lift")
    tree = designated_tree(graph)
    residual = {v: list(momenta.vector(v)) for v in graph.vertices}
    incident = {v: set() for v in graph.vertices}
    for e in tree:
        tail, head = graph.endpoints(e)
        incident[tail].add(e)
        incident[head].add(e)
    omega = {}
    live = set(graph.vertices)
    pending = sorted(v for v in live if len(incident[v]) == 1)
    while pending:
        v = pending.pop()
        if v not in live or len(incident[v]) != 1:
            continue
        (e,) = incident[v]
        tail, head = graph.endpoints(e)
        rv = residual[v]
        if v == head:
            vec = tuple(Fraction(x) for x in rv)
            other = tail
        else:
            vec = tuple(-Fraction(x) for x in rv)
            other = head
        omega[e] = vec
        # Fold this edge's contribution at the surviving endpoint.
        sign = 1 if other == head else -1
        for i, x in enumerate(vec):
            residual[other][i] -= sign * x
        incident[other].discard(e)
        incident[v].clear()
        live.discard(v)
        if other in live and len(incident[other]) == 1:
            pending.append(other)
            pending.sort()
    rest = [v for v in live]
    # Conservation forces the last residual to vanish exactly.
    assert len(rest) == 1 and all(x == 0 for x in residual[rest[0]])
    return MomentumLift(graph, momenta.space, omega)


def edge_pairing_polynomial(graph, lift1, lift2):
    """``Q = sum_e Y_e <omega1_e, omega2_e>`` as an exact polynomial."""
    variables = _poly_vars(graph)
    space = lift1.space
    out = MultiPoly.zero(variables)
    for e in graph.edge_ids():
        val = space.pair(lift1.vector(e), lift2.vector(e))
        if val != 0:
            out = out + val * MultiPoly.variable(variables, e)
    return out


def _border_vectors(graph, basis, lift):
    """W_i(omega), one V-valued linear polynomial per basis cycle.

    Returned as a list over cycles of tuples over coordinates of
    MultiPoly: ``W[i][mu] = sum_e c_{e,i} omega_{e,mu} Y_e``.
    """
    variables = _poly_vars(graph)
    quads = edge_quadratics(basis)
    h = len(basis)
    dim = lift.space.dim
    out = [[MultiPoly.zero(variables) for _ in range(dim)] for _ in range(h)]
    for q in quads:
        vec = lift.vector(q.edge_id)
        if not any(vec):
            continue
        y = MultiPoly.variable(variables, q.edge_id)
        for i, ci in enumerate(q.coeffs):
            if ci == 0:
                continue
            for mu in range(dim):
                if vec[mu] != 0:
                    out[i][mu] = out[i][mu] + (ci * vec[mu]) * y
    return out


def _adjugate(matrix):
    """Adjugate of a RingMatrix via cofactor determinants (exact)."""
    n = matrix.n
    variables = matrix.variables
    if n == 1:
        return [[MultiPoly.constant(variables, 1)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [matrix.rows[r][c] for c in range(n) if c != j]
                for r in range(n) if r != i
            ]
            d = det_fraction_free(RingMatrix(minor))
            adj[j][i] = d if (i + j) % 2 == 0 else -d
    return adj


def second_symanzik_bordered(graph, momenta1, momenta2=None, basis=None, lift1=None,
                             lift2=None):
    """Momentum polynomial via the bordered determinant (exact).

    The border of the cycle Gram matrix M by the V-valued row/column
    W(omega) and the corner ``Q`` expands, once the V-valued products
    are paired through the inner product, into

        phi = Q(omega1, omega2) * det M - sum_{ij} adj(M)_{ij} <W_i(omega1), W_j(omega2)>.

    With ``momenta2`` omitted this is the usual quadratic momentum
    polynomial; with both given it is the symmetric bilinear version.
    """
    if basis is None:
        basis = cycle_basis(graph)
    if momenta2 is None:
        momenta2 = momenta1
    if momenta1.space is not momenta2.space and momenta1.space.matrix != momenta2.space.matrix:
        raise ValueError("both assignments must live in the same momentum space")
    if lift1 is None:
        lift1 = momentum_lift(graph, momenta1)
    if lift2 is None:
        lift2 = momentum_lift(graph, momenta2) if momenta2 is not momenta1 else lift1
    space = momenta1.space
    variables = _poly_vars(graph)
    m = cycle_gram_matrix(graph, basis)
    q12 = edge_pairing_polynomial(graph, lift1, lift2)
    if m is None:
        return q12
    psi = det_fraction_free(m)
    w1 = _border_vectors(graph, basis, lift1)
    w2 = _border_vectors(graph, basis, lift2)
    adj = _adjugate(m)
    h = m.n
    correction = MultiPoly.zero(variables)
    qmat = space.matrix
    for i in range(h):
        for j in range(h):
            if adj[i][j].is_zero():
                continue
            paired = MultiPoly.zero(variables)
            for mu in range(space.dim):
                for nu in range(space.dim):
                    coeff = qmat[mu][nu]
                    if coeff == 0:
                        continue
                    prod = w1[i][mu] * w2[j][nu]
                    if not prod.is_zero():
                        paired = paired + coeff * prod
            if not paired.is_zero():
                correction = correction + adj[i][j] * paired
    return q12 * psi - correction


def second_symanzik_forests(graph, momenta1, momenta2=None):
    """Momentum polynomial by spanning-2-forest enumeration (exact).

    Each forest F with parts (F_1, F_2) contributes
    ``<p(F_1), p'(F_1)>  * prod_{e not in F} Y_e``; conservation makes the
    part choice immaterial, and the diagonal case reduces to
    ``-<p(F_1), p(F_2)>``.
    """
    if momenta2 is None:
        momenta2 = momenta1
    variables = _poly_vars(graph)
    space = momenta1.space
    phi = MultiPoly.zero(variables)
    all_edges = set(variables)
    for edges, (part1, _part2) in spanning_2forests(graph):
        p1 = momenta1.partial_sum(part1)
        p2 = momenta2.partial_sum(part1)
        qf = space.pair(p1, p2)
        if qf == 0:
            continue
        term = MultiPoly.constant(variables, qf)
        for e in sorted(all_edges - set(edges)):
            term = term * MultiPoly.variable(variables, e)
        phi = phi + term
    return phi


# ---------------------------------------------------------------------------
# Numeric evaluation


def _edge_values(graph, y):
    order = graph.edge_ids()
    missing = [e for e in order if e not in y]
    if missing:
        raise ValueError(f"missing edge weights for {missing}")
    vals = np.array([float(y[e]) for e in order])
    if np.any(vals <= 0):
        raise ValueError("edge weights must be positive")
    return order, vals


def _lift_array(lift, order):
    return np.array([[float(x) for x in lift.vector(e)] for e in order])


def symanzik_ratio_eval(graph, y, momenta1, momenta2=None, method="schur", basis=None):
    """Numeric value of ``phi/psi`` at positive edge weights ``y``.

    Parameters
    ----------
    y : dict
        Edge id to positive weight.
    method : str
        "schur" solves the cycle Gram system directly (default);
        "polynomial" evaluates the exact polynomials and divides.
    """
    if momenta2 is None:
        momenta2 = momenta1
    if method == "polynomial":
        psi = first_symanzik_det(graph, basis)
        phi = second_symanzik_bordered(graph, momenta1, momenta2, basis=basis)
        assign = {e: float(v) for e, v in y.items()}
        return float(phi.evaluate(assign)) / float(psi.evaluate(assign))
    if method != "schur":
        raise ValueError(f"unknown method {method!r} (expected 'schur' or 'polynomial')")
    if basis is None:
        basis = cycle_basis(graph)
    order, vals = _edge_values(graph, y)
    lift1 = momentum_lift(graph, momenta1)
    lift2 = momentum_lift(graph, momenta2) if momenta2 is not momenta1 else lift1
    space = momenta1.space
    qnum = space.numeric()
    om1 = _lift_array(lift1, order)
    om2 = _lift_array(lift2, order)
    qterm = float(np.einsum("e,em,mn,en->", vals, om1, qnum, om2))
    h = len(basis)
    if h == 0:
        return qterm
    cmat = np.array([[c.coefficient(e) for e in order] for c in basis.cycles], dtype=float)
    m = (cmat * vals) @ cmat.T
    w1 = (cmat * vals) @ om1
    w2 = (cmat * vals) @ om2
    try:
        chol = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise ValueError("cycle Gram matrix is not positive definite at these weights") from exc
    sol = np.linalg.solve(chol.T, np.linalg.solve(chol, w1))
    correction = float(np.einsum("im,mn,in->", w2, qnum, sol))
    return qterm - correction


def resistance_oracle(graph, y, momenta1, momenta2=None):
    """Independent Laplacian oracle for ``phi/psi``.

    Builds the weighted graph Laplacian ``L = B diag(1/y) B^T`` from the
    incidence matrix and returns ``sum_{mu,nu} q_{mu nu} p1^mu . L^+ p2^nu``.
    Shares nothing with the polynomial or Schur routes beyond the graph.
    """
    if momenta2 is None:
        momenta2 = momenta1
    order, vals = _edge_values(graph, y)
    b = np.array(boundary_matrix(graph), dtype=float)
    lap = (b / vals) @ b.T
    vorder = sorted(graph.vertices)
    nv = len(vorder)
    space = momenta1.space
    p1 = np.array([[float(x) for x in momenta1.vector(v)] for v in vorder])
    p2 = np.array([[float(x) for x in momenta2.vector(v)] for v in vorder])
    if nv == 1:
        return 0.0
    red = lap[1:, 1:]
    sol = np.zeros_like(p2)
    sol[1:] = np.linalg.solve(red, p2[1:])
    qnum = space.numeric()
    return float(np.einsum("vm,mn,vn->", p1, qnum, sol))
