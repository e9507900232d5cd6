"""The model polytope in V- and H-representation, and its relatives.

R_T is the convex hull of all top-vectors of a tree T; its facets follow the
cluster structure of T.  R_T(I), for a downward-closed set I of interior
nodes, interpolates between the plain two-state model polytope (I empty,
edge coordinates y) and R_T (I everything, node coordinates x): node
coordinates below I, edge coordinates above.

The closed-form facet lists here are production; the exact hull in
``cfnmc.hull`` is the independent test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import hull as _hull
from .paths import enumerate_top_vectors, even_labelings, path_system
from .tree import (
    RootedBinaryTree,
    TreeError,
    enumerate_clusters,
    validate_order_ideal,
)


@dataclass(frozen=True)
class Inequality:
    """coeffs . x <= rhs with primitive integer coeffs; equalities are tagged
    root_equality and mean coeffs . x = rhs."""

    coeffs: tuple
    rhs: int
    kind: str

    def normalized(self) -> "Inequality":
        g = 0
        for c in self.coeffs:
            g = gcd(g, abs(c))
        g = gcd(g, abs(self.rhs))
        if g > 1:
            return Inequality(
                tuple(c // g for c in self.coeffs), self.rhs // g, self.kind
            )
        return self

    def satisfied_by(self, point) -> bool:
        lhs = sum(c * x for c, x in zip(self.coeffs, point))
        if self.kind == "root_equality":
            return lhs == self.rhs
        return lhs <= self.rhs

    def tight_at(self, point) -> bool:
        return sum(c * x for c, x in zip(self.coeffs, point)) == self.rhs


@dataclass(frozen=True)
class Polytope:
    """Exact V- and H-representation with integer data.

    ``coord_labels`` names each coordinate: "x<i>" for the interior node with
    canonical index i, "y<i>" / "yL<label>" for the edge pointing up from
    that node / leaf.
    """

    dim: int
    vertices: tuple
    facets: tuple
    coord_labels: tuple

    @property
    def inequalities(self):
        return tuple(f for f in self.facets if f.kind != "root_equality")

    @property
    def equalities(self):
        return tuple(f for f in self.facets if f.kind == "root_equality")

    def contains(self, point) -> bool:
        return all(f.satisfied_by(point) for f in self.facets)

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "coords": list(self.coord_labels),
            "vertices": [list(v) for v in self.vertices],
            "facets": [
                {"coeffs": list(f.coeffs), "rhs": f.rhs, "kind": f.kind}
                for f in self.facets
            ],
        }


# -- R_T ----------------------------------------------------------------------


def facets_corollary(tree: RootedBinaryTree) -> list:
    """Closed-form facet list of R_T: x_i >= 0, x_i + x_j <= 1 on adjacent
    interior pairs, and 2*sum_C x + sum_N(C) x <= |C|+1 per cluster C.

    The 2-leaf tree is degenerate (a single interior node, no adjacent pair);
    its segment needs the explicit upper bound x <= 1, emitted with the
    adjacency tag.
    """
    n = tree.n_leaves
    d = n - 1
    out = []
    for i in range(d):
        coeffs = tuple(-1 if j == i else 0 for j in range(d))
        out.append(Inequality(coeffs, 0, "nonneg"))
    if n == 2:
        out.append(Inequality((1,), 1, "adjacency"))
        return out
    for v in tree.interior_nodes:
        for k in tree.children(v):
            if tree.is_interior(k):
                i, j = tree.interior_index(v), tree.interior_index(k)
                coeffs = tuple(1 if t in (i, j) else 0 for t in range(d))
                out.append(Inequality(coeffs, 1, "adjacency"))
    for cl in enumerate_clusters(tree):
        coeffs = [0] * d
        for v in cl.members:
            coeffs[tree.interior_index(v)] = 2
        for v in cl.neighbor_set:
            coeffs[tree.interior_index(v)] = 1
        out.append(Inequality(tuple(coeffs), len(cl.members) + 1, "cluster"))
    return out


def build_RT(tree: RootedBinaryTree) -> Polytope:
    """R_T: vertices are all top-vectors, facets from the closed form."""
    verts = tuple(tv.bits for tv in enumerate_top_vectors(tree))
    labels = tuple(f"x{i}" for i in range(tree.n_leaves - 1))
    return Polytope(tree.n_leaves - 1, verts, tuple(facets_corollary(tree)), labels)


# -- R_T(I) --------------------------------------------------------------------


def _check_order_ideal(tree: RootedBinaryTree, ideal) -> frozenset:
    return validate_order_ideal(tree, ideal)


def rti_coordinates(tree: RootedBinaryTree, ideal) -> tuple:
    """Coordinate list of R_T(I): ("x", v) for v in I by canonical index,
    then ("y", v) for each non-root v whose parent is outside I (the edges of
    T - I), interior nodes first by index, then leaves by label."""
    ideal = _check_order_ideal(tree, ideal)
    xs = [("x", v) for v in tree.interior_nodes if v in ideal]
    ys = [
        ("y", v)
        for v in tree.non_root_nodes_preorder()
        if tree.parent(v) not in ideal
    ]
    return tuple(xs + ys)


def _coord_label(tree: RootedBinaryTree, coord) -> str:
    kind, v = coord
    if tree.is_leaf(v):
        return f"{kind}L{tree.leaf_label(v)}"
    return f"{kind}{tree.interior_index(v)}"


def mixed_point(tree: RootedBinaryTree, ideal, coords, labeling) -> tuple:
    """The vertex of R_T(I) realized by the path system of one labeling:
    x_v = 1 iff v is a top, y_v = 1 iff the edge above v is used."""
    ps = path_system(tree, labeling)
    point = []
    for kind, v in coords:
        if kind == "x":
            a, b = tree.children(v)
            point.append(1 if (a in ps.edges and b in ps.edges) else 0)
        else:
            point.append(1 if v in ps.edges else 0)
    return tuple(point)


def build_RTI(tree: RootedBinaryTree, ideal) -> Polytope:
    """R_T(I). With I = Int(T) this is exactly R_T (in x-coordinates);
    with I empty it is the plain two-state model polytope (y-coordinates)."""
    ideal = _check_order_ideal(tree, ideal)
    coords = rti_coordinates(tree, ideal)
    verts = sorted(
        {
            mixed_point(tree, ideal, coords, lab)
            for lab in even_labelings(tree.n_leaves)
        }
    )
    facets = tuple(facets_RTI(tree, ideal))
    labels = tuple(_coord_label(tree, c) for c in coords)
    return Polytope(len(coords), tuple(verts), facets, labels)


def _unit(coords, index_of, key, value):
    out = [0] * len(coords)
    out[index_of[key]] = value
    return out


def facets_RTI(tree: RootedBinaryTree, ideal) -> list:
    """Closed-form H-description of R_T(I) (one equality plus facets).

    Families: the root equality y_s = y_t; four local inequalities per
    interior vertex outside I from the plain-model facets; x >= 0 inside I;
    x_i + x_j <= 1 on adjacent pairs inside I; x_r + y_r <= 1 tying each
    maximal r in I to its up edge; y_r >= 0 when no vertex outside I sees the
    root edges; y <= 1 for the 2-leaf degenerate case; and the cluster
    inequalities, with the up-edge term y_m(C) present exactly when m(C) is
    maximal in I.
    """
    ideal = _check_order_ideal(tree, ideal)
    coords = rti_coordinates(tree, ideal)
    index_of = {c: i for i, c in enumerate(coords)}
    d = len(coords)
    out = []
    full = len(ideal) == tree.n_leaves - 1

    if not full:
        s, t = tree.children(tree.root)
        coeffs = [0] * d
        coeffs[index_of[("y", s)]] = 1
        coeffs[index_of[("y", t)]] = -1
        out.append(Inequality(tuple(coeffs), 0, "root_equality"))

    # Local facets at interior vertices outside I.
    for v in tree.interior_nodes:
        if v in ideal or v == tree.root:
            continue
        kids = tree.children(v)
        trio = [index_of[("y", v)], index_of[("y", kids[0])], index_of[("y", kids[1])]]
        for pos in range(3):
            coeffs = [0] * d
            for t_, idx in enumerate(trio):
                coeffs[idx] = 1 if t_ == pos else -1
            out.append(Inequality(tuple(coeffs), 0, "cfn_local"))
        coeffs = [0] * d
        for idx in trio:
            coeffs[idx] = 1
        out.append(Inequality(tuple(coeffs), 2, "cfn_local"))

    # x >= 0.
    for v in tree.interior_nodes:
        if v in ideal:
            out.append(
                Inequality(tuple(_unit(coords, index_of, ("x", v), -1)), 0, "nonneg")
            )

    # Adjacent pairs inside I.
    for v in tree.interior_nodes:
        if v not in ideal:
            continue
        for k in tree.children(v):
            if tree.is_interior(k) and k in ideal:
                coeffs = [0] * d
                coeffs[index_of[("x", v)]] = 1
                coeffs[index_of[("x", k)]] = 1
                out.append(Inequality(tuple(coeffs), 1, "adjacency"))

    # Each maximal r in I against its own up edge (vacuous when I = Int(T):
    # no y-coordinates remain).
    maximal = (
        []
        if full
        else [v for v in tree.interior_nodes if v in ideal and tree.parent(v) not in ideal]
    )
    for r in maximal:
        coeffs = [0] * d
        coeffs[index_of[("x", r)]] = 1
        coeffs[index_of[("y", r)]] = 1
        out.append(Inequality(tuple(coeffs), 1, "adjacency"))

    # y >= 0 at the root: a facet only when no interior vertex outside I
    # supplies local inequalities that already imply it.
    if not full:
        s, t = tree.children(tree.root)
        blockers = [
            v for v in (s, t) if tree.is_interior(v) and v not in ideal
        ]
        if not blockers:
            coeffs = [0] * d
            coeffs[index_of[("y", s)]] = -1
            out.append(Inequality(tuple(coeffs), 0, "nonneg"))
        if tree.n_leaves == 2:
            coeffs = [0] * d
            coeffs[index_of[("y", s)]] = 1
            out.append(Inequality(tuple(coeffs), 1, "cfn_local"))

    # Cluster inequalities inside I.
    for cl in enumerate_clusters(tree):
        if not cl.members <= ideal:
            continue
        coeffs = [0] * d
        for v in cl.members:
            coeffs[index_of[("x", v)]] = 2
        for v in cl.neighbor_set:
            if v in ideal:
                coeffs[index_of[("x", v)]] = 1
        m = cl.max_vertex
        if tree.parent(m) not in ideal and not full:
            coeffs[index_of[("y", m)]] = 1
        out.append(Inequality(tuple(coeffs), len(cl.members) + 1, "cluster"))

    if full and tree.n_leaves == 2:
        # R_T for the 2-leaf tree: handled by facets_corollary's special case.
        out.append(Inequality((1,), 1, "adjacency"))
    return [f.normalized() for f in out]


# -- contraction map between R_T(I - {r}) and R_T(I) ---------------------------


def contract_vertex_map(tree: RootedBinaryTree, ideal, r: int):
    """The linear map sending R_T(I - {r}) onto R_T(I) for a maximal r in I:
    keep shared coordinates, and set x_r = (-y_r + y_a + y_b)/2 with a, b the
    children of r (the y_r term is absent when r is the root).

    Returns a function on source points; fractional results indicate a bug.
    """
    ideal = _check_order_ideal(tree, ideal)
    if r not in ideal:
        raise TreeError("r must lie in the ideal")
    smaller = ideal - {r}
    _check_order_ideal(tree, smaller)
    src_coords = rti_coordinates(tree, smaller)
    dst_coords = rti_coordinates(tree, ideal)
    src_index = {c: i for i, c in enumerate(src_coords)}
    a, b = tree.children(r)

    def apply(point):
        out = []
        for kind, v in dst_coords:
            if kind == "x" and v == r:
                val = Fraction(point[src_index[("y", a)]] + point[src_index[("y", b)]])
                if r != tree.root:
                    val -= point[src_index[("y", r)]]
                val = val / 2
                if val.denominator != 1:
                    raise TreeError("contraction produced a non-integer point")
                out.append(int(val))
            else:
                out.append(point[src_index[(kind, v)]])
        return tuple(out)

    return apply


# -- hull oracle plumbing -------------------------------------------------------


def hull_facets(vertices, allow_lower_dim: bool = False):
    """Exact irredundant H-representation of conv(vertices) as Inequality
    records (kind "hull").  Degenerate input raises with the affine hull
    unless allow_lower_dim, in which case facets live in the pivot chart."""
    raw = _hull.hull_facets(vertices, allow_lower_dim=allow_lower_dim)
    return [Inequality(c, r, "hull") for c, r in raw]


def h_reps_match(polytope: Polytope) -> bool:
    """True iff the closed-form facets equal the hull oracle's, compared in
    the chart of the affine hull."""
    eqs, facets, pivots, relations = _hull.hull_h_description(polytope.vertices)
    oracle = set(facets)
    claimed = set()
    for f in polytope.inequalities:
        claimed.add(_hull.reduce_to_chart(f.coeffs, f.rhs, pivots, relations))
    if len(eqs) != len(polytope.equalities):
        return False
    for e in polytope.equalities:
        c, r = _hull.reduce_to_chart(e.coeffs, e.rhs, pivots, relations)
        if any(x != 0 for x in c) or r != 0:
            return False
    return claimed == oracle


# -- caterpillar / zig-zag order polytope --------------------------------------


def caterpillar_zigzag_map(n: int):
    """The unimodular affine map x -> Dx + a with D = diag(1,-1,1,...) and
    a = (0,1,0,1,...) carrying vert(R_C(n+1)) onto the vertices of the
    zig-zag order polytope on n elements.  Returns (D_diagonal, a, apply)."""
    if n < 1:
        raise TreeError("need n >= 1")
    diag = tuple(1 if i % 2 == 0 else -1 for i in range(n))
    shift = tuple(0 if i % 2 == 0 else 1 for i in range(n))

    def apply(x):
        if len(x) != n:
            raise TreeError(f"expected {n} coordinates, got {len(x)}")
        return tuple(d * xi + s for d, xi, s in zip(diag, x, shift))

    return diag, shift, apply


def zigzag_order_polytope_vertices(n: int) -> list:
    """0/1 points of the order polytope of the zig-zag poset p1 < p2 > p3 < ...
    (weakly order-consistent labelings)."""
    out = []
    for mask in range(2 ** n):
        v = [(mask >> i) & 1 for i in range(n)]
        ok = True
        for i in range(n - 1):
            lo, hi = (i, i + 1) if i % 2 == 0 else (i + 1, i)
            if v[lo] > v[hi]:
                ok = False
                break
        if ok:
            out.append(tuple(v))
    return sorted(out)


def count_monotone_zigzag_maps(n: int, m: int) -> int:
    """Number of maps P_n -> {0..m} respecting p1 <= p2 >= p3 <= ...; equals
    the number of lattice points in the m-th dilate of the order polytope."""
    counts = [1] * (m + 1)
    for i in range(1, n):
        new = [0] * (m + 1)
        if i % 2 == 1:  # p_{i+1} above p_i
            acc = 0
            for v in range(m + 1):
                acc += counts[v]
                new[v] = acc
        else:  # p_{i+1} below p_i
            acc = 0
            for v in range(m, -1, -1):
                acc += counts[v]
                new[v] = acc
        counts = new
    return sum(counts)
