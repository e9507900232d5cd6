"""Even leaf labelings, disjoint path systems, top-vectors and NNI predicates.

A 0/1 labeling of the leaves with even sum determines a unique edge-disjoint
system of leaf-to-leaf paths: an edge carries a path exactly when the number
of 1-labeled leaves below it is odd.  The top-set of the system is the set of
interior nodes whose two child edges both lie in a path; its indicator vector
(in canonical interior order) is a vertex of the model polytope.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .tree import NniTriple, RootedBinaryTree, TreeError


@dataclass(frozen=True)
class EvenLabeling:
    bits: tuple

    def __post_init__(self):
        if sum(self.bits) % 2 != 0:
            raise TreeError(f"labeling {self.bits} has odd parity")


@dataclass(frozen=True)
class PathSystem:
    """Edge-disjoint leaf-to-leaf paths; edges keyed by their child endpoint."""

    edges: frozenset
    paths: tuple  # each path is a tuple of node ids from leaf to leaf


@dataclass(frozen=True)
class TopVector:
    bits: tuple

    @property
    def bitstring(self) -> str:
        return "".join(map(str, self.bits))


def even_labelings(n: int):
    """All 2^(n-1) even-sum labelings of n leaves, lexicographic."""
    if n < 2:
        raise TreeError("need n >= 2")
    for bits in product((0, 1), repeat=n):
        if sum(bits) % 2 == 0:
            yield EvenLabeling(bits)


def path_system(tree: RootedBinaryTree, lab: EvenLabeling) -> PathSystem:
    """The unique system of disjoint paths joining the 1-labeled leaves.

    Edge e(v) is in the system iff the 1-labeled leaves below v have odd
    count; at every internal vertex 0 or 2 incident edges are used, so the
    used edges decompose uniquely into paths.
    """
    if len(lab.bits) != tree.n_leaves:
        raise TreeError(
            f"labeling length {len(lab.bits)} != n_leaves {tree.n_leaves}"
        )
    bit_of_leaf = {leaf: lab.bits[i] for i, leaf in enumerate(tree.leaves)}
    parity = {}
    for v in reversed(list(tree.interior_nodes)):
        for k in tree.children(v):
            if tree.is_leaf(k):
                parity[k] = bit_of_leaf[k]
        parity[v] = sum(parity[k] for k in tree.children(v)) % 2
    edges = frozenset(v for v in parity if v != tree.root and parity[v] == 1)

    # Walk each path once, starting from 1-labeled leaves.
    incident = {}
    for v in edges:
        p = tree.parent(v)
        incident.setdefault(v, []).append((p, v))
        incident.setdefault(p, []).append((p, v))
    used = set()
    paths = []
    for leaf in tree.leaves:
        if bit_of_leaf[leaf] != 1:
            continue
        start_edge = incident[leaf][0]
        if start_edge in used:
            continue
        node_path = [leaf]
        current, edge = leaf, start_edge
        while True:
            used.add(edge)
            current = edge[0] if edge[1] == current else edge[1]
            node_path.append(current)
            nxt = [e for e in incident.get(current, ()) if e not in used]
            if not nxt:
                break
            edge = nxt[0]
        paths.append(tuple(node_path))
    return PathSystem(edges, tuple(paths))


def top_vector(tree: RootedBinaryTree, ps: PathSystem) -> TopVector:
    """Bit v = 1 iff both child edges of v lie in a path of the system."""
    bits = []
    for v in tree.interior_nodes:
        a, b = tree.children(v)
        bits.append(1 if (a in ps.edges and b in ps.edges) else 0)
    return TopVector(tuple(bits))


def topset_of_labeling(tree: RootedBinaryTree, lab: EvenLabeling) -> frozenset:
    """Top-set as a set of node ids (convenient across related trees)."""
    ps = path_system(tree, lab)
    out = set()
    for v in tree.interior_nodes:
        a, b = tree.children(v)
        if a in ps.edges and b in ps.edges:
            out.add(v)
    return frozenset(out)


def enumerate_top_vectors(tree: RootedBinaryTree) -> list:
    """All distinct top-vectors, sorted by bitstring.  Cardinality F_n with
    F_0 = F_1 = 1."""
    seen = {top_vector(tree, path_system(tree, lab)) for lab in even_labelings(tree.n_leaves)}
    return sorted(seen, key=lambda tv: tv.bits)


def enumerate_topsets(tree: RootedBinaryTree) -> list:
    seen = {topset_of_labeling(tree, lab) for lab in even_labelings(tree.n_leaves)}
    return sorted(seen, key=lambda s: tuple(sorted(tree.interior_index(v) for v in s)))


def topset_to_vector(tree: RootedBinaryTree, topset: frozenset) -> TopVector:
    return TopVector(tuple(1 if v in topset else 0 for v in tree.interior_nodes))


def vector_to_topset(tree: RootedBinaryTree, tv: TopVector) -> frozenset:
    return frozenset(v for v, bit in zip(tree.interior_nodes, tv.bits) if bit)


def _as_topset(tree: RootedBinaryTree, topset) -> frozenset:
    if isinstance(topset, TopVector):
        return vector_to_topset(tree, topset)
    return frozenset(topset)


def _free_descent(tree: RootedBinaryTree, topset: frozenset, v: int) -> bool:
    """True if some downward path from v to a leaf avoids topset entirely."""
    if tree.is_leaf(v):
        return True
    if v in topset:
        return False
    return any(_free_descent(tree, topset, k) for k in tree.children(v))


def is_valid_top_vector(tree: RootedBinaryTree, tv: TopVector) -> bool:
    """Greedy O(n) realizability test, cross-validated against enumeration.

    A 0/1 vector is realizable iff below each marked node both child subtrees
    admit a descent to a leaf that avoids every marked node: the marked
    node's path descends there, and paths of distinct marked nodes can never
    collide because entering a marked node's territory means passing through
    it.
    """
    if len(tv.bits) != tree.n_leaves - 1:
        raise TreeError(
            f"vector length {len(tv.bits)} != interior count {tree.n_leaves - 1}"
        )
    topset = vector_to_topset(tree, tv)
    return all(
        _free_descent(tree, topset, k)
        for v in topset
        for k in tree.children(v)
    )


def is_blocked(tree: RootedBinaryTree, topset, x: int) -> bool:
    """True iff every path from x down to a leaf meets a top-set node
    (a marked x blocks itself via the length-0 descent).  Accepts the
    top-set as node ids or as a TopVector."""
    return not _free_descent(tree, _as_topset(tree, topset), x)


def traversability(tree: RootedBinaryTree, topset) -> dict:
    """Root-leaf traversability and root augmentability of a top-set.

    The first asks for a root-to-leaf path avoiding every top-most vertex;
    the second asks whether the root bit is 0 and flipping it to 1 leaves a
    realizable top-vector.  Both predicates matter chiefly for (bi)cluster
    trees but make sense, and are exposed, for any tree.
    """
    topset = _as_topset(tree, topset)
    root = tree.root
    traversable = _free_descent(tree, topset, root)
    augmentable = root not in topset and all(
        _free_descent(tree, topset, k) for k in tree.children(root)
    )
    return {"root_leaf_traversable": traversable, "root_augmentable": augmentable}


def classify_maintaining(
    treeT: RootedBinaryTree,
    treeT2: RootedBinaryTree,
    triple: NniTriple,
    topset,
) -> tuple:
    """Classify a vertex of R_T under the NNI move (b, c, e) and map it over.

    Returns (maintaining, image_topset).  A vertex is maintaining when it is
    also a vertex of the rearranged tree; with d the other child of c and f
    the other child of b this holds iff b, c are both unmarked, or b is
    marked and d is not blocked, or c is marked and f is not blocked.
    Nonmaintaining vertices map by swapping the b and c bits.
    """
    topset = _as_topset(treeT, topset)
    if not is_valid_top_vector(treeT, topset_to_vector(treeT, topset)):
        raise TreeError(f"top-set {sorted(topset)} is not realizable")
    b, c, e = triple.b, triple.c, triple.e
    d = treeT.sibling(e)
    f = treeT.sibling(c)
    if b in topset:
        maintaining = not is_blocked(treeT, topset, d)
    elif c in topset:
        maintaining = not is_blocked(treeT, topset, f)
    else:
        maintaining = True
    image = topset if maintaining else frozenset(topset ^ {b, c})
    return maintaining, image


def vertex_bijection(
    treeT: RootedBinaryTree, treeT2: RootedBinaryTree, triple: NniTriple
) -> dict:
    """The involution-pair map vert(R_T) -> vert(R_T') as topset -> topset."""
    return {
        s: classify_maintaining(treeT, treeT2, triple, s)[1]
        for s in enumerate_topsets(treeT)
    }


def path_system_json(tree: RootedBinaryTree, ps: PathSystem) -> dict:
    """Edges as sorted "(parent,child)" strings over canonical indices, with
    leaf endpoints rendered as L<label>."""

    def name(v):
        if tree.is_leaf(v):
            return f"L{tree.leaf_label(v)}"
        return str(tree.interior_index(v))

    edges = sorted(f"({name(tree.parent(v))},{name(v)})" for v in ps.edges)
    return {"edges": edges, "n_paths": len(ps.paths)}
