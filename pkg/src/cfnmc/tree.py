"""Rooted binary trees: Newick parsing, canonical indexing, clusters, NNI moves.

Nodes are small integer ids into an arena.  Interior nodes additionally carry
a canonical index 0..n-2 assigned in preorder, with the root first and
children visited left before right, where "left" is the child whose subtree
contains the smallest leaf label.  That index fixes the coordinate order of
every vector and polytope downstream, so it must never depend on how the tree
was built.

Trees are immutable after construction; all operations return new trees.
Derived trees (NNI images, splits) preserve the integer ids of the nodes they
keep, which is what makes coordinates comparable across related trees.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class NewickError(ValueError):
    """Malformed Newick input.  ``position`` is a 0-based offset into the text."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class TreeError(ValueError):
    """Structurally invalid tree or invalid operation argument."""


@dataclass(frozen=True)
class NniTriple:
    """Path b -> c -> e with c a child of b and e a child of c; e may be a leaf."""

    b: int
    c: int
    e: int


@dataclass(frozen=True)
class Cluster:
    """Connected set of interior nodes that each touch three interior nodes."""

    members: frozenset
    neighbor_set: frozenset
    max_vertex: int


class RootedBinaryTree:
    """A rooted binary tree with integer leaf labels.

    Every non-leaf node has exactly two children; the root has degree 2 and
    every other interior node degree 3, so an n-leaf tree has n-1 interior
    nodes and 2n-2 edges.  Edges are keyed by their child endpoint.
    """

    __slots__ = (
        "root",
        "_children",
        "_parent",
        "_leaf_label",
        "_min_leaf",
        "_depth",
        "_interior",
        "_interior_index",
        "n_leaves",
    )

    def __init__(self, root: int, children: dict, leaf_labels: dict):
        self.root = root
        self._leaf_label = dict(leaf_labels)
        seen_labels = set()
        for leaf, lab in self._leaf_label.items():
            if not isinstance(lab, int) or lab <= 0:
                raise TreeError(f"leaf label must be a positive integer, got {lab!r}")
            if lab in seen_labels:
                raise TreeError(f"duplicate leaf label {lab}")
            seen_labels.add(lab)
        self._parent = {}
        self._children = {}
        for node, kids in children.items():
            if len(kids) != 2:
                raise TreeError(f"node {node} has {len(kids)} children, expected 2")
            self._children[node] = tuple(kids)
            for k in kids:
                if k in self._parent:
                    raise TreeError(f"node {k} has two parents")
                self._parent[k] = node
        if root in self._parent:
            raise TreeError("root has a parent")
        all_nodes = set(self._children) | set(self._leaf_label)
        if set(self._parent) != all_nodes - {root}:
            raise TreeError("tree is not connected or has stray nodes")
        if set(self._children) & set(self._leaf_label):
            raise TreeError("a node cannot be both interior and leaf")
        if root not in self._children:
            raise TreeError("root must be interior (need at least 2 leaves)")

        # Min leaf label per subtree, used for the canonical left/right order.
        self._min_leaf = {}
        self._fill_min_leaf(root)
        self._children = {
            v: tuple(sorted(kids, key=lambda k: self._min_leaf[k]))
            for v, kids in self._children.items()
        }

        # Preorder walk: left child is popped first, so self._interior comes
        # out in canonical preorder.
        self._interior = []
        self._depth = {}
        stack = [(root, 0)]
        while stack:
            v, d = stack.pop()
            self._depth[v] = d
            if v in self._children:
                self._interior.append(v)
                left, right = self._children[v]
                stack.append((right, d + 1))
                stack.append((left, d + 1))
        self._interior_index = {v: i for i, v in enumerate(self._interior)}
        self.n_leaves = len(self._leaf_label)
        if len(self._interior) != self.n_leaves - 1:
            raise TreeError("interior node count must be n_leaves - 1")

    def _fill_min_leaf(self, root: int) -> None:
        order = []
        stack = [root]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(self._children.get(v, ()))
        for v in reversed(order):
            if v in self._leaf_label:
                self._min_leaf[v] = self._leaf_label[v]
            else:
                a, b = self._children[v]
                self._min_leaf[v] = min(self._min_leaf[a], self._min_leaf[b])

    # -- basic queries ---------------------------------------------------

    def is_leaf(self, v: int) -> bool:
        return v in self._leaf_label

    def is_interior(self, v: int) -> bool:
        return v in self._children

    def children(self, v: int) -> tuple:
        return self._children[v]

    def parent(self, v: int):
        return self._parent.get(v)

    def sibling(self, v: int) -> int:
        p = self._parent[v]
        a, b = self._children[p]
        return b if v == a else a

    def leaf_label(self, v: int) -> int:
        return self._leaf_label[v]

    def depth(self, v: int) -> int:
        return self._depth[v]

    @property
    def interior_nodes(self) -> tuple:
        """Interior node ids in canonical preorder (root first)."""
        return tuple(self._interior)

    def interior_index(self, v: int) -> int:
        return self._interior_index[v]

    def node_at_index(self, i: int) -> int:
        return self._interior[i]

    @property
    def leaves(self) -> tuple:
        """Leaf node ids sorted by label."""
        return tuple(sorted(self._leaf_label, key=self._leaf_label.get))

    @property
    def leaf_labels(self) -> tuple:
        return tuple(sorted(self._leaf_label.values()))

    def nodes(self) -> tuple:
        return tuple(self._children) + tuple(self._leaf_label)

    def non_root_nodes_preorder(self) -> list:
        """All non-root nodes, interior first in canonical index order, then
        leaves by label.  Fixes the coordinate order of edge-indexed vectors."""
        interior = [v for v in self._interior if v != self.root]
        leaves = list(self.leaves)
        return interior + leaves

    def subtree_nodes(self, v: int) -> set:
        out = set()
        stack = [v]
        while stack:
            u = stack.pop()
            out.add(u)
            stack.extend(self._children.get(u, ()))
        return out

    def leaves_under(self, v: int) -> set:
        return {u for u in self.subtree_nodes(v) if self.is_leaf(u)}

    def is_ancestor(self, a: int, v: int) -> bool:
        """True if a lies on the path from the root to v (inclusive)."""
        while v is not None:
            if v == a:
                return True
            v = self._parent.get(v)
        return False

    # -- serialization ---------------------------------------------------

    def to_newick(self) -> str:
        def render(v: int) -> str:
            if self.is_leaf(v):
                return str(self._leaf_label[v])
            a, b = self._children[v]
            return f"({render(a)},{render(b)})"

        return render(self.root) + ";"

    def canonical_shape(self):
        """Nested-tuple shape with children sorted; equal iff same topology."""

        def shape(v):
            if self.is_leaf(v):
                return ()
            a, b = self._children[v]
            sa, sb = shape(a), shape(b)
            return (sa, sb) if sa <= sb else (sb, sa)

        return shape(self.root)

    def to_json_dict(self) -> dict:
        interior = []
        for v in self._interior:
            kids = []
            for k in self._children[v]:
                if self.is_leaf(k):
                    kids.append(f"L{self._leaf_label[k]}")
                else:
                    kids.append(self._interior_index[k])
            p = self._parent.get(v)
            interior.append(
                {
                    "index": self._interior_index[v],
                    "parent": None if p is None else self._interior_index[p],
                    "children": kids,
                }
            )
        return {"n_leaves": self.n_leaves, "interior": interior}

    def __repr__(self) -> str:
        return f"RootedBinaryTree({self.to_newick()!r})"

    def same_tree(self, other: "RootedBinaryTree") -> bool:
        return self.to_newick() == other.to_newick()


# -- Newick ---------------------------------------------------------------


def parse_newick(text: str) -> RootedBinaryTree:
    """Parse a rooted binary Newick string with positive-integer leaf labels.

    Internal labels are accepted and discarded.  Branch lengths are not part
    of the dialect and raise.  The string must end with ';'.
    """
    pos = 0
    n = len(text)
    next_id = [0]
    children: dict = {}
    leaf_labels: dict = {}

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def fresh() -> int:
        next_id[0] += 1
        return next_id[0] - 1

    def parse_node() -> int:
        nonlocal pos
        skip_ws()
        if pos >= n:
            raise NewickError("unexpected end of input", pos)
        if text[pos] == "(":
            pos += 1
            kids = [parse_node()]
            skip_ws()
            while pos < n and text[pos] == ",":
                pos += 1
                kids.append(parse_node())
                skip_ws()
            if pos >= n or text[pos] != ")":
                raise NewickError("expected ')' or ','", pos)
            pos += 1
            skip_ws()
            # optional internal label, ignored
            start = pos
            while pos < n and (text[pos].isalnum() or text[pos] in "._-"):
                pos += 1
            skip_ws()
            if pos < n and text[pos] == ":":
                raise NewickError("branch lengths are not supported", pos)
            if len(kids) != 2:
                raise NewickError(f"non-binary node with {len(kids)} children", start)
            v = fresh()
            children[v] = tuple(kids)
            return v
        start = pos
        while pos < n and text[pos].isdigit():
            pos += 1
        if pos == start:
            raise NewickError(f"expected a leaf label, found {text[pos]!r}", pos)
        label = int(text[start:pos])
        skip_ws()
        if pos < n and text[pos] == ":":
            raise NewickError("branch lengths are not supported", pos)
        if label <= 0:
            raise NewickError("leaf labels must be positive integers", start)
        v = fresh()
        leaf_labels[v] = label
        return v

    root = parse_node()
    skip_ws()
    if pos >= n or text[pos] != ";":
        raise NewickError("expected terminating ';'", pos)
    pos += 1
    skip_ws()
    if pos != n:
        raise NewickError("trailing characters after ';'", pos)
    if root in leaf_labels:
        raise NewickError("a single leaf is not a binary tree", 0)
    try:
        return RootedBinaryTree(root, children, leaf_labels)
    except TreeError as exc:
        raise NewickError(str(exc)) from exc


# -- shape enumeration ------------------------------------------------------


@lru_cache(maxsize=None)
def _shapes(n: int) -> tuple:
    if n == 1:
        return ((),)
    out = []
    for k in range(1, n // 2 + 1):
        left = _shapes(k)
        right = _shapes(n - k)
        for i, s1 in enumerate(left):
            for s2 in right if k != n - k else right[i:]:
                out.append((s1, s2) if s1 <= s2 else (s2, s1))
    return tuple(sorted(set(out)))


def tree_from_shape(shape) -> RootedBinaryTree:
    """Build a tree of the given nested-tuple shape with leaves 1..n in preorder."""
    children: dict = {}
    leaf_labels: dict = {}
    counter = [0]
    next_label = [1]

    def build(s) -> int:
        v = counter[0]
        counter[0] += 1
        if s == ():
            leaf_labels[v] = next_label[0]
            next_label[0] += 1
            return v
        children[v] = (build(s[0]), build(s[1]))
        return v

    root = build(shape)
    return RootedBinaryTree(root, children, leaf_labels)


def enumerate_topologies(n: int) -> list:
    """One representative per rooted binary shape on n leaves, 2 <= n <= 10.

    Counts follow the Wedderburn-Etherington sequence 1, 1, 2, 3, 6, 11, 23...
    """
    if not 2 <= n <= 10:
        raise TreeError(f"n must be in 2..10, got {n}")
    return [tree_from_shape(s) for s in _shapes(n)]


def caterpillar(n: int) -> RootedBinaryTree:
    """The unique n-leaf shape with exactly one cherry."""
    if n < 2:
        raise TreeError("caterpillar needs n >= 2")
    s = ((), ())
    for _ in range(n - 2):
        s = (s, ())
    return tree_from_shape(s)


# -- clusters ----------------------------------------------------------------


def cluster_nodes(tree: RootedBinaryTree) -> list:
    """Interior nodes adjacent to three interior nodes (i.e. both children
    interior; the parent of a non-root interior node always is)."""
    out = []
    for v in tree.interior_nodes:
        if v == tree.root:
            continue
        a, b = tree.children(v)
        if tree.is_interior(a) and tree.is_interior(b):
            out.append(v)
    return out


def enumerate_clusters(tree: RootedBinaryTree) -> list:
    """All clusters of the tree, sorted by their member index sets."""
    cnodes = cluster_nodes(tree)
    cset = set(cnodes)
    adj = {v: set() for v in cnodes}
    for v in cnodes:
        p = tree.parent(v)
        if p in cset:
            adj[v].add(p)
            adj[p].add(v)
    clusters = []
    seen = set()
    # Grow connected subsets from each start node, admitting only additions
    # of nodes larger than the start to avoid revisits.
    order = {v: i for i, v in enumerate(cnodes)}

    def grow(current: frozenset, frontier: set):
        if current in seen:
            return
        seen.add(current)
        clusters.append(current)
        for w in sorted(frontier, key=order.get):
            grow(current | {w}, (frontier | adj[w]) - current - {w})

    for v in cnodes:
        grow(frozenset([v]), set(adj[v]))
    seen_members = set()
    result = []
    for members in clusters:
        if members in seen_members:
            continue
        seen_members.add(members)
        neighbors = set()
        for v in members:
            p = tree.parent(v)
            if p is not None and tree.is_interior(p) and p not in members:
                neighbors.add(p)
            for k in tree.children(v):
                if tree.is_interior(k) and k not in members:
                    neighbors.add(k)
        max_vertex = min(members, key=tree.depth)
        result.append(Cluster(members, frozenset(neighbors), max_vertex))
    result.sort(key=lambda c: tuple(sorted(tree.interior_index(v) for v in c.members)))
    return result


# -- NNI ---------------------------------------------------------------------


def apply_nni(tree: RootedBinaryTree, triple: NniTriple) -> RootedBinaryTree:
    """Prune c, the edge c-e and the e-subtree from below b, and reattach on
    the other child edge of b.  Node ids are preserved, so coordinates of the
    two polytopes are comparable node-by-node.

    After the move: b's children are {d, c} and c's children are {e, f},
    where d was the other child of c and f the other child of b.
    """
    b, c, e = triple.b, triple.c, triple.e
    if not (tree.is_interior(b) and tree.is_interior(c)):
        raise TreeError("b and c must be interior nodes")
    if tree.parent(c) != b or tree.parent(e) != c:
        raise TreeError("triple is not a descending chain b -> c -> e")
    d = tree.sibling(e)
    f = tree.sibling(c)
    children = {v: tree.children(v) for v in tree.interior_nodes}
    children[b] = (d, c)
    children[c] = (e, f)
    leaf_labels = {v: tree.leaf_label(v) for v in tree.leaves}
    return RootedBinaryTree(tree.root, children, leaf_labels)


def nni_triples(tree: RootedBinaryTree) -> list:
    """All valid NNI triples (b, c, e): b, c interior, c a child of b."""
    out = []
    for b in tree.interior_nodes:
        for c in tree.children(b):
            if not tree.is_interior(c):
                continue
            for e in tree.children(c):
                out.append(NniTriple(b, c, e))
    return out


# -- toric-fiber-product split -------------------------------------------------


def _fresh_ids(tree: RootedBinaryTree, count: int) -> list:
    base = max(tree.nodes()) + 1
    return [base + i for i in range(count)]


def _fresh_labels(tree: RootedBinaryTree, count: int) -> list:
    base = max(tree.leaf_labels) + 1
    return [base + i for i in range(count)]


def _subtree(tree: RootedBinaryTree, v: int) -> RootedBinaryTree:
    nodes = tree.subtree_nodes(v)
    children = {u: tree.children(u) for u in nodes if tree.is_interior(u)}
    leaf_labels = {u: tree.leaf_label(u) for u in nodes if tree.is_leaf(u)}
    return RootedBinaryTree(v, children, leaf_labels)


def _split_at(tree: RootedBinaryTree, v: int):
    """The two halves of the decomposition at v; node ids are preserved."""
    if v == tree.root:
        left, right = tree.children(v)
        halves = []
        for keep, drop in ((right, left), (left, right)):
            keep_nodes = tree.subtree_nodes(keep)
            children = {u: tree.children(u) for u in keep_nodes if tree.is_interior(u)}
            leaf_labels = {u: tree.leaf_label(u) for u in keep_nodes if tree.is_leaf(u)}
            (pend,) = _fresh_ids(tree, 1)
            (pl,) = _fresh_labels(tree, 1)
            children[v] = (keep, pend)
            leaf_labels[pend] = pl
            halves.append(RootedBinaryTree(v, children, leaf_labels))
        return halves[0], halves[1]
    # non-root: T1 = everything above v with a cherry grafted below v,
    # T2 = the subtree rooted at v.
    below = tree.subtree_nodes(v) - {v}
    keep_nodes = set(tree.nodes()) - below
    children = {u: tree.children(u) for u in keep_nodes if tree.is_interior(u) and u != v}
    leaf_labels = {u: tree.leaf_label(u) for u in keep_nodes if tree.is_leaf(u)}
    l1, l2 = _fresh_ids(tree, 2)
    a1, a2 = _fresh_labels(tree, 2)
    children[v] = (l1, l2)
    leaf_labels[l1] = a1
    leaf_labels[l2] = a2
    t1 = RootedBinaryTree(tree.root, children, leaf_labels)
    t2 = _subtree(tree, v)
    return t1, t2


def tfp_split(tree: RootedBinaryTree):
    """Decompose at an interior node adjacent to exactly two interior nodes.

    Returns (T1, T2, v) with v shared between the halves, or None when no
    such node exists, which happens exactly for cluster trees (and for the
    2-leaf tree).  The 3-leaf tree has no such node either, but is split at
    its cherry; the second half is then the 2-leaf tree.
    """
    v = _tfp_node(tree)
    if v is not None:
        t1, t2 = _split_at(tree, v)
        return t1, t2, v
    if tree.n_leaves == 3:
        cherry = next(u for u in tree.interior_nodes if u != tree.root)
        t1, t2 = _split_at(tree, cherry)
        return t1, t2, cherry
    return None


def _tfp_node(tree: RootedBinaryTree):
    for v in tree.interior_nodes:
        a, b = tree.children(v)
        interior_kids = tree.is_interior(a) + tree.is_interior(b)
        if v == tree.root:
            if interior_kids == 2:
                return v
        elif interior_kids == 1:
            return v
    return None


def is_cluster_tree(tree: RootedBinaryTree) -> bool:
    """Every non-leaf vertex lies in some cluster C or its neighbor set N(C)."""
    for cl in enumerate_clusters(tree):
        if len(cl.members) * 2 + 3 == tree.n_leaves:
            return True
    return False


def validate_order_ideal(tree: RootedBinaryTree, members) -> frozenset:
    """Check downward-closure in the descendant poset on interior nodes."""
    members = frozenset(members)
    for v in members:
        if not tree.is_interior(v):
            raise TreeError(f"ideal member {v} is not an interior node")
        for k in tree.children(v):
            if tree.is_interior(k) and k not in members:
                raise TreeError("ideal is not downward-closed")
    return members
