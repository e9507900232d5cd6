"""The toric ideal of the clocked two-state model: matrix, generators, checks.

Columns of the defining matrix are the valid top-vectors (plus a homogenizing
row of ones).  The quadratic generating set is built recursively:

* a tree with an interior node adjacent to exactly two interior nodes splits
  into two smaller trees sharing that node; the ideal is the fiber product of
  the two smaller ideals, generated by lifts of the two generating sets plus
  the 2x2 minors of the compatibility matrices ("Quad");
* a cluster tree has no such node; deleting the root leaves a tree that does
  split at its root, and the generators are re-rooted lifts ("Root") plus the
  root swaps ("Swap"), with admissibility governed by root-leaf
  traversability.

Each tree also carries a term order, realized as one big-integer weight per
column assembled from positional stacking of the recursion's weight rows
(block tag, pulled-back subtree weights, minor tie-breaks), with a final
lexicographic tie-break on sorted column keys.  Gröbner correctness is then
certified by marked S-pair reduction, not by trusting the construction.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement

from .paths import enumerate_topsets, topset_to_vector, traversability
from .tree import RootedBinaryTree, TreeError, _split_at, _tfp_node, is_cluster_tree


@dataclass(frozen=True)
class ToricMatrix:
    """Homogenizing row of ones plus one 0/1 row per interior node; columns
    indexed by top-vector bitstrings in lexicographic order."""

    keys: tuple
    rows: tuple

    @property
    def n_cols(self) -> int:
        return len(self.keys)

    def column(self, key: str) -> tuple:
        j = self.keys.index(key)
        return tuple(r[j] for r in self.rows)

    def monomial_sum(self, keys) -> tuple:
        idx = {k: j for j, k in enumerate(self.keys)}
        total = [0] * len(self.rows)
        for k in keys:
            j = idx[k]
            for i, row in enumerate(self.rows):
                total[i] += row[j]
        return tuple(total)

    def to_json_dict(self) -> dict:
        return {"columns": list(self.keys), "rows": [list(r) for r in self.rows]}


@dataclass(frozen=True)
class MarkedBinomial:
    """plus - minus with plus the marked initial term; terms are sorted
    tuples of column keys."""

    plus: tuple
    minus: tuple
    provenance: str
    initial: str = "plus"

    def degree(self) -> int:
        return len(self.plus)

    def initial_squarefree(self) -> bool:
        return len(set(self.plus)) == len(self.plus)

    def to_json_dict(self) -> dict:
        return {
            "plus": list(self.plus),
            "minus": list(self.minus),
            "initial": self.initial,
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class LiftableOrder:
    """Column weights realizing the constructed term order, plus the block
    tag of each column (augmentable for cluster trees, traversable
    otherwise).  Higher weight = bigger in the order; remaining ties break
    lexicographically on sorted key tuples."""

    weight: dict
    block_tag: dict
    block_kind: str

    def compare(self, mono1, mono2) -> int:
        """-1, 0, +1 with monomials as iterables of column keys."""
        m1, m2 = sorted(mono1), sorted(mono2)
        k1 = (len(m1), sum(self.weight[k] for k in m1), m1)
        k2 = (len(m2), sum(self.weight[k] for k in m2), m2)
        return (k1 > k2) - (k1 < k2)


def build_matrix(tree: RootedBinaryTree) -> ToricMatrix:
    keys = [tv.bitstring for tv in _top_vectors(tree)]
    d = tree.n_leaves - 1
    rows = [tuple(1 for _ in keys)]
    for i in range(d):
        rows.append(tuple(int(k[i]) for k in keys))
    return ToricMatrix(tuple(keys), tuple(rows))


def _top_vectors(tree):
    from .paths import enumerate_top_vectors

    return enumerate_top_vectors(tree)


def kernel_member(matrix: ToricMatrix, binomial: MarkedBinomial) -> bool:
    for k in tuple(binomial.plus) + tuple(binomial.minus):
        if k not in matrix.keys:
            raise TreeError(f"unknown column key {k!r}")
    return matrix.monomial_sum(binomial.plus) == matrix.monomial_sum(binomial.minus)


def quadratic_kernel_oracle(matrix: ToricMatrix) -> list:
    """All degree-2 kernel binomials by brute force, deduplicated up to sign."""
    if matrix.n_cols > 500:
        raise TreeError("column cap exceeded for the quadratic oracle")
    fibers = {}
    for pair in combinations_with_replacement(matrix.keys, 2):
        fibers.setdefault(matrix.monomial_sum(pair), []).append(pair)
    out = []
    for monos in fibers.values():
        for m1, m2 in combinations(monos, 2):
            hi, lo = max(m1, m2), min(m1, m2)
            out.append(MarkedBinomial(hi, lo, "oracle"))
    out.sort(key=lambda b: (b.plus, b.minus))
    return out


# -- recursive construction ------------------------------------------------------


def _delete_root(tree: RootedBinaryTree) -> RootedBinaryTree:
    """Remove the root and its pendant leaf (cluster trees only)."""
    a, b = tree.children(tree.root)
    leaf_child = a if tree.is_leaf(a) else b
    new_root = b if leaf_child is a else a
    if not tree.is_leaf(leaf_child) or not tree.is_interior(new_root):
        raise TreeError("root must have one leaf child here")
    keep = tree.subtree_nodes(new_root)
    children = {u: tree.children(u) for u in keep if tree.is_interior(u)}
    labels = {u: tree.leaf_label(u) for u in keep if tree.is_leaf(u)}
    return RootedBinaryTree(new_root, children, labels)


def _interior_set(tree) -> frozenset:
    return frozenset(tree.interior_nodes)


def _generators_raw(tree: RootedBinaryTree) -> list:
    """Generators as ((plus1, plus2), (minus1, minus2), provenance) with
    terms as frozenset top-sets over this tree's node ids."""
    n = tree.n_leaves
    if n <= 3:
        return []
    v = _tfp_node(tree)
    if v is not None:
        t1, t2 = _split_at(tree, v)
        return _tfp_generators(tree, v, t1, t2)
    if not is_cluster_tree(tree):
        raise TreeError("tree without split node must be a cluster tree")
    return _cluster_generators(tree)


def _tfp_generators(tree, v, t1, t2) -> list:
    g1 = _generators_raw(t1)
    g2 = _generators_raw(t2)
    c1 = enumerate_topsets(t1)
    c2 = enumerate_topsets(t2)
    int1, int2 = _interior_set(t1), _interior_set(t2)
    out = []

    def lift(gens, own_classes, other_classes):
        lifted = []
        for (p1, p2), (q1, q2), _prov in gens:
            if (v in p1) != (v in q1):
                q1, q2 = q2, q1
            for r1 in other_classes:
                if (v in r1) != (v in p1):
                    continue
                for r2 in other_classes:
                    if (v in r2) != (v in p2):
                        continue
                    plus = (p1 | r1, p2 | r2)
                    minus = (q1 | r1, q2 | r2)
                    lifted.append((plus, minus, "Lift"))
        return lifted

    out.extend(lift(g1, c1, c2))
    out.extend(lift(g2, c2, c1))
    for k in (False, True):
        rows = [c for c in c1 if (v in c) == k]
        cols = [c for c in c2 if (v in c) == k]
        prov = "Quad1" if k else "Quad0"
        for r1, r2 in combinations(rows, 2):
            for s1, s2 in combinations(cols, 2):
                plus = (r1 | s1, r2 | s2)
                minus = (r1 | s2, r2 | s1)
                out.append((plus, minus, prov))
    return _dedupe(out)


def _cluster_generators(tree) -> list:
    rho = tree.root
    inner = _delete_root(tree)
    gens = _generators_raw(inner)
    classes = enumerate_topsets(inner)
    trav = {
        c: traversability(inner, c)["root_leaf_traversable"] for c in classes
    }
    out = []
    for (p1, p2), (q1, q2), _prov in gens:
        for i1 in (0, 1) if trav[p1] else (0,):
            for i2 in (0, 1) if trav[p2] else (0,):
                for j1 in (0, 1) if trav[q1] else (0,):
                    j2 = i1 + i2 - j1
                    if j2 not in (0, 1) or (j2 == 1 and not trav[q2]):
                        continue
                    plus = (p1 | {rho} if i1 else p1, p2 | {rho} if i2 else p2)
                    minus = (q1 | {rho} if j1 else q1, q2 | {rho} if j2 else q2)
                    out.append((plus, minus, "Root"))
    travs = [c for c in classes if trav[c]]
    for a, b in combinations(travs, 2):
        out.append(((a | {rho}, b), (a, b | {rho}), "Swap"))
    return _dedupe(out)


def _dedupe(raw) -> list:
    seen = set()
    out = []
    for plus, minus, prov in raw:
        mono_p = frozenset(Counter(plus).items())
        mono_m = frozenset(Counter(minus).items())
        if mono_p == mono_m:
            continue
        key = frozenset((mono_p, mono_m))
        if key in seen:
            continue
        seen.add(key)
        out.append((plus, minus, prov))
    return out


# -- term order weights -----------------------------------------------------------


_DEGREE_CAP = 8  # monomial degree bound the stacked weights stay faithful for


def _collapse(rows, classes):
    w = {c: 0 for c in classes}
    for row in rows:
        top = max(row.values(), default=0)
        base = _DEGREE_CAP * top + 1
        for c in classes:
            w[c] = w[c] * base + row[c]
    return w


def _weights(tree: RootedBinaryTree, liftable: bool) -> dict:
    classes = enumerate_topsets(tree)
    n = tree.n_leaves
    if n <= 3:
        return {c: 0 for c in classes}
    v = _tfp_node(tree)
    if v is None:
        # cluster tree: order via deleting the root; ties on the stripped
        # image break on the root-marked factors, again in the inner order.
        rho = tree.root
        inner = _delete_root(tree)
        w_inner = _weights(inner, True)
        int_inner = _interior_set(inner)
        r1 = {c: w_inner[c & int_inner] for c in classes}
        r2 = {c: 1 if rho in c else 0 for c in classes}
        r3 = {c: w_inner[c & int_inner] if rho in c else 0 for c in classes}
        return _collapse([r1, r2, r3], classes)

    t1, t2 = _split_at(tree, v)
    w1 = _weights(t1, False)
    w2 = _weights(t2, False)
    int1, int2 = _interior_set(t1), _interior_set(t2)
    base = {c: w1[c & int1] + w2[c & int2] for c in classes}
    quad = _quad_row(tree, v, t1, t2, classes, liftable)
    rows = [base, quad]
    if liftable:
        # block order first: non-traversable columns beat traversable ones.
        tag = {
            c: 0 if traversability(tree, c)["root_leaf_traversable"] else 1
            for c in classes
        }
        rows.insert(0, tag)
    return _collapse(rows, classes)


def _quad_row(tree, v, t1, t2, classes, liftable) -> dict:
    """Diagonal tie-break for the 2x2 minors: rank(row) * rank(col), ranks
    taken inside each shared-node block.  In the liftable (bicluster) case
    root-augmentable classes of either half rank first, realizing the 2^(i+j)
    style choice of leading minors."""

    def ranks(half, half_classes):
        def key(c):
            bits = topset_to_vector(half, c).bitstring
            if liftable:
                aug = traversability(half, c)["root_augmentable"]
                return (0 if aug else 1, bits)
            return bits

        table = {}
        for coord in (False, True):
            block = sorted((c for c in half_classes if (v in c) == coord), key=key)
            for i, c in enumerate(block, start=1):
                table[c] = i
        return table

    rank1 = ranks(t1, enumerate_topsets(t1))
    rank2 = ranks(t2, enumerate_topsets(t2))
    int1, int2 = _interior_set(t1), _interior_set(t2)
    return {c: rank1[c & int1] * rank2[c & int2] for c in classes}


# -- public construction -----------------------------------------------------------


def construct_generators(tree: RootedBinaryTree):
    """The recursive quadratic generating set with order-derived markings.

    Returns (generators, order).  Every generator is a kernel member of
    degree 2; the markings come from the constructed liftable order and are
    certified separately by groebner_verify.
    """
    if tree.n_leaves < 2:
        raise TreeError("need n >= 2")
    classes = enumerate_topsets(tree)
    key_of = {c: topset_to_vector(tree, c).bitstring for c in classes}
    weights = _weights(tree, False)
    if is_cluster_tree(tree):
        kind = "augmentable"
        tag = {
            key_of[c]: (
                "augmentable"
                if traversability(tree, c)["root_augmentable"]
                else "non_augmentable"
            )
            for c in classes
        }
    else:
        kind = "traversable"
        tag = {
            key_of[c]: (
                "traversable"
                if traversability(tree, c)["root_leaf_traversable"]
                else "non_traversable"
            )
            for c in classes
        }
    order = LiftableOrder({key_of[c]: weights[c] for c in classes}, tag, kind)

    gens = []
    for plus_pair, minus_pair, prov in _generators_raw(tree):
        plus = tuple(sorted(key_of[c] for c in plus_pair))
        minus = tuple(sorted(key_of[c] for c in minus_pair))
        if order.compare(plus, minus) < 0:
            plus, minus = minus, plus
        gens.append(MarkedBinomial(plus, minus, prov))
    gens.sort(key=lambda b: (b.plus, b.minus))
    return gens, order


# -- Gröbner certification ----------------------------------------------------------


_REDUCTION_CAP = 10_000


def _normal_form(mono: Counter, rules) -> tuple:
    steps = 0
    changed = True
    while changed:
        changed = False
        for plus, minus in rules:
            if all(mono[k] >= c for k, c in plus.items()):
                mono = mono - plus + minus
                steps += 1
                if steps > _REDUCTION_CAP:
                    raise _ReductionDiverged()
                changed = True
                break
    return tuple(sorted(mono.elements()))


class _ReductionDiverged(Exception):
    pass


def groebner_verify(matrix: ToricMatrix, gens) -> bool:
    """Marked Buchberger criterion: markings must be squarefree kernel
    binomials and every S-pair must reduce to zero under marked rewriting.
    A diverging reduction (possible only for markings inconsistent with any
    term order) counts as failure."""
    for g in gens:
        if g.initial not in ("plus", "minus"):
            raise TreeError("generator without a marked initial term")
        if not kernel_member(matrix, g):
            return False
        if len(g.plus) != len(g.minus):
            return False
        if not g.initial_squarefree():
            return False
    rules = []
    for g in gens:
        ini, tail = (g.plus, g.minus) if g.initial == "plus" else (g.minus, g.plus)
        rules.append((Counter(ini), Counter(tail)))
    try:
        for (p1, m1), (p2, m2) in combinations_with_replacement(rules, 2):
            lcm = p1 | p2
            u = lcm - p1 + m1
            w = lcm - p2 + m2
            if _normal_form(u, rules) != _normal_form(w, rules):
                return False
    except _ReductionDiverged:
        return False
    return True


def reducedness_report(gens) -> dict:
    """Whether the marked basis is reduced: no term of any generator may be
    divisible by another generator's initial term.  Reported, not asserted;
    the construction makes no reducedness claim."""
    initials = []
    for g in gens:
        ini = g.plus if g.initial == "plus" else g.minus
        initials.append((g, Counter(ini)))
    offenders = []
    for g in gens:
        for term in (g.plus, g.minus):
            cm = Counter(term)
            for other, ini in initials:
                if other is g:
                    continue
                if all(cm[k] >= c for k, c in ini.items()):
                    offenders.append((g, other))
    return {"reduced": not offenders, "violations": len(offenders)}


def marking_consistent_with_weights(gens, order: LiftableOrder) -> bool:
    """Each marked initial must weakly dominate its tail under the exported
    weights (strictly unless the lexicographic tie-break decided)."""
    for g in gens:
        ini, tail = (g.plus, g.minus) if g.initial == "plus" else (g.minus, g.plus)
        wi = sum(order.weight[k] for k in ini)
        wt = sum(order.weight[k] for k in tail)
        if wi < wt:
            return False
        if wi == wt and sorted(ini) < sorted(tail):
            return False
    return True


def reduces_to_zero(binomial: MarkedBinomial, gens) -> bool:
    """Whether plus - minus reduces to 0 against the marked basis."""
    rules = []
    for g in gens:
        ini, tail = (g.plus, g.minus) if g.initial == "plus" else (g.minus, g.plus)
        rules.append((Counter(ini), Counter(tail)))
    try:
        return _normal_form(Counter(binomial.plus), rules) == _normal_form(
            Counter(binomial.minus), rules
        )
    except _ReductionDiverged:
        return False


def fiber_connectivity(matrix: ToricMatrix, gens, degree_cap: int) -> bool:
    """Markov-style check: inside every fiber of total degree <= cap, the
    moves given by the generators connect all monomials."""
    if degree_cap > 4 and matrix.n_cols > 25:
        raise TreeError("degree cap too large for exhaustive fiber walks")
    moves = [(Counter(g.plus), Counter(g.minus)) for g in gens]
    for degree in range(1, degree_cap + 1):
        fibers = {}
        for mono in combinations_with_replacement(matrix.keys, degree):
            fibers.setdefault(matrix.monomial_sum(mono), []).append(mono)
        for monos in fibers.values():
            if len(monos) == 1:
                continue
            index = {m: i for i, m in enumerate(monos)}
            parent = list(range(len(monos)))

            def find(i):
                while parent[i] != i:
                    parent[i] = parent[parent[i]]
                    i = parent[i]
                return i

            for mono in monos:
                cm = Counter(mono)
                for a, b in moves:
                    for src, dst in ((a, b), (b, a)):
                        if all(cm[k] >= c for k, c in src.items()):
                            target = tuple(sorted((cm - src + dst).elements()))
                            ri, rj = find(index[mono]), find(index[target])
                            if ri != rj:
                                parent[ri] = rj
            roots = {find(i) for i in range(len(monos))}
            if len(roots) > 1:
                return False
    return True
