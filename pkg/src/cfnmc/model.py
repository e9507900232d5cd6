"""Numeric two-state clock model: leaf distributions, the sign transform,
and vanishing of the constructed binomials on model points.

States live in Z_2 and transitions along an edge of length t have matrix
[[(1+e^{-2at})/2, (1-e^{-2at})/2], [(1-e^{-2at})/2, (1+e^{-2at})/2]].  Node
heights (root highest, leaves at 0) make the clock constraint structural.
The sign (Hadamard) transform diagonalizes the model into the monomial
parametrization whose kernel the ideal module constructs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .paths import EvenLabeling, topset_of_labeling, topset_to_vector
from .tree import RootedBinaryTree, TreeError


@dataclass(frozen=True)
class ClockParams:
    """Rate alpha and a height per interior node, strictly decreasing toward
    the leaves (leaves sit at height 0), so every root-to-leaf distance is
    the same by construction."""

    alpha: float
    heights: dict

    def validate(self, tree: RootedBinaryTree) -> None:
        if self.alpha <= 0:
            raise TreeError("alpha must be positive")
        for v in tree.interior_nodes:
            h = self.heights[v]
            if h <= 0:
                raise TreeError("interior heights must be positive")
            for k in tree.children(v):
                hk = 0.0 if tree.is_leaf(k) else self.heights[k]
                if h - hk <= 0:
                    raise TreeError("branch lengths must be positive")

    def branch_length(self, tree: RootedBinaryTree, child: int) -> float:
        h_parent = self.heights[tree.parent(child)]
        h_child = 0.0 if tree.is_leaf(child) else self.heights[child]
        return h_parent - h_child


def sample_clock_params(tree: RootedBinaryTree, rng: random.Random) -> ClockParams:
    """Root height uniform in [0.5, 2]; each lower node uniform below its
    parent (clamped away from degenerate branches); alpha = 1."""
    heights = {}
    for v in tree.interior_nodes:  # preorder: parents first
        p = tree.parent(v)
        if p is None:
            heights[v] = rng.uniform(0.5, 2.0)
        else:
            heights[v] = heights[p] * rng.uniform(0.05, 0.95)
    return ClockParams(1.0, heights)


@dataclass(frozen=True)
class LeafDistribution:
    probs: dict  # leaf labeling tuple -> probability


@dataclass(frozen=True)
class FourierPoint:
    qhat: dict  # even labeling tuple -> value
    rcoords: dict  # top-vector bitstring -> value


def leaf_distribution(tree: RootedBinaryTree, params: ClockParams) -> LeafDistribution:
    """Exact marginal over hidden interior states with a uniform root.

    Computed by the usual pruning factorization of the full sum over the
    2^(n-1) interior labelings.
    """
    params.validate(tree)
    trans = {}
    for v in tree.nodes():
        if v == tree.root:
            continue
        t = params.branch_length(tree, v)
        same = (1.0 + math.exp(-2.0 * params.alpha * t)) / 2.0
        trans[v] = (same, 1.0 - same)

    leaves = tree.leaves
    probs = {}
    for assignment in _all_labelings(tree.n_leaves):
        state = dict(zip(leaves, assignment))

        def below(v, s):
            # probability of the observed leaves under v given state s at v
            total = 1.0
            for k in tree.children(v):
                same, diff = trans[k]
                if tree.is_leaf(k):
                    total *= same if state[k] == s else diff
                else:
                    p0 = below(k, 0)
                    p1 = below(k, 1)
                    total *= (same * p0 + diff * p1) if s == 0 else (diff * p0 + same * p1)
            return total

        probs[assignment] = 0.5 * (below(tree.root, 0) + below(tree.root, 1))
    return LeafDistribution(probs)


def _all_labelings(n: int):
    return [tuple((mask >> i) & 1 for i in range(n - 1, -1, -1)) for mask in range(2 ** n)]


def leaf_distribution_bruteforce(tree: RootedBinaryTree, params: ClockParams) -> LeafDistribution:
    """Literal sum over all interior labelings; test oracle for the pruning."""
    params.validate(tree)
    trans = {}
    for v in tree.nodes():
        if v == tree.root:
            continue
        t = params.branch_length(tree, v)
        same = (1.0 + math.exp(-2.0 * params.alpha * t)) / 2.0
        trans[v] = (same, 1.0 - same)
    leaves = tree.leaves
    interior = tree.interior_nodes
    probs = {}
    for assignment in _all_labelings(tree.n_leaves):
        total = 0.0
        for mask in range(2 ** len(interior)):
            state = dict(zip(leaves, assignment))
            for i, v in enumerate(interior):
                state[v] = (mask >> i) & 1
            term = 0.5
            for v in tree.nodes():
                if v == tree.root:
                    continue
                same, diff = trans[v]
                term *= same if state[v] == state[tree.parent(v)] else diff
            total += term
        probs[assignment] = total
    return LeafDistribution(probs)


def fourier_transform(
    tree: RootedBinaryTree, dist: LeafDistribution, tol: float = 1e-9
) -> FourierPoint:
    """Sign transform q(g) = sum_j (-1)^(g.j) p(j); odd-sum entries must
    vanish and labelings sharing a top-set must agree, within tol, before
    collapsing onto the class coordinates."""
    n = tree.n_leaves
    values = [dist.probs[lab] for lab in _all_labelings(n)]
    # fast in-place sign transform
    h = 1
    while h < len(values):
        for i in range(0, len(values), h * 2):
            for j in range(i, i + h):
                a, b = values[j], values[j + h]
                values[j], values[j + h] = a + b, a - b
        h *= 2
    qhat = dict(zip(_all_labelings(n), values))
    for lab, val in qhat.items():
        if sum(lab) % 2 == 1 and abs(val) > tol:
            raise TreeError(f"odd-parity transform entry {lab} = {val} exceeds tol")
    rcoords = {}
    for lab, val in qhat.items():
        if sum(lab) % 2 == 1:
            continue
        topset = topset_of_labeling(tree, EvenLabeling(lab))
        key = topset_to_vector(tree, topset).bitstring
        if key in rcoords and abs(rcoords[key] - val) > tol:
            raise TreeError(
                f"labelings with equal top-set disagree: {key}: "
                f"{rcoords[key]} vs {val}"
            )
        rcoords.setdefault(key, val)
    return FourierPoint(qhat, rcoords)


def class_monomial_value(tree: RootedBinaryTree, params: ClockParams, key: str) -> float:
    """Independent evaluation of a class coordinate as the product of
    exp(-4 * alpha * height) over the marked nodes (the per-node parameters
    the clock condition induces)."""
    val = 1.0
    for bit, v in zip(key, tree.interior_nodes):
        if bit == "1":
            val *= math.exp(-4.0 * params.alpha * params.heights[v])
    return val


def invariant_check(
    tree: RootedBinaryTree,
    gens,
    samples: int = 100,
    seed: int = 0,
    tol: float = 1e-9,
) -> dict:
    """Evaluate each binomial on the class coordinates of random clock
    parameter draws; all residuals must stay below tol."""
    rng = random.Random(seed)
    per_binomial = [0.0] * len(gens)
    for _ in range(samples):
        params = sample_clock_params(tree, rng)
        point = fourier_transform(tree, leaf_distribution(tree, params), tol=tol).rcoords
        for i, g in enumerate(gens):
            plus = 1.0
            for k in g.plus:
                plus *= point[k]
            minus = 1.0
            for k in g.minus:
                minus *= point[k]
            per_binomial[i] = max(per_binomial[i], abs(plus - minus))
    report = {
        "samples": samples,
        "seed": seed,
        "tol": tol,
        "binomials": [
            {
                "plus": list(g.plus),
                "minus": list(g.minus),
                "max_residual": per_binomial[i],
                "pass": per_binomial[i] <= tol,
            }
            for i, g in enumerate(gens)
        ],
        "max_residual": max(per_binomial, default=0.0),
    }
    report["pass"] = all(b["pass"] for b in report["binomials"])
    return report
