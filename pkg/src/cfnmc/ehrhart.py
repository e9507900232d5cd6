"""Lattice-point counting, Ehrhart interpolation, volume, and NNI audits.

Counts are exact: the box scan uses int64 vectorization whose intermediate
magnitudes are provably far below overflow (coefficients at most 2, dilates
at most ~10, dimensions at most ~10), and interpolation runs in Fractions.
The vertex-sum counter is the independent second method, justified by
normality of the polytope.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

import numpy as np

from .paths import classify_maintaining, enumerate_topsets, is_blocked, topset_to_vector
from .polytope import Polytope, build_RT
from .tree import NniTriple, RootedBinaryTree, TreeError, apply_nni


@dataclass(frozen=True)
class EhrhartPolynomial:
    """Exact coefficients, ascending degree; i(0) = 1 for a lattice polytope."""

    coefficients: tuple

    def __call__(self, m: int) -> int:
        val = sum(c * Fraction(m) ** k for k, c in enumerate(self.coefficients))
        if val.denominator != 1:
            raise ValueError(f"non-integer Ehrhart value at m={m}")
        return int(val)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def normalized_volume(self) -> int:
        lead = self.coefficients[-1] * factorial(self.degree)
        if lead.denominator != 1 or lead <= 0:
            raise ValueError("leading coefficient times dim! must be a positive integer")
        return int(lead)

    def h_star_vector(self) -> tuple:
        """Numerator coefficients of the rational generating function; they
        are nonnegative integers summing to the normalized volume."""
        d = self.degree
        out = []
        for j in range(d + 1):
            val = sum(
                (-1) ** (j - i) * _binom(d + 1, j - i) * self(i)
                for i in range(j + 1)
            )
            out.append(val)
        return tuple(out)

    def as_strings(self) -> list:
        return [str(c) for c in self.coefficients]


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def count_lattice_points(polytope: Polytope, m: int) -> int:
    """#(Z^dim intersect m * P) by scanning the integer box [0, m]^dim.

    Requires P to be a 0/1 polytope presented by its H-representation, which
    holds for every R_T here.  Exact: all intermediate values fit easily in
    int64 (|coeffs| <= 2, dim <= ~10, m <= ~10).
    """
    if m < 0:
        raise TreeError("dilate must be nonnegative")
    if not polytope.facets:
        raise TreeError("polytope has no H-representation")
    if m == 0:
        return 1
    d = polytope.dim
    ineqs = polytope.inequalities
    A = np.array([f.coeffs for f in ineqs], dtype=np.int64)
    b = np.array([f.rhs for f in ineqs], dtype=np.int64) * m
    pows = (m + 1) ** np.arange(d, dtype=np.int64)
    total = (m + 1) ** d
    count = 0
    chunk = 1 << 20
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        X = (idx[:, None] // pows[None, :]) % (m + 1)
        ok = (X @ A.T <= b[None, :]).all(axis=1)
        for e in polytope.equalities:
            c = np.array(e.coeffs, dtype=np.int64)
            ok &= X @ c == e.rhs * m
        count += int(ok.sum())
    return count


def count_by_vertex_sums(polytope: Polytope, m: int) -> int:
    """Independent counter: by normality, the lattice points of m*P are
    exactly the sums of m vertices (the zero vertex pads short sums)."""
    if m == 0:
        return 1
    pts = set()
    for combo in combinations_with_replacement(polytope.vertices, m):
        pts.add(tuple(map(sum, zip(*combo))))
    return len(pts)


def ehrhart_polynomial(polytope: Polytope) -> EhrhartPolynomial:
    """Exact interpolation through m = 0..dim, verified at m = dim + 1."""
    d = polytope.dim
    counts = [count_lattice_points(polytope, m) for m in range(d + 2)]
    coeffs = _lagrange(list(range(d + 1)), counts[: d + 1])
    poly = EhrhartPolynomial(tuple(coeffs))
    if poly(d + 1) != counts[d + 1]:
        raise ValueError(
            "interpolation failed its out-of-sample check; counting bug"
        )
    return poly


def _lagrange(xs, ys):
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            denom *= xi - xj
            new = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                new[k] -= c * xj
                new[k + 1] += c
            basis = new
        for k, c in enumerate(basis):
            coeffs[k] += Fraction(yi) * c / denom
    return coeffs


def normalized_volume(polytope: Polytope) -> int:
    return ehrhart_polynomial(polytope).normalized_volume


def euler_zigzag(n: int) -> int:
    """E_n, the number of alternating permutations: 1, 1, 1, 2, 5, 16, 61, ...
    computed by the boustrophedon recurrence."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    row = [1]
    for k in range(1, n + 1):
        new = [0] * (k + 1)
        for i in range(1, k + 1):
            new[i] = new[i - 1] + row[k - i]
        row = new
    return row[-1] if n > 0 else 1


def fibonacci(n: int) -> int:
    """F_n with F_0 = F_1 = 1."""
    a, b = 1, 1
    for _ in range(n):
        a, b = b, a + b
    return a


# -- NNI dilate checks ----------------------------------------------------------


def nni_count_check(tree: RootedBinaryTree, triple: NniTriple, m: int) -> dict:
    """Dilate counts of R_T and R_T' for an NNI-adjacent pair."""
    if m < 1:
        raise TreeError("dilate must be >= 1")
    other = apply_nni(tree, triple)
    c1 = count_lattice_points(build_RT(tree), m)
    c2 = count_lattice_points(build_RT(other), m)
    return {"countT": c1, "countT2": c2, "equal": c1 == c2}


def _is_df_compressed(tree, triple, topsets) -> bool:
    """A representation is d-compressed when either every summand avoiding
    b and c has d blocked, or every summand marking b is maintaining;
    f-compressed is the mirror image with c and f.  Minimal representations
    are always both."""
    b, c, e = triple.b, triple.c, triple.e
    d = tree.sibling(e)
    f = tree.sibling(c)
    other = apply_nni(tree, triple)

    def maintaining(s):
        return classify_maintaining(tree, other, triple, s)[0]

    plain = [s for s in topsets if b not in s and c not in s]
    d_ok = all(is_blocked(tree, s, d) for s in plain) or all(
        maintaining(s) for s in topsets if b in s
    )
    f_ok = all(is_blocked(tree, s, f) for s in plain) or all(
        maintaining(s) for s in topsets if c in s
    )
    return d_ok and f_ok


def df_compression_audit(tree: RootedBinaryTree, triple: NniTriple, m: int) -> dict:
    """For every lattice point of m*R_T, enumerate all representations as
    sums of m vertices, pick one minimizing the number of nonmaintaining
    summands, and check it is df-compressed.  Exponential; meant for m <= 3.
    """
    if m > 3:
        raise TreeError("audit is exhaustive; use m <= 3")
    other = apply_nni(tree, triple)
    topsets = enumerate_topsets(tree)
    vec = {s: topset_to_vector(tree, s).bits for s in topsets}

    def n_nonmaintaining(rep):
        return sum(
            0 if classify_maintaining(tree, other, triple, s)[0] else 1 for s in rep
        )

    reps_of = {}
    for rep in combinations_with_replacement(topsets, m):
        point = tuple(map(sum, zip(*(vec[s] for s in rep))))
        reps_of.setdefault(point, []).append(rep)
    audited = 0
    max_nonmaintaining = 0
    for point, reps in reps_of.items():
        best = min(reps, key=n_nonmaintaining)
        max_nonmaintaining = max(max_nonmaintaining, n_nonmaintaining(best))
        if not _is_df_compressed(tree, triple, best):
            return {
                "points": len(reps_of),
                "all_compressed": False,
                "counterexample": point,
            }
        audited += 1
    return {
        "points": audited,
        "all_compressed": True,
        "max_nonmaintaining_in_minimal": max_nonmaintaining,
    }
