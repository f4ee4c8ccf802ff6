"""Restricted sumsets, robust cardinality bounds, almost-group recovery,
and the convexity-gap experiment."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DomainError, GroupTooLarge
from .groups import FiniteAbelianGroup


def restricted_sumset(
    A: Sequence,
    B: Sequence,
    pairs: Optional[Sequence[tuple[int, int]]] = None,
    op: str = "add",
    group: Optional[FiniteAbelianGroup] = None,
) -> set:
    """{a op b : (a, b) in Gamma}; Gamma defaults to the full product."""
    A, B = list(A), list(B)
    if pairs is None:
        pairs = [(i, j) for i in range(len(A)) for j in range(len(B))]
    out = set()
    for i, j in pairs:
        a, b = A[i], B[j]
        if group is not None:
            out.add(group.add(a, b))
        elif op == "add":
            out.add(a + b)
        elif op == "multiply":
            out.add(a * b)
        else:
            raise ValueError(f"unknown op {op!r}")
    return out


def difference_set(A: Sequence, B: Sequence) -> set:
    return {a - b for a in A for b in B}


@dataclass(frozen=True)
class SumsetBoundReport:
    r: int
    s: int
    delta: Fraction
    observed: int
    slack_constant: int  # 2 additive, 4 multiplicative

    @property
    def holds(self) -> bool:
        """observed >= r + s - c - 2*sqrt(2 delta r s), decided exactly by
        squaring the radical."""
        gap = self.r + self.s - self.slack_constant - self.observed
        if gap <= 0:
            return True
        return Fraction(gap) ** 2 <= 8 * self.delta * self.r * self.s

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "s": self.s,
            "delta": str(self.delta),
            "observed": self.observed,
            "slack_constant": self.slack_constant,
            "holds": self.holds,
        }


def sumset_bound_check(
    U: Sequence,
    V: Sequence,
    pairs: Optional[Sequence[tuple[int, int]]] = None,
    mode: str = "additive",
) -> SumsetBoundReport:
    """The robust lower bounds |U +_G V| >= r + s - 2 - 2 sqrt(2 d r s)
    (additive reals) and >= r + s - 4 - ... (multiplicative nonzero reals)."""
    U, V = list(U), list(V)
    r, s = len(U), len(V)
    if len(set(U)) != r or len(set(V)) != s:
        raise ValueError("input sets must not repeat elements")
    if mode == "additive":
        op, c = "add", 2
    elif mode == "multiplicative":
        if any(u == 0 for u in U) or any(v == 0 for v in V):
            raise DomainError("multiplicative mode excludes zero")
        op, c = "multiply", 4
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if pairs is None:
        pairs = [(i, j) for i in range(r) for j in range(s)]
    observed = len(restricted_sumset(U, V, pairs, op))
    delta = 1 - Fraction(len(set(pairs)), r * s)
    return SumsetBoundReport(r, s, delta, observed, c)


# -- almost-group recovery ----------------------------------------------------


@dataclass(frozen=True)
class RecoveryResult:
    subgroup: frozenset
    x: tuple[int, ...]
    y: tuple[int, ...]
    sym_diff_a: int
    sym_diff_b: int
    sym_diff_c: int

    @property
    def max_sym_diff(self) -> int:
        return max(self.sym_diff_a, self.sym_diff_b, self.sym_diff_c)

    def within_7k(self, K: int) -> bool:
        return self.max_sym_diff <= 7 * K

    def to_json_dict(self) -> dict:
        return {
            "subgroup_order": len(self.subgroup),
            "x": list(self.x),
            "y": list(self.y),
            "sym_diffs": [self.sym_diff_a, self.sym_diff_b, self.sym_diff_c],
            "max_sym_diff": self.max_sym_diff,
        }


def almost_group_recover(
    group: FiniteAbelianGroup,
    A: Sequence,
    B: Sequence,
    C: Sequence,
) -> RecoveryResult:
    """The (H, x, y) minimizing max(|A ^ (x+H)|, |B ^ (y+H)|, |C ^ (x+y+H)|)
    over the full subgroup lattice (exhaustive for |G| <= 10^4)."""
    if group.order > 10_000:
        raise GroupTooLarge("exhaustive recovery limited to order <= 10^4")
    A, B, C = set(A), set(B), set(C)
    best: Optional[RecoveryResult] = None
    subgroups = group.subgroups()
    sizes = (len(A), len(B), len(C))
    # try subgroups whose order is closest to the set sizes first
    subgroups.sort(key=lambda h: (max(abs(len(h) - s) for s in sizes), -len(h)))
    for H in subgroups:
        lower = max(abs(len(H) - s) for s in sizes)
        if best is not None and lower >= best.max_sym_diff:
            continue
        labels = {}

        def label(g):
            if g not in labels:
                labels[g] = group.coset_label(g, H)
            return labels[g]

        def tally(S):
            out: dict = {}
            for g in S:
                lg = label(g)
                out[lg] = out.get(lg, 0) + 1
            return out

        ta, tb, tc = tally(A), tally(B), tally(C)
        coset_reps = sorted({label(g) for g in group.elements()})
        sym = lambda S, t, rep: len(S) + len(H) - 2 * t.get(rep, 0)
        for rx in coset_reps:
            sa = sym(A, ta, rx)
            if best is not None and sa >= best.max_sym_diff:
                continue
            for ry in coset_reps:
                sb = sym(B, tb, ry)
                sc = sym(C, tc, label(group.add(rx, ry)))
                m = max(sa, sb, sc)
                if best is None or m < best.max_sym_diff:
                    best = RecoveryResult(H, rx, ry, sa, sb, sc)
    return best


# -- convexity-gap experiment ----------------------------------------------------


@dataclass(frozen=True)
class ConvexityGapStats:
    n: int
    diff_size: int
    f_diff_size: int

    @property
    def ratio(self) -> float:
        if self.n == 0:
            return 0.0
        return max(self.diff_size, self.f_diff_size) / self.n**1.25

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "diff_size": self.diff_size,
            "f_diff_size": self.f_diff_size,
            "ratio_to_n_5_4": self.ratio,
        }


def convexity_gap_experiment(A: Sequence, f_spec) -> ConvexityGapStats:
    """Exact |A - A| and |f(A) - f(A)| for a piecewise strictly convex map.

    f_spec is ("square",) for x -> x**2 or ("log_ratio", a, b) for
    x -> log((x+a)/(x+b)); in the latter case two differences agree exactly
    when the cross ratio (x+a)(y+b) / ((x+b)(y+a)) agrees, so the count is
    exact rational arithmetic without evaluating any logarithm.  Points
    where the map is undefined are dropped, following the convention
    f(A) = {f(x) : x in A, f(x) defined}.
    """
    A = sorted(set(Fraction(x) for x in A))
    n = len(A)
    diff = {x - y for x in A for y in A}
    kind = f_spec[0]
    if kind == "square":
        vals = sorted({x * x for x in A})
        fdiff = {u - v for u in vals for v in vals}
        return ConvexityGapStats(n, len(diff), len(fdiff))
    if kind == "log_ratio":
        a, b = Fraction(f_spec[1]), Fraction(f_spec[2])
        if a == b:
            raise DomainError("log ratio needs distinct shifts")
        dom = [x for x in A if x != -a and x != -b and (x + a) * (x + b) > 0]
        keys = set()
        for x in dom:
            for y in dom:
                keys.add(((x + a) * (y + b)) / ((x + b) * (y + a)))
        return ConvexityGapStats(n, len(diff), len(keys))
    raise ValueError(f"unknown map spec {f_spec!r}")


def ruzsa_triangle_holds(U: Sequence, V: Sequence, W: Sequence) -> bool:
    """|U| |V - W| <= |U - V| |U - W|."""
    U, V, W = set(U), set(V), set(W)
    return len(U) * len(difference_set(V, W)) <= len(difference_set(U, V)) * len(
        difference_set(U, W)
    )
