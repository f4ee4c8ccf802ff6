"""Finite abelian groups as products of cyclic factors, with exhaustive
subgroup enumeration for the coset-recovery search."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import GroupTooLarge

SUBGROUP_SEARCH_LIMIT = 10_000


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z/n1 x ... x Z/nr with elements as integer tuples mod the factors."""

    factors: tuple[int, ...]

    def __post_init__(self):
        if not self.factors or any(f < 1 for f in self.factors):
            raise ValueError("factors must be positive integers")
        object.__setattr__(self, "factors", tuple(int(f) for f in self.factors))

    @property
    def order(self) -> int:
        n = 1
        for f in self.factors:
            n *= f
        return n

    def elements(self) -> list[tuple[int, ...]]:
        return [tuple(e) for e in product(*(range(f) for f in self.factors))]

    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.factors)

    def add(self, a, b) -> tuple[int, ...]:
        return tuple((x + y) % f for x, y, f in zip(a, b, self.factors))

    def neg(self, a) -> tuple[int, ...]:
        return tuple((-x) % f for x, f in zip(a, self.factors))

    def sub(self, a, b) -> tuple[int, ...]:
        return self.add(a, self.neg(b))

    def contains(self, a) -> bool:
        return len(a) == len(self.factors) and all(
            0 <= x < f for x, f in zip(a, self.factors)
        )

    def cyclic(self, g) -> frozenset:
        out = {self.zero()}
        cur = g
        while cur not in out:
            out.add(cur)
            cur = self.add(cur, g)
        return frozenset(out)

    def subgroup_sum(self, h1: frozenset, h2: frozenset) -> frozenset:
        return frozenset(self.add(a, b) for a in h1 for b in h2)

    def subgroups(self) -> list[frozenset]:
        """The full subgroup lattice: cyclic subgroups closed under sums.
        Guarded by the exhaustive-search order limit."""
        if self.order > SUBGROUP_SEARCH_LIMIT:
            raise GroupTooLarge(
                f"order {self.order} exceeds the search limit {SUBGROUP_SEARCH_LIMIT}"
            )
        if len(self.factors) == 1:
            # cyclic: one subgroup per divisor
            n = self.factors[0]
            out = []
            for d in range(1, n + 1):
                if n % d == 0:
                    step = n // d
                    out.append(frozenset((k * step,) for k in range(d)))
            return sorted(out, key=len)
        base = {self.cyclic(g) for g in self.elements()}
        subgroups = set(base)
        frontier = set(base)
        while frontier:
            new = set()
            for h in frontier:
                for b in base:
                    s = self.subgroup_sum(h, b)
                    if s not in subgroups:
                        new.add(s)
            subgroups |= new
            frontier = new
        out = sorted(subgroups, key=lambda h: (len(h), sorted(h)))
        for h in out:
            if self.order % len(h):
                raise AssertionError("subgroup order fails Lagrange divisibility")
        return out

    def coset_label(self, g, subgroup: frozenset) -> tuple[int, ...]:
        """Canonical representative (minimum element) of g + H."""
        return min(self.add(g, h) for h in subgroup)
