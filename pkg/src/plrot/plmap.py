"""Orientation-preserving piecewise-linear homeomorphisms of an interval.

A map is stored by its graph: a canonical node list ((x0,y0), ..., (xk,yk))
with x0 = y0 = lo, xk = yk = hi, both coordinate sequences strictly
increasing, and no three consecutive nodes collinear.  Maps act on the
right; f * g applies f first, so x(f*g) = (x f) g.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

from .field import FieldElement, Rat

Coord = Union[FieldElement, int, Fraction]
Node = tuple[FieldElement, FieldElement]


class PLMapError(ValueError):
    """Invalid node data or incompatible maps."""


class AmbientMismatchError(PLMapError):
    """Two maps live on different ambient intervals."""


def _as_element(value: Coord, d: Optional[int]) -> FieldElement:
    if isinstance(value, FieldElement):
        return value
    return FieldElement(value, 0, d if d is not None else 1)


def _collinear(p: Node, q: Node, r: Node) -> bool:
    return (r[1] - p[1]) * (q[0] - p[0]) == (q[1] - p[1]) * (r[0] - p[0])


class PLMap:
    """A piecewise-linear orientation-preserving bijection of [lo, hi]."""

    __slots__ = ("_nodes", "_xs")

    def __init__(self, nodes: Iterable[tuple[Coord, Coord]]) -> None:
        raw = list(nodes)
        if len(raw) < 2:
            raise PLMapError("a map needs at least the two ambient endpoint nodes")
        d: Optional[int] = None
        for x, y in raw:
            for c in (x, y):
                if isinstance(c, FieldElement) and not c.is_rational():
                    if d is not None and c.d != d:
                        raise PLMapError("nodes mix different quadratic fields")
                    d = c.d
        pts: list[Node] = [(_as_element(x, d), _as_element(y, d)) for x, y in raw]
        if pts[0][0] != pts[0][1]:
            raise PLMapError("first node must be the fixed lower endpoint (lo, lo)")
        if pts[-1][0] != pts[-1][1]:
            raise PLMapError("last node must be the fixed upper endpoint (hi, hi)")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if not x0 < x1:
                raise PLMapError("node x-coordinates must increase strictly")
            if not y0 < y1:
                raise PLMapError("node y-coordinates must increase strictly")
        # an interior node is a genuine breakpoint iff it is off the line of
        # its neighbours; the graph passes through every listed node, so the
        # sweep may drop all redundant nodes in one pass
        swept: list[Node] = [pts[0]]
        for i in range(1, len(pts) - 1):
            if _collinear(pts[i - 1], pts[i], pts[i + 1]):
                continue
            swept.append(pts[i])
        swept.append(pts[-1])
        object.__setattr__(self, "_nodes", tuple(swept))
        object.__setattr__(self, "_xs", tuple(p[0] for p in swept))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("PLMap is immutable")

    # -- basic accessors ---------------------------------------------------

    @property
    def nodes(self) -> tuple[Node, ...]:
        return self._nodes

    @property
    def lo(self) -> FieldElement:
        return self._nodes[0][0]

    @property
    def hi(self) -> FieldElement:
        return self._nodes[-1][0]

    @property
    def ambient(self) -> tuple[FieldElement, FieldElement]:
        return (self.lo, self.hi)

    def breakpoints(self) -> tuple[FieldElement, ...]:
        return tuple(x for x, _ in self._nodes[1:-1])

    def slopes(self) -> tuple[FieldElement, ...]:
        return tuple(
            (y1 - y0) / (x1 - x0)
            for (x0, y0), (x1, y1) in zip(self._nodes, self._nodes[1:])
        )

    def is_identity(self) -> bool:
        return len(self._nodes) == 2

    @classmethod
    def identity(cls, lo: Coord, hi: Coord) -> PLMap:
        return cls([(lo, lo), (hi, hi)])

    def same_ambient(self, other: PLMap) -> bool:
        return self.lo == other.lo and self.hi == other.hi

    def _require_same_ambient(self, other: PLMap) -> None:
        if not self.same_ambient(other):
            raise AmbientMismatchError(
                f"ambient intervals differ: [{self.lo}, {self.hi}] vs "
                f"[{other.lo}, {other.hi}]"
            )

    # -- evaluation ---------------------------------------------------------

    def _segment(self, x: FieldElement) -> int:
        i = bisect_right(self._xs, x) - 1
        if i >= len(self._xs) - 1:
            i = len(self._xs) - 2
        return i

    def __call__(self, x: Coord) -> FieldElement:
        x = _as_element(x, self._nodes[0][0].d)
        if x < self.lo or x > self.hi:
            raise PLMapError(f"point {x} outside ambient [{self.lo}, {self.hi}]")
        i = self._segment(x)
        (x0, y0), (x1, y1) = self._nodes[i], self._nodes[i + 1]
        if x == x0:
            return y0
        return y0 + (x - x0) * (y1 - y0) / (x1 - x0)

    def preimage(self, y: Coord) -> FieldElement:
        y = _as_element(y, self._nodes[0][0].d)
        if y < self.lo or y > self.hi:
            raise PLMapError(f"value {y} outside ambient [{self.lo}, {self.hi}]")
        ys = [p[1] for p in self._nodes]
        i = bisect_right(ys, y) - 1
        if i >= len(ys) - 1:
            i = len(ys) - 2
        (x0, y0), (x1, y1) = self._nodes[i], self._nodes[i + 1]
        if y == y0:
            return x0
        return x0 + (y - y0) * (x1 - x0) / (y1 - y0)

    # -- group structure -----------------------------------------------------

    def __mul__(self, other: PLMap) -> PLMap:
        """Composition, self first: x(self*other) = (x self) other."""
        if not isinstance(other, PLMap):
            return NotImplemented
        self._require_same_ambient(other)
        xs = set(self._xs)
        for u in other.breakpoints():
            xs.add(self.preimage(u))
        nodes = [(x, other(self(x))) for x in sorted(xs)]
        return PLMap(nodes)

    def __invert__(self) -> PLMap:
        return PLMap([(y, x) for x, y in self._nodes])

    def inverse(self) -> PLMap:
        return ~self

    def __pow__(self, n: int) -> PLMap:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (~self) ** (-n)
        out = PLMap.identity(self.lo, self.hi)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def conjugate_by(self, h: PLMap) -> PLMap:
        """self^h = h^-1 * self * h."""
        return (~h) * self * h

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PLMap):
            return NotImplemented
        return self._nodes == other._nodes

    def __hash__(self) -> int:
        return hash(self._nodes)

    # -- supports --------------------------------------------------------------

    def fixed_set(self) -> tuple[tuple[FieldElement, FieldElement], ...]:
        """Maximal closed intervals of fixed points (possibly degenerate)."""
        pieces: list[tuple[FieldElement, FieldElement]] = []
        for (x0, y0), (x1, y1) in zip(self._nodes, self._nodes[1:]):
            dx = x1 - x0
            dy = y1 - y0
            if dy == dx and y0 == x0:
                pieces.append((x0, x1))
                continue
            # solve y0 + (x - x0) * dy/dx = x  on [x0, x1]
            if dy == dx:
                continue  # parallel to the diagonal, off it
            x_star = (y0 * dx - x0 * dy) / (dx - dy)
            if x0 <= x_star <= x1:
                pieces.append((x_star, x_star))
        merged: list[list[FieldElement]] = []
        for a, b in pieces:
            if merged and a <= merged[-1][1]:
                if b > merged[-1][1]:
                    merged[-1][1] = b
            else:
                merged.append([a, b])
        return tuple((a, b) for a, b in merged)

    def support(self) -> IntervalSet:
        """Maximal open intervals where the map moves points."""
        fixed = self.fixed_set()
        out: list[tuple[FieldElement, FieldElement]] = []
        for (_, b), (c, _) in zip(fixed, fixed[1:]):
            if b < c:
                out.append((b, c))
        return IntervalSet(out)

    def orbitals(self) -> tuple[tuple[FieldElement, FieldElement], ...]:
        return self.support().intervals

    def is_bump(self) -> bool:
        return len(self.orbitals()) == 1

    def project(self, domain: IntervalSet) -> PLMap:
        """Agree with self on `domain`, identity elsewhere.

        `domain` must be a union of orbitals and fixed regions: every orbital
        is either contained in a component of `domain` or disjoint from all
        of them.
        """
        for a, b in domain.intervals:
            if a < self.lo or b > self.hi:
                raise PLMapError("projection domain leaves the ambient interval")
        kept: list[tuple[FieldElement, FieldElement]] = []
        for u, v in self.orbitals():
            if domain.contains_interval(u, v):
                kept.append((u, v))
            elif domain.meets_interval(u, v):
                raise PLMapError("projection domain cuts through an orbital")
        nodes: list[Node] = [(self.lo, self.lo)]
        for u, v in kept:
            nodes.append((u, u))
            for x, y in self._nodes:
                if u < x < v:
                    nodes.append((x, y))
            nodes.append((v, v))
        nodes.append((self.hi, self.hi))
        dedup: list[Node] = []
        for pt in nodes:
            if not dedup or pt[0] > dedup[-1][0]:
                dedup.append(pt)
        return PLMap(dedup)

    def restricted_to_orbital(self, u: Coord, v: Coord) -> PLMap:
        return self.project(IntervalSet([(u, v)]))

    def rescaled(self, lo: Coord, hi: Coord) -> PLMap:
        """Conjugate by the affine bijection [self.lo, self.hi] -> [lo, hi].

        Rotation numbers and all order data are invariant under this change
        of coordinates.
        """
        d = self.lo.d
        lo = _as_element(lo, d)
        hi = _as_element(hi, d)
        if not lo < hi:
            raise PLMapError("target interval is empty")
        scale = (hi - lo) / (self.hi - self.lo)
        shift = lo - self.lo * scale
        return PLMap(
            [(x * scale + shift, y * scale + shift) for x, y in self._nodes]
        )

    def linear_on(
        self, a: FieldElement, b: FieldElement
    ) -> Optional[tuple[FieldElement, FieldElement]]:
        """(slope, intercept) if the graph is a single line over [a, b]."""
        if not (self.lo <= a < b <= self.hi):
            return None
        for x in self.breakpoints():
            if a < x < b:
                return None
        ya, yb = self(a), self(b)
        slope = (yb - ya) / (b - a)
        return slope, ya - slope * a

    def __str__(self) -> str:
        pts = ", ".join(f"({x}, {y})" for x, y in self._nodes)
        return f"pl {{ ambient = [{self.lo}, {self.hi}]; nodes = [{pts}] }}"

    def __repr__(self) -> str:
        return f"PLMap({self})"


def commutator(f: PLMap, g: PLMap) -> PLMap:
    """[f, g] = f^-1 g^-1 f g."""
    return (~f) * (~g) * f * g


def conjugate(f: PLMap, g: PLMap) -> PLMap:
    """f^g = g^-1 f g."""
    return f.conjugate_by(g)


@dataclass(frozen=True)
class IntervalSet:
    """A sorted union of disjoint open intervals with exact endpoints.

    Touching intervals are kept separate: (0,1/2) and (1/2,1) form two
    components because the shared endpoint is not in the union.
    """

    intervals: tuple[tuple[FieldElement, FieldElement], ...]

    def __init__(self, intervals: Iterable[tuple[Coord, Coord]] = ()) -> None:
        pairs: list[tuple[FieldElement, FieldElement]] = []
        for a, b in intervals:
            a = _as_element(a, a.d if isinstance(a, FieldElement) else None)
            b = _as_element(b, b.d if isinstance(b, FieldElement) else None)
            if not a < b:
                raise PLMapError(f"empty or reversed interval ({a}, {b})")
            pairs.append((a, b))
        pairs.sort(key=lambda ab: (ab[0], ab[1]))
        merged: list[list[FieldElement]] = []
        for a, b in pairs:
            if merged and a < merged[-1][1]:
                if b > merged[-1][1]:
                    merged[-1][1] = b
            else:
                merged.append([a, b])
        object.__setattr__(self, "intervals", tuple((a, b) for a, b in merged))

    @classmethod
    def empty(cls) -> IntervalSet:
        return cls(())

    def is_empty(self) -> bool:
        return not self.intervals

    def __iter__(self) -> Iterator[tuple[FieldElement, FieldElement]]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __contains__(self, x: Coord) -> bool:
        return any(a < x < b for a, b in self.intervals)

    def union(self, other: IntervalSet) -> IntervalSet:
        return IntervalSet(list(self.intervals) + list(other.intervals))

    def meets_interval(self, a: Coord, b: Coord) -> bool:
        return any(u < b and a < v for u, v in self.intervals)

    def meets(self, other: IntervalSet) -> bool:
        return any(self.meets_interval(a, b) for a, b in other.intervals)

    def contains_interval(self, a: Coord, b: Coord) -> bool:
        return any(u <= a and b <= v for u, v in self.intervals)

    def contains(self, other: IntervalSet) -> bool:
        return all(self.contains_interval(a, b) for a, b in other.intervals)

    def contains_closure_of(self, other: IntervalSet) -> bool:
        """Closed components of `other` sit strictly inside components of self."""
        return all(
            any(u < a and b < v for u, v in self.intervals)
            for a, b in other.intervals
        )

    def image(self, f: PLMap) -> IntervalSet:
        return IntervalSet([(f(a), f(b)) for a, b in self.intervals])

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"
        return " u ".join(f"({a}, {b})" for a, b in self.intervals)


def group_support(maps: Sequence[PLMap]) -> IntervalSet:
    """Union of the supports of the maps: the orbitals of the group they generate."""
    out = IntervalSet.empty()
    for m in maps:
        out = out.union(m.support())
    return out
