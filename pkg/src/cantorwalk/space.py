"""Exact one-dimensional geometry.

Compact subsets of the line are finite unions of closed rational intervals,
optionally carrying an iterated-function-system descriptor that marks them as
the depth-d approximation of a self-similar Cantor set.  Regions are finite
unions of open/half-open/closed rational intervals intersected with such a
set; every membership and inclusion query is exact.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from .rational import rat


class SpaceError(ValueError):
    pass


# ---------------------------------------------------------------------------
# iterated function systems


@dataclass(frozen=True)
class Ifs:
    """Finitely many increasing affine contractions x -> ratio*x + offset.

    Maps are ordered left to right; their images of the convex hull must be
    disjoint.  ``symbols`` name the maps and form the address alphabet.
    """

    ratios: tuple[Fraction, ...]
    offsets: tuple[Fraction, ...]
    symbols: tuple[str, ...]

    def __post_init__(self):
        if not (len(self.ratios) == len(self.offsets) == len(self.symbols)):
            raise SpaceError("IFS component lists must have equal length")
        if len(self.ratios) < 2:
            raise SpaceError("IFS needs at least two maps")
        for r in self.ratios:
            if not 0 < r < 1:
                raise SpaceError(f"IFS ratio {r} not in (0,1)")
        if len(set(self.symbols)) != len(self.symbols):
            raise SpaceError("IFS symbols must be distinct")

    @property
    def hull(self) -> tuple[Fraction, Fraction]:
        lo = self.offsets[0] / (1 - self.ratios[0])
        hi = self.offsets[-1] / (1 - self.ratios[-1])
        if lo >= hi:
            raise SpaceError("degenerate IFS hull")
        return lo, hi

    def apply_map(self, i: int, x: Fraction) -> Fraction:
        return self.ratios[i] * x + self.offsets[i]

    def cylinder(self, address: str) -> tuple[Fraction, Fraction]:
        """Interval of the cylinder addressed by a word over the symbols.

        The word is read outermost-first: I_w = phi_{w0}(I_{w1 w2 ...}).
        """
        return self._cyl(address)

    def _cyl(self, address: str) -> tuple[Fraction, Fraction]:
        lo, hi = self.hull
        for sym in address[::-1]:
            i = self.symbols.index(sym)
            lo = self.ratios[i] * lo + self.offsets[i]
            hi = self.ratios[i] * hi + self.offsets[i]
        return lo, hi

    def addresses(self, depth: int) -> list[str]:
        words = [""]
        for _ in range(depth):
            words = [w + s for w in words for s in self.symbols]
        return words

    def intervals_at(self, depth: int) -> list[tuple[Fraction, Fraction]]:
        return [self._cyl(w) for w in self.addresses(depth)]

    def contains_limit_point(self, x: Fraction) -> bool:
        """Exact membership of a rational in the limit (infinite-depth) set."""
        lo, hi = self.hull
        seen: set[Fraction] = set()

        def visit(y: Fraction) -> bool:
            if y < lo or y > hi:
                return False
            if y in seen:
                # revisiting a value yields an eventually periodic expansion
                return True
            seen.add(y)
            for r, o in zip(self.ratios, self.offsets):
                pre = (y - o) / r
                if lo <= pre <= hi and visit(pre):
                    return True
            return False

        return visit(x)

    def limit_gap_containing(self, t: Fraction) -> Optional[tuple[Fraction, Fraction]]:
        """The bounded gap of the limit set whose open interval contains t,
        or None when t is a limit point or outside the hull."""
        lo, hi = self.hull
        if t <= lo or t >= hi:
            return None
        s, u = Fraction(1), Fraction(0)  # current coords -> original coords
        seen = set()
        images = [(r * lo + o, r * hi + o)
                  for r, o in zip(self.ratios, self.offsets)]
        while True:
            if t in seen:
                return None  # eventually periodic expansion: t is a limit point
            seen.add(t)
            for i, (plo, phi) in enumerate(images):
                if plo <= t <= phi:
                    if t == plo or t == phi:
                        return None  # cylinder endpoint, a limit point
                    r, o = self.ratios[i], self.offsets[i]
                    t = (t - o) / r
                    s, u = s * r, s * o + u
                    break
            else:
                for (p1, h1), (p2, _) in zip(images, images[1:]):
                    if h1 < t < p2:
                        return (s * h1 + u, s * p2 + u)
                return None  # outside every child: not inside the limit hull

    def adjacent_limit_gap(self, t: Fraction, side: str) -> Optional[tuple[Fraction, Fraction]]:
        """The bounded gap of the limit set touching the limit point t on
        the given side ("left" or "right"), or None if no gap is adjacent.

        Only meaningful for t in the limit set; for other t use
        limit_gap_containing.
        """
        lo, hi = self.hull
        if side == "right" and t == hi:
            return None
        if side == "left" and t == lo:
            return None
        if t < lo or t > hi:
            return None
        s, u = Fraction(1), Fraction(0)
        seen = set()
        images = [(r * lo + o, r * hi + o)
                  for r, o in zip(self.ratios, self.offsets)]
        while True:
            if t in seen:
                return None  # two-sided limit point, no adjacent gap
            seen.add(t)
            for i, (plo, phi) in enumerate(images):
                if plo <= t <= phi:
                    if side == "right" and t == phi and i + 1 < len(images):
                        return (s * t + u, s * images[i + 1][0] + u)
                    if side == "left" and t == plo and i > 0:
                        return (s * images[i - 1][1] + u, s * t + u)
                    r, o = self.ratios[i], self.offsets[i]
                    t = (t - o) / r
                    s, u = s * r, s * o + u
                    break
            else:
                return None  # t lies in a gap, not in the limit set

    def is_gap_pair(self, u: Fraction, v: Fraction) -> bool:
        """Whether (u, v) bounds a gap of the limit set, at any depth."""
        if u >= v:
            return False
        lo, hi = self.hull
        width = hi - lo
        images = [(r * lo + o, r * hi + o) for r, o in zip(self.ratios, self.offsets)]
        while v - u <= width:
            for (_, a_hi), (b_lo, _) in zip(images, images[1:]):
                if u == a_hi and v == b_lo:
                    return True
            for (plo, phi), r, o in zip(images, self.ratios, self.offsets):
                if plo <= u and v <= phi:
                    u, v = (u - o) / r, (v - o) / r
                    break
            else:
                return False
        return False


# ---------------------------------------------------------------------------
# compact sets


def _normalize_intervals(pairs) -> tuple[tuple[Fraction, Fraction], ...]:
    cleaned = []
    for l, r in pairs:
        l, r = rat(l), rat(r)
        if l > r:
            raise SpaceError(f"interval [{l}, {r}] reversed")
        cleaned.append((l, r))
    if not cleaned:
        raise SpaceError("empty interval list")
    cleaned.sort()
    merged = [cleaned[0]]
    for l, r in cleaned[1:]:
        pl, pr = merged[-1]
        if l <= pr:
            merged[-1] = (pl, max(pr, r))
        else:
            merged.append((l, r))
    return tuple(merged)


@dataclass(frozen=True)
class Gap:
    kind: str  # "bounded" | "left-unbounded" | "right-unbounded"
    left: Optional[Fraction]
    right: Optional[Fraction]


@dataclass(frozen=True)
class CompactSet:
    """Finite union of disjoint closed rational intervals, sorted."""

    intervals: tuple[tuple[Fraction, Fraction], ...]
    ifs: Optional[Ifs] = None
    depth: int = 0

    @staticmethod
    def from_intervals(pairs) -> "CompactSet":
        return CompactSet(_normalize_intervals(pairs))

    @staticmethod
    def from_ifs(ifs: Ifs, depth: int) -> "CompactSet":
        if depth < 0:
            raise SpaceError("depth must be nonnegative")
        return CompactSet(tuple(ifs.intervals_at(depth)), ifs=ifs, depth=depth)

    # -- basic queries ------------------------------------------------------

    @property
    def hull(self) -> tuple[Fraction, Fraction]:
        return self.intervals[0][0], self.intervals[-1][1]

    @property
    def diameter(self) -> Fraction:
        lo, hi = self.hull
        return hi - lo

    def __contains__(self, x) -> bool:
        return self.contains(rat(x))

    def contains(self, x: Fraction) -> bool:
        i = bisect.bisect_right([iv[0] for iv in self.intervals], x) - 1
        return i >= 0 and self.intervals[i][0] <= x <= self.intervals[i][1]

    def contains_limit_point(self, x: Fraction) -> bool:
        """Membership in the underlying limit set (equals contains() when
        the set carries no IFS structure)."""
        if self.ifs is None:
            return self.contains(x)
        return self.ifs.contains_limit_point(x)

    def interval_index(self, x: Fraction) -> int:
        i = bisect.bisect_right([iv[0] for iv in self.intervals], x) - 1
        if i < 0 or not (self.intervals[i][0] <= x <= self.intervals[i][1]):
            raise SpaceError(f"{x} not in the set")
        return i

    def endpoints(self) -> list[Fraction]:
        pts = []
        for l, r in self.intervals:
            pts.append(l)
            if r != l:
                pts.append(r)
        return pts

    def gaps(self) -> list[Gap]:
        out = [Gap("left-unbounded", None, self.intervals[0][0])]
        for (l1, r1), (l2, r2) in zip(self.intervals, self.intervals[1:]):
            out.append(Gap("bounded", r1, l2))
        out.append(Gap("right-unbounded", self.intervals[-1][1], None))
        return out

    def bounded_gaps(self) -> list[tuple[Fraction, Fraction]]:
        return [(g.left, g.right) for g in self.gaps() if g.kind == "bounded"]

    def limit_gap_containing(self, t: Fraction) -> Optional[tuple[Fraction, Fraction]]:
        """Bounded gap of the true set whose open interval contains t."""
        if self.ifs is not None:
            return self.ifs.limit_gap_containing(t)
        for l, r in self.bounded_gaps():
            if l < t < r:
                return (l, r)
        return None

    def adjacent_limit_gap(self, t: Fraction, side: str) -> Optional[tuple[Fraction, Fraction]]:
        """Bounded gap of the true set touching the point t on that side."""
        if self.ifs is not None:
            return self.ifs.adjacent_limit_gap(t, side)
        for l, r in self.bounded_gaps():
            if side == "right" and l == t:
                return (l, r)
            if side == "left" and r == t:
                return (l, r)
        return None

    def is_gap_pair(self, u: Fraction, v: Fraction) -> bool:
        """Whether the sorted pair (u, v) bounds a bounded gap.

        With IFS structure the test is against the limit set, so gaps finer
        than the stored depth are recognized.
        """
        if u > v:
            u, v = v, u
        if u == v:
            return False
        if self.ifs is not None:
            return self.ifs.is_gap_pair(u, v)
        return (u, v) in self.bounded_gaps()

    # -- IFS-aware structure ------------------------------------------------

    def refine(self) -> "CompactSet":
        if self.ifs is None:
            raise SpaceError("set has no IFS structure to refine")
        return CompactSet.from_ifs(self.ifs, self.depth + 1)

    def addresses(self) -> list[str]:
        if self.ifs is None:
            raise SpaceError("set has no IFS structure")
        return self.ifs.addresses(self.depth)

    def cylinder(self, address: str) -> tuple[Fraction, Fraction]:
        if self.ifs is None:
            raise SpaceError("set has no IFS structure")
        return self.ifs._cyl(address)

    def cells(self) -> list[tuple[Fraction, Fraction]]:
        """The depth-d cells: cylinders for IFS sets, else the intervals."""
        return list(self.intervals)

    def cell_index(self, x: Fraction) -> int:
        return self.interval_index(x)

    def decompose_into_cylinders(self, lo: Fraction, hi: Fraction,
                                 max_depth: int) -> Optional[list[str]]:
        """Write [lo, hi] (intersected with the limit set) as a disjoint
        union of maximal cylinders of length <= max_depth, or None if the
        interval is not cylinder-aligned within that depth."""
        if self.ifs is None:
            raise SpaceError("set has no IFS structure")

        def rec(addr: str) -> Optional[list[str]]:
            clo, chi = self.ifs._cyl(addr)
            if hi < clo or chi < lo:
                return []
            if lo <= clo and chi <= hi:
                return [addr]
            if len(addr) >= max_depth:
                return None
            parts = []
            for s in self.ifs.symbols:
                sub = rec(addr + s)
                if sub is None:
                    return None
                parts.extend(sub)
            return parts

        return rec("")


def make_compact_set(pairs) -> CompactSet:
    """Normalize a list of rational endpoint pairs into a CompactSet."""
    return CompactSet.from_intervals(pairs)


def ternary_cantor(depth: int) -> CompactSet:
    """Depth-d approximation of the middle-thirds Cantor set in [0, 1]."""
    ifs = Ifs(ratios=(Fraction(1, 3), Fraction(1, 3)),
              offsets=(Fraction(0), Fraction(2, 3)),
              symbols=("0", "2"))
    return CompactSet.from_ifs(ifs, depth)


# ---------------------------------------------------------------------------
# point sets


@dataclass(frozen=True)
class PointSet:
    """Finite sorted set of rationals, all members of an ambient set."""

    space: CompactSet
    points: tuple[Fraction, ...]

    @staticmethod
    def of(space: CompactSet, points: Iterable) -> "PointSet":
        pts = sorted({rat(p) for p in points})
        for p in pts:
            if not space.contains(p):
                raise SpaceError(f"point {p} not in the ambient set")
        return PointSet(space, tuple(pts))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def delta_m(points: PointSet) -> Fraction:
    """Minimal pairwise distance among the points."""
    if len(points) < 2:
        raise SpaceError("delta_m needs at least two points")
    pts = points.points
    return min(b - a for a, b in zip(pts, pts[1:]))


def min_pairwise_distance(values: Sequence[Fraction]) -> Fraction:
    if len(values) < 2:
        raise SpaceError("need at least two values")
    vs = sorted(values)
    return min(b - a for a, b in zip(vs, vs[1:]))


# ---------------------------------------------------------------------------
# distances


def point_to_set_distance(x: Fraction, k: CompactSet) -> Fraction:
    best = None
    for l, r in k.intervals:
        if x < l:
            d = l - x
        elif x > r:
            d = x - r
        else:
            return Fraction(0)
        best = d if best is None else min(best, d)
    return best


def hausdorff_distance(a: CompactSet, b: CompactSet) -> Fraction:
    """Exact Hausdorff distance between two interval unions.

    sup_{x in A} d(x, B) is attained at an endpoint of A or at a midpoint of
    a gap of B lying inside A, so a finite candidate scan is exact.
    """

    def one_sided(src: CompactSet, dst: CompactSet) -> Fraction:
        candidates = src.endpoints()
        for (l1, r1), (l2, r2) in zip(dst.intervals, dst.intervals[1:]):
            mid = (r1 + l2) / 2
            if src.contains(mid):
                candidates.append(mid)
        return max(point_to_set_distance(x, dst) for x in candidates)

    return max(one_sided(a, b), one_sided(b, a))


# ---------------------------------------------------------------------------
# regions


class Piece(NamedTuple):
    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool


def _piece_valid(p: Piece) -> bool:
    if p.lo < p.hi:
        return True
    return p.lo == p.hi and p.lo_closed and p.hi_closed


def _normalize_pieces(pieces: Iterable[Piece]) -> tuple[Piece, ...]:
    ps = sorted((p for p in pieces if _piece_valid(p)),
                key=lambda p: (p.lo, not p.lo_closed))
    out: list[Piece] = []
    for p in ps:
        if out:
            q = out[-1]
            if p.lo < q.hi or (p.lo == q.hi and (q.hi_closed or p.lo_closed)):
                hi, hi_closed = max((q.hi, q.hi_closed), (p.hi, p.hi_closed),
                                    key=lambda t: (t[0], t[1]))
                out[-1] = Piece(q.lo, hi, q.lo_closed, hi_closed)
                continue
        out.append(p)
    return tuple(out)


def _complement_pieces(pieces: Sequence[Piece], lo: Fraction, hi: Fraction) -> list[Piece]:
    """Complement within the closed interval [lo, hi]."""
    out = []
    cur, cur_closed = lo, True
    for p in pieces:
        if p.hi < lo or p.lo > hi:
            continue
        seg = Piece(cur, min(p.lo, hi), cur_closed, not p.lo_closed)
        if _piece_valid(seg) and seg.lo <= hi:
            out.append(Piece(seg.lo, min(seg.hi, hi), seg.lo_closed,
                             seg.hi_closed if seg.hi <= hi else True))
        cur, cur_closed = p.hi, not p.hi_closed
        if cur > hi:
            return out
    tail = Piece(cur, hi, cur_closed, True)
    if _piece_valid(tail):
        out.append(tail)
    return out


def _intersect_piece(a: Piece, b: Piece) -> Optional[Piece]:
    if a.lo > b.lo or (a.lo == b.lo and (b.lo_closed or not a.lo_closed)):
        lo, lo_closed = a.lo, a.lo_closed and (b.lo < a.lo or b.lo_closed)
    else:
        lo, lo_closed = b.lo, b.lo_closed and (a.lo < b.lo or a.lo_closed)
    if a.hi < b.hi or (a.hi == b.hi and (b.hi_closed or not a.hi_closed)):
        hi, hi_closed = a.hi, a.hi_closed and (b.hi > a.hi or b.hi_closed)
    else:
        hi, hi_closed = b.hi, b.hi_closed and (a.hi > b.hi or a.hi_closed)
    p = Piece(lo, hi, lo_closed, hi_closed)
    return p if _piece_valid(p) else None


@dataclass(frozen=True)
class Region:
    """A finite union of flagged rational intervals intersected with K."""

    space: CompactSet
    pieces: tuple[Piece, ...]

    @staticmethod
    def whole(space: CompactSet) -> "Region":
        lo, hi = space.hull
        return Region(space, (Piece(lo, hi, True, True),))

    @staticmethod
    def empty(space: CompactSet) -> "Region":
        return Region(space, ())

    @staticmethod
    def from_intervals(space: CompactSet, pairs,
                       closed: bool = True) -> "Region":
        ps = [Piece(rat(l), rat(r), closed, closed) for l, r in pairs]
        return Region(space, _normalize_pieces(ps))

    @staticmethod
    def from_pieces(space: CompactSet, pieces: Iterable[Piece]) -> "Region":
        return Region(space, _normalize_pieces(pieces))

    @staticmethod
    def cylinder(space: CompactSet, address: str) -> "Region":
        lo, hi = space.cylinder(address)
        return Region(space, (Piece(lo, hi, True, True),))

    # -- membership ---------------------------------------------------------

    def contains(self, x) -> bool:
        x = rat(x)
        if not self.space.contains(x):
            return False
        for p in self.pieces:
            if p.lo < x < p.hi:
                return True
            if x == p.lo and p.lo_closed:
                return True
            if x == p.hi and p.hi_closed:
                return True
        return False

    def _piece_meets_space(self, p: Piece) -> bool:
        for l, r in self.space.intervals:
            if r < p.lo or l > p.hi:
                continue
            olo, ohi = max(l, p.lo), min(r, p.hi)
            if olo < ohi:
                return True
            if olo == ohi:
                ok_lo = olo > p.lo or p.lo_closed
                ok_hi = ohi < p.hi or p.hi_closed
                if ok_lo and ok_hi:
                    return True
        return False

    def is_empty(self) -> bool:
        return not any(self._piece_meets_space(p) for p in self.pieces)

    # -- boolean operations -------------------------------------------------

    def union(self, other: "Region") -> "Region":
        return Region(self.space, _normalize_pieces(self.pieces + other.pieces))

    def intersect(self, other: "Region") -> "Region":
        out = []
        for a in self.pieces:
            for b in other.pieces:
                c = _intersect_piece(a, b)
                if c is not None:
                    out.append(c)
        return Region(self.space, _normalize_pieces(out))

    def complement(self) -> "Region":
        lo, hi = self.space.hull
        return Region(self.space,
                      _normalize_pieces(_complement_pieces(self.pieces, lo, hi)))

    def difference(self, other: "Region") -> "Region":
        return self.intersect(other.complement())

    def subset_of(self, other: "Region") -> bool:
        return self.difference(other).is_empty()

    def disjoint_from(self, other: "Region") -> bool:
        return self.intersect(other).is_empty()

    def same_set(self, other: "Region") -> bool:
        return self.subset_of(other) and other.subset_of(self)

    # -- metric queries -----------------------------------------------------

    def infimum(self) -> Fraction:
        for p in self.pieces:
            for l, r in self.space.intervals:
                if r < p.lo:
                    continue
                if l > p.hi:
                    break
                olo = max(l, p.lo)
                if self._piece_meets_space(Piece(olo, min(r, p.hi),
                                                 p.lo_closed or olo > p.lo,
                                                 True)):
                    return olo
        raise SpaceError("empty region has no infimum")

    def supremum(self) -> Fraction:
        best = None
        for p in self.pieces:
            for l, r in self.space.intervals:
                if r < p.lo or l > p.hi:
                    continue
                ohi = min(r, p.hi)
                if self._piece_meets_space(Piece(max(l, p.lo), ohi, True,
                                                 p.hi_closed or ohi < p.hi)):
                    best = ohi if best is None else max(best, ohi)
        if best is None:
            raise SpaceError("empty region has no supremum")
        return best

    def diameter(self) -> Fraction:
        return self.supremum() - self.infimum()

    def sample_point(self) -> Fraction:
        """Some point of K inside the region (its infimum or a point just
        right of it when the boundary is open)."""
        for p in self.pieces:
            for l, r in self.space.intervals:
                if r < p.lo or l > p.hi:
                    continue
                olo, ohi = max(l, p.lo), min(r, p.hi)
                if olo < ohi:
                    if olo > p.lo or p.lo_closed:
                        return olo
                    # open left boundary: look for a set point strictly inside
                    for cand in self._interior_candidates(olo, ohi):
                        if self.contains(cand):
                            return cand
                elif olo == ohi and self.contains(olo):
                    return olo
        raise SpaceError("empty region has no sample point")

    def _interior_candidates(self, lo: Fraction, hi: Fraction):
        k = self.space
        for l, r in k.intervals:
            for v in (l, r):
                if lo < v < hi:
                    yield v
        yield (lo + hi) / 2


def epsilon_neighborhood(points: PointSet, eps, space: CompactSet) -> Region:
    """The strict neighborhood {x in K : d(x, A) < eps}, exactly."""
    eps = rat(eps)
    if eps <= 0:
        raise SpaceError("eps must be positive")
    pieces = [Piece(p - eps, p + eps, False, False) for p in points]
    return Region.from_pieces(space, pieces)


def epsilon_neighborhood_of_values(values: Iterable[Fraction], eps,
                                   space: CompactSet) -> Region:
    eps = rat(eps)
    if eps <= 0:
        raise SpaceError("eps must be positive")
    pieces = [Piece(rat(p) - eps, rat(p) + eps, False, False) for p in values]
    return Region.from_pieces(space, pieces)
