"""Generalized interval exchange transformations and their blow-ups.

A Giet is a bijection of [a, b) built from finitely many increasing affine
branches on half-open sources.  Blowing up the (truncated) orbit of its
discontinuities turns the group action into piecewise-affine homeomorphisms
of a compact set with one gap per blown point; break pairs of the induced
maps sit exactly at the blown discontinuities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .rational import rat
from .maps import Branch, MapError, PAHomeo, pa_homeo
from .space import CompactSet, SpaceError


class GietError(ValueError):
    pass


@dataclass(frozen=True)
class GBranch:
    lo: Fraction
    hi: Fraction  # source is [lo, hi)
    slope: Fraction
    offset: Fraction

    def value(self, x: Fraction) -> Fraction:
        return self.slope * x + self.offset


@dataclass(frozen=True)
class Giet:
    a: Fraction
    b: Fraction
    branches: tuple[GBranch, ...]

    @property
    def is_iet(self) -> bool:
        return all(br.slope == 1 for br in self.branches)

    def branch_at(self, x: Fraction) -> GBranch:
        for br in self.branches:
            if br.lo <= x < br.hi:
                return br
        raise GietError(f"{x} outside [{self.a}, {self.b})")

    def apply(self, x) -> Fraction:
        return self.branch_at(rat(x)).value(rat(x))

    def one_sided(self, x: Fraction, side: str) -> Fraction:
        """The limit value g(x-) or g(x+)."""
        if side == "right":
            if not self.a <= x < self.b:
                raise GietError(f"no right limit at {x}")
            return self.branch_at(x).value(x)
        if side == "left":
            if not self.a < x <= self.b:
                raise GietError(f"no left limit at {x}")
            for br in self.branches:
                if br.lo < x <= br.hi:
                    return br.value(x)
            raise GietError(f"{x} outside ({self.a}, {self.b}]")
        raise GietError(f"bad side {side!r}")

    def preimage(self, y: Fraction) -> Fraction:
        for br in self.branches:
            ia, ib = br.value(br.lo), br.value(br.hi)
            if ia <= y < ib:
                return (y - br.offset) / br.slope
        raise GietError(f"{y} not in the image [{self.a}, {self.b})")

    def inverse(self) -> "Giet":
        inv = [GBranch(br.value(br.lo), br.value(br.hi),
                       1 / br.slope, -br.offset / br.slope)
               for br in self.branches]
        inv.sort(key=lambda br: br.lo)
        return Giet(self.a, self.b, tuple(inv))

    def jump_points(self) -> list[Fraction]:
        """Interior points where the map is genuinely discontinuous."""
        out = []
        for b1, b2 in zip(self.branches, self.branches[1:]):
            t = b1.hi
            if b1.value(t) != b2.value(t):
                out.append(t)
        return out


def giet_from_branches(interval, branches) -> Giet:
    a, b = rat(interval[0]), rat(interval[1])
    if a >= b:
        raise GietError("empty interval")
    bs = []
    for spec in branches:
        lo, hi, slope, offset = (rat(spec[0]), rat(spec[1]),
                                 rat(spec[2]), rat(spec[3]))
        if slope <= 0:
            raise GietError("slopes must be positive")
        if lo >= hi:
            raise GietError("degenerate branch source")
        bs.append(GBranch(lo, hi, slope, offset))
    bs.sort(key=lambda br: br.lo)
    if bs[0].lo != a or bs[-1].hi != b:
        raise GietError("sources do not span the interval")
    for b1, b2 in zip(bs, bs[1:]):
        if b1.hi != b2.lo:
            raise GietError("sources do not partition the interval")
    imgs = sorted((br.value(br.lo), br.value(br.hi)) for br in bs)
    if imgs[0][0] != a or imgs[-1][1] != b:
        raise GietError("images do not span the interval")
    for (l1, r1), (l2, r2) in zip(imgs, imgs[1:]):
        if r1 != l2:
            raise GietError("images do not tile the interval")
    return Giet(a, b, tuple(bs))


def rotation(interval, amount) -> Giet:
    a, b = rat(interval[0]), rat(interval[1])
    t = rat(amount) % (b - a)
    if t == 0:
        return giet_from_branches((a, b), [(a, b, 1, 0)])
    return giet_from_branches((a, b), [(a, b - t, 1, t), (b - t, b, 1, t - (b - a))])


# ---------------------------------------------------------------------------
# discontinuity orbits


def _ops(gens: Sequence[Giet]) -> list[Giet]:
    out = list(gens)
    out.extend(g.inverse() for g in gens)
    return out


def discontinuity_closure(gens: Sequence[Giet], L: int,
                          seeds: Sequence[Fraction] = None):
    """(D_L, closed): preimages of generator jumps under words of length
    <= L over the generators and their inverses, in BFS discovery order."""
    if L < 0:
        raise GietError("negative word length bound")
    ops = _ops(gens)
    if seeds is None:
        seedset = sorted({p for g in gens for p in g.jump_points()})
    else:
        seedset = sorted({rat(s) for s in seeds})
    order = list(seedset)
    known = set(seedset)
    frontier = list(seedset)
    for _ in range(L):
        nxt = []
        for p in frontier:
            for op in ops:
                try:
                    q = op.preimage(p)
                except GietError:
                    continue
                if q not in known:
                    known.add(q)
                    order.append(q)
                    nxt.append(q)
        frontier = nxt
    closed = True
    for p in order:
        for op in ops:
            try:
                q = op.preimage(p)
            except GietError:
                continue
            if q not in known:
                closed = False
    return order, closed


# ---------------------------------------------------------------------------
# one-sided orbits


@dataclass(frozen=True)
class SidedOrbit:
    base: Fraction
    side: str
    points: tuple[Fraction, ...]
    closed: bool


def one_sided_orbit(gens: Sequence[Giet], x, side: str, bound: int) -> SidedOrbit:
    x = rat(x)
    g0 = gens[0]
    if side not in ("left", "right"):
        raise GietError(f"bad side {side!r}")
    if x == g0.a and side == "left":
        raise GietError("no left limit at the left endpoint")
    if x == g0.b and side == "right":
        raise GietError("no right limit at the right endpoint")
    ops = _ops(gens)
    known = {x}
    order = [x]
    frontier = [x]
    for _ in range(bound):
        nxt = []
        for p in frontier:
            for op in ops:
                q = op.one_sided(p, side)
                if q not in known:
                    known.add(q)
                    order.append(q)
                    nxt.append(q)
        frontier = nxt
    closed = bound >= 1 and not frontier
    return SidedOrbit(x, side, tuple(order), closed)


# ---------------------------------------------------------------------------
# blow-up


@dataclass(frozen=True)
class BlowUpResult:
    space: CompactSet
    induced: tuple[PAHomeo, ...]
    blown_points: tuple[tuple[Fraction, Fraction], ...]  # (c, alpha_c)
    jumps: tuple[tuple[Fraction, Fraction], ...]  # (c, F(c-)) for c > a
    exact: bool
    defects: tuple[str, ...]

    def conjugate_point(self, x) -> Fraction:
        """F(x) = x + sum of weights at blown points <= x."""
        x = rat(x)
        return x + sum(al for c, al in self.blown_points if c <= x)


def blow_up(gens: Sequence[Giet], L: int, rho,
            seeds: Sequence[Fraction] = None) -> BlowUpResult:
    rho = rat(rho)
    if not 0 < rho < 1:
        raise GietError("weight ratio must be in (0, 1)")
    g0 = gens[0]
    a, b = g0.a, g0.b
    for g in gens:
        if (g.a, g.b) != (a, b):
            raise GietError("generators live on different intervals")
    order, closed = discontinuity_closure(gens, L, seeds)
    for c in order:
        if not a <= c < b:
            raise GietError(f"blown point {c} outside [{a}, {b})")
    weights = {c: rho ** (rank + 1) * (b - a) for rank, c in enumerate(order)}

    def F(x: Fraction) -> Fraction:
        return x + sum(al for c, al in weights.items() if c <= x)

    def F_left(x: Fraction) -> Fraction:
        return x + sum(al for c, al in weights.items() if c < x)

    # K_L: [F(a), F(b)] minus the open jump gaps at each blown c > a
    cuts = sorted(c for c in order if c > a)
    intervals = []
    start = F(a)
    for c in cuts:
        intervals.append((start, F_left(c)))
        start = F(c)
    intervals.append((start, F(b)))
    space = CompactSet.from_intervals(intervals)

    defects = []
    induced = []
    for gi, g in enumerate(gens):
        pts = set(order) | {a, b}
        for br in g.branches:
            pts.add(br.lo)
            pts.add(br.hi)
        for c in list(pts):
            if a <= c < b:
                try:
                    pts.add(g.preimage(c))
                except GietError:
                    pass
        cutpts = sorted(p for p in pts if a <= p <= b)
        branches = []
        for p, q in zip(cutpts, cutpts[1:]):
            mid = (p + q) / 2
            br = g.branch_at(mid)
            s = br.slope
            # F is x + const on (p, q) and on its affine image, so the
            # induced map is affine between the corresponding gap edges
            cp = F(p) - p
            gy = br.value(mid)
            cq = F(gy) - gy
            branches.append(Branch(F(p), F_left(q), s,
                                   br.offset + cq - s * cp))
        try:
            hom = pa_homeo(space, branches, label=(f"g{gi}",), validate=True)
            induced.append(hom)
        except (MapError, SpaceError) as e:
            defects.append(f"generator {gi}: {e}")
            induced.append(pa_homeo(space, branches, label=(f"g{gi}",),
                                    validate=False))
    exact = closed and not defects
    return BlowUpResult(
        space=space,
        induced=tuple(induced),
        blown_points=tuple((c, weights[c]) for c in order),
        jumps=tuple((c, F_left(c)) for c in cuts),
        exact=exact,
        defects=tuple(defects),
    )
