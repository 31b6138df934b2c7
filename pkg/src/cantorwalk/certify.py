"""Exact certificates for the two branches of the alternative.

Every certificate emitted here is verified by exact rational computation
before it is returned: ping-pong freeness, finite orbits, invariant cell
measures, and Morse-Smale structure.  Searches are budgeted and
deterministic (shortlex word order, seeded walk streams); exhausting a
budget yields a falsy failure report, never an unverified claim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .rational import rat
from .maps import (PAHomeo, apply, compose, equals, image,
                   inverse_name, invert, is_identity)
from .space import (CompactSet, Piece, PointSet, Region,
                    epsilon_neighborhood_of_values)
from .measure_solver import solve_feasibility
from .walk import (DEFAULT_DELTA, Trajectory, WalkModel, contraction_scan,
                   forward_word, measure_cells, preimage_cell_indices,
                   CellMeasure, WalkError)


class CertifyError(ValueError):
    pass


@dataclass(frozen=True)
class Budgets:
    max_len: int = 6
    runs: int = 100
    d_max: int = 6
    n_max: int = 40


def as_budgets(b) -> Budgets:
    if b is None:
        return Budgets()
    if isinstance(b, Budgets):
        return b
    if isinstance(b, dict):
        return Budgets(**b)
    return Budgets(*b)


# ---------------------------------------------------------------------------
# certificate types


@dataclass(frozen=True)
class PingPongCertificate:
    a1: PAHomeo
    a2: PAHomeo
    A1: Region
    B1: Region
    A2: Region
    B2: Region


@dataclass(frozen=True)
class InvariantMeasureCertificate:
    depth: int
    measure: CellMeasure
    consistency_depth: int


@dataclass(frozen=True)
class FiniteOrbitCertificate:
    orbit: PointSet
    verified: bool


@dataclass(frozen=True)
class MorseSmaleCertificate:
    g: PAHomeo
    periodic: tuple  # (point, period, multiplier) triples
    A: Region
    B: Region


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Rejection:
    """Falsy failure report carrying the first violated condition."""
    reason: str

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class InfeasibilityReport:
    """Falsy: the invariance system has no solution; gap is the exact
    positive phase-1 optimum witnessing infeasibility."""
    depth: int
    gap: Fraction

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class AssemblyFailure:
    stage: str
    flag: Optional[str] = None

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class DisplacementResult:
    word: Optional[PAHomeo]
    flag: Optional[str] = None

    def __bool__(self) -> bool:
        return self.word is not None


# ---------------------------------------------------------------------------
# word enumeration


def _named(gens) -> dict:
    if isinstance(gens, dict):
        return dict(gens)
    out = {}
    for i, g in enumerate(gens):
        out["-".join(g.label) or f"g{i}"] = g
    return out


def _make_letters(named: dict):
    """(letters, inv) with inverses appended unless already present; inv[j]
    is the index of letter j's inverse (itself for involutions)."""
    letters = list(named.items())
    for name, g in list(letters):
        gi = invert(g)
        if not any(equals(gi, h) for _, h in letters):
            letters.append((inverse_name(name), gi))
    inv = []
    for _, g in letters:
        gi = invert(g)
        inv.append(next(k for k, (_, h) in enumerate(letters) if equals(gi, h)))
    return letters, inv


def _iter_words(letters, inv, max_len: int):
    """Reduced words in shortlex order, lengths 1..max_len, as
    (name tuple, composed map); letter j never follows its inverse."""
    frontier = [((), None, -1)]
    for _ in range(max_len):
        nxt = []
        for names, m, last in frontier:
            for j, (nm, g) in enumerate(letters):
                if last >= 0 and inv[j] == last:
                    continue
                m2 = g if m is None else compose(g, m)
                nxt.append((names + (nm,), m2, j))
                yield names + (nm,), m2
        frontier = nxt


# ---------------------------------------------------------------------------
# finite orbits and displacement


def find_finite_orbit(gens, starts, bound: int = 2000):
    """BFS orbit closure of the start points under generators and inverses;
    a certificate iff the closure stabilizes within `bound` points."""
    if bound < 1:
        raise CertifyError("bound must be at least 1")
    named = _named(gens)
    maps = list(named.values())
    space = maps[0].space
    ops = maps + [invert(g) for g in maps]
    orbit = {rat(s) for s in starts}
    frontier = list(orbit)
    while frontier:
        if len(orbit) > bound:
            return None
        nxt = []
        for p in frontier:
            for op in ops:
                q = apply(op, p)
                if q not in orbit:
                    orbit.add(q)
                    nxt.append(q)
        frontier = nxt
    verified = all(apply(op, p) in orbit for p in orbit for op in ops)
    return FiniteOrbitCertificate(PointSet.of(space, sorted(orbit)), verified)


def find_displacement(gens, A, B, max_len: int = 6) -> DisplacementResult:
    """Shortest word g (shortlex) with g(A) disjoint from B.

    Direct BFS first; if that fails with orbits still growing, an
    induction-style fallback displaces all but the last point and extends
    the search from there.  A finite orbit through A is the documented
    obstruction and is flagged.
    """
    a_vals = [rat(a) for a in A]
    b_vals = {rat(b) for b in B}
    if not a_vals or not b_vals:
        raise CertifyError("A and B must be nonempty")
    if max_len < 1:
        raise CertifyError("max_len must be at least 1")
    named = _named(gens)
    letters, inv = _make_letters(named)
    for _, w in _iter_words(letters, inv, max_len):
        if all(apply(w, a) not in b_vals for a in a_vals):
            return DisplacementResult(w)
    orbit = find_finite_orbit(named, a_vals, bound=4 ** max_len)
    if orbit is not None:
        return DisplacementResult(None, "finite-orbit")
    if len(a_vals) > 1:
        sub = find_displacement(named, a_vals[:-1], b_vals, max_len)
        if sub.word is not None:
            for _, u in _iter_words(letters, inv, max_len):
                w = compose(u, sub.word)
                if all(apply(w, a) not in b_vals for a in a_vals):
                    return DisplacementResult(w)
    return DisplacementResult(None, "budget-exhausted")


def _find_region_displacement(letters, inv, src: Region, avoid: Region,
                              max_len: int) -> Optional[PAHomeo]:
    for _, w in _iter_words(letters, inv, max_len):
        if image(w, src).disjoint_from(avoid):
            return w
    return None


# ---------------------------------------------------------------------------
# contraction pairs


def _attracting_fixed_points(w: PAHomeo) -> list:
    pts = set()
    for b in w.branches:
        if abs(b.slope) >= 1:
            continue
        x = b.offset / (1 - b.slope)
        if b.lo <= x <= b.hi and w.space.contains(x):
            pts.add(x)
    return sorted(pts)


def _cluster_extremes(points, radius, hull):
    """One representative per single-linkage cluster, pushed toward the
    nearer hull extreme (matching the repulsor convention in walk)."""
    center = (hull[0] + hull[1]) / 2
    pts = sorted(set(points))
    if not pts:
        return []
    clusters = [[pts[0]]]
    for p in pts[1:]:
        if p - clusters[-1][-1] <= radius:
            clusters[-1].append(p)
        else:
            clusters.append([p])
    return [c[-1] if (c[0] + c[-1]) / 2 >= center else c[0] for c in clusters]


def _contraction_candidates(model: WalkModel, eps, p_cap: int, n_max: int,
                            streams: int):
    """Yields (trajectory, n, word, A points, B points) with the inclusion
    word(K off A^eps) subset of B^eps verified exactly."""
    eps = rat(eps)
    K = model.space
    depth = K.depth if K.depth is not None else 0
    cells = measure_cells(K, depth)
    cellwidth = cells[0][1] - cells[0][0]
    for r in range(streams):
        t = Trajectory(model, stream=r)
        try:
            scan = contraction_scan(t, depth, min(n_max, 24))
        except WalkError:
            continue
        rep_pts = []
        for v, (l, h) in zip(scan.verdicts, cells):
            if v == "repulsor":
                rep_pts.extend((l, h))
        A = _cluster_extremes(rep_pts, 3 * cellwidth, K.hull)
        if not A or len(A) > p_cap:
            continue
        off = Region.whole(K).difference(
            epsilon_neighborhood_of_values(A, eps, K))
        if off.is_empty():
            continue
        for n in range(1, n_max + 1):
            w = forward_word(t, n)
            B = _attracting_fixed_points(w)
            if not B or len(B) > p_cap:
                continue
            b_reg = epsilon_neighborhood_of_values(B, eps, K)
            if image(w, off).subset_of(b_reg):
                yield t, n, w, A, B
                break


def find_contraction(model: WalkModel, eps, p_cap: int = 4, n_max: int = 40,
                     runs: int = 20):
    """(g, A, B) with image(g, K off A^eps) inside B^eps, exactly; A comes
    from repulsor clusters of the sampled walk, B from attracting fixed
    points of the sampled word.  None within budget is a legitimate result."""
    if rat(eps) <= 0 or p_cap < 1:
        raise CertifyError("need eps > 0 and p_cap >= 1")
    for _, _, w, A, B in _contraction_candidates(model, eps, p_cap, n_max, runs):
        K = model.space
        return w, PointSet.of(K, A), PointSet.of(K, B)
    return None


@dataclass(frozen=True)
class StabilizedPair:
    A: tuple
    B: tuple
    flags: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.A, self.B))


def stabilize_contraction_pair(pairs, radius) -> StabilizedPair:
    """Componentwise cluster representatives over a sample of (A_n, B_n).

    The representative of each component is the latest sample in the
    cluster containing the latest sample (the limit surrogate); components
    whose samples split into several clusters are flagged, not rejected.
    """
    radius = rat(radius)
    if not pairs:
        raise CertifyError("empty sample list")
    p = len(tuple(pairs[0][0]))
    q = len(tuple(pairs[0][1]))
    for a_n, b_n in pairs:
        if len(tuple(a_n)) != p or len(tuple(b_n)) != q:
            raise CertifyError("inconsistent pair cardinalities")
    flags = {}

    def component(samples, tag):
        # cluster by value, then pick the cluster holding the last sample
        vals = sorted(set(samples))
        clusters = [[vals[0]]]
        for v in vals[1:]:
            if v - clusters[-1][-1] <= radius:
                clusters[-1].append(v)
            else:
                clusters.append([v])
        if len(clusters) > 1:
            flags[tag] = len(clusters)
        last = samples[-1]
        chosen = next(c for c in clusters if c[0] <= last <= c[-1])
        for s in reversed(samples):
            if chosen[0] <= s <= chosen[-1]:
                return s
        return last

    A = tuple(component([sorted(a_n)[i] for a_n, _ in pairs], f"A[{i}]")
              for i in range(p))
    B = tuple(component([sorted(b_n)[i] for _, b_n in pairs], f"B[{i}]")
              for i in range(q))
    return StabilizedPair(A, B, flags)


# ---------------------------------------------------------------------------
# ping-pong assembly


def verify_ping_pong(cert: PingPongCertificate) -> Verdict:
    """Exact check of the ping-pong hypotheses; true certifies that a1 and
    a2 generate a rank-2 free group (the reverse inclusions follow from
    bijectivity, so two inclusions suffice)."""
    regs = {"A1": cert.A1, "B1": cert.B1, "A2": cert.A2, "B2": cert.B2}
    for name, reg in regs.items():
        if reg.space != cert.a1.space:
            raise CertifyError(f"{name} lives on a different space")
        if reg.is_empty():
            return Verdict(False, f"{name} is empty")
    names = list(regs)
    for i in range(4):
        for j in range(i + 1, 4):
            if not regs[names[i]].disjoint_from(regs[names[j]]):
                return Verdict(False, f"{names[i]} meets {names[j]}")
    K = cert.a1.space
    for tag, a, A, B in (("a1", cert.a1, cert.A1, cert.B1),
                         ("a2", cert.a2, cert.A2, cert.B2)):
        off = Region.whole(K).difference(A)
        if not image(a, off).subset_of(B):
            return Verdict(False, f"image({tag}, K off {tag[1]}) not inside B")
    return Verdict(True)


def assemble_free_pair(model: WalkModel, eps, budgets=None):
    """Contraction, stabilization, displacement, conjugation, exact
    verification; eps shrinks by thirds until the four sets separate."""
    eps = rat(eps)
    bud = as_budgets(budgets)
    K = model.space
    named = {n: g for n, g in zip(model.names, model.gens)}
    letters, inv = _make_letters(named)

    samples = []
    for cand in _contraction_candidates(model, eps, 4, bud.n_max,
                                        min(bud.runs, 16)):
        samples.append(cand)
        if len(samples) >= 4:
            break
    if not samples:
        flag = "budget-exhausted"
        orbit = find_finite_orbit(named, [K.hull[0]], bound=512)
        if orbit is not None:
            flag = "finite-orbit"
        return AssemblyFailure("contraction", flag)

    p, q = len(samples[0][3]), len(samples[0][4])
    usable = [s for s in samples if (len(s[3]), len(s[4])) == (p, q)]
    A, B = stabilize_contraction_pair([(s[3], s[4]) for s in usable], 3 * eps)

    last_stage = "displacement"
    for shrink in range(4):
        e = eps / 3 ** shrink
        a_reg = epsilon_neighborhood_of_values(A, e, K)
        b_reg = epsilon_neighborhood_of_values(B, e, K)
        off = Region.whole(K).difference(a_reg)
        g = None
        for t, n, w, _, _ in usable:
            for n2 in range(n, bud.n_max + 1):
                w2 = forward_word(t, n2)
                if image(w2, off).subset_of(b_reg):
                    g = w2
                    break
            if g is not None:
                break
        if g is None:
            continue
        if a_reg.disjoint_from(b_reg):
            a1, A1, B1 = g, a_reg, b_reg
        else:
            u = _find_region_displacement(letters, inv, b_reg, a_reg,
                                          bud.max_len)
            if u is None:
                continue
            a1, A1, B1 = compose(u, g), a_reg, image(u, b_reg)
        both = A1.union(B1)
        v = _find_region_displacement(letters, inv, both, both, bud.max_len)
        if v is None:
            continue
        a2 = compose(v, compose(a1, invert(v)))
        cert = PingPongCertificate(a1, a2, A1, B1,
                                   image(v, A1), image(v, B1))
        last_stage = "verify"
        if verify_ping_pong(cert):
            return cert
    flag = None
    orbit = find_finite_orbit(named, [K.hull[0]], bound=512)
    if orbit is not None:
        flag = "finite-orbit"
    return AssemblyFailure(last_stage, flag)


def free_group_sanity(a1: PAHomeo, a2: PAHomeo, L: int) -> bool:
    """True iff every nontrivial reduced word of length <= L in a1, a2 and
    inverses differs from the identity.

    Words are screened on witness points (exact evaluation); only words
    fixing every witness are compared to the identity as full maps.
    """
    if L < 1:
        raise CertifyError("L must be at least 1")
    if is_identity(a1) or is_identity(a2):
        return False
    letters = [("a1", a1), ("a1^-1", invert(a1)),
               ("a2", a2), ("a2^-1", invert(a2))]
    inv = [1, 0, 3, 2]
    ends = a1.space.endpoints()
    witnesses = tuple(sorted({ends[0], ends[len(ends) // 3],
                              ends[(2 * len(ends)) // 3], ends[-1]}))
    frontier = [(witnesses, (), -1)]
    for _ in range(L):
        nxt = []
        for vals, idxs, last in frontier:
            for j, (_, g) in enumerate(letters):
                if last >= 0 and inv[j] == last:
                    continue
                vals2 = tuple(apply(g, v) for v in vals)
                if vals2 == witnesses:
                    # the word fixes every witness: compare as a full map
                    m = letters[idxs[0]][1] if idxs else None
                    for k in idxs[1:]:
                        m = compose(letters[k][1], m)
                    m = g if m is None else compose(g, m)
                    if is_identity(m):
                        return False
                nxt.append((vals2, idxs + (j,), j))
        frontier = nxt
    return True


# ---------------------------------------------------------------------------
# invariant cell measures


def _cells_compatible(maps: Sequence[PAHomeo], space: CompactSet,
                      depth: int) -> bool:
    cells = measure_cells(space, depth)
    los = {l for l, _ in cells}
    his = {h for _, h in cells}
    return all(b.lo in los and b.hi in his
               for g in maps for b in g.branches)


def _invariance_rows(maps, space, cells):
    """Equality rows (coeffs, 0) for mu(g^{-1} c) = mu(c), expressible
    constraints only, plus the total-mass row (ones, 1)."""
    nvar = len(cells)
    rows, rhs = [[Fraction(1)] * nvar], [Fraction(1)]
    for g in maps:
        for ci, js in enumerate(preimage_cell_indices(g, cells, space)):
            if js is None:
                continue
            row = [Fraction(0)] * nvar
            row[ci] += 1
            for j in js:
                row[j] -= 1
            if any(v != 0 for v in row):
                rows.append(row)
                rhs.append(Fraction(0))
    return rows, rhs


def _check_invariant(maps, space, cells, masses) -> bool:
    rows, rhs = _invariance_rows(maps, space, cells)
    return all(sum(c * m for c, m in zip(row, masses)) == b
               for row, b in zip(rows, rhs))


def solve_invariant_measure(gens, depth: int, d_max: int = 6):
    """Exact feasibility of {mu(g^-1 c) = mu(c), sum mu = 1, mu >= 0} over
    depth-d cells, then a marginal-consistency ladder up to d_max.

    Returns a certificate, or a falsy InfeasibilityReport carrying the
    exact phase-1 gap when the system has no solution.
    """
    named = _named(gens)
    maps = list(named.values())
    space = maps[0].space
    d = depth
    while d <= d_max and not _cells_compatible(maps, space, d):
        d += 1
    if d > d_max:
        raise CertifyError(f"generators not cell-aligned at any depth <= {d_max}")

    cells = measure_cells(space, d)
    rows, rhs = _invariance_rows(maps, space, cells)
    res = solve_feasibility(rows, rhs)
    if not res.feasible:
        return InfeasibilityReport(d, res.gap)
    masses = list(res.solution)

    consistency = d
    prev_cells, prev_masses = cells, masses
    for d2 in range(d + 1, d_max + 1):
        cells2 = measure_cells(space, d2)
        children = [[j for j, (l2, h2) in enumerate(cells2)
                     if l <= l2 and h2 <= h] for l, h in prev_cells]
        # cheap candidate first: split each parent mass uniformly
        cand = [Fraction(0)] * len(cells2)
        for kids, m in zip(children, prev_masses):
            for j in kids:
                cand[j] = m / len(kids)
        if _check_invariant(maps, space, cells2, cand):
            consistency, prev_cells, prev_masses = d2, cells2, cand
            continue
        rows2, rhs2 = _invariance_rows(maps, space, cells2)
        for kids, m in zip(children, prev_masses):
            row = [Fraction(0)] * len(cells2)
            for j in kids:
                row[j] = Fraction(1)
            rows2.append(row)
            rhs2.append(m)
        res2 = solve_feasibility(rows2, rhs2)
        if not res2.feasible:
            break
        consistency, prev_cells, prev_masses = d2, cells2, list(res2.solution)
    return InvariantMeasureCertificate(
        d, CellMeasure(d, tuple(masses), True), consistency)


def verify_invariant_measure(gens, cert: InvariantMeasureCertificate) -> Verdict:
    """Standalone re-check of a serialized invariant-measure certificate."""
    named = _named(gens)
    maps = list(named.values())
    space = maps[0].space
    cells = measure_cells(space, cert.depth)
    masses = cert.measure.masses
    if len(masses) != len(cells):
        return Verdict(False, "mass vector does not match the cell count")
    if any(m < 0 for m in masses):
        return Verdict(False, "negative mass")
    if sum(masses) != 1:
        return Verdict(False, "masses do not sum to 1")
    if not _check_invariant(maps, space, cells, masses):
        return Verdict(False, "invariance equation violated")
    return Verdict(True)


def verify_finite_orbit(gens, cert: FiniteOrbitCertificate) -> Verdict:
    """Standalone re-check of a serialized finite-orbit certificate."""
    named = _named(gens)
    maps = list(named.values())
    pts = set(cert.orbit)
    if not pts:
        return Verdict(False, "empty orbit")
    for op in maps + [invert(g) for g in maps]:
        for p in pts:
            if apply(op, p) not in pts:
                return Verdict(False, f"orbit not stable at {p}")
    return Verdict(True)


# ---------------------------------------------------------------------------
# periodic points and Morse-Smale


@dataclass(frozen=True)
class PeriodicReport:
    points: tuple  # (point, period, multiplier), least periods, sorted
    families: tuple  # (lo, hi, period) intervals of non-hyperbolic points

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def periodic_points(f: PAHomeo, max_period: int) -> PeriodicReport:
    """Exact enumeration by branch itineraries: for each feasible cyclic
    branch sequence the composed affine fixed-point equation is solved and
    the solution kept iff it lies in K and follows the claimed branches.
    Composed slope 1 with zero offset is a non-hyperbolic family."""
    if max_period < 1:
        raise CertifyError("max_period must be at least 1")
    K = f.space
    found = {}
    fams = []

    def record_family(lo, hi, p):
        for flo, fhi, fp in fams:
            if p % fp == 0 and flo <= lo and hi <= fhi:
                return
        fams.append((lo, hi, p))

    def dfs(dlo, dhi, s, t, depth, target):
        if depth == target:
            if s != 1:
                x = t / (1 - s)
                if dlo <= x <= dhi and K.contains(x) and \
                        (K.ifs is None or K.contains_limit_point(x)):
                    if x not in found:
                        found[x] = (depth, s)
            elif t == 0 and dlo < dhi:
                record_family(dlo, dhi, depth)
            return
        lo_img, hi_img = sorted((s * dlo + t, s * dhi + t))
        for b in f.branches:
            nlo, nhi = max(lo_img, b.lo), min(hi_img, b.hi)
            if nlo > nhi:
                continue
            if s > 0:
                d2 = ((nlo - t) / s, (nhi - t) / s)
            else:
                d2 = ((nhi - t) / s, (nlo - t) / s)
            dfs(max(d2[0], dlo), min(d2[1], dhi),
                b.slope * s, b.slope * t + b.offset, depth + 1, target)

    for p in range(1, max_period + 1):
        for b0 in f.branches:
            dfs(b0.lo, b0.hi, b0.slope, b0.offset, 1, p)
    pts = tuple(sorted((x, per, mult) for x, (per, mult) in found.items()))
    return PeriodicReport(pts, tuple(fams))


def _constraining_slope_max(f: PAHomeo, region: Region) -> Fraction:
    """Max |slope| over branches whose source meets the region in more than
    one point of K.  A branch touching the region only in an isolated point
    constrains no difference quotient there, so it is vacuous for the
    pointwise slope bound."""
    best = Fraction(0)
    for b in f.branches:
        inter = Region.from_pieces(
            f.space, (Piece(b.lo, b.hi, True, True),)).intersect(region)
        if inter.is_empty() or inter.diameter() == 0:
            continue
        best = max(best, abs(b.slope))
    return best


def check_morse_smale(f: PAHomeo, A: Region, B: Region):
    """Certificate iff |f'| < 1 off A, |(f^-1)'| < 1 off B, A and B are
    disjoint, and all periodic points up to the horizon are hyperbolic and
    sit in A or B; the image inclusion f(K off A) in B, though implied by
    the slope bounds, is re-verified explicitly."""
    K = f.space
    if A.space != K or B.space != K:
        raise CertifyError("regions live on a different space")
    if A.is_empty() or B.is_empty():
        return Rejection("A and B must be nonempty")
    if not A.disjoint_from(B):
        return Rejection("A meets B")
    off_a = Region.whole(K).difference(A)
    off_b = Region.whole(K).difference(B)
    if off_a.is_empty() or off_b.is_empty():
        return Rejection("A or B covers the whole space")
    if _constraining_slope_max(f, off_a) >= 1:
        return Rejection("slope off A not below 1")
    finv = invert(f)
    if _constraining_slope_max(finv, off_b) >= 1:
        return Rejection("inverse slope off B not below 1")
    if not image(f, off_a).subset_of(B):
        return Rejection("image of K off A escapes B")
    horizon = max(4, min(6, len(f.branches)))
    rep = periodic_points(f, horizon)
    if rep.families:
        return Rejection("non-hyperbolic periodic family")
    for x, per, mult in rep.points:
        if abs(mult) == 1:
            return Rejection(f"non-hyperbolic periodic point {x}")
        if not (A.contains(x) or B.contains(x)):
            return Rejection(f"periodic point {x} outside A and B")
    return MorseSmaleCertificate(f, rep.points, A, B)


def find_morse_smale(model: WalkModel, eps, n_max: int = 40, runs: int = 20):
    """Samples words of the symmetric walk and certifies the first one that
    is Morse-Smale with A from repulsor clusters and B from attracting
    fixed points, both fattened by eps."""
    if not model.is_symmetric:
        raise CertifyError("Morse-Smale search requires a symmetric model")
    eps = rat(eps)
    if not 0 < eps < 1:
        raise CertifyError("need 0 < eps < 1")
    K = model.space
    for _, _, w, A, B in _contraction_candidates(model, eps, 4, n_max, runs):
        for e in (eps, eps / 3):
            a_reg = epsilon_neighborhood_of_values(A, e, K)
            b_reg = epsilon_neighborhood_of_values(B, e, K)
            if not a_reg.disjoint_from(b_reg):
                continue
            cert = check_morse_smale(w, a_reg, b_reg)
            if cert:
                return cert
    return None
