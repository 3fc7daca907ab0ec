"""Polygonal curve words on the torus and the retraced-arc excision calculus.

A curve is a word of straight oriented segments (flow pieces parallel to the
direction vector, transverse pieces everything else), stored as a basepoint
lift plus displacement steps; segment lifts are reconstructed by accumulation
so consecutive segments are incident by construction. Retraced-arc detection
works modulo the integer lattice: an arc and its reversal may sit in
different fundamental-domain copies.

Matching is exact up to MATCH_TOL = 1e-12; synthetic inputs realize their
coincidences exactly, near misses are left alone. When a retraced overlap
covers part of a segment, the segment is split at the overlap boundary
before any rewrite, so excision always removes whole segments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import EndpointMismatch, StaleLocation
from .torus_flow import TORUS_TOL, DirectionVector, TorusPoint, circle_dist, reduce_mod1

MATCH_TOL = 1e-12      # retraced arcs must coincide to this, lift and mod 1
MIN_OVERLAP = 1e-9     # anti-parallel overlaps shorter than this are noise
COLLINEAR_TOL = 1e-9   # sine of the angle separating flow from transverse
_FRACTION_TOL = 1e-9   # split points closer than this to 0/1 are dropped

_KINDS = ("flow", "transverse")


class Segment:
    """One straight oriented piece: a start lift and a displacement."""

    __slots__ = ("start", "displacement", "kind")

    def __init__(self, start, displacement, kind: str):
        start = np.asarray(start, dtype=float).copy()
        displacement = np.asarray(displacement, dtype=float).copy()
        if start.shape != displacement.shape or start.ndim != 1:
            raise ValueError("start and displacement must be matching vectors")
        if kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}")
        if float(np.max(np.abs(displacement))) < 1e-15:
            raise ValueError("segment displacement must be nonzero")
        self.start = start
        self.displacement = displacement
        self.kind = kind

    @property
    def end(self) -> np.ndarray:
        return self.start + self.displacement

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.displacement))

    def reversed(self) -> "Segment":
        return Segment(self.end, -self.displacement, self.kind)

    def __repr__(self) -> str:
        return f"Segment({self.kind}, {self.start.tolist()} + {self.displacement.tolist()})"


def _sine_angle(v: np.ndarray, direction: np.ndarray) -> float:
    u = direction / np.linalg.norm(direction)
    v = np.asarray(v, dtype=float)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return 0.0
    rest = v - np.dot(v, u) * u
    return float(np.linalg.norm(rest) / nv)


def flow_segment(start, t: float, alpha: DirectionVector) -> Segment | None:
    """Flow piece of duration t; None when t == 0 (no empty segments)."""
    if t == 0.0:
        return None
    return Segment(start, float(t) * alpha.alpha, "flow")


def transverse_segment(start, displacement, alpha: DirectionVector | None = None) -> Segment:
    if alpha is not None and _sine_angle(displacement, alpha.alpha) <= COLLINEAR_TOL:
        raise ValueError("transverse displacement is collinear with the flow")
    return Segment(start, displacement, "transverse")


class PiecewiseCurve:
    """A finite word of segments with a continuous lift.

    Treated as immutable; every operation returns a new curve. The empty
    word is the trivial curve at its basepoint.
    """

    def __init__(self, basepoint_lift, segments: Sequence[Segment] = ()):
        bp = np.asarray(
            getattr(basepoint_lift, "coords", basepoint_lift), dtype=float
        ).copy()
        if bp.ndim != 1 or bp.size < 1:
            raise ValueError("basepoint must be a nonempty vector")
        normalized: list[Segment] = []
        cursor = bp
        for seg in segments:
            gap = seg.start - cursor
            if float(np.max(np.abs(gap - np.round(gap)))) > MATCH_TOL:
                raise ValueError("segments are not incident up to a deck shift")
            normalized.append(Segment(cursor, seg.displacement, seg.kind))
            cursor = cursor + seg.displacement
        self.basepoint_lift = bp
        self.segments = tuple(normalized)
        self._arrays: tuple[np.ndarray, np.ndarray] | None = None

    @classmethod
    def from_steps(cls, basepoint_lift, steps: Iterable[tuple[str, Sequence[float]]],
                   alpha: DirectionVector | None = None) -> "PiecewiseCurve":
        """Build by accumulation from (kind, displacement) steps.

        With alpha given, each step's kind is validated against the
        collinearity tolerance.
        """
        bp = np.asarray(
            getattr(basepoint_lift, "coords", basepoint_lift), dtype=float
        ).copy()
        segs: list[Segment] = []
        cursor = bp
        for kind, disp in steps:
            seg = Segment(cursor, disp, kind)
            if alpha is not None:
                sine = _sine_angle(seg.displacement, alpha.alpha)
                if kind == "flow" and sine > COLLINEAR_TOL:
                    raise ValueError("flow step is not collinear with the direction")
                if kind == "transverse" and sine <= COLLINEAR_TOL:
                    raise ValueError("transverse step is collinear with the direction")
            segs.append(seg)
            cursor = cursor + seg.displacement
        return cls(bp, segs)

    @classmethod
    def trivial(cls, basepoint_lift) -> "PiecewiseCurve":
        return cls(basepoint_lift, ())

    @property
    def d(self) -> int:
        return self.basepoint_lift.size

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    @property
    def is_trivial(self) -> bool:
        return not self.segments

    @property
    def start_lift(self) -> np.ndarray:
        return self.basepoint_lift

    @property
    def end_lift(self) -> np.ndarray:
        if not self.segments:
            return self.basepoint_lift
        return self.segments[-1].end

    @property
    def start(self) -> TorusPoint:
        return TorusPoint(self.start_lift)

    @property
    def end(self) -> TorusPoint:
        return TorusPoint(self.end_lift)

    @property
    def is_closed(self) -> bool:
        return circle_dist(self.start_lift, self.end_lift) <= TORUS_TOL

    @property
    def total_length(self) -> float:
        return float(sum(s.length for s in self.segments))

    def steps(self) -> list[tuple[str, np.ndarray]]:
        return [(s.kind, s.displacement) for s in self.segments]

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(lift starts, displacements) stacked, cached; empty is (0, d)."""
        if self._arrays is None:
            if self.segments:
                starts = np.stack([s.start for s in self.segments])
                disps = np.stack([s.displacement for s in self.segments])
            else:
                starts = np.zeros((0, self.d))
                disps = np.zeros((0, self.d))
            self._arrays = (starts, disps)
        return self._arrays

    def reverse(self) -> "PiecewiseCurve":
        steps = [(s.kind, -s.displacement) for s in reversed(self.segments)]
        return PiecewiseCurve.from_steps(self.end_lift, steps)

    def __repr__(self) -> str:
        return (
            f"PiecewiseCurve({self.basepoint_lift.tolist()}, "
            f"{self.n_segments} segments)"
        )


def concatenate(g1: PiecewiseCurve, g2: PiecewiseCurve, tol: float = TORUS_TOL) -> PiecewiseCurve:
    """g1 followed by g2; g2's lifts are rebased onto g1's end lift.

    The junction must agree on the torus within tol.
    """
    if g1.d != g2.d:
        raise ValueError("dimension mismatch")
    if circle_dist(g1.end_lift, g2.start_lift) > tol:
        raise EndpointMismatch(
            f"cannot concatenate: gap {circle_dist(g1.end_lift, g2.start_lift):.3e}"
        )
    return PiecewiseCurve.from_steps(g1.start_lift, g1.steps() + g2.steps())


def reverse(g: PiecewiseCurve) -> PiecewiseCurve:
    return g.reverse()


class CurveFamily:
    """An ordered finite multiset of curves."""

    def __init__(self, curves: Iterable[PiecewiseCurve]):
        self.curves = tuple(curves)
        if self.curves:
            d = self.curves[0].d
            if any(c.d != d for c in self.curves):
                raise ValueError("family members must share a dimension")

    def __len__(self) -> int:
        return len(self.curves)

    def __iter__(self) -> Iterator[PiecewiseCurve]:
        return iter(self.curves)

    def __getitem__(self, i: int) -> PiecewiseCurve:
        return self.curves[i]

    @property
    def total_length(self) -> float:
        return float(sum(c.total_length for c in self.curves))

    def __repr__(self) -> str:
        return f"CurveFamily({len(self.curves)} curves)"


def _fingerprint(family: CurveFamily) -> tuple:
    return tuple(
        (
            tuple(c.basepoint_lift.tolist()),
            tuple((s.kind, tuple(s.displacement.tolist())) for s in c.segments),
        )
        for c in family
    )


@dataclass(frozen=True)
class RetracedArcLocation:
    """Where a retraced arc sits, expressed in the split family.

    The arc r occupies segments [start_a, start_a + length) of curve
    curve_a; its reversal occupies [start_b, start_b + length) of curve
    curve_b (traversed so that segment start_b + t reverses segment
    start_a + length - 1 - t). For a single-curve match curve_a == curve_b
    and the r block ends strictly before the reversal block starts.
    """

    fingerprint: tuple
    split: CurveFamily
    curve_a: int
    start_a: int
    curve_b: int
    start_b: int
    length: int
    arc_length: float

    @property
    def same_curve(self) -> bool:
        return self.curve_a == self.curve_b


def _collect_split_fractions(family: CurveFamily) -> dict[tuple[int, int], set[float]]:
    """Anti-parallel overlap boundaries, as parameter fractions per segment.

    Works modulo the integer lattice: segment s' overlaps segment s when
    some deck translate of s' runs backwards along s's supporting line.
    """
    entries = []  # (curve idx, seg idx, start, disp, length, unit)
    for ci, curve in enumerate(family):
        for si, seg in enumerate(curve.segments):
            ln = seg.length
            entries.append((ci, si, seg.start, seg.displacement, ln, seg.displacement / ln))
    cuts: dict[tuple[int, int], set[float]] = {}
    if len(entries) < 2:
        return cuts
    units = np.stack([e[5] for e in entries])
    dots = units @ units.T
    pairs = np.argwhere(dots <= -1.0 + 1e-12)
    for ia, ib in pairs:
        if ia >= ib:
            continue
        ca, sa, xa, va, la, _ = entries[ia]
        cb, sb, xb, vb, lb, _ = entries[ib]
        c = lb / la
        r0 = xb - xa
        jstar = int(np.argmax(np.abs(va)))
        vj = va[jstar]
        a_lo, a_hi = -_FRACTION_TOL, 1.0 + c + _FRACTION_TOL
        # a = (r0[jstar] - k) / vj must land in [a_lo, a_hi]
        k_bounds = sorted((r0[jstar] - a_lo * vj, r0[jstar] - a_hi * vj))
        for k in range(int(np.ceil(k_bounds[0] - 1e-9)), int(np.floor(k_bounds[1] + 1e-9)) + 1):
            a = (r0[jstar] - k) / vj
            kvec = np.round(r0 - a * va)
            if float(np.max(np.abs(r0 - a * va - kvec))) > 1e-9:
                continue
            lo, hi = max(0.0, a - c), min(1.0, a)
            if (hi - lo) * la < MIN_OVERLAP:
                continue
            cuts.setdefault((ca, sa), set()).update((lo, hi))
            cuts.setdefault((cb, sb), set()).update(((a - hi) / c, (a - lo) / c))
    return cuts


def _split_family(family: CurveFamily) -> CurveFamily:
    cuts = _collect_split_fractions(family)
    if not cuts:
        return family
    new_curves = []
    for ci, curve in enumerate(family):
        steps: list[tuple[str, np.ndarray]] = []
        for si, seg in enumerate(curve.segments):
            fracs = sorted(cuts.get((ci, si), ()))
            points = [0.0]
            for f in fracs:
                if f - points[-1] > _FRACTION_TOL and 1.0 - f > _FRACTION_TOL:
                    points.append(f)
            points.append(1.0)
            for f0, f1 in zip(points, points[1:]):
                steps.append((seg.kind, (f1 - f0) * seg.displacement))
        new_curves.append(PiecewiseCurve.from_steps(curve.basepoint_lift, steps))
    return CurveFamily(new_curves)


def _reverse_match_table(ca: PiecewiseCurve, cb: PiecewiseCurve, tol: float) -> np.ndarray:
    """anti[p, q] is True when segment q of cb is the exact reversal of
    segment p of ca, up to a deck translate."""
    sa, da = ca.arrays()
    sb, db = cb.arrays()
    if sa.shape[0] == 0 or sb.shape[0] == 0:
        return np.zeros((sa.shape[0], sb.shape[0]), dtype=bool)
    disp_gap = np.max(np.abs(da[:, None, :] + db[None, :, :]), axis=-1)
    starts = reduce_mod1(sa)
    ends = reduce_mod1(sb + db)
    delta = np.abs(starts[:, None, :] - ends[None, :, :]) % 1.0
    pos_gap = np.max(np.minimum(delta, 1.0 - delta), axis=-1)
    kinds_a = np.array([s.kind == "flow" for s in ca.segments])
    kinds_b = np.array([s.kind == "flow" for s in cb.segments])
    kind_ok = kinds_a[:, None] == kinds_b[None, :]
    return (disp_gap <= tol) & (pos_gap <= tol) & kind_ok


def find_retraced_arc(family: CurveFamily, tol: float = MATCH_TOL) -> RetracedArcLocation | None:
    """Longest retraced arc in the family, None when there is none.

    Segments are first split at every anti-parallel overlap boundary, so the
    reported arc occupies whole segments of the returned split family. Ties
    between equally long arcs break towards the lowest (curve index, segment
    index).
    """
    split = _split_family(family)
    best = None  # (-arc_len, ca, pa, cb, qb, m)
    for i in range(len(split)):
        for j in range(i, len(split)):
            anti = _reverse_match_table(split[i], split[j], tol)
            if not anti.any():
                continue
            lengths = np.array([s.length for s in split[i].segments])
            ma, mb = anti.shape
            for p in range(ma):
                for qe in range(mb):
                    if not anti[p, qe]:
                        continue
                    m = 0
                    while (
                        p + m < ma
                        and qe - m >= 0
                        and anti[p + m, qe - m]
                        and (i != j or 2 * (m + 1) <= qe - p + 1)
                    ):
                        m += 1
                    if m == 0:
                        continue
                    arc_len = float(lengths[p : p + m].sum())
                    key = (-arc_len, i, p, j, qe - m + 1, m)
                    if best is None or key < best:
                        best = key
    if best is None:
        return None
    neg_len, ca, pa, cb, qb, m = best
    return RetracedArcLocation(
        fingerprint=_fingerprint(family),
        split=split,
        curve_a=ca,
        start_a=pa,
        curve_b=cb,
        start_b=qb,
        length=m,
        arc_length=-neg_len,
    )


def _rebuild(pieces: Sequence[Segment]) -> PiecewiseCurve | None:
    """Join segment pieces into one curve; empty words are dropped (None).

    Later pieces are rebased by accumulation; junctions must already agree
    on the torus (guaranteed by the retraced-arc match).
    """
    if not pieces:
        return None
    cursor = pieces[0].start
    steps = []
    for seg in pieces:
        if circle_dist(cursor, seg.start) > 1e-9:
            raise AssertionError("excision produced a discontinuous word")
        steps.append((seg.kind, seg.displacement))
        cursor = cursor + seg.displacement
    return PiecewiseCurve.from_steps(pieces[0].start, steps)


def simple_excision(family: CurveFamily, loc: RetracedArcLocation) -> CurveFamily:
    """Remove one retraced arc, preserving boundary and broad equivalence.

    Single curve a r b r~ c  ->  {a c, b};  two curves a r b and c r~ d ->
    {a d c b} when the second is closed, {a d, c b} when it is open. Empty
    words are dropped.
    """
    if _fingerprint(family) != loc.fingerprint:
        raise StaleLocation("family changed since the arc was located")
    split = loc.split
    m = loc.length
    out: list[PiecewiseCurve | None] = []
    if loc.same_curve:
        segs = list(split[loc.curve_a].segments)
        a = segs[: loc.start_a]
        b = segs[loc.start_a + m : loc.start_b]
        c = segs[loc.start_b + m :]
        out = [_rebuild(a + c), _rebuild(b)]
        result = (
            list(split.curves[: loc.curve_a])
            + [w for w in out if w is not None]
            + list(split.curves[loc.curve_a + 1 :])
        )
        return CurveFamily(result)
    segs1 = list(split[loc.curve_a].segments)
    segs2 = list(split[loc.curve_b].segments)
    a = segs1[: loc.start_a]
    b = segs1[loc.start_a + m :]
    c = segs2[: loc.start_b]
    dpart = segs2[loc.start_b + m :]
    if split[loc.curve_b].is_closed:
        out = [_rebuild(a + dpart + c + b)]
    else:
        out = [_rebuild(a + dpart), _rebuild(c + b)]
    result = []
    for k, crv in enumerate(split):
        if k == loc.curve_a:
            result.extend(w for w in out if w is not None)
        elif k == loc.curve_b:
            continue
        else:
            result.append(crv)
    return CurveFamily(result)


def maximal_excision(family: CurveFamily, tol: float = MATCH_TOL) -> CurveFamily:
    """Excise retraced arcs, longest first, until none remain.

    Terminates because each step strictly removes twice the arc's length
    from the family's total segment length.
    """
    current = family
    for _ in range(10_000):
        loc = find_retraced_arc(current, tol)
        if loc is None:
            return current
        current = simple_excision(current, loc)
    raise RuntimeError("excision did not terminate; this should be impossible")


def boundary_multiset(
    family: CurveFamily | PiecewiseCurve, tol: float = TORUS_TOL
) -> list[tuple[TorusPoint, float]]:
    """Signed endpoint multiset: sum over curves of (end - start).

    Coincident points (mod 1, within tol) cancel exactly; output is sorted
    by coordinates for determinism.
    """
    curves = family.curves if isinstance(family, CurveFamily) else (family,)
    atoms: list[list] = []  # [coords, weight]

    def add(coords: np.ndarray, w: float):
        red = reduce_mod1(coords)
        for atom in atoms:
            if circle_dist(atom[0], red) <= tol:
                atom[1] += w
                return
        atoms.append([red, w])

    for c in curves:
        add(c.end_lift, 1.0)
        add(c.start_lift, -1.0)
    out = [
        (TorusPoint(coords), float(w))
        for coords, w in atoms
        if abs(w) > 1e-9
    ]
    out.sort(key=lambda pw: tuple(pw[0].coords.tolist()))
    return out


def boundaries_equal(b1, b2, tol: float = TORUS_TOL) -> bool:
    """Multiset equality of two signed point sets, mod 1 within tol."""
    merged: list[list] = []

    def add(point: TorusPoint, w: float):
        for atom in merged:
            if circle_dist(atom[0], point.coords) <= tol:
                atom[1] += w
                return
        merged.append([point.coords, w])

    for p, w in b1:
        add(p, w)
    for p, w in b2:
        add(p, -w)
    return all(abs(w) <= 1e-9 for _, w in merged)
