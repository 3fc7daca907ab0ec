"""The linearization map from torus points to twisted path currents.

Fixing a basepoint x, a point y is represented by a path from x to y,
twisted so that coboundaries vanish; its identity is the finite table of
twisted evaluations on a test battery of one-forms. Flowing y for time t
shifts every table entry by t times the form's flow average, which is the
equivariance law, and the plain dx entries read off y - x on the torus,
which is the Albanese projection.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .currents import CurrentHandle, TwistedCurrent, evaluate_twisted, twist
from .curves import PiecewiseCurve
from .errors import BasepointMismatch, EndpointMismatch, SeparationNotFound
from .spectral import OneForm, solve_for_form
from .torus_flow import (
    RESONANCE_EPS,
    DirectionVector,
    TorusPoint,
    circle_dist,
    flow,
    reduce_mod1,
)

DEFAULT_CUTOFF = 3     # battery modulation frequencies up to this sup norm
SEPARATION_TOL = 1e-9  # evaluation gaps below this never count as separation

Battery = tuple[tuple[str, OneForm], ...]


def canonical_modes(d: int, cutoff: int) -> list[tuple[int, ...]]:
    """Nonzero frequencies with sup norm <= cutoff, one per +- pair.

    The representative has its first nonzero entry positive; order is
    lexicographic, so batteries are reproducible.
    """
    out = []
    for n in itertools.product(range(-cutoff, cutoff + 1), repeat=d):
        if all(v == 0 for v in n):
            continue
        first = next(v for v in n if v != 0)
        if first < 0:
            continue
        out.append(n)
    return out


def mode_label(n) -> str:
    return "[" + ",".join(str(int(v)) for v in n) + "]"


def build_battery(d: int, cutoff: int = DEFAULT_CUTOFF) -> Battery:
    """The test forms: every dx_j, then cos/sin modulations of each dx_j."""
    if cutoff < 1:
        raise ValueError("battery cutoff must be >= 1")
    forms: list[tuple[str, OneForm]] = [
        (f"dx{j + 1}", OneForm.dx(d, j)) for j in range(d)
    ]
    for n in canonical_modes(d, cutoff):
        for trig in ("cos", "sin"):
            for j in range(d):
                forms.append(
                    (f"{trig}{mode_label(n)}dx{j + 1}", OneForm.modulated(trig, n, j))
                )
    return tuple(forms)


@dataclass(frozen=True, eq=False)
class LinearizationPoint:
    """A point of the target group, held as a representative path current.

    evaluations maps battery form ids to twisted values; it is the finite
    shadow of the current and everything downstream reads only this table.
    """

    endpoint: TorusPoint
    representative: TwistedCurrent
    evaluations: dict[str, float]
    basepoint: TorusPoint
    battery: Battery

    def __call__(self, form_id: str) -> float:
        return self.evaluations[form_id]


@dataclass(frozen=True, eq=False)
class GeneratorCurrent:
    """The direction cocycle: each form's flow average c_eta."""

    values: dict[str, float]
    battery: Battery

    def __call__(self, form_id: str) -> float:
        return self.values[form_id]


@dataclass(frozen=True, eq=False)
class AlbanesePoint:
    """Pairing with the dx basis, reduced modulo the integer period lattice."""

    coords: np.ndarray

    def close_to(self, other: "AlbanesePoint", tol: float = 1e-9) -> bool:
        return circle_dist(self.coords, other.coords) <= tol


@dataclass(frozen=True)
class SeparationReport:
    """Outcome of an injectivity probe between two linearization points."""

    endpoints_differ: bool
    separated: bool
    form: str | None
    gap: float
    same_class: bool | None  # set only when the endpoints coincide


def _as_point(p) -> TorusPoint:
    if isinstance(p, TorusPoint):
        return p
    return TorusPoint(np.asarray(getattr(p, "coords", p), dtype=float))


def linearize(
    y,
    x,
    path: PiecewiseCurve,
    alpha: DirectionVector,
    battery: Battery | None = None,
    cutoff: int = DEFAULT_CUTOFF,
    eps_res: float = RESONANCE_EPS,
) -> LinearizationPoint:
    """Twist the path current and tabulate it on the battery.

    The path must run from x to y on the torus; which path is chosen only
    moves the result by a loop current.
    """
    y = _as_point(y)
    x = _as_point(x)
    if circle_dist(path.start_lift, x.coords) > 1e-12:
        raise EndpointMismatch("path does not start at the basepoint")
    if circle_dist(path.end_lift, y.coords) > 1e-12:
        raise EndpointMismatch("path does not end at the requested point")
    if battery is None:
        battery = build_battery(path.d, cutoff)
    rep = twist(CurrentHandle(path), alpha, eps_res)
    evaluations = {fid: evaluate_twisted(rep, form) for fid, form in battery}
    return LinearizationPoint(
        endpoint=y,
        representative=rep,
        evaluations=evaluations,
        basepoint=x,
        battery=battery,
    )


def generator(
    alpha: DirectionVector,
    battery: Battery | None = None,
    cutoff: int = DEFAULT_CUTOFF,
    eps_res: float = RESONANCE_EPS,
) -> GeneratorCurrent:
    """Flow averages of every battery form; the dx entries are alpha itself."""
    if battery is None:
        battery = build_battery(alpha.d, cutoff)
    values = {
        fid: solve_for_form(form, alpha, eps_res=eps_res).c for fid, form in battery
    }
    return GeneratorCurrent(values=values, battery=battery)


def check_equivariance(
    p: LinearizationPoint,
    t: float,
    alpha: DirectionVector,
    eps_res: float = RESONANCE_EPS,
) -> float:
    """Max battery gap of (point flowed for time t) vs (table shifted by ct).

    The flowed point is represented by the original path extended with the
    flow segment of duration t, the representative for which the shift law
    is an exact identity; the return value is numerical dust.
    """
    source = p.representative.base.source
    steps = source.steps()
    if t != 0.0:
        steps = steps + [("flow", float(t) * alpha.alpha)]
    extended = PiecewiseCurve.from_steps(source.start_lift, steps)
    target = flow(p.endpoint, t, alpha)
    q = linearize(
        target, p.basepoint, extended, alpha, battery=p.battery, eps_res=eps_res
    )
    gen = generator(alpha, battery=p.battery, eps_res=eps_res)
    return max(
        abs(q.evaluations[fid] - p.evaluations[fid] - gen.values[fid] * t)
        for fid, _ in p.battery
    )


def albanese(p: LinearizationPoint) -> AlbanesePoint:
    """The dx entries of the table, reduced mod 1."""
    d = p.endpoint.coords.size
    coords = np.array([p.evaluations[f"dx{j + 1}"] for j in range(d)])
    return AlbanesePoint(coords=reduce_mod1(coords))


def _theta_probes(alpha: DirectionVector, battery: Battery):
    """Flow-annihilating combinations of battery forms.

    theta = alpha_j * (g dx_k) - alpha_k * (g dx_j) contracts to zero with
    the flow field, so its twisted value is the raw integral; the gap is a
    linear combination of existing table entries.
    """
    ids = {fid for fid, _ in battery}
    d = alpha.d
    labels = sorted(
        {fid[3:].split("dx")[0] for fid, _ in battery if fid.startswith("cos")}
    )
    for trig in ("cos", "sin"):
        for label in labels:
            for j in range(d):
                for k in range(j + 1, d):
                    fj = f"{trig}{label}dx{j + 1}"
                    fk = f"{trig}{label}dx{k + 1}"
                    if fj in ids and fk in ids:
                        name = f"theta[{trig}{label},{j + 1},{k + 1}]"
                        aj = float(alpha.alpha[j])
                        ak = float(alpha.alpha[k])
                        yield name, ((fk, aj), (fj, -ak))


def injectivity_probe(
    p1: LinearizationPoint, p2: LinearizationPoint, alpha: DirectionVector
) -> SeparationReport:
    """Search the battery for a form telling the two points apart.

    Probe order: the dx forms first (they read endpoint coordinates), then
    flow-annihilating theta combinations, then the time-normalized form.
    A sub-threshold gap everywhere raises SeparationNotFound; a finite
    battery can be inconclusive but never refutes injectivity.
    """
    if not p1.basepoint.close_to(p2.basepoint, 1e-12):
        raise BasepointMismatch("probes need a common basepoint")
    if tuple(fid for fid, _ in p1.battery) != tuple(fid for fid, _ in p2.battery):
        raise ValueError("probes need a common battery")
    d = p1.endpoint.coords.size
    diff = {fid: p1.evaluations[fid] - p2.evaluations[fid] for fid, _ in p1.battery}
    endpoints_differ = not p1.endpoint.close_to(p2.endpoint, 1e-12)

    if not endpoints_differ:
        worst_id = max(diff, key=lambda fid: abs(diff[fid]))
        worst = abs(diff[worst_id])
        same = worst <= SEPARATION_TOL
        return SeparationReport(
            endpoints_differ=False,
            separated=False,
            form=None if same else worst_id,
            gap=0.0 if same else worst,
            same_class=same,
        )

    for j in range(d):
        fid = f"dx{j + 1}"
        if abs(diff[fid]) > SEPARATION_TOL:
            return SeparationReport(
                endpoints_differ=True,
                separated=True,
                form=fid,
                gap=abs(diff[fid]),
                same_class=None,
            )
    for name, combo in _theta_probes(alpha, p1.battery):
        gap = abs(sum(weight * diff[fid] for fid, weight in combo))
        if gap > SEPARATION_TOL:
            return SeparationReport(
                endpoints_differ=True,
                separated=True,
                form=name,
                gap=gap,
                same_class=None,
            )
    j0 = int(np.argmax(np.abs(alpha.alpha)))
    gap = abs(diff[f"dx{j0 + 1}"] / float(alpha.alpha[j0]))
    if gap > SEPARATION_TOL:
        return SeparationReport(
            endpoints_differ=True, separated=True, form="eta0", gap=gap, same_class=None
        )
    raise SeparationNotFound(
        "no battery form separates the two points at the current cutoff"
    )
