"""Coupling-point layouts for two giant atoms on a waveguide.

Every point carries cumulative coordinates measured from the leftmost
point: an accumulated propagation phase ``k0 * x`` and an accumulated
travel time in units of 1/Gamma.  Pairwise phase shifts and delays are
differences of these coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

ATOMS = ("a", "b")
TOPOLOGIES = ("separate", "braided", "nested")

# atom/index order of the standard layouts, left to right
_STANDARD_ORDER = {
    "separate": (("a", 1), ("a", 2), ("b", 1), ("b", 2)),
    "braided": (("a", 1), ("b", 1), ("a", 2), ("b", 2)),
    # atom a sits inside atom b
    "nested": (("b", 1), ("a", 1), ("a", 2), ("b", 2)),
}


class LayoutError(ValueError):
    """Raised for an invalid coupling-point arrangement."""


@dataclass(frozen=True)
class CouplingPoint:
    atom: str
    index: int
    phase_coord: float
    delay_coord: float
    coupling_phase: float = 0.0

    def __post_init__(self):
        if self.atom not in ATOMS:
            raise LayoutError(f"unknown atom {self.atom!r}")
        if self.index not in (1, 2):
            raise LayoutError(f"point index must be 1 or 2, got {self.index}")
        for name in ("phase_coord", "delay_coord"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise LayoutError(f"{name} must be finite and >= 0, got {v}")
        if not math.isfinite(self.coupling_phase):
            raise LayoutError("coupling_phase must be finite")

    @property
    def label(self) -> str:
        return f"{self.atom}{self.index}"


@dataclass(frozen=True)
class PairMetrics:
    phase_shift: float
    delay: float


@dataclass(frozen=True)
class Layout:
    points: tuple[CouplingPoint, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) != 4:
            raise LayoutError(f"a layout needs exactly 4 points, got {len(pts)}")
        labels = sorted(p.label for p in pts)
        if labels != ["a1", "a2", "b1", "b2"]:
            raise LayoutError(f"each atom must own points 1 and 2, got {labels}")
        for p, q in zip(pts, pts[1:]):
            if q.phase_coord < p.phase_coord or q.delay_coord < p.delay_coord:
                raise LayoutError(
                    f"points must be ordered along the waveguide ({p.label} -> {q.label})"
                )

    def point(self, label: str) -> CouplingPoint:
        for p in self.points:
            if p.label == label:
                return p
        raise KeyError(f"no coupling point {label!r}")

    def atom_points(self, atom: str) -> tuple[CouplingPoint, ...]:
        return tuple(p for p in self.points if p.atom == atom)

    @property
    def topology(self) -> str:
        return classify(p.atom for p in self.points)

    def coupling_phases(self) -> dict[str, float]:
        return {p.label: p.coupling_phase for p in self.points}


def classify(atom_sequence: Iterable[str]) -> str:
    """Topology from the left-to-right atom labels alone."""
    seq = tuple(atom_sequence)
    if seq in (("a", "a", "b", "b"), ("b", "b", "a", "a")):
        return "separate"
    if seq in (("a", "b", "a", "b"), ("b", "a", "b", "a")):
        return "braided"
    if seq in (("a", "b", "b", "a"), ("b", "a", "a", "b")):
        return "nested"
    raise LayoutError(f"cannot classify atom sequence {seq}")


def _phase_map(coupling_phases) -> dict[str, float]:
    if isinstance(coupling_phases, dict):
        missing = {"a1", "a2", "b1", "b2"} - set(coupling_phases)
        if missing:
            raise LayoutError(f"missing coupling phases {sorted(missing)}")
        return {k: float(coupling_phases[k]) for k in ("a1", "a2", "b1", "b2")}
    vals = [float(v) for v in coupling_phases]
    if len(vals) != 4:
        raise LayoutError("coupling_phases needs 4 values (phi_a1, phi_a2, phi_b1, phi_b2)")
    return dict(zip(("a1", "a2", "b1", "b2"), vals))


def from_gaps(order: Sequence[tuple[str, int]], gaps: Sequence[tuple[float, float]],
              coupling_phases) -> Layout:
    """Build a layout from the point order and the three adjacent (phase, delay) gaps."""
    if len(gaps) != len(order) - 1:
        raise LayoutError("need one gap between each pair of adjacent points")
    phis = _phase_map(coupling_phases)
    phase, delay = 0.0, 0.0
    points = []
    for k, (atom, idx) in enumerate(order):
        if k:
            gp, gd = gaps[k - 1]
            if gp < 0 or gd < 0:
                raise LayoutError(f"gap values must be >= 0, got ({gp}, {gd})")
            phase += gp
            delay += gd
        points.append(CouplingPoint(atom, idx, phase, delay, phis[f"{atom}{idx}"]))
    return Layout(tuple(points))


def standard_layout(topology: str, gap_phase: float, gap_delay: float,
                    coupling_phases) -> Layout:
    """Four equally spaced points in the canonical order of `topology`.

    For ``nested`` the inner atom is ``a`` (order b1, a1, a2, b2).
    """
    if topology not in _STANDARD_ORDER:
        raise LayoutError(f"topology must be one of {TOPOLOGIES}, got {topology!r}")
    if gap_phase < 0 or gap_delay < 0:
        raise LayoutError("gap_phase and gap_delay must be >= 0")
    gap = (float(gap_phase), float(gap_delay))
    return from_gaps(_STANDARD_ORDER[topology], [gap] * 3, coupling_phases)


def nested_layout(theta_alpha: float, tau_alpha: float, theta_beta: float,
                  tau_beta: float, coupling_phases) -> Layout:
    """Nested layout with inner gap (theta_alpha, tau_alpha) and outer-to-inner gaps (theta_beta, tau_beta)."""
    inner = (float(theta_alpha), float(tau_alpha))
    outer = (float(theta_beta), float(tau_beta))
    if min(inner + outer) < 0:
        raise LayoutError("nested gap values must be >= 0")
    return from_gaps(_STANDARD_ORDER["nested"], [outer, inner, outer], coupling_phases)


def proportional_delay(theta_alpha: float, theta_beta: float, tau_beta: float) -> float:
    """tau_alpha = theta_alpha * tau_beta / theta_beta (zero when theta_beta is zero)."""
    if theta_beta == 0:
        return 0.0
    return theta_alpha * tau_beta / theta_beta


def pair_metrics(layout: Layout, point_i: str | CouplingPoint,
                 point_j: str | CouplingPoint) -> PairMetrics:
    p = point_i if isinstance(point_i, CouplingPoint) else layout.point(point_i)
    q = point_j if isinstance(point_j, CouplingPoint) else layout.point(point_j)
    if p not in layout.points or q not in layout.points:
        raise KeyError("point does not belong to layout")
    return PairMetrics(abs(p.phase_coord - q.phase_coord), abs(p.delay_coord - q.delay_coord))


def translate(layout: Layout, phase_offset: float, delay_offset: float) -> Layout:
    return Layout(tuple(
        CouplingPoint(p.atom, p.index, p.phase_coord + phase_offset,
                      p.delay_coord + delay_offset, p.coupling_phase)
        for p in layout.points
    ))
