"""Delay-differential amplitude equations for two giant atoms.

Each ordered pair of distinct coupling points (p on atom j, q on atom j')
contributes a delayed feedback term to dc_j/dt,

    -(gamma/2) * exp(i(phi_p - phi_q)) * exp(i theta_pq) * c_j'(t - tau_pq) * H(t - tau_pq),

on top of the instantaneous decay -gamma * c_j(t).  Summing the two
same-atom orderings gives the familiar -gamma cos(dphi) exp(i theta) self
term.  Terms that land on the same (target, source, delay) key interfere
and may cancel exactly; `canonicalize` merges them and drops the zeros.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field, replace

from .geometry import ATOMS, Layout, pair_metrics

SUPPRESSION_TOL = 1e-12
DELAY_KEY_TOL = 1e-12


@dataclass(frozen=True)
class DelayTerm:
    target: str
    source: str
    coefficient: complex
    delay: float

    def __post_init__(self):
        if self.delay < 0:
            raise ValueError(f"delay must be >= 0, got {self.delay}")
        if not cmath.isfinite(self.coefficient):
            raise ValueError("coefficient must be finite")


@dataclass(frozen=True)
class EquationSet:
    gamma: float = 1.0
    terms: tuple[DelayTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")

    @property
    def instantaneous_decay(self) -> dict[str, float]:
        return {j: -self.gamma for j in ATOMS}

    @property
    def delays(self) -> list[float]:
        return sorted({t.delay for t in self.terms})

    def with_zero_delays(self) -> EquationSet:
        """Same coefficients with every delay collapsed to 0 (Markovian limit)."""
        return replace(self, terms=tuple(replace(t, delay=0.0) for t in self.terms))

    def self_terms(self, atom: str) -> list[DelayTerm]:
        return [t for t in self.terms if t.target == atom and t.source == atom]

    def cross_terms(self, target: str) -> list[DelayTerm]:
        return [t for t in self.terms if t.target == target and t.source != target]


@dataclass(frozen=True)
class PathEntry:
    source: str
    target: str
    delay: float
    coefficient: complex
    status: str


@dataclass
class PathReport:
    entries: list[PathEntry] = field(default_factory=list)

    @property
    def active(self) -> list[PathEntry]:
        return [e for e in self.entries if e.status == "active"]

    @property
    def suppressed(self) -> list[PathEntry]:
        return [e for e in self.entries if e.status == "suppressed"]


def build_equations(layout: Layout, gamma: float = 1.0) -> EquationSet:
    """Raw (unmerged) equation set: one sub-term per ordered pair of distinct points."""
    terms = []
    for p in layout.points:
        for q in layout.points:
            if p is q:
                continue
            m = pair_metrics(layout, p, q)
            coeff = -0.5 * gamma * cmath.exp(1j * (p.coupling_phase - q.coupling_phase)) \
                * cmath.exp(1j * m.phase_shift)
            terms.append(DelayTerm(p.atom, q.atom, coeff, m.delay))
    return EquationSet(gamma, tuple(terms))


def _merge(terms, gamma):
    """Group terms by (target, source, delay) within DELAY_KEY_TOL; returns (key, sum) in sorted order."""
    ordered = sorted(terms, key=lambda t: (t.target, t.source, t.delay))
    groups: list[list] = []
    for t in ordered:
        if groups:
            g = groups[-1]
            if g[0] == t.target and g[1] == t.source and abs(t.delay - g[2]) <= DELAY_KEY_TOL:
                g[3] += t.coefficient
                continue
        groups.append([t.target, t.source, t.delay, complex(t.coefficient)])
    return groups


def canonicalize(eqset: EquationSet, tolerance: float = SUPPRESSION_TOL) -> EquationSet:
    kept = tuple(
        DelayTerm(tgt, src, coeff, delay)
        for tgt, src, delay, coeff in _merge(eqset.terms, eqset.gamma)
        if abs(coeff) >= tolerance * eqset.gamma
    )
    return EquationSet(eqset.gamma, kept)


def path_report(raw: EquationSet, canonical: EquationSet | None = None,
                tolerance: float = SUPPRESSION_TOL) -> PathReport:
    """Merged coefficient and active/suppressed status for every raw (source, target, delay) key."""
    if canonical is None:
        canonical = canonicalize(raw, tolerance)
    entries = []
    for tgt, src, delay, coeff in _merge(raw.terms, raw.gamma):
        alive = any(
            t.target == tgt and t.source == src and abs(t.delay - delay) <= DELAY_KEY_TOL
            for t in canonical.terms
        )
        entries.append(PathEntry(src, tgt, delay, coeff, "active" if alive else "suppressed"))
    return PathReport(entries)


def term_list(eqset: EquationSet) -> list[tuple[str, str, float, complex]]:
    """(target, source, delay, coefficient) tuples, handy for comparisons."""
    return [(t.target, t.source, t.delay, t.coefficient) for t in eqset.terms]


def same_terms(x: EquationSet, y: EquationSet, atol: float = 1e-12) -> bool:
    if len(x.terms) != len(y.terms) or x.gamma != y.gamma:
        return False
    return all(
        s.target == t.target and s.source == t.source
        and abs(s.delay - t.delay) <= DELAY_KEY_TOL and abs(s.coefficient - t.coefficient) < atol
        for s, t in zip(x.terms, y.terms)
    )
