"""Oracle-versus-simulator check matrix used by ``giantent verify``.

Every row compares one simulator result against an independent reference
(closed form, hand-written term list, or a second simulation) and records
the worst deviation.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import oracles
from .dde_model import DelayTerm, EquationSet, canonicalize
from .integrator import InitialState, integrate, solve_markovian, steady_state
from .observables import chi_concurrence, concurrence, density_matrix, to_chi
from .scenarios import nested_equations, standard_equations

PI = math.pi
THETA_GRID = [k * PI / 4 for k in range(9)]
MARKOV_T = 10.0
MARKOV_DT = 0.01
STEADY_T = 50.0
ORDER_DT = (0.1, 0.05)


@dataclass
class Check:
    name: str
    family: str
    run: Callable[[], float]
    threshold: float
    kind: str = "error"  # "error": value < threshold; "ratio": value >= threshold
    note: str = ""


@dataclass
class CheckResult:
    name: str
    family: str
    value: float
    threshold: float
    kind: str
    passed: bool


def _markov_error(topology, case, init, oracle):
    worst = 0.0
    for th in THETA_GRID:
        eq = standard_equations(topology, th, 0.0, case)
        tr = solve_markovian(eq, init, MARKOV_T, MARKOV_DT)
        worst = max(worst, float(np.max(np.abs(tr.concurrence() - oracle(th, tr.times)))))
    return worst


def _piecewise_error(theta0, gtau=0.8, dt=1e-3):
    eq = standard_equations("separate", theta0, gtau, "sep-case-IV")
    tr = integrate(eq, InitialState.plus(), 3 * gtau, dt)
    mask = tr.times <= 3 * gtau + 1e-12
    ref = np.array([oracles.separate_piecewise(theta0, gtau, t) for t in tr.times[mask]])
    return float(np.max(np.abs(tr.concurrence()[mask] - ref)))


def _order_ratio(theta0, gtau=0.8):
    coarse, fine = (_piecewise_error(theta0, gtau, dt) for dt in ORDER_DT)
    return coarse / fine


def _steady_error(topology, case, theta0, gtau, init, ref):
    tr = integrate(standard_equations(topology, theta0, gtau, case), init, STEADY_T)
    return abs(steady_state(tr).value - ref)


def expected_terms(rows: list[tuple[str, str, complex, float]]) -> EquationSet:
    return canonicalize(EquationSet(1.0, tuple(DelayTerm(*r) for r in rows)), 0.0)


def reduction_reference(name: str, theta0: float, tau0: float) -> EquationSet:
    """Hand-written term lists of the reduced equations."""
    e = lambda k: cmath.exp(1j * k * theta0)  # noqa: E731
    if name == "single_path":
        rows = [("a", "b", -e(1), tau0), ("b", "a", -e(1), tau0)]
    elif name == "double_path":
        rows = [("a", "b", -e(2), 2 * tau0), ("b", "a", -e(2), 2 * tau0)]
    elif name == "sb_I_pair":
        rows = [("a", "b", -0.5 * e(1), tau0), ("a", "b", -0.5 * e(3), 3 * tau0),
                ("b", "a", -0.5 * e(1), tau0), ("b", "a", -0.5 * e(3), 3 * tau0)]
    elif name == "sb_II_pair":
        rows = [("a", "b", 0.5j * e(1), tau0), ("a", "b", 0.5j * e(3), 3 * tau0),
                ("b", "a", -0.5j * e(1), tau0), ("b", "a", -0.5j * e(3), 3 * tau0)]
    else:
        raise KeyError(name)
    return expected_terms(rows)


def term_error(got: EquationSet, want: EquationSet) -> float:
    """Largest coefficient mismatch; inf when the term keys differ."""
    if len(got.terms) != len(want.terms):
        return math.inf
    worst = 0.0
    for g, w in zip(got.terms, want.terms):
        if (g.target, g.source) != (w.target, w.source) or abs(g.delay - w.delay) > 1e-12:
            return math.inf
        worst = max(worst, abs(g.coefficient - w.coefficient))
    return worst


_REDUCTIONS = [
    ("single_path", "nested", "nested-case-I"),
    ("double_path", "nested", "nested-case-II"),
    ("sb_I_pair", "separate", "sb-case-I"),
    ("sb_I_pair", "braided", "sb-case-I"),
    ("sb_II_pair", "separate", "sb-case-II"),
    ("sb_II_pair", "braided", "sb-case-II"),
]


def _reduction_error(eq_name, topology, case, tau0=0.8):
    worst = 0.0
    for th in (0.0, 0.7, PI / 2, PI, 2.3):
        got = standard_equations(topology, th, tau0, case)
        worst = max(worst, term_error(got, reduction_reference(eq_name, th, tau0)))
    return worst


def _equivalence_error(case, theta0, init, tau0=0.8, t_end=10.0):
    a = integrate(standard_equations("separate", theta0, tau0, case), init, t_end)
    b = integrate(standard_equations("braided", theta0, tau0, case), init, t_end)
    return float(np.max(np.abs(a.amps - b.amps)))


def _immunity_error(theta_beta=PI, tau_beta=0.8, t_end=10.0, count=11):
    from .geometry import proportional_delay
    series = []
    for k in range(count):
        ta = 2 * PI * k / (count - 1)
        eq = nested_equations(ta, proportional_delay(ta, theta_beta, tau_beta), theta_beta, tau_beta)
        series.append(integrate(eq, InitialState.plus(), t_end).concurrence())
    return float(max(np.max(np.abs(s - series[0])) for s in series))


def small_atom_equations(theta0: float, tau0: float, gamma: float = 1.0) -> EquationSet:
    c = -gamma * cmath.exp(1j * theta0)
    return EquationSet(gamma, (DelayTerm("a", "b", c, tau0), DelayTerm("b", "a", c, tau0)))


def _small_atom_error(theta0, tau0=0.8, t_end=10.0):
    giant = integrate(standard_equations("nested", theta0, tau0, "nested-case-I"), InitialState.plus(), t_end)
    small = integrate(small_atom_equations(theta0, tau0), InitialState.plus(), t_end)
    return float(np.max(np.abs(giant.amps - small.amps)))


def _random_pairs(n, seed=7):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    z /= np.linalg.norm(z, axis=1)[:, None]
    return z * np.sqrt(rng.uniform(0, 1, size=(n, 1)))


def _chi_identity_error(n=10_000):
    z = _random_pairs(n)
    return max(abs(chi_concurrence(to_chi(a, b)) - float(concurrence(a, b))) for a, b in z)


def _density_error(n=2_000):
    worst = 0.0
    for a, b in _random_pairs(n, seed=11):
        rho = density_matrix(a, b)
        ev = np.linalg.eigvalsh(rho)
        worst = max(worst, abs(np.trace(rho).real - 1), max(0.0, -ev.min()),
                    np.max(np.abs(rho - rho.conj().T)))
    return worst


def build_checks() -> list[Check]:
    checks: list[Check] = []
    add = checks.append
    P, M = InitialState.plus(), InitialState.minus()
    add(Check("markov:nested_I", "markov",
              lambda: _markov_error("nested", "nested-case-I", P, oracles.nested_I_markov), 1e-8))
    add(Check("markov:nested_II", "markov",
              lambda: _markov_error("nested", "nested-case-II", P, oracles.nested_II_markov), 1e-8))
    for topo in ("separate", "braided"):
        add(Check(f"markov:sb_I_plus:{topo}", "markov",
                  lambda topo=topo: _markov_error(topo, "sb-case-I", P, lambda th, t: oracles.sb_I_markov(th, t, +1)), 1e-8))
        add(Check(f"markov:sb_I_minus:{topo}", "markov",
                  lambda topo=topo: _markov_error(topo, "sb-case-I", M, lambda th, t: oracles.sb_I_markov(th, t, -1)), 1e-8))
        for label, init in (("plus", P), ("minus", M)):
            add(Check(f"markov:sb_II_{label}:{topo}", "markov",
                      lambda topo=topo, init=init: _markov_error(topo, "sb-case-II", init, oracles.sb_II_markov), 1e-8))
    for th, label in ((PI / 2, "jordan"), (0.0, "npi")):
        add(Check(f"separate_markov:{label}", "separate_markov", lambda th=th: float(np.max(np.abs(
            solve_markovian(standard_equations("separate", th, 0.0, "sep-case-IV"), P, MARKOV_T, MARKOV_DT).concurrence()
            - oracles.separate_special_markov(th, np.arange(int(MARKOV_T / MARKOV_DT) + 1) * MARKOV_DT)))), 1e-8))
    for k in (0, 1, 2, 4):
        th = k * PI / 4
        add(Check(f"piecewise:theta0={k}pi/4", "piecewise", lambda th=th: _piecewise_error(th), 1e-4))
        add(Check(f"order:theta0={k}pi/4", "order", lambda th=th: _order_ratio(th), 8.0, kind="ratio"))
    for gtau in (0.2, 0.8):
        add(Check(f"steady:nested_I:tau0={gtau}", "steady", lambda g=gtau: _steady_error(
            "nested", "nested-case-I", PI, g, P, oracles.nested_I_steady(g)), 1e-3))
        add(Check(f"steady:nested_II:tau0={gtau}", "steady", lambda g=gtau: _steady_error(
            "nested", "nested-case-II", PI / 2, g, P, oracles.nested_II_steady(g)), 1e-3))
        add(Check(f"steady:sb_I:tau0={gtau}", "steady", lambda g=gtau: _steady_error(
            "separate", "sb-case-I", PI, g, P, oracles.sb_I_steady(g)), 1e-3))
        add(Check(f"steady:sb_II:tau0={gtau}", "steady", lambda g=gtau: _steady_error(
            "braided", "sb-case-II", PI, g, P, oracles.sb_II_steady(g)), 1e-3))
        for phi, plabel in ((-PI / 2, "-pi/2"), (0.0, "0"), (PI / 2, "pi/2")):
            add(Check(f"steady:sb_II_phase:phi={plabel}:tau0={gtau}", "steady",
                      lambda g=gtau, phi=phi: _steady_error("separate", "sb-case-II", PI, g,
                                                           InitialState.with_phase(phi),
                                                           oracles.sb_II_steady_phase(g, phi)), 1e-3))
    for eq_name, topo, case in _REDUCTIONS:
        add(Check(f"reduction:{eq_name}:{topo}", "reduction",
                  lambda e=eq_name, t=topo, c=case: _reduction_error(e, t, c), 1e-12))
    for case in ("sb-case-I", "sb-case-II"):
        for th, tl in ((PI / 2, "pi/2"), (PI, "pi")):
            for label, init in (("plus", P), ("minus", M)):
                add(Check(f"equivalence:{case}:theta0={tl}:{label}", "equivalence",
                          lambda c=case, th=th, init=init: _equivalence_error(c, th, init), 1e-10))
    add(Check("immunity:theta_alpha", "immunity", _immunity_error, 1e-10))
    for th, tl in ((PI, "pi"), (0.7, "0.7")):
        add(Check(f"small_atom:theta0={tl}", "small_atom", lambda th=th: _small_atom_error(th), 1e-12))
    add(Check("property:chi_identity", "property", _chi_identity_error, 1e-12))
    add(Check("property:density_matrix", "property", _density_error, 1e-12))
    return checks


def run_checks(only: str | None = None, tol: float | None = None) -> list[CheckResult]:
    checks = build_checks()
    if only is not None:
        exact = [c for c in checks if c.name == only]
        checks = exact or [c for c in checks if c.family == only]
        if not checks:
            raise KeyError(f"no check named {only!r}")
    out = []
    for c in checks:
        value = float(c.run())
        if c.kind == "ratio":
            thr = c.threshold
            ok = value >= thr
        else:
            thr = c.threshold if tol is None else tol
            ok = value < thr
        out.append(CheckResult(c.name, c.family, value, thr, c.kind, bool(ok)))
    return out
