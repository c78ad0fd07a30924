"""Closed-form concurrence references.

All arguments are dimensionless: ``gt`` is Gamma*t and ``gtau`` is
Gamma*tau0.  Names follow the configuration and coupling-phase case they
describe:

* ``nested_I`` / ``nested_II``: nested atoms, phases (0, pi/2, 0, pi/2) and
  (0, pi/2, pi/2, 0) for (phi_a1, phi_a2, phi_b1, phi_b2);
* ``separate_*``: separate atoms with phases (0, pi/2, 0, pi/2);
* ``sb_I`` / ``sb_II``: separate or braided atoms with phases
  (0, pi/2, pi/2, 0) and (0, 3pi/2, 0, pi/2).

Unless noted the initial state is (|eg> + |ge>)/sqrt(2).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np


class OutOfDomain(ValueError):
    """The closed form does not apply at the requested parameters."""


@dataclass(frozen=True)
class OracleResult:
    value: float
    validity_domain: str


DOMAINS = {
    "nested_I_markov": "nested, case I phases, |+>, Gamma*tau0 = 0, any theta0, t >= 0",
    "nested_I_steady": "nested, case I phases, |+>, theta0 = pi (mod 2pi), t -> inf",
    "nested_II_markov": "nested, case II phases, |+>, Gamma*tau0 = 0, any theta0, t >= 0",
    "nested_II_steady": "nested, case II phases, |+>, theta0 = pi/2 (mod pi), t -> inf",
    "separate_special_markov": "separate, (0,pi/2,0,pi/2) phases, |+>, Gamma*tau0 = 0, theta0 in {n pi, pi/2 + n pi}",
    "separate_piecewise": "separate, (0,pi/2,0,pi/2) phases, |+>, 0 <= t <= 3 tau0",
    "sb_I_markov": "separate or braided, (0,pi/2,pi/2,0) phases, |+> (parity +1) or |-> (parity -1), Gamma*tau0 = 0",
    "sb_I_steady": "separate or braided, (0,pi/2,pi/2,0) phases, |+> at theta0 = pi or |-> at theta0 = 2pi, t -> inf",
    "sb_II_markov": "separate or braided, (0,3pi/2,0,pi/2) phases, |+> or |->, Gamma*tau0 = 0",
    "sb_II_steady": "separate or braided, (0,3pi/2,0,pi/2) phases, |+> or |->, theta0 = pi (mod 2pi), t -> inf",
    "sb_II_steady_phase": "separate or braided, (0,3pi/2,0,pi/2) phases, (|eg> + e^{i phi}|ge>)/sqrt2, theta0 = pi, t -> inf",
}


def _check_delay(gtau):
    if gtau < 0:
        raise OutOfDomain(f"time delay must be >= 0, got {gtau}")


def nested_I_markov(theta0, gt):
    return np.exp(-2.0 * (1.0 + np.cos(theta0)) * np.asarray(gt))


def nested_I_steady(gtau):
    _check_delay(gtau)
    return 1.0 / (1.0 + gtau) ** 2


def nested_II_markov(theta0, gt):
    return np.exp(-2.0 * (1.0 + np.cos(2.0 * theta0)) * np.asarray(gt))


def nested_II_steady(gtau):
    _check_delay(gtau)
    return 1.0 / (1.0 + 2.0 * gtau) ** 2


def _family(theta0, tol=1e-9):
    """0 for theta0 = n pi, 1 for theta0 = pi/2 + n pi, None otherwise."""
    r = math.remainder(theta0, math.pi)
    if abs(r) < tol:
        return 0
    if abs(abs(r) - math.pi / 2) < tol:
        return 1
    return None


def separate_special_markov(theta0, gt):
    fam = _family(theta0)
    gt = np.asarray(gt, dtype=float)
    if fam == 0:
        return np.exp(-4.0 * gt)
    if fam == 1:
        return np.exp(-2.0 * gt) * (2.0 * gt + 1.0)
    raise OutOfDomain(f"closed form only at theta0 = n pi or pi/2 + n pi, got {theta0}")


def separate_piecewise_chi(theta0, gtau, gt):
    """(chi_+, chi_-) on [0, 3 tau0] for the separate configuration."""
    _check_delay(gtau)
    if gt < 0 or gt > 3 * gtau + 1e-12:
        raise OutOfDomain(f"closed form covers 0 <= t <= 3 tau0, got t={gt}, tau0={gtau}")
    if gt < gtau:
        return math.exp(-gt), 0j
    chi_m = -0.5j * (gt - gtau) * cmath.exp(1j * theta0) * math.exp(-(gt - gtau))
    if gt < 2 * gtau:
        return complex(math.exp(-gt)), chi_m
    s = gt - 2 * gtau
    e2 = cmath.exp(2j * theta0)
    chi_p = math.exp(-gt) * (1 + math.exp(2 * gtau) * (-e2 * s + e2 * s * s / 8))
    return chi_p, chi_m


def separate_piecewise(theta0, gtau, gt):
    """Concurrence on [0, 3 tau0]; the middle segment uses its explicit real form."""
    _check_delay(gtau)
    if gt < 0 or gt > 3 * gtau + 1e-12:
        raise OutOfDomain(f"closed form covers 0 <= t <= 3 tau0, got t={gt}, tau0={gtau}")
    if gt < gtau:
        return math.exp(-2 * gt)
    if gt < 2 * gtau:
        u = gt - gtau
        re = math.exp(-2 * gt) - 0.25 * u * u * math.exp(-2 * u)
        im = u * math.exp(-(2 * gt - gtau)) * math.cos(theta0)
        return math.hypot(re, im)
    p, m = separate_piecewise_chi(theta0, gtau, gt)
    return abs(abs(p) ** 2 - abs(m) ** 2 + 2j * (p * m.conjugate()).imag)


def sb_I_markov(theta0, gt, parity=+1):
    if parity not in (1, -1):
        raise ValueError("parity must be +1 (|+>) or -1 (|->)")
    rate = 1.0 + parity * (0.5 * np.cos(theta0) + 0.5 * np.cos(3.0 * theta0))
    return np.exp(-2.0 * rate * np.asarray(gt))


def sb_I_steady(gtau):
    _check_delay(gtau)
    return 1.0 / (1.0 + 2.0 * gtau) ** 2


def sb_II_markov(theta0, gt):
    gt = np.asarray(gt, dtype=float)
    z = gt * np.exp(2j * theta0) * np.cos(theta0)
    return np.exp(-2.0 * gt) * np.sqrt(np.cos(2.0 * z.imag) ** 2 + np.sinh(2.0 * z.real) ** 2)


def sb_II_steady(gtau):
    _check_delay(gtau)
    return 1.0 / (2.0 * (1.0 + 2.0 * gtau) ** 2)


def sb_II_steady_phase(gtau, phi):
    _check_delay(gtau)
    return (1.0 + math.sin(phi)) / (2.0 * (1.0 + 2.0 * gtau) ** 2)


def evaluate(name: str, *args, **kwargs) -> OracleResult:
    """Named oracle with its validity domain attached."""
    fn = globals().get(name)
    if name not in DOMAINS or fn is None:
        raise KeyError(f"unknown oracle {name!r}")
    return OracleResult(float(fn(*args, **kwargs)), DOMAINS[name])
