"""Named coupling-phase presets and one-line equation builders."""
from __future__ import annotations

import math

from .dde_model import EquationSet, build_equations, canonicalize
from .geometry import nested_layout, standard_layout

PI = math.pi

# (phi_a1, phi_a2, phi_b1, phi_b2)
PHASE_PRESETS = {
    "nested-case-I": (0.0, PI / 2, 0.0, PI / 2),
    "nested-case-II": (0.0, PI / 2, PI / 2, 0.0),
    "sep-case-IV": (0.0, PI / 2, 0.0, PI / 2),
    "sb-case-I": (0.0, PI / 2, PI / 2, 0.0),
    # phi_b2 = pi/2 with phi_a2 = 3pi/2; the swapped assignment does not collapse to two cross delays
    "sb-case-II": (0.0, 3 * PI / 2, 0.0, PI / 2),
    "zero": (0.0, 0.0, 0.0, 0.0),
}


def phases(name_or_values) -> tuple[float, float, float, float]:
    if isinstance(name_or_values, str):
        try:
            return PHASE_PRESETS[name_or_values]
        except KeyError:
            raise ValueError(
                f"unknown phase preset {name_or_values!r}; choose from {sorted(PHASE_PRESETS)}"
            ) from None
    vals = tuple(float(v) for v in name_or_values)
    if len(vals) != 4:
        raise ValueError("need 4 coupling phases (phi_a1, phi_a2, phi_b1, phi_b2)")
    return vals


def standard_equations(topology: str, theta0: float, tau0: float, phase_preset,
                       gamma: float = 1.0) -> EquationSet:
    layout = standard_layout(topology, theta0, tau0, phases(phase_preset))
    return canonicalize(build_equations(layout, gamma))


def nested_equations(theta_alpha: float, tau_alpha: float, theta_beta: float,
                     tau_beta: float, phase_preset="nested-case-I",
                     gamma: float = 1.0) -> EquationSet:
    layout = nested_layout(theta_alpha, tau_alpha, theta_beta, tau_beta, phases(phase_preset))
    return canonicalize(build_equations(layout, gamma))
