"""Scenario configuration files (TOML).

A config has up to five tables::

    [layout]      topology + theta0/tau0, or nested theta_alpha/tau_alpha/
                  theta_beta/tau_beta, or an explicit ``points`` array
    [phases]      preset = "nested-case-I" or values = [phi_a1, phi_a2, phi_b1, phi_b2]
    [initial]     state = "plus" | "minus" | "eg" | "ge" | "phase:<phi>"
    [integrator]  t_end, dt, window
    [sweep]       output = "time" | "steady", axes = [...], times = {...}

Angles may be given as numbers or as strings such as ``"pi/2"``.
"""
from __future__ import annotations

import math
import re
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .dde_model import EquationSet, build_equations, canonicalize
from .geometry import CouplingPoint, Layout, LayoutError, nested_layout, proportional_delay, standard_layout
from .integrator import DEFAULT_DT, DEFAULT_WINDOW, InitialState
from .scenarios import phases as resolve_phases

SWEEP_PARAMS = ("theta0", "tau0", "theta_alpha", "phi_a1", "phi_a2", "phi_b1", "phi_b2", "init_phase")
_PHI_INDEX = {"phi_a1": 0, "phi_a2": 1, "phi_b1": 2, "phi_b2": 3}


class ConfigError(ValueError):
    """Invalid scenario configuration."""


_NUM = re.compile(r"^\s*([-+]?\d*\.?\d*(?:[eE][-+]?\d+)?)\s*\*?\s*(pi)?\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def angle(value, where: str = "") -> float:
    """Parse a number or an expression like ``"3pi/2"``, ``"-pi"``, ``"0.5*pi"``."""
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        m = _NUM.match(value)
        if m and (m.group(1) not in ("", "+", "-") or m.group(2)):
            coef = m.group(1)
            c = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
            if m.group(2):
                c *= math.pi
            if m.group(3):
                c /= float(m.group(3))
            return c
    raise ConfigError(f"{where}: cannot read {value!r} as a number")


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def values(self) -> list[float]:
        if self.count == 1:
            return [self.start]
        step = (self.stop - self.start) / (self.count - 1)
        return [self.start + i * step for i in range(self.count)]


@dataclass(frozen=True)
class ScenarioConfig:
    layout_kind: str = "standard"  # standard | nested | points
    layout_params: dict = field(default_factory=dict)
    coupling_phases: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    initial: str = "plus"
    t_end: float = 10.0
    dt: float = DEFAULT_DT
    window: float = DEFAULT_WINDOW
    output: str = "time"
    axes: tuple[Axis, ...] = ()
    times: Axis | None = None
    name: str = ""

    def __post_init__(self):
        if self.t_end < 0:
            raise ConfigError("integrator.t_end must be >= 0")
        if self.dt <= 0:
            raise ConfigError("integrator.dt must be > 0")
        if len(self.axes) > 2:
            raise ConfigError("at most 2 sweep axes")
        for ax in self.axes:
            if ax.name not in SWEEP_PARAMS:
                raise ConfigError(f"unknown sweep axis {ax.name!r}; choose from {SWEEP_PARAMS}")
            if ax.count < 1:
                raise ConfigError(f"sweep axis {ax.name!r}: count must be >= 1")
        if self.output not in ("time", "steady"):
            raise ConfigError("sweep.output must be 'time' or 'steady'")
        if self.output == "time" and len(self.axes) > 1:
            raise ConfigError("a time-resolved sweep takes one parameter axis (time is the second)")
        if self.times is not None and self.times.count < 1:
            raise ConfigError("sweep.times.count must be >= 1")

    # -- resolution ------------------------------------------------------
    def resolved(self, overrides: dict[str, float] | None = None) -> tuple[Layout, InitialState]:
        """Layout and initial state with sweep-parameter overrides applied."""
        ov = dict(overrides or {})
        phis = list(self.coupling_phases)
        for key, i in _PHI_INDEX.items():
            if key in ov:
                phis[i] = ov.pop(key)
        init = InitialState.parse(self.initial)
        if "init_phase" in ov:
            init = InitialState.with_phase(ov.pop("init_phase"))
        p = dict(self.layout_params)
        try:
            if self.layout_kind == "standard":
                for k in ("theta0", "tau0"):
                    if k in ov:
                        p[k] = ov.pop(k)
                layout = standard_layout(p["topology"], p["theta0"], p["tau0"], phis)
            elif self.layout_kind == "nested":
                if "theta_alpha" in ov:
                    p["theta_alpha"] = ov.pop("theta_alpha")
                if "theta0" in ov:
                    p["theta_beta"] = ov.pop("theta0")
                if "tau0" in ov:
                    p["tau_beta"] = ov.pop("tau0")
                tau_a = p["tau_alpha"]
                if tau_a == "proportional":
                    tau_a = proportional_delay(p["theta_alpha"], p["theta_beta"], p["tau_beta"])
                layout = nested_layout(p["theta_alpha"], tau_a, p["theta_beta"], p["tau_beta"], phis)
            else:
                pts = p["points"]
                if any(k in _PHI_INDEX for k in (overrides or {})):
                    pts = [replace(q, coupling_phase=phis[_PHI_INDEX["phi_" + q.label]]) for q in pts]
                layout = Layout(tuple(pts))
        except LayoutError as exc:
            raise ConfigError(f"layout: {exc}") from None
        if ov:
            raise ConfigError(f"sweep axes {sorted(ov)} do not apply to a {self.layout_kind} layout")
        return layout, init

    def equations(self, overrides=None) -> tuple[EquationSet, InitialState]:
        layout, init = self.resolved(overrides)
        return canonicalize(build_equations(layout)), init


def _table(data: dict, key: str) -> dict:
    t = data.get(key, {})
    if not isinstance(t, dict):
        raise ConfigError(f"[{key}] must be a table")
    return t


def _axis(d, where) -> Axis:
    if not isinstance(d, dict):
        raise ConfigError(f"{where}: expected a table with name/start/stop/count")
    try:
        count = d["count"]
        if not isinstance(count, int) or isinstance(count, bool):
            raise ConfigError(f"{where}.count must be an integer")
        return Axis(str(d.get("name", "t")), angle(d["start"], f"{where}.start"),
                    angle(d["stop"], f"{where}.stop"), count)
    except KeyError as exc:
        raise ConfigError(f"{where}: missing key {exc.args[0]!r}") from None


def from_dict(data: dict, name: str = "") -> ScenarioConfig:
    known = {"layout", "phases", "initial", "integrator", "sweep", "name"}
    extra = set(data) - known
    if extra:
        raise ConfigError(f"unknown config section(s) {sorted(extra)}")
    lay = _table(data, "layout")
    phs = _table(data, "phases")
    ini = _table(data, "initial")
    itg = _table(data, "integrator")
    swp = _table(data, "sweep")

    if "preset" in phs and "values" in phs:
        raise ConfigError("[phases]: give either preset or values, not both")
    try:
        if "values" in phs:
            phis = resolve_phases([angle(v, "phases.values") for v in phs["values"]])
        else:
            phis = resolve_phases(phs.get("preset", "zero"))
    except ValueError as exc:
        raise ConfigError(f"[phases]: {exc}") from None

    if "points" in lay:
        kind = "points"
        pts = []
        seen: dict[str, int] = {}
        for i, q in enumerate(lay["points"]):
            where = f"layout.points[{i}]"
            try:
                atom = q["atom"]
                seen[atom] = seen.get(atom, 0) + 1
                idx = int(q.get("index", seen[atom]))
                phi = q.get("coupling_phase")
                if phi is None and atom in ("a", "b") and idx in (1, 2):
                    phi = phis[_PHI_INDEX[f"phi_{atom}{idx}"]]
                pts.append(CouplingPoint(atom, idx, angle(q["phase_coord"], where),
                                         float(q["delay_coord"]), angle(phi or 0.0, where)))
            except KeyError as exc:
                raise ConfigError(f"{where}: missing key {exc.args[0]!r}") from None
            except LayoutError as exc:
                raise ConfigError(f"{where}: {exc}") from None
        params = {"points": tuple(pts)}
        phis = tuple(0.0 for _ in range(4))
        by_label = {p.label: p.coupling_phase for p in pts}
        if len(by_label) == 4:
            phis = tuple(by_label.get(k, 0.0) for k in ("a1", "a2", "b1", "b2"))
    elif "theta_alpha" in lay or "theta_beta" in lay:
        kind = "nested"
        try:
            tau_a = lay["tau_alpha"]
            params = {
                "theta_alpha": angle(lay["theta_alpha"], "layout.theta_alpha"),
                "tau_alpha": tau_a if tau_a == "proportional" else angle(tau_a, "layout.tau_alpha"),
                "theta_beta": angle(lay["theta_beta"], "layout.theta_beta"),
                "tau_beta": angle(lay["tau_beta"], "layout.tau_beta"),
            }
        except KeyError as exc:
            raise ConfigError(f"[layout]: missing key {exc.args[0]!r}") from None
    else:
        kind = "standard"
        topo = lay.get("topology")
        if topo not in ("separate", "braided", "nested"):
            raise ConfigError(f"layout.topology must be separate|braided|nested, got {topo!r}")
        params = {"topology": topo,
                  "theta0": angle(lay.get("theta0", 0.0), "layout.theta0"),
                  "tau0": angle(lay.get("tau0", 0.0), "layout.tau0")}

    axes = tuple(_axis(a, f"sweep.axes[{i}]") for i, a in enumerate(swp.get("axes", [])))
    times = _axis(dict(swp["times"], name="t"), "sweep.times") if "times" in swp else None
    state = str(ini.get("state", "plus"))
    try:
        InitialState.parse(state)
    except ValueError as exc:
        raise ConfigError(f"[initial]: {exc}") from None
    cfg = ScenarioConfig(
        layout_kind=kind,
        layout_params=params,
        coupling_phases=tuple(phis),
        initial=state,
        t_end=float(itg.get("t_end", 10.0)),
        dt=float(itg.get("dt", DEFAULT_DT)),
        window=float(itg.get("window", DEFAULT_WINDOW)),
        output=str(swp.get("output", "time")),
        axes=axes,
        times=times,
        name=str(data.get("name", name)),
    )
    cfg.resolved({a.name: a.start for a in axes})  # surface layout errors at load time
    return cfg


def load(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        return from_dict(data, name=path.stem)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
