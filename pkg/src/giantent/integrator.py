"""Time integration of the two-amplitude delay system.

`integrate` is a method-of-steps RK4 with a cubic Hermite history.
Delayed terms switch on hard at t = delay, which puts kinks in the
solution; the step grid is split at every activation time and at sums of
up to three delays so that no RK step straddles a low-order derivative
jump.  Each history node stores a left and a right derivative so the
interpolant is exact to O(h^4) on both sides of a kink.

`solve_markovian` handles the all-delays-zero case with a closed-form
2x2 matrix exponential.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .dde_model import DELAY_KEY_TOL, EquationSet
from .observables import concurrence_series

DEFAULT_DT = 1e-3
DEFAULT_WINDOW = 5.0
STEADY_SPREAD = 1e-6
DEGENERATE_REL = 1e-9
MAX_SUBSTEPS = 10_000
_IDX = {"a": 0, "b": 1}


@dataclass(frozen=True)
class InitialState:
    c_a0: complex
    c_b0: complex

    def __post_init__(self):
        norm = abs(self.c_a0) ** 2 + abs(self.c_b0) ** 2
        if norm > 1 + 1e-12:
            raise ValueError(f"initial state norm {norm:.12g} exceeds 1")

    @classmethod
    def plus(cls):
        s = 1 / math.sqrt(2)
        return cls(complex(s), complex(s))

    @classmethod
    def minus(cls):
        s = 1 / math.sqrt(2)
        return cls(complex(s), complex(-s))

    @classmethod
    def eg(cls):
        return cls(1 + 0j, 0j)

    @classmethod
    def with_phase(cls, phi: float):
        """(|eg> + e^{i phi}|ge>)/sqrt(2)."""
        s = 1 / math.sqrt(2)
        return cls(complex(s), s * cmath.exp(1j * phi))

    @classmethod
    def parse(cls, spec: str):
        spec = spec.strip().lower()
        if spec == "plus":
            return cls.plus()
        if spec == "minus":
            return cls.minus()
        if spec == "eg":
            return cls.eg()
        if spec == "ge":
            return cls(0j, 1 + 0j)
        if spec.startswith("phase:"):
            return cls.with_phase(float(spec.split(":", 1)[1]))
        raise ValueError(f"unknown initial state {spec!r} (plus | minus | eg | ge | phase:<phi>)")

    def scaled(self, lam: complex) -> InitialState:
        return InitialState(lam * self.c_a0, lam * self.c_b0)


@dataclass
class Trajectory:
    times: np.ndarray
    amps: np.ndarray  # shape (N + 1, 2), columns c_a, c_b

    @property
    def c_a(self) -> np.ndarray:
        return self.amps[:, 0]

    @property
    def c_b(self) -> np.ndarray:
        return self.amps[:, 1]

    def concurrence(self) -> np.ndarray:
        return concurrence_series(self)

    def populations(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


def _grid(t_end: float, dt: float) -> int:
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < 0:
        raise ValueError("t_end must be >= 0")
    return int(math.ceil(t_end / dt - 1e-9))


def _instantaneous_matrix(eqset: EquationSet, terms) -> list[list[complex]]:
    m = [[complex(-eqset.gamma), 0j], [0j, complex(-eqset.gamma)]]
    for t in terms:
        m[_IDX[t.target]][_IDX[t.source]] += t.coefficient
    return m


def _breakpoints(delays: list[float], t_end: float, depth: int = 3) -> list[float]:
    pts = set()
    for k in range(1, depth + 1):
        for combo in itertools.combinations_with_replacement(delays, k):
            s = sum(combo)
            if s <= t_end + DELAY_KEY_TOL:
                pts.add(s)
    out: list[float] = []
    for p in sorted(pts):
        if not out or p - out[-1] > DELAY_KEY_TOL:
            out.append(p)
    return out


def integrate(eqset: EquationSet, init: InitialState, t_end: float,
              dt: float = DEFAULT_DT) -> Trajectory:
    """Integrate the delay system on the grid t_k = k*dt, k = 0..N.

    Terms with delay 0 are treated as instantaneous couplings.  A delayed
    term contributes coefficient * c_source(t - delay) for t >= delay and
    nothing before; history before t = 0 is never read.
    """
    n_out = _grid(t_end, dt)
    instant = [t for t in eqset.terms if t.delay <= DELAY_KEY_TOL]
    delayed = [t for t in eqset.terms if t.delay > DELAY_KEY_TOL]
    (m00, m01), (m10, m11) = _instantaneous_matrix(eqset, instant)

    # group delayed terms by delay: one history lookup serves all of them
    groups: dict[float, list[tuple[int, int, complex]]] = {}
    for t in delayed:
        groups.setdefault(t.delay, []).append((_IDX[t.target], _IDX[t.source], t.coefficient))
    gdelays = sorted(groups)
    gterms = [groups[d] for d in gdelays]
    ng = len(gdelays)

    sub = 1
    if gdelays and gdelays[0] < dt:
        sub = math.ceil(dt / gdelays[0] - 1e-9)
        if sub > MAX_SUBSTEPS:
            raise ValueError(f"delay {gdelays[0]:.3g} too small for dt={dt}; use a smaller dt")
    t_final = n_out * dt
    bps = _breakpoints(gdelays, t_final) if gdelays else []
    snap = max(1e-13, 1e-7 * dt / sub)

    # history: node times, values, right/left derivatives
    T: list[float] = [0.0]
    YA: list[complex] = [complex(init.c_a0)]
    YB: list[complex] = [complex(init.c_b0)]
    FRA: list[complex] = []
    FRB: list[complex] = []
    FLA: list[complex] = [0j]
    FLB: list[complex] = [0j]
    ptr = [0] * ng

    def lookup(g: int, q: float) -> tuple[complex, complex]:
        last = len(T) - 1
        if q >= T[last]:
            return YA[last], YB[last]
        i = ptr[g]
        while T[i + 1] < q:
            i += 1
        ptr[g] = i
        t0 = T[i]
        h = T[i + 1] - t0
        s = (q - t0) / h
        if s <= 0.0:
            return YA[i], YB[i]
        s1 = 1.0 - s
        h00 = (1.0 + 2.0 * s) * s1 * s1
        h10 = s * s1 * s1 * h
        h01 = s * s * (3.0 - 2.0 * s)
        h11 = s * s * (s - 1.0) * h
        ya = h00 * YA[i] + h10 * FRA[i] + h01 * YA[i + 1] + h11 * FLA[i + 1]
        yb = h00 * YB[i] + h10 * FRB[i] + h01 * YB[i + 1] + h11 * FLB[i + 1]
        return ya, yb

    def delayed_part(s: float, side: int) -> tuple[complex, complex]:
        # side: +1 at a step start (closed gate), -1 at a step end, 0 in the interior
        da = db = 0j
        for g in range(ng):
            d = gdelays[g]
            lag = s - d
            if side > 0:
                if lag < -snap:
                    break
            elif side < 0:
                if lag <= snap:
                    break
            elif lag <= 0.0:
                break
            ya, yb = lookup(g, lag if lag > 0.0 else 0.0)
            for tgt, src, c in gterms[g]:
                v = c * (ya if src == 0 else yb)
                if tgt == 0:
                    da += v
                else:
                    db += v
        return da, db

    out = np.empty((n_out + 1, 2), dtype=complex)
    out[0] = (init.c_a0, init.c_b0)
    ya, yb = complex(init.c_a0), complex(init.c_b0)
    bp_i = 0
    nbp = len(bps)

    for k in range(n_out):
        t_out0 = k * dt
        t_out1 = (k + 1) * dt
        # substep nodes for this output interval, split at interior breakpoints
        nodes = [t_out0 + (t_out1 - t_out0) * i / sub for i in range(1, sub)] + [t_out1]
        while bp_i < nbp and bps[bp_i] <= t_out0 + snap:
            bp_i += 1
        j = bp_i
        extra = []
        while j < nbp and bps[j] < t_out1 - snap:
            extra.append(bps[j])
            j += 1
        if extra:
            nodes = sorted(nodes + extra)
            merged = [nodes[0]]
            for x in nodes[1:]:
                if x - merged[-1] > snap:
                    merged.append(x)
                else:
                    merged[-1] = max(merged[-1], x)
            nodes = merged
            nodes[-1] = t_out1

        t0 = t_out0
        for t1 in nodes:
            h = t1 - t0
            if h <= snap:
                continue
            half = 0.5 * h
            tm = t0 + half
            da, db = delayed_part(t0, +1)
            k1a = m00 * ya + m01 * yb + da
            k1b = m10 * ya + m11 * yb + db
            FRA.append(k1a)
            FRB.append(k1b)
            da, db = delayed_part(tm, 0)
            ua, ub = ya + half * k1a, yb + half * k1b
            k2a = m00 * ua + m01 * ub + da
            k2b = m10 * ua + m11 * ub + db
            ua, ub = ya + half * k2a, yb + half * k2b
            k3a = m00 * ua + m01 * ub + da
            k3b = m10 * ua + m11 * ub + db
            da, db = delayed_part(t1, -1)
            ua, ub = ya + h * k3a, yb + h * k3b
            k4a = m00 * ua + m01 * ub + da
            k4b = m10 * ua + m11 * ub + db
            ya = ya + h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
            yb = yb + h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
            T.append(t1)
            YA.append(ya)
            YB.append(yb)
            FLA.append(m00 * ya + m01 * yb + da)
            FLB.append(m10 * ya + m11 * yb + db)
            t0 = t1
        if not (cmath.isfinite(ya) and cmath.isfinite(yb)):
            raise FloatingPointError(
                f"non-finite amplitude at t={t_out1:.6g} (c_a={ya}, c_b={yb}); "
                "check the equation coefficients"
            )
        out[k + 1] = (ya, yb)

    return Trajectory(np.arange(n_out + 1) * dt, out)


def markovian_matrix(eqset: EquationSet) -> np.ndarray:
    if any(t.delay > DELAY_KEY_TOL for t in eqset.terms):
        raise ValueError("solve_markovian needs every term delay to be 0")
    return np.array(_instantaneous_matrix(eqset, eqset.terms), dtype=complex)


def expm2(m: np.ndarray, t) -> np.ndarray:
    """exp(m * t) for a 2x2 complex matrix, vectorised over t.

    Uses exp(Mt) = e^{mu t}[cosh(d t) I + sinh(d t)/d (M - mu I)] with
    mu = tr(M)/2 and d^2 = mu^2 - det(M).  Coincident eigenvalues fall
    back to e^{mu t}[I + (M - mu I) t].
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    mu = 0.5 * (m[0, 0] + m[1, 1])
    n = m - mu * np.eye(2)
    d2 = n[0, 0] ** 2 + n[0, 1] * n[1, 0]
    d = np.sqrt(complex(d2))
    scale = max(abs(mu), np.abs(m).max(), 1e-300)
    if abs(d) <= DEGENERATE_REL * scale:
        ch = np.ones_like(t, dtype=complex)
        sh = t.astype(complex)
    else:
        x = d * t
        small = np.abs(x) < 1e-3
        xs = x[small] ** 2
        ch = np.where(small, 0, np.cosh(x)).astype(complex)
        sh = np.where(small, 0, np.sinh(x) / d).astype(complex)
        ch[small] = 1 + xs / 2 + xs**2 / 24 + xs**3 / 720
        sh[small] = t[small] * (1 + xs / 6 + xs**2 / 120 + xs**3 / 5040)
    e = np.exp(mu * t)
    out = np.empty((t.size, 2, 2), dtype=complex)
    out[:, 0, 0] = e * (ch + sh * n[0, 0])
    out[:, 0, 1] = e * sh * n[0, 1]
    out[:, 1, 0] = e * sh * n[1, 0]
    out[:, 1, 1] = e * (ch + sh * n[1, 1])
    return out


def solve_markovian(eqset: EquationSet, init: InitialState, t_end: float,
                    dt_sample: float = DEFAULT_DT) -> Trajectory:
    m = markovian_matrix(eqset)
    n_out = _grid(t_end, dt_sample)
    times = np.arange(n_out + 1) * dt_sample
    x0 = np.array([init.c_a0, init.c_b0], dtype=complex)
    amps = expm2(m, times) @ x0
    return Trajectory(times, amps)


def simulate(eqset: EquationSet, init: InitialState, t_end: float,
             dt: float = DEFAULT_DT) -> Trajectory:
    """Dispatch to the exact Markovian solver when no term is delayed."""
    if all(t.delay <= DELAY_KEY_TOL for t in eqset.terms):
        return solve_markovian(eqset, init, t_end, dt)
    return integrate(eqset, init, t_end, dt)


@dataclass(frozen=True)
class SteadyState:
    value: float
    converged: bool


def steady_state(traj: Trajectory | np.ndarray, window: float = DEFAULT_WINDOW,
                 spread_tol: float = STEADY_SPREAD, times: np.ndarray | None = None) -> SteadyState:
    """Mean concurrence over the final `window` if it has flattened out."""
    if isinstance(traj, Trajectory):
        c = traj.concurrence()
        times = traj.times
    else:
        c = np.asarray(traj, dtype=float)
        if times is None:
            raise ValueError("times are required with a bare concurrence series")
    if times[-1] - times[0] < window - 1e-12:
        raise ValueError(f"trajectory spans {times[-1] - times[0]:.4g}, shorter than window {window}")
    tail = c[times >= times[-1] - window - 1e-12]
    if tail.max() - tail.min() < spread_tol:
        return SteadyState(float(tail.mean()), True)
    return SteadyState(float(c[-1]), False)
