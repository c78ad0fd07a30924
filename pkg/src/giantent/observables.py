"""Two-atom density matrix, concurrence and symmetric/antisymmetric amplitudes."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NORM_SLACK = 1e-9


@dataclass(frozen=True)
class ChiPair:
    chi_plus: complex
    chi_minus: complex


def concurrence(c_a, c_b):
    """Concurrence 2|c_a c_b*| of the single-excitation X state.

    Works elementwise on arrays as well as on scalars.
    """
    return 2.0 * np.abs(c_a * np.conj(c_b))


def density_matrix(c_a: complex, c_b: complex) -> np.ndarray:
    """Reduced state in the basis |ee>, |eg>, |ge>, |gg>."""
    pa, pb = abs(c_a) ** 2, abs(c_b) ** 2
    if pa + pb > 1 + NORM_SLACK:
        raise ValueError(f"amplitude norm {pa + pb:.12g} exceeds 1")
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = pa
    rho[1, 2] = c_a * np.conj(c_b)
    rho[2, 1] = np.conj(c_a) * c_b
    rho[2, 2] = pb
    rho[3, 3] = max(0.0, 1.0 - pa - pb)
    return rho


def wootters_concurrence(rho: np.ndarray) -> float:
    """Concurrence from the eigenvalues of rho (sy x sy) rho* (sy x sy).

    Used as an independent check of the closed form.
    """
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    r = rho @ yy @ rho.conj() @ yy
    lam = np.sort(np.sqrt(np.abs(np.linalg.eigvals(r).real)))[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def to_chi(c_a: complex, c_b: complex) -> ChiPair:
    s = 1.0 / math.sqrt(2.0)
    return ChiPair((c_a + c_b) * s, (c_a - c_b) * s)


def chi_concurrence(chi: ChiPair) -> float:
    p, m = chi.chi_plus, chi.chi_minus
    return abs(abs(p) ** 2 - abs(m) ** 2 + 2j * (p * m.conjugate()).imag)


def concurrence_series(traj) -> np.ndarray:
    return concurrence(traj.amps[:, 0], traj.amps[:, 1])
