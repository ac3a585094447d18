"""Fixed-dimension linear algebra for four-level two-qubit dynamics.

Everything downstream works with 4x4 complex matrices (Hamiltonians,
propagators, density matrices) and with the two unit quaternions that
factor a 4D rotation into its left- and right-isoclinic parts.  This
module collects those primitives plus the quadrature helper used by the
pulse-constraint checks.

Conventions: hbar = 1 everywhere, so Hamiltonian entries are angular
frequencies (rad/s) and propagators are exp(-i H t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

# Default tolerances; every check below accepts an override.
HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
UNIT_QUATERNION_TOL = 1e-12


def hermiticity_defect(m: np.ndarray) -> float:
    """Frobenius norm of M - M^dagger."""
    return float(np.linalg.norm(m - m.conj().T))


def unitarity_defect(m: np.ndarray) -> float:
    """Frobenius norm of M^dagger M - I."""
    return float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0])))


def require_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    defect = hermiticity_defect(m)
    if defect > tol:
        raise ValueError(f"matrix is not Hermitian: ||M - M^dag||_F = {defect:.3e} > {tol:.1e}")
    return m


def require_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    defect = unitarity_defect(m)
    if defect > tol:
        raise ValueError(f"matrix is not unitary: ||M^dag M - I||_F = {defect:.3e} > {tol:.1e}")
    return m


@dataclass(frozen=True)
class Quaternion:
    """Real quaternion w + x i + y j + z k."""

    w: float
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return math.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2)

    def normalized(self) -> "Quaternion":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero quaternion")
        return Quaternion(self.w / n, self.x / n, self.y / n, self.z / n)

    def is_unit(self, tol: float = UNIT_QUATERNION_TOL) -> bool:
        return abs(self.w**2 + self.x**2 + self.y**2 + self.z**2 - 1.0) <= tol

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])


def _require_unit(q: Quaternion, tol: float) -> Quaternion:
    if not q.is_unit(tol):
        raise ValueError(f"quaternion is not unit-normalized: |q|^2 - 1 = {q.norm()**2 - 1.0:.3e}")
    return q


def mat_exp_skew(h: np.ndarray, dt: float, tol: float = HERMITIAN_TOL * 100) -> np.ndarray:
    """exp(-i H dt) for Hermitian H, exact via eigendecomposition.

    The 4x4 generators here are always Hermitian, so the spectral form is
    both exact and unconditionally unitary.  Non-Hermitian input (beyond
    ``tol`` in Frobenius norm) is rejected with the offending defect.
    """
    if not math.isfinite(dt):
        raise ValueError("dt must be finite")
    require_hermitian(h, tol)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * dt)) @ v.conj().T


def batched_mat_exp_skew(hs: np.ndarray, dt: float) -> np.ndarray:
    """exp(-i H_k dt) for a stack of Hermitian matrices, shape (n, d, d)."""
    w, v = np.linalg.eigh(hs)
    phases = np.exp(-1j * w * dt)
    return np.einsum("nij,nj,nkj->nik", v, phases, v.conj())


def isoclinic_left(q: Quaternion, tol: float = UNIT_QUATERNION_TOL) -> np.ndarray:
    """Left-isoclinic 4D rotation factor built from a unit quaternion."""
    _require_unit(q, tol)
    qw, qx, qy, qz = q.w, q.x, q.y, q.z
    return np.array(
        [
            [qw, -qx, -qy, -qz],
            [qx, qw, -qz, qy],
            [qy, qz, qw, -qx],
            [qz, -qy, qx, qw],
        ]
    )


def isoclinic_right(p: Quaternion, tol: float = UNIT_QUATERNION_TOL) -> np.ndarray:
    """Right-isoclinic 4D rotation factor built from a unit quaternion."""
    _require_unit(p, tol)
    pw, px, py, pz = p.w, p.x, p.y, p.z
    return np.array(
        [
            [pw, -px, -py, -pz],
            [px, pw, pz, -py],
            [py, -pz, pw, px],
            [pz, py, -px, pw],
        ]
    )


def azimuths_to_quaternions(
    gamma1: float, theta1: float, phi1: float, gamma2: float, theta2: float, phi2: float
) -> tuple[Quaternion, Quaternion]:
    """Map the six 4D azimuth angles onto the two isoclinic quaternions.

    Unit norm holds analytically for any input angles.
    """
    q = Quaternion(
        math.cos(gamma1),
        math.sin(gamma1) * math.cos(theta1),
        math.sin(gamma1) * math.sin(theta1) * math.cos(phi1),
        math.sin(gamma1) * math.sin(theta1) * math.sin(phi1),
    )
    p = Quaternion(
        math.cos(gamma2),
        math.sin(gamma2) * math.cos(theta2),
        math.sin(gamma2) * math.sin(theta2) * math.cos(phi2),
        math.sin(gamma2) * math.sin(theta2) * math.sin(phi2),
    )
    return q, p


def phase_aligned_distance(u: np.ndarray, v: np.ndarray) -> float:
    """min over global phase of ||U - e^{i phi} V||_F.

    The optimal phase is arg tr(V^dag U).  Computed elementwise after
    aligning the phase: the closed form sqrt(2d - 2|tr|) loses half the
    significant digits near zero, which matters for 1e-8-level checks.
    """
    tr = np.trace(v.conj().T @ u)
    if abs(tr) == 0.0:
        return float(np.linalg.norm(u - v))
    phase = tr / abs(tr)
    return float(np.linalg.norm(u - phase * v))


def gate_infidelity(u: np.ndarray, v: np.ndarray) -> float:
    """Global-phase-invariant gate infidelity 1 - |tr(V^dag U)/d|^2."""
    d = u.shape[0]
    return float(1.0 - (abs(np.trace(v.conj().T @ u)) / d) ** 2)


def simpson_integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    breakpoints: Sequence[float] = (),
    panels: int = 10_000,
) -> complex:
    """Composite Simpson quadrature with breakpoints as panel boundaries.

    ``f`` must accept a vector of sample points.  ``panels`` is the total
    panel budget, distributed over the sub-intervals proportionally to
    length (minimum 8 per sub-interval, rounded up to even).  Breakpoints
    outside (a, b) are ignored.
    """
    if b == a:
        return 0.0
    pts = [a] + sorted(p for p in set(breakpoints) if a < p < b) + [b]
    total = 0.0 + 0.0j
    span = b - a
    for lo, hi in zip(pts[:-1], pts[1:]):
        n = max(8, int(math.ceil(panels * (hi - lo) / span)))
        if n % 2:
            n += 1
        xs = np.linspace(lo, hi, n + 1)
        ys = np.asarray(f(xs), dtype=complex)
        h = (hi - lo) / n
        total += h / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-1:2].sum())
    if abs(total.imag) == 0.0:
        return complex(total.real, 0.0)
    return total
