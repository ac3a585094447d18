"""Silicon double-quantum-dot Hamiltonians in lab and rotating frames.

The lab Hamiltonian (two-qubit basis {|00>, |01>, |10>, |11>}) combines
the mean Zeeman splitting E_z, the Zeeman difference delta_Ez, the
exchange coupling J, and transverse drive fields B_y^{L,R}.  Each gate
scheme propagates in its own diagonal rotating frame; the constructors
here return the frame Hamiltonian either with the counter-rotating
residues retained (rwa=False) or dropped (rwa=True).

Drive convention: a stored drive amplitude B_y^1 corresponds to the
physical field B_y^R(t) = 2 B_y^1 cos(omega_2 t + psi_1), mirroring the
J = 2 j cos(omega t + psi) convention, so the rotating-wave coupling is
exactly -i B_y^1 e^{i psi_1}.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import TWO_PI
from .pulses import PulseSchedule, detuning_perturbation

HBAR = 1.0  # all energies are angular frequencies


@dataclass(frozen=True)
class DeviceParams:
    """Physical constants of the double dot (angular frequencies, seconds)."""

    e_z: float = TWO_PI * 20.64e9
    delta_ez: float = TWO_PI * 214e6
    j_max: float = TWO_PI * 19.7e6
    b_y_l0: float = TWO_PI * 5e6
    b_y_r0: float = TWO_PI * 55e6
    t2_q1: float = 120e-6
    t2_q2: float = 61e-6

    def __post_init__(self) -> None:
        for name in ("e_z", "delta_ez", "j_max", "b_y_l0", "b_y_r0", "t2_q1", "t2_q2"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")

    @property
    def kappa_1(self) -> float:
        return 1.0 / self.t2_q1 if self.t2_q1 > 0.0 else 0.0

    @property
    def kappa_2(self) -> float:
        return 1.0 / self.t2_q2 if self.t2_q2 > 0.0 else 0.0


DEFAULT_DEVICE = DeviceParams()

# JSON schema keys (frequencies in plain Hz; 2*pi applied on load).
_JSON_KEYS = {
    "e_z_hz": "e_z",
    "delta_e_z_hz": "delta_ez",
    "j_max_hz": "j_max",
    "b_y_l0_hz": "b_y_l0",
    "b_y_r0_hz": "b_y_r0",
    "t2_q1_s": "t2_q1",
    "t2_q2_s": "t2_q2",
}
_TIME_KEYS = {"t2_q1_s", "t2_q2_s"}


def load_device_params(path: str | os.PathLike) -> DeviceParams:
    """Read DeviceParams from a JSON document with frequencies in Hz."""
    with open(path) as fh:
        doc = json.load(fh)
    unknown = set(doc) - set(_JSON_KEYS)
    if unknown:
        raise ValueError(f"unknown device parameter keys: {sorted(unknown)}")
    kwargs = {}
    for key, attr in _JSON_KEYS.items():
        if key in doc:
            val = float(doc[key])
            kwargs[attr] = val if key in _TIME_KEYS else TWO_PI * val
    return DeviceParams(**kwargs)


def save_device_params(params: DeviceParams, path: str | os.PathLike) -> None:
    doc = {}
    for key, attr in _JSON_KEYS.items():
        val = getattr(params, attr)
        doc[key] = val if key in _TIME_KEYS else val / TWO_PI
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass(frozen=True)
class FrameSpec:
    """Diagonal rotating-frame generator: U_frame(t) = exp(-i t diag(coeffs)).

    One angular-frequency coefficient per computational basis state.
    """

    coefficients: tuple[float, float, float, float]
    rwa: bool = False

    def unitary(self, t: float) -> np.ndarray:
        return np.diag(np.exp(-1j * np.asarray(self.coefficients) * t))

    def transform(self, h_lab: np.ndarray, t: float) -> np.ndarray:
        """U^dag H U - i U^dag dU/dt for this diagonal frame."""
        u = self.unitary(t)
        return u.conj().T @ h_lab @ u - np.diag(np.asarray(self.coefficients, dtype=complex))


def fsim_frame(schedule: PulseSchedule) -> FrameSpec:
    # -i(w t/4) I x sigma_z + i(w t/4) sigma_z x I  ->  diag(0, -w/2, w/2, 0)
    w = schedule.controls.delta_ez
    return FrameSpec((0.0, -w / 2.0, w / 2.0, 0.0))


def bgate_frame(schedule: PulseSchedule) -> FrameSpec:
    # exp[-i(w1 t/2) sigma_z x I - i(w2 t/2) I x sigma_z]
    e_z, dez = schedule.controls.e_z, schedule.controls.delta_ez
    return FrameSpec((e_z, -dez / 2.0, dez / 2.0, -e_z))


def geometric_frame(schedule: PulseSchedule) -> FrameSpec:
    # same rotation as the fSim frame; the middle-block exchange diagonal is
    # then removed by an identity shift (a global phase)
    return fsim_frame(schedule)


def lab_hamiltonian(
    e_z: float, delta_ez: float, j: float, b_y_l: float = 0.0, b_y_r: float = 0.0
) -> np.ndarray:
    """Instantaneous lab-frame Hamiltonian of the double dot.

    ``j``, ``b_y_l``, ``b_y_r`` are the instantaneous values of the exchange
    and transverse fields (rad/s).
    """
    return np.array(
        [
            [e_z, -1j * b_y_r, -1j * b_y_l, 0.0],
            [1j * b_y_r, -(delta_ez + j) / 2.0, j / 2.0, -1j * b_y_l],
            [1j * b_y_l, j / 2.0, (delta_ez - j) / 2.0, -1j * b_y_r],
            [0.0, 1j * b_y_l, 1j * b_y_r, -e_z],
        ],
        dtype=complex,
    )


def lab_hamiltonian_for(params: DeviceParams, j: float, b_y_l: float = 0.0, b_y_r: float = 0.0) -> np.ndarray:
    return lab_hamiltonian(params.e_z, params.delta_ez, j, b_y_l, b_y_r)


class TimeDependentHamiltonian:
    """H(t) with a vectorized batch evaluator, as the propagators expect."""

    def __init__(self, single: Callable[[float], np.ndarray], batch: Callable[[np.ndarray], np.ndarray], max_frequency_hz: float):
        self._single = single
        self._batch = batch
        self.max_frequency_hz = max_frequency_hz

    def __call__(self, t: float) -> np.ndarray:
        return self._single(t)

    def matrices(self, ts: np.ndarray) -> np.ndarray:
        return self._batch(np.asarray(ts, dtype=float))


def _batched_diag_embed(d: np.ndarray) -> np.ndarray:
    n = d.shape[0]
    out = np.zeros((n, 4, 4), dtype=complex)
    idx = np.arange(4)
    out[:, idx, idx] = d
    return out


def fsim_frame_hamiltonian(schedule: PulseSchedule, t: float, rwa: bool) -> np.ndarray:
    """Rotating-frame Hamiltonian of the dynamical fSim schemes.

    Ground level set to zero: diag(0, -j cos(wt) - E_z, -j cos(wt) - E_z,
    -2 E_z); coupling j/2 with, for rwa=False, the counter-rotating residue
    j e^{-2iwt}/2 kept in the (|01>, |10>) block.
    """
    return _fsim_frame_batch(schedule, np.atleast_1d(float(t)), rwa)[0]


def _fsim_frame_batch(schedule: PulseSchedule, ts: np.ndarray, rwa: bool) -> np.ndarray:
    j = schedule.envelope(ts)
    w = schedule.controls.delta_ez
    e_z = schedule.controls.e_z
    jc = j * np.cos(w * ts)
    cpl = j / 2.0 if rwa else j * (1.0 + np.exp(-2j * w * ts)) / 2.0
    cpl = np.broadcast_to(cpl, ts.shape).astype(complex)
    out = _batched_diag_embed(
        np.stack([np.zeros_like(ts), -jc - e_z, -jc - e_z, np.full_like(ts, -2.0 * e_z)], axis=1)
    )
    out[:, 1, 2] = cpl
    out[:, 2, 1] = np.conj(cpl)
    if schedule.detuning_eps:
        out += detuning_perturbation(e_z, w, schedule.detuning_eps)[None, :, :]
    return out


def bgate_frame_hamiltonian(schedule: PulseSchedule, t: float, rwa: bool) -> np.ndarray:
    """Rotating-frame Hamiltonian of the weak-exchange B-gate scheme.

    rwa=True: constant drive entries -i B_y^1 e^{i psi_1} on (|00>,|01>) and
    (|10>,|11>) plus exchange j/2 on (|01>,|10>), zero diagonal.  rwa=False
    keeps every oscillatory residue generated by the two-frequency frame.
    """
    return _bgate_frame_batch(schedule, np.atleast_1d(float(t)), rwa)[0]


def _bgate_frame_batch(schedule: PulseSchedule, ts: np.ndarray, rwa: bool) -> np.ndarray:
    j = schedule.envelope(ts)
    dez = schedule.controls.delta_ez
    amp, w2, psi1 = schedule.drive(ts)
    out = np.zeros((ts.shape[0], 4, 4), dtype=complex)
    if rwa:
        drive = -1j * amp * np.exp(1j * psi1)
        cpl = (j / 2.0).astype(complex)
    else:
        # (1,2)/(3,4): -i 2 B cos(w2 t + psi) e^{i w2 t}; (2,3): j cos(dez t) e^{-i dez t}
        drive = -1j * 2.0 * amp * np.cos(w2 * ts + psi1) * np.exp(1j * w2 * ts)
        cpl = j * np.cos(dez * ts) * np.exp(-1j * dez * ts)
    out[:, 0, 1] = drive
    out[:, 1, 0] = np.conj(drive)
    out[:, 2, 3] = drive
    out[:, 3, 2] = np.conj(drive)
    out[:, 1, 2] = cpl
    out[:, 2, 1] = np.conj(cpl)
    if schedule.detuning_eps:
        out += detuning_perturbation(schedule.controls.e_z, dez, schedule.detuning_eps)[None, :, :]
    return out


def geometric_frame_hamiltonian(schedule: PulseSchedule, t: float, rwa: bool) -> np.ndarray:
    """Rotating-frame Hamiltonian of the geometric+dynamical fSim scheme.

    Diagonal (E_z + j cos(wt + psi), 0, 0, j cos(wt + psi) - E_z) with
    coupling j e^{i psi}/2 in the middle block; rwa=False keeps the
    counter-rotating coupling residue.
    """
    return _geometric_frame_batch(schedule, np.atleast_1d(float(t)), rwa)[0]


def _geometric_frame_batch(schedule: PulseSchedule, ts: np.ndarray, rwa: bool) -> np.ndarray:
    j = schedule.envelope(ts)
    w, psi = schedule.carrier(ts)
    e_z = schedule.controls.e_z
    jc = j * np.cos(w * ts + psi)
    if rwa:
        cpl = (j / 2.0) * np.exp(1j * psi)
    else:
        cpl = (j / 2.0) * (np.exp(1j * psi) + np.exp(-1j * (2.0 * w * ts + psi)))
    out = _batched_diag_embed(
        np.stack([e_z + jc, np.zeros_like(ts), np.zeros_like(ts), jc - e_z], axis=1)
    )
    out[:, 1, 2] = cpl
    out[:, 2, 1] = np.conj(cpl)
    if schedule.detuning_eps:
        out += detuning_perturbation(e_z, schedule.controls.delta_ez, schedule.detuning_eps)[None, :, :]
    return out


_FRAME_BATCHES = {
    "fsim_rect": _fsim_frame_batch,
    "fsim_poly": _fsim_frame_batch,
    "bgate": _bgate_frame_batch,
    "fsim_geometric": _geometric_frame_batch,
}


def frame_hamiltonian(schedule: PulseSchedule, rwa: bool) -> TimeDependentHamiltonian:
    """Scheme-appropriate rotating-frame H(t) for a schedule."""
    try:
        batch = _FRAME_BATCHES[schedule.scheme]
    except KeyError:
        raise ValueError(f"no frame Hamiltonian registered for scheme {schedule.scheme!r}") from None
    fmax = schedule.max_frequency_hz() if not rwa else max(
        seg.carrier_omega for seg in schedule.segments
    ) / TWO_PI
    return TimeDependentHamiltonian(
        single=lambda t: batch(schedule, np.atleast_1d(float(t)), rwa)[0],
        batch=lambda ts: batch(schedule, ts, rwa),
        max_frequency_hz=fmax,
    )


def frame_energy_shift(schedule: PulseSchedule, t: float) -> float:
    """Scalar s(t) with H_constructor = FrameSpec.transform(H_lab, t) - s(t) I.

    The fSim constructors zero the ground level (s = E_z); the geometric
    constructor zeroes the middle-block exchange diagonal
    (s = -j cos(wt + psi)); the B-gate frame already cancels the static
    diagonal (s = 0).  Identity shifts change only a global phase.
    """
    if schedule.scheme in ("fsim_rect", "fsim_poly"):
        return schedule.controls.e_z
    if schedule.scheme == "fsim_geometric":
        ts = np.atleast_1d(float(t))
        w, psi = schedule.carrier(ts)
        return float(-(schedule.envelope(ts) * np.cos(w * ts + psi))[0])
    if schedule.scheme == "bgate":
        return 0.0
    raise ValueError(f"no frame registered for scheme {schedule.scheme!r}")


def weak_exchange_lab_hamiltonian(e_z: float, delta_ez: float, j: float, b_y_r: float) -> np.ndarray:
    """Lab Hamiltonian in the weak-exchange regime (J << delta_Ez).

    The exchange contribution to the diagonal is dropped; only the flip-flop
    coupling J/2 and the right-dot drive survive.
    """
    return np.array(
        [
            [e_z, -1j * b_y_r, 0.0, 0.0],
            [1j * b_y_r, -delta_ez / 2.0, j / 2.0, 0.0],
            [0.0, j / 2.0, delta_ez / 2.0, -1j * b_y_r],
            [0.0, 0.0, 1j * b_y_r, -e_z],
        ],
        dtype=complex,
    )


def lab_hamiltonian_of_schedule(schedule: PulseSchedule, t: float) -> np.ndarray:
    """Instantaneous lab Hamiltonian realized by a schedule's fields.

    Exchange J(t) = 2 j cos(wt + psi); drive B_y^R(t) = 2 B_y^1
    cos(w2 t + psi_1); B_y^L = 0 for every scheme here.  The B-gate scheme
    uses the weak-exchange form (no exchange diagonal); the fSim schemes
    keep the full exchange diagonal.
    """
    ts = np.atleast_1d(float(t))
    j_t = float(schedule.exchange(ts)[0])
    amp, w2, ph = schedule.drive(ts)
    b_y_r = float(2.0 * amp[0] * np.cos(w2[0] * ts[0] + ph[0]))
    if schedule.scheme == "bgate":
        return weak_exchange_lab_hamiltonian(schedule.controls.e_z, schedule.controls.delta_ez, j_t, b_y_r)
    return lab_hamiltonian(schedule.controls.e_z, schedule.controls.delta_ez, j_t, 0.0, b_y_r)


def schedule_frame(schedule: PulseSchedule) -> FrameSpec:
    if schedule.scheme in ("fsim_rect", "fsim_poly"):
        return fsim_frame(schedule)
    if schedule.scheme == "fsim_geometric":
        return geometric_frame(schedule)
    if schedule.scheme == "bgate":
        return bgate_frame(schedule)
    raise ValueError(f"no frame registered for scheme {schedule.scheme!r}")


def coupling_block_hamiltonian(schedule: PulseSchedule, t: float) -> np.ndarray:
    """Coupling-only part of the geometric frame Hamiltonian (both blocks zeroed).

    This is the generator whose expectation must vanish along the bright
    state for parallel transport.
    """
    h = geometric_frame_hamiltonian(schedule, t, rwa=True)
    out = np.zeros_like(h)
    out[1, 2] = h[1, 2]
    out[2, 1] = h[2, 1]
    return out
