"""Reproducible experiment drivers behind the CLI and the scripts.

Each driver assembles schedules, propagates them (closed-system or with
projector dephasing), and returns plain row dictionaries ready for CSV
export.  Everything is deterministic for a fixed configuration; sweep
fan-out across a worker pool reduces by sorted work key, so the output
is byte-identical regardless of scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .device import (
    DEFAULT_DEVICE,
    DeviceParams,
    coupling_block_hamiltonian,
    frame_hamiltonian,
)
from .dynamics import (
    EvolutionResult,
    lindblad_superoperator,
    propagate_unitary,
)
from .fidelity import (
    FidelityReport,
    analytic_rabi_fidelity,
    average_fidelity,
    build_grid,
)
from .pulses import (
    PulseSchedule,
    apply_detuning_error,
    apply_rabi_error,
    bgate_rectangular,
    error_sensitivity,
    fsim_geometric,
    fsim_polynomial,
    fsim_rectangular,
    gate_time_for_exchange_cap,
)

# Reference gate parameters used throughout the benchmark datasets.
THETA_REF = math.pi / 4.0
XI_REF = math.pi / 2.0
RECT_GATE_TIME = 45e-9
POLY_GATE_TIME = 50e-9
GEOMETRIC_GATE_TIME = 158e-9
BGATE_GATE_TIME = 76e-9
ETA_REF = -1.0 / 3.0

STEPS_PER_PERIOD_FULL = 200
STEPS_PER_PERIOD_QUICK = 100


@dataclass
class InvariantCheck:
    name: str
    value: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.value <= self.bound


class InvariantLog:
    """Collects invariant checks across a run; the CLI exit code keys off it."""

    def __init__(self) -> None:
        self.checks: list[InvariantCheck] = []

    def add(self, name: str, value: float, bound: float) -> None:
        self.checks.append(InvariantCheck(name, float(value), float(bound)))

    def extend(self, other: "InvariantLog") -> None:
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            status = "ok" if c.ok else "FAIL"
            lines.append(f"[{status}] {c.name}: {c.value:.3e} <= {c.bound:.1e}")
        return "\n".join(lines)


def build_schedule(
    scheme: str,
    theta: float = THETA_REF,
    xi: float = XI_REF,
    duration: float | None = None,
    n_reps: int = 1,
    eta: float = ETA_REF,
    params: DeviceParams = DEFAULT_DEVICE,
) -> PulseSchedule:
    """Construct a schedule, deriving the gate time from the exchange cap if unset.

    The rectangular benchmark time is capped below by the carrier condition
    delta_Ez = 2 N pi / T <= experimentally achievable delta_Ez.
    """
    if scheme in ("fsim_rect", "fsim_poly"):
        if duration is None:
            duration = gate_time_for_exchange_cap(scheme, theta, xi, params.j_max, eta=eta)
        dez_needed = 2.0 * n_reps * math.pi / duration
        if dez_needed > params.delta_ez:
            duration = 2.0 * n_reps * math.pi / params.delta_ez
        if scheme == "fsim_rect":
            return fsim_rectangular(theta, xi, duration, n_reps)
        return fsim_polynomial(theta, xi, duration, n_reps, eta)
    if scheme == "fsim_geometric":
        if duration is None:
            duration = gate_time_for_exchange_cap(scheme, theta, xi, params.j_max)
        return fsim_geometric(theta, xi, duration)
    if scheme == "bgate":
        if duration is None:
            duration = gate_time_for_exchange_cap("bgate", theta, xi, params.j_max)
        return bgate_rectangular(duration, params.e_z, params.delta_ez)
    raise ValueError(f"unknown scheme {scheme!r}")


def gate_channel(
    schedule: PulseSchedule,
    *,
    rwa: bool,
    decoherence: bool,
    params: DeviceParams = DEFAULT_DEVICE,
    rabi_delta: float = 0.0,
    detuning_eps: float = 0.0,
    steps_per_period: int = STEPS_PER_PERIOD_FULL,
    log: InvariantLog | None = None,
    convention: str = "printed",
) -> np.ndarray:
    """Propagate one configured gate; 4x4 propagator or 16x16 superoperator."""
    if log is not None:
        # design constraints are checked on the pristine schedule; injected
        # errors intentionally violate them
        for label, residual in schedule.check_constraints().items():
            log.add(f"{schedule.scheme}_{label}", residual, 1e-8)
    if rabi_delta:
        schedule = apply_rabi_error(schedule, rabi_delta)
    if detuning_eps:
        schedule = apply_detuning_error(schedule, detuning_eps)
    h = frame_hamiltonian(schedule, rwa)
    if decoherence:
        res = lindblad_superoperator(
            h,
            params,
            schedule.duration,
            breakpoints=schedule.breakpoints,
            steps_per_period=steps_per_period,
            convention=convention,
        )
        if log is not None:
            rho_t = (res.final @ np.eye(4, dtype=complex).ravel(order="F") / 4.0).reshape(4, 4, order="F")
            log.add("lindblad_trace_defect", abs(np.trace(rho_t) - 1.0), 1e-8)
    else:
        res = propagate_unitary(
            h,
            schedule.duration,
            breakpoints=schedule.breakpoints,
            steps_per_period=steps_per_period,
        )
        if log is not None:
            log.add("unitarity_defect", res.unitarity_defect, 1e-9)
    return res.final


def fsim_target(schedule: PulseSchedule) -> np.ndarray:
    return schedule.controls.effective_target()


# ---------------------------------------------------------------------------
# Fidelity table (the `table1` dataset)
# ---------------------------------------------------------------------------


def table1_entry(
    scheme: str,
    n_reps: int,
    *,
    quick: bool = False,
    params: DeviceParams = DEFAULT_DEVICE,
    convention: str = "standard",
    log: InvariantLog | None = None,
) -> FidelityReport:
    """One fidelity-table cell: decohered pre-RWA fidelity at theta=pi/4, xi=pi/2."""
    duration = RECT_GATE_TIME if scheme == "fsim_rect" else POLY_GATE_TIME
    schedule = build_schedule(scheme, duration=duration, n_reps=n_reps, params=params)
    channel = gate_channel(
        schedule,
        rwa=False,
        decoherence=True,
        params=params,
        steps_per_period=STEPS_PER_PERIOD_QUICK if quick else STEPS_PER_PERIOD_FULL,
        log=log,
    )
    grid = build_grid(10 if quick else 40)
    return average_fidelity(
        channel,
        fsim_target(schedule),
        grid,
        convention,
        scheme=scheme,
        n_reps=n_reps,
        gate_time=schedule.duration,
        delta_ez=schedule.controls.delta_ez,
    )


def _table1_worker(args: tuple) -> tuple[tuple, FidelityReport]:
    scheme, n_reps, quick = args
    return (scheme, n_reps), table1_entry(scheme, n_reps, quick=quick)


def table1(
    *,
    quick: bool = False,
    n_values: Sequence[int] = tuple(range(1, 11)),
    workers: int = 1,
) -> list[FidelityReport]:
    """Both fidelity-table rows (rectangular and optimal-parameter) over N."""
    items = [(scheme, n, quick) for scheme in ("fsim_rect", "fsim_poly") for n in n_values]
    results = dict(_run_pool(_table1_worker, items, workers))
    return [results[(scheme, n)] for scheme, n, _ in items]


def _run_pool(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# Pulse-amplitude landscape (the `fig1a` dataset)
# ---------------------------------------------------------------------------


def amplitude_landscape(
    scheme: str = "fsim_rect",
    theta_points: int = 21,
    xi_points: int = 21,
    eta: float = ETA_REF,
) -> list[dict]:
    """max |J T| over the gate-parameter rectangle |theta|<=pi/2, |xi|<=pi."""
    rows = []
    for theta in np.linspace(0.0, math.pi / 2.0, theta_points):
        for xi in np.linspace(0.0, math.pi, xi_points):
            if scheme == "fsim_rect":
                jt = abs(8.0 * theta + math.pi * xi) / 2.0  # middle level dominates
                jt = max(jt, abs(8.0 * theta - math.pi * xi) / 2.0)
            else:
                if theta == 0.0:
                    continue
                sched = fsim_polynomial(theta, xi, 1.0, 1, eta)
                jt = 2.0 * sched.max_envelope()
            rows.append({"theta_rad": float(theta), "xi_rad": float(xi), "abs_JT_max_rad": float(jt)})
    return rows


# ---------------------------------------------------------------------------
# Error sensitivity and fidelity vs eta (the `fig4c`/`fig4d` datasets)
# ---------------------------------------------------------------------------


def sensitivity_vs_eta(
    eta_grid: Sequence[float] | None = None,
    theta: float = THETA_REF,
    xi: float = XI_REF,
    n_reps: int = 1,
) -> list[dict]:
    if eta_grid is None:
        eta_grid = np.linspace(-1.0, 1.0, 201)
    rows = []
    for eta in eta_grid:
        try:
            sched = fsim_polynomial(theta, xi, POLY_GATE_TIME, n_reps, float(eta))
        except ValueError:
            continue
        rows.append({"eta": float(eta), "q_s": error_sensitivity(sched)})
    return rows


def _fidelity_vs_eta_worker(args: tuple) -> tuple[float, float]:
    eta, theta, xi, n_reps, grid_n, quick = args
    try:
        sched = fsim_polynomial(theta, xi, POLY_GATE_TIME, n_reps, eta)
    except ValueError:
        return eta, math.nan  # singular family member, dropped from the sweep
    channel = gate_channel(
        sched,
        rwa=False,
        decoherence=True,
        steps_per_period=STEPS_PER_PERIOD_QUICK if quick else STEPS_PER_PERIOD_FULL,
    )
    rep = average_fidelity(channel, fsim_target(sched), build_grid(grid_n))
    return eta, rep.fidelity


def fidelity_vs_eta(
    eta_grid: Sequence[float] | None = None,
    theta: float = THETA_REF,
    xi: float = XI_REF,
    n_reps: int = 1,
    grid_n: int = 10,
    workers: int = 1,
    quick: bool = False,
) -> list[dict]:
    """Decohered pre-RWA fidelity over the eta family (100-state grid)."""
    if eta_grid is None:
        eta_grid = np.linspace(-1.0, 1.0, 41)
    items = [(float(e), theta, xi, n_reps, grid_n, quick) for e in eta_grid]
    out = _run_pool(_fidelity_vs_eta_worker, items, workers)
    return [{"eta": e, "fidelity": f} for e, f in sorted(out) if math.isfinite(f)]


# ---------------------------------------------------------------------------
# Systematic-error sweeps (the `fig5` dataset)
# ---------------------------------------------------------------------------


def rabi_sweep(
    deltas: Sequence[float],
    *,
    scheme: str = "fsim_rect",
    n_reps: int = 1,
    grid_n: int = 40,
    log: InvariantLog | None = None,
) -> list[dict]:
    """Closed-system RWA-frame fidelity against the analytic amplitude-error law."""
    duration = RECT_GATE_TIME if scheme == "fsim_rect" else POLY_GATE_TIME
    schedule = build_schedule(scheme, duration=duration, n_reps=n_reps)
    target = fsim_target(schedule)
    grid = build_grid(grid_n)
    rows = []
    for delta in deltas:
        channel = gate_channel(schedule, rwa=True, decoherence=False, rabi_delta=float(delta), log=log)
        rep = average_fidelity(
            channel, target, grid,
            scheme=scheme, n_reps=n_reps, gate_time=schedule.duration,
            rabi_delta=float(delta), delta_ez=schedule.controls.delta_ez,
        )
        rows.append(
            {
                "rabi_delta": float(delta),
                "fidelity_numeric": rep.fidelity,
                "fidelity_analytic": analytic_rabi_fidelity(float(delta)),
            }
        )
    return rows


def _detuning_worker(args: tuple) -> tuple[tuple, FidelityReport]:
    n_reps, eps, grid_n, quick = args
    schedule = build_schedule("fsim_poly", duration=POLY_GATE_TIME, n_reps=n_reps)
    channel = gate_channel(
        schedule,
        rwa=True,
        decoherence=False,
        detuning_eps=eps,
        steps_per_period=STEPS_PER_PERIOD_QUICK if quick else STEPS_PER_PERIOD_FULL,
    )
    rep = average_fidelity(
        channel, fsim_target(schedule), build_grid(grid_n),
        scheme="fsim_poly", n_reps=n_reps, gate_time=schedule.duration,
        detuning_eps=eps, delta_ez=schedule.controls.delta_ez,
    )
    return (n_reps, eps), rep


def detuning_sweep(
    eps_values: Sequence[float],
    n_values: Sequence[int] = (1, 2, 3),
    grid_n: int = 40,
    workers: int = 1,
    quick: bool = False,
) -> list[FidelityReport]:
    """Optimal-parameter-pulse fidelity under frame-frequency miscalibration."""
    items = [(n, float(e), grid_n, quick) for n in n_values for e in eps_values]
    results = dict(_run_pool(_detuning_worker, items, workers))
    return [results[(n, e)] for n, e, _, _ in items]


# ---------------------------------------------------------------------------
# Geometric vs dynamic robustness (the `fig6` dataset)
# ---------------------------------------------------------------------------


def _fig6_worker(args: tuple) -> tuple[tuple, FidelityReport]:
    scheme_label, error_kind, value, grid_n = args
    duration = GEOMETRIC_GATE_TIME
    if scheme_label == "geometric":
        schedule = fsim_geometric(THETA_REF, XI_REF, duration)
    else:
        # dynamic comparator: rectangular N=2 so delta_Ez = 4 pi / T matches
        schedule = fsim_rectangular(THETA_REF, XI_REF, duration, 2)
    kwargs = {"rabi_delta": value} if error_kind == "rabi" else {"detuning_eps": value}
    channel = gate_channel(schedule, rwa=True, decoherence=False, **kwargs)
    rep = average_fidelity(
        channel, fsim_target(schedule), build_grid(grid_n),
        scheme=scheme_label, n_reps=1 if scheme_label == "geometric" else 2,
        gate_time=duration, delta_ez=schedule.controls.delta_ez, **kwargs,
    )
    return (scheme_label, error_kind, value), rep


def robustness_comparison(
    deltas: Sequence[float],
    eps_values: Sequence[float],
    grid_n: int = 40,
    workers: int = 1,
) -> list[dict]:
    """Geometric+dynamic vs purely dynamic fidelity under control errors.

    Both schemes run in the RWA frame with decoherence off and the same
    delta_Ez = 4 pi / T, isolating control-error robustness.
    """
    items = [("geometric", "rabi", float(d), grid_n) for d in deltas]
    items += [("dynamic", "rabi", float(d), grid_n) for d in deltas]
    items += [("geometric", "detuning", float(e), grid_n) for e in eps_values]
    items += [("dynamic", "detuning", float(e), grid_n) for e in eps_values]
    results = dict(_run_pool(_fig6_worker, items, workers))
    return [
        {
            "scheme": k[0],
            "error_kind": k[1],
            "value": k[2],
            "fidelity": results[k].fidelity,
            "report": results[k],
        }
        for k in sorted(results)
    ]


# ---------------------------------------------------------------------------
# B-gate population trajectory
# ---------------------------------------------------------------------------


def bgate_trajectory(
    samples: int = 241,
    duration: float = BGATE_GATE_TIME,
    params: DeviceParams = DEFAULT_DEVICE,
    steps_per_period: int = 60,
) -> tuple[np.ndarray, np.ndarray, EvolutionResult]:
    """Pre-RWA closed-system evolution of (|00> + |01>)/sqrt(2).

    Returns (times, density matrices along the path, full evolution result).
    """
    schedule = bgate_rectangular(duration, params.e_z, params.delta_ez)
    h = frame_hamiltonian(schedule, rwa=False)
    times = np.linspace(0.0, duration, samples)
    res = propagate_unitary(
        h,
        duration,
        breakpoints=schedule.breakpoints,
        sample_times=times,
        steps_per_period=steps_per_period,
    )
    psi0 = np.array([1.0, 1.0, 0.0, 0.0], dtype=complex) / math.sqrt(2.0)
    rhos = np.stack([np.outer(u @ psi0, (u @ psi0).conj()) for u in res.states])
    return times, rhos, res


# ---------------------------------------------------------------------------
# Parallel-transport diagnostics (geometric scheme)
# ---------------------------------------------------------------------------


def parallel_transport_defect(
    schedule: PulseSchedule, sample_count: int = 1000
) -> float:
    """max_t |<b(t)| H_c(t) |b(t)>| * T along the bright-state trajectory.

    Dimensionless (an accumulated-phase rate times the gate time); zero for
    exact parallel transport.
    """
    h = frame_hamiltonian(schedule, rwa=True)
    # sample strictly inside segments; the coupling phase jumps at boundaries
    times = (np.arange(sample_count) + 0.5) * schedule.duration / sample_count
    res = propagate_unitary(
        h, schedule.duration, breakpoints=schedule.breakpoints, sample_times=times
    )
    b = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2.0)
    worst = 0.0
    for t, u in zip(times, res.states):
        hc = coupling_block_hamiltonian(schedule, float(t))
        bt = u @ b
        worst = max(worst, abs(np.vdot(bt, hc @ bt)))
    return worst * schedule.duration


# ---------------------------------------------------------------------------
# Initial-phase sweeps
# ---------------------------------------------------------------------------


def _phase_sweep_worker(args: tuple) -> tuple[tuple, FidelityReport]:
    n_reps, phases, grid_n, quick, decoherence = args
    schedule = build_schedule("fsim_poly", duration=POLY_GATE_TIME, n_reps=n_reps)
    channel = gate_channel(
        schedule,
        rwa=False,
        decoherence=decoherence,
        steps_per_period=STEPS_PER_PERIOD_QUICK if quick else STEPS_PER_PERIOD_FULL,
    )
    rep = average_fidelity(
        channel, fsim_target(schedule), build_grid(grid_n, phases),
        scheme="fsim_poly", n_reps=n_reps, gate_time=schedule.duration,
        delta_ez=schedule.controls.delta_ez,
    )
    return (n_reps, phases), rep


def initial_phase_sweep(
    axis: str,
    values: Sequence[float],
    n_values: Sequence[int] = (1, 2, 3),
    grid_n: int = 40,
    *,
    decoherence: bool = True,
    workers: int = 1,
    quick: bool = False,
) -> list[FidelityReport]:
    """Fidelity of the optimal-parameter scheme vs one initial-state phase."""
    index = {"phi1": 0, "phi2": 1, "phi3": 2}[axis]
    items = []
    for n in n_values:
        for v in values:
            phases = [0.0, 0.0, 0.0]
            phases[index] = float(v)
            items.append((n, tuple(phases), grid_n, quick, decoherence))
    results = dict(_run_pool(_phase_sweep_worker, items, workers))
    return [results[(n, phases)] for (n, phases, _, _, _) in items]
