"""Concrete pulse schedules for the four gate construction schemes.

A schedule is an ordered list of segments tiling [0, T].  Each segment
carries the exchange envelope j(t) (rad/s, a closed-form function of
absolute time), the exchange carrier (omega, psi) entering
J(t) = 2 j(t) cos(omega t + psi), and, for the B-gate scheme, the
transverse drive amplitude/carrier.  Segment boundaries double as
quadrature breakpoints, so discontinuous envelopes are represented
exactly rather than smoothed.

The N-repetition rule compresses the base envelope N-fold in time and
repeats it, leaving amplitudes unchanged; the defining integrals are
preserved because each repetition spans a whole carrier period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from scipy.integrate import cumulative_simpson

from .algebra import TWO_PI, simpson_integrate
from .trajectories import (
    GateTarget,
    IntegralConstraint,
    PhysicalControls,
    solve_bgate_controls,
    solve_fsim_controls,
)

Envelope = Callable[[np.ndarray], np.ndarray]


def _const_envelope(level: float) -> Envelope:
    return lambda ts: np.full_like(np.asarray(ts, dtype=float), level)


@dataclass(frozen=True)
class Segment:
    """One control segment on [t_start, t_end)."""

    t_start: float
    t_end: float
    envelope: Envelope  # j(t), rad/s, takes absolute time (vectorized)
    carrier_omega: float
    carrier_phase: float = 0.0
    drive_amp: float = 0.0  # B_y^1 amplitude (rad/s); physical field is 2 B_y^1 cos(...)
    drive_omega: float = 0.0
    drive_phase: float = 0.0


@dataclass(frozen=True)
class PulseSchedule:
    """Piecewise control record for one composite gate."""

    segments: tuple[Segment, ...]
    duration: float
    scheme: str
    controls: PhysicalControls
    rabi_delta: float = 0.0
    detuning_eps: float = 0.0
    meta: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("schedule needs at least one segment")
        t = 0.0
        for seg in self.segments:
            if not math.isclose(seg.t_start, t, rel_tol=0.0, abs_tol=1e-15 * self.duration + 1e-30):
                raise ValueError("segments must tile [0, T] without gaps or overlaps")
            if seg.t_end <= seg.t_start:
                raise ValueError("segment must have positive length")
            t = seg.t_end
        if not math.isclose(t, self.duration, rel_tol=1e-12):
            raise ValueError("segments must end exactly at the schedule duration")

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(seg.t_start for seg in self.segments[1:])

    def segment_at(self, t: float) -> Segment:
        # right-open segments; the final point belongs to the last segment
        for seg in self.segments:
            if t < seg.t_end:
                return seg
        return self.segments[-1]

    def _segment_index(self, ts: np.ndarray) -> np.ndarray:
        edges = np.array([seg.t_end for seg in self.segments[:-1]])
        return np.searchsorted(edges, ts, side="right")

    def envelope(self, ts: np.ndarray) -> np.ndarray:
        """j(t) sampled at absolute times (vectorized)."""
        ts = np.asarray(ts, dtype=float)
        idx = self._segment_index(np.atleast_1d(ts))
        out = np.empty(idx.shape, dtype=float)
        for k, seg in enumerate(self.segments):
            sel = idx == k
            if np.any(sel):
                out[sel] = seg.envelope(np.atleast_1d(ts)[sel])
        return out.reshape(np.shape(ts)) if np.shape(ts) else float(out[0])

    def carrier(self, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(omega, psi) of the exchange carrier at each sample time."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        idx = self._segment_index(ts)
        om = np.array([self.segments[k].carrier_omega for k in idx])
        ps = np.array([self.segments[k].carrier_phase for k in idx])
        return om, ps

    def drive(self, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(B_y^1, omega_drive, phase) at each sample time."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        idx = self._segment_index(ts)
        amp = np.array([self.segments[k].drive_amp for k in idx])
        om = np.array([self.segments[k].drive_omega for k in idx])
        ph = np.array([self.segments[k].drive_phase for k in idx])
        return amp, om, ph

    def exchange(self, ts: np.ndarray) -> np.ndarray:
        """Full exchange pulse J(t) = 2 j(t) cos(omega t + psi)."""
        om, ps = self.carrier(np.atleast_1d(ts))
        j = self.envelope(np.atleast_1d(ts))
        out = 2.0 * j * np.cos(om * np.atleast_1d(ts) + ps)
        return out.reshape(np.shape(ts)) if np.shape(ts) else float(out[0])

    def max_envelope(self, samples_per_segment: int = 2001) -> float:
        """max_t |j(t)| over a dense per-segment sampling."""
        peak = 0.0
        for seg in self.segments:
            ts = np.linspace(seg.t_start, seg.t_end, samples_per_segment)
            peak = max(peak, float(np.max(np.abs(seg.envelope(ts)))))
        return peak

    def max_exchange(self, samples_per_segment: int = 4001) -> float:
        """max_t |J(t)|; for these carriers this equals 2 max|j| on a dense grid."""
        peak = 0.0
        for seg in self.segments:
            ts = np.linspace(seg.t_start, seg.t_end, samples_per_segment)
            peak = max(peak, float(np.max(np.abs(2.0 * seg.envelope(ts) * np.cos(seg.carrier_omega * ts + seg.carrier_phase)))))
        return peak

    def max_frequency_hz(self) -> float:
        """Largest oscillation frequency present (Hz), for step-floor sizing.

        Counter-rotating residues oscillate at twice the respective carrier.
        """
        fmax = 0.0
        for seg in self.segments:
            fmax = max(fmax, 2.0 * seg.carrier_omega / TWO_PI)
            if seg.drive_amp:
                fmax = max(fmax, 2.0 * seg.drive_omega / TWO_PI)
        return fmax

    def integrate_envelope(
        self,
        weight: Callable[[np.ndarray], np.ndarray] | None = None,
        t_start: float = 0.0,
        t_end: float | None = None,
        panels: int = 20_000,
    ) -> float:
        """Simpson quadrature of j(t) * weight(t), split exactly at segments.

        Each sub-interval samples its own segment's closed-form envelope, so
        discontinuities at the boundaries cost nothing.
        """
        t_end = self.duration if t_end is None else t_end
        total = 0.0
        for seg in self.segments:
            lo = max(t_start, seg.t_start)
            hi = min(t_end, seg.t_end)
            if hi <= lo:
                continue
            if weight is None:
                f = seg.envelope
            else:
                f = lambda ts, _seg=seg: _seg.envelope(ts) * weight(ts)
            total += complex(simpson_integrate(f, lo, hi, panels=max(64, int(panels * (hi - lo) / self.duration)))).real
        return total

    def integrate_exchange(self, t_start: float = 0.0, t_end: float | None = None, panels: int = 40_000) -> float:
        """Simpson quadrature of the full pulse J(t) = 2 j cos(wt + psi)."""
        t_end = self.duration if t_end is None else t_end
        total = 0.0
        for seg in self.segments:
            lo = max(t_start, seg.t_start)
            hi = min(t_end, seg.t_end)
            if hi <= lo:
                continue
            f = lambda ts, _s=seg: 2.0 * _s.envelope(ts) * np.cos(_s.carrier_omega * ts + _s.carrier_phase)
            total += complex(simpson_integrate(f, lo, hi, panels=max(64, int(panels * (hi - lo) / self.duration)))).real
        return total

    def check_constraints(self, panels: int = 20_000) -> dict[str, float]:
        """Evaluate every defining integral by Simpson quadrature.

        Returns {label: |integral - target|}.
        """
        residuals: dict[str, float] = {}
        for c in self.controls.constraints:
            val = self.integrate_envelope(c.weight, c.t_start, c.t_end, panels)
            residuals[c.label] = abs(val - c.target)
        return residuals


# ---------------------------------------------------------------------------
# fSim schemes
# ---------------------------------------------------------------------------


def fsim_rectangular(
    theta: float, xi: float, duration: float, n_reps: int = 1, *, shifted: bool = False
) -> PulseSchedule:
    """Three-level rectangular envelope realizing fSim(theta, xi) in one step.

    Base pulse: j = (8 theta -/+ xi pi)/(4T) on the outer quarters / middle
    half; for n_reps > 1 the time axis is deflated N-fold and the pulse
    repeated, with carrier delta_Ez = 2 N pi / T.
    """
    controls = solve_fsim_controls(theta, xi, duration, n_reps, shifted=shifted)
    lo = (8.0 * theta - xi * math.pi) / (4.0 * duration)
    hi = (8.0 * theta + xi * math.pi) / (4.0 * duration)
    omega = controls.delta_ez
    rep = duration / n_reps
    segments = []
    for k in range(n_reps):
        t0 = k * rep
        for frac0, frac1, level in ((0.0, 0.25, lo), (0.25, 0.75, hi), (0.75, 1.0, lo)):
            segments.append(
                Segment(t0 + frac0 * rep, t0 + frac1 * rep, _const_envelope(level), omega)
            )
    return PulseSchedule(
        segments=tuple(segments),
        duration=duration,
        scheme="fsim_rect",
        controls=controls,
        meta={"theta": theta, "xi": xi, "n_reps": n_reps, "j_lo": lo, "j_hi": hi},
    )


def polynomial_coefficients(theta: float, xi: float, n_reps: int, eta: float) -> tuple[float, float]:
    """(alpha_hat, beta) of the degree-6 envelope; alpha_hat = alpha * T.

    beta solves the cosine-moment constraint for a single pulse against
    cos(2 n_reps pi t / T); alpha then fixes the area to 2 theta.  Either
    solution denominator may vanish (the amplitude normalization does so
    identically at eta = 0, where beta = -2/5 and 14 + 35 beta = 0); both
    cases are the family's singular configurations.
    """
    m = n_reps * math.pi
    a_coef = -(6300.0 + 12600.0 * eta)
    b_coef = 60.0 * eta + 35.0
    if theta == 0.0:
        raise ValueError("polynomial family is parameterized by xi/theta; theta = 0 is singular")
    ratio = xi / theta
    den = 18900.0 * eta + a_coef * m**2 + b_coef * m**6 * ratio
    scale = abs(18900.0 * eta) + abs(a_coef) * m**2 + abs(b_coef) * m**6 * abs(ratio)
    if abs(den) < 1e-9 * scale:
        raise ValueError(
            f"singular polynomial configuration: beta denominator vanishes "
            f"(eta={eta}, n_reps={n_reps}, xi/theta={ratio})"
        )
    beta = (2520.0 * m**2 - 14.0 * m**6 * ratio) / den
    norm = 14.0 + 35.0 * beta + 60.0 * eta * beta
    if abs(norm) < 1e-9 * (14.0 + abs(35.0 * beta) + abs(60.0 * eta * beta)):
        raise ValueError(
            f"singular polynomial configuration: amplitude denominator vanishes "
            f"(eta={eta}, n_reps={n_reps}, xi/theta={ratio})"
        )
    alpha_hat = 840.0 * theta / norm
    return alpha_hat, beta


def _poly_envelope(alpha_hat: float, beta: float, eta: float, t0: float, rep: float, duration: float) -> Envelope:
    def env(ts: np.ndarray) -> np.ndarray:
        x = (np.asarray(ts, dtype=float) - t0) / rep
        return (alpha_hat / duration) * (
            (1.0 + 2.0 * beta + 3.0 * eta * beta) * x**2
            - (3.0 * beta + 4.0 * eta * beta + 2.0) * x**3
            + x**4
            + beta * x**5
            + eta * beta * x**6
        )

    return env


def fsim_polynomial(
    theta: float,
    xi: float,
    duration: float,
    n_reps: int = 1,
    eta: float = -1.0 / 3.0,
    *,
    repeat: bool = True,
    shifted: bool = False,
) -> PulseSchedule:
    """Smooth degree-6 polynomial envelope with tunable parameter eta.

    j(0) = j(T) = 0 with matching end slopes by construction.  With
    ``repeat`` (default) the n_reps > 1 schedule is the N-fold compressed
    repetition of the base pulse, exactly like the rectangular scheme; the
    single-pulse variant (``repeat=False``) instead recomputes beta against
    the cos(2 N pi t / T) moment, at the cost of a much larger amplitude.
    """
    controls = solve_fsim_controls(theta, xi, duration, n_reps, shifted=shifted)
    omega = controls.delta_ez
    if repeat:
        alpha_hat, beta = polynomial_coefficients(theta, xi, 1, eta)
        rep = duration / n_reps
        segments = tuple(
            Segment(k * rep, (k + 1) * rep, _poly_envelope(alpha_hat, beta, eta, k * rep, rep, duration), omega)
            for k in range(n_reps)
        )
    else:
        alpha_hat, beta = polynomial_coefficients(theta, xi, n_reps, eta)
        segments = (
            Segment(0.0, duration, _poly_envelope(alpha_hat, beta, eta, 0.0, duration, duration), omega),
        )
    return PulseSchedule(
        segments=segments,
        duration=duration,
        scheme="fsim_poly",
        controls=controls,
        meta={
            "theta": theta,
            "xi": xi,
            "n_reps": n_reps,
            "eta": eta,
            "alpha_hat": alpha_hat,
            "beta": beta,
        },
    )


def fsim_geometric(theta: float, xi: float, duration: float) -> PulseSchedule:
    """Geometric iSWAP-like rotation plus dynamical conditional phase.

    Four equal segments with discontinuous carrier-phase switching:
    (j, psi) = (2pi/T, pi/2), ((4pi cos th + pi xi)/(2T cos th), th - pi/2),
    ((4pi cos th - pi xi)/(2T cos th), th - pi/2), (2pi/T, pi/2), with
    E_z = xi/(2T) and carrier delta_Ez = 4pi/T.  The envelope areas over
    the three carrier-phase intervals are (pi/2, pi, pi/2), driving the
    bright state equator -> pole -> pole -> equator, and the full exchange
    integral is exactly -xi.
    """
    if abs(math.cos(theta)) < 1e-12:
        raise ValueError("geometric construction divides by cos(theta); theta = pi/2 is excluded")
    if duration <= 0.0:
        raise ValueError("gate duration must be positive")
    base = solve_fsim_controls(theta, xi, duration, 1)
    omega = 4.0 * math.pi / duration
    j_outer = 2.0 * math.pi / duration
    j_plus = (4.0 * math.pi * math.cos(theta) + math.pi * xi) / (2.0 * duration * math.cos(theta))
    j_minus = (4.0 * math.pi * math.cos(theta) - math.pi * xi) / (2.0 * duration * math.cos(theta))
    quarter = duration / 4.0
    layout = (
        (j_outer, math.pi / 2.0),
        (j_plus, theta - math.pi / 2.0),
        (j_minus, theta - math.pi / 2.0),
        (j_outer, math.pi / 2.0),
    )
    segments = tuple(
        Segment(k * quarter, (k + 1) * quarter, _const_envelope(j), omega, psi)
        for k, (j, psi) in enumerate(layout)
    )
    constraints = (
        IntegralConstraint("leg1_area", math.pi / 2.0, "plain", t_start=0.0, t_end=quarter),
        IntegralConstraint("leg2_area", math.pi, "plain", t_start=quarter, t_end=3 * quarter),
        IntegralConstraint("leg3_area", math.pi / 2.0, "plain", t_start=3 * quarter, t_end=duration),
    )
    controls = PhysicalControls(
        scheme="fsim_geometric",
        duration=duration,
        e_z=xi / (2.0 * duration),
        delta_ez=omega,
        constraints=constraints,
        target=base.target,
    )
    sched = PulseSchedule(
        segments=segments,
        duration=duration,
        scheme="fsim_geometric",
        controls=controls,
        meta={"theta": theta, "xi": xi, "n_reps": 1},
    )
    return sched


def bgate_rectangular(duration: float, e_z: float, delta_ez: float) -> PulseSchedule:
    """Single-switch rectangular schedule for the B gate.

    [0, 2T/3) realizes B1(pi/4) with drive phase pi/2; [2T/3, T] realizes
    B2(pi/8) with drive phase 0.  The exchange envelope j = -3pi/(2T) is
    constant throughout; only the transverse drive switches at 2T/3.
    Drive carrier omega2 = E_z + delta_Ez/2 in absolute time.
    """
    if duration <= 0.0:
        raise ValueError("gate duration must be positive")
    omega1 = e_z - delta_ez / 2.0
    omega2 = e_z + delta_ez / 2.0
    c1 = solve_bgate_controls("B1", math.pi / 4.0, 2.0 * duration / 3.0, omega1, omega2)
    c2 = solve_bgate_controls("B2", math.pi / 8.0, duration / 3.0, omega1, omega2)
    j_level = -3.0 * math.pi / (2.0 * duration)
    switch = 2.0 * duration / 3.0
    segments = (
        Segment(
            0.0, switch, _const_envelope(j_level), delta_ez, 0.0,
            drive_amp=c1.drive_amp, drive_omega=omega2, drive_phase=c1.drive_phase,
        ),
        Segment(
            switch, duration, _const_envelope(j_level), delta_ez, 0.0,
            drive_amp=c2.drive_amp, drive_omega=omega2, drive_phase=c2.drive_phase,
        ),
    )
    constraints = (
        IntegralConstraint("b1_area", -math.pi, "plain", t_start=0.0, t_end=switch),
        IntegralConstraint("b2_area", -math.pi / 2.0, "plain", t_start=switch, t_end=duration),
    )
    controls = PhysicalControls(
        scheme="bgate",
        duration=duration,
        e_z=e_z,
        delta_ez=delta_ez,
        constraints=constraints,
        target=GateTarget("b", duration),
    )
    return PulseSchedule(
        segments=segments,
        duration=duration,
        scheme="bgate",
        controls=controls,
        meta={
            "j_level": j_level,
            "by1_b1": c1.drive_amp,
            "by1_b2": c2.drive_amp,
            "switch": switch,
            # weak-exchange validity indicator J/delta_Ez (reported, not enforced)
            "weak_exchange_ratio": 2.0 * abs(j_level) / delta_ez,
        },
    )


def gate_time_for_exchange_cap(scheme: str, theta: float, xi: float, j_max: float, **kwargs) -> float:
    """Smallest T such that max|J(t)| = j_max for the given scheme.

    Envelopes scale as 1/T, so T = max|J(t) T| / j_max, evaluated on a
    reference schedule at T = 1.
    """
    builders = {
        "fsim_rect": lambda: fsim_rectangular(theta, xi, 1.0, 1),
        "fsim_poly": lambda: fsim_polynomial(theta, xi, 1.0, 1, kwargs.get("eta", -1.0 / 3.0)),
        "fsim_geometric": lambda: fsim_geometric(theta, xi, 1.0),
        "bgate": lambda: bgate_rectangular(1.0, kwargs.get("e_z", 1.0), kwargs.get("delta_ez", 0.5)),
    }
    if scheme not in builders:
        raise ValueError(f"unknown scheme {scheme!r}")
    ref = builders[scheme]()
    jt_max = 2.0 * ref.max_envelope()
    return jt_max / j_max


# ---------------------------------------------------------------------------
# Error sensitivity
# ---------------------------------------------------------------------------


def error_sensitivity(schedule: PulseSchedule, delta_ez: float | None = None, *, oversample: int = 1) -> float:
    """Second-order sensitivity q_s to the counter-rotating residue.

    q_s = | integral_0^T exp(-2 i theta(t)) j(t) sin(2 delta_Ez t) (i/2) dt |^2
    with theta(t) the accumulated envelope area.  Quadrature resolves both
    the carrier and the envelope, with segment edges as breakpoints;
    ``oversample`` multiplies the node density (used by convergence checks).
    """
    w = schedule.controls.delta_ez if delta_ez is None else delta_ez
    total = 0.0 + 0.0j
    theta_acc = 0.0
    periods = max(1.0, w * schedule.duration / TWO_PI)
    per_segment = int(512 * oversample * max(1.0, periods / len(schedule.segments)))
    for seg in schedule.segments:
        n = per_segment
        if n % 2:
            n += 1
        ts = np.linspace(seg.t_start, seg.t_end, n + 1)
        js = seg.envelope(ts)
        theta = theta_acc + np.concatenate([[0.0], cumulative_simpson(js, x=ts)])
        integrand = np.exp(-2j * theta) * js * np.sin(2.0 * w * ts) * 0.5j
        h = (seg.t_end - seg.t_start) / n
        total += h / 3.0 * (integrand[0] + integrand[-1] + 4.0 * integrand[1:-1:2].sum() + 2.0 * integrand[2:-1:2].sum())
        theta_acc = float(theta[-1])
    return float(abs(total) ** 2)


def optimize_eta(
    theta: float,
    xi: float,
    duration: float,
    n_reps: int = 1,
    eta_grid: Sequence[float] | None = None,
) -> tuple[float, np.ndarray]:
    """Grid argmin of q_s over eta; ties break toward smaller |eta|.

    Returns (eta_star, q_s values over the grid).  Grid points at singular
    configurations are skipped; if every point is singular this raises.
    """
    if eta_grid is None:
        eta_grid = np.linspace(-1.0, 1.0, 201)
    eta_grid = np.asarray(list(eta_grid), dtype=float)
    if eta_grid.size == 0:
        raise ValueError("eta grid must be nonempty")
    qs = np.full(eta_grid.shape, np.inf)
    for i, eta in enumerate(eta_grid):
        try:
            sched = fsim_polynomial(theta, xi, duration, n_reps, float(eta))
        except ValueError:
            continue
        qs[i] = error_sensitivity(sched)
    if not np.any(np.isfinite(qs)):
        raise ValueError("every eta grid point hit a singular configuration")
    best = np.min(qs)
    candidates = np.flatnonzero(qs <= best * (1.0 + 1e-12))
    eta_star = candidates[np.argmin(np.abs(eta_grid[candidates]))]
    return float(eta_grid[eta_star]), qs


# ---------------------------------------------------------------------------
# Error injection on schedules
# ---------------------------------------------------------------------------


def apply_rabi_error(schedule: PulseSchedule, delta: float) -> PulseSchedule:
    """Scale every exchange envelope by (1 + delta); drives are untouched."""
    import warnings

    if abs(delta) > 0.1:
        warnings.warn(f"Rabi error |delta| = {abs(delta)} exceeds the modeled range 0.1")
    if delta == 0.0:
        return schedule

    def scaled(env: Envelope) -> Envelope:
        return lambda ts: (1.0 + delta) * env(ts)

    segments = tuple(replace(seg, envelope=scaled(seg.envelope)) for seg in schedule.segments)
    return replace(schedule, segments=segments, rabi_delta=schedule.rabi_delta + delta)


def apply_detuning_error(schedule: PulseSchedule, eps: float) -> PulseSchedule:
    """Mark the schedule with a fractional frame-frequency miscalibration.

    The designed envelopes and carriers are kept; the mismatch enters the
    propagation frame as the diagonal perturbation
    eps * diag(E_z, -delta_Ez/2, +delta_Ez/2, -E_z).
    """
    import warnings

    if abs(eps) > 0.1:
        warnings.warn(f"detuning error |eps| = {abs(eps)} exceeds the modeled range 0.1")
    return replace(schedule, detuning_eps=schedule.detuning_eps + eps)


def detuning_perturbation(e_z: float, delta_ez: float, eps: float) -> np.ndarray:
    """eps * diag(E_z, -delta_Ez/2, +delta_Ez/2, -E_z)."""
    return eps * np.diag([e_z, -delta_ez / 2.0, delta_ez / 2.0, -e_z]).astype(complex)


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------

SCHEDULE_CSV_HEADER = "t_ns,j_over_2pi_MHz,J_over_2pi_MHz,psi_rad,By_over_2pi_MHz"


def schedule_rows(schedule: PulseSchedule, samples: int = 2001) -> Iterable[tuple[float, ...]]:
    """Time series behind the pulse-shape figures, one row per sample."""
    ts = np.linspace(0.0, schedule.duration, samples)
    j = schedule.envelope(ts)
    jj = schedule.exchange(ts)
    _, psi = schedule.carrier(ts)
    amp, om, ph = schedule.drive(ts)
    by = 2.0 * amp * np.cos(om * ts + ph)
    for k in range(samples):
        yield (
            ts[k] * 1e9,
            j[k] / TWO_PI / 1e6,
            jj[k] / TWO_PI / 1e6,
            psi[k],
            by[k] / TWO_PI / 1e6,
        )


def schedule_to_csv(schedule: PulseSchedule, path, samples: int = 2001) -> None:
    with open(path, "w") as fh:
        fh.write(SCHEDULE_CSV_HEADER + "\n")
        for row in schedule_rows(schedule, samples):
            fh.write(",".join(f"{v:.12g}" for v in row) + "\n")
