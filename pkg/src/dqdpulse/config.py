"""Experiment configuration: one JSON document per run, flags override keys.

All frequencies in config documents are plain Hz (the 2*pi is applied
internally), times are nanoseconds, angles radians.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import os
from dataclasses import dataclass
from typing import Any, Mapping

from .device import DEFAULT_DEVICE, DeviceParams, load_device_params

SCHEMES = ("fsim_rect", "fsim_poly", "bgate", "fsim_geometric")


@dataclass
class ExperimentConfig:
    scheme: str = "fsim_rect"
    theta: float = math.pi / 4.0
    xi: float = math.pi / 2.0
    gate_time_ns: float | None = None  # None: derive from the exchange cap
    n_reps: int = 1
    n_values: tuple[int, ...] = ()
    eta: float = -1.0 / 3.0
    rabi_deltas: tuple[float, ...] = ()
    detuning_eps: tuple[float, ...] = ()
    decoherence: bool = True
    rwa: bool = False
    convention: str = "standard"
    grid_n: int = 40
    phases: tuple[float, float, float] = (0.0, 0.0, 0.0)
    steps_per_period: int = 200
    seed: int = 7
    quick: bool = False
    workers: int = 1
    outdir: str = "out"
    device_file: str | None = None
    samples: int = 2001
    trajectory: bool = False

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if self.convention not in ("standard", "paper"):
            raise ValueError("convention must be 'standard' or 'paper'")
        if self.grid_n < 1:
            raise ValueError("grid_n must be >= 1")
        if self.scheme == "fsim_rect" or self.scheme == "fsim_poly":
            if abs(self.theta) > math.pi / 2.0 + 1e-12 or abs(self.xi) > math.pi + 1e-12:
                raise ValueError("gate parameters outside |theta| <= pi/2, |xi| <= pi")
        if self.n_reps < 1:
            raise ValueError("n_reps must be >= 1")
        for d in self.rabi_deltas:
            if abs(d) > 0.5:
                raise ValueError("rabi delta outside sane range")
        for e in self.detuning_eps:
            if abs(e) > 0.5:
                raise ValueError("detuning eps outside sane range")
        if self.quick and self.grid_n == 40:
            object.__setattr__(self, "grid_n", 10)

    @property
    def gate_time(self) -> float | None:
        return None if self.gate_time_ns is None else self.gate_time_ns * 1e-9

    def device(self) -> DeviceParams:
        if self.device_file:
            return load_device_params(self.device_file)
        return DEFAULT_DEVICE

    def resolved_outdir(self) -> str:
        return os.environ.get("DQDPULSE_OUTDIR", self.outdir)

    def resolved_workers(self) -> int:
        env = os.environ.get("DQDPULSE_WORKERS")
        return int(env) if env else self.workers

    def to_json(self) -> str:
        doc = dataclasses.asdict(self)
        return json.dumps(doc, indent=2, sort_keys=True, default=list)

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()[:16]


_LIST_KEYS = {"n_values", "rabi_deltas", "detuning_eps", "phases"}


def config_from_mapping(doc: Mapping[str, Any]) -> ExperimentConfig:
    kwargs: dict[str, Any] = {}
    valid = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(doc) - valid
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for key, val in doc.items():
        kwargs[key] = tuple(val) if key in _LIST_KEYS and val is not None else val
    return ExperimentConfig(**kwargs)


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    with open(path) as fh:
        return config_from_mapping(json.load(fh))


def apply_overrides(cfg: ExperimentConfig, overrides: Mapping[str, Any]) -> ExperimentConfig:
    doc = dataclasses.asdict(cfg)
    for key, val in overrides.items():
        if val is not None:
            doc[key] = val
    return config_from_mapping(doc)
