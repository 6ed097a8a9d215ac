"""Noisy bistable-oscillator null model: a stable limit cycle coexisting
with a stable equilibrium at the origin, driven by additive white noise.
Escapes from the cycle are phase-uniform by rotational symmetry, which is
the null hypothesis the data analysis is tested against."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels

#: Reflection floor for the polar radius (the 1/R terms diverge at 0).
R_FLOOR = 1e-6


@dataclass(frozen=True)
class HopfParams:
    """Parameters of the SDE.

    ``omega`` is the rotation frequency in Hz (the drift uses 2*pi*omega);
    ``beta < 0`` gives the bistable regime with stable radii 0 and 1 and an
    unstable cycle at sqrt(-beta).
    """

    beta: float
    omega: float = 0.88
    sigma: float = 0.05
    dt_sim: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if self.dt_sim <= 0:
            raise ValueError("dt_sim must be positive")


@dataclass(frozen=True)
class SdePath:
    """A simulated path, either Cartesian (y1, y2) or polar (R, theta)."""

    times: np.ndarray
    y1: np.ndarray | None = None
    y2: np.ndarray | None = None
    R: np.ndarray | None = None
    theta: np.ndarray | None = None
    near_origin: np.ndarray | None = None

    def radius(self) -> np.ndarray:
        if self.R is not None:
            return self.R
        return np.hypot(self.y1, self.y2)


class RadiusInfo(NamedTuple):
    radius: float
    stable: bool


def _radial_drift(beta: float, R: float) -> float:
    return beta * R + (1.0 - beta) * R**3 - R**5


def deterministic_radii(beta: float) -> list[RadiusInfo]:
    """Deterministic invariant radii: the equilibrium at 0 plus the
    nonnegative roots of beta + (1 - beta) R^2 - R^4 = 0, each labeled
    stable/unstable by the sign of the radial drift derivative."""
    out = [RadiusInfo(0.0, beta < 0)]
    # quadratic in R^2 with discriminant (1 + beta)^2
    for r2 in sorted({(1.0 - beta - abs(1.0 + beta)) / 2.0,
                      (1.0 - beta + abs(1.0 + beta)) / 2.0}):
        if r2 <= 0:
            continue
        r = math.sqrt(r2)
        h = 1e-7
        slope = (_radial_drift(beta, r + h) - _radial_drift(beta, r - h)) / (2 * h)
        out.append(RadiusInfo(r, slope < 0))
    return out


def _increments(rng: np.random.Generator, n: int, dt: float) -> np.ndarray:
    return rng.standard_normal((n, 2)) * math.sqrt(dt)


def simulate_cartesian(
    params: HopfParams, T: float, y0: tuple[float, float] = (1.0, 0.0)
) -> SdePath:
    """Euler-Maruyama path of the Cartesian SDE, reproducible given the seed."""
    if T <= 0:
        raise ValueError("T must be positive")
    n = int(round(T / params.dt_sim))
    rng = np.random.default_rng(params.seed)
    dw = _increments(rng, n, params.dt_sim)
    path = _kernels.em_cartesian(
        y0[0], y0[1], params.beta, 2.0 * math.pi * params.omega,
        params.sigma, params.dt_sim, dw,
    )
    times = np.arange(n + 1) * params.dt_sim
    return SdePath(times=times, y1=path[:, 0], y2=path[:, 1])


def simulate_polar(
    params: HopfParams, T: float, R0: float = 1.0, theta0: float = 0.0
) -> SdePath:
    """Euler-Maruyama path of the polar form, including the sigma^2/(2R)
    Ito drift and sigma/R phase-noise gain, with reflection at R_FLOOR.

    Samples that dip below 10 * R_FLOOR are flagged in ``near_origin``.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    if R0 <= 0:
        raise ValueError("R0 must be positive")
    n = int(round(T / params.dt_sim))
    rng = np.random.default_rng(params.seed)
    dw = _increments(rng, n, params.dt_sim)
    path = _kernels.em_polar(
        R0, theta0, params.beta, 2.0 * math.pi * params.omega,
        params.sigma, params.dt_sim, dw, R_FLOOR,
    )
    times = np.arange(n + 1) * params.dt_sim
    R = path[:, 0]
    return SdePath(
        times=times, R=R, theta=path[:, 1], near_origin=R < 10.0 * R_FLOOR
    )


@dataclass(frozen=True)
class EscapePhases:
    """Phases (radians in [0, 2*pi)) at first crossing below the escape
    radius, plus the number of paths that never escaped in budget."""

    phases: np.ndarray
    n_no_escape: int


def escape_phase_ensemble(
    params: HopfParams,
    n_paths: int,
    escape_radius: float,
    max_time: float = 500.0,
    chunk_steps: int = 100_000,
) -> EscapePhases:
    """Phase at escape for an ensemble of paths started on the stable cycle.

    Each path gets an independent generator stream spawned from the base
    seed.  Paths that exhaust ``max_time`` without crossing below
    ``escape_radius`` are skipped and counted.
    """
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    radii = [r.radius for r in deterministic_radii(params.beta) if r.stable and r.radius > 0]
    if not radii or not 0 < escape_radius < max(radii):
        raise ValueError("escape_radius must lie inside the stable cycle")
    r_start = max(radii)
    tpo = 2.0 * math.pi * params.omega
    max_steps = int(round(max_time / params.dt_sim))
    phases = []
    n_no_escape = 0
    streams = np.random.SeedSequence(params.seed).spawn(n_paths)
    for ss in streams:
        rng = np.random.Generator(np.random.PCG64(ss))
        y1, y2 = r_start, 0.0
        done = 0
        escaped = False
        while done < max_steps:
            n = min(chunk_steps, max_steps - done)
            dw = _increments(rng, n, params.dt_sim)
            step, y1, y2 = _kernels.em_cartesian_escape(
                y1, y2, params.beta, tpo, params.sigma, params.dt_sim,
                dw, escape_radius,
            )
            if step >= 0:
                phases.append(math.atan2(y2, y1) % (2.0 * math.pi))
                escaped = True
                break
            done += n
        if not escaped:
            n_no_escape += 1
    return EscapePhases(phases=np.asarray(phases), n_no_escape=n_no_escape)


def export_csv(path: SdePath, filename, every: int = 1) -> None:
    """Write a path as the t,force CSV the signal loader ingests.

    The force column is y1 (or R*cos(theta) for polar paths); ``every``
    subsamples to a coarser sampling step.
    """
    if path.y1 is not None:
        force = path.y1
    else:
        force = path.R * np.cos(path.theta)
    with open(filename, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "force"])
        for t, f in zip(path.times[::every], force[::every]):
            writer.writerow([f"{t:.10g}", f"{f:.10g}"])
