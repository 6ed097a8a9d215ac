"""Polar subdivision of the unit disk into P annuli times Q angular cones.

Boxes are enumerated angle-first: the box with radius-angle index (k, l)
has linear index i = l + Q*(k - 1), with k, l, i all 1-based.  Annulus k
owns radii in ((k-1)/P, k/P], cone l owns angles in [2*pi*(l-1)/Q,
2*pi*l/Q), so every point of the disk belongs to exactly one box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, OutOfDisk

#: Radii may exceed 1 by at most this much before a point counts as outside
#: the disk (the embedding scaling guarantees max radius 1 only up to rounding).
RADIUS_TOL = 1e-9


@dataclass(frozen=True)
class PolarGrid:
    """Subdivision with ``P`` annuli of thickness ``p = 1/P`` and ``Q`` cones
    of angular width ``q = 360/Q`` degrees."""

    P: int
    Q: int

    def __post_init__(self):
        if self.P < 1 or self.Q < 1:
            raise ValueError("P and Q must be >= 1")

    @property
    def p(self) -> float:
        return 1.0 / self.P

    @property
    def q(self) -> float:
        return 360.0 / self.Q

    @property
    def n_boxes(self) -> int:
        return self.P * self.Q

    @classmethod
    def from_box_sizes(cls, p: float, q: float) -> "PolarGrid":
        """Build a grid from radial thickness ``p`` and angular width ``q``
        (degrees), rounding to the nearest integer subdivision counts."""
        return cls(P=round(1.0 / p), Q=round(360.0 / q))


@dataclass(frozen=True)
class BoxIndex:
    """Linear index ``i`` together with its annulus ``k`` and cone ``l``."""

    i: int
    k: int
    l: int


def ind(grid: PolarGrid, X: complex) -> BoxIndex:
    """Map a point of the unit disk to its box index.

    k = ceil(R*P) clamped to [1, P] (the origin belongs to the innermost
    annulus), l = floor(psi*Q/(2*pi)) + 1 clamped to [1, Q] with psi measured
    anticlockwise from the positive real axis in [0, 2*pi).

    Raises
    ------
    OutOfDisk
        If ``|X| > 1 + RADIUS_TOL``.
    """
    R = abs(X)
    if R > 1.0 + RADIUS_TOL:
        raise OutOfDisk(f"|X| = {R} exceeds the unit disk")
    k = math.ceil(R * grid.P)
    k = min(max(k, 1), grid.P)
    psi = math.atan2(X.imag, X.real) % (2.0 * math.pi)
    l = math.floor(psi * grid.Q / (2.0 * math.pi)) + 1
    l = min(max(l, 1), grid.Q)
    return BoxIndex(i=l + grid.Q * (k - 1), k=k, l=l)


def ind_array(grid: PolarGrid, X: np.ndarray) -> np.ndarray:
    """Vectorized :func:`ind` returning the linear indices of a complex array.

    Raises
    ------
    OutOfDisk
        If any point lies outside the tolerance-padded disk.
    """
    X = np.asarray(X)
    R = np.abs(X)
    if np.any(R > 1.0 + RADIUS_TOL):
        raise OutOfDisk("points outside the unit disk")
    k = np.ceil(R * grid.P).astype(np.int64)
    np.clip(k, 1, grid.P, out=k)
    psi = np.mod(np.angle(X), 2.0 * np.pi)
    l = np.floor(psi * grid.Q / (2.0 * np.pi)).astype(np.int64) + 1
    np.clip(l, 1, grid.Q, out=l)
    return l + grid.Q * (k - 1)


def from_linear(grid: PolarGrid, i: int) -> tuple[int, int]:
    """Recover (annulus k, cone l) from a linear box index.

    Uses k = ceil(i/Q), the exact inverse of angle-first enumeration
    (a floor-based inversion would fail on every last cone l = Q).
    """
    if not 1 <= i <= grid.n_boxes:
        raise IndexOutOfRange(f"box index {i} outside 1..{grid.n_boxes}")
    k = math.ceil(i / grid.Q)
    l = i - grid.Q * (k - 1)
    return k, l


def box_center(grid: PolarGrid, i: int) -> complex:
    """Midpoint of box ``i`` with respect to radius and angle:
    ((k - 1/2)/P) * exp(2*pi*1j*(l - 1/2)/Q)."""
    k, l = from_linear(grid, i)
    radius = (k - 0.5) / grid.P
    angle = 2.0 * math.pi * (l - 0.5) / grid.Q
    return radius * complex(math.cos(angle), math.sin(angle))


def box_center_phase_deg(grid: PolarGrid, i: int) -> float:
    """Phase of the box center in degrees in [0, 360)."""
    _, l = from_linear(grid, i)
    return (360.0 * (l - 0.5) / grid.Q) % 360.0
