"""Measurement-based gates on the cluster: angle schedules and gate noise."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .units import variance_to_db

SQRT2 = math.sqrt(2.0)


class GateKind(str, Enum):
    CZ = "CZ"
    CX = "CX"


#: Control-mode angle magnitude that decouples neighbouring wires.
CONTROL_ANGLE = math.pi / 4


def control_angle(k: int) -> float:
    """Control-mode angle ``(-1)^k pi/4`` for single-mode operation at bin ``k``."""
    return (-1) ** k * CONTROL_ANGLE


@dataclass(frozen=True)
class ByproductOp:
    """Single-mode rotations ``R(a) (x) R(b)`` left on the two output wires."""

    first: float
    second: float

    def inverse(self) -> "ByproductOp":
        return ByproductOp(-self.first, -self.second)


@dataclass(frozen=True)
class MeasurementPattern:
    kind: GateKind
    g: float
    angles: tuple[float, float, float, float, float, float]
    byproduct: ByproductOp


def two_mode_gate_angles(kind: GateKind | str, g: float) -> MeasurementPattern:
    """Homodyne angles ``theta_1..theta_6`` for a controlled-Z/X gate of weight ``g``.

    CZ takes the upper sign branch (``theta_5 = pi/4 + arctan(2/g)``), CX the
    lower one.
    """
    kind = GateKind(kind)
    if not g > 0:
        raise ValueError("coupling strength g must be positive")
    sign = 1.0 if kind is GateKind.CZ else -1.0
    d = math.atan(2.0 / g)
    angles = (
        -math.pi / 8,
        3 * math.pi / 8,
        -math.pi / 8,
        3 * math.pi / 8,
        math.pi / 4 + sign * d,
        math.pi / 4 - sign * d,
    )
    byproduct = ByproductOp(-sign * 3 * math.pi / 4, sign * math.pi / 4)
    return MeasurementPattern(kind, g, angles, byproduct)


@dataclass
class WireLedger:
    """Byproducts accumulated on a logical wire.

    Byproducts are bookkept here and never applied to a covariance matrix;
    the compensating rotations are scheduled on the next step.
    """

    pending: list[ByproductOp] = field(default_factory=list)

    def record(self, op: ByproductOp) -> None:
        self.pending.append(op)

    def compensation(self) -> ByproductOp:
        a = sum(op.first for op in self.pending)
        b = sum(op.second for op in self.pending)
        return ByproductOp(-a, -b)

    def clear(self) -> ByproductOp:
        comp = self.compensation()
        self.pending.clear()
        return comp


def _check_r(r: float) -> None:
    if not r > 0:
        raise ValueError("gate noise is undefined at zero squeezing (r must be > 0)")


def gamma(r: float) -> float:
    return math.tanh(2 * r) / SQRT2


def gate_noise_matrix(r: float) -> np.ndarray:
    """4x8 noise-coefficient matrix of the ``g = 1`` two-mode gate."""
    _check_r(r)
    G = gamma(r)
    G2 = G * G
    s = SQRT2
    return np.array(
        [
            [-s / G2, s / (2 * G2), -3 * s / (4 * G), -s / (4 * G), -1 / G, -1 / (2 * G), 0.0, 0.0],
            [-s / (2 * G2), s / G2, 3 * s / (4 * G), -s / (4 * G), -1 / (2 * G), -1 / G, 0.0, 0.0],
            [0.0, -s / 2, s * G / 4, s * G / 4, -G, G / 2, s, 0.0],
            [s / 2, 0.0, -s * G / 4, s * G / 4, G / 2, -G, 0.0, s],
        ]
    )


def gate_noise_factors(r: float) -> tuple[float, float]:
    """``(N_x, N_p)``: dimensionless gate-noise factors multiplying ``sech(2r)``."""
    _check_r(r)
    t2 = math.tanh(2 * r) ** 2
    nx = 2.5 * (1.0 / (t2 * t2) + 1.0 / t2)
    np_ = 2.5 * (t2 + 1.0)
    return nx, np_


@dataclass(frozen=True)
class GateNoiseReport:
    r: float
    gamma: float
    matrix: np.ndarray
    nx: float
    np_: float
    epsilon: float
    resource_db: float
    cluster_db: float
    residual_x_db: float
    residual_p_db: float


def squeezing_budget(r: float) -> GateNoiseReport:
    """Resource, cluster-mode and post-gate squeezing levels in dB."""
    _check_r(r)
    nx, np_ = gate_noise_factors(r)
    eps = 1.0 / math.cosh(2 * r)
    return GateNoiseReport(
        r=r,
        gamma=gamma(r),
        matrix=gate_noise_matrix(r),
        nx=nx,
        np_=np_,
        epsilon=eps,
        resource_db=variance_to_db(math.exp(-2 * r)),
        cluster_db=variance_to_db(eps),
        residual_x_db=variance_to_db(nx * eps),
        residual_p_db=variance_to_db(np_ * eps),
    )
