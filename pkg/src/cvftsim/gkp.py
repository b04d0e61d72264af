"""Rectangular-lattice GKP error analysis.

A data qubit suffers Gaussian quadrature shifts ``xi_x ~ N(0, sigma_x^2)`` and
``xi_p ~ N(0, sigma_p^2)``.  Correction rounds each shift to the nearest
multiple of the lattice spacing (``sqrt(pi/R)`` in x, ``sqrt(pi R)`` in p);
landing on an odd multiple flips the logical qubit.  Probabilities are comb
sums of Gaussian bin masses evaluated with error functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.special import erf, erfc

from .gates import gate_noise_factors
from .units import db_to_r

SQRT_PI = math.sqrt(math.pi)


class NoiseKind(str, Enum):
    GATE_NOISE = "gate-noise"
    RESOURCE_ONLY = "resource-only"


class Convention(str, Enum):
    """How the printed noise terms are read as quadrature variances.

    ``half-vacuum``: every term is a variance with vacuum 1/2, i.e.
    ``sigma_0^2 = sigma_A^2 = exp(-2r)/2`` and the gate term is
    ``N sech(2r)/2``.  ``unit-vacuum``: the terms are taken literally
    (``exp(-2r)``, ``N sech(2r)``).
    """

    HALF_VACUUM = "half-vacuum"
    UNIT_VACUUM = "unit-vacuum"

    @property
    def scale(self) -> float:
        return 0.5 if self is Convention.HALF_VACUUM else 1.0


@dataclass(frozen=True)
class GKPLattice:
    R: float = 1.0

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("aspect ratio must be positive")

    @property
    def spacing_x(self) -> float:
        return math.sqrt(math.pi / self.R)

    @property
    def spacing_p(self) -> float:
        return math.sqrt(math.pi * self.R)


@dataclass(frozen=True)
class QuadratureNoise:
    sigma_x: float
    sigma_p: float

    def __post_init__(self):
        if not (self.sigma_x > 0 and self.sigma_p > 0):
            raise ValueError("noise standard deviations must be positive")

    @classmethod
    def from_variances(cls, var_x: float, var_p: float) -> "QuadratureNoise":
        return cls(math.sqrt(var_x), math.sqrt(var_p))

    @property
    def var_x(self) -> float:
        return self.sigma_x**2

    @property
    def var_p(self) -> float:
        return self.sigma_p**2

    def swapped(self) -> "QuadratureNoise":
        return QuadratureNoise(self.sigma_p, self.sigma_x)


@dataclass(frozen=True)
class NoiseModel:
    kind: NoiseKind
    r: float
    convention: Convention = Convention.HALF_VACUUM

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        object.__setattr__(self, "convention", Convention(self.convention))

    @classmethod
    def from_db(cls, kind, squeezing_db: float, convention=Convention.HALF_VACUUM) -> "NoiseModel":
        return cls(NoiseKind(kind), db_to_r(squeezing_db), Convention(convention))


def noise_variances(model: NoiseModel) -> QuadratureNoise:
    """Total shift variances: data GKP + gate (or resource) term + ancilla GKP."""
    if not model.r > 0:
        raise ValueError("noise model needs r > 0")
    c = model.convention.scale
    delta = math.exp(-2 * model.r)
    spikes = 2 * c * delta  # data and ancilla GKP spikes
    if model.kind is NoiseKind.GATE_NOISE:
        nx, np_ = gate_noise_factors(model.r)
        eps = 1.0 / math.cosh(2 * model.r)
        return QuadratureNoise.from_variances(spikes + c * nx * eps, spikes + c * np_ * eps)
    return QuadratureNoise.from_variances(spikes + c * delta, spikes + c * delta)


def gaussian_bin_mass(sigma: float, lo: float, hi: float) -> float:
    """Probability that ``N(0, sigma^2)`` falls in ``[lo, hi]``.

    Uses ``erfc`` on whichever tail the interval sits in so that tiny masses
    keep their relative precision.
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    if not lo < hi:
        raise ValueError("need lo < hi")
    s = math.sqrt(2.0) * sigma
    if lo >= 0:
        return 0.5 * (math.erfc(lo / s) - math.erfc(hi / s))
    if hi <= 0:
        return 0.5 * (math.erfc(-hi / s) - math.erfc(-lo / s))
    return 0.5 * (math.erf(hi / s) - math.erf(lo / s))


def truncation_radius(sigma: float, spacing: float, factor: float = 10.0) -> int:
    """Largest ``|n|`` kept in a comb sum."""
    return max(8, math.ceil(factor * sigma / spacing) + 1)


def comb_masses(sigma: float, spacing: float, radius: int | None = None) -> tuple[float, float]:
    """``(even, odd)``: total mass of the even and odd bins of width ``spacing``."""
    if radius is None:
        radius = truncation_radius(sigma, spacing)
    s = math.sqrt(2.0) * sigma
    n = np.arange(1, radius + 1)
    lo = (n - 0.5) * spacing / s
    hi = (n + 0.5) * spacing / s
    side = 0.5 * (erfc(lo) - erfc(hi))  # mass of bin n (and of bin -n)
    centre = float(erf(0.5 * spacing / s))
    even = centre + 2.0 * float(side[1::2][::-1].sum())
    odd = 2.0 * float(side[0::2][::-1].sum())
    return even, odd


class PauliChannel(NamedTuple):
    success: float
    pX: float
    pZ: float
    pY: float


def gkp_channel(R: float, noise: QuadratureNoise) -> PauliChannel:
    lat = GKPLattice(R)
    ax, ox = comb_masses(noise.sigma_x, lat.spacing_x)
    ap, op = comb_masses(noise.sigma_p, lat.spacing_p)
    return PauliChannel(ax * ap, ox * ap, op * ax, ox * op)


def gkp_success(R: float, noise: QuadratureNoise) -> float:
    """Probability that both quadrature shifts are corrected."""
    return gkp_channel(R, noise).success


def pauli_probs(R: float, noise: QuadratureNoise) -> tuple[float, float]:
    """``(pX, pZ)``: exactly one of the two quadratures is mis-corrected."""
    ch = gkp_channel(R, noise)
    return ch.pX, ch.pZ
