"""Brute-force sampling oracle for the GKP and repetition-code formulas.

Two estimators are provided.  ``independent`` mirrors the factorised
analytic model: the bit-flip and phase-flip experiments draw separate
samples and count Pauli-X and Pauli-Z outcomes respectively.  ``joint`` uses
one physical shift pair per qubit, so a qubit whose x and p shifts both land
in odd bins (a Y error) flips in both experiments.

Random numbers come from a counter-based SplitMix64 stream keyed by
``(seed, trial, qubit, stream)``; the same seed gives bit-identical results
for any chunking, worker count or backend.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple

import numpy as np

from .ftcode import RepetitionSpec, logical_error
from .gkp import GKPLattice, QuadratureNoise, gkp_channel
from .kernels import DIST_GAUSSIAN, DIST_TWO_POINT, MODE_INDEPENDENT, MODE_JOINT, get_kernel


class Outcome(str, Enum):
    I = "I"  # noqa: E741
    X = "X"
    Z = "Z"
    Y = "Y"


class SamplingMode(str, Enum):
    INDEPENDENT = "independent"
    JOINT = "joint"


def odd_bin(xi: float, spacing: float) -> bool:
    """True if ``xi`` rounds to an odd multiple of ``spacing`` (ties round down)."""
    return int(math.ceil(xi / spacing - 0.5)) % 2 == 1


def classify_shift(R: float, xi_x: float, xi_p: float) -> Outcome:
    lat = GKPLattice(R)
    fx = odd_bin(xi_x, lat.spacing_x)
    fp = odd_bin(xi_p, lat.spacing_p)
    return (Outcome.I, Outcome.X, Outcome.Z, Outcome.Y)[fx + 2 * fp]


def sample_qubit_outcome(R: float, sigma_x: float, sigma_p: float, rng: np.random.Generator) -> Outcome:
    """Draw one shift pair and return the Pauli error it leaves after correction."""
    if not (sigma_x > 0 and sigma_p > 0):
        raise ValueError("noise standard deviations must be positive")
    return classify_shift(R, rng.normal(0.0, sigma_x), rng.normal(0.0, sigma_p))


def two_point_flips(pX: float, pZ: float) -> tuple[float, float]:
    """Per-quadrature flip probabilities giving Pauli-X/Z rates ``pX, pZ``.

    Solves ``qx (1 - qp) = pX`` and ``qp (1 - qx) = pZ``.
    """
    d = pX - pZ
    disc = (1.0 + d) ** 2 - 4.0 * pX
    if disc < 0:
        raise ValueError("no two-point shift distribution reproduces these rates")
    qx = 0.5 * ((1.0 + d) - math.sqrt(disc))
    return qx, qx - d


@dataclass(frozen=True)
class TrialConfig:
    """One Monte Carlo run.

    With ``flips`` set, the quadrature shifts are two-point: a shift of one
    lattice spacing with probabilities ``flips = (qx, qp)``, else zero.
    """

    n: int
    R: float
    sigma_x: float
    sigma_p: float
    trials: int
    seed: int = 0
    mode: SamplingMode = SamplingMode.INDEPENDENT
    flips: tuple[float, float] | None = None

    def __post_init__(self):
        RepetitionSpec(self.n)
        GKPLattice(self.R)
        object.__setattr__(self, "mode", SamplingMode(self.mode))
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.flips is None:
            QuadratureNoise(self.sigma_x, self.sigma_p)

    @property
    def k(self) -> int:
        return RepetitionSpec(self.n).k

    def kernel_args(self) -> tuple:
        lat = GKPLattice(self.R)
        if self.flips is not None:
            return DIST_TWO_POINT, self.flips[0], self.flips[1], lat.spacing_x, lat.spacing_p
        return DIST_GAUSSIAN, self.sigma_x, self.sigma_p, lat.spacing_x, lat.spacing_p


class Estimate(NamedTuple):
    pe: float
    se: float
    failures: int
    trials: int


def _split(trials: int, parts: int) -> list[tuple[int, int]]:
    edges = np.linspace(0, trials, parts + 1).astype(np.int64)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def estimate_pe(cfg: TrialConfig, backend: str | None = None, workers: int = 1) -> Estimate:
    """Logical failure rate and its binomial standard error."""
    kernel = get_kernel(backend)
    mode = MODE_INDEPENDENT if cfg.mode is SamplingMode.INDEPENDENT else MODE_JOINT
    dist, a, b, spx, spp = cfg.kernel_args()

    def run(span):
        return kernel.count_failures(cfg.seed, span[0], span[1], cfg.n, cfg.k, mode, dist, a, b, spx, spp)

    spans = _split(cfg.trials, max(1, workers))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            fails = sum(pool.map(run, spans))
    else:
        fails = sum(map(run, spans))
    p = fails / cfg.trials
    return Estimate(p, math.sqrt(p * (1.0 - p) / cfg.trials), fails, cfg.trials)


def outcome_counts(
    R: float,
    sigma_x: float,
    sigma_p: float,
    trials: int,
    seed: int = 0,
    backend: str | None = None,
    flips: tuple[float, float] | None = None,
) -> dict[Outcome, int]:
    """Empirical single-qubit outcome counts."""
    cfg = TrialConfig(1, R, sigma_x, sigma_p, trials, seed, flips=flips)
    dist, a, b, spx, spp = cfg.kernel_args()
    c = get_kernel(backend).count_outcomes(seed, 0, trials, dist, a, b, spx, spp)
    return dict(zip((Outcome.I, Outcome.X, Outcome.Z, Outcome.Y), c))


def analytic_pe(n: int, R: float, sigma_x: float, sigma_p: float) -> float:
    ch = gkp_channel(R, QuadratureNoise(sigma_x, sigma_p))
    return logical_error(n, ch.pX, ch.pZ)


def binomial_z(estimate: Estimate, p: float) -> float:
    """Deviation in standard errors, using the analytic ``p`` for the spread."""
    se = math.sqrt(p * (1.0 - p) / estimate.trials)
    diff = estimate.pe - p
    if se == 0.0:
        return 0.0 if diff == 0.0 else math.inf
    return abs(diff) / se


@dataclass(frozen=True)
class ModelComparison:
    n: int
    R: float
    sigma_x: float
    sigma_p: float
    analytic: float
    independent: Estimate
    joint: Estimate

    @property
    def z_independent(self) -> float:
        return binomial_z(self.independent, self.analytic)

    @property
    def z_joint(self) -> float:
        return binomial_z(self.joint, self.analytic)

    @property
    def delta_independent(self) -> float:
        return self.independent.pe - self.analytic

    @property
    def delta_joint(self) -> float:
        return self.joint.pe - self.analytic


def compare_models(
    grid: Iterable[tuple[int, float, float, float]],
    trials: int,
    seed: int = 0,
    backend: str | None = None,
    workers: int = 1,
) -> list[ModelComparison]:
    """Analytic ``Pe`` against both sampling modes for each ``(n, R, sigma_x, sigma_p)``."""
    out = []
    for n, R, sx, sp in grid:
        ind = estimate_pe(TrialConfig(n, R, sx, sp, trials, seed, SamplingMode.INDEPENDENT), backend, workers)
        jnt = estimate_pe(TrialConfig(n, R, sx, sp, trials, seed, SamplingMode.JOINT), backend, workers)
        out.append(ModelComparison(n, R, sx, sp, analytic_pe(n, R, sx, sp), ind, jnt))
    if not out:
        raise ValueError("empty comparison grid")
    return out
