"""Biased-GKP qubits concatenated with an n-qubit bit-flip repetition code.

Logical failure probability::

    Pe = 1 - P_X(n, pX) * P_Z(n, pZ)

with ``P_X`` the majority-vote success (at most ``k = (n-1)//2`` bit flips)
and ``P_Z`` the probability of an even number of phase flips.  ``Pe`` is
evaluated from the failure complements so that values far below machine
epsilon keep their relative precision.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .gkp import NoiseKind, NoiseModel, Convention, gkp_channel, noise_variances
from .units import db_to_r

log = logging.getLogger(__name__)

#: Golden-ratio step used by :func:`golden_section`.
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

R_MAX = 50.0
THRESHOLD_WINDOW = (2.0, 25.0)
THRESHOLD_REFERENCE_N = 101


class NumericalError(RuntimeError):
    """No threshold crossing, saturated optimizer or similar."""


@dataclass(frozen=True)
class RepetitionSpec:
    n: int

    def __post_init__(self):
        if self.n < 1 or self.n % 2 == 0:
            raise ValueError("repetition number must be an odd positive integer")

    @property
    def k(self) -> int:
        return (self.n - 1) // 2


def _check_prob(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")


def rep_failure_x(n: int, pX: float) -> float:
    """Probability of more than ``k`` bit flips among ``n`` qubits."""
    k = RepetitionSpec(n).k
    _check_prob(pX)
    if pX == 0.0:
        return 0.0
    if pX == 1.0:
        return 1.0
    lp, lq = math.log(pX), math.log1p(-pX)
    total = 0.0
    # upper tail summed from the largest term down
    for j in range(k + 1, n + 1):
        logc = math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1)
        total += math.exp(logc + j * lp + (n - j) * lq)
    return min(total, 1.0)


def rep_success_x(n: int, pX: float) -> float:
    """Majority-vote success: ``sum_{j<=k} C(n,j) pX^j (1-pX)^(n-j)``."""
    k = RepetitionSpec(n).k
    _check_prob(pX)
    return sum(math.comb(n, j) * pX**j * (1.0 - pX) ** (n - j) for j in range(k + 1))


def rep_failure_z(n: int, pZ: float) -> float:
    """Probability of an odd number of phase flips, ``(1 - (1-2pZ)^n)/2``."""
    RepetitionSpec(n)
    _check_prob(pZ)
    base = 1.0 - 2.0 * pZ
    if base > 0:
        return -0.5 * math.expm1(n * math.log1p(-2.0 * pZ))
    return 0.5 * (1.0 - base**n)


def rep_success_z(n: int, pZ: float) -> float:
    """Even number of phase flips (zero included): ``(1 + (1-2pZ)^n)/2``."""
    RepetitionSpec(n)
    _check_prob(pZ)
    return 0.5 * (1.0 + (1.0 - 2.0 * pZ) ** n)


def logical_error(n: int, pX: float, pZ: float) -> float:
    fx = rep_failure_x(n, pX)
    fz = rep_failure_z(n, pZ)
    return fx + (1.0 - fx) * fz


@dataclass(frozen=True)
class CodePoint:
    n: int
    R: float
    squeezing_db: float
    model: NoiseKind
    pX: float
    pZ: float
    Pe: float
    convention: Convention = Convention.HALF_VACUUM
    saturated: bool = False


def overall_error(
    n: int, R: float, model: NoiseKind | str, squeezing_db: float, convention=Convention.HALF_VACUUM
) -> CodePoint:
    nm = NoiseModel.from_db(model, squeezing_db, convention)
    ch = gkp_channel(R, noise_variances(nm))
    pe = logical_error(n, ch.pX, ch.pZ)
    return CodePoint(n, R, squeezing_db, nm.kind, ch.pX, ch.pZ, pe, nm.convention)


def golden_section(f, lo: float, hi: float, tol: float = 1e-4, max_iter: int = 200) -> tuple[float, float]:
    """Minimise a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    fx = f(x)
    # the bracket ends may beat the interior if f is monotone there
    for edge in (lo, hi):
        fe = f(edge)
        if fe < fx:
            x, fx = edge, fe
    return x, fx


@dataclass(frozen=True)
class OptimizeResult:
    R: float
    Pe: float
    point: CodePoint
    saturated: bool = False
    flat: bool = False


def optimize_R(
    n: int,
    model: NoiseKind | str,
    squeezing_db: float,
    convention=Convention.HALF_VACUUM,
    R_min: float = 1.0,
    R_max: float = R_MAX,
    scan_points: int = 41,
    tol: float = 1e-4,
) -> OptimizeResult:
    """Aspect ratio minimising ``Pe`` for repetition number ``n``.

    A log-spaced scan locates the best bracket, then golden-section search
    refines it to ``|dR| < tol``.
    """
    RepetitionSpec(n)
    nm = NoiseModel.from_db(model, squeezing_db, convention)
    noise = noise_variances(nm)

    def pe(R: float) -> float:
        ch = gkp_channel(R, noise)
        return logical_error(n, ch.pX, ch.pZ)

    grid = np.geomspace(R_min, R_max, scan_points)
    vals = np.array([pe(R) for R in grid])
    if vals.max() - vals.min() <= 1e-15 * max(vals.max(), 1e-300):
        log.info("flat objective for n=%d at %.3f dB; using R=%g", n, squeezing_db, R_min)
        R_best, pe_best, flat = R_min, float(vals[0]), True
    else:
        i = int(np.argmin(vals))
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
        R_best, pe_best = golden_section(pe, lo, hi, tol=tol)
        if vals[i] < pe_best:
            R_best, pe_best = float(grid[i]), float(vals[i])
        flat = False
    saturated = (not flat) and R_best >= R_max * (1 - 1e-6)
    if saturated:
        log.info("optimum aspect ratio saturates at R_max=%g (n=%d, %.2f dB)", R_max, n, squeezing_db)
    R_best, pe_best = float(R_best), float(pe_best)
    ch = gkp_channel(R_best, noise)
    point = CodePoint(n, R_best, squeezing_db, nm.kind, ch.pX, ch.pZ, pe_best, nm.convention, saturated)
    return OptimizeResult(R_best, pe_best, point, saturated, flat)


def threshold_gap(squeezing_db: float, model, convention=Convention.HALF_VACUUM, n_ref: int = THRESHOLD_REFERENCE_N) -> float:
    """``Pe(n_ref, R*) - Pe(1, R=1)``; negative once the code helps."""
    big = optimize_R(n_ref, model, squeezing_db, convention).Pe
    base = overall_error(1, 1.0, model, squeezing_db, convention).Pe
    return big - base


@dataclass(frozen=True)
class ThresholdResult:
    squeezing_db: float
    model: NoiseKind
    convention: Convention
    crossings: int
    R_star: float


def threshold_db(
    model: NoiseKind | str,
    convention=Convention.HALF_VACUUM,
    window: tuple[float, float] = THRESHOLD_WINDOW,
    grid_step: float = 0.1,
    tol_db: float = 0.01,
    n_ref: int = THRESHOLD_REFERENCE_N,
) -> ThresholdResult:
    """Squeezing at which ``n_ref`` repetition overtakes the bare square GKP qubit.

    A grid scan counts sign changes of :func:`threshold_gap`; a unique crossing
    is then refined by bisection to ``tol_db``.
    """
    model = NoiseKind(model)
    convention = Convention(convention)
    grid = np.round(np.arange(window[0], window[1] + grid_step / 2, grid_step), 10)
    gaps = np.array([threshold_gap(db, model, convention, n_ref) for db in grid])
    signs = np.sign(gaps)
    nz = np.flatnonzero(signs)
    changes = [
        (nz[j], nz[j + 1]) for j in range(len(nz) - 1) if signs[nz[j]] != signs[nz[j + 1]]
    ]
    if not changes:
        raise NumericalError(f"no threshold crossing for {model.value} in [{window[0]}, {window[1]}] dB")
    if len(changes) > 1:
        raise NumericalError(f"{len(changes)} threshold crossings for {model.value}; expected one")
    i, j = changes[0]
    lo, hi = float(grid[i]), float(grid[j])
    s_lo = signs[i]
    while hi - lo > tol_db:
        mid = 0.5 * (lo + hi)
        if np.sign(threshold_gap(mid, model, convention, n_ref)) == s_lo:
            lo = mid
        else:
            hi = mid
    db = 0.5 * (lo + hi)
    opt = optimize_R(n_ref, model, db, convention)
    if opt.saturated:
        raise NumericalError(f"aspect-ratio optimizer saturated at the threshold ({db:.2f} dB)")
    return ThresholdResult(db, model, convention, len(changes), opt.R)


def convention_sensitivity() -> list[ThresholdResult]:
    """Thresholds for both noise models under both variance conventions."""
    out = []
    for kind in NoiseKind:
        for conv in Convention:
            out.append(threshold_db(kind, conv))
    return out


# --------------------------------------------------------------------------
# figure tables
# --------------------------------------------------------------------------

FIGURE_N = (1, 3, 5, 11, 25, 51, 101)


@dataclass
class Table:
    columns: tuple[str, ...]
    rows: list[tuple]

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def db_grid(start: float, stop: float, step: float) -> list[float]:
    if not step > 0:
        raise ValueError("grid step must be positive")
    if stop < start:
        raise ValueError("empty squeezing range")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(count)]


def code_point(n: int, model, squeezing_db: float, R: float | None = None, convention=Convention.HALF_VACUUM) -> CodePoint:
    """``Pe`` at fixed ``R``, or with ``R`` optimised (``n = 1`` uses the square lattice)."""
    if R is None:
        if n == 1:
            return overall_error(1, 1.0, model, squeezing_db, convention)
        return optimize_R(n, model, squeezing_db, convention).point
    return overall_error(n, R, model, squeezing_db, convention)


CODEPOINT_COLUMNS = ("squeezing_db", "model", "n", "R", "pX", "pZ", "Pe", "saturated")


def _cp_row(cp: CodePoint) -> tuple:
    return (cp.squeezing_db, cp.model.value, cp.n, cp.R, cp.pX, cp.pZ, cp.Pe, int(cp.saturated))


def sweep(
    figure: str,
    grid: list[float],
    n_list=FIGURE_N,
    R: float | None = None,
    model: NoiseKind | str | None = None,
    lattice_N: int = 10,
    lattice_K: int = 24,
) -> Table:
    """Deterministic table behind one figure.

    ``fig3``: nullifier variances and the VLF bound; ``fig5c``: squeezing
    budget; ``fig6c``: square-GKP error vs squeezing; ``fig7a``/``fig7b``:
    ``Pe`` per repetition number for the gate-noise / resource-only model;
    ``fig7c``: ``n = 101`` for both models next to the bare GKP error;
    ``custom``: ``Pe`` for ``model`` and ``n_list``.
    """
    from . import cluster, gates

    if figure == "fig3":
        cols = ("squeezing_db", "r", "var_x1", "var_p1", "closed_form", "vlf_bound", "vlf_pass")
        rows = []
        for db in grid:
            spec = cluster.LatticeSpec.from_db(db, N=lattice_N, K=lattice_K)
            state = cluster.build_lattice(spec)
            k = cluster.interior_bins(spec)[0]
            rep = cluster.vlf_check(state, k, spec.N, spec=spec, bipartitions=False)
            rows.append((db, spec.r, rep.var_x, rep.var_p, cluster.closed_form_nullifier_variance(spec.r), rep.bound, int(rep.passed)))
        return Table(cols, rows)

    if figure == "fig5c":
        cols = ("resource_db", "r", "cluster_db", "residual_x_db", "residual_p_db", "nx", "np")
        rows = []
        for db in grid:
            b = gates.squeezing_budget(db_to_r(db))
            rows.append((db, b.r, b.cluster_db, b.residual_x_db, b.residual_p_db, b.nx, b.np_))
        return Table(cols, rows)

    if figure == "fig6c":
        cols = ("squeezing_db", "sigma_x2", "sigma_p2", "p_succ", "p_err")
        rows = []
        R6 = 1.0 if R is None else R
        for db in grid:
            noise = noise_variances(NoiseModel.from_db(model or NoiseKind.GATE_NOISE, db))
            ch = gkp_channel(R6, noise)
            rows.append((db, noise.var_x, noise.var_p, ch.success, 1.0 - ch.success))
        return Table(cols, rows)

    if figure in ("fig7a", "fig7b", "custom"):
        if figure == "custom":
            kind = NoiseKind(model or NoiseKind.GATE_NOISE)
        else:
            kind = NoiseKind.GATE_NOISE if figure == "fig7a" else NoiseKind.RESOURCE_ONLY
        rows = [_cp_row(code_point(n, kind, db, R)) for db in grid for n in n_list]
        return Table(CODEPOINT_COLUMNS, rows)

    if figure == "fig7c":
        cols = CODEPOINT_COLUMNS + ("gkp_p_err",)
        rows = []
        for db in grid:
            bare = 1.0 - gkp_channel(1.0, noise_variances(NoiseModel.from_db(NoiseKind.GATE_NOISE, db))).success
            for kind in NoiseKind:
                rows.append(_cp_row(code_point(101, kind, db, R)) + (bare,))
        return Table(cols, rows)

    raise ValueError(f"unknown figure id {figure!r}")
