"""Bilayer-square-lattice spatiotemporal cluster state.

Each time bin starts as two two-mode squeezed pairs (signal10-idler10 and
signal01-idler01), the H-graph state of a perfect matching.  The signal pair
is then mixed into the 45/135 degree modes and relabelled by the dove prism,
the signal01 rail is delayed by one bin and the idler01 rail by ``N`` bins,
and finally the staggered 01/10 modes of each rail are coupled by a 50:50
spatial beam splitter.

The phases of the final couplers are fixed so that the six-mode combinations
returned by :func:`nullifier_set` are exact nullifiers of the built state.

Nullifier variances are reported for the unit-norm forms: the six-mode
nullifiers as written have squared coefficient norm 4, so
:func:`nullifier_variance` divides the raw bilinear variance by
:data:`NULLIFIER_NORM_SQ`.  In those units a nullifier of a lattice built
with squeezing ``r`` has variance ``exp(-2r)/2``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .gaussian import (
    AdjacencyGraph,
    GaussianState,
    ModeId,
    QuadratureForm,
    apply_beamsplitter,
    apply_rotation,
    covariance_of,
    hgraph_state,
    relabel_delay,
    variance_of,
)
from .units import db_to_r

SQRT2 = math.sqrt(2.0)

#: Squared coefficient norm of each six-mode nullifier.
NULLIFIER_NORM_SQ = 4.0

#: Full-inseparability bound on the x1 and p1 nullifier variances.
VLF_BOUND = 1.0 / (4.0 * SQRT2)

BEAMS = ("signal", "idler")
SPATIAL = ("10", "01")


class LatticeError(ValueError):
    pass


def mode(beam: str, spatial: str, k: int) -> ModeId:
    return ModeId(beam, spatial, int(k))


@dataclass(frozen=True)
class LatticeSpec:
    """Window of ``K`` time bins of a lattice with long delay ``N``."""

    r: float
    N: int = 10
    K: int = 24
    wrap: bool = False

    def __post_init__(self):
        if self.r < 0:
            raise LatticeError("squeezing parameter must be non-negative")
        if self.N < 2:
            raise LatticeError("long delay N must be at least 2")
        if self.K < 2 * self.N + 4:
            raise LatticeError(f"window K={self.K} too small for N={self.N} (need K >= 2N+4)")

    @classmethod
    def from_db(cls, squeezing_db: float, **kw) -> "LatticeSpec":
        return cls(db_to_r(squeezing_db), **kw)

    @property
    def modulus(self) -> int | None:
        return self.K if self.wrap else None


def build_lattice(spec: LatticeSpec) -> GaussianState:
    """Construct the ``4K``-mode cluster state over the window."""
    K, N = spec.K, spec.N
    labels = []
    for k in range(K):
        labels += [mode("signal", "10", k), mode("signal", "01", k), mode("idler", "10", k), mode("idler", "01", k)]
    pairs = []
    for k in range(K):
        base = 4 * k
        pairs += [(base, base + 2), (base + 1, base + 3)]

    # two-mode squeezed pairs from the H-graph of the pump matching
    G = AdjacencyGraph.from_pairs(4 * K, pairs)
    state = covariance_of(hgraph_state(G, spec.r), labels)

    # (01 +- 10)/sqrt2 on the signal, then the dove prism maps
    # 45 deg -> 10 and 135 deg -> 01
    for k in range(K):
        state = apply_beamsplitter(state, mode("signal", "10", k), mode("signal", "01", k), -math.pi / 4)

    # one-bin delay on signal01, N-bin delay on idler01
    state = relabel_delay(state, ("signal", "01"), 1, spec.modulus)
    state = relabel_delay(state, ("idler", "01"), N, spec.modulus)

    # couple the staggered 01/10 modes on each rail
    for k in range(K):
        s01, s10 = mode("signal", "01", k), mode("signal", "10", k)
        if s01 in state and s10 in state:
            state = apply_beamsplitter(state, s01, s10, math.pi / 4)
        i10, i01 = mode("idler", "10", k), mode("idler", "01", k)
        if i10 in state and i01 in state:
            state = apply_beamsplitter(state, i10, i01, math.pi / 4)
            state = apply_rotation(state, i10, math.pi)
    return state


def coupled_modes(spec: LatticeSpec) -> frozenset[ModeId]:
    """Modes inside the window that went through a final 01/10 coupler."""
    if spec.wrap:
        sig_bins = range(spec.K)
        idl_bins = range(spec.K)
    else:
        sig_bins = range(1, spec.K)
        idl_bins = range(spec.N, spec.K)
    out = {mode("signal", sp, k) for k in sig_bins for sp in SPATIAL}
    out |= {mode("idler", sp, k) for k in idl_bins for sp in SPATIAL}
    return frozenset(out)


def form_is_supported(spec: LatticeSpec, form: QuadratureForm) -> bool:
    return form.support <= coupled_modes(spec)


# --------------------------------------------------------------------------
# nullifiers
# --------------------------------------------------------------------------


class NullifierSet(NamedTuple):
    x1: QuadratureForm
    x2: QuadratureForm
    p1: QuadratureForm
    p2: QuadratureForm


def _b(k: int, modulus: int | None) -> int:
    return k % modulus if modulus else k


def nullifier_set(k: int, N: int = 10, modulus: int | None = None) -> NullifierSet:
    """The four six-mode nullifiers attached to bin ``k``."""
    r2 = 1.0 / SQRT2
    k0, k1, kN = _b(k, modulus), _b(k + 1, modulus), _b(k + N, modulus)
    I10, I01 = mode("idler", "10", k0), mode("idler", "01", k0)
    J10, J01 = mode("idler", "10", kN), mode("idler", "01", kN)
    S10, S01 = mode("signal", "10", k0), mode("signal", "01", k0)
    T10, T01 = mode("signal", "10", k1), mode("signal", "01", k1)
    x1 = {I10: 1.0, I01: -1.0, T10: -r2, T01: -r2, S10: r2, S01: -r2}
    x2 = {J10: 1.0, J01: 1.0, T10: -r2, T01: -r2, S10: -r2, S01: r2}
    p1 = {I10: 1.0, I01: -1.0, T10: r2, T01: r2, S10: -r2, S01: r2}
    p2 = {J10: 1.0, J01: 1.0, T10: r2, T01: r2, S10: r2, S01: -r2}
    return NullifierSet(
        QuadratureForm(h=x1), QuadratureForm(h=x2), QuadratureForm(g=p1), QuadratureForm(g=p2)
    )


def combined_nullifiers(k: int, N: int = 10, modulus: int | None = None) -> tuple[QuadratureForm, ...]:
    """Half-sums ``(+-N^{x1}_{k+N} + N^{x2}_k)/2`` and the p analogues.

    Each touches one idler mode (weight 1) and eight signal modes.
    """
    late = nullifier_set(k + N, N, modulus)
    here = nullifier_set(k, N, modulus)
    return (
        (late.x1 + here.x2).scaled(0.5),
        (here.x2 - late.x1).scaled(0.5),
        (late.p1 + here.p2).scaled(0.5),
        (here.p2 - late.p1).scaled(0.5),
    )


def nullifier_variance(state: GaussianState, form: QuadratureForm) -> float:
    """Variance of ``form`` in unit-norm nullifier units (x and p parts summed)."""
    vx, vp = variance_of(state, form)
    return (vx + vp) / NULLIFIER_NORM_SQ


def interior_bins(spec: LatticeSpec) -> list[int]:
    """Bins whose complete nullifier set lies on coupled modes."""
    out = []
    for k in range(spec.K):
        ns = nullifier_set(k, spec.N, spec.modulus)
        if all(form_is_supported(spec, f) for f in ns):
            out.append(k)
    return out


def _check_bin(spec: LatticeSpec | None, k: int, N: int, modulus: int | None) -> NullifierSet:
    ns = nullifier_set(k, N, modulus)
    if spec is not None and not all(form_is_supported(spec, f) for f in ns):
        raise LatticeError(f"bin {k} is too close to the window edge")
    return ns


# --------------------------------------------------------------------------
# full inseparability
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Bipartition:
    s1: frozenset
    s2: frozenset

    def __post_init__(self):
        if not self.s1 or not self.s2:
            raise LatticeError("bipartition sides must be nonempty")
        if self.s1 & self.s2:
            raise LatticeError("bipartition sides must be disjoint")


def unit_modes(k: int, modulus: int | None = None) -> tuple[ModeId, ...]:
    """The six modes shared by ``N^{x1}_k`` and ``N^{p1}_k``."""
    k0, k1 = _b(k, modulus), _b(k + 1, modulus)
    return (
        mode("idler", "10", k0),
        mode("idler", "01", k0),
        mode("signal", "10", k0),
        mode("signal", "01", k0),
        mode("signal", "10", k1),
        mode("signal", "01", k1),
    )


def enumerate_bipartitions(modes=tuple(range(6))) -> list[Bipartition]:
    """All ``2^(m-1) - 1`` unordered bipartitions, first element pinned to ``s1``."""
    modes = tuple(modes)
    first, rest = modes[0], modes[1:]
    out = []
    for size in range(len(rest)):
        for extra in itertools.combinations(rest, size):
            s1 = frozenset((first,) + extra)
            out.append(Bipartition(s1, frozenset(modes) - s1))
    return out


@dataclass
class BipartitionMargin:
    bipartition: Bipartition
    lhs: float
    rhs: float
    pair: str

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


@dataclass
class VLFReport:
    k: int
    var_x: float
    var_p: float
    bound: float = VLF_BOUND
    margins: list[BipartitionMargin] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.var_x < self.bound and self.var_p < self.bound

    @property
    def margin(self) -> float:
        return self.bound - max(self.var_x, self.var_p)


def _vlf_rhs(u: QuadratureForm, v: QuadratureForm, side1: frozenset) -> float:
    modes = set(u.h) | set(v.g)
    t1 = sum(u.h.get(m, 0.0) * v.g.get(m, 0.0) for m in modes if m in side1)
    t2 = sum(u.h.get(m, 0.0) * v.g.get(m, 0.0) for m in modes if m not in side1)
    return abs(t1) + abs(t2)


def vlf_check(
    state: GaussianState,
    k: int,
    N: int = 10,
    modulus: int | None = None,
    spec: LatticeSpec | None = None,
    bipartitions: bool = True,
) -> VLFReport:
    """Full-inseparability test at bin ``k``.

    Pass/fail compares the unit-norm variances of ``N^{x1}_k`` and
    ``N^{p1}_k`` with ``1/(4 sqrt 2)``.  With ``bipartitions`` the pairwise
    inequality ``Var(u) + Var(v) < |sum_s1 h g| + |sum_s2 h g|`` is also
    evaluated for each of the 31 splits of the six-mode unit, keeping the best
    candidate pair; these margins are informational.  Modes of a candidate
    outside the unit are placed on whichever side gives the larger bound.
    """
    ns = _check_bin(spec, k, N, modulus)
    scale = 1.0 / math.sqrt(NULLIFIER_NORM_SQ)
    var_x = variance_of(state, ns.x1)[0] / NULLIFIER_NORM_SQ
    var_p = variance_of(state, ns.p1)[1] / NULLIFIER_NORM_SQ
    report = VLFReport(k, var_x, var_p)
    if not bipartitions:
        return report

    xs = {"x1": ns.x1, "x2": ns.x2, "x1+x2": (ns.x1 + ns.x2).scaled(0.5), "x1-x2": (ns.x1 - ns.x2).scaled(0.5)}
    ps = {"p1": ns.p1, "p2": ns.p2, "p1+p2": (ns.p1 + ns.p2).scaled(0.5), "p1-p2": (ns.p1 - ns.p2).scaled(0.5)}
    xs = {name: f.scaled(scale) for name, f in xs.items()}
    ps = {name: f.scaled(scale) for name, f in ps.items()}
    xvar = {name: variance_of(state, f)[0] for name, f in xs.items()}
    pvar = {name: variance_of(state, f)[1] for name, f in ps.items()}
    unit = frozenset(unit_modes(k, modulus))

    for bp in enumerate_bipartitions(unit_modes(k, modulus)):
        best = None
        for (xn, u), (pn, v) in itertools.product(xs.items(), ps.items()):
            outside = frozenset(u.h) | frozenset(v.g)
            outside -= unit
            rhs = max(_vlf_rhs(u, v, bp.s1), _vlf_rhs(u, v, bp.s1 | outside))
            cand = BipartitionMargin(bp, xvar[xn] + pvar[pn], rhs, f"{xn},{pn}")
            if best is None or cand.margin > best.margin:
                best = cand
        report.margins.append(best)
    return report


def min_inseparability_squeezing(
    lo_db: float = 0.0, hi_db: float = 20.0, tol_db: float = 0.005, N: int = 2
) -> float:
    """Smallest squeezing (dB) at which the lattice passes the VLF test.

    Each probe builds a fresh lattice and evaluates its nullifiers.
    """

    def passes(db: float) -> bool:
        spec = LatticeSpec.from_db(db, N=N, K=2 * N + 4)
        state = build_lattice(spec)
        k = interior_bins(spec)[0]
        return vlf_check(state, k, N, spec=spec, bipartitions=False).passed

    if passes(lo_db) or not passes(hi_db):
        raise LatticeError("no inseparability crossing inside the search bracket")
    while hi_db - lo_db > tol_db:
        mid = 0.5 * (lo_db + hi_db)
        if passes(mid):
            hi_db = mid
        else:
            lo_db = mid
    return 0.5 * (lo_db + hi_db)


def closed_form_nullifier_variance(r: float) -> float:
    return float(np.exp(-2.0 * r) / 2.0)
