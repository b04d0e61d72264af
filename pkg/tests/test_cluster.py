import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvftsim import cluster
from cvftsim.cluster import (
    VLF_BOUND,
    LatticeError,
    LatticeSpec,
    build_lattice,
    closed_form_nullifier_variance,
    combined_nullifiers,
    enumerate_bipartitions,
    interior_bins,
    mode,
    nullifier_set,
    nullifier_variance,
    vlf_check,
)
from cvftsim.gaussian import (
    AdjacencyGraph,
    beamsplitter_symplectic,
    covariance_of,
    hgraph_state,
    rotation_symplectic,
    variance_of,
)
from cvftsim.units import db_to_r


def full_matrix_lattice(spec):
    """Same construction, but with explicit 4K x 4K symplectic products."""
    K, N = spec.K, spec.N
    n = 4 * K
    pairs = [(4 * k, 4 * k + 2) for k in range(K)] + [(4 * k + 1, 4 * k + 3) for k in range(K)]
    cov = covariance_of(hgraph_state(AdjacencyGraph.from_pairs(n, pairs), spec.r)).cov
    S = np.eye(2 * n)
    for k in range(K):
        S = beamsplitter_symplectic(n, 4 * k, 4 * k + 1, -math.pi / 4) @ S
    cov = S @ cov @ S.T
    # label of physical slot j after the delays
    names = []
    for k in range(K):
        names += [("signal", "10", k), ("signal", "01", k + 1), ("idler", "10", k), ("idler", "01", k + N)]
    where = {nm: j for j, nm in enumerate(names)}
    S = np.eye(2 * n)
    for k in range(K):
        a, b = where.get(("signal", "01", k)), where.get(("signal", "10", k))
        if a is not None and b is not None:
            S = beamsplitter_symplectic(n, a, b, math.pi / 4) @ S
        a, b = where.get(("idler", "10", k)), where.get(("idler", "01", k))
        if a is not None and b is not None:
            S = rotation_symplectic(n, a, math.pi) @ beamsplitter_symplectic(n, a, b, math.pi / 4) @ S
    return S @ cov @ S.T, [mode(*nm) for nm in names]


def test_lattice_matches_full_matrix_oracle():
    spec = LatticeSpec.from_db(8.0, N=3, K=10)
    state = build_lattice(spec)
    cov, labels = full_matrix_lattice(spec)
    perm = [labels.index(m) for m in state.labels]
    idx = perm + [p + len(labels) for p in perm]
    assert np.allclose(state.cov, cov[np.ix_(idx, idx)], atol=1e-12)
    assert state.purity_defect() < 1e-8


@pytest.mark.parametrize("db", [2, 5, 10, 15, 20])
def test_nullifier_variance_closed_form(db):
    spec = LatticeSpec.from_db(db)
    state = build_lattice(spec)
    target = closed_form_nullifier_variance(spec.r)
    bins = interior_bins(spec)
    assert bins == [10, 11, 12, 13]
    for k in bins:
        for form in nullifier_set(k, spec.N):
            assert abs(nullifier_variance(state, form) - target) < 1e-9


def test_raw_nullifier_variance_and_normalisation():
    spec = LatticeSpec.from_db(10.0)
    state = build_lattice(spec)
    ns = nullifier_set(11)
    assert ns.x1.norm_sq() == pytest.approx(cluster.NULLIFIER_NORM_SQ)
    vx, vp = variance_of(state, ns.x1)
    assert vp == 0.0
    assert vx == pytest.approx(2 * math.exp(-2 * spec.r))


def test_combined_nullifiers_single_idler():
    spec = LatticeSpec.from_db(10.0, N=10, K=34)
    state = build_lattice(spec)
    k = 11
    for form in combined_nullifiers(k, spec.N):
        idlers = [m for m in form.support if m.beam == "idler"]
        signals = [m for m in form.support if m.beam == "signal"]
        assert len(idlers) == 1 and len(signals) == 8
        vx, vp = variance_of(state, form)
        assert (vx + vp) / form.norm_sq() == pytest.approx(math.exp(-2 * spec.r) / 2, rel=1e-9)


def test_wrapped_lattice_is_fully_interior():
    spec = LatticeSpec.from_db(10.0, N=4, K=12, wrap=True)
    state = build_lattice(spec)
    assert interior_bins(spec) == list(range(12))
    for k in range(12):
        for form in nullifier_set(k, spec.N, spec.modulus):
            assert nullifier_variance(state, form) == pytest.approx(math.exp(-2 * spec.r) / 2, abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.5, 20.0))
def test_nullifiers_vanish_only_as_squeezing_grows(db):
    spec = LatticeSpec.from_db(db, N=2, K=8)
    state = build_lattice(spec)
    k = interior_bins(spec)[0]
    v = nullifier_variance(state, nullifier_set(k, 2).p2)
    assert v == pytest.approx(math.exp(-2 * db_to_r(db)) / 2, rel=1e-8)


def test_lattice_spec_validation():
    with pytest.raises(LatticeError):
        LatticeSpec(0.5, N=1)
    with pytest.raises(LatticeError):
        LatticeSpec(0.5, N=10, K=20)
    with pytest.raises(LatticeError):
        LatticeSpec(-0.1)
    spec = LatticeSpec.from_db(10.0)
    with pytest.raises(LatticeError):
        vlf_check(build_lattice(spec), 2, spec.N, spec=spec)


def test_bipartition_count():
    parts = enumerate_bipartitions(range(6))
    assert len(parts) == 31
    assert len({(p.s1, p.s2) for p in parts}) == 31
    assert all(0 in p.s1 for p in parts)


def test_vlf_at_10db_passes_all_bipartitions():
    spec = LatticeSpec.from_db(10.0)
    state = build_lattice(spec)
    rep = vlf_check(state, 12, spec.N, spec=spec)
    assert rep.passed
    assert rep.margin == pytest.approx(VLF_BOUND - 0.05)
    assert len(rep.margins) == 31
    assert all(m.margin > 0 for m in rep.margins)


def test_vlf_fails_below_threshold():
    spec = LatticeSpec.from_db(4.0)
    rep = vlf_check(build_lattice(spec), 12, spec.N, spec=spec, bipartitions=False)
    assert not rep.passed


def test_min_inseparability_squeezing_closed_form():
    expected = 10 * math.log10(2 * math.sqrt(2))
    assert cluster.min_inseparability_squeezing() == pytest.approx(expected, abs=0.01)
