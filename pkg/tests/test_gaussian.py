import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvftsim.gaussian import (
    AdjacencyGraph,
    ComplexGraph,
    GaussianError,
    GaussianState,
    ModeId,
    QuadratureForm,
    apply_beamsplitter,
    apply_rotation,
    beamsplitter_symplectic,
    covariance_of,
    hgraph_state,
    relabel_delay,
    rotation_symplectic,
    symplectic_form,
    variance_of,
)

angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)
squeeze = st.floats(0.0, 2.0, allow_nan=False)


def modes(n):
    return [ModeId("m", "", i) for i in range(n)]


def tmsv(r):
    return covariance_of(hgraph_state(AdjacencyGraph.from_pairs(2, [(0, 1)]), r), modes(2))


def test_vacuum_is_half_identity():
    s = covariance_of(ComplexGraph(1j * np.eye(3)))
    assert np.allclose(s.cov, 0.5 * np.eye(6))
    assert s.purity_defect() < 1e-14


def test_two_mode_squeezed_vacuum_matches_textbook():
    # textbook TMSV in xxpp with vacuum 1/2: x-block [[c, s], [s, c]]/2,
    # p-block [[c, -s], [-s, c]]/2 where c = cosh 2r, s = sinh 2r (up to the sign of s)
    r = 0.7
    s = tmsv(r)
    c, sh = math.cosh(2 * r), math.sinh(2 * r)
    assert np.allclose(np.abs(s.xx), 0.5 * np.array([[c, sh], [sh, c]]))
    assert np.allclose(np.abs(s.pp), 0.5 * np.array([[c, sh], [sh, c]]))
    assert np.sign(s.xx[0, 1]) == -np.sign(s.pp[0, 1])
    # the EPR combinations are squeezed to e^{-2r}/2 per unit-norm form
    # U = cosh I - sinh G, so x-block U^-1/2 correlates x1, x2 positively
    assert s.xx[0, 1] > 0
    u = QuadratureForm(h={modes(2)[0]: 1 / math.sqrt(2), modes(2)[1]: -1 / math.sqrt(2)})
    v = QuadratureForm(g={modes(2)[0]: 1 / math.sqrt(2), modes(2)[1]: 1 / math.sqrt(2)})
    assert variance_of(s, u)[0] == pytest.approx(math.exp(-2 * r) / 2)
    assert variance_of(s, v)[1] == pytest.approx(math.exp(-2 * r) / 2)


@given(squeeze)
def test_hgraph_spectrum_and_purity(r):
    G = AdjacencyGraph.from_pairs(4, [(0, 1), (2, 3)])
    Z = hgraph_state(G, r)
    assert np.allclose(Z.V, 0.0)
    ev = np.sort(np.linalg.eigvalsh(Z.U))
    assert np.allclose(ev, [math.exp(-2 * r)] * 2 + [math.exp(2 * r)] * 2, rtol=1e-12)
    s = covariance_of(Z)
    assert s.purity_defect() < 1e-9
    assert s.satisfies_uncertainty()


def test_hgraph_rejects_non_self_inverse_graph():
    path = AdjacencyGraph.from_pairs(3, [(0, 1), (1, 2)])
    assert not path.is_self_inverse_bipartite
    with pytest.raises(GaussianError):
        hgraph_state(path, 0.3)
    with pytest.raises(GaussianError):
        hgraph_state(AdjacencyGraph.from_pairs(2, [(0, 1)]), -0.1)


def test_unphysical_graph_rejected():
    with pytest.raises(GaussianError):
        covariance_of(ComplexGraph(-1j * np.eye(2)))


@settings(max_examples=50)
@given(angles, angles, squeeze)
def test_local_updates_match_full_symplectic(theta, phi, r):
    s = covariance_of(hgraph_state(AdjacencyGraph.from_pairs(4, [(0, 2), (1, 3)]), r), modes(4))
    S = rotation_symplectic(4, 2, phi) @ beamsplitter_symplectic(4, 1, 2, theta)
    expected = S @ s.cov @ S.T
    out = apply_rotation(apply_beamsplitter(s, modes(4)[1], modes(4)[2], theta), modes(4)[2], phi)
    assert np.allclose(out.cov, expected, atol=1e-12)
    Om = symplectic_form(4)
    assert np.allclose(S @ Om @ S.T, Om, atol=1e-12)
    assert out.purity_defect() < 1e-8


def test_beamsplitter_sign_convention():
    # a -> cos a - sin b ; a squeezed-x input ends up split evenly
    S = beamsplitter_symplectic(2, 0, 1, math.pi / 4)
    assert S[0, 1] == pytest.approx(-1 / math.sqrt(2))
    assert S[1, 0] == pytest.approx(1 / math.sqrt(2))
    with pytest.raises(GaussianError):
        apply_beamsplitter(GaussianState.vacuum(modes(2)), modes(2)[0], modes(2)[0], 0.1)


def test_relabel_delay_moves_only_selected_modes():
    labels = [ModeId("signal", "01", 0), ModeId("signal", "10", 0), ModeId("idler", "01", 3)]
    s = GaussianState.vacuum(labels)
    out = relabel_delay(s, ("signal", "01"), 2)
    assert out.labels == (ModeId("signal", "01", 2), ModeId("signal", "10", 0), ModeId("idler", "01", 3))
    wrapped = relabel_delay(s, lambda m: m.beam == "idler", 4, modulus=5)
    assert wrapped.labels[2] == ModeId("idler", "01", 2)
    assert np.array_equal(out.cov, s.cov)
    with pytest.raises(GaussianError):
        relabel_delay(s, ("signal", "01"), -1)


def test_duplicate_labels_and_shape_checked():
    with pytest.raises(GaussianError):
        GaussianState(np.eye(4) / 2, (ModeId("a", "", 0), ModeId("a", "", 0)))
    with pytest.raises(GaussianError):
        GaussianState(np.eye(2) / 2, modes(2))
    with pytest.raises(GaussianError):
        GaussianState.vacuum(modes(1)).index(ModeId("b", "", 9))


def test_quadrature_form_algebra():
    a, b = modes(2)
    u = QuadratureForm(h={a: 1.0, b: 2.0})
    w = QuadratureForm(h={a: -1.0}, g={b: 3.0})
    total = u + w
    assert dict(total.h) == {b: 2.0}
    assert dict(total.g) == {b: 3.0}
    assert (u - u.scaled(0.5)).norm_sq() == pytest.approx(0.25 * 5)
    assert (-u).h[a] == -1.0
    assert total.support == frozenset({b})
    with pytest.raises(ValueError):
        u - u


@given(st.lists(st.floats(-3, 3, allow_nan=False), min_size=4, max_size=4).filter(any), squeeze)
def test_variance_of_is_a_quadratic_form(h, r):
    G = AdjacencyGraph.from_pairs(4, [(0, 1), (2, 3)])
    s = apply_beamsplitter(covariance_of(hgraph_state(G, r), modes(4)), modes(4)[1], modes(4)[2], 0.3)
    form = QuadratureForm(h=dict(zip(modes(4), h)), g=dict(zip(modes(4), h)))
    hv = np.array(h)
    vx, vp = variance_of(s, form)
    assert vx == pytest.approx(hv @ s.xx @ hv, abs=1e-12)
    assert vp == pytest.approx(hv @ s.pp @ hv, abs=1e-12)
