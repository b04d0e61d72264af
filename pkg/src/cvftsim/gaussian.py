"""Pure Gaussian states in the xxpp covariance representation.

Conventions used throughout the package:

* quadratures are ordered ``(x_1, ..., x_n, p_1, ..., p_n)``;
* the vacuum has ``Var(x) = Var(p) = 1/2`` (hbar = 1), so a pure state obeys
  ``det(2 * cov) = 1``;
* a beam splitter of angle ``theta`` on modes ``(a, b)`` maps
  ``a -> cos(theta) a - sin(theta) b`` and ``b -> sin(theta) a + cos(theta) b``,
  identically on the x and p blocks.

States are immutable; every operation returns a new :class:`GaussianState`.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, NamedTuple

import numpy as np

#: Quadrature variance of the vacuum.
VACUUM_VARIANCE = 0.5

#: Smallest eigenvalue accepted as positive semidefinite.
PSD_TOL = 1e-10
#: Allowed deviation of ``det(2 cov)`` from one.
PURITY_TOL = 1e-9


class GaussianError(ValueError):
    """Raised for unphysical inputs or unknown mode labels."""


class ModeId(NamedTuple):
    """Address of one mode of the spatiotemporal lattice."""

    beam: str  # "idler" | "signal"
    spatial: str  # "01" | "10"
    timebin: int

    def shifted(self, delta: int, modulus: int | None = None) -> "ModeId":
        t = self.timebin + delta
        if modulus is not None:
            t %= modulus
        return ModeId(self.beam, self.spatial, t)

    def __str__(self) -> str:
        return f"{self.beam}{self.spatial}@{self.timebin}"


def symplectic_form(n: int) -> np.ndarray:
    """Standard symplectic form for ``n`` modes in xxpp ordering."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


# --------------------------------------------------------------------------
# graphs
# --------------------------------------------------------------------------


def _two_colorable(adj: np.ndarray) -> bool:
    n = adj.shape[0]
    color = [-1] * n
    for start in range(n):
        if color[start] >= 0:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in np.flatnonzero(adj[u]):
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return False
    return True


@dataclass(frozen=True)
class AdjacencyGraph:
    """Symmetric 0/1 adjacency matrix with zero diagonal."""

    entries: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.entries, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise GaussianError("adjacency matrix must be square")
        if not np.array_equal(g, g.T):
            raise GaussianError("adjacency matrix must be symmetric")
        if np.any(np.diag(g) != 0):
            raise GaussianError("adjacency matrix must have a zero diagonal")
        if not np.all((g == 0) | (g == 1)):
            raise GaussianError("adjacency entries must be 0 or 1")
        g.setflags(write=False)
        object.__setattr__(self, "entries", g)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def is_self_inverse_bipartite(self) -> bool:
        g = self.entries
        return bool(np.allclose(g @ g, np.eye(self.n))) and _two_colorable(g)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "AdjacencyGraph":
        g = np.zeros((n, n))
        for a, b in pairs:
            g[a, b] = g[b, a] = 1.0
        return cls(g)


@dataclass(frozen=True)
class ComplexGraph:
    """Complex adjacency matrix ``Z = V + iU`` of a pure Gaussian state."""

    Z: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.Z, dtype=complex)
        if z.ndim != 2 or z.shape[0] != z.shape[1]:
            raise GaussianError("Z must be square")
        if not np.allclose(z, z.T, atol=1e-12):
            raise GaussianError("Z must be symmetric")
        z.setflags(write=False)
        object.__setattr__(self, "Z", z)

    @property
    def n(self) -> int:
        return self.Z.shape[0]

    @property
    def U(self) -> np.ndarray:
        return self.Z.imag

    @property
    def V(self) -> np.ndarray:
        return self.Z.real

    def is_physical(self) -> bool:
        return bool(np.linalg.eigvalsh(self.U).min() > PSD_TOL)


def hgraph_state(G: AdjacencyGraph, r: float) -> ComplexGraph:
    """H-graph state ``Z = i cosh(2r) I - i sinh(2r) G``.

    Only valid for a self-inverse bipartite ``G``; both terms are imaginary,
    so ``V = 0`` and ``U = cosh(2r) I - sinh(2r) G`` with eigenvalues
    ``exp(+-2r)``.
    """
    if r < 0:
        raise GaussianError("squeezing parameter must be non-negative")
    if not G.is_self_inverse_bipartite:
        raise GaussianError("H-graph construction needs a self-inverse bipartite graph")
    eye = np.eye(G.n)
    return ComplexGraph(1j * np.cosh(2 * r) * eye - 1j * np.sinh(2 * r) * G.entries)


# --------------------------------------------------------------------------
# states
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianState:
    """Zero-mean pure Gaussian state: xxpp covariance plus mode labels."""

    cov: np.ndarray
    labels: tuple[ModeId, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        labels = tuple(self.labels)
        n = len(labels)
        if cov.shape != (2 * n, 2 * n):
            raise GaussianError(f"covariance shape {cov.shape} does not match {n} modes")
        index = {m: i for i, m in enumerate(labels)}
        if len(index) != n:
            raise GaussianError("duplicate mode labels")
        cov.setflags(write=False)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", index)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, mode: ModeId) -> int:
        try:
            return self._index[mode]
        except KeyError:
            raise GaussianError(f"unknown mode {mode}") from None

    def __contains__(self, mode) -> bool:
        return mode in self._index

    @property
    def xx(self) -> np.ndarray:
        return self.cov[: self.n, : self.n]

    @property
    def pp(self) -> np.ndarray:
        return self.cov[self.n :, self.n :]

    def purity_defect(self) -> float:
        """``|det(2 cov) - 1|`` computed through the log-determinant."""
        sign, logdet = np.linalg.slogdet(2 * self.cov)
        if sign <= 0:
            return np.inf
        return abs(np.expm1(logdet))

    def satisfies_uncertainty(self, tol: float = PSD_TOL) -> bool:
        m = self.cov + 0.5j * symplectic_form(self.n)
        return bool(np.linalg.eigvalsh(m).min() > -tol)

    @classmethod
    def vacuum(cls, labels: Iterable[ModeId]) -> "GaussianState":
        labels = tuple(labels)
        return cls(VACUUM_VARIANCE * np.eye(2 * len(labels)), labels)


def covariance_of(Z: ComplexGraph, labels: Iterable[ModeId] | None = None) -> GaussianState:
    """Covariance matrix of the pure state with complex adjacency ``Z``.

    ``cov = 1/2 [[U^-1, U^-1 V], [V U^-1, U + V U^-1 V]]``; the vacuum
    ``Z = iI`` maps to ``I/2``.
    """
    if not Z.is_physical():
        raise GaussianError("imaginary part of Z is not positive definite")
    U, V = Z.U, Z.V
    Uinv = np.linalg.inv(U)
    cov = 0.5 * np.block([[Uinv, Uinv @ V], [V @ Uinv, U + V @ Uinv @ V]])
    cov = 0.5 * (cov + cov.T)
    if labels is None:
        labels = [ModeId("mode", "", i) for i in range(Z.n)]
    return GaussianState(cov, tuple(labels))


def beamsplitter_symplectic(n: int, ia: int, ib: int, theta: float) -> np.ndarray:
    """Full ``2n x 2n`` symplectic matrix of a beam splitter on modes ``ia, ib``."""
    S = np.eye(2 * n)
    c, s = np.cos(theta), np.sin(theta)
    for off in (0, n):
        a, b = ia + off, ib + off
        S[a, a], S[a, b] = c, -s
        S[b, a], S[b, b] = s, c
    return S


def rotation_symplectic(n: int, ia: int, phi: float) -> np.ndarray:
    """Full symplectic matrix rotating mode ``ia`` by ``phi`` in phase space."""
    S = np.eye(2 * n)
    c, s = np.cos(phi), np.sin(phi)
    x, p = ia, ia + n
    S[x, x], S[x, p] = c, -s
    S[p, x], S[p, p] = s, c
    return S


def _conjugate_local(cov: np.ndarray, idx: list[int], M: np.ndarray) -> np.ndarray:
    # S cov S^T where S is identity outside ``idx`` and ``M`` on it.
    out = cov.copy()
    out[idx, :] = M @ out[idx, :]
    out[:, idx] = out[:, idx] @ M.T
    return 0.5 * (out + out.T)


def apply_beamsplitter(s: GaussianState, a: ModeId, b: ModeId, theta: float) -> GaussianState:
    if a == b:
        raise GaussianError("beam splitter needs two distinct modes")
    ia, ib = s.index(a), s.index(b)
    n = s.n
    c, sn = np.cos(theta), np.sin(theta)
    block = np.array([[c, -sn], [sn, c]])
    M = np.zeros((4, 4))
    M[:2, :2] = block
    M[2:, 2:] = block
    return GaussianState(_conjugate_local(s.cov, [ia, ib, ia + n, ib + n], M), s.labels)


def apply_rotation(s: GaussianState, a: ModeId, phi: float) -> GaussianState:
    """Rotate mode ``a``: ``x -> cos(phi) x - sin(phi) p``, ``p -> sin(phi) x + cos(phi) p``."""
    ia = s.index(a)
    c, sn = np.cos(phi), np.sin(phi)
    M = np.array([[c, -sn], [sn, c]])
    return GaussianState(_conjugate_local(s.cov, [ia, ia + s.n], M), s.labels)


def relabel_delay(
    s: GaussianState,
    selector: Callable[[ModeId], bool] | tuple[str, str],
    delta: int,
    modulus: int | None = None,
) -> GaussianState:
    """Delay the selected modes by ``delta`` time bins (a pure relabeling).

    ``selector`` is either a ``(beam, spatial)`` pair or a predicate on
    :class:`ModeId`. With ``modulus`` the time axis is cyclic.
    """
    if delta < 0 or int(delta) != delta:
        raise GaussianError("delay must be a non-negative integer")
    if isinstance(selector, tuple):
        beam, spatial = selector
        pick = lambda m: m.beam == beam and m.spatial == spatial  # noqa: E731
    else:
        pick = selector
    labels = tuple(m.shifted(int(delta), modulus) if pick(m) else m for m in s.labels)
    return GaussianState(s.cov, labels)


# --------------------------------------------------------------------------
# quadrature combinations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureForm:
    """``u = sum h_j x_j`` and ``v = sum g_j p_j`` over labelled modes."""

    h: Mapping[ModeId, float] = field(default_factory=dict)
    g: Mapping[ModeId, float] = field(default_factory=dict)

    def __post_init__(self):
        h = {m: float(c) for m, c in self.h.items() if c != 0}
        g = {m: float(c) for m, c in self.g.items() if c != 0}
        if not h and not g:
            raise GaussianError("quadrature form has no nonzero coefficient")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)

    @property
    def support(self) -> frozenset[ModeId]:
        return frozenset(self.h) | frozenset(self.g)

    def norm_sq(self) -> float:
        return sum(c * c for c in self.h.values()) + sum(c * c for c in self.g.values())

    def scaled(self, c: float) -> "QuadratureForm":
        return QuadratureForm({m: c * v for m, v in self.h.items()}, {m: c * v for m, v in self.g.items()})

    def relabeled(self, f: Callable[[ModeId], ModeId]) -> "QuadratureForm":
        return QuadratureForm({f(m): v for m, v in self.h.items()}, {f(m): v for m, v in self.g.items()})

    def _combine(self, other: "QuadratureForm", sign: float) -> "QuadratureForm":
        h = dict(self.h)
        g = dict(self.g)
        for m, v in other.h.items():
            h[m] = h.get(m, 0.0) + sign * v
        for m, v in other.g.items():
            g[m] = g.get(m, 0.0) + sign * v
        h = {m: v for m, v in h.items() if abs(v) > 1e-15}
        g = {m: v for m, v in g.items() if abs(v) > 1e-15}
        return QuadratureForm(h, g)

    def __add__(self, other: "QuadratureForm") -> "QuadratureForm":
        return self._combine(other, 1.0)

    def __sub__(self, other: "QuadratureForm") -> "QuadratureForm":
        return self._combine(other, -1.0)

    def __neg__(self) -> "QuadratureForm":
        return self.scaled(-1.0)


def _coefficient_vector(s: GaussianState, coeffs: Mapping[ModeId, float]) -> np.ndarray:
    vec = np.zeros(s.n)
    for m, c in coeffs.items():
        vec[s.index(m)] = c
    return vec


def variance_of(s: GaussianState, q: QuadratureForm) -> tuple[float, float]:
    """Return ``(Var(u), Var(v))`` for the x-part and p-part of ``q``."""
    h = _coefficient_vector(s, q.h)
    g = _coefficient_vector(s, q.g)
    return float(h @ s.xx @ h), float(g @ s.pp @ g)
