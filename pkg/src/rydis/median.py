"""The independent-set lattice ("median graph") of a problem graph, the
effective Hamiltonian obtained by projecting the blockade Hamiltonian onto
the IS subspace,

    H_eff = T (Omega A / 2 - Delta D),

and the continuous-time quantum walk it generates. A is the Hamming-distance-1
adjacency between IS masks and D the diagonal of occupation numbers (the
projection of the detuning term; for the Delta = 0 walk protocol the choice of
D is irrelevant). Short-time probability formulas for size-2 sets are provided
both in closed form and via a perturbative evaluation of the constructed
operator, so the two can be compared without trusting either.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .errors import ConvergenceError
from .graph import DEFAULT_IS_LIMIT, Graph, enumerate_independent_sets

__all__ = [
    "MedianGraph",
    "WalkResult",
    "build_median_graph",
    "apply_h_eff",
    "walk_evolve",
    "walk_p2_curve",
    "p2_short_time",
    "p2_perturbative_oracle",
    "p2_asymptotic_lower_bound",
    "write_median_graph",
]

# above this node count the walk switches from eigendecomposition to
# Krylov-free expm_multiply on the sparse operator
DENSE_WALK_LIMIT = 4096


@dataclass(frozen=True)
class MedianGraph:
    """IS lattice: one node per independent set, edges between sets differing
    by exactly one vertex. Node 0 is always the empty set and node masks are
    ascending."""

    nodes: tuple[int, ...]
    adjacency: tuple[tuple[int, int], ...]
    occupation: tuple[int, ...]
    source_graph: Graph = field(repr=False)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def adjacency_matrix(self) -> sp.csr_matrix:
        return _adjacency_csr(self)

    def occupation_array(self) -> np.ndarray:
        return np.asarray(self.occupation, dtype=float)

    def size_indices(self, k: int) -> np.ndarray:
        """Node indices whose independent set has exactly k vertices."""
        occ = np.asarray(self.occupation)
        return np.nonzero(occ == k)[0]


@lru_cache(maxsize=16)
def _adjacency_csr(mg: MedianGraph) -> sp.csr_matrix:
    num = mg.node_count
    if not mg.adjacency:
        return sp.csr_matrix((num, num))
    rows, cols = zip(*mg.adjacency)
    data = np.ones(len(mg.adjacency))
    a = sp.coo_matrix((data, (rows, cols)), shape=(num, num))
    return (a + a.T).tocsr()


def build_median_graph(g: Graph, limit: int = DEFAULT_IS_LIMIT) -> MedianGraph:
    """Construct the IS lattice of ``g``.

    Every subset of an independent set is independent, so each nonempty node
    is adjacent to exactly popcount(mask) single-vertex-removal parents; the
    edge list is generated from that observation and is therefore complete.
    """
    nodes = enumerate_independent_sets(g, limit=limit)
    index = {mask: i for i, mask in enumerate(nodes)}
    pairs = []
    for i, mask in enumerate(nodes):
        rest = mask
        while rest:
            low = rest & -rest
            parent = index[mask ^ low]
            pairs.append((parent, i))
            rest ^= low
    pairs.sort()
    return MedianGraph(
        nodes=tuple(nodes),
        adjacency=tuple(pairs),
        occupation=tuple(mask.bit_count() for mask in nodes),
        source_graph=g,
    )


def apply_h_eff(mg: MedianGraph, omega: float, delta: float, t_total: float, x: np.ndarray) -> np.ndarray:
    """y = T (Omega A / 2 - Delta D) x over the median-graph nodes."""
    x = np.asarray(x)
    if x.shape != (mg.node_count,):
        raise ValueError(f"state has dimension {x.shape}, expected ({mg.node_count},)")
    y = 0.5 * omega * _adjacency_csr(mg).dot(x)
    if delta != 0.0:
        y = y - delta * mg.occupation_array() * x
    return t_total * y


@dataclass
class WalkResult:
    """Walk state over median-graph nodes plus its size-resolved probabilities."""

    state: np.ndarray
    p2: float
    size_probs: dict[int, float]
    norm_drift: float


@lru_cache(maxsize=8)
def _adjacency_eigensystem(mg: MedianGraph) -> tuple[np.ndarray, np.ndarray]:
    a = _adjacency_csr(mg).toarray()
    return np.linalg.eigh(a)


def _heff_dense_eigensystem(mg: MedianGraph, omega: float, delta: float, t_total: float):
    h = t_total * (0.5 * omega * _adjacency_csr(mg).toarray() - delta * np.diag(mg.occupation_array()))
    return np.linalg.eigh(h)


def _walk_state(mg: MedianGraph, omega: float, delta: float, t_total: float, s_end: float) -> np.ndarray:
    num = mg.node_count
    psi0 = np.zeros(num, dtype=np.complex128)
    psi0[0] = 1.0
    if s_end == 0.0:
        return psi0
    if num <= DENSE_WALK_LIMIT:
        if delta == 0.0:
            # H = c A with c = T Omega / 2: one cached eigensystem serves all s
            evals, vecs = _adjacency_eigensystem(mg)
            phases = np.exp(-1j * (0.5 * omega * t_total * s_end) * evals)
        else:
            evals, vecs = _heff_dense_eigensystem(mg, omega, delta, t_total)
            phases = np.exp(-1j * s_end * evals)
        return vecs @ (phases * (vecs.conj().T @ psi0))
    h = 0.5 * omega * t_total * _adjacency_csr(mg)
    if delta != 0.0:
        h = h - sp.diags(delta * t_total * mg.occupation_array())
    return expm_multiply(-1j * s_end * h.tocsc(), psi0)


def walk_evolve(
    mg: MedianGraph,
    omega: float,
    delta: float,
    t_total: float,
    s_end: float,
    tol: float = 1e-9,
) -> WalkResult:
    """exp(-i H_eff s_end) applied to the empty-set node.

    Dense lattices (<= 4096 nodes) go through an exact eigendecomposition;
    larger ones through scipy's certified expm_multiply. ``tol`` only guards
    the norm-drift sanity check, both backends resolve far below it.
    """
    if s_end < 0.0:
        raise ValueError(f"s_end must be >= 0, got {s_end}")
    state = _walk_state(mg, omega, delta, t_total, s_end)
    norm = float(np.linalg.norm(state))
    if not math.isfinite(norm) or abs(norm - 1.0) > max(tol, 1e-9) * 100:
        raise ConvergenceError(f"walk propagation lost unitarity: |norm-1|={abs(norm - 1.0):.2e}")
    probs = np.abs(state) ** 2
    occ = np.asarray(mg.occupation)
    by_size = np.bincount(occ, weights=probs)
    size_probs = {k: float(by_size[k]) for k in range(by_size.size)}
    return WalkResult(
        state=state,
        p2=size_probs.get(2, 0.0),
        size_probs=size_probs,
        norm_drift=abs(norm - 1.0),
    )


def walk_p2_curve(mg: MedianGraph, omega: float, t_total: float, s_values: np.ndarray) -> np.ndarray:
    """p2(s) of the Delta = 0 walk on a grid of times, via one eigensystem."""
    s_values = np.asarray(s_values, dtype=float)
    if mg.node_count > DENSE_WALK_LIMIT:
        return np.array(
            [walk_evolve(mg, omega, 0.0, t_total, float(s)).p2 for s in s_values]
        )
    evals, vecs = _adjacency_eigensystem(mg)
    v0 = vecs.conj().T[:, 0]  # <eigvec | empty set>
    rows2 = mg.size_indices(2)
    if rows2.size == 0:
        return np.zeros_like(s_values)
    out = np.empty_like(s_values)
    c = 0.5 * omega * t_total
    for i, s in enumerate(s_values):
        amps = vecs[rows2, :] @ (np.exp(-1j * c * s * evals) * v0)
        out[i] = float(np.sum(np.abs(amps) ** 2))
    return out


def p2_short_time(n: int, m: int, omega: float, t_total: float, s: float) -> float:
    """Closed-form leading-order probability of reaching a size-2 set:
    (1/8) Omega^2 T^2 s^4 (n(n-1)/2 - m)^2.

    Emitted verbatim for figure reproduction; see p2_perturbative_oracle for
    the coefficient computed from the constructed operator instead.
    """
    if s < 0.0:
        raise ValueError(f"s must be >= 0, got {s}")
    count = n * (n - 1) / 2.0 - m
    return 0.125 * (omega * t_total * count) ** 2 * s**4


def p2_perturbative_oracle(mg: MedianGraph, omega: float, t_total: float, s: float) -> float:
    """Leading s^4 term of the Delta = 0 walk's size-2 probability, computed
    directly from H_eff: sum_i (s^4/4) |<size-2 node i| H_eff^2 |empty>|^2."""
    if s < 0.0:
        raise ValueError(f"s must be >= 0, got {s}")
    psi0 = np.zeros(mg.node_count, dtype=float)
    psi0[0] = 1.0
    h2 = apply_h_eff(mg, omega, 0.0, t_total, apply_h_eff(mg, omega, 0.0, t_total, psi0))
    rows2 = mg.size_indices(2)
    return 0.25 * s**4 * float(np.sum(np.abs(h2[rows2]) ** 2))


def p2_asymptotic_lower_bound(c: float, omega: float, t_total: float, kappa: float) -> float:
    """Density-limit lower bound (0.5 - c)^2 Omega^2 T^2 kappa^4 / 8 for edge
    densities m ~ c n^2, 0 <= c <= 0.5."""
    if not 0.0 <= c <= 0.5:
        raise ValueError(f"density constant must lie in [0, 0.5], got {c}")
    return (0.5 - c) ** 2 * omega**2 * t_total**2 * kappa**4 / 8.0


def write_median_graph(mg: MedianGraph, path: str | os.PathLike) -> None:
    """Text export: 'N M' header, N node masks (one per line), M index pairs."""
    lines = [f"{mg.node_count} {len(mg.adjacency)}"]
    lines.extend(str(mask) for mask in mg.nodes)
    lines.extend(f"{a} {b}" for a, b in mg.adjacency)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
