"""Independent reference implementations used only by the tests.

These deliberately avoid the package's own fast paths: Hamiltonians are built
entry by entry from first principles, edge counts come from brute-force pair
loops, and reference evolutions use scipy's adaptive integrator. They exist so
production code is checked against something it does not share code with.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp


def brute_violated_edges(edges, mask: int) -> int:
    return sum(1 for (i, j) in edges if (mask >> i) & 1 and (mask >> j) & 1)


def brute_independent_sets(n: int, edges) -> list[int]:
    return [m for m in range(1 << n) if brute_violated_edges(edges, m) == 0]


def greedy_reference(n: int, edges) -> int:
    """Minimum-degree greedy, list-of-sets implementation (no bitmasks)."""
    adj = {v: set() for v in range(n)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    alive = set(range(n))
    chosen = []
    while alive:
        v = min(alive, key=lambda u: (len(adj[u] & alive), u))
        chosen.append(v)
        alive -= adj[v] | {v}
    mask = 0
    for v in chosen:
        mask |= 1 << v
    return mask


def max_is_lex_smallest(n: int, edges) -> int:
    """Exhaustive maximum IS, smallest mask among optima."""
    best = 0
    best_size = 0
    for m in range(1 << n):
        if brute_violated_edges(edges, m) == 0:
            size = bin(m).count("1")
            if size > best_size or (size == best_size and m < best):
                best = m
                best_size = size
    return best


def dense_h0(n: int, edges, omega: float, delta: float, omega0: float, t_total: float) -> np.ndarray:
    """Dense blockade Hamiltonian at fixed drive values, built entry by entry."""
    dim = 1 << n
    h = np.zeros((dim, dim), dtype=complex)
    for m in range(dim):
        h[m, m] = -delta * t_total * bin(m).count("1") + omega0 * t_total * brute_violated_edges(
            edges, m
        )
        for j in range(n):
            h[m ^ (1 << j), m] += 0.5 * omega * t_total
    return h


def reference_evolution(g, params, s_end: float, rtol: float = 1e-12, atol: float = 1e-13) -> np.ndarray:
    """Adaptive DOP853 integration of i dpsi/ds = H0(s) psi from |empty>."""
    n = g.n
    dim = 1 << n
    t_total = params.t_total
    pop = np.array([bin(m).count("1") for m in range(dim)], dtype=float)
    nev = np.array([brute_violated_edges(g.edges, m) for m in range(dim)], dtype=float)
    flip = np.zeros((dim, dim))
    for m in range(dim):
        for j in range(n):
            flip[m ^ (1 << j), m] += 0.5
    sched = params.schedule

    def rhs(s, y):
        om = float(sched.omega(s))
        de = float(sched.delta(s))
        diag = -de * t_total * pop + params.omega0 * t_total * nev
        return -1j * (om * t_total * (flip @ y) + diag * y)

    psi0 = np.zeros(dim, dtype=complex)
    psi0[0] = 1.0
    sol = solve_ivp(rhs, (0.0, s_end), psi0, method="DOP853", rtol=rtol, atol=atol)
    assert sol.success
    return sol.y[:, -1]
