"""Inner loops of the state-vector propagator.

A propagation substep multiplies the state by diagonal phases
exp(-i u ne[m]) exp(-i w pop[m]) (the interaction-picture rotation between
two schedule sample points) and then applies exp(-i alpha sum_j sigma_j^x),
which factorizes into independent 2x2 rotations per qubit. Every factor is
unitary, so the composed stepper conserves the norm to rounding error.

The numba implementations are used when available; the numpy ones are the
reference (set RYDIS_NO_NUMBA=1 to force them, e.g. for differential tests).
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly by the backend choice
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    _HAVE_NUMBA = False


def _phase_tables(u: float, w: float, max_ne: int, nq: int):
    upows = np.exp(-1j * u * np.arange(max_ne + 1))
    wpows = np.exp(-1j * w * np.arange(nq + 1))
    return upows, wpows


def propagate_chunk_numpy(
    psi: np.ndarray,
    ne: np.ndarray,
    pop: np.ndarray,
    nq: int,
    max_ne: int,
    u_angles: np.ndarray,
    w_angles: np.ndarray,
    alphas: np.ndarray,
) -> None:
    for i in range(u_angles.size):
        upows, wpows = _phase_tables(u_angles[i], w_angles[i], max_ne, nq)
        if u_angles[i] != 0.0:
            psi *= upows[ne]
        if w_angles[i] != 0.0:
            psi *= wpows[pop]
        al = alphas[i]
        if al != 0.0:
            c = np.cos(al)
            s = -1j * np.sin(al)
            for j in range(nq):
                v = psi.reshape(-1, 2, 1 << j)
                a = v[:, 0, :].copy()
                b = v[:, 1, :]
                v[:, 0, :] = c * a + s * b
                v[:, 1, :] = s * a + c * b


def apply_phase_numpy(
    psi: np.ndarray,
    ne: np.ndarray,
    pop: np.ndarray,
    nq: int,
    max_ne: int,
    u: float,
    w: float,
) -> None:
    upows, wpows = _phase_tables(u, w, max_ne, nq)
    if u != 0.0:
        psi *= upows[ne]
    if w != 0.0:
        psi *= wpows[pop]


if _HAVE_NUMBA:

    @numba.njit(cache=True)
    def _propagate_chunk_numba(psi, ne, pop, nq, max_ne, u_angles, w_angles, alphas):
        dim = psi.size
        upows = np.empty(max_ne + 1, np.complex128)
        wpows = np.empty(nq + 1, np.complex128)
        for i in range(u_angles.size):
            ua = u_angles[i]
            wa = w_angles[i]
            # phases computed per table entry (not by repeated multiplication)
            # so unit modulus holds to rounding error for every power
            for k in range(max_ne + 1):
                a = ua * k
                upows[k] = complex(np.cos(a), -np.sin(a))
            for k in range(nq + 1):
                a = wa * k
                wpows[k] = complex(np.cos(a), -np.sin(a))
            if wa != 0.0:
                for m in range(dim):
                    psi[m] *= upows[ne[m]] * wpows[pop[m]]
            elif ua != 0.0:
                for m in range(dim):
                    psi[m] *= upows[ne[m]]
            al = alphas[i]
            if al != 0.0:
                c = complex(np.cos(al), 0.0)
                s = complex(0.0, -np.sin(al))
                for j in range(nq):
                    step = 1 << j
                    for base in range(0, dim, 2 * step):
                        for off in range(step):
                            m0 = base + off
                            m1 = m0 + step
                            a0 = psi[m0]
                            b0 = psi[m1]
                            psi[m0] = c * a0 + s * b0
                            psi[m1] = s * a0 + c * b0

    @numba.njit(cache=True)
    def _apply_phase_numba(psi, ne, pop, nq, max_ne, u, w):
        dim = psi.size
        upows = np.empty(max_ne + 1, np.complex128)
        wpows = np.empty(nq + 1, np.complex128)
        for k in range(max_ne + 1):
            a = u * k
            upows[k] = complex(np.cos(a), -np.sin(a))
        for k in range(nq + 1):
            a = w * k
            wpows[k] = complex(np.cos(a), -np.sin(a))
        for m in range(dim):
            psi[m] *= upows[ne[m]] * wpows[pop[m]]


def _use_numba() -> bool:
    return _HAVE_NUMBA and os.environ.get("RYDIS_NO_NUMBA", "") != "1"


def propagate_chunk(psi, ne, pop, nq, max_ne, u_angles, w_angles, alphas) -> None:
    if _use_numba():
        _propagate_chunk_numba(psi, ne, pop, nq, max_ne, u_angles, w_angles, alphas)
    else:
        propagate_chunk_numpy(psi, ne, pop, nq, max_ne, u_angles, w_angles, alphas)


def apply_phase(psi, ne, pop, nq, max_ne, u, w) -> None:
    if _use_numba():
        _apply_phase_numba(psi, ne, pop, nq, max_ne, u, w)
    else:
        apply_phase_numpy(psi, ne, pop, nq, max_ne, u, w)
