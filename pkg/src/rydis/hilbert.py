"""Computational-basis bookkeeping, annealing schedules, and matrix-free
application of the blockade Hamiltonian

    H0(s) = (Omega(s) T / 2) sum_j sigma_j^x
            - Delta(s) T sum_j n_j + omega0 T sum_{<i,j>} n_i n_j

in dimensionless scaled time s = t/T with hbar = 1, so the propagation
equation is i dpsi/ds = H0(s) psi. Basis index m is the occupation bitmask
itself: popcount(m) excited vertices, violated_edges(m) blockade violations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .graph import Graph, violated_edges

__all__ = [
    "Schedule",
    "AnnealParams",
    "builtin_schedules",
    "schedule_from_table",
    "popcount_table",
    "violation_table",
    "diagonal_energy",
    "apply_h0",
    "interaction_phase",
]


@dataclass(frozen=True)
class Schedule:
    """Drive profiles Omega(s), Delta(s) on s in [0, 1] plus their stated bounds.

    ``omega_max`` / ``delta_max`` must dominate |Omega| / |Delta| on [0, 1] and
    ``lipschitz_k`` must dominate the slope of Omega; these stated constants
    feed the analytic leakage bounds, so :meth:`validate` spot-checks them.
    ``delta_integral``, when given, is the closed form of int_0^s Delta;
    otherwise adaptive quadrature is used.
    """

    omega: Callable[[float], float]
    delta: Callable[[float], float]
    omega_max: float
    delta_max: float
    lipschitz_k: float
    name: str = "custom"
    delta_integral: Callable[[float], float] | None = None

    def integral_delta(self, s: float) -> float:
        """int_0^s Delta(u) du, closed form when available."""
        if self.delta_integral is not None:
            return float(self.delta_integral(s))
        val, _ = quad(self.delta, 0.0, float(s), epsabs=1e-10, epsrel=1e-10, limit=400)
        return val

    def validate(self, grid_points: int = 10_001, pair_samples: int = 512) -> None:
        """Check the stated bounds against sampled values; raise ValueError on violation.

        |Omega|, |Delta| are checked on a uniform grid, the Lipschitz constant
        on deterministic pseudo-random point pairs.
        """
        grid = np.linspace(0.0, 1.0, grid_points)
        om = np.array([float(self.omega(s)) for s in grid])
        de = np.array([float(self.delta(s)) for s in grid])
        tol = 1e-12
        if np.max(np.abs(om)) > self.omega_max + tol:
            raise ValueError(
                f"schedule {self.name!r}: |Omega| reaches {np.max(np.abs(om))}, stated max {self.omega_max}"
            )
        if np.max(np.abs(de)) > self.delta_max + tol:
            raise ValueError(
                f"schedule {self.name!r}: |Delta| reaches {np.max(np.abs(de))}, stated max {self.delta_max}"
            )
        from .graph import SplitMix64

        rng = SplitMix64(0xC0FFEE)
        for _ in range(pair_samples):
            a = rng.next_double()
            b = rng.next_double()
            lhs = abs(float(self.omega(a)) - float(self.omega(b)))
            if lhs > self.lipschitz_k * abs(a - b) + tol:
                raise ValueError(
                    f"schedule {self.name!r}: Omega slope between {a} and {b} exceeds K={self.lipschitz_k}"
                )


def builtin_schedules(name: str, omega: float = 1.0, delta: float = 0.0) -> Schedule:
    """Named drive profiles.

    fig4
        Omega(s) = sin(pi s), Delta(s) = cos(pi s); bounds 1, 1, K = pi.
    fig3
        Omega = 1, Delta = 0 (alias of constant with the defaults).
    constant
        Omega = ``omega``, Delta = ``delta``; K = 0.
    """
    if name == "fig4":
        return Schedule(
            omega=lambda s: np.sin(np.pi * s),
            delta=lambda s: np.cos(np.pi * s),
            omega_max=1.0,
            delta_max=1.0,
            lipschitz_k=math.pi,
            name="fig4",
            delta_integral=lambda s: np.sin(np.pi * s) / np.pi,
        )
    if name == "fig3":
        return replace(builtin_schedules("constant", omega=1.0, delta=0.0), name="fig3")
    if name == "constant":
        om, de = float(omega), float(delta)
        return Schedule(
            omega=lambda s, _v=om: _v * np.ones_like(np.asarray(s, dtype=float)),
            delta=lambda s, _v=de: _v * np.ones_like(np.asarray(s, dtype=float)),
            omega_max=abs(om),
            delta_max=abs(de),
            lipschitz_k=0.0,
            name=f"constant({om},{de})",
            delta_integral=lambda s, _v=de: _v * np.asarray(s, dtype=float),
        )
    raise ValueError(f"unknown schedule {name!r}; expected fig4, fig3 or constant")


def schedule_from_table(s: np.ndarray, omega: np.ndarray, delta: np.ndarray) -> Schedule:
    """Schedule from sampled columns (s, Omega, Delta), linearly interpolated.

    The stated bounds are taken from the table; the Lipschitz constant is the
    steepest table slope. int Delta is evaluated exactly for the piecewise-linear
    model (trapezoid prefix sums).
    """
    s = np.asarray(s, dtype=float)
    omega = np.asarray(omega, dtype=float)
    delta = np.asarray(delta, dtype=float)
    if s.ndim != 1 or s.size < 2 or omega.shape != s.shape or delta.shape != s.shape:
        raise ValueError("schedule table needs matching 1-d columns with >= 2 rows")
    if not (np.all(np.diff(s) > 0) and math.isclose(s[0], 0.0) and math.isclose(s[-1], 1.0)):
        raise ValueError("schedule table must be strictly increasing from s=0 to s=1")
    slopes = np.diff(omega) / np.diff(s)
    prefix = np.concatenate(([0.0], np.cumsum(0.5 * (delta[1:] + delta[:-1]) * np.diff(s))))

    def integral(x, _s=s, _d=delta, _p=prefix):
        x = np.asarray(x, dtype=float)
        idx = np.clip(np.searchsorted(_s, x, side="right") - 1, 0, _s.size - 2)
        s0 = _s[idx]
        d0 = _d[idx]
        slope = (_d[idx + 1] - d0) / (_s[idx + 1] - s0)
        dx = x - s0
        return _p[idx] + d0 * dx + 0.5 * slope * dx * dx

    return Schedule(
        omega=lambda x, _s=s, _o=omega: np.interp(x, _s, _o),
        delta=lambda x, _s=s, _d=delta: np.interp(x, _s, _d),
        omega_max=float(np.max(np.abs(omega))),
        delta_max=float(np.max(np.abs(delta))),
        lipschitz_k=float(np.max(np.abs(slopes))) if slopes.size else 0.0,
        name="table",
        delta_integral=integral,
    )


@dataclass(frozen=True)
class AnnealParams:
    """Total runtime T, blockade strength omega0, and the drive schedule."""

    t_total: float
    omega0: float
    schedule: Schedule

    def __post_init__(self):
        if not self.t_total > 0:
            raise ValueError(f"t_total must be positive, got {self.t_total}")
        if not self.omega0 > 0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")


# ---------------------------------------------------------------------------
# Basis tables
# ---------------------------------------------------------------------------


def popcount_table(n: int) -> np.ndarray:
    """popcount(m) for every basis index m < 2^n (int32)."""
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int32)


@lru_cache(maxsize=16)
def _violation_table_cached(g: Graph) -> np.ndarray:
    n = g.n
    ne = np.zeros(1 << n, dtype=np.int32)
    # dynamic program over the lowest set bit: edges(m) = edges(rest) + deg of v into rest
    for v in range(n - 1, -1, -1):
        rest = np.arange(0, 1 << n, 1 << (v + 1), dtype=np.uint64)
        ne[rest + (1 << v)] = ne[rest] + np.bitwise_count(rest & np.uint64(g.nbr_masks[v])).astype(
            np.int32
        )
    ne.setflags(write=False)
    return ne


def violation_table(g: Graph) -> np.ndarray:
    """violated_edges(m) for every basis index m < 2^n (read-only int32 array)."""
    return _violation_table_cached(g)


# ---------------------------------------------------------------------------
# Hamiltonian pieces
# ---------------------------------------------------------------------------


def diagonal_energy(g: Graph, m: int, s: float, p: AnnealParams) -> float:
    """Diagonal matrix element of H0(s) at basis state m:
    -Delta(s) T popcount(m) + omega0 T violated_edges(m)."""
    if m < 0 or m >= (1 << g.n):
        raise ValueError(f"basis index {m} out of range for n={g.n}")
    t = p.t_total
    return float(
        -float(p.schedule.delta(s)) * t * m.bit_count() + p.omega0 * t * violated_edges(g, m)
    )


def _apply_sigma_x_sum(x: np.ndarray, n: int) -> np.ndarray:
    """y = (sum_j sigma_j^x) x via strided bit flips; no 2^n x 2^n storage."""
    y = np.zeros_like(x)
    for j in range(n):
        step = 1 << j
        xr = x.reshape(-1, 2, step)
        yr = y.reshape(-1, 2, step)
        yr[:, 0, :] += xr[:, 1, :]
        yr[:, 1, :] += xr[:, 0, :]
    return y


def apply_h0(g: Graph, p: AnnealParams, s: float, x: np.ndarray) -> np.ndarray:
    """Apply H0(s) to a state vector over the 2^n computational basis."""
    x = np.asarray(x)
    if x.shape != (1 << g.n,):
        raise ValueError(f"state has dimension {x.shape}, expected ({1 << g.n},)")
    t = p.t_total
    diag = (
        -float(p.schedule.delta(s)) * t * popcount_table(g.n)
        + p.omega0 * t * violation_table(g)
    )
    y = _apply_sigma_x_sum(x, g.n)
    y *= 0.5 * float(p.schedule.omega(s)) * t
    y += diag * x
    return y


def interaction_phase(g: Graph, p: AnnealParams, m: int, s: float) -> complex:
    """Diagonal interaction-picture factor exp(-i (E_m s - n_m T int_0^s Delta)),
    with E_m = violated_edges(m) omega0 T. Always unit modulus."""
    if m < 0 or m >= (1 << g.n):
        raise ValueError(f"basis index {m} out of range for n={g.n}")
    t = p.t_total
    e_m = violated_edges(g, m) * p.omega0 * t
    theta = e_m * s - m.bit_count() * t * p.schedule.integral_delta(s)
    return cmath.exp(-1j * theta)
