"""Problem instances: simple undirected graphs, seeded random generation,
independent-set predicates, and the classical baselines (minimum-degree greedy
and exact maximum independent set).

Vertex subsets are plain integers used as bitmasks: bit ``i`` set means vertex
``i`` is selected. The same masks double as computational-basis indices in the
simulator modules.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable

from .errors import CapacityError, GraphFormatError

__all__ = [
    "Graph",
    "SplitMix64",
    "mix64",
    "derive_seed",
    "erdos_renyi",
    "is_independent",
    "violated_edges",
    "enumerate_independent_sets",
    "greedy_mis",
    "exact_mis",
    "read_graph",
    "write_graph",
    "mask_to_vertices",
    "vertices_to_mask",
]

# Refuse to materialize more independent sets than this by default.
DEFAULT_IS_LIMIT = 1 << 24

# Branch-and-bound stays practical up to roughly this many vertices.
DEFAULT_EXACT_MIS_LIMIT = 40

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _finalize64(z: int) -> int:
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


def mix64(x: int) -> int:
    """One SplitMix64 step applied to ``x``: add the golden-ratio increment, scramble."""
    return _finalize64((x + _GOLDEN) & _MASK64)


def derive_seed(master_seed: int, n: int, k: int) -> int:
    """Seed for sample ``k`` of a size-``n`` sweep point.

    Defined as ``mix64(mix64(mix64(master) ^ n) ^ k)``. The formula is part of
    the output contract: rows of experiment CSVs can be regenerated
    individually from (master_seed, n, k) on any platform.
    """
    return mix64(mix64(mix64(master_seed & _MASK64) ^ (n & _MASK64)) ^ (k & _MASK64))


class SplitMix64:
    """Minimal deterministic PRNG (SplitMix64).

    Chosen over ``random``/``numpy`` generators so that sampled graphs are
    bit-identical across processes, Python versions, and platforms. Splitting
    is done by deriving child seeds with :func:`derive_seed`.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _finalize64(self._state)

    def next_double(self) -> float:
        # top 53 bits -> uniform double in [0, 1)
        return (self.next_u64() >> 11) * 2.0**-53


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Edges are normalized to sorted ``(i, j)`` pairs with ``i < j``, deduplicated,
    and stored in ascending order. ``nbr_masks[i]`` is the bitmask of neighbors
    of vertex ``i``; it is derived, never supplied.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    nbr_masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"vertex count must be >= 0, got {self.n}")
        normalized = set()
        for e in self.edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i},{j}) out of range for n={self.n}")
            normalized.add((i, j) if i < j else (j, i))
        object.__setattr__(self, "edges", tuple(sorted(normalized)))
        masks = [0] * self.n
        for i, j in self.edges:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        object.__setattr__(self, "nbr_masks", tuple(masks))

    @property
    def m(self) -> int:
        """Edge count."""
        return len(self.edges)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def degree(self, v: int) -> int:
        return self.nbr_masks[v].bit_count()


def _check_mask(g: Graph, s: int) -> int:
    s = int(s)
    if s < 0 or s > g.full_mask:
        raise ValueError(f"vertex set {s:#x} not valid for n={g.n}")
    return s


def mask_to_vertices(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def vertices_to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << int(v)
    return mask


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """Sample G(n, p): each of the C(n,2) pairs is kept independently with
    probability ``p``.

    The pair (i, j), i < j, is visited in lexicographic order and kept when the
    next SplitMix64 double is < p, so identical (n, p, seed) give an identical
    edge set everywhere.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = SplitMix64(seed)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.next_double() < p:
                edges.append((i, j))
    return Graph(n, tuple(edges))


def is_independent(g: Graph, s: int) -> bool:
    """True iff no edge of ``g`` has both endpoints inside ``s``."""
    s = _check_mask(g, s)
    rest = s
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        if g.nbr_masks[v] & s:
            return False
        rest ^= low
    return True


def violated_edges(g: Graph, s: int) -> int:
    """Number of edges with both endpoints in ``s`` (0 iff ``s`` is independent)."""
    s = _check_mask(g, s)
    total = 0
    rest = s
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        total += (g.nbr_masks[v] & s).bit_count()
        rest ^= low
    return total // 2  # each violated edge counted from both endpoints


def enumerate_independent_sets(g: Graph, limit: int = DEFAULT_IS_LIMIT) -> list[int]:
    """All independent sets of ``g`` as masks, ascending; always contains 0.

    Enumeration is pruned (only extendable sets are visited), so the cost is
    proportional to the output size, not 2^n. Raises CapacityError once more
    than ``limit`` sets have been produced.
    """
    out: list[int] = []
    nbr = g.nbr_masks
    n = g.n

    def rec(start: int, mask: int, blocked: int) -> None:
        out.append(mask)
        if len(out) > limit:
            raise CapacityError(
                f"graph has more than {limit} independent sets; raise the limit explicitly"
            )
        for v in range(start, n):
            bit = 1 << v
            if not blocked & bit:
                rec(v + 1, mask | bit, blocked | nbr[v])

    rec(0, 0, 0)
    out.sort()
    return out


def greedy_mis(g: Graph) -> int:
    """Minimum-degree greedy baseline.

    Repeatedly select the vertex of minimum degree in the residual induced
    subgraph (smallest label on ties), add it to the set, and delete it
    together with its residual neighbors. Returns a maximal independent set.
    """
    alive = g.full_mask
    chosen = 0
    while alive:
        best_v = -1
        best_d = g.n + 1
        rest = alive
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            d = (g.nbr_masks[v] & alive).bit_count()
            if d < best_d:  # scanning ascending labels makes ties pick the smallest
                best_d = d
                best_v = v
            rest ^= low
        chosen |= 1 << best_v
        alive &= ~((1 << best_v) | g.nbr_masks[best_v])
    return chosen


def exact_mis(g: Graph, max_vertices: int = DEFAULT_EXACT_MIS_LIMIT) -> int:
    """A maximum independent set, as the lexicographically smallest optimal mask.

    Branch and bound: branch on the minimum-residual-degree vertex
    (include-first), prune a branch only when even taking every remaining
    candidate cannot *strictly* beat the incumbent size. The non-strict ties
    are explored, which is what makes the smallest-mask tie-break exact.
    The greedy result seeds the incumbent.
    """
    if g.n > max_vertices:
        raise CapacityError(f"exact MIS guard: n={g.n} exceeds limit {max_vertices}")
    nbr = g.nbr_masks
    best_mask = greedy_mis(g)
    best_size = best_mask.bit_count()

    def pick(cand: int) -> int:
        best_v = -1
        best_d = g.n + 1
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            d = (nbr[v] & cand).bit_count()
            if d < best_d:
                best_d = d
                best_v = v
            rest ^= low
        return best_v

    def rec(cand: int, cur: int, cur_size: int) -> None:
        nonlocal best_mask, best_size
        if cand == 0:
            if cur_size > best_size or (cur_size == best_size and cur < best_mask):
                best_size = cur_size
                best_mask = cur
            return
        if cur_size + cand.bit_count() < best_size:
            return
        v = pick(cand)
        bit = 1 << v
        rec(cand & ~(bit | nbr[v]), cur | bit, cur_size + 1)
        rec(cand & ~bit, cur, cur_size)

    rec(g.full_mask, 0, 0)
    return best_mask


# ---------------------------------------------------------------------------
# Text format: first line "n m", then m lines "i j" (0-based, ascending).
# ---------------------------------------------------------------------------


def write_graph(g: Graph, path: str | os.PathLike) -> None:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{i} {j}" for i, j in g.edges)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_graph(path: str | os.PathLike) -> Graph:
    with open(path, "r", encoding="ascii") as fh:
        raw = fh.read().splitlines()
    lines: list[tuple[int, str]] = [
        (no, line.strip()) for no, line in enumerate(raw, start=1) if line.strip()
    ]
    if not lines:
        raise GraphFormatError(f"{path}:1: empty graph file")
    no, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise GraphFormatError(f"{path}:{no}: header must be 'n m', got {header!r}")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphFormatError(f"{path}:{no}: header must be two integers, got {header!r}") from None
    if len(lines) - 1 != m:
        raise GraphFormatError(f"{path}:{no}: header promises {m} edges, file has {len(lines) - 1}")
    edges = []
    for no, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"{path}:{no}: edge line must be 'i j', got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"{path}:{no}: edge endpoints must be integers, got {line!r}") from None
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise GraphFormatError(f"{path}:{no}: invalid edge ({i},{j}) for n={n}")
        edges.append((i, j))
    return Graph(n, tuple(edges))


def fig2a_graph() -> Graph:
    """The 5-vertex example graph used throughout the tests and docs.

    Vertices x1..x5 map to 0..4; edges x1-x2, x2-x3, x1-x4, x4-x5, x4-x2, x5-x2.
    """
    return Graph(5, ((0, 1), (1, 2), (0, 3), (3, 4), (1, 3), (1, 4)))


__all__.append("fig2a_graph")
