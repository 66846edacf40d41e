"""Exact Wasserstein-1 distance between equal-size uniform atomic measures.

For two uniform measures with n atoms each, every transport plan is a doubly
stochastic matrix and the extreme points of those are the permutation
matrices, so the optimum is attained at an assignment.  The solver is a
primal-dual shortest-augmenting-path method, O(n^3), returning dual
potentials as an optimality certificate.  The hot loop is compiled with
numba when available and runs as plain Python otherwise (same code, same
results, just slower).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SizeLimitError, UnsupportedCaseError
from .measures import EmpiricalMeasure
from .systems import pairwise_distances

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

__all__ = [
    "CostMatrix",
    "TransportPlan",
    "AssignmentResult",
    "assignment_min",
    "bruteforce_min",
    "plan_cost",
    "wasserstein_empirical",
    "orbit_cost_matrix",
    "cost_matrix_to_csv",
    "cost_matrix_from_csv",
]

_BRUTEFORCE_CAP = 8
_MAX_SOLVER_SIZE = 4096


@dataclass(frozen=True)
class CostMatrix:
    """Nonnegative square cost matrix; entries[i][j] = cost of pairing i with j."""

    entries: np.ndarray
    provenance: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        a = np.asarray(self.entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"cost matrix must be square, got shape {a.shape}")
        if a.shape[0] == 0:
            raise ValueError("cost matrix must be nonempty")
        if not np.all(np.isfinite(a)):
            raise ValueError("cost entries must be finite")
        if np.any(a < 0):
            raise ValueError("cost entries must be nonnegative")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class TransportPlan:
    """Either a permutation (row_for_col) or a doubly stochastic matrix."""

    kind: str  # "permutation" | "doubly_stochastic"
    permutation: tuple[int, ...] | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.kind == "permutation":
            if self.permutation is None:
                raise ValueError("permutation plan needs a permutation")
            n = len(self.permutation)
            if sorted(self.permutation) != list(range(n)):
                raise ValueError("not a bijection on 0..n-1")
        elif self.kind == "doubly_stochastic":
            if self.matrix is None:
                raise ValueError("doubly stochastic plan needs a matrix")
            m = np.asarray(self.matrix, dtype=np.float64)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError("plan matrix must be square")
            if np.any(m < -1e-15):
                raise ValueError("plan matrix must be nonnegative")
            if np.max(np.abs(m.sum(axis=0) - 1.0)) > 1e-12 or np.max(
                np.abs(m.sum(axis=1) - 1.0)
            ) > 1e-12:
                raise ValueError("row and column sums must equal 1 within 1e-12")
            m.setflags(write=False)
            object.__setattr__(self, "matrix", m)
        else:
            raise ValueError(f"unknown plan kind {self.kind!r}")

    @property
    def n(self) -> int:
        if self.kind == "permutation":
            return len(self.permutation)
        return self.matrix.shape[0]


@dataclass(frozen=True)
class AssignmentResult:
    """Optimal pairing: column j is served by row row_for_col[j].

    cost is the normalized value (1/n) * sum of the selected entries.  The
    duals (u, v) certify optimality: entries[i][j] - u[i] - v[j] >= 0 up to
    float drift, with equality on the selected pairs.
    """

    row_for_col: tuple[int, ...]
    cost: float
    row_potentials: tuple[float, ...] = ()
    col_potentials: tuple[float, ...] = ()

    @property
    def n(self) -> int:
        return len(self.row_for_col)


def _assignment_core(cost, n):
    # Shortest augmenting path with potentials; column n is the virtual root.
    INF = np.inf
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    link = np.full(n + 1, -1, dtype=np.int64)
    minv = np.empty(n + 1)
    way = np.empty(n + 1, dtype=np.int64)
    used = np.empty(n + 1, dtype=np.bool_)
    for i in range(n):
        link[n] = i
        j0 = n
        for j in range(n + 1):
            minv[j] = INF
            way[j] = n
            used[j] = False
        while True:
            used[j0] = True
            i0 = link[j0]
            delta = INF
            j1 = -1
            for j in range(n):
                if not used[j]:
                    cur = cost[i0, j] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[link[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if link[j0] == -1:
                break
        while j0 != n:
            j1 = way[j0]
            link[j0] = link[j1]
            j0 = j1
    return link[:n], u[:n], v[:n]


if numba is not None:
    _assignment_core_fast = numba.njit(cache=True)(_assignment_core)
else:  # pragma: no cover - exercised only without numba
    _assignment_core_fast = _assignment_core


def assignment_min(C: CostMatrix) -> AssignmentResult:
    """Globally optimal assignment; ties resolved arbitrarily, cost unique."""
    n = C.n
    if n > _MAX_SOLVER_SIZE:
        raise SizeLimitError(f"solver supports n <= {_MAX_SOLVER_SIZE}, got {n}")
    link, u, v = _assignment_core_fast(C.entries, n)
    row_for_col = tuple(int(r) for r in link)
    cost = math.fsum(C.entries[row_for_col[j], j] for j in range(n)) / n
    return AssignmentResult(row_for_col, cost, tuple(u.tolist()), tuple(v.tolist()))


_PERM_CACHE: dict[int, np.ndarray] = {}


def _permutations_array(n: int) -> np.ndarray:
    if n not in _PERM_CACHE:
        import itertools

        _PERM_CACHE[n] = np.array(
            list(itertools.permutations(range(n))), dtype=np.int64
        )
    return _PERM_CACHE[n]


def bruteforce_min(C: CostMatrix) -> AssignmentResult:
    """Literal minimum over all n! pairings; the small-instance oracle."""
    n = C.n
    if n > _BRUTEFORCE_CAP:
        raise SizeLimitError(f"brute force is capped at n = {_BRUTEFORCE_CAP}")
    perms = _permutations_array(n)
    totals = C.entries[perms, np.arange(n)].sum(axis=1)
    best = perms[int(np.argmin(totals))]
    row_for_col = tuple(int(r) for r in best)
    cost = math.fsum(C.entries[row_for_col[j], j] for j in range(n)) / n
    return AssignmentResult(row_for_col, cost)


def plan_cost(C: CostMatrix, plan: TransportPlan) -> float:
    """(1/n) * sum over (i, j) of plan[i][j] * C[i][j]."""
    if plan.n != C.n:
        raise ValueError(f"plan size {plan.n} does not match cost size {C.n}")
    n = C.n
    if plan.kind == "permutation":
        return math.fsum(C.entries[plan.permutation[j], j] for j in range(n)) / n
    cells = (plan.matrix * C.entries).ravel()
    return math.fsum(cells.tolist()) / n


def _atom_sort_key(mu: EmpiricalMeasure) -> str:
    return repr([a.payload for a in mu.atoms])


def orbit_cost_matrix(
    mu: EmpiricalMeasure, nu: EmpiricalMeasure, tol: float
) -> CostMatrix:
    """Entries d(atom_i of mu, atom_j of nu) with per-entry error <= tol."""
    D = pairwise_distances(mu.system, mu.atoms, nu.atoms, tol)
    return CostMatrix(D, provenance=(mu.origin[0], nu.origin[0], mu.origin[1]))


def wasserstein_empirical(
    mu: EmpiricalMeasure, nu: EmpiricalMeasure, tol: float = 1e-9
) -> float:
    """Exact W1 between equal-size uniform empirical measures, within tol.

    The arguments are ordered canonically before solving, so the result is
    exactly symmetric in (mu, nu).
    """
    if mu.system.system_id != nu.system.system_id:
        raise UnsupportedCaseError(
            f"measures live on different spaces: {mu.system.system_id!r} "
            f"vs {nu.system.system_id!r}"
        )
    if mu.count != nu.count:
        raise UnsupportedCaseError(
            f"only equal-size uniform measures are supported "
            f"({mu.count} vs {nu.count} atoms)"
        )
    if _atom_sort_key(nu) < _atom_sort_key(mu):
        mu, nu = nu, mu
    C = orbit_cost_matrix(mu, nu, tol / mu.count)
    return assignment_min(C).cost


def cost_matrix_to_csv(C: CostMatrix, path: str) -> None:
    np.savetxt(path, C.entries, fmt="%.17g", delimiter=",")


def cost_matrix_from_csv(path: str) -> CostMatrix:
    data = np.loadtxt(path, delimiter=",", dtype=np.float64)
    if data.ndim == 0:
        data = data.reshape(1, 1)
    elif data.ndim == 1:
        data = data.reshape(1, -1)
    return CostMatrix(data)
