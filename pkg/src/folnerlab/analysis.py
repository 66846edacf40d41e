"""Pseudometric traces and finite-scale diagnostics.

Every limit-flavoured quantity here is estimated from a finite trace and
reported as evidence, never certified: the limsup estimate of a trace is the
maximum over the last half of the computed indices.  Thresholds (such as the
0.05 default for "consistent with unique ergodicity at this scale") are
reported alongside the raw values.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import FolnerlabError, UnsupportedCaseError
from .groups import FiniteSubset, FolnerSequence
from .measures import (
    EmpiricalMeasure,
    Observable,
    ObservableFamily,
    empirical_measure,
    integrate,
    observable_family,
    rho_distance,
)
from .systems import (
    GSystem,
    SystemPoint,
    circle_point,
    interval_point,
    metric,
    pair_point,
    shift_point,
    torus_point,
    union_point,
)
from .transport import assignment_min, orbit_cost_matrix, wasserstein_empirical
from .words import FlippedWord, PeriodicWord, RandomWord, SplicedWord

__all__ = [
    "PseudometricTrace",
    "ModulusEstimate",
    "GenericMeasureTrace",
    "CouplingBoundsReport",
    "UniqueErgodicityReport",
    "ContinuityReport",
    "UniformConvergenceReport",
    "wasserstein_trace",
    "mean_distance_trace",
    "orbit_permutation_distance",
    "coupling_bounds_check",
    "modulus_estimate",
    "near_pair_sampler",
    "unique_ergodicity_diagnostic",
    "generic_measure_trace",
    "measure_map_continuity_diagnostic",
    "uniform_convergence_diagnostic",
]

DEFAULT_UNIQUE_ERGODICITY_THRESHOLD = 0.05


def _last_half_max(values: Sequence[float]) -> float:
    return max(values[len(values) // 2 :])


def _check_indices(indices: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(n) for n in indices)
    if not out:
        raise ValueError("need at least one index")
    if any(n < 1 for n in out) or any(a >= b for a, b in zip(out, out[1:])):
        raise ValueError("indices must be positive and strictly increasing")
    return out


@dataclass(frozen=True)
class PseudometricTrace:
    """Finite trace n -> value of a pseudometric estimate."""

    kind: str  # "wasserstein" | "mean_distance"
    indices: tuple[int, ...]
    values: tuple[float, ...]

    @property
    def limsup_estimate(self) -> float:
        return _last_half_max(self.values)

    def csv_table(self) -> tuple[list[str], list[list[str]]]:
        header = ["n", "value"]
        rows = [[str(n), "%.12g" % v] for n, v in zip(self.indices, self.values)]
        return header, rows


def _mean_distance(sys: GSystem, mu: EmpiricalMeasure, nu: EmpiricalMeasure, tol: float) -> float:
    per_entry = tol / mu.count
    return (
        math.fsum(
            metric(sys, a, b, per_entry) for a, b in zip(mu.atoms, nu.atoms)
        )
        / mu.count
    )


def wasserstein_trace(
    sys: GSystem,
    x: SystemPoint,
    y: SystemPoint,
    seq: FolnerSequence,
    indices: Sequence[int],
    tol: float = 1e-9,
) -> PseudometricTrace:
    """values[k] = W(empirical(x, F_{n_k}), empirical(y, F_{n_k}))."""
    indices = _check_indices(indices)
    values = []
    for n in indices:
        F = seq.subset(n)
        mu = empirical_measure(sys, x, F)
        nu = empirical_measure(sys, y, F)
        values.append(wasserstein_empirical(mu, nu, tol))
    return PseudometricTrace("wasserstein", indices, tuple(values))


def mean_distance_trace(
    sys: GSystem,
    x: SystemPoint,
    y: SystemPoint,
    seq: FolnerSequence,
    indices: Sequence[int],
    tol: float = 1e-9,
) -> PseudometricTrace:
    """values[k] = (1/|F_{n_k}|) * sum over g of d(g*x, g*y)."""
    indices = _check_indices(indices)
    values = []
    for n in indices:
        F = seq.subset(n)
        mu = empirical_measure(sys, x, F)
        nu = empirical_measure(sys, y, F)
        values.append(_mean_distance(sys, mu, nu, tol))
    return PseudometricTrace("mean_distance", indices, tuple(values))


def orbit_permutation_distance(
    sys: GSystem, x: SystemPoint, y: SystemPoint, F: FiniteSubset, tol: float = 1e-9
) -> float:
    """min over pairings h of (1/|F|) * sum d(g*x, h(g)*y).

    By the doubly-stochastic extreme-point argument this equals the
    Wasserstein distance of the two empirical measures; the equality is
    checked here to 1e-10 as a solver self-test.
    """
    mu = empirical_measure(sys, x, F)
    nu = empirical_measure(sys, y, F)
    C = orbit_cost_matrix(mu, nu, tol / F.size)
    value = assignment_min(C).cost
    cross_check = wasserstein_empirical(mu, nu, tol)
    if abs(value - cross_check) > 1e-10:
        raise FolnerlabError(
            f"assignment/Wasserstein mismatch: {value!r} vs {cross_check!r}"
        )
    return value


# ---------------------------------------------------------------------------
# Coupling bounds (finite-scale core of the product-system equivalence)


@dataclass(frozen=True)
class CouplingBoundsRow:
    pair_index: int
    n: int
    w_product: float
    diagonal_mean: float
    w_to_diagonal: float
    base_mean: float

    @property
    def upper_violation(self) -> float:
        return self.w_product - self.diagonal_mean

    @property
    def lower_violation(self) -> float:
        return self.base_mean - self.w_to_diagonal


@dataclass(frozen=True)
class CouplingBoundsReport:
    """Checks, at each finite index, the two transport bounds that drive the
    product-system characterization of mean equicontinuity:

    upper: W(mu_{z1,F}, mu_{z2,F}) <= (1/|F|) sum d~(g z1, g z2)
           (the diagonal pairing is itself a transport plan);
    lower: W(mu_{(x,y),F}, mu_{(y,y),F}) >= (1/|F|) sum d(g x, g y)
           (any pairing against the diagonal moves mass at least that far).
    """

    rows: tuple[CouplingBoundsRow, ...]
    tolerance: float

    @property
    def max_violation_upper(self) -> float:
        return max((r.upper_violation for r in self.rows), default=0.0)

    @property
    def max_violation_lower(self) -> float:
        return max((r.lower_violation for r in self.rows), default=0.0)

    @property
    def max_violation(self) -> float:
        return max(self.max_violation_upper, self.max_violation_lower, 0.0)

    def to_json_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "max_violation": self.max_violation,
            "max_violation_upper": self.max_violation_upper,
            "max_violation_lower": self.max_violation_lower,
            "rows": [
                {
                    "pair": r.pair_index,
                    "n": r.n,
                    "w_product": r.w_product,
                    "diagonal_mean": r.diagonal_mean,
                    "w_to_diagonal": r.w_to_diagonal,
                    "base_mean": r.base_mean,
                }
                for r in self.rows
            ],
        }

    def csv_table(self) -> tuple[list[str], list[list[str]]]:
        header = [
            "pair",
            "n",
            "w_product",
            "diagonal_mean",
            "w_to_diagonal",
            "base_mean",
        ]
        rows = [
            [
                str(r.pair_index),
                str(r.n),
                "%.12g" % r.w_product,
                "%.12g" % r.diagonal_mean,
                "%.12g" % r.w_to_diagonal,
                "%.12g" % r.base_mean,
            ]
            for r in self.rows
        ]
        return header, rows


def coupling_bounds_check(
    sys: GSystem,
    pairs: Sequence[tuple[SystemPoint, SystemPoint]],
    seq: FolnerSequence,
    indices: Sequence[int],
    tol: float = 1e-9,
) -> CouplingBoundsReport:
    """Evaluate both coupling bounds on pairs of product-system points.

    sys must be a product system.  The diagonal mean is computed through the
    scalar metric, independently of the cost matrices fed to the solver, so
    the two sides of each inequality come from separate code paths.
    """
    if sys.space_kind != "product":
        raise UnsupportedCaseError("coupling_bounds_check needs a product system")
    base = sys.factors[0]
    indices = _check_indices(indices)
    rows = []
    for pi, (z1, z2) in enumerate(pairs):
        for n in indices:
            F = seq.subset(n)
            mu1 = empirical_measure(sys, z1, F)
            mu2 = empirical_measure(sys, z2, F)
            w_product = wasserstein_empirical(mu1, mu2, tol)
            diagonal_mean = _mean_distance(sys, mu1, mu2, tol)

            x1, y1 = z1.payload
            diag = pair_point(sys, y1, y1)
            mu_diag = empirical_measure(sys, diag, F)
            w_to_diagonal = wasserstein_empirical(mu1, mu_diag, tol)
            per_entry = tol / F.size
            base_mean = (
                math.fsum(
                    metric(base, a.payload[0], a.payload[1], per_entry)
                    for a in mu1.atoms
                )
                / F.size
            )
            rows.append(
                CouplingBoundsRow(
                    pi, n, w_product, diagonal_mean, w_to_diagonal, base_mean
                )
            )
    return CouplingBoundsReport(tuple(rows), tol)


# ---------------------------------------------------------------------------
# Equicontinuity moduli


@dataclass(frozen=True)
class ModulusEstimate:
    """Estimated sup of a pseudometric over sampled pairs with d(x,y) < delta.

    Pairs sampled for a smaller delta remain valid witnesses for every larger
    delta, so the sup is taken over the pooled sample; this makes sup_values
    nondecreasing by construction.
    """

    kind: str
    delta_grid: tuple[float, ...]
    sup_values: tuple[float, ...]
    sample_count: int

    def csv_table(self) -> tuple[list[str], list[list[str]]]:
        header = ["delta", "sup_value", "samples_per_delta"]
        rows = [
            [
                "%.12g" % d,
                "%.12g" % s,
                str(self.sample_count),
            ]
            for d, s in zip(self.delta_grid, self.sup_values)
        ]
        return header, rows


def near_pair_sampler(
    sys: GSystem, seed: int
) -> Callable[[float, int], list[tuple[SystemPoint, SystemPoint]]]:
    """Seeded sampler producing pairs at distance strictly below delta."""
    rng = random.Random(seed)
    kind = sys.space_kind

    def dyadic() -> Fraction:
        return Fraction(rng.getrandbits(48), 1 << 48)

    def sample(delta: float, count: int) -> list[tuple[SystemPoint, SystemPoint]]:
        if delta <= 0:
            raise ValueError("delta must be positive")
        pairs = []
        for _ in range(count):
            if kind == "circle":
                step = min(Fraction(delta), Fraction(1, 2))
                x = dyadic()
                offset = step * Fraction(rng.randint(-999, 999), 1000)
                pairs.append((circle_point(sys, x), circle_point(sys, x + offset)))
            elif kind == "torus":
                d = len(sys.param("alphas"))
                step = min(Fraction(delta) / d, Fraction(1, 2))
                xs = [dyadic() for _ in range(d)]
                ys = [
                    c + step * Fraction(rng.randint(-999, 999), 1000) for c in xs
                ]
                pairs.append((torus_point(sys, xs), torus_point(sys, ys)))
            elif kind == "interval":
                x = rng.random()
                y = min(1.0, max(0.0, x + (2.0 * rng.random() - 1.0) * delta * 0.999))
                pairs.append((interval_point(sys, x), interval_point(sys, y)))
            elif kind == "union":
                tag = rng.choice(("a", "b"))
                step = min(Fraction(delta) * 2, Fraction(1, 2))
                x = dyadic()
                offset = step * Fraction(rng.randint(-999, 999), 1000)
                pairs.append(
                    (union_point(sys, tag, x), union_point(sys, tag, x + offset))
                )
            elif kind == "shift":
                # positions with |p| >= c sit at enumeration index >= 2c-1,
                # so any disagreement confined there keeps d <= 2^(1-2c)
                c = 1
                while math.ldexp(1.0, 1 - 2 * c) >= delta:
                    c += 1
                base = RandomWord(rng.getrandbits(32))
                if rng.random() < 0.5:
                    other = SplicedWord(base, PeriodicWord((1,)), c + rng.randint(0, 3))
                else:
                    far = c + rng.randint(0, 8)
                    other = FlippedWord(base, {far})
                pairs.append((shift_point(sys, base), shift_point(sys, other)))
            else:
                raise UnsupportedCaseError(
                    f"no built-in near-pair sampler for {kind!r} spaces"
                )
        return pairs

    return sample


def modulus_estimate(
    sys: GSystem,
    kind: str,
    seq: FolnerSequence,
    delta_grid: Sequence[float],
    pair_sampler: Callable[[float, int], list[tuple[SystemPoint, SystemPoint]]],
    indices: Sequence[int],
    pairs_per_delta: int = 32,
    tol: float = 1e-9,
) -> ModulusEstimate:
    """Per-delta sup of trace limsup estimates over sampled close pairs."""
    if kind not in ("wasserstein", "mean_distance"):
        raise ValueError(f"unknown trace kind {kind!r}")
    deltas = sorted(float(d) for d in delta_grid)
    if not deltas:
        raise ValueError("delta grid must be nonempty")
    trace_fn = wasserstein_trace if kind == "wasserstein" else mean_distance_trace
    sup_values = []
    pooled_sup = 0.0
    for delta in deltas:
        for x, y in pair_sampler(delta, pairs_per_delta):
            trace = trace_fn(sys, x, y, seq, indices, tol)
            pooled_sup = max(pooled_sup, trace.limsup_estimate)
        sup_values.append(pooled_sup)
    return ModulusEstimate(kind, tuple(deltas), tuple(sup_values), pairs_per_delta)


# ---------------------------------------------------------------------------
# Unique ergodicity and generic measures


@dataclass(frozen=True)
class UniqueErgodicityReport:
    n: int
    threshold: float
    pair_rows: tuple[tuple[int, int, float, float], ...]  # (i, j, w, rho)
    max_w: float
    max_rho: float

    @property
    def consistent(self) -> bool:
        return max(self.max_w, self.max_rho) <= self.threshold

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "threshold": self.threshold,
            "max_w": self.max_w,
            "max_rho": self.max_rho,
            "consistent": self.consistent,
            "pairs": [
                {"i": i, "j": j, "w": w, "rho": r} for i, j, w, r in self.pair_rows
            ],
        }

    def csv_table(self) -> tuple[list[str], list[list[str]]]:
        header = ["i", "j", "w", "rho"]
        rows = [
            [str(i), str(j), "%.12g" % w, "%.12g" % r]
            for i, j, w, r in self.pair_rows
        ]
        return header, rows


def unique_ergodicity_diagnostic(
    sys: GSystem,
    points: Sequence[SystemPoint],
    seq: FolnerSequence,
    n: int,
    family: ObservableFamily | None = None,
    N: int = 40,
    threshold: float = DEFAULT_UNIQUE_ERGODICITY_THRESHOLD,
    tol: float = 1e-9,
) -> UniqueErgodicityReport:
    """Pairwise W and rho between empirical measures of the sampled points.

    Verdict "consistent with unique ergodicity at scale n" means every pair
    sits at or below the threshold in both metrics.
    """
    if not points:
        raise ValueError("need at least one sample point")
    if family is None:
        family = observable_family(sys)
    F = seq.subset(n)
    measures = [empirical_measure(sys, p, F) for p in points]
    rows = []
    max_w = 0.0
    max_rho = 0.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            w = wasserstein_empirical(measures[i], measures[j], tol)
            rho = rho_distance(measures[i], measures[j], family, N).value
            max_w = max(max_w, w)
            max_rho = max(max_rho, rho)
            rows.append((i, j, w, rho))
    return UniqueErgodicityReport(n, threshold, tuple(rows), max_w, max_rho)


@dataclass(frozen=True)
class GenericMeasureTrace:
    """Empirical measures along increasing indices with a Cauchy diagnostic.

    consecutive_rho[k] is the weak-* distance between the measures at
    indices[k] and indices[k+1]; cauchy_defect is its maximum over the last
    half of those gaps.
    """

    indices: tuple[int, ...]
    measures: tuple[EmpiricalMeasure, ...]
    consecutive_rho: tuple[float, ...]

    @property
    def cauchy_defect(self) -> float:
        return _last_half_max(self.consecutive_rho)

    def csv_table(self) -> tuple[list[str], list[list[str]]]:
        header = ["n_from", "n_to", "rho"]
        rows = [
            [str(a), str(b), "%.12g" % r]
            for a, b, r in zip(self.indices, self.indices[1:], self.consecutive_rho)
        ]
        return header, rows


def generic_measure_trace(
    sys: GSystem,
    x: SystemPoint,
    seq: FolnerSequence,
    indices: Sequence[int],
    family: ObservableFamily | None = None,
    N: int = 40,
) -> GenericMeasureTrace:
    indices = _check_indices(indices)
    if len(indices) < 2:
        raise ValueError("need at least two indices for a Cauchy diagnostic")
    if family is None:
        family = observable_family(sys)
    measures = tuple(
        empirical_measure(sys, x, seq.subset(n)) for n in indices
    )
    gaps = tuple(
        rho_distance(a, b, family, N).value
        for a, b in zip(measures, measures[1:])
    )
    return GenericMeasureTrace(indices, measures, gaps)


@dataclass(frozen=True)
class ContinuityReport:
    """rho between empirical measures of adjacent grid points at one scale."""

    n: int
    rows: tuple[tuple[int, float, float], ...]  # (i, d(x_i, x_{i+1}), rho)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "rows": [
                {"i": i, "distance": d, "rho": r} for i, d, r in self.rows
            ],
        }

    def csv_table(self) -> tuple[list[str], list[list[str]]]:
        header = ["i", "distance", "rho"]
        rows = [
            [str(i), "%.12g" % d, "%.12g" % r] for i, d, r in self.rows
        ]
        return header, rows


def measure_map_continuity_diagnostic(
    sys: GSystem,
    grid: Sequence[SystemPoint],
    seq: FolnerSequence,
    n: int,
    family: ObservableFamily | None = None,
    N: int = 40,
    tol: float = 1e-9,
) -> ContinuityReport:
    if family is None:
        family = observable_family(sys)
    F = seq.subset(n)
    measures = [empirical_measure(sys, p, F) for p in grid]
    rows = []
    for i in range(len(grid) - 1):
        d = metric(sys, grid[i], grid[i + 1], tol)
        r = rho_distance(measures[i], measures[i + 1], family, N).value
        rows.append((i, d, r))
    return ContinuityReport(n, tuple(rows))


@dataclass(frozen=True)
class UniformConvergenceReport:
    """sup over a grid of |A_{F_n} f - A_{F_m} f| for index pairs n < m."""

    rows: tuple[tuple[int, int, float], ...]  # (n, m, sup_gap)

    def to_json_dict(self) -> dict:
        return {
            "rows": [{"n": n, "m": m, "sup_gap": s} for n, m, s in self.rows]
        }

    def csv_table(self) -> tuple[list[str], list[list[str]]]:
        header = ["n", "m", "sup_gap"]
        rows = [[str(n), str(m), "%.12g" % s] for n, m, s in self.rows]
        return header, rows


def uniform_convergence_diagnostic(
    sys: GSystem,
    f: Observable | Callable[[SystemPoint], float],
    grid: Sequence[SystemPoint],
    seq: FolnerSequence,
    index_pairs: Sequence[tuple[int, int]],
) -> UniformConvergenceReport:
    if not grid:
        raise ValueError("grid must be nonempty")
    rows = []
    averages: dict[int, list[float]] = {}
    for n, m in index_pairs:
        if not 1 <= n < m:
            raise ValueError("index pairs must satisfy 1 <= n < m")
        for k in (n, m):
            if k not in averages:
                F = seq.subset(k)
                averages[k] = [
                    integrate(empirical_measure(sys, p, F), f) for p in grid
                ]
        sup_gap = max(
            abs(a - b) for a, b in zip(averages[n], averages[m])
        )
        rows.append((n, m, sup_gap))
    return UniformConvergenceReport(tuple(rows))
