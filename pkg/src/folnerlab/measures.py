"""Empirical measures along Folner sets and a weak-* metric on them.

The weak-* metric is built from a fixed, documented observable family per
space; comparing values produced with different families is meaningless and
never done here.

Families (1-based index i):
  circle    i = 2j-1 -> cos(2*pi*j*x), i = 2j -> sin(2*pi*j*x)
  torus     characters k in Z^d \\ {0} enumerated by sup-norm shell then
            lexicographically; character c gives cos at i = 2c+1 and sin at
            i = 2c+2
  shift     cylinder indicators: windows of radius r = 0, 1, ... centred at
            the origin, patterns in lexicographic order within each window
  interval  monomials x^i
  union     i = 1 the component-a indicator, then for j = 1, 2, ... the block
            (cos_j on a, sin_j on a, cos_j on b, sin_j on b), each vanishing
            off its component
  product   h(x, y) = f_i(x) * g_j(y) with factor indices (i, j) walked along
            anti-diagonals i + j = 1, 2, ... (index 0 means the constant 1)
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .errors import SystemMismatchError
from .groups import FiniteSubset
from .systems import GSystem, SystemPoint, atom_header, atom_row, orbit_sample, point_to_dict

__all__ = [
    "EmpiricalMeasure",
    "Observable",
    "ObservableFamily",
    "MeasureDistanceResult",
    "empirical_measure",
    "integrate",
    "birkhoff_average",
    "rho_distance",
    "observable_family",
    "measure_csv_table",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Uniform atomic measure on an orbit piece; weights are exactly 1/n."""

    system: GSystem
    atoms: tuple[SystemPoint, ...]
    origin: tuple[str, str]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ValueError("an empirical measure needs at least one atom")

    @property
    def count(self) -> int:
        return len(self.atoms)

    @property
    def weight(self) -> Fraction:
        return Fraction(1, self.count)


def empirical_measure(sys: GSystem, x: SystemPoint, F: FiniteSubset) -> EmpiricalMeasure:
    """The measure (1/|F|) * sum of point masses at g*x for g in F."""
    if F.size == 0:
        raise ValueError("Folner subset must be nonempty")
    atoms = tuple(orbit_sample(sys, x, F))
    origin = (
        json.dumps(point_to_dict(sys, x), sort_keys=True),
        f"{F.group_id} subset, size {F.size}",
    )
    return EmpiricalMeasure(sys, atoms, origin)


@dataclass(frozen=True)
class Observable:
    name: str
    sup_norm: float
    fn: Callable[[SystemPoint], float]

    def __call__(self, x: SystemPoint) -> float:
        return self.fn(x)


class ObservableFamily:
    """Lazily enumerated observables with certified sup-norm bounds."""

    def __init__(self, space_id: str, generator: Iterator[Observable]):
        self.space_id = space_id
        self._gen = generator
        self._cache: list[Observable] = []

    def observable(self, i: int) -> Observable:
        """The i-th observable, 1-based."""
        if i < 1:
            raise ValueError("observable indices are 1-based")
        while len(self._cache) < i:
            self._cache.append(next(self._gen))
        return self._cache[i - 1]


def _trig_pair_gen(value_of: Callable[[SystemPoint], float]) -> Iterator[Observable]:
    j = 1
    while True:
        w = _TWO_PI * j
        yield Observable(f"cos_{j}", 1.0, lambda p, w=w: math.cos(w * value_of(p)))
        yield Observable(f"sin_{j}", 1.0, lambda p, w=w: math.sin(w * value_of(p)))
        j += 1


def _lattice_characters(d: int) -> Iterator[tuple[int, ...]]:
    r = 1
    while True:
        shell = sorted(
            v
            for v in itertools.product(range(-r, r + 1), repeat=d)
            if max(abs(c) for c in v) == r
        )
        yield from shell
        r += 1


def _torus_gen(d: int) -> Iterator[Observable]:
    for k in _lattice_characters(d):
        label = ",".join(map(str, k))

        def phase(p: SystemPoint, k=k) -> float:
            return _TWO_PI * sum(ki * float(c) for ki, c in zip(k, p.payload))

        yield Observable(f"cos[{label}]", 1.0, lambda p, ph=phase: math.cos(ph(p)))
        yield Observable(f"sin[{label}]", 1.0, lambda p, ph=phase: math.sin(ph(p)))


def _cylinder_gen() -> Iterator[Observable]:
    r = 0
    while True:
        positions = tuple(range(-r, r + 1))
        for pattern in itertools.product((0, 1), repeat=len(positions)):

            def fn(p: SystemPoint, positions=positions, pattern=pattern) -> float:
                word = p.payload
                for pos, sym in zip(positions, pattern):
                    if word.symbol(pos) != sym:
                        return 0.0
                return 1.0

            label = "".join(map(str, pattern))
            yield Observable(f"cyl[{positions[0]}..{positions[-1]}={label}]", 1.0, fn)
        r += 1


def _monomial_gen() -> Iterator[Observable]:
    j = 1
    while True:
        yield Observable(f"pow_{j}", 1.0, lambda p, j=j: p.payload**j)
        j += 1


def _union_gen() -> Iterator[Observable]:
    yield Observable("component_a", 1.0, lambda p: 1.0 if p.payload[0] == "a" else 0.0)
    j = 1
    while True:
        w = _TWO_PI * j
        for tag in ("a", "b"):
            yield Observable(
                f"cos_{j}@{tag}",
                1.0,
                lambda p, w=w, tag=tag: math.cos(w * float(p.payload[1]))
                if p.payload[0] == tag
                else 0.0,
            )
            yield Observable(
                f"sin_{j}@{tag}",
                1.0,
                lambda p, w=w, tag=tag: math.sin(w * float(p.payload[1]))
                if p.payload[0] == tag
                else 0.0,
            )
        j += 1


def _product_gen(left: ObservableFamily, right: ObservableFamily) -> Iterator[Observable]:
    one = Observable("one", 1.0, lambda p: 1.0)

    def factor(family: ObservableFamily, idx: int) -> Observable:
        return one if idx == 0 else family.observable(idx)

    s = 1
    while True:
        for i in range(s + 1):
            f = factor(left, i)
            g = factor(right, s - i)

            def fn(p: SystemPoint, f=f, g=g) -> float:
                return f.fn(p.payload[0]) * g.fn(p.payload[1])

            yield Observable(
                f"{f.name}*{g.name}", f.sup_norm * g.sup_norm, fn
            )
        s += 1


def observable_family(sys: GSystem) -> ObservableFamily:
    """The fixed dense family for this system's space."""
    kind = sys.space_kind
    if kind == "circle":
        gen = _trig_pair_gen(lambda p: float(p.payload))
    elif kind == "torus":
        gen = _torus_gen(len(sys.param("alphas")))
    elif kind == "shift":
        gen = _cylinder_gen()
    elif kind == "interval":
        gen = _monomial_gen()
    elif kind == "union":
        gen = _union_gen()
    elif kind == "product":
        gen = _product_gen(
            observable_family(sys.factors[0]), observable_family(sys.factors[1])
        )
    else:
        raise ValueError(f"unknown space kind {kind!r}")
    return ObservableFamily(sys.system_id, gen)


def integrate(
    mu: EmpiricalMeasure, f: Observable | Callable[[SystemPoint], float], tol: float = 1e-9
) -> float:
    """(1/n) * sum of f over the atoms, with compensated summation.

    The summation itself is correctly rounded (fsum); tol is the budget the
    caller grants for the per-atom evaluations.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    fn = f.fn if isinstance(f, Observable) else f
    return math.fsum(fn(a) for a in mu.atoms) / mu.count


def birkhoff_average(
    sys: GSystem,
    f: Observable | Callable[[SystemPoint], float],
    x: SystemPoint,
    F: FiniteSubset,
    tol: float = 1e-9,
) -> float:
    """(1/|F|) * sum over g in F of f(g*x)."""
    return integrate(empirical_measure(sys, x, F), f, tol)


@dataclass(frozen=True)
class MeasureDistanceResult:
    value: float
    tail_bound: float
    terms_used: int


def rho_distance(
    mu: EmpiricalMeasure,
    nu: EmpiricalMeasure,
    family: ObservableFamily | None = None,
    N: int = 40,
) -> MeasureDistanceResult:
    """Partial sum of sum_i |int f_i dmu - int f_i dnu| / (2^i (||f_i|| + 1)).

    The returned value is a lower bound for the full series; value plus
    tail_bound = 2^(1-N) is an upper bound.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if mu.system.system_id != nu.system.system_id:
        raise SystemMismatchError(
            f"measures live on different spaces: {mu.system.system_id!r} "
            f"vs {nu.system.system_id!r}"
        )
    if family is None:
        family = observable_family(mu.system)
    terms = []
    for i in range(1, N + 1):
        f = family.observable(i)
        gap = abs(integrate(mu, f) - integrate(nu, f))
        terms.append(gap / (math.ldexp(1.0, i) * (f.sup_norm + 1.0)))
    return MeasureDistanceResult(math.fsum(terms), math.ldexp(1.0, 1 - N), N)


def measure_csv_table(mu: EmpiricalMeasure) -> tuple[list[str], list[list[str]]]:
    """Header and rows (atom coordinates plus exact weight) for CSV export."""
    header = atom_header(mu.system) + ["weight"]
    weight = str(mu.weight)
    rows = [atom_row(mu.system, a) + [weight] for a in mu.atoms]
    return header, rows
