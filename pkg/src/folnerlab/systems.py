"""Compact metric spaces with group actions, and a catalog of examples.

Payload conventions per space kind:
  circle    exact Fraction in [0, 1), arc metric min(|u-v|, 1-|u-v|)
  torus     tuple of Fractions, sum of arc metrics per coordinate
  shift     a words.Word over {0,1} indexed by the integers
  interval  float in [0, 1], absolute-difference metric
  union     (component tag, Fraction); intra-component arc metric halved,
            cross-component distance exactly 1
  product   pair of factor points, sum metric

Rotation numbers are exact rationals.  A parameter standing in for an
irrational is a "surrogate": a rational approximant with denominator above
1e9, flagged on the built system.  At this scale every periodicity statement
is approximate and the workbench never claims otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, GroupMismatchError, SystemMismatchError
from .groups import FiniteSubset, GroupElement, group_rank
from .rationals import GOLDEN_ALPHA, SURROGATE_DENOMINATOR, parse_rational
from .words import Word, shift_word, word_from_dict, word_to_dict

__all__ = [
    "SystemPoint",
    "GSystem",
    "SystemCatalogEntry",
    "ExpectedProperties",
    "GOLDEN_ALPHA",
    "SURROGATE_DENOMINATOR",
    "rotation",
    "zd_rotation",
    "heisenberg_rotation",
    "full_shift",
    "two_rotations",
    "interval_square",
    "product_system",
    "act",
    "metric",
    "orbit_sample",
    "pairwise_distances",
    "paired_distances",
    "circle_point",
    "torus_point",
    "shift_point",
    "interval_point",
    "union_point",
    "pair_point",
    "parse_point",
    "point_to_dict",
    "atom_row",
    "atom_header",
    "catalog",
    "build_system",
    "parse_rational",
]

@dataclass(frozen=True)
class SystemPoint:
    system_id: str
    payload: object

    def __repr__(self) -> str:
        return f"SystemPoint({self.system_id}, {self.payload!r})"


@dataclass(frozen=True)
class GSystem:
    system_id: str
    group_id: str
    space_kind: str
    params: tuple[tuple[str, object], ...]
    diameter_bound: float
    factors: tuple["GSystem", ...] = ()
    flags: frozenset[str] = frozenset()

    def param(self, name: str) -> object:
        for key, value in self.params:
            if key == name:
                return value
        raise KeyError(name)

    def act(self, g: GroupElement, x: SystemPoint) -> SystemPoint:
        return act(self, g, x)

    def metric(self, x: SystemPoint, y: SystemPoint, tol: float = 1e-9) -> float:
        return metric(self, x, y, tol)


# ---------------------------------------------------------------------------
# Point constructors


def _check_point(sys: GSystem, x: SystemPoint) -> None:
    if x.system_id != sys.system_id:
        raise SystemMismatchError(
            f"point belongs to {x.system_id!r}, not {sys.system_id!r}"
        )


def _check_group(sys: GSystem, g: GroupElement) -> None:
    if g.group_id != sys.group_id:
        raise GroupMismatchError(
            f"system {sys.system_id!r} is acted on by {sys.group_id!r}, "
            f"not {g.group_id!r}"
        )


def circle_point(sys: GSystem, value: object) -> SystemPoint:
    if sys.space_kind != "circle":
        raise SystemMismatchError(f"{sys.system_id!r} is not a circle system")
    return SystemPoint(sys.system_id, parse_rational(value) % 1)


def torus_point(sys: GSystem, values: Sequence[object]) -> SystemPoint:
    if sys.space_kind != "torus":
        raise SystemMismatchError(f"{sys.system_id!r} is not a torus system")
    coords = tuple(parse_rational(v) % 1 for v in values)
    if len(coords) != len(sys.param("alphas")):
        raise ValueError("coordinate count does not match the torus rank")
    return SystemPoint(sys.system_id, coords)


def shift_point(sys: GSystem, word: Word) -> SystemPoint:
    if sys.space_kind != "shift":
        raise SystemMismatchError(f"{sys.system_id!r} is not a shift system")
    return SystemPoint(sys.system_id, word)


def interval_point(sys: GSystem, value: float) -> SystemPoint:
    if sys.space_kind != "interval":
        raise SystemMismatchError(f"{sys.system_id!r} is not an interval system")
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError("interval coordinate must lie in [0, 1]")
    return SystemPoint(sys.system_id, value)


def union_point(sys: GSystem, component: str, value: object) -> SystemPoint:
    if sys.space_kind != "union":
        raise SystemMismatchError(f"{sys.system_id!r} is not a union system")
    if component not in ("a", "b"):
        raise ValueError("component must be 'a' or 'b'")
    return SystemPoint(sys.system_id, (component, parse_rational(value) % 1))


def pair_point(sys: GSystem, x: SystemPoint, y: SystemPoint) -> SystemPoint:
    if sys.space_kind != "product":
        raise SystemMismatchError(f"{sys.system_id!r} is not a product system")
    _check_point(sys.factors[0], x)
    _check_point(sys.factors[1], y)
    return SystemPoint(sys.system_id, (x, y))


# ---------------------------------------------------------------------------
# Action


def _interval_power(value: float, n: int) -> float:
    # x -> x^2 iterated n times (or its inverse sqrt for n < 0); the fixed
    # points 0.0 and 1.0 are exact, so iteration can stop there.  Once a
    # trajectory underflows into a fixed point it stays there, so composing
    # opposite-sign powers across calls is only approximate near 0 and 1.
    v = value
    if n >= 0:
        for _ in range(n):
            if v == 0.0 or v == 1.0:
                break
            v = v * v
    else:
        for _ in range(-n):
            if v == 0.0 or v == 1.0:
                break
            v = math.sqrt(v)
    return v


def act(sys: GSystem, g: GroupElement, x: SystemPoint) -> SystemPoint:
    _check_group(sys, g)
    _check_point(sys, x)
    kind = sys.space_kind
    if kind == "circle":
        alphas = sys.param("alphas")
        offset = sum(
            (gi * ai for gi, ai in zip(g.coords, alphas)), start=Fraction(0)
        )
        return SystemPoint(sys.system_id, (x.payload + offset) % 1)
    if kind == "torus":
        alphas = sys.param("alphas")
        u = tuple(
            (c + gi * ai) % 1 for c, gi, ai in zip(x.payload, g.coords, alphas)
        )
        return SystemPoint(sys.system_id, u)
    if kind == "shift":
        return SystemPoint(sys.system_id, shift_word(x.payload, g.coords[0]))
    if kind == "interval":
        return SystemPoint(sys.system_id, _interval_power(x.payload, g.coords[0]))
    if kind == "union":
        tag, value = x.payload
        alpha = sys.param("alpha_a") if tag == "a" else sys.param("alpha_b")
        return SystemPoint(sys.system_id, (tag, (value + g.coords[0] * alpha) % 1))
    if kind == "product":
        p, q = x.payload
        return SystemPoint(
            sys.system_id, (act(sys.factors[0], g, p), act(sys.factors[1], g, q))
        )
    raise ValueError(f"unknown space kind {kind!r}")


def orbit_sample(sys: GSystem, x: SystemPoint, F: FiniteSubset) -> list[SystemPoint]:
    """The orbit piece [g*x for g in F], in F's enumeration order."""
    _check_point(sys, x)
    if F.size and F.elements[0].group_id != sys.group_id:
        raise GroupMismatchError(
            f"Folner subset over {F.group_id!r} cannot act on {sys.system_id!r}"
        )
    return [act(sys, g, x) for g in F]


# ---------------------------------------------------------------------------
# Metric


def _arc(u: float, v: float) -> float:
    d = abs(u - v)
    return min(d, 1.0 - d)


def _truncation_depth(tol: float) -> int:
    # smallest K with 2^{-K} <= tol (tail of the symbol-weight series)
    K = 1
    while math.ldexp(1.0, -K) > tol and K < 1080:
        K += 1
    return K


def _z_enumeration(K: int) -> list[int]:
    """The fixed enumeration 0, 1, -1, 2, -2, ... of the integers."""
    out = []
    for i in range(K):
        half, odd = divmod(i + 1, 2)
        out.append(half if odd else -half)
    return out


def metric(sys: GSystem, x: SystemPoint, y: SystemPoint, tol: float = 1e-9) -> float:
    """Distance with absolute error at most tol.

    Algebraic payloads are exact to float roundoff (far below any sensible
    tol); for shift systems the tol picks the symbol-comparison depth.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    _check_point(sys, x)
    _check_point(sys, y)
    kind = sys.space_kind
    if kind == "circle":
        return _arc(float(x.payload), float(y.payload))
    if kind == "torus":
        s = 0.0
        for u, v in zip(x.payload, y.payload):
            s += _arc(float(u), float(v))
        return s
    if kind == "shift":
        K = _truncation_depth(tol)
        u, v = x.payload, y.payload
        s = 0.0
        for i, pos in enumerate(_z_enumeration(K)):
            if u.symbol(pos) != v.symbol(pos):
                s += math.ldexp(1.0, -i - 1)
        return s
    if kind == "interval":
        return abs(x.payload - y.payload)
    if kind == "union":
        tag_x, u = x.payload
        tag_y, v = y.payload
        if tag_x != tag_y:
            return 1.0
        return _arc(float(u), float(v)) * 0.5
    if kind == "product":
        p1, q1 = x.payload
        p2, q2 = y.payload
        half = tol / 2.0
        return metric(sys.factors[0], p1, p2, half) + metric(
            sys.factors[1], q1, q2, half
        )
    raise ValueError(f"unknown space kind {kind!r}")


def _float_coords(sys: GSystem, points: Sequence[SystemPoint]) -> np.ndarray:
    kind = sys.space_kind
    if kind == "circle":
        return np.array([float(p.payload) for p in points], dtype=np.float64)
    if kind == "torus":
        return np.array(
            [[float(c) for c in p.payload] for p in points], dtype=np.float64
        )
    if kind == "interval":
        return np.array([p.payload for p in points], dtype=np.float64)
    raise ValueError(kind)


def _symbol_matrix(points: Sequence[SystemPoint], positions: list[int]) -> np.ndarray:
    return np.array(
        [[p.payload.symbol(pos) for pos in positions] for p in points], dtype=np.int8
    )


def _arc_matrix(U: np.ndarray, V: np.ndarray) -> np.ndarray:
    D = np.abs(U[:, None] - V[None, :])
    return np.minimum(D, 1.0 - D)


def pairwise_distances(
    sys: GSystem,
    xs: Sequence[SystemPoint],
    ys: Sequence[SystemPoint],
    tol: float = 1e-9,
) -> np.ndarray:
    """Matrix D[i, j] = metric(sys, xs[i], ys[j], tol), vectorized.

    Agrees with the scalar metric bit for bit: both paths use the same
    floating-point formulas in the same order.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    for p in xs:
        _check_point(sys, p)
    for p in ys:
        _check_point(sys, p)
    kind = sys.space_kind
    if kind == "circle":
        return _arc_matrix(_float_coords(sys, xs), _float_coords(sys, ys))
    if kind == "torus":
        U = _float_coords(sys, xs)
        V = _float_coords(sys, ys)
        D = _arc_matrix(U[:, 0], V[:, 0])
        for c in range(1, U.shape[1]):
            D = D + _arc_matrix(U[:, c], V[:, c])
        return D
    if kind == "interval":
        U = _float_coords(sys, xs)
        V = _float_coords(sys, ys)
        return np.abs(U[:, None] - V[None, :])
    if kind == "union":
        tags_x = np.array([0 if p.payload[0] == "a" else 1 for p in xs])
        tags_y = np.array([0 if p.payload[0] == "a" else 1 for p in ys])
        U = np.array([float(p.payload[1]) for p in xs], dtype=np.float64)
        V = np.array([float(p.payload[1]) for p in ys], dtype=np.float64)
        D = _arc_matrix(U, V) * 0.5
        return np.where(tags_x[:, None] != tags_y[None, :], 1.0, D)
    if kind == "shift":
        K = _truncation_depth(tol)
        positions = _z_enumeration(K)
        SU = _symbol_matrix(xs, positions)
        SV = _symbol_matrix(ys, positions)
        D = np.zeros((len(xs), len(ys)), dtype=np.float64)
        for i in range(K):
            weight = math.ldexp(1.0, -i - 1)
            D += weight * (SU[:, i, None] != SV[None, :, i])
        return D
    if kind == "product":
        xs1, xs2 = [p.payload[0] for p in xs], [p.payload[1] for p in xs]
        ys1, ys2 = [p.payload[0] for p in ys], [p.payload[1] for p in ys]
        half = tol / 2.0
        return pairwise_distances(sys.factors[0], xs1, ys1, half) + pairwise_distances(
            sys.factors[1], xs2, ys2, half
        )
    raise ValueError(f"unknown space kind {kind!r}")


def paired_distances(
    sys: GSystem,
    xs: Sequence[SystemPoint],
    ys: Sequence[SystemPoint],
    tol: float = 1e-9,
) -> np.ndarray:
    """Vector of metric(xs[i], ys[i], tol); the diagonal counterpart."""
    if len(xs) != len(ys):
        raise ValueError("paired_distances needs equally long sequences")
    if tol <= 0:
        raise ValueError("tol must be positive")
    for p in xs:
        _check_point(sys, p)
    for p in ys:
        _check_point(sys, p)
    kind = sys.space_kind
    if kind == "circle":
        U = _float_coords(sys, xs)
        V = _float_coords(sys, ys)
        D = np.abs(U - V)
        return np.minimum(D, 1.0 - D)
    if kind == "torus":
        U = _float_coords(sys, xs)
        V = _float_coords(sys, ys)
        D = np.abs(U[:, 0] - V[:, 0])
        D = np.minimum(D, 1.0 - D)
        for c in range(1, U.shape[1]):
            A = np.abs(U[:, c] - V[:, c])
            D = D + np.minimum(A, 1.0 - A)
        return D
    if kind == "interval":
        return np.abs(_float_coords(sys, xs) - _float_coords(sys, ys))
    if kind == "union":
        tags_x = np.array([0 if p.payload[0] == "a" else 1 for p in xs])
        tags_y = np.array([0 if p.payload[0] == "a" else 1 for p in ys])
        U = np.array([float(p.payload[1]) for p in xs], dtype=np.float64)
        V = np.array([float(p.payload[1]) for p in ys], dtype=np.float64)
        A = np.abs(U - V)
        D = np.minimum(A, 1.0 - A) * 0.5
        return np.where(tags_x != tags_y, 1.0, D)
    if kind == "shift":
        K = _truncation_depth(tol)
        positions = _z_enumeration(K)
        SU = _symbol_matrix(xs, positions)
        SV = _symbol_matrix(ys, positions)
        D = np.zeros(len(xs), dtype=np.float64)
        for i in range(K):
            D += math.ldexp(1.0, -i - 1) * (SU[:, i] != SV[:, i])
        return D
    if kind == "product":
        half = tol / 2.0
        return paired_distances(
            sys.factors[0], [p.payload[0] for p in xs], [p.payload[0] for p in ys], half
        ) + paired_distances(
            sys.factors[1], [p.payload[1] for p in xs], [p.payload[1] for p in ys], half
        )
    raise ValueError(f"unknown space kind {kind!r}")


# ---------------------------------------------------------------------------
# Catalog


def _surrogate_flags(*values: Fraction) -> frozenset[str]:
    if all(v.denominator > SURROGATE_DENOMINATOR for v in values):
        return frozenset({"irrational_surrogate"})
    return frozenset()


def rotation(alpha: object = "golden") -> GSystem:
    a = parse_rational(alpha) % 1
    if a == 0:
        raise ConfigError("rotation number must be nonzero mod 1", "alpha")
    return GSystem(
        system_id=f"rotation(alpha={a})",
        group_id="Z",
        space_kind="circle",
        params=(("alphas", (a,)),),
        diameter_bound=0.5,
        flags=_surrogate_flags(a),
    )


def zd_rotation(alphas: Sequence[object]) -> GSystem:
    parsed = tuple(parse_rational(a) % 1 for a in alphas)
    if len(parsed) < 2:
        raise ConfigError("need at least two rotation numbers", "alphas")
    group_id = f"Z^{len(parsed)}"
    label = ",".join(str(a) for a in parsed)
    return GSystem(
        system_id=f"zd_rotation(alphas={label})",
        group_id=group_id,
        space_kind="circle",
        params=(("alphas", parsed),),
        diameter_bound=0.5,
        flags=_surrogate_flags(*parsed),
    )


def heisenberg_rotation(alpha: object = "golden", beta: object = "golden") -> GSystem:
    a = parse_rational(alpha) % 1
    b = parse_rational(beta) % 1
    return GSystem(
        system_id=f"heisenberg_rotation(alpha={a},beta={b})",
        group_id="heisenberg",
        space_kind="torus",
        params=(("alphas", (a, b)),),
        diameter_bound=1.0,
        flags=_surrogate_flags(a, b),
    )


def full_shift() -> GSystem:
    return GSystem(
        system_id="full_shift()",
        group_id="Z",
        space_kind="shift",
        params=(),
        diameter_bound=1.0,
    )


def two_rotations(alpha_a: object = "golden", alpha_b: object = "golden") -> GSystem:
    a = parse_rational(alpha_a) % 1
    b = parse_rational(alpha_b) % 1
    return GSystem(
        system_id=f"two_rotations(alpha_a={a},alpha_b={b})",
        group_id="Z",
        space_kind="union",
        params=(("alpha_a", a), ("alpha_b", b)),
        diameter_bound=1.0,
        flags=_surrogate_flags(a, b),
    )


def interval_square() -> GSystem:
    return GSystem(
        system_id="interval_square()",
        group_id="Z",
        space_kind="interval",
        params=(),
        diameter_bound=1.0,
    )


def product_system(sys: GSystem) -> GSystem:
    """The product of a system with itself; diagonal action, sum metric."""
    return GSystem(
        system_id=f"product({sys.system_id})",
        group_id=sys.group_id,
        space_kind="product",
        params=(),
        diameter_bound=2.0 * sys.diameter_bound,
        factors=(sys, sys),
        flags=sys.flags,
    )


@dataclass(frozen=True)
class ExpectedProperties:
    """Documented expectations for a catalog entry (at surrogate scale)."""

    uniquely_ergodic: bool
    mean_equicontinuous: bool
    weak_mean_equicontinuous: bool
    full_measure_center: bool


@dataclass(frozen=True)
class SystemCatalogEntry:
    name: str
    summary: str
    param_schema: tuple[tuple[str, str], ...]
    expected: ExpectedProperties
    build: Callable[..., GSystem] = field(compare=False)


_CATALOG: dict[str, SystemCatalogEntry] = {}


def _register(entry: SystemCatalogEntry) -> None:
    _CATALOG[entry.name] = entry


_register(
    SystemCatalogEntry(
        name="rotation",
        summary="circle rotation x -> x + alpha under the integers",
        param_schema=(("alpha", "rational; 'golden' for the built-in surrogate"),),
        expected=ExpectedProperties(True, True, True, True),
        build=lambda params: rotation(params.get("alpha", "golden")),
    )
)
_register(
    SystemCatalogEntry(
        name="zd_rotation",
        summary="Z^d translating the circle: g maps x to x + sum g_i alpha_i",
        param_schema=(("alphas", "list of rationals, length d >= 2"),),
        expected=ExpectedProperties(True, True, True, True),
        build=lambda params: zd_rotation(params["alphas"]),
    )
)
_register(
    SystemCatalogEntry(
        name="heisenberg_rotation",
        summary="Heisenberg group translating the 2-torus through (a, b); "
        "exercises nonabelian Folner bookkeeping on an equicontinuous space",
        param_schema=(("alpha", "rational"), ("beta", "rational")),
        expected=ExpectedProperties(True, True, True, True),
        build=lambda params: heisenberg_rotation(
            params.get("alpha", "golden"), params.get("beta", "golden")
        ),
    )
)
_register(
    SystemCatalogEntry(
        name="full_shift",
        summary="the shift on {0,1}^Z; points are rule-backed words",
        param_schema=(),
        expected=ExpectedProperties(False, False, False, True),
        build=lambda params: full_shift(),
    )
)
_register(
    SystemCatalogEntry(
        name="two_rotations",
        summary="disjoint union of two circle rotations; cross distance 1, "
        "intra distance at most 1/4",
        param_schema=(
            ("alpha_a", "rational for component a"),
            ("alpha_b", "rational for component b"),
        ),
        expected=ExpectedProperties(False, True, True, True),
        build=lambda params: two_rotations(
            params.get("alpha_a", "golden"), params.get("alpha_b", "golden")
        ),
    )
)
_register(
    SystemCatalogEntry(
        name="interval_square",
        summary="x -> x^2 on [0, 1] extended to an invertible integer action; "
        "fixed points 0 and 1, measure center strictly smaller than the space",
        param_schema=(),
        expected=ExpectedProperties(False, False, False, False),
        build=lambda params: interval_square(),
    )
)


def catalog() -> dict[str, SystemCatalogEntry]:
    return dict(_CATALOG)


def build_system(name: str, params: dict | None = None) -> GSystem:
    if name not in _CATALOG:
        known = ", ".join(sorted(_CATALOG))
        raise ConfigError(f"unknown system {name!r}; known systems: {known}")
    entry = _CATALOG[name]
    params = dict(params or {})
    allowed = {key for key, _ in entry.param_schema}
    for key in params:
        if key not in allowed:
            raise ConfigError(f"unknown parameter {key!r} for system {name!r}", key)
    return entry.build(params)


# ---------------------------------------------------------------------------
# Point (de)serialization


def parse_point(sys: GSystem, spec: object) -> SystemPoint:
    """Build a point from a JSON-style description."""
    kind = sys.space_kind
    if kind == "circle":
        if isinstance(spec, dict):
            spec = spec.get("value")
        return circle_point(sys, spec)
    if kind == "torus":
        if isinstance(spec, dict):
            spec = spec.get("values")
        return torus_point(sys, spec)
    if kind == "interval":
        if isinstance(spec, dict):
            spec = spec.get("value")
        return interval_point(sys, float(spec))
    if kind == "union":
        if not isinstance(spec, dict):
            raise ConfigError("union points need {'component', 'value'}")
        return union_point(sys, spec["component"], spec["value"])
    if kind == "shift":
        if not isinstance(spec, dict):
            raise ConfigError("shift points need a word description")
        return shift_point(sys, word_from_dict(spec))
    if kind == "product":
        if not isinstance(spec, dict) or "left" not in spec or "right" not in spec:
            raise ConfigError("product points need {'left', 'right'}")
        return pair_point(
            sys,
            parse_point(sys.factors[0], spec["left"]),
            parse_point(sys.factors[1], spec["right"]),
        )
    raise ValueError(f"unknown space kind {kind!r}")


def point_to_dict(sys: GSystem, x: SystemPoint) -> object:
    kind = sys.space_kind
    if kind == "circle":
        return {"value": str(x.payload)}
    if kind == "torus":
        return {"values": [str(c) for c in x.payload]}
    if kind == "interval":
        return {"value": x.payload}
    if kind == "union":
        return {"component": x.payload[0], "value": str(x.payload[1])}
    if kind == "shift":
        return word_to_dict(x.payload)
    if kind == "product":
        return {
            "left": point_to_dict(sys.factors[0], x.payload[0]),
            "right": point_to_dict(sys.factors[1], x.payload[1]),
        }
    raise ValueError(f"unknown space kind {kind!r}")


def atom_header(sys: GSystem) -> list[str]:
    """CSV column names for one atom of this system."""
    kind = sys.space_kind
    if kind == "circle":
        return ["x"]
    if kind == "torus":
        return [f"x{i}" for i in range(len(sys.param("alphas")))]
    if kind == "interval":
        return ["x"]
    if kind == "union":
        return ["component", "x"]
    if kind == "shift":
        return ["word"]
    if kind == "product":
        left = [f"left_{c}" for c in atom_header(sys.factors[0])]
        right = [f"right_{c}" for c in atom_header(sys.factors[1])]
        return left + right
    raise ValueError(f"unknown space kind {kind!r}")


def atom_row(sys: GSystem, x: SystemPoint) -> list[str]:
    """CSV cells for one atom, matching atom_header."""
    kind = sys.space_kind
    if kind == "circle":
        return ["%.12g" % float(x.payload)]
    if kind == "torus":
        return ["%.12g" % float(c) for c in x.payload]
    if kind == "interval":
        return ["%.12g" % x.payload]
    if kind == "union":
        return [x.payload[0], "%.12g" % float(x.payload[1])]
    if kind == "shift":
        return [json.dumps(word_to_dict(x.payload), sort_keys=True)]
    if kind == "product":
        return atom_row(sys.factors[0], x.payload[0]) + atom_row(
            sys.factors[1], x.payload[1]
        )
    raise ValueError(f"unknown space kind {kind!r}")
