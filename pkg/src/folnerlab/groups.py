"""Group arithmetic and Folner-set machinery.

Built-in groups: the integers ``Z``, the lattices ``Z^d`` (tag ``"Z^2"``,
``"Z^3"``, ...) and the discrete Heisenberg group (tag ``"heisenberg"``,
coordinates (a, b, c) with law (a,b,c)*(a',b',c') = (a+a', b+b', c+c'+a*b')).

All counting quantities (averaging-set defects, temperedness ratios) are
exact rationals; coordinates are arbitrary-precision integers, so nothing
can overflow silently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import GroupMismatchError, SearchBudgetExceededError, UnsupportedCaseError

__all__ = [
    "GroupElement",
    "FiniteSubset",
    "FolnerSequence",
    "TemperednessReport",
    "group_rank",
    "identity",
    "element",
    "multiply",
    "inverse",
    "translate_left",
    "translate_right",
    "invert_subset",
    "product_subset",
    "symmetric_difference_size",
    "folner_defect_left",
    "folner_defect_right",
    "z_intervals",
    "zd_boxes",
    "heisenberg_boxes",
    "explicit_sequence",
    "temperedness_report",
    "extract_tempered_subsequence",
    "sequence_to_dict",
    "sequence_from_dict",
]

_HEISENBERG = "heisenberg"

# Keys for set cardinality are packed into int64; stay clear of the edge.
_PACK_LIMIT = 1 << 62
_CHUNK_CELLS = 4_000_000


def group_rank(group_id: str) -> int:
    """Coordinate tuple length for a group tag."""
    if group_id == "Z":
        return 1
    if group_id == _HEISENBERG:
        return 3
    if group_id.startswith("Z^"):
        d = int(group_id[2:])
        if d < 2:
            raise ValueError(f"bad lattice tag {group_id!r}; use 'Z' for d=1")
        return d
    raise ValueError(f"unknown group {group_id!r}")


@dataclass(frozen=True)
class GroupElement:
    group_id: str
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != group_rank(self.group_id):
            raise ValueError(
                f"{self.group_id} element needs {group_rank(self.group_id)} "
                f"coordinates, got {len(self.coords)}"
            )


def element(group_id: str, *coords: int) -> GroupElement:
    return GroupElement(group_id, tuple(int(c) for c in coords))


def identity(group_id: str) -> GroupElement:
    return GroupElement(group_id, (0,) * group_rank(group_id))


def _check_same_group(a: str, b: str) -> None:
    if a != b:
        raise GroupMismatchError(f"group mismatch: {a!r} vs {b!r}")


def _mul_coords(group_id: str, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if group_id == _HEISENBERG:
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1])
    return tuple(x + y for x, y in zip(a, b))


def _inv_coords(group_id: str, a: tuple[int, ...]) -> tuple[int, ...]:
    if group_id == _HEISENBERG:
        return (-a[0], -a[1], -a[2] + a[0] * a[1])
    return tuple(-x for x in a)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    _check_same_group(a.group_id, b.group_id)
    return GroupElement(a.group_id, _mul_coords(a.group_id, a.coords, b.coords))


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(g.group_id, _inv_coords(g.group_id, g.coords))


@dataclass(frozen=True)
class FiniteSubset:
    """A finite subset of a group with a fixed enumeration order."""

    group_id: str
    elements: tuple[GroupElement, ...]

    def __post_init__(self) -> None:
        seen = set()
        for g in self.elements:
            _check_same_group(self.group_id, g.group_id)
            if g.coords in seen:
                raise ValueError(f"duplicate element {g.coords}")
            seen.add(g.coords)

    @classmethod
    def from_coords(
        cls, group_id: str, coords: Iterable[Sequence[int]], sort: bool = True
    ) -> "FiniteSubset":
        tuples = [tuple(int(c) for c in t) for t in coords]
        if sort:
            tuples.sort()
        return cls(group_id, tuple(GroupElement(group_id, t) for t in tuples))

    @property
    def size(self) -> int:
        return len(self.elements)

    def coord_set(self) -> set[tuple[int, ...]]:
        return {g.coords for g in self.elements}

    def coords_array(self) -> np.ndarray:
        return np.array([g.coords for g in self.elements], dtype=np.int64).reshape(
            self.size, group_rank(self.group_id)
        )

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)


def translate_left(g: GroupElement, F: FiniteSubset) -> FiniteSubset:
    """The subset g*F, in F's enumeration order."""
    _check_same_group(g.group_id, F.group_id)
    gid = F.group_id
    return FiniteSubset(
        gid,
        tuple(GroupElement(gid, _mul_coords(gid, g.coords, f.coords)) for f in F),
    )


def translate_right(F: FiniteSubset, g: GroupElement) -> FiniteSubset:
    """The subset F*g, in F's enumeration order."""
    _check_same_group(g.group_id, F.group_id)
    gid = F.group_id
    return FiniteSubset(
        gid,
        tuple(GroupElement(gid, _mul_coords(gid, f.coords, g.coords)) for f in F),
    )


def invert_subset(F: FiniteSubset) -> FiniteSubset:
    """The subset {f^{-1} : f in F}, in F's enumeration order."""
    gid = F.group_id
    return FiniteSubset(
        gid, tuple(GroupElement(gid, _inv_coords(gid, f.coords)) for f in F)
    )


def product_subset(A: FiniteSubset, B: FiniteSubset) -> FiniteSubset:
    """The product set A*B = {a*b}, enumerated lexicographically."""
    _check_same_group(A.group_id, B.group_id)
    gid = A.group_id
    coords = {_mul_coords(gid, a.coords, b.coords) for a in A for b in B}
    return FiniteSubset.from_coords(gid, coords)


def symmetric_difference_size(A: FiniteSubset, B: FiniteSubset) -> int:
    _check_same_group(A.group_id, B.group_id)
    return len(A.coord_set() ^ B.coord_set())


def folner_defect_left(F: FiniteSubset, g: GroupElement) -> Fraction:
    """|gF symmetric-difference F| / |F| as an exact rational."""
    if F.size == 0:
        raise ValueError("defect of an empty subset is undefined")
    shifted = translate_left(g, F)
    return Fraction(symmetric_difference_size(shifted, F), F.size)


def folner_defect_right(F: FiniteSubset, g: GroupElement) -> Fraction:
    """|F symmetric-difference Fg| / |F| as an exact rational."""
    if F.size == 0:
        raise ValueError("defect of an empty subset is undefined")
    shifted = translate_right(F, g)
    return Fraction(symmetric_difference_size(shifted, F), F.size)


# ---------------------------------------------------------------------------
# Folner sequences


@dataclass(frozen=True)
class FolnerSequence:
    """An indexed family of finite subsets, 1-based.

    Kinds: ``z_interval`` (integers; anchor "left" gives {0..n-1}, anchor
    "right" gives {-n+1..0}), ``zd_box`` (the cube [-n, n]^d),
    ``heisenberg_box`` (|a| <= n, |b| <= n, |c| <= n^2) and
    ``explicit_list`` (user-supplied subsets).  ``claimed_sides`` records on
    which side the averaging property is claimed; the claim is metadata,
    validated numerically through the defect operations.
    """

    group_id: str
    kind: str
    anchor: str = "left"
    subsets: tuple[FiniteSubset, ...] = ()
    claimed_sides: frozenset[str] = frozenset({"left", "right"})

    def __post_init__(self) -> None:
        if self.kind not in ("z_interval", "zd_box", "heisenberg_box", "explicit_list"):
            raise ValueError(f"unknown Folner kind {self.kind!r}")
        if self.kind == "z_interval" and self.anchor not in ("left", "right"):
            raise ValueError(f"bad anchor {self.anchor!r}")
        if self.kind == "explicit_list" and not self.subsets:
            raise ValueError("explicit_list needs at least one subset")
        for S in self.subsets:
            _check_same_group(self.group_id, S.group_id)
            if S.size == 0:
                raise ValueError("explicit subsets must be nonempty")

    def max_index(self) -> int | None:
        return len(self.subsets) if self.kind == "explicit_list" else None

    def subset(self, n: int) -> FiniteSubset:
        if n < 1:
            raise ValueError("indices are 1-based")
        if self.kind == "z_interval":
            if self.anchor == "left":
                return FiniteSubset.from_coords("Z", ((k,) for k in range(n)))
            return FiniteSubset.from_coords("Z", ((k,) for k in range(-n + 1, 1)))
        if self.kind == "zd_box":
            d = group_rank(self.group_id)
            rng = range(-n, n + 1)
            return FiniteSubset.from_coords(
                self.group_id, itertools.product(rng, repeat=d)
            )
        if self.kind == "heisenberg_box":
            rng = range(-n, n + 1)
            crng = range(-n * n, n * n + 1)
            return FiniteSubset.from_coords(
                _HEISENBERG, ((a, b, c) for a in rng for b in rng for c in crng)
            )
        if n > len(self.subsets):
            raise IndexError(f"explicit sequence has {len(self.subsets)} subsets")
        return self.subsets[n - 1]


def z_intervals(anchor: str = "left") -> FolnerSequence:
    return FolnerSequence("Z", "z_interval", anchor=anchor)


def zd_boxes(d: int) -> FolnerSequence:
    group_id = "Z" if d == 1 else f"Z^{d}"
    return FolnerSequence(group_id, "zd_box")


def heisenberg_boxes() -> FolnerSequence:
    return FolnerSequence(_HEISENBERG, "heisenberg_box")


def explicit_sequence(
    subsets: Sequence[FiniteSubset], claimed_sides: Iterable[str] = ("left",)
) -> FolnerSequence:
    subsets = tuple(subsets)
    if not subsets:
        raise ValueError("explicit_list needs at least one subset")
    return FolnerSequence(
        subsets[0].group_id,
        "explicit_list",
        subsets=subsets,
        claimed_sides=frozenset(claimed_sides),
    )


def sequence_to_dict(seq: FolnerSequence) -> dict:
    """JSON-friendly description: {group, kind, params}."""
    params: dict = {}
    if seq.kind == "z_interval":
        params["anchor"] = seq.anchor
    if seq.kind == "explicit_list":
        params["subsets"] = [
            [list(g.coords) for g in S.elements] for S in seq.subsets
        ]
        params["claimed_sides"] = sorted(seq.claimed_sides)
    return {"group": seq.group_id, "kind": seq.kind, "params": params}


def sequence_from_dict(data: dict) -> FolnerSequence:
    group_id = data["group"]
    kind = data["kind"]
    params = data.get("params", {})
    if kind == "z_interval":
        return FolnerSequence(group_id, kind, anchor=params.get("anchor", "left"))
    if kind in ("zd_box", "heisenberg_box"):
        return FolnerSequence(group_id, kind)
    subsets = tuple(
        FiniteSubset.from_coords(group_id, rows, sort=False)
        for rows in params["subsets"]
    )
    return FolnerSequence(
        group_id,
        kind,
        subsets=subsets,
        claimed_sides=frozenset(params.get("claimed_sides", ("left",))),
    )


# ---------------------------------------------------------------------------
# Temperedness


@dataclass(frozen=True)
class TemperednessReport:
    """Exact ratios |union_{k<n} F_k^{-1} F_n| / |F_n| for n = 2..upto."""

    indices: tuple[int, ...]
    ratios: tuple[Fraction, ...]
    constant: Fraction

    def satisfies(self, C: Fraction) -> bool:
        return self.constant <= C


def _pairwise_products(gid: str, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """All products a*b for rows a of A, b of B; shape (len(A)*len(B), rank)."""
    m, p = len(A), len(B)
    if gid == _HEISENBERG:
        out = np.empty((m, p, 3), dtype=A.dtype)
        out[:, :, 0] = A[:, None, 0] + B[None, :, 0]
        out[:, :, 1] = A[:, None, 1] + B[None, :, 1]
        out[:, :, 2] = A[:, None, 2] + B[None, :, 2] + A[:, None, 0] * B[None, :, 1]
    else:
        out = A[:, None, :] + B[None, :, :]
    return out.reshape(m * p, A.shape[1])


def _product_bounds(gid: str, A: np.ndarray, B: np.ndarray) -> list[tuple[int, int]]:
    """Componentwise interval bounds for the products A*B."""
    alo, ahi = A.min(axis=0), A.max(axis=0)
    blo, bhi = B.min(axis=0), B.max(axis=0)
    bounds = [(int(alo[i] + blo[i]), int(ahi[i] + bhi[i])) for i in range(A.shape[1])]
    if gid == _HEISENBERG:
        corners = [
            int(x) * int(y)
            for x in (alo[0], ahi[0])
            for y in (blo[1], bhi[1])
        ]
        lo, hi = bounds[2]
        bounds[2] = (lo + min(corners), hi + max(corners))
    return bounds


class _UnionCardinality:
    """Incrementally accumulates |union of product sets| with exact counting.

    Products are packed into int64 keys when the coordinate ranges allow it
    (fast numpy path, chunked); otherwise falls back to a plain set of
    coordinate tuples.
    """

    def __init__(self, gid: str, bounds: list[tuple[int, int]]):
        self.gid = gid
        # Bounds are exact Python ints; they also decide whether int64
        # product arithmetic can wrap (it must never wrap silently).
        self.fits_int64 = all(
            -(2**63) < lo and hi < 2**63 for lo, hi in bounds
        )
        ranges = [hi - lo + 1 for lo, hi in bounds]
        total = 1
        for r in ranges:
            total *= r
        self.packable = self.fits_int64 and total < _PACK_LIMIT
        self.lows = np.array(
            [lo for lo, _ in bounds],
            dtype=np.int64 if self.fits_int64 else object,
        )
        self.strides = None
        if self.packable:
            strides = [1] * len(ranges)
            for i in range(len(ranges) - 2, -1, -1):
                strides[i] = strides[i + 1] * ranges[i + 1]
            self.strides = np.array(strides, dtype=np.int64)
        self.keys: set[int] = set()
        self.tuples: set[tuple[int, ...]] = set()

    def add_products(self, A: np.ndarray, B: np.ndarray) -> None:
        if not self.fits_int64:
            A = A.astype(object)
            B = B.astype(object)
        p = max(len(B), 1)
        step = max(_CHUNK_CELLS // p, 1)
        for start in range(0, len(A), step):
            block = _pairwise_products(self.gid, A[start : start + step], B)
            if self.packable:
                packed = (block - self.lows) @ self.strides
                self.keys.update(np.unique(packed).tolist())
            else:
                self.tuples.update(map(tuple, block.tolist()))

    def cardinality(self) -> int:
        return len(self.keys) if self.packable else len(self.tuples)


def temperedness_report(seq: FolnerSequence, upto: int) -> TemperednessReport:
    """Exact ratios |union_{k<n} F_k^{-1} F_n| / |F_n| for n = 2..upto.

    When the sequence is verified nested up to F_{n-1}, the union collapses
    to F_{n-1}^{-1} F_n exactly (inverses preserve inclusion); otherwise all
    k < n contribute.  Either way the count is exact.
    """
    if upto < 2:
        raise ValueError("upto must be at least 2")
    max_n = seq.max_index()
    if max_n is not None and upto > max_n:
        raise IndexError(f"sequence has only {max_n} subsets")

    subsets = [seq.subset(n) for n in range(1, upto + 1)]
    inv_arrays = [invert_subset(S).coords_array() for S in subsets]
    coord_sets = [S.coord_set() for S in subsets]

    nested_through = 1
    for k in range(1, upto):
        if coord_sets[k - 1] <= coord_sets[k]:
            nested_through = k + 1
        else:
            break

    indices, ratios = [], []
    for n in range(2, upto + 1):
        F_n = subsets[n - 1].coords_array()
        contributing = (
            [inv_arrays[n - 2]] if nested_through >= n - 1 else inv_arrays[: n - 1]
        )
        bounds = _product_bounds(seq.group_id, np.vstack(contributing), F_n)
        acc = _UnionCardinality(seq.group_id, bounds)
        for inv in contributing:
            acc.add_products(inv, F_n)
        indices.append(n)
        ratios.append(Fraction(acc.cardinality(), subsets[n - 1].size))
    return TemperednessReport(tuple(indices), tuple(ratios), max(ratios))


def _union_product_cardinality(
    gid: str, accumulated_inv: np.ndarray, F: np.ndarray
) -> int:
    bounds = _product_bounds(gid, accumulated_inv, F)
    acc = _UnionCardinality(gid, bounds)
    acc.add_products(accumulated_inv, F)
    return acc.cardinality()


def extract_tempered_subsequence(
    seq: FolnerSequence, C: Fraction | int | str, count: int
) -> tuple[int, ...]:
    """Greedy tempered subsequence: smallest admissible next index each step.

    Step j accepts index m when |(union of chosen subsets)^{-1} F_m| <=
    C * |F_m|, compared in exact integer arithmetic.  The scan for step j is
    capped at 10x the previously chosen index; exhausting the cap (or an
    explicit sequence's subsets) raises SearchBudgetExceededError.
    """
    C = Fraction(C)
    if C <= 1:
        raise ValueError("the temperedness constant must exceed 1")
    if count < 1:
        raise ValueError("count must be positive")
    max_n = seq.max_index()
    if max_n is not None and count > max_n:
        raise UnsupportedCaseError(
            f"cannot pick {count} indices from {max_n} subsets"
        )

    chosen: list[int] = [1]
    union_coords = seq.subset(1).coord_set()
    gid = seq.group_id
    while len(chosen) < count:
        last = chosen[-1]
        budget = 10 * last
        if max_n is not None:
            budget = min(budget, max_n)
        inv_arr = np.array(
            [_inv_coords(gid, t) for t in sorted(union_coords)], dtype=np.int64
        )
        found = None
        for m in range(last + 1, budget + 1):
            F_m = seq.subset(m)
            card = _union_product_cardinality(gid, inv_arr, F_m.coords_array())
            if card * C.denominator <= C.numerator * F_m.size:
                found = m
                break
        if found is None:
            raise SearchBudgetExceededError(
                f"no admissible index in ({last}, {budget}] for C={C} "
                f"after choosing {tuple(chosen)}"
            )
        chosen.append(found)
        union_coords |= seq.subset(found).coord_set()
    return tuple(chosen)
