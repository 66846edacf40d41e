"""Command-line front end.

Subcommands: catalog, run, verify, defect, tempered, wdist, trace.
Exit codes: 0 success, 1 runtime failure, 2 configuration failure.
Every failure prints a single machine-parseable line to stderr:
``error[ClassName]: message``.

Configs are strict JSON: unknown keys are rejected with their key path, and
identical config + seed yields byte-identical CSV output.  Report files never
contain wall-clock timings; those go to stdout only.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys as _sys
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import analysis, groups, measures, systems, transport
from .errors import ConfigError, FolnerlabError

__all__ = ["main"]

VERSION = "0.1.0"

_DEFAULT_TOLERANCES = {"metric": 1e-9, "rho_terms": 40, "threshold": 0.05}


def _fmt(x: float) -> str:
    return "%.12g" % x


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path: str, header: list[str], rows: list[list[str]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _atomic_write(path, buf.getvalue().encode("utf-8"))


def _write_json(path: str, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    _atomic_write(path, text.encode("utf-8"))


# ---------------------------------------------------------------------------
# Config validation


def _check_keys(
    obj: dict, allowed: set[str], required: set[str], path: str
) -> None:
    if not isinstance(obj, dict):
        raise ConfigError("expected an object", path)
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r}", f"{path}.{key}" if path else key)
    for key in required:
        if key not in obj:
            raise ConfigError(f"missing required key {key!r}", path or key)


def _build_sequence(sys_obj: systems.GSystem, folner: dict) -> groups.FolnerSequence:
    _check_keys(
        folner, {"kind", "anchor", "subsets", "claimed_sides"}, {"kind"}, "folner"
    )
    kind = folner["kind"]
    if kind == "z_interval":
        if sys_obj.group_id != "Z":
            raise ConfigError(
                f"z_interval needs the group Z, system uses {sys_obj.group_id!r}",
                "folner.kind",
            )
        return groups.FolnerSequence("Z", kind, anchor=folner.get("anchor", "left"))
    if kind == "zd_box":
        return groups.FolnerSequence(sys_obj.group_id, kind)
    if kind == "heisenberg_box":
        if sys_obj.group_id != "heisenberg":
            raise ConfigError(
                "heisenberg_box needs the Heisenberg group", "folner.kind"
            )
        return groups.FolnerSequence("heisenberg", kind)
    if kind == "explicit_list":
        if "subsets" not in folner:
            raise ConfigError("explicit_list needs 'subsets'", "folner")
        subsets = tuple(
            groups.FiniteSubset.from_coords(sys_obj.group_id, rows, sort=False)
            for rows in folner["subsets"]
        )
        return groups.explicit_sequence(
            subsets, folner.get("claimed_sides", ("left",))
        )
    raise ConfigError(f"unknown Folner kind {kind!r}", "folner.kind")


@dataclass
class _RunContext:
    system: systems.GSystem
    seq: groups.FolnerSequence | None
    indices: tuple[int, ...] | None
    seed: int
    tolerances: dict

    def require_seq(self) -> groups.FolnerSequence:
        if self.seq is None:
            raise ConfigError("this operation needs a 'folner' section", "folner")
        return self.seq

    def require_indices(self) -> tuple[int, ...]:
        if not self.indices:
            raise ConfigError("this operation needs 'indices'", "indices")
        return self.indices


@dataclass
class _OpOutput:
    summary: dict
    csv_table: tuple[list[str], list[list[str]]] | None = None
    json_payload: dict | None = None


def _parse_pair_list(ctx: _RunContext, raw: object, path: str) -> list:
    if not isinstance(raw, list) or not raw:
        raise ConfigError("expected a nonempty list of pairs", path)
    return raw


def _op_wasserstein_trace(ctx: _RunContext, params: dict) -> _OpOutput:
    x = systems.parse_point(ctx.system, params["x"])
    y = systems.parse_point(ctx.system, params["y"])
    trace = analysis.wasserstein_trace(
        ctx.system, x, y, ctx.require_seq(), ctx.require_indices(),
        ctx.tolerances["metric"],
    )
    return _OpOutput(
        summary={
            "final_value": trace.values[-1],
            "limsup_estimate": trace.limsup_estimate,
        },
        csv_table=trace.csv_table(),
        json_payload={
            "kind": trace.kind,
            "indices": list(trace.indices),
            "values": list(trace.values),
            "limsup_estimate": trace.limsup_estimate,
        },
    )


def _op_mean_distance_trace(ctx: _RunContext, params: dict) -> _OpOutput:
    x = systems.parse_point(ctx.system, params["x"])
    y = systems.parse_point(ctx.system, params["y"])
    trace = analysis.mean_distance_trace(
        ctx.system, x, y, ctx.require_seq(), ctx.require_indices(),
        ctx.tolerances["metric"],
    )
    return _OpOutput(
        summary={
            "final_value": trace.values[-1],
            "limsup_estimate": trace.limsup_estimate,
        },
        csv_table=trace.csv_table(),
        json_payload={
            "kind": trace.kind,
            "indices": list(trace.indices),
            "values": list(trace.values),
            "limsup_estimate": trace.limsup_estimate,
        },
    )


def _op_wdist(ctx: _RunContext, params: dict) -> _OpOutput:
    x = systems.parse_point(ctx.system, params["x"])
    y = systems.parse_point(ctx.system, params["y"])
    n = int(params["n"])
    F = ctx.require_seq().subset(n)
    mu = measures.empirical_measure(ctx.system, x, F)
    nu = measures.empirical_measure(ctx.system, y, F)
    value = transport.wasserstein_empirical(mu, nu, ctx.tolerances["metric"])
    return _OpOutput(
        summary={"n": n, "value": value},
        csv_table=(["n", "value"], [[str(n), _fmt(value)]]),
        json_payload={"n": n, "value": value},
    )


def _op_defect_table(ctx: _RunContext, params: dict) -> _OpOutput:
    seq = ctx.require_seq()
    indices = ctx.require_indices()
    sides = params.get("sides", ["left", "right"])
    rows = []
    worst = Fraction(0)
    for coords in params["elements"]:
        g = groups.GroupElement(seq.group_id, tuple(int(c) for c in coords))
        for n in indices:
            F = seq.subset(n)
            for side in sides:
                if side == "left":
                    value = groups.folner_defect_left(F, g)
                elif side == "right":
                    value = groups.folner_defect_right(F, g)
                else:
                    raise ConfigError(f"unknown side {side!r}", "operation.params.sides")
                worst = max(worst, value)
                rows.append(
                    [
                        seq.group_id,
                        seq.kind,
                        str(n),
                        ",".join(map(str, coords)),
                        side,
                        str(value),
                    ]
                )
    return _OpOutput(
        summary={"rows": len(rows), "max_defect": str(worst)},
        csv_table=(["group", "kind", "n", "g", "side", "defect"], rows),
        json_payload={"rows": [dict(zip(("group", "kind", "n", "g", "side", "defect"), r)) for r in rows]},
    )


def _op_temperedness(ctx: _RunContext, params: dict) -> _OpOutput:
    report = groups.temperedness_report(ctx.require_seq(), int(params["upto"]))
    rows = [[str(n), str(r)] for n, r in zip(report.indices, report.ratios)]
    return _OpOutput(
        summary={"constant": str(report.constant)},
        csv_table=(["n", "ratio"], rows),
        json_payload={
            "indices": list(report.indices),
            "ratios": [str(r) for r in report.ratios],
            "constant": str(report.constant),
        },
    )


def _op_tempered_extraction(ctx: _RunContext, params: dict) -> _OpOutput:
    indices = groups.extract_tempered_subsequence(
        ctx.require_seq(), Fraction(str(params["constant"])), int(params["count"])
    )
    return _OpOutput(
        summary={"indices": list(indices)},
        csv_table=(["position", "index"], [[str(i + 1), str(n)] for i, n in enumerate(indices)]),
        json_payload={"indices": list(indices)},
    )


def _op_coupling_bounds(ctx: _RunContext, params: dict) -> _OpOutput:
    product = systems.product_system(ctx.system)
    pairs = []
    for item in _parse_pair_list(ctx, params["pairs"], "operation.params.pairs"):
        _check_keys(item, {"z1", "z2"}, {"z1", "z2"}, "operation.params.pairs[]")
        pairs.append(
            (
                systems.parse_point(product, item["z1"]),
                systems.parse_point(product, item["z2"]),
            )
        )
    report = analysis.coupling_bounds_check(
        product, pairs, ctx.require_seq(), ctx.require_indices(),
        ctx.tolerances["metric"],
    )
    return _OpOutput(
        summary={"max_violation": report.max_violation},
        csv_table=report.csv_table(),
        json_payload=report.to_json_dict(),
    )


def _op_unique_ergodicity(ctx: _RunContext, params: dict) -> _OpOutput:
    points = [systems.parse_point(ctx.system, p) for p in params["points"]]
    report = analysis.unique_ergodicity_diagnostic(
        ctx.system,
        points,
        ctx.require_seq(),
        int(params["n"]),
        N=ctx.tolerances["rho_terms"],
        threshold=float(params.get("threshold", ctx.tolerances["threshold"])),
        tol=ctx.tolerances["metric"],
    )
    return _OpOutput(
        summary={
            "max_w": report.max_w,
            "max_rho": report.max_rho,
            "consistent": report.consistent,
        },
        csv_table=report.csv_table(),
        json_payload=report.to_json_dict(),
    )


def _op_generic_measure_trace(ctx: _RunContext, params: dict) -> _OpOutput:
    x = systems.parse_point(ctx.system, params["x"])
    trace = analysis.generic_measure_trace(
        ctx.system, x, ctx.require_seq(), ctx.require_indices(),
        N=ctx.tolerances["rho_terms"],
    )
    return _OpOutput(
        summary={"cauchy_defect": trace.cauchy_defect},
        csv_table=trace.csv_table(),
        json_payload={
            "indices": list(trace.indices),
            "consecutive_rho": list(trace.consecutive_rho),
            "cauchy_defect": trace.cauchy_defect,
        },
    )


def _op_measure_map_continuity(ctx: _RunContext, params: dict) -> _OpOutput:
    grid = [systems.parse_point(ctx.system, p) for p in params["grid"]]
    report = analysis.measure_map_continuity_diagnostic(
        ctx.system,
        grid,
        ctx.require_seq(),
        int(params["n"]),
        N=ctx.tolerances["rho_terms"],
        tol=ctx.tolerances["metric"],
    )
    max_rho = max((r for _, _, r in report.rows), default=0.0)
    return _OpOutput(
        summary={"pairs": len(report.rows), "max_rho": max_rho},
        csv_table=report.csv_table(),
        json_payload=report.to_json_dict(),
    )


def _op_uniform_convergence(ctx: _RunContext, params: dict) -> _OpOutput:
    family = measures.observable_family(ctx.system)
    f = family.observable(int(params["observable_index"]))
    grid = [systems.parse_point(ctx.system, p) for p in params["grid"]]
    index_pairs = [(int(a), int(b)) for a, b in params["index_pairs"]]
    report = analysis.uniform_convergence_diagnostic(
        ctx.system, f, grid, ctx.require_seq(), index_pairs
    )
    max_gap = max((s for _, _, s in report.rows), default=0.0)
    return _OpOutput(
        summary={"observable": f.name, "max_sup_gap": max_gap},
        csv_table=report.csv_table(),
        json_payload=report.to_json_dict(),
    )


def _op_modulus(ctx: _RunContext, params: dict) -> _OpOutput:
    sampler = analysis.near_pair_sampler(
        ctx.system, int(params.get("sampler_seed", ctx.seed))
    )
    estimate = analysis.modulus_estimate(
        ctx.system,
        params["kind"],
        ctx.require_seq(),
        [float(d) for d in params["deltas"]],
        sampler,
        ctx.require_indices(),
        pairs_per_delta=int(params.get("pairs_per_delta", 32)),
        tol=ctx.tolerances["metric"],
    )
    return _OpOutput(
        summary={
            "kind": estimate.kind,
            "max_sup": estimate.sup_values[-1],
        },
        csv_table=estimate.csv_table(),
        json_payload={
            "kind": estimate.kind,
            "delta_grid": list(estimate.delta_grid),
            "sup_values": list(estimate.sup_values),
            "sample_count": estimate.sample_count,
        },
    )


@dataclass(frozen=True)
class _OpSpec:
    runner: Callable[[_RunContext, dict], _OpOutput]
    required: frozenset[str]
    optional: frozenset[str] = frozenset()


_OPERATIONS: dict[str, _OpSpec] = {
    "wasserstein_trace": _OpSpec(_op_wasserstein_trace, frozenset({"x", "y"})),
    "mean_distance_trace": _OpSpec(_op_mean_distance_trace, frozenset({"x", "y"})),
    "wdist": _OpSpec(_op_wdist, frozenset({"x", "y", "n"})),
    "defect_table": _OpSpec(
        _op_defect_table, frozenset({"elements"}), frozenset({"sides"})
    ),
    "temperedness": _OpSpec(_op_temperedness, frozenset({"upto"})),
    "tempered_extraction": _OpSpec(
        _op_tempered_extraction, frozenset({"constant", "count"})
    ),
    "coupling_bounds": _OpSpec(_op_coupling_bounds, frozenset({"pairs"})),
    "unique_ergodicity": _OpSpec(
        _op_unique_ergodicity, frozenset({"points", "n"}), frozenset({"threshold"})
    ),
    "generic_measure_trace": _OpSpec(_op_generic_measure_trace, frozenset({"x"})),
    "measure_map_continuity": _OpSpec(
        _op_measure_map_continuity, frozenset({"grid", "n"})
    ),
    "uniform_convergence": _OpSpec(
        _op_uniform_convergence,
        frozenset({"observable_index", "grid", "index_pairs"}),
    ),
    "modulus": _OpSpec(
        _op_modulus,
        frozenset({"kind", "deltas"}),
        frozenset({"pairs_per_delta", "sampler_seed"}),
    ),
}


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")


def _run_config(config: dict, out_dir: str, seed_override: int | None) -> dict:
    _check_keys(
        config,
        {"system", "folner", "indices", "seed", "tolerances", "operation", "output"},
        {"system", "operation"},
        "",
    )
    system_cfg = config["system"]
    _check_keys(system_cfg, {"name", "params"}, {"name"}, "system")
    sys_obj = systems.build_system(
        system_cfg["name"], system_cfg.get("params", {})
    )

    seq = None
    if "folner" in config:
        seq = _build_sequence(sys_obj, config["folner"])

    indices = None
    if "indices" in config:
        raw = config["indices"]
        if not isinstance(raw, list) or not all(isinstance(i, int) for i in raw):
            raise ConfigError("indices must be a list of integers", "indices")
        indices = tuple(raw)

    tolerances = dict(_DEFAULT_TOLERANCES)
    if "tolerances" in config:
        _check_keys(
            config["tolerances"], set(_DEFAULT_TOLERANCES), set(), "tolerances"
        )
        tolerances.update(config["tolerances"])

    seed = int(config.get("seed", 0))
    if seed_override is not None:
        seed = seed_override

    op_cfg = config["operation"]
    _check_keys(op_cfg, {"name", "params"}, {"name"}, "operation")
    op_name = op_cfg["name"]
    if op_name not in _OPERATIONS:
        known = ", ".join(sorted(_OPERATIONS))
        raise ConfigError(
            f"unknown operation {op_name!r}; known operations: {known}",
            "operation.name",
        )
    spec = _OPERATIONS[op_name]
    op_params = op_cfg.get("params", {})
    _check_keys(
        op_params, set(spec.required | spec.optional), set(spec.required),
        "operation.params",
    )

    output_cfg = config.get("output", {})
    _check_keys(output_cfg, {"csv", "json"}, set(), "output")

    ctx = _RunContext(sys_obj, seq, indices, seed, tolerances)
    started = time.perf_counter()
    result = spec.runner(ctx, op_params)
    elapsed = time.perf_counter() - started

    effective = dict(config)
    effective["seed"] = seed
    outputs = {}
    if "csv" in output_cfg:
        if result.csv_table is None:
            raise ConfigError("this operation produces no CSV output", "output.csv")
        path = os.path.join(out_dir, output_cfg["csv"])
        _write_csv(path, *result.csv_table)
        outputs["csv"] = path
    if "json" in output_cfg:
        payload = result.json_payload if result.json_payload is not None else result.summary
        path = os.path.join(out_dir, output_cfg["json"])
        _write_json(path, payload)
        outputs["json"] = path

    report = {
        "version": VERSION,
        "operation": op_name,
        "config": effective,
        "outputs": outputs,
        "summary": result.summary,
    }
    return {"report": report, "elapsed": elapsed}


# ---------------------------------------------------------------------------
# Verify suites


@dataclass(frozen=True)
class _Check:
    name: str
    passed: bool
    detail: str


def _suite_assignment_oracle() -> list[_Check]:
    import numpy as np

    rng = np.random.default_rng(20240801)
    checks = []
    worst = 0.0
    for trial in range(200):
        n = int(rng.integers(2, 9))
        C = transport.CostMatrix(rng.random((n, n)))
        gap = abs(
            transport.assignment_min(C).cost - transport.bruteforce_min(C).cost
        )
        worst = max(worst, gap)
    checks.append(
        _Check(
            "random matrices n=2..8 match brute force",
            worst <= 1e-12,
            f"max gap {worst:.2e} over 200 trials",
        )
    )
    zero = transport.CostMatrix(np.zeros((4, 4)))
    checks.append(
        _Check(
            "zero matrix has zero cost",
            transport.assignment_min(zero).cost == 0.0,
            "n=4",
        )
    )
    eye = transport.CostMatrix(1.0 - np.eye(5))
    res = transport.assignment_min(eye)
    checks.append(
        _Check(
            "identity-favoring matrix picks the diagonal",
            res.cost == 0.0 and res.row_for_col == tuple(range(5)),
            f"cost {res.cost}",
        )
    )
    return checks


def _suite_folner_defects() -> list[_Check]:
    checks = []
    seq = groups.z_intervals()
    one = groups.element("Z", 1)
    minus = groups.element("Z", -1)
    ok = all(
        groups.folner_defect_left(seq.subset(n), g) == Fraction(2, n)
        for n in range(1, 129)
        for g in (one, minus)
    )
    checks.append(_Check("Z intervals: defect(+-1) = 2/n for n <= 128", ok, "exact"))

    boxes = groups.zd_boxes(2)
    gx = groups.element("Z^2", 1, 0)
    ok = all(
        groups.folner_defect_left(boxes.subset(n), gx) == Fraction(2, 2 * n + 1)
        for n in range(1, 17)
    )
    checks.append(_Check("Z^2 boxes: defect = 2/(2n+1) for n <= 16", ok, "exact"))

    hseq = groups.heisenberg_boxes()
    expected = {2: Fraction(46, 75), 4: Fraction(914, 2673)}
    ga = groups.element("heisenberg", 1, 0, 0)
    ok = all(
        groups.folner_defect_left(hseq.subset(n), ga) == v
        for n, v in expected.items()
    )
    checks.append(
        _Check("Heisenberg boxes: frozen defects at n=2,4", ok, "exact rationals")
    )

    F = boxes.subset(5)
    g = groups.element("Z^2", 2, -3)
    ok = groups.folner_defect_left(F, g) == groups.folner_defect_right(F, g)
    checks.append(_Check("abelian: left defect equals right defect", ok, "Z^2 sample"))
    return checks


def _suite_temperedness() -> list[_Check]:
    checks = []
    seq = groups.z_intervals()
    report = groups.temperedness_report(seq, 32)
    ok = report.constant <= 2 and all(
        r == Fraction(2 * n - 2, n) for n, r in zip(report.indices, report.ratios)
    )
    checks.append(
        _Check(
            "Z intervals tempered with C=2 up to n=32",
            ok,
            f"constant {report.constant}",
        )
    )
    picked = groups.extract_tempered_subsequence(seq, Fraction(2), 6)
    sub = groups.explicit_sequence([seq.subset(n) for n in picked])
    re_report = groups.temperedness_report(sub, len(picked))
    checks.append(
        _Check(
            "greedy extraction re-verifies",
            re_report.constant <= 2,
            f"indices {picked}",
        )
    )
    return checks


def _suite_wasserstein_axioms() -> list[_Check]:
    import random as _random

    rng = _random.Random(7)
    sys_obj = systems.rotation("golden")
    seq = groups.z_intervals()
    F = seq.subset(32)
    tol = 1e-9
    symmetric = True
    triangle = True
    zero_self = True
    for _ in range(30):
        pts = [
            systems.circle_point(sys_obj, Fraction(rng.getrandbits(32), 1 << 32))
            for _ in range(3)
        ]
        ms = [measures.empirical_measure(sys_obj, p, F) for p in pts]
        wxy = transport.wasserstein_empirical(ms[0], ms[1], tol)
        wyx = transport.wasserstein_empirical(ms[1], ms[0], tol)
        wyz = transport.wasserstein_empirical(ms[1], ms[2], tol)
        wxz = transport.wasserstein_empirical(ms[0], ms[2], tol)
        symmetric &= wxy == wyx
        triangle &= wxz <= wxy + wyz + 3 * tol
        zero_self &= transport.wasserstein_empirical(ms[0], ms[0], tol) == 0.0
    checks = [
        _Check("symmetry is exact", symmetric, "30 random triples, n=32"),
        _Check("triangle inequality within 3*tol", triangle, "same triples"),
        _Check("self-distance is zero", zero_self, "identity pairing"),
    ]
    union = systems.two_rotations()
    a = systems.union_point(union, "a", Fraction(1, 3))
    b = systems.union_point(union, "b", Fraction(1, 7))
    mu = measures.empirical_measure(union, a, F)
    nu = measures.empirical_measure(union, b, F)
    checks.append(
        _Check(
            "cross-component distance is exactly 1",
            transport.wasserstein_empirical(mu, nu, tol) == 1.0,
            "disjoint union of rotations",
        )
    )
    return checks


def _suite_reproducibility() -> list[_Check]:
    config = {
        "system": {"name": "rotation", "params": {"alpha": "golden"}},
        "folner": {"kind": "z_interval"},
        "indices": [5, 10, 15],
        "seed": 3,
        "operation": {
            "name": "wasserstein_trace",
            "params": {"x": "0", "y": "3/10"},
        },
        "output": {"csv": "trace.csv"},
    }
    blobs = []
    for _ in range(2):
        with tempfile.TemporaryDirectory() as tmp:
            _run_config(dict(config), tmp, None)
            with open(os.path.join(tmp, "trace.csv"), "rb") as handle:
                blobs.append(handle.read())
    return [
        _Check(
            "identical config yields byte-identical CSV",
            blobs[0] == blobs[1],
            f"{len(blobs[0])} bytes",
        )
    ]


_SUITES: dict[str, Callable[[], list[_Check]]] = {
    "assignment-oracle": _suite_assignment_oracle,
    "folner-defects": _suite_folner_defects,
    "temperedness": _suite_temperedness,
    "wasserstein-axioms": _suite_wasserstein_axioms,
    "reproducibility": _suite_reproducibility,
}


# ---------------------------------------------------------------------------
# Subcommand handlers


def _cmd_catalog(args: argparse.Namespace) -> int:
    entries = systems.catalog()
    folner_kinds = {
        "z_interval": "integer intervals; anchor left {0..n-1} or right {-n+1..0}",
        "zd_box": "cubes [-n, n]^d in Z^d",
        "heisenberg_box": "Heisenberg boxes |a|,|b| <= n, |c| <= n^2",
        "explicit_list": "user-supplied subsets",
    }
    if args.json:
        payload = {
            "systems": {
                name: {
                    "summary": e.summary,
                    "params": {k: v for k, v in e.param_schema},
                    "expected": {
                        "uniquely_ergodic": e.expected.uniquely_ergodic,
                        "mean_equicontinuous": e.expected.mean_equicontinuous,
                        "weak_mean_equicontinuous": e.expected.weak_mean_equicontinuous,
                        "full_measure_center": e.expected.full_measure_center,
                    },
                }
                for name, e in sorted(entries.items())
            },
            "groups": ["Z", "Z^d (d >= 2)", "heisenberg"],
            "folner_kinds": folner_kinds,
            "operations": sorted(_OPERATIONS),
        }
        print(json.dumps(payload, sort_keys=True, indent=2))
        return 0
    print("systems:")
    for name, e in sorted(entries.items()):
        print(f"  {name}: {e.summary}")
        for key, desc in e.param_schema:
            print(f"    param {key}: {desc}")
    print("groups: Z, Z^d (d >= 2), heisenberg")
    print("folner kinds:")
    for kind, desc in folner_kinds.items():
        print(f"  {kind}: {desc}")
    print("operations: " + ", ".join(sorted(_OPERATIONS)))
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    outcome = _run_config(config, args.out, args.seed)
    report = outcome["report"]
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        summary = ", ".join(f"{k}={v}" for k, v in report["summary"].items())
        print(
            f"ok {report['operation']} ({outcome['elapsed']:.3f}s) {summary}"
        )
        for kind, path in report["outputs"].items():
            print(f"wrote {kind}: {path}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.suite not in _SUITES:
        known = ", ".join(sorted(_SUITES))
        raise ConfigError(f"unknown suite {args.suite!r}; available: {known}")
    checks = _SUITES[args.suite]()
    failed = [c for c in checks if not c.passed]
    if args.json:
        print(
            json.dumps(
                {
                    "suite": args.suite,
                    "passed": not failed,
                    "checks": [
                        {"name": c.name, "passed": c.passed, "detail": c.detail}
                        for c in checks
                    ],
                },
                sort_keys=True,
                indent=2,
            )
        )
    else:
        for c in checks:
            print(f"{'PASS' if c.passed else 'FAIL'} {c.name} ({c.detail})")
        print(
            f"suite {args.suite}: {len(checks) - len(failed)}/{len(checks)} checks passed"
        )
    return 1 if failed else 0


def _parse_coords(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(","))


def _sequence_from_args(args: argparse.Namespace) -> groups.FolnerSequence:
    if args.kind == "z_interval":
        return groups.z_intervals(anchor=args.anchor)
    if args.kind == "zd_box":
        d = groups.group_rank(args.group)
        return groups.zd_boxes(d)
    if args.kind == "heisenberg_box":
        return groups.heisenberg_boxes()
    raise ConfigError(f"unsupported Folner kind {args.kind!r} for this command")


def _cmd_defect(args: argparse.Namespace) -> int:
    seq = _sequence_from_args(args)
    g = groups.GroupElement(seq.group_id, _parse_coords(args.g))
    F = seq.subset(args.n)
    sides = ("left", "right") if args.side == "both" else (args.side,)
    results = {}
    for side in sides:
        fn = groups.folner_defect_left if side == "left" else groups.folner_defect_right
        results[side] = fn(F, g)
    if args.json:
        print(
            json.dumps(
                {
                    "group": seq.group_id,
                    "kind": seq.kind,
                    "n": args.n,
                    "g": list(g.coords),
                    "defects": {k: str(v) for k, v in results.items()},
                },
                sort_keys=True,
            )
        )
    else:
        for side, value in results.items():
            print(f"n={args.n} g={args.g} side={side} defect={value}")
    return 0


def _cmd_tempered(args: argparse.Namespace) -> int:
    seq = _sequence_from_args(args)
    report = groups.temperedness_report(seq, args.upto)
    payload = {
        "indices": list(report.indices),
        "ratios": [str(r) for r in report.ratios],
        "constant": str(report.constant),
    }
    if args.extract:
        picked = groups.extract_tempered_subsequence(
            seq, Fraction(args.constant), args.extract
        )
        payload["extracted"] = list(picked)
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for n, r in zip(report.indices, report.ratios):
            print(f"n={n} ratio={r}")
        print(f"constant={report.constant}")
        if args.extract:
            print("extracted=" + ",".join(map(str, payload["extracted"])))
    return 0


def _point_spec(text: str) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _system_from_args(args: argparse.Namespace) -> systems.GSystem:
    params = {}
    if args.params:
        try:
            params = json.loads(args.params)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--params is not valid JSON: {exc}")
    return systems.build_system(args.system, params)


def _cmd_wdist(args: argparse.Namespace) -> int:
    sys_obj = _system_from_args(args)
    seq = groups.z_intervals(anchor=args.anchor)
    if sys_obj.group_id != "Z":
        raise ConfigError("wdist shortcut supports Z-actions; use 'run' otherwise")
    x = systems.parse_point(sys_obj, _point_spec(args.x))
    y = systems.parse_point(sys_obj, _point_spec(args.y))
    F = seq.subset(args.n)
    mu = measures.empirical_measure(sys_obj, x, F)
    nu = measures.empirical_measure(sys_obj, y, F)
    value = transport.wasserstein_empirical(mu, nu, args.tol)
    if args.json:
        print(json.dumps({"n": args.n, "value": value}, sort_keys=True))
    else:
        print(_fmt(value))
    return 0


def _cmd_trace(args: argparse.Namespace) -> int:
    sys_obj = _system_from_args(args)
    if sys_obj.group_id != "Z":
        raise ConfigError("trace shortcut supports Z-actions; use 'run' otherwise")
    seq = groups.z_intervals(anchor=args.anchor)
    x = systems.parse_point(sys_obj, _point_spec(args.x))
    y = systems.parse_point(sys_obj, _point_spec(args.y))
    indices = [int(part) for part in args.indices.split(",")]
    fn = (
        analysis.wasserstein_trace
        if args.trace_kind == "wasserstein"
        else analysis.mean_distance_trace
    )
    trace = fn(sys_obj, x, y, seq, indices, args.tol)
    if args.csv:
        _write_csv(args.csv, *trace.csv_table())
    if args.json:
        print(
            json.dumps(
                {
                    "kind": trace.kind,
                    "indices": list(trace.indices),
                    "values": list(trace.values),
                    "limsup_estimate": trace.limsup_estimate,
                },
                sort_keys=True,
            )
        )
    else:
        for n, v in zip(trace.indices, trace.values):
            print(f"n={n} value={_fmt(v)}")
        print(f"limsup_estimate={_fmt(trace.limsup_estimate)}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="folnerlab",
        description="numerical workbench for averaging sequences, empirical "
        "measures and exact optimal-assignment Wasserstein distances",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list systems, groups and Folner kinds")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_catalog)

    p = sub.add_parser("run", help="execute a JSON experiment config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=".", help="directory for output files")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_run)

    p = sub.add_parser("verify", help="run a built-in verification suite")
    p.add_argument("suite")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("defect", help="exact averaging-set defect")
    p.add_argument("--group", default="Z")
    p.add_argument("--kind", default="z_interval")
    p.add_argument("--anchor", default="left", choices=("left", "right"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--g", required=True, help="comma-separated coordinates")
    p.add_argument("--side", default="both", choices=("left", "right", "both"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_defect)

    p = sub.add_parser("tempered", help="temperedness report and extraction")
    p.add_argument("--group", default="Z")
    p.add_argument("--kind", default="z_interval")
    p.add_argument("--anchor", default="left", choices=("left", "right"))
    p.add_argument("--upto", type=int, required=True)
    p.add_argument("--extract", type=int, default=0, help="subsequence length")
    p.add_argument("--constant", default="2", help="temperedness constant")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_tempered)

    p = sub.add_parser("wdist", help="Wasserstein distance at a single index")
    p.add_argument("--system", required=True)
    p.add_argument("--params", default="")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--anchor", default="left", choices=("left", "right"))
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_wdist)

    p = sub.add_parser("trace", help="pseudometric trace along the intervals")
    p.add_argument("--trace-kind", default="wasserstein",
                   choices=("wasserstein", "mean_distance"))
    p.add_argument("--system", required=True)
    p.add_argument("--params", default="")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--indices", required=True, help="comma-separated")
    p.add_argument("--anchor", default="left", choices=("left", "right"))
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--csv", default="")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_trace)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error[ConfigError]: {exc}", file=_sys.stderr)
        return 2
    except FolnerlabError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=_sys.stderr)
        return 1
    except (ValueError, IndexError, KeyError) as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=_sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
