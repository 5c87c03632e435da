"""File formats: topology CSV pairs, statistics JSON, assignment JSON.

Writes are atomic (temp file + rename) and byte-deterministic: JSON is
dumped with sorted keys, two-space indent, and shortest round-trip float
formatting, so identical inputs always produce identical bytes.

External bus labels are arbitrary strings; they map to dense 0-based
internal ids in file order and every output carries the original labels.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .assignment import Assignment
from .errors import DanglingBranchEndpoint, DuplicateBusId, ParseError
from .models import (
    ProbabilityTable,
    ScalingLaw,
    TailedExponentialModel,
    ValueAxis,
    validate_table,
)
from .topology import Branch, Bus, BusType, Grid, build_grid

BUSES_FILE = "buses.csv"
BRANCHES_FILE = "branches.csv"
GENERATION_FILE = "generation.json"
LOADS_FILE = "loads.json"

_BUS_TYPES = {"G": BusType.GENERATION, "L": BusType.LOAD, "C": BusType.CONNECTION}


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: str | Path, payload: dict) -> None:
    """Dump a JSON document atomically with deterministic formatting."""
    text = json.dumps(_plain(payload), sort_keys=True, indent=2) + "\n"
    _atomic_write_text(Path(path), text)


def read_json(path: str | Path) -> dict:
    p = Path(path)
    try:
        with open(p, encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as exc:
        raise ParseError("file not found", path=str(p)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path=str(p), line=exc.lineno) from exc


def _plain(obj):
    """Recursively convert numpy scalars/arrays for json.dumps."""
    if isinstance(obj, dict):
        return {key: _plain(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(value) for value in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(value) for value in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


@dataclass(frozen=True)
class TopologyData:
    """A validated grid plus the external label of every internal id."""

    grid: Grid
    labels: tuple[str, ...]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def internal_id(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise DanglingBranchEndpoint(f"unknown bus label {label!r}") from None


def _read_csv_rows(path: Path) -> list[tuple[int, list[str]]]:
    """Non-empty CSV rows with their 1-based line numbers."""
    try:
        with open(path, encoding="utf-8", newline="") as handle:
            rows = []
            for lineno, row in enumerate(csv.reader(handle), start=1):
                cells = [cell.strip() for cell in row]
                if any(cells):
                    rows.append((lineno, cells))
            return rows
    except FileNotFoundError as exc:
        raise ParseError("file not found", path=str(path)) from exc


def parse_topology(directory: str | Path) -> TopologyData:
    """Read buses.csv and branches.csv from a directory into a Grid.

    Bus rows are ``label,type`` with type in {G, L, C}; branch rows are
    ``from,to[,x]`` referencing bus labels, x an optional positive
    reactance. A leading header row is tolerated. All parse problems
    carry path and line number.
    """
    directory = Path(directory)
    bus_path = directory / BUSES_FILE
    branch_path = directory / BRANCHES_FILE

    buses: list[Bus] = []
    labels: list[str] = []
    index: dict[str, int] = {}
    for lineno, cells in _read_csv_rows(bus_path):
        if [cell.lower() for cell in cells[:2]] == ["id", "type"]:
            continue
        if len(cells) != 2:
            raise ParseError(
                f"expected 'id,type', got {len(cells)} fields", str(bus_path), lineno
            )
        label, type_code = cells
        if type_code not in _BUS_TYPES:
            raise ParseError(
                f"bus type must be one of G, L, C, got {type_code!r}",
                str(bus_path),
                lineno,
            )
        if label in index:
            raise DuplicateBusId(f"{bus_path}:{lineno}: bus {label!r} already defined")
        index[label] = len(buses)
        labels.append(label)
        buses.append(Bus(id=len(buses), bus_type=_BUS_TYPES[type_code]))

    branches: list[Branch] = []
    for lineno, cells in _read_csv_rows(branch_path):
        if [cell.lower() for cell in cells[:2]] == ["from", "to"]:
            continue
        if len(cells) not in (2, 3):
            raise ParseError(
                f"expected 'from,to[,x]', got {len(cells)} fields",
                str(branch_path),
                lineno,
            )
        endpoints = []
        for label in cells[:2]:
            if label not in index:
                raise DanglingBranchEndpoint(
                    f"{branch_path}:{lineno}: unknown bus label {label!r}"
                )
            endpoints.append(index[label])
        reactance = None
        if len(cells) == 3 and cells[2] != "":
            try:
                reactance = float(cells[2])
            except ValueError:
                raise ParseError(
                    f"reactance must be a number, got {cells[2]!r}",
                    str(branch_path),
                    lineno,
                ) from None
        branches.append(Branch(from_bus=endpoints[0], to_bus=endpoints[1], reactance=reactance))

    return TopologyData(grid=build_grid(buses, branches), labels=tuple(labels))


def write_topology(data: TopologyData, directory: str | Path) -> None:
    """Write buses.csv and branches.csv; inverse of parse_topology."""
    directory = Path(directory)
    code = {BusType.GENERATION: "G", BusType.LOAD: "L", BusType.CONNECTION: "C"}
    bus_lines = [
        f"{data.labels[bus.id]},{code[bus.bus_type]}" for bus in data.grid.buses
    ]
    _atomic_write_text(directory / BUSES_FILE, "\n".join(bus_lines) + "\n")
    branch_lines = []
    for branch in data.grid.branches:
        x = "" if branch.reactance is None else repr(branch.reactance)
        branch_lines.append(
            f"{data.labels[branch.from_bus]},{data.labels[branch.to_bus]},{x}"
        )
    text = "\n".join(branch_lines) + ("\n" if branch_lines else "")
    _atomic_write_text(directory / BRANCHES_FILE, text)


@dataclass(frozen=True)
class StatsData:
    """A deserialized statistics file: law, sampler model, joint table."""

    law: ScalingLaw
    model: TailedExponentialModel
    table: ProbabilityTable
    axis: ValueAxis
    source: dict | None = None


def stats_to_dict(stats: StatsData) -> dict:
    payload = {
        "scaling_law": {"a": stats.law.a, "b": stats.law.b, "c": stats.law.c},
        "beta": stats.model.beta,
        "tail_fraction": stats.model.tail_fraction,
        "tail_multiplier": list(stats.model.tail_multiplier),
        "bin_edges": [float(e) for e in stats.table.bin_edges],
        "joint": stats.table.joint,
        "axis": stats.axis.value,
    }
    if stats.source is not None:
        payload["source"] = stats.source
    return payload


def write_stats(path: str | Path, stats: StatsData) -> None:
    write_json(path, stats_to_dict(stats))


def read_stats(path: str | Path) -> StatsData:
    """Load and validate a statistics file (the table is re-checked)."""
    raw = read_json(path)
    p = str(path)
    for key in ("scaling_law", "tail_fraction", "tail_multiplier", "bin_edges", "joint", "axis"):
        if key not in raw:
            raise ParseError(f"missing key {key!r}", path=p)
    try:
        law = ScalingLaw(
            a=float(raw["scaling_law"]["a"]),
            b=float(raw["scaling_law"]["b"]),
            c=float(raw["scaling_law"]["c"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad scaling_law: {exc}", path=p) from exc
    axis_code = raw["axis"]
    if axis_code not in ("generation", "load"):
        raise ParseError(f"axis must be 'generation' or 'load', got {axis_code!r}", path=p)
    axis = ValueAxis(axis_code)
    beta = raw.get("beta")
    try:
        lo, hi = raw["tail_multiplier"]
        model = TailedExponentialModel(
            beta=None if beta is None else float(beta),
            tail_fraction=float(raw["tail_fraction"]),
            tail_multiplier=(float(lo), float(hi)),
        )
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad sampler model: {exc}", path=p) from exc
    table = validate_table(raw["joint"], raw["bin_edges"], axis=axis)
    return StatsData(law=law, model=model, table=table, axis=axis, source=raw.get("source"))


@dataclass(frozen=True)
class AssignmentData:
    """A deserialized assignment file, labels unresolved."""

    seed: int
    axis: ValueAxis
    target_mw: float
    assigned_mw: float
    values: dict[str, float]
    realized_stats: dict


def assignment_to_dict(assignment: Assignment, labels, axis: ValueAxis) -> dict:
    values = [
        {"bus": labels[bus], "mw": float(assignment.values[bus])}
        for bus in sorted(assignment.values)
    ]
    realized = {
        "beta": assignment.beta,
        "pearson_rho": assignment.pearson_rho,
        "tail_share": assignment.tail_share,
        "rescaled": assignment.rescaled,
        "matched_counts": assignment.matched_counts,
    }
    return {
        "seed": assignment.seed,
        "axis": axis.value,
        "totals": {
            "target_mw": assignment.target_total,
            "assigned_mw": assignment.total,
        },
        "values": values,
        "realized_stats": realized,
    }


def write_assignment(path: str | Path, assignment: Assignment, labels, axis: ValueAxis) -> None:
    write_json(path, assignment_to_dict(assignment, labels, axis))


def read_assignment(path: str | Path) -> AssignmentData:
    """Load an assignment file without checking its invariants.

    Invariants (totals consistency, bus coverage) are the validation
    pass's job, so tampered files load cleanly and fail validation.
    """
    raw = read_json(path)
    p = str(path)
    for key in ("seed", "axis", "totals", "values"):
        if key not in raw:
            raise ParseError(f"missing key {key!r}", path=p)
    axis_code = raw["axis"]
    if axis_code not in ("generation", "load"):
        raise ParseError(f"axis must be 'generation' or 'load', got {axis_code!r}", path=p)
    values: dict[str, float] = {}
    for i, entry in enumerate(raw["values"]):
        if not isinstance(entry, dict) or "bus" not in entry or "mw" not in entry:
            raise ParseError(f"values[{i}] must be an object with bus and mw", path=p)
        bus = str(entry["bus"])
        if bus in values:
            raise DuplicateBusId(f"{p}: bus {bus!r} listed twice")
        values[bus] = float(entry["mw"])
    totals = raw["totals"]
    try:
        target = float(totals["target_mw"])
        assigned = float(totals["assigned_mw"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad totals: {exc}", path=p) from exc
    return AssignmentData(
        seed=int(raw["seed"]),
        axis=ValueAxis(axis_code),
        target_mw=target,
        assigned_mw=assigned,
        values=values,
        realized_stats=raw.get("realized_stats") or {},
    )


def resolve_assignment(data: AssignmentData, topology: TopologyData) -> dict[int, float]:
    """Map an assignment file's labels onto internal bus ids."""
    resolved: dict[int, float] = {}
    for label, mw in data.values.items():
        resolved[topology.internal_id(label)] = mw
    return resolved
