"""Command-line entry point.

Subcommands: extract (measure a finished case), assign (generate and
place capacities and loads), validate (power-flow and statistical
checks), scaling (evaluate the laws), tables (dump the embedded
defaults). Exit codes: 0 success, 1 validation failure, 2 I/O or parse
error, 3 internal invariant breach. Module errors print one JSON object
to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import defaults
from .assignment import Assignment, AssignmentOptions, assign_generation, assign_loads
from .empirical import measure_axis
from .errors import GridSeedError, ParseError
from .fileio import (
    GENERATION_FILE,
    LOADS_FILE,
    AssignmentData,
    StatsData,
    TopologyData,
    assignment_to_dict,
    parse_topology,
    read_assignment,
    read_stats,
    resolve_assignment,
    write_json,
    write_stats,
    _plain,
)
from .models import TailedExponentialModel, ValueAxis, evaluate_scaling_law
from .powerflow import (
    build_injections,
    check_constraints,
    dc_power_flow,
    default_slack,
    statistical_report,
)
from .topology import BusType, node_degrees

_AXIS_FLAG = {"gen": ValueAxis.GENERATION, "load": ValueAxis.LOAD}


def _default_stats(axis: ValueAxis) -> StatsData:
    bundle = (
        defaults.generation_defaults()
        if axis is ValueAxis.GENERATION
        else defaults.load_defaults()
    )
    return StatsData(
        law=bundle.law,
        model=bundle.model,
        table=bundle.table,
        axis=bundle.axis,
        source=bundle.source,
    )


def _load_stats(path: str | None, axis: ValueAxis) -> StatsData:
    if path is None:
        return _default_stats(axis)
    stats = read_stats(path)
    if stats.axis is not axis:
        raise ParseError(
            f"expected a {axis.value} statistics file, got {stats.axis.value}",
            path=path,
        )
    return stats


def _print_json(payload: dict) -> None:
    print(json.dumps(_plain(payload), sort_keys=True))


def _assignment_summary(assignment: Assignment) -> dict:
    return {
        "buses": len(assignment.values),
        "total_mw": assignment.total,
        "target_mw": assignment.target_total,
        "beta_mw": assignment.beta,
        "pearson_rho": assignment.pearson_rho,
        "rescaled": assignment.rescaled,
    }


def cmd_scaling(args) -> int:
    payload = {
        "n": args.n,
        "generation_mw": evaluate_scaling_law(defaults.GENERATION_SCALING_LAW, args.n),
        "load_mw": evaluate_scaling_law(defaults.LOAD_SCALING_LAW, args.n),
    }
    _print_json(payload)
    return 0


def cmd_tables(args) -> int:
    axis = ValueAxis.GENERATION if args.which == 1 else ValueAxis.LOAD
    write_stats(args.out, _default_stats(axis))
    return 0


def cmd_assign(args) -> int:
    if not 0 <= args.seed < 2**64:
        raise ParseError(f"seed must be an unsigned 64-bit integer, got {args.seed}")
    topology = parse_topology(args.topology)
    gen_stats = _load_stats(args.gen_stats, ValueAxis.GENERATION)
    load_stats = _load_stats(args.load_stats, ValueAxis.LOAD)

    gen = assign_generation(
        topology.grid,
        AssignmentOptions(
            seed=args.seed,
            scaling_law=gen_stats.law,
            value_model=gen_stats.model,
            table=gen_stats.table,
        ),
    )
    load = assign_loads(
        topology.grid,
        AssignmentOptions(
            seed=args.seed,
            scaling_law=load_stats.law,
            value_model=load_stats.model,
            table=load_stats.table,
        ),
        gen_total=gen.total,
    )

    out = Path(args.out)
    write_json(out / GENERATION_FILE, assignment_to_dict(gen, topology.labels, ValueAxis.GENERATION))
    write_json(out / LOADS_FILE, assignment_to_dict(load, topology.labels, ValueAxis.LOAD))

    if args.figures:
        _assignment_figures(args.figures, topology, gen, gen_stats, ValueAxis.GENERATION)
        _assignment_figures(args.figures, topology, load, load_stats, ValueAxis.LOAD)

    _print_json(
        {
            "seed": args.seed,
            "n_buses": topology.grid.n_buses,
            "generation": _assignment_summary(gen),
            "load": _assignment_summary(load),
        }
    )
    return 0


def _assignment_figures(
    directory: str, topology: TopologyData, assignment: Assignment, stats: StatsData, axis: ValueAxis
) -> None:
    from . import figures

    ids = sorted(assignment.values)
    values = np.array([assignment.values[b] for b in ids])
    degrees = node_degrees(topology.grid)[ids]
    tag = "gen" if axis is ValueAxis.GENERATION else "load"
    base = Path(directory)
    figures.value_histogram_figure(
        values, assignment.beta, base / f"{tag}_histogram.png",
        f"{axis.value} values, {len(ids)} buses",
    )
    figures.scatter_figure(
        values, degrees, assignment.pearson_rho, base / f"{tag}_scatter.png",
        f"{axis.value} placement",
    )
    figures.table_heatmap_figure(
        [("target", stats.table), ("realized", assignment.realized_table)],
        base / f"{tag}_tables.png",
    )


def cmd_extract(args) -> int:
    axis = _AXIS_FLAG[args.axis]
    case = Path(args.case)
    topology = parse_topology(case)
    data = read_assignment(case / (GENERATION_FILE if axis is ValueAxis.GENERATION else LOADS_FILE))
    resolved = resolve_assignment(data, topology)
    ids = sorted(resolved)
    values = np.array([resolved[b] for b in ids])
    degrees = node_degrees(topology.grid)[ids]

    report = measure_axis(values, degrees, defaults.BIN_EDGES, axis)
    stats = StatsData(
        # one snapshot cannot pin a size-scaling law; ship the default
        law=(
            defaults.GENERATION_SCALING_LAW
            if axis is ValueAxis.GENERATION
            else defaults.LOAD_SCALING_LAW
        ),
        model=TailedExponentialModel(
            beta=report.fitted_beta,
            tail_fraction=defaults.DEFAULT_TAIL_FRACTION,
            tail_multiplier=defaults.DEFAULT_TAIL_MULTIPLIER,
        ),
        table=report.joint_table,
        axis=axis,
    )
    out = Path(args.out)
    write_stats(out, stats)
    report_path = out.with_suffix(".report.json")
    write_json(
        report_path,
        {
            "axis": axis.value,
            "n_buses": len(ids),
            "fitted_beta_mw": report.fitted_beta,
            "pearson_rho": report.pearson_rho,
            "tail_share": report.tail_share,
            "pdf": {
                "edges": report.pdf_histogram.edges,
                "densities": report.pdf_histogram.densities,
                "counts": report.pdf_histogram.counts,
            },
            "joint": report.joint_table.joint,
        },
    )

    if args.figures:
        from . import figures

        base = Path(args.figures)
        figures.value_histogram_figure(
            values, report.fitted_beta, base / f"{args.axis}_histogram.png",
            f"{axis.value} values, {len(ids)} buses",
        )
        figures.scatter_figure(
            values, degrees, report.pearson_rho, base / f"{args.axis}_scatter.png",
            f"{axis.value} case data",
        )
        figures.table_heatmap_figure(
            [("extracted", report.joint_table)], base / f"{args.axis}_joint.png"
        )

    _print_json(
        {
            "axis": axis.value,
            "fitted_beta_mw": report.fitted_beta,
            "pearson_rho": report.pearson_rho,
            "tail_share": report.tail_share,
            "stats_file": str(out),
            "report_file": str(report_path),
        }
    )
    return 0


def _check(checks: list, name: str, passed: bool, detail: str) -> bool:
    checks.append({"name": name, "passed": bool(passed), "detail": detail})
    return bool(passed)


def _totals_check(checks: list, name: str, data: AssignmentData) -> None:
    total = sum(data.values.values())
    scale = max(1.0, abs(total))
    _check(
        checks,
        name,
        abs(total - data.assigned_mw) <= 1e-9 * scale,
        f"recorded {data.assigned_mw!r} vs recomputed {total!r}",
    )


def cmd_validate(args) -> int:
    topology = parse_topology(args.topology)
    grid = topology.grid
    adir = Path(args.assignment)
    gen_data = read_assignment(adir / GENERATION_FILE)
    load_data = read_assignment(adir / LOADS_FILE)

    checks: list[dict] = []
    report: dict = {"checks": checks}

    gen_values: dict[int, float] = {}
    load_values: dict[int, float] = {}
    try:
        gen_values = resolve_assignment(gen_data, topology)
        load_values = resolve_assignment(load_data, topology)
        _check(checks, "bus_resolution", True, "all file labels exist in the topology")
    except GridSeedError as exc:
        _check(checks, "bus_resolution", False, str(exc))

    if gen_values and load_values:
        _totals_check(checks, "generation_totals_consistent", gen_data)
        _totals_check(checks, "load_totals_consistent", load_data)

        _check(
            checks,
            "bus_coverage",
            set(gen_values) == set(grid.buses_of_type(BusType.GENERATION))
            and set(load_values) == set(grid.buses_of_type(BusType.LOAD)),
            "assignment files must cover exactly the G and L buses",
        )

        gen_total = sum(gen_values.values())
        load_total = sum(load_values.values())
        trigger = defaults.RESCALE_TRIGGER
        _check(
            checks,
            "generation_total_bound",
            gen_total <= trigger * gen_data.target_mw * (1 + 1e-9),
            f"generation {gen_total:.6f} MW vs trigger x target "
            f"{trigger * gen_data.target_mw:.6f} MW",
        )
        _check(
            checks,
            "load_total_bound",
            load_total <= trigger * load_data.target_mw * (1 + 1e-9),
            f"load {load_total:.6f} MW vs trigger x target "
            f"{trigger * load_data.target_mw:.6f} MW",
        )
        _check(
            checks,
            "balance",
            load_total <= gen_total * (1 + 1e-9),
            f"load {load_total:.6f} MW vs generation capacity {gen_total:.6f} MW",
        )

        flows = None
        if gen_total > 0 and load_total > 0:
            share = load_total / gen_total
            dispatch = {bus: cap * share for bus, cap in gen_values.items()}
            slack = default_slack(grid, gen_values)
            try:
                solution = dc_power_flow(
                    grid, build_injections(grid, dispatch, load_values), slack
                )
                flows = solution.flows
                _check(
                    checks,
                    "power_flow",
                    True,
                    f"solved with slack bus {topology.labels[slack]!r}, "
                    f"max |flow| {float(np.abs(solution.flows).max(initial=0.0)):.6f} MW",
                )
            except GridSeedError as exc:
                _check(checks, "power_flow", False, str(exc))
            constraint_report = check_constraints(dispatch, gen_values, load_values)
            _check(
                checks,
                "constraints",
                constraint_report.feasible,
                f"{len(constraint_report.violations)} violations, "
                f"unchecked: {', '.join(constraint_report.unchecked) or 'none'}",
            )
            report["constraint_violations"] = [
                v.as_dict() for v in constraint_report.violations
            ]
        else:
            _check(checks, "power_flow", False, "zero totals, nothing to dispatch")

        stats_reports = {}
        for tag, values, data, bundle in (
            ("generation", gen_values, gen_data, defaults.generation_defaults()),
            ("load", load_values, load_data, defaults.load_defaults()),
        ):
            matched = data.realized_stats.get("matched_counts")
            stat = statistical_report(
                values,
                grid,
                bundle.table,
                law=bundle.law,
                matched_counts=None if matched is None else np.asarray(matched),
            )
            if matched is not None:
                _check(
                    checks,
                    f"{tag}_conditional_structure",
                    stat.conditional_tvd == 0.0,
                    f"slot-count TVD {stat.conditional_tvd!r} against the rounding targets",
                )
            else:
                _check(
                    checks,
                    f"{tag}_conditional_structure",
                    True,
                    f"no slot bookkeeping in file; recomputed TVD {stat.conditional_tvd!r}",
                )
            stats_reports[tag] = {
                "conditional_tvd": stat.conditional_tvd,
                "pearson_rho": stat.pearson_rho,
                "tail_share": stat.tail_share,
                "total_mw": stat.total,
                "predicted_total_mw": stat.predicted_total,
                "flags": list(stat.flags),
            }
        report["statistics"] = stats_reports

        if args.figures and flows is not None:
            from . import figures

            figures.flow_histogram_figure(
                flows, Path(args.figures) / "flows.png", "DC branch flows"
            )

    status_ok = all(c["passed"] for c in checks)
    report["status"] = "ok" if status_ok else "failed"
    if args.report:
        write_json(args.report, report)
    _print_json({"status": report["status"], "checks": checks})
    return 0 if status_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridseed",
        description=(
            "Assign statistically realistic generation capacities and loads "
            "to a synthetic transmission-grid topology."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="measure a finished case into a statistics file")
    p.add_argument("--case", required=True, help="directory with topology CSVs and assignment JSON")
    p.add_argument("--axis", required=True, choices=("gen", "load"))
    p.add_argument("--out", required=True, help="statistics JSON to write")
    p.add_argument("--figures", help="directory for PNG figures")
    p.set_defaults(handler=cmd_extract)

    p = sub.add_parser("assign", help="generate and place capacities and loads")
    p.add_argument("--topology", required=True, help="directory with buses.csv and branches.csv")
    p.add_argument("--gen-stats", help="generation statistics JSON (default: embedded)")
    p.add_argument("--load-stats", help="load statistics JSON (default: embedded)")
    p.add_argument("--seed", required=True, type=int, help="unsigned 64-bit seed")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--figures", help="directory for PNG figures")
    p.set_defaults(handler=cmd_assign)

    p = sub.add_parser("validate", help="power-flow and statistical checks on a case")
    p.add_argument("--topology", required=True)
    p.add_argument("--assignment", required=True, help="directory with generation.json and loads.json")
    p.add_argument("--report", help="write the full validation report here")
    p.add_argument("--figures", help="directory for PNG figures")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("scaling", help="evaluate both scaling laws at a network size")
    p.add_argument("--n", required=True, type=int)
    p.set_defaults(handler=cmd_scaling)

    p = sub.add_parser("tables", help="dump an embedded default statistics file")
    p.add_argument("--which", required=True, type=int, choices=(1, 2),
                   help="1 = generation, 2 = load")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_tables)
    return parser


def _error_json(exc: Exception) -> str:
    body: dict = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        if exc.path is not None:
            body["path"] = exc.path
        if exc.line is not None:
            body["line"] = exc.line
    return json.dumps({"error": body}, sort_keys=True)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ParseError, OSError, GridSeedError) as exc:
        print(_error_json(exc), file=sys.stderr)
        return 2
    except Exception as exc:  # anything else is a broken internal invariant
        print(_error_json(exc), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
