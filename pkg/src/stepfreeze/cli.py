"""Command-line interface.

Exit codes: 0 all cells ok, 2 partial failures, 3 total failure.
Worker count for sweeps comes from the STEPFREEZE_WORKERS environment
variable.
"""

from __future__ import annotations

import csv as csv_mod
import json
import sys
from pathlib import Path

import click

from . import io as io_mod
from . import markov, nullmodel, pipeline
from .grid import PolarGrid, box_center


def _write_json(obj, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def _record_row(rec_dict: dict) -> dict:
    esc = rec_dict.get("escape") or {}
    return {
        "subject": rec_dict["event"]["subject"],
        "dataset": rec_dict["event"]["dataset"],
        "label": rec_dict["event"]["label"],
        "t_start": rec_dict["event"]["t_start"],
        "t_end": rec_dict["event"]["t_end"],
        "p": rec_dict["grid"]["p"],
        "q": rec_dict["grid"]["q"],
        "status": rec_dict["status"],
        "psi_min_deg": esc.get("psi_min_deg"),
        "psi_tr_deg": rec_dict.get("psi_tr_deg"),
        "met_F_seconds": esc.get("met_F_seconds"),
        "mix_F_seconds": esc.get("mix_F_seconds"),
        "lambda1": esc.get("lambda1"),
        "lambda_dec": esc.get("lambda_dec"),
        "f_count": rec_dict.get("f_count"),
    }


def _write_records(dicts: list[dict], out: Path, fmt: str, stem: str) -> None:
    if fmt == "json":
        _write_json(dicts if len(dicts) > 1 else dicts[0],
                    out / f"{stem}.json")
    else:
        rows = [_record_row(d) for d in dicts]
        out.mkdir(parents=True, exist_ok=True)
        with open(out / f"{stem}.csv", "w", newline="") as fh:
            writer = csv_mod.DictWriter(fh, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)


def _exit_code(statuses: list[str]) -> int:
    if all(s == "ok" for s in statuses):
        return 0
    if any(s == "ok" for s in statuses):
        return 2
    return 3


def _load_data_map(data: tuple[str, ...], dt: float | None) -> dict:
    """Map dataset ids to loaded series.  Entries are 'dataset=path' or a
    bare path keyed '*' that serves every dataset."""
    out = {}
    for entry in data:
        if "=" in entry:
            key, path = entry.split("=", 1)
        else:
            key, path = "*", entry
        out[key] = (path, dt)
    return out


def _series_for(data_map: dict, event: pipeline.EventSpec):
    key = event.dataset if event.dataset in data_map else "*"
    if key not in data_map:
        raise click.ClickException(
            f"no --data entry for dataset {event.dataset!r}")
    path, dt = data_map[key]
    return io_mod.load_timeseries(path, dt=dt, subject_id=event.subject,
                                  dataset_id=event.dataset)


def _load_events(events_path, subject, dataset) -> list[pipeline.EventSpec]:
    events = io_mod.load_annotations(events_path)
    specs = [
        pipeline.EventSpec(
            subject=ev["subject"], dataset=str(ev["dataset"]),
            t_start=int(ev["t_start"]), t_end=int(ev["t_end"]),
            label=str(ev.get("label", "")),
        )
        for ev in events
    ]
    if subject:
        specs = [s for s in specs if s.subject == subject]
    if dataset:
        specs = [s for s in specs if s.dataset == dataset]
    if not specs:
        raise click.ClickException("no events match the selection")
    return specs


@click.group()
def main():
    """Stepping-to-freezing transition analysis."""


data_opt = click.option("--data", multiple=True, required=True,
                        help="CSV record, or repeated dataset=path entries")
dt_opt = click.option("--dt", type=float, default=None,
                      help="sample period for single-column CSVs")
events_opt = click.option("--events", "events_path", required=True,
                          type=click.Path(exists=True),
                          help="annotation JSON")
subject_opt = click.option("--subject", default="", help="filter by subject")
dataset_opt = click.option("--dataset", default="", help="filter by dataset")
p_opt = click.option("--p", type=float, default=0.1,
                     help="radial box thickness")
q_opt = click.option("--q", type=float, default=5.0,
                     help="angular box width in degrees")
out_opt = click.option("--out", type=click.Path(), default="out",
                       help="output directory")
fmt_opt = click.option("--format", "fmt",
                       type=click.Choice(["json", "csv"]), default="json")


@main.command()
@data_opt
@dt_opt
@events_opt
@subject_opt
@dataset_opt
@p_opt
@q_opt
@out_opt
@fmt_opt
def analyze(data, dt, events_path, subject, dataset, p, q, out, fmt):
    """Analyze each selected event with one grid."""
    specs = _load_events(events_path, subject, dataset)
    data_map = _load_data_map(data, dt)
    out = Path(out)
    statuses = []
    for idx, spec in enumerate(specs):
        ts = _series_for(data_map, spec)
        record = pipeline.analyze_event(ts, spec, p, q)
        statuses.append(record.status)
        stem = (f"{spec.subject or 'event'}_{spec.dataset}_"
                f"{spec.label or idx}")
        _write_records([record.to_json_dict(include_model=True)], out, fmt,
                       stem)
        click.echo(f"{stem}: {record.status}")
    sys.exit(_exit_code(statuses))


@main.command()
@data_opt
@dt_opt
@events_opt
@subject_opt
@dataset_opt
@click.option("--p", "p_values", type=float, multiple=True,
              help="radial sizes (default Appendix grid)")
@click.option("--q", "q_values", type=float, multiple=True,
              help="angular sizes in degrees (default Appendix grid)")
@click.option("--interval", "intervals", multiple=True,
              help="extra t_start:t_end window variants")
@out_opt
@fmt_opt
def sweep(data, dt, events_path, subject, dataset, p_values, q_values,
          intervals, out, fmt):
    """Sensitivity sweep over box sizes and window variants."""
    specs = _load_events(events_path, subject, dataset)
    data_map = _load_data_map(data, dt)
    variants = None
    if intervals:
        variants = []
        for iv in intervals:
            t0, t1 = iv.split(":")
            variants.append((int(t0), int(t1)))
    sweep_spec = pipeline.SweepSpec(
        p_values=list(p_values) or list(pipeline.DEFAULT_P_VALUES),
        q_values=list(q_values) or list(pipeline.DEFAULT_Q_VALUES),
        interval_variants=variants,
    )
    out = Path(out)
    statuses = []
    for idx, spec in enumerate(specs):
        ts = _series_for(data_map, spec)
        records = pipeline.sweep(ts, spec, sweep_spec)
        statuses += [r.status for r in records]
        stem = (f"sweep_{spec.subject or 'event'}_{spec.dataset}_"
                f"{spec.label or idx}")
        _write_records([r.to_json_dict() for r in records], out, fmt, stem)
        ok = sum(r.ok for r in records)
        click.echo(f"{stem}: {ok}/{len(records)} cells ok")
    sys.exit(_exit_code(statuses))


@main.command()
@data_opt
@dt_opt
@events_opt
@subject_opt
@dataset_opt
@p_opt
@q_opt
@out_opt
@fmt_opt
def merge(data, dt, events_path, subject, dataset, p, q, out, fmt):
    """Merge the box counts of all selected events into one chain."""
    specs = _load_events(events_path, subject, dataset)
    data_map = _load_data_map(data, dt)
    ts_list = [_series_for(data_map, spec) for spec in specs]
    record = pipeline.merge_events(ts_list, specs, p, q)
    _write_records([record.to_json_dict(include_model=True)], Path(out),
                   fmt, f"merged_{specs[0].subject or 'events'}")
    click.echo(f"merged {len(specs)} events: {record.status}")
    sys.exit(_exit_code([record.status]))


@main.command()
@click.option("--in", "inputs", multiple=True, required=True,
              type=click.Path(exists=True),
              help="analysis record JSON files")
@out_opt
@fmt_opt
def cohort(inputs, out, fmt):
    """Per-subject preferred-phase table from analysis record files."""
    dicts = []
    for path in inputs:
        with open(path) as fh:
            loaded = json.load(fh)
        dicts += loaded if isinstance(loaded, list) else [loaded]
    rows = [_record_row(d) for d in dicts]
    ok_rows = [r for r in rows if r["status"] == "ok"]
    if not ok_rows:
        click.echo("no successful records", err=True)
        sys.exit(3)
    per_subject = {}
    for r in ok_rows:
        per_subject.setdefault(r["subject"], []).append(r["psi_min_deg"])
    subjects = {
        subject: {
            "n_events": len(phases),
            "circular_mean_deg": pipeline.circular_mean_deg(phases),
            "circular_std_deg": pipeline.circular_std_deg(phases),
            "rayleigh_p": pipeline.rayleigh_p_value(phases),
        }
        for subject, phases in sorted(per_subject.items())
    }
    summary = {"schema_version": pipeline.SCHEMA_VERSION, "rows": rows,
               "subjects": subjects}
    out = Path(out)
    if fmt == "json":
        _write_json(summary, out / "cohort.json")
    else:
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "cohort.csv", "w", newline="") as fh:
            writer = csv_mod.DictWriter(fh, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
    click.echo(f"{len(ok_rows)}/{len(rows)} records ok, "
               f"{len(subjects)} subjects")
    sys.exit(_exit_code([r["status"] for r in rows]))


@main.command()
@click.option("--beta", type=float, default=-0.85)
@click.option("--omega", type=float, default=0.88, help="rotation Hz")
@click.option("--sigma", type=float, default=0.05)
@click.option("--dt-sim", type=float, default=1e-3)
@click.option("--seed", type=int, default=0)
@click.option("--t", "t_final", type=float, default=100.0,
              help="simulated time span")
@click.option("--polar", is_flag=True, help="integrate the polar form")
@click.option("--every", type=int, default=10,
              help="subsampling stride for the CSV")
@out_opt
def simulate(beta, omega, sigma, dt_sim, seed, t_final, polar, every, out):
    """Simulate the bistable null model and export a t,force CSV."""
    params = nullmodel.HopfParams(beta=beta, omega=omega, sigma=sigma,
                                  dt_sim=dt_sim, seed=seed)
    if polar:
        path = nullmodel.simulate_polar(params, t_final)
    else:
        path = nullmodel.simulate_cartesian(params, t_final)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    target = out / "simulated.csv"
    nullmodel.export_csv(path, target, every=every)
    click.echo(f"wrote {target}")
    sys.exit(0)


@main.command()
@data_opt
@dt_opt
@events_opt
@subject_opt
@dataset_opt
@p_opt
@q_opt
@click.option("--seed", type=int, default=0)
@click.option("--steps", type=int, default=1000)
@click.option("--start", type=int, default=None,
              help="start box index (default: most visited box)")
@out_opt
def surrogate(data, dt, events_path, subject, dataset, p, q, seed, steps,
              start, out):
    """Sample a surrogate box-index walk from an event's estimated chain."""
    import numpy as np

    from .markov import estimate
    from .signal import hilbert_embed

    spec = _load_events(events_path, subject, dataset)[0]
    ts = _series_for(_load_data_map(data, dt), spec)
    emb = hilbert_embed(ts.samples, spec.window, dt=ts.dt)
    grid = PolarGrid.from_box_sizes(p, q)
    model = estimate(grid, emb, (0, len(emb) - 1))
    if start is None:
        row_mass = np.asarray(model.counts.sum(axis=1)).ravel()
        start = int(np.argmax(row_mass)) + 1
    walk = markov.surrogate(model, start, steps, seed)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    target = out / "surrogate.csv"
    with open(target, "w", newline="") as fh:
        writer = csv_mod.writer(fh)
        writer.writerow(["step", "box", "re", "im"])
        for n, box in enumerate(walk):
            c = box_center(grid, int(box))
            writer.writerow([n, int(box), f"{c.real:.10g}", f"{c.imag:.10g}"])
    click.echo(f"wrote {target}")
    sys.exit(0)
