# src/bounded_approx/cli.py
from __future__ import annotations

import json
import logging
import sys
from pathlib import Path
from typing import Any

import typer

from .config import NehariConfig, PipelineConfig, SolverConfig
from .core.circle import CircleGrid, TrigCoefficients
from .core.hardy import BoundedAnalyticWitness, boundary_samples
from .errors import ApproxError
from .ingest.codec import (
    SCHEMA_MODELS,
    CheckResultModel,
    DistanceCertificateModel,
    PipelineReportModel,
    ProviderSpecModel,
    QuotientNullModel,
    StepRecordModel,
    WeakStarReportModel,
    json_schema,
    read_model,
    read_symbol,
    read_witness,
)
from .ingest.scenarios import ScenarioSpec, build_provider, list_scenarios, load_scenario, prepare_scenario
from .logic.nehari import distance_to_disk_algebra
from .logic.pipeline import run_sufficiency, verify_conditions
from .quality.checks import summarize_checks
from .quality.weakstar import check_weak_star
from .runtime import collect_code_metadata
from .store.reports import (
    csv_path_for,
    derive_run_id,
    pipeline_table,
    stable_json_dumps,
    weakstar_table,
    with_snapshot_id,
    write_csv_table,
    write_json_report,
)

app = typer.Typer(add_completion=False)

LOGGER = logging.getLogger(__name__)

# exit codes: 0 expected outcome, 1 config/parse/IO error, 2 outcome mismatch
EXIT_ERROR = 1
EXIT_MISMATCH = 2


def _unwrap_option(v: Any) -> Any:
    """
    When calling @app.command() functions directly (e.g., unit tests),
    typer.Option defaults may still be OptionInfo objects.
    """
    if isinstance(v, typer.models.OptionInfo):
        return v.default
    return v


def _unwrap_all(params: dict[str, Any]) -> dict[str, Any]:
    return {k: _unwrap_option(v) for k, v in params.items()}


def _configure_logging(level: str) -> None:
    name = str(level).upper()
    # logging.getLevelNamesMapping() is 3.11+; on 3.10 read the same table directly.
    level_names = getattr(logging, "getLevelNamesMapping", lambda: dict(logging._nameToLevel))()
    if name not in level_names:
        raise typer.BadParameter(f"unknown log level {level!r}", param_hint="--log-level")
    logging.basicConfig(
        level=name, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    logging.getLogger("bounded_approx").setLevel(name)


def _fail(e: BaseException) -> typer.Exit:
    typer.echo(f"error: {e}", err=True)
    return typer.Exit(code=EXIT_ERROR)


@app.command()
def pipeline(
    scenario: str = typer.Option("blaschke-arc", help="Built-in scenario name or scenario JSON file."),
    M: float = typer.Option(1.0, "--M", help="Uniform bound for every P_m."),
    grid: int = typer.Option(4096, help="Circle grid size N."),
    steps: int = typer.Option(8, help="Number of steps m = 1..steps."),
    K: int = typer.Option(32, "--K", help="Fourier window for weak-star checks."),
    tol: float = typer.Option(1e-3),
    tail_factor: int = typer.Option(4, help="k_m = tail_factor * m."),
    degree_factor: int = typer.Option(32, help="d_m = degree_factor * m."),
    hankel_size: int = typer.Option(16),
    seed: int = typer.Option(0),
    threads: int = typer.Option(1, help="Parallel steps (capped by APPROX_THREADS)."),
    skip_precondition: bool = typer.Option(False),
    solver: str = typer.Option("CLARABEL"),
    modulus: str = typer.Option("soc", help="soc | polygon"),
    out: str = typer.Option("out/pipeline.json", help="Report JSON; the CSV table goes next to it."),
    log_level: str = typer.Option("WARNING"),
):
    """Build P_m with |P_m| <= M converging on the scenario's target set."""
    o = _unwrap_all(locals())
    _configure_logging(o["log_level"])

    try:
        cfg = PipelineConfig(
            M=o["M"],
            grid=o["grid"],
            steps=o["steps"],
            K=o["K"],
            tol=o["tol"],
            tail_factor=o["tail_factor"],
            degree_factor=o["degree_factor"],
            hankel_size=o["hankel_size"],
            seed=o["seed"],
            threads=o["threads"],
            skip_precondition=o["skip_precondition"],
            solver=SolverConfig(solver=o["solver"], modulus=o["modulus"]),
        ).validate()
        spec = load_scenario(o["scenario"])
        prep = prepare_scenario(spec, cfg)
        polys, report = run_sufficiency(prep.seq, prep.E, prep.g, prep.cfg)

        checks = []
        if polys and prep.g is not None:
            cv = verify_conditions(polys, prep.E, cfg.M, prep.g, cfg.K, cfg.tol)
            checks = [cv.bound, cv.pointwise, cv.weak_star]
        conditions = [CheckResultModel.from_domain(c) for c in checks]

        config_dict = prep.cfg.to_dict()
        scenario_dict = spec.model_dump(mode="json")
        model = PipelineReportModel(
            run_id=derive_run_id(config_dict, scenario_dict),
            scenario=spec.name,
            expected=spec.expected,
            verdict=report.verdict,
            config=config_dict,
            code=collect_code_metadata(),
            target={"descriptor": prep.E.descriptor, "count": int(prep.E.angles.size)},
            steps=[StepRecordModel.from_domain(s) for s in report.steps],
            precondition=(
                WeakStarReportModel.from_domain(report.precondition) if report.precondition else None
            ),
            quotient_null=QuotientNullModel.from_domain(report.quotient_null),
            conditions=conditions,
        )
        payload = with_snapshot_id(model.model_dump(mode="json"))
        out_path = write_json_report(o["out"], payload)
        header, rows = pipeline_table(payload["steps"])
        csv_path = write_csv_table(csv_path_for(out_path), header, rows)
    except (ApproxError, OSError) as e:
        raise _fail(e) from e

    typer.echo(
        json.dumps(
            {
                "run_id": payload["run_id"],
                "snapshot_id": payload["snapshot_id"],
                "scenario": spec.name,
                "expected": spec.expected,
                "verdict": report.verdict,
                "conditions": summarize_checks(checks),
                "report_path": str(out_path),
                "csv_path": str(csv_path),
            },
            indent=2,
        )
    )
    if report.verdict != spec.expected:
        raise typer.Exit(code=EXIT_MISMATCH)


@app.command()
def nehari(
    symbol: str = typer.Option(..., help="SampledFunction or TrigCoefficients JSON."),
    d: int = typer.Option(32, help="Degree of the analytic approximant."),
    s: int = typer.Option(16, help="Hankel truncation size."),
    grid: int = typer.Option(1024, help="Sampling grid for coefficient-window symbols."),
    out: str = typer.Option("out/nehari.json"),
    log_level: str = typer.Option("WARNING"),
):
    """Two-sided certificate for the distance of a symbol to the disk algebra."""
    o = _unwrap_all(locals())
    _configure_logging(o["log_level"])

    try:
        h = read_symbol(o["symbol"])
        if isinstance(h, TrigCoefficients):
            h = h.on_grid(CircleGrid(o["grid"]))
        cfg = NehariConfig(d=o["d"], s=o["s"])
        cert = distance_to_disk_algebra(h, cfg)
        model = DistanceCertificateModel.from_domain(cert, h, d=cfg.d, s=cfg.s)
        write_json_report(o["out"], model.model_dump(mode="json"))
    except (ApproxError, OSError) as e:
        raise _fail(e) from e

    typer.echo(f"lower {cert.lower:.6f}")
    typer.echo(f"upper {cert.upper:.6f}")


@app.command()
def weakstar(
    provider: str = typer.Option(..., help="ProviderSpec JSON."),
    g: str | None = typer.Option(None, help="Witness JSON for the limit (default: zero)."),
    K: int = typer.Option(32, "--K"),
    L: int | None = typer.Option(None, "--L", help="Prefix length (default: provider length)."),
    tol: float = typer.Option(1e-3),
    out: str = typer.Option("out/weakstar.json"),
    log_level: str = typer.Option("WARNING"),
):
    """Fourier-window weak-star check of a sequence against a limit witness."""
    o = _unwrap_all(locals())
    _configure_logging(o["log_level"])

    try:
        spec = read_model(o["provider"], ProviderSpecModel)
        seq = build_provider(spec)
        limit = read_witness(o["g"]) if o["g"] else BoundedAnalyticWitness.zero()
        L_ = o["L"] if o["L"] is not None else seq.length
        report = check_weak_star(seq, boundary_samples(limit, seq.grid), o["K"], o["tol"], L_)
        out_path = write_json_report(o["out"], WeakStarReportModel.from_domain(report).model_dump(mode="json"))
        header, rows = weakstar_table(report)
        write_csv_table(csv_path_for(out_path), header, rows)
    except (ApproxError, OSError) as e:
        raise _fail(e) from e

    typer.echo(report.verdict)
    if spec.expected is not None and report.verdict != spec.expected:
        raise typer.Exit(code=EXIT_MISMATCH)


@app.command("scenario-list")
def scenario_list():
    """Built-in scenarios: name, expected outcome, description."""
    for spec in list_scenarios():
        typer.echo(f"{spec.name}\t{spec.expected}\t{spec.description}")


@app.command()
def schemas(out_dir: str = typer.Option("docs/schemas")):
    """Write the JSON Schemas of every file format read or written by this CLI."""
    out_dir = str(_unwrap_option(out_dir))
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    docs = {name: json_schema(name) for name in SCHEMA_MODELS}
    docs["scenario"] = ScenarioSpec.model_json_schema()
    for name, schema in sorted(docs.items()):
        (d / f"{name}.schema.json").write_text(stable_json_dumps(schema) + "\n", encoding="utf-8")
    typer.echo(json.dumps({"out_dir": str(d), "schemas": sorted(docs)}, indent=2))


if __name__ == "__main__":
    app()
