import hashlib
import json
import sys
import time
from functools import wraps
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

import click
from loguru import logger
from pydantic import ValidationError

from moatwalk import __version__
from moatwalk.cli.plot import PLOT_MODES, emit_plot
from moatwalk.common.config import MoatwalkSettings, WalkConfig, load_config_from_file
from moatwalk.common.errors import MoatwalkError
from moatwalk.common.metrics import write_metrics_textfile
from moatwalk.common.models import (
    BallSpec,
    GaussianInt,
    LatticePoint3,
    MoatQuery,
    RunManifest,
    WalkReport,
)
from moatwalk.lattice.classify import classify3, classify_gaussian
from moatwalk.lattice.representations import ordered_representations
from moatwalk.moat.explore import explore, moat_profile
from moatwalk.ntheory.residues import gap_statistics, residue_census
from moatwalk.ntheory.sieve import build_sieve, save_sieve
from moatwalk.primestore.cache import load_store, read_store_spec, save_store
from moatwalk.primestore.store import PrimeStore, build_store
from moatwalk.walk.coverage import step_growth, verify_coverage
from moatwalk.walk.engine import run_walk
from moatwalk.walk.export import walk_records

LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)


class PointType(click.ParamType):
    """Comma-separated integer coordinates, e.g. ``4,3,2``."""

    name = "point"

    def __init__(self, dimensions: Tuple[int, ...] = (2, 3)):
        self.dimensions = dimensions

    def convert(self, value: Any, param, ctx) -> Tuple[int, ...]:
        if isinstance(value, tuple):
            return value
        try:
            coords = tuple(int(v) for v in str(value).split(","))
        except ValueError:
            self.fail(f"{value!r} is not a comma-separated list of integers", param, ctx)
        if len(coords) not in self.dimensions:
            expected = " or ".join(str(d) for d in self.dimensions)
            self.fail(f"{value!r} has {len(coords)} coordinates, expected {expected}", param, ctx)
        return coords


def check_start_arity(start: Tuple[int, ...], dim: str) -> None:
    if len(start) != int(dim):
        raise click.BadParameter(
            f"{len(start)} coordinates given for --dim {dim}", param_hint="'--start'"
        )


class IntListType(click.ParamType):
    name = "int-list"

    def convert(self, value: Any, param, ctx) -> List[int]:
        if isinstance(value, list):
            return value
        try:
            return [int(v) for v in str(value).split(",") if v.strip()]
        except ValueError:
            self.fail(f"{value!r} is not a comma-separated list of integers", param, ctx)


class AppContext:
    """Per-invocation state shared by the subcommands."""

    def __init__(self, settings: MoatwalkSettings, seedless: bool = False):
        self.settings = settings
        self.seedless = seedless
        self.started = time.perf_counter()
        self.input_digests: Dict[str, str] = {}

    def record_input(self, path: Path) -> None:
        self.input_digests[str(path)] = hashlib.sha256(Path(path).read_bytes()).hexdigest()

    def manifest(
        self, command: str, parameters: Dict[str, Any], summary: Optional[Dict[str, Any]] = None
    ) -> RunManifest:
        return RunManifest(
            command=command,
            parameters={**parameters, "seedless": self.seedless, "workers": self.settings.workers},
            version=__version__,
            input_digests=dict(self.input_digests),
            duration_seconds=round(time.perf_counter() - self.started, 6),
            summary=summary or {},
        )


def setup_app(settings: MoatwalkSettings) -> None:
    """Configure logging for a CLI invocation."""
    logger.remove()
    logger.add(sys.stderr, level=settings.log_level, format=LOG_FORMAT)
    logger.debug(f"moatwalk {__version__} initialized")


def handle_errors(func):
    """Map domain failures to exit code 1 with the message on the log."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (MoatwalkError, FileNotFoundError, ValidationError, ValueError) as e:
            logger.error(f"{click.get_current_context().info_name} failed: {e}")
            sys.exit(1)

    return wrapper


def write_manifest(
    app: AppContext,
    out: Path,
    command: str,
    parameters: Dict[str, Any],
    summary: Optional[Dict[str, Any]] = None,
) -> None:
    manifest_path = out.with_name(out.name + ".manifest.json")
    manifest = app.manifest(command, parameters, summary)
    manifest_path.write_text(manifest.model_dump_json(indent=2) + "\n")
    logger.debug(f"Wrote manifest {manifest_path}")


def emit(
    app: AppContext,
    lines: Iterable[str],
    out: Optional[str],
    command: str,
    parameters: Dict[str, Any],
    summary: Optional[Dict[str, Any]] = None,
) -> None:
    """Send text lines to stdout, or to ``out`` with a manifest beside it."""
    if out is None:
        for line in lines:
            click.echo(line)
        return
    path = Path(out)
    with open(path, "w") as f:
        for line in lines:
            f.write(line + "\n")
    write_manifest(app, path, command, parameters, summary)


def store_for(app: AppContext, exponent: int) -> PrimeStore:
    """Load the store for ``A=exponent`` from the cache directory, or build it."""
    settings = app.settings
    spec = BallSpec(exponent=exponent)
    cached = settings.cache_path(f"store-A{exponent}.bin")
    if cached is not None and cached.exists():
        store = load_store(cached, expected_spec=spec, cell=settings.grid_cell)
        app.record_input(cached)
        logger.info(f"Loaded prime store from {cached}")
        return store

    store = build_store(
        spec,
        workers=settings.workers,
        max_exponent=settings.store_max_exponent,
        cell=settings.grid_cell,
    )
    if cached is not None:
        cached.parent.mkdir(parents=True, exist_ok=True)
        save_store(store, cached)
    return store


def walk_config(
    app: AppContext,
    exponent: int,
    cramer_const: Optional[float] = None,
    min_radius: Optional[float] = None,
    max_tube: Optional[int] = None,
) -> WalkConfig:
    overrides: Dict[str, Any] = {"ball": {"exponent": exponent}}
    if cramer_const is not None:
        overrides["cramer_constant"] = cramer_const
    if min_radius is not None:
        overrides["min_radius"] = min_radius
    if max_tube is not None:
        overrides["max_tube_extensions"] = max_tube
    base = app.settings.walk.model_dump()
    return WalkConfig.model_validate({**base, **overrides})


def flush_metrics(settings: MoatwalkSettings) -> None:
    if settings.metrics.enabled and settings.metrics.textfile:
        write_metrics_textfile(settings.metrics.textfile)
        logger.debug(f"Wrote metrics to {settings.metrics.textfile}")


@click.group()
@click.option("--config", "-c", default=None, help="Path to configuration file")
@click.option("--log-level", default=None, help="Override the configured log level")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker threads")
@click.option(
    "--seedless",
    is_flag=True,
    default=False,
    help="Record that the run uses no randomness (every command is deterministic)",
)
@click.version_option(__version__, prog_name="moatwalk")
@click.pass_context
def cli(
    ctx: click.Context,
    config: Optional[str],
    log_level: Optional[str],
    workers: Optional[int],
    seedless: bool,
):
    """Prime lattice walks, moats and number-theory utilities."""
    try:
        settings = load_config_from_file(config) if config else MoatwalkSettings()
        updates: Dict[str, Any] = {}
        if log_level is not None:
            updates["log_level"] = log_level.upper()
        if workers is not None:
            updates["workers"] = workers
        if updates:
            settings = settings.model_copy(update=updates)
        setup_app(settings)
    except (FileNotFoundError, ValidationError, ValueError) as e:
        logger.error(f"Failed to load configuration: {e}")
        sys.exit(1)

    ctx.obj = AppContext(settings, seedless=seedless)
    ctx.call_on_close(lambda: flush_metrics(settings))


@cli.command("sieve")
@click.option("--limit", type=int, required=True, help="Sieve every integer up to this bound")
@click.option("--out", default=None, help="Write the binary sieve cache here")
@click.pass_obj
@handle_errors
def sieve(app: AppContext, limit: int, out: Optional[str]):
    """Build the prime table up to LIMIT and print its prime count."""
    settings = app.settings
    table = build_sieve(
        limit,
        cap=settings.sieve_cap,
        segment_size=settings.segment_size,
        workers=settings.workers,
    )
    target = Path(out) if out else settings.cache_path(f"sieve-{limit}.bin")
    if target is not None:
        target.parent.mkdir(parents=True, exist_ok=True)
        save_sieve(table, target)
        write_manifest(app, target, "sieve", {"limit": limit})
    click.echo("limit,count")
    click.echo(f"{limit},{table.count()}")


@cli.command("stats")
@click.option("--limit", type=int, required=True)
@click.option("--mod8", "kind", flag_value="mod8", default=True, help="Primes per residue mod 8")
@click.option("--gaps", "kind", flag_value="gaps", help="Maximal gap and Cramer ratio")
@click.option("--out", default=None)
@click.pass_obj
@handle_errors
def stats(app: AppContext, limit: int, kind: str, out: Optional[str]):
    """Residue census or prime-gap statistics up to LIMIT."""
    table = build_sieve(
        max(limit, 2), cap=app.settings.sieve_cap, workers=app.settings.workers
    )
    if kind == "gaps":
        g = gap_statistics(limit, table)
        lines = [
            "max_gap,gap_start,max_ratio,ratio_start",
            f"{g.max_gap},{g.gap_start},{g.max_ratio:.6f},{g.ratio_start}",
        ]
    else:
        census = residue_census(limit, table)
        lines = ["residue,count"] + [f"{r},{n}" for r, n in sorted(census.counts.items())]
    emit(app, lines, out, "stats", {"limit": limit, "kind": kind})


@cli.command("classify")
@click.option("--point", type=PointType((3,)), default=None, help="Lattice point a,b,c")
@click.option("--gaussian", type=PointType((2,)), default=None, help="Gaussian integer a,b")
@click.pass_obj
@handle_errors
def classify(app: AppContext, point: Optional[tuple], gaussian: Optional[tuple]):
    """Classify a lattice point (JSON on stdout)."""
    if (point is None) == (gaussian is None):
        raise click.UsageError("give exactly one of --point or --gaussian")
    if point is not None:
        click.echo(classify3(LatticePoint3(*point)).model_dump_json())
        return
    g = GaussianInt(*gaussian)
    record = {"point": list(g), "norm": g.norm, "gaussian_prime": classify_gaussian(g)}
    click.echo(json.dumps(record, separators=(",", ":")))


@cli.command("reps")
@click.option("--n", "n", type=int, required=True)
@click.option("--out", default=None)
@click.pass_obj
@handle_errors
def reps(app: AppContext, n: int, out: Optional[str]):
    """Canonical three-square representations of N."""
    lines = ["x,y,z,multiplicity"] + [
        f"{t.x},{t.y},{t.z},{t.multiplicity}" for t in ordered_representations(n)
    ]
    emit(app, lines, out, "reps", {"n": n})


@cli.command("store")
@click.option("--A", "exponent", type=int, required=True, help="Ball radius 10^A")
@click.option("--out", default=None, help="Write the binary store cache here")
@click.pass_obj
@handle_errors
def store(app: AppContext, exponent: int, out: Optional[str]):
    """Enumerate interior 3D primes of the ball and print their count."""
    settings = app.settings
    built = build_store(
        BallSpec(exponent=exponent),
        workers=settings.workers,
        max_exponent=settings.store_max_exponent,
        cell=settings.grid_cell,
    )
    target = Path(out) if out else settings.cache_path(f"store-A{exponent}.bin")
    if target is not None:
        target.parent.mkdir(parents=True, exist_ok=True)
        save_store(built, target)
        write_manifest(app, target, "store", {"A": exponent})
    click.echo("A,count")
    click.echo(f"{exponent},{built.count}")


@cli.command("store-verify")
@click.option("--in", "source", required=True, help="Store cache to check")
@click.pass_obj
@handle_errors
def store_verify(app: AppContext, source: str):
    """Rebuild the store recorded in a cache and compare point by point."""
    settings = app.settings
    spec = read_store_spec(source)
    cached = load_store(source, cell=settings.grid_cell)
    rebuilt = build_store(
        spec,
        workers=settings.workers,
        max_exponent=settings.store_max_exponent,
        cell=settings.grid_cell,
    )

    for i, (a, b) in enumerate(zip(cached.points.tolist(), rebuilt.points.tolist())):
        if a != b:
            click.echo(f"mismatch at index {i}: cache {tuple(a)} rebuilt {tuple(b)}")
            sys.exit(1)
    if cached.count != rebuilt.count:
        click.echo(f"mismatch in size: cache {cached.count} rebuilt {rebuilt.count}")
        sys.exit(1)
    click.echo("ok")


def _walk_options(func):
    for option in reversed(
        [
            click.option("--A", "exponent", type=int, required=True, help="Ball radius 10^A"),
            click.option("--cramer-const", type=float, default=None),
            click.option("--min-radius", type=float, default=None),
            click.option("--max-tube", type=int, default=None),
        ]
    ):
        func = option(func)
    return func


def _run_walk(app: AppContext, **kwargs) -> Tuple[WalkReport, PrimeStore]:
    cfg = walk_config(app, **kwargs)
    store = store_for(app, cfg.ball.exponent)
    return run_walk(cfg, store), store


@cli.command("walk3d")
@_walk_options
@click.option("--out", default=None, help="Write the JSONL export here")
@click.pass_obj
@handle_errors
def walk3d(app: AppContext, exponent: int, cramer_const, min_radius, max_tube, out):
    """Run the plane-guided walk and export every step as JSONL."""
    report, _ = _run_walk(
        app, exponent=exponent, cramer_const=cramer_const, min_radius=min_radius, max_tube=max_tube
    )
    parameters = {
        "A": exponent,
        "cramer_const": cramer_const,
        "min_radius": min_radius,
        "max_tube": max_tube,
    }
    emit(app, walk_records(report), out, "walk3d", parameters)


@cli.command("coverage")
@_walk_options
@click.option("--strict", is_flag=True, default=False, help="Exit 1 unless every prime is covered")
@click.pass_obj
@handle_errors
def coverage(app: AppContext, exponent: int, cramer_const, min_radius, max_tube, strict: bool):
    """Run the walk and report which stored primes it reached."""
    report, store = _run_walk(
        app, exponent=exponent, cramer_const=cramer_const, min_radius=min_radius, max_tube=max_tube
    )
    result = verify_coverage(report, store)
    click.echo("ratio,covered,total")
    click.echo(f"{result.ratio},{result.covered},{result.total}")
    if result.uncovered:
        click.echo("uncovered")
        for a, b, c in result.uncovered:
            click.echo(f"{a},{b},{c}")
    if strict and result.ratio < 1.0:
        sys.exit(1)


@cli.command("step-growth")
@_walk_options
@click.option("--deciles", type=click.IntRange(min=1), default=10)
@click.option("--out", default=None)
@click.pass_obj
@handle_errors
def step_growth_cmd(
    app: AppContext, exponent: int, cramer_const, min_radius, max_tube, deciles, out
):
    """Maximum step length per norm decile of the walk."""
    report, _ = _run_walk(
        app, exponent=exponent, cramer_const=cramer_const, min_radius=min_radius, max_tube=max_tube
    )
    lines = ["decile,norm_low,norm_high,steps,max_dist"] + [
        f"{r.decile},{r.norm_low},{r.norm_high},{r.steps},{r.max_dist:.6f}"
        for r in step_growth(report, deciles)
    ]
    emit(app, lines, out, "step-growth", {"A": exponent, "deciles": deciles})


@cli.command("moat")
@click.option("--dim", type=click.Choice(["2", "3"]), required=True)
@click.option("--k2", type=click.IntRange(min=1), required=True, help="Squared step bound")
@click.option("--start", type=PointType(), required=True)
@click.option("--norm-bound", type=click.IntRange(min=1), required=True)
@click.option("--out", default=None)
@click.pass_obj
@handle_errors
def moat(app: AppContext, dim: str, k2: int, start: tuple, norm_bound: int, out: Optional[str]):
    """Component of START under steps of squared length <= K2, as CSV.

    The size, farthest norm and status go to the log and the manifest.
    """
    check_start_arity(start, dim)
    query = MoatQuery(dimension=int(dim), k2=k2, start=start, norm_bound=norm_bound)
    component = explore(query)
    coords = "a,b" if query.dimension == 2 else "a,b,c"
    lines = [f"{coords},norm,bfs_depth"]
    for member, depth in zip(component.members, component.depths):
        norm = sum(v * v for v in member)
        lines.append(",".join(str(v) for v in member) + f",{norm},{depth}")

    summary = {
        "size": component.size,
        "farthest": list(component.farthest),
        "farthest_norm": component.farthest_norm,
        "status": component.status,
    }
    logger.info(
        f"k2={k2}: {component.size} primes, farthest norm {component.farthest_norm}, "
        f"{component.status}"
    )
    parameters = {"dim": query.dimension, "k2": k2, "start": list(start), "norm_bound": norm_bound}
    emit(app, lines, out, "moat", parameters, summary)


@cli.command("moat-profile")
@click.option("--dim", type=click.Choice(["2", "3"]), required=True)
@click.option("--k2-list", type=IntListType(), required=True, help="Ascending squared step bounds")
@click.option("--start", type=PointType(), default=None, help="Defaults to 1,1 or 1,1,1")
@click.option("--norm-bound", type=click.IntRange(min=1), required=True)
@click.option("--out", default=None)
@click.pass_obj
@handle_errors
def moat_profile_cmd(app: AppContext, dim: str, k2_list, start, norm_bound: int, out):
    """Component size and reach for each step bound."""
    dimension = int(dim)
    if start is None:
        start = (1,) * dimension
    check_start_arity(start, dim)
    rows = moat_profile(dimension, start, norm_bound, k2_list)
    lines = ["k2,size,farthest_norm,status"] + [
        f"{r.k2},{r.size},{r.farthest_norm},{'exhausted' if r.exhausted else 'inconclusive'}"
        for r in rows
    ]
    parameters = {
        "dim": dimension,
        "k2_list": k2_list,
        "start": list(start),
        "norm_bound": norm_bound,
    }
    emit(app, lines, out, "moat-profile", parameters)


@cli.command("plot")
@click.option("--in", "source", required=True, help="Walk JSONL or moat CSV")
@click.option("--mode", type=click.Choice(PLOT_MODES), default="2d-svg")
@click.option("--out", default=None)
@click.pass_obj
@handle_errors
def plot(app: AppContext, source: str, mode: str, out: Optional[str]):
    """Render a walk export or moat component."""
    path = Path(source)
    if not path.exists():
        raise FileNotFoundError(f"Plot input not found: {source}")
    app.record_input(path)
    with open(path, "r") as f:
        document = emit_plot(f, mode)
    if out is None:
        click.echo(document, nl=False)
        return
    target = Path(out)
    target.write_text(document)
    write_manifest(app, target, "plot", {"in": source, "mode": mode})


if __name__ == "__main__":
    cli()
