"""Command line interface of the driving-style pipeline.

Every subcommand reads the artifacts of the previous stage and writes its own;
stages share no state besides these files.
"""

import contextlib
import logging
import os
import sys

from collections.abc import Callable, Iterator
from typing import Any, Optional, TextIO

import pandas as pd
import typer

from . import __version__, clustering, config_parsing, features, output
from .cl_argument_parsing import parse_k, resolve_region
from .errors import ConfigParseError, DrivestyleError
from .ingest import (
    IngestSettings,
    filter_region,
    list_log_files,
    load_csv_layout,
    load_dataset,
)
from .kinematics import Geodesy
from .patterns import MovementPattern, read_patterns, write_patterns
from .preprocess import PreprocessSettings, SplitPolicy, preprocess_pipeline
from .synth import SynthSettings, generate_benchmark, write_ground_truth

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="drivestyle",
    help="Classify driving styles from GPS logs by a jerk-based feature.",
    add_completion=False,
)

Writer = Callable[[TextIO], None]


def _config(ctx: typer.Context) -> config_parsing.Config:
    config: config_parsing.Config = ctx.obj["config"]
    return config


def _settings[T](build: Callable[[], T], hint: str) -> T:
    # Settings validate their ranges on construction.
    try:
        return build()
    except ValueError as exc:
        raise typer.BadParameter(str(exc), param_hint=hint) from exc


def _write_all(artifacts: list[tuple[str, Writer]]) -> None:
    """Write every artifact, or none of them if one fails."""
    written = []
    try:
        for path, write in artifacts:
            with output.atomic_output(path) as stream:
                write(stream)
            if path != output.STDOUT:
                written.append(path)
    except BaseException:
        for path in written:
            with contextlib.suppress(OSError):
                os.remove(path)
        raise


@contextlib.contextmanager
def _failures_exit() -> Iterator[None]:
    """Turn runtime failures into exit code 1."""
    try:
        yield
    except (DrivestyleError, OSError) as exc:
        logger.error("%s", exc)
        raise typer.Exit(1) from exc


@contextlib.contextmanager
def _config_errors() -> Iterator[None]:
    """Turn configuration problems into usage errors, exit code 2."""
    try:
        yield
    except ConfigParseError as exc:
        raise typer.BadParameter(str(exc), param_hint="--config") from exc


@contextlib.contextmanager
def _read_text(path: str) -> Iterator[TextIO]:
    if path == output.STDOUT:
        yield sys.stdin
        return
    with open(path, encoding="utf-8") as stream:
        yield stream


def _version(value: bool) -> None:
    if value:
        typer.echo(__version__)
        raise typer.Exit()


@app.callback()
def main(
    ctx: typer.Context,
    config_file: Optional[str] = typer.Option(
        None, "--config", "-c", help="Path to a configuration file"
    ),
    verbose: bool = typer.Option(
        False, "--verbose", "-v", help="Log debugging detail"
    ),
    quiet: bool = typer.Option(
        False, "--quiet", "-q", help="Log warnings and errors only"
    ),
    version: bool = typer.Option(
        False,
        "--version",
        callback=_version,
        is_eager=True,
        help="Show the version and exit",
    ),
) -> None:
    """Run one stage of the driving-style pipeline."""
    if verbose and quiet:
        raise typer.BadParameter(
            "--verbose and --quiet exclude each other", param_hint="--quiet"
        )
    level = logging.INFO
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    try:
        config = config_parsing.load_config(config_file)
    except DrivestyleError as exc:
        raise typer.BadParameter(str(exc), param_hint="--config") from exc
    ctx.obj = {"config": config}


@app.command()
def preprocess(
    ctx: typer.Context,
    inputs: list[str] = typer.Argument(
        ..., help="Log files, or directories searched for log files"
    ),
    out: Optional[str] = typer.Option(
        None, "--out", "-o", help="Pattern file to write, - for stdout"
    ),
    summary_out: Optional[str] = typer.Option(
        None, "--summary", help="Summary JSON to write"
    ),
    bbox: Optional[str] = typer.Option(
        None, "--bbox", help="Keep logs in min_lon,min_lat,max_lon,max_lat"
    ),
    region_name: Optional[str] = typer.Option(
        None, "--region", help="Keep logs in a configured region"
    ),
    min_len: Optional[int] = typer.Option(
        None, "--min-len", help="Shortest pattern, in samples"
    ),
    max_len: Optional[int] = typer.Option(
        None, "--max-len", help="Longest pattern, in samples"
    ),
    max_gap: Optional[float] = typer.Option(
        None, "--max-gap", help="Largest time step inside a pattern, seconds"
    ),
    split_policy: Optional[SplitPolicy] = typer.Option(
        None, "--split-policy", help="How over-long segments are cut"
    ),
    utc_offset: Optional[float] = typer.Option(
        None, "--utc-offset", help="UTC offset of the log wall times, hours"
    ),
    csv_layout: Optional[str] = typer.Option(
        None, "--csv-layout", help="JSON column mapping for generic CSV logs"
    ),
) -> None:
    """Cut raw GPS logs into movement patterns."""
    config = _config(ctx)
    with _config_errors():
        ingest = config_parsing.ingest_settings(config)
        defaults = config_parsing.preprocess_settings(config)
        out = out or config_parsing.output_location("patterns", config)
        summary_out = summary_out or config_parsing.output_location(
            "preprocess_summary", config
        )
    settings = _settings(
        lambda: PreprocessSettings(
            defaults.min_len if min_len is None else min_len,
            defaults.max_len if max_len is None else max_len,
            defaults.max_gap if max_gap is None else max_gap,
            split_policy or defaults.split_policy,
        ),
        "--min-len/--max-len/--max-gap",
    )
    region = resolve_region(bbox, region_name, config)
    offset = ingest.utc_offset_hours if utc_offset is None else utc_offset
    _settings(
        lambda: IngestSettings(offset, ingest.suffix), "--utc-offset"
    )

    with _failures_exit():
        layout = None if csv_layout is None else load_csv_layout(csv_layout)
        paths = []
        for path in inputs:
            if os.path.isdir(path):
                paths.extend(list_log_files(path, ingest.suffix))
            else:
                paths.append(path)
        dataset = load_dataset(paths, offset, layout)
        records = dataset.records
        if region is not None:
            records = [filter_region(record, region) for record in records]
        patterns, summary = preprocess_pipeline(records, settings)

        document = {
            **summary.as_dict(),
            "files": len(paths),
            "lines_read": dataset.lines_read,
            "lines_skipped": dataset.lines_skipped,
        }
        _write_all([
            (out, lambda stream: _write_patterns(patterns, stream)),
            (summary_out, _json_writer(document)),
        ])


@app.command(name="features")
def features_command(
    ctx: typer.Context,
    patterns_in: Optional[str] = typer.Option(
        None, "--patterns", "-i", help="Pattern file to read, - for stdin"
    ),
    out: Optional[str] = typer.Option(
        None, "--out", "-o", help="Features CSV to write, - for stdout"
    ),
    dump_kinematics: Optional[str] = typer.Option(
        None, "--dump-kinematics", help="Also write the kinematics CSV here"
    ),
    jerk_abs: Optional[bool] = typer.Option(
        None,
        "--jerk-abs/--signed-jerk",
        help="Compute jerk statistics over magnitudes",
    ),
    three_way: Optional[bool] = typer.Option(
        None,
        "--three-way/--two-way",
        help="Label MMK ratios calm/normal/aggressive",
    ),
    window: Optional[float] = typer.Option(
        None, "--window", help="MMK window length, seconds"
    ),
    geodesy: Optional[Geodesy] = typer.Option(
        None, "--geodesy", help="Distance model for geodetic patterns"
    ),
) -> None:
    """Compute the driving-style features of every pattern."""
    config = _config(ctx)
    with _config_errors():
        defaults = config_parsing.feature_settings(config)
        patterns_in = patterns_in or config_parsing.output_location(
            "patterns", config
        )
        out = out or config_parsing.output_location("features", config)
    settings = _settings(
        lambda: features.FeatureSettings(
            defaults.mmk_window if window is None else window,
            defaults.norm_threshold,
            defaults.agg_threshold,
            defaults.three_way if three_way is None else three_way,
            defaults.jerk_abs if jerk_abs is None else jerk_abs,
            geodesy or defaults.geodesy,
        ),
        "--window",
    )

    with _failures_exit():
        with _read_text(patterns_in) as stream:
            patterns = read_patterns(stream)
        frames: list[pd.DataFrame] = []
        table = features.feature_table(
            patterns,
            settings,
            frames if dump_kinematics is not None else None,
        )
        artifacts: list[tuple[str, Writer]] = [
            (out, lambda stream: features.write_feature_table(table, stream))
        ]
        if dump_kinematics is not None:
            artifacts.append((
                dump_kinematics,
                lambda stream: _kinematics_table(frames).to_csv(
                    stream,
                    index=False,
                    float_format=output.FLOAT_FORMAT,
                    lineterminator="\n",
                ),
            ))
        _write_all(artifacts)


def _kinematics_table(frames: list[pd.DataFrame]) -> pd.DataFrame:
    if not frames:
        return pd.DataFrame(columns=["pattern_id", "kind", "t", "value"])
    return pd.concat(frames, ignore_index=True)


@app.command()
def cluster(
    ctx: typer.Context,
    features_in: Optional[str] = typer.Option(
        None, "--features", "-i", help="Features CSV to read, - for stdin"
    ),
    out: Optional[str] = typer.Option(
        None, "--out", "-o", help="Clusters JSON to write, - for stdout"
    ),
    k: str = typer.Option(
        "auto", "--k", "-k", help="Cluster count, or auto to select it"
    ),
    linkage: Optional[clustering.Linkage] = typer.Option(
        None, "--linkage", help="Merge criterion"
    ),
    theta: Optional[float] = typer.Option(
        None, "--theta", help="Relative WCSS decrease threshold in (0, 1)"
    ),
    k_max: Optional[int] = typer.Option(
        None, "--k-max", help="Largest cluster count considered"
    ),
    feature: Optional[str] = typer.Option(
        None, "--feature", help="Feature column to cluster"
    ),
) -> None:
    """Cluster the patterns hierarchically by one feature."""
    config = _config(ctx)
    with _config_errors():
        defaults = config_parsing.cluster_settings(config)
        features_in = features_in or config_parsing.output_location(
            "features", config
        )
        out = out or config_parsing.output_location("clusters", config)
    forced = parse_k(k)
    name = feature or defaults.feature
    if name not in features.NUMERIC_FEATURES:
        raise typer.BadParameter(
            f"choose one of {features.NUMERIC_FEATURES}",
            param_hint="--feature",
        )
    settings = _settings(
        lambda: clustering.ClusterSettings(
            linkage or defaults.linkage,
            defaults.theta if theta is None else theta,
            defaults.k_max if k_max is None else k_max,
            forced,
            name,
        ),
        "--theta/--k-max",
    )

    with _failures_exit():
        with _read_text(features_in) as stream:
            table = features.read_feature_table(stream)
        result = clustering.cluster_report(table, settings)
        _write_all([
            (out, lambda stream: clustering.write_clusters(result, stream))
        ])


@app.command()
def report(
    ctx: typer.Context,
    features_in: Optional[str] = typer.Option(
        None, "--features", help="Features CSV to read"
    ),
    clusters_in: Optional[str] = typer.Option(
        None, "--clusters", help="Clusters JSON to read"
    ),
    out: Optional[str] = typer.Option(
        None, "--out", "-o", help="Report JSON to write, - for stdout"
    ),
    out_dir: Optional[str] = typer.Option(
        None, "--out-dir", help="Directory for the plot data CSV files"
    ),
    k_max: Optional[int] = typer.Option(
        None, "--k-max", help="Largest k of the negative silhouette counts"
    ),
) -> None:
    """Write the data behind sorted-feature, silhouette and whisker plots."""
    config = _config(ctx)
    with _config_errors():
        defaults = config_parsing.cluster_settings(config)
        features_in = features_in or config_parsing.output_location(
            "features", config
        )
        clusters_in = clusters_in or config_parsing.output_location(
            "clusters", config
        )
        out = out or config_parsing.output_location("report", config)
        out_dir = out_dir or config_parsing.output_directory(config)
        curve_names = {
            name: config_parsing.output_filename(
                "sorted_curve", config, feature=name
            )
            for name in features.NUMERIC_FEATURES
        }
        silhouette_name = config_parsing.output_filename("silhouette", config)
    k_limit = defaults.k_max if k_max is None else k_max
    if k_limit < 2:  # noqa: PLR2004
        raise typer.BadParameter("must be at least 2", param_hint="--k-max")

    with _failures_exit():
        with _read_text(features_in) as stream:
            table = features.read_feature_table(stream)
        with _read_text(clusters_in) as stream:
            result = clustering.read_clusters(stream, table)

        curves = {
            name: features.sorted_feature_curve(table, name)
            for name in features.NUMERIC_FEATURES
        }
        document = clustering.report_document(
            result,
            table,
            features.largest_gap(curves[result.feature]),
            k_limit,
        )

        artifacts: list[tuple[str, Writer]] = [
            (
                os.path.join(out_dir, curve_names[name]),
                _csv_writer(curve),
            )
            for name, curve in curves.items()
        ]
        if result.silhouettes is None:
            logger.warning("A single cluster has no silhouettes")
        else:
            artifacts.append((
                os.path.join(out_dir, silhouette_name),
                _csv_writer(clustering.silhouette_table(result)),
            ))
        artifacts.append((out, _json_writer(document)))
        _write_all(artifacts)


def _json_writer(document: dict[str, Any]) -> Writer:
    def write(stream: TextIO) -> None:
        stream.write(output.dumps(document))
    return write


def _csv_writer(table: pd.DataFrame) -> Writer:
    def write(stream: TextIO) -> None:
        table.to_csv(
            stream,
            index=False,
            float_format=output.FLOAT_FORMAT,
            lineterminator="\n",
        )
    return write


@app.command()
def synth(
    ctx: typer.Context,
    out: Optional[str] = typer.Option(
        None, "--out", "-o", help="Pattern file to write, - for stdout"
    ),
    truth: Optional[str] = typer.Option(
        None, "--truth", help="Ground-truth sidecar JSON to write"
    ),
    seed: Optional[int] = typer.Option(
        None, "--seed", help="Master seed, a 64-bit unsigned integer"
    ),
    length: Optional[int] = typer.Option(
        None, "--length", help="Samples per pattern"
    ),
    sample_interval: Optional[int] = typer.Option(
        None, "--sample-interval", help="Seconds between samples"
    ),
) -> None:
    """Generate the seeded four-profile benchmark population."""
    config = _config(ctx)
    with _config_errors():
        defaults = config_parsing.synth_settings(config)
        out = out or config_parsing.output_location("patterns", config)
        truth = truth or config_parsing.output_location(
            "ground_truth", config
        )
    settings = SynthSettings(
        defaults.seed if seed is None else seed,
        defaults.length if length is None else length,
        (
            defaults.sample_interval
            if sample_interval is None
            else sample_interval
        ),
        defaults.counts,
    )
    _settings(settings.specs, "--seed/--length/--sample-interval")

    with _failures_exit():
        benchmark = generate_benchmark(settings.seed, settings)
        _write_all([
            (out, lambda stream: _write_patterns(benchmark.patterns, stream)),
            (truth, lambda stream: write_ground_truth(
                benchmark.ground_truth, stream
            )),
        ])


def _write_patterns(
        patterns: list[MovementPattern],
        stream: TextIO
    ) -> None:
    write_patterns(patterns, stream)
