"""All functions relating to parsing command line arguments."""

from typing import Optional

import typer

from .config_parsing import Config, region, region_names
from .errors import ConfigParseError
from .ingest import Region

AUTO = "auto"
BBOX_FIELDS = 4


def parse_bbox(bbox_arg: str) -> Region:
    """Turn a ``min_lon,min_lat,max_lon,max_lat`` argument into a region.

    Parameters
    ----------
    bbox_arg: str
        A string representing user input

    Returns
    -------
    Region
        The closed bounding box

    Raises
    ------
    typer.BadParameter
        If the argument is not four numbers describing a proper box

    """
    parts = bbox_arg.split(",")
    if len(parts) != BBOX_FIELDS:
        raise typer.BadParameter(
            "expected min_lon,min_lat,max_lon,max_lat", param_hint="--bbox"
        )
    try:
        min_lon, min_lat, max_lon, max_lat = map(float, parts)
        return Region(min_lon, max_lon, min_lat, max_lat)
    except ValueError as exc:
        raise typer.BadParameter(str(exc), param_hint="--bbox") from exc


def resolve_region(
        bbox_arg: Optional[str],
        region_arg: Optional[str],
        config: Config
    ) -> Optional[Region]:
    """Determine which region the user wants, if any.

    A region can be given as a literal box or by the name of a box in the
    configuration file, but not both.

    Parameters
    ----------
    bbox_arg: Optional[str]
        The ``--bbox`` argument
    region_arg: Optional[str]
        The ``--region`` argument
    config: dict
        Configuration dictionary holding the named regions

    Returns
    -------
    Optional[Region]
        The box to filter logs with, or None to keep everything

    """
    if bbox_arg is not None and region_arg is not None:
        raise typer.BadParameter(
            "give either --bbox or --region", param_hint="--region"
        )
    if bbox_arg is not None:
        return parse_bbox(bbox_arg)
    if region_arg is not None:
        try:
            return region(region_arg, config)
        except ConfigParseError as exc:
            known = ", ".join(region_names(config)) or "none"
            raise typer.BadParameter(
                f"{exc} Configured regions: {known}.", param_hint="--region"
            ) from exc
    return None


def parse_k(k_arg: str) -> Optional[int]:
    """Read the ``--k`` argument: ``auto`` or a positive cluster count.

    Returns
    -------
    Optional[int]
        The forced cluster count, or None for automatic selection

    """
    if k_arg.strip().lower() == AUTO:
        return None
    try:
        k = int(k_arg)
    except ValueError as exc:
        raise typer.BadParameter(
            f"expected {AUTO!r} or an integer, got {k_arg!r}",
            param_hint="--k",
        ) from exc
    if k < 1:
        raise typer.BadParameter("must be at least 1", param_hint="--k")
    return k
