from typing import Sequence

import numpy as np

from ..atlas import Manifold, Point
from ..errors import CoverError, DomainError
from ..log import Logger
from .system import PathChartSystem

logger = Logger.PATHSPACE


def _margins(manifold: Manifold, samples: Sequence[tuple[float, Point]]) -> dict[str, np.ndarray]:
    """
    Margin of every sample in every chart (-inf where the sample cannot be expressed)
    """

    out = {}

    for chart in manifold.charts:
        region = manifold.region(chart)
        values = np.full(len(samples), -np.inf)

        for k, (_, p) in enumerate(samples):
            try:
                values[k] = float(region.margin(manifold.convert_point(p, chart).coords))
            except (CoverError, DomainError):
                pass

        out[chart] = values

    return out


def _run(inside: np.ndarray, start: int) -> int:
    """
    Index of the last sample of the run of inside samples beginning at start
    """

    outside = np.flatnonzero(~inside[start:])
    return start + (outside[0] - 1 if outside.size else inside.shape[0] - start - 1)


def find_chart_system(manifold: Manifold, samples: Sequence[tuple[float, Point]], slack: float = 0.0) -> PathChartSystem:
    """
    A chart system covering the sampled path, by a greedy sweep.

    Samples are (t, point) pairs spanning [0, 1]. Each piece takes the chart holding the
    longest run of samples from its start with margin > slack; the next piece starts at the
    last sample of that run, which must therefore lie in two charts.
    """

    samples = sorted(samples, key=lambda item: item[0])
    times = np.array([t for t, _ in samples])

    if times.shape[0] < 2 or times[0] != 0.0 or times[-1] != 1.0:
        raise CoverError("Samples must span [0, 1] with at least two times")

    margins = _margins(manifold, samples)
    inside = {chart: values > slack for chart, values in margins.items()}
    lost = np.flatnonzero(~np.any(np.stack(list(inside.values())), axis=0))

    if lost.size:
        raise CoverError("No chart contains the sample", float(times[lost[0]]))

    knots, charts = [0.0], []
    start = 0
    last = times.shape[0] - 1

    while True:
        runs = {chart: _run(mask, start) for chart, mask in inside.items() if mask[start]}
        chart, end = max(runs.items(), key=lambda item: (item[1], margins[item[0]][start]))

        if end == last:
            charts.append(chart)
            knots.append(1.0)
            break

        if end <= start:
            raise CoverError("Chart cover stalls; samples are too sparse", float(times[start]))

        charts.append(chart)
        knots.append(float(times[end]))
        start = end

    logger.debug(f"Chart cover: {len(charts)} pieces, charts {charts}, knots {knots}")
    return PathChartSystem.make(knots, charts)
