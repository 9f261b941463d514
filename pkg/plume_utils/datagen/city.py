# -*- coding: utf-8 -*-
# Copyright 2023 The plume-utils Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Synthetic urban layout of rectangular buildings."""
import logging
import math
from collections import namedtuple

import numpy as np

from plume_utils.util.error import GenerationError


_log = logging.getLogger(__name__)

# Downstream buildings must lie within this angle of the downwind direction
DOWNSTREAM_HALF_ANGLE = math.radians(45.0)


Rectangle = namedtuple('Rectangle', ['row', 'col', 'height', 'width'])


class BuildingMask(namedtuple('BuildingMask', ['mask', 'rectangles'])):
    """Binary grid (1 = building) and the rectangles it was drawn from."""
    __slots__ = ()

    def covers(self, cell):
        return bool(self.mask[cell[0], cell[1]])


def source_cell(cfg):
    """Release cell of a SimConfig, the grid centre by default."""
    if cfg.source is not None:
        return tuple(cfg.source)
    rows, cols = cfg.grid
    return rows // 2, cols // 2


def _cells(rect):
    rows = np.arange(rect.row, rect.row + rect.height)
    cols = np.arange(rect.col, rect.col + rect.width)
    return np.stack(np.meshgrid(rows, cols, indexing='ij'), axis=-1).reshape(-1, 2)


def is_downstream(rect, source, downwind, radius):
    """True if some cell of rect lies within radius of source, downwind of it."""
    offsets = _cells(rect) - np.asarray(source)
    distance = np.hypot(offsets[:, 0], offsets[:, 1])
    along = offsets[:, 0] * downwind[0] + offsets[:, 1] * downwind[1]
    with np.errstate(invalid='ignore', divide='ignore'):
        cosine = np.where(distance > 0, along / distance, -1.0)
    return bool(np.any(
        (distance <= radius) & (cosine >= math.cos(DOWNSTREAM_HALF_ANGLE))
    ))


def _fits(occupied, rect, grid):
    """Rectangle lies inside the grid and keeps a one-cell gap to occupied cells."""
    rows, cols = grid
    if rect.row + rect.height > rows or rect.col + rect.width > cols:
        return False
    window = occupied[
        max(rect.row - 1, 0):rect.row + rect.height + 1,
        max(rect.col - 1, 0):rect.col + rect.width + 1,
    ]
    return not window.any()


def build_city(seed, count, size_range, cfg, wind=None, downstream_radius=6.0,
               max_attempts=1000):
    """Place count non-overlapping rectangular buildings.

    The source cell and its neighbours stay clear. With a wind given the
    first building is placed downstream of the source, within
    downstream_radius cells, so the plume has something to split on.

    :param seed: seed of the placement
    :param count: number of buildings
    :param size_range: (min, max) side length in cells, inclusive
    :param cfg: SimConfig giving grid and source
    :param wind: WindField whose direction defines downstream, or None
    :returns: BuildingMask
    :raises GenerationError: placement fails within max_attempts draws
    """
    rows, cols = cfg.grid
    low, high = size_range
    source = source_cell(cfg)
    rng = np.random.RandomState(seed)

    occupied = np.zeros((rows, cols), dtype=bool)
    # the one-cell gap of _fits also keeps the neighbours of the source clear
    blocked = np.zeros((rows, cols), dtype=bool)
    blocked[source[0], source[1]] = True

    rectangles = []
    attempts = 0
    while len(rectangles) < count:
        if attempts >= max_attempts:
            raise GenerationError(
                "Placed {0} of {1} buildings after {2} attempts".format(
                    len(rectangles),
                    count,
                    attempts,
                ),
            )
        attempts += 1
        height = rng.randint(low, high + 1)
        width = rng.randint(low, high + 1)
        if height > rows or width > cols:
            continue
        rect = Rectangle(
            int(rng.randint(0, rows - height + 1)),
            int(rng.randint(0, cols - width + 1)),
            int(height),
            int(width),
        )
        if not _fits(occupied | blocked, rect, (rows, cols)):
            continue
        if not rectangles and wind is not None and not is_downstream(
            rect, source, wind.downwind(), downstream_radius,
        ):
            continue
        occupied[rect.row:rect.row + rect.height, rect.col:rect.col + rect.width] = True
        rectangles.append(rect)

    _log.debug("Placed %d buildings in %d attempts", len(rectangles), attempts)
    mask = occupied.astype(np.uint8)
    mask.setflags(write=False)
    return BuildingMask(mask, tuple(rectangles))
