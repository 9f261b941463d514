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
"""Explicit finite-volume solver of 2-D advection-diffusion.

Concentration lives at cell centres. Every step computes the flux
through each cell face, first-order upwind for advection and central
differences for diffusion, then updates cells with forward Euler:

    c <- c - dt / dx * (sum of outgoing face fluxes)

Faces touching a building carry no flux, so building cells stay empty.
Domain edges are either ``absorbing`` (an empty ghost cell outside, mass
leaves freely) or ``closed`` (no flux).
"""
import logging

import humanfriendly
import numpy as np

from plume_utils.datagen.city import source_cell
from plume_utils.util.error import CFLViolationError
from plume_utils.util.error import GenerationError
from plume_utils.util.error import InvalidConfigurationError


CFL_SAFETY = 0.9
NEGATIVE_TOLERANCE = 1e-12


def _upwind(velocity, left, right):
    return velocity * (left if velocity > 0 else right)


class AdvectionDiffusionSolver(object):
    """Transport of a passive scalar over a gridded city.

    :param cfg: SimConfig
    :param wind: WindField of the inflow; its speed is scaled by
        cfg.canopy_factor to a near-ground transport speed
    :param mask: building mask, 1 = building, or None
    """

    def __init__(self, cfg, wind, mask=None):
        self.log = logging.getLogger(self.__class__.__name__)
        self.cfg = cfg
        self.wind = wind
        rows, cols = cfg.grid
        if mask is None:
            mask = np.zeros((rows, cols), dtype=np.uint8)
        if mask.shape != (rows, cols):
            raise InvalidConfigurationError(
                "Building mask {0} does not match grid {1}".format(mask.shape, cfg.grid),
            )
        self.mask = mask.astype(bool)
        self.velocity = wind.grid_velocity(cfg.canopy_factor)
        steps = cfg.output_interval / cfg.dt
        if abs(steps - round(steps)) > 1e-9 or round(steps) < 1:
            raise InvalidConfigurationError(
                "Output interval {0}s is not a multiple of dt {1}s".format(
                    cfg.output_interval,
                    cfg.dt,
                ),
            )
        self.steps_per_frame = int(round(steps))
        self._open_row_faces, self._open_col_faces = self._open_faces()

    def _open_faces(self):
        """Faces allowed to carry flux.

        Row faces have shape [N + 1, M]; face r separates cells r - 1 and
        r. Column faces have shape [N, M + 1]. Edge faces are open only
        for an absorbing boundary.
        """
        open_cells = ~self.mask
        edge = self.cfg.boundary == 'absorbing'
        rows = np.zeros((open_cells.shape[0] + 1, open_cells.shape[1]), dtype=bool)
        rows[1:-1] = open_cells[:-1] & open_cells[1:]
        rows[0] = open_cells[0] & edge
        rows[-1] = open_cells[-1] & edge
        cols = np.zeros((open_cells.shape[0], open_cells.shape[1] + 1), dtype=bool)
        cols[:, 1:-1] = open_cells[:, :-1] & open_cells[:, 1:]
        cols[:, 0] = open_cells[:, 0] & edge
        cols[:, -1] = open_cells[:, -1] & edge
        return rows, cols

    def check_cfl(self):
        """Reject a timestep that would make the explicit update unstable.

        Enforces dt <= 0.9 min(dx / |v|, dx^2 / (4 kappa)) and the
        positivity bound of the combined 2-D update.
        """
        cfg = self.cfg
        speed = abs(self.wind.speed * cfg.canopy_factor)
        limits = []
        if speed > 0:
            limits.append(cfg.dx / speed)
        if cfg.kappa > 0:
            limits.append(cfg.dx ** 2 / (4.0 * cfg.kappa))
        if limits and cfg.dt > CFL_SAFETY * min(limits):
            raise CFLViolationError(
                "dt={0}s exceeds the stability limit {1:.4g}s".format(
                    cfg.dt,
                    CFL_SAFETY * min(limits),
                ),
            )
        row_v, col_v = self.velocity
        combined = (
            cfg.dt * (abs(row_v) + abs(col_v)) / cfg.dx +
            4.0 * cfg.kappa * cfg.dt / cfg.dx ** 2
        )
        if combined > 1.0:
            raise CFLViolationError(
                "Combined advection and diffusion number {0:.4g} exceeds 1".format(combined),
            )

    def fluxes(self, c):
        """Face fluxes (row faces, column faces) in concentration * m / s."""
        cfg = self.cfg
        row_v, col_v = self.velocity
        padded = np.pad(c, 1)
        kappa = cfg.kappa / cfg.dx

        above, below = padded[:-1, 1:-1], padded[1:, 1:-1]
        row_flux = _upwind(row_v, above, below) - kappa * (below - above)
        row_flux[~self._open_row_faces] = 0.0

        left, right = padded[1:-1, :-1], padded[1:-1, 1:]
        col_flux = _upwind(col_v, left, right) - kappa * (right - left)
        col_flux[~self._open_col_faces] = 0.0
        return row_flux, col_flux

    def step(self, c):
        """One forward Euler step, without the source."""
        row_flux, col_flux = self.fluxes(c)
        divergence = (
            row_flux[1:] - row_flux[:-1] + col_flux[:, 1:] - col_flux[:, :-1]
        )
        updated = c - self.cfg.dt / self.cfg.dx * divergence
        lowest = updated.min()
        if lowest < -NEGATIVE_TOLERANCE:
            raise GenerationError(
                "Negative concentration {0:.3e} after update".format(lowest),
            )
        return np.maximum(updated, 0.0)

    def run(self, source=None):
        """Simulate cfg.frames output frames.

        :param source: release cell (row, col), defaults to the SimConfig's
        :returns: float64 array [frames, N, M], frame n at n * output_interval
        """
        self.check_cfl()
        cfg = self.cfg
        source = tuple(source) if source is not None else source_cell(cfg)
        if self.mask[source]:
            raise GenerationError("Source {0} lies inside a building".format(source))
        c = np.zeros(cfg.grid, dtype=np.float64)
        frames = np.empty((cfg.frames,) + tuple(cfg.grid), dtype=np.float64)
        release_steps = int(np.ceil(cfg.release_duration / cfg.dt - 1e-9))
        total_steps = cfg.frames * self.steps_per_frame
        for n in range(total_steps):
            if n < release_steps:
                c[source] += cfg.emission_rate * cfg.dt
            c = self.step(c)
            if (n + 1) % self.steps_per_frame == 0:
                frames[(n + 1) // self.steps_per_frame - 1] = c
        self.log.debug(
            "Simulated %s of plume transport in %d steps",
            humanfriendly.format_timespan(total_steps * cfg.dt),
            total_steps,
        )
        return frames


def simulate(cfg, wind, mask=None, source=None):
    """Concentration frames of one release, see AdvectionDiffusionSolver."""
    return AdvectionDiffusionSolver(cfg, wind, mask).run(source)


def binarize(frames, threshold):
    """1 where concentration exceeds threshold times the first-frame peak.

    :raises GenerationError: the first frame is empty
    """
    if threshold <= 0:
        raise InvalidConfigurationError("Binarization threshold must be positive")
    peak = frames[0].max()
    if peak <= 0:
        raise GenerationError("First frame holds no concentration")
    return (frames > threshold * peak).astype(np.uint8)
