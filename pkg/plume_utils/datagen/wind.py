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
"""Large-scale inflow: direction convention and network input channels.

Angles follow the meteorological convention: phi is the direction the
wind blows FROM, measured clockwise from north. A wind with phi = 180
degrees comes from the south and carries the plume north.
"""
import math
from collections import namedtuple

import numpy as np


class WindField(namedtuple('WindField', ['phi', 'speed'])):
    """Uniform inflow.

    * **phi** (``float``): inflow angle in radians
    * **speed** (``float``): inflow speed in m/s, non-negative
    """
    __slots__ = ()

    @classmethod
    def from_degrees(cls, degrees, speed):
        return cls(math.radians(degrees), float(speed))

    @property
    def degrees(self):
        return math.degrees(self.phi)

    def velocity(self, scale=1.0):
        """(u_east, v_north) in m/s, optionally scaled."""
        speed = self.speed * scale
        return -speed * math.sin(self.phi), -speed * math.cos(self.phi)

    def grid_velocity(self, scale=1.0):
        """(row, column) velocity; rows grow southward, columns eastward."""
        u_east, v_north = self.velocity(scale)
        return -v_north, u_east

    def downwind(self):
        """Unit (row, column) vector pointing where the wind blows to."""
        return math.cos(self.phi), -math.sin(self.phi)


def wind_channels(phi, speed, rows, cols):
    """Constant direction and speed fields of the augmented observation.

    :returns: (D of shape [rows, cols, 2] holding (cos(2pi - phi),
        sin(2pi - phi)), S of shape [rows, cols, 1] holding speed)
    """
    angle = 2.0 * math.pi - phi
    direction = np.empty((rows, cols, 2), dtype=np.float64)
    direction[..., 0] = math.cos(angle)
    direction[..., 1] = math.sin(angle)
    strength = np.full((rows, cols, 1), float(speed), dtype=np.float64)
    return direction, strength


def wind_batch(phis, speeds, rows, cols, dtype=np.float32):
    """Channel-first (D [B, 2, N, M], S [B, 1, N, M]) for a batch of clips."""
    directions, strengths = [], []
    for phi, speed in zip(phis, speeds):
        direction, strength = wind_channels(phi, speed, rows, cols)
        directions.append(direction.transpose(2, 0, 1))
        strengths.append(strength.transpose(2, 0, 1))
    return (
        np.stack(directions).astype(dtype),
        np.stack(strengths).astype(dtype),
    )
