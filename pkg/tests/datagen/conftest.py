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
import pytest

from plume_utils.util.config import SimConfig


@pytest.fixture
def sim_cfg():
    return SimConfig(grid=(16, 16), frames=6)


@pytest.fixture
def closed_cfg():
    """Small closed box, one-second steps, a frame every five steps."""
    return SimConfig(
        grid=(12, 24),
        dx=10.0,
        dt=1.0,
        kappa=1.0,
        canopy_factor=0.25,
        frames=6,
        output_interval=5.0,
        threshold=1e-3,
        boundary='closed',
        release_duration=5.0,
        emission_rate=1.0,
        source=(6, 4),
    )
