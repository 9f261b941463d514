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
import math

import numpy as np

from plume_utils.dataset.store import PlumeSequence


def make_sequence(num_frames=10, shape=(4, 5), seed=0, sequence_id='seq_000',
                  degrees=200.0, speed=2.0, frames=None):
    """Random binary sequence with a one-cell building in the corner."""
    if frames is None:
        rng = np.random.RandomState(seed)
        frames = (rng.rand(num_frames, *shape) > 0.5).astype(np.float32)
    mask = np.zeros(np.asarray(frames).shape[1:], dtype=np.uint8)
    mask[0, 0] = 1
    return PlumeSequence.create(
        frames,
        math.radians(degrees),
        speed,
        mask,
        {'sequence_id': sequence_id},
    )
