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
"""Training and test clips cut from plume sequences."""
import logging
from collections import namedtuple

import numpy as np

from plume_utils.datagen.wind import wind_batch
from plume_utils.util.error import ContractError


_log = logging.getLogger(__name__)


Clip = namedtuple(
    'Clip',
    ['inputs', 'targets', 'sequence_id', 't0', 'phi', 'speed'],
)
Clip.__doc__ = """Consecutive frames of one sequence.

* **inputs** (``numpy.ndarray``): read-only frames t0 .. t0 + T - 1, [T, N, M]
* **targets** (``numpy.ndarray``): read-only frames t0 + T .. t0 + T + k - 1,
  [k, N, M]
* **sequence_id** (``str``): id of the source sequence
* **t0** (``int``): index of the first input frame
* **phi**, **speed** (``float``): inflow of the source sequence
"""

Batch = namedtuple('Batch', ['inputs', 'targets', 'wind', 'clips'])
Batch.__doc__ = """Stacked clips ready for a rollout.

* **inputs**: [T, B, 1, N, M]
* **targets**: frames 2 .. T + k of every clip, [T + k - 1, B, 1, N, M]
* **wind**: (D [B, 2, N, M], S [B, 1, N, M])
"""


def clip_count(num_frames, input_frames, horizon, stride):
    return (num_frames - (input_frames + horizon)) // stride + 1


def make_clips(sequence, input_frames, horizon, stride):
    """Cut clips starting at t0 = 0, s, 2s, ...; overlap is allowed.

    :raises ContractError: invalid T, k, s, or T + k longer than the sequence
    """
    if input_frames < 1 or horizon < 0 or stride < 1:
        raise ContractError(
            "Need T >= 1, k >= 0 and s >= 1, got T={0}, k={1}, s={2}".format(
                input_frames,
                horizon,
                stride,
            ),
        )
    frames = sequence.frames
    window = input_frames + horizon
    if window > frames.shape[0]:
        raise ContractError(
            "Sequence {0} has {1} frames, a clip needs {2}".format(
                sequence.sequence_id,
                frames.shape[0],
                window,
            ),
        )
    clips = []
    for t0 in range(0, frames.shape[0] - window + 1, stride):
        clips.append(Clip(
            inputs=frames[t0:t0 + input_frames],
            targets=frames[t0 + input_frames:t0 + window],
            sequence_id=sequence.sequence_id,
            t0=t0,
            phi=sequence.phi,
            speed=sequence.speed,
        ))
    return clips


def split(sequences, n_train, seed):
    """Seeded shuffle, then the first n_train sequences train.

    :returns: (train, test) lists
    """
    sequences = list(sequences)
    if n_train >= len(sequences):
        raise ContractError(
            "n_train={0} leaves no test sequence out of {1}".format(
                n_train,
                len(sequences),
            ),
        )
    order = np.random.RandomState(seed).permutation(len(sequences))
    train = [sequences[i] for i in order[:n_train]]
    test = [sequences[i] for i in order[n_train:]]
    _log.info("Split %d sequences into %d train and %d test", len(sequences), len(train), len(test))
    return train, test


def stack_clips(clips, dtype=np.float32):
    """Batch clips of equal T and k for a rollout."""
    if not clips:
        raise ContractError("Cannot batch zero clips")
    inputs = np.stack([c.inputs for c in clips], axis=1).astype(dtype)
    following = np.stack(
        [np.concatenate([c.inputs[1:], c.targets]) for c in clips],
        axis=1,
    ).astype(dtype)
    rows, cols = inputs.shape[2:]
    wind = wind_batch(
        [c.phi for c in clips],
        [c.speed for c in clips],
        rows,
        cols,
        dtype=dtype,
    )
    return Batch(
        inputs=inputs[:, :, np.newaxis],
        targets=following[:, :, np.newaxis],
        wind=wind,
        clips=list(clips),
    )
