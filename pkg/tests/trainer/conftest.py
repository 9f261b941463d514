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

from plume_utils.dataset.clips import make_clips
from plume_utils.util.config import ModelConfig
from plume_utils.util.config import TrainConfig
from tests.dataset.helper import make_sequence


@pytest.fixture
def tiny_cfg():
    return ModelConfig(
        variant='st_gasnet',
        layers=1,
        hidden_channels=2,
        kernel_size=3,
        input_channels=1,
        frame_shape=(6, 6),
    )


@pytest.fixture
def train_cfg():
    return TrainConfig(
        learning_rate=1e-2,
        batch_size=2,
        iterations=3,
        seed=0,
        log_every=1,
        checkpoint_every=2,
    )


@pytest.fixture
def clips():
    clips = []
    for index in range(3):
        sequence = make_sequence(6, shape=(6, 6), seed=index, sequence_id='seq_{0:03d}'.format(index))
        clips.extend(make_clips(sequence, 2, 2, 2))
    return clips
