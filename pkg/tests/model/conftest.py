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

from plume_utils.util.config import ModelConfig


@pytest.fixture
def small_cfg():
    return ModelConfig(
        variant='st_gasnet',
        layers=2,
        hidden_channels=3,
        kernel_size=3,
        input_channels=1,
        frame_shape=(6, 5),
    )
