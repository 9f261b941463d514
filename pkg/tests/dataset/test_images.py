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
import os

import numpy as np
import pytest

from plume_utils.dataset.images import BUILDING
from plume_utils.dataset.images import export_frames
from plume_utils.dataset.images import read_pgm
from plume_utils.dataset.images import render_frame
from plume_utils.dataset.images import write_pgm


class TestRenderFrame(object):

    def test_gray_levels(self):
        frame = np.array([[0.0, 1.0], [0.5, 1.0]])
        mask = np.array([[0, 0], [0, 1]], dtype=np.uint8)
        assert np.array_equal(render_frame(frame, mask), [[0, 255], [128, BUILDING]])

    def test_clipped(self):
        assert np.array_equal(render_frame(np.array([[-1.0, 2.0]])), [[0, 255]])


class TestPgm(object):

    def test_header(self, tmpdir):
        path = str(tmpdir.join('frame.pgm'))
        write_pgm(path, np.zeros((2, 3), dtype=np.uint8))
        with open(path, 'rb') as infile:
            assert infile.read() == b'P5\n3 2\n255\n' + b'\x00' * 6

    def test_read_back(self, tmpdir):
        path = str(tmpdir.join('frame.pgm'))
        image = np.arange(12, dtype=np.uint8).reshape(3, 4)
        write_pgm(path, image)
        assert np.array_equal(read_pgm(path), image)

    def test_not_pgm(self, tmpdir):
        path = str(tmpdir.join('frame.pgm'))
        with open(path, 'wb') as out:
            out.write(b'P2\n1 1\n255\n0')
        with pytest.raises(ValueError):
            read_pgm(path)

    def test_export(self, tmpdir):
        directory = str(tmpdir.join('images', 'seq_000'))
        paths = export_frames(directory, np.ones((3, 2, 2)), prefix='pred')
        assert [os.path.basename(p) for p in paths] == [
            'pred_000.pgm', 'pred_001.pgm', 'pred_002.pgm',
        ]
        assert np.all(read_pgm(paths[2]) == 255)
