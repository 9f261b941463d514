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
"""Grayscale frame export as binary PGM (P5) images."""
import os

import numpy as np


BACKGROUND = 0
BUILDING = 128
PLUME = 255


def render_frame(frame, mask=None):
    """Map a binary or probability frame to 8-bit gray; buildings on top."""
    gray = np.rint(np.clip(np.asarray(frame, dtype=np.float64), 0.0, 1.0) * PLUME)
    gray = gray.astype(np.uint8)
    if mask is not None:
        gray[np.asarray(mask).astype(bool)] = BUILDING
    return gray


def write_pgm(path, image):
    image = np.asarray(image, dtype=np.uint8)
    rows, cols = image.shape
    with open(path, 'wb') as out:
        out.write('P5\n{0} {1}\n255\n'.format(cols, rows).encode('ascii'))
        out.write(np.ascontiguousarray(image).tobytes())


def read_pgm(path):
    with open(path, 'rb') as infile:
        content = infile.read()
    magic, size, maxval, data = content.split(b'\n', 3)
    if magic != b'P5' or maxval != b'255':
        raise ValueError("{0} is not an 8-bit binary PGM".format(path))
    cols, rows = (int(v) for v in size.split())
    return np.frombuffer(data, dtype=np.uint8).reshape(rows, cols)


def export_frames(directory, frames, mask=None, prefix='frame'):
    """Write one image per frame; returns the written paths."""
    if not os.path.isdir(directory):
        os.makedirs(directory)
    paths = []
    for index, frame in enumerate(frames):
        path = os.path.join(directory, '{0}_{1:03d}.pgm'.format(prefix, index))
        write_pgm(path, render_frame(frame, mask))
        paths.append(path)
    return paths
