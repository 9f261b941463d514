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
"""On-disk containers for sequences, checkpoints and predictions.

Layout, all integers little-endian::

    magic          8 bytes   b'PLUMEPK\\x00'
    major version  uint16
    header length  uint32
    header         JSON, sorted keys: kind, metadata and a payload table
                   of {name, dtype, shape, offset, length, crc32}
    payloads       raw little-endian arrays; offsets are relative to the
                   first byte after the header

Files are written to a temporary name and renamed into place.
"""
import glob
import logging
import os
import struct
from collections import namedtuple
from collections import OrderedDict

import humanfriendly
import numpy as np

from plume_utils.tensor.parameters import ParameterSet
from plume_utils.util.config import ModelConfig
from plume_utils.util.error import ChecksumError
from plume_utils.util.error import ContractError
from plume_utils.util.error import InvalidContainerError
from plume_utils.util.error import MissingInputError
from plume_utils.util.error import TruncatedPayloadError
from plume_utils.util.error import VersionMismatchError
from plume_utils.util.serialization import array_to_bytes
from plume_utils.util.serialization import bytes_to_array
from plume_utils.util.serialization import crc32
from plume_utils.util.serialization import dump_json
from plume_utils.util.serialization import load_json


_log = logging.getLogger(__name__)

MAGIC = b'PLUMEPK\x00'
FORMAT_VERSION = 1
PREAMBLE = struct.Struct('<8sHI')

SEQUENCE_KIND = 'sequence'
CHECKPOINT_KIND = 'checkpoint'
PREDICTION_KIND = 'prediction'

SEQUENCE_SUFFIX = '.plume'
CHECKPOINT_SUFFIX = '.ckpt'
PREDICTION_SUFFIX = '.pred'


def write_container(path, kind, metadata, arrays):
    """Write named arrays and JSON metadata to path.

    :param arrays: ordered (name, array) pairs or mapping
    """
    pairs = arrays.items() if hasattr(arrays, 'items') else arrays
    table = []
    payloads = []
    offset = 0
    for name, array in pairs:
        dtype_name, shape, payload = array_to_bytes(array)
        table.append({
            'name': name,
            'dtype': dtype_name,
            'shape': shape,
            'offset': offset,
            'length': len(payload),
            'crc32': crc32(payload),
        })
        payloads.append(payload)
        offset += len(payload)
    header = dump_json({'kind': kind, 'metadata': metadata, 'payloads': table})

    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        os.makedirs(directory)
    tmp_path = path + '.tmp'
    with open(tmp_path, 'wb') as out:
        out.write(PREAMBLE.pack(MAGIC, FORMAT_VERSION, len(header)))
        out.write(header)
        for payload in payloads:
            out.write(payload)
    os.replace(tmp_path, path)
    _log.debug(
        "Wrote %s container %s (%s)",
        kind,
        path,
        humanfriendly.format_size(PREAMBLE.size + len(header) + offset),
    )


def read_container(path, kind=None):
    """Read a container, verifying structure and checksums.

    :param kind: expected kind, or None to accept any
    :returns: (kind, metadata, OrderedDict of arrays)
    """
    if not os.path.isfile(path):
        raise MissingInputError("Input file {0} does not exist".format(path))
    with open(path, 'rb') as infile:
        content = infile.read()
    if len(content) < PREAMBLE.size:
        raise InvalidContainerError("{0} is too short to be a container".format(path))
    magic, version, header_length = PREAMBLE.unpack_from(content)
    if magic != MAGIC:
        raise InvalidContainerError("{0} is not a plume-utils container".format(path))
    if version != FORMAT_VERSION:
        raise VersionMismatchError(
            "{0} has format version {1}, expected {2}".format(
                path,
                version,
                FORMAT_VERSION,
            ),
        )
    body_start = PREAMBLE.size + header_length
    if len(content) < body_start:
        raise TruncatedPayloadError("{0}: header is truncated".format(path))
    try:
        header = load_json(content[PREAMBLE.size:body_start])
        found_kind = header['kind']
        metadata = header['metadata']
        table = header['payloads']
    except (ValueError, KeyError, TypeError) as e:
        raise InvalidContainerError("{0}: unreadable header ({1})".format(path, e))
    if kind is not None and found_kind != kind:
        raise InvalidContainerError(
            "{0} holds a {1}, expected a {2}".format(path, found_kind, kind),
        )

    arrays = OrderedDict()
    for entry in table:
        start = body_start + entry['offset']
        end = start + entry['length']
        if end > len(content):
            raise TruncatedPayloadError(
                "{0}: payload {1} is truncated".format(path, entry['name']),
            )
        payload = content[start:end]
        actual = crc32(payload)
        if actual != entry['crc32']:
            raise ChecksumError(entry['name'], entry['crc32'], actual)
        arrays[entry['name']] = bytes_to_array(payload, entry['dtype'], entry['shape'])
    return found_kind, metadata, arrays


class PlumeSequence(namedtuple(
    'PlumeSequence',
    ['frames', 'phi', 'speed', 'mask', 'metadata'],
)):
    """One simulated release.

    * **frames** (``numpy.ndarray``): read-only binary float32 frames [F, N, M]
    * **phi** (``float``): inflow angle in radians
    * **speed** (``float``): inflow speed in m/s
    * **mask** (``numpy.ndarray``): uint8 building mask [N, M]
    * **metadata** (``dict``): provenance such as sequence_id, seed and
      config_hash
    """
    __slots__ = ()

    @classmethod
    def create(cls, frames, phi, speed, mask, metadata=None):
        frames = np.array(frames, dtype=np.float32)
        if frames.ndim != 3 or frames.shape[0] < 2:
            raise ContractError(
                "A sequence needs at least two [N, M] frames, got {0}".format(frames.shape),
            )
        if not np.isin(frames, (0.0, 1.0)).all():
            raise ContractError("Sequence frames must be binary")
        mask = np.array(mask, dtype=np.uint8)
        if mask.shape != frames.shape[1:]:
            raise ContractError(
                "Mask {0} does not match frames {1}".format(mask.shape, frames.shape[1:]),
            )
        frames.setflags(write=False)
        mask.setflags(write=False)
        return cls(frames, float(phi), float(speed), mask, dict(metadata or {}))

    @property
    def sequence_id(self):
        return self.metadata.get('sequence_id', '')

    @property
    def num_frames(self):
        return self.frames.shape[0]

    def __eq__(self, other):
        return (
            np.array_equal(self.frames, other.frames) and
            self.phi == other.phi and
            self.speed == other.speed and
            np.array_equal(self.mask, other.mask) and
            self.metadata == other.metadata
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None


def save_sequence(path, sequence):
    metadata = dict(sequence.metadata)
    metadata.update({'phi': sequence.phi, 'speed': sequence.speed})
    write_container(path, SEQUENCE_KIND, metadata, [
        ('frames', sequence.frames.astype(np.uint8)),
        ('mask', sequence.mask),
    ])


def load_sequence(path):
    _, metadata, arrays = read_container(path, SEQUENCE_KIND)
    metadata = dict(metadata)
    try:
        phi = metadata.pop('phi')
        speed = metadata.pop('speed')
        frames, mask = arrays['frames'], arrays['mask']
    except KeyError as e:
        raise InvalidContainerError("{0}: missing {1}".format(path, e))
    return PlumeSequence.create(frames, phi, speed, mask, metadata)


def sequence_path(directory, sequence_id):
    return os.path.join(directory, sequence_id + SEQUENCE_SUFFIX)


def load_corpus(directory):
    """Every sequence of a corpus directory, sorted by file name."""
    if not os.path.isdir(directory):
        raise MissingInputError("Corpus directory {0} does not exist".format(directory))
    paths = sorted(glob.glob(os.path.join(directory, '*' + SEQUENCE_SUFFIX)))
    if not paths:
        raise MissingInputError("No sequences found in {0}".format(directory))
    _log.info("Loading %d sequences from %s", len(paths), directory)
    return [load_sequence(path) for path in paths]


def model_config_to_dict(cfg):
    data = cfg._asdict()
    data['frame_shape'] = list(cfg.frame_shape)
    return data


def model_config_from_dict(data):
    try:
        data = dict(data)
        data['frame_shape'] = tuple(data['frame_shape'])
        return ModelConfig(**data)
    except (KeyError, TypeError) as e:
        raise InvalidContainerError("Checkpoint model config is invalid: {0}".format(e))


def save_checkpoint(path, params, model_cfg, metadata=None):
    metadata = dict(metadata or {})
    metadata['model'] = model_config_to_dict(model_cfg)
    metadata['checksum'] = params.checksum()
    write_container(path, CHECKPOINT_KIND, metadata, params.to_arrays())


def load_checkpoint(path):
    """:returns: (ParameterSet, ModelConfig, metadata)"""
    _, metadata, arrays = read_container(path, CHECKPOINT_KIND)
    if 'model' not in metadata:
        raise InvalidContainerError("{0}: checkpoint without model config".format(path))
    cfg = model_config_from_dict(metadata['model'])
    return ParameterSet(arrays), cfg, metadata


Prediction = namedtuple('Prediction', ['sequence_id', 'frames', 'metadata'])
Prediction.__doc__ = """Predicted probability frames [k, N, M] of one sequence."""


def prediction_path(directory, sequence_id):
    return os.path.join(directory, sequence_id + PREDICTION_SUFFIX)


def save_prediction(path, prediction):
    metadata = dict(prediction.metadata)
    metadata['sequence_id'] = prediction.sequence_id
    write_container(path, PREDICTION_KIND, metadata, [
        ('frames', np.asarray(prediction.frames, dtype=np.float32)),
    ])


def load_prediction(path):
    _, metadata, arrays = read_container(path, PREDICTION_KIND)
    metadata = dict(metadata)
    if 'frames' not in arrays or 'sequence_id' not in metadata:
        raise InvalidContainerError("{0}: incomplete prediction".format(path))
    return Prediction(metadata.pop('sequence_id'), arrays['frames'], metadata)


def load_predictions(directory):
    """Predictions of a directory keyed by sequence id."""
    if not os.path.isdir(directory):
        raise MissingInputError("Prediction directory {0} does not exist".format(directory))
    paths = sorted(glob.glob(os.path.join(directory, '*' + PREDICTION_SUFFIX)))
    if not paths:
        raise MissingInputError("No predictions found in {0}".format(directory))
    predictions = OrderedDict()
    for path in paths:
        prediction = load_prediction(path)
        predictions[prediction.sequence_id] = prediction
    return predictions
