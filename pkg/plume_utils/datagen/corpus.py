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
"""Corpus generation over a grid of inflow angles and speeds.

All sequences of a corpus share one city. Its first building is placed
downstream of the source for the mean inflow direction of the corpus.
"""
import hashlib
import json
import logging
import math
import os
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from plume_utils.datagen.city import build_city
from plume_utils.datagen.solver import AdvectionDiffusionSolver
from plume_utils.datagen.solver import binarize
from plume_utils.datagen.solver import simulate
from plume_utils.datagen.wind import WindField
from plume_utils.dataset.images import export_frames
from plume_utils.dataset.store import PlumeSequence
from plume_utils.dataset.store import save_sequence
from plume_utils.dataset.store import sequence_path
from plume_utils.util.serialization import dump_json


_log = logging.getLogger(__name__)

MANIFEST_FILE = 'manifest.json'

SequenceSpec = namedtuple('SequenceSpec', ['sequence_id', 'angle', 'speed'])


def corpus_specs(corpus_cfg):
    """(angle, speed) pairs of the corpus, angle-major, cut to corpus_cfg.count."""
    pairs = [(a, s) for a in corpus_cfg.angles for s in corpus_cfg.speeds]
    if corpus_cfg.count is not None:
        pairs = pairs[:corpus_cfg.count]
    return [
        SequenceSpec('seq_{0:03d}'.format(index), float(angle), float(speed))
        for index, (angle, speed) in enumerate(pairs)
    ]


def mean_direction(angles):
    """Circular mean of angles in degrees."""
    radians = np.radians(angles)
    return math.degrees(math.atan2(np.sin(radians).mean(), np.cos(radians).mean())) % 360.0


def config_hash(*configs):
    """Short digest identifying the configs a corpus was generated with."""
    payload = dump_json([list(c) if isinstance(c, tuple) else c for c in configs])
    return hashlib.sha256(payload).hexdigest()[:16]


def simulate_sequence(job):
    """Binary frames of one sequence; a module function so workers can pickle it."""
    sim_cfg, mask, spec = job
    wind = WindField.from_degrees(spec.angle, spec.speed)
    return binarize(simulate(sim_cfg, wind, mask), sim_cfg.threshold)


class CorpusGenerator(object):
    """Simulate and store a corpus of plume sequences.

    :param sim_cfg: SimConfig
    :param city_cfg: CityConfig
    :param corpus_cfg: CorpusConfig
    :param seed: seed of the city layout
    """

    def __init__(self, sim_cfg, city_cfg, corpus_cfg, seed):
        self.log = logging.getLogger(self.__class__.__name__)
        self.sim_cfg = sim_cfg
        self.city_cfg = city_cfg
        self.corpus_cfg = corpus_cfg
        self.seed = seed
        self.specs = corpus_specs(corpus_cfg)

    def build_city(self):
        angles = [spec.angle for spec in self.specs] or list(self.corpus_cfg.angles)
        wind = WindField.from_degrees(mean_direction(angles), 1.0)
        return build_city(
            self.seed,
            self.city_cfg.buildings,
            self.city_cfg.size_range,
            self.sim_cfg,
            wind=wind,
            downstream_radius=self.city_cfg.downstream_radius,
            max_attempts=self.city_cfg.max_attempts,
        )

    def check_cfl(self):
        """Reject the corpus before any stepping if one inflow breaks the CFL bound."""
        for spec in self.specs:
            AdvectionDiffusionSolver(
                self.sim_cfg,
                WindField.from_degrees(spec.angle, spec.speed),
            ).check_cfl()

    def _frames(self, mask):
        jobs = [(self.sim_cfg, mask, spec) for spec in self.specs]
        if self.corpus_cfg.workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=self.corpus_cfg.workers) as executor:
                for frames in executor.map(simulate_sequence, jobs):
                    yield frames
        else:
            for job in jobs:
                yield simulate_sequence(job)

    def generate(self, out_dir):
        """Write every sequence and the manifest to out_dir.

        :returns: the manifest as a dict
        """
        self.check_cfl()
        city = self.build_city()
        digest = config_hash(self.sim_cfg, self.city_cfg, self.seed)
        self.log.info(
            "Generating %d sequences with %d buildings into %s",
            len(self.specs),
            len(city.rectangles),
            out_dir,
        )
        if not os.path.isdir(out_dir):
            os.makedirs(out_dir)
        entries = []
        for spec, frames in zip(self.specs, self._frames(city.mask)):
            sequence = PlumeSequence.create(
                frames,
                math.radians(spec.angle),
                spec.speed,
                city.mask,
                {
                    'sequence_id': spec.sequence_id,
                    'phi_degrees': spec.angle,
                    'seed': self.seed,
                    'config_hash': digest,
                },
            )
            path = sequence_path(out_dir, spec.sequence_id)
            save_sequence(path, sequence)
            if self.corpus_cfg.images:
                export_frames(
                    os.path.join(out_dir, 'images', spec.sequence_id),
                    sequence.frames,
                    city.mask,
                )
            entries.append({
                'sequence_id': spec.sequence_id,
                'file': os.path.basename(path),
                'phi_degrees': spec.angle,
                'speed': spec.speed,
                'frames': sequence.num_frames,
                'plume_cells': [int(n) for n in sequence.frames.sum(axis=(1, 2))],
            })
            self.log.debug("Wrote %s (phi=%s, speed=%s)", path, spec.angle, spec.speed)

        manifest = {
            'seed': self.seed,
            'config_hash': digest,
            'grid': list(self.sim_cfg.grid),
            'buildings': [list(rect) for rect in city.rectangles],
            'sequences': entries,
        }
        with open(os.path.join(out_dir, MANIFEST_FILE), 'w') as out:
            json.dump(manifest, out, sort_keys=True, indent=2)
        return manifest
