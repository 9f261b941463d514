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

import humanfriendly

from plume_utils.datagen.corpus import CorpusGenerator
from plume_utils.dataset.store import load_sequence
from plume_utils.plume_pipeline import status_code
from plume_utils.plume_pipeline.commands.command import CORPUS_DIR
from plume_utils.plume_pipeline.commands.command import PipelineCmd
from plume_utils.plume_pipeline.status_code import prepare_terminate_message
from plume_utils.util import positive_nonzero_int


class GenerateCmd(PipelineCmd):

    def build_subparser(self, subparsers):
        subparser = subparsers.add_parser(
            'generate',
            description='Simulate a corpus of plume sequences.',
            help='Simulate one release per configured inflow angle and speed '
            'over a shared city and write the binary sequences, a manifest '
            'and optionally one grayscale image per frame.',
        )
        subparser.add_argument(
            '--count',
            type=positive_nonzero_int,
            help='Generate only the first COUNT (angle, speed) pairs. '
            'Default: every configured pair',
        )
        subparser.add_argument(
            '--workers',
            type=positive_nonzero_int,
            help='Simulate sequences in WORKERS processes.',
        )
        subparser.add_argument(
            '--images',
            action='store_true',
            help='Also write a PGM image per frame. Default: %(default)s',
        )
        return subparser

    def config_overrides(self, args):
        overrides = []
        if args.count is not None:
            overrides.append('corpus.count={0}'.format(args.count))
        if args.workers is not None:
            overrides.append('corpus.workers={0}'.format(args.workers))
        if args.images:
            overrides.append('corpus.images=true')
        return overrides

    def run_command(self):
        cfg = self.run_config
        out_dir = self.out_path(CORPUS_DIR)
        generator = CorpusGenerator(
            cfg.sim_config(),
            cfg.city_config(),
            cfg.corpus_config(),
            cfg.seed,
        )
        manifest = generator.generate(out_dir)

        written = [
            load_sequence(os.path.join(out_dir, entry['file']))
            for entry in manifest['sequences']
        ]
        size = sum(
            os.path.getsize(os.path.join(out_dir, entry['file']))
            for entry in manifest['sequences']
        )
        msg = prepare_terminate_message(
            "Generated {0} sequences ({1}) in {2}".format(
                len(written),
                humanfriendly.format_size(size),
                out_dir,
            ),
            raw=manifest,
        )
        if self.args.verbose:
            msg['verbose'] = "\n".join(
                "{sequence_id}: phi={phi_degrees} speed={speed} frames={frames}".format(**entry)
                for entry in manifest['sequences']
            )
        return status_code.OK, msg
