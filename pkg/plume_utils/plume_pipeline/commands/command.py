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
import logging
import os

from plume_utils.dataset.clips import split
from plume_utils.dataset.store import load_corpus


CORPUS_DIR = 'corpus'
TRAIN_DIR = 'train'
PREDICTIONS_DIR = 'predictions'
EVAL_DIR = 'eval'
MODEL_CHECKPOINT = 'model.ckpt'


class PipelineCmd(object):
    """Interface used by all plume-pipeline commands.
    The attributes run_config and args are initialized on run().
    """

    def __init__(self):
        self.log = logging.getLogger(self.__class__.__name__)
        self.run_config = None
        self.args = None

    def build_subparser(self, subparsers):
        """Build the command subparser.

        :param subparsers: argpars subparsers
        :returns: subparser
        """
        raise NotImplementedError("Implement in subclass")

    def config_overrides(self, args):
        """``section.key=value`` overrides taken from the subcommand options."""
        return []

    def run_command(self):
        """Implement the command logic.
        When run_command is called run_config and args are already
        initialized.

        :returns: (status code, terminate message)
        """
        raise NotImplementedError("Implement in subclass")

    def run(self, run_config, args):
        self.run_config = run_config
        self.args = args
        return self.run_command()

    def add_subparser(self, subparsers):
        self.build_subparser(subparsers).set_defaults(
            command=self.run,
            command_overrides=self.config_overrides,
        )

    def out_path(self, *parts):
        return os.path.join(self.run_config.out, *parts)

    @property
    def default_checkpoint(self):
        return self.out_path(TRAIN_DIR, MODEL_CHECKPOINT)

    def load_corpus(self):
        return load_corpus(self.out_path(CORPUS_DIR))

    def train_split(self, sequences):
        """(train, test) sequences; everything trains when n_train covers the corpus."""
        n_train = self.run_config.clip_config().n_train
        if n_train >= len(sequences):
            self.log.warning(
                "n_train=%d leaves no held-out sequence, using all %d",
                n_train,
                len(sequences),
            )
            return list(sequences), []
        return split(sequences, n_train, self.run_config.seed)

    def held_out(self, sequences, metadata=None):
        """Test sequences: the ids a checkpoint recorded, else a fresh split."""
        if metadata and metadata.get('test_ids'):
            wanted = set(metadata['test_ids'])
            return [s for s in sequences if s.sequence_id in wanted]
        train, test = self.train_split(sequences)
        return test or train
