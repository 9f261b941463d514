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
import json

from plume_utils.dataset.clips import make_clips
from plume_utils.dataset.store import load_checkpoint
from plume_utils.dataset.store import save_checkpoint
from plume_utils.model.weights import init_params
from plume_utils.plume_pipeline import status_code
from plume_utils.plume_pipeline.commands.command import MODEL_CHECKPOINT
from plume_utils.plume_pipeline.commands.command import PipelineCmd
from plume_utils.plume_pipeline.commands.command import TRAIN_DIR
from plume_utils.plume_pipeline.status_code import prepare_terminate_message
from plume_utils.trainer.train import Trainer
from plume_utils.util import positive_nonzero_int
from plume_utils.util.error import InvalidContainerError


HISTORY_FILE = 'history.json'


class TrainCmd(PipelineCmd):

    def build_subparser(self, subparsers):
        subparser = subparsers.add_parser(
            'train',
            description='Train a network on the generated corpus.',
            help='Split the corpus into train and test sequences, cut the '
            'training sequences into clips and fit the configured variant. '
            'Writes periodic checkpoints, the final model checkpoint and the '
            'training log.',
        )
        subparser.add_argument(
            '--iterations',
            type=positive_nonzero_int,
            help='Number of optimizer steps.',
        )
        return subparser

    def config_overrides(self, args):
        if args.iterations is not None:
            return ['train.iterations={0}'.format(args.iterations)]
        return []

    def run_command(self):
        cfg = self.run_config
        clip_cfg = cfg.clip_config()
        model_cfg = cfg.model_config()
        train_cfg = cfg.train_config()
        out_dir = self.out_path(TRAIN_DIR)

        train_seqs, test_seqs = self.train_split(self.load_corpus())
        clips = []
        for sequence in train_seqs:
            clips.extend(make_clips(
                sequence,
                clip_cfg.input_frames,
                clip_cfg.horizon,
                clip_cfg.stride,
            ))
        self.log.info(
            "Training %s on %d clips from %d sequences",
            model_cfg.variant,
            len(clips),
            len(train_seqs),
        )

        params = init_params(model_cfg, cfg.seed)
        trained, history = Trainer(
            model_cfg,
            train_cfg,
            cfg.loss_config(),
            out_dir,
        ).train(params, clips)

        path = self.out_path(TRAIN_DIR, MODEL_CHECKPOINT)
        save_checkpoint(path, trained, model_cfg, {
            'iteration': train_cfg.iterations,
            'seed': cfg.seed,
            'train_ids': [s.sequence_id for s in train_seqs],
            'test_ids': [s.sequence_id for s in test_seqs],
        })
        loaded, _, _ = load_checkpoint(path)
        if loaded.checksum() != history.final_checksum:
            raise InvalidContainerError("Checkpoint {0} does not read back".format(path))
        with open(self.out_path(TRAIN_DIR, HISTORY_FILE), 'w') as out:
            json.dump({
                'losses': history.losses,
                'grad_norms': history.grad_norms,
                'final_checksum': history.final_checksum,
            }, out, sort_keys=True, indent=2)

        final = history.losses[-1]
        msg = prepare_terminate_message(
            "Trained {variant} for {n} iterations, final total loss {loss:.6f}, "
            "checkpoint {path}".format(
                variant=model_cfg.variant,
                n=len(history.losses),
                loss=final['total'],
                path=path,
            ),
            raw={
                'checkpoint': path,
                'iterations': len(history.losses),
                'final_loss': final,
                'checksum': history.final_checksum,
            },
        )
        return status_code.OK, msg
