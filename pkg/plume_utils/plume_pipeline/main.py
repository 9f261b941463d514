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
"""
Plume pipeline module.
Each stage of the pipeline is a separate subcommand of plume-pipeline.
"""
import argparse
import json
import logging
import os
import sys
from configparser import Error as ConfigParserError
from logging.config import fileConfig

from plume_utils import __version__
from plume_utils.plume_pipeline.commands.evaluate import EvaluateCmd
from plume_utils.plume_pipeline.commands.generate import GenerateCmd
from plume_utils.plume_pipeline.commands.predict import PredictCmd
from plume_utils.plume_pipeline.commands.train import TrainCmd
from plume_utils.plume_pipeline.status_code import code_for_exception
from plume_utils.plume_pipeline.status_code import prepare_terminate_message
from plume_utils.plume_pipeline.status_code import terminate
from plume_utils.util import positive_int
from plume_utils.util import str_to_bool
from plume_utils.util.config import RunConfiguration
from plume_utils.util.config import VARIANTS
from plume_utils.util.error import PlumeToolError

_log = logging.getLogger()

LOG_LEVEL_ENV_VAR = 'PLUME_UTILS_LOG_LEVEL'


def parse_args(argv=None):
    """Parse the command line arguments."""
    parser = argparse.ArgumentParser(
        description='Generate plume corpora, train, predict and evaluate '
        'spatiotemporal plume forecasters.',
    )
    parser.add_argument(
        '--version',
        action='version',
        version="%(prog)s {0}".format(__version__),
    )
    parser.add_argument(
        '--config',
        help='YAML run configuration. Default try: '
        '$PLUME_UTILS_CONFIG, $HOME/.plume_utils.yaml',
    )
    parser.add_argument(
        '--seed',
        type=positive_int,
        help='Seed of the city layout, data split, initialisation and batching.',
    )
    parser.add_argument(
        '--variant',
        choices=VARIANTS,
        help='Network variant.',
    )
    parser.add_argument(
        '--with-wind',
        dest='with_wind',
        type=str_to_bool,
        help='Feed the wind direction and speed channels to the network.',
    )
    parser.add_argument(
        '--out',
        help='Run directory holding the corpus, checkpoints, predictions '
        'and reports.',
    )
    parser.add_argument(
        '--set',
        dest='overrides',
        action='append',
        default=[],
        metavar='SECTION.KEY=VALUE',
        help='Override one configuration value. May be repeated.',
    )
    parser.add_argument(
        '--logconf',
        type=str,
        help='Path to logging configuration file. Default: log to console.',
    )
    parser.add_argument(
        '-v',
        '--verbose',
        action='count',
        default=0,
        help='Log at INFO, or DEBUG when repeated, and print details on exit.',
    )
    parser.add_argument(
        '-j',
        '--json',
        help='Print output in json format. Default: %(default)s',
        action="store_true",
        default=False,
    )

    subparsers = parser.add_subparsers(dest='subcommand')
    subparsers.required = True
    GenerateCmd().add_subparser(subparsers)
    TrainCmd().add_subparser(subparsers)
    PredictCmd().add_subparser(subparsers)
    EvaluateCmd().add_subparser(subparsers)

    return parser.parse_args(argv)


def build_overrides(args):
    """Configuration overrides in increasing precedence."""
    overrides = []
    if args.seed is not None:
        overrides.append('seed={0}'.format(args.seed))
    if args.variant is not None:
        overrides.append('model.variant={0}'.format(args.variant))
    if args.with_wind is not None:
        overrides.append('model.with_wind={0}'.format(str(args.with_wind).lower()))
    if args.out is not None:
        overrides.append('out={0}'.format(json.dumps(args.out)))
    overrides.extend(args.command_overrides(args))
    overrides.extend(args.overrides)
    return overrides


def log_level(verbose):
    if verbose >= 2:
        return logging.DEBUG
    if verbose == 1:
        return logging.INFO
    return os.environ.get(LOG_LEVEL_ENV_VAR, 'WARNING').upper()


def exception_logger(exc_type, exc_value, exc_traceback):
    """Log unhandled exceptions"""
    if not issubclass(exc_type, KeyboardInterrupt):  # do not log Ctrl-C
        _log.critical(
            "Uncaught exception:",
            exc_info=(exc_type, exc_value, exc_traceback)
        )
    sys.__excepthook__(exc_type, exc_value, exc_traceback)


def configure_logging(log_conf=None, verbose=0, log_unhandled_exceptions=True):
    if log_conf:
        try:
            fileConfig(log_conf, disable_existing_loggers=False)
        except (ConfigParserError, KeyError):
            logging.basicConfig(level=log_level(verbose))
            _log.error(
                'Failed to load {logconf} file.'
                .format(logconf=log_conf),
            )
    else:
        logging.basicConfig(level=log_level(verbose))
    if log_unhandled_exceptions:
        sys.excepthook = exception_logger


def run(argv=None):
    """Verify command-line arguments and run commands"""
    args = parse_args(argv)
    configure_logging(args.logconf, args.verbose)

    try:
        run_config = RunConfiguration(args.config, build_overrides(args))
        err_code, msg = args.command(run_config, args)
    except PlumeToolError as e:
        terminate(
            code_for_exception(e),
            prepare_terminate_message("{0} {1}".format(type(e).__name__, e)),
            args.json,
        )

    terminate(err_code, msg, args.json)
