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
import argparse
import logging

import yaml

from plume_utils import __version__
from plume_utils.util.config import RunConfiguration


logging.getLogger().addHandler(logging.NullHandler())


def parse_args(argv=None):
    """Parse the arguments."""
    parser = argparse.ArgumentParser(
        description='Show the resolved run configuration.'
    )
    parser.add_argument(
        '-v',
        '--version',
        action='version',
        version="%(prog)s {0}".format(__version__),
    )
    parser.add_argument(
        '--config',
        type=str,
        help='YAML run configuration. Default try: '
        '$PLUME_UTILS_CONFIG, $HOME/.plume_utils.yaml',
    )
    parser.add_argument(
        '--set',
        dest='overrides',
        action='append',
        default=[],
        metavar='SECTION.KEY=VALUE',
        help='Override one configuration value. May be repeated.',
    )
    return parser.parse_args(argv)


def run(argv=None):
    args = parse_args(argv)
    run_config = RunConfiguration(args.config, args.overrides)
    print("config-file: {0}".format(run_config.config_path or '<defaults>'))
    for key, origin in sorted(run_config.sources.items()):
        print("\t{key}: set from {origin}".format(key=key, origin=origin))
    print(yaml.safe_dump(run_config.as_dict(), default_flow_style=False), end='')
