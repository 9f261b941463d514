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
import hashlib
import json
import os
import subprocess


CONFIG_DIR = 'tests/acceptance/config'


def load_json(bytes_or_str):
    if isinstance(bytes_or_str, bytes):
        data = bytes_or_str.decode()
    else:
        data = bytes_or_str
    return json.loads(data)


def config_path(name):
    return os.path.join(CONFIG_DIR, name + '.yaml')


def call_cmd(cmd):
    """Run cmd and return (returncode, stdout, stderr) as text."""
    p = subprocess.Popen(
        cmd,
        stdin=subprocess.PIPE,
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
    )
    out, err = p.communicate()
    return p.returncode, out.decode(), err.decode()


def call_pipeline(config, out_dir, args, seed=None):
    """Run plume-pipeline in json mode.

    :returns: (exit code, the parsed status message)
    """
    cmd = ['plume-pipeline', '--json', '--config', config_path(config), '--out', out_dir]
    if seed is not None:
        cmd += ['--seed', str(seed)]
    returncode, out, err = call_cmd(cmd + list(args))
    lines = [line for line in out.splitlines() if line.strip()]
    if not lines:
        raise AssertionError("plume-pipeline printed nothing: {0}".format(err))
    return returncode, load_json(lines[-1])


def digest_tree(directory):
    """sha256 of every file below directory, keyed by relative path."""
    digests = {}
    for root, _, files in os.walk(directory):
        for name in files:
            path = os.path.join(root, name)
            with open(path, 'rb') as f:
                digests[os.path.relpath(path, directory)] = hashlib.sha256(f.read()).hexdigest()
    return digests


def read_train_log(out_dir):
    with open(os.path.join(out_dir, 'train', 'train_log.jsonl')) as f:
        return [json.loads(line) for line in f if line.strip()]
